use serde_json::{Map, Number, Value};

use crate::args::Format;
use crate::error::CliError;

/// Significant digits kept in every emitted float.
pub const SIGNIFICANT_DIGITS: usize = 9;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Null,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::Num)
    }
}

/// Ordered field list.
pub type Record = Vec<(String, Cell)>;

pub fn field(name: &str, value: impl Into<Cell>) -> (String, Cell) {
    (name.to_string(), value.into())
}

/// Rounds to nine significant digits; negative zero becomes zero.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn non_finite_text(x: f64) -> &'static str {
    if x.is_nan() {
        "nan"
    } else if x > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

fn to_json(cell: &Cell) -> Value {
    match cell {
        Cell::Num(x) => Number::from_f64(round_sig(*x))
            .map_or_else(|| Value::String(non_finite_text(*x).into()), Value::Number),
        Cell::Int(i) => Value::from(*i),
        Cell::Bool(b) => Value::Bool(*b),
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Null => Value::Null,
    }
}

/// CSV text for a cell; numbers use exactly the JSON spelling.
fn to_csv(cell: &Cell) -> String {
    match cell {
        Cell::Num(x) if !x.is_finite() => non_finite_text(*x).to_string(),
        Cell::Null => String::new(),
        Cell::Text(s) => s.clone(),
        other => to_json(other).to_string(),
    }
}

fn record_json(rec: &Record) -> Value {
    Value::Object(rec.iter().map(|(k, v)| (k.clone(), to_json(v))).collect())
}

/// One command run: echoed inputs, scalar results and an optional table.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Record,
    pub results: Record,
    pub rows: Option<Vec<Record>>,
    pub meta: Record,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut results = match record_json(&self.results) {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        if let Some(rows) = &self.rows {
            results.insert(
                "rows".into(),
                Value::Array(rows.iter().map(record_json).collect()),
            );
        }
        let mut top = Map::new();
        top.insert("command".into(), Value::String(self.command.into()));
        top.insert("inputs".into(), record_json(&self.inputs));
        top.insert("results".into(), Value::Object(results));
        top.insert("meta".into(), record_json(&self.meta));
        Value::Object(top)
    }

    /// Table commands emit their rows; the others emit one result row.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let rows: Vec<&Record> = match &self.rows {
            Some(rows) => rows.iter().collect(),
            None => vec![&self.results],
        };
        let header: Vec<&str> = match rows.first() {
            Some(r) => r.iter().map(|(k, _)| k.as_str()).collect(),
            None => Vec::new(),
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&header).map_err(csv_err)?;
        for row in rows {
            w.write_record(row.iter().map(|(_, v)| to_csv(v))).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Runtime(e.to_string()))
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json())
                    .map_err(|e| CliError::Runtime(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
        }
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Runtime(e.to_string())
}
