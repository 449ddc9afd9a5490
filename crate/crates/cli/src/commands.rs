use std::path::{Path, PathBuf};

use inflated_beam::deflection::{tip_state, wrinkle_onset, DEFAULT_SAMPLES};
use inflated_beam::{
    buckling_report, fit_modulus, longitudinal_stress, operating_window,
    solve_profile, sweep, BeamSpec, DeflectionProfile, DisplacementObservation, LoadCase,
    SolverOptions, StressStrainSeries, StressWindow, SweepVariable,
};

use crate::args::{
    Cli, Command, CommonArgs, FitArgs, Format, InverseArgs, LoadArgs, ProfileArgs, SweepArgs, Units,
};
use crate::config::{to_si, ConfigFile, Kind};
use crate::error::CliError;
use crate::output::{field, Record, Report};

const DEFAULT_SWEEP_POINTS: usize = 50;

/// Flags merged with the config file, with units resolved.
struct Context<'a> {
    common: &'a CommonArgs,
    cfg: ConfigFile,
    units: Units,
}

impl Context<'_> {
    fn number(&self, key: &str, flag: Option<f64>, kind: Kind) -> Result<Option<f64>, CliError> {
        Ok(self.cfg.pick(key, flag)?.map(|v| to_si(self.units, kind, v)))
    }

    fn required(&self, key: &str, flag: Option<f64>, kind: Kind) -> Result<f64, CliError> {
        self.number(key, flag, kind)?
            .ok_or_else(|| CliError::Validation(format!("missing required --{key}")))
    }

    fn beam(&self) -> Result<BeamSpec, CliError> {
        let c = self.common;
        let beam = BeamSpec::new(
            self.required("radius", c.radius, Kind::Length)?,
            self.required("thickness", c.thickness, Kind::Length)?,
            self.required("length", c.length, Kind::Length)?,
            self.required("pressure", c.pressure, Kind::Stress)?,
            self.required("modulus", c.modulus, Kind::Stress)?,
        )?;
        match self.number("modulus-factor", c.modulus_factor, Kind::Plain)? {
            Some(k) => Ok(beam.with_modulus_factor(k)?),
            None => Ok(beam),
        }
    }

    fn samples(&self, flag: Option<usize>) -> Result<usize, CliError> {
        Ok(self.cfg.pick("samples", flag)?.unwrap_or(DEFAULT_SAMPLES))
    }
}

/// Runs the parsed command and returns the text to emit.
pub fn run(cli: &Cli) -> Result<(String, Option<PathBuf>), CliError> {
    let cfg = match &cli.common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let units = cfg.pick_enum("units", cli.common.units)?.unwrap_or(Units::Si);
    let format = cfg.pick_enum("format", cli.common.format)?.unwrap_or(Format::Json);
    let out: Option<PathBuf> = cfg.pick("out", cli.common.out.clone())?;
    let ctx = Context {
        common: &cli.common,
        cfg,
        units,
    };

    let report = match &cli.command {
        Command::Deflect(a) => deflect(&ctx, a)?,
        Command::Profile(a) => profile(&ctx, a)?,
        Command::Buckling(a) => buckling(&ctx, a)?,
        Command::Sweep(a) => run_sweep(&ctx, a)?,
        Command::Inverse(a) => inverse(&ctx, a, format)?,
        Command::FitModulus(a) => fit(&ctx, a)?,
    };
    Ok((report.render(format)?, out))
}

fn beam_inputs(beam: &BeamSpec) -> Record {
    vec![
        field("radius_m", beam.radius_m()),
        field("thickness_m", beam.thickness_m()),
        field("length_m", beam.length_m()),
        field("pressure_pa", beam.pressure_pa()),
        field("modulus_pa", beam.modulus_pa()),
        field("modulus_factor", beam.modulus_factor()),
    ]
}

fn meta() -> Record {
    let opts = SolverOptions::default();
    vec![
        field("tool", "ibeam"),
        field("version", env!("CARGO_PKG_VERSION")),
        field("rtol", opts.tolerances.rtol),
        field("atol", opts.tolerances.atol),
        field("curvature_law", "first-order-system"),
        field("significant_digits", crate::output::SIGNIFICANT_DIGITS),
    ]
}

fn report(command: &'static str, inputs: Record, results: Record, rows: Option<Vec<Record>>) -> Report {
    Report {
        command,
        inputs,
        results,
        rows,
        meta: meta(),
    }
}

fn load_case(ctx: &Context, beam: &BeamSpec, flag: Option<f64>) -> Result<LoadCase, CliError> {
    Ok(LoadCase::new(beam, ctx.required("load", flag, Kind::Plain)?)?)
}

fn deflect(ctx: &Context, a: &LoadArgs) -> Result<Report, CliError> {
    let beam = ctx.beam()?;
    let load = load_case(ctx, &beam, a.load)?;
    let (y, slope) = tip_state(&beam, &load, &SolverOptions::default())?;
    let buckling = buckling_report(&beam, &load);
    let mut inputs = beam_inputs(&beam);
    inputs.push(field("load_n", load.load_n()));
    let results = vec![
        field("tip_deflection_m", y),
        field("tip_slope_rad", slope.atan()),
        field("wrinkle_onset_x_m", wrinkle_onset(&beam, &load)),
        field("theta0_root_rad", buckling.theta0_root_rad),
        field("xi_root", load.xi_root()),
        field("collapsed", false),
    ];
    Ok(report("deflect", inputs, results, None))
}

fn profile_report(beam: &BeamSpec, load_n: f64, profile: &DeflectionProfile) -> Report {
    let mut inputs = beam_inputs(beam);
    inputs.push(field("load_n", load_n));
    inputs.push(field("samples", profile.samples.len()));
    let results = vec![
        field("tip_deflection_m", profile.tip_deflection_m),
        field("tip_slope_rad", profile.tip_slope_rad),
        field("wrinkle_onset_x_m", profile.wrinkle_onset_x_m),
        field("collapsed", profile.collapsed),
    ];
    let rows = profile
        .samples
        .iter()
        .map(|s| {
            vec![
                field("x_from_tip_m", s.x_m),
                field("x_from_base_m", profile.length_m - s.x_m),
                field("y_m", s.y_m),
                field("slope", s.slope),
            ]
        })
        .collect();
    report("profile", inputs, results, Some(rows))
}

fn profile(ctx: &Context, a: &ProfileArgs) -> Result<Report, CliError> {
    let beam = ctx.beam()?;
    let load = load_case(ctx, &beam, a.load)?;
    let p = solve_profile(&beam, &load, ctx.samples(a.samples)?)?;
    Ok(profile_report(&beam, load.load_n(), &p))
}

fn buckling(ctx: &Context, a: &LoadArgs) -> Result<Report, CliError> {
    let beam = ctx.beam()?;
    let load = load_case(ctx, &beam, a.load)?;
    let r = buckling_report(&beam, &load);
    let mut inputs = beam_inputs(&beam);
    inputs.push(field("load_n", load.load_n()));
    let results = vec![
        field("q_max_n", r.q_max_n),
        field("l_max_m", r.l_max_m),
        field("p_min_pa", r.p_min_pa),
        field("xi_root", r.xi_root),
        field("collapsed", r.collapsed),
        field("theta0_root_rad", r.theta0_root_rad),
        field("sigma_max_pa", r.sigma_max_pa),
        field("sigma_longitudinal_pa", longitudinal_stress(&beam)),
    ];
    Ok(report("buckling", inputs, results, None))
}

fn run_sweep(ctx: &Context, a: &SweepArgs) -> Result<Report, CliError> {
    let beam = ctx.beam()?;
    let variable: SweepVariable = ctx
        .cfg
        .pick::<String>("variable", a.variable.clone())?
        .ok_or_else(|| CliError::Validation("missing required --variable".into()))?
        .parse()?;
    let (kind, column) = match variable {
        SweepVariable::Load => (Kind::Plain, "load_n"),
        SweepVariable::Length => (Kind::Length, "length_m"),
        SweepVariable::Pressure => (Kind::Stress, "pressure_pa"),
    };
    let lo = ctx.required("from", a.from, kind)?;
    let hi = ctx.required("to", a.to, kind)?;
    let n = ctx.cfg.pick("points", a.points)?.unwrap_or(DEFAULT_SWEEP_POINTS);
    let load_n = match variable {
        SweepVariable::Load => 0.0,
        _ => ctx.required("load", a.load, Kind::Plain)?,
    };
    let table = sweep(&beam, load_n, variable, lo, hi, n)?;

    let mut inputs = beam_inputs(&beam);
    inputs.push(field("variable", variable.name()));
    inputs.push(field("from", lo));
    inputs.push(field("to", hi));
    inputs.push(field("points", n));
    if variable != SweepVariable::Load {
        inputs.push(field("load_n", load_n));
    }
    let collapsed = table.iter().filter(|r| r.collapsed).count();
    let results = vec![field("collapsed_points", collapsed)];
    let rows = table
        .iter()
        .map(|r| {
            vec![
                field(column, r.value),
                field("tip_deflection_m", r.tip_deflection_m),
                field("collapsed", r.collapsed),
                field("critical_value", r.critical_value),
            ]
        })
        .collect();
    Ok(report("sweep", inputs, results, Some(rows)))
}

fn inverse(ctx: &Context, a: &InverseArgs, format: Format) -> Result<Report, CliError> {
    let beam = ctx.beam()?;
    let d = ctx.required("displacement", a.displacement, Kind::Length)?;
    let samples = ctx.samples(a.samples)?;
    let obs = DisplacementObservation::new(beam, d)?;
    let est = inflated_beam::inverse::estimate_load_with(&obs, samples, &SolverOptions::default())?;
    let profile_out: Option<PathBuf> = ctx.cfg.pick("profile-out", a.profile_out.clone())?;
    if let Some(path) = &profile_out {
        let text = profile_report(&beam, est.load_n, &est.profile).render(format)?;
        write_text(path, &text)?;
    }

    let mut inputs = beam_inputs(&beam);
    inputs.push(field("displacement_m", d));
    let results = vec![
        field("load_n", est.load_n),
        field("buckled", est.buckled),
        field("residual_m", est.residual_m),
        field("iterations", est.iterations),
        field("tip_x_m", beam.length_m()),
        field("tip_y_m", d),
        field("tip_rotation_rad", est.profile.tip_slope().atan()),
    ];
    Ok(report("inverse", inputs, results, None))
}

/// Reads strain, stress_pa columns by header name.
pub fn read_series(path: &Path) -> Result<StressStrainSeries, CliError> {
    let bad = |msg: String| CliError::Validation(format!("{}: {msg}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| bad(format!("missing column `{name}`")))
    };
    let (si, ti) = (column("strain")?, column("stress_pa")?);
    let mut points = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let get = |j: usize| -> Result<f64, CliError> {
            let raw = rec.get(j).unwrap_or("").trim();
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(format!("row {}: invalid number `{raw}`", i + 1)))
        };
        points.push((get(si)?, get(ti)?));
    }
    Ok(StressStrainSeries::new(points)?)
}

fn fit(ctx: &Context, a: &FitArgs) -> Result<Report, CliError> {
    let data: PathBuf = ctx
        .cfg
        .pick("data", a.data.clone())?
        .ok_or_else(|| CliError::Validation("missing required --data".into()))?;
    let series = read_series(&data)?;
    let lo = ctx.number("sigma-min", a.sigma_min, Kind::Stress)?;
    let hi = ctx.number("sigma-max", a.sigma_max, Kind::Stress)?;

    let mut inputs = vec![field("data", data.to_string_lossy().as_ref())];
    let window = match (lo, hi) {
        (Some(lo), Some(hi)) => StressWindow::new(lo, hi)?,
        (None, None) => {
            let beam = ctx.beam()?;
            let load = load_case(ctx, &beam, a.load)?;
            inputs.extend(beam_inputs(&beam));
            inputs.push(field("load_n", load.load_n()));
            operating_window(&beam, &load)?
        }
        _ => {
            return Err(CliError::Validation(
                "--sigma-min and --sigma-max must be given together".into(),
            ))
        }
    };
    let f = fit_modulus(&series, window)?;
    let results = vec![
        field("modulus_pa", f.modulus_pa),
        field("sigma_min_pa", f.window.sigma_min_pa),
        field("sigma_max_pa", f.window.sigma_max_pa),
        field("n_points_used", f.n_points_used),
        field("r_squared", f.r_squared),
    ];
    Ok(report("fit-modulus", inputs, results, None))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}
