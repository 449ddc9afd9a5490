//! Acceptance suite. Prints one line per criterion and exits non-zero if
//! any criterion fails. Set UPDATE_GOLDEN=1 to rewrite the golden files.

// negated comparisons make NaN fail a check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::{FRAC_PI_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use inflated_beam::deflection::solve_profile;
use inflated_beam::inverse::max_standing_deflection;
use inflated_beam::{
    buckling_report, estimate_load, fit_modulus, longitudinal_stress, operating_window,
    straight_line_profile, tip_deflection, tip_growth_rate, tip_pose, wrinkle_angle_of_load,
    wrinkle_load_of_angle, BeamError, BeamSpec, ContactScene, DisplacementObservation, LoadCase,
    SolverOptions, StressStrainSeries, StressWindow, TipPose, WrinkleAngle,
};
use nalgebra::{Point2, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

const ENDPOINT_REL_TOL: f64 = 0.10;
const ENDPOINT_RUNTIME: Duration = Duration::from_secs(1);
const Q_MAX_DEFLECTION: f64 = 0.088;
const L_MAX_DEFLECTION: f64 = 0.119;
const P_MIN_DEFLECTION: f64 = 0.0747;
const CRITICAL_OFFSET: f64 = 1e-6;
const ORACLE_CASES: usize = 100;
const ORACLE_REL_TOL: f64 = 1e-6;
const ROUND_TRIP_CASES: usize = 1000;
const WRINKLE_ROUND_TRIP_TOL: f64 = 1e-8;
const MONOTONE_GRID: usize = 10_000;
const CRITICAL_XI_TOL: f64 = 1e-12;
const INVERSE_CASES: usize = 100;
const INVERSE_REL_TOL: f64 = 1e-6;
const POSE_FD_TOL: f64 = 1e-3;
const TRANSFORM_TOL: f64 = 1e-12;
const MODULUS_NOISE_TOL: f64 = 0.03;
const SIGMA_MIN_EXPECTED: f64 = 1.292e6;
const SIGMA_MIN_HAND_TOL: f64 = 1e3;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ldpe() -> BeamSpec {
    BeamSpec::new(0.0127, 5.08e-5, 0.357, 10_340.0, 227e6).unwrap()
}

fn within(value: f64, target: f64, rel: f64) -> bool {
    (value - target).abs() <= rel * target
}

fn variable_load_endpoint() -> Check {
    let start = Instant::now();
    let beam = ldpe();
    let q = beam.critical_load() * (1.0 - CRITICAL_OFFSET);
    let y = tip_deflection(&beam, &LoadCase::new(&beam, q).unwrap()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(within(y, Q_MAX_DEFLECTION, ENDPOINT_REL_TOL), "y = {y:.6} m, expected {Q_MAX_DEFLECTION} m ±10%");
    ensure!(elapsed < ENDPOINT_RUNTIME, "took {elapsed:?}");
    Ok(format!("Q = {q:.6} N, y = {y:.5} m (target {Q_MAX_DEFLECTION}), {elapsed:.2?}"))
}

fn variable_length_endpoint() -> Check {
    let q = 0.155;
    let beam = ldpe();
    let l_max = buckling_report(&beam, &LoadCase::new(&beam, q).unwrap()).l_max_m;
    ensure!((l_max - 0.4292).abs() < 1e-4, "L_max = {l_max}");
    let long = beam.with_length(l_max * (1.0 - CRITICAL_OFFSET)).unwrap();
    let y = tip_deflection(&long, &LoadCase::new(&long, q).unwrap()).map_err(|e| e.to_string())?;
    ensure!(within(y, L_MAX_DEFLECTION, ENDPOINT_REL_TOL), "y = {y:.6} m, expected {L_MAX_DEFLECTION} m ±10%");
    Ok(format!("L_max = {l_max:.5} m, y = {y:.5} m (target {L_MAX_DEFLECTION})"))
}

fn variable_pressure_endpoint() -> Check {
    let q = 0.155;
    let beam = ldpe();
    let p_min = buckling_report(&beam, &LoadCase::new(&beam, q).unwrap()).p_min_pa;
    ensure!((p_min - 8600.0).abs() < 5.0, "P_min = {p_min}");
    let soft = beam.with_pressure(p_min * (1.0 + CRITICAL_OFFSET)).unwrap();
    let y = tip_deflection(&soft, &LoadCase::new(&soft, q).unwrap()).map_err(|e| e.to_string())?;
    ensure!(within(y, P_MIN_DEFLECTION, ENDPOINT_REL_TOL), "y = {y:.6} m, expected {P_MIN_DEFLECTION} m ±10%");
    Ok(format!("P_min = {p_min:.1} Pa, y = {y:.5} m (target {P_MIN_DEFLECTION})"))
}

fn analytic_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut worst_tip, mut worst_profile) = (0.0f64, 0.0f64);
    for _ in 0..ORACLE_CASES {
        let r = rng.random_range(0.005..0.05);
        let beam = BeamSpec::new(
            r,
            r * rng.random_range(0.001..0.01),
            rng.random_range(0.1..1.5),
            rng.random_range(2e3..5e4),
            rng.random_range(5e7..2e9),
        )
        .unwrap();
        // unwrinkled everywhere: ξ(L) ≤ π/2
        let q = FRAC_PI_2 * beam.pressure_moment() / beam.length_m() * rng.random_range(0.01..=1.0);
        let (l, e_i) = (beam.length_m(), beam.effective_modulus_pa() * PI * r.powi(3) * beam.thickness_m());
        let profile = solve_profile(&beam, &LoadCase::new(&beam, q).unwrap(), 101).map_err(|e| e.to_string())?;
        let tip_exact = q * l.powi(3) / (3.0 * e_i);
        let rel = (profile.tip_deflection_m - tip_exact).abs() / tip_exact;
        worst_tip = worst_tip.max(rel);
        ensure!(rel <= ORACLE_REL_TOL, "tip relative error {rel:e}");
        for s in &profile.samples {
            let x = s.x_m;
            let exact = q / (6.0 * e_i) * (x.powi(3) - 3.0 * l * l * x + 2.0 * l.powi(3));
            let err = (s.y_m - exact).abs() / l;
            worst_profile = worst_profile.max(err);
            ensure!(err <= ORACLE_REL_TOL, "profile error {err:e}·L at x = {x}");
        }
    }
    Ok(format!("{ORACLE_CASES} cases, worst tip rel {worst_tip:.2e}, worst profile {worst_profile:.2e}·L"))
}

fn wrinkle_relation() -> Check {
    ensure!(wrinkle_load_of_angle(WrinkleAngle::ZERO) == FRAC_PI_2, "g(0) != π/2");
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    for _ in 0..ROUND_TRIP_CASES {
        let xi = rng.random_range(FRAC_PI_2..PI - 1e-6);
        let theta = wrinkle_angle_of_load(xi).map_err(|e| e.to_string())?;
        worst = worst.max((wrinkle_load_of_angle(theta) - xi).abs());
    }
    ensure!(worst <= WRINKLE_ROUND_TRIP_TOL, "round trip error {worst:e}");
    let mut last = FRAC_PI_2;
    for i in 1..MONOTONE_GRID {
        let g = wrinkle_load_of_angle(WrinkleAngle::new(PI * i as f64 / MONOTONE_GRID as f64).unwrap());
        ensure!(g > last && g < PI, "g not increasing at grid point {i}");
        last = g;
    }
    let near_pi = wrinkle_angle_of_load(PI - 1e-12).unwrap().radians();
    ensure!(PI - near_pi < 1e-5, "f(π − 1e-12) = {near_pi}");
    ensure!(wrinkle_angle_of_load(FRAC_PI_2).unwrap() == WrinkleAngle::ZERO, "f(π/2) != 0");
    let just_above = wrinkle_angle_of_load(FRAC_PI_2 + 1e-10).unwrap().radians();
    ensure!(just_above < 1e-3, "f(π/2 + 1e-10) = {just_above}");
    let g_small = wrinkle_load_of_angle(WrinkleAngle::new(1e-6).unwrap());
    ensure!((g_small - FRAC_PI_2).abs() < 1e-12, "g(1e-6) = {g_small}");
    Ok(format!("round trip worst {worst:.2e}, π − f(π−1e-12) = {:.2e}", PI - near_pi))
}

fn critical_consistency() -> Check {
    let beam = ldpe();
    let mut worst = 0.0f64;
    for q in [0.01, 0.05, 0.155, 0.3] {
        let r = buckling_report(&beam, &LoadCase::new(&beam, q).unwrap());
        let at_q_max = buckling_report(&beam, &LoadCase::new(&beam, r.q_max_n).unwrap()).xi_root;
        let long = beam.with_length(r.l_max_m).unwrap();
        let at_l_max = LoadCase::new(&long, q).unwrap().xi_root();
        let soft = beam.with_pressure(r.p_min_pa).unwrap();
        let at_p_min = LoadCase::new(&soft, q).unwrap().xi_root();
        for xi in [at_q_max, at_l_max, at_p_min] {
            worst = worst.max((xi - PI).abs());
        }
    }
    ensure!(worst <= CRITICAL_XI_TOL, "|ξ(L) − π| = {worst:e}");
    Ok(format!("max |ξ(L) − π| = {worst:.1e}"))
}

fn inverse_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let mut worst = 0.0f64;
    for _ in 0..INVERSE_CASES {
        let r = rng.random_range(0.008..0.03);
        let beam = BeamSpec::new(
            r,
            r * rng.random_range(0.002..0.008),
            rng.random_range(0.2..0.8),
            rng.random_range(5e3..3e4),
            rng.random_range(1e8..1e9),
        )
        .unwrap();
        let q = beam.critical_load() * rng.random_range(0.02..0.999);
        let y = tip_deflection(&beam, &LoadCase::new(&beam, q).unwrap()).map_err(|e| e.to_string())?;
        let est = estimate_load(&DisplacementObservation::new(beam, y).unwrap()).map_err(|e| e.to_string())?;
        ensure!(!est.buckled, "feasible case classified buckled");
        worst = worst.max((est.load_n - q).abs() / q);
    }
    ensure!(worst <= INVERSE_REL_TOL, "load relative error {worst:e}");

    let beam = ldpe();
    let y_max = max_standing_deflection(&beam, &SolverOptions::default()).map_err(|e| e.to_string())?;
    for d in [y_max * 1.001, 0.15, 0.3] {
        let est = estimate_load(&DisplacementObservation::new(beam, d).unwrap()).map_err(|e| e.to_string())?;
        ensure!(est.buckled, "d = {d} not classified buckled");
        let line = straight_line_profile(&beam, d, est.profile.samples.len()).unwrap();
        ensure!(est.profile == line, "buckled profile is not the straight chord");
        for s in &est.profile.samples {
            let expected = d * (1.0 - s.x_m / beam.length_m());
            ensure!((s.y_m - expected).abs() <= 4.0 * f64::EPSILON * d, "chord off at x = {}", s.x_m);
        }
    }
    Ok(format!("{INVERSE_CASES} cases, worst rel {worst:.2e}; buckled above y_max = {y_max:.5} m"))
}

fn pose_consistency() -> Check {
    let beam = ldpe();
    let mut worst_fd = 0.0f64;
    for q in [0.03, 0.1, 0.155, 0.186] {
        let load = LoadCase::new(&beam, q).unwrap();
        let profile = solve_profile(&beam, &load, 201).map_err(|e| e.to_string())?;
        let (a, b) = (profile.samples[0], profile.samples[1]);
        let fd = ((b.y_m - a.y_m) / (b.x_m - a.x_m)).atan();
        let pose = tip_pose(&beam, &load, Vector2::new(beam.length_m(), profile.tip_deflection_m))
            .map_err(|e| e.to_string())?;
        worst_fd = worst_fd.max((pose.rotation_rad - fd).abs());
    }
    ensure!(worst_fd <= POSE_FD_TOL, "rotation vs finite difference {worst_fd:e} rad");

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_rt = 0.0f64;
    for _ in 0..1000 {
        let pose = TipPose::new(
            Vector2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            rng.random_range(-PI..PI),
        );
        let p = Point2::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        worst_rt = worst_rt.max((pose.to_tip(&pose.to_base(&p)) - p).norm());
    }
    ensure!(worst_rt <= TRANSFORM_TOL, "transform round trip {worst_rt:e}");

    // unit tip path along x; the surface tangent sets the angle
    let rate = |t_hat: Vector2<f64>| {
        tip_growth_rate(&ContactScene::new(Vector2::new(1.0, 0.0), Vector2::zeros(), t_hat, 1.0).unwrap())
    };
    ensure!(rate(Vector2::new(1.0, 0.0)) == Ok(1.0), "parallel case");
    ensure!(rate(Vector2::new(0.5, 0.75f64.sqrt())) == Ok(2.0), "60° case");
    ensure!(rate(Vector2::new(0.0, 1.0)) == Err(BeamError::GrazingContact), "perpendicular case");
    Ok(format!("FD {worst_fd:.1e} rad, transform {worst_rt:.1e}, growth rates 1/2/error"))
}

fn modulus_fit() -> Check {
    let e = 227e6;
    let strains: Vec<f64> = (0..50).map(|i| 0.0004 * i as f64).collect();
    let exact = StressStrainSeries::new(strains.iter().map(|&s| (s, e * s)).collect()).unwrap();
    let fit = fit_modulus(&exact, StressWindow::new(0.0, 1e8).unwrap()).map_err(|x| x.to_string())?;
    ensure!((fit.modulus_pa - e).abs() <= 1e-9 * e, "exact fit gave {}", fit.modulus_pa);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let noise = Normal::new(0.0, 0.01 * e * strains[49]).unwrap();
    let noisy = StressStrainSeries::new(
        strains.iter().map(|&s| (s, e * s + noise.sample(&mut rng))).collect(),
    )
    .unwrap();
    let fit = fit_modulus(&noisy, StressWindow::new(-1e9, 1e9).unwrap()).map_err(|x| x.to_string())?;
    let err = (fit.modulus_pa - e).abs() / e;
    ensure!(err <= MODULUS_NOISE_TOL, "noisy fit error {err:.3}");

    let beam = ldpe();
    let window = operating_window(&beam, &LoadCase::new(&beam, 0.155).unwrap()).map_err(|x| x.to_string())?;
    let hand = beam.pressure_pa() * beam.radius_m() / (2.0 * beam.thickness_m());
    ensure!(window.sigma_min_pa == longitudinal_stress(&beam), "window lower bound");
    ensure!((window.sigma_min_pa - hand).abs() <= 1e-9 * hand, "σ_min = {}", window.sigma_min_pa);
    ensure!((window.sigma_min_pa - SIGMA_MIN_EXPECTED).abs() <= SIGMA_MIN_HAND_TOL, "σ_min = {}", window.sigma_min_pa);
    Ok(format!("noisy error {:.2}%, σ_min = {:.4e} Pa", err * 100.0, window.sigma_min_pa))
}

const LDPE_FLAGS: &[&str] = &[
    "--radius", "0.0127", "--thickness", "5.08e-5", "--length", "0.357", "--pressure", "10340",
    "--modulus", "227e6",
];

fn golden_cases() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("deflect", vec!["deflect", "--load", "0.155"]),
        ("buckling", vec!["buckling", "--load", "0.155"]),
        ("sweep", vec!["sweep", "--variable", "load", "--from", "0", "--to", "0.186", "--points", "11"]),
        ("inverse", vec!["inverse", "--displacement", "0.05"]),
    ]
}

fn ibeam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ibeam"))
        .args(args)
        .output()
        .expect("run ibeam")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Numbers in the CSV row must be spelled exactly as in the JSON results.
fn csv_matches_json(csv: &str, json: &str) -> Result<(), String> {
    let value: serde_json::Value = serde_json::from_str(json).map_err(|e| e.to_string())?;
    let results = &value["results"];
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    let rows: Vec<serde_json::Value> = match results.get("rows") {
        Some(serde_json::Value::Array(rows)) => rows.clone(),
        _ => vec![results.clone()],
    };
    for (line, row) in lines.zip(&rows) {
        for (key, text) in header.iter().zip(line.split(',')) {
            let expected = match &row[*key] {
                serde_json::Value::Null => String::new(),
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            ensure!(expected == text, "{key}: csv `{text}` vs json `{expected}`");
        }
    }
    Ok(())
}

fn cli_golden_files() -> Check {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let dir = golden_dir();
    let mut compared = 0;
    for (name, args) in golden_cases() {
        let mut texts = Vec::new();
        for format in ["json", "csv"] {
            let mut full: Vec<&str> = args.clone();
            full.extend_from_slice(LDPE_FLAGS);
            full.extend_from_slice(&["--format", format]);
            let first = ibeam(&full);
            let second = ibeam(&full);
            ensure!(first.status.code() == Some(0), "{name} {format}: exit {:?}", first.status.code());
            ensure!(first.stdout == second.stdout, "{name} {format}: output differs between runs");
            let path = dir.join(format!("{name}.{format}"));
            if update {
                std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
                std::fs::write(&path, &first.stdout).map_err(|e| e.to_string())?;
            }
            let golden = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            ensure!(golden == first.stdout, "{name} {format}: differs from {}", path.display());
            texts.push(String::from_utf8(first.stdout).map_err(|e| e.to_string())?);
            compared += 1;
        }
        csv_matches_json(&texts[1], &texts[0]).map_err(|e| format!("{name}: {e}"))?;
    }

    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let data = tmp.path().join("ss.csv");
    std::fs::write(&data, "strain,stress_pa\n0,0\n0.001,227000\n0.002,454000\n").map_err(|e| e.to_string())?;
    let data = data.to_str().unwrap();
    let with_beam = |extra: &[&'static str]| {
        let mut v: Vec<&str> = extra.to_vec();
        v.extend_from_slice(LDPE_FLAGS);
        v
    };
    let expectations: Vec<(Vec<&str>, i32)> = vec![
        (with_beam(&["deflect", "--load", "0"]), 0),
        (with_beam(&["buckling", "--load", "0.5"]), 0),
        (with_beam(&["deflect", "--load", "0.5"]), 3),
        (with_beam(&["profile", "--load", "0.2"]), 3),
        (with_beam(&["deflect"]), 2),
        (with_beam(&["deflect", "--load", "-1"]), 2),
        (with_beam(&["deflect", "--load", "x"]), 2),
        (with_beam(&["deflect", "--load", "0.1", "--format", "xml"]), 2),
        (vec!["deflect", "--load", "0.1", "--radius", "0.01"], 2),
        (vec!["fit-modulus", "--data", data, "--sigma-min", "5e5", "--sigma-max", "1e5"], 2),
        (vec!["fit-modulus", "--data", data, "--sigma-min", "1e9", "--sigma-max", "2e9"], 2),
        (vec!["fit-modulus", "--data", data, "--sigma-min", "0", "--sigma-max", "1e6"], 0),
    ];
    for (args, code) in &expectations {
        let out = ibeam(args);
        ensure!(out.status.code() == Some(*code), "{args:?}: exit {:?}, expected {code}", out.status.code());
    }
    let collapse = ibeam(&with_beam(&["deflect", "--load", "0.5"]));
    let msg = String::from_utf8_lossy(&collapse.stderr);
    ensure!(msg.contains("0.1864"), "collapse message does not name Q_max: {msg}");
    Ok(format!(
        "{compared} golden files stable{}, {} exit-code cases",
        if update { " (updated)" } else { "" },
        expectations.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("variable-load endpoint", variable_load_endpoint),
        ("variable-length endpoint", variable_length_endpoint),
        ("variable-pressure endpoint", variable_pressure_endpoint),
        ("analytic oracle", analytic_oracle),
        ("wrinkle relation", wrinkle_relation),
        ("critical-value consistency", critical_consistency),
        ("inverse round trip", inverse_round_trip),
        ("pose consistency", pose_consistency),
        ("modulus fit", modulus_fit),
        ("CLI golden files and exit codes", cli_golden_files),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] {:>2}. {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
