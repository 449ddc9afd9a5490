//! Deflection of the loaded cantilever.
//!
//! The nondimensional curvature d²η/dξ² is integrated from the root
//! (ξ = ξ(L), η = dη/dξ = 0) towards the tip (ξ = 0). The integration
//! variable is s = ξ(L) − ξ so the solver always steps forward; the state
//! keeps η and dη/dξ, hence dη/ds = −dη/dξ and d(dη/dξ)/ds = −d²η/dξ².
//! Integration restarts at the wrinkle onset ξ = π/2, where the curvature
//! has a kink.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{BeamError, Result};
use crate::model::{nondim_scale, BeamSpec, LoadCase};
use crate::ode::{DenseSolution, Dopri5, Tolerances};
use crate::wrinkle::{
    comer_curvature_factor, system_curvature_factor, wrinkle_angle_of_load, COLLAPSE_GUARD,
};

/// Sample count used when callers do not choose one.
pub const DEFAULT_SAMPLES: usize = 201;

/// Form of the curvature multiplier in the wrinkled region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CurvatureLaw {
    /// 2/(2π − 2θ₀ + sin θ₀). Integrable up to the collapse load; this is
    /// the system that reproduces the published reference deflections.
    #[default]
    FirstOrderSystem,
    /// 2/(2π − 2θ₀ + sin 2θ₀), the dimensional Comer curvature. Its
    /// curvature grows like (π − ξ)^(−3/2) at the root, so tip deflection
    /// diverges as Q → Q_max.
    Comer,
}

impl CurvatureLaw {
    /// d²η/dξ² at the load coordinate `xi`.
    pub fn curvature(self, xi: f64) -> f64 {
        let xi = xi.max(0.0);
        if xi <= FRAC_PI_2 {
            return xi / PI;
        }
        let theta0 = match wrinkle_angle_of_load(xi.min(PI - COLLAPSE_GUARD)) {
            Ok(t) => t,
            Err(_) => return f64::NAN,
        };
        let factor = match self {
            CurvatureLaw::FirstOrderSystem => system_curvature_factor(theta0),
            CurvatureLaw::Comer => comer_curvature_factor(theta0),
        };
        xi * factor
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolverOptions {
    pub tolerances: Tolerances,
    pub law: CurvatureLaw,
}

/// Nondimensional state along the beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NondimState {
    pub xi: f64,
    /// η
    pub eta1: f64,
    /// dη/dξ
    pub eta2: f64,
}

/// Dense solution of the nondimensional boundary problem for one ξ(L).
#[derive(Debug, Clone)]
pub struct NondimSolution {
    xi_root: f64,
    dense: DenseSolution<2>,
}

impl NondimSolution {
    pub fn xi_root(&self) -> f64 {
        self.xi_root
    }

    pub fn state_at(&self, xi: f64) -> NondimState {
        let [eta1, eta2] = self.dense.eval(self.xi_root - xi);
        NondimState { xi, eta1, eta2 }
    }

    /// State at the free end, ξ = 0.
    pub fn tip(&self) -> NondimState {
        let [eta1, eta2] = self.dense.y_end();
        NondimState { xi: 0.0, eta1, eta2 }
    }

    pub fn steps(&self) -> usize {
        self.dense.accepted_steps
    }
}

/// Integrates the nondimensional system from ξ = `xi_root` down to ξ = 0.
pub fn solve_nondim(xi_root: f64, opts: &SolverOptions) -> Result<NondimSolution> {
    if !(xi_root.is_finite() && xi_root >= 0.0) {
        return Err(BeamError::Domain(format!("xi(L) = {xi_root} must be non-negative")));
    }
    if xi_root >= PI {
        return Err(BeamError::Collapse {
            xi_root,
            q_max_n: f64::NAN,
        });
    }
    let law = opts.law;
    let rhs = |s: f64, y: &[f64; 2]| [-y[1], -law.curvature(xi_root - s)];
    let onset = xi_root - FRAC_PI_2;
    let dense = Dopri5::new(opts.tolerances).integrate(rhs, 0.0, [0.0, 0.0], xi_root, &[onset])?;
    Ok(NondimSolution { xi_root, dense })
}

/// One profile station in tip-origin coordinates (x from the tip towards
/// the root, y positive downward).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub x_m: f64,
    pub y_m: f64,
    /// dy/dx; non-positive for a downward tip load.
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeflectionProfile {
    pub length_m: f64,
    /// Ordered by strictly increasing `x_m`, from the tip (0) to the root (L).
    pub samples: Vec<ProfileSample>,
    pub tip_deflection_m: f64,
    /// atan(dy/dx) at the tip.
    pub tip_slope_rad: f64,
    pub wrinkle_onset_x_m: Option<f64>,
    pub collapsed: bool,
}

impl DeflectionProfile {
    pub(crate) fn zero(length_m: f64, n_samples: usize) -> Self {
        let samples = uniform_stations(length_m, n_samples)
            .map(|x_m| ProfileSample {
                x_m,
                y_m: 0.0,
                slope: 0.0,
            })
            .collect();
        Self {
            length_m,
            samples,
            tip_deflection_m: 0.0,
            tip_slope_rad: 0.0,
            wrinkle_onset_x_m: None,
            collapsed: false,
        }
    }

    /// Samples re-expressed with x measured from the root: (x′ = L − x, y).
    pub fn base_origin(&self) -> Vec<(f64, f64)> {
        self.samples
            .iter()
            .rev()
            .map(|s| (self.length_m - s.x_m, s.y_m))
            .collect()
    }

    /// Deflection at `x_m` by linear interpolation between samples.
    pub fn interpolate(&self, x_m: f64) -> f64 {
        let s = &self.samples;
        if s.is_empty() {
            return 0.0;
        }
        if x_m <= s[0].x_m {
            return s[0].y_m;
        }
        let last = s.len() - 1;
        if x_m >= s[last].x_m {
            return s[last].y_m;
        }
        let i = s.partition_point(|p| p.x_m <= x_m).clamp(1, last);
        let (a, b) = (&s[i - 1], &s[i]);
        let w = (x_m - a.x_m) / (b.x_m - a.x_m);
        a.y_m + w * (b.y_m - a.y_m)
    }

    /// dy/dx at the tip.
    pub fn tip_slope(&self) -> f64 {
        self.samples.first().map_or(0.0, |s| s.slope)
    }
}

pub(crate) fn uniform_stations(length_m: f64, n: usize) -> impl Iterator<Item = f64> {
    let last = n.saturating_sub(1).max(1);
    (0..n).map(move |i| {
        if i == last {
            length_m
        } else {
            length_m * i as f64 / last as f64
        }
    })
}

fn check_samples(n_samples: usize) -> Result<()> {
    if n_samples < 2 {
        return Err(BeamError::InvalidParameter {
            name: "samples",
            reason: format!("need at least 2 samples, got {n_samples}"),
        });
    }
    Ok(())
}

/// Station where wrinkling starts, πpR³/(2Q); `None` when the whole beam is
/// unwrinkled.
pub fn wrinkle_onset(beam: &BeamSpec, load: &LoadCase) -> Option<f64> {
    let q = load.load_n();
    if q <= 0.0 {
        return None;
    }
    let x = FRAC_PI_2 * beam.pressure_moment() / q;
    (x < beam.length_m()).then(|| x.max(0.0))
}

pub fn solve_profile(beam: &BeamSpec, load: &LoadCase, n_samples: usize) -> Result<DeflectionProfile> {
    solve_profile_with(beam, load, n_samples, &SolverOptions::default())
}

pub fn solve_profile_with(
    beam: &BeamSpec,
    load: &LoadCase,
    n_samples: usize,
    opts: &SolverOptions,
) -> Result<DeflectionProfile> {
    check_samples(n_samples)?;
    load.ensure_standing(beam)?;
    let length = beam.length_m();
    if load.load_n() == 0.0 {
        return Ok(DeflectionProfile::zero(length, n_samples));
    }
    let scale = nondim_scale(beam, load)?;
    let sol = solve_nondim(scale.xi(length), opts).map_err(|e| with_q_max(e, beam))?;

    let samples: Vec<ProfileSample> = uniform_stations(length, n_samples)
        .map(|x_m| {
            let state = if x_m == 0.0 {
                sol.tip()
            } else {
                sol.state_at(scale.xi(x_m))
            };
            ProfileSample {
                x_m,
                y_m: scale.y(state.eta1),
                slope: scale.slope(state.eta2),
            }
        })
        .collect();
    let tip = sol.tip();
    Ok(DeflectionProfile {
        length_m: length,
        samples,
        tip_deflection_m: scale.y(tip.eta1),
        tip_slope_rad: scale.slope(tip.eta2).atan(),
        wrinkle_onset_x_m: wrinkle_onset(beam, load),
        collapsed: false,
    })
}

fn with_q_max(err: BeamError, beam: &BeamSpec) -> BeamError {
    match err {
        BeamError::Collapse { xi_root, .. } => BeamError::Collapse {
            xi_root,
            q_max_n: beam.critical_load(),
        },
        other => other,
    }
}

/// Tip deflection and tip slope dy/dx without building a sampled profile.
pub fn tip_state(beam: &BeamSpec, load: &LoadCase, opts: &SolverOptions) -> Result<(f64, f64)> {
    load.ensure_standing(beam)?;
    if load.load_n() == 0.0 {
        return Ok((0.0, 0.0));
    }
    let scale = nondim_scale(beam, load)?;
    let tip = solve_nondim(scale.xi(beam.length_m()), opts)
        .map_err(|e| with_q_max(e, beam))?
        .tip();
    Ok((scale.y(tip.eta1), scale.slope(tip.eta2)))
}

/// Tip deflection y(0) in metres.
pub fn tip_deflection(beam: &BeamSpec, load: &LoadCase) -> Result<f64> {
    tip_state(beam, load, &SolverOptions::default()).map(|(y, _)| y)
}

pub fn tip_deflection_with(beam: &BeamSpec, load: &LoadCase, opts: &SolverOptions) -> Result<f64> {
    tip_state(beam, load, opts).map(|(y, _)| y)
}

/// Exact profile of a beam that is unwrinkled everywhere:
/// y(x) = Q/(6E′I)·(x³ − 3L²x + 2L³).
pub fn closed_form_unwrinkled(
    beam: &BeamSpec,
    load: &LoadCase,
    n_samples: usize,
) -> Result<DeflectionProfile> {
    check_samples(n_samples)?;
    if load.xi_root() > FRAC_PI_2 {
        return Err(BeamError::Domain(format!(
            "closed form needs xi(L) <= pi/2, got {}",
            load.xi_root()
        )));
    }
    let l = beam.length_m();
    let c = load.load_n() / (6.0 * beam.bending_stiffness());
    // x³ − 3L²x + 2L³ = (L − x)²(x + 2L), exact zero at the root
    let y = |x: f64| c * (l - x) * (l - x) * (x + 2.0 * l);
    let slope = |x: f64| 3.0 * c * (x - l) * (x + l);
    let samples = uniform_stations(l, n_samples)
        .map(|x_m| ProfileSample {
            x_m,
            y_m: y(x_m),
            slope: slope(x_m),
        })
        .collect();
    Ok(DeflectionProfile {
        length_m: l,
        samples,
        tip_deflection_m: y(0.0),
        tip_slope_rad: slope(0.0).atan(),
        wrinkle_onset_x_m: wrinkle_onset(beam, load),
        collapsed: false,
    })
}

/// Independent variable of a parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Load,
    Length,
    Pressure,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Load => "load",
            SweepVariable::Length => "length",
            SweepVariable::Pressure => "pressure",
        }
    }
}

impl std::str::FromStr for SweepVariable {
    type Err = BeamError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "load" => Ok(SweepVariable::Load),
            "length" => Ok(SweepVariable::Length),
            "pressure" => Ok(SweepVariable::Pressure),
            other => Err(BeamError::InvalidParameter {
                name: "variable",
                reason: format!("expected load, length or pressure, got `{other}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    /// `None` for collapsed grid points.
    pub tip_deflection_m: Option<f64>,
    pub collapsed: bool,
    /// Collapse boundary of the swept variable (Q_max, L_max or P_min).
    pub critical_value: f64,
}

/// Tip deflection over a uniform grid of one variable.
///
/// `beam` supplies the fixed parameters and `load_n` the fixed tip load for
/// length and pressure sweeps; the swept variable replaces the
/// corresponding field at every grid point.
pub fn sweep(
    beam: &BeamSpec,
    load_n: f64,
    variable: SweepVariable,
    lo: f64,
    hi: f64,
    n: usize,
) -> Result<Vec<SweepRow>> {
    sweep_with(beam, load_n, variable, lo, hi, n, &SolverOptions::default())
}

pub fn sweep_with(
    beam: &BeamSpec,
    load_n: f64,
    variable: SweepVariable,
    lo: f64,
    hi: f64,
    n: usize,
    opts: &SolverOptions,
) -> Result<Vec<SweepRow>> {
    let min_lo_ok = match variable {
        SweepVariable::Load => lo >= 0.0,
        _ => lo > 0.0,
    };
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // rejects NaN too
    if n < 2 || !min_lo_ok || !(hi > lo) || !hi.is_finite() {
        return Err(BeamError::InvalidRange { lo, hi, n });
    }
    if variable != SweepVariable::Load {
        LoadCase::new(beam, load_n)?;
    }

    (0..n)
        .map(|i| {
            let value = if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            };
            let (point, q) = match variable {
                SweepVariable::Load => (*beam, value),
                SweepVariable::Length => (beam.with_length(value)?, load_n),
                SweepVariable::Pressure => (beam.with_pressure(value)?, load_n),
            };
            let load = LoadCase::new(&point, q)?;
            let pr3 = point.pressure_moment();
            let critical_value = match variable {
                SweepVariable::Load => PI * pr3 / point.length_m(),
                SweepVariable::Length if q > 0.0 => PI * pr3 / q,
                SweepVariable::Length => f64::INFINITY,
                SweepVariable::Pressure => q * point.length_m() / (PI * point.radius_m().powi(3)),
            };
            let collapsed = load.is_collapsed();
            let tip_deflection_m = if collapsed {
                None
            } else {
                Some(tip_deflection_with(&point, &load, opts)?)
            };
            Ok(SweepRow {
                value,
                tip_deflection_m,
                collapsed,
                critical_value,
            })
        })
        .collect()
}
