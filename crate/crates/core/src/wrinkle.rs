//! Wrinkle-angle relation between the nondimensional load coordinate
//! ξ = Qx/(pR³) and the slack angle θ₀ of the membrane cross-section.
//!
//! The closed form
//!
//! ```text
//! g(θ₀) = π (2π − 2θ₀ + sin 2θ₀) / (4 [sin θ₀ + (π − θ₀) cos θ₀])
//! ```
//!
//! is a 0/0 form at θ₀ = π, and the direct expression loses every
//! significant digit within ~1e-4 of it. Everything here is evaluated in
//! the complementary angle δ = π − θ₀, where
//!
//! ```text
//! 2π − 2θ₀ + sin 2θ₀       = 2δ − sin 2δ
//! sin θ₀ + (π − θ₀) cos θ₀ = sin δ − δ cos δ
//! ```
//!
//! and both right-hand sides switch to their Taylor series for small δ.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{BeamError, Result};
use crate::roots::{newton_bisect, RootOptions};

/// ξ values closer than this to π are clamped before inverting the relation
/// inside the deflection solver.
pub const COLLAPSE_GUARD: f64 = 1e-6;

/// Residual tolerance |g(θ₀) − ξ| for [`wrinkle_angle_of_load`].
pub const INVERSION_TOL: f64 = 1e-10;

const SERIES_CUTOFF: f64 = 0.5;

/// `x − sin x`, accurate for small |x|.
pub(crate) fn x_minus_sin(x: f64) -> f64 {
    if x.abs() >= 2.0 * SERIES_CUTOFF {
        return x - x.sin();
    }
    // Σ_{k≥1} (−1)^{k+1} x^{2k+1} / (2k+1)!
    let x2 = x * x;
    let mut term = x * x2 / 6.0;
    let mut sum = 0.0;
    for k in 1..12 {
        sum += term;
        let n = 2.0 * k as f64 + 1.0;
        term *= -x2 / ((n + 1.0) * (n + 2.0));
    }
    sum
}

/// `sin x − x cos x`, accurate for small |x|.
pub(crate) fn sin_minus_x_cos(x: f64) -> f64 {
    if x.abs() >= SERIES_CUTOFF {
        return x.sin() - x * x.cos();
    }
    // Σ_{k≥1} (−1)^{k+1} 2k x^{2k+1} / (2k+1)!
    let x2 = x * x;
    let mut power = x * x2; // x^{2k+1} / (2k+1)!, times sign
    let mut fact = 6.0;
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..12 {
        sum += sign * 2.0 * k as f64 * power / fact;
        let n = 2.0 * k as f64 + 1.0;
        power *= x2;
        fact *= (n + 1.0) * (n + 2.0);
        sign = -sign;
    }
    sum
}

/// Wrinkle angle θ₀ ∈ [0, π).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct WrinkleAngle(f64);

impl WrinkleAngle {
    pub const ZERO: WrinkleAngle = WrinkleAngle(0.0);

    pub fn new(theta0_rad: f64) -> Result<Self> {
        if (0.0..PI).contains(&theta0_rad) {
            Ok(Self(theta0_rad))
        } else {
            Err(BeamError::Domain(format!(
                "wrinkle angle {theta0_rad} outside [0, pi)"
            )))
        }
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// Complementary angle π − θ₀.
    pub fn complement(self) -> f64 {
        PI - self.0
    }

    pub fn is_wrinkled(self) -> bool {
        self.0 > 0.0
    }
}

/// 2π − 2θ₀ + sin 2θ₀, written in δ = π − θ₀.
pub(crate) fn section_factor(delta: f64) -> f64 {
    x_minus_sin(2.0 * delta)
}

/// g as a function of δ = π − θ₀, valid for δ ∈ (0, π].
fn load_of_complement(delta: f64) -> f64 {
    PI * section_factor(delta) / (4.0 * sin_minus_x_cos(delta))
}

/// dg/dθ₀ in terms of δ.
fn load_slope_of_complement(delta: f64) -> f64 {
    let num = section_factor(delta);
    let den = sin_minus_x_cos(delta);
    let (s, _) = delta.sin_cos();
    // d/dθ₀ of numerator = −4 sin²δ ; of denominator = −δ sin δ
    let dnum = -4.0 * s * s;
    let dden = -delta * s;
    PI / 4.0 * (dnum * den - num * dden) / (den * den)
}

/// ξ = g(θ₀): the load coordinate at which the slack region reaches θ₀.
///
/// Strictly increasing on [0, π), from π/2 at θ₀ = 0 towards π.
pub fn wrinkle_load_of_angle(theta0: WrinkleAngle) -> f64 {
    if theta0.0 == 0.0 {
        return FRAC_PI_2;
    }
    load_of_complement(theta0.complement())
}

/// θ₀ = f(ξ), the inverse of [`wrinkle_load_of_angle`].
///
/// Returns zero for ξ ≤ π/2 (no wrinkling) and fails with
/// [`BeamError::Collapse`] once ξ reaches π.
pub fn wrinkle_angle_of_load(xi: f64) -> Result<WrinkleAngle> {
    if !(xi.is_finite() && xi >= 0.0) {
        return Err(BeamError::Domain(format!(
            "load coordinate {xi} must be finite and non-negative"
        )));
    }
    if xi >= PI {
        return Err(BeamError::Collapse {
            xi_root: xi,
            q_max_n: f64::NAN,
        });
    }
    if xi <= FRAC_PI_2 {
        return Ok(WrinkleAngle::ZERO);
    }

    // Solve in δ: h(δ) = g(π − δ) − ξ is decreasing in δ. Near π,
    // π − g ≈ (π/10) δ², which gives a tight lower bracket.
    let delta_hi = PI;
    let mut delta_lo = (10.0 * (PI - xi) / PI).sqrt() * 0.5;
    while delta_lo > 0.0 && load_of_complement(delta_lo) <= xi {
        delta_lo *= 0.5;
    }
    if delta_lo <= 0.0 || !delta_lo.is_finite() {
        return Ok(WrinkleAngle(PI - f64::EPSILON * PI));
    }

    let opts = RootOptions {
        f_tol: 0.1 * INVERSION_TOL,
        x_tol: 4.0 * f64::EPSILON,
        max_iter: 200,
    };
    let root = newton_bisect(
        |d| (load_of_complement(d) - xi, -load_slope_of_complement(d)),
        delta_lo,
        delta_hi,
        opts,
    )
    .ok_or_else(|| BeamError::Domain(format!("could not bracket wrinkle angle for xi = {xi}")))?;
    let theta = (PI - root.x).clamp(0.0, PI - f64::EPSILON * PI);
    Ok(WrinkleAngle(theta))
}

/// Curvature multiplier 2/(2π − 2θ₀ + sin 2θ₀), the factor applied to ξ in
/// the wrinkled branch of the Comer curvature law; equals 1/π at θ₀ = 0.
pub fn comer_curvature_factor(theta0: WrinkleAngle) -> f64 {
    2.0 / section_factor(theta0.complement())
}

/// Curvature multiplier 2/(2π − 2θ₀ + sin θ₀), the form that appears in the
/// first-order system solved for the reference curves; equals 1/π at θ₀ = 0.
pub fn system_curvature_factor(theta0: WrinkleAngle) -> f64 {
    let delta = theta0.complement();
    2.0 / (2.0 * delta + delta.sin())
}
