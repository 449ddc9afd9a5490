//! Beam description, load case, nondimensional scales, collapse limits and
//! root stresses.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{BeamError, Result};
use crate::wrinkle::{section_factor, wrinkle_angle_of_load, WrinkleAngle, COLLAPSE_GUARD};

/// Geometry, material and inflation state of one thin-walled beam. SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSpec {
    radius_m: f64,
    thickness_m: f64,
    length_m: f64,
    pressure_pa: f64,
    modulus_pa: f64,
    modulus_factor: f64,
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(BeamError::InvalidParameter {
            name,
            reason: format!("must be finite and strictly positive, got {value}"),
        })
    }
}

impl BeamSpec {
    /// Builds a beam with `modulus_factor = 1`.
    pub fn new(
        radius_m: f64,
        thickness_m: f64,
        length_m: f64,
        pressure_pa: f64,
        modulus_pa: f64,
    ) -> Result<Self> {
        let radius_m = positive("radius", radius_m)?;
        let thickness_m = positive("thickness", thickness_m)?;
        if thickness_m >= radius_m / 10.0 {
            return Err(BeamError::InvalidParameter {
                name: "thickness",
                reason: format!(
                    "thin-wall model needs t < R/10 (t = {thickness_m}, R = {radius_m})"
                ),
            });
        }
        Ok(Self {
            radius_m,
            thickness_m,
            length_m: positive("length", length_m)?,
            pressure_pa: positive("pressure", pressure_pa)?,
            modulus_pa: positive("modulus", modulus_pa)?,
            modulus_factor: 1.0,
        })
    }

    /// Sets the effective-modulus factor, E′ = factor·E, with factor in (0, 1].
    pub fn with_modulus_factor(mut self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0 && factor <= 1.0) {
            return Err(BeamError::InvalidParameter {
                name: "modulus_factor",
                reason: format!("must lie in (0, 1], got {factor}"),
            });
        }
        self.modulus_factor = factor;
        Ok(self)
    }

    pub fn with_length(self, length_m: f64) -> Result<Self> {
        Self::new(
            self.radius_m,
            self.thickness_m,
            length_m,
            self.pressure_pa,
            self.modulus_pa,
        )?
        .with_modulus_factor(self.modulus_factor)
    }

    pub fn with_pressure(self, pressure_pa: f64) -> Result<Self> {
        Self::new(
            self.radius_m,
            self.thickness_m,
            self.length_m,
            pressure_pa,
            self.modulus_pa,
        )?
        .with_modulus_factor(self.modulus_factor)
    }

    pub fn radius_m(&self) -> f64 {
        self.radius_m
    }
    pub fn thickness_m(&self) -> f64 {
        self.thickness_m
    }
    pub fn length_m(&self) -> f64 {
        self.length_m
    }
    pub fn pressure_pa(&self) -> f64 {
        self.pressure_pa
    }
    pub fn modulus_pa(&self) -> f64 {
        self.modulus_pa
    }
    pub fn modulus_factor(&self) -> f64 {
        self.modulus_factor
    }

    /// E′ = E·modulus_factor, the modulus every bending formula uses.
    pub fn effective_modulus_pa(&self) -> f64 {
        self.modulus_pa * self.modulus_factor
    }

    /// pR³, the pressure moment that sets every collapse limit.
    pub fn pressure_moment(&self) -> f64 {
        self.pressure_pa * self.radius_m.powi(3)
    }

    /// Bending stiffness E′I with I = πR³t.
    pub fn bending_stiffness(&self) -> f64 {
        self.effective_modulus_pa() * PI * self.radius_m.powi(3) * self.thickness_m
    }

    /// Q_max = πpR³/L.
    pub fn critical_load(&self) -> f64 {
        PI * self.pressure_moment() / self.length_m
    }

    /// Largest tip load for which no station wrinkles, πpR³/(2L).
    pub fn wrinkle_onset_load(&self) -> f64 {
        FRAC_PI_2 * self.pressure_moment() / self.length_m
    }
}

/// Tip load and the root coordinate ξ(L) = QL/(pR³) it produces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadCase {
    load_n: f64,
    xi_root: f64,
}

impl LoadCase {
    pub fn new(beam: &BeamSpec, load_n: f64) -> Result<Self> {
        if !(load_n.is_finite() && load_n >= 0.0) {
            return Err(BeamError::InvalidParameter {
                name: "load",
                reason: format!("must be finite and non-negative, got {load_n}"),
            });
        }
        Ok(Self {
            load_n,
            xi_root: load_n * beam.length_m() / beam.pressure_moment(),
        })
    }

    pub fn load_n(&self) -> f64 {
        self.load_n
    }

    pub fn xi_root(&self) -> f64 {
        self.xi_root
    }

    pub fn is_collapsed(&self) -> bool {
        self.xi_root >= PI
    }

    /// Error out when the root is at or past the hinge condition.
    pub fn ensure_standing(&self, beam: &BeamSpec) -> Result<()> {
        if self.is_collapsed() {
            Err(BeamError::Collapse {
                xi_root: self.xi_root,
                q_max_n: beam.critical_load(),
            })
        } else {
            Ok(())
        }
    }
}

/// Scale factors between physical and nondimensional coordinates:
/// ξ = xi_per_x · x and η = eta_per_y · y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NondimScale {
    pub xi_per_x: f64,
    pub eta_per_y: f64,
}

impl NondimScale {
    pub fn xi(&self, x_m: f64) -> f64 {
        self.xi_per_x * x_m
    }
    pub fn x(&self, xi: f64) -> f64 {
        xi / self.xi_per_x
    }
    pub fn eta(&self, y_m: f64) -> f64 {
        self.eta_per_y * y_m
    }
    pub fn y(&self, eta: f64) -> f64 {
        eta / self.eta_per_y
    }
    /// Converts dη/dξ to dy/dx.
    pub fn slope(&self, deta_dxi: f64) -> f64 {
        deta_dxi * self.xi_per_x / self.eta_per_y
    }
}

/// ξ = Qx/(pR³) and η = Q²E′t·y/(p³R⁶).
pub fn nondim_scale(beam: &BeamSpec, load: &LoadCase) -> Result<NondimScale> {
    let q = load.load_n();
    if q <= 0.0 {
        return Err(BeamError::DegenerateLoad);
    }
    let pr3 = beam.pressure_moment();
    Ok(NondimScale {
        xi_per_x: q / pr3,
        eta_per_y: q * q * beam.effective_modulus_pa() * beam.thickness_m()
            / (pr3 * pr3 * beam.pressure_pa()),
    })
}

/// Collapse limits and root state for one beam/load pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BucklingReport {
    pub q_max_n: f64,
    /// Infinite for a zero load.
    pub l_max_m: f64,
    pub p_min_pa: f64,
    pub xi_root: f64,
    pub collapsed: bool,
    /// θ₀ at the root; evaluated at ξ = π − 1e-6 when collapsed.
    pub theta0_root_rad: f64,
    /// Root axial stress; evaluated at the clamped θ₀ when collapsed.
    pub sigma_max_pa: f64,
}

pub fn buckling_report(beam: &BeamSpec, load: &LoadCase) -> BucklingReport {
    let pr3 = beam.pressure_moment();
    let q = load.load_n();
    let l = beam.length_m();
    let r3 = beam.radius_m().powi(3);
    let xi = load.xi_root().min(PI - COLLAPSE_GUARD);
    // ξ is finite and in [0, π) here, so the inversion cannot fail
    let theta0 = wrinkle_angle_of_load(xi).unwrap_or(WrinkleAngle::ZERO);
    BucklingReport {
        q_max_n: PI * pr3 / l,
        l_max_m: if q > 0.0 { PI * pr3 / q } else { f64::INFINITY },
        p_min_pa: q * l / (PI * r3),
        xi_root: load.xi_root(),
        collapsed: load.is_collapsed(),
        theta0_root_rad: theta0.radians(),
        sigma_max_pa: root_stress(beam, q, theta0),
    }
}

fn root_stress(beam: &BeamSpec, load_n: f64, theta0: WrinkleAngle) -> f64 {
    let r = beam.radius_m();
    let delta = theta0.complement();
    // 1 + cos θ₀ = 1 − cos δ = 2 sin²(δ/2)
    let half = (0.5 * delta).sin();
    let one_plus_cos = 2.0 * half * half;
    load_n * beam.length_m() / (beam.thickness_m() * r * r) * 2.0 * one_plus_cos
        / section_factor(delta)
}

/// Maximum axial stress at the root,
/// σ_m = QL/(tR²) · 2(1 + cos θ₀)/(2π − 2θ₀ + sin 2θ₀).
pub fn max_stress(beam: &BeamSpec, load: &LoadCase) -> Result<f64> {
    load.ensure_standing(beam)?;
    let theta0 = wrinkle_angle_of_load(load.xi_root())?;
    Ok(root_stress(beam, load.load_n(), theta0))
}

/// Longitudinal membrane stress of a closed pressure vessel, pR/(2t).
pub fn longitudinal_stress(beam: &BeamSpec) -> f64 {
    beam.pressure_pa() * beam.radius_m() / (2.0 * beam.thickness_m())
}
