//! Young's modulus from tensile-test data over the beam's operating
//! stress window.
//!
//! Engineering stress and strain are assumed throughout.

use log::warn;

use crate::error::{BeamError, Result};
use crate::model::{longitudinal_stress, max_stress, BeamSpec, LoadCase};

#[derive(Debug, Clone, PartialEq)]
pub struct StressStrainSeries {
    points: Vec<(f64, f64)>,
}

impl StressStrainSeries {
    /// `points` are (strain, stress in Pa) with strictly increasing,
    /// non-negative strain.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 3 {
            return Err(BeamError::InsufficientPoints {
                found: points.len(),
                required: 3,
            });
        }
        for (i, &(strain, stress)) in points.iter().enumerate() {
            if !(strain.is_finite() && stress.is_finite()) || strain < 0.0 {
                return Err(BeamError::NonMonotoneStrain { index: i });
            }
            if i > 0 && strain <= points[i - 1].0 {
                return Err(BeamError::NonMonotoneStrain { index: i });
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

/// Stress interval the beam wall sees in service.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StressWindow {
    pub sigma_min_pa: f64,
    pub sigma_max_pa: f64,
}

impl StressWindow {
    pub fn new(sigma_min_pa: f64, sigma_max_pa: f64) -> Result<Self> {
        if !(sigma_min_pa.is_finite() && sigma_max_pa.is_finite()) || sigma_min_pa >= sigma_max_pa
        {
            return Err(BeamError::InvalidParameter {
                name: "window",
                reason: format!("need sigma_min < sigma_max, got [{sigma_min_pa}, {sigma_max_pa}]"),
            });
        }
        Ok(Self {
            sigma_min_pa,
            sigma_max_pa,
        })
    }

    pub fn contains(&self, stress: f64) -> bool {
        (self.sigma_min_pa..=self.sigma_max_pa).contains(&stress)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusFit {
    pub modulus_pa: f64,
    pub window: StressWindow,
    pub n_points_used: usize,
    pub r_squared: f64,
}

/// Ordinary least-squares slope of stress against strain, using only the
/// points whose stress lies inside `window`.
pub fn fit_modulus(series: &StressStrainSeries, window: StressWindow) -> Result<ModulusFit> {
    let used: Vec<(f64, f64)> = series
        .points()
        .iter()
        .copied()
        .filter(|&(_, s)| window.contains(s))
        .collect();
    let n = used.len();
    if n < 2 {
        return Err(BeamError::InsufficientPoints {
            found: n,
            required: 2,
        });
    }
    let nf = n as f64;
    let mean_x = used.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = used.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in &used {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // rejects NaN too
    if !(slope > 0.0) {
        return Err(BeamError::NonPositiveModulus(slope));
    }
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = used
        .iter()
        .map(|&(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let r_squared = if syy > 0.0 {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(ModulusFit {
        modulus_pa: slope,
        window,
        n_points_used: n,
        r_squared,
    })
}

/// Operating window bounded by the pressure-vessel longitudinal stress and
/// the maximum root stress. A window that comes out inverted (very light
/// loads) is swapped and logged rather than rejected.
pub fn operating_window(beam: &BeamSpec, load: &LoadCase) -> Result<StressWindow> {
    let sigma_min = longitudinal_stress(beam);
    let sigma_max = max_stress(beam, load)?;
    if sigma_max < sigma_min {
        warn!(
            "root stress {sigma_max:.4e} Pa is below the longitudinal stress {sigma_min:.4e} Pa; \
             swapping window bounds"
        );
        return StressWindow::new(sigma_max, sigma_min);
    }
    StressWindow::new(sigma_min, sigma_max)
}
