//! Planar tip pose and tip growth rate against an obstacle.

use nalgebra::{Matrix3, Point2, Vector2};

use crate::deflection::{tip_state, SolverOptions};
use crate::error::{BeamError, Result};
use crate::model::{BeamSpec, LoadCase};

/// Pose of the tip frame in the contact/base frame, axes as in the beam
/// model (y downward).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TipPose {
    pub translation: Vector2<f64>,
    /// atan(dy/dx) at the tip.
    pub rotation_rad: f64,
    pub transform: Matrix3<f64>,
}

impl TipPose {
    pub fn new(translation: Vector2<f64>, rotation_rad: f64) -> Self {
        let (s, c) = rotation_rad.sin_cos();
        #[rustfmt::skip]
        let transform = Matrix3::new(
            c,  -s,  translation.x,
            s,   c,  translation.y,
            0.0, 0.0, 1.0,
        );
        Self {
            translation,
            rotation_rad,
            transform,
        }
    }

    /// Pose from a tip slope dy/dx rather than an angle.
    pub fn from_slope(translation: Vector2<f64>, slope: f64) -> Self {
        Self::new(translation, slope.atan())
    }

    /// Maps a point given in tip-frame coordinates into the base frame.
    pub fn to_base(&self, p: &Point2<f64>) -> Point2<f64> {
        let h = self.transform * p.to_homogeneous();
        Point2::new(h.x, h.y)
    }

    /// Inverse of [`TipPose::to_base`], using Rᵀ rather than a general inverse.
    pub fn to_tip(&self, p: &Point2<f64>) -> Point2<f64> {
        let (s, c) = self.rotation_rad.sin_cos();
        let d = p.coords - self.translation;
        Point2::new(c * d.x + s * d.y, -s * d.x + c * d.y)
    }

    pub fn inverse_transform(&self) -> Matrix3<f64> {
        let (s, c) = self.rotation_rad.sin_cos();
        let t = self.translation;
        #[rustfmt::skip]
        let inv = Matrix3::new(
            c,   s,  -(c * t.x + s * t.y),
            -s,  c,  s * t.x - c * t.y,
            0.0, 0.0, 1.0,
        );
        inv
    }
}

/// Tip pose for a standing beam: the supplied tip position as translation,
/// and the rotation from the dimensional tip slope
/// dy/dx = (dη/dξ)|ξ=0 · p²R³/(QE′t).
pub fn tip_pose(
    beam: &BeamSpec,
    load: &LoadCase,
    base_frame_tip_position: Vector2<f64>,
) -> Result<TipPose> {
    tip_pose_with(beam, load, base_frame_tip_position, &SolverOptions::default())
}

pub fn tip_pose_with(
    beam: &BeamSpec,
    load: &LoadCase,
    base_frame_tip_position: Vector2<f64>,
    opts: &SolverOptions,
) -> Result<TipPose> {
    let (_, slope) = tip_state(beam, load, opts)?;
    Ok(TipPose::from_slope(base_frame_tip_position, slope))
}

/// Tip position, nearest contact, obstacle tangent and eversion rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactScene {
    pub p: Vector2<f64>,
    pub c_n: Vector2<f64>,
    pub t_hat: Vector2<f64>,
    /// Eversion growth rate u (m/s).
    pub u: f64,
}

impl ContactScene {
    pub fn new(p: Vector2<f64>, c_n: Vector2<f64>, t_hat: Vector2<f64>, u: f64) -> Result<Self> {
        if ((t_hat.norm() - 1.0).abs()) > 1e-12 {
            return Err(BeamError::InvalidParameter {
                name: "t_hat",
                reason: format!("must be a unit vector, |t_hat| = {}", t_hat.norm()),
            });
        }
        if !(u.is_finite() && p.iter().chain(c_n.iter()).all(|v| v.is_finite())) {
            return Err(BeamError::InvalidParameter {
                name: "scene",
                reason: "non-finite coordinates or growth rate".into(),
            });
        }
        Ok(Self { p, c_n, t_hat, u })
    }
}

/// Tip speed along the obstacle surface, u·‖p − c_n‖ / (t̂·(p − c_n)).
pub fn tip_growth_rate(scene: &ContactScene) -> Result<f64> {
    let d = scene.p - scene.c_n;
    let dist = d.norm();
    let along = scene.t_hat.dot(&d);
    if dist == 0.0 || along <= 1e-9 * dist {
        return Err(BeamError::GrazingContact);
    }
    Ok(scene.u * dist / along)
}
