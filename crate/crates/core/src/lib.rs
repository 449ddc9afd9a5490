//! Statics of inflated cantilever beams and everted tubes.
//!
//! The beam carries bending only through membrane tension. Past
//! ξ = Qx/(pR³) = π/2 the compressed side goes slack over an angle θ₀; at
//! ξ = π the slack region wraps the section and the root becomes a hinge.
//!
//! - [`model`]: beam/load types, nondimensional scales, collapse limits, stresses
//! - [`wrinkle`]: the wrinkle-angle relation and its inverse
//! - [`deflection`]: backward initial-value solution, closed form, sweeps
//! - [`inverse`]: load from tip displacement, buckled chord, error metrics
//! - [`pose`]: planar tip pose and growth rate at a contact
//! - [`materials`]: modulus fit over the operating stress window

pub mod deflection;
pub mod error;
pub mod inverse;
pub mod materials;
pub mod model;
pub mod ode;
pub mod pose;
pub mod roots;
pub mod wrinkle;

pub use deflection::{
    closed_form_unwrinkled, solve_profile, sweep, tip_deflection, CurvatureLaw, DeflectionProfile,
    ProfileSample, SolverOptions, SweepRow, SweepVariable,
};
pub use error::{BeamError, Result};
pub use inverse::{
    estimate_load, profile_error_metrics, straight_line_profile, DisplacementObservation,
    LoadEstimate, ProfileErrors,
};
pub use materials::{fit_modulus, operating_window, ModulusFit, StressStrainSeries, StressWindow};
pub use model::{
    buckling_report, longitudinal_stress, max_stress, nondim_scale, BeamSpec, BucklingReport,
    LoadCase, NondimScale,
};
pub use pose::{tip_growth_rate, tip_pose, ContactScene, TipPose};
pub use wrinkle::{wrinkle_angle_of_load, wrinkle_load_of_angle, WrinkleAngle};
