use thiserror::Error;

/// Errors raised by the beam model, solvers and fitting routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BeamError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("argument out of domain: {0}")]
    Domain(String),

    /// The root coordinate reached the hinge condition, ξ(L) ≥ π.
    #[error("beam collapses: xi(L) = {xi_root:.6} >= pi (critical tip load Q_max = {q_max_n:.4} N)")]
    Collapse { xi_root: f64, q_max_n: f64 },

    #[error("nondimensionalization is undefined for zero tip load")]
    DegenerateLoad,

    #[error("grazing contact: tip path is perpendicular to the obstacle surface")]
    GrazingContact,

    #[error("invalid range [{lo}, {hi}] with {n} points")]
    InvalidRange { lo: f64, hi: f64, n: usize },

    #[error("insufficient points: {found} found, at least {required} required")]
    InsufficientPoints { found: usize, required: usize },

    #[error("strain must be non-negative and strictly increasing (violated at point {index})")]
    NonMonotoneStrain { index: usize },

    #[error("fit produced a non-positive modulus ({0} Pa)")]
    NonPositiveModulus(f64),

    #[error("integrator failed: {0}")]
    Integration(String),
}

pub type Result<T> = std::result::Result<T, BeamError>;
