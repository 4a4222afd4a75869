use thiserror::Error;

pub type Result<T> = std::result::Result<T, FfcError>;

/// Error type shared by every operation in the crate.
#[derive(Debug, Clone, Error)]
pub enum FfcError {
    #[error("input contains a non-finite value")]
    NonFiniteInput,

    /// Root finding left an imaginary residue above the realness tolerance.
    /// Carries the largest imaginary magnitude seen so callers can judge
    /// how far from real the offending root was.
    #[error("polynomial is not real-rooted within tolerance (max |Im| = {max_imag:.3e})")]
    NotRealRooted { max_imag: f64 },

    #[error("derivative order {order} must be below the degree {degree}")]
    DegreeUnderflow { degree: usize, order: usize },

    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("degree {degree} exceeds the brute-force limit {max}")]
    TooLarge { degree: usize, max: usize },

    #[error("degree {degree} is below the minimum {min} for this operation")]
    DegreeTooSmall { degree: usize, min: usize },

    /// A root trajectory ran into a vanishing derivative; the flow equations
    /// divide by r'(λ), so this aborts integration.
    #[error("near-collision at λ = {lambda}: |r'(λ)| = {derivative_magnitude:.3e} below tolerance")]
    NearCollision {
        lambda: f64,
        derivative_magnitude: f64,
    },

    #[error("simple roots required: minimum root gap {min_gap:.3e} is inside the collision tolerance")]
    MultipleRoots { min_gap: f64 },

    #[error("equality probe is only defined for degree 2, got {degree}")]
    UnsupportedProbe { degree: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
