/// Everything that can go wrong in this crate.
///
/// The first group is rejected input (caught before any numerics run);
/// `Degenerate`, `NoConvergence` and `Unfittable` report numerical failure
/// on input that passed validation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter or argument failed validation.
    #[error("{0}")]
    Invalid(&'static str),
    /// The node count does not fit the platform's index range.
    #[error("configuration exceeds the addressable size")]
    ConfigTooLarge,
    /// A (layer, unit, pos) triple is outside the configured ranges.
    #[error("coordinate out of range")]
    InvalidCoordinate,
    /// A flat node index is outside 1..=n.
    #[error("node index out of range")]
    InvalidIndex,
    /// The operation has a closed form only for two-layer networks.
    #[error("operation requires a two-layer hierarchy")]
    TwoLayersOnly,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// The integration step violates the stability bound.
    #[error("step size exceeds the stability bound {max}")]
    StepTooLarge { max: f64 },
    /// Too few usable trajectory points to fit a decay rate.
    #[error("too few usable points to fit a decay rate")]
    Unfittable,
    /// A weight vector was expected to be nonnegative and sum to one.
    #[error("weights must be nonnegative and sum to one")]
    NotNormalized,
    /// The dominant eigenvalue is not simple, so no rate is defined.
    #[error("dominant eigenvalue is not simple")]
    Degenerate,
    /// An iteration failed to converge or a numerical self-check failed.
    #[error("numerical computation broke down")]
    NoConvergence,
    /// All input intensities are zero; the autonomous rate applies instead.
    #[error("input intensities are all zero")]
    NoInput,
}
