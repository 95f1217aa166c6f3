//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by lattice, unit-geometry and family computations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The two basis vectors do not span a rank-2 lattice.
    #[error("degenerate lattice: {0}")]
    DegenerateLattice(String),

    /// Embedding data whose coordinates do not sum to zero.
    #[error("not a unit: {0}")]
    NotAUnit(String),

    /// A Gram matrix that violates the reduction inequalities.
    #[error("gram matrix is not reduced: {0}")]
    NotReduced(String),

    /// Parameter excluded by the hypotheses of the unit-basis theorem.
    #[error("excluded parameter: {0}")]
    ExcludedCase(String),

    /// A quartic whose real-root count is not 2.
    #[error("wrong signature: {0}")]
    WrongSignature(String),

    /// Escape study fed with records over different quadratic subfields.
    #[error("mixed subfields: {0}")]
    MixedSubfields(String),

    /// Convergence study with too few family members.
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    /// Unparseable input text.
    #[error("malformed input: {0}")]
    MalformedInput(String),

    /// SVG emission without data points.
    #[error("empty plot")]
    EmptyPlot,

    /// Loss of precision or a non-finite intermediate value.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
