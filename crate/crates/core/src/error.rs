use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A caller-supplied argument is outside the accepted domain.
    #[error("invalid input: {0}")]
    Input(String),

    /// A value violates a structural precondition (hermiticity, trace, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unphysical Bloch vector: |b| = {norm} > 1")]
    UnphysicalState { norm: f64 },

    #[error("operation requires a unital map (translation {translation:?} is nonzero)")]
    NotUnital { translation: [f64; 3] },

    /// The map is not completely positive; `inequality` is the 1-based index
    /// of the first violated Bloch inequality.
    #[error("map is not completely positive: Bloch inequality {inequality} violated (lhs = {lhs})")]
    NotCompletelyPositive { inequality: usize, lhs: f64 },

    #[error("generator is not diagonalizable: eigenvalue {eigenvalue} has algebraic multiplicity {algebraic} but only {geometric} eigenoperators (Jordan block)")]
    DefectiveGenerator {
        eigenvalue: String,
        algebraic: usize,
        geometric: usize,
    },

    #[error("unsupported combination: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Input(msg()))
    }
}
