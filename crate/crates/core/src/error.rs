use num_complex::Complex64;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("evaluation error: point {point} is a pole to working precision (condition estimate {cond:.3e})")]
    Evaluation { point: Complex64, cond: f64 },
    #[error("boundary error: eigenvalue {0} lies within the boundary offset of the region boundary")]
    Boundary(Complex64),
    #[error("structure error: realization is not stabilizable at eigenvalue {0}")]
    NotStabilizable(Complex64),
    #[error("factorization error: {0}")]
    Factorization(String),
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that signal a factorization cannot exist for the given data.
    pub fn is_factorization(&self) -> bool {
        matches!(
            self,
            Error::Boundary(_)
                | Error::NotStabilizable(_)
                | Error::Factorization(_)
                | Error::Structure(_)
                | Error::Numerical(_)
        )
    }
}
