use thiserror::Error;

/// Errors raised by the algebra, group and representation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not Hermitian (residual {0:.3e})")]
    NotHermitian(f64),

    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

/// Upper bound on the ambient matrix size a computation may allocate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_ambient: usize,
}

impl Budget {
    pub fn new(max_ambient: usize) -> Result<Self> {
        if max_ambient == 0 {
            return Err(invalid("budget must be at least 1"));
        }
        Ok(Self { max_ambient })
    }

    /// Fail with [`Error::Budget`] when `size` exceeds the bound.
    pub fn check(&self, size: usize, what: &str) -> Result<()> {
        if size > self.max_ambient {
            return Err(Error::Budget(format!(
                "{what} needs ambient size {size}, budget is {}",
                self.max_ambient
            )));
        }
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_ambient: 2000 }
    }
}
