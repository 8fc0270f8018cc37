use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("affine scale factor must be nonzero")]
    ZeroScale,

    /// `d_n = n·a + p` vanishes at the reported index.
    #[error("pair is not admissible: d_{index} = 0")]
    NotAdmissible { index: usize },

    #[error("degenerate Pearson pair: {0}")]
    DegeneratePair(String),

    /// `⟨u, P_n²⟩` vanishes, so the functional is not regular at this index.
    #[error("singular moment: <u, P_{index}^2> = 0")]
    SingularMoment { index: usize },

    #[error("approximate Hankel determinant H_{index} is below tolerance")]
    ApproxIndeterminate { index: usize },

    #[error("regularity condition violated: {0}")]
    Regularity(String),

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("inconsistent input: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
