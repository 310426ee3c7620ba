use crate::interval::Interval;

/// Everything that can go wrong while building or checking a certificate.
///
/// Verification failures are ordinary values: a stage that cannot prove its
/// claim returns one of these instead of a weaker result.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("division by an interval containing zero: {0}")]
    DivisionByZero(Interval),

    #[error("{function}: argument {arg} outside the domain")]
    Domain { function: &'static str, arg: Interval },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("possibly singular: {0}")]
    PossiblySingular(String),

    #[error("unverified pair: {0}")]
    UnverifiedEigenpair(String),

    #[error("blow-up of enclosure at step {step}: {reason}")]
    BlowUp { step: usize, reason: String },

    #[error("piece {piece}: {source}")]
    Piece { piece: usize, source: Box<Error> },

    #[error("inflate candidate: {0}")]
    InflateCandidate(String),

    #[error("non-hyperbolic linearization: {0}")]
    NonHyperbolic(String),

    #[error("cone condition violated: {0}")]
    ConeViolation(String),

    #[error("no decay certificate: {0}")]
    NoDecay(String),

    #[error("covering violation: {0}")]
    Covering(String),

    #[error("sign not certified: {0}")]
    Sign(String),

    #[error("time cap {cap} reached without entering the target")]
    TauCapExceeded { cap: f64 },

    #[error("integrand sign ambiguous at step {step}")]
    AmbiguousSign { step: usize },

    #[error("supports of components {0} and {1} may overlap")]
    Overlap(usize, usize),

    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),

    #[error("not a valid request: {0}")]
    Invalid(String),

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn in_piece(self, piece: usize) -> Error {
        Error::Piece {
            piece,
            source: Box::new(self),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
