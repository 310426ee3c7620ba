//! Verified inverses, eigenpairs and logarithmic norms of interval matrices.

mod eigen;
mod inverse;
mod lognorm;

pub use eigen::{
    approx_eigenpairs, enclose_simple_eigenpair, enclose_spectrum, krawczyk, ApproxEigenpair,
    EigenpairEnclosure,
};
pub use inverse::{approx_inverse, enclose_inverse};
pub use lognorm::{
    l_upper, log_norm_bounds, m_upper, ml_lower, spectral_norm_bounds, symmetric_part,
    symmetric_spectrum_bounds, LogNormBounds,
};
