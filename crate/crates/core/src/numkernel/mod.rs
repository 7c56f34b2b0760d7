//! Dense kernels: rank-revealing factorizations and the ordered generalized Schur form.

pub(crate) mod elem;
pub mod lin;
mod qr;
mod qz;
mod svd;
mod tol;

pub use qr::{pivoted_qr, PivotedQr};
pub(crate) use qz::check_regular;
pub use qz::{
    generalized_eigenvalues, generalized_eigenvalues_with, ordered_generalized_schur, GenEig, OrderedSchurResult,
};
pub(crate) use svd::svd;
pub use svd::{rank_revealing_svd, Svd};
pub use tol::{ToleranceConfig, EPS};
