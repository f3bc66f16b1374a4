//! Dense linear algebra, deterministic randomness and conditioned-problem generation.

mod eigen;
mod generate;
mod linalg;
mod rng;

pub use eigen::{
    eig2x2, eig2x2_entries, spectral_radius_2x2, svd, sym_eigen, sym_eigenvalues, Spectrum, Svd,
    SymEigen, SYMMETRY_TOL,
};
pub use generate::{log_uniform_profile, make_quadratic, random_orthogonal};
pub use linalg::{dot, householder_qr, solve, DenseMatrix, DenseVector, Lu};
pub use rng::{derive_seed, mix64, Rng};
