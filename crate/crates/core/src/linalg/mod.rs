//! Hand-rolled dense complex linear algebra: LU solves, Hermitian
//! eigendecomposition, general eigenvalues, and the matrix exponential.
//!
//! These are classical desk-scale algorithms (partial-pivot LU, cyclic
//! Jacobi, Hessenberg + shifted QR, Padé(13) scaling-and-squaring); nothing
//! here is tuned beyond cache-friendly loop order.

mod eigh;
mod eigvals;
mod expm;
mod lu;

pub use eigh::{eigh, eigvalsh, HermitianEigen};
pub use eigvals::eigenvalues;
pub use expm::expm;
pub use lu::Lu;
