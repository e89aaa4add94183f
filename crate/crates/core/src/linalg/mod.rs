//! Dense complex linear algebra for systems of at most six qubits.

mod eig;
mod matrix;
pub mod random;
mod state;

pub use eig::{hermitian_eig, matrix_sqrt_psd, EigenSystem, JACOBI_MAX_SWEEPS, JACOBI_THRESHOLD, PSD_CLAMP};
pub use matrix::{kron, ComplexMatrix};
pub use random::{haar_random_pure, haar_random_pure_with};
pub use state::{partial_trace, partial_trace_pure, DensityMatrix, StateVector};
