//! Eigensolvers and time propagation.

pub mod dense;
pub mod krylov;
pub mod lanczos;

pub use dense::{eigenvalues, full_spectrum, EigenDecomposition};
pub use krylov::{evolve, evolve_with, KrylovOptions};
pub use lanczos::{ground_state, ground_state_with, GroundState, LanczosOptions};
