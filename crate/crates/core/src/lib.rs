//! Exact diagonalization and quench dynamics for blockade-constrained spin
//! chains with all-to-all, cavity-mediated interactions.
//!
//! The central model is
//!
//! ```text
//! H = -(1/L) (sum_i P_{i-1} sigma^x_i P_{i+1})^2 + Delta sum_i sigma^z_i
//! ```
//!
//! on the Fibonacci-sized subspace with no two neighbouring excitations.
//! Energies are in units of the cavity-mediated coupling `J = g^2 / (2 omega_c)`.

pub mod basis;
pub mod cli;
pub mod error;
pub mod guard;
pub mod linalg;
pub mod observables;
pub mod operators;
pub mod quench;
pub mod scans;
pub mod softspin;
pub mod solvers;
pub mod state;
pub mod symmetry;

pub use basis::{BoundaryCondition, ConstrainedBasis, FullBasis, NamedState, Space, SpinConfiguration};
pub use error::{Error, Result};
pub use operators::{FactoredOperator, ModelParameters, Operator, SparseOperator};
pub use state::{BasisTag, StateVector};
pub use symmetry::{SectorLabel, SectorOptions, SymmetrySector};
