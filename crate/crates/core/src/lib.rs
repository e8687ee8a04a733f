//! One-vs-rest entanglement monotones for N-party pure qubit states, the
//! sharing inequality `Y_j <= sum_{k != j} Y_k` and its monogamy
//! counterpart, and the geometry of the inhabitable polytope in Y-space.
//!
//! Module layout:
//!
//! - [`smallmat`]: dense complex kernels (Hermitian Jacobi eigensolver, PSD
//!   square root, two-qubit spin flip).
//! - [`states`]: pure states, named families, Haar sampling, partial traces.
//! - [`monotones`]: Schmidt data, `K_j`, `Y_j`, concurrences, bounds.
//! - [`geometry`]: hypercube membership, exact volumes, cross-sections.
//! - [`verify`]: batch property suites and figure datasets.

pub mod error;
pub mod geometry;
pub mod monotones;
pub mod rng;
pub mod smallmat;
pub mod states;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use rng::RngStream;
pub use smallmat::ComplexMatrix;
pub use states::PureState;
