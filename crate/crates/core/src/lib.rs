pub mod chm;
pub mod entanglement;
pub mod error;
pub mod integrability;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod scalar;
pub mod statevector;
pub mod suite;
pub mod symplectic_ca;
pub mod weyl;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use scalar::Real;
pub use statevector::{CircuitSpec, StateVector};

pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type ComplexMatrix32 = ComplexMatrix<f32>;
pub type StateVector64 = StateVector<f64>;
pub type StateVector32 = StateVector<f32>;
pub type CircuitSpec64 = CircuitSpec<f64>;
pub type CircuitSpec32 = CircuitSpec<f32>;
