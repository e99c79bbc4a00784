//! Exact dephasing of three qubits coupled to independent bosonic reservoirs,
//! with genuine multipartite concurrence, tripartite negativity and l1 coherence
//! as correlation measures.
//!
//! The numerical core is generic over the scalar type; the aliases below fix
//! it to `f64`.

// `!(a > b)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod evolution;
pub mod linalg;
pub mod measures;
pub mod quad;
pub mod reservoir;
pub mod scalar;
pub mod selfcheck;
pub mod states;

pub use error::{Error, Result};

pub type ComplexMatrix64 = linalg::ComplexMatrix<f64>;
pub type DensityMatrix64 = states::DensityMatrix<f64>;
pub type PureState64 = states::PureState<f64>;
pub type ReservoirSpec64 = reservoir::ReservoirSpec<f64>;
pub type Temperature64 = reservoir::Temperature<f64>;
pub type QubitTriple64 = evolution::QubitTriple<f64>;
pub type Environment64 = evolution::Environment<f64>;
pub type SweepGrid64 = analysis::SweepGrid<f64>;
