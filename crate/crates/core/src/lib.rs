//! Detection of nonclassical correlations in two-qubit states.
//!
//! The crate evaluates the positive-map nonclassicality witness built from
//! the projectors |00><00| and |1+><1+|, both directly and from the three
//! polarizations measured by a controlled-Hadamard / CNOT readout circuit.
//! It compares the witness with quantum discord, tracks both under T1/T2
//! relaxation, and cross-checks everything through simulated tomography.
//!
//! ```
//! use ncwitness::{states, witness};
//!
//! let sigma = states::sigma_ncc();
//! let report = witness::map_value_direct(&sigma, witness::C_OPT).unwrap();
//! assert!(report.ncc_detected);
//! assert!((report.map_value + 0.067862).abs() < 1e-9);
//! ```

pub mod circuit;
pub mod cli;
pub mod decoherence;
pub mod discord;
mod error;
pub mod qmat;
pub mod simplex;
pub mod states;
pub mod tomography;
pub mod witness;

pub use error::{Error, Result};
pub use qmat::{ComplexMatrix, DensityMatrix, Subsystem};
