//! Multipartite entanglement measures for pure qudit states.
//!
//! The crate computes and cross-validates three measures of multipartite
//! entanglement for pure states of `n` parties with equal local dimension
//! `d`:
//!
//! * the product measure over all canonical bipartition linear entropies
//!   ([`measures::gme_ame`]), which vanishes exactly on biseparable states
//!   and reaches 1 exactly on absolutely maximally entangled states;
//! * the averaged linear-entropy measure ([`measures::scott`]) over all
//!   `k`-party reductions;
//! * the four-qubit polygon (simplex-volume) measure ([`polygon`]).
//!
//! Around the measures sit the two-qudit operator-to-state pipeline
//! ([`chmap`]), the Cartan-parametrized two-qubit family with its exact
//! closed forms ([`weyl`]), exhaustive exact-rational sweeps over bipartite
//! permutation states ([`perm`]), audits of the sweep results against the
//! shipped reference class tables ([`audit`]), and a catalog of named
//! states ([`catalog`]).
//!
//! Basis convention used everywhere: party 1 is the most significant digit
//! of the computational basis index, i.e. index = Σ_k digit_k · d^(n−1−k).

pub mod audit;
pub mod catalog;
pub mod chmap;
pub mod error;
pub mod measures;
pub mod perm;
pub mod polygon;
pub mod seed;
pub mod state;
pub mod weyl;

pub use error::{Error, Result};
pub use state::{haar_unitary, DensityMatrix, LocalUnitarySet, PureState};
