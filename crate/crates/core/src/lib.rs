//! Information structure of discretized data over the lattice of variable subsets.
//!
//! The crate turns an `m × n` data matrix into an empirical joint law of `n`
//! discrete variables and computes, for every subset of variables, the joint
//! entropy `H_k`, the multivariate mutual information `I_k` and the total
//! correlation `G_k`. On top of these tables it builds information landscapes,
//! greedy extremal information paths, the undersampling dimension and a
//! shuffle-based test of k-dependence.
//!
//! All logarithms are base 2, every value is in bits.
//!
//! The crate is `no_std` with `alloc`. Parallelism is injected through the
//! [`exec::Executor`] trait so that a std companion can drive the lattice
//! enumeration on a thread pool while results stay bit-identical.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod discretize;
pub mod error;
pub mod exec;
pub mod identities;
pub mod info;
pub mod lattice;
pub mod mask;
pub mod matrix;
pub mod mobius;
pub mod oracle;
pub mod paths;
pub mod rng;
pub mod scan;
pub mod stats;

pub use discretize::{discretize, estimate_joint, make_bin_spec, BinSpec, Bins, DiscretizedSample, JointDistribution};
pub use error::{Error, Result};
pub use exec::{Executor, Sequential};
pub use info::EntropySource;
pub use lattice::{compute_landscape, Landscape, LandscapeOptions};
pub use mask::SubsetMask;
pub use matrix::{DataMatrix, Orientation};
pub use paths::{extremal_paths, Direction, InfoPath, StopReason};
