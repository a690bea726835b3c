//! Negativity decay of generalized N-qudit GHZ states under independent
//! per-qudit depolarizing and phase-damping noise.
//!
//! The crate has two routes to every number it reports:
//!
//! * [`analytic`] evaluates the 2×2 block spectra of the partially
//!   transposed noisy state in closed form, and finds critical channel
//!   strengths by scanning and bisection (or by explicit formulas where they
//!   exist).
//! * [`oracle`] builds the full `d^N × d^N` density matrix, applies the
//!   channels site by site, partially transposes, and diagonalizes.
//!
//! [`sweep`] runs both over parameter grids and produces tables.

pub mod analytic;
pub mod error;
pub mod ghz;
pub mod linalg;
pub mod oracle;
pub mod qudit;
pub mod roots;
pub mod sweep;
pub mod table;

pub use analytic::{
    asymptote_balanced, critical_p_balanced_closed_form, critical_p_partition,
    epsilon_scaling_estimate, epsilon_threshold, lambda_n, negativity, negativity_profile,
    pair_block, CriticalKind, CriticalProbability, Method, NegativityReport, PairBlock,
};
pub use error::{Error, Result};
pub use ghz::{Bipartition, GhzSpec, DEFAULT_DENSE_CAP};
pub use oracle::{
    evolve, negativity_exact, oracle_critical_p, oracle_negativity, partial_transpose,
    DensityMatrix, PtMatrix,
};
pub use qudit::{ChannelKind, ChannelModel};

pub use num_complex::Complex64;

/// Crate version stamped into emitted tables.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
