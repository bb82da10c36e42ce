//! Entropic detection of multipartite quantum steering.
//!
//! This crate evaluates entropy-based steering inequalities on tripartite
//! (and bipartite) density operators. Summed over two global measurement
//! settings, conditional Shannon entropies of the steered parties obey
//! state-independent lower bounds whenever a local-hidden-state model exists;
//! strict violations therefore certify steering, and violations of the
//! tighter hybrid-model bounds certify genuine multipartite steering.
//!
//! The main pieces:
//!
//! - [`state`]: dense complex states, tensor products, partial traces, and
//!   the GHZ/W/white-noise constructors.
//! - [`observables`]: projective eigenbases (Pauli, clock/shift) and the
//!   maximum-overlap α that feeds every bound as −log₂ α.
//! - [`dist`] / [`entropy`]: joint outcome distributions and the Shannon /
//!   Von Neumann entropy kernels (base-2 throughout).
//! - [`criteria`]: the inequality engine producing [`criteria::CriterionReport`]s
//!   with per-bound margins and verdicts.
//! - [`lhs`]: explicit finite LHS / hybrid / two-to-one models with seeded
//!   samplers; a falsification harness that must never find a violation.
//! - [`robustness`]: parameter sweeps and white-noise detection thresholds.
//! - [`io`]: JSON state/observable formats and stable CSV float printing.
//!
//! Sweep grids and model batches evaluate in parallel via rayon under the
//! default `parallel` feature; disabling it swaps in a sequential fallback
//! with identical output.

#![forbid(unsafe_code)]

pub mod criteria;
pub mod dist;
pub mod entropy;
pub mod error;
pub mod io;
pub mod lhs;
pub mod observables;
mod par;
pub mod robustness;
pub mod state;

pub use criteria::{CriterionId, CriterionReport, Verdict};
pub use error::{Error, Result};
pub use observables::{Observable, ObservablePair, PartyPairs};
pub use robustness::{BoundKind, StateFamily};
pub use state::{DensityOperator, PartyLayout, PureStateVector, State};
