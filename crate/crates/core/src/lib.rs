//! Online convex optimization learners (FTL, FTRL, RDA, COMiD, IOL, mirror
//! descent and a batching wrapper) instrumented with regret, forward regret
//! and online stability measurements, plus checks of their closed-form
//! regret and stability bounds.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: points, feasible sets with exact projections, regularizers
//!   and Bregman divergences.
//! - [`losses`]: adversary move families with certified constants and
//!   hindsight optima.
//! - [`solver`]: certified δ-suboptimal minimization of the strongly convex
//!   inner problems every learner solves.
//! - [`algorithms`]: the learners, step-size schedules and the run loop.
//! - [`metrics`]: regret, forward regret, stability and bound verdicts.
//! - [`harness`]: experiment configuration, execution, CSV/JSON output and
//!   the acceptance suites.
//! - [`oracles`]: brute-force reference computations used to cross-check
//!   closed forms and iterative solves.

pub mod algorithms;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod losses;
pub mod metrics;
pub mod oracles;
pub mod solver;

pub use error::{Error, Result};
