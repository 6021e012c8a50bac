//! Sequential treatment assignment with exponential weighting over experts.
//!
//! The crate implements two bandit algorithms for individualised policy
//! learning — exponential weighting over a finite expert roster and its
//! two-phase variant for linear eligibility-score rules, where the infinite
//! rule class is first coarsened to a finite one by enumerating the cells of
//! a hyperplane arrangement — plus the simulation environments, benchmark
//! policies, and welfare/regret metrics needed to evaluate them.
//!
//! Module map:
//! - [`domain`]: covariates, potential outcomes, experts, trajectories.
//! - [`fexp4p`]: the finite-class algorithm (tuning, policy weights,
//!   inverse-propensity outcome estimates, weight updates, run loop).
//! - [`lpfeas`]: linear-program feasibility for signed half-space systems.
//! - [`arrangement`]: incremental cell enumeration and coarsening.
//! - [`vcexp4p`]: the two-phase coarsen-then-run algorithm.
//! - [`envs`]: log-normal synthetic and CSV-backed environments.
//! - [`bench`]: benchmark policies and welfare/regret reporting.
//! - [`rng`]: seed splitting and reproducible sampling.

pub mod arrangement;
pub mod bench;
pub mod domain;
pub mod envs;
pub mod error;
pub mod fexp4p;
pub mod lpfeas;
pub mod rng;
pub mod vcexp4p;

pub use error::{Error, Result};
