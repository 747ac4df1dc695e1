//! Unrestricted median-of-means tournaments for finite function classes.
//!
//! The crate selects a near-optimal predictor (possibly the midpoint of two
//! class members) from heavy-tailed data, and ships the estimators, exact
//! population oracles and verifiers needed to check the procedure's behaviour.

pub mod complexity;
pub mod datagen;
pub mod experiments;
pub mod model;
pub mod rng;
pub mod stats;
pub mod tournament;
pub mod verification;
