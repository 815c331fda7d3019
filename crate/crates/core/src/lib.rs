//! Correlation-based evaluation of rank-threshold classifiers.
//!
//! A ranking plus a binary label defines a sieve at every rank threshold.
//! ROC curves of such sieves can look excellent when positives are rare,
//! while the correlation between sieve membership and the label stays small.
//! This crate computes both views, together with the supporting statistics
//! (mid-rank Spearman, Fisher intervals, the best attainable rank
//! correlation for a binary label) and a Monte Carlo simulator for the
//! Q-model of creative careers, where a work's impact is `c10 = Q * P`.
//!
//! - [`corrstats`]: correlation primitives
//! - [`sieve`]: threshold sweeps, curves and threshold selection
//! - [`qmodel`]: seeded career simulation and synthetic prize experiments
//! - [`dataio`]: CSV input, the embedded Nobel points, reports and SVG
//! - [`reproduce`]: the table of published reference numbers
//! - [`cli`]: the `luckmeter` command

pub mod cli;
pub mod corrstats;
pub mod dataio;
pub mod qmodel;
pub mod reproduce;
pub mod sieve;
