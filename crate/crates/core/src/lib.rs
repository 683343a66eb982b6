//! Metric-distortion voting toolkit.
//!
//! Everything revolves around ordinal elections: `n` voters each submit a
//! strict ranking of `m` candidates, and the candidates/voters are assumed
//! to live in an unknown (pseudo)metric space consistent with those
//! rankings. The crate provides:
//!
//! * domination-graph matching rules (`PluralityMatching`, `UniformMatching`)
//!   backed by an exact max-flow Hall check,
//! * randomized plurality-score rules (`RandomDictatorship`,
//!   `SmartDictatorship`, generalized proportional-to-squares),
//! * an exact rational LP that computes the worst-case social-cost ratio of
//!   an outcome over all consistent, decisive metrics,
//! * generators for the tight lower-bound instances that accompany the
//!   theory, so the stated distortion numbers are reproducible.
//!
//! All arithmetic is exact (`num::BigRational`); nothing here rounds.

// Index loops over distance matrices touch several arrays per iteration;
// iterator rewrites make them harder to check against the math.
#![allow(clippy::needless_range_loop)]

pub mod construction;
pub mod distortion;
pub mod election;
pub mod enumerate;
pub mod matching;
pub mod metric;
pub mod parallel;
pub mod ratio;
pub mod rules;
pub mod sets;
pub mod simplex;

mod flow;

pub use election::{Election, ElectionError, WeightVector};
pub use matching::{
    DominationGraph, IntegralDominationGraph, MatchingCertificate, SeparationGraph,
};
pub use metric::{MetricSpace, MetricViolation, WeightedGraphSpec};
pub use ratio::Rat;
pub use rules::{Lottery, RuleReport};
pub use sets::IdxSet;
