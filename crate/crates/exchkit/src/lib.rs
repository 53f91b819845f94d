//! Exact distributional computations for finite weighted exchangeable
//! sequences on finite alphabets.
//!
//! A length-`n` law is weighted exchangeable when dividing out per-coordinate
//! weights leaves a permutation-symmetric mass function. This crate builds
//! such laws, decomposes them into urn conditionals (the extreme points),
//! approximates them by mixtures of independent product laws, and certifies
//! the total-variation bounds that control the approximation error:
//!
//! - [`model`]: tilted models and the exchangeability test,
//! - [`permanent`]: matrix permanents (brute-force oracle and Ryser),
//! - [`extremal`]: urn conditional laws, sampling, and per-urn TV gaps,
//! - [`decompose`]: mixture decomposition over urns and reconstruction,
//! - [`bounds`]: approximation bounds, certification sweeps, LP projection,
//! - [`asymptotics`]: weight-sequence families and TV decay experiments.

pub mod asymptotics;
pub mod bounds;
pub mod decompose;
pub mod dist;
pub mod error;
pub mod extremal;
pub mod model;
pub mod permanent;
pub mod scaled;
pub mod simplex;
pub mod space;
pub mod tol;
pub mod weights;

pub use asymptotics::{
    classify_weight_sequence, tilted_polya_family, tv_decay_experiment, DecayPoint,
    SequenceClassification, WeightSequenceSpec,
};
pub use dist::{tv_distance, TupleDistribution};
pub use bounds::{
    bound_finite, bound_general, default_sweep, freedman_gap, lp_project, random_instance,
    simplex_grid, sweep_plan, verify_finite, verify_general, BoundReport, FreedmanGap, Instance,
    InstanceAnalysis, LpProjection, SweepParams,
};
pub use decompose::{build_q, decompose, reconstruct, sample_mixture, UrnMixture};
pub use error::{Error, Result};
pub use extremal::{
    collision_probability, estpq_check, estpq_min_margin, sample_urn_conditional, tv_urn_gap,
    urn_conditional, urn_weighted_iid, SampleBatch, UrnGap, EXACT_LIMIT, SAMPLE_LIMIT,
};
pub use model::{
    build_model, exchangeability_violation, is_weighted_exchangeable, OrbitSpread,
    SymmetricKernel,
};
pub use scaled::ScaledReal;
pub use space::{FiniteSpace, Urn};
pub use weights::{rescale_weights, WeightFunction, WeightProfile};
