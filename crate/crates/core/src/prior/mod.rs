//! Fixed-length speed prior estimators.

mod speed;
mod tables;

pub use speed::{
    laplace_fraction, laplace_rule, quasi_conditional, speed_prior_classical, speed_prior_dj,
    speed_prior_qcount, ConditionalEstimate, PriorEstimate, PriorMethod, PriorParams, SpeedPrior,
    DEFAULT_CLASSICAL_CAP, DEFAULT_EPSILON, DEFAULT_K, DEFAULT_PRECISION,
};
pub use tables::{phase_oracles, PhaseOracles};
