//! Multivariate Student-t distributions: exact densities, representation
//! based sampling, marginals, closed-form conditionals, the latent-scale
//! posterior, and a verification harness that checks the closed forms
//! against independent numeric oracles.

pub mod conditioning;
pub mod distribution;
pub mod error;
pub mod linalg;
pub mod rng;
pub mod special;
pub mod verification;

pub use conditioning::{
    condition, conditional_sample_augmented, independence_residual, marginal, q_posterior,
    regression_location, unnormalized_conditional_logpdf, ConditionalSpec,
};
pub use distribution::{MVTParams, ParamsDoc, ScaledChiSquare};
pub use error::{Error, Result};
pub use linalg::{
    cholesky, mahalanobis_sq, schur_complement, solve_spd, Partition, SPDFactor, SquareMatrix,
};
pub use rng::RngStream;
pub use verification::{
    conditional_pdf_quadrature, independence_check, ks_statistic, moment_suite, run_named_suite,
    student_t_cdf, two_sample_ks, GofReport, QuadratureSpec, SuiteCheck, SuiteConfig,
    SuiteOutcome, SUITE_NAMES,
};
