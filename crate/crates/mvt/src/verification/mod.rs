//! Independent numeric oracles for the closed forms: quadrature over the
//! latent scale, the univariate Student-t CDF, Kolmogorov-Smirnov
//! statistics, and Monte Carlo independence and moment checks.

use serde::{Deserialize, Serialize};

pub mod gof;
pub mod quadrature;
pub mod student_t;
pub mod suites;

pub use gof::{
    independence_check, ks_statistic, moment_suite, two_sample_ks,
    unscaled_residual_split_check,
};
pub use quadrature::{conditional_pdf_quadrature, integrate};
pub use student_t::student_t_cdf;
pub use suites::{run_named_suite, SuiteCheck, SuiteConfig, SuiteOutcome, SUITE_NAMES};

/// Controls for the adaptive quadrature oracle.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    /// Relative tolerance on the integral.
    pub rel_tol: f64,
    /// Absolute tolerance floor, for integrals near zero.
    pub abs_tol: f64,
    /// Posterior mass dropped per tail when truncating the latent-scale
    /// domain to a finite interval.
    pub truncation_mass: f64,
    /// Subdivision budget; exceeding it is reported as non-convergence.
    pub max_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            truncation_mass: 1e-12,
            max_panels: 10_000,
        }
    }
}

/// Outcome of one goodness-of-fit check. `pass` holds exactly when
/// `statistic <= threshold`; construct through [`GofReport::new`] so the
/// equivalence cannot drift.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GofReport {
    pub statistic: f64,
    pub threshold: f64,
    pub n: u64,
    pub pass: bool,
    pub seed: Option<u64>,
}

impl GofReport {
    pub fn new(statistic: f64, threshold: f64, n: u64) -> Self {
        Self {
            statistic,
            threshold,
            n,
            pass: statistic <= threshold,
            seed: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gof_report_pass_tracks_statistic() {
        assert!(GofReport::new(0.1, 0.2, 10).pass);
        assert!(GofReport::new(0.2, 0.2, 10).pass);
        assert!(!GofReport::new(0.3, 0.2, 10).pass);
    }

    #[test]
    fn gof_report_serializes_expected_keys() {
        let text = serde_json::to_string(&GofReport::new(0.1, 0.2, 10).with_seed(42)).unwrap();
        for key in ["statistic", "threshold", "n", "pass", "seed"] {
            assert!(text.contains(key), "missing {key} in {text}");
        }
    }
}
