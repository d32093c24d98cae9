//! Conditioning for the multivariate Student-t: marginalization, the exact
//! conditional law, the latent-scale posterior, the two-stage conditional
//! sampler, the unnormalized conditional log-density, and the independence
//! residual.
//!
//! Conditioning on observed coordinates x₁ produces another Student-t for
//! the free coordinates: location is the linear regression μ₂|₁, the scale
//! is the Schur complement Σ₂₂|₁ inflated by (ν+d₁)/(ν+p₁) where d₁ is the
//! observed block's squared Mahalanobis distance, and the degrees of freedom
//! rise to ν+p₁.

use serde::{Deserialize, Serialize};

use crate::distribution::{MVTParams, ScaledChiSquare};
use crate::error::{Error, Result};
use crate::linalg::{
    cholesky, gather_vec, mahalanobis_sq, schur_complement, Partition, SquareMatrix,
};
use crate::rng::RngStream;

/// Ingredients of the conditional law, kept separate (rather than only the
/// final scale product) so each derivation step is checkable on its own.
///
/// The conditional law is t(location, inflation·base_scale, dof).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionalSpec {
    /// Regression location μ₂|₁ = μ₂ + Σ₂₁Σ₁₁⁻¹(x₁−μ₁).
    pub location: Vec<f64>,
    /// Schur complement Σ₂₂|₁ = Σ₂₂ − Σ₂₁Σ₁₁⁻¹Σ₁₂.
    pub base_scale: SquareMatrix,
    /// Scale inflation (ν+d₁)/(ν+p₁); exceeds 1 for extreme observations,
    /// dips below 1 near the center.
    pub inflation: f64,
    /// Conditional degrees of freedom ν+p₁.
    pub dof: f64,
    /// Squared Mahalanobis distance of the observed block.
    pub d1: f64,
}

impl ConditionalSpec {
    /// The full conditional scale matrix inflation·Σ₂₂|₁.
    pub fn scale(&self) -> SquareMatrix {
        self.base_scale.scaled(self.inflation)
    }
}

fn check_observed(part: &Partition, p: &MVTParams, x1: &[f64]) -> Result<()> {
    part.check_dim(p.dim())?;
    if x1.len() != part.block1().len() {
        return Err(Error::DimensionMismatch {
            expected: part.block1().len(),
            got: x1.len(),
        });
    }
    if let Some(i) = x1.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter {
            field: "x1",
            reason: format!("entry {i} is not finite"),
        });
    }
    Ok(())
}

fn check_free(part: &Partition, x2: &[f64]) -> Result<()> {
    if x2.len() != part.block2().len() {
        return Err(Error::DimensionMismatch {
            expected: part.block2().len(),
            got: x2.len(),
        });
    }
    Ok(())
}

/// Precomputed pieces for conditioning repeatedly on one partition: the
/// observed-block factor, centered blocks, and the cross-covariance rows.
/// The per-observation work reduces to two triangular solves.
pub(crate) struct BlockSolver {
    f11: crate::linalg::SPDFactor,
    mu1: Vec<f64>,
    mu2: Vec<f64>,
    sigma21: Vec<Vec<f64>>,
    nu: f64,
    p1: f64,
}

impl BlockSolver {
    pub(crate) fn new(p: &MVTParams, part: &Partition) -> Result<Self> {
        let b1 = part.block1();
        let b2 = part.block2();
        Ok(Self {
            f11: cholesky(&p.sigma().gather(b1, b1))?,
            mu1: gather_vec(p.mu(), b1),
            mu2: gather_vec(p.mu(), b2),
            sigma21: b2
                .iter()
                .map(|&i| b1.iter().map(|&j| p.sigma().get(i, j)).collect())
                .collect(),
            nu: p.nu(),
            p1: b1.len() as f64,
        })
    }

    /// Regression location μ₂|₁ and observed-block distance d₁ for one
    /// observation.
    pub(crate) fn locate(&self, x1: &[f64]) -> (Vec<f64>, f64) {
        let diff: Vec<f64> = x1.iter().zip(&self.mu1).map(|(a, b)| a - b).collect();
        let half = self.f11.forward_sub(&diff);
        let d1 = half.iter().map(|v| v * v).sum();
        let w = self.f11.backward_sub(&half);
        let loc = self
            .mu2
            .iter()
            .zip(&self.sigma21)
            .map(|(m, row)| m + row.iter().zip(&w).map(|(s, wj)| s * wj).sum::<f64>())
            .collect();
        (loc, d1)
    }

    /// Scaled residual √((ν+p₁)/(ν+d₁))·(x₂ − μ₂|₁) and d₁.
    pub(crate) fn residual(&self, x1: &[f64], x2: &[f64]) -> (Vec<f64>, f64) {
        let (loc, d1) = self.locate(x1);
        let scale = ((self.nu + self.p1) / (self.nu + d1)).sqrt();
        (
            x2.iter().zip(&loc).map(|(a, b)| scale * (a - b)).collect(),
            d1,
        )
    }
}

/// Distribution of the observed block alone: t(μ₁, Σ₁₁, ν) with the
/// coordinates in the partition's observed order.
pub fn marginal(p: &MVTParams, part: &Partition) -> Result<MVTParams> {
    part.check_dim(p.dim())?;
    let b1 = part.block1();
    if b1.is_empty() {
        return Err(Error::InvalidPartition(
            "observed block is empty; nothing to marginalize onto".into(),
        ));
    }
    MVTParams::new(
        gather_vec(p.mu(), b1),
        p.sigma().gather(b1, b1),
        p.nu(),
    )
}

/// Linear regression of the free block on the observed block:
/// μ₂|₁ = μ₂ + Σ₂₁Σ₁₁⁻¹(x₁−μ₁).
pub fn regression_location(p: &MVTParams, part: &Partition, x1: &[f64]) -> Result<Vec<f64>> {
    check_observed(part, p, x1)?;
    Ok(BlockSolver::new(p, part)?.locate(x1).0)
}

/// The conditional law of the free block given observed values, both as its
/// separate ingredients and as a ready-to-use distribution.
///
/// With an empty observed block this is the identity: the original law comes
/// back with inflation 1 and unchanged degrees of freedom.
pub fn condition(
    p: &MVTParams,
    part: &Partition,
    x1: &[f64],
) -> Result<(ConditionalSpec, MVTParams)> {
    check_observed(part, p, x1)?;
    let p1 = part.block1().len() as f64;
    let (location, d1) = BlockSolver::new(p, part)?.locate(x1);
    let base_scale = schur_complement(p.sigma(), part)?;
    let inflation = (p.nu() + d1) / (p.nu() + p1);
    let dof = p.nu() + p1;
    let params = MVTParams::new(location.clone(), base_scale.scaled(inflation), dof)?;
    let spec = ConditionalSpec {
        location,
        base_scale,
        inflation,
        dof,
        d1,
    };
    Ok((spec, params))
}

/// Posterior of the latent scale given the observed block:
/// q | x₁ ~ χ²_{ν+p₁} / (ν+d₁). With an empty observed block this is the
/// prior χ²_ν/ν.
pub fn q_posterior(p: &MVTParams, part: &Partition, x1: &[f64]) -> Result<ScaledChiSquare> {
    check_observed(part, p, x1)?;
    let p1 = part.block1().len() as f64;
    let d1 = BlockSolver::new(p, part)?.locate(x1).1;
    ScaledChiSquare::new(p.nu() + p1, p.nu() + d1)
}

/// `n` conditional draws by the two-stage scheme: draw a latent scale w from
/// the posterior, then a normal with location μ₂|₁ and scale Σ₂₂|₁/w.
/// Distributionally equal to sampling from `condition(..)`'s law.
pub fn conditional_sample_augmented(
    p: &MVTParams,
    part: &Partition,
    x1: &[f64],
    n: usize,
    rng: &mut RngStream,
) -> Result<Vec<Vec<f64>>> {
    check_observed(part, p, x1)?;
    let p1 = part.block1().len() as f64;
    let (location, d1) = BlockSolver::new(p, part)?.locate(x1);
    let posterior = ScaledChiSquare::new(p.nu() + p1, p.nu() + d1)?;
    let base_scale = schur_complement(p.sigma(), part)?;
    let factor = cholesky(&base_scale)?;
    let p2 = location.len();
    Ok((0..n)
        .map(|_| {
            let w = posterior.sample(rng);
            let root_w = w.sqrt();
            let y: Vec<f64> = (0..p2).map(|_| rng.standard_normal() / root_w).collect();
            let ly = factor.mul_lower(&y);
            location.iter().zip(&ly).map(|(m, v)| m + v).collect()
        })
        .collect())
}

/// Key term of the conditional log-density, unnormalized:
/// −((ν+p₁+p₂)/2)·log{1 + (ν+p₁)⁻¹·rᵀ[((ν+d₁)/(ν+p₁))·Σ₂₂|₁]⁻¹·r} with
/// r = x₂ − μ₂|₁. Differs from the conditional law's log-density by a
/// constant in x₂ (a function of x₁ alone).
pub fn unnormalized_conditional_logpdf(
    p: &MVTParams,
    part: &Partition,
    x1: &[f64],
    x2: &[f64],
) -> Result<f64> {
    check_free(part, x2)?;
    let (spec, _) = condition(p, part, x1)?;
    let factor = cholesky(&spec.scale())?;
    let quad = mahalanobis_sq(x2, &spec.location, &factor)?;
    let p1 = part.block1().len() as f64;
    let p2 = part.block2().len() as f64;
    Ok(-((p.nu() + p1 + p2) / 2.0) * (quad / (p.nu() + p1)).ln_1p())
}

/// Scaled residual √((ν+p₁)/(ν+d₁))·(x₂ − μ₂|₁). When (x₁, x₂) is a joint
/// draw, the residual follows t(0, Σ₂₂|₁, ν+p₁) independently of x₁; the
/// scaling is what removes the dependence.
pub fn independence_residual(
    p: &MVTParams,
    part: &Partition,
    x1: &[f64],
    x2: &[f64],
) -> Result<Vec<f64>> {
    check_observed(part, p, x1)?;
    check_free(part, x2)?;
    Ok(BlockSolver::new(p, part)?.residual(x1, x2).0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol * expected.abs().max(1.0),
            "actual {actual} vs expected {expected}"
        );
    }

    fn worked_params() -> MVTParams {
        let sigma = SquareMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        MVTParams::new(vec![0.0, 0.0], sigma, 5.0).unwrap()
    }

    #[test]
    fn marginal_identity_scale() {
        let p = MVTParams::new(vec![0.5, -0.5], SquareMatrix::identity(2), 4.0).unwrap();
        let part = Partition::new(2, &[0]).unwrap();
        let m = marginal(&p, &part).unwrap();
        assert_eq!(m.mu(), &[0.5]);
        assert_eq!(m.sigma().to_rows(), vec![vec![1.0]]);
        assert_eq!(m.nu(), 4.0);
    }

    #[test]
    fn marginal_keeps_observed_block_scale() {
        let part = Partition::new(2, &[0]).unwrap();
        let m = marginal(&worked_params(), &part).unwrap();
        assert_eq!(m.sigma().to_rows(), vec![vec![2.0]]);
        assert_eq!(m.nu(), 5.0);
    }

    #[test]
    fn marginal_permuted_keep_reorders() {
        let p = MVTParams::new(
            vec![1.0, 2.0, 3.0],
            SquareMatrix::from_rows(&[
                vec![2.0, 0.5, 0.25],
                vec![0.5, 3.0, 1.0],
                vec![0.25, 1.0, 4.0],
            ])
            .unwrap(),
            6.0,
        )
        .unwrap();
        let part = Partition::new(3, &[2, 0]).unwrap();
        let m = marginal(&p, &part).unwrap();
        assert_eq!(m.mu(), &[3.0, 1.0]);
        assert_eq!(
            m.sigma().to_rows(),
            vec![vec![4.0, 0.25], vec![0.25, 2.0]]
        );
    }

    #[test]
    fn marginal_rejects_empty_keep() {
        let part = Partition::new(2, &[]).unwrap();
        assert!(matches!(
            marginal(&worked_params(), &part),
            Err(Error::InvalidPartition(_))
        ));
    }

    #[test]
    fn regression_location_cases() {
        let p = worked_params();
        let part = Partition::new(2, &[0]).unwrap();
        // Observation at the marginal center leaves the location alone.
        assert_eq!(regression_location(&p, &part, &[0.0]).unwrap(), vec![0.0]);
        // Worked case: μ₂|₁ = 0 + 1·(1/2)·2 = 1.
        let loc = regression_location(&p, &part, &[2.0]).unwrap();
        assert_close(loc[0], 1.0, 1e-14);

        // Uncorrelated blocks ignore the observation.
        let block_diag = MVTParams::new(
            vec![1.0, -1.0],
            SquareMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 3.0]]).unwrap(),
            5.0,
        )
        .unwrap();
        assert_eq!(
            regression_location(&block_diag, &part, &[17.0]).unwrap(),
            vec![-1.0]
        );
    }

    #[test]
    fn condition_worked_example() {
        let p = worked_params();
        let part = Partition::new(2, &[0]).unwrap();
        let (spec, cond) = condition(&p, &part, &[2.0]).unwrap();
        assert_close(spec.d1, 2.0, 1e-14);
        assert_close(spec.location[0], 1.0, 1e-14);
        assert_eq!(spec.base_scale.to_rows(), vec![vec![2.5]]);
        assert_close(spec.inflation, 7.0 / 6.0, 1e-14);
        assert_eq!(spec.dof, 6.0);
        assert_close(spec.scale().get(0, 0), 35.0 / 12.0, 1e-14);
        assert_eq!(cond.nu(), 6.0);
        assert_close(cond.sigma().get(0, 0), 35.0 / 12.0, 1e-14);
    }

    #[test]
    fn condition_at_center_deflates() {
        let p = MVTParams::new(
            vec![1.0, -1.0],
            SquareMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 3.0]]).unwrap(),
            5.0,
        )
        .unwrap();
        let part = Partition::new(2, &[0]).unwrap();
        let (spec, cond) = condition(&p, &part, &[1.0]).unwrap();
        assert_eq!(spec.d1, 0.0);
        assert_close(spec.inflation, 5.0 / 6.0, 1e-15);
        assert_eq!(spec.location, vec![-1.0]);
        assert_eq!(spec.base_scale.to_rows(), vec![vec![3.0]]);
        assert_close(cond.sigma().get(0, 0), 2.5, 1e-14);
        assert_eq!(cond.nu(), 6.0);
    }

    #[test]
    fn condition_cauchy_gains_degrees_of_freedom() {
        let p = MVTParams::new(vec![0.0, 0.0], worked_params().sigma().clone(), 1.0).unwrap();
        let part = Partition::new(2, &[0]).unwrap();
        let (spec, _) = condition(&p, &part, &[0.7]).unwrap();
        assert_eq!(spec.dof, 2.0);
    }

    #[test]
    fn condition_on_nothing_is_identity() {
        let p = worked_params();
        let part = Partition::new(2, &[]).unwrap();
        let (spec, cond) = condition(&p, &part, &[]).unwrap();
        assert_eq!(spec.d1, 0.0);
        assert_eq!(spec.inflation, 1.0);
        assert_eq!(spec.dof, 5.0);
        assert_eq!(spec.location, p.mu());
        assert_eq!(spec.base_scale.to_rows(), p.sigma().to_rows());
        let x = [0.4, -1.9];
        assert_eq!(cond.log_pdf(&x).unwrap(), p.log_pdf(&x).unwrap());
    }

    #[test]
    fn q_posterior_cases() {
        let p = worked_params();
        let part = Partition::new(2, &[0]).unwrap();
        let at_center = q_posterior(&p, &part, &[0.0]).unwrap();
        assert_eq!(at_center.b(), 6.0);
        assert_eq!(at_center.c(), 5.0);

        let worked = q_posterior(&p, &part, &[2.0]).unwrap();
        assert_eq!(worked.b(), 6.0);
        assert_close(worked.c(), 7.0, 1e-14);

        // Empty observed block: the prior χ²_ν/ν.
        let empty = Partition::new(2, &[]).unwrap();
        let prior = q_posterior(&p, &empty, &[]).unwrap();
        assert_eq!(prior.b(), 5.0);
        assert_eq!(prior.c(), 5.0);
    }

    #[test]
    fn two_stage_sampler_is_deterministic_and_centered() {
        let p = worked_params();
        let part = Partition::new(2, &[0]).unwrap();
        let a =
            conditional_sample_augmented(&p, &part, &[2.0], 4, &mut RngStream::from_seed(21))
                .unwrap();
        let b =
            conditional_sample_augmented(&p, &part, &[2.0], 4, &mut RngStream::from_seed(21))
                .unwrap();
        assert_eq!(a, b);

        let n = 200_000;
        let draws =
            conditional_sample_augmented(&p, &part, &[2.0], n, &mut RngStream::from_seed(8))
                .unwrap();
        let mean = draws.iter().map(|x| x[0]).sum::<f64>() / n as f64;
        // Conditional law is t(1, 35/12, 6) with variance (35/12)·(6/4).
        let se = ((35.0 / 12.0) * 1.5 / n as f64).sqrt();
        assert!((mean - 1.0).abs() < 4.0 * se, "mean {mean}");
    }

    #[test]
    fn unnormalized_matches_worked_value_and_mode() {
        let p = worked_params();
        let part = Partition::new(2, &[0]).unwrap();
        // At the conditional location the log term vanishes.
        let loc = regression_location(&p, &part, &[2.0]).unwrap();
        assert_eq!(
            unnormalized_conditional_logpdf(&p, &part, &[2.0], &loc).unwrap(),
            0.0
        );
        // Frozen from direct arithmetic: −3.5·log(1 + (1/6)·(12/35)).
        let got = unnormalized_conditional_logpdf(&p, &part, &[2.0], &[0.0]).unwrap();
        assert_close(got, -0.19449447904183767, 1e-13);
    }

    #[test]
    fn unnormalized_differs_from_density_by_constant() {
        let p = worked_params();
        let part = Partition::new(2, &[0]).unwrap();
        let (_, cond) = condition(&p, &part, &[2.0]).unwrap();
        let gaps: Vec<f64> = (-20..=20)
            .map(|k| {
                let x2 = [k as f64 * 0.45];
                unnormalized_conditional_logpdf(&p, &part, &[2.0], &x2).unwrap()
                    - cond.log_pdf(&x2).unwrap()
            })
            .collect();
        let max = gaps.iter().cloned().fold(f64::MIN, f64::max);
        let min = gaps.iter().cloned().fold(f64::MAX, f64::min);
        assert!(max - min < 1e-12, "spread {}", max - min);
    }

    #[test]
    fn residual_cases() {
        let p = worked_params();
        let part = Partition::new(2, &[0]).unwrap();
        let loc = regression_location(&p, &part, &[2.0]).unwrap();
        assert_eq!(
            independence_residual(&p, &part, &[2.0], &loc).unwrap(),
            vec![0.0]
        );
        // d₁ = 0 leaves the √((ν+p₁)/ν) factor.
        let r = independence_residual(&p, &part, &[0.0], &[1.0]).unwrap();
        assert_close(r[0], (6.0_f64 / 5.0).sqrt(), 1e-15);
    }

    #[test]
    fn dimension_and_finiteness_checks() {
        let p = worked_params();
        let part = Partition::new(2, &[0]).unwrap();
        assert!(matches!(
            condition(&p, &part, &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            condition(&p, &part, &[f64::NAN]),
            Err(Error::InvalidParameter { field: "x1", .. })
        ));
        assert!(matches!(
            independence_residual(&p, &part, &[1.0], &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        let other = Partition::new(3, &[0]).unwrap();
        assert!(matches!(
            condition(&p, &other, &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn conditional_spec_json_round_trip() {
        let p = worked_params();
        let part = Partition::new(2, &[0]).unwrap();
        let (spec, _) = condition(&p, &part, &[2.0]).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        for key in ["location", "base_scale", "inflation", "dof", "d1"] {
            assert!(text.contains(key), "missing {key} in {text}");
        }
        let back: ConditionalSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back.location, spec.location);
        assert_eq!(back.dof, spec.dof);
        assert_eq!(back.base_scale.to_rows(), spec.base_scale.to_rows());
    }
}
