//! The multivariate Student-t distribution object: log-density and density,
//! representation-based sampling through the latent scale, and the scaled
//! chi-square law of that latent scale.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cholesky, mahalanobis_sq, SPDFactor, SquareMatrix};
use crate::rng::RngStream;
use crate::special::{inv_reg_lower_gamma, ln_gamma, ln_gamma_diff, reg_lower_gamma};

/// Multivariate Student-t distribution t_p(μ, Σ, ν): location vector,
/// symmetric positive-definite scale matrix, and degrees of freedom.
///
/// The Cholesky factor of Σ and the log normalization constant are computed
/// once at construction; evaluation and sampling reuse them.
#[derive(Debug, Clone)]
pub struct MVTParams {
    mu: Vec<f64>,
    sigma: SquareMatrix,
    nu: f64,
    factor: SPDFactor,
    ln_norm: f64,
}

impl MVTParams {
    pub fn new(mu: Vec<f64>, sigma: SquareMatrix, nu: f64) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::InvalidParameter {
                field: "mu",
                reason: "must have at least one coordinate".into(),
            });
        }
        if let Some(i) = mu.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "mu",
                reason: format!("entry {i} is not finite"),
            });
        }
        if sigma.dim() != mu.len() {
            return Err(Error::DimensionMismatch {
                expected: mu.len(),
                got: sigma.dim(),
            });
        }
        if !nu.is_finite() || nu <= 0.0 {
            return Err(Error::InvalidParameter {
                field: "nu",
                reason: format!("must be a positive finite real, got {nu}"),
            });
        }
        let factor = cholesky(&sigma)?;
        let p = mu.len() as f64;
        // log Γ((ν+p)/2) − log Γ(ν/2), differenced stably for large ν.
        let ln_norm = ln_gamma_diff(nu / 2.0, p / 2.0)
            - (p / 2.0) * (nu * std::f64::consts::PI).ln()
            - 0.5 * factor.log_det();
        Ok(Self {
            mu,
            sigma,
            nu,
            factor,
            ln_norm,
        })
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn sigma(&self) -> &SquareMatrix {
        &self.sigma
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn factor(&self) -> &SPDFactor {
        &self.factor
    }

    /// Log-density at `x`: finite for every finite point.
    pub fn log_pdf(&self, x: &[f64]) -> Result<f64> {
        let d = mahalanobis_sq(x, &self.mu, &self.factor)?;
        let half_exp = (self.nu + self.dim() as f64) / 2.0;
        Ok(self.ln_norm - half_exp * (d / self.nu).ln_1p())
    }

    /// Density at `x`; underflows to 0 rather than erroring.
    pub fn pdf(&self, x: &[f64]) -> Result<f64> {
        Ok(self.log_pdf(x)?.exp())
    }

    /// `n` independent draws. Each draw consumes one latent scale
    /// q ~ χ²_ν/ν and then one vector of standard normals z, returning
    /// μ + L·(z/√q). One stream is consumed sequentially; callers wanting
    /// parallelism must split the stream themselves.
    pub fn sample(&self, n: usize, rng: &mut RngStream) -> Vec<Vec<f64>> {
        let mixing = ScaledChiSquare::new(self.nu, self.nu).expect("nu validated");
        let p = self.dim();
        (0..n)
            .map(|_| {
                let q = mixing.sample(rng);
                let root_q = q.sqrt();
                let y: Vec<f64> = (0..p).map(|_| rng.standard_normal() / root_q).collect();
                let ly = self.factor.mul_lower(&y);
                self.mu.iter().zip(&ly).map(|(m, v)| m + v).collect()
            })
            .collect()
    }
}

/// The scaled chi-square law χ²_b/c with density proportional to
/// w^{b/2−1}·e^{−cw/2} on w > 0; equivalently a gamma law with shape b/2 and
/// rate c/2. Houses both the latent-scale prior (b = c = ν) and its
/// posterior given an observed block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledChiSquare {
    b: f64,
    c: f64,
}

impl ScaledChiSquare {
    pub fn new(b: f64, c: f64) -> Result<Self> {
        if !b.is_finite() || b <= 0.0 {
            return Err(Error::InvalidParameter {
                field: "b",
                reason: format!("must be a positive finite real, got {b}"),
            });
        }
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::InvalidParameter {
                field: "c",
                reason: format!("must be a positive finite real, got {c}"),
            });
        }
        Ok(Self { b, c })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Log of the normalized density:
    /// (b/2)·log(c/2) − log Γ(b/2) + (b/2−1)·log w − cw/2.
    pub fn log_pdf(&self, w: f64) -> Result<f64> {
        if w.is_nan() || w <= 0.0 {
            return Err(Error::NonPositiveSupport);
        }
        let half_b = self.b / 2.0;
        Ok(half_b * (self.c / 2.0).ln() - ln_gamma(half_b) + (half_b - 1.0) * w.ln()
            - self.c * w / 2.0)
    }

    /// Distribution function via the regularized lower incomplete gamma.
    pub fn cdf(&self, w: f64) -> f64 {
        if w <= 0.0 {
            return 0.0;
        }
        reg_lower_gamma(self.b / 2.0, self.c * w / 2.0)
    }

    /// The w with cdf(w) = mass, for mass strictly inside (0, 1).
    pub fn quantile(&self, mass: f64) -> f64 {
        assert!(mass > 0.0 && mass < 1.0, "quantile mass must be in (0,1)");
        inv_reg_lower_gamma(self.b / 2.0, mass) * 2.0 / self.c
    }

    pub fn mean(&self) -> f64 {
        self.b / self.c
    }

    pub fn variance(&self) -> f64 {
        2.0 * self.b / (self.c * self.c)
    }

    /// One draw, via a gamma variate with shape b/2 and rate c/2. The
    /// rejection sampler is valid for every real shape > 0.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        sample_std_gamma(self.b / 2.0, rng) * 2.0 / self.c
    }
}

/// Gamma(shape, scale 1) draw by squeeze/rejection from a squashed normal;
/// shapes below 1 are boosted by one and corrected with a power of a
/// uniform.
fn sample_std_gamma(shape: f64, rng: &mut RngStream) -> f64 {
    debug_assert!(shape > 0.0);
    if shape < 1.0 {
        let g = sample_std_gamma(shape + 1.0, rng);
        let u = rng.uniform();
        return g * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = rng.standard_normal();
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v3 = v * v * v;
        let u = rng.uniform();
        // Cheap squeeze accepts the bulk; the exact log test settles the rest.
        if u < 1.0 - 0.0331 * x * x * x * x {
            return d * v3;
        }
        if u.ln() < 0.5 * x * x + d * (1.0 - v3 + v3.ln()) {
            return d * v3;
        }
    }
}

/// JSON parameter document: `{"mu": [..], "sigma": [[..],[..]], "nu": 5.0}`
/// with the scale matrix as row-major nested arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    pub mu: Vec<f64>,
    pub sigma: Vec<Vec<f64>>,
    pub nu: f64,
}

impl ParamsDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain numeric document")
    }

    /// Validates the document and builds the distribution, reporting the
    /// first violated invariant by field name.
    pub fn try_into_params(self) -> Result<MVTParams> {
        if self.sigma.len() != self.mu.len() {
            return Err(Error::InvalidParameter {
                field: "sigma",
                reason: format!(
                    "has {} rows but mu has {} coordinates",
                    self.sigma.len(),
                    self.mu.len()
                ),
            });
        }
        for (i, row) in self.sigma.iter().enumerate() {
            if row.len() != self.mu.len() {
                return Err(Error::InvalidParameter {
                    field: "sigma",
                    reason: format!(
                        "row {i} has length {} but mu has {} coordinates",
                        row.len(),
                        self.mu.len()
                    ),
                });
            }
        }
        let sigma = SquareMatrix::from_rows(&self.sigma).map_err(|e| match e {
            Error::InvalidParameter { reason, .. } => Error::InvalidParameter {
                field: "sigma",
                reason,
            },
            other => other,
        })?;
        MVTParams::new(self.mu, sigma, self.nu)
    }

    pub fn from_params(p: &MVTParams) -> Self {
        Self {
            mu: p.mu().to_vec(),
            sigma: p.sigma().to_rows(),
            nu: p.nu(),
        }
    }
}
