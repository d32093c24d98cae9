//! Adaptive Gauss-Kronrod quadrature and the latent-scale integral oracle:
//! the conditional density recomputed as the integral of a Gaussian
//! conditional against the latent-scale posterior, with no reference to the
//! closed-form conditional law.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use super::QuadratureSpec;
use crate::conditioning::{q_posterior, regression_location};
use crate::distribution::MVTParams;
use crate::error::{Error, Result};
use crate::linalg::{cholesky, mahalanobis_sq, schur_complement, Partition};
use crate::special::ln_gamma;

/// 15-point Kronrod abscissae on [0, 1] (symmetric about 0; even indices are
/// the Kronrod extension, odd indices the embedded 7-point Gauss nodes).
/// Node and weight digits kept as tabulated beyond f64 resolution.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];

/// Embedded 7-point Gauss weights.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// 15-point Kronrod weights, matching XGK.
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

/// QUADPACK-style error rescaling: the raw Gauss/Kronrod gap is sharpened
/// when the integrand varies little over the panel and floored at the
/// roundoff level of the absolute integral.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One 15-point Kronrod panel: returns the integral estimate and an error
/// estimate.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut res_kronrod = f_center * WGK[7];
    let mut res_gauss = f_center * WG[3];
    let mut res_abs = res_kronrod.abs();

    let mut values = [[0.0_f64; 2]; 7];
    for (j, pair) in values.iter_mut().enumerate() {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        *pair = [f1, f2];
        let sum = f1 + f2;
        res_kronrod += WGK[j] * sum;
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * sum;
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for (j, pair) in values.iter().enumerate() {
        res_asc += WGK[j] * ((pair[0] - mean).abs() + (pair[1] - mean).abs());
    }

    let err = rescale_error(
        (res_kronrod - res_gauss) * half,
        res_abs * half.abs(),
        res_asc * half.abs(),
    );
    (res_kronrod * half, err)
}

struct Panel {
    err: f64,
    a: f64,
    b: f64,
    value: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Adaptive integral of `f` over [a, b]: repeatedly bisects the panel with
/// the largest error estimate until the summed error meets the tolerances,
/// then reports a deterministic left-to-right sum of the panel values.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    debug_assert!(a <= b, "integration bounds out of order");
    if a == b {
        return Ok(0.0);
    }
    let (value, err) = gk15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        err,
        a,
        b,
        value,
    });
    let mut total_value = value;
    let mut total_err = err;

    while total_err > spec.abs_tol.max(spec.rel_tol * total_value.abs()) {
        if heap.len() >= spec.max_panels {
            return Err(Error::QuadratureNonConvergence);
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel narrowed to machine resolution; its error is irreducible.
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        total_value += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Panel {
            err: e1,
            a: worst.a,
            b: mid,
            value: v1,
        });
        heap.push(Panel {
            err: e2,
            a: mid,
            b: worst.b,
            value: v2,
        });
    }

    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    Ok(panels.iter().map(|p| p.value).sum())
}

/// Conditional density of the free block recomputed as the latent-scale
/// integral: the Gaussian conditional density at x₂ with scale Σ₂₂|₁/q,
/// integrated against the posterior of q given x₁.
///
/// This is the independent oracle for the closed-form conditional law: it
/// never touches the inflation factor or the adjusted degrees of freedom.
/// The domain is truncated to posterior quantiles at `spec.truncation_mass`
/// per tail, which bounds the truncation error by construction.
pub fn conditional_pdf_quadrature(
    p: &MVTParams,
    part: &Partition,
    x1: &[f64],
    x2: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64> {
    let posterior = q_posterior(p, part, x1)?;
    if x2.len() != part.block2().len() {
        return Err(Error::DimensionMismatch {
            expected: part.block2().len(),
            got: x2.len(),
        });
    }
    let location = regression_location(p, part, x1)?;
    let base = schur_complement(p.sigma(), part)?;
    let f22 = cholesky(&base)?;
    let quad = mahalanobis_sq(x2, &location, &f22)?;
    let p2 = x2.len() as f64;

    // log N(x₂; μ₂|₁, Σ₂₂|₁/q) = norm_const + (p₂/2)·log q − q·quad/2, and
    // the posterior log-density contributes its own constant plus
    // (b/2−1)·log q − cq/2; the integrand collapses to C·q^α·e^{−βq}.
    let b = posterior.b();
    let c = posterior.c();
    let ln_const = -(p2 / 2.0) * (2.0 * PI).ln() - 0.5 * f22.log_det()
        + (b / 2.0) * (c / 2.0).ln()
        - ln_gamma(b / 2.0);
    let alpha = (p2 + b) / 2.0 - 1.0;
    let beta = (c + quad) / 2.0;

    let lo = posterior.quantile(spec.truncation_mass);
    let hi = posterior.quantile(1.0 - spec.truncation_mass);
    let integrand = |q: f64| (ln_const + alpha * q.ln() - beta * q).exp();
    integrate(&integrand, lo, hi, spec)
}
