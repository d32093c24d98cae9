//! Named verification suites bundling the oracles and diagnostics into
//! deterministic, seedable batteries. The command-line front end and the
//! acceptance tests both run these.

use serde::Serialize;

use super::gof::{
    independence_check, ks_statistic, moment_suite, two_sample_ks, unscaled_residual_split_check,
};
use super::quadrature::conditional_pdf_quadrature;
use super::student_t::student_t_cdf;
use super::{GofReport, QuadratureSpec};
use crate::conditioning::{condition, conditional_sample_augmented, marginal, unnormalized_conditional_logpdf};
use crate::distribution::MVTParams;
use crate::error::{Error, Result};
use crate::linalg::{gather_vec, Partition, SquareMatrix};
use crate::rng::RngStream;

/// Suite tokens accepted by [`run_named_suite`]; `all` runs every other
/// entry in order.
pub const SUITE_NAMES: [&str; 7] = [
    "chain-rule",
    "proportionality",
    "quadrature",
    "sampling-gof",
    "independence",
    "moments",
    "all",
];

const EXECUTABLE_SUITES: [&str; 6] = [
    "chain-rule",
    "proportionality",
    "quadrature",
    "sampling-gof",
    "independence",
    "moments",
];

/// Sizes and the master seed for one suite run. Monte Carlo checks need
/// `mc_samples` ≥ 10⁵ to satisfy the diagnostics' sample-size contracts.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Draw count per goodness-of-fit check.
    pub mc_samples: usize,
    /// Randomized-instance count for the identity and oracle suites.
    pub instances: usize,
    /// Instance count for the proportionality suite; each instance scans a
    /// grid of `grid_points` free-block points.
    pub proportionality_instances: usize,
    pub grid_points: usize,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            mc_samples: 200_000,
            instances: 1000,
            proportionality_instances: 100,
            grid_points: 1000,
        }
    }

    /// Sizes pinned to the acceptance gate: 10⁶ draws per Monte Carlo check.
    pub fn strict(seed: u64) -> Self {
        Self {
            mc_samples: 1_000_000,
            ..Self::new(seed)
        }
    }
}

/// One named check inside a suite. A skipped check carries the reason and
/// counts as passing; an executed check carries its report.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteCheck {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<GofReport>,
}

impl SuiteCheck {
    fn from_report(name: &str, report: GofReport) -> Self {
        Self {
            name: name.into(),
            pass: report.pass,
            skipped: None,
            report: Some(report),
        }
    }

    /// A negative control passes exactly when the underlying check fails.
    fn negative_control(name: &str, report: GofReport) -> Self {
        Self {
            name: name.into(),
            pass: !report.pass,
            skipped: None,
            report: Some(report),
        }
    }

    fn skip(name: &str, reason: String) -> Self {
        Self {
            name: name.into(),
            pass: true,
            skipped: Some(reason),
            report: None,
        }
    }
}

/// Result of one suite: passes only if every check passes.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<SuiteCheck>,
}

impl SuiteOutcome {
    fn new(suite: &str, seed: u64, checks: Vec<SuiteCheck>) -> Self {
        Self {
            suite: suite.into(),
            seed,
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }
}

/// Runs the named suite, or every suite for `all`. `user` swaps the built-in
/// battery for checks on the given distribution; checks that need structure
/// the distribution lacks (a second coordinate, a finite moment target)
/// become skip entries rather than failures.
pub fn run_named_suite(
    name: &str,
    user: Option<&MVTParams>,
    cfg: &SuiteConfig,
) -> Result<Vec<SuiteOutcome>> {
    if name == "all" {
        return Ok(EXECUTABLE_SUITES
            .iter()
            .map(|s| run_single(s, user, cfg))
            .collect());
    }
    if EXECUTABLE_SUITES.contains(&name) {
        return Ok(vec![run_single(name, user, cfg)]);
    }
    Err(Error::Parse(format!(
        "unknown suite '{name}'; expected one of {}",
        SUITE_NAMES.join(", ")
    )))
}

fn run_single(name: &str, user: Option<&MVTParams>, cfg: &SuiteConfig) -> SuiteOutcome {
    match name {
        "chain-rule" => chain_rule_suite(user, cfg),
        "proportionality" => proportionality_suite(user, cfg),
        "quadrature" => quadrature_suite(user, cfg),
        "sampling-gof" => sampling_gof_suite(user, cfg),
        "independence" => independence_suite(user, cfg),
        "moments" => moments_suite(user, cfg),
        other => unreachable!("unvalidated suite name {other}"),
    }
}

const NU_GRID: [f64; 5] = [0.5, 1.0, 2.0, 5.0, 30.0];

/// Uniform index in 0..k; uniforms are strictly below 1 so the floor stays
/// in range.
fn pick(rng: &mut RngStream, k: usize) -> usize {
    ((rng.uniform() * k as f64) as usize).min(k - 1)
}

fn random_spd(rng: &mut RngStream, dim: usize) -> SquareMatrix {
    let mut a = SquareMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            a.set(i, j, 2.0 * rng.uniform() - 1.0);
        }
    }
    // AAᵀ + I keeps the spectrum at least 1, exactly symmetric by storage.
    let mut s = SquareMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..=i {
            let mut v: f64 = (0..dim).map(|k| a.get(i, k) * a.get(j, k)).sum();
            if i == j {
                v += 1.0;
            }
            s.set(i, j, v);
            s.set(j, i, v);
        }
    }
    s
}

/// Random partition of `dim` coordinates with both blocks nonempty.
fn random_partition(rng: &mut RngStream, dim: usize) -> Partition {
    let mask = 1 + pick(rng, (1 << dim) - 2);
    let observed: Vec<usize> = (0..dim).filter(|i| mask >> i & 1 == 1).collect();
    Partition::new(dim, &observed).expect("mask keeps both blocks nonempty")
}

fn random_point(rng: &mut RngStream, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| 10.0 * rng.uniform() - 5.0).collect()
}

fn random_instance(
    rng: &mut RngStream,
    p_lo: usize,
    p_hi: usize,
) -> (MVTParams, Partition, Vec<f64>) {
    let p = p_lo + pick(rng, p_hi - p_lo + 1);
    let nu = NU_GRID[pick(rng, NU_GRID.len())];
    let mu: Vec<f64> = (0..p).map(|_| 4.0 * rng.uniform() - 2.0).collect();
    let sigma = random_spd(rng, p);
    let part = random_partition(rng, p);
    let x = random_point(rng, p);
    let params = MVTParams::new(mu, sigma, nu).expect("randomized scale matrix is SPD");
    (params, part, x)
}

/// Instance stream for the identity suites: either fresh randomized
/// distributions or the user's distribution under random partitions and
/// points. Returns None when the user's distribution cannot be partitioned.
fn instance_for(
    user: Option<&MVTParams>,
    rng: &mut RngStream,
    p_lo: usize,
    p_hi: usize,
) -> Option<(MVTParams, Partition, Vec<f64>)> {
    match user {
        None => Some(random_instance(rng, p_lo, p_hi)),
        Some(p) if p.dim() >= 2 => {
            let part = random_partition(rng, p.dim());
            let x = random_point(rng, p.dim());
            Some((p.clone(), part, x))
        }
        Some(_) => None,
    }
}

const UNIVARIATE_SKIP: &str = "distribution is univariate; no partition with two nonempty blocks";

fn chain_rule_suite(user: Option<&MVTParams>, cfg: &SuiteConfig) -> SuiteOutcome {
    let name = "joint log-density equals marginal plus conditional";
    let mut rng = RngStream::from_seed(cfg.seed);
    let mut worst = 0.0_f64;
    for _ in 0..cfg.instances {
        let Some((params, part, x)) = instance_for(user, &mut rng, 2, 6) else {
            let check = SuiteCheck::skip(name, UNIVARIATE_SKIP.into());
            return SuiteOutcome::new("chain-rule", cfg.seed, vec![check]);
        };
        let x1 = gather_vec(&x, part.block1());
        let x2 = gather_vec(&x, part.block2());
        let joint = params.log_pdf(&x).expect("point has the joint dimension");
        let marg = marginal(&params, &part)
            .expect("observed block is nonempty")
            .log_pdf(&x1)
            .expect("observed point has the observed dimension");
        let cond = condition(&params, &part, &x1)
            .expect("partition and point are consistent")
            .1
            .log_pdf(&x2)
            .expect("free point has the free dimension");
        worst = worst.max((joint - marg - cond).abs());
    }
    let report = GofReport::new(worst, 1e-10, cfg.instances as u64).with_seed(cfg.seed);
    SuiteOutcome::new(
        "chain-rule",
        cfg.seed,
        vec![SuiteCheck::from_report(name, report)],
    )
}

fn proportionality_suite(user: Option<&MVTParams>, cfg: &SuiteConfig) -> SuiteOutcome {
    let name = "unnormalized conditional is a constant shift of the conditional log-density";
    let mut rng = RngStream::from_seed(cfg.seed);
    let mut worst_spread = 0.0_f64;
    for _ in 0..cfg.proportionality_instances {
        let Some((params, part, x)) = instance_for(user, &mut rng, 2, 5) else {
            let check = SuiteCheck::skip(name, UNIVARIATE_SKIP.into());
            return SuiteOutcome::new("proportionality", cfg.seed, vec![check]);
        };
        let x1 = gather_vec(&x, part.block1());
        let cond = condition(&params, &part, &x1)
            .expect("partition and point are consistent")
            .1;
        let p2 = part.block2().len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for _ in 0..cfg.grid_points {
            let x2: Vec<f64> = (0..p2).map(|_| 12.0 * rng.uniform() - 6.0).collect();
            let gap = unnormalized_conditional_logpdf(&params, &part, &x1, &x2)
                .expect("free point has the free dimension")
                - cond.log_pdf(&x2).expect("free point has the free dimension");
            lo = lo.min(gap);
            hi = hi.max(gap);
        }
        worst_spread = worst_spread.max(hi - lo);
    }
    let n = (cfg.proportionality_instances * cfg.grid_points) as u64;
    let report = GofReport::new(worst_spread, 1e-10, n).with_seed(cfg.seed);
    SuiteOutcome::new(
        "proportionality",
        cfg.seed,
        vec![SuiteCheck::from_report(name, report)],
    )
}

fn quadrature_suite(user: Option<&MVTParams>, cfg: &SuiteConfig) -> SuiteOutcome {
    let name = "latent-scale integral matches the closed-form conditional density";
    let mut rng = RngStream::from_seed(cfg.seed);
    // Densities well below 1 are routine here; drop the absolute floor so
    // the relative tolerance governs the oracle's accuracy.
    let spec = QuadratureSpec {
        abs_tol: 1e-16,
        ..QuadratureSpec::default()
    };
    let mut worst_rel = 0.0_f64;
    for _ in 0..cfg.instances {
        let Some((params, part, x)) = instance_for(user, &mut rng, 2, 4) else {
            let check = SuiteCheck::skip(name, UNIVARIATE_SKIP.into());
            return SuiteOutcome::new("quadrature", cfg.seed, vec![check]);
        };
        let x1 = gather_vec(&x, part.block1());
        let x2 = gather_vec(&x, part.block2());
        let closed = condition(&params, &part, &x1)
            .expect("partition and point are consistent")
            .1
            .pdf(&x2)
            .expect("free point has the free dimension");
        let oracle = conditional_pdf_quadrature(&params, &part, &x1, &x2, &spec)
            .expect("smooth unimodal integrand converges within the budget");
        worst_rel = worst_rel.max((oracle - closed).abs() / closed);
    }
    let report = GofReport::new(worst_rel, 1e-6, cfg.instances as u64).with_seed(cfg.seed);
    SuiteOutcome::new(
        "quadrature",
        cfg.seed,
        vec![SuiteCheck::from_report(name, report)],
    )
}

fn median3(a: f64, b: f64, c: f64) -> f64 {
    a.max(b).min(a.max(c)).min(b.max(c))
}

/// KS statistic decided across three derived seeds by the median: the check
/// passes exactly when at least two of the three seeds pass.
fn median_ks<D: Fn(u64) -> Vec<f64>, C: Fn(f64) -> f64 + Copy>(
    draws_for: D,
    cdf: C,
    seed: u64,
) -> GofReport {
    let reports: Vec<GofReport> = (0..3)
        .map(|k| {
            let draws = draws_for(seed.wrapping_add(k));
            ks_statistic(&draws, cdf).expect("draw count is positive")
        })
        .collect();
    let d = median3(
        reports[0].statistic,
        reports[1].statistic,
        reports[2].statistic,
    );
    GofReport::new(d, reports[0].threshold, reports[0].n).with_seed(seed)
}

fn std_t(nu: f64) -> MVTParams {
    MVTParams::new(vec![0.0], SquareMatrix::identity(1), nu).expect("valid dof")
}

fn builtin_bivariate(nu: f64) -> MVTParams {
    let sigma = SquareMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]])
        .expect("rows are square and symmetric");
    MVTParams::new(vec![0.0, 0.0], sigma, nu).expect("valid dof")
}

/// Standardized coordinate draws: takes coordinate `k` of joint draws and
/// centers/scales it by the distribution's own location and scale diagonal,
/// giving a standard univariate t with the same dof.
fn standardized_coordinate(p: &MVTParams, k: usize, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = RngStream::from_seed(seed);
    let center = p.mu()[k];
    let root_scale = p.sigma().get(k, k).sqrt();
    p.sample(n, &mut rng)
        .into_iter()
        .map(|v| (v[k] - center) / root_scale)
        .collect()
}

/// Standardized first coordinate of two-stage conditional draws.
fn standardized_conditional(
    p: &MVTParams,
    part: &Partition,
    x1: &[f64],
    n: usize,
    seed: u64,
) -> (Vec<f64>, f64) {
    let cond = condition(p, part, x1)
        .expect("partition and point are consistent")
        .1;
    let center = cond.mu()[0];
    let root_scale = cond.sigma().get(0, 0).sqrt();
    let mut rng = RngStream::from_seed(seed);
    let draws = conditional_sample_augmented(p, part, x1, n, &mut rng)
        .expect("partition and point are consistent")
        .into_iter()
        .map(|v| (v[0] - center) / root_scale)
        .collect();
    (draws, cond.nu())
}

fn sampling_gof_suite(user: Option<&MVTParams>, cfg: &SuiteConfig) -> SuiteOutcome {
    let n = cfg.mc_samples;
    let mut checks = Vec::new();
    match user {
        None => {
            for (i, &nu) in [1.0, 3.0, 10.0].iter().enumerate() {
                let p = std_t(nu);
                let report = median_ks(
                    |s| standardized_coordinate(&p, 0, n, s),
                    |x| student_t_cdf(x, nu).expect("valid dof"),
                    cfg.seed.wrapping_add(100 * i as u64),
                );
                checks.push(SuiteCheck::from_report(
                    &format!("direct draws match the t CDF (dof {nu})"),
                    report,
                ));
            }
            for (i, &nu) in [1.0, 3.0, 10.0].iter().enumerate() {
                let p = builtin_bivariate(nu);
                let part = Partition::new(2, &[0]).expect("coordinate 0 of 2");
                let x1 = [1.5];
                let cond_dof = nu + 1.0;
                let report = median_ks(
                    |s| standardized_conditional(&p, &part, &x1, n, s).0,
                    |x| student_t_cdf(x, cond_dof).expect("valid dof"),
                    cfg.seed.wrapping_add(1000 + 100 * i as u64),
                );
                checks.push(SuiteCheck::from_report(
                    &format!("two-stage conditional draws match the conditional law (dof {cond_dof})"),
                    report,
                ));
            }
            // Two-stage draws against direct draws from the conditional law.
            {
                let p = builtin_bivariate(5.0);
                let part = Partition::new(2, &[0]).expect("coordinate 0 of 2");
                let x1 = [1.5];
                let (two_stage, _) =
                    standardized_conditional(&p, &part, &x1, n, cfg.seed.wrapping_add(2000));
                let cond = condition(&p, &part, &x1)
                    .expect("partition and point are consistent")
                    .1;
                let direct =
                    standardized_coordinate(&cond, 0, n, cfg.seed.wrapping_add(2001));
                let report = two_sample_ks(&two_stage, &direct)
                    .expect("draw count is positive")
                    .with_seed(cfg.seed);
                checks.push(SuiteCheck::from_report(
                    "two-stage and direct conditional draws agree",
                    report,
                ));
            }
            // Conditioning a bivariate Cauchy raises the dof: the draws must
            // match the dof-2 law and be distinguishable from a Cauchy.
            {
                let p = builtin_bivariate(1.0);
                let part = Partition::new(2, &[0]).expect("coordinate 0 of 2");
                let x1 = [1.5];
                let report = median_ks(
                    |s| standardized_conditional(&p, &part, &x1, n, s).0,
                    |x| student_t_cdf(x, 1.0).expect("valid dof"),
                    cfg.seed.wrapping_add(3000),
                );
                checks.push(SuiteCheck::negative_control(
                    "conditional draws from a joint Cauchy are not Cauchy",
                    report,
                ));
            }
        }
        Some(p) => {
            let nu = p.nu();
            let report = median_ks(
                |s| standardized_coordinate(p, 0, n, s),
                |x| student_t_cdf(x, nu).expect("valid dof"),
                cfg.seed,
            );
            checks.push(SuiteCheck::from_report(
                "standardized first coordinate matches the t CDF",
                report,
            ));
            if p.dim() >= 2 {
                let part = Partition::new(p.dim(), &[0]).expect("coordinate 0");
                let x1 = [p.mu()[0] + p.sigma().get(0, 0).sqrt()];
                let cond_dof = nu + 1.0;
                let report = median_ks(
                    |s| standardized_conditional(p, &part, &x1, n, s).0,
                    |x| student_t_cdf(x, cond_dof).expect("valid dof"),
                    cfg.seed.wrapping_add(1000),
                );
                checks.push(SuiteCheck::from_report(
                    "two-stage conditional draws match the conditional law",
                    report,
                ));
            } else {
                checks.push(SuiteCheck::skip(
                    "two-stage conditional draws match the conditional law",
                    UNIVARIATE_SKIP.into(),
                ));
            }
        }
    }
    SuiteOutcome::new("sampling-gof", cfg.seed, checks)
}

fn independence_suite(user: Option<&MVTParams>, cfg: &SuiteConfig) -> SuiteOutcome {
    let n = cfg.mc_samples;
    let mut checks = Vec::new();
    match user {
        None => {
            let part = Partition::new(2, &[0]).expect("coordinate 0 of 2");
            let mut rng = RngStream::from_seed(cfg.seed);
            let report = independence_check(&builtin_bivariate(5.0), &part, n, &mut rng)
                .expect("partition fits the distribution")
                .with_seed(cfg.seed);
            checks.push(SuiteCheck::from_report(
                "scaled residual is independent of the observed block",
                report,
            ));
            let mut rng = RngStream::from_seed(cfg.seed.wrapping_add(1));
            let report = unscaled_residual_split_check(&builtin_bivariate(3.0), &part, n, &mut rng)
                .expect("partition fits the distribution")
                .with_seed(cfg.seed.wrapping_add(1));
            checks.push(SuiteCheck::negative_control(
                "unscaled residual is detected as dependent",
                report,
            ));
        }
        Some(p) if p.dim() >= 2 => {
            let part = Partition::new(p.dim(), &[0]).expect("coordinate 0");
            let mut rng = RngStream::from_seed(cfg.seed);
            let report = independence_check(p, &part, n, &mut rng)
                .expect("partition fits the distribution")
                .with_seed(cfg.seed);
            checks.push(SuiteCheck::from_report(
                "scaled residual is independent of the observed block",
                report,
            ));
        }
        Some(_) => {
            checks.push(SuiteCheck::skip(
                "scaled residual is independent of the observed block",
                UNIVARIATE_SKIP.into(),
            ));
        }
    }
    SuiteOutcome::new("independence", cfg.seed, checks)
}

fn moments_suite(user: Option<&MVTParams>, cfg: &SuiteConfig) -> SuiteOutcome {
    let n = cfg.mc_samples;
    let mut checks = Vec::new();
    match user {
        None => {
            let cases: [(MVTParams, Vec<usize>, &str); 2] = [
                (
                    builtin_bivariate(5.0),
                    vec![0],
                    "latent distance mean 5/3 (dof 5, one observed coordinate)",
                ),
                (
                    {
                        let sigma = SquareMatrix::from_rows(&[
                            vec![2.0, 1.0, 0.5],
                            vec![1.0, 3.0, 1.0],
                            vec![0.5, 1.0, 4.0],
                        ])
                        .expect("rows are square and symmetric");
                        MVTParams::new(vec![1.0, -1.0, 0.5], sigma, 10.0).expect("valid dof")
                    },
                    vec![0, 1],
                    "latent distance mean 5/2 (dof 10, two observed coordinates)",
                ),
            ];
            for (i, (p, observed, name)) in cases.into_iter().enumerate() {
                let part = Partition::new(p.dim(), &observed).expect("proper partition");
                let mut rng = RngStream::from_seed(cfg.seed.wrapping_add(i as u64));
                let report = moment_suite(&p, &part, n, &mut rng)
                    .expect("dof exceeds 2")
                    .with_seed(cfg.seed.wrapping_add(i as u64));
                checks.push(SuiteCheck::from_report(name, report));
            }
        }
        Some(p) => {
            let name = "latent distance mean matches its closed form";
            if p.dim() < 2 {
                checks.push(SuiteCheck::skip(name, UNIVARIATE_SKIP.into()));
            } else {
                let part = Partition::new(p.dim(), &[0]).expect("coordinate 0");
                let mut rng = RngStream::from_seed(cfg.seed);
                match moment_suite(p, &part, n, &mut rng) {
                    Ok(report) => {
                        checks.push(SuiteCheck::from_report(name, report.with_seed(cfg.seed)))
                    }
                    Err(Error::DofTooSmall) => checks.push(SuiteCheck::skip(
                        name,
                        "DofTooSmall: the latent distance has no finite mean for dof <= 2".into(),
                    )),
                    Err(e) => checks.push(SuiteCheck::skip(name, e.to_string())),
                }
            }
        }
    }
    SuiteOutcome::new("moments", cfg.seed, checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_cfg() -> SuiteConfig {
        SuiteConfig {
            seed: 42,
            mc_samples: 100_000,
            instances: 60,
            proportionality_instances: 10,
            grid_points: 50,
        }
    }

    #[test]
    fn builtin_battery_passes_every_suite() {
        let outcomes = run_named_suite("all", None, &quick_cfg()).unwrap();
        assert_eq!(outcomes.len(), 6);
        for outcome in &outcomes {
            assert!(
                outcome.pass,
                "suite {} failed: {:?}",
                outcome.suite, outcome.checks
            );
        }
    }

    #[test]
    fn unknown_suite_is_a_parse_error() {
        let err = run_named_suite("bogus", None, &quick_cfg()).unwrap_err();
        assert!(err.to_string().contains("unknown suite"));
    }

    #[test]
    fn fixed_seed_reproduces_byte_identical_outcomes() {
        let a = run_named_suite("chain-rule", None, &quick_cfg()).unwrap();
        let b = run_named_suite("chain-rule", None, &quick_cfg()).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn changing_the_seed_changes_the_draws() {
        // The chain-rule gap is quantized to ulp multiples and can collide
        // across seeds; the quadrature error is continuous-valued, so seed
        // sensitivity is visible there.
        let mut other = quick_cfg();
        other.seed = 43;
        let a = run_named_suite("quadrature", None, &quick_cfg()).unwrap();
        let b = run_named_suite("quadrature", None, &other).unwrap();
        let stat = |o: &SuiteOutcome| o.checks[0].report.as_ref().unwrap().statistic;
        assert_ne!(stat(&a[0]), stat(&b[0]));
    }

    #[test]
    fn univariate_user_distribution_skips_partition_suites() {
        let p = std_t(3.0);
        for suite in ["chain-rule", "proportionality", "quadrature", "independence", "moments"] {
            let outcomes = run_named_suite(suite, Some(&p), &quick_cfg()).unwrap();
            assert!(outcomes[0].pass);
            assert!(
                outcomes[0].checks.iter().any(|c| c.skipped.is_some()),
                "{suite} should contain a skip entry"
            );
        }
    }

    #[test]
    fn low_dof_user_distribution_skips_moments_with_reason() {
        let p = builtin_bivariate(2.0);
        let outcomes = run_named_suite("moments", Some(&p), &quick_cfg()).unwrap();
        assert!(outcomes[0].pass);
        let reason = outcomes[0].checks[0].skipped.as_deref().unwrap();
        assert!(reason.contains("DofTooSmall"), "reason was {reason}");
    }

    #[test]
    fn user_distribution_battery_passes() {
        let p = builtin_bivariate(7.0);
        for suite in ["sampling-gof", "independence", "moments"] {
            let outcomes = run_named_suite(suite, Some(&p), &quick_cfg()).unwrap();
            assert!(outcomes[0].pass, "{suite}: {:?}", outcomes[0].checks);
        }
    }
}
