//! Special functions backing the density constants and the univariate CDFs:
//! log-gamma, the regularized incomplete beta, and the regularized lower
//! incomplete gamma with its inverse.

use std::f64::consts::PI;

/// Lanczos coefficients for g = 7, 9 terms (Godfrey's tabulation). Relative
/// error of the resulting log-gamma is below 1e-13 on the positive real axis.
const LANCZOS_G: f64 = 7.0;
// Digits kept as tabulated even where they exceed f64 resolution.
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: ln Γ(x) = ln(π / sin(πx)) - ln Γ(1 - x).
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    // Correctly rounded anchors: the Lanczos sum drifts 1-3 ulp at these
    // ubiquitous arguments, and density constants built from them must
    // round-trip exactly (Γ(½) = √π, Γ(1) = Γ(2) = 1, Γ(3/2) = √π/2).
    if x == 0.5 {
        return 0.5723649429247001;
    }
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x == 1.5 {
        return -0.12078223763524522;
    }
    let z = x - 1.0;
    let mut series = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + series.ln()
}

/// ln B(a, b) = ln Γ(a) + ln Γ(b) - ln Γ(a + b).
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Stirling series tail: ln Γ(z) - [½ln(2π) + (z-½)ln z - z]. Truncation
/// error below 2e-15 for z >= 20.
fn stirling_tail(z: f64) -> f64 {
    let z2 = z * z;
    let mut inv = 1.0 / z;
    let mut s = inv / 12.0;
    inv /= z2;
    s -= inv / 360.0;
    inv /= z2;
    s += inv / 1260.0;
    inv /= z2;
    s -= inv / 1680.0;
    s
}

/// ln Γ(a + h) - ln Γ(a) for a > 0, h >= 0.
///
/// The direct difference cancels catastrophically when a is large (the two
/// log-gammas grow like a·ln a while the difference stays near h·ln a), so
/// large arguments use the regrouped Stirling expansion whose terms are all
/// of the answer's own magnitude.
pub fn ln_gamma_diff(a: f64, h: f64) -> f64 {
    debug_assert!(a > 0.0 && h >= 0.0);
    if a < 20.0 {
        return ln_gamma(a + h) - ln_gamma(a);
    }
    (a - 0.5) * (h / a).ln_1p() + h * (a + h).ln() - h + stirling_tail(a + h)
        - stirling_tail(a)
}

const CF_MAX_ITER: usize = 500;
const CF_EPS: f64 = 1e-15;
const CF_TINY: f64 = 1e-300;

/// Regularized incomplete beta function I_x(a, b) for a, b > 0 and x in [0, 1].
///
/// Continued fraction evaluated with the modified Lentz algorithm, switching
/// to the symmetric complement at x = (a + 1) / (a + b + 2) so the fraction
/// always converges quickly. Relative accuracy is about 1e-12 or better.
pub fn reg_inc_beta(a: f64, b: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0);
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = a * x.ln() + b * (1.0 - x).ln() - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * beta_cf(a, b, x) / a
    } else {
        1.0 - ln_front.exp() * beta_cf(b, a, 1.0 - x) / b
    }
}

/// Continued fraction for the incomplete beta (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;

    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;

    for m in 1..=CF_MAX_ITER {
        let m_f = m as f64;
        let m2 = 2.0 * m_f;

        // Even step.
        let aa = m_f * (b - m_f) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        // Odd step.
        let aa = -(a + m_f) * (qab + m_f) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;

        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

// The incomplete gamma series/fraction need many terms when the shape is
// large and x sits near it; 50k covers shapes up to ~1e7.
const GAMMA_MAX_ITER: usize = 50_000;

/// Regularized lower incomplete gamma P(a, x) for a > 0, x >= 0.
pub fn reg_lower_gamma(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0);
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        lower_gamma_series(a, x)
    } else {
        1.0 - upper_gamma_cf(a, x)
    }
}

/// Series expansion of P(a, x), valid for x < a + 1.
fn lower_gamma_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..GAMMA_MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * CF_EPS {
            break;
        }
    }
    sum * (a * x.ln() - x - ln_gamma(a)).exp()
}

/// Continued fraction for Q(a, x) = 1 - P(a, x), valid for x >= a + 1.
fn upper_gamma_cf(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / CF_TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=GAMMA_MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = b + an / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h * (a * x.ln() - x - ln_gamma(a)).exp()
}

/// Inverse of P(a, .): the x with P(a, x) = mass, for mass in (0, 1).
///
/// Bisection on the monotone CDF with geometric midpoints: small shapes put
/// tail quantiles hundreds of decades below 1, so the bracket must shrink in
/// log space. Robust for every shape we use and cheap at desk scale.
pub fn inv_reg_lower_gamma(a: f64, mass: f64) -> f64 {
    debug_assert!(a > 0.0 && mass > 0.0 && mass < 1.0);
    // γ(a,x) ≤ x^a/a gives P(a,x) ≤ x^a/Γ(a+1), so this is a lower bracket.
    let mut lo = ((mass.ln() + ln_gamma(a + 1.0)) / a).exp();
    if !lo.is_finite() || lo <= 0.0 {
        lo = f64::MIN_POSITIVE;
    }
    let mut hi = (a + 1.0).max(2.0 * lo);
    while reg_lower_gamma(a, hi) < mass {
        hi *= 2.0;
        if hi > 1e300 {
            return hi;
        }
    }
    for _ in 0..500 {
        let mid = (0.5 * (lo.ln() + hi.ln())).exp();
        if mid <= lo || mid >= hi {
            break;
        }
        if reg_lower_gamma(a, mid) < mass {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 4e-16 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_rel(actual: f64, expected: f64, tol: f64) {
        let err = (actual - expected).abs() / expected.abs().max(1e-300);
        assert!(
            err <= tol,
            "actual {actual} vs expected {expected}, rel err {err}"
        );
    }

    #[test]
    fn ln_gamma_matches_high_precision_references() {
        // References computed with 50-digit arithmetic.
        let cases = [
            (0.25, 1.2880225246980774),
            (0.5, 0.5723649429247001),
            (0.75, 0.20328095143129538),
            (1.5, -0.12078223763524522),
            (2.5, 0.2846828704729192),
            (3.5, 1.2009736023470743),
            (7.5, 7.534364236758733),
            (100.3, 360.5147057290581),
        ];
        for (x, want) in cases {
            assert_rel(ln_gamma(x), want, 1e-13);
        }
    }

    #[test]
    fn ln_gamma_integer_factorials() {
        assert!(ln_gamma(1.0).abs() < 1e-14);
        assert!(ln_gamma(2.0).abs() < 1e-14);
        assert_rel(ln_gamma(10.0), (362_880.0_f64).ln(), 1e-14);
    }

    #[test]
    fn ln_gamma_recurrence_holds_at_large_arguments() {
        // ln Γ(z+1) - ln Γ(z) = ln z, exercised where the chain of large
        // terms could lose precision.
        for &z in &[500.0, 5e4, 5e5] {
            let lhs = ln_gamma(z + 1.0) - ln_gamma(z);
            assert!((lhs - z.ln()).abs() < 1e-9, "z={z}: {lhs} vs {}", z.ln());
        }
    }

    #[test]
    fn ln_gamma_diff_is_stable_at_large_arguments() {
        // Recurrence Γ(a+1) = a·Γ(a) pins the h=1 difference exactly.
        for &a in &[25.0, 1e3, 5e5, 1e7] {
            assert_rel(ln_gamma_diff(a, 1.0), a.ln(), 1e-13);
        }
        // Agrees with the direct difference where that is well conditioned.
        for &(a, h) in &[(0.5, 1.7), (3.0, 0.25), (12.0, 3.0), (19.0, 2.5)] {
            assert_rel(ln_gamma_diff(a, h), ln_gamma(a + h) - ln_gamma(a), 1e-12);
        }
        // Continuity across the method switch at a = 20.
        let below = ln_gamma_diff(19.999_999, 1.5);
        let above = ln_gamma_diff(20.000_001, 1.5);
        assert!((below - above).abs() < 1e-6);
        assert_eq!(ln_gamma_diff(7.5, 0.0), 0.0);
    }

    #[test]
    fn incomplete_beta_boundaries_and_symmetry() {
        assert_eq!(reg_inc_beta(2.0, 3.0, 0.0), 0.0);
        assert_eq!(reg_inc_beta(2.0, 3.0, 1.0), 1.0);
        // I_x(1/2, 1/2) is the arcsine law: (2/π) asin(√x).
        let x = 0.3_f64;
        let want = 2.0 / PI * x.sqrt().asin();
        assert_rel(reg_inc_beta(0.5, 0.5, x), want, 1e-12);
        // Symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
        let v = reg_inc_beta(2.5, 4.0, 0.37);
        let w = 1.0 - reg_inc_beta(4.0, 2.5, 0.63);
        assert_rel(v, w, 1e-12);
    }

    #[test]
    fn incomplete_beta_uniform_case() {
        // I_x(1, 1) = x.
        for &x in &[0.1, 0.5, 0.9] {
            assert_rel(reg_inc_beta(1.0, 1.0, x), x, 1e-13);
        }
    }

    #[test]
    fn lower_gamma_exponential_case() {
        // P(1, x) = 1 - e^{-x}.
        for &x in &[0.1, 1.0, 5.0, 30.0] {
            assert_rel(reg_lower_gamma(1.0, x), 1.0 - (-x).exp(), 1e-12);
        }
    }

    #[test]
    fn lower_gamma_half_case() {
        // P(1/2, x) = erf(√x); erf(1) reference from 50-digit arithmetic.
        assert_rel(reg_lower_gamma(0.5, 1.0), 0.8427007929497149, 1e-12);
    }

    #[test]
    fn inverse_gamma_round_trips() {
        for &a in &[0.375, 1.0, 2.5, 17.0, 5e5] {
            for &mass in &[1e-12, 1e-3, 0.5, 1.0 - 1e-3, 1.0 - 1e-12] {
                let x = inv_reg_lower_gamma(a, mass);
                let back = reg_lower_gamma(a, x);
                assert!(
                    (back - mass).abs() < 1e-9 * mass.max(1e-12) + 1e-15,
                    "a={a} mass={mass}: x={x} back={back}"
                );
            }
        }
    }
}
