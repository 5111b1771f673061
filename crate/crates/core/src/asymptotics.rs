//! Large-size behaviour of the protected-node mean `l_n`.
//!
//! For large `n` the mean grows linearly, `l_n ≈ C·n`, with a tiny
//! periodic fluctuation in `log2(n)` around the line. This module
//! evaluates the pieces of that description:
//!
//! * the coefficients `b_m` of the series defining the slope
//!   ([`b_coefficient`], [`b_limit`], [`b_expression_at`]);
//! * the slope `C = (1/Q_∞) Σ_{m≥0} a_{m+1} b_m` itself, with a rigorous
//!   truncation tail bound ([`protected_constant`]);
//! * a truncated Fourier evaluation of the fluctuation — diagnostic
//!   grade only, see [`delta_fourier`] for why;
//! * residual tables `l_n/n − C` that measure the fluctuation
//!   empirically from exact values ([`residual_table`]).

use crate::precision::{PrecFloat, PrecisionConfig};
use crate::{exact_sequence, qseries, Error, Rational, Result};
use alloc::vec::Vec;
use core::ops::RangeInclusive;
use num_bigint::BigInt;
use num_traits::{Float, One};

/// The slope of the linear growth law, with truncation evidence.
#[derive(Clone, Debug)]
pub struct AsymptoticConstant {
    /// The constant, correctly rounded to the configured digits.
    pub value: PrecFloat,
    /// Last series index included in the evaluation.
    pub truncation_index: u32,
    /// Rigorous bound on the discarded tail, reported at working
    /// precision so sub-output-ulp bounds stay visible; always below
    /// `10^-digits` for the requested precision.
    pub tail_bound: PrecFloat,
}

/// One comparison row: an exact mean ratio against the limiting slope.
#[derive(Clone, Debug)]
pub struct ResidualRow {
    /// Tree size.
    pub n: u64,
    /// Exact `l_n / n`, correctly rounded to the configured digits.
    pub exact_ratio: PrecFloat,
    /// The limiting slope at the same precision.
    pub constant: PrecFloat,
    /// `exact_ratio − constant`; both operands share one scale, so the
    /// subtraction is exact and the field equals the difference by
    /// construction.
    pub residual: PrecFloat,
    /// Fractional part of `log2(n)` — the phase of the fluctuation.
    pub log2n_frac: f64,
}

fn rat_int(k: i64) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

/// `Σ c_i x^i` by Horner's rule, coefficients in ascending order.
fn poly(x: &Rational, coeffs: &[i64]) -> Rational {
    let mut acc = rat_int(0);
    for &c in coeffs.iter().rev() {
        acc = acc * x + rat_int(c);
    }
    acc
}

/// Splits `b(x)` into `α + (β + γ·log x)/log 2` with exact rational
/// parts, for `x` away from the zeros of the denominator.
///
/// The underlying expression is
/// `b(x) = B(x) / (4·log 2 · (x−1)³ (x−2)²)` with
/// `B(x) = (16 − 48x + 48x² − 16x³)·log 2
///        + (−20 + 60x − 69x² + 36x³ − 7x⁴)
///        + (−8x + 12x² − 10x³ + 4x⁴)·log x`.
fn b_rational_parts(x: &Rational) -> (Rational, Rational, Rational) {
    let p1 = poly(x, &[16, -48, 48, -16]);
    let p2 = poly(x, &[-20, 60, -69, 36, -7]);
    let p3 = poly(x, &[0, -8, 12, -10, 4]);
    let xm1 = x - rat_int(1);
    let xm2 = x - rat_int(2);
    let denom = rat_int(4) * (&xm1 * &xm1 * &xm1) * (&xm2 * &xm2);
    (p1 / &denom, p2 / &denom, p3 / denom)
}

/// `(α, β)` with `b_m = α + β/log 2`. For `m ≥ 1` the logarithm in the
/// expression is `log(2^-m) = −m·log 2`, which folds into the rational
/// parts; `b_0` is the removable-singularity limit `37/(12·log 2) − 4`.
fn b_parts(m: u32) -> (Rational, Rational) {
    if m == 0 {
        return (rat_int(-4), Rational::new_raw(BigInt::from(37), BigInt::from(12)));
    }
    let x = Rational::new_raw(BigInt::one(), BigInt::one() << m);
    let (alpha, beta, gamma) = b_rational_parts(&x);
    (alpha - rat_int(i64::from(m)) * gamma, beta)
}

/// `α + β/ℓ` at scale `w`, where `ℓ` is `log 2` at the same scale.
fn b_from_parts(alpha: &Rational, beta: &Rational, ell: &PrecFloat, w: u32) -> PrecFloat {
    PrecFloat::from_rational(alpha, w).add(&PrecFloat::from_rational(beta, w).div(ell))
}

/// Series coefficient `b_m` of the limiting slope.
///
/// Only `log 2` is evaluated transcendentally: for `m ≥ 1` the closed
/// expression is taken at `x = 2^-m` with `log x = −m·log 2` substituted
/// exactly, and `b_0` is the closed limit of the expression as `x → 1`
/// (both the numerator and the `(x−1)³` factor vanish there). The result
/// carries at most a few units of error in the last working digit before
/// the final rounding.
pub fn b_coefficient(m: u32, cfg: &PrecisionConfig) -> Result<PrecFloat> {
    cfg.validate()?;
    let w = cfg.working_digits();
    let (alpha, beta) = b_parts(m);
    Ok(b_from_parts(&alpha, &beta, &PrecFloat::ln2(w), w).rescale(cfg.digits))
}

/// Limit of `b_m` as `m → ∞`: the closed expression at `x = 0`, which
/// simplifies to `5/(4·log 2) − 1`. The coefficients approach it from
/// below at rate `2^-m`.
pub fn b_limit(cfg: &PrecisionConfig) -> Result<PrecFloat> {
    cfg.validate()?;
    let w = cfg.working_digits();
    let (alpha, beta) = b_limit_parts();
    Ok(b_from_parts(&alpha, &beta, &PrecFloat::ln2(w), w).rescale(cfg.digits))
}

fn b_limit_parts() -> (Rational, Rational) {
    (rat_int(-1), Rational::new_raw(BigInt::from(5), BigInt::from(4)))
}

/// The expression behind [`b_coefficient`] at an arbitrary rational
/// point `0 < x < 1`, with `log x` evaluated by the arbitrary-precision
/// logarithm instead of the exact `−m·log 2` substitution.
///
/// Exists so the two evaluation routes can be cross-checked at
/// `x = 2^-m` and so the `x → 1` limit behind `b_0` can be approached
/// numerically.
///
/// # Panics
///
/// Panics when `x` is outside the open interval `(0, 1)`; the endpoints
/// sit on a zero of the denominator (`x = 1`) or of the logarithm's
/// domain boundary (`x = 0`).
pub fn b_expression_at(x: &Rational, cfg: &PrecisionConfig) -> Result<PrecFloat> {
    cfg.validate()?;
    assert!(
        x > &rat_int(0) && x < &rat_int(1),
        "b expression is evaluated on the open interval (0, 1)"
    );
    let w = cfg.working_digits();
    let (alpha, beta, gamma) = b_rational_parts(x);
    let log_x = PrecFloat::from_rational(x, w).ln()?;
    let ell = PrecFloat::ln2(w);
    let value = PrecFloat::from_rational(&alpha, w).add(
        &PrecFloat::from_rational(&beta, w)
            .add(&PrecFloat::from_rational(&gamma, w).mul(&log_x))
            .div(&ell),
    );
    Ok(value.rescale(cfg.digits))
}

/// Partial slope `(1/Q_∞) Σ_{m=0}^{m_top} a_{m+1} b_m` at scale `w`.
fn constant_truncated(m_top: u32, w: u32) -> PrecFloat {
    let ell = PrecFloat::ln2(w);
    let mut sum = PrecFloat::zero(w);
    for m in 0..=m_top {
        let (alpha, beta) = b_parts(m);
        let b = b_from_parts(&alpha, &beta, &ell, w);
        let a = qseries::euler_coefficient(m);
        sum = sum.add(&PrecFloat::from_rational(&a, w).mul(&b));
    }
    sum.div(&q_infinity_at(w))
}

/// `Q_∞` at an explicit working scale, for internal consumption.
fn q_infinity_at(w: u32) -> PrecFloat {
    let cfg = PrecisionConfig { digits: w, guard_digits: 10, max_truncation_index: u32::MAX };
    qseries::q_infinity(&cfg).expect("internal precision config is valid")
}

/// Crude uniform bound on `|b_m|`: twice the largest of `|b_1|..|b_20|`
/// and the limit. Valid because the coefficients increase monotonically
/// from `b_1` toward the limit, so the factor of two is pure slack.
fn bounded_b_magnitude(w: u32) -> PrecFloat {
    let ell = PrecFloat::ln2(w);
    let (la, lb) = b_limit_parts();
    let mut best = b_from_parts(&la, &lb, &ell, w).abs();
    for m in 1..=20 {
        let (alpha, beta) = b_parts(m);
        let cand = b_from_parts(&alpha, &beta, &ell, w).abs();
        if cand.cmp_value(&best) == core::cmp::Ordering::Greater {
            best = cand;
        }
    }
    best.mul_int(2)
}

/// The slope `C = (1/Q_∞) Σ_{m≥0} a_{m+1} b_m` of the linear growth law.
///
/// Truncation: `|a_{m+1}| ≤ 2^(−m(m+1)/2) / Q_∞` decays
/// super-exponentially, and `|b_m|` is uniformly bounded
/// ([`bounded_b_magnitude`]), so the tail beyond index `M` is at most
/// `2·bound·2^(−(M+1)(M+2)/2) / Q_∞²`. The index is chosen so that a
/// deliberately coarse overestimate of that bound (`|b| ≤ 2`,
/// `1/Q_∞² ≤ 16`) already sits below `10^-(digits+2)`; the reported
/// `tail_bound` then uses the sharper numerical quantities and lands
/// well under `10^-digits`.
pub fn protected_constant(cfg: &PrecisionConfig) -> Result<AsymptoticConstant> {
    cfg.validate()?;
    let w = cfg.working_digits();
    // Smallest M with 2^((M+1)(M+2)/2) > 64·10^(digits+2).
    let coarse_target: BigInt = BigInt::from(64) * BigInt::from(10u32).pow(cfg.digits + 2);
    let mut m_top: u32 = 1;
    while (BigInt::one() << ((m_top + 1) * (m_top + 2) / 2)) <= coarse_target {
        m_top += 1;
        if m_top > cfg.max_truncation_index {
            return Err(Error::TruncationCapExceeded { cap: cfg.max_truncation_index });
        }
    }
    let value = constant_truncated(m_top, w).rescale(cfg.digits);
    let tri = (m_top + 1) * (m_top + 2) / 2;
    let discarded = Rational::new_raw(BigInt::from(2), BigInt::one() << tri);
    let q_inf = q_infinity_at(w);
    let tail_bound = bounded_b_magnitude(w)
        .mul(&PrecFloat::from_rational(&discarded, w))
        .div(&q_inf.mul(&q_inf));
    Ok(AsymptoticConstant { value, truncation_index: m_top, tail_bound })
}

/// Truncated Fourier evaluation of the periodic fluctuation, pairing the
/// `+l` and `−l` terms so the truncated sum is exactly real.
///
/// Diagnostic grade, deliberately: the coefficient of the `l`-th
/// harmonic grows like `l²`, so the doubly infinite sum does not
/// converge absolutely and truncated values do **not** settle near the
/// ~`10^-5` amplitude the fluctuation actually has — they grow with
/// `l_max`. Callers get exactly the truncated sum, nothing more; the
/// trustworthy view of the fluctuation is [`residual_table`].
///
/// The `m = 0` coefficient divides by `(2^m − 1)²`, which vanishes
/// there, so ranges containing 0 are rejected with
/// [`Error::SingularFourierTerm`] rather than silently regularized.
/// `x` enters only through its fractional part, making the period-1
/// symmetry exact by construction. An empty range or `l_max = 0` gives
/// an exact zero.
pub fn delta_fourier(
    x: &Rational,
    l_max: u32,
    m_range: RangeInclusive<u32>,
    cfg: &PrecisionConfig,
) -> Result<PrecFloat> {
    cfg.validate()?;
    let (m_lo, m_hi) = (*m_range.start(), *m_range.end());
    if m_lo > m_hi || l_max == 0 {
        return Ok(PrecFloat::zero(cfg.digits));
    }
    if m_lo == 0 {
        return Err(Error::SingularFourierTerm);
    }
    if m_hi > cfg.max_truncation_index {
        return Err(Error::TruncationCapExceeded { cap: cfg.max_truncation_index });
    }
    let w = cfg.working_digits();

    // For each m the harmonic carries the exact rational weight
    //   r_m = a_{m+1} · 2^m / (2·(2^m − 1)²·(2^{m+1} − 1)),
    // and the ±l pairing turns the complex exponentials into
    //   (π/L)·(2·l·r_m·A_m)·sin θ_l − (π/L)²·(4·l²·r_m·B_m)·cos θ_l,
    // θ_l = 2πl·frac(x), A_m = 7 − 15·2^m + 10·4^m, B_m = 2^{m+1} − 1.
    // Both m-sums are exact rationals, independent of l.
    let mut sin_weight = rat_int(0);
    let mut cos_weight = rat_int(0);
    for m in m_lo..=m_hi {
        let pow = BigInt::one() << m;
        let a_big = BigInt::from(7) - BigInt::from(15) * &pow + BigInt::from(10) * &pow * &pow;
        let b_big = (&pow << 1) - BigInt::one();
        let denom_root = &pow - BigInt::one();
        let r = qseries::euler_coefficient(m)
            * Rational::new(pow, BigInt::from(2) * &denom_root * &denom_root * &b_big);
        sin_weight = sin_weight + rat_int(2) * &r * Rational::from_integer(a_big);
        cos_weight = cos_weight + rat_int(4) * r * Rational::from_integer(b_big);
    }

    let x_frac = x - x.floor();
    let pi = PrecFloat::pi(w);
    let mut sin_acc = PrecFloat::zero(w);
    let mut cos_acc = PrecFloat::zero(w);
    for l in 1..=i64::from(l_max) {
        let theta = PrecFloat::from_rational(&(rat_int(2 * l) * &x_frac), w).mul(&pi);
        let (sin, cos) = theta.sin_cos();
        sin_acc = sin_acc.add(&PrecFloat::from_rational(&(rat_int(l) * &sin_weight), w).mul(&sin));
        cos_acc = cos_acc.add(&PrecFloat::from_rational(&(rat_int(l * l) * &cos_weight), w).mul(&cos));
    }
    let pi_over_ell = pi.div(&PrecFloat::ln2(w));
    let total = pi_over_ell.mul(&sin_acc).sub(&pi_over_ell.mul(&pi_over_ell).mul(&cos_acc));
    Ok(total.div(&q_infinity_at(w)).rescale(cfg.digits))
}

/// Compares exact ratios `l_n/n` against the limiting slope for each
/// requested size, in input order.
///
/// The residual column holds the fluctuation plus the `O(1/n)` remainder
/// of the growth law; over sizes `n = 2^j·c` at fixed `c` it converges
/// to the fluctuation value at phase `frac(log2 c)`.
pub fn residual_table(n_list: &[u64], cfg: &PrecisionConfig) -> Result<Vec<ResidualRow>> {
    cfg.validate()?;
    for &n in n_list {
        if n == 0 {
            return Err(Error::UnsupportedIndex {
                index: 0,
                reason: "the mean ratio needs a positive size",
            });
        }
    }
    let constant = protected_constant(cfg)?.value;
    let targets: Vec<usize> = n_list.iter().map(|&n| n as usize).collect();
    let exact = exact_sequence::l_values_via_m(&targets);
    let mut rows = Vec::with_capacity(n_list.len());
    for (&n, l_n) in n_list.iter().zip(exact) {
        let ratio = l_n / rat_int(n as i64);
        let exact_ratio = PrecFloat::from_rational(&ratio, cfg.digits);
        let residual = exact_ratio.sub(&constant);
        rows.push(ResidualRow {
            n,
            exact_ratio,
            constant: constant.clone(),
            residual,
            log2n_frac: Float::fract(Float::log2(n as f64)),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::String;
    use num_traits::Signed;

    /// `10^-k` as an exact rational.
    fn pow10_neg(k: u32) -> Rational {
        Rational::new_raw(BigInt::one(), BigInt::from(10u32).pow(k))
    }

    /// Parses a plain decimal literal (optional sign and fraction) into
    /// an exact rational, for pinning reference digits.
    fn dec(s: &str) -> Rational {
        let (sign, rest) = match s.strip_prefix('-') {
            Some(r) => (-1, r),
            None => (1, s),
        };
        let (int_part, frac_part) = match rest.split_once('.') {
            Some((i, f)) => (i, f),
            None => (rest, ""),
        };
        let digits: String = [int_part, frac_part].concat();
        let num: BigInt = digits.parse().expect("decimal literal");
        Rational::new(num * BigInt::from(sign), BigInt::from(10u32).pow(frac_part.len() as u32))
    }

    fn assert_near(v: &PrecFloat, literal: &str, tol_pow: u32) {
        let diff = (v.to_rational() - dec(literal)).abs();
        assert!(
            diff < pow10_neg(tol_pow),
            "value {} is not within 10^-{} of {}",
            v,
            tol_pow,
            literal
        );
    }

    #[test]
    fn b_zero_matches_closed_limit() {
        let cfg = PrecisionConfig::with_digits(25);
        let b0 = b_coefficient(0, &cfg).unwrap();
        assert_near(&b0, "0.4483097094076371726931011", 24);
        // The closed limit is 37/(12·log 2) − 4 verbatim.
        let w = cfg.working_digits();
        let direct = PrecFloat::from_rational(&Rational::new(BigInt::from(37), BigInt::from(12)), w)
            .div(&PrecFloat::ln2(w))
            .add(&PrecFloat::from_int(-4, w));
        assert!((b0.to_rational() - direct.to_rational()).abs() < pow10_neg(24));
    }

    #[test]
    fn b_small_reference_digits() {
        let cfg = PrecisionConfig::with_digits(25);
        assert_near(&b_coefficient(1, &cfg).unwrap(), "0.5320803936298407653", 18);
        assert_near(&b_coefficient(2, &cfg).unwrap(), "0.60599830451814117637", 19);
        assert_near(&b_coefficient(3, &cfg).unwrap(), "0.66642125267485040871", 19);
    }

    #[test]
    fn b_limit_reference_digits() {
        let cfg = PrecisionConfig::with_digits(25);
        assert_near(&b_limit(&cfg).unwrap(), "0.8033688011112042591999059", 24);
    }

    #[test]
    fn b_approaches_limit_from_below() {
        let cfg = PrecisionConfig::with_digits(20);
        let lim = b_limit(&cfg).unwrap().to_rational();
        let mut prev_gap: Option<Rational> = None;
        for m in 20..=26 {
            let gap = &lim - b_coefficient(m, &cfg).unwrap().to_rational();
            assert!(gap > rat_int(0), "b_{m} should sit below the limit");
            assert!(gap < pow10_neg(5), "b_{m} should be within 1e-5 of the limit");
            if let Some(p) = prev_gap {
                assert!(gap < p, "gap to the limit should shrink at m={m}");
            }
            prev_gap = Some(gap);
        }
        let far = &lim - b_coefficient(40, &cfg).unwrap().to_rational();
        assert!(far > rat_int(0) && far < pow10_neg(10));
    }

    #[test]
    fn b_direct_log_route_matches_exact_substitution() {
        // The general evaluator computes log x transcendentally; at
        // x = 2^-m that must reproduce the exact −m·log 2 substitution.
        let cfg = PrecisionConfig::with_digits(40);
        for m in 1..=3 {
            let x = Rational::new(BigInt::one(), BigInt::one() << m);
            let via_log = b_expression_at(&x, &cfg).unwrap();
            let via_subst = b_coefficient(m, &cfg).unwrap();
            let diff = (via_log.to_rational() - via_subst.to_rational()).abs();
            assert!(diff < pow10_neg(38), "routes disagree at m={m}");
        }
    }

    #[test]
    fn b_zero_is_the_numeric_limit_of_the_expression() {
        let cfg = PrecisionConfig::with_digits(30);
        let b0 = b_coefficient(0, &cfg).unwrap().to_rational();
        // Near the removable singularity the expression approaches b_0
        // linearly; at distance 1e-8 the two agree to ~8 digits.
        let close = b_expression_at(&(rat_int(1) - pow10_neg(8)), &cfg).unwrap();
        assert!((close.to_rational() - &b0).abs() < Rational::new(BigInt::from(2), BigInt::from(10u32).pow(9)));
        // Farther out the linear term dominates visibly.
        let far = b_expression_at(&(rat_int(1) - pow10_neg(3)), &cfg).unwrap();
        let gap = (far.to_rational() - b0).abs();
        assert!(gap > pow10_neg(4) && gap < Rational::new(BigInt::from(2), BigInt::from(10u32).pow(4)));
    }

    #[test]
    fn constant_reference_digits() {
        let c23 = protected_constant(&PrecisionConfig::with_digits(23)).unwrap();
        assert_eq!(c23.value.to_decimal_string(23), "0.30707981393605921828549");
        let c40 = protected_constant(&PrecisionConfig::with_digits(40)).unwrap();
        assert_eq!(
            c40.value.to_decimal_string(40),
            "0.3070798139360592182854900908496107929728"
        );
        let c5 = protected_constant(&PrecisionConfig::with_digits(5)).unwrap();
        assert_eq!(c5.value.to_decimal_string(5), "0.30708");
    }

    #[test]
    fn constant_tail_bound_is_rigorous_and_small() {
        for digits in [5u32, 23, 40] {
            let c = protected_constant(&PrecisionConfig::with_digits(digits)).unwrap();
            assert!(!c.tail_bound.is_negative() && !c.tail_bound.is_zero());
            assert!(c.tail_bound.to_rational() < pow10_neg(digits));
            assert!(c.truncation_index >= 5 && c.truncation_index <= 25);
        }
    }

    #[test]
    fn constant_precision_self_consistency() {
        for digits in [10u32, 23, 40] {
            let lo = protected_constant(&PrecisionConfig::with_digits(digits)).unwrap();
            let hi = protected_constant(&PrecisionConfig::with_digits(digits + 10)).unwrap();
            let diff = (lo.value.to_rational() - hi.value.to_rational()).abs();
            assert!(diff <= pow10_neg(digits), "digits={digits} unstable under extra precision");
        }
    }

    #[test]
    fn constant_truncation_stability() {
        // Five extra series terms beyond the chosen index must not move
        // any of 40 digits.
        let cfg = PrecisionConfig::with_digits(40);
        let m_top = protected_constant(&cfg).unwrap().truncation_index;
        let w = cfg.working_digits();
        let base = constant_truncated(m_top, w);
        let more = constant_truncated(m_top + 5, w);
        assert!((base.to_rational() - more.to_rational()).abs() < pow10_neg(40));
    }

    #[test]
    fn delta_rejects_the_singular_term() {
        let cfg = PrecisionConfig::with_digits(20);
        let err = delta_fourier(&Rational::new(BigInt::one(), BigInt::from(2)), 5, 0..=10, &cfg);
        assert!(matches!(err, Err(Error::SingularFourierTerm)));
    }

    #[test]
    fn delta_empty_truncations_are_zero() {
        let cfg = PrecisionConfig::with_digits(20);
        let x = Rational::new(BigInt::from(2), BigInt::from(7));
        assert!(delta_fourier(&x, 0, 1..=40, &cfg).unwrap().is_zero());
        #[allow(clippy::reversed_empty_ranges)]
        let empty = delta_fourier(&x, 8, 5..=4, &cfg).unwrap();
        assert!(empty.is_zero());
    }

    #[test]
    fn delta_period_one_is_exact() {
        let cfg = PrecisionConfig::with_digits(25);
        let third = Rational::new(BigInt::one(), BigInt::from(3));
        let shifted = &third + rat_int(1);
        let a = delta_fourier(&third, 10, 1..=40, &cfg).unwrap();
        let b = delta_fourier(&shifted, 10, 1..=40, &cfg).unwrap();
        assert_eq!(a, b);
        assert_near(&a, "-1813.101652420735188699226", 17);
        let fifth = Rational::new(BigInt::one(), BigInt::from(5));
        let far = &fifth + rat_int(3);
        assert_eq!(
            delta_fourier(&fifth, 7, 2..=30, &cfg).unwrap(),
            delta_fourier(&far, 7, 2..=30, &cfg).unwrap()
        );
    }

    #[test]
    fn delta_truncations_do_not_settle() {
        // The l-harmonic weights grow like l², so widening the l window
        // grows the truncated value instead of converging — the reason
        // the evaluation is labeled diagnostic grade.
        let cfg = PrecisionConfig::with_digits(30);
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let narrow = delta_fourier(&half, 10, 1..=40, &cfg).unwrap();
        assert_near(&narrow, "14549.09531421712157531126", 18);
        let quarter = Rational::new(BigInt::one(), BigInt::from(4));
        assert_near(
            &delta_fourier(&quarter, 10, 1..=40, &cfg).unwrap(),
            "-16603.53191820254686804854",
            18,
        );
        let wide = delta_fourier(&half, 20, 1..=40, &cfg).unwrap();
        assert_near(&wide, "55551.09119973810056027935", 17);
        assert!(wide.to_rational() > rat_int(2) * narrow.to_rational().abs());
        // Nowhere near the ~1e-5 amplitude of the true fluctuation.
        assert!(narrow.to_rational().abs() > rat_int(1000));
    }

    #[test]
    fn delta_respects_the_truncation_cap() {
        let mut cfg = PrecisionConfig::with_digits(20);
        cfg.max_truncation_index = 100;
        let x = Rational::new(BigInt::one(), BigInt::from(2));
        let err = delta_fourier(&x, 5, 1..=200, &cfg);
        assert!(matches!(err, Err(Error::TruncationCapExceeded { cap: 100 })));
    }

    #[test]
    fn residual_reference_row() {
        let cfg = PrecisionConfig::with_digits(30);
        let rows = residual_table(&[500], &cfg).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        assert_eq!(row.n, 500);
        assert_eq!(row.exact_ratio.to_decimal_string(6), "0.305710");
        assert_near(&row.residual, "-0.0013697432559", 11);
        assert_eq!(row.constant, protected_constant(&cfg).unwrap().value);
        assert_eq!(row.residual, row.exact_ratio.sub(&row.constant));
        assert!((row.log2n_frac - 0.965_784_284_662_087).abs() < 1e-12);
    }

    #[test]
    fn residuals_shrink_toward_the_fluctuation_scale() {
        let cfg = PrecisionConfig::with_digits(30);
        let rows = residual_table(&[256, 512, 1024], &cfg).unwrap();
        assert_near(&rows[0].residual, "-0.0026783850445", 11);
        assert_near(&rows[1].residual, "-0.00132767983854", 12);
        assert_near(&rows[2].residual, "-0.000652225271815", 12);
        for pair in rows.windows(2) {
            assert!(pair[0].residual.is_negative());
            assert!(
                pair[1].residual.to_rational().abs() < pair[0].residual.to_rational().abs(),
                "residual magnitude should fall from n={} to n={}",
                pair[0].n,
                pair[1].n
            );
        }
        for row in &rows {
            // Powers of two sit at phase zero exactly.
            assert_eq!(row.log2n_frac, 0.0);
        }
    }

    #[test]
    fn residual_rejects_zero_size() {
        let cfg = PrecisionConfig::with_digits(10);
        let err = residual_table(&[8, 0], &cfg);
        assert!(matches!(err, Err(Error::UnsupportedIndex { index: 0, .. })));
    }
}
