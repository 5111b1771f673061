//! The q-Pochhammer quantities `Q_m`, `Q_∞`, `Q(x)` and the alternating
//! partition-series coefficients `a_{m+1}`.
//!
//! Definitions implemented here:
//!
//! * `Q_m = ∏_{k=1..m} (1 − 2^{-k})` — exact rational, denominator exactly
//!   `2^{m(m+1)/2}` ([`q_partial`]);
//! * `Q(x) = ∏_{k≥1} (1 − x·2^{-k})` for real `x`, and `Q_∞ = Q(1)` — high
//!   precision with a rigorous truncation bound ([`q_of_x`],
//!   [`q_infinity`]);
//! * `a_{m+1} = (−1)^m · 2^{-m(m+1)/2} / Q_m` — the exact coefficients of
//!   the partition-identity expansion `Q(t) = Σ_{m≥0} a_{m+1} t^m`
//!   ([`euler_coefficient`]);
//! * a diagnostic that measures how fast the truncated expansion converges
//!   to the product ([`verify_euler_identity`]).
//!
//! Truncation policy for the infinite products: stop at the first `M`
//! where the tail bound `|x|·2^{-M} / (1 − |x|·2^{-M-1})`, pushed through
//! the logarithm of the remaining factors, drops below
//! `10^-(digits + guard_digits)`. The bound is valid because
//! `|log(1−u)| ≤ |u|/(1−|u|)` term by term, so the discarded factors
//! multiply the result by `exp(±bound)`, i.e. a relative error below
//! `2·bound`. The search for `M` is exact rational arithmetic; exceeding
//! `max_truncation_index` is reported, never silently truncated.

use crate::dyadic::Dyadic;
use crate::precision::{PrecFloat, PrecisionConfig};
use crate::{Error, Rational, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact partial product `Q_m = ∏_{k=1..m} (1 − 2^{-k})`; `Q_0 = 1`.
///
/// The numerator is the odd product `∏ (2^k − 1)` and the denominator is
/// exactly `2^{m(m+1)/2}`, so the fraction is already in lowest terms.
pub fn q_partial(m: u32) -> Rational {
    let mut num = Dyadic::one();
    for k in 1..=m as usize {
        num = num.mul_pow2_minus_one(k).div_pow2(k);
    }
    num.to_rational()
}

/// `Q_∞ = ∏_{k≥1} (1 − 2^{-k})` with absolute error below `10^-digits`.
pub fn q_infinity(cfg: &PrecisionConfig) -> Result<PrecFloat> {
    q_of_x(&Rational::one(), cfg)
}

/// `Q(x) = ∏_{k≥1} (1 − x·2^{-k})` for real `x`, with error below
/// `10^-digits` for `|x|` up to a few units (relative to the product's
/// magnitude beyond that; see the module truncation policy).
pub fn q_of_x(x: &Rational, cfg: &PrecisionConfig) -> Result<PrecFloat> {
    cfg.validate()?;
    let w = cfg.working_digits();
    let tol = Rational::new(BigInt::one(), BigInt::from(10u32).pow(w));
    let m_stop = truncation_index(&x.abs(), &tol, cfg.max_truncation_index)?;

    let mut product = PrecFloat::from_int(1, w);
    let mut denom = Rational::one();
    let two = Rational::new(BigInt::from(2u32), BigInt::one());
    for _ in 1..=m_stop {
        denom *= &two;
        let factor = Rational::one() - x / &denom;
        if factor.is_zero() {
            return Ok(PrecFloat::zero(cfg.digits));
        }
        product = product.mul(&PrecFloat::from_rational(&factor, w));
    }
    Ok(product.rescale(cfg.digits))
}

/// Smallest `M ≥ 1` with `|x|·2^{-M} / (1 − |x|·2^{-M-1}) < tol`,
/// equivalently `|x|·(2 + tol) < tol·2^{M+1}` (which also forces the
/// denominator of the bound positive). Exact rational search.
fn truncation_index(ax: &Rational, tol: &Rational, cap: u32) -> Result<u32> {
    let lhs = ax * (Rational::new(BigInt::from(2u32), BigInt::one()) + tol);
    let mut pow = Rational::new(BigInt::from(4u32), BigInt::one()); // 2^{M+1} at M = 1
    for m in 1..=cap {
        if lhs < tol * &pow {
            return Ok(m);
        }
        pow *= Rational::new(BigInt::from(2u32), BigInt::one());
    }
    Err(Error::TruncationCapExceeded { cap })
}

/// Exact coefficient `a_{m+1} = (−1)^m · 2^{-m(m+1)/2} / Q_m` of the
/// partition-identity expansion of `Q(t)`.
///
/// Signs alternate strictly; the magnitude ratio
/// `|a_{m+2}| / |a_{m+1}| = 2^{-(m+1)} / (1 − 2^{-(m+1)})` equals 1 at
/// `m = 0` and is strictly below 1 from `m = 1` on.
pub fn euler_coefficient(m: u32) -> Rational {
    let tri = (m as u64) * (m as u64 + 1) / 2;
    let sign = if m % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let power = Rational::new(sign, BigInt::one() << tri);
    power / q_partial(m)
}

/// `|Q(t) − Σ_{m=0}^{M-1} a_{m+1} t^m|`: the truncated expansion's
/// residual against the product, at the configured precision.
///
/// The partial sum is exact rational arithmetic; only the product side and
/// the final difference carry floating error, so for `|t| ≤ 2` the
/// residual shrinks super-exponentially in `M` until it reaches the
/// `10^-(digits+guard)` noise floor of the product evaluation.
pub fn verify_euler_identity(t: &Rational, m_terms: u32, cfg: &PrecisionConfig) -> Result<PrecFloat> {
    cfg.validate()?;
    let w = cfg.working_digits();
    let wide = PrecisionConfig { digits: w, ..*cfg };
    let product = q_of_x(t, &wide)?;

    let mut sum = Rational::zero();
    let mut power = Rational::one();
    for m in 0..m_terms {
        sum += euler_coefficient(m) * &power;
        power *= t;
    }
    let residual = product.sub(&PrecFloat::from_rational(&sum, w)).abs();
    Ok(residual.rescale(cfg.digits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    /// Hand-computed partial products: 1, 1/2, 3/8, 21/64, 315/1024,
    /// 9765/32768.
    #[test]
    fn q_partial_small_values() {
        let want = [
            rat(1, 1),
            rat(1, 2),
            rat(3, 8),
            rat(21, 64),
            rat(315, 1024),
            rat(9765, 32768),
        ];
        for (m, w) in want.iter().enumerate() {
            assert_eq!(&q_partial(m as u32), w, "Q_{m}");
        }
    }

    /// The denominator must be exactly 2^(m(m+1)/2) for every m up to 64.
    #[test]
    fn q_partial_denominator_is_pure_power_of_two() {
        for m in 0..=64u32 {
            let q = q_partial(m);
            let tri = (m as u64) * (m as u64 + 1) / 2;
            assert_eq!(q.denom(), &(BigInt::one() << tri), "denominator at m={m}");
        }
    }

    /// Partial products of the infinite-product evaluator agree with the
    /// exact rationals: recompute the m-factor product in PrecFloat and
    /// compare with q_partial converted.
    #[test]
    fn q_partial_matches_float_partial_product() {
        let w = 40;
        let mut product = PrecFloat::from_int(1, w);
        for m in 1..=64u32 {
            let factor = Rational::one() - Rational::new(BigInt::one(), BigInt::one() << m);
            product = product.mul(&PrecFloat::from_rational(&factor, w));
            let exact = PrecFloat::from_rational(&q_partial(m), w);
            let err = product.sub(&exact).abs();
            // Accumulated rounding stays below m ulp at the working scale.
            assert!(
                err.to_rational() <= Rational::new(BigInt::from(m), BigInt::from(10u32).pow(w)),
                "drift at m={m}"
            );
        }
    }

    /// Ten-digit and one-digit renderings of Q_∞, and agreement of
    /// q_partial(60) with the limit to the expected 2^-60 closeness.
    #[test]
    fn q_infinity_reference_digits() {
        let cfg = PrecisionConfig::with_digits(10);
        assert_eq!(q_infinity(&cfg).unwrap().to_string(), "0.2887880951");

        let cfg1 = PrecisionConfig::with_digits(1);
        assert_eq!(q_infinity(&cfg1).unwrap().to_string(), "0.3");

        let cfg25 = PrecisionConfig::with_digits(25);
        let qinf = q_infinity(&cfg25).unwrap();
        let q60 = PrecFloat::from_rational(&q_partial(60), 25);
        let gap = q60.sub(&qinf).abs();
        // |Q_60 − Q_∞| ≈ Q_∞ · 2^-61 ≈ 1.2e−19, and never zero.
        assert!(gap.to_rational() < rat(1, 1_000_000_000_000_000_000), "gap {gap}");
        assert!(gap.to_rational() > Rational::zero());
    }

    /// Requests at different precisions agree after rounding the wider one.
    #[test]
    fn q_infinity_precision_self_consistency() {
        for d in [10u32, 20, 30, 50] {
            let narrow = q_infinity(&PrecisionConfig::with_digits(d)).unwrap();
            let wide = q_infinity(&PrecisionConfig::with_digits(d + 10)).unwrap();
            let gap = narrow.sub(&wide).abs().to_rational();
            // Two correctly rounded evaluations can disagree by one ulp at
            // the narrow scale.
            assert!(
                gap <= Rational::new(BigInt::one(), BigInt::from(10u32).pow(d)),
                "digits={d}"
            );
        }
    }

    #[test]
    fn q_of_x_special_points() {
        let cfg = PrecisionConfig::with_digits(10);
        // x = 0: every factor is 1.
        assert_eq!(q_of_x(&Rational::zero(), &cfg).unwrap().to_rational(), rat(1, 1));
        // x = 2: the k = 1 factor vanishes exactly.
        assert!(q_of_x(&rat(2, 1), &cfg).unwrap().is_zero());
        // x = 1 is the infinite-product limit.
        assert_eq!(q_of_x(&rat(1, 1), &cfg).unwrap(), q_infinity(&cfg).unwrap());
    }

    /// Q(1/2) strips the first factor of Q_∞: Q(1/2) = 2·Q_∞ =
    /// 0.57757619017320484256…
    #[test]
    fn q_of_half_reference() {
        let cfg = PrecisionConfig::with_digits(20);
        let got = q_of_x(&rat(1, 2), &cfg).unwrap();
        assert_eq!(got.to_string(), "0.57757619017320484256");
        let doubled = q_infinity(&cfg).unwrap().mul_int(2);
        let gap = got.sub(&doubled).abs().to_rational();
        assert!(gap <= Rational::new(BigInt::from(2u32), BigInt::from(10u32).pow(20)));
    }

    /// A cap too small for the requested digits must be reported.
    #[test]
    fn truncation_cap_is_honored() {
        let cfg = PrecisionConfig { digits: 40, guard_digits: 15, max_truncation_index: 50 };
        assert_eq!(
            q_infinity(&cfg).unwrap_err(),
            Error::TruncationCapExceeded { cap: 50 }
        );
        // The same budget is ample for few digits.
        let cfg_ok = PrecisionConfig { digits: 5, guard_digits: 5, max_truncation_index: 50 };
        assert_eq!(q_infinity(&cfg_ok).unwrap().to_string(), "0.28879");
    }

    /// First six coefficients: 1, −1, 1/3, −1/21, 1/315, −1/9765.
    #[test]
    fn euler_coefficient_small_values() {
        let want = [
            rat(1, 1),
            rat(-1, 1),
            rat(1, 3),
            rat(-1, 21),
            rat(1, 315),
            rat(-1, 9765),
        ];
        for (m, w) in want.iter().enumerate() {
            assert_eq!(&euler_coefficient(m as u32), w, "a_{}", m + 1);
        }
    }

    /// Signs alternate; the magnitude ratio is exactly
    /// 2^-(m+1)/(1 − 2^-(m+1)) — equal to 1 only at the first step, then
    /// strictly decreasing below 1.
    #[test]
    fn euler_coefficient_sign_and_ratio() {
        for m in 0..24u32 {
            let a = euler_coefficient(m);
            let b = euler_coefficient(m + 1);
            assert_eq!(a.is_negative(), m % 2 == 1, "sign at m={m}");
            let ratio = (b / a).abs();
            let pow = BigInt::one() << (m + 1);
            let want = Rational::new(BigInt::one(), &pow - BigInt::one());
            assert_eq!(ratio, want, "ratio at m={m}");
            if m == 0 {
                assert_eq!(ratio, rat(1, 1));
            } else {
                assert!(ratio < rat(1, 1), "ratio must shrink for m={m}");
            }
        }
    }

    /// The expansion residual shrinks super-exponentially, down to the
    /// evaluation noise floor, for every probe point.
    #[test]
    fn euler_identity_residual_shrinks() {
        let cfg = PrecisionConfig::with_digits(20);
        let probes = [rat(-1, 1), rat(-1, 2), rat(0, 1), rat(1, 2), rat(1, 1), rat(3, 2)];
        let floor = rat(1, 1_000_000_000_000_000); // 1e−15
        for t in &probes {
            let residuals: Vec<Rational> = (1..=12)
                .map(|m| verify_euler_identity(t, m, &cfg).unwrap().to_rational())
                .collect();
            for pair in residuals.windows(2) {
                let above_floor = pair[0] > floor || pair[1] > floor;
                if above_floor {
                    assert!(
                        pair[1] <= pair[0],
                        "residual grew at t={t}: {} -> {}",
                        pair[0],
                        pair[1]
                    );
                }
            }
            assert!(
                residuals.last().unwrap() < &floor,
                "residual at t={t} still {}",
                residuals.last().unwrap()
            );
        }
    }

    /// t = 0 with a single term matches exactly: both sides are 1.
    #[test]
    fn euler_identity_trivial_point() {
        let cfg = PrecisionConfig::with_digits(10);
        assert!(verify_euler_identity(&Rational::zero(), 1, &cfg).unwrap().is_zero());
    }

    /// Two-term check at t = 1/2: |Q(1/2) − (1 − 1/2)| = 0.0775761901…
    #[test]
    fn euler_identity_two_terms_at_half() {
        let cfg = PrecisionConfig::with_digits(10);
        let got = verify_euler_identity(&rat(1, 2), 2, &cfg).unwrap();
        assert_eq!(got.to_string(), "0.0775761902");
    }

    /// Acceptance-grade residuals: forty terms drive the residual below
    /// 1e−20 at 25 digits for t ∈ {−1, 1/2, 1}.
    #[test]
    fn euler_identity_forty_terms() {
        let cfg = PrecisionConfig::with_digits(25);
        let bound = Rational::new(BigInt::one(), BigInt::from(10u32).pow(20));
        for t in [rat(-1, 1), rat(1, 2), rat(1, 1)] {
            let got = verify_euler_identity(&t, 40, &cfg).unwrap();
            assert!(got.to_rational() < bound, "residual at t={t}: {got}");
        }
    }
}
