//! Fixed-point decimal arithmetic with an explicit working-precision
//! contract.
//!
//! [`PrecFloat`] stores `mantissa · 10^(-working_precision)`: a big-integer
//! mantissa and the count of decimal digits kept after the point. The
//! error contract per operation:
//!
//! * addition and subtraction align to the larger working precision and are
//!   **exact** at that precision;
//! * multiplication, division, and conversion from a rational are
//!   **correctly rounded** (nearest, ties to even) — error at most half an
//!   ulp of the result precision;
//! * [`PrecFloat::rescale`] to fewer digits is correctly rounded, to more
//!   digits exact;
//! * the transcendental constructors ([`PrecFloat::ln2`],
//!   [`PrecFloat::pi`], [`PrecFloat::ln`], [`PrecFloat::sin_cos`]) carry
//!   ten internal guard digits and document a final error below two ulp.
//!
//! Callers that chain many operations are expected to run at
//! `digits + guard_digits` (see [`PrecisionConfig`]) and round once at the
//! end, so the per-operation half-ulp errors never surface in results.

use crate::{Error, Rational, Result};
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Requested output precision plus internal head-room for a computation.
///
/// `digits` is the number of decimal digits after the point the caller
/// wants to trust in the result. Internally the modules evaluate at
/// `digits + guard_digits` and round once. `max_truncation_index` caps how
/// far any infinite series or product may be followed; evaluations return
/// [`Error::TruncationCapExceeded`] instead of silently truncating early.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionConfig {
    /// Trusted decimal digits after the point in the final result.
    pub digits: u32,
    /// Extra internal digits guarding against rounding accumulation.
    pub guard_digits: u32,
    /// Upper bound on series/product truncation indices.
    pub max_truncation_index: u32,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig { digits: 30, guard_digits: 15, max_truncation_index: 100_000 }
    }
}

impl PrecisionConfig {
    /// Config with the given output digits and default guard/cap.
    pub fn with_digits(digits: u32) -> Self {
        PrecisionConfig { digits, ..Self::default() }
    }

    /// Digits carried during intermediate computation.
    pub fn working_digits(&self) -> u32 {
        self.digits + self.guard_digits
    }

    /// Rejects configurations the evaluation contracts cannot honor.
    pub fn validate(&self) -> Result<()> {
        if self.digits < 1 {
            return Err(Error::InvalidPrecision("digits must be at least 1"));
        }
        Ok(())
    }
}

/// Arbitrary-precision decimal: `mantissa · 10^(-working_precision)`.
#[derive(Clone, Debug)]
pub struct PrecFloat {
    mant: BigInt,
    scale: u32,
}

/// `10^k`.
fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

/// Correctly rounded quotient `n / d` (nearest, ties to even); `d > 0`.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    debug_assert!(d.is_positive());
    let negative = n.is_negative();
    let (mut q, r) = n.abs().div_rem(d);
    let twice: BigInt = &r << 1;
    match twice.cmp(d) {
        Ordering::Greater => q += 1,
        Ordering::Equal => {
            if q.is_odd() {
                q += 1;
            }
        }
        Ordering::Less => {}
    }
    if negative {
        -q
    } else {
        q
    }
}

impl PrecFloat {
    /// Zero at the given working precision.
    pub fn zero(scale: u32) -> Self {
        PrecFloat { mant: BigInt::zero(), scale }
    }

    /// The integer `n`, exactly, at the given working precision.
    pub fn from_int(n: i64, scale: u32) -> Self {
        PrecFloat { mant: BigInt::from(n) * pow10(scale), scale }
    }

    /// The value `mant · 10^(-scale)`, exactly.
    pub fn from_scaled(mant: BigInt, scale: u32) -> Self {
        PrecFloat { mant, scale }
    }

    /// Correctly rounded conversion of an exact rational.
    pub fn from_rational(r: &Rational, scale: u32) -> Self {
        let n = r.numer() * pow10(scale);
        PrecFloat { mant: round_div(&n, r.denom()), scale }
    }

    /// Count of decimal digits kept after the point.
    pub fn working_precision(&self) -> u32 {
        self.scale
    }

    /// Exact rational value of this fixed-point number.
    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mant.clone(), pow10(self.scale))
    }

    /// One unit in the last place at this working precision.
    pub fn ulp(&self) -> Rational {
        Rational::new(BigInt::one(), pow10(self.scale))
    }

    /// Change working precision: exact when widening, correctly rounded
    /// when narrowing.
    pub fn rescale(&self, scale: u32) -> Self {
        match scale.cmp(&self.scale) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => PrecFloat {
                mant: &self.mant * pow10(scale - self.scale),
                scale,
            },
            Ordering::Less => PrecFloat {
                mant: round_div(&self.mant, &pow10(self.scale - scale)),
                scale,
            },
        }
    }

    fn aligned(&self, rhs: &Self) -> (BigInt, BigInt, u32) {
        let scale = self.scale.max(rhs.scale);
        let a = &self.mant * pow10(scale - self.scale);
        let b = &rhs.mant * pow10(scale - rhs.scale);
        (a, b, scale)
    }

    /// Exact sum at the larger working precision.
    pub fn add(&self, rhs: &Self) -> Self {
        let (a, b, scale) = self.aligned(rhs);
        PrecFloat { mant: a + b, scale }
    }

    /// Exact difference at the larger working precision.
    pub fn sub(&self, rhs: &Self) -> Self {
        let (a, b, scale) = self.aligned(rhs);
        PrecFloat { mant: a - b, scale }
    }

    /// Exact negation.
    pub fn neg(&self) -> Self {
        PrecFloat { mant: -&self.mant, scale: self.scale }
    }

    /// Exact absolute value.
    pub fn abs(&self) -> Self {
        PrecFloat { mant: self.mant.abs(), scale: self.scale }
    }

    /// Correctly rounded product at the larger working precision.
    pub fn mul(&self, rhs: &Self) -> Self {
        let scale = self.scale.max(rhs.scale);
        let raw = &self.mant * &rhs.mant; // scale: self.scale + rhs.scale
        PrecFloat {
            mant: round_div(&raw, &pow10(self.scale + rhs.scale - scale)),
            scale,
        }
    }

    /// Exact product with a small integer.
    pub fn mul_int(&self, k: i64) -> Self {
        PrecFloat { mant: &self.mant * k, scale: self.scale }
    }

    /// Correctly rounded quotient at the larger working precision.
    /// Panics on a zero divisor.
    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.mant.is_zero(), "PrecFloat division by zero");
        let scale = self.scale.max(rhs.scale);
        // self/rhs = (a · 10^(rhs.scale - self.scale + scale)) / b / 10^scale
        let raw = &self.mant * pow10(rhs.scale + scale - self.scale);
        let mant = if rhs.mant.is_negative() {
            round_div(&-&raw, &-&rhs.mant)
        } else {
            round_div(&raw, &rhs.mant)
        };
        PrecFloat { mant, scale }
    }

    /// Correctly rounded quotient by a nonzero integer.
    pub fn div_int(&self, k: &BigInt) -> Self {
        assert!(!k.is_zero(), "PrecFloat division by zero");
        let mant = if k.is_negative() {
            round_div(&-&self.mant, &-k)
        } else {
            round_div(&self.mant, k)
        };
        PrecFloat { mant, scale: self.scale }
    }

    /// `self^k` by repeated correctly rounded multiplication; the error is
    /// below `k` ulp for operands of magnitude at most a few units.
    pub fn powi(&self, k: u32) -> Self {
        let mut acc = PrecFloat::from_int(1, self.scale);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// True when the stored value is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    /// True for values strictly below zero.
    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Round-trip through the shortest correctly rounded decimal parse.
    pub fn to_f64(&self) -> f64 {
        // Rendering at full precision and parsing keeps the conversion
        // correctly rounded for any magnitude without overflow tricks.
        self.to_string().parse().unwrap_or(f64::NAN)
    }

    /// Decimal rendering rounded to `digits` after the point.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        self.rescale(digits).to_string()
    }

    // ----- transcendental constructors -----

    /// Ten guard digits used inside the series constructors below.
    const SERIES_GUARD: u32 = 10;

    /// `log 2` with error below one ulp.
    ///
    /// Series: `log 2 = 2 Σ_{k≥0} (1/3)^{2k+1} / (2k+1)`. Terms are
    /// generated by a correctly rounded divide-by-9, so the per-term error
    /// stays near one guard-scale ulp; with ten guard digits the
    /// accumulated error is far below the returned scale.
    pub fn ln2(scale: u32) -> Self {
        let w = scale + Self::SERIES_GUARD;
        let nine = BigInt::from(9u32);
        let mut pow = round_div(&pow10(w), &BigInt::from(3u32));
        let mut sum = BigInt::zero();
        let mut k: u64 = 0;
        while !pow.is_zero() {
            sum += round_div(&pow, &BigInt::from(2 * k + 1));
            pow = round_div(&pow, &nine);
            k += 1;
        }
        PrecFloat { mant: sum << 1, scale: w }.rescale(scale)
    }

    /// `π` with error below one ulp, via
    /// `π = 16·atan(1/5) − 4·atan(1/239)`.
    pub fn pi(scale: u32) -> Self {
        let w = scale + Self::SERIES_GUARD;
        let atan_inv = |n: u32| -> BigInt {
            let nsq = BigInt::from(n) * BigInt::from(n);
            let mut pow = round_div(&pow10(w), &BigInt::from(n));
            let mut sum = BigInt::zero();
            let mut k: u64 = 0;
            while !pow.is_zero() {
                let term = round_div(&pow, &BigInt::from(2 * k + 1));
                if k % 2 == 0 {
                    sum += term;
                } else {
                    sum -= term;
                }
                pow = round_div(&pow, &nsq);
                k += 1;
            }
            sum
        };
        let mant = atan_inv(5) * 16 - atan_inv(239) * 4;
        PrecFloat { mant, scale: w }.rescale(scale)
    }

    /// Natural logarithm of a positive value, error below two ulp for
    /// inputs between `10^-9` and `10^9`.
    ///
    /// The input is normalized into `[3/4, 3/2)` by exact powers of two,
    /// then `log m = 2·atanh((m−1)/(m+1))` converges with ratio at most
    /// `1/25`; the power-of-two count re-enters through [`PrecFloat::ln2`].
    pub fn ln(&self) -> Result<Self> {
        if self.mant.is_zero() || self.mant.is_negative() {
            return Err(Error::InvalidPrecision("log of a non-positive value"));
        }
        let scale = self.scale;
        let w = scale + Self::SERIES_GUARD;
        let mut m = self.rescale(w);
        let mut e: i64 = 0;
        let lower_limit = PrecFloat::from_rational(&Rational::new(3.into(), 4.into()), w);
        let upper_limit = PrecFloat::from_rational(&Rational::new(3.into(), 2.into()), w);
        while m.cmp_value(&upper_limit) != Ordering::Less {
            m = PrecFloat { mant: round_div(&m.mant, &BigInt::from(2u32)), scale: w };
            e += 1;
        }
        while m.cmp_value(&lower_limit) == Ordering::Less {
            m = PrecFloat { mant: &m.mant << 1, scale: w };
            e -= 1;
        }
        let one = PrecFloat::from_int(1, w);
        let u = m.sub(&one).div(&m.add(&one));
        // atanh(u) = Σ u^(2k+1)/(2k+1)
        let usq = u.mul(&u);
        let mut pow = u.clone();
        let mut sum = PrecFloat::zero(w);
        let mut k: u64 = 0;
        while !pow.is_zero() {
            sum = sum.add(&pow.div_int(&BigInt::from(2 * k + 1)));
            pow = pow.mul(&usq);
            k += 1;
        }
        let mut out = sum.mul_int(2);
        if e != 0 {
            out = out.add(&PrecFloat::ln2(w).mul_int(e));
        }
        Ok(out.rescale(scale))
    }

    /// Simultaneous sine and cosine, error below two ulp for arguments of
    /// magnitude up to a few hundred.
    ///
    /// The argument is reduced modulo `2π` to `[−π, π]` (the reduction
    /// inherits the ulp-level error of the internal `π`, scaled by the
    /// reduction count), then both Taylor series are summed to exhaustion
    /// at the guard scale.
    pub fn sin_cos(&self) -> (Self, Self) {
        let scale = self.scale;
        let w = scale + Self::SERIES_GUARD;
        let two_pi = PrecFloat::pi(w).mul_int(2);
        let turns_f = self.rescale(w).div(&two_pi);
        // Round the turn count to the nearest integer and subtract.
        let turns = round_div(&turns_f.mant, &pow10(w));
        let theta = self
            .rescale(w)
            .sub(&PrecFloat { mant: &two_pi.mant * &turns, scale: w });
        let mut sin = PrecFloat::zero(w);
        let mut cos = PrecFloat::zero(w);
        let mut term = PrecFloat::from_int(1, w); // θ^n / n!
        let mut n: u64 = 0;
        while !term.is_zero() {
            match n % 4 {
                0 => cos = cos.add(&term),
                2 => cos = cos.sub(&term),
                _ => {}
            }
            if n % 2 == 1 {
                if n % 4 == 1 {
                    sin = sin.add(&term);
                } else {
                    sin = sin.sub(&term);
                }
            }
            term = term.mul(&theta).div_int(&BigInt::from(n + 1));
            n += 1;
        }
        (sin.rescale(scale), cos.rescale(scale))
    }

    /// Total order on the represented values.
    pub fn cmp_value(&self, rhs: &Self) -> Ordering {
        let (a, b, _) = self.aligned(rhs);
        a.cmp(&b)
    }
}

impl fmt::Display for PrecFloat {
    /// Plain decimal with exactly `working_precision` digits after the
    /// point (no digits and no point when the precision is zero).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ten = pow10(self.scale);
        let (int, frac) = self.mant.abs().div_rem(&ten);
        let sign = if self.mant.is_negative() { "-" } else { "" };
        if self.scale == 0 {
            return write!(f, "{sign}{int}");
        }
        let frac_str = frac.to_string();
        let pad = self.scale as usize - frac_str.len();
        write!(f, "{sign}{int}.")?;
        for _ in 0..pad {
            write!(f, "0")?;
        }
        write!(f, "{frac_str}")
    }
}

impl PartialEq for PrecFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl Eq for PrecFloat {}

impl PartialOrd for PrecFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl Ord for PrecFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}
