//! Exact dyadic numbers `num / 2^exp`, used internally by the sequence
//! routes.
//!
//! Every recurrence in this crate divides only by powers of two, so all
//! intermediate values are dyadic. At table sizes in the thousands the
//! numerators reach millions of bits, and the gcd reduction a general
//! rational type performs on every operation dominates the whole
//! computation; tracking the denominator as a bare exponent removes that
//! cost entirely. Values are reduced only once, at the final conversion to
//! [`Rational`].

use crate::Rational;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// An exact value `num / 2^exp`. No reduction invariant is maintained:
/// `num` may be even. `exp` only grows during a computation; trailing
/// factors of two are stripped when converting out.
#[derive(Clone, Debug)]
pub(crate) struct Dyadic {
    num: BigInt,
    exp: usize,
}

impl Dyadic {
    pub(crate) fn zero() -> Self {
        Dyadic { num: BigInt::zero(), exp: 0 }
    }

    pub(crate) fn one() -> Self {
        Dyadic { num: BigInt::one(), exp: 0 }
    }

    /// The value `num / 2^exp`.
    pub(crate) fn new(num: BigInt, exp: usize) -> Self {
        Dyadic { num, exp }
    }

    pub(crate) fn from_int(n: i64) -> Self {
        Dyadic { num: BigInt::from(n), exp: 0 }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// In-place add. Alignment shifts are exact, so addition is exact.
    pub(crate) fn add_assign(&mut self, rhs: &Dyadic) {
        if self.exp < rhs.exp {
            self.num <<= rhs.exp - self.exp;
            self.exp = rhs.exp;
        }
        if rhs.exp < self.exp {
            self.num += &rhs.num << (self.exp - rhs.exp);
        } else {
            self.num += &rhs.num;
        }
    }

    pub(crate) fn sub_assign(&mut self, rhs: &Dyadic) {
        if self.exp < rhs.exp {
            self.num <<= rhs.exp - self.exp;
            self.exp = rhs.exp;
        }
        if rhs.exp < self.exp {
            self.num -= &rhs.num << (self.exp - rhs.exp);
        } else {
            self.num -= &rhs.num;
        }
    }

    pub(crate) fn neg(mut self) -> Self {
        self.num = -self.num;
        self
    }

    /// Multiply by an integer.
    pub(crate) fn mul_int(&self, k: &BigInt) -> Self {
        Dyadic { num: &self.num * k, exp: self.exp }
    }

    /// Divide by `2^k` (exact: the exponent absorbs it).
    pub(crate) fn div_pow2(mut self, k: usize) -> Self {
        self.exp += k;
        self
    }

    /// Multiply by `(2^k - 1)` via shift-and-subtract, which is linear in
    /// the numerator size instead of a full big-integer multiplication.
    pub(crate) fn mul_pow2_minus_one(&self, k: usize) -> Self {
        Dyadic { num: (&self.num << k) - &self.num, exp: self.exp }
    }

    /// Reduce and convert. The result has an odd numerator (or is zero)
    /// over a power-of-two denominator, so the raw constructor is safe.
    pub(crate) fn to_rational(&self) -> Rational {
        if self.num.is_zero() {
            return Rational::zero();
        }
        let tz = self.num.trailing_zeros().unwrap_or(0) as usize;
        let drop = tz.min(self.exp);
        let num = &self.num >> drop;
        let den = BigInt::one() << (self.exp - drop);
        Rational::new_raw(num, den)
    }

}
