//! Exact rational computation of the expected 2-protected node counts
//! `l_n` and their linearized coefficients `m_n`, by three mutually
//! independent routes that must agree exactly:
//!
//! * the direct recursion
//!   `l_{n+1} = 1 + 2^{1-n} Σ_{k=0}^n C(n,k) l_k − n·2^{1-n}` (valid from
//!   `n = 3`, initial values `l_0 = l_1 = l_2 = 0`, `l_3 = 1/2`)
//!   — [`l_sequence_recursion`];
//! * the coefficient recurrence
//!   `m_{n+1} = −(1 − 2^{1-n}) m_n + (−1)^n (n·2^{1-n} − 1 + n(n−1)/4)`
//!   (from `n = 1`, `m_0 = m_1 = 0`) together with the binomial transform
//!   `l_n = Σ_{k=2}^n C(n,k) m_k` — [`m_sequence_recursion`],
//!   [`l_from_m`];
//! * the closed forms: the solved coefficient
//!   `m_N = Q_{N-2} (−1)^N Σ_{n=1}^{N-2} (1 − (n+1)2^{-n} − n(n+1)/4)/Q_n`
//!   and the double sum
//!   `l_N = Σ_{k=2}^N C(N,k) (−1)^k Q_{k-2} Σ_{n=1}^{k-2} (…)/Q_n`
//!   — [`m_closed_form`], [`l_closed_form`].
//!
//! Everything here is exact: every value is dyadic (denominator a power of
//! two — the recurrences divide only by powers of two, and in the closed
//! form each `Q_{k-2}/Q_n` collapses to the dyadic tail product
//! `∏_{n<i≤k-2}(1 − 2^{-i})`). Internally the routes run on the gcd-free
//! dyadic representation; the cost note: tables are `O(N²)` big-number
//! operations and the entries reach `Θ(N²)` bits, so full tables in the
//! low thousands take seconds and hundreds of megabytes. The bulk helper
//! [`l_values_via_m`] streams the coefficients instead of materializing a
//! table when only a handful of `l_N` are wanted.

use crate::dyadic::Dyadic;
use crate::{Error, Rational, Result};
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};

/// Which sequence a [`SequenceTable`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceKind {
    /// The expectation sequence `l_n`.
    LSequence,
    /// The linearized coefficient sequence `m_n`.
    MSequence,
}

/// How a [`SequenceTable`] was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Direct recursion on the sequence itself.
    Recursion,
    /// Closed-form evaluation.
    ClosedForm,
    /// Binomial transform of the companion sequence.
    BinomialTransform,
}

/// A sequence prefix `values[0..=N]`, tagged with what it is and how it
/// was computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceTable {
    /// Which sequence the values belong to.
    pub kind: SequenceKind,
    /// Entries indexed from 0.
    pub values: Vec<Rational>,
    /// The route that produced the entries.
    pub method: Method,
}

impl SequenceTable {
    /// Entry at index `n`, or a length error.
    pub fn value(&self, n: usize) -> Result<&Rational> {
        self.values.get(n).ok_or(Error::TableTooShort { needed: n, len: self.values.len() })
    }
}

/// Exact binomial coefficient `C(n, k)`; zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `l_0..l_N` by the direct recursion, exactly.
///
/// `l_{n+1} = 1 + 2^{1-n} Σ_{k=0}^n C(n,k) l_k − n·2^{1-n}` for `n ≥ 3`,
/// with `l_0 = l_1 = l_2 = 0` and `l_3 = 1/2` as initial values.
pub fn l_sequence_recursion(n_max: usize) -> SequenceTable {
    let mut values: Vec<Dyadic> = vec![
        Dyadic::zero(),
        Dyadic::zero(),
        Dyadic::zero(),
        Dyadic::new(BigInt::one(), 1),
    ];
    values.truncate(n_max + 1);

    // Row of binomials C(n, ·), updated in place by Pascal's rule.
    let mut row: Vec<BigInt> = vec![BigInt::one(), BigInt::from(3u32), BigInt::from(3u32), BigInt::one()];
    while values.len() < n_max + 1 {
        let n = values.len() - 1;
        // sum = Σ_{k=0}^{n} C(n,k) l_k, then l_{n+1} = (sum − n)·2^{1-n} + 1.
        let mut sum = Dyadic::zero();
        for (k, l) in values.iter().enumerate() {
            if !l.is_zero() {
                sum.add_assign(&l.mul_int(&row[k]));
            }
        }
        sum.sub_assign(&Dyadic::from_int(n as i64));
        let mut next = sum.div_pow2(n - 1);
        next.add_assign(&Dyadic::one());
        values.push(next);

        row.push(BigInt::one());
        for k in (1..n + 1).rev() {
            let prev = row[k - 1].clone();
            row[k] += prev;
        }
    }

    SequenceTable {
        kind: SequenceKind::LSequence,
        values: values.iter().map(Dyadic::to_rational).collect(),
        method: Method::Recursion,
    }
}

/// The inhomogeneous term `(−1)^n (n·2^{1-n} − 1 + n(n−1)/4)` of the
/// coefficient recurrence, as the dyadic
/// `±(8n − 4·2^n + n(n−1)·2^n) / 2^{n+2}`.
fn m_recurrence_term(n: usize) -> Dyadic {
    let pow: BigInt = BigInt::one() << n;
    let n_big = BigInt::from(n as u64);
    let num: BigInt =
        BigInt::from(8u32) * &n_big - (&pow << 2) + &n_big * (&n_big - BigInt::one()) * &pow;
    let signed = if n % 2 == 0 { num } else { -num };
    Dyadic::new(signed, n + 2)
}

/// `m_0..m_N` by the coefficient recurrence, exactly.
///
/// `m_{n+1} = −(1 − 2^{1-n}) m_n + (−1)^n (n·2^{1-n} − 1 + n(n−1)/4)`
/// for `n ≥ 1`, with `m_0 = m_1 = 0`.
pub fn m_sequence_recursion(n_max: usize) -> SequenceTable {
    let mut values: Vec<Dyadic> = Vec::with_capacity(n_max + 1);
    values.push(Dyadic::zero());
    if n_max >= 1 {
        values.push(Dyadic::zero());
    }
    while values.len() < n_max + 1 {
        let n = values.len() - 1;
        values.push(m_step(&values[n], n));
    }
    SequenceTable {
        kind: SequenceKind::MSequence,
        values: values.iter().map(Dyadic::to_rational).collect(),
        method: Method::Recursion,
    }
}

/// One step of the coefficient recurrence: `m_{n+1}` from `m_n`.
fn m_step(m_n: &Dyadic, n: usize) -> Dyadic {
    // −(1 − 2^{1-n}) m_n = −(2^{n-1} − 1)/2^{n-1} · m_n
    let mut next = m_n.mul_pow2_minus_one(n - 1).div_pow2(n - 1).neg();
    next.add_assign(&m_recurrence_term(n));
    next
}

/// Numerator of the closed-form summand over `2^{n+2}`:
/// `2^{n+2} − 4(n+1) − n(n+1)·2^n`.
fn closed_form_summand_num(n: usize) -> BigInt {
    let pow: BigInt = BigInt::one() << n;
    let n1 = BigInt::from(n as u64 + 1);
    (&pow << 2) - (&n1 << 2) - BigInt::from(n as u64) * &n1 * &pow
}

/// Summand `1 − (n+1)·2^{-n} − n(n+1)/4` of the closed forms, exactly:
/// `(2^{n+2} − 4(n+1) − n(n+1)·2^n) / 2^{n+2}`. Reference form for the
/// literal-evaluation tests.
#[cfg(test)]
fn closed_form_summand(n: usize) -> Rational {
    Rational::new(closed_form_summand_num(n), BigInt::one() << (n + 2))
}

/// Solved closed form
/// `m_N = Q_{N-2} (−1)^N Σ_{n=1}^{N-2} (1 − (n+1)2^{-n} − n(n+1)/4)/Q_n`,
/// independent of the one-step recurrence. Rejects `N < 2`; the sum at
/// `N = 2` is empty.
///
/// Each term equals `s_n·2^{T_n−n−2}/odd_n` with `T_n = n(n+1)/2` and
/// `odd_n = ∏_{i≤n}(2^i−1)`, so the partial sums are held over the
/// constructed common denominator `odd_n·4` — multiplying through by
/// each new odd factor instead of dividing per term — and the
/// prefactor's odd part then cancels symbolically, leaving a single
/// power-of-two strip and no gcd on the way. A unit test pins this
/// against the same sum with every `1/Q_n` division performed
/// literally; per-term division costs seconds per call at N = 200.
pub fn m_closed_form(n_target: usize) -> Result<Rational> {
    if n_target < 2 {
        return Err(Error::UnsupportedIndex {
            index: n_target,
            reason: "the solved coefficient form starts at index 2",
        });
    }
    let mut sum_num = BigInt::zero();
    let mut tri = 0u64; // T_j
    for j in 1..=n_target - 2 {
        tri += j as u64;
        if !sum_num.is_zero() {
            sum_num *= (BigInt::one() << j) - BigInt::one();
        }
        sum_num += closed_form_summand_num(j) << (tri - j as u64) as usize;
    }
    // m_N = ±(odd_J/2^{T_J}) · sum_num/(odd_J·4) = ±sum_num/2^{T_J+2}
    let signed = if n_target % 2 == 0 { sum_num } else { -sum_num };
    Ok(Dyadic::new(signed, (tri + 2) as usize).to_rational())
}

/// Exponent `e` with `den = 2^e`. Coefficient tables are dyadic in
/// lowest terms, so their denominators are pure powers of two.
fn pow2_exponent(den: &BigInt) -> usize {
    let tz = den.trailing_zeros().expect("denominator is nonzero");
    assert!(den.bits() == tz + 1 && den.sign() == Sign::Plus, "table value must be dyadic");
    tz as usize
}

/// Binomial transform `l_N = Σ_{k=2}^N C(N,k) m_k` over a coefficient
/// table. Fails when the table does not reach index `N`.
///
/// The sum is accumulated dyadically — alignment by shifts, one
/// reduction at the end — since a general rational sum would spend its
/// time in million-bit divisions and gcds at table sizes past a
/// thousand.
pub fn l_from_m(m_table: &SequenceTable, n_target: usize) -> Result<Rational> {
    debug_assert_eq!(m_table.kind, SequenceKind::MSequence);
    if m_table.values.len() < n_target + 1 {
        return Err(Error::TableTooShort { needed: n_target, len: m_table.values.len() });
    }
    let mut sum = Dyadic::zero();
    let mut binom = BigInt::one(); // C(N, k), advanced multiplicatively
    let n_big = n_target as u64;
    for k in 0..=n_target {
        if k >= 2 {
            let m_k = &m_table.values[k];
            if !m_k.numer().is_zero() {
                let term = Dyadic::new(m_k.numer() * &binom, pow2_exponent(m_k.denom()));
                sum.add_assign(&term);
            }
        }
        if k < n_target {
            binom = binom * BigInt::from(n_big - k as u64) / BigInt::from(k as u64 + 1);
        }
    }
    Ok(sum.to_rational())
}

/// Partial tee values `T_j = Q_j Σ_{n=1}^{j} (1 − (n+1)2^{-n} − n(n+1)/4)/Q_n`
/// for `j = 0..=j_max`, in dyadic form.
///
/// Distributing `Q_j` through the sum turns every term into the dyadic
/// tail product `(…)·∏_{n<i≤j}(1 − 2^{-i})`, which is what makes the
/// closed-form route exact without ever leaving dyadic arithmetic; the
/// values grow by one factor per step:
/// `T_j = (1 − 2^{-j}) T_{j-1} + summand(j)`.
pub(crate) fn closed_form_tees(j_max: usize) -> Vec<Dyadic> {
    let mut tees = Vec::with_capacity(j_max + 1);
    tees.push(Dyadic::zero());
    for j in 1..=j_max {
        let pow: BigInt = BigInt::one() << j;
        let n1 = BigInt::from(j as u64 + 1);
        let num = (&pow << 2) - (&n1 << 2) - BigInt::from(j as u64) * &n1 * &pow;
        let summand = Dyadic::new(num, j + 2);
        let mut next = tees[j - 1].mul_pow2_minus_one(j).div_pow2(j);
        next.add_assign(&summand);
        tees.push(next);
    }
    tees
}

/// Closed-form double sum
/// `l_N = Σ_{k=2}^N C(N,k) (−1)^k Q_{k-2} Σ_{n=1}^{k-2} (…)/Q_n`,
/// exactly; total for `N ≥ 0` (the empty outer sum gives `l_0 = l_1 = 0`,
/// and the `k = 2` term vanishes with its empty inner sum).
pub fn l_closed_form(n_target: usize) -> Rational {
    if n_target < 3 {
        return Rational::zero();
    }
    let tees = closed_form_tees(n_target - 2);
    let mut sum = Dyadic::zero();
    let mut binom = binomial(n_target as u64, 2);
    for k in 2..=n_target {
        let term = tees[k - 2].mul_int(&binom);
        if k % 2 == 0 {
            sum.add_assign(&term);
        } else {
            sum.sub_assign(&term);
        }
        binom = binom * BigInt::from((n_target - k) as u64) / BigInt::from(k as u64 + 1);
    }
    sum.to_rational()
}

/// `l_0..l_N` by the closed-form route, sharing one tee table across all
/// rows; each row is the same alternating sum [`l_closed_form`] evaluates.
pub fn l_closed_form_table(n_max: usize) -> Vec<Rational> {
    let tees = closed_form_tees(n_max.saturating_sub(2));
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n < 3 {
            out.push(Rational::zero());
            continue;
        }
        let mut sum = Dyadic::zero();
        let mut binom = binomial(n as u64, 2);
        for k in 2..=n {
            let term = tees[k - 2].mul_int(&binom);
            if k % 2 == 0 {
                sum.add_assign(&term);
            } else {
                sum.sub_assign(&term);
            }
            binom = binom * BigInt::from((n - k) as u64) / BigInt::from(k as u64 + 1);
        }
        out.push(sum.to_rational());
    }
    out
}

/// `l_N` for each requested index, by streaming the coefficient recurrence
/// through per-target binomial-transform accumulators.
///
/// Peak memory is one coefficient value plus one accumulator per target —
/// the full `Θ(N²)`-bit table is never materialized — so this is the
/// route for residual analysis at indices in the thousands.
pub fn l_values_via_m(targets: &[usize]) -> Vec<Rational> {
    let max = targets.iter().copied().max().unwrap_or(0);
    struct Acc {
        n: u64,
        binom: BigInt, // C(n, k) for the current k
        sum: Dyadic,
    }
    let mut accs: Vec<Acc> = targets
        .iter()
        .map(|&n| Acc { n: n as u64, binom: binomial(n as u64, 2), sum: Dyadic::zero() })
        .collect();

    let mut m_k = Dyadic::zero(); // m_1
    for k in 2..=max {
        m_k = m_step(&m_k, k - 1);
        for acc in accs.iter_mut() {
            if acc.n >= k as u64 {
                if !m_k.is_zero() {
                    acc.sum.add_assign(&m_k.mul_int(&acc.binom));
                }
                acc.binom = &acc.binom * BigInt::from(acc.n - k as u64) / BigInt::from(k as u64 + 1);
            }
        }
    }
    accs.iter().map(|a| a.sum.to_rational()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::q_partial;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn binomial_small_and_edges() {
        assert_eq!(binomial(5, 2), BigInt::from(10u32));
        assert_eq!(binomial(7, 0), BigInt::one());
        assert_eq!(binomial(7, 7), BigInt::one());
        assert_eq!(binomial(7, -1), BigInt::zero());
        assert_eq!(binomial(7, 8), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    /// The multiplicative route must match a Pascal-triangle recurrence;
    /// the central coefficient at n = 500 has exactly 150 decimal digits.
    #[test]
    fn binomial_matches_pascal_triangle() {
        let n = 500usize;
        let mut row: Vec<BigInt> = vec![BigInt::one()];
        for _ in 0..n {
            let mut next = vec![BigInt::one()];
            for w in row.windows(2) {
                next.push(&w[0] + &w[1]);
            }
            next.push(BigInt::one());
            row = next;
        }
        for (k, want) in row.iter().enumerate() {
            assert_eq!(&binomial(n as u64, k as i64), want, "C(500,{k})");
        }
        assert_eq!(binomial(500, 250).to_string().len(), 150);
    }

    /// Frozen initial segment of the expectation sequence, through l_10.
    #[test]
    fn l_recursion_initial_segment() {
        let t = l_sequence_recursion(10);
        let want = [
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
            rat(1, 2),
            rat(3, 8),
            rat(51, 64),
            rat(1195, 1024),
            rat(48715, 32768),
            rat(3_736_043, 2_097_152),
            rat(556_218_347, 268_435_456),
            rat(162_754_812_267, 68_719_476_736),
        ];
        assert_eq!(t.values.len(), 11);
        assert_eq!(t.kind, SequenceKind::LSequence);
        for (n, w) in want.iter().enumerate() {
            assert_eq!(&t.values[n], w, "l_{n}");
        }
    }

    /// Frozen initial segment of the coefficient sequence, through m_8.
    #[test]
    fn m_recursion_initial_segment() {
        let t = m_sequence_recursion(8);
        let want = [
            rat(0, 1),
            rat(0, 1),
            rat(0, 1),
            rat(1, 2),
            rat(-13, 8),
            rat(251, 64),
            rat(-8181, 1024),
            rat(472_747, 32768),
            rat(-49_935_381, 2_097_152),
        ];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(&t.values[n], w, "m_{n}");
        }
    }

    #[test]
    fn m_closed_form_small_and_rejections() {
        assert_eq!(m_closed_form(2).unwrap(), rat(0, 1));
        assert_eq!(m_closed_form(3).unwrap(), rat(1, 2));
        assert_eq!(m_closed_form(4).unwrap(), rat(-13, 8));
        assert!(matches!(m_closed_form(0), Err(Error::UnsupportedIndex { .. })));
        assert!(matches!(m_closed_form(1), Err(Error::UnsupportedIndex { .. })));
    }

    #[test]
    fn l_from_m_small_and_short_table() {
        let m = m_sequence_recursion(4);
        assert_eq!(l_from_m(&m, 2).unwrap(), rat(0, 1));
        assert_eq!(l_from_m(&m, 3).unwrap(), rat(1, 2));
        assert_eq!(l_from_m(&m, 4).unwrap(), rat(3, 8));
        assert_eq!(
            l_from_m(&m, 5),
            Err(Error::TableTooShort { needed: 5, len: 5 })
        );
    }

    #[test]
    fn l_closed_form_small_values() {
        assert_eq!(l_closed_form(0), rat(0, 1));
        assert_eq!(l_closed_form(1), rat(0, 1));
        assert_eq!(l_closed_form(2), rat(0, 1));
        assert_eq!(l_closed_form(3), rat(1, 2));
        assert_eq!(l_closed_form(4), rat(3, 8));
    }

    /// The common-denominator evaluation must equal the solved form with
    /// every `1/Q_n` division literally performed in rational arithmetic.
    #[test]
    fn m_closed_form_matches_literal_divisions() {
        for n_target in 2..=45usize {
            let mut sum = Rational::zero();
            for n in 1..=n_target - 2 {
                sum += closed_form_summand(n) / q_partial(n as u32);
            }
            let signed = if n_target % 2 == 0 { sum } else { -sum };
            let want = q_partial(n_target as u32 - 2) * signed;
            assert_eq!(m_closed_form(n_target).unwrap(), want, "at {n_target}");
        }
    }

    /// The distributed tee values must equal the literal
    /// `Q_j · Σ summand(n)/Q_n` with the divisions actually performed.
    #[test]
    fn tees_match_literal_rational_form() {
        let tees = closed_form_tees(40);
        for j in 0..=40usize {
            let mut s = Rational::zero();
            for n in 1..=j {
                s += closed_form_summand(n) / q_partial(n as u32);
            }
            let want = q_partial(j as u32) * s;
            assert_eq!(tees[j].to_rational(), want, "T_{j}");
        }
    }

    /// All routes agree exactly on a fast prefix (the full range is
    /// covered by the integration suite).
    #[test]
    fn routes_agree_to_eighty() {
        let n = 80usize;
        let rec = l_sequence_recursion(n);
        let m = m_sequence_recursion(n);
        for i in 0..=n {
            assert_eq!(rec.values[i], l_closed_form(i), "closed form at {i}");
            assert_eq!(rec.values[i], l_from_m(&m, i).unwrap(), "transform at {i}");
        }
        for i in 2..=n {
            assert_eq!(m.values[i], m_closed_form(i).unwrap(), "m closed form at {i}");
        }
    }

    /// Within [0, N], dyadic denominators, and non-decreasing after the
    /// one real dip at the start: l_3 = 1/2 but l_4 = 3/8, because a
    /// fourth insertion can hand the root a leaf child and cost it its
    /// protected status. From index 4 on the sequence never decreases.
    #[test]
    fn sequence_shape_invariants() {
        let t = l_sequence_recursion(100);
        assert!(t.values[4] < t.values[3], "the initial dip is real");
        for n in 0..=100usize {
            let v = &t.values[n];
            assert!(v >= &Rational::zero(), "l_{n} negative");
            assert!(v <= &rat(n as i64, 1), "l_{n} above n");
            if n >= 5 {
                assert!(&t.values[n] >= &t.values[n - 1], "l not monotone at {n}");
            }
            let denom = v.denom();
            let tz = denom.trailing_zeros().unwrap_or(0);
            assert_eq!((denom >> tz), BigInt::one(), "denominator of l_{n} not a power of two");
        }
    }

    /// The shared-tee table is row-for-row the per-index closed form.
    #[test]
    fn closed_form_table_matches_per_index_calls() {
        let table = l_closed_form_table(60);
        assert_eq!(table.len(), 61);
        for (n, value) in table.iter().enumerate() {
            assert_eq!(value, &l_closed_form(n), "table row {n}");
        }
        assert_eq!(l_closed_form_table(0), vec![rat(0, 1)]);
    }

    /// The streaming bulk route equals the table routes at scattered
    /// indices.
    #[test]
    fn bulk_route_matches_tables() {
        let targets = [0usize, 1, 3, 17, 64, 120];
        let got = l_values_via_m(&targets);
        let rec = l_sequence_recursion(120);
        for (i, &n) in targets.iter().enumerate() {
            assert_eq!(got[i], rec.values[n], "bulk value at {n}");
        }
        assert!(l_values_via_m(&[]).is_empty());
    }
}
