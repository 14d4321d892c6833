//! Base-b digit arithmetic for Walsh indices and points of the unit interval.
//!
//! A non-negative integer `k` is stored through its nonzero base-b digits
//! `k = κ_1 b^{a_1-1} + … + κ_v b^{a_v-1}` with `a_1 > … > a_v > 0`. Indices
//! produced by the coefficient recursions can exceed a machine word, so the
//! digit list is the primary representation and the integer value is only a
//! checked view.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{check_base, Error, Result};

/// A validated radix `b >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Base(u32);

impl Base {
    pub fn new(b: u32) -> Result<Self> {
        check_base(b)?;
        Ok(Base(b))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_f64(self) -> f64 {
        f64::from(self.0)
    }

    /// `b^e` if it fits in a `u64`.
    pub fn checked_pow(self, e: u32) -> Option<u64> {
        u64::from(self.0).checked_pow(e)
    }

    /// `b^{-e}` as a float.
    #[inline]
    pub fn inv_pow(self, e: u32) -> f64 {
        self.as_f64().powi(-(e as i32))
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One nonzero digit `κ` sitting at position `a` (contributing `κ b^{a-1}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digit {
    pub position: u32,
    pub value: u32,
}

impl Digit {
    pub const fn new(position: u32, value: u32) -> Self {
        Digit { position, value }
    }
}

pub(crate) type DigitList = SmallVec<[Digit; 8]>;

/// Nonzero base-b digits of an index, leading (largest position) first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IndexDecomposition {
    base: Base,
    digits: DigitList,
}

impl fmt::Debug for IndexDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(k) => write!(f, "{}[b={}]", k, self.base)?,
            None => write!(f, "<large>[b={}]", self.base)?,
        }
        f.debug_list()
            .entries(self.digits.iter().map(|d| (d.position, d.value)))
            .finish()
    }
}

/// Splits `k` into its nonzero base-b digits.
pub fn decompose(k: u64, base: Base) -> IndexDecomposition {
    let b = u64::from(base.get());
    let mut digits = DigitList::new();
    let mut rest = k;
    let mut position = 1;
    while rest > 0 {
        let d = (rest % b) as u32;
        if d != 0 {
            digits.push(Digit::new(position, d));
        }
        rest /= b;
        position += 1;
    }
    digits.reverse();
    IndexDecomposition { base, digits }
}

impl IndexDecomposition {
    pub fn zero(base: Base) -> Self {
        IndexDecomposition {
            base,
            digits: DigitList::new(),
        }
    }

    /// Builds an index from `(position, digit)` pairs listed leading first.
    pub fn from_digits<I>(base: Base, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let digits: DigitList = pairs
            .into_iter()
            .map(|(position, value)| Digit::new(position, value))
            .collect();
        for d in &digits {
            if d.position == 0 || d.value == 0 || d.value >= base.get() {
                return Err(Error::InvalidArgument(format!(
                    "digit {} at position {} is not a nonzero base-{} digit at a positive position",
                    d.value, d.position, base
                )));
            }
        }
        if digits.windows(2).any(|w| w[0].position <= w[1].position) {
            return Err(Error::InvalidArgument(
                "digit positions must be strictly decreasing".into(),
            ));
        }
        Ok(IndexDecomposition { base, digits })
    }

    #[inline]
    pub fn base(&self) -> Base {
        self.base
    }

    #[inline]
    pub fn digits(&self) -> &[Digit] {
        &self.digits
    }

    /// Number of nonzero digits `v`.
    #[inline]
    pub fn v(&self) -> usize {
        self.digits.len()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    #[inline]
    pub fn leading(&self) -> Option<Digit> {
        self.digits.first().copied()
    }

    /// Leading position `a_1`, or 0 for `k = 0`.
    #[inline]
    pub fn leading_position(&self) -> u32 {
        self.digits.first().map_or(0, |d| d.position)
    }

    /// Positions `a_1, …, a_v`.
    pub fn positions(&self) -> impl Iterator<Item = u32> + '_ {
        self.digits.iter().map(|d| d.position)
    }

    /// The integer value, or `None` if it does not fit in a `u64`.
    pub fn value(&self) -> Option<u64> {
        let b = u64::from(self.base.get());
        self.digits.iter().try_fold(0u64, |acc, d| {
            let place = b.checked_pow(d.position - 1)?;
            acc.checked_add(u64::from(d.value).checked_mul(place)?)
        })
    }

    /// `k^{(s)}`: drop the `s` leading digits (`k^{(v)} = 0`).
    pub fn truncation(&self, s: usize) -> Self {
        let s = s.min(self.digits.len());
        IndexDecomposition {
            base: self.base,
            digits: self.digits[s..].iter().copied().collect(),
        }
    }

    /// `k' = k - κ_1 b^{a_1-1}`.
    pub fn k_prime(&self) -> Self {
        self.truncation(1)
    }

    /// `k'' = k' - κ_2 b^{a_2-1}`.
    pub fn k_double_prime(&self) -> Self {
        self.truncation(2)
    }

    /// `ϑ b^{position-1} + k` for a position above the current leading one.
    pub fn with_leading(&self, position: u32, value: u32) -> Self {
        debug_assert!(position > self.leading_position());
        debug_assert!(value > 0 && value < self.base.get());
        let mut digits = DigitList::with_capacity(self.digits.len() + 1);
        digits.push(Digit::new(position, value));
        digits.extend_from_slice(&self.digits);
        IndexDecomposition {
            base: self.base,
            digits,
        }
    }

    /// The last `n` digits (lowest positions), in leading-first order.
    pub fn suffix(&self, n: usize) -> &[Digit] {
        let n = n.min(self.digits.len());
        &self.digits[self.digits.len() - n..]
    }
}

/// `μ_r(k)`: sum of the first `min(v, r)` digit positions.
pub fn mu(r: u32, k: &IndexDecomposition) -> u64 {
    k.positions().take(r as usize).map(u64::from).sum()
}

/// `μ_{r,per}(k)`: like `μ_r`, but padded with `r - v` copies of `a_v` when `v < r`.
pub fn mu_per(r: u32, k: &IndexDecomposition) -> u64 {
    if r == 0 || k.is_zero() {
        return 0;
    }
    let v = k.v() as u32;
    if v >= r {
        return mu(r, k);
    }
    let last = u64::from(k.digits()[k.v() - 1].position);
    mu(v, k) + u64::from(r - v) * last
}

/// `μ_{r,per}(k, l) = max_{0 <= s <= r} μ_{s,per}(k) + μ_{r-s,per}(l)`.
pub fn mu_per_pair(r: u32, k: &IndexDecomposition, l: &IndexDecomposition) -> u64 {
    (0..=r)
        .map(|s| mu_per(s, k) + mu_per(r - s, l))
        .max()
        .unwrap_or(0)
}

/// The first `depth` base-b digits of `x ∈ [0, 1)`.
///
/// For b-adic rationals the terminating expansion is returned. Digits beyond
/// the resolution of an `f64` are reported as zeros.
pub fn digit_expansion(x: f64, base: Base, depth: usize) -> Result<Vec<u32>> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain {
            what: "x",
            value: x,
            domain: "[0, 1)",
        });
    }
    let b = base.as_f64();
    let top = base.get() - 1;
    let mut digits = Vec::with_capacity(depth);
    let mut t = x;
    // Absolute uncertainty of `t`, grown by the factor b at every step.
    let mut slack = 4.0 * f64::EPSILON;
    for _ in 0..depth {
        if t == 0.0 || slack >= 0.5 {
            digits.push(0);
            t = 0.0;
            continue;
        }
        t *= b;
        slack *= b;
        let mut d = t.floor();
        let frac = t - d;
        if frac > 1.0 - slack && (d as u32) < top {
            d += 1.0;
            t = 0.0;
        } else if frac < slack {
            t = 0.0;
        } else {
            t = frac;
        }
        digits.push(d as u32);
    }
    Ok(digits)
}

/// Digits of the grid point `j / b^m` (exact), most significant first.
pub fn grid_digits(j: u64, base: Base, m: u32) -> Vec<u32> {
    let b = u64::from(base.get());
    let mut out = vec![0u32; m as usize];
    let mut rest = j;
    for slot in out.iter_mut().rev() {
        *slot = (rest % b) as u32;
        rest /= b;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(n: u32) -> Base {
        Base::new(n).unwrap()
    }

    fn pairs(k: &IndexDecomposition) -> Vec<(u32, u32)> {
        k.digits().iter().map(|d| (d.position, d.value)).collect()
    }

    #[test]
    fn rejects_small_bases() {
        assert!(Base::new(1).is_err());
        assert!(Base::new(0).is_err());
        assert!(Base::new(2).is_ok());
    }

    #[test]
    fn decompose_examples() {
        let z = decompose(0, b(2));
        assert_eq!(z.v(), 0);
        assert!(z.is_zero());

        let six = decompose(6, b(2));
        assert_eq!(pairs(&six), vec![(3, 1), (2, 1)]);
        assert_eq!(six.k_prime().value(), Some(2));
        assert_eq!(six.k_double_prime().value(), Some(0));

        let seven = decompose(7, b(3));
        assert_eq!(pairs(&seven), vec![(2, 2), (1, 1)]);
        assert_eq!(seven.k_prime().value(), Some(1));
    }

    #[test]
    fn truncations_of_short_indices_are_zero() {
        let one = decompose(4, b(2));
        assert!(one.k_prime().is_zero());
        assert!(one.k_double_prime().is_zero());
        assert!(decompose(0, b(3)).k_prime().is_zero());
    }

    #[test]
    fn round_trip_exhaustive_small_bases() {
        for base in [2u32, 3, 5] {
            let base = b(base);
            let limit = base.checked_pow(if base.get() == 2 { 16 } else { 8 }).unwrap();
            for k in 0..limit {
                let d = decompose(k, base);
                assert_eq!(d.value(), Some(k));
                assert_eq!(d.v() == 0, k == 0);
            }
        }
    }

    #[test]
    fn from_digits_validates() {
        assert!(IndexDecomposition::from_digits(b(3), [(2, 1), (2, 1)]).is_err());
        assert!(IndexDecomposition::from_digits(b(3), [(2, 3)]).is_err());
        assert!(IndexDecomposition::from_digits(b(3), [(0, 1)]).is_err());
        let k = IndexDecomposition::from_digits(b(3), [(2, 2), (1, 1)]).unwrap();
        assert_eq!(k.value(), Some(7));
    }

    #[test]
    fn with_leading_prepends() {
        let k = decompose(5, b(2));
        let ext = k.with_leading(5, 1);
        assert_eq!(ext.value(), Some(16 + 5));
        assert_eq!(ext.k_prime(), k);
    }

    #[test]
    fn large_indices_have_no_word_value() {
        let k = IndexDecomposition::from_digits(b(2), [(80, 1), (3, 1)]).unwrap();
        assert_eq!(k.value(), None);
        assert_eq!(mu(2, &k), 83);
    }

    #[test]
    fn mu_examples() {
        let six = decompose(6, b(2));
        for k in [0u64, 1, 6, 99] {
            assert_eq!(mu(0, &decompose(k, b(2))), 0);
        }
        assert_eq!(mu(2, &six), 5);
        assert_eq!(mu(1, &six), 3);
        assert_eq!(mu(3, &decompose(0, b(2))), 0);
    }

    #[test]
    fn mu_per_examples() {
        assert_eq!(mu_per(3, &decompose(0, b(2))), 0);
        assert_eq!(mu_per(2, &decompose(2, b(2))), 4);
        assert_eq!(mu_per(3, &decompose(6, b(2))), 7);
        assert_eq!(mu_per(0, &decompose(6, b(2))), 0);
    }

    #[test]
    fn mu_per_pair_examples() {
        let base = b(2);
        let zero = decompose(0, base);
        for l in 1..40u64 {
            let l = decompose(l, base);
            assert_eq!(mu_per_pair(2, &zero, &l), mu_per(2, &l));
        }
        let one = decompose(1, base);
        assert_eq!(mu_per_pair(2, &one, &one), 2);
        let two = decompose(2, base);
        // s = 0..3 gives 6, 4, 4, 6
        assert_eq!(mu_per_pair(3, &two, &two), 6);
    }

    #[test]
    fn digit_expansion_examples() {
        assert_eq!(digit_expansion(0.0, b(5), 6).unwrap(), vec![0; 6]);
        assert_eq!(digit_expansion(0.75, b(2), 3).unwrap(), vec![1, 1, 0]);
        assert_eq!(digit_expansion(1.0 / 3.0, b(3), 4).unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(digit_expansion(2.0 / 3.0, b(3), 3).unwrap(), vec![2, 0, 0]);
        assert_eq!(digit_expansion(0.2, b(5), 3).unwrap(), vec![1, 0, 0]);
        assert_eq!(digit_expansion(0.1, b(10), 3).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn digit_expansion_rejects_outside_unit_interval() {
        assert!(digit_expansion(1.0, b(2), 3).is_err());
        assert!(digit_expansion(-0.1, b(2), 3).is_err());
        assert!(digit_expansion(f64::NAN, b(2), 3).is_err());
    }

    #[test]
    fn grid_digits_match_expansion() {
        let base = b(3);
        for j in 0..81u64 {
            let x = j as f64 / 81.0;
            assert_eq!(grid_digits(j, base, 4), digit_expansion(x, base, 4).unwrap());
        }
    }

    proptest! {
        #[test]
        fn round_trip_random(k in 0u64..(1u64 << 62), base in 2u32..40) {
            let d = decompose(k, Base::new(base).unwrap());
            prop_assert_eq!(d.value(), Some(k));
            prop_assert!(d.digits().iter().all(|g| g.value >= 1 && g.value < base));
            prop_assert!(d.digits().windows(2).all(|w| w[0].position > w[1].position));
        }

        #[test]
        fn mu_nesting(k in 0u64..200_000, base in 2u32..6, r in 0u32..7) {
            let d = decompose(k, Base::new(base).unwrap());
            prop_assert!(mu(r, &d) <= mu(r + 1, &d));
            prop_assert!(mu(r + 1, &d) <= mu_per(r + 1, &d));
            prop_assert!(mu(r, &d) <= mu_per(r, &d));
        }

        #[test]
        fn mu_per_pair_symmetric(k in 0u64..5000, l in 0u64..5000, r in 2u32..6) {
            let base = Base::new(3).unwrap();
            let (k, l) = (decompose(k, base), decompose(l, base));
            prop_assert_eq!(mu_per_pair(r, &k, &l), mu_per_pair(r, &l, &k));
        }

        #[test]
        fn b_adic_rationals_terminate(num in 0u64..729, base in 2u32..6) {
            let base = Base::new(base).unwrap();
            let den = base.checked_pow(4).unwrap();
            prop_assume!(num < den);
            let x = num as f64 / den as f64;
            let digits = digit_expansion(x, base, 12).unwrap();
            let expect = grid_digits(num, base, 4);
            prop_assert_eq!(&digits[..4], expect.as_slice());
            prop_assert!(digits[4..].iter().all(|&d| d == 0));
        }
    }
}
