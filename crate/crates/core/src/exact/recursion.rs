//! Walsh coefficients of `x^r` and of `b_r` by recursion on the degree.
//!
//! Integrating by parts against `J_k` and expanding `J_k` in Walsh functions
//! gives, for `k >= 1`,
//!
//! ```text
//! c_r(k) = −s_r b^{−a_1} [ (1−ω^{−κ_1})^{−1} c_{r−1}(k′)
//!                        + (1/2 + (ω^{−κ_1}−1)^{−1}) c_{r−1}(k)
//!                        + Σ_{c≥1} Σ_{ϑ=1}^{b−1} b^{−c} (ω^ϑ−1)^{−1} c_{r−1}(ϑ b^{a_1+c−1} + k) ]
//! ```
//!
//! with `s_r = r` for monomials and `s_r = 1` for scaled Bernoulli polynomials.
//! The `c`-sum is cut after [`truncation_levels`] terms, and branches whose
//! a-priori magnitude envelope falls below `tol · 1e−3` are skipped.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::basekit::{Base, Digit, DigitList, IndexDecomposition};
use crate::error::{check_tol, Error, Result};
use crate::walsh::{digit_constant_bound, truncation_levels, RootTable};

/// Which family of coefficients a solver computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `χ_{r,v}(k) = ∫ x^r conj(wal_k(x)) dx`.
    Monomial,
    /// `β_{r,v}(k) = ∫ b_r(x) conj(wal_k(x)) dx`.
    Bernoulli,
}

const MEMO_CAPACITY: usize = 1 << 22;
const PRUNE_FRACTION: f64 = 1e-3;

/// Memoizing solver for one family, base and tolerance.
///
/// Not shared between threads; create one per worker.
#[derive(Clone, Debug)]
pub struct RecursionSolver {
    family: Family,
    base: Base,
    tol: f64,
    levels: u32,
    prune: f64,
    table: RootTable,
    sin_inv: f64,
    growth: f64,
    memo: HashMap<(u32, DigitList), Complex64>,
}

impl RecursionSolver {
    pub fn new(family: Family, base: Base, tol: f64) -> Result<Self> {
        check_tol(tol)?;
        let b = base.as_f64();
        Ok(RecursionSolver {
            family,
            base,
            tol,
            levels: truncation_levels(base, tol),
            prune: tol * PRUNE_FRACTION,
            table: RootTable::new(base),
            sin_inv: digit_constant_bound(base),
            growth: 1.0 + 1.0 / b + 1.0 / (b * (b + 1.0)),
            memo: HashMap::new(),
        })
    }

    pub fn monomial(base: Base, tol: f64) -> Result<Self> {
        Self::new(Family::Monomial, base, tol)
    }

    pub fn bernoulli(base: Base, tol: f64) -> Result<Self> {
        Self::new(Family::Bernoulli, base, tol)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Number of `c`-levels kept in the series sum.
    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// The coefficient of degree `r` at index `k`.
    pub fn coefficient(&mut self, r: u32, k: &IndexDecomposition) -> Result<Complex64> {
        if k.base() != self.base {
            return Err(Error::InvalidArgument(format!(
                "index in base {} passed to a base-{} solver",
                k.base(),
                self.base
            )));
        }
        let digits: DigitList = k.digits().iter().copied().collect();
        Ok(self.value(r, &digits))
    }

    fn value(&mut self, r: u32, digits: &DigitList) -> Complex64 {
        let v = digits.len() as u32;
        if v == 0 {
            return match self.family {
                Family::Monomial => Complex64::new(1.0 / f64::from(r + 1), 0.0),
                Family::Bernoulli if r == 0 => Complex64::new(1.0, 0.0),
                Family::Bernoulli => Complex64::new(0.0, 0.0),
            };
        }
        if v > r {
            return Complex64::new(0.0, 0.0);
        }
        let key = (r, digits.clone());
        if let Some(&cached) = self.memo.get(&key) {
            return cached;
        }

        let lead = digits[0];
        let scale = match self.family {
            Family::Monomial => f64::from(r),
            Family::Bernoulli => 1.0,
        } * self.base.inv_pow(lead.position);

        let rest: DigitList = digits[1..].iter().copied().collect();
        let mut acc = self.table.inv_one_minus(lead.value) * self.value(r - 1, &rest)
            + self.table.half_plus(lead.value) * self.value(r - 1, digits);

        if v < r - 1 {
            let b = self.base.get();
            let mut ext = DigitList::with_capacity(digits.len() + 1);
            ext.push(lead);
            ext.extend_from_slice(digits);
            for c in 1..=self.levels {
                ext[0] = Digit::new(lead.position + c, 1);
                let reach = scale
                    * self.base.inv_pow(c)
                    * self.sin_inv
                    * f64::from(b - 1)
                    * self.envelope(r - 1, &ext);
                if reach < self.prune {
                    // envelopes only shrink as c grows
                    break;
                }
                let mut level = Complex64::new(0.0, 0.0);
                for theta in 1..b {
                    ext[0] = Digit::new(lead.position + c, theta);
                    level += self.table.series_weight(theta) * self.value(r - 1, &ext);
                }
                acc += level * self.base.inv_pow(c);
            }
        }

        let result = -scale * acc;
        if self.memo.len() >= MEMO_CAPACITY {
            self.memo.clear();
        }
        self.memo.insert(key, result);
        result
    }

    /// A-priori bound on `|c_r(k)|` for `1 <= v <= r`.
    fn envelope(&self, r: u32, digits: &[Digit]) -> f64 {
        let v = digits.len() as u32;
        match self.family {
            Family::Monomial => {
                // the u = v term of the monomial bound
                let mu: u32 = digits.iter().map(|d| d.position).sum();
                let falling: f64 = ((r - v + 2)..=r).map(f64::from).product();
                falling
                    * 3.0
                    * self.sin_inv.powi(v as i32)
                    * self.growth.powi(v as i32 - 1)
                    * self.base.inv_pow(mu)
            }
            Family::Bernoulli => {
                let last = digits[digits.len() - 1].position;
                let mu: u32 = digits.iter().map(|d| d.position).sum::<u32>() + (r - v) * last;
                self.base.inv_pow(mu) * self.sin_inv.powi(r as i32) * self.growth.powi(r as i32 - 2).max(1.0)
            }
        }
    }
}

/// `χ_{r,v}(k)`, the Walsh coefficient of `x^r`, within `tol`.
pub fn chi(r: u32, k: &IndexDecomposition, tol: f64) -> Result<Complex64> {
    RecursionSolver::monomial(k.base(), tol)?.coefficient(r, k)
}

/// `β_{r,v}(k)`, the Walsh coefficient of `b_r = B_r/r!`, within `tol`.
pub fn beta(r: u32, k: &IndexDecomposition, tol: f64) -> Result<Complex64> {
    RecursionSolver::bernoulli(k.base(), tol)?.coefficient(r, k)
}

/// `Π_w (1 − ω^{−κ_w})^{−1}` over the given digits.
fn inv_one_minus_product(table: &RootTable, digits: &[Digit]) -> Complex64 {
    digits
        .iter()
        .map(|d| table.inv_one_minus(d.value))
        .product()
}

/// Closed form `χ_{r,r} = (−1)^r r! b^{−a_1−…−a_r} Π_w (1 − ω^{−κ_w})^{−1}` for `v = r`.
pub fn chi_closed_rr(k: &IndexDecomposition) -> Result<Complex64> {
    let r = k.v() as u32;
    let table = RootTable::new(k.base());
    let mu: u32 = k.positions().sum();
    let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    let fact: f64 = (1..=r).map(f64::from).product();
    Ok(inv_one_minus_product(&table, k.digits()) * (sign * fact * k.base().inv_pow(mu)))
}

/// Closed form of `χ_{r,r−1}` for `v = r − 1`:
/// `(−1)^r r! b^{−a_1−…−a_{r−1}} Π_w (1 − ω^{−κ_w})^{−1} (−1/2 + Σ_w (1/2 + (ω^{−κ_w}−1)^{−1}) b^{−a_w})`.
pub fn chi_closed_r_rm1(r: u32, k: &IndexDecomposition) -> Result<Complex64> {
    if r == 0 || k.v() as u32 != r - 1 {
        return Err(Error::InvalidArgument(format!(
            "closed form for v = r − 1 needs v = {} but the index has v = {}",
            r.saturating_sub(1),
            k.v()
        )));
    }
    if r == 1 {
        return Ok(Complex64::new(0.5, 0.0));
    }
    let base = k.base();
    let table = RootTable::new(base);
    let mu: u32 = k.positions().sum();
    let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    let fact: f64 = (1..=r).map(f64::from).product();
    let inner: Complex64 = k
        .digits()
        .iter()
        .map(|d| table.half_plus(d.value) * base.inv_pow(d.position))
        .sum::<Complex64>()
        - 0.5;
    Ok(inv_one_minus_product(&table, k.digits()) * inner * (sign * fact * base.inv_pow(mu)))
}

/// Closed form `β_{r,r} = (−1)^r b^{−a_1−…−a_r} Π_w (1 − ω^{−κ_w})^{−1}` for `v = r`.
pub fn beta_closed_rr(k: &IndexDecomposition) -> Result<Complex64> {
    let r = k.v() as u32;
    let fact: f64 = (1..=r).map(f64::from).product();
    Ok(chi_closed_rr(k)? / fact)
}

/// Checks the domain of [`chi_closed_rr`] and evaluates it.
pub fn chi_closed_rr_checked(r: u32, k: &IndexDecomposition) -> Result<Complex64> {
    if k.v() as u32 != r {
        return Err(Error::InvalidArgument(format!(
            "closed form for v = r needs v = {r} but the index has v = {}",
            k.v()
        )));
    }
    chi_closed_rr(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basekit::decompose;
    use crate::exact::bernoulli::eval_b;
    use crate::oracle::{walsh_coeff, FunctionSpec};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn b(n: u32) -> Base {
        Base::new(n).unwrap()
    }

    fn monomial(r: u32) -> FunctionSpec {
        FunctionSpec::new(format!("x^{r}"), 0, move |_, x: f64| x.powi(r as i32))
    }

    #[test]
    fn base_cases() {
        for r in 0..6 {
            let v = chi(r, &decompose(0, b(3)), 1e-12).unwrap();
            assert_abs_diff_eq!(v.re, 1.0 / f64::from(r + 1));
        }
        assert_eq!(chi(0, &decompose(5, b(2)), 1e-12).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(chi(2, &decompose(7, b(2)), 1e-12).unwrap(), Complex64::new(0.0, 0.0));
        let table = RootTable::new(b(3));
        for k in [1u64, 2, 3, 6, 18] {
            let kd = decompose(k, b(3));
            let lead = kd.leading().unwrap();
            let expect = -table.inv_one_minus(lead.value) * b(3).inv_pow(lead.position);
            assert!((chi(1, &kd, 1e-12).unwrap() - expect).norm() < 1e-15);
            assert!((beta(1, &kd, 1e-12).unwrap() - expect).norm() < 1e-15);
        }
        assert_eq!(beta(3, &decompose(0, b(2)), 1e-12).unwrap(), Complex64::new(0.0, 0.0));
        assert!(chi(1, &decompose(1, b(2)), 0.0).is_err());
    }

    #[test]
    fn examples_against_quadrature() {
        let v = chi(2, &decompose(3, b(2)), 1e-12).unwrap();
        assert_abs_diff_eq!(v.re, 1.0 / 16.0, epsilon = 1e-13);
        assert_abs_diff_eq!(chi_closed_rr(&decompose(3, b(2))).unwrap().re, 1.0 / 16.0, epsilon = 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = monomial(3);
        for _ in 0..20 {
            let a2 = rng.gen_range(1..6);
            let a1 = rng.gen_range(a2 + 1..9);
            let base = b(rng.gen_range(2..6));
            let k = IndexDecomposition::from_digits(
                base,
                [(a1, rng.gen_range(1..base.get())), (a2, rng.gen_range(1..base.get()))],
            )
            .unwrap();
            let exact = chi(3, &k, 1e-12).unwrap();
            let quad = walsh_coeff(&f, &k, 8, 4).unwrap().value;
            assert!((exact - quad).norm() <= 1e-9, "{k:?}");
        }
    }

    #[test]
    fn closed_forms_match_recursion() {
        let mut solver = RecursionSolver::monomial(b(3), 1e-13).unwrap();
        for k in 1..3u64.pow(6) {
            let kd = decompose(k, b(3));
            let r = kd.v() as u32;
            let rec = solver.coefficient(r, &kd).unwrap();
            assert!((rec - chi_closed_rr(&kd).unwrap()).norm() <= 1e-12);
            let rec = solver.coefficient(r + 1, &kd).unwrap();
            assert!((rec - chi_closed_r_rm1(r + 1, &kd).unwrap()).norm() <= 1e-12, "k={k}");
        }
        assert_abs_diff_eq!(chi_closed_r_rm1(1, &decompose(0, b(2))).unwrap().re, 0.5);
        assert!(chi_closed_r_rm1(3, &decompose(1, b(2))).is_err());
        assert!(chi_closed_rr_checked(2, &decompose(1, b(2))).is_err());
    }

    #[test]
    fn specific_closed_form_example() {
        // b = 3, k = 4 has digits (2,1), (1,1)
        let k = decompose(4, b(3));
        let t = RootTable::new(b(3));
        let expect = t.inv_one_minus(1) * t.inv_one_minus(1) * (2.0 / 27.0);
        assert!((chi_closed_rr(&k).unwrap() - expect).norm() < 1e-15);
        let quad = walsh_coeff(&monomial(2), &k, 8, 4).unwrap().value;
        assert!((quad - expect).norm() < 1e-10);
    }

    #[test]
    fn bernoulli_examples() {
        let t = RootTable::new(b(5));
        let k = IndexDecomposition::from_digits(b(5), [(4, 3), (2, 1)]).unwrap();
        let expect = t.inv_one_minus(3) * t.inv_one_minus(1) * b(5).inv_pow(6);
        assert!((beta(2, &k, 1e-12).unwrap() - expect).norm() < 1e-15);
        assert!((beta_closed_rr(&k).unwrap() - expect).norm() < 1e-15);

        assert!(beta(2, &decompose(1, b(2)), 1e-12).unwrap().norm() < 1e-15);

        let b3 = FunctionSpec::new("b3", 0, |_, x| eval_b(3, x).unwrap());
        let kd = decompose(2, b(2));
        let quad = walsh_coeff(&b3, &kd, 8, 4).unwrap().value;
        assert!((beta(3, &kd, 1e-12).unwrap() - quad).norm() < 1e-9);
    }

    #[test]
    fn bernoulli_r2_v1_closed_form() {
        // β_{2,1}(a_1; κ_1) = b^{−2a_1} (1−ω^{−κ_1})^{−1} (1/2 + (ω^{−κ_1}−1)^{−1})
        for base in [2u32, 3, 5] {
            let t = RootTable::new(b(base));
            for a in 1..5 {
                for kappa in 1..base {
                    let k = IndexDecomposition::from_digits(b(base), [(a, kappa)]).unwrap();
                    let expect = t.inv_one_minus(kappa) * t.half_plus(kappa) * b(base).inv_pow(2 * a);
                    assert!((beta(2, &k, 1e-13).unwrap() - expect).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn wrong_base_is_rejected() {
        let mut solver = RecursionSolver::monomial(b(2), 1e-10).unwrap();
        assert!(solver.coefficient(2, &decompose(4, b(3))).is_err());
    }
}
