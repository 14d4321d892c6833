//! Double Walsh coefficients of the periodic Bernoulli kernel,
//! `γ_r(k, l) = ∫∫ b̃_r(x − y) conj(wal_k(x)) wal_l(y) dx dy`.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::basekit::{Base, Digit, DigitList, IndexDecomposition};
use crate::error::{check_tol, Error, Result};
use crate::walsh::{digit_constant_bound, truncation_levels, RootTable};

const MEMO_CAPACITY: usize = 1 << 21;
const PRUNE_FRACTION: f64 = 1e-3;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `γ_2(k, l)` in closed form.
pub fn gamma2(k: &IndexDecomposition, l: &IndexDecomposition) -> Result<Complex64> {
    same_base(k, l)?;
    Ok(gamma2_digits(&RootTable::new(k.base()), k.digits(), l.digits()))
}

fn same_base(k: &IndexDecomposition, l: &IndexDecomposition) -> Result<()> {
    if k.base() == l.base() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "indices in bases {} and {}",
            k.base(),
            l.base()
        )))
    }
}

fn gamma2_digits(t: &RootTable, k: &[Digit], l: &[Digit]) -> Complex64 {
    if k.is_empty() || l.is_empty() {
        return zero();
    }
    let base = t.base();
    let one = Complex64::new(1.0, 0.0);
    let (k1, l1) = (k[0], l[0]);
    let (kappa, lambda) = (i64::from(k1.value), i64::from(l1.value));
    let (a1, d1) = (k1.position, l1.position);
    // (ω^e − 1)^{−1}
    let inv_minus_one = |e: i64| one / (t.pow(e) - one);
    // (1 − ω^e)^{−1}
    let inv_one_minus = |e: i64| one / (one - t.pow(e));

    if k == l {
        let s = (f64::from(k1.value) * PI / base.as_f64()).sin();
        // one-digit indices carry half the weight of the leading term
        let lead = if k.len() == 1 { 0.25 } else { 0.5 };
        return Complex64::new(base.inv_pow(2 * a1) * (lead / (s * s) - 1.0 / 6.0), 0.0);
    }
    let (kp, lp) = (&k[1..], &l[1..]);
    if kp == lp && !kp.is_empty() {
        return inv_minus_one(-kappa) * inv_minus_one(lambda) * base.inv_pow(a1 + d1);
    }
    if kp == l {
        return (0.5 + inv_minus_one(-lambda)) * inv_minus_one(-kappa) * base.inv_pow(a1 + d1)
            + (0.5 + inv_minus_one(kappa)) * inv_one_minus(-kappa) * base.inv_pow(2 * a1);
    }
    if k == lp {
        return (0.5 + inv_minus_one(kappa)) * inv_minus_one(lambda) * base.inv_pow(a1 + d1)
            + (0.5 + inv_minus_one(-lambda)) * inv_one_minus(lambda) * base.inv_pow(2 * d1);
    }
    if k.len() >= 2 && &k[2..] == l {
        let k2 = k[1];
        return inv_one_minus(-i64::from(k2.value)) * inv_minus_one(-kappa) * base.inv_pow(a1 + k2.position);
    }
    if l.len() >= 2 && &l[2..] == k {
        let l2 = l[1];
        return inv_one_minus(i64::from(l2.value)) * inv_minus_one(lambda) * base.inv_pow(d1 + l2.position);
    }
    zero()
}

/// Whether the digit structure of `k` and `l` forces `γ_r(k, l) = 0`.
///
/// True when an index is zero, when the digit counts differ by more than `r`,
/// or when the trailing digits that must coincide do not.
pub fn gamma_vanishes(r: u32, k: &IndexDecomposition, l: &IndexDecomposition) -> bool {
    vanishes(r, k.digits(), l.digits())
}

fn vanishes(r: u32, k: &[Digit], l: &[Digit]) -> bool {
    if k.is_empty() || l.is_empty() {
        return true;
    }
    let (v, w) = (k.len(), l.len());
    let diff = v.abs_diff(w) as u32;
    if diff > r {
        return true;
    }
    if v == 1 && k[0] != l[w - 1] {
        return true;
    }
    if w == 1 && l[0] != k[v - 1] {
        return true;
    }
    let m = v.min(w);
    let tails_differ = |n: usize| k[v - n..] != l[w - n..];
    if diff + 1 >= r && tails_differ(m) {
        return true;
    }
    v > 1 && w > 1 && diff + 2 <= r && tails_differ(m - 1)
}

/// `μ_{r,per}` on a digit slice.
fn mu_per_digits(r: u32, digits: &[Digit]) -> u32 {
    if r == 0 || digits.is_empty() {
        return 0;
    }
    let v = digits.len() as u32;
    let take = v.min(r) as usize;
    let head: u32 = digits[..take].iter().map(|d| d.position).sum();
    head + r.saturating_sub(v) * digits[digits.len() - 1].position
}

fn mu_per_pair_digits(r: u32, k: &[Digit], l: &[Digit]) -> u32 {
    (0..=r)
        .map(|s| mu_per_digits(s, k) + mu_per_digits(r - s, l))
        .max()
        .unwrap_or(0)
}

/// Memoizing solver for `γ_r`, one per worker.
#[derive(Clone, Debug)]
pub struct GammaSolver {
    base: Base,
    levels: u32,
    prune: f64,
    table: RootTable,
    sin_inv: f64,
    growth: f64,
    memo: HashMap<(u32, DigitList, DigitList), Complex64>,
}

impl GammaSolver {
    pub fn new(base: Base, tol: f64) -> Result<Self> {
        check_tol(tol)?;
        let b = base.as_f64();
        Ok(GammaSolver {
            base,
            levels: truncation_levels(base, tol),
            prune: tol * PRUNE_FRACTION,
            table: RootTable::new(base),
            sin_inv: digit_constant_bound(base),
            growth: 1.0 + 1.0 / b + 1.0 / (b * (b + 1.0)),
            memo: HashMap::new(),
        })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    /// `γ_r(k, l)` for `r >= 2`.
    pub fn gamma(&mut self, r: u32, k: &IndexDecomposition, l: &IndexDecomposition) -> Result<Complex64> {
        if r < 2 {
            return Err(Error::InvalidArgument(format!("γ_r needs r >= 2, got {r}")));
        }
        same_base(k, l)?;
        if k.base() != self.base {
            return Err(Error::InvalidArgument(format!(
                "index in base {} passed to a base-{} solver",
                k.base(),
                self.base
            )));
        }
        let kd: DigitList = k.digits().iter().copied().collect();
        let ld: DigitList = l.digits().iter().copied().collect();
        Ok(self.value(r, &kd, &ld))
    }

    fn value(&mut self, r: u32, k: &DigitList, l: &DigitList) -> Complex64 {
        if r == 2 {
            return gamma2_digits(&self.table, k, l);
        }
        if vanishes(r, k, l) {
            return zero();
        }
        // recurse on the index with the larger leading position
        if l[0].position > k[0].position {
            let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
            return self.value(r, l, k).conj() * sign;
        }
        let key = (r, k.clone(), l.clone());
        if let Some(&cached) = self.memo.get(&key) {
            return cached;
        }

        let lead = k[0];
        let scale = self.base.inv_pow(lead.position);
        let rest: DigitList = k[1..].iter().copied().collect();
        let mut acc = self.table.inv_one_minus(lead.value) * self.value(r - 1, &rest, l)
            + self.table.half_plus(lead.value) * self.value(r - 1, k, l);

        let b = self.base.get();
        let mut ext = DigitList::with_capacity(k.len() + 1);
        ext.push(lead);
        ext.extend_from_slice(k);
        for c in 1..=self.levels {
            ext[0] = Digit::new(lead.position + c, 1);
            let envelope = 2.0
                * self.base.inv_pow(mu_per_pair_digits(r - 1, &ext, l))
                * self.sin_inv.powi(r as i32 - 1)
                * self.growth.powi(r as i32 - 3);
            let reach = scale * self.base.inv_pow(c) * self.sin_inv * f64::from(b - 1) * envelope;
            if reach < self.prune {
                break;
            }
            let mut level = zero();
            for theta in 1..b {
                ext[0] = Digit::new(lead.position + c, theta);
                // the new leading digit can enter the tails compared by the
                // vanishing test, so it is checked per term
                if !vanishes(r - 1, &ext, l) {
                    level += self.table.series_weight(theta) * self.value(r - 1, &ext, l);
                }
            }
            acc += level * self.base.inv_pow(c);
        }

        let result = -scale * acc;
        if self.memo.len() >= MEMO_CAPACITY {
            self.memo.clear();
        }
        self.memo.insert(key, result);
        result
    }
}

/// `γ_r(k, l)` within `tol`; `r = 2` uses the closed form.
pub fn gamma(r: u32, k: &IndexDecomposition, l: &IndexDecomposition, tol: f64) -> Result<Complex64> {
    GammaSolver::new(k.base(), tol)?.gamma(r, k, l)
}
