//! Walsh (Chrestenson) functions, the antiderivatives `J_k`, and a radix-b
//! fast transform for sampled data.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::basekit::{decompose, digit_expansion, Base, IndexDecomposition};
use crate::error::{check_tol, Error, Result};

/// `ω_b^e = exp(2πi e / b)` held symbolically.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnitRoot {
    pub base: Base,
    pub exponent: u32,
}

impl UnitRoot {
    pub fn new(base: Base, exponent: i64) -> Self {
        let b = i64::from(base.get());
        UnitRoot {
            base,
            exponent: exponent.rem_euclid(b) as u32,
        }
    }

    pub fn value(self) -> Complex64 {
        root(self.base, self.exponent)
    }
}

#[inline]
fn root(base: Base, e: u32) -> Complex64 {
    let b = base.get();
    let e = e % b;
    // exact values at the quarter turns keep b = 2, 4 free of roundoff
    if 4 * e == 0 {
        Complex64::new(1.0, 0.0)
    } else if 2 * e == b {
        Complex64::new(-1.0, 0.0)
    } else if 4 * e == b {
        Complex64::new(0.0, 1.0)
    } else if 4 * e == 3 * b {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::from_polar(1.0, 2.0 * PI * f64::from(e) / f64::from(b))
    }
}

/// Table of the b-th roots of unity and the digit constants that appear in
/// the expansion of `J_k`.
#[derive(Clone, Debug)]
pub struct RootTable {
    base: Base,
    roots: Vec<Complex64>,
    inv_one_minus: Vec<Complex64>,
    half_plus: Vec<Complex64>,
    series: Vec<Complex64>,
}

impl RootTable {
    pub fn new(base: Base) -> Self {
        let b = base.get();
        let roots: Vec<Complex64> = (0..b).map(|e| root(base, e)).collect();
        let one = Complex64::new(1.0, 0.0);
        let mut inv_one_minus = vec![Complex64::new(0.0, 0.0); b as usize];
        let mut half_plus = inv_one_minus.clone();
        let mut series = inv_one_minus.clone();
        for kappa in 1..b as usize {
            let w_minus = roots[(b as usize - kappa) % b as usize];
            inv_one_minus[kappa] = one / (one - w_minus);
            half_plus[kappa] = 0.5 + one / (w_minus - one);
            series[kappa] = one / (roots[kappa] - one);
        }
        RootTable {
            base,
            roots,
            inv_one_minus,
            half_plus,
            series,
        }
    }

    #[inline]
    pub fn base(&self) -> Base {
        self.base
    }

    /// `ω_b^e` for any integer exponent.
    #[inline]
    pub fn pow(&self, e: i64) -> Complex64 {
        self.roots[e.rem_euclid(i64::from(self.base.get())) as usize]
    }

    /// `(1 - ω_b^{-κ})^{-1}`.
    #[inline]
    pub fn inv_one_minus(&self, kappa: u32) -> Complex64 {
        self.inv_one_minus[kappa as usize]
    }

    /// `1/2 + (ω_b^{-κ} - 1)^{-1}`.
    #[inline]
    pub fn half_plus(&self, kappa: u32) -> Complex64 {
        self.half_plus[kappa as usize]
    }

    /// `(ω_b^ϑ - 1)^{-1}`.
    #[inline]
    pub fn series_weight(&self, theta: u32) -> Complex64 {
        self.series[theta as usize]
    }
}

/// `1 / (2 sin(π/b))`, the common bound on the digit constants.
pub fn digit_constant_bound(base: Base) -> f64 {
    1.0 / (2.0 * (PI / base.as_f64()).sin())
}

/// Number of `c`-levels kept when truncating a `Σ_c b^{-c} …` tail at tolerance `tol`:
/// `⌈log_b(1/tol)⌉ + 2`.
pub fn truncation_levels(base: Base, tol: f64) -> u32 {
    let levels = ((1.0 / tol).ln() / base.as_f64().ln()).ceil();
    (levels.max(0.0) as u32) + 2
}

/// Exponent `Σ κ_i x_{a_i} mod b` of `wal_k` for the given digits of `x`
/// (`x_digits[p-1]` is `x_p`; missing digits count as zero).
fn wal_exponent(k: &IndexDecomposition, x_digits: &[u32]) -> u32 {
    let b = k.base().get();
    k.digits()
        .iter()
        .map(|d| {
            let xd = x_digits.get(d.position as usize - 1).copied().unwrap_or(0);
            (d.value * xd) % b
        })
        .fold(0, |acc, e| (acc + e) % b)
}

fn check_unit_interval(x: f64, closed: bool) -> Result<()> {
    let ok = if closed {
        (0.0..=1.0).contains(&x)
    } else {
        (0.0..1.0).contains(&x)
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "x",
            value: x,
            domain: if closed { "[0, 1]" } else { "[0, 1)" },
        })
    }
}

/// `wal_k(x)` for `x ∈ [0, 1)`.
pub fn wal(k: &IndexDecomposition, x: f64) -> Result<Complex64> {
    check_unit_interval(x, false)?;
    let digits = digit_expansion(x, k.base(), k.leading_position() as usize)?;
    Ok(root(k.base(), wal_exponent(k, &digits)))
}

/// Exponent of `wal_k(j / b^m)`; requires `a_1 <= m`.
pub fn wal_exponent_on_grid(k: &IndexDecomposition, j: u64, m: u32) -> u32 {
    debug_assert!(k.leading_position() <= m);
    let b = u64::from(k.base().get());
    let bb = k.base().get();
    k.digits()
        .iter()
        .map(|d| {
            let xd = (j / b.pow(m - d.position)) % b;
            (d.value * xd as u32) % bb
        })
        .fold(0, |acc, e| (acc + e) % bb)
}

/// `J_k(x) = ∫_0^x conj(wal_k(t)) dt`, evaluated from the full cells of width
/// `b^{-a_1}` below `x` plus the partial cell containing `x`.
pub fn jk_direct(k: &IndexDecomposition, x: f64) -> Result<Complex64> {
    check_unit_interval(x, true)?;
    let Some(lead) = k.leading() else {
        return Ok(Complex64::new(x, 0.0));
    };
    if x == 1.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let base = k.base();
    let table = RootTable::new(base);
    let a1 = lead.position as usize;
    let digits = digit_expansion(x, base, a1 + 40)?;
    // Full cells below x only survive when they differ from x in digit a_1
    // alone; any free digit at a Walsh position sums to zero.
    let rest = wal_exponent(&k.k_prime(), &digits);
    let x_lead = digits[a1 - 1];
    let mut full = Complex64::new(0.0, 0.0);
    for d in 0..x_lead {
        full += table.pow(-i64::from(rest + lead.value * d));
    }
    let frac: f64 = digits[a1..]
        .iter()
        .rev()
        .fold(0.0, |acc, &d| (acc + f64::from(d)) / base.as_f64());
    let own = table.pow(-i64::from(wal_exponent(k, &digits)));
    Ok((full + own * frac) * base.inv_pow(lead.position))
}

/// `J_k(x)` from its Walsh series, truncated after `⌈log_b(1/tol)⌉ + 2` levels.
pub fn jk_series(k: &IndexDecomposition, x: f64, tol: f64) -> Result<Complex64> {
    check_tol(tol)?;
    check_unit_interval(x, false)?;
    let base = k.base();
    let b = base.get();
    let table = RootTable::new(base);
    let levels = truncation_levels(base, tol);
    let a1 = k.leading_position();
    let digits = digit_expansion(x, base, (a1 + levels) as usize)?;
    let conj_wal_k = table.pow(-i64::from(wal_exponent(k, &digits)));
    let mut tail = Complex64::new(0.0, 0.0);
    for c in 1..=levels {
        let xd = digits[(a1 + c - 1) as usize];
        let mut level = Complex64::new(0.0, 0.0);
        for theta in 1..b {
            level += table.series_weight(theta) * table.pow(-i64::from(theta * xd));
        }
        tail += level * base.inv_pow(c);
    }
    match k.leading() {
        None => Ok(Complex64::new(0.5, 0.0) + tail),
        Some(lead) => {
            let conj_wal_kp = table.pow(-i64::from(wal_exponent(&k.k_prime(), &digits)));
            let value = table.inv_one_minus(lead.value) * conj_wal_kp
                + table.half_plus(lead.value) * conj_wal_k
                + tail * conj_wal_k;
            Ok(value * base.inv_pow(lead.position))
        }
    }
}

/// Transform direction for [`fwt`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Samples to coefficients, `c(k) = N^{-1} Σ_j g_j conj(wal_k(j/N))`.
    Forward,
    /// Coefficients to samples, `g_j = Σ_k c(k) wal_k(j/N)`.
    Inverse,
}

/// Complex samples on the grid `j / b^m`, `0 <= j < b^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleGrid {
    base: Base,
    level: u32,
    values: Vec<Complex64>,
}

impl SampleGrid {
    pub fn new(base: Base, values: Vec<Complex64>) -> Result<Self> {
        let level = exact_level(base, values.len())?;
        Ok(SampleGrid {
            base,
            level,
            values,
        })
    }

    /// Samples `f(j / b^m)`.
    pub fn sample<F: Fn(f64) -> Complex64>(base: Base, level: u32, f: F) -> Result<Self> {
        let n = base
            .checked_pow(level)
            .filter(|&n| n <= usize::MAX as u64)
            .ok_or_else(|| Error::Overflow(format!("{}^{} samples", base, level)))?;
        let values = (0..n).map(|j| f(j as f64 / n as f64)).collect();
        Ok(SampleGrid {
            base,
            level,
            values,
        })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn exact_level(base: Base, len: usize) -> Result<u32> {
    let b = base.get() as usize;
    let mut n = 1usize;
    let mut level = 0;
    while n < len {
        n = n.checked_mul(b).ok_or(Error::NotAPowerOfBase {
            len,
            base: base.get(),
        })?;
        level += 1;
    }
    if n == len {
        Ok(level)
    } else {
        Err(Error::NotAPowerOfBase {
            len,
            base: base.get(),
        })
    }
}

/// Radix-b fast Walsh–Chrestenson transform, `O(N · m · b)` operations.
pub fn fwt(grid: &SampleGrid, direction: Direction) -> SampleGrid {
    let mut values = grid.values.clone();
    fwt_in_place(grid.base, grid.level, &mut values, direction);
    SampleGrid {
        base: grid.base,
        level: grid.level,
        values,
    }
}

/// In-place variant of [`fwt`]; `data.len()` must be `b^level`.
pub fn fwt_in_place(base: Base, level: u32, data: &mut [Complex64], direction: Direction) {
    let b = base.get() as usize;
    let n = data.len();
    debug_assert_eq!(Some(n as u64), base.checked_pow(level));
    let table = RootTable::new(base);
    let sign: i64 = match direction {
        Direction::Forward => -1,
        Direction::Inverse => 1,
    };
    let twiddle: Vec<Complex64> = (0..b * b)
        .map(|i| table.pow(sign * ((i / b) * (i % b)) as i64))
        .collect();

    let mut scratch_in = vec![Complex64::new(0.0, 0.0); b];
    let mut scratch_out = scratch_in.clone();
    let mut stride = 1usize;
    for _ in 0..level {
        let span = stride * b;
        for start in (0..n).step_by(span) {
            for offset in start..start + stride {
                for (t, slot) in scratch_in.iter_mut().enumerate() {
                    *slot = data[offset + t * stride];
                }
                if b == 2 {
                    scratch_out[0] = scratch_in[0] + scratch_in[1];
                    scratch_out[1] = scratch_in[0] - scratch_in[1];
                } else {
                    for (u, out) in scratch_out.iter_mut().enumerate() {
                        let row = &twiddle[u * b..(u + 1) * b];
                        *out = row
                            .iter()
                            .zip(scratch_in.iter())
                            .fold(Complex64::new(0.0, 0.0), |acc, (w, x)| acc + w * x);
                    }
                }
                for (t, value) in scratch_out.iter().enumerate() {
                    data[offset + t * stride] = *value;
                }
            }
        }
        stride = span;
    }

    digit_reverse_permute(b, level, data);

    if direction == Direction::Forward {
        let scale = 1.0 / n as f64;
        data.iter_mut().for_each(|v| *v *= scale);
    }
}

fn digit_reverse(mut i: usize, b: usize, level: u32) -> usize {
    let mut r = 0;
    for _ in 0..level {
        r = r * b + i % b;
        i /= b;
    }
    r
}

fn digit_reverse_permute(b: usize, level: u32, data: &mut [Complex64]) {
    for i in 0..data.len() {
        let j = digit_reverse(i, b, level);
        if j > i {
            data.swap(i, j);
        }
    }
}

/// Quadratic-cost reference transform evaluating every `wal_k(j/N)` directly.
pub fn naive_transform(grid: &SampleGrid, direction: Direction) -> SampleGrid {
    let base = grid.base;
    let n = grid.values.len();
    let table = RootTable::new(base);
    let sign: i64 = match direction {
        Direction::Forward => -1,
        Direction::Inverse => 1,
    };
    let values = (0..n as u64)
        .map(|k| {
            let kd = decompose(k, base);
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, g) in grid.values.iter().enumerate() {
                let e = wal_exponent_on_grid(&kd, j as u64, grid.level);
                acc += g * table.pow(sign * i64::from(e));
            }
            match direction {
                Direction::Forward => acc / n as f64,
                Direction::Inverse => acc,
            }
        })
        .collect();
    SampleGrid {
        base,
        level: grid.level,
        values,
    }
}
