//! Double Walsh coefficients `∫∫ g(x, y) conj(wal_k(x)) wal_l(y) dx dy`.
//!
//! Integrands may have a kink on the diagonal; cells that straddle it are
//! split into two triangles, each integrated with a collapsed (Duffy) tensor
//! rule, so the rule only ever sees smooth data.

use num_complex::Complex64;
use rayon::prelude::*;

use super::quadrature::{Neumaier, UnitRule};
use crate::basekit::{Base, IndexDecomposition};
use crate::error::{Error, Result};
use crate::walsh::{fwt_in_place, wal_exponent_on_grid, Direction, RootTable};

/// `∫∫_cell g` for the cell `[x0, x0+h] × [y0, y0+h]`.
fn cell_integral<G>(g: &G, rule: &UnitRule, x0: f64, y0: f64, h: f64, diagonal: bool) -> Result<f64>
where
    G: Fn(f64, f64) -> f64 + ?Sized,
{
    let mut acc = Neumaier::default();
    let mut push = |x: f64, y: f64, w: f64| -> Result<()> {
        let v = g(x, y);
        if !v.is_finite() {
            return Err(Error::NonFinite { x, value: v });
        }
        acc.add(w * v);
        Ok(())
    };
    let (nodes, weights) = (rule.nodes(), rule.weights());
    if diagonal {
        for (&u, &wu) in nodes.iter().zip(weights) {
            for (&t, &wt) in nodes.iter().zip(weights) {
                let w = wu * wt * u;
                // below the diagonal: y - y0 <= x - x0
                push(x0 + h * u, y0 + h * u * t, w)?;
                // above the diagonal
                push(x0 + h * u * t, y0 + h * u, w)?;
            }
        }
    } else {
        for (&u, &wu) in nodes.iter().zip(weights) {
            for (&t, &wt) in nodes.iter().zip(weights) {
                push(x0 + h * u, y0 + h * t, wu * wt)?;
            }
        }
    }
    Ok(h * h * acc.sum())
}

fn axis_cells(base: Base, level: u32) -> Result<usize> {
    base.checked_pow(level)
        .filter(|&n| n <= 1 << 16)
        .map(|n| n as usize)
        .ok_or_else(|| Error::Overflow(format!("{base}^{level} cells per axis")))
}

/// Single double coefficient at resolution `b^{max(a_1, d_1, min_level)}` per axis.
pub fn walsh_coeff_2d<G>(
    g: &G,
    k: &IndexDecomposition,
    l: &IndexDecomposition,
    quad_order: usize,
    min_level: u32,
) -> Result<Complex64>
where
    G: Fn(f64, f64) -> f64 + Sync + ?Sized,
{
    if k.base() != l.base() {
        return Err(Error::InvalidArgument("indices in different bases".into()));
    }
    let base = k.base();
    let rule = UnitRule::new(quad_order)?;
    let level = k.leading_position().max(l.leading_position()).max(min_level);
    let n = axis_cells(base, level)?;
    let h = 1.0 / n as f64;
    let ek: Vec<u32> = (0..n as u64).map(|i| wal_exponent_on_grid(k, i, level)).collect();
    let el: Vec<u32> = (0..n as u64).map(|j| wal_exponent_on_grid(l, j, level)).collect();
    let b = base.get();
    let rows = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut buckets = vec![Neumaier::default(); b as usize];
            for j in 0..n {
                let v = cell_integral(g, &rule, i as f64 * h, j as f64 * h, h, i == j)?;
                let e = (el[j] + b - ek[i]) % b;
                buckets[e as usize].add(v);
            }
            Ok(buckets.iter().map(Neumaier::sum).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut totals = vec![Neumaier::default(); b as usize];
    for row in rows {
        for (t, v) in totals.iter_mut().zip(row) {
            t.add(v);
        }
    }
    let table = RootTable::new(base);
    Ok(totals
        .iter()
        .enumerate()
        .map(|(e, s)| table.pow(e as i64) * s.sum())
        .sum())
}

/// Double coefficients for all `k, l < b^level`, stored row-major by `k`.
#[derive(Clone, Debug)]
pub struct CoefficientMatrix {
    pub base: Base,
    pub level: u32,
    pub values: Vec<Complex64>,
}

impl CoefficientMatrix {
    pub fn side(&self) -> usize {
        (self.values.len() as f64).sqrt().round() as usize
    }

    pub fn get(&self, k: u64, l: u64) -> Complex64 {
        self.values[k as usize * self.side() + l as usize]
    }
}

/// All double coefficients with `k, l < b^level` from one matrix of cell
/// integrals and two passes of the fast transform.
pub fn walsh_coeffs_2d_upto<G>(g: &G, base: Base, level: u32, quad_order: usize) -> Result<CoefficientMatrix>
where
    G: Fn(f64, f64) -> f64 + Sync + ?Sized,
{
    let rule = UnitRule::new(quad_order)?;
    let n = axis_cells(base, level)?;
    let h = 1.0 / n as f64;
    let scale = n as f64;
    // cells[j][i]: column j of y, row i of x, so the x-transform runs over contiguous data
    let mut columns = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut col = (0..n)
                .map(|i| {
                    cell_integral(g, &rule, i as f64 * h, j as f64 * h, h, i == j)
                        .map(|v| Complex64::new(v * scale, 0.0))
                })
                .collect::<Result<Vec<_>>>()?;
            fwt_in_place(base, level, &mut col, Direction::Forward);
            Ok(col)
        })
        .collect::<Result<Vec<_>>>()?;
    // columns[j][k] = Σ_i M_ij conj(wal_k(x_i)); transform along j for each k
    let values = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut row: Vec<Complex64> = columns.iter().map(|c| c[k]).collect();
            fwt_in_place(base, level, &mut row, Direction::Inverse);
            row
        })
        .flatten()
        .collect();
    columns.clear();
    Ok(CoefficientMatrix { base, level, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basekit::decompose;
    use approx::assert_abs_diff_eq;

    fn b2_periodic(x: f64, y: f64) -> f64 {
        let t = (x - y).rem_euclid(1.0);
        (t * t - t + 1.0 / 6.0) / 2.0
    }

    #[test]
    fn constant_integrand() {
        let base = Base::new(2).unwrap();
        let zero = decompose(0, base);
        let v = walsh_coeff_2d(&|_, _| 1.0, &zero, &zero, 8, 2).unwrap();
        assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-14);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn periodic_kernel_vanishes_against_constants() {
        for base in [2u32, 3] {
            let base = Base::new(base).unwrap();
            for k in 0..20 {
                let v = walsh_coeff_2d(&b2_periodic, &decompose(k, base), &decompose(0, base), 8, 3).unwrap();
                assert!(v.norm() < 1e-14, "k={k}: {v}");
            }
        }
    }

    #[test]
    fn diagonal_entry_for_base_two() {
        // ∫∫ b̃_2(x−y) w(x) w(y) with w = wal_1 equals 1/48
        let base = Base::new(2).unwrap();
        let one = decompose(1, base);
        let v = walsh_coeff_2d(&b2_periodic, &one, &one, 8, 4).unwrap();
        assert_abs_diff_eq!(v.re, 1.0 / 48.0, epsilon = 1e-14);
    }

    #[test]
    fn batch_matches_single_entries() {
        let g = |x: f64, y: f64| (x - y).abs().powi(3) + x * y.exp();
        for (base, level) in [(2u32, 3u32), (3, 2)] {
            let base = Base::new(base).unwrap();
            let m = walsh_coeffs_2d_upto(&g, base, level, 8).unwrap();
            let n = base.checked_pow(level).unwrap();
            for k in 0..n {
                for l in 0..n {
                    let single = walsh_coeff_2d(&g, &decompose(k, base), &decompose(l, base), 8, level).unwrap();
                    assert!((m.get(k, l) - single).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn kink_is_integrated_exactly() {
        // |x−y| is piecewise linear; triangle splitting makes the rule exact
        let base = Base::new(2).unwrap();
        let zero = decompose(0, base);
        let v = walsh_coeff_2d(&|x: f64, y: f64| (x - y).abs(), &zero, &zero, 2, 0).unwrap();
        assert_abs_diff_eq!(v.re, 1.0 / 3.0, epsilon = 1e-15);
    }
}
