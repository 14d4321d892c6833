//! Composite Gauss–Legendre rules and compensated summation.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights mapped to `[0, 1]`.
#[derive(Clone, Debug)]
pub struct UnitRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl UnitRule {
    /// An `order`-point rule; exact for polynomials of degree `2·order − 1`.
    pub fn new(order: usize) -> Result<Self> {
        let n = NonZeroUsize::new(order)
            .filter(|n| n.get() >= 2)
            .ok_or_else(|| Error::InvalidArgument(format!("quadrature order {order} < 2")))?;
        let rule = GaussLegendre::new(n);
        let (nodes, weights) = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .unzip();
        Ok(UnitRule { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^c f`, propagating non-finite samples as errors.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, c: f64, mut f: F) -> Result<f64> {
        let h = c - a;
        let mut acc = Neumaier::default();
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            let x = a + h * t;
            let y = f(x);
            if !y.is_finite() {
                return Err(Error::NonFinite { x, value: y });
            }
            acc.add(w * y);
        }
        Ok(h * acc.sum())
    }

    /// Composite rule over `panels` equal panels of `[a, c]`.
    pub fn integrate_composite<F: FnMut(f64) -> f64>(
        &self,
        a: f64,
        c: f64,
        panels: usize,
        mut f: F,
    ) -> Result<f64> {
        let h = (c - a) / panels as f64;
        let mut acc = Neumaier::default();
        for p in 0..panels {
            let lo = a + h * p as f64;
            let hi = if p + 1 == panels { c } else { lo + h };
            acc.add(self.integrate(lo, hi, &mut f)?);
        }
        Ok(acc.sum())
    }
}

/// Neumaier's improved Kahan summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn sum(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `∫_0^1 |g|`, splitting at sign changes located by bisection on a uniform scan.
pub fn abs_integral<F: Fn(f64) -> f64>(g: F, order: usize) -> Result<f64> {
    const SCAN: usize = 2048;
    let rule = UnitRule::new(order)?;
    let mut breaks = vec![0.0];
    let mut prev_x = 0.0;
    let mut prev_y = g(0.0);
    for i in 1..=SCAN {
        let x = i as f64 / SCAN as f64;
        let y = g(x);
        if !y.is_finite() {
            return Err(Error::NonFinite { x, value: y });
        }
        if prev_y * y < 0.0 {
            let (mut lo, mut hi, mut flo) = (prev_x, x, prev_y);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let fm = g(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            breaks.push(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_y = y;
    }
    breaks.push(1.0);
    let mut acc = Neumaier::default();
    for w in breaks.windows(2) {
        let panels = (((w[1] - w[0]) * 64.0).ceil() as usize).max(1);
        acc.add(rule.integrate_composite(w[0], w[1], panels, |x| g(x).abs())?);
    }
    Ok(acc.sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomial_exactness() {
        for order in 2..=16 {
            let rule = UnitRule::new(order).unwrap();
            let weight_sum: f64 = rule.weights().iter().sum();
            assert_abs_diff_eq!(weight_sum, 1.0, epsilon = 1e-14);
            for degree in 0..2 * order as i32 {
                let v = rule.integrate(0.0, 1.0, |x| x.powi(degree)).unwrap();
                assert_abs_diff_eq!(v, 1.0 / f64::from(degree + 1), epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn rejects_tiny_orders_and_nan() {
        assert!(UnitRule::new(1).is_err());
        let rule = UnitRule::new(4).unwrap();
        assert!(matches!(
            rule.integrate(0.0, 1.0, |_| f64::NAN),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn abs_integral_handles_sign_changes() {
        let v = abs_integral(|x| (2.0 * std::f64::consts::PI * x).sin(), 8).unwrap();
        assert_abs_diff_eq!(v, 2.0 / std::f64::consts::PI, epsilon = 1e-13);
        let v = abs_integral(|x| x - 1.0 / 3.0, 8).unwrap();
        assert_abs_diff_eq!(v, (1.0 / 9.0 + 4.0 / 9.0) / 2.0, epsilon = 1e-14);
    }

    #[test]
    fn neumaier_recovers_cancellation() {
        let mut s = Neumaier::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.sum(), 2.0);
    }
}
