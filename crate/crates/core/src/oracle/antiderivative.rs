//! Iterated antiderivatives `F_r(x) = ∫_0^x f(t) (x−t)^{r−1}/(r−1)! dt`.

use std::sync::Arc;

use super::function::FunctionSpec;
use super::quadrature::UnitRule;
use crate::error::{Error, Result};

const PANELS: usize = 16;
const ORDER: usize = 16;

/// `F_r` as an evaluable spec whose derivatives are `F_{r−1}, …, f, f′, …`.
pub fn iterated_antiderivative(f: &FunctionSpec, r: usize) -> Result<FunctionSpec> {
    if r == 0 {
        return Err(Error::InvalidArgument("antiderivative order must be >= 1".into()));
    }
    let rule = Arc::new(UnitRule::new(ORDER)?);
    let inner = f.clone();
    let max_derivative = f.max_derivative().saturating_add(r);
    let spec = FunctionSpec::new(format!("F{r}[{}]", f.name()), max_derivative, move |s, x| {
        if s >= r {
            return inner.derivative(s - r, x).unwrap_or(f64::NAN);
        }
        let order = r - s;
        if x == 0.0 {
            return 0.0;
        }
        let norm: f64 = (1..order).map(|t| t as f64).product();
        rule.integrate_composite(0.0, x, PANELS, |t| {
            inner.eval(t) * (x - t).powi(order as i32 - 1) / norm
        })
        .unwrap_or(f64::NAN)
    });
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::finite_difference;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn one() -> FunctionSpec {
        FunctionSpec::new("1", usize::MAX, |s, _| if s == 0 { 1.0 } else { 0.0 })
    }

    #[test]
    fn examples() {
        let f1 = iterated_antiderivative(&one(), 1).unwrap();
        let f2 = iterated_antiderivative(&one(), 2).unwrap();
        for x in [0.0, 0.2, 0.9, 1.0] {
            assert_abs_diff_eq!(f1.eval(x), x, epsilon = 1e-15);
            assert_abs_diff_eq!(f2.eval(x), x * x / 2.0, epsilon = 1e-15);
        }
        assert!(iterated_antiderivative(&one(), 0).is_err());
    }

    #[test]
    fn vanishes_at_zero_and_differentiates_down() {
        let f = FunctionSpec::new("exp", usize::MAX, |_, x: f64| x.exp());
        for r in 1..=4 {
            let fr = iterated_antiderivative(&f, r).unwrap();
            assert_eq!(fr.eval(0.0), 0.0);
            let lower = if r == 1 {
                f.clone()
            } else {
                iterated_antiderivative(&f, r - 1).unwrap()
            };
            for x in [0.1, 0.5, 0.8] {
                let d = finite_difference(&fr, 0, x, 1e-5).unwrap();
                assert_abs_diff_eq!(d, lower.eval(x), epsilon = 1e-8);
                assert_abs_diff_eq!(fr.derivative(1, x).unwrap(), lower.eval(x), epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn taylor_remainder_identity() {
        // f(x) − Σ_{s<r} f^{(s)}(0) x^s/s! = F_r[f^{(r)}](x)
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = FunctionSpec::new("sin", usize::MAX, |s, x: f64| {
            let p = std::f64::consts::PI;
            p.powi(s as i32) * (p * x + s as f64 * p / 2.0).sin()
        });
        for r in 1..=4 {
            let remainder = iterated_antiderivative(&f.derivative_spec(r).unwrap(), r).unwrap();
            for _ in 0..50 {
                let x: f64 = rng.gen();
                let mut taylor = 0.0;
                let mut fact = 1.0;
                for s in 0..r {
                    if s > 0 {
                        fact *= s as f64;
                    }
                    taylor += f.derivative(s, 0.0).unwrap() * x.powi(s as i32) / fact;
                }
                assert_abs_diff_eq!(f.eval(x) - taylor, remainder.eval(x), epsilon = 1e-8);
            }
        }
    }
}
