//! Bernoulli polynomials `B_r`, the scaled polynomials `b_r = B_r / r!` and
//! their 1-periodic extensions `b̃_r`.

use std::sync::OnceLock;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Largest supported degree.
pub const R_MAX: usize = 12;

type Q = Ratio<i128>;

/// `B_r(x) = Σ_j coeffs[j] x^j` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BernoulliPoly {
    degree: usize,
    coeffs: Vec<Q>,
}

fn binomial(n: usize, k: usize) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}

/// Bernoulli numbers `B_0..=B_{R_MAX}` with `B_1 = −1/2`.
fn bernoulli_numbers() -> Vec<Q> {
    let mut numbers: Vec<Q> = Vec::with_capacity(R_MAX + 1);
    numbers.push(Q::from_integer(1));
    for m in 1..=R_MAX {
        let s: Q = (0..m)
            .map(|j| Q::from_integer(binomial(m + 1, j)) * numbers[j])
            .sum();
        numbers.push(-s / Q::from_integer((m + 1) as i128));
    }
    numbers
}

fn check_degree(r: usize) -> Result<()> {
    if r > R_MAX {
        Err(Error::InvalidArgument(format!(
            "Bernoulli degree {r} exceeds the supported maximum {R_MAX}"
        )))
    } else {
        Ok(())
    }
}

impl BernoulliPoly {
    pub fn new(r: usize) -> Result<Self> {
        check_degree(r)?;
        let numbers = bernoulli_numbers();
        // B_r(x) = Σ_j C(r, j) B_j x^{r−j}
        let mut coeffs = vec![Q::from_integer(0); r + 1];
        for (j, bj) in numbers.iter().enumerate().take(r + 1) {
            coeffs[r - j] = Q::from_integer(binomial(r, j)) * bj;
        }
        Ok(BernoulliPoly { degree: r, coeffs })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of `B_r`, constant term first.
    pub fn coefficients(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    /// Coefficients of `b_r = B_r / r!`, constant term first.
    pub fn scaled_coefficients(&self) -> Vec<f64> {
        let f = Q::from_integer(factorial(self.degree));
        self.coeffs.iter().map(|c| to_f64(&(c / f))).collect()
    }

    /// Exact coefficients of `B_r` as `(numerator, denominator)`.
    pub fn rational_coefficients(&self) -> Vec<(i128, i128)> {
        self.coeffs.iter().map(|c| (*c.numer(), *c.denom())).collect()
    }

    /// `B_r(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        horner(&self.coefficients(), x)
    }

    /// `b_r(x)`.
    pub fn eval_scaled(&self, x: f64) -> f64 {
        eval_b(self.degree, x).unwrap_or(f64::NAN)
    }
}

fn to_f64(q: &Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn scaled_table() -> &'static [Vec<f64>] {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=R_MAX)
            .map(|r| BernoulliPoly::new(r).map(|p| p.scaled_coefficients()).unwrap_or_default())
            .collect()
    })
}

/// The degree-`r` Bernoulli polynomial.
pub fn bernoulli(r: usize) -> Result<BernoulliPoly> {
    BernoulliPoly::new(r)
}

/// The Bernoulli number `B_r` (`B_1 = −1/2`).
pub fn bernoulli_number(r: usize) -> Result<f64> {
    check_degree(r)?;
    Ok(to_f64(&bernoulli_numbers()[r]))
}

/// `b_r(x) = B_r(x) / r!`.
pub fn eval_b(r: usize, x: f64) -> Result<f64> {
    check_degree(r)?;
    Ok(horner(&scaled_table()[r], x))
}

/// `b̃_r(t) = b_r(t mod 1)`. For `r = 1` the periodic extension takes the
/// midpoint value 0 at the integers, matching its Fourier series.
pub fn eval_b_tilde(r: usize, t: f64) -> Result<f64> {
    check_degree(r)?;
    let frac = t.rem_euclid(1.0);
    // rem_euclid can round a tiny negative t up to exactly 1.0
    let frac = if frac >= 1.0 { 0.0 } else { frac };
    if r == 1 && frac == 0.0 {
        return Ok(0.0);
    }
    Ok(horner(&scaled_table()[r], frac))
}

/// Sign `σ` with `b_r(|x − y|) = σ · b̃_r(x − y)`: always 1 for even `r`, and
/// `−1` exactly when `x < y` for odd `r`.
pub fn abs_difference_sign(r: usize, x: f64, y: f64) -> f64 {
    if r % 2 == 1 && x < y {
        -1.0
    } else {
        1.0
    }
}

/// `b_r(|x − y|)` expressed through the periodic extension.
pub fn b_of_abs_difference(r: usize, x: f64, y: f64) -> Result<f64> {
    Ok(abs_difference_sign(r, x, y) * eval_b_tilde(r, x - y)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::UnitRule;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn low_degree_examples() {
        assert_eq!(bernoulli(0).unwrap().coefficients(), vec![1.0]);
        assert_eq!(bernoulli(1).unwrap().coefficients(), vec![-0.5, 1.0]);
        assert_eq!(bernoulli(2).unwrap().rational_coefficients(), vec![(1, 6), (-1, 1), (1, 1)]);
        for x in [0.0, 0.3, 1.0] {
            assert_abs_diff_eq!(eval_b(1, x).unwrap(), x - 0.5);
        }
        assert_abs_diff_eq!(eval_b(2, 0.0).unwrap(), 1.0 / 12.0);
        assert_abs_diff_eq!(bernoulli_number(12).unwrap(), -691.0 / 2730.0, epsilon = 1e-16);
        assert_eq!(bernoulli_number(11).unwrap(), 0.0);
        assert!(bernoulli(R_MAX + 1).is_err());
        assert!(eval_b_tilde(13, 0.5).is_err());
    }

    #[test]
    fn derivative_relation_coefficientwise() {
        for r in 1..=R_MAX {
            let hi = bernoulli(r).unwrap().scaled_coefficients();
            let lo = bernoulli(r - 1).unwrap().scaled_coefficients();
            for (j, c) in lo.iter().enumerate() {
                assert_abs_diff_eq!((j + 1) as f64 * hi[j + 1], *c, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn mean_zero() {
        let rule = UnitRule::new(8).unwrap();
        for r in 1..=8 {
            let v = rule.integrate(0.0, 1.0, |x| eval_b(r, x).unwrap()).unwrap();
            assert!(v.abs() <= 1e-12, "r={r}: {v}");
        }
    }

    #[test]
    fn periodic_extension_and_fourier_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let t: f64 = rng.gen_range(-3.0..3.0);
            for r in 2..=6 {
                assert_abs_diff_eq!(
                    eval_b_tilde(r, t).unwrap(),
                    eval_b(r, t.rem_euclid(1.0)).unwrap(),
                    epsilon = 1e-15
                );
            }
            // b̃_2(t) = Σ_{h≠0} e^{2πiht} / (2πh)^2
            let four: f64 = (1..200_000)
                .map(|h| {
                    let h = h as f64;
                    2.0 * (2.0 * std::f64::consts::PI * h * t).cos()
                        / (2.0 * std::f64::consts::PI * h).powi(2)
                })
                .sum();
            assert_abs_diff_eq!(eval_b_tilde(2, t).unwrap(), four, epsilon = 1e-6);
        }
        assert_eq!(eval_b_tilde(1, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn abs_difference_sign_convention() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let (x, y): (f64, f64) = (rng.gen(), rng.gen());
            for r in 1..=7 {
                assert_abs_diff_eq!(
                    b_of_abs_difference(r, x, y).unwrap(),
                    eval_b(r, (x - y).abs()).unwrap(),
                    epsilon = 1e-14
                );
            }
        }
    }
}
