//! Walsh coefficients of power series, `f̂(k) = Σ_{r >= v} f_r χ_{r,v}(k)`.

use num_complex::Complex64;

use super::recursion::RecursionSolver;
use crate::basekit::IndexDecomposition;
use crate::error::{check_tol, Error, Result};
use crate::oracle::{FunctionSpec, PowerSeries};

/// A synthesized coefficient and a bound on what the truncation left out.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesCoefficient {
    pub value: Complex64,
    /// Bound on `|Σ_{r > R} f_r χ_{r,v}(k)|` from `|χ_{r,v}| <= 1/(r+1)`.
    pub tail_bound: f64,
    /// `tol · Σ |f_r|` over the kept terms.
    pub recursion_error: f64,
}

/// `Σ_{r=v}^{R} f_r χ_{r,v}(k)` plus a bound on the remaining terms.
///
/// Summation stops before `R` once the certified remainder
/// `Σ_{r>R'} |f_r|/(r+1)` is below `tol / 4`: the degree recursion amplifies
/// errors once `r` is large against `b^{a_1}`, so terms that cannot matter are
/// not evaluated.
pub fn power_series_coeff(f: &FunctionSpec, k: &IndexDecomposition, truncation: usize, tol: f64) -> Result<SeriesCoefficient> {
    check_tol(tol)?;
    let series = f
        .series()
        .ok_or_else(|| Error::MissingData(format!("{}: no power-series coefficients", f.name())))?;
    synthesize(series, k, truncation, tol)
}

/// Certified bound on `Σ_{r >= from} |f_r| / (r+1)`.
fn remainder(series: &PowerSeries, from: usize) -> Result<f64> {
    if series.degree().is_some_and(|d| d < from) {
        return Ok(0.0);
    }
    let (sum, tail) = series.weighted_abs_sum(from, 0)?;
    Ok(sum + tail)
}

fn synthesize(series: &PowerSeries, k: &IndexDecomposition, truncation: usize, tol: f64) -> Result<SeriesCoefficient> {
    let v = k.v();
    let mut solver = RecursionSolver::monomial(k.base(), tol)?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut recursion_error = 0.0;
    let mut r = v;
    loop {
        if r > truncation || series.degree().is_some_and(|d| r > d) {
            break;
        }
        let fr = series.coeff(r);
        if fr != 0.0 {
            value += solver.coefficient(r as u32, k)? * fr;
            recursion_error += tol * fr.abs();
        }
        r += 1;
        if remainder(series, r)? <= tol / 4.0 {
            break;
        }
    }
    Ok(SeriesCoefficient {
        value,
        tail_bound: remainder(series, r)?,
        recursion_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basekit::{decompose, Base};
    use crate::oracle::{walsh_coeff, SeriesDecay};

    fn exp_series() -> FunctionSpec {
        FunctionSpec::new("exp", usize::MAX, |_, x: f64| x.exp()).with_series(PowerSeries::infinite(
            |r| 1.0 / (1..=r).map(|t| t as f64).product::<f64>(),
            SeriesDecay::Factorial {
                rate: 1.0,
                scale: 1.0,
            },
        ))
    }

    #[test]
    fn constants_have_no_higher_coefficients() {
        let c = FunctionSpec::new("c", usize::MAX, |s, _| if s == 0 { 2.0 } else { 0.0 })
            .with_series(PowerSeries::polynomial(vec![2.0]));
        for k in 1..30 {
            let s = power_series_coeff(&c, &decompose(k, Base::new(3).unwrap()), 10, 1e-12).unwrap();
            assert_eq!(s.value, Complex64::new(0.0, 0.0));
            assert_eq!(s.tail_bound, 0.0);
        }
    }

    #[test]
    fn exp_matches_quadrature() {
        let f = exp_series();
        let base = Base::new(2).unwrap();
        for k in [1u64, 2, 3, 6, 13] {
            let kd = decompose(k, base);
            let s = power_series_coeff(&f, &kd, 20, 1e-12).unwrap();
            let q = walsh_coeff(&f, &kd, 8, 4).unwrap().value;
            assert!((s.value - q).norm() <= 1e-9, "k={k}");
            assert!(s.tail_bound <= 1e-12 / 4.0);
        }
    }

    #[test]
    fn geometric_series_matches_quadrature() {
        let c = 0.5;
        let f = FunctionSpec::new("geom", usize::MAX, move |_, x: f64| 1.0 / (1.0 - c * x)).with_series(
            PowerSeries::infinite(
                move |r| c.powi(r as i32),
                SeriesDecay::Geometric {
                    ratio: c,
                    scale: 1.0,
                },
            ),
        );
        let kd = decompose(5, Base::new(3).unwrap());
        let q = walsh_coeff(&f, &kd, 8, 4).unwrap().value;
        let s = power_series_coeff(&f, &kd, 60, 1e-12).unwrap();
        assert!((s.value - q).norm() <= 1e-9);
        assert!(s.tail_bound <= 1e-12 / 4.0);
        let short = power_series_coeff(&f, &kd, 5, 1e-12).unwrap();
        assert!((short.value - q).norm() <= short.tail_bound + 1e-12);
    }

    #[test]
    fn missing_series_is_an_error() {
        let f = FunctionSpec::new("bare", 0, |_, x| x);
        assert!(matches!(
            power_series_coeff(&f, &decompose(1, Base::new(2).unwrap()), 4, 1e-9),
            Err(Error::MissingData(_))
        ));
    }
}
