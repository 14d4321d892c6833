//! Reproducing kernels of the Sobolev spaces and their representer identities.

use crate::error::{Error, Result};
use crate::exact::{eval_b, eval_b_tilde};
use crate::oracle::{FunctionSpec, UnitRule};

const PANELS: usize = 16;
const ORDER: usize = 16;

fn check_order(r: u32) -> Result<()> {
    // b̃_{2r} is tabulated up to degree 12
    if (1..=6).contains(&r) {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "smoothness r",
            value: f64::from(r),
            domain: "1..=6",
        })
    }
}

fn sign(r: u32) -> f64 {
    if r.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `K_r(x, y) = Σ_{s=0}^{r} b_s(x) b_s(y) − (−1)^r b̃_{2r}(x − y)`.
pub fn kernel_sobolev(r: u32, x: f64, y: f64) -> Result<f64> {
    check_order(r)?;
    let mut sum = 0.0;
    for s in 0..=r as usize {
        sum += eval_b(s, x)? * eval_b(s, y)?;
    }
    Ok(sum - sign(r) * eval_b_tilde(2 * r as usize, x - y)?)
}

/// `K_{r,per}(x, y) = (−1)^{r+1} b̃_{2r}(x − y)`.
pub fn kernel_periodic(r: u32, x: f64, y: f64) -> Result<f64> {
    check_order(r)?;
    Ok(-sign(r) * eval_b_tilde(2 * r as usize, x - y)?)
}

/// `∫_0^1 f^{(r)}(x) b̃_r(x − y) dx`, split at the kink `x = y`.
fn periodic_part(f: &FunctionSpec, r: u32, y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::Domain {
            what: "y",
            value: y,
            domain: "[0, 1]",
        });
    }
    let rule = UnitRule::new(ORDER)?;
    let s = r as usize;
    let g = |x: f64| f.derivative(s, x).unwrap_or(f64::NAN) * eval_b_tilde(s, x - y).unwrap_or(f64::NAN);
    let mut total = 0.0;
    if y > 0.0 {
        total += rule.integrate_composite(0.0, y, PANELS, g)?;
    }
    if y < 1.0 {
        total += rule.integrate_composite(y, 1.0, PANELS, g)?;
    }
    Ok(total)
}

/// Right-hand side of `f(y) = Σ_{s=0}^{r} (∫f^{(s)}) b_s(y) − (−1)^r ∫ f^{(r)}(x) b̃_r(x − y) dx`.
pub fn representer_sobolev(f: &FunctionSpec, r: u32, y: f64) -> Result<f64> {
    check_order(r)?;
    if r as usize > f.max_derivative() {
        return Err(Error::MissingData(format!("{}: needs {r} derivatives", f.name())));
    }
    let rule = UnitRule::new(ORDER)?;
    let mut sum = rule.integrate_composite(0.0, 1.0, PANELS, |x| f.eval(x))? * eval_b(0, y)?;
    for s in 1..=r as usize {
        let integral = f.derivative(s - 1, 1.0)? - f.derivative(s - 1, 0.0)?;
        sum += integral * eval_b(s, y)?;
    }
    Ok(sum - sign(r) * periodic_part(f, r, y)?)
}

/// Right-hand side of `f(y) = (−1)^{r+1} ∫ f^{(r)}(x) b̃_r(x − y) dx` for `f ∈ H_{r,per}`.
pub fn representer_periodic(f: &FunctionSpec, r: u32, y: f64) -> Result<f64> {
    check_order(r)?;
    if r as usize > f.max_derivative() {
        return Err(Error::MissingData(format!("{}: needs {r} derivatives", f.name())));
    }
    Ok(-sign(r) * periodic_part(f, r, y)?)
}
