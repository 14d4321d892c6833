//! Closed forms and recursions for the Walsh coefficients of monomials,
//! Bernoulli polynomials and the periodic Bernoulli kernel.

pub mod bernoulli;
mod gamma;
mod recursion;
mod series;

pub use bernoulli::{
    abs_difference_sign, b_of_abs_difference, bernoulli, bernoulli_number, eval_b, eval_b_tilde, BernoulliPoly,
};
pub use gamma::{gamma, gamma2, gamma_vanishes, GammaSolver};
pub use recursion::{
    beta, beta_closed_rr, chi, chi_closed_r_rm1, chi_closed_rr, chi_closed_rr_checked, Family, RecursionSolver,
};
pub use series::{power_series_coeff, SeriesCoefficient};
