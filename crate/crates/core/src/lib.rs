//! Walsh coefficient decay for smooth functions on the unit interval.

pub mod basekit;
pub mod bounds;
pub mod corpus;
pub mod error;
pub mod exact;
pub mod harness;
pub mod oracle;
pub mod walsh;

pub use error::{Error, Result};

/// A real number in scientific notation with 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}
