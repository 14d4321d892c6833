//! Decay bounds next to the coefficients they bound.

use walsh_decay::basekit::{decompose, Base};
use walsh_decay::bounds::{bound_cr, bound_monomial, bound_power_series, SmoothnessData};
use walsh_decay::corpus::CorpusEntry;
use walsh_decay::oracle::{walsh_coeff, DEFAULT_MIN_LEVEL};

fn main() -> walsh_decay::Result<()> {
    let base = Base::new(2)?;
    let exp = CorpusEntry::Exp { a: 1.0 }.build()?;
    let cubic = CorpusEntry::Monomial { r: 3 }.build()?;
    let smooth = SmoothnessData::from_function(&exp, 2, 1.0, base, 10)?;
    let series = exp.series().expect("exp has a power series");
    println!("{:>5} {:>3} {:>11} {:>11} {:>11} {:>11} {:>11}", "k", "v", "|x^3 coeff|", "monomial", "|exp coeff|", "series", "C^2");
    for k in [1u64, 3, 6, 11, 25, 90, 341, 1000] {
        let kd = decompose(k, base);
        let c3 = walsh_coeff(&cubic, &kd, 8, DEFAULT_MIN_LEVEL)?.value.norm();
        let ce = walsh_coeff(&exp, &kd, 8, DEFAULT_MIN_LEVEL)?.value.norm();
        println!(
            "{k:>5} {:>3} {c3:>11.3e} {:>11.3e} {ce:>11.3e} {:>11.3e} {:>11.3e}",
            kd.v(),
            bound_monomial(3, &kd).value,
            bound_power_series(series, &kd)?.value,
            bound_cr(&smooth, &kd)?.value
        );
    }
    Ok(())
}
