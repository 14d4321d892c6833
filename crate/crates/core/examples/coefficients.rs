//! Walsh coefficients of x^3 and e^x from the recursions, checked against quadrature.

use walsh_decay::basekit::{decompose, Base};
use walsh_decay::corpus::CorpusEntry;
use walsh_decay::exact::{chi, power_series_coeff};
use walsh_decay::oracle::{walsh_coeff, DEFAULT_MIN_LEVEL};

fn main() -> walsh_decay::Result<()> {
    let base = Base::new(3)?;
    let cubic = CorpusEntry::Monomial { r: 3 }.build()?;
    let exp = CorpusEntry::Exp { a: 1.0 }.build()?;
    println!("{:>4} {:>24} {:>24} {:>10}", "k", "chi_3(k)", "exp coeff", "max err");
    for k in [1u64, 2, 5, 13, 40, 121] {
        let kd = decompose(k, base);
        let exact = chi(3, &kd, 1e-14)?;
        let series = power_series_coeff(&exp, &kd, 30, 1e-14)?;
        let err = (exact - walsh_coeff(&cubic, &kd, 8, DEFAULT_MIN_LEVEL)?.value)
            .norm()
            .max((series.value - walsh_coeff(&exp, &kd, 8, DEFAULT_MIN_LEVEL)?.value).norm());
        println!("{k:>4} {:>24} {:>24} {err:>10.2e}", format!("{exact:.3e}"), format!("{:.3e}", series.value));
    }
    Ok(())
}
