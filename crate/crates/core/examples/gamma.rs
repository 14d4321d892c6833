//! Double coefficients of the periodic Bernoulli kernel and where they vanish.

use walsh_decay::basekit::{decompose, Base};
use walsh_decay::exact::{gamma, gamma_vanishes};

fn main() -> walsh_decay::Result<()> {
    let base = Base::new(2)?;
    let n = 8u64;
    for r in [2u32, 3] {
        println!("gamma_{r}, k,l < {n}");
        for k in 0..n {
            let line: Vec<String> = (0..n)
                .map(|l| {
                    let (kd, ld) = (decompose(k, base), decompose(l, base));
                    if gamma_vanishes(r, &kd, &ld) {
                        Ok(format!("{:>10}", "."))
                    } else {
                        gamma(r, &kd, &ld, 1e-14).map(|g| format!("{:>10.2e}", g.re))
                    }
                })
                .collect::<walsh_decay::Result<_>>()?;
            println!("{}", line.join(""));
        }
    }
    Ok(())
}
