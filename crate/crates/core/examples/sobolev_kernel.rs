//! Reproducing property of the Sobolev kernels.

use walsh_decay::bounds::{kernel_sobolev, representer_periodic, representer_sobolev};
use walsh_decay::corpus::CorpusEntry;

fn main() -> walsh_decay::Result<()> {
    let exp = CorpusEntry::Exp { a: 1.0 }.build()?;
    let b4 = CorpusEntry::Bernoulli { r: 4 }.build()?;
    for r in 1..=4 {
        let worst = (0..=10)
            .map(|i| {
                let y = f64::from(i) / 10.0;
                representer_sobolev(&exp, r, y).map(|v| (v - y.exp()).abs())
            })
            .try_fold(0.0f64, |m, e| e.map(|e| m.max(e)))?;
        println!("r={r}: max |<f, K(., y)> - f(y)| = {worst:.2e}, K(0.3, 0.7) = {:.6}", kernel_sobolev(r, 0.3, 0.7)?);
    }
    let y = 0.37;
    println!("periodic r=2 on b_4: {:.15} vs {:.15}", representer_periodic(&b4, 2, y)?, b4.eval(y));
    Ok(())
}
