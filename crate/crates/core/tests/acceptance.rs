//! End-to-end acceptance checks. Prints one PASS/FAIL line per check and
//! exits non-zero when any check fails.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use walsh_decay::basekit::{decompose, mu, mu_per_pair, Base};
use walsh_decay::bounds::{bound_bernoulli, gamma_row_sum_bound, representer_sobolev, Theorem};
use walsh_decay::corpus::CorpusEntry;
use walsh_decay::exact::{chi_closed_r_rm1, chi_closed_rr, eval_b_tilde, gamma2, gamma_vanishes, GammaSolver, RecursionSolver};
use walsh_decay::harness::{bench_size, run_lower_bound, run_verify, BoundSelection, LowerBoundConfig, RunConfig};
use walsh_decay::oracle::{walsh_coeffs_2d_upto, walsh_coeffs_upto, FunctionSpec};

const ORACLE_ORDER: usize = 8;
const RECURSION_TOL: f64 = 1e-13;

struct Outcome {
    pass: bool,
    detail: String,
}

fn b(n: u32) -> Base {
    Base::new(n).unwrap()
}

fn max_norm(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, f64::max)
}

fn monomial_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut worst_closed = 0.0f64;
    for base in [2u32, 3, 5] {
        let base = b(base);
        let n = base.checked_pow(7).unwrap();
        for r in 1..=6u32 {
            let f = CorpusEntry::Monomial { r }.build().unwrap();
            let oracle = walsh_coeffs_upto(&f, base, 7, ORACLE_ORDER).unwrap();
            let (err, closed) = (0..n)
                .into_par_iter()
                .map_init(
                    || RecursionSolver::monomial(base, RECURSION_TOL).unwrap(),
                    |solver, k| {
                        let kd = decompose(k, base);
                        let expect = oracle.values[k as usize];
                        let err = (solver.coefficient(r, &kd).unwrap() - expect).norm();
                        let closed = if kd.v() as u32 == r {
                            (chi_closed_rr(&kd).unwrap() - expect).norm()
                        } else if kd.v() as u32 + 1 == r {
                            (chi_closed_r_rm1(r, &kd).unwrap() - expect).norm()
                        } else {
                            0.0
                        };
                        (err, closed)
                    },
                )
                .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
            worst = worst.max(err);
            worst_closed = worst_closed.max(closed);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: worst <= 1e-9 && worst_closed <= 1e-10 && secs <= 120.0,
        detail: format!("max |chi - oracle| = {worst:.3e}, closed forms {worst_closed:.3e}, {secs:.1}s"),
    }
}

fn bernoulli_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut violations = 0usize;
    for base in [2u32, 3] {
        let base = b(base);
        let n = base.checked_pow(6).unwrap();
        for r in 1..=5u32 {
            let f = CorpusEntry::Bernoulli { r }.build().unwrap();
            let oracle = walsh_coeffs_upto(&f, base, 6, ORACLE_ORDER).unwrap();
            let mut solver = RecursionSolver::bernoulli(base, RECURSION_TOL).unwrap();
            for k in 0..n {
                let kd = decompose(k, base);
                let value = solver.coefficient(r, &kd).unwrap();
                worst = worst.max((value - oracle.values[k as usize]).norm());
                if k >= 1 && value.norm() > bound_bernoulli(r, &kd).value * (1.0 + 1e-9) {
                    violations += 1;
                }
            }
        }
    }
    Outcome {
        pass: worst <= 1e-9 && violations == 0,
        detail: format!("max |beta - oracle| = {worst:.3e}, bound violations {violations}"),
    }
}

fn gamma_checks() -> Outcome {
    let mut table_err = 0.0f64;
    let mut false_negative = 0usize;
    let mut rec_err = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for base in [2u32, 3] {
        let base = b(base);
        let n = base.checked_pow(4).unwrap();
        let k2 = |x: f64, y: f64| eval_b_tilde(2, x - y).unwrap();
        let m2 = walsh_coeffs_2d_upto(&k2, base, 4, ORACLE_ORDER).unwrap();
        for k in 1..n {
            for l in 1..n {
                let (kd, ld) = (decompose(k, base), decompose(l, base));
                let oracle = m2.get(k, l);
                table_err = table_err.max((gamma2(&kd, &ld).unwrap() - oracle).norm());
                if gamma_vanishes(2, &kd, &ld) && oracle.norm() > 1e-8 {
                    false_negative += 1;
                }
            }
        }
        let k3 = |x: f64, y: f64| eval_b_tilde(3, x - y).unwrap();
        let m3 = walsh_coeffs_2d_upto(&k3, base, 4, ORACLE_ORDER).unwrap();
        let mut solver = GammaSolver::new(base, RECURSION_TOL).unwrap();
        for _ in 0..50 {
            let (k, l) = (rng.gen_range(1..n), rng.gen_range(1..n));
            let value = solver.gamma(3, &decompose(k, base), &decompose(l, base)).unwrap();
            rec_err = rec_err.max((value - m3.get(k, l)).norm());
        }
    }
    Outcome {
        pass: table_err <= 1e-8 && false_negative == 0 && rec_err <= 1e-8,
        detail: format!(
            "gamma_2 table {table_err:.3e}, vanishing false negatives {false_negative}, gamma_3 recursion {rec_err:.3e}"
        ),
    }
}

fn bound_sweeps() -> Outcome {
    let start = Instant::now();
    let mut bounds = vec![
        BoundSelection::new(Theorem::Monomial),
        BoundSelection::new(Theorem::Holder).with_lambda(1.0),
        BoundSelection::new(Theorem::PowerSeries),
    ];
    for r in 1..=4 {
        bounds.push(BoundSelection::new(Theorem::SmoothCr).with_r(r).with_lambda(1.0));
    }
    for r in 2..=4 {
        bounds.push(BoundSelection::new(Theorem::Sobolev).with_r(r));
        bounds.push(BoundSelection::new(Theorem::SobolevPeriodic).with_r(r));
    }
    let config = RunConfig {
        base: 2,
        max_level: 12,
        corpus: vec![
            CorpusEntry::Exp { a: 1.0 },
            CorpusEntry::Geometric { c: 0.5 },
            CorpusEntry::SinPi,
            CorpusEntry::Bernoulli { r: 4 },
            CorpusEntry::Monomial { r: 5 },
        ],
        bounds,
        ..RunConfig::default()
    };
    let report = run_verify(&config).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let estimated: usize = report.bounds.values().map(|s| s.estimated_rows).sum();
    let max_ratio = max_norm(report.bounds.values().map(|s| s.max_ratio));
    Outcome {
        pass: report.violations == 0 && estimated == 0 && report.total_rows > 0 && secs <= 300.0,
        detail: format!(
            "{} rows over {} bounds, max ratio {max_ratio:.6}, violations {}, below oracle resolution {}, {secs:.1}s",
            report.total_rows,
            report.bounds.len(),
            report.violations,
            report.unresolved
        ),
    }
}

fn sharpness() -> Outcome {
    let base = b(2);
    let level = 12;
    let mut worst_margin = f64::INFINITY;
    let mut count = 0usize;
    for r in 1..=3u32 {
        let f = CorpusEntry::Monomial { r }.build().unwrap();
        let table = walsh_coeffs_upto(&f, base, level, ORACLE_ORDER).unwrap();
        let fact: f64 = (1..=r).map(f64::from).product();
        let floor = fact * 2f64.powi(-2 * r as i32) * (1.0 - 1e-6);
        for k in 1..base.checked_pow(level).unwrap() {
            let kd = decompose(k, base);
            if kd.v() as u32 != r || kd.digits()[r as usize - 1].position < 4 {
                continue;
            }
            count += 1;
            let scaled = table.values[k as usize].norm() * 2f64.powi(mu(r, &kd) as i32);
            worst_margin = worst_margin.min(scaled / floor);
        }
    }
    Outcome {
        pass: count > 0 && worst_margin >= 1.0,
        detail: format!("{count} indices, min |f(k)| b^mu / floor = {worst_margin:.6}"),
    }
}

fn limit_rate() -> Outcome {
    let config = RunConfig {
        base: 2,
        lower_bound: LowerBoundConfig {
            function: CorpusEntry::Exp { a: 1.0 },
            kappa: 1,
            tails: vec![0, 1, 2],
            a_min: 6,
            a_max: 14,
            max_nested: 1,
            ..LowerBoundConfig::default()
        },
        ..RunConfig::default()
    };
    let table = run_lower_bound(&config).unwrap();
    let mut pass = true;
    let mut details = Vec::new();
    for tail in [0u64, 1, 2] {
        let ladder = table.single(tail).unwrap();
        let res = |a: u32| ladder.rows.iter().find(|r| r.step == a).unwrap().residual;
        let ratios: Vec<f64> = (6..14).map(|a| res(a + 1) / res(a)).collect();
        let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &q| (lo.min(q), hi.max(q)));
        let drop = res(14) / res(6);
        pass &= lo >= 0.4 && hi <= 0.6 && drop <= 1e-4;
        details.push(format!("k'={tail}: step ratios [{lo:.4}, {hi:.4}], R(14)/R(6) = {drop:.3e}"));
    }
    Outcome {
        pass,
        detail: details.join("; "),
    }
}

fn transform() -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for (base, level) in [(2u32, 10u32), (3, 7), (5, 5)] {
        let row = bench_size(b(base), level, 3, 11).unwrap();
        pass &= row.max_abs_diff <= 1e-10 && row.roundtrip_error <= 1e-10;
        if base == 3 {
            pass &= row.speedup >= 10.0;
        }
        details.push(format!(
            "N={}: diff {:.2e}, roundtrip {:.2e}, speedup {:.0}x",
            row.n, row.max_abs_diff, row.roundtrip_error, row.speedup
        ));
    }
    Outcome {
        pass,
        detail: details.join("; "),
    }
}

fn representer() -> Outcome {
    let f = FunctionSpec::new("exp", usize::MAX, |_, x: f64| x.exp());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let worst = max_norm((0..20).map(|_| {
        let y: f64 = rng.gen_range(0.0..=1.0);
        (representer_sobolev(&f, 2, y).unwrap() - y.exp()).abs()
    }));
    Outcome {
        pass: worst <= 1e-8,
        detail: format!("max reproduction error {worst:.3e} over 20 points"),
    }
}

fn row_sums() -> Outcome {
    let base = b(2);
    let ks: Vec<_> = (1..1u64 << 12).map(|k| decompose(k, base)).collect();
    let mut worst = 0.0f64;
    for m in 1..16u64 {
        let md = decompose(m, base);
        let sum: f64 = ks
            .iter()
            .filter(|kd| !gamma_vanishes(2, &md, kd))
            .map(|kd| 2f64.powi(-(mu_per_pair(2, &md, kd) as i32)))
            .sum();
        worst = worst.max(sum / gamma_row_sum_bound(2, &md).unwrap().value);
    }
    Outcome {
        pass: worst <= 1.0,
        detail: format!("max empirical sum / bound = {worst:.6}"),
    }
}

fn main() {
    let checks: [(&str, fn() -> Outcome); 9] = [
        ("monomial coefficient equivalence", monomial_equivalence),
        ("bernoulli coefficient equivalence", bernoulli_equivalence),
        ("gamma table, vanishing and recursion", gamma_checks),
        ("bound sweeps", bound_sweeps),
        ("order sharpness", sharpness),
        ("leading-digit limit rate", limit_rate),
        ("fast transform", transform),
        ("representer identity", representer),
        ("row-sum bound", row_sums),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let outcome = check();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{tag} [{}] {name}: {}", i + 1, outcome.detail);
        failed += usize::from(!outcome.pass);
    }
    println!("{} of {} acceptance checks passed", checks.len() - failed, checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
