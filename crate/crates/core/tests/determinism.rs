use walsh_decay::harness::report::write_report_csv;
use walsh_decay::harness::{run_lower_bound, run_verify, RunConfig};

fn config(jobs: usize) -> RunConfig {
    RunConfig {
        base: 3,
        max_level: 5,
        gamma_level: 3,
        jobs: Some(jobs),
        ..RunConfig::default()
    }
}

fn csv(jobs: usize) -> Vec<u8> {
    let report = run_verify(&config(jobs)).unwrap();
    let mut buf = Vec::new();
    write_report_csv(&mut buf, &report.rows).unwrap();
    buf
}

#[test]
fn report_is_identical_across_thread_counts() {
    let serial = csv(1);
    assert!(serial.len() > 1000);
    assert_eq!(serial, csv(4));
}

#[test]
fn limit_table_is_identical_across_thread_counts() {
    let mut a = config(1);
    a.lower_bound.a_max = 8;
    let mut b = a.clone();
    b.jobs = Some(3);
    assert_eq!(run_lower_bound(&a).unwrap(), run_lower_bound(&b).unwrap());
}
