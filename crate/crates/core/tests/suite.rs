use finhyper::verify::{run_suite, CheckReport, SuiteConfig, CHECK_NAMES};

#[test]
fn default_suite_passes() {
    let reports = run_suite(&SuiteConfig::default()).unwrap();
    let failed: Vec<&CheckReport> = reports.iter().filter(|r| !r.passed()).collect();
    assert!(failed.is_empty(), "{failed:#?}");
    for name in CHECK_NAMES {
        assert!(reports.iter().any(|r| r.check == *name), "no report for {name}");
    }
}

#[test]
fn seeds_change_random_instances_only() {
    let base = SuiteConfig { checks: vec!["fourier".into(), "main_theorem".into()], ..SuiteConfig::default() };
    let a = run_suite(&SuiteConfig { seed: 1, ..base.clone() }).unwrap();
    let b = run_suite(&SuiteConfig { seed: 2, ..base }).unwrap();
    assert_eq!(a.len(), b.len());
    assert!(a.iter().zip(&b).any(|(x, y)| x.instance != y.instance));
    let fixed = |r: &[CheckReport]| r.iter().filter(|r| r.check == "main_theorem").map(|r| r.instance.clone()).collect::<Vec<_>>();
    assert_eq!(fixed(&a), fixed(&b));
}
