use weil_core::canonical::{reduction_iso, CanonicalSpace};
use weil_core::symplectic::{OrientedSubspace, SymplecticSpace};
use weil_core::verify::{run_suite, Suite, VerifyConfig};

fn check_count(report: &weil_core::verify::SuiteReport, name: &str) -> usize {
    report.checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("no check {name}")).cases
}

#[test]
fn every_suite_passes_at_the_smallest_space() {
    let cfg = VerifyConfig::new(3, 1);
    let report = run_suite(Suite::All, &cfg).unwrap();
    for c in &report.checks {
        assert!(c.passed, "{} failed: {:?}", c.name, c.witness);
        assert!(c.skipped.is_none(), "{} skipped", c.name);
    }
    assert_eq!(check_count(&report, "multiplicativity/triples"), 512);
    assert_eq!(check_count(&report, "homomorphism/rho-multiplicative"), 576);
    assert_eq!(check_count(&report, "egorov/egorov"), 24 * 27);
    assert_eq!(check_count(&report, "kernels/intertwining"), 64);
    assert_eq!(check_count(&report, "kernels/convolution-composition"), 512);
}

#[test]
fn reports_are_reproducible() {
    let cfg = VerifyConfig { p: 5, n: 1, seed: 7, samples: 40 };
    let a = run_suite(Suite::Multiplicativity, &cfg).unwrap();
    let b = run_suite(Suite::Multiplicativity, &cfg).unwrap();
    assert_eq!(a.to_json().to_string(), b.to_json().to_string());
    assert!(a.passed);
    assert!(!a.checks[0].exhaustive);
    assert_eq!(a.checks[0].cases, 40);
}

#[test]
fn invariant_line_in_four_dimensions() {
    let v = SymplecticSpace::standard(3, 2).unwrap();
    let holder = CanonicalSpace::new(&v).unwrap();
    let line = OrientedSubspace::new(v.subspace(&[vec![0, 1, 2, 0]]).unwrap(), 2).unwrap();
    let r = reduction_iso(&holder, &line).unwrap();
    assert_eq!(r.invariant.cols(), 3);
    assert_eq!(r.restricted().rank(), 3);
}
