use leibniz_core::algebra::change_basis;
use leibniz_core::census::{load_report, report_to_string, run_census, save_report, CensusOptions};
use leibniz_core::classify::classify;
use leibniz_core::linalg;
use leibniz_core::{FieldSpec, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gf(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

#[test]
fn dim_three_gf2_anchor() {
    let report = run_census(3, gf(2), CensusOptions::default()).unwrap();
    assert_eq!(report.raw_total, 1 << 27);
    assert_eq!(report.valid_total, 806);
    assert_eq!(report.records.len(), 20);
    assert_eq!(report.orbit_total(), report.valid_total);
    for r in &report.records {
        assert!(r.algebra(gf(2), 3).is_leibniz());
    }
}

#[test]
fn reports_identical_across_worker_counts() {
    let one = run_census(3, gf(2), CensusOptions { workers: 1, assertions: true }).unwrap();
    let four = run_census(3, gf(2), CensusOptions { workers: 4, assertions: true }).unwrap();
    assert_eq!(report_to_string(&one), report_to_string(&four));
}

#[test]
fn gf3_dim2_raw_count() {
    let report = run_census(2, gf(3), CensusOptions::default()).unwrap();
    assert_eq!(report.raw_total, 6561);
    assert_eq!(report.orbit_total(), report.valid_total);
}

#[test]
fn saved_report_loads_back() {
    let report = run_census(2, gf(5), CensusOptions::default()).unwrap();
    let path = std::env::temp_dir().join(format!("leibniz-census-{}.jsonl", std::process::id()));
    save_report(&report, &path).unwrap();
    let loaded = load_report(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(loaded, report);
    assert_eq!(loaded.failures(), report.failures());
}

fn random_invertible(rng: &mut ChaCha8Rng, field: FieldSpec, n: usize) -> Vec<Vec<Scalar>> {
    let p = field.modulus().unwrap();
    loop {
        let m: Vec<Vec<Scalar>> = (0..n).map(|_| (0..n).map(|_| field.residue(rng.gen_range(0..p))).collect()).collect();
        if linalg::rank(&m, n) == n {
            return m;
        }
    }
}

#[test]
fn classification_invariant_under_twenty_basis_changes() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e1b);
    for (n, p) in [(3, 2), (2, 3), (2, 5)] {
        let report = run_census(n, gf(p), CensusOptions { workers: 1, assertions: false }).unwrap();
        for r in &report.records {
            let a = r.algebra(gf(p), n);
            let kind = classify(&a).unwrap().outcome.kind();
            for _ in 0..20 {
                let b = change_basis(&a, &random_invertible(&mut rng, gf(p), n)).unwrap();
                let v = classify(&b).unwrap();
                assert_eq!(v.outcome.kind(), kind, "{:?}", r.table);
                if v.outcome.is_case() {
                    assert!(v.reverified);
                }
            }
        }
    }
}
