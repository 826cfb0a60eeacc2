//! Property suites shared by the core integration tests and the acceptance
//! target. Every suite runs 100 cases from a fixed ChaCha seed.

use leibniz_core::algebra::{change_basis, AlgebraTable, Vector};
use leibniz_core::census::enumerate_tables;
use leibniz_core::classify::classify;
use leibniz_core::families::{build, Family, FamilySpec};
use leibniz_core::lattice::build_lattice;
use leibniz_core::linalg;
use leibniz_core::structure;
use leibniz_core::subspaces::{ideal_closure, is_ideal, is_subalgebra, subalgebra_closure, Subspace};
use leibniz_core::{FieldSpec, Scalar};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const SEED: [u8; 32] = *b"leibniz-property-suite-seed-0001";
pub const CASES: u32 = 100;

pub fn runner() -> TestRunner {
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

pub fn field(idx: usize) -> FieldSpec {
    match idx % 4 {
        0 => FieldSpec::prime(2).unwrap(),
        1 => FieldSpec::prime(3).unwrap(),
        2 => FieldSpec::prime(5).unwrap(),
        _ => FieldSpec::rational(),
    }
}

fn table_from(field: FieldSpec, n: usize, raw: &[i64]) -> AlgebraTable {
    let c = raw[..n * n * n].iter().map(|&v| field.from_i64(v)).collect();
    AlgebraTable::new(field, AlgebraTable::default_names(n), c).unwrap()
}

fn vector_from(field: FieldSpec, raw: &[i64]) -> Vector {
    Vector::from_i64(field, raw)
}

fn matrix_from(field: FieldSpec, n: usize, raw: &[i64]) -> Vec<Vec<Scalar>> {
    (0..n).map(|i| (0..n).map(|j| field.from_i64(raw[i * n + j])).collect()).collect()
}

fn is_invertible(m: &[Vec<Scalar>]) -> bool {
    linalg::rank(m, m.len()) == m.len()
}

/// Identity-valid tables: every one over GF(2) in dim 3 and GF(3), GF(5) in
/// dim 2, plus named rational instances.
pub fn leibniz_pool() -> Vec<AlgebraTable> {
    let mut pool = Vec::new();
    for (n, p) in [(3, 2), (2, 3), (2, 5)] {
        enumerate_tables(n, FieldSpec::prime(p).unwrap(), None, |a| pool.push(a)).unwrap();
    }
    let q = FieldSpec::rational();
    for family in [
        Family::Case2,
        Family::Case5,
        Family::Case6,
        Family::CrossLie,
        Family::Cyclic { n: 3 },
        Family::Case3 { c: q.from_i64(1), d: q.from_i64(-1), e: q.zero() },
    ] {
        pool.push(build(&FamilySpec { family, field: q }).unwrap());
    }
    pool
}

type Outcome = Result<(), String>;

fn finish(r: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>) -> Outcome {
    r.map_err(|e| e.to_string())
}

pub fn bilinearity() -> Outcome {
    let strategy = (0usize..4, 1usize..=3, vec(-4i64..=4, 27), vec(-4i64..=4, 9), -4i64..=4, -4i64..=4);
    finish(runner().run(&strategy, |(f, n, raw, vs, alpha, beta)| {
        let field = field(f);
        let a = table_from(field, n, &raw);
        let u = vector_from(field, &vs[..n]);
        let v = vector_from(field, &vs[n..2 * n]);
        let w = vector_from(field, &vs[2 * n..3 * n]);
        let (al, be) = (field.from_i64(alpha), field.from_i64(beta));
        let combo = u.scale(&al).add(&v.scale(&be));
        let left = a.multiply(&combo, &w).unwrap();
        let expect = a.multiply(&u, &w).unwrap().scale(&al).add(&a.multiply(&v, &w).unwrap().scale(&be));
        prop_assert_eq!(left, expect);
        let right = a.multiply(&w, &combo).unwrap();
        let expect = a.multiply(&w, &u).unwrap().scale(&al).add(&a.multiply(&w, &v).unwrap().scale(&be));
        prop_assert_eq!(right, expect);
        Ok(())
    }))
}

pub fn identity_on_random_triples(pool: &[AlgebraTable]) -> Outcome {
    let strategy = (0..pool.len(), vec(-5i64..=5, 9));
    finish(runner().run(&strategy, |(idx, raw)| {
        let a = &pool[idx];
        prop_assert!(a.is_leibniz());
        let n = a.dim();
        let (x, y, z) = (
            vector_from(a.field(), &raw[..n]),
            vector_from(a.field(), &raw[n..2 * n]),
            vector_from(a.field(), &raw[2 * n..3 * n]),
        );
        prop_assert!(a.defect(&x, &y, &z).is_zero());
        Ok(())
    }))
}

pub fn change_basis_invariance(pool: &[AlgebraTable]) -> Outcome {
    let strategy = (0..pool.len(), vec(-3i64..=3, 9));
    finish(runner().run(&strategy, |(idx, raw)| {
        let a = &pool[idx];
        let p = matrix_from(a.field(), a.dim(), &raw);
        if !is_invertible(&p) {
            return Err(TestCaseError::reject("singular"));
        }
        let b = change_basis(a, &p).unwrap();
        prop_assert_eq!(a.is_leibniz(), b.is_leibniz());
        prop_assert_eq!(structure::is_nilpotent(a).unwrap(), structure::is_nilpotent(&b).unwrap());
        prop_assert_eq!(structure::is_solvable(a).unwrap(), structure::is_solvable(&b).unwrap());
        if a.field().is_finite() {
            let pa = build_lattice(a).unwrap().property_p().holds;
            let pb = build_lattice(&b).unwrap().property_p().holds;
            prop_assert_eq!(pa, pb);
            let ca = classify(a).unwrap().outcome.kind();
            let cb = classify(&b).unwrap().outcome.kind();
            prop_assert_eq!(ca, cb);
        }
        Ok(())
    }))
}

pub fn closure_fixed_points(pool: &[AlgebraTable]) -> Outcome {
    let strategy = (0..pool.len(), vec(-3i64..=3, 6), 1usize..=2);
    finish(runner().run(&strategy, |(idx, raw, k)| {
        let a = &pool[idx];
        let n = a.dim();
        let gens: Vec<Vector> = (0..k).map(|i| vector_from(a.field(), &raw[i * 3..i * 3 + n])).collect();
        let s = Subspace::span(a.field(), n, &gens).unwrap();
        let sub = subalgebra_closure(a, &s).unwrap();
        prop_assert!(sub.contains(&s).unwrap());
        prop_assert!(is_subalgebra(a, &sub).unwrap());
        prop_assert_eq!(&subalgebra_closure(a, &sub).unwrap(), &sub);
        let ideal = ideal_closure(a, &s).unwrap();
        prop_assert!(ideal.contains(&sub).unwrap());
        prop_assert!(is_ideal(a, &ideal).unwrap());
        prop_assert_eq!(&ideal_closure(a, &ideal).unwrap(), &ideal);
        Ok(())
    }))
}

pub fn dimension_formula() -> Outcome {
    let strategy = (0usize..4, 1usize..=5, vec(-3i64..=3, 25), vec(-3i64..=3, 25), 0usize..=5, 0usize..=5);
    finish(runner().run(&strategy, |(f, n, ru, rv, ku, kv)| {
        let field = field(f);
        let vecs = |raw: &[i64], k: usize| -> Vec<Vector> {
            (0..k.min(n)).map(|i| vector_from(field, &raw[i * 5..i * 5 + n])).collect()
        };
        let u = Subspace::span(field, n, &vecs(&ru, ku)).unwrap();
        let v = Subspace::span(field, n, &vecs(&rv, kv)).unwrap();
        let sum = u.sum(&v).unwrap();
        let meet = u.intersect(&v).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), u.dim() + v.dim());
        prop_assert!(sum.contains(&u).unwrap() && sum.contains(&v).unwrap());
        prop_assert!(u.contains(&meet).unwrap() && v.contains(&meet).unwrap());
        Ok(())
    }))
}

/// Deterministic over every class, not sampled.
pub fn leib_in_left_annihilator(pool: &[AlgebraTable]) -> Outcome {
    for a in pool {
        let leib = structure::leib_ideal(a).map_err(|e| e.to_string())?;
        let ann = structure::left_annihilator(a).map_err(|e| e.to_string())?;
        if !ann.contains(&leib).map_err(|e| e.to_string())? {
            return Err(format!("Leib not in left annihilator for {:?}", a.constants()));
        }
    }
    Ok(())
}
