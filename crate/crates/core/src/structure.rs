//! Series and structural invariants over any exact field.

use rayon::prelude::*;

use crate::algebra::{AlgebraTable, Vector};
use crate::error::{Error, Result};
use crate::exactfield::FieldSpec;
use crate::linalg;
use crate::subspaces::{self, ideal_closure, subalgebra_closure, subspace_product, whole, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    Derived,
    LowerCentral,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    /// Strictly decreasing terms, starting at `L`, up to stabilization.
    pub terms: Vec<Subspace>,
    pub terminates_at_zero: bool,
}

fn run_series(a: &AlgebraTable, kind: SeriesKind) -> SeriesReport {
    let l = whole(a);
    let mut terms = vec![l.clone()];
    loop {
        let last = terms.last().expect("nonempty");
        if last.is_zero() {
            break;
        }
        let next = match kind {
            SeriesKind::Derived => subspace_product(a, last, last),
            SeriesKind::LowerCentral => subspace_product(a, &l, last)
                .and_then(|left| left.sum(&subspace_product(a, last, &l)?)),
        }
        .expect("matching dimensions");
        if next.dim() == last.dim() {
            break;
        }
        terms.push(next);
    }
    let terminates_at_zero = terms.last().is_some_and(Subspace::is_zero);
    SeriesReport {
        kind,
        terms,
        terminates_at_zero,
    }
}

/// `L⁽⁰⁾ = L`, `L⁽ᵏ⁺¹⁾ = L⁽ᵏ⁾·L⁽ᵏ⁾`.
pub fn derived_series(a: &AlgebraTable) -> Result<SeriesReport> {
    a.require_leibniz()?;
    Ok(run_series(a, SeriesKind::Derived))
}

/// Two-sided lower central series `Lᵏ⁺¹ = L·Lᵏ + Lᵏ·L`.
pub fn lower_central_series(a: &AlgebraTable) -> Result<SeriesReport> {
    a.require_leibniz()?;
    Ok(run_series(a, SeriesKind::LowerCentral))
}

pub fn is_solvable(a: &AlgebraTable) -> Result<bool> {
    Ok(derived_series(a)?.terminates_at_zero)
}

pub fn is_nilpotent(a: &AlgebraTable) -> Result<bool> {
    Ok(lower_central_series(a)?.terminates_at_zero)
}

/// Nilpotency through the left-normed series `Lᵏ⁺¹ = L·Lᵏ`, kept only to
/// compare against the two-sided convention.
pub fn is_left_nilpotent(a: &AlgebraTable) -> Result<bool> {
    a.require_leibniz()?;
    let l = whole(a);
    let mut term = l.clone();
    loop {
        if term.is_zero() {
            return Ok(true);
        }
        let next = subspace_product(a, &l, &term)?;
        if next.dim() == term.dim() {
            return Ok(false);
        }
        term = next;
    }
}

/// `dim L − dim L²`.
pub fn codim_derived(a: &AlgebraTable) -> usize {
    a.dim() - subspaces::derived_algebra(a).dim()
}

/// Ideal generated by all squares: the ideal closure of the span of `bᵢ·bᵢ`
/// and `bᵢ·bⱼ + bⱼ·bᵢ`, which by polarization spans every square.
pub fn leib_ideal(a: &AlgebraTable) -> Result<Subspace> {
    a.require_leibniz()?;
    let n = a.dim();
    let mut gens = Vec::new();
    for i in 0..n {
        gens.push(a.basis_product(i, i));
        for j in i + 1..n {
            gens.push(a.basis_product(i, j).add(&a.basis_product(j, i)));
        }
    }
    ideal_closure(a, &Subspace::span(a.field(), n, &gens)?)
}

/// `{u : u·v = 0 for all v}`.
pub fn left_annihilator(a: &AlgebraTable) -> Result<Subspace> {
    a.require_leibniz()?;
    let n = a.dim();
    // Row i concatenates bᵢ·b₀, …, bᵢ·bₙ₋₁; the left kernel is the annihilator.
    let rows: linalg::Matrix = (0..n)
        .map(|i| (0..n).flat_map(|j| a.basis_product(i, j).0).collect())
        .collect();
    let kernel = linalg::left_kernel(a.field(), &rows, n * n);
    Ok(Subspace::from_rows_unchecked(a.field(), n, kernel))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicReport {
    pub generator: Vector,
    /// Left-normed powers `x, x², …` while linearly independent.
    pub powers: Vec<Vector>,
    pub span: Subspace,
}

fn left_normed_powers(a: &AlgebraTable, x: &Vector) -> (Vec<Vector>, Subspace) {
    let mut powers = Vec::new();
    let mut span = Subspace::zero(a.field(), a.dim());
    let mut current = x.clone();
    while !span.contains_vector(&current) {
        powers.push(current.clone());
        span = span.sum(&Subspace::span(a.field(), a.dim(), &[current.clone()]).unwrap()).unwrap();
        current = a.mul(x, &current);
    }
    (powers, span)
}

/// The cyclic subalgebra `⟨x⟩` from left-normed powers `x^{k+1} = x·x^k`.
pub fn cyclic_subalgebra(a: &AlgebraTable, x: &Vector) -> Result<CyclicReport> {
    a.require_leibniz()?;
    a.check_vector(x)?;
    let (powers, span) = left_normed_powers(a, x);
    debug_assert_eq!(
        span,
        subalgebra_closure(a, &Subspace::span(a.field(), a.dim(), std::slice::from_ref(x)).unwrap()).unwrap()
    );
    Ok(CyclicReport {
        generator: x.clone(),
        powers,
        span,
    })
}

/// Every vector of `F^n` in enumeration order: the index written in base
/// `q` with the first coordinate most significant.
pub fn all_vectors(field: FieldSpec, n: usize) -> Result<Vec<Vector>> {
    let q = field.modulus().ok_or(Error::InfiniteFieldUnsupported)? as usize;
    let total = q.pow(n as u32);
    Ok((0..total).map(|idx| vector_at(field, n, idx)).collect())
}

pub(crate) fn vector_at(field: FieldSpec, n: usize, mut idx: usize) -> Vector {
    let q = field.modulus().expect("finite field") as usize;
    let mut coords = vec![field.zero(); n];
    for slot in coords.iter_mut().rev() {
        *slot = field.residue((idx % q) as u32);
        idx /= q;
    }
    Vector(coords)
}

/// First element (in [`all_vectors`] order) generating the whole algebra.
pub fn find_cyclic_generator(a: &AlgebraTable) -> Result<Option<Vector>> {
    let field = a.field();
    let q = field.modulus().ok_or(Error::InfiniteFieldUnsupported)? as usize;
    a.require_leibniz()?;
    let n = a.dim();
    let total = q.pow(n as u32);
    let found = (0..total).into_par_iter().find_first(|&idx| {
        let x = vector_at(field, n, idx);
        left_normed_powers(a, &x).1.dim() == n
    });
    Ok(found.map(|idx| vector_at(field, n, idx)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub table: AlgebraTable,
    /// Original basis indices spanning the complement (non-pivot columns of the ideal).
    pub complement: Vec<usize>,
    ideal: Subspace,
}

impl Quotient {
    /// Image of `v` in quotient coordinates.
    pub fn project(&self, v: &Vector) -> Vector {
        let r = self.ideal.reduce(v);
        Vector(self.complement.iter().map(|&i| r.0[i].clone()).collect())
    }
}

/// `A / I` on the basis of non-pivot coordinates of `I`, in ascending order.
pub fn quotient(a: &AlgebraTable, ideal: &Subspace) -> Result<Quotient> {
    if !subspaces::is_ideal(a, ideal)? {
        return Err(Error::NotAnIdeal);
    }
    let complement: Vec<usize> = (0..a.dim()).filter(|i| !ideal.pivots().contains(i)).collect();
    let names = complement.iter().map(|&i| a.basis_names()[i].clone()).collect();
    let mut table = AlgebraTable::zero(a.field(), names);
    let mut q = Quotient {
        table: table.clone(),
        complement: complement.clone(),
        ideal: ideal.clone(),
    };
    for (qi, &i) in complement.iter().enumerate() {
        for (qj, &j) in complement.iter().enumerate() {
            let prod = q.project(&a.basis_product(i, j));
            table.set_product(qi, qj, &prod);
        }
    }
    q.table = table;
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build, Family, FamilySpec};

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn fam(family: Family, field: FieldSpec) -> AlgebraTable {
        build(&FamilySpec { family, field }).unwrap()
    }

    fn span(a: &AlgebraTable, idx: &[usize]) -> Subspace {
        let vs: Vec<Vector> = idx.iter().map(|&i| a.basis_vector(i)).collect();
        Subspace::span(a.field(), a.dim(), &vs).unwrap()
    }

    #[test]
    fn case2_series() {
        let a = fam(Family::Case2, FieldSpec::rational());
        let d = derived_series(&a).unwrap();
        assert_eq!(d.terms, vec![whole(&a), span(&a, &[0]), span(&a, &[])]);
        assert!(d.terminates_at_zero);
        let lc = lower_central_series(&a).unwrap();
        assert_eq!(lc.terms, vec![whole(&a), span(&a, &[0])]);
        assert!(!lc.terminates_at_zero);
        assert!(is_solvable(&a).unwrap());
        assert!(!is_nilpotent(&a).unwrap());
    }

    #[test]
    fn abelian_and_empty_series() {
        let a = AlgebraTable::zero(gf(3), AlgebraTable::default_names(2));
        assert_eq!(derived_series(&a).unwrap().terms.len(), 2);
        assert_eq!(lower_central_series(&a).unwrap().terms.len(), 2);
        let z = AlgebraTable::zero(gf(3), vec![]);
        assert!(is_solvable(&z).unwrap() && is_nilpotent(&z).unwrap());
    }

    #[test]
    fn cyclic_is_nilpotent() {
        let a = fam(Family::Cyclic { n: 3 }, gf(2));
        assert!(is_nilpotent(&a).unwrap());
        assert!(is_left_nilpotent(&a).unwrap());
    }

    #[test]
    fn leib_examples() {
        let f2 = gf(2);
        let z2 = fam(Family::Case4 { c: f2.zero(), d: f2.zero() }, f2);
        assert_eq!(leib_ideal(&z2).unwrap(), span(&z2, &[2, 3]));
        let lie = fam(Family::CrossLie, FieldSpec::rational());
        assert!(leib_ideal(&lie).unwrap().is_zero());
        let c2 = fam(Family::Cyclic { n: 2 }, gf(5));
        assert_eq!(leib_ideal(&c2).unwrap(), span(&c2, &[1]));
    }

    #[test]
    fn annihilator_examples() {
        let a = fam(Family::Case2, gf(3));
        assert!(left_annihilator(&a).unwrap().is_zero());
        let ab = AlgebraTable::zero(gf(3), AlgebraTable::default_names(2));
        assert!(left_annihilator(&ab).unwrap().is_full());
    }

    #[test]
    fn not_leibniz_rejected() {
        let f2 = gf(2);
        let mut t = AlgebraTable::zero(f2, vec!["a".into()]);
        t.set(0, 0, 0, f2.one());
        assert_eq!(derived_series(&t), Err(Error::NotLeibniz(0, 0, 0)));
        assert_eq!(leib_ideal(&t), Err(Error::NotLeibniz(0, 0, 0)));
    }

    #[test]
    fn cyclic_subalgebra_examples() {
        let a = fam(Family::Cyclic { n: 3 }, gf(3));
        let r = cyclic_subalgebra(&a, &a.basis_vector(0)).unwrap();
        assert_eq!(r.powers, vec![a.basis_vector(0), a.basis_vector(1), a.basis_vector(2)]);
        assert!(r.span.is_full());
        let f2 = gf(2);
        let z2 = fam(Family::Case4 { c: f2.zero(), d: f2.zero() }, f2);
        let xa = z2.basis_vector(0).add(&z2.basis_vector(1));
        let r = cyclic_subalgebra(&z2, &xa).unwrap();
        let expected = Subspace::span(f2, 4, &[xa.clone(), z2.basis_vector(2), z2.basis_vector(3)]).unwrap();
        assert_eq!(r.span, expected);
        // x·x = 0 in case2
        let c2 = fam(Family::Case2, f2);
        assert_eq!(cyclic_subalgebra(&c2, &c2.basis_vector(0)).unwrap().span.dim(), 1);
    }

    #[test]
    fn generator_search() {
        let c2 = fam(Family::Cyclic { n: 2 }, gf(2));
        assert_eq!(find_cyclic_generator(&c2).unwrap(), Some(c2.basis_vector(0)));
        let ab = AlgebraTable::zero(gf(2), AlgebraTable::default_names(2));
        assert_eq!(find_cyclic_generator(&ab).unwrap(), None);
        let case2 = fam(Family::Case2, gf(3));
        assert_eq!(find_cyclic_generator(&case2).unwrap(), None);
        let q = fam(Family::Case2, FieldSpec::rational());
        assert_eq!(find_cyclic_generator(&q), Err(Error::InfiniteFieldUnsupported));
    }

    #[test]
    fn quotient_by_leib() {
        let f2 = gf(2);
        let z2 = fam(Family::Case4 { c: f2.zero(), d: f2.zero() }, f2);
        let leib = leib_ideal(&z2).unwrap();
        let q = quotient(&z2, &leib).unwrap();
        assert_eq!(q.complement, vec![0, 1]);
        let t = &q.table;
        // x̄ = 0, ā = 1
        assert_eq!(t.basis_product(1, 0), t.basis_vector(0));
        assert_eq!(t.basis_product(0, 1), t.basis_vector(0));
        assert!(t.basis_product(0, 0).is_zero() && t.basis_product(1, 1).is_zero());
        assert!(t.is_lie());
        let zero = Subspace::zero(f2, 4);
        assert_eq!(quotient(&z2, &zero).unwrap().table, z2);
        assert_eq!(quotient(&z2, &whole(&z2)).unwrap().table.dim(), 0);
        assert_eq!(quotient(&z2, &span(&z2, &[1])), Err(Error::NotAnIdeal));
    }
}
