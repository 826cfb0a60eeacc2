//! Subspaces in canonical reduced-row-echelon form, and the subspace
//! calculus used by every structural computation.

use std::cmp::Ordering;

use crate::algebra::{AlgebraTable, Vector};
use crate::error::{Error, Result};
use crate::exactfield::{FieldSpec, Scalar};
use crate::linalg::{self, Matrix};

/// A subspace of `F^n` stored as its unique RREF basis, so equality of
/// subspaces is equality of row matrices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: FieldSpec,
    ambient: usize,
    rows: Matrix,
    pivots: Vec<usize>,
}

/// Dimension first, then rows lexicographically.
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then(self.rows.len().cmp(&other.rows.len()))
            .then_with(|| self.rows.cmp(&other.rows))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            rows: linalg::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Canonical basis of the span of `vectors`.
    pub fn span(field: FieldSpec, ambient: usize, vectors: &[Vector]) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: v.len(),
                });
            }
        }
        Ok(Self::from_rows_unchecked(
            field,
            ambient,
            vectors.iter().map(|v| v.0.clone()).collect(),
        ))
    }

    pub(crate) fn from_rows_unchecked(field: FieldSpec, ambient: usize, mut rows: Matrix) -> Self {
        let pivots = linalg::rref_in_place(&mut rows, ambient);
        Subspace {
            field,
            ambient,
            rows,
            pivots,
        }
    }

    /// Wraps rows already known to be in RREF (used by the enumerator).
    pub(crate) fn from_rref(field: FieldSpec, ambient: usize, rows: Matrix, pivots: Vec<usize>) -> Self {
        debug_assert_eq!(rows.len(), pivots.len());
        Subspace {
            field,
            ambient,
            rows,
            pivots,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.rows.iter().map(|r| Vector(r.clone())).collect()
    }

    fn check_ambient(&self, other_ambient: usize) -> Result<()> {
        if self.ambient != other_ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: other_ambient,
            });
        }
        Ok(())
    }

    /// `v` minus its component along the pivot rows; zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut out = v.0.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let factor = out[p].clone();
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o = &*o - &(&factor * r);
                }
            }
        }
        Vector(out)
    }

    pub fn contains_vector(&self, v: &Vector) -> bool {
        v.len() == self.ambient && self.reduce(v).is_zero()
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other.ambient)?;
        Ok(other.dim() <= self.dim() && other.rows.iter().all(|r| self.reduce(&Vector(r.clone())).is_zero()))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient)?;
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Ok(Self::from_rows_unchecked(self.field, self.ambient, rows))
    }

    /// Intersection via the left kernel of the stacked bases `[U; −V]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient)?;
        let r = self.dim();
        let stacked: Matrix = self
            .rows
            .iter()
            .cloned()
            .chain(other.rows.iter().map(|row| row.iter().map(|x| -x).collect()))
            .collect();
        let kernel = linalg::left_kernel(self.field, &stacked, self.ambient);
        let vectors: Matrix = kernel
            .iter()
            .map(|k| linalg::vec_mat(self.field, &k[..r], &self.rows, self.ambient))
            .collect();
        Ok(Self::from_rows_unchecked(self.field, self.ambient, vectors))
    }

    /// Renders as `span{…}` using the algebra's basis names.
    pub fn render(&self, names: &[String]) -> String {
        let inner: Vec<String> = self.basis().iter().map(|v| render_vector(v, names)).collect();
        format!("span{{{}}}", inner.join(", "))
    }
}

/// Renders a vector as a linear combination of named basis elements.
pub fn render_vector(v: &Vector, names: &[String]) -> String {
    let mut out = String::new();
    for (c, name) in v.0.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let text = c.to_string();
        let (neg, mag) = match text.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, text),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag != "1" {
            out.push_str(&mag);
            out.push('*');
        }
        out.push_str(name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn check_space(a: &AlgebraTable, s: &Subspace) -> Result<()> {
    if s.ambient_dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: s.ambient_dim(),
        });
    }
    Ok(())
}

/// Span of `u · v` over basis pairs of `U` and `V`.
pub fn subspace_product(a: &AlgebraTable, u: &Subspace, v: &Subspace) -> Result<Subspace> {
    check_space(a, u)?;
    check_space(a, v)?;
    let mut products = Vec::with_capacity(u.dim() * v.dim());
    for x in u.basis() {
        for y in v.basis() {
            products.push(a.mul(&x, &y));
        }
    }
    Subspace::span(a.field(), a.dim(), &products)
}

pub fn whole(a: &AlgebraTable) -> Subspace {
    Subspace::full(a.field(), a.dim())
}

/// `L · L`.
pub fn derived_algebra(a: &AlgebraTable) -> Subspace {
    let l = whole(a);
    subspace_product(a, &l, &l).expect("matching dimensions")
}

/// Least subalgebra containing `s`.
pub fn subalgebra_closure(a: &AlgebraTable, s: &Subspace) -> Result<Subspace> {
    check_space(a, s)?;
    let mut current = s.clone();
    loop {
        let next = current.sum(&subspace_product(a, &current, &current)?)?;
        if next.dim() == current.dim() {
            return Ok(current);
        }
        current = next;
    }
}

/// Least two-sided ideal containing `s`.
pub fn ideal_closure(a: &AlgebraTable, s: &Subspace) -> Result<Subspace> {
    check_space(a, s)?;
    let l = whole(a);
    let mut current = s.clone();
    loop {
        let next = current
            .sum(&subspace_product(a, &l, &current)?)?
            .sum(&subspace_product(a, &current, &l)?)?;
        if next.dim() == current.dim() {
            return Ok(current);
        }
        current = next;
    }
}

fn products_stay_inside(a: &AlgebraTable, left: &[Vector], right: &[Vector], s: &Subspace) -> bool {
    left.iter()
        .all(|x| right.iter().all(|y| s.contains_vector(&a.mul(x, y))))
}

pub fn is_subalgebra(a: &AlgebraTable, s: &Subspace) -> Result<bool> {
    check_space(a, s)?;
    let b = s.basis();
    Ok(products_stay_inside(a, &b, &b, s))
}

/// Two-sided: `L·S ⊆ S` and `S·L ⊆ S`.
pub fn is_ideal(a: &AlgebraTable, s: &Subspace) -> Result<bool> {
    check_space(a, s)?;
    let b = s.basis();
    let l: Vec<Vector> = (0..a.dim()).map(|i| a.basis_vector(i)).collect();
    Ok(products_stay_inside(a, &l, &b, s) && products_stay_inside(a, &b, &l, s))
}

/// Structure constants of the subalgebra `s` in its RREF basis.
pub fn induced_table(a: &AlgebraTable, s: &Subspace) -> Result<AlgebraTable> {
    if !is_subalgebra(a, s)? {
        return Err(Error::MalformedSpec("subspace is not a subalgebra".into()));
    }
    let field = a.field();
    let basis = s.basis();
    let r = basis.len();
    let names = (1..=r).map(|i| format!("m{i}")).collect();
    let mut out = AlgebraTable::zero(field, names);
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            let prod = a.mul(x, y);
            // Coordinates in the RREF basis are read off at the pivot columns.
            let coords: Vec<Scalar> = s.pivots().iter().map(|&p| prod.0[p].clone()).collect();
            out.set_product(i, j, &Vector(coords));
        }
    }
    Ok(out)
}

/// Coordinates of `v ∈ s` relative to the RREF basis of `s`.
pub fn coordinates_in(s: &Subspace, v: &Vector) -> Option<Vector> {
    if !s.contains_vector(v) {
        return None;
    }
    Some(Vector(s.pivots().iter().map(|&p| v.0[p].clone()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn v(field: FieldSpec, c: &[i64]) -> Vector {
        Vector::from_i64(field, c)
    }

    #[test]
    fn rref_examples() {
        let f2 = gf(2);
        let s = Subspace::span(f2, 2, &[v(f2, &[1, 1]), v(f2, &[0, 1])]).unwrap();
        assert_eq!(s, Subspace::full(f2, 2));
        assert!(Subspace::span(f2, 2, &[]).unwrap().is_zero());
        let q = FieldSpec::rational();
        let s = Subspace::span(q, 2, &[v(q, &[2, 4])]).unwrap();
        assert_eq!(s.rows(), &vec![vec![q.one(), q.from_i64(2)]]);
        assert!(matches!(
            Subspace::span(q, 2, &[v(q, &[1, 2, 3])]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn intersection_example() {
        // basis (x, a, a2, a3)
        let f2 = gf(2);
        let u = Subspace::span(f2, 4, &[v(f2, &[0, 1, 0, 0]), v(f2, &[0, 0, 1, 0]), v(f2, &[0, 0, 0, 1])]).unwrap();
        let w = Subspace::span(f2, 4, &[v(f2, &[1, 0, 0, 0]), v(f2, &[0, 0, 1, 0]), v(f2, &[0, 0, 0, 1])]).unwrap();
        let expected = Subspace::span(f2, 4, &[v(f2, &[0, 0, 1, 0]), v(f2, &[0, 0, 0, 1])]).unwrap();
        assert_eq!(u.intersect(&w).unwrap(), expected);
        assert_eq!(u.sum(&Subspace::zero(f2, 4)).unwrap(), u);
        assert!(u.intersect(&Subspace::zero(f2, 3)).is_err());
    }

    #[test]
    fn render_uses_names() {
        let q = FieldSpec::rational();
        let names: Vec<String> = ["x", "a"].iter().map(|s| s.to_string()).collect();
        assert_eq!(render_vector(&v(q, &[1, -2]), &names), "x - 2*a");
        assert_eq!(render_vector(&v(q, &[0, 0]), &names), "0");
        let s = Subspace::span(q, 2, &[v(q, &[0, 3])]).unwrap();
        assert_eq!(s.render(&names), "span{a}");
    }
}
