//! Structure-constant tables, the product they define, the left Leibniz
//! identity checker and the algebra file format.

use std::collections::HashSet;
use std::fmt;
use std::io;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfield::{FieldKind, FieldSpec, Scalar};
use crate::linalg::{self, Matrix};

/// Coordinates of an element relative to a table's basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector(pub Vec<Scalar>);

impl Vector {
    pub fn zero(field: FieldSpec, n: usize) -> Self {
        Vector(vec![field.zero(); n])
    }

    pub fn basis(field: FieldSpec, n: usize, i: usize) -> Self {
        let mut v = Self::zero(field, n);
        v.0[i] = field.one();
        v
    }

    pub fn from_i64(field: FieldSpec, coords: &[i64]) -> Self {
        Vector(coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Scalar) -> Vector {
        Vector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A finite-dimensional algebra given by structure constants:
/// `constant(i, j, k)` is the coefficient of basis `k` in `bᵢ · bⱼ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraTable {
    field: FieldSpec,
    basis: Vec<String>,
    constants: Vec<Scalar>,
}

impl AlgebraTable {
    pub fn new(field: FieldSpec, basis: Vec<String>, constants: Vec<Scalar>) -> Result<Self> {
        let n = basis.len();
        if constants.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n * n,
                found: constants.len(),
            });
        }
        if let Some(bad) = constants.iter().find(|s| !field.contains(s)) {
            return Err(Error::FieldMismatch(field.to_string(), bad.field().to_string()));
        }
        let unique: HashSet<&String> = basis.iter().collect();
        if unique.len() != n {
            return Err(Error::MalformedSpec("basis names must be unique".into()));
        }
        Ok(AlgebraTable {
            field,
            basis,
            constants,
        })
    }

    /// The abelian (all products zero) algebra on the given basis names.
    pub fn zero(field: FieldSpec, basis: Vec<String>) -> Self {
        let n = basis.len();
        AlgebraTable {
            field,
            basis,
            constants: vec![field.zero(); n * n * n],
        }
    }

    pub fn default_names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("e{i}")).collect()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn constants(&self) -> &[Scalar] {
        &self.constants
    }

    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        let n = self.dim();
        (i * n + j) * n + k
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.constants[self.index(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Scalar) {
        let idx = self.index(i, j, k);
        self.constants[idx] = value;
    }

    /// Sets `bᵢ · bⱼ` to the given vector.
    pub fn set_product(&mut self, i: usize, j: usize, value: &Vector) {
        for (k, s) in value.0.iter().enumerate() {
            self.set(i, j, k, s.clone());
        }
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Vector {
        let start = self.index(i, j, 0);
        Vector(self.constants[start..start + self.dim()].to_vec())
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        Vector::basis(self.field, self.dim(), i)
    }

    pub fn zero_vector(&self) -> Vector {
        Vector::zero(self.field, self.dim())
    }

    pub fn check_vector(&self, v: &Vector) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        if let Some(bad) = v.0.iter().find(|s| !self.field.contains(s)) {
            return Err(Error::FieldMismatch(self.field.to_string(), bad.field().to_string()));
        }
        Ok(())
    }

    /// Bilinear product `u · v`.
    pub fn multiply(&self, u: &Vector, v: &Vector) -> Result<Vector> {
        self.check_vector(u)?;
        self.check_vector(v)?;
        Ok(self.mul(u, v))
    }

    /// Unchecked product; callers guarantee compatible vectors.
    pub fn mul(&self, u: &Vector, v: &Vector) -> Vector {
        let n = self.dim();
        let mut out = vec![self.field.zero(); n];
        for (i, ui) in u.0.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.0.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let coef = ui * vj;
                let start = self.index(i, j, 0);
                for (o, c) in out.iter_mut().zip(&self.constants[start..start + n]) {
                    if !c.is_zero() {
                        *o = &*o + &(&coef * c);
                    }
                }
            }
        }
        Vector(out)
    }

    /// `a(bc) − (ab)c − b(ac)`, zero for every triple exactly when the
    /// algebra is left Leibniz.
    pub fn defect(&self, a: &Vector, b: &Vector, c: &Vector) -> Vector {
        let lhs = self.mul(a, &self.mul(b, c));
        let r1 = self.mul(&self.mul(a, b), c);
        let r2 = self.mul(b, &self.mul(a, c));
        lhs.sub(&r1).sub(&r2)
    }

    /// First basis triple violating the identity, scanning `(i, j, k)` lexicographically.
    pub fn first_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        let basis: Vec<Vector> = (0..n).map(|i| self.basis_vector(i)).collect();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !self.defect(&basis[i], &basis[j], &basis[k]).is_zero() {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn is_leibniz(&self) -> bool {
        self.first_violation().is_none()
    }

    pub(crate) fn require_leibniz(&self) -> Result<()> {
        match self.first_violation() {
            Some((i, j, k)) => Err(Error::NotLeibniz(i, j, k)),
            None => Ok(()),
        }
    }

    /// All squares vanish, so together with the identity the algebra is Lie.
    pub fn is_lie(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| self.basis_product(i, i).is_zero())
            && (0..n).all(|i| {
                (0..n).all(|j| self.basis_product(i, j).add(&self.basis_product(j, i)).is_zero())
            })
    }

    /// Matrix of `v ↦ bᵢ · v` acting on row vectors (row `j` is `bᵢ · bⱼ`).
    pub fn left_operator(&self, i: usize) -> Matrix {
        (0..self.dim()).map(|j| self.basis_product(i, j).0).collect()
    }

    /// Matrix of `v ↦ v · bᵢ` acting on row vectors.
    pub fn right_operator(&self, i: usize) -> Matrix {
        (0..self.dim()).map(|j| self.basis_product(j, i).0).collect()
    }
}

/// One basis triple `(i, j, k)` with a nonzero defect.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub triple: (usize, usize, usize),
    pub defect: Vector,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn contains(&self, triple: (usize, usize, usize)) -> bool {
        self.violations.iter().any(|v| v.triple == triple)
    }

    pub fn defect_at(&self, triple: (usize, usize, usize)) -> Option<&Vector> {
        self.violations
            .iter()
            .find(|v| v.triple == triple)
            .map(|v| &v.defect)
    }
}

/// Checks the identity on every basis triple; trilinearity of the defect
/// makes this sufficient.
pub fn leibniz_check(a: &AlgebraTable) -> ViolationReport {
    let n = a.dim();
    let basis: Vec<Vector> = (0..n).map(|i| a.basis_vector(i)).collect();
    let mut violations = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let defect = a.defect(&basis[i], &basis[j], &basis[k]);
                if !defect.is_zero() {
                    violations.push(Violation {
                        triple: (i, j, k),
                        defect,
                    });
                }
            }
        }
    }
    ViolationReport { violations }
}

/// Re-expresses the table in the basis given by the rows of `p`.
pub fn change_basis(a: &AlgebraTable, p: &[Vec<Scalar>]) -> Result<AlgebraTable> {
    let n = a.dim();
    if p.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.len(),
        });
    }
    let field = a.field();
    let inv = linalg::inverse(field, p)?;
    let rows: Vec<Vector> = p.iter().map(|r| Vector(r.clone())).collect();
    for r in &rows {
        a.check_vector(r)?;
    }
    let mut out = AlgebraTable::zero(field, a.basis.clone());
    for i in 0..n {
        for j in 0..n {
            let prod = a.mul(&rows[i], &rows[j]);
            let coords = linalg::vec_mat(field, &prod.0, &inv, n);
            out.set_product(i, j, &Vector(coords));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// File format

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub(crate) enum FieldDoc {
    Prime { p: u64 },
    Rational,
}

impl From<FieldSpec> for FieldDoc {
    fn from(f: FieldSpec) -> Self {
        match f.kind() {
            FieldKind::Prime(p) => FieldDoc::Prime { p: p as u64 },
            FieldKind::Rational => FieldDoc::Rational,
        }
    }
}

impl FieldDoc {
    pub(crate) fn to_field(&self) -> Result<FieldSpec> {
        match self {
            FieldDoc::Prime { p } => FieldSpec::prime(*p),
            FieldDoc::Rational => Ok(FieldSpec::rational()),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum ScalarDoc {
    Text(String),
    Int(i64),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct AlgebraDoc {
    pub field: FieldDoc,
    pub dim: usize,
    pub basis: Vec<String>,
    pub table: Vec<Vec<Vec<ScalarDoc>>>,
}

impl From<&AlgebraTable> for AlgebraDoc {
    fn from(a: &AlgebraTable) -> Self {
        let n = a.dim();
        AlgebraDoc {
            field: a.field().into(),
            dim: n,
            basis: a.basis_names().to_vec(),
            table: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            (0..n)
                                .map(|k| ScalarDoc::Text(a.constant(i, j, k).to_string()))
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

fn locate(text: &str, needle: &str) -> (usize, usize) {
    match text.find(needle) {
        Some(pos) => {
            let before = &text[..pos];
            let line = before.matches('\n').count() + 1;
            let column = pos - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            (line, column)
        }
        None => (1, 1),
    }
}

impl AlgebraDoc {
    pub(crate) fn into_table(self, source: &str) -> Result<AlgebraTable> {
        let field = self.field.to_field().map_err(|e| {
            let (line, column) = locate(source, "\"p\"");
            Error::Parse {
                line,
                column,
                message: e.to_string(),
            }
        })?;
        let n = self.dim;
        let mismatch = |found: usize| Error::DimensionMismatch { expected: n, found };
        if self.basis.len() != n {
            return Err(mismatch(self.basis.len()));
        }
        if self.table.len() != n {
            return Err(mismatch(self.table.len()));
        }
        let mut constants = Vec::with_capacity(n * n * n);
        for plane in &self.table {
            if plane.len() != n {
                return Err(mismatch(plane.len()));
            }
            for row in plane {
                if row.len() != n {
                    return Err(mismatch(row.len()));
                }
                for entry in row {
                    constants.push(parse_entry(field, entry, source)?);
                }
            }
        }
        AlgebraTable::new(field, self.basis, constants)
    }
}

fn parse_entry(field: FieldSpec, entry: &ScalarDoc, source: &str) -> Result<Scalar> {
    let text = match entry {
        ScalarDoc::Text(t) => t.clone(),
        ScalarDoc::Int(i) => i.to_string(),
    };
    if field.is_finite() && text.contains('/') {
        return Err(Error::FieldMismatch(field.to_string(), FieldSpec::rational().to_string()));
    }
    field.parse_scalar(&text).map_err(|e| match e {
        Error::Parse { message, .. } => {
            let (line, column) = locate(source, &format!("\"{text}\""));
            Error::Parse {
                line,
                column,
                message,
            }
        }
        other => other,
    })
}

/// JSON formatter that puts a single space after `,` and `:` and nothing else.
pub(crate) struct SpacedFormatter;

impl serde_json::ser::Formatter for SpacedFormatter {
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }
}

pub(crate) fn to_spaced_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SpacedFormatter);
    value.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(buf).expect("utf-8 json")
}

pub(crate) fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

pub fn read_algebra(bytes: &[u8]) -> Result<AlgebraTable> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 1,
        column: e.valid_up_to() + 1,
        message: "input is not UTF-8".into(),
    })?;
    let doc: AlgebraDoc = serde_json::from_str(text).map_err(json_error)?;
    doc.into_table(text)
}

/// Canonical serialization, newline-terminated.
pub fn write_algebra(a: &AlgebraTable) -> Vec<u8> {
    let mut s = to_spaced_json(&AlgebraDoc::from(a));
    s.push('\n');
    s.into_bytes()
}
