//! Constructors for the named algebras, completed with the products the
//! identity forces, and exhaustive parameter audits.
//!
//! Constructors never repair parameters: a table is returned even when it
//! fails the identity, and [`audit`] is how one finds out which tuples work.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{AlgebraTable, Vector};
use crate::error::{Error, Result};
use crate::exactfield::{FieldSpec, Scalar};
use crate::lattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyName {
    Case2,
    Case3,
    Case4,
    Case5,
    Case6,
    Cyclic,
    CrossLie,
    CrossExtension,
}

impl FamilyName {
    pub const ALL: [FamilyName; 8] = [
        FamilyName::Case2,
        FamilyName::Case3,
        FamilyName::Case4,
        FamilyName::Case5,
        FamilyName::Case6,
        FamilyName::Cyclic,
        FamilyName::CrossLie,
        FamilyName::CrossExtension,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FamilyName::Case2 => "case2",
            FamilyName::Case3 => "case3",
            FamilyName::Case4 => "case4",
            FamilyName::Case5 => "case5",
            FamilyName::Case6 => "case6",
            FamilyName::Cyclic => "cyclic",
            FamilyName::CrossLie => "cross_lie",
            FamilyName::CrossExtension => "cross_extension",
        }
    }

    /// Names of the scalar parameters, in tuple order.
    pub fn scalar_params(&self) -> &'static [&'static str] {
        match self {
            FamilyName::Case3 => &["c", "d", "e"],
            FamilyName::Case4 => &["c", "d"],
            _ => &[],
        }
    }

    pub fn has_integer_param(&self) -> bool {
        matches!(self, FamilyName::Cyclic | FamilyName::CrossExtension)
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::MalformedSpec(format!("unknown family `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Case2,
    Case3 { c: Scalar, d: Scalar, e: Scalar },
    Case4 { c: Scalar, d: Scalar },
    Case5,
    Case6,
    Cyclic { n: usize },
    CrossLie,
    CrossExtension { n: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub field: FieldSpec,
}

impl Family {
    pub fn name(&self) -> FamilyName {
        match self {
            Family::Case2 => FamilyName::Case2,
            Family::Case3 { .. } => FamilyName::Case3,
            Family::Case4 { .. } => FamilyName::Case4,
            Family::Case5 => FamilyName::Case5,
            Family::Case6 => FamilyName::Case6,
            Family::Cyclic { .. } => FamilyName::Cyclic,
            Family::CrossLie => FamilyName::CrossLie,
            Family::CrossExtension { .. } => FamilyName::CrossExtension,
        }
    }

    /// Instantiates a scalar-parameter family from a tuple in `scalar_params` order.
    pub fn from_tuple(name: FamilyName, tuple: &[Scalar]) -> Result<Family> {
        let arity = name.scalar_params().len();
        if name.has_integer_param() || tuple.len() != arity {
            return Err(Error::MalformedSpec(format!(
                "{name} takes {arity} scalar parameters, got {}",
                tuple.len()
            )));
        }
        Ok(match name {
            FamilyName::Case2 => Family::Case2,
            FamilyName::Case3 => Family::Case3 {
                c: tuple[0].clone(),
                d: tuple[1].clone(),
                e: tuple[2].clone(),
            },
            FamilyName::Case4 => Family::Case4 {
                c: tuple[0].clone(),
                d: tuple[1].clone(),
            },
            FamilyName::Case5 => Family::Case5,
            FamilyName::Case6 => Family::Case6,
            FamilyName::CrossLie => Family::CrossLie,
            FamilyName::Cyclic | FamilyName::CrossExtension => unreachable!(),
        })
    }

    /// Parses `key=value` parameters as given on the command line.
    pub fn from_params(name: FamilyName, field: FieldSpec, params: &[(String, String)]) -> Result<Family> {
        let lookup = |key: &str| params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let allowed: Vec<&str> = if name.has_integer_param() {
            vec!["n"]
        } else {
            name.scalar_params().to_vec()
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(Error::MalformedSpec(format!("{name} has no parameter `{k}`")));
        }
        if name.has_integer_param() {
            let n = lookup("n")
                .ok_or_else(|| Error::MalformedSpec(format!("{name} requires n")))?
                .parse::<usize>()
                .map_err(|_| Error::MalformedSpec("n must be a non-negative integer".into()))?;
            return Ok(match name {
                FamilyName::Cyclic => Family::Cyclic { n },
                _ => Family::CrossExtension { n },
            });
        }
        let tuple = name
            .scalar_params()
            .iter()
            .map(|k| match lookup(k) {
                Some(text) => field.parse_scalar(text),
                None => Ok(field.zero()),
            })
            .collect::<Result<Vec<_>>>()?;
        Family::from_tuple(name, &tuple)
    }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn vec_of(field: FieldSpec, n: usize, entries: &[(usize, Scalar)]) -> Vector {
    let mut v = Vector::zero(field, n);
    for (i, s) in entries {
        v.0[*i] = &v.0[*i] + s;
    }
    v
}

/// Builds the completed multiplication table.
pub fn build(spec: &FamilySpec) -> Result<AlgebraTable> {
    let field = spec.field;
    let one = field.one();
    for s in match &spec.family {
        Family::Case3 { c, d, e } => vec![c, d, e],
        Family::Case4 { c, d } => vec![c, d],
        _ => vec![],
    } {
        if !field.contains(s) {
            return Err(Error::FieldMismatch(field.to_string(), s.field().to_string()));
        }
    }
    let table = match &spec.family {
        Family::Case2 => {
            // basis (x, a)
            let mut t = AlgebraTable::zero(field, names(&["x", "a"]));
            t.set(1, 0, 0, one.clone());
            t.set(0, 1, 0, -&one);
            t
        }
        Family::Case3 { c, d, e } => {
            // basis (x, a, q) with q = a²
            let (x, a, q) = (0, 1, 2);
            let mut t = AlgebraTable::zero(field, names(&["x", "a", "a2"]));
            t.set(a, a, q, one.clone());
            t.set_product(a, x, &vec_of(field, 3, &[(x, one.clone()), (q, c.clone())]));
            t.set_product(x, a, &vec_of(field, 3, &[(x, -&one), (q, d.clone())]));
            t.set(x, x, q, e.clone());
            t.set(x, q, q, -(c + d));
            t
        }
        Family::Case4 { c, d } => {
            if field.characteristic() != 2 {
                return Err(Error::WrongCharacteristic("case4".into()));
            }
            // basis (x, a, q, r) with q = a², r = a³
            let (x, a, q, r) = (0, 1, 2, 3);
            let mut t = AlgebraTable::zero(field, names(&["x", "a", "a2", "a3"]));
            t.set(a, a, q, one.clone());
            t.set(a, q, r, one.clone());
            t.set_product(a, x, &vec_of(field, 4, &[(x, one.clone()), (r, c.clone())]));
            t.set_product(x, a, &vec_of(field, 4, &[(x, one.clone()), (r, d.clone())]));
            t.set(x, x, r, one.clone());
            t.set(x, q, r, c + d);
            t.set(x, r, r, c + d);
            t
        }
        Family::Case5 => AlgebraTable::zero(field, names(&["a"])),
        Family::Case6 => {
            let mut t = AlgebraTable::zero(field, names(&["a", "a2"]));
            t.set(0, 0, 1, one);
            t
        }
        Family::Cyclic { n } => {
            if *n == 0 {
                return Err(Error::MalformedSpec("cyclic requires n >= 1".into()));
            }
            let basis = (1..=*n)
                .map(|k| if k == 1 { "a".to_string() } else { format!("a{k}") })
                .collect();
            let mut t = AlgebraTable::zero(field, basis);
            for k in 0..n - 1 {
                t.set(0, k, k + 1, one.clone());
            }
            t
        }
        Family::CrossLie => cross_table(field, 0),
        Family::CrossExtension { n } => {
            if *n == 0 {
                return Err(Error::MalformedSpec("cross_extension requires n >= 1".into()));
            }
            cross_table(field, *n)
        }
    };
    Ok(table)
}

/// Cross product on (e1, e2, e3), extended by `n` vectors v1..vn with
/// `eᵢ·eᵢ = v1` and `eᵢ·vⱼ = vⱼ₊₁` (v_{n+1} = 0). `n = 0` is the Lie algebra.
fn cross_table(field: FieldSpec, n: usize) -> AlgebraTable {
    let mut basis = names(&["e1", "e2", "e3"]);
    basis.extend((1..=n).map(|i| format!("v{i}")));
    let mut t = AlgebraTable::zero(field, basis);
    let one = field.one();
    for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        t.set(i, j, k, one.clone());
        t.set(j, i, k, -&one);
    }
    if n > 0 {
        for i in 0..3 {
            t.set(i, i, 3, one.clone());
            for j in 0..n - 1 {
                t.set(i, 3 + j, 3 + j + 1, one.clone());
            }
        }
    }
    t
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditEntry {
    pub params: Vec<Scalar>,
    pub valid: bool,
    /// First violating basis triple, for invalid tuples.
    pub violation: Option<(usize, usize, usize)>,
    /// Property P verdict for valid tuples over finite fields.
    pub property_p: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidParamReport {
    pub family: FamilyName,
    pub field: FieldSpec,
    pub entries: Vec<AuditEntry>,
}

impl ValidParamReport {
    pub fn valid(&self) -> Vec<&[Scalar]> {
        self.entries.iter().filter(|e| e.valid).map(|e| e.params.as_slice()).collect()
    }

    pub fn invalid(&self) -> Vec<&AuditEntry> {
        self.entries.iter().filter(|e| !e.valid).collect()
    }

    pub fn property_p_holding(&self) -> Vec<&[Scalar]> {
        self.entries
            .iter()
            .filter(|e| e.property_p == Some(true))
            .map(|e| e.params.as_slice())
            .collect()
    }
}

fn all_tuples(field: FieldSpec, arity: usize) -> Vec<Vec<Scalar>> {
    let elements = field.elements().expect("finite field");
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                elements.iter().map(move |s| {
                    let mut t = prefix.clone();
                    t.push(s.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Classifies parameter tuples by the identity (and, over finite fields, by
/// property P). Finite fields sweep every tuple in lexicographic order;
/// the rationals need explicit `tuples`.
pub fn audit(name: FamilyName, field: FieldSpec, tuples: Option<Vec<Vec<Scalar>>>) -> Result<ValidParamReport> {
    if name.has_integer_param() {
        return Err(Error::MalformedSpec(format!("{name} has no scalar parameters to audit")));
    }
    let tuples = match tuples {
        Some(t) => t,
        None if field.is_finite() => all_tuples(field, name.scalar_params().len()),
        None => return Err(Error::InfiniteFieldSweep),
    };
    let entries = tuples
        .into_iter()
        .map(|params| {
            let table = build(&FamilySpec {
                family: Family::from_tuple(name, &params)?,
                field,
            })?;
            let violation = table.first_violation();
            let valid = violation.is_none();
            let property_p = if valid && field.is_finite() {
                Some(lattice::property_p(&table)?.holds)
            } else {
                None
            };
            Ok(AuditEntry {
                params,
                valid,
                violation,
                property_p,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ValidParamReport {
        family: name,
        field,
        entries,
    })
}
