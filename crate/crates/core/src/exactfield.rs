//! Exact scalars over prime fields GF(p) and the rationals.
//!
//! A [`Scalar`] carries enough of its field to do arithmetic on its own: a
//! residue remembers its modulus, a rational is a reduced `BigRational`.
//! Mixing fields is a programming error for the operator impls (they panic)
//! and a recoverable [`Error::FieldMismatch`] for the `checked_*` methods.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest admissible modulus (exclusive).
pub const MAX_MODULUS: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    Prime(u32),
    Rational,
}

/// Descriptor of the ground field. Prime moduli are validated on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    kind: FieldKind,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS || !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        Ok(FieldSpec {
            kind: FieldKind::Prime(p as u32),
        })
    }

    pub fn rational() -> Self {
        FieldSpec {
            kind: FieldKind::Rational,
        }
    }

    /// Builds a field from a kind name (`"prime"` or `"rational"`) and an optional modulus.
    pub fn from_descriptor(kind: &str, p: Option<u64>) -> Result<Self> {
        match (kind, p) {
            ("prime", Some(p)) => Self::prime(p),
            ("prime", None) => Err(Error::UnsupportedKind("prime field without modulus".into())),
            ("rational", None) => Ok(Self::rational()),
            ("rational", Some(_)) => Err(Error::UnsupportedKind("rational field with modulus".into())),
            (other, _) => Err(Error::UnsupportedKind(other.to_string())),
        }
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// The modulus for prime fields, `None` for the rationals.
    pub fn modulus(&self) -> Option<u32> {
        match self.kind {
            FieldKind::Prime(p) => Some(p),
            FieldKind::Rational => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.modulus().is_some()
    }

    pub fn characteristic(&self) -> u32 {
        self.modulus().unwrap_or(0)
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self.kind {
            FieldKind::Prime(p) => Scalar(Repr::Mod {
                value: n.rem_euclid(p as i64) as u32,
                modulus: p,
            }),
            FieldKind::Rational => Scalar(Repr::Rat(BigRational::from_integer(BigInt::from(n)))),
        }
    }

    /// Residue `value mod p`; only meaningful for prime fields.
    pub fn residue(&self, value: u32) -> Scalar {
        match self.kind {
            FieldKind::Prime(p) => Scalar(Repr::Mod {
                value: value % p,
                modulus: p,
            }),
            FieldKind::Rational => self.from_i64(value as i64),
        }
    }

    pub fn rational_value(&self, numer: i64, denom: i64) -> Result<Scalar> {
        if denom == 0 {
            return Err(Error::DivisionByZero);
        }
        match self.kind {
            FieldKind::Rational => Ok(Scalar(Repr::Rat(BigRational::new(numer.into(), denom.into())))),
            FieldKind::Prime(_) => self.from_i64(numer).checked_div(&self.from_i64(denom)),
        }
    }

    /// All elements in residue order; `None` over the rationals.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        self.modulus()
            .map(|p| (0..p).map(|v| self.residue(v)).collect())
    }

    /// Number of elements, `None` if infinite.
    pub fn order(&self) -> Option<u64> {
        self.modulus().map(u64::from)
    }

    /// Parses a scalar in the text encoding: decimal residue for GF(p),
    /// `n` or `n/d` for the rationals.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let bad = |m: String| Error::Parse {
            line: 0,
            column: 0,
            message: m,
        };
        let text = text.trim();
        match self.kind {
            FieldKind::Prime(p) => {
                let v: u64 = text
                    .parse()
                    .map_err(|_| bad(format!("invalid residue `{text}`")))?;
                if v >= p as u64 {
                    return Err(bad(format!("residue {v} not in [0, {p})")));
                }
                Ok(self.residue(v as u32))
            }
            FieldKind::Rational => {
                let (n, d) = match text.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (text, "1"),
                };
                let n: BigInt = n
                    .parse()
                    .map_err(|_| bad(format!("invalid rational `{text}`")))?;
                let d: BigInt = d
                    .parse()
                    .map_err(|_| bad(format!("invalid rational `{text}`")))?;
                if !d.is_positive() {
                    return Err(bad(format!("denominator must be positive in `{text}`")));
                }
                if !n.gcd(&d).is_one() {
                    return Err(bad(format!("rational `{text}` is not reduced")));
                }
                Ok(Scalar(Repr::Rat(BigRational::new(n, d))))
            }
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        s.field() == *self
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FieldKind::Prime(p) => write!(f, "GF({p})"),
            FieldKind::Rational => write!(f, "Q"),
        }
    }
}

/// Command-line style descriptors: `gf:p` or `q`.
impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") || s.eq_ignore_ascii_case("rational") {
            return Ok(FieldSpec::rational());
        }
        if let Some(p) = s.strip_prefix("gf:").or_else(|| s.strip_prefix("GF:")) {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::UnsupportedKind(s.to_string()))?;
            return FieldSpec::prime(p);
        }
        Err(Error::UnsupportedKind(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Mod { value: u32, modulus: u32 },
    Rat(BigRational),
}

/// An exact field element in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match &self.0 {
            Repr::Mod { modulus, .. } => FieldSpec {
                kind: FieldKind::Prime(*modulus),
            },
            Repr::Rat(_) => FieldSpec::rational(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Mod { value, .. } => *value == 0,
            Repr::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Mod { value, .. } => *value == 1,
            Repr::Rat(r) => r.is_one(),
        }
    }

    /// Residue in `[0, p)` for prime-field scalars.
    pub fn residue(&self) -> Option<u32> {
        match &self.0 {
            Repr::Mod { value, .. } => Some(*value),
            Repr::Rat(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rat(r) => Some(r),
            Repr::Mod { .. } => None,
        }
    }

    pub fn from_rational(r: BigRational) -> Scalar {
        Scalar(Repr::Rat(r))
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch(
                self.field().to_string(),
                other.field().to_string(),
            ))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Mod { value: a, modulus: p }, Repr::Mod { value: b, .. }) => Scalar(Repr::Mod {
                value: (a + b) % p,
                modulus: *p,
            }),
            (Repr::Rat(a), Repr::Rat(b)) => Scalar(Repr::Rat(a + b)),
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Mod { value: a, modulus: p }, Repr::Mod { value: b, .. }) => Scalar(Repr::Mod {
                value: (a * b) % p,
                modulus: *p,
            }),
            (Repr::Rat(a), Repr::Rat(b)) => Scalar(Repr::Rat(a * b)),
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        self.checked_mul(&other.inv()?)
    }

    fn neg_ref(&self) -> Scalar {
        match &self.0 {
            Repr::Mod { value, modulus } => Scalar(Repr::Mod {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            }),
            Repr::Rat(r) => Scalar(Repr::Rat(-r)),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Mod { value, modulus } => {
                // Fermat: a^(p-2)
                let p = *modulus as u64;
                let (mut base, mut exp, mut acc) = (*value as u64, p - 2, 1u64);
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % p;
                    }
                    base = base * base % p;
                    exp >>= 1;
                }
                Scalar(Repr::Mod {
                    value: acc as u32,
                    modulus: *modulus,
                })
            }
            Repr::Rat(r) => Scalar(Repr::Rat(r.recip())),
        })
    }

    /// Single entry point for the binary and unary field operations; the
    /// second operand is ignored by `Neg` and `Inv`.
    pub fn apply(&self, other: &Scalar, op: FieldOp) -> Result<Scalar> {
        match op {
            FieldOp::Add => self.checked_add(other),
            FieldOp::Sub => self.checked_sub(other),
            FieldOp::Mul => self.checked_mul(other),
            FieldOp::Div => self.checked_div(other),
            FieldOp::Neg => Ok(self.neg_ref()),
            FieldOp::Inv => self.inv(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Scalar {
        let mut acc = self.field().one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Mod { value, .. } => write!(f, "{value}"),
            Repr::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Residue order within GF(p), numeric order within Q; prime fields sort
/// before the rationals so the order is total.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Mod { value: a, modulus: p }, Repr::Mod { value: b, modulus: q }) => {
                p.cmp(q).then(a.cmp(b))
            }
            (Repr::Rat(a), Repr::Rat(b)) => a.cmp(b),
            (Repr::Mod { .. }, Repr::Rat(_)) => Ordering::Less,
            (Repr::Rat(_), Repr::Mod { .. }) => Ordering::Greater,
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect("scalars from different fields")
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Roots of `α² + sα + e` in the field, sorted ascending and without repeats.
///
/// Prime fields are scanned exhaustively; over Q the discriminant is tested
/// for being a rational square. Every returned root is re-evaluated.
pub fn quadratic_roots(s: &Scalar, e: &Scalar, field: FieldSpec) -> Vec<Scalar> {
    let eval = |a: &Scalar| &(&(a * a) + &(s * a)) + e;
    let mut roots = match field.kind() {
        FieldKind::Prime(_) => field
            .elements()
            .unwrap_or_default()
            .into_iter()
            .filter(|a| eval(a).is_zero())
            .collect::<Vec<_>>(),
        FieldKind::Rational => {
            let s_r = s.as_rational().expect("rational scalar");
            let e_r = e.as_rational().expect("rational scalar");
            let four = BigRational::from_integer(4.into());
            let two = BigRational::from_integer(2.into());
            let disc = s_r * s_r - &four * e_r;
            match rational_sqrt(&disc) {
                None => Vec::new(),
                Some(root) => vec![
                    Scalar::from_rational((-s_r - &root) / &two),
                    Scalar::from_rational((-s_r + &root) / &two),
                ],
            }
        }
    };
    roots.sort();
    roots.dedup();
    debug_assert!(roots.iter().all(|a| eval(a).is_zero()));
    roots
}
