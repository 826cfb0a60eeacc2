//! Byte-packed structure constants over GF(p), p ≤ 7, and the GL(n, p)
//! orbit machinery behind canonical forms and the census.

use std::collections::HashSet;

use crate::algebra::AlgebraTable;
use crate::error::{Error, Result};
use crate::exactfield::{FieldSpec, Scalar};

/// Largest number of constants a packed table holds (dim 4).
pub const MAX_PACKED: usize = 64;

/// Orbit budget: the largest group enumerated, |GL(4, 2)|.
pub const ORBIT_BUDGET: u64 = 20_160;

/// Residues `c[(i·n + j)·n + k]`; entries past `n³` stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Packed(pub [u8; MAX_PACKED]);

impl Packed {
    pub fn from_slice(c: &[u8]) -> Self {
        let mut out = [0u8; MAX_PACKED];
        out[..c.len()].copy_from_slice(c);
        Packed(out)
    }

    pub fn from_table(a: &AlgebraTable) -> Result<Self> {
        if a.dim() > 4 {
            return Err(Error::DimensionGuard { dim: a.dim(), limit: 4 });
        }
        let p = a.field().modulus().ok_or(Error::InfiniteFieldUnsupported)?;
        if p > 7 {
            return Err(Error::FieldGuard { p, limit: 7 });
        }
        let c: Vec<u8> = a
            .constants()
            .iter()
            .map(|s| s.residue().expect("prime field") as u8)
            .collect();
        Ok(Self::from_slice(&c))
    }

    pub fn to_table(&self, field: FieldSpec, n: usize) -> AlgebraTable {
        let constants: Vec<Scalar> = self.0[..n * n * n]
            .iter()
            .map(|&v| field.residue(v as u32))
            .collect();
        AlgebraTable::new(field, AlgebraTable::default_names(n), constants).expect("well-formed packed table")
    }
}

/// `|GL(n, q)| = ∏ (qⁿ − qⁱ)`.
pub fn gl_order(n: usize, q: u64) -> u64 {
    let qn = q.pow(n as u32);
    (0..n).map(|i| qn - q.pow(i as u32)).product()
}

/// An invertible matrix and its inverse, row-major `n × n`.
#[derive(Clone, Debug)]
pub struct GlElement {
    pub matrix: Vec<u8>,
    pub inverse: Vec<u8>,
}

fn invert_mod(m: &[u8], n: usize, p: u8) -> Option<Vec<u8>> {
    let p32 = p as u32;
    let inv_of = |a: u32| (1..p32).find(|b| a * b % p32 == 1).unwrap();
    let w = 2 * n;
    let mut aug: Vec<u32> = vec![0; n * w];
    for i in 0..n {
        for j in 0..n {
            aug[i * w + j] = m[i * n + j] as u32;
        }
        aug[i * w + n + i] = 1;
    }
    for col in 0..n {
        let pivot = (col..n).find(|&r| aug[r * w + col] != 0)?;
        if pivot != col {
            for j in 0..w {
                aug.swap(pivot * w + j, col * w + j);
            }
        }
        let inv = inv_of(aug[col * w + col]);
        for j in 0..w {
            aug[col * w + j] = aug[col * w + j] * inv % p32;
        }
        for r in 0..n {
            if r != col && aug[r * w + col] != 0 {
                let f = aug[r * w + col];
                for j in 0..w {
                    aug[r * w + j] = (aug[r * w + j] + (p32 - f) * aug[col * w + j]) % p32;
                }
            }
        }
    }
    Some(
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| aug[i * w + n + j] as u8)
            .collect(),
    )
}

/// All of GL(n, p) in lexicographic order of the row-major entries.
pub fn gl_elements(n: usize, p: u8) -> Result<Vec<GlElement>> {
    let size = gl_order(n, p as u64);
    if size > ORBIT_BUDGET {
        return Err(Error::OrbitBudgetExceeded { dim: n, q: p as u32, size });
    }
    let total = (p as u64).pow((n * n) as u32);
    let mut out = Vec::with_capacity(size as usize);
    for idx in 0..total {
        let mut m = vec![0u8; n * n];
        let mut rest = idx;
        for slot in m.iter_mut().rev() {
            *slot = (rest % p as u64) as u8;
            rest /= p as u64;
        }
        if let Some(inverse) = invert_mod(&m, n, p) {
            out.push(GlElement { matrix: m, inverse });
        }
    }
    debug_assert_eq!(out.len() as u64, size);
    Ok(out)
}

/// The table in the basis given by the rows of `g.matrix`:
/// `c'ᵢⱼ = (Σ_{r,s} Pᵢᵣ Pⱼₛ c_{rs}) P⁻¹`.
pub fn transform(c: &Packed, n: usize, p: u8, g: &GlElement) -> Packed {
    let p32 = p as u32;
    let (pm, pinv) = (&g.matrix, &g.inverse);
    let mut t1 = [0u32; MAX_PACKED];
    // t1[i][s][t] = Σ_r P[i][r] c[r][s][t]
    for i in 0..n {
        for r in 0..n {
            let f = pm[i * n + r] as u32;
            if f == 0 {
                continue;
            }
            for st in 0..n * n {
                t1[i * n * n + st] += f * c.0[r * n * n + st] as u32;
            }
        }
    }
    let mut t2 = [0u32; MAX_PACKED];
    // t2[i][j][t] = Σ_s P[j][s] t1[i][s][t]
    for i in 0..n {
        for j in 0..n {
            for s in 0..n {
                let f = pm[j * n + s] as u32;
                if f == 0 {
                    continue;
                }
                for t in 0..n {
                    t2[(i * n + j) * n + t] += f * (t1[(i * n + s) * n + t] % p32);
                }
            }
        }
    }
    let mut out = [0u8; MAX_PACKED];
    for ij in 0..n * n {
        for u in 0..n {
            let mut acc = 0u32;
            for t in 0..n {
                acc += (t2[ij * n + t] % p32) * pinv[t * n + u] as u32;
            }
            out[ij * n + u] = (acc % p32) as u8;
        }
    }
    Packed(out)
}

/// Orbit minimum and the index of a group element realizing it.
pub fn orbit_minimum(c: &Packed, n: usize, p: u8, group: &[GlElement]) -> (Packed, usize) {
    let mut best = *c;
    let mut best_idx = usize::MAX;
    for (idx, g) in group.iter().enumerate() {
        let t = transform(c, n, p, g);
        if best_idx == usize::MAX || t < best {
            best = t;
            best_idx = idx;
        }
    }
    (best, best_idx)
}

/// The full orbit as a set.
pub fn orbit(c: &Packed, n: usize, p: u8, group: &[GlElement]) -> HashSet<Packed> {
    group.iter().map(|g| transform(c, n, p, g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::change_basis;

    #[test]
    fn gl_orders() {
        assert_eq!(gl_order(3, 2), (8 - 1) * (8 - 2) * (8 - 4));
        assert_eq!(gl_elements(3, 2).unwrap().len(), 168);
        assert_eq!(gl_elements(2, 3).unwrap().len(), 48);
        assert_eq!(gl_elements(1, 5).unwrap().len(), 4);
        assert!(matches!(gl_elements(3, 5), Err(Error::OrbitBudgetExceeded { .. })));
    }

    #[test]
    fn transform_agrees_with_exact_change_of_basis() {
        let f3 = FieldSpec::prime(3).unwrap();
        // arbitrary (not necessarily Leibniz) table
        let c: Vec<u8> = (0..8).map(|i| (i * 7 % 3) as u8).collect();
        let packed = Packed::from_slice(&c);
        let table = packed.to_table(f3, 2);
        for g in gl_elements(2, 3).unwrap() {
            let pm: Vec<Vec<Scalar>> = (0..2)
                .map(|i| (0..2).map(|j| f3.residue(g.matrix[i * 2 + j] as u32)).collect())
                .collect();
            let exact = change_basis(&table, &pm).unwrap();
            assert_eq!(Packed::from_table(&exact).unwrap(), transform(&packed, 2, 3, &g));
        }
    }
}
