//! Exhaustive subalgebra lattices over small prime fields.

use rayon::prelude::*;

use crate::algebra::AlgebraTable;
use crate::error::{Error, Result};
use crate::exactfield::FieldSpec;
use crate::subspaces::{is_ideal, is_subalgebra, whole, Subspace};

pub const MAX_LATTICE_DIM: usize = 8;
pub const MAX_LATTICE_PRIME: u32 = 7;

fn pivot_patterns(n: usize) -> Vec<Vec<usize>> {
    // Subsets of 0..n grouped by size, each in lexicographic order.
    let mut out = Vec::new();
    for r in 0..=n {
        let mut combo: Vec<usize> = (0..r).collect();
        loop {
            out.push(combo.clone());
            let Some(i) = (0..r).rev().find(|&i| combo[i] < n - r + i) else {
                break;
            };
            combo[i] += 1;
            for j in i + 1..r {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    out
}

/// Streams every subspace of `F^n` exactly once: each RREF pivot pattern
/// with every assignment of its free entries.
pub fn enumerate_subspaces(field: FieldSpec, n: usize) -> Result<impl Iterator<Item = Subspace>> {
    let q = field.modulus().ok_or(Error::InfiniteFieldUnsupported)?;
    if n > MAX_LATTICE_DIM {
        return Err(Error::DimensionGuard {
            dim: n,
            limit: MAX_LATTICE_DIM,
        });
    }
    Ok(pivot_patterns(n).into_iter().flat_map(move |pivots| {
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(row, &p)| {
                let pivots = pivots.clone();
                (p + 1..n)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (row, c))
            })
            .collect();
        let count = (q as u64).pow(free.len() as u32);
        (0..count).map(move |mut idx| {
            let mut rows: Vec<Vec<_>> = pivots
                .iter()
                .map(|&p| {
                    let mut r = vec![field.zero(); n];
                    r[p] = field.one();
                    r
                })
                .collect();
            for &(row, col) in &free {
                rows[row][col] = field.residue((idx % q as u64) as u32);
                idx /= q as u64;
            }
            Subspace::from_rref(field, n, rows, pivots.clone())
        })
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondMaximal {
    pub subalgebra: Subspace,
    /// Maximal subalgebras in which it is maximal.
    pub parents: Vec<Subspace>,
}

#[derive(Clone, Debug)]
pub struct SubalgebraLattice {
    pub algebra: AlgebraTable,
    pub subspace_count: usize,
    /// All subalgebras in canonical order (dimension, then rows).
    pub subalgebras: Vec<Subspace>,
    pub maximal: Vec<Subspace>,
    pub second_maximal: Vec<SecondMaximal>,
}

fn check_lattice_input(a: &AlgebraTable) -> Result<()> {
    let p = a.field().modulus().ok_or(Error::InfiniteFieldUnsupported)?;
    if p > MAX_LATTICE_PRIME {
        return Err(Error::FieldGuard {
            p,
            limit: MAX_LATTICE_PRIME,
        });
    }
    if a.dim() > MAX_LATTICE_DIM {
        return Err(Error::DimensionGuard {
            dim: a.dim(),
            limit: MAX_LATTICE_DIM,
        });
    }
    a.require_leibniz()
}

/// Maximal elements among the subalgebras properly contained in `top`.
fn maximal_below(subalgebras: &[Subspace], top: &Subspace) -> Vec<Subspace> {
    let below: Vec<&Subspace> = subalgebras
        .iter()
        .filter(|s| s.dim() < top.dim() && top.contains(s).unwrap())
        .collect();
    below
        .iter()
        .filter(|s| {
            !below
                .iter()
                .any(|t| t.dim() > s.dim() && t.contains(s).unwrap())
        })
        .map(|s| (*s).clone())
        .collect()
}

pub fn build_lattice(a: &AlgebraTable) -> Result<SubalgebraLattice> {
    check_lattice_input(a)?;
    let all: Vec<Subspace> = enumerate_subspaces(a.field(), a.dim())?.collect();
    let subspace_count = all.len();
    let mut subalgebras: Vec<Subspace> = all
        .into_par_iter()
        .filter(|s| is_subalgebra(a, s).unwrap())
        .collect();
    subalgebras.sort();
    let maximal = maximal_below(&subalgebras, &whole(a));
    let mut second: Vec<SecondMaximal> = Vec::new();
    for m in &maximal {
        for n in maximal_below(&subalgebras, m) {
            match second.iter_mut().find(|s| s.subalgebra == n) {
                Some(entry) => entry.parents.push(m.clone()),
                None => second.push(SecondMaximal {
                    subalgebra: n,
                    parents: vec![m.clone()],
                }),
            }
        }
    }
    second.sort_by(|x, y| x.subalgebra.cmp(&y.subalgebra));
    Ok(SubalgebraLattice {
        algebra: a.clone(),
        subspace_count,
        subalgebras,
        maximal,
        second_maximal: second,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyPVerdict {
    pub holds: bool,
    /// A second-maximal subalgebra that is not an ideal, with one parent.
    pub witness: Option<(Subspace, Subspace)>,
}

impl SubalgebraLattice {
    pub fn ideals(&self) -> Vec<Subspace> {
        self.subalgebras
            .iter()
            .filter(|s| is_ideal(&self.algebra, s).unwrap())
            .cloned()
            .collect()
    }

    pub fn property_p(&self) -> PropertyPVerdict {
        let witness = self
            .second_maximal
            .iter()
            .find(|s| !is_ideal(&self.algebra, &s.subalgebra).unwrap())
            .map(|s| (s.subalgebra.clone(), s.parents[0].clone()));
        PropertyPVerdict {
            holds: witness.is_none(),
            witness,
        }
    }

    /// Intersection of the maximal subalgebras (`L` itself when there are none).
    pub fn frattini(&self) -> Subspace {
        self.maximal
            .iter()
            .fold(whole(&self.algebra), |acc, m| acc.intersect(m).unwrap())
    }

    pub fn nilpotency_via_maximal(&self) -> bool {
        self.maximal.iter().all(|m| is_ideal(&self.algebra, m).unwrap())
    }

    /// A full flag `0 = I₀ ⊂ I₁ ⊂ ⋯ ⊂ Iₙ = L` of ideals with `dim Iⱼ = j`.
    pub fn ideal_chain(&self) -> Option<Vec<Subspace>> {
        let n = self.algebra.dim();
        let ideals = self.ideals();
        let mut by_dim: Vec<Vec<&Subspace>> = vec![Vec::new(); n + 1];
        for i in &ideals {
            by_dim[i.dim()].push(i);
        }
        fn extend<'a>(chain: &mut Vec<&'a Subspace>, by_dim: &[Vec<&'a Subspace>]) -> bool {
            let d = chain.len();
            if d == by_dim.len() {
                return true;
            }
            let last = *chain.last().unwrap();
            for cand in &by_dim[d] {
                if cand.contains(last).unwrap() {
                    chain.push(cand);
                    if extend(chain, by_dim) {
                        return true;
                    }
                    chain.pop();
                }
            }
            false
        }
        let zero = by_dim[0].first().copied()?;
        let mut chain = vec![zero];
        extend(&mut chain, &by_dim).then(|| chain.into_iter().cloned().collect())
    }
}

pub fn second_maximal(a: &AlgebraTable) -> Result<Vec<SecondMaximal>> {
    Ok(build_lattice(a)?.second_maximal)
}

pub fn property_p(a: &AlgebraTable) -> Result<PropertyPVerdict> {
    Ok(build_lattice(a)?.property_p())
}

pub fn frattini(a: &AlgebraTable) -> Result<Subspace> {
    Ok(build_lattice(a)?.frattini())
}

pub fn nilpotency_via_maximal(a: &AlgebraTable) -> Result<bool> {
    Ok(build_lattice(a)?.nilpotency_via_maximal())
}

pub fn ideal_chain(a: &AlgebraTable) -> Result<Option<Vec<Subspace>>> {
    Ok(build_lattice(a)?.ideal_chain())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Vector;
    use crate::families::{build, Family, FamilySpec};

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn fam(family: Family, field: FieldSpec) -> AlgebraTable {
        build(&FamilySpec { family, field }).unwrap()
    }

    fn span(a: &AlgebraTable, vs: &[Vector]) -> Subspace {
        Subspace::span(a.field(), a.dim(), vs).unwrap()
    }

    #[test]
    fn small_enumeration_counts() {
        assert_eq!(enumerate_subspaces(gf(2), 2).unwrap().count(), 5);
        assert_eq!(enumerate_subspaces(gf(2), 4).unwrap().count(), 67);
        assert_eq!(enumerate_subspaces(gf(5), 0).unwrap().count(), 1);
        assert!(matches!(
            enumerate_subspaces(gf(2), 9).err(),
            Some(Error::DimensionGuard { .. })
        ));
        assert!(matches!(
            enumerate_subspaces(FieldSpec::rational(), 2).err(),
            Some(Error::InfiniteFieldUnsupported)
        ));
    }

    #[test]
    fn enumeration_has_no_repeats() {
        let all: Vec<Subspace> = enumerate_subspaces(gf(3), 3).unwrap().collect();
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), all.len());
        for s in &all {
            assert_eq!(&Subspace::span(s.field(), 3, &s.basis()).unwrap(), s);
        }
    }

    #[test]
    fn cyclic_two_lattice() {
        let a = fam(Family::Cyclic { n: 2 }, gf(2));
        let l = build_lattice(&a).unwrap();
        let a2 = span(&a, &[a.basis_vector(1)]);
        assert_eq!(l.subalgebras, vec![Subspace::zero(gf(2), 2), a2.clone(), whole(&a)]);
        assert_eq!(l.maximal, vec![a2.clone()]);
        assert_eq!(l.frattini(), a2);
    }

    #[test]
    fn one_dimensional_lattice() {
        let a = fam(Family::Case5, gf(3));
        let l = build_lattice(&a).unwrap();
        assert_eq!(l.maximal, vec![Subspace::zero(gf(3), 1)]);
        assert!(l.second_maximal.is_empty());
        assert!(l.property_p().holds);
    }

    #[test]
    fn abelian_plane() {
        let a = AlgebraTable::zero(gf(2), AlgebraTable::default_names(2));
        let l = build_lattice(&a).unwrap();
        assert_eq!(l.maximal.len(), 3);
        assert!(l.frattini().is_zero());
        assert!(l.property_p().holds);
        assert!(l.nilpotency_via_maximal());
    }

    #[test]
    fn cyclic_three_fails_property_p() {
        let a = fam(Family::Cyclic { n: 3 }, gf(2));
        let l = build_lattice(&a).unwrap();
        let a2 = span(&a, &[a.basis_vector(1)]);
        let l2 = span(&a, &[a.basis_vector(1), a.basis_vector(2)]);
        assert!(l.second_maximal.iter().any(|s| s.subalgebra == a2));
        let verdict = l.property_p();
        assert!(!verdict.holds);
        assert_eq!(verdict.witness, Some((a2, l2)));
        assert!(l.nilpotency_via_maximal());
        let chain = l.ideal_chain().unwrap();
        let a3 = span(&a, &[a.basis_vector(2)]);
        assert_eq!(chain[1], a3);
        assert_eq!(chain[2], span(&a, &[a.basis_vector(1), a.basis_vector(2)]));
    }

    #[test]
    fn case2_maximal_not_ideal() {
        let a = fam(Family::Case2, gf(3));
        let l = build_lattice(&a).unwrap();
        assert!(l.maximal.contains(&span(&a, &[a.basis_vector(1)])));
        assert!(!l.nilpotency_via_maximal());
        let a2 = fam(Family::Case2, gf(2));
        let chain = ideal_chain(&a2).unwrap().unwrap();
        assert_eq!(chain, vec![Subspace::zero(gf(2), 2), span(&a2, &[a2.basis_vector(0)]), whole(&a2)]);
    }

    #[test]
    fn guards() {
        let a = fam(Family::Case2, gf(11));
        assert!(matches!(build_lattice(&a), Err(Error::FieldGuard { .. })));
        let q = fam(Family::Case2, FieldSpec::rational());
        assert!(matches!(build_lattice(&q), Err(Error::InfiniteFieldUnsupported)));
    }
}
