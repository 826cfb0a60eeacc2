//! Exhaustive census of structure-constant tables at a fixed (dim, GF(q)):
//! identity filtering, deduplication up to basis change, and the
//! structural assertion suite run on every isomorphism class.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraTable, FieldDoc};
use crate::classify::{self, Outcome, OutcomeKind};
use crate::error::{Error, Result};
use crate::exactfield::FieldSpec;
use crate::lattice::build_lattice;
use crate::packed::{self, GlElement, Packed};
use crate::structure;
use crate::subspaces::{induced_table, is_ideal};

/// The (q, n) pairs whose full table space is enumerated.
pub const PERMITTED: [(u32, usize); 7] = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2)];

/// Target number of prefix tasks the space is split into.
const TARGET_TASKS: u64 = 256;

fn check_budget(dim: usize, field: FieldSpec) -> Result<u32> {
    let q = field.modulus().ok_or(Error::InfiniteFieldUnsupported)?;
    if !PERMITTED.contains(&(q, dim)) {
        return Err(Error::BudgetExceeded { dim, q });
    }
    Ok(q)
}

/// One scalar equation `Σ_m c[jk,m]c[im,t] − c[ij,m]c[mk,t] − c[ik,m]c[jm,t] = 0`,
/// stored as signed index pairs.
#[derive(Clone, Debug)]
struct Equation {
    plus: Vec<(usize, usize)>,
    minus: Vec<(usize, usize)>,
}

impl Equation {
    fn holds(&self, c: &[u8], p: u32) -> bool {
        let pos: u32 = self.plus.iter().map(|&(u, v)| c[u] as u32 * c[v] as u32).sum();
        let neg: u32 = self.minus.iter().map(|&(u, v)| c[u] as u32 * c[v] as u32).sum();
        (pos + (p - 1) * neg).is_multiple_of(p)
    }
}

/// Equations grouped by the largest constant index they read, so each is
/// checked as soon as its last constant is assigned.
fn equations_by_depth(n: usize) -> Vec<Vec<Equation>> {
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    let mut by_depth = vec![Vec::new(); n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for t in 0..n {
                    let mut eq = Equation { plus: vec![], minus: vec![] };
                    for m in 0..n {
                        eq.plus.push((idx(j, k, m), idx(i, m, t)));
                        eq.minus.push((idx(i, j, m), idx(m, k, t)));
                        eq.minus.push((idx(i, k, m), idx(j, m, t)));
                    }
                    let depth = eq
                        .plus
                        .iter()
                        .chain(&eq.minus)
                        .map(|&(u, v)| u.max(v))
                        .max()
                        .unwrap();
                    by_depth[depth].push(eq);
                }
            }
        }
    }
    by_depth
}

/// A share of the table space: prefix tasks `index, index + count, …`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Partition {
    pub index: usize,
    pub count: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumStats {
    /// Raw tables covered, pruned ones included.
    pub raw: u64,
    /// Tables passing the identity.
    pub valid: u64,
}

impl std::ops::AddAssign for EnumStats {
    fn add_assign(&mut self, o: Self) {
        self.raw += o.raw;
        self.valid += o.valid;
    }
}

struct Search<'a> {
    n: usize,
    q: u32,
    total: usize,
    eqs: &'a [Vec<Equation>],
}

impl Search<'_> {
    fn prefix_len(&self) -> usize {
        let mut k = 0;
        while k < self.total && (self.q as u64).pow(k as u32) < TARGET_TASKS {
            k += 1;
        }
        k
    }

    fn pow(&self, e: usize) -> u64 {
        (self.q as u64).pow(e as u32)
    }

    /// Runs one prefix task; `visit` sees every identity-valid table.
    fn run_prefix<F: FnMut(&[u8])>(&self, prefix: u64, k: usize, visit: &mut F) -> EnumStats {
        let mut c = vec![0u8; self.total];
        let mut rest = prefix;
        for slot in c[..k].iter_mut().rev() {
            *slot = (rest % self.q as u64) as u8;
            rest /= self.q as u64;
        }
        let mut stats = EnumStats::default();
        for d in 0..k {
            if !self.eqs[d].iter().all(|e| e.holds(&c, self.q)) {
                stats.raw = self.pow(self.total - k);
                return stats;
            }
        }
        self.descend(&mut c, k, &mut stats, visit);
        stats
    }

    fn descend<F: FnMut(&[u8])>(&self, c: &mut [u8], d: usize, stats: &mut EnumStats, visit: &mut F) {
        if d == self.total {
            stats.raw += 1;
            stats.valid += 1;
            visit(c);
            return;
        }
        for v in 0..self.q as u8 {
            c[d] = v;
            if self.eqs[d].iter().all(|e| e.holds(c, self.q)) {
                self.descend(c, d + 1, stats, visit);
            } else {
                stats.raw += self.pow(self.total - d - 1);
            }
        }
        c[d] = 0;
    }

    fn tasks(&self, partition: Option<Partition>) -> Vec<u64> {
        let k = self.prefix_len();
        let all = self.pow(k);
        match partition {
            None => (0..all).collect(),
            Some(p) => (0..all).filter(|t| (*t as usize) % p.count == p.index).collect(),
        }
    }
}

/// Streams every identity-valid table of the share to `visit`, each raw
/// constant array accounted for exactly once across all shares.
pub fn enumerate_tables<F: FnMut(AlgebraTable)>(
    dim: usize,
    field: FieldSpec,
    partition: Option<Partition>,
    mut visit: F,
) -> Result<EnumStats> {
    let q = check_budget(dim, field)?;
    if let Some(p) = partition {
        if p.count == 0 || p.index >= p.count {
            return Err(Error::MalformedSpec(format!("partition {} of {}", p.index, p.count)));
        }
    }
    let eqs = equations_by_depth(dim);
    let search = Search { n: dim, q, total: dim * dim * dim, eqs: &eqs };
    let k = search.prefix_len();
    let mut stats = EnumStats::default();
    for t in search.tasks(partition) {
        stats += search.run_prefix(t, k, &mut |c: &[u8]| visit(Packed::from_slice(c).to_table(field, search.n)));
    }
    Ok(stats)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Pass,
    Fail,
    NA,
}

impl Check {
    fn implies(hypothesis: bool, conclusion: bool) -> Self {
        match (hypothesis, conclusion) {
            (false, _) => Check::NA,
            (true, true) => Check::Pass,
            (true, false) => Check::Fail,
        }
    }

    fn iff(l: bool, r: bool) -> Self {
        if l == r {
            Check::Pass
        } else {
            Check::Fail
        }
    }
}

/// Outcomes of the per-class assertion suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertions {
    /// Nilpotent iff every maximal subalgebra is an ideal.
    pub a: Check,
    /// Unique maximal subalgebra iff cyclic and nilpotent.
    pub b: Check,
    /// Property P implies every maximal subalgebra is nilpotent and an ideal or cyclic.
    pub c: Check,
    /// Property P with dim(L/L²) ≤ 1 classifies as a case.
    pub d: Check,
    /// Solvable implies a full chain of ideals.
    pub e: Check,
    /// case1 implies every proper subalgebra is an ideal and cyclic or abelian.
    pub f: Check,
}

impl Assertions {
    pub fn iter(&self) -> impl Iterator<Item = (char, Check)> {
        [
            ('a', self.a),
            ('b', self.b),
            ('c', self.c),
            ('d', self.d),
            ('e', self.e),
            ('f', self.f),
        ]
        .into_iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub leibniz: bool,
    pub lie: bool,
    pub nilpotent: bool,
    pub nilpotent_left_normed: bool,
    pub solvable: bool,
    pub cyclic: bool,
    pub dim_l_mod_l2: usize,
    pub property_p: bool,
    pub classification: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    /// Canonical constant array, residues in flat `(i·n + j)·n + k` order.
    pub table: Vec<u8>,
    pub orbit_count: u64,
    pub flags: Flags,
    pub assertions: Option<Assertions>,
}

impl CensusRecord {
    pub fn algebra(&self, field: FieldSpec, dim: usize) -> AlgebraTable {
        Packed::from_slice(&self.table).to_table(field, dim)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusFailure {
    /// Assertion letter, or `'#'` for a conservation failure.
    pub assertion: char,
    pub table: Vec<u8>,
    pub detail: String,
}

impl fmt::Display for CensusFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {:?}: {}", self.assertion, self.table, self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub dim: usize,
    pub field: FieldSpec,
    pub raw_total: u64,
    pub valid_total: u64,
    /// Sorted by canonical table.
    pub records: Vec<CensusRecord>,
}

impl CensusReport {
    pub fn orbit_total(&self) -> u64 {
        self.records.iter().map(|r| r.orbit_count).sum()
    }

    pub fn failures(&self) -> Vec<CensusFailure> {
        let mut out = Vec::new();
        let expected_raw = (check_budget(self.dim, self.field).unwrap_or(1) as u64).pow((self.dim.pow(3)) as u32);
        if self.raw_total != expected_raw {
            out.push(CensusFailure {
                assertion: '#',
                table: vec![],
                detail: format!("raw total {} != {}", self.raw_total, expected_raw),
            });
        }
        if self.orbit_total() != self.valid_total {
            out.push(CensusFailure {
                assertion: '#',
                table: vec![],
                detail: format!("orbit counts sum to {} but {} valid tables streamed", self.orbit_total(), self.valid_total),
            });
        }
        for r in &self.records {
            if let Some(a) = &r.assertions {
                for (letter, check) in a.iter() {
                    if check == Check::Fail {
                        out.push(CensusFailure {
                            assertion: letter,
                            table: r.table.clone(),
                            detail: r.flags.classification.clone(),
                        });
                    }
                }
            }
        }
        out
    }

    /// Per assertion: (pass, fail, not applicable) counts.
    pub fn assertion_summary(&self) -> BTreeMap<char, (usize, usize, usize)> {
        let mut out = BTreeMap::new();
        for r in &self.records {
            if let Some(a) = &r.assertions {
                for (letter, check) in a.iter() {
                    let e = out.entry(letter).or_insert((0, 0, 0));
                    match check {
                        Check::Pass => e.0 += 1,
                        Check::Fail => e.1 += 1,
                        Check::NA => e.2 += 1,
                    }
                }
            }
        }
        out
    }

    pub fn count_by_outcome(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for r in &self.records {
            let key = r.flags.classification.split(['(', ':']).next().unwrap_or("").to_string();
            *out.entry(key).or_insert(0) += 1;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusOptions {
    pub workers: usize,
    pub assertions: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            workers: 1,
            assertions: true,
        }
    }
}

/// Orbit size when `c` is the least element of its orbit, else `None`.
fn canonical_orbit_size(c: &Packed, n: usize, p: u8, group: &[GlElement]) -> Option<u64> {
    for g in group {
        if packed::transform(c, n, p, g) < *c {
            return None;
        }
    }
    Some(packed::orbit(c, n, p, group).len() as u64)
}

fn analyze(a: &AlgebraTable, assertions: bool) -> Result<(Flags, Option<Assertions>)> {
    let lattice = build_lattice(a)?;
    let nilpotent = structure::is_nilpotent(a)?;
    let solvable = structure::is_solvable(a)?;
    let cyclic = structure::find_cyclic_generator(a)?.is_some();
    let codim = structure::codim_derived(a);
    let property_p = lattice.property_p().holds;
    let verdict = classify::classify(a)?;
    let flags = Flags {
        leibniz: a.is_leibniz(),
        lie: a.is_lie(),
        nilpotent,
        nilpotent_left_normed: structure::is_left_nilpotent(a)?,
        solvable,
        cyclic,
        dim_l_mod_l2: codim,
        property_p,
        classification: verdict.outcome.to_string(),
    };
    if !assertions {
        return Ok((flags, None));
    }
    let maximal_ok = lattice.maximal.iter().all(|m| {
        let t = induced_table(a, m).expect("subalgebra");
        structure::is_nilpotent(&t).unwrap() && (is_ideal(a, m).unwrap() || structure::find_cyclic_generator(&t).unwrap().is_some())
    });
    let corollary = || {
        lattice.subalgebras.iter().filter(|s| !s.is_full()).all(|s| {
            let t = induced_table(a, s).expect("subalgebra");
            is_ideal(a, s).unwrap()
                && (structure::find_cyclic_generator(&t).unwrap().is_some() || t.constants().iter().all(|x| x.is_zero()))
        })
    };
    let is_case1 = verdict.outcome == Outcome::Case1;
    let checks = Assertions {
        a: Check::iff(nilpotent, lattice.nilpotency_via_maximal()),
        b: Check::iff(lattice.maximal.len() == 1, cyclic && nilpotent),
        c: Check::implies(property_p, maximal_ok),
        d: Check::implies(
            property_p && codim <= 1,
            verdict.outcome.is_case() && verdict.outcome.kind() != OutcomeKind::Anomaly,
        ),
        e: Check::implies(solvable, lattice.ideal_chain().is_some()),
        f: Check::implies(is_case1, is_case1 && corollary()),
    };
    Ok((flags, Some(checks)))
}

/// Full census: enumeration, deduplication by orbit minimum and the
/// per-class analysis. Output is independent of the worker count.
pub fn run_census(dim: usize, field: FieldSpec, options: CensusOptions) -> Result<CensusReport> {
    let q = check_budget(dim, field)?;
    let p = q as u8;
    let group = packed::gl_elements(dim, p)?;
    let eqs = equations_by_depth(dim);
    let search = Search { n: dim, q, total: dim * dim * dim, eqs: &eqs };
    let k = search.prefix_len();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.max(1))
        .build()
        .map_err(|e| Error::MalformedSpec(format!("thread pool: {e}")))?;
    let (stats, classes) = pool.install(|| {
        search
            .tasks(None)
            .into_par_iter()
            .map(|t| {
                let mut found: BTreeMap<Packed, u64> = BTreeMap::new();
                let stats = search.run_prefix(t, k, &mut |c: &[u8]| {
                    let packed = Packed::from_slice(c);
                    if let Some(size) = canonical_orbit_size(&packed, dim, p, &group) {
                        found.insert(packed, size);
                    }
                });
                (stats, found)
            })
            .reduce(
                || (EnumStats::default(), BTreeMap::new()),
                |(mut s1, mut m1), (s2, m2)| {
                    s1 += s2;
                    m1.extend(m2);
                    (s1, m1)
                },
            )
    });
    let records: Result<Vec<CensusRecord>> = pool.install(|| {
        classes
            .into_iter()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(packed, orbit_count)| {
                let a = packed.to_table(field, dim);
                a.require_leibniz()?;
                let (flags, assertions) = analyze(&a, options.assertions)?;
                Ok(CensusRecord {
                    table: packed.0[..dim * dim * dim].to_vec(),
                    orbit_count,
                    flags,
                    assertions,
                })
            })
            .collect()
    });
    Ok(CensusReport {
        dim,
        field,
        raw_total: stats.raw,
        valid_total: stats.valid,
        records: records?,
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    dim: usize,
    field: FieldDoc,
    raw_total: u64,
    valid_total: u64,
    classes: usize,
}

/// Header line, then one record per line.
pub fn report_to_string(report: &CensusReport) -> String {
    let header = Header {
        dim: report.dim,
        field: report.field.into(),
        raw_total: report.raw_total,
        valid_total: report.valid_total,
        classes: report.records.len(),
    };
    let mut out = serde_json::to_string(&header).expect("header serializes");
    out.push('\n');
    for r in &report.records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn save_report(report: &CensusReport, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(report_to_string(report).as_bytes())?;
    Ok(())
}

pub fn report_from_str(text: &str) -> Result<CensusReport> {
    let schema = |line: usize, message: String| Error::Schema { line, message };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines.next().ok_or_else(|| schema(1, "missing header".into()))?;
    let header: Header = serde_json::from_str(first).map_err(|e| schema(1, e.to_string()))?;
    let field = header.field.to_field().map_err(|e| schema(1, e.to_string()))?;
    let p = field.modulus().ok_or_else(|| schema(1, "census field must be finite".into()))?;
    let mut records = Vec::with_capacity(header.classes);
    for (line, text) in lines {
        if text.is_empty() {
            continue;
        }
        let r: CensusRecord = serde_json::from_str(text).map_err(|e| schema(line, e.to_string()))?;
        if r.table.len() != header.dim.pow(3) {
            return Err(schema(
                line,
                format!("table has {} constants, header dim {} needs {}", r.table.len(), header.dim, header.dim.pow(3)),
            ));
        }
        if r.table.iter().any(|&v| v as u32 >= p) {
            return Err(schema(line, format!("residue out of range for GF({p})")));
        }
        records.push(r);
    }
    if records.len() != header.classes {
        return Err(schema(
            text.lines().count() + 1,
            format!("header announces {} classes, found {}", header.classes, records.len()),
        ));
    }
    Ok(CensusReport {
        dim: header.dim,
        field,
        raw_total: header.raw_total,
        valid_total: header.valid_total,
        records,
    })
}

pub fn load_report(path: &Path) -> Result<CensusReport> {
    report_from_str(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn dim_one_gf2() {
        let mut seen = vec![];
        let stats = enumerate_tables(1, gf(2), None, |a| seen.push(a)).unwrap();
        assert_eq!(stats, EnumStats { raw: 2, valid: 1 });
        assert!(seen[0].constants()[0].is_zero());
    }

    #[test]
    fn pruned_enumeration_matches_brute_force() {
        let f2 = gf(2);
        let mut valid = 0;
        for bits in 0u32..256 {
            let c: Vec<u8> = (0..8).map(|i| ((bits >> (7 - i)) & 1) as u8).collect();
            if Packed::from_slice(&c).to_table(f2, 2).is_leibniz() {
                valid += 1;
            }
        }
        let stats = enumerate_tables(2, f2, None, |_| {}).unwrap();
        assert_eq!(stats.raw, 256);
        assert_eq!(stats.valid, valid);
    }

    #[test]
    fn partitions_cover_everything_once() {
        let f3 = gf(3);
        let whole = enumerate_tables(2, f3, None, |_| {}).unwrap();
        assert_eq!(whole.raw, 6561);
        let mut sum = EnumStats::default();
        for index in 0..5 {
            sum += enumerate_tables(2, f3, Some(Partition { index, count: 5 }), |_| {}).unwrap();
        }
        assert_eq!(sum, whole);
    }

    #[test]
    fn budget_guard() {
        assert!(matches!(enumerate_tables(3, gf(3), None, |_| {}), Err(Error::BudgetExceeded { dim: 3, q: 3 })));
        assert!(matches!(run_census(4, gf(2), CensusOptions::default()), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn dim_two_gf2_census() {
        let report = run_census(2, gf(2), CensusOptions::default()).unwrap();
        assert_eq!(report.orbit_total(), report.valid_total);
        let mut in_scope: Vec<&str> = report
            .records
            .iter()
            .filter(|r| r.flags.property_p && r.flags.dim_l_mod_l2 <= 1)
            .map(|r| r.flags.classification.split(':').next().unwrap())
            .collect();
        in_scope.sort();
        assert_eq!(in_scope, vec!["anomaly", "case2", "case6"]);
        // the cyclic non-nilpotent plane a·a² = a² has property P but is not listed
        let failures = report.failures();
        assert_eq!(failures.len(), 1, "{failures:?}");
        assert_eq!(failures[0].assertion, 'd');
        let a = Packed::from_slice(&failures[0].table).to_table(gf(2), 2);
        let gen = structure::find_cyclic_generator(&a).unwrap().unwrap();
        let sq = a.mul(&gen, &gen);
        assert_eq!(a.mul(&gen, &sq), sq);
        assert!(!structure::is_nilpotent(&a).unwrap());
    }

    #[test]
    fn report_round_trip_and_schema_errors() {
        let report = run_census(2, gf(2), CensusOptions::default()).unwrap();
        let text = report_to_string(&report);
        assert_eq!(report_from_str(&text).unwrap(), report);
        let truncated: String = text.lines().take(3).map(|l| format!("{l}\n")).collect();
        assert!(matches!(report_from_str(&truncated), Err(Error::Schema { .. })));
        let cut = &text[..text.len() - 10];
        let Err(Error::Schema { line, .. }) = report_from_str(cut) else {
            panic!("expected schema error");
        };
        assert_eq!(line, text.lines().count());
        let bad_dim = text.replacen("\"dim\":2", "\"dim\":3", 1);
        assert!(matches!(report_from_str(&bad_dim), Err(Error::Schema { line: 2, .. })));
    }
}
