//! Lattices of small order up to isomorphism, and the exhaustive checks of
//! the extremal statements over them.
//!
//! A lattice with `n ≥ 2` elements is a meet-semilattice with zero of size
//! `n - 1` plus a new top. Semilattices are grown one maximal element at a
//! time: the new element's strict down-set must be an order ideal `D` such
//! that every old `y` has a largest element in `D ∩ ↓y` (that element is
//! the new meet). Removing a maximal element from a meet-semilattice leaves
//! a meet-semilattice, so every one is reached. Each level is deduplicated
//! by canonical form.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitMatrix;
use crate::canon;
use crate::congruence::all_congruences;
use crate::energy::congruence_energy;
use crate::error::{Error, Result};
use crate::extremal::{g_max, g_pn, g_sb};
use crate::lattice::{Lattice, Named, CANONICAL_BUDGET};

/// Default largest order for [`all_lattices`].
pub const DEFAULT_BUDGET: usize = 8;
/// No budget may exceed this.
pub const HARD_BUDGET: usize = 9;

pub fn all_lattices(n: usize) -> Result<Vec<Lattice>> {
    all_lattices_with_budget(n, DEFAULT_BUDGET)
}

/// All lattices of order `n`, one per isomorphism class, canonically
/// labeled and sorted by canonical form.
pub fn all_lattices_with_budget(n: usize, budget: usize) -> Result<Vec<Lattice>> {
    let limit = budget.min(HARD_BUDGET);
    if n == 0 {
        return Err(Error::Domain("a lattice has at least one element".into()));
    }
    if n > limit {
        return Err(Error::BudgetExceeded {
            what: "lattice order",
            value: n,
            limit,
        });
    }
    if n == 1 {
        return Ok(vec![Lattice::chain(1)]);
    }
    let mut level: BTreeMap<Vec<u8>, BitMatrix> = BTreeMap::new();
    level.insert(canon::canonical(&BitMatrix::identity(1)).form, BitMatrix::identity(1));
    for _ in 2..n {
        level = grow(&level);
    }
    let mut out: Vec<(Vec<u8>, Lattice)> = level
        .into_values()
        .map(|semi| {
            let l = Lattice::from_order(with_top(&semi)).expect("semilattice plus top is a lattice");
            let form = l.canonical_form()?;
            Ok((form, l.canonical()?))
        })
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, l)| l).collect())
}

fn masks(leq: &BitMatrix) -> (Vec<u64>, Vec<u64>) {
    let m = leq.size();
    let up: Vec<u64> = (0..m).map(|i| leq.row(i)[0]).collect();
    let mut down = vec![0u64; m];
    for (i, &row) in up.iter().enumerate() {
        for (j, d) in down.iter_mut().enumerate() {
            if row >> j & 1 == 1 {
                *d |= 1 << i;
            }
        }
    }
    (up, down)
}

fn children(leq: &BitMatrix) -> Vec<(Vec<u8>, BitMatrix)> {
    let m = leq.size();
    let (_, down) = masks(leq);
    let mut out = Vec::new();
    for d in 1u64..(1 << m) {
        // order ideal: closed under going down
        if (0..m).any(|i| d >> i & 1 == 1 && down[i] & !d != 0) {
            continue;
        }
        let has_meets = (0..m).all(|y| {
            let s = d & down[y];
            (0..m).any(|t| s >> t & 1 == 1 && s & !down[t] == 0)
        });
        if !has_meets {
            continue;
        }
        let mut next = BitMatrix::new(m + 1);
        for i in 0..m {
            for j in leq.row_iter(i) {
                next.set(i, j);
            }
            if d >> i & 1 == 1 {
                next.set(i, m);
            }
        }
        next.set(m, m);
        out.push((canon::canonical(&next).form, next));
    }
    out
}

fn grow(level: &BTreeMap<Vec<u8>, BitMatrix>) -> BTreeMap<Vec<u8>, BitMatrix> {
    let found: Vec<Vec<(Vec<u8>, BitMatrix)>> = level.par_iter().map(|(_, leq)| children(leq)).collect();
    let mut next = BTreeMap::new();
    for (form, leq) in found.into_iter().flatten() {
        next.entry(form).or_insert(leq);
    }
    next
}

fn with_top(semi: &BitMatrix) -> BitMatrix {
    let m = semi.size();
    let mut leq = BitMatrix::new(m + 1);
    for i in 0..m {
        for j in semi.row_iter(i) {
            leq.set(i, j);
        }
        leq.set(i, m);
    }
    leq.set(m, m);
    leq
}

/// Elements comparable with every element, from the bottom up.
pub fn cut_points(l: &Lattice) -> Vec<usize> {
    let n = l.len();
    let mut cuts: Vec<usize> = (0..n).filter(|&c| (0..n).all(|x| l.comparable(c, x))).collect();
    cuts.sort_by_key(|&c| (0..n).filter(|&x| l.leq(x, c)).count());
    cuts
}

/// The intervals between consecutive cut points; `l` is their glued sum.
/// Each component is a two-element chain or has no cut points but its ends.
pub fn glued_components(l: &Lattice) -> Vec<Lattice> {
    cut_points(l)
        .windows(2)
        .map(|w| sublattice(l, &l.interval(w[0], w[1])))
        .collect()
}

fn sublattice(l: &Lattice, elements: &[usize]) -> Lattice {
    let mut pos = vec![usize::MAX; l.len()];
    for (p, &e) in elements.iter().enumerate() {
        pos[e] = p;
    }
    let covers: Vec<_> = l
        .covers()
        .iter()
        .filter(|&&(a, b)| pos[a] != usize::MAX && pos[b] != usize::MAX)
        .map(|&(a, b)| (pos[a], pos[b]))
        .collect();
    Lattice::from_covers(elements.len(), &covers).expect("an interval is a lattice")
}

/// `C′ ∔ core ∔ C″` for chains: exactly one component is not a covering
/// pair, and it is isomorphic to `core`.
fn is_glued_shape(l: &Lattice, core: &Lattice) -> bool {
    let mut big = glued_components(l).into_iter().filter(|c| c.len() > 2);
    match (big.next(), big.next()) {
        (Some(c), None) => {
            c.len() == core.len()
                && c.covers().len() == core.covers().len()
                && Lattice::are_isomorphic(&c, core).unwrap_or(false)
        }
        _ => false,
    }
}

/// Glued-B4 shape by explicit decomposition.
pub fn is_glued_b4_shape(l: &Lattice) -> bool {
    is_glued_shape(l, &Lattice::named(Named::B4))
}

/// Glued-B4 shape read off the count of two-element antichains.
pub fn is_glued_b4_by_antichains(l: &Lattice) -> bool {
    l.count_two_element_antichains() == 1
}

pub fn is_glued_n5_shape(l: &Lattice) -> bool {
    is_glued_shape(l, &Lattice::named(Named::N5))
}

/// Every placement `chain(a) ∔ core ∔ chain(b)` with `a, b ≥ 1` of total size `n`.
pub fn glued_placements(core: &Lattice, n: usize) -> Vec<Lattice> {
    if n < core.len() {
        return Vec::new();
    }
    let extra = n - core.len();
    (0..=extra)
        .map(|below| {
            Lattice::glued_sum_all(&[
                Lattice::chain(below + 1),
                core.clone(),
                Lattice::chain(extra - below + 1),
            ])
        })
        .collect()
}

/// Isomorphism classes of `C′ ∔ B4 ∔ C″` with `n` elements.
pub fn glued_b4_count(n: usize) -> Result<usize> {
    if n < 4 {
        return Err(Error::Domain(format!("glued_b4_count({n}) needs n >= 4")));
    }
    if n > CANONICAL_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "lattice order",
            value: n,
            limit: CANONICAL_BUDGET,
        });
    }
    let forms: std::collections::BTreeSet<Vec<u8>> = glued_placements(&Lattice::named(Named::B4), n)
        .iter()
        .map(Lattice::canonical_form)
        .collect::<Result<_>>()?;
    Ok(forms.len())
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeRecord {
    pub canonical_form: String,
    pub covers: Vec<[usize; 2]>,
    pub ce: u64,
    pub con_size: usize,
    pub is_chain: bool,
    pub antichains: usize,
    pub glued_b4: bool,
    pub glued_n5: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extremum {
    pub value: u64,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum Verdict {
    Holds,
    Fails { counterexample: String, reason: String },
    Skipped { reason: String },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub thm_b: Verdict,
    pub thm_c: Verdict,
    pub manycon: Verdict,
    pub pentagon: Verdict,
    /// The decomposition and antichain tests for the glued-B4 shape agree.
    pub glued_b4_routes: Verdict,
}

impl Verdicts {
    pub fn all(&self) -> [(&'static str, &Verdict); 5] {
        [
            ("thm-b", &self.thm_b),
            ("thm-c", &self.thm_c),
            ("manycon", &self.manycon),
            ("pentagon", &self.pentagon),
            ("glued-b4-routes", &self.glued_b4_routes),
        ]
    }
}

/// Two lattices ordered one way by CE and the other way by `|Con|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncomparableWitness {
    pub higher_ce: String,
    pub more_congruences: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalReport {
    pub n: usize,
    pub lattice_count: usize,
    pub max_ce: Extremum,
    pub second_ce: Option<Extremum>,
    pub records: Vec<LatticeRecord>,
    pub verdicts: Verdicts,
    pub incomparable: Option<IncomparableWitness>,
}

fn record(l: &Lattice) -> Result<LatticeRecord> {
    let con = all_congruences(l);
    Ok(LatticeRecord {
        canonical_form: hex(&l.canonical_form()?),
        covers: l.covers().iter().map(|&(a, b)| [a, b]).collect(),
        ce: congruence_energy(&con),
        con_size: con.len(),
        is_chain: l.is_chain(),
        antichains: l.count_two_element_antichains(),
        glued_b4: is_glued_b4_shape(l),
        glued_n5: is_glued_n5_shape(l),
    })
}

fn fail(r: &LatticeRecord, reason: impl Into<String>) -> Verdict {
    Verdict::Fails {
        counterexample: r.canonical_form.clone(),
        reason: reason.into(),
    }
}

fn small(v: BigUint) -> u64 {
    v.to_u64().expect("value fits in u64 within the enumeration budget")
}

fn check_thm_b(n: usize, records: &[LatticeRecord]) -> Result<Verdict> {
    let top = small(g_max(n)?);
    let at_top: Vec<&LatticeRecord> = records.iter().filter(|r| r.ce >= top).collect();
    for r in &at_top {
        if r.ce > top {
            return Ok(fail(r, format!("CE {} exceeds g_max {top}", r.ce)));
        }
        if !r.is_chain {
            return Ok(fail(r, "non-chain attains g_max"));
        }
    }
    if at_top.len() != 1 {
        return Ok(Verdict::Fails {
            counterexample: String::new(),
            reason: format!("{} classes attain g_max", at_top.len()),
        });
    }
    Ok(Verdict::Holds)
}

fn check_thm_c(n: usize, records: &[LatticeRecord]) -> Result<Verdict> {
    if n < 4 {
        return Ok(Verdict::Skipped {
            reason: "needs n >= 4".into(),
        });
    }
    let second = small(g_sb(n)?);
    for r in records.iter().filter(|r| !r.is_chain) {
        if r.ce > second {
            return Ok(fail(r, format!("CE {} exceeds g_sb {second}", r.ce)));
        }
        let attains = r.ce == second;
        if attains != (r.antichains == 1) {
            return Ok(fail(r, "attaining g_sb disagrees with one two-element antichain"));
        }
        if attains != r.glued_b4 {
            return Ok(fail(r, "attaining g_sb disagrees with the glued-B4 decomposition"));
        }
    }
    Ok(Verdict::Holds)
}

fn check_manycon(n: usize, records: &[LatticeRecord]) -> Verdict {
    let full = 1usize << (n - 1);
    for r in records {
        if r.con_size > full {
            return fail(r, format!("|Con| = {} exceeds {full}", r.con_size));
        }
        if (r.con_size == full) != r.is_chain {
            return fail(r, "|Con| = 2^(n-1) disagrees with being a chain");
        }
        if !r.is_chain {
            let half = full / 2;
            if r.con_size > half {
                return fail(r, format!("non-chain with |Con| = {} > {half}", r.con_size));
            }
            if (r.con_size == half) != r.glued_b4 {
                return fail(r, "|Con| = 2^(n-2) disagrees with the glued-B4 shape");
            }
        }
    }
    Verdict::Holds
}

fn check_pentagon(n: usize, records: &[LatticeRecord]) -> Result<Verdict> {
    if n < 5 {
        return Ok(Verdict::Skipped {
            reason: "needs n >= 5".into(),
        });
    }
    let ce = g_pn(n)?.to_integer();
    let con = 5usize << (n - 5);
    for r in records.iter().filter(|r| r.glued_n5) {
        if num_bigint::BigInt::from(r.ce) != ce {
            return Ok(fail(r, format!("CE {} != g_pn {ce}", r.ce)));
        }
        if r.con_size != con {
            return Ok(fail(r, format!("|Con| {} != {con}", r.con_size)));
        }
    }
    Ok(Verdict::Holds)
}

fn check_routes(records: &[LatticeRecord]) -> Verdict {
    records
        .iter()
        .find(|r| r.glued_b4 != (r.antichains == 1))
        .map(|r| fail(r, "decomposition and antichain count disagree"))
        .unwrap_or(Verdict::Holds)
}

fn witnesses(records: &[LatticeRecord], value: u64) -> Extremum {
    Extremum {
        value,
        witnesses: records
            .iter()
            .filter(|r| r.ce == value)
            .map(|r| r.canonical_form.clone())
            .collect(),
    }
}

fn incomparable(records: &[LatticeRecord]) -> Option<IncomparableWitness> {
    for a in records {
        for b in records {
            if a.ce > b.ce && a.con_size < b.con_size {
                return Some(IncomparableWitness {
                    higher_ce: a.canonical_form.clone(),
                    more_congruences: b.canonical_form.clone(),
                });
            }
        }
    }
    None
}

pub fn extremal_report(n: usize) -> Result<ExtremalReport> {
    extremal_report_with_budget(n, DEFAULT_BUDGET)
}

pub fn extremal_report_with_budget(n: usize, budget: usize) -> Result<ExtremalReport> {
    let lattices = all_lattices_with_budget(n, budget)?;
    report_for(n, &lattices)
}

/// The report over a given list of lattices of order `n`.
pub fn report_for(n: usize, lattices: &[Lattice]) -> Result<ExtremalReport> {
    let records: Vec<LatticeRecord> = lattices.par_iter().map(record).collect::<Result<_>>()?;
    let mut values: Vec<u64> = records.iter().map(|r| r.ce).collect();
    values.sort_unstable_by(|a, b| b.cmp(a));
    values.dedup();
    let max_ce = witnesses(&records, values[0]);
    let second_ce = values.get(1).map(|&v| witnesses(&records, v));
    let verdicts = Verdicts {
        thm_b: check_thm_b(n, &records)?,
        thm_c: check_thm_c(n, &records)?,
        manycon: check_manycon(n, &records),
        pentagon: check_pentagon(n, &records)?,
        glued_b4_routes: check_routes(&records),
    };
    Ok(ExtremalReport {
        n,
        lattice_count: records.len(),
        max_ce,
        second_ce,
        incomparable: incomparable(&records),
        records,
        verdicts,
    })
}
