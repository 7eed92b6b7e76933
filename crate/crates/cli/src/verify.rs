use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use conergy::energy::{adjacency_of, combinatorial_energy, spectral_energy};
use conergy::enumeration::{all_lattices_with_budget, extremal_report_with_budget, glued_placements, Verdict};
use conergy::extremal::{aux_u, aux_v, aux_w, equ_energy_bound, g_pn, g_sb};
use conergy::{all_congruences, all_partitions, congruence_energy, Lattice, Named, Result};

/// Largest pentagon-family member checked; |Con| doubles per element.
const PENTAGON_LIMIT: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Remark1,
    ThmB,
    ThmC,
    Manycon,
    Pentagon,
    Bounds,
    Aux,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Remark1 => "remark1",
            Suite::ThmB => "thm-b",
            Suite::ThmC => "thm-c",
            Suite::Manycon => "manycon",
            Suite::Pentagon => "pentagon",
            Suite::Bounds => "bounds",
            Suite::Aux => "aux",
        }
    }

    fn default_sizes(self) -> RangeInclusive<usize> {
        match self {
            Suite::Remark1 => 1..=6,
            Suite::ThmB | Suite::Manycon => 1..=7,
            Suite::ThmC => 4..=7,
            Suite::Pentagon => 5..=10,
            Suite::Bounds => 1..=10,
            Suite::Aux => 3..=20,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub n: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub holds: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn has_counterexample(&self) -> bool {
        self.checks.iter().any(|c| c.verdict.fails())
    }
}

fn fail(counterexample: impl Into<String>, reason: impl Into<String>) -> Verdict {
    Verdict::Fails {
        counterexample: counterexample.into(),
        reason: reason.into(),
    }
}

pub fn run(suite: Suite, n: Option<usize>, budget: usize) -> Result<SuiteReport> {
    let sizes = n.map(|k| k..=k).unwrap_or_else(|| suite.default_sizes());
    let mut checks = Vec::new();
    for n in sizes {
        let verdict = match suite {
            Suite::Remark1 => remark1(n, budget)?,
            Suite::ThmB => extremal_report_with_budget(n, budget)?.verdicts.thm_b,
            Suite::ThmC => {
                let v = extremal_report_with_budget(n, budget)?.verdicts;
                if v.glued_b4_routes.fails() {
                    v.glued_b4_routes
                } else {
                    v.thm_c
                }
            }
            Suite::Manycon => extremal_report_with_budget(n, budget)?.verdicts.manycon,
            Suite::Pentagon => pentagon(n)?,
            Suite::Bounds => bounds(n)?,
            Suite::Aux => aux(n)?,
        };
        checks.push(Check { n, verdict });
    }
    Ok(SuiteReport {
        suite: suite.name(),
        holds: checks.iter().all(|c| !c.verdict.fails()),
        checks,
    })
}

fn remark1(n: usize, budget: usize) -> Result<Verdict> {
    for l in all_lattices_with_budget(n, budget)? {
        for p in all_congruences(&l).members() {
            let spectral = spectral_energy(&adjacency_of(p), 1e-12)?;
            let exact = combinatorial_energy(p) as f64;
            if (spectral - exact).abs() >= 1e-9 {
                return Ok(fail(l.to_json(), format!("{p}: spectral {spectral} vs {exact}")));
            }
        }
    }
    Ok(Verdict::Holds)
}

fn pentagon(k: usize) -> Result<Verdict> {
    if k < 5 {
        return Ok(Verdict::Skipped {
            reason: "needs k >= 5".into(),
        });
    }
    if k > PENTAGON_LIMIT {
        return Err(conergy::Error::BudgetExceeded {
            what: "pentagon size",
            value: k,
            limit: PENTAGON_LIMIT,
        });
    }
    let ce = g_pn(k)?.to_integer();
    let size = 5usize << (k - 5);
    for l in glued_placements(&Lattice::named(Named::N5), k) {
        let con = all_congruences(&l);
        let got = BigInt::from(congruence_energy(&con));
        if got != ce {
            return Ok(fail(l.to_json(), format!("CE {got} != {ce}")));
        }
        if con.len() != size {
            return Ok(fail(l.to_json(), format!("|Con| {} != {size}", con.len())));
        }
    }
    Ok(Verdict::Holds)
}

fn bounds(n: usize) -> Result<Verdict> {
    let bound = equ_energy_bound(n)?;
    let direct: u64 = all_partitions(n)?
        .iter()
        .map(|p| 2 * p.heq() as u64)
        .sum();
    if BigUint::from(direct) != bound {
        return Ok(fail(format!("n={n}"), format!("direct sum {direct} != {bound}")));
    }
    if n >= 4 {
        let lhs = g_sb(n)?;
        let rhs = BigUint::from(2u8) * g_sb(n - 1)? + (BigUint::from(1u8) << (n - 2));
        if lhs != rhs {
            return Ok(fail(format!("n={n}"), "g_sb recursion"));
        }
    }
    if n >= 5 {
        let step = g_pn(n)? - g_pn(n - 1)? * BigInt::from(2);
        if step != num_rational::BigRational::from_integer(BigInt::from(5) << (n - 5)) {
            return Ok(fail(format!("n={n}"), "g_pn recursion"));
        }
    }
    Ok(Verdict::Holds)
}

fn aux(n: usize) -> Result<Verdict> {
    if n < 3 {
        return Ok(Verdict::Skipped {
            reason: "needs n >= 3".into(),
        });
    }
    let zero = BigInt::from(0);
    for x in 1..=n - 2 {
        let w = aux_w(n, x)?;
        if w < zero || (w == zero) != (x == 1) {
            return Ok(fail(format!("w({n},{x})"), format!("value {w}")));
        }
    }
    if n >= 5 {
        for x in 1..=n - 2 {
            let u = aux_u(n, x)?;
            if (x == 1 && u != zero) || (x >= 2 && u <= zero) {
                return Ok(fail(format!("u_{n}({x})"), format!("value {u}")));
            }
            if x >= 2 {
                let v = aux_v(n, x)?;
                if v <= zero {
                    return Ok(fail(format!("v_{n}({x})"), format!("value {v}")));
                }
            }
        }
    }
    Ok(Verdict::Holds)
}
