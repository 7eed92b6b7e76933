//! Inline lattice specs: `chain:K`, `b4`, `m3`, `n5`, `dual:SPEC` and
//! `glue:SPEC,SPEC,...`.

use conergy::{Error, Lattice, Named, Result};

pub fn build(spec: &str) -> Result<Lattice> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("glue:") {
        let parts: Vec<Lattice> = split_top_level(rest).iter().map(|p| build(p)).collect::<Result<_>>()?;
        if parts.is_empty() {
            return Err(bad(spec));
        }
        return Ok(Lattice::glued_sum_all(&parts));
    }
    if let Some(rest) = spec.strip_prefix("dual:") {
        return Ok(build(rest)?.dual());
    }
    if let Some(k) = spec.strip_prefix("chain:") {
        let k: usize = k.parse().map_err(|_| bad(spec))?;
        if k == 0 {
            return Err(Error::Domain("chain needs at least one element".into()));
        }
        return Ok(Lattice::chain(k));
    }
    spec.parse::<Named>().map(Lattice::named).map_err(|_| bad(spec))
}

fn bad(spec: &str) -> Error {
    Error::Domain(format!("unrecognized builder spec {spec:?}"))
}

/// Commas inside a nested `glue:` belong to it only when bracketed, so
/// `glue:chain:2,b4,chain:3` has three parts.
fn split_top_level(s: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                if depth > 1 {
                    cur.push(ch);
                }
            }
            ')' => {
                depth = depth.saturating_sub(1);
                if depth > 0 {
                    cur.push(ch);
                }
            }
            ',' if depth == 0 => parts.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    parts.push(cur);
    parts.into_iter().filter(|p| !p.trim().is_empty()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs() {
        assert_eq!(build("chain:6").unwrap().len(), 6);
        assert_eq!(build("B4").unwrap().len(), 4);
        let g = build("glue:chain:2,b4,chain:3").unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g.count_two_element_antichains(), 1);
        let nested = build("glue:(glue:b4,b4),n5").unwrap();
        assert_eq!(nested.len(), 4 + 4 - 1 + 5 - 1);
        assert_eq!(build("dual:glue:chain:2,n5").unwrap().len(), 6);
        assert!(build("chain:x").is_err());
        assert!(build("chain:0").is_err());
        assert!(build("k4").is_err());
        assert!(build("glue:").is_err());
    }
}
