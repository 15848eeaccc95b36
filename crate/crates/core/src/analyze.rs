//! Plain-text property report for a single poset.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::convex::{CPoset, enumerate_convex_poset};
use crate::fixpoint::{self, Verdict, Witness};
use crate::lattice::{as_lattice, convex_sublattices};
use crate::order::Poset;
use crate::selection::decide_csp;
use crate::subset::{self, Subset};
use crate::text::format_set;
use crate::{Budget, Error, Result};

/// Ordered `key: value` lines.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub lines: Vec<(String, String)>,
    /// Some property could not be decided within the budget.
    pub budget_exceeded: bool,
}

impl Report {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn push(&mut self, key: &str, value: String) {
        self.lines.push((key.to_string(), value));
    }

    /// Records a verdict line, or the budget failure that prevented it.
    fn verdict(&mut self, key: &str, v: Result<Verdict>, labels: &[String]) -> Result<Option<Verdict>> {
        match v {
            Ok(v) => {
                self.push(key, describe(&v, labels));
                Ok(Some(v))
            }
            Err(e @ Error::BudgetExceeded { .. }) => {
                self.budget_exceeded = true;
                self.push(key, format!("unknown ({e})"));
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.lines {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}

fn yes_no(b: bool) -> &'static str {
    if b { "yes" } else { "no" }
}

fn describe(v: &Verdict, labels: &[String]) -> String {
    let set = |s: Subset| format_set(s, labels);
    let detail = match &v.witness {
        Witness::PointMap(f) => {
            let parts: Vec<String> = f.iter().enumerate().map(|(x, &y)| format!("{}->{}", labels[x], labels[y])).collect();
            format!("witness map {}", parts.join(" "))
        }
        Witness::SetMap(f) => {
            let parts: Vec<String> = f.iter().enumerate().map(|(x, &s)| format!("{}->{}", labels[x], set(s))).collect();
            format!("witness map {}", parts.join(" "))
        }
        Witness::CPosetMap(f) => {
            let parts: Vec<String> = f.iter().map(|&(a, b)| format!("{}->{}", set(a), set(b))).collect();
            format!("witness map {}", parts.join(" "))
        }
        Witness::Core(core) => {
            let names: Vec<&str> = core.iter().map(|&x| labels[x].as_str()).collect();
            format!("core {{{}}}", names.join(","))
        }
        Witness::Retraction { s, .. } => {
            let names: Vec<&str> = s.iter().map(|&x| labels[x].as_str()).collect();
            format!("retracts onto {{{}}}", names.join(","))
        }
        Witness::Exhausted if v.fast_path.is_none() => "exhaustive search".to_string(),
        Witness::Exhausted => String::new(),
        Witness::Elimination(_) | Witness::Selection(_) => String::new(),
    };
    let mut notes: Vec<String> = Vec::new();
    if !v.holds && !detail.is_empty() {
        notes.push(detail);
    }
    if let Some(fp) = v.fast_path {
        notes.push(format!("via {fp}"));
    }
    if notes.is_empty() {
        yes_no(v.holds).to_string()
    } else {
        format!("{} ({})", yes_no(v.holds), notes.join("; "))
    }
}

/// Why `C(P)` fails to be a lattice: two sets and the missing operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NonLatticePair {
    pub x: Subset,
    pub y: Subset,
    pub missing: &'static str,
}

/// Tie-break key for non-lattice witnesses, smallest first.
type WitnessKey = (bool, usize, usize, usize, usize);

/// `None` when `C(P)` is a lattice. Otherwise a pair without an infimum if
/// there is one, else a pair without a supremum.
///
/// Among failing pairs, witnesses made of two disjoint antichains whose union
/// is an antichain are preferred, the larger union first. Remaining ties go to
/// the pair whose smaller set has its members closest together in the element
/// numbering, then to the lowest indices.
pub fn cposet_lattice_witness(c: &CPoset) -> Option<NonLatticePair> {
    let o = c.order();
    let p = c.host();
    let n = c.len();
    let has_extremum = |bounds: &FixedBitSet, upper: bool| {
        bounds.ones().any(|z| {
            let row = if upper { o.up_row(z) } else { o.down_row(z) };
            bounds.is_subset(row)
        })
    };
    let spread = |s: Subset| {
        let v: Vec<usize> = subset::iter(s).collect();
        v.last().unwrap() - v[0]
    };
    for (missing, upward) in [("infimum", false), ("supremum", true)] {
        let mut best: Option<(WitnessKey, NonLatticePair)> = None;
        for i in 0..n {
            for j in i + 1..n {
                if o.comparable(i, j) {
                    continue;
                }
                let mut bounds = if upward { o.up_row(i).clone() } else { o.down_row(i).clone() };
                bounds.intersect_with(if upward { o.up_row(j) } else { o.down_row(j) });
                // The infimum is a lower bound lying above every other one.
                if has_extremum(&bounds, upward) {
                    continue;
                }
                let (x, y) = (c.set(i), c.set(j));
                let (big, small) = if subset::len(x) >= subset::len(y) { (x, y) } else { (y, x) };
                let nice = x & y == 0 && p.is_antichain_set(x | y);
                let key = (!nice, usize::MAX - subset::len(x | y), spread(small), i, j);
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, NonLatticePair { x: big, y: small, missing }));
                }
            }
        }
        if let Some((_, w)) = best {
            return Some(w);
        }
    }
    None
}

/// Runs every decider that fits the budget. Undecided properties are
/// reported as unknown and flagged in `budget_exceeded`.
pub fn analyze(p: &Poset, labels: &[String], budget: &Budget, no_fast_path: bool) -> Result<Report> {
    let mut r = Report::default();
    r.push("elements", p.len().to_string());
    r.push("poset", match p.check_axioms() {
        Ok(()) => "valid".into(),
        Err(e) => format!("invalid ({e})"),
    });
    r.push("width", p.width().to_string());
    let lattice = as_lattice(p);
    r.push("lattice", match &lattice {
        Ok(_) => "yes".into(),
        Err(Error::NotALattice { x, y, reason }) => format!("no ({reason} for {}, {})", labels[*x], labels[*y]),
        Err(e) => format!("no ({e})"),
    });
    r.verdict("dismantlable", Ok(fixpoint::dismantle(p)), labels)?;
    r.verdict("FPP", fixpoint::decide_fpp(p, budget, no_fast_path), labels)?;
    r.verdict("CFPP", fixpoint::decide_cfpp(p, budget, no_fast_path), labels)?;
    if p.len() <= fixpoint::RFPP_MAX_HOST {
        r.verdict("RFPP", fixpoint::decide_rfpp(p, budget, no_fast_path), labels)?;
    } else {
        r.push("RFPP", format!("skipped (more than {} elements)", fixpoint::RFPP_MAX_HOST));
    }
    r.verdict("CSP", decide_csp(p, budget, no_fast_path), labels)?;
    match enumerate_convex_poset(p, budget) {
        Ok(c) => {
            r.push("|C(P)|", c.len().to_string());
            r.push("C(P) lattice", match cposet_lattice_witness(&c) {
                None => "yes".into(),
                Some(w) => format!("no (X={}, Y={})", format_set(w.x, labels), format_set(w.y, labels)),
            });
            r.verdict("C(P) FPP", fixpoint::decide_fpp_cposet(p, budget, no_fast_path), labels)?;
        }
        Err(e @ Error::BudgetExceeded { .. }) => {
            r.budget_exceeded = true;
            r.push("|C(P)|", format!("unknown ({e})"));
        }
        Err(e) => return Err(e),
    }
    if let Ok(t) = lattice {
        match convex_sublattices(&t, budget) {
            Ok(cl) => r.push("|C_L(T)|", cl.len().to_string()),
            Err(e @ Error::BudgetExceeded { .. }) => {
                r.budget_exceeded = true;
                r.push("|C_L(T)|", format!("unknown ({e})"));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::generate;

    fn report(key: &str, params: &[usize]) -> Report {
        let ex = generate(key, params).unwrap();
        analyze(&ex.poset, &ex.labels, &Budget::default(), false).unwrap()
    }

    #[test]
    fn two_level_report() {
        let r = report("two_level", &[]);
        assert!(r.get("dismantlable").unwrap().starts_with("no"));
        assert!(r.get("CFPP").unwrap().starts_with("no (witness map "));
        assert_eq!(r.get("C(P) FPP"), Some("yes"));
        assert_eq!(r.get("|C(P)|"), Some("15"));
        assert_eq!(r.get("lattice"), Some("no (no join for a, b)"));
    }

    #[test]
    fn chain_report() {
        let r = report("chain", &[4]);
        for key in ["dismantlable", "FPP", "CFPP", "RFPP", "CSP", "C(P) FPP", "C(P) lattice", "lattice"] {
            assert!(r.get(key).unwrap().starts_with("yes"), "{key}");
        }
        assert_eq!(r.get("|C_L(T)|"), Some("10"));
        assert!(!r.budget_exceeded);
    }

    #[test]
    fn nine_example_report() {
        let r = report("nine_example", &[]);
        assert_eq!(r.get("C(P) lattice"), Some("no (X={00,c,11}, Y={01,10})"));
        assert_eq!(r.get("RFPP"), Some("skipped (more than 6 elements)"));
        let text = r.to_string();
        assert_eq!(text, report("nine_example", &[]).to_string());
    }

    #[test]
    fn budget_is_reported_per_property() {
        let ex = generate("crown_bounded", &[6]).unwrap();
        let r = analyze(&ex.poset, &ex.labels, &Budget::default().with_nodes(3), true).unwrap();
        assert!(r.budget_exceeded);
        assert!(r.get("CSP").unwrap().starts_with("unknown"));
        assert!(r.get("|C(P)|").is_some());
    }
}
