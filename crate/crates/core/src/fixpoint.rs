//! Deciders for the fixed point property of `P`, of multivalued maps into
//! `C(P)` or into all nonempty subsets, and of `C(P)` itself.
//!
//! Negative verdicts carry a fixed-point-free order-preserving map that is
//! checked again, independently of the search, before it is returned.

use std::fmt;
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;

use crate::convex::{self, CPoset, bidom_leq, conv, enumerate_convex_poset};
use crate::order::{MonotoneMap, Poset};
use crate::search::{MapProblem, ValueOrder, find_map, for_each_map};
use crate::subset::{self, Subset};
use crate::{Budget, Error, Result};

/// Largest host accepted by the arbitrary-subset decider.
pub const RFPP_MAX_HOST: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Dismantlable,
    Fpp,
    Cfpp,
    Rfpp,
    CpFpp,
    Retract,
    Csp,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Dismantlable => "dismantlable",
            Property::Fpp => "FPP",
            Property::Cfpp => "CFPP",
            Property::Rfpp => "RFPP",
            Property::CpFpp => "C(P) FPP",
            Property::Retract => "retract",
            Property::Csp => "CSP",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// The search space was exhausted without finding a counterexample.
    Exhausted,
    /// Elements in the order they were removed, each with the element it retracts onto.
    Elimination(Vec<(usize, usize)>),
    /// The subposet left when no irreducible element remains.
    Core(Vec<usize>),
    /// A fixed-point-free order-preserving self-map of `P`.
    PointMap(Vec<usize>),
    /// A fixed-point-free order-preserving map from `P` to nonempty subsets.
    SetMap(Vec<Subset>),
    /// A fixed-point-free order-preserving self-map of `C(P)`, given on member sets.
    CPosetMap(Vec<(Subset, Subset)>),
    /// `s: Q -> P` and `r: P -> Q` with `r ∘ s = id`.
    Retraction { s: Vec<usize>, r: Vec<usize> },
    /// An order-preserving selection, listed as (set, chosen element).
    Selection(Vec<(Subset, usize)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub property: Property,
    pub holds: bool,
    pub witness: Witness,
    /// Name of the shortcut that settled the question, if one did.
    pub fast_path: Option<&'static str>,
    pub nodes: u64,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{property: {}, holds: {}, fast_path: {}, nodes: {}}}",
            self.property,
            self.holds,
            self.fast_path.unwrap_or("none"),
            self.nodes
        )
    }
}

/// Elements whose strict down-set has a largest element or whose strict
/// up-set has a least element.
pub fn irreducibles(p: &Poset) -> Vec<usize> {
    (0..p.len()).filter(|&x| irreducible_target(p, x).is_some()).collect()
}

/// For an irreducible `x`, the element it can be retracted onto: the largest
/// element strictly below it, or else the least element strictly above it.
pub fn irreducible_target(p: &Poset, x: usize) -> Option<usize> {
    let mut below = p.down_row(x).clone();
    below.set(x, false);
    if let Some(m) = below.ones().find(|&m| below.is_subset(p.down_row(m))) {
        return Some(m);
    }
    let mut above = p.up_row(x).clone();
    above.set(x, false);
    above.ones().find(|&m| above.is_subset(p.up_row(m)))
}

/// Result of repeatedly deleting the lowest-index irreducible element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dismantling {
    /// Removed elements with the element each one was retracted onto.
    pub steps: Vec<(usize, usize)>,
    /// Remaining elements, increasing.
    pub core: Vec<usize>,
    /// Retraction of `P` onto the core, as a map into core positions.
    pub retraction: Vec<usize>,
}

impl Dismantling {
    pub fn is_complete(&self) -> bool {
        self.core.len() <= 1
    }

    pub fn core_poset(&self, p: &Poset) -> Poset {
        p.induced(&self.core)
    }
}

pub fn dismantling(p: &Poset) -> Dismantling {
    let mut alive: Vec<usize> = (0..p.len()).collect();
    let mut steps = Vec::new();
    loop {
        let sub = p.induced(&alive);
        let next = (0..alive.len()).find_map(|i| irreducible_target(&sub, i).map(|t| (i, t)));
        match next {
            Some((i, t)) if alive.len() > 1 => {
                steps.push((alive[i], alive[t]));
                alive.remove(i);
            }
            _ => break,
        }
    }
    let mut target: Vec<usize> = (0..p.len()).collect();
    for &(x, t) in steps.iter().rev() {
        target[x] = target[t];
    }
    let retraction = target
        .iter()
        .map(|t| alive.binary_search(t).expect("retraction lands in the core"))
        .collect();
    Dismantling { steps, core: alive, retraction }
}

pub fn dismantle(p: &Poset) -> Verdict {
    let d = dismantling(p);
    let holds = d.is_complete();
    Verdict {
        property: Property::Dismantlable,
        holds,
        witness: if holds { Witness::Elimination(d.steps) } else { Witness::Core(d.core) },
        fast_path: None,
        nodes: 0,
    }
}

fn excluding_self(n: usize, values: usize, forbidden: impl Fn(usize) -> Vec<usize>) -> Vec<FixedBitSet> {
    (0..n)
        .map(|x| {
            let mut b = FixedBitSet::with_capacity(values);
            b.insert_range(..);
            for v in forbidden(x) {
                b.set(v, false);
            }
            b
        })
        .collect()
}

/// Searches for a fixed-point-free order-preserving self-map of `p`.
fn fpf_point_map(p: &Poset, budget: &Budget) -> Result<(Option<Vec<usize>>, u64)> {
    let vo = ValueOrder::from_poset(p);
    let problem = MapProblem {
        domain: p,
        values: &vo,
        allowed: excluding_self(p.len(), p.len(), |x| vec![x]),
        priority: None,
    }
    .high_values_first();
    let out = find_map(&problem, budget.nodes)?;
    Ok((out.map, out.nodes))
}

pub fn validate_point_map(p: &Poset, f: &[usize]) -> Result<()> {
    MonotoneMap::new(p, p, f.to_vec())?;
    if let Some(x) = (0..p.len()).find(|&x| f[x] == x) {
        return Err(Error::Inconsistent(format!("{x} is a fixed point")));
    }
    Ok(())
}

/// Checks a multivalued map: nonempty values (convex ones when `convex`),
/// order preserving under bi-domination, and `x ∉ f(x)` for every `x`.
pub fn validate_set_map(p: &Poset, f: &[Subset], convex: bool) -> Result<()> {
    if f.len() != p.len() {
        return Err(Error::ArityMismatch { expected: p.len(), got: f.len() });
    }
    for (x, &s) in f.iter().enumerate() {
        if s == 0 || !subset::is_subset(s, p.all()) {
            return Err(Error::Inconsistent(format!("value at {x} is not a nonempty subset")));
        }
        if convex && !convex::is_convex(p, s) {
            return Err(Error::Inconsistent(format!("value at {x} is not convex")));
        }
        if subset::contains(s, x) {
            return Err(Error::Inconsistent(format!("{x} is a fixed point")));
        }
    }
    for x in 0..p.len() {
        for y in p.up_row(x).ones() {
            if !bidom_leq(p, f[x], f[y]) {
                return Err(Error::NotMonotone(x, y));
            }
        }
    }
    Ok(())
}

/// Checks a self-map of `C(P)` given by indices: order preserving and without fixed points.
pub fn validate_cposet_map(c: &CPoset, f: &[usize]) -> Result<()> {
    MonotoneMap::new(c.order(), c.order(), f.to_vec())?;
    if let Some(i) = (0..c.len()).find(|&i| f[i] == i) {
        return Err(Error::Inconsistent(format!("set {i} is a fixed point")));
    }
    Ok(())
}

pub fn decide_fpp(p: &Poset, budget: &Budget, no_fast_path: bool) -> Result<Verdict> {
    if no_fast_path {
        let (map, nodes) = fpf_point_map(p, budget)?;
        return point_verdict(p, map, nodes, None);
    }
    let d = dismantling(p);
    if d.is_complete() {
        return Ok(Verdict {
            property: Property::Fpp,
            holds: !p.is_empty(),
            witness: Witness::Elimination(d.steps),
            fast_path: Some("dismantlable"),
            nodes: 0,
        });
    }
    let core = d.core_poset(p);
    let (map, nodes) = fpf_point_map(&core, budget)?;
    // g on the core lifts to x ↦ g(r(x)), which has no fixed point either.
    let lifted = map.map(|g| d.retraction.iter().map(|&i| d.core[g[i]]).collect());
    let fast = (d.core.len() < p.len()).then_some("core reduction");
    point_verdict(p, lifted, nodes, fast)
}

fn point_verdict(p: &Poset, map: Option<Vec<usize>>, nodes: u64, fast_path: Option<&'static str>) -> Result<Verdict> {
    Ok(match map {
        Some(f) => {
            validate_point_map(p, &f)?;
            Verdict { property: Property::Fpp, holds: false, witness: Witness::PointMap(f), fast_path, nodes }
        }
        None => Verdict { property: Property::Fpp, holds: true, witness: Witness::Exhausted, fast_path, nodes },
    })
}

/// Fixed-point-free map `P -> C(P)`, searched directly.
fn fpf_convex_map(p: &Poset, budget: &Budget) -> Result<(Option<Vec<Subset>>, u64)> {
    let c = enumerate_convex_poset(p, budget)?;
    let vo = ValueOrder::from_poset(c.order());
    let problem = MapProblem {
        domain: p,
        values: &vo,
        allowed: excluding_self(p.len(), c.len(), |x| {
            (0..c.len()).filter(|&i| subset::contains(c.set(i), x)).collect()
        }),
        priority: None,
    }
    .high_values_first();
    let out = find_map(&problem, budget.nodes)?;
    Ok((out.map.map(|m| m.into_iter().map(|i| c.set(i)).collect()), out.nodes))
}

pub fn decide_cfpp(p: &Poset, budget: &Budget, no_fast_path: bool) -> Result<Verdict> {
    subset::check_host(p.len())?;
    if no_fast_path {
        let (map, nodes) = fpf_convex_map(p, budget)?;
        return set_verdict(p, Property::Cfpp, map, nodes, None, true);
    }
    let d = dismantling(p);
    if d.is_complete() {
        return Ok(Verdict {
            property: Property::Cfpp,
            holds: !p.is_empty(),
            witness: Witness::Elimination(d.steps),
            fast_path: Some("dismantlable"),
            nodes: 0,
        });
    }
    // A finite poset with CFPP is dismantlable, so the core has a
    // fixed-point-free map g; x ↦ Conv_P(g(r(x))) is one for P.
    let core = d.core_poset(p);
    let (map, nodes) = fpf_convex_map(&core, budget)?;
    let Some(g) = map else {
        return Err(Error::Inconsistent(
            "non-dismantlable core admits no fixed-point-free map into its convex sets".into(),
        ));
    };
    let lift = |s: Subset| subset::iter(s).fold(0, |acc, i| acc | subset::singleton(d.core[i]));
    let lifted: Vec<Subset> = d.retraction.iter().map(|&i| conv(p, lift(g[i]))).collect();
    set_verdict(p, Property::Cfpp, Some(lifted), nodes, Some("not dismantlable"), true)
}

fn set_verdict(
    p: &Poset,
    property: Property,
    map: Option<Vec<Subset>>,
    nodes: u64,
    fast_path: Option<&'static str>,
    convex: bool,
) -> Result<Verdict> {
    Ok(match map {
        Some(f) => {
            validate_set_map(p, &f, convex)?;
            Verdict { property, holds: false, witness: Witness::SetMap(f), fast_path, nodes }
        }
        None => Verdict { property, holds: true, witness: Witness::Exhausted, fast_path, nodes },
    })
}

pub fn decide_rfpp(p: &Poset, budget: &Budget, no_fast_path: bool) -> Result<Verdict> {
    if p.len() > RFPP_MAX_HOST {
        return Err(Error::BudgetExceeded { what: "RFPP host size", limit: RFPP_MAX_HOST as u64 });
    }
    if !no_fast_path {
        let d = dismantling(p);
        if d.is_complete() {
            return Ok(Verdict {
                property: Property::Rfpp,
                holds: !p.is_empty(),
                witness: Witness::Elimination(d.steps),
                fast_path: Some("dismantlable"),
                nodes: 0,
            });
        }
    }
    let sets: Vec<Subset> = (1..=p.all()).collect();
    let vo = ValueOrder::from_fn(sets.len(), |u, v| bidom_leq(p, sets[u], sets[v]));
    let problem = MapProblem {
        domain: p,
        values: &vo,
        allowed: excluding_self(p.len(), sets.len(), |x| {
            (0..sets.len()).filter(|&i| subset::contains(sets[i], x)).collect()
        }),
        priority: None,
    }
    .high_values_first();
    let out = find_map(&problem, budget.nodes)?;
    let map = out.map.map(|m| m.into_iter().map(|i| sets[i]).collect());
    set_verdict(p, Property::Rfpp, map, out.nodes, None, false)
}

/// Searches for a fixed-point-free order-preserving self-map of `C(P)`.
pub fn fpf_cposet_map(c: &CPoset, budget: &Budget) -> Result<(Option<Vec<usize>>, u64)> {
    let vo = ValueOrder::from_poset(c.order());
    let problem = MapProblem {
        domain: c.order(),
        values: &vo,
        allowed: excluding_self(c.len(), c.len(), |i| vec![i]),
        priority: None,
    }
    .high_values_first();
    let out = find_map(&problem, budget.nodes)?;
    Ok((out.map, out.nodes))
}

pub fn decide_fpp_cposet(p: &Poset, budget: &Budget, no_fast_path: bool) -> Result<Verdict> {
    subset::check_host(p.len())?;
    let cp_verdict = |c: &CPoset, map: Option<Vec<usize>>, nodes, fast_path| -> Result<Verdict> {
        Ok(match map {
            Some(f) => {
                validate_cposet_map(c, &f)?;
                let pairs = f.iter().enumerate().map(|(i, &j)| (c.set(i), c.set(j))).collect();
                Verdict { property: Property::CpFpp, holds: false, witness: Witness::CPosetMap(pairs), fast_path, nodes }
            }
            None => Verdict { property: Property::CpFpp, holds: true, witness: Witness::Exhausted, fast_path, nodes },
        })
    };
    if no_fast_path {
        let c = enumerate_convex_poset(p, budget)?;
        let (map, nodes) = fpf_cposet_map(&c, budget)?;
        return cp_verdict(&c, map, nodes, None);
    }
    let d = dismantling(p);
    if d.is_complete() {
        return Ok(Verdict {
            property: Property::CpFpp,
            holds: !p.is_empty(),
            witness: Witness::Elimination(d.steps),
            fast_path: Some("dismantlable"),
            nodes: 0,
        });
    }
    let fast = (d.core.len() < p.len()).then_some("core reduction");
    let core = d.core_poset(p);
    let ck = enumerate_convex_poset(&core, budget)?;
    let (map, nodes) = fpf_cposet_map(&ck, budget)?;
    let c = enumerate_convex_poset(p, budget)?;
    let Some(g) = map else {
        return cp_verdict(&c, None, nodes, fast);
    };
    // F = s̄ ∘ g ∘ r̄ has no fixed point: F(X) = X forces g(r̄(X)) = r̄(X).
    let s = MonotoneMap::new(&core, p, d.core.clone())?;
    let r = MonotoneMap::new(p, &core, d.retraction.clone())?;
    let bars = convex::cbar_retraction(&c, &ck, &s, &r)?;
    let lifted: Vec<usize> = (0..c.len()).map(|i| bars.sbar[g[bars.rbar[i]]]).collect();
    cp_verdict(&c, Some(lifted), nodes, fast)
}

/// Looks for monotone `s: Q -> P` and `r: P -> Q` with `r ∘ s = id_Q`.
pub fn retract_search(p: &Poset, q: &Poset, budget: &Budget) -> Result<Verdict> {
    let mut nodes = 0u64;
    let mut inner_nodes = 0u64;
    let mut found = None;
    let mut failure = None;
    if q.len() <= p.len() && !q.is_empty() {
        let vp = ValueOrder::from_poset(p);
        let vq = ValueOrder::from_poset(q);
        let outer = MapProblem::unrestricted(q, &vp);
        nodes = for_each_map(&outer, budget.nodes, |s| {
            let embeds = (0..q.len()).all(|a| (0..q.len()).all(|b| q.leq(a, b) == p.leq(s[a], s[b])));
            if !embeds {
                return ControlFlow::Continue(());
            }
            let mut inner = MapProblem::unrestricted(p, &vq);
            for (a, &x) in s.iter().enumerate() {
                inner.allowed[x].clear();
                inner.allowed[x].insert(a);
            }
            match find_map(&inner, budget.nodes.saturating_sub(inner_nodes)) {
                Ok(out) => {
                    inner_nodes += out.nodes;
                    match out.map {
                        Some(r) => {
                            found = Some((s.to_vec(), r));
                            ControlFlow::Break(())
                        }
                        None => ControlFlow::Continue(()),
                    }
                }
                Err(e) => {
                    failure = Some(e);
                    ControlFlow::Break(())
                }
            }
        })?;
    }
    if let Some(e) = failure {
        return Err(e);
    }
    nodes += inner_nodes;
    Ok(match found {
        Some((s, r)) => {
            let sm = MonotoneMap::new(q, p, s.clone())?;
            let rm = MonotoneMap::new(p, q, r.clone())?;
            if !sm.then(&rm).is_identity() {
                return Err(Error::Inconsistent("retraction pair does not compose to the identity".into()));
            }
            Verdict { property: Property::Retract, holds: true, witness: Witness::Retraction { s, r }, fast_path: None, nodes }
        }
        None => Verdict { property: Property::Retract, holds: false, witness: Witness::Exhausted, fast_path: None, nodes },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_level() -> Poset {
        Poset::from_covers(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    fn crown6() -> Poset {
        Poset::from_covers(6, &[(0, 3), (0, 4), (1, 4), (1, 5), (2, 5), (2, 3)]).unwrap()
    }

    #[test]
    fn irreducible_examples() {
        assert_eq!(irreducibles(&Poset::chain(4)), vec![0, 1, 2, 3]);
        assert!(irreducibles(&two_level()).is_empty());
        let v = Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(irreducibles(&v), vec![1, 2]);
    }

    #[test]
    fn dismantle_examples() {
        assert!(dismantle(&Poset::chain(3)).holds);
        let d = dismantle(&two_level());
        assert!(!d.holds);
        assert_eq!(d.witness, Witness::Core(vec![0, 1, 2, 3]));
        assert!(dismantle(&crown6().with_bounds()).holds);
        assert!(dismantle(&crown6().with_top()).holds);
        assert!(!dismantle(&crown6()).holds);
    }

    #[test]
    fn retraction_onto_core_is_monotone_and_idempotent() {
        let p = crown6().ordinal_sum(&Poset::antichain(2)).disjoint_union(&Poset::chain(2));
        let d = dismantling(&p);
        let core = d.core_poset(&p);
        let r = MonotoneMap::new(&p, &core, d.retraction.clone()).unwrap();
        for (i, &x) in d.core.iter().enumerate() {
            assert_eq!(r.apply(x), i);
        }
    }

    #[test]
    fn fpp_examples() {
        let b = Budget::default();
        let v = decide_fpp(&Poset::antichain(2), &b, false).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, Witness::PointMap(vec![1, 0]));
        assert!(decide_fpp(&Poset::chain(5), &b, false).unwrap().holds);
        assert!(decide_fpp(&Poset::chain(5), &b, true).unwrap().holds);
        assert!(!decide_fpp(&crown6(), &b, false).unwrap().holds);
        assert!(!decide_fpp(&crown6(), &b, true).unwrap().holds);
        assert!(!decide_fpp(&two_level(), &b, false).unwrap().holds);
    }

    #[test]
    fn cfpp_examples() {
        let b = Budget::default();
        for fast in [false, true] {
            let v = decide_cfpp(&two_level(), &b, !fast).unwrap();
            assert!(!v.holds);
            let Witness::SetMap(f) = &v.witness else { panic!("expected a set map") };
            validate_set_map(&two_level(), f, true).unwrap();
            assert!(decide_cfpp(&crown6().with_bounds(), &b, !fast).unwrap().holds);
        }
        let known = vec![0b0010, 0b0001, 0b1000, 0b0100];
        validate_set_map(&two_level(), &known, true).unwrap();
    }

    #[test]
    fn rfpp_examples() {
        let b = Budget::default();
        assert!(!decide_rfpp(&Poset::antichain(2), &b, true).unwrap().holds);
        assert!(decide_rfpp(&Poset::chain(2), &b, true).unwrap().holds);
        assert!(matches!(decide_rfpp(&Poset::chain(7), &b, true), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn cposet_fpp_examples() {
        let b = Budget::default();
        assert!(decide_fpp_cposet(&two_level(), &b, true).unwrap().holds);
        assert!(decide_fpp_cposet(&two_level(), &b, false).unwrap().holds);
        for n in 2..=3 {
            for fast in [false, true] {
                let v = decide_fpp_cposet(&Poset::antichain(n), &b, !fast).unwrap();
                assert!(!v.holds);
            }
        }
    }

    #[test]
    fn retract_examples() {
        let b = Budget::default();
        let v = retract_search(&two_level(), &two_level(), &b).unwrap();
        assert!(v.holds);
        assert!(retract_search(&Poset::chain(3), &Poset::chain(2), &b).unwrap().holds);
        assert!(!retract_search(&crown6().with_bounds(), &two_level(), &b).unwrap().holds);
    }

    #[test]
    fn verdict_text() {
        let v = Verdict { property: Property::Cfpp, holds: false, witness: Witness::Exhausted, fast_path: None, nodes: 42 };
        assert_eq!(v.to_string(), "{property: CFPP, holds: false, fast_path: none, nodes: 42}");
    }
}
