//! Backtracking search for order-preserving maps with restricted values.
//!
//! A problem consists of a domain poset, a value space carrying a preorder,
//! and for every domain element the set of values it may take. A solution is
//! a map `f` with `f(x)` allowed at `x` and `x <= y` implying `f(x) <= f(y)`.
//! Every fixed-point, selection and retraction question in the crate reduces
//! to one of these.
//!
//! The search picks the unassigned element with the fewest remaining
//! candidates, tries its candidates in priority order, and after each
//! assignment removes incompatible values from every comparable unassigned
//! element. Because the domain relation is stored closed, this forward check
//! sees every constraint an assignment takes part in.

use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;

use crate::order::Poset;
use crate::{Error, Result};

/// A preorder on the value space `0..len`, stored as up and down rows.
#[derive(Clone, Debug)]
pub struct ValueOrder {
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
}

impl ValueOrder {
    pub fn from_poset(p: &Poset) -> ValueOrder {
        ValueOrder {
            up: (0..p.len()).map(|v| p.up_row(v).clone()).collect(),
            down: (0..p.len()).map(|v| p.down_row(v).clone()).collect(),
        }
    }

    /// `le(u, v)` must be reflexive and transitive.
    pub fn from_fn<F: Fn(usize, usize) -> bool>(len: usize, le: F) -> ValueOrder {
        let mut up = vec![FixedBitSet::with_capacity(len); len];
        let mut down = vec![FixedBitSet::with_capacity(len); len];
        for (u, row) in up.iter_mut().enumerate() {
            for v in (0..len).filter(|&v| le(u, v)) {
                row.insert(v);
                down[v].insert(u);
            }
        }
        ValueOrder { up, down }
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    #[inline]
    pub fn le(&self, u: usize, v: usize) -> bool {
        self.up[u].contains(v)
    }

    /// Number of values strictly below `v` (values equivalent to `v` excluded).
    pub fn rank(&self, v: usize) -> usize {
        self.down[v].ones().filter(|&u| !self.le(v, u)).count()
    }
}

pub struct MapProblem<'a> {
    pub domain: &'a Poset,
    pub values: &'a ValueOrder,
    pub allowed: Vec<FixedBitSet>,
    /// Candidates are tried in increasing `priority`, ties by index.
    pub priority: Option<Vec<i64>>,
}

impl<'a> MapProblem<'a> {
    /// Every value allowed everywhere.
    pub fn unrestricted(domain: &'a Poset, values: &'a ValueOrder) -> MapProblem<'a> {
        let mut all = FixedBitSet::with_capacity(values.len());
        all.insert_range(..);
        MapProblem {
            domain,
            values,
            allowed: vec![all; domain.len()],
            priority: None,
        }
    }

    /// Try values with many strict predecessors first.
    pub fn high_values_first(mut self) -> Self {
        self.priority = Some(
            (0..self.values.len())
                .map(|v| -(self.values.rank(v) as i64))
                .collect(),
        );
        self
    }

    /// Checks a candidate solution against the problem, returning the first
    /// offending element or comparable pair.
    pub fn check(&self, map: &[usize]) -> std::result::Result<(), String> {
        if map.len() != self.domain.len() {
            return Err(format!("map has {} values, domain has {}", map.len(), self.domain.len()));
        }
        for (x, &v) in map.iter().enumerate() {
            if v >= self.values.len() || !self.allowed[x].contains(v) {
                return Err(format!("value {v} not allowed at {x}"));
            }
        }
        for x in 0..self.domain.len() {
            for y in self.domain.up_row(x).ones() {
                if !self.values.le(map[x], map[y]) {
                    return Err(format!("{x} <= {y} but images are not ordered"));
                }
            }
        }
        Ok(())
    }
}

/// Outcome of a completed search: a solution if one exists, plus the number
/// of assignments tried. `map == None` is an exhaustion certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub map: Option<Vec<usize>>,
    pub nodes: u64,
}

pub fn find_map(problem: &MapProblem<'_>, node_budget: u64) -> Result<SearchOutcome> {
    let mut found = None;
    let nodes = for_each_map(problem, node_budget, |m| {
        found = Some(m.to_vec());
        ControlFlow::Break(())
    })?;
    Ok(SearchOutcome { map: found, nodes })
}

/// Calls `visit` on every solution until it breaks. Returns the node count.
pub fn for_each_map<F>(problem: &MapProblem<'_>, node_budget: u64, mut visit: F) -> Result<u64>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let n = problem.domain.len();
    assert_eq!(problem.allowed.len(), n, "one allowed set per domain element");
    let mut state = State {
        problem,
        budget: node_budget,
        nodes: 0,
        assigned: vec![usize::MAX; n],
        related: (0..n)
            .map(|x| {
                let mut r = problem.domain.up_row(x).clone();
                r.union_with(problem.domain.down_row(x));
                r.set(x, false);
                r.ones().collect()
            })
            .collect(),
    };
    let mut cand = problem.allowed.clone();
    // Values with no allowed image anywhere below or above can be discarded up front.
    if !prune_initial(problem, &mut cand) {
        return Ok(0);
    }
    let _ = state.solve(&mut cand, 0, &mut visit)?;
    Ok(state.nodes)
}

/// Arc consistency over comparable pairs: drop a candidate `v` at `x` when some
/// comparable `z` has no candidate compatible with it. Returns false if some
/// element is left without candidates.
fn prune_initial(problem: &MapProblem<'_>, cand: &mut [FixedBitSet]) -> bool {
    let d = problem.domain;
    let vals = problem.values;
    loop {
        let mut changed = false;
        for x in 0..d.len() {
            let mut keep = cand[x].clone();
            for v in cand[x].ones() {
                let ok_up = d.up_row(x).ones().all(|z| z == x || !cand[z].is_disjoint(&vals.up[v]));
                let ok_down = ok_up
                    && d.down_row(x).ones().all(|z| z == x || !cand[z].is_disjoint(&vals.down[v]));
                if !ok_down {
                    keep.set(v, false);
                }
            }
            if keep.count_ones(..) == 0 {
                return false;
            }
            if keep != cand[x] {
                cand[x] = keep;
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
}

struct State<'p, 'a> {
    problem: &'p MapProblem<'a>,
    budget: u64,
    nodes: u64,
    assigned: Vec<usize>,
    related: Vec<Vec<usize>>,
}

impl State<'_, '_> {
    fn solve<F>(&mut self, cand: &mut [FixedBitSet], depth: usize, visit: &mut F) -> Result<ControlFlow<()>>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let n = self.assigned.len();
        if depth == n {
            return Ok(visit(&self.assigned));
        }
        let x = (0..n)
            .filter(|&x| self.assigned[x] == usize::MAX)
            .min_by_key(|&x| (cand[x].count_ones(..), x))
            .unwrap();
        let mut values: Vec<usize> = cand[x].ones().collect();
        if let Some(pri) = &self.problem.priority {
            values.sort_by_key(|&v| (pri[v], v));
        }
        let vals = self.problem.values;
        for v in values {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded { what: "search nodes", limit: self.budget });
            }
            let mut next = cand.to_vec();
            let mut dead = false;
            for &z in &self.related[x] {
                if self.assigned[z] != usize::MAX {
                    continue;
                }
                if self.problem.domain.leq(x, z) {
                    next[z].intersect_with(&vals.up[v]);
                } else {
                    next[z].intersect_with(&vals.down[v]);
                }
                if next[z].is_clear() {
                    dead = true;
                    break;
                }
            }
            if dead {
                continue;
            }
            self.assigned[x] = v;
            let flow = self.solve(&mut next, depth + 1, visit)?;
            self.assigned[x] = usize::MAX;
            if flow.is_break() {
                return Ok(flow);
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_count(problem: &MapProblem<'_>) -> usize {
        let n = problem.domain.len();
        let m = problem.values.len();
        let mut count = 0;
        let mut map = vec![0usize; n];
        loop {
            if problem.check(&map).is_ok() {
                count += 1;
            }
            let mut i = 0;
            while i < n {
                map[i] += 1;
                if map[i] < m {
                    break;
                }
                map[i] = 0;
                i += 1;
            }
            if i == n {
                return count;
            }
        }
    }

    #[test]
    fn counts_match_brute_force() {
        let fence = Poset::from_covers(4, &[(0, 1), (2, 1), (2, 3)]).unwrap();
        let c3 = Poset::chain(3);
        let two = Poset::antichain(2);
        for dom in [&fence, &c3, &two] {
            for cod in [&fence, &c3, &two] {
                let vo = ValueOrder::from_poset(cod);
                let problem = MapProblem::unrestricted(dom, &vo);
                let mut count = 0;
                for_each_map(&problem, u64::MAX, |m| {
                    assert!(problem.check(m).is_ok());
                    count += 1;
                    ControlFlow::Continue(())
                })
                .unwrap();
                assert_eq!(count, brute_force_count(&problem));
            }
        }
    }

    #[test]
    fn fixed_point_free_on_antichain() {
        let p = Poset::antichain(2);
        let vo = ValueOrder::from_poset(&p);
        let mut problem = MapProblem::unrestricted(&p, &vo);
        for x in 0..2 {
            problem.allowed[x].set(x, false);
        }
        let out = find_map(&problem, 1000).unwrap();
        assert_eq!(out.map, Some(vec![1, 0]));
    }

    #[test]
    fn chain_has_no_fixed_point_free_map() {
        let p = Poset::chain(4);
        let vo = ValueOrder::from_poset(&p);
        let mut problem = MapProblem::unrestricted(&p, &vo);
        for x in 0..4 {
            problem.allowed[x].set(x, false);
        }
        assert_eq!(find_map(&problem, 1000).unwrap().map, None);
    }

    #[test]
    fn budget_is_reported() {
        let p = Poset::antichain(6);
        let vo = ValueOrder::from_poset(&p);
        let problem = MapProblem::unrestricted(&p, &vo);
        let err = for_each_map(&problem, 10, |_| ControlFlow::Continue(())).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { what: "search nodes", limit: 10 });
    }
}
