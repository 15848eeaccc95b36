//! Finite lattices: recognition, ideals and filters, initial segments, the
//! lattice `C_L(T)` of convex sublattices, Boolean embeddings, congruences and
//! quotients.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::convex::{DerivedPoset, format_members};
use crate::order::{MonotoneMap, Poset};
use crate::subset::{self, Subset};
use crate::{Budget, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    order: Poset,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
}

/// Least element of `candidates`, i.e. the one below all others.
fn least_of(p: &Poset, candidates: &fixedbitset::FixedBitSet) -> Option<usize> {
    candidates.ones().find(|&u| candidates.is_subset(p.up_row(u)))
}

fn greatest_of(p: &Poset, candidates: &fixedbitset::FixedBitSet) -> Option<usize> {
    candidates.ones().find(|&u| candidates.is_subset(p.down_row(u)))
}

/// Fills join and meet tables, or reports a pair without a least upper or
/// greatest lower bound.
pub fn as_lattice(p: &Poset) -> Result<Lattice> {
    let n = p.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut join = vec![0; n * n];
    let mut meet = vec![0; n * n];
    for x in 0..n {
        for y in x..n {
            let mut ub = p.up_row(x).clone();
            ub.intersect_with(p.up_row(y));
            let j = least_of(p, &ub).ok_or(Error::NotALattice { x, y, reason: "no join" })?;
            let mut lb = p.down_row(x).clone();
            lb.intersect_with(p.down_row(y));
            let m = greatest_of(p, &lb).ok_or(Error::NotALattice { x, y, reason: "no meet" })?;
            join[x * n + y] = j;
            join[y * n + x] = j;
            meet[x * n + y] = m;
            meet[y * n + x] = m;
        }
    }
    let bottom = p.bottom().expect("finite lattice has a least element");
    let top = p.top().expect("finite lattice has a greatest element");
    Ok(Lattice { order: p.clone(), join, meet, bottom, top })
}

impl Lattice {
    pub fn order(&self) -> &Poset {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.order.leq(x, y)
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.len() + y]
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.len() + y]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Join of a set of elements; the bottom for the empty set.
    pub fn join_all<I: IntoIterator<Item = usize>>(&self, xs: I) -> usize {
        xs.into_iter().fold(self.bottom, |a, x| self.join(a, x))
    }

    /// Meet of a set of elements; the top for the empty set.
    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, xs: I) -> usize {
        xs.into_iter().fold(self.top, |a, x| self.meet(a, x))
    }

    pub fn dual(&self) -> Lattice {
        Lattice {
            order: self.order.dual(),
            join: self.meet.clone(),
            meet: self.join.clone(),
            bottom: self.top,
            top: self.bottom,
        }
    }

    /// Least element of a packed nonempty subset that is closed under meets.
    pub fn min_of(&self, s: Subset) -> usize {
        self.meet_all(subset::iter(s))
    }

    pub fn is_sublattice(&self, s: Subset) -> bool {
        s != 0
            && subset::iter(s).all(|x| {
                subset::iter(s).all(|y| {
                    subset::contains(s, self.join(x, y)) && subset::contains(s, self.meet(x, y))
                })
            })
    }
}

/// A lattice whose elements are subsets of a host poset.
#[derive(Clone, Debug)]
pub struct SetLattice {
    pub sets: DerivedPoset,
    pub lattice: Lattice,
}

impl SetLattice {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn set(&self, i: usize) -> Subset {
        self.sets.set(i)
    }

    pub fn index_of(&self, s: Subset) -> Option<usize> {
        self.sets.index_of(s)
    }
}

/// `I(P)`: all down-sets of `P`, the empty one included, under inclusion.
pub fn initial_segments(p: &Poset, budget: &Budget) -> Result<SetLattice> {
    subset::check_host(p.len())?;
    let limit = budget.sets;
    let mut seen = HashSet::from([0 as Subset]);
    let mut queue = VecDeque::from([0 as Subset]);
    while let Some(d) = queue.pop_front() {
        for x in subset::iter(p.all() & !d) {
            if subset::is_subset(p.down_mask(x) & !subset::singleton(x), d) {
                let e = d | subset::singleton(x);
                if seen.insert(e) {
                    if seen.len() > limit {
                        return Err(Error::BudgetExceeded { what: "initial segments", limit: limit as u64 });
                    }
                    queue.push_back(e);
                }
            }
        }
    }
    let mut sets: Vec<Subset> = seen.into_iter().collect();
    DerivedPoset::sort_sets(&mut sets);
    let sets = DerivedPoset::by_inclusion(p, sets);
    let lattice = as_lattice(sets.order())?;
    for i in 0..sets.len() {
        for j in 0..sets.len() {
            let (a, b) = (sets.set(i), sets.set(j));
            if sets.set(lattice.join(i, j)) != a | b || sets.set(lattice.meet(i, j)) != a & b {
                return Err(Error::Inconsistent("initial segments not closed under union and intersection".into()));
            }
        }
    }
    Ok(SetLattice { sets, lattice })
}

/// `Id(T)` and `Fi(T)`, both ordered by inclusion. In a finite lattice every
/// ideal is `↓x` and every filter is `↑x`; the join formulas
/// `A ∨ B = ↓{a ∨ b}` and `A ∨ B = ↑{a ∧ b}` are checked against the order.
pub fn ideals_filters(t: &Lattice) -> Result<(SetLattice, SetLattice)> {
    let p = t.order();
    subset::check_host(p.len())?;
    let build = |up: bool, principal: &dyn Fn(usize) -> Subset, combine: &dyn Fn(usize, usize) -> usize| -> Result<SetLattice> {
        let mut sets: Vec<Subset> = (0..t.len()).map(principal).collect();
        DerivedPoset::sort_sets(&mut sets);
        let sets = DerivedPoset::by_inclusion(p, sets);
        let lattice = as_lattice(sets.order())?;
        for i in 0..sets.len() {
            for j in 0..sets.len() {
                let (a, b) = (sets.set(i), sets.set(j));
                let mut gen = 0;
                for x in subset::iter(a) {
                    for y in subset::iter(b) {
                        gen |= subset::singleton(combine(x, y));
                    }
                }
                let formula = if up {
                    p.up_set(gen)
                } else {
                    p.down_set(gen)
                };
                if sets.set(lattice.join(i, j)) != formula || sets.set(lattice.meet(i, j)) != a & b {
                    return Err(Error::Inconsistent("ideal/filter join formula disagrees with order".into()));
                }
            }
        }
        Ok(SetLattice { sets, lattice })
    };
    let ideals = build(false, &|x| p.down_mask(x), &|x, y| t.join(x, y))?;
    let filters = build(true, &|x| p.up_mask(x), &|x, y| t.meet(x, y))?;
    Ok((ideals, filters))
}

/// An element of `K(T)`: an ideal and a filter that meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KPair {
    pub ideal: Subset,
    pub filter: Subset,
    pub core: Subset,
}

/// `C_L(T)` with its lattice structure and the pairs of `K(T)`.
#[derive(Clone, Debug)]
pub struct CLLattice {
    pub host: Lattice,
    pub sets: DerivedPoset,
    pub lattice: Lattice,
    /// `kpairs[i]` is `(↓S, ↑S)` for the `i`-th convex sublattice `S`.
    pub kpairs: Vec<KPair>,
}

impl CLLattice {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn set(&self, i: usize) -> Subset {
        self.sets.set(i)
    }

    pub fn index_of(&self, s: Subset) -> Option<usize> {
        self.sets.index_of(s)
    }

    pub fn singleton(&self, x: usize) -> usize {
        self.sets.singleton(x).expect("singletons are convex sublattices")
    }
}

/// `((↓A) ∨ (↓B)) ∩ (↑A ∩ ↑B)` with the ideal join `↓{a ∨ b}`.
pub fn formula_join(t: &Lattice, a: Subset, b: Subset) -> Subset {
    let p = t.order();
    let mut gen = 0;
    for x in subset::iter(p.down_set(a)) {
        for y in subset::iter(p.down_set(b)) {
            gen |= subset::singleton(t.join(x, y));
        }
    }
    p.down_set(gen) & p.up_set(a) & p.up_set(b)
}

/// `(↓A ∩ ↓B) ∩ ((↑A) ∧ (↑B))`, the meet in `Fi(T)*` being `↑{a ∧ b}`.
pub fn formula_meet(t: &Lattice, a: Subset, b: Subset) -> Subset {
    let p = t.order();
    let mut gen = 0;
    for x in subset::iter(p.up_set(a)) {
        for y in subset::iter(p.up_set(b)) {
            gen |= subset::singleton(t.meet(x, y));
        }
    }
    p.down_set(a) & p.down_set(b) & p.up_set(gen)
}

/// Builds `C_L(T)` from `K(T)`: the pair `(↓x, ↑y)` meets iff `y <= x`, and its
/// intersection is the interval `[y, x]`. Joins and meets read off the
/// bi-domination order are checked against the closed formulas, and every pair
/// is checked to be recovered from its intersection.
pub fn convex_sublattices(t: &Lattice, budget: &Budget) -> Result<CLLattice> {
    let p = t.order();
    subset::check_host(p.len())?;
    let mut pairs = Vec::new();
    for x in 0..t.len() {
        for y in p.down_row(x).ones() {
            let (ideal, filter) = (p.down_mask(x), p.up_mask(y));
            pairs.push(KPair { ideal, filter, core: ideal & filter });
        }
    }
    if pairs.len() > budget.sets {
        return Err(Error::BudgetExceeded { what: "convex sublattices", limit: budget.sets as u64 });
    }
    pairs.sort_by_key(|k| (k.core.count_ones(), k.core));
    for k in &pairs {
        if p.down_set(k.core) != k.ideal || p.up_set(k.core) != k.filter {
            return Err(Error::Inconsistent(format!(
                "K(T) pair not recovered from {{{}}}",
                format_members(k.core)
            )));
        }
    }
    let sets = DerivedPoset::by_bidomination(p, pairs.iter().map(|k| k.core).collect());
    let lattice = as_lattice(sets.order()).map_err(|e| Error::Inconsistent(format!("C_L(T) is not a lattice: {e}")))?;
    for i in 0..sets.len() {
        for j in i..sets.len() {
            let (a, b) = (sets.set(i), sets.set(j));
            if sets.set(lattice.join(i, j)) != formula_join(t, a, b) {
                return Err(Error::Inconsistent(format!(
                    "join formula disagrees with order on {{{}}}, {{{}}}",
                    format_members(a),
                    format_members(b)
                )));
            }
            if sets.set(lattice.meet(i, j)) != formula_meet(t, a, b) {
                return Err(Error::Inconsistent(format!(
                    "meet formula disagrees with order on {{{}}}, {{{}}}",
                    format_members(a),
                    format_members(b)
                )));
            }
        }
    }
    Ok(CLLattice { host: t.clone(), sets, lattice, kpairs: pairs })
}

/// An order embedding of `B_k` into `target`, indexed by subset bitmask, or
/// `None` after exhausting the search.
pub fn boolean_embedding_search(target: &Poset, k: usize, budget: &Budget) -> Result<Option<Vec<usize>>> {
    if k > budget.max_boolean_k {
        return Err(Error::BudgetExceeded { what: "Boolean lattice rank", limit: budget.max_boolean_k as u64 });
    }
    let size = 1usize << k;
    if size > target.len() {
        return Ok(None);
    }
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by_key(|&y| (y.count_ones(), y));
    let heights = target.heights();
    let mut cands: Vec<usize> = (0..target.len()).collect();
    cands.sort_by_key(|&v| (heights[v], v));
    let mut f = vec![usize::MAX; size];
    let mut nodes = 0u64;
    if embed_rec(target, &order, &cands, 0, &mut f, &mut nodes, budget.nodes)? {
        Ok(Some(f))
    } else {
        Ok(None)
    }
}

fn embed_rec(
    target: &Poset,
    order: &[usize],
    cands: &[usize],
    depth: usize,
    f: &mut [usize],
    nodes: &mut u64,
    limit: u64,
) -> Result<bool> {
    if depth == order.len() {
        return Ok(true);
    }
    let y = order[depth];
    for &v in cands {
        *nodes += 1;
        if *nodes > limit {
            return Err(Error::BudgetExceeded { what: "search nodes", limit });
        }
        let fits = order[..depth].iter().all(|&z| {
            let w = f[z];
            (z & !y == 0) == target.leq(w, v) && (y & !z == 0) == target.leq(v, w)
        });
        if fits {
            f[y] = v;
            if embed_rec(target, order, cands, depth + 1, f, nodes, limit)? {
                return Ok(true);
            }
            f[y] = usize::MAX;
        }
    }
    Ok(false)
}

/// Checks the three sequence conditions and returns `f(X) = ⋁{y_n : n ∈ X}`
/// indexed by bitmask, verified to be an order embedding of `B_k`.
pub fn embedding_from_sequences(t: &Lattice, xs: &[usize], ys: &[usize]) -> Result<Vec<usize>> {
    if xs.len() != ys.len() {
        return Err(Error::ArityMismatch { expected: xs.len(), got: ys.len() });
    }
    let k = xs.len();
    if let Some(&bad) = xs.iter().chain(ys).find(|&&v| v >= t.len()) {
        return Err(Error::IndexOutOfRange { index: bad, size: t.len() });
    }
    if (1..k).any(|n| !t.order().lt(xs[n], xs[n - 1])) {
        return Err(Error::ConditionViolated("i"));
    }
    let mut acc = t.bottom();
    for n in 0..k {
        if t.leq(ys[n], t.join(xs[n], acc)) {
            return Err(Error::ConditionViolated("ii"));
        }
        acc = t.join(acc, ys[n]);
    }
    if (1..k).any(|n| !t.leq(ys[n], xs[n - 1])) {
        return Err(Error::ConditionViolated("iii"));
    }
    let f: Vec<usize> = (0..1usize << k)
        .map(|mask| t.join_all((0..k).filter(|&n| mask >> n & 1 == 1).map(|n| ys[n])))
        .collect();
    for a in 0..f.len() {
        for b in 0..f.len() {
            if (a & !b == 0) != t.leq(f[a], f[b]) {
                return Err(Error::Inconsistent("sequence map is not an order embedding".into()));
            }
        }
    }
    Ok(f)
}

/// Backtracking search for sequences satisfying the three conditions,
/// choosing `y_n` and then `x_n` at each step.
pub fn find_embedding_sequences(t: &Lattice, k: usize, budget: &Budget) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let mut xs = Vec::with_capacity(k);
    let mut ys = Vec::with_capacity(k);
    let mut nodes = 0u64;
    if k == 0 {
        return Ok(Some((xs, ys)));
    }
    if seq_rec(t, k, &mut xs, &mut ys, t.bottom(), &mut nodes, budget.nodes)? {
        Ok(Some((xs, ys)))
    } else {
        Ok(None)
    }
}

fn seq_rec(
    t: &Lattice,
    k: usize,
    xs: &mut Vec<usize>,
    ys: &mut Vec<usize>,
    acc: usize,
    nodes: &mut u64,
    limit: u64,
) -> Result<bool> {
    let n = ys.len();
    if n == k {
        return Ok(true);
    }
    for y in 0..t.len() {
        if n > 0 && !t.leq(y, xs[n - 1]) {
            continue;
        }
        for x in 0..t.len() {
            if n > 0 && !t.order().lt(x, xs[n - 1]) {
                continue;
            }
            if t.leq(y, t.join(x, acc)) {
                continue;
            }
            *nodes += 1;
            if *nodes > limit {
                return Err(Error::BudgetExceeded { what: "search nodes", limit });
            }
            ys.push(y);
            xs.push(x);
            if seq_rec(t, k, xs, ys, t.join(acc, y), nodes, limit)? {
                return Ok(true);
            }
            xs.pop();
            ys.pop();
        }
    }
    Ok(false)
}

/// A partition of a lattice compatible with join and meet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    block_of: Vec<usize>,
}

impl Congruence {
    /// Validates compatibility; blocks are renumbered by their least index.
    pub fn new(t: &Lattice, block_of: Vec<usize>) -> Result<Congruence> {
        if block_of.len() != t.len() {
            return Err(Error::InvalidCongruence(format!(
                "partition covers {} elements, lattice has {}",
                block_of.len(),
                t.len()
            )));
        }
        let c = Congruence { block_of: normalize(&block_of) };
        let n = t.len();
        for x in 0..n {
            for x2 in 0..n {
                if c.block_of[x] != c.block_of[x2] {
                    continue;
                }
                for z in 0..n {
                    if c.block_of[t.join(x, z)] != c.block_of[t.join(x2, z)]
                        || c.block_of[t.meet(x, z)] != c.block_of[t.meet(x2, z)]
                    {
                        return Err(Error::InvalidCongruence(format!(
                            "{x} and {x2} are identified but their translations by {z} are not"
                        )));
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn block_count(&self) -> usize {
        self.block_of.iter().max().map_or(0, |&m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Subset> {
        let mut out = vec![0; self.block_count()];
        for (x, &b) in self.block_of.iter().enumerate() {
            out[b] |= subset::singleton(x);
        }
        out
    }
}

fn normalize(block_of: &[usize]) -> Vec<usize> {
    let mut rename = std::collections::HashMap::new();
    block_of
        .iter()
        .map(|&b| {
            let next = rename.len();
            *rename.entry(b).or_insert(next)
        })
        .collect()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }

    fn labels(&mut self) -> Vec<usize> {
        (0..self.0.len()).map(|x| self.find(x)).collect()
    }
}

/// Smallest congruence identifying every pair in `pairs`: an equivalence
/// closed under all translations `x ↦ x ∨ z` and `x ↦ x ∧ z`.
fn generated_congruence(t: &Lattice, pairs: &[(usize, usize)]) -> Vec<usize> {
    let n = t.len();
    let mut uf = UnionFind::new(n);
    let mut work: Vec<(usize, usize)> = pairs.to_vec();
    for &(a, b) in pairs {
        uf.union(a, b);
    }
    while let Some((a, b)) = work.pop() {
        for z in 0..n {
            for (u, v) in [(t.join(a, z), t.join(b, z)), (t.meet(a, z), t.meet(b, z))] {
                if uf.union(u, v) {
                    work.push((u, v));
                }
            }
        }
    }
    normalize(&uf.labels())
}

/// All congruences of `t`, as joins of principal congruences, sorted.
pub fn congruences(t: &Lattice, budget: &Budget) -> Result<Vec<Congruence>> {
    let n = t.len();
    if n > budget.congruence_elems {
        return Err(Error::BudgetExceeded { what: "congruence host size", limit: budget.congruence_elems as u64 });
    }
    let mut principal: BTreeSet<Vec<usize>> = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            principal.insert(generated_congruence(t, &[(a, b)]));
        }
    }
    let identity: Vec<usize> = (0..n).collect();
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(theta) = queue.pop_front() {
        for pi in &principal {
            let mut uf = UnionFind::new(n);
            for x in 0..n {
                uf.union(x, first_with(&theta, theta[x]));
                uf.union(x, first_with(pi, pi[x]));
            }
            let joined = normalize(&uf.labels());
            if found.insert(joined.clone()) {
                queue.push_back(joined);
            }
        }
    }
    found.into_iter().map(|b| Congruence::new(t, b)).collect()
}

fn first_with(labels: &[usize], label: usize) -> usize {
    labels.iter().position(|&l| l == label).unwrap()
}

/// The quotient lattice `T/θ` (block `i` is element `i`) and the map `q`.
pub fn quotient(t: &Lattice, theta: &Congruence) -> Result<(Lattice, MonotoneMap)> {
    let theta = Congruence::new(t, theta.block_of.clone())?;
    let m = theta.block_count();
    let reps: Vec<usize> = (0..m).map(|b| first_with(&theta.block_of, b)).collect();
    let q_order = Poset::from_leq(m, |a, b| theta.block_of(t.join(reps[a], reps[b])) == b)
        .map_err(|e| Error::InvalidCongruence(e.to_string()))?;
    let q_lattice = as_lattice(&q_order).map_err(|e| Error::InvalidCongruence(e.to_string()))?;
    let q = MonotoneMap::new(t.order(), &q_order, theta.block_of.clone())?;
    for x in 0..t.len() {
        for y in 0..t.len() {
            if q.apply(t.join(x, y)) != q_lattice.join(q.apply(x), q.apply(y))
                || q.apply(t.meet(x, y)) != q_lattice.meet(q.apply(x), q.apply(y))
            {
                return Err(Error::Inconsistent("quotient map is not a homomorphism".into()));
            }
        }
    }
    Ok((q_lattice, q))
}

/// Least fixed point of a monotone endomap, by iteration from the bottom.
pub fn tarski_fixpoint(t: &Lattice, f: &MonotoneMap) -> usize {
    let mut x = t.bottom();
    loop {
        let y = f.apply(x);
        if y == x {
            return x;
        }
        x = y;
    }
}
