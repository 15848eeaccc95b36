//! Order-preserving selections: a member chosen from each convex set so that
//! bi-domination between sets implies order between the chosen members.
//!
//! Covers the exhaustive decision on `C(P)`, greedy selections on chains,
//! least-element and weaving selections on `C_L(T)`, selections on initial
//! segments of lexicographic sums, and transfers along products, retractions
//! and quotients. Every constructed map is verified before it is returned.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::convex::{bidom_leq, conv, enumerate_convex_poset, format_members};
use crate::fixpoint::{Property, Verdict, Witness, retract_search};
use crate::lattice::{CLLattice, Congruence, Lattice, SetLattice, convex_sublattices, initial_segments, quotient};
use crate::order::{LexSum, MonotoneMap, Poset};
use crate::search::{MapProblem, ValueOrder, find_map};
use crate::subset::{self, Subset};
use crate::zoo;
use crate::{Budget, Error, Result};

/// `values[i]` is the member chosen from `sets[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionMap {
    pub sets: Vec<Subset>,
    pub values: Vec<usize>,
}

impl SelectionMap {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// The member chosen from `s`, if `s` is in the domain.
    pub fn value_for(&self, s: Subset) -> Option<usize> {
        self.sets.iter().position(|&t| t == s).map(|i| self.values[i])
    }

    pub fn pairs(&self) -> Vec<(Subset, usize)> {
        self.sets.iter().copied().zip(self.values.iter().copied()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The value chosen for set `i` is not a member of it.
    NotMember(usize),
    /// Set `i` is below set `j` but the chosen values are not ordered.
    NotMonotone(usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotMember(i) => write!(f, "value of set {i} is not a member"),
            Violation::NotMonotone(i, j) => write!(f, "sets {i} <= {j} but their values are not ordered"),
        }
    }
}

/// Checks membership, then monotonicity over all bi-domination comparable
/// pairs, in index order.
pub fn verify_selection(host: &Poset, m: &SelectionMap) -> std::result::Result<(), Violation> {
    if let Some(i) = (0..m.len()).find(|&i| m.values[i] >= host.len() || !subset::contains(m.sets[i], m.values[i])) {
        return Err(Violation::NotMember(i));
    }
    for i in 0..m.len() {
        for j in 0..m.len() {
            if i != j && bidom_leq(host, m.sets[i], m.sets[j]) && !host.leq(m.values[i], m.values[j]) {
                return Err(Violation::NotMonotone(i, j));
            }
        }
    }
    Ok(())
}

fn verified(host: &Poset, m: SelectionMap, what: &str) -> Result<SelectionMap> {
    verify_selection(host, &m).map_err(|v| Error::Inconsistent(format!("{what}: {v}")))?;
    Ok(m)
}

/// Height-2 poset where every element is comparable to at least two others.
pub fn is_bipartite_degree_two(p: &Poset) -> bool {
    !p.is_empty()
        && (0..p.len()).all(|x| {
            let minimal = p.down_row(x).count_ones(..) == 1;
            let maximal = p.up_row(x).count_ones(..) == 1;
            (minimal || maximal) && p.comparability_degree(x) >= 2
        })
}

/// Largest poset for which the bounded-crown retract shortcut is attempted.
const CROWN_RETRACT_MAX: usize = 12;

/// Decides whether `C(P)` has an order-preserving selection.
///
/// Shortcuts, unless disabled: a bipartite poset with all comparability
/// degrees at least two has none, and neither does any poset retracting onto
/// the 6-crown with bounds added (selections pass to retracts).
pub fn decide_csp(p: &Poset, budget: &Budget, no_fast_path: bool) -> Result<Verdict> {
    let negative = |witness, fast_path, nodes| Verdict { property: Property::Csp, holds: false, witness, fast_path, nodes };
    if !no_fast_path {
        if is_bipartite_degree_two(p) {
            return Ok(negative(Witness::Exhausted, Some("bipartite degree two"), 0));
        }
        if (8..=CROWN_RETRACT_MAX).contains(&p.len()) {
            let crown = zoo::generate("crown_bounded", &[6])?.poset;
            match retract_search(p, &crown, budget) {
                Ok(v) if v.holds => return Ok(negative(v.witness, Some("bounded crown retract"), v.nodes)),
                Ok(_) | Err(Error::BudgetExceeded { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    let c = enumerate_convex_poset(p, budget)?;
    let values = ValueOrder::from_poset(p);
    let heights = p.heights();
    let problem = MapProblem {
        domain: c.order(),
        values: &values,
        allowed: (0..c.len())
            .map(|i| {
                let mut b = FixedBitSet::with_capacity(p.len());
                subset::iter(c.set(i)).for_each(|x| b.insert(x));
                b
            })
            .collect(),
        priority: Some(heights.iter().map(|&h| h as i64).collect()),
    };
    let out = find_map(&problem, budget.nodes)?;
    match out.map {
        Some(values) => {
            let m = verified(p, SelectionMap { sets: c.sets().to_vec(), values }, "selection on C(P)")?;
            Ok(Verdict {
                property: Property::Csp,
                holds: true,
                witness: Witness::Selection(m.pairs()),
                fast_path: None,
                nodes: out.nodes,
            })
        }
        None => Ok(negative(Witness::Exhausted, None, out.nodes)),
    }
}

/// Greedy selection on a chain `C_1 <= C_2 <= ...` of nonempty convex sets:
/// the least-index member of `C_1`, then the least-index member of
/// `C_{i+1} ∩ ↑a_i`, which is nonempty because `C_i ⊆ ↓C_{i+1}`.
pub fn chain_selection(p: &Poset, chain: &[Subset]) -> Result<SelectionMap> {
    for (i, &s) in chain.iter().enumerate() {
        if s == 0 || s & !p.all() != 0 || conv(p, s) != s {
            return Err(Error::NotAChain(i));
        }
        if i > 0 && !bidom_leq(p, chain[i - 1], s) {
            return Err(Error::NotAChain(i));
        }
    }
    let mut values = Vec::with_capacity(chain.len());
    let mut above = p.all();
    for &s in chain {
        let a = subset::iter(s & above).next().ok_or_else(|| Error::Inconsistent("no member above the previous choice".into()))?;
        values.push(a);
        above = p.up_mask(a);
    }
    verified(p, SelectionMap { sets: chain.to_vec(), values }, "chain selection")
}

/// `S ↦ min S` on `C_L(T)`.
pub fn min_selection(cl: &CLLattice) -> SelectionMap {
    let values = (0..cl.len()).map(|i| cl.host.min_of(cl.set(i))).collect();
    SelectionMap { sets: cl.sets.sets().to_vec(), values }
}

/// The least-element selection of the dual lattice: `S ↦ max S`.
pub fn dual_min_selection(cl: &CLLattice) -> SelectionMap {
    let dual = cl.host.dual();
    let values = (0..cl.len()).map(|i| dual.min_of(cl.set(i))).collect();
    SelectionMap { sets: cl.sets.sets().to_vec(), values }
}

/// Stage-by-stage selection on `C_L(T)` driven by an enumeration `x_0, x_1, ...`
/// of `T`. Stage `k` handles the sets containing `x_k` not handled before and
/// maps such a `C` to `(x_k ∧ φ⁺(C)) ∨ φ⁻(C)`, where `φ⁺(C)` is the meet of the
/// values on handled sets strictly above `C` (the top if none) and `φ⁻(C)` the
/// join of the values on handled sets strictly below (the bottom if none).
/// Membership and monotonicity of the partial map are checked after every stage.
pub fn weaving_selection(cl: &CLLattice, enumeration: &[usize]) -> Result<SelectionMap> {
    let t = &cl.host;
    let mut seen = vec![false; t.len()];
    if enumeration.len() != t.len() || enumeration.iter().any(|&x| x >= t.len() || std::mem::replace(&mut seen[x], true)) {
        return Err(Error::InvalidParts("enumeration is not a permutation of the lattice".into()));
    }
    let order = cl.sets.order();
    let mut value: Vec<Option<usize>> = vec![None; cl.len()];
    for &x in enumeration {
        let class: Vec<usize> = (0..cl.len())
            .filter(|&i| value[i].is_none() && subset::contains(cl.set(i), x))
            .collect();
        let staged: Vec<(usize, usize)> = class
            .iter()
            .map(|&c| {
                let handled = |d: usize| value[d].filter(|_| d != c);
                let plus = t.meet_all((0..cl.len()).filter(|&d| order.lt(c, d)).filter_map(handled));
                let minus = t.join_all((0..cl.len()).filter(|&d| order.lt(d, c)).filter_map(handled));
                (c, t.join(t.meet(x, plus), minus))
            })
            .collect();
        for (c, v) in staged {
            value[c] = Some(v);
        }
        check_partial(cl, &value).map_err(|v| Error::Inconsistent(format!("weaving stage for element {x}: {v}")))?;
    }
    let values = value.into_iter().map(|v| v.expect("every set contains some element")).collect();
    verified(t.order(), SelectionMap { sets: cl.sets.sets().to_vec(), values }, "weaving selection")
}

fn check_partial(cl: &CLLattice, value: &[Option<usize>]) -> std::result::Result<(), Violation> {
    let t = &cl.host;
    for (i, v) in value.iter().enumerate() {
        if let Some(v) = *v {
            if !subset::contains(cl.set(i), v) {
                return Err(Violation::NotMember(i));
            }
            for j in cl.sets.order().up_row(i).ones() {
                if let Some(w) = value[j] {
                    if !t.leq(v, w) {
                        return Err(Violation::NotMonotone(i, j));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `I(Q)` together with `C_L(I(Q))`; selections on initial-segment lattices
/// refer to segments by their index in the first component.
pub fn segment_lattices(q: &Poset, budget: &Budget) -> Result<(SetLattice, CLLattice)> {
    let segments = initial_segments(q, budget)?;
    let cl = convex_sublattices(&segments.lattice, budget)?;
    Ok((segments, cl))
}

/// Selection on `C_L(I(Σ P_α))` from selections on every `C_L(I(P_α))` and on
/// `C_L(I(A))`. For `T'` with `A' = s(θ(T'))`, `θ(T') = {p[I] : I ∈ T'}`, the
/// value is the union of the blocks of non-maximal members of `A'` and, for
/// each maximal `α`, the segment `s_α({I ∩ P_α : I ∈ T'})`.
pub fn lexsum_selection(l: &LexSum, block_selections: &[SelectionMap], index_selection: &SelectionMap, budget: &Budget) -> Result<SelectionMap> {
    if block_selections.len() != l.blocks.len() {
        return Err(Error::InvalidParts(format!(
            "{} block selections for {} blocks",
            block_selections.len(),
            l.blocks.len()
        )));
    }
    let (index_segs, _) = segment_lattices(&l.index, budget)?;
    let block_segs = l.blocks.iter().map(|b| initial_segments(b, budget)).collect::<Result<Vec<_>>>()?;
    let (sum_segs, sum_cl) = segment_lattices(&l.sum, budget)?;
    let missing = |what: &str, s: Subset| Error::InvalidParts(format!("{what} has no value for {{{}}}", format_members(s)));

    let mut values = Vec::with_capacity(sum_cl.len());
    for t_idx in 0..sum_cl.len() {
        let members: Vec<Subset> = subset::iter(sum_cl.set(t_idx)).map(|i| sum_segs.set(i)).collect();
        let theta = members.iter().fold(0, |acc, &seg| {
            acc | subset::singleton(index_segs.index_of(l.project(seg)).expect("projection of a segment is a segment"))
        });
        let a_prime = index_segs.set(index_selection.value_for(theta).ok_or_else(|| missing("index selection", theta))?);
        let mut chosen: Subset = 0;
        for alpha in subset::iter(a_prime) {
            let block = l.block_mask(alpha);
            let is_max = subset::iter(a_prime).all(|beta| beta == alpha || !l.index.leq(alpha, beta));
            if !is_max {
                chosen |= block;
                continue;
            }
            let off = l.offsets[alpha];
            let local = members.iter().fold(0, |acc, &seg| {
                acc | subset::singleton(block_segs[alpha].index_of((seg & block) >> off).expect("trace of a segment on a block is a segment"))
            });
            let seg = block_selections[alpha].value_for(local).ok_or_else(|| missing("block selection", local))?;
            chosen |= block_segs[alpha].set(seg) << off;
        }
        values.push(sum_segs.index_of(chosen).ok_or_else(|| Error::Inconsistent("chosen set is not an initial segment".into()))?);
    }
    verified(sum_cl.host.order(), SelectionMap { sets: sum_cl.sets.sets().to_vec(), values }, "lexicographic sum selection")
}

fn index_by_set(cl: &CLLattice, m: &SelectionMap) -> Result<HashMap<Subset, usize>> {
    if m.len() != cl.len() || (0..cl.len()).any(|i| cl.index_of(m.sets[i]).is_none()) {
        return Err(Error::InvalidParts("selection domain is not C_L of the lattice".into()));
    }
    Ok(m.pairs().into_iter().collect())
}

/// `φ(S) = (φ₀(π₀[S]), φ₁(π₁[S]))` on `C_L(T₀ × T₁)`, where `(i, j)` is element
/// `i * |T₁| + j`. Returns `C_L` of the product and the selection.
pub fn transfer_product(cl0: &CLLattice, m0: &SelectionMap, cl1: &CLLattice, m1: &SelectionMap, budget: &Budget) -> Result<(CLLattice, SelectionMap)> {
    let (f0, f1) = (index_by_set(cl0, m0)?, index_by_set(cl1, m1)?);
    let width = cl1.host.len();
    let product = crate::lattice::as_lattice(&cl0.host.order().direct_product(cl1.host.order()))?;
    let cl = convex_sublattices(&product, budget)?;
    let mut values = Vec::with_capacity(cl.len());
    for i in 0..cl.len() {
        let s = cl.set(i);
        let (mut s0, mut s1) = (0, 0);
        for x in subset::iter(s) {
            s0 |= subset::singleton(x / width);
            s1 |= subset::singleton(x % width);
        }
        let rebuilt = subset::iter(s0).flat_map(|a| subset::iter(s1).map(move |b| a * width + b)).fold(0, |acc, x| acc | subset::singleton(x));
        if rebuilt != s {
            return Err(Error::Inconsistent("convex sublattice of a product is not a product".into()));
        }
        values.push(f0[&s0] * width + f1[&s1]);
    }
    let m = verified(product.order(), SelectionMap { sets: cl.sets.sets().to_vec(), values }, "product selection")?;
    Ok((cl, m))
}

/// `ψ(Y) = r(φ(Conv_P(s[Y])))` for a retraction `s: Q -> P`, `r: P -> Q`.
pub fn transfer_retract(cl_p: &CLLattice, m: &SelectionMap, cl_q: &CLLattice, s: &MonotoneMap, r: &MonotoneMap) -> Result<SelectionMap> {
    let (p, q) = (cl_p.host.order(), cl_q.host.order());
    if s.domain_len() != q.len() || s.codomain_len() != p.len() || r.domain_len() != p.len() || r.codomain_len() != q.len() {
        return Err(Error::InvalidParts("retraction maps do not match the lattices".into()));
    }
    if !s.then(r).is_identity() {
        return Err(Error::NotARetraction("r ∘ s is not the identity".into()));
    }
    let phi = index_by_set(cl_p, m)?;
    let values = (0..cl_q.len())
        .map(|i| {
            let image = conv(p, s.image(cl_q.set(i)));
            phi.get(&image)
                .map(|&v| r.apply(v))
                .ok_or_else(|| Error::Inconsistent(format!("Conv(s[Y]) = {{{}}} is not a convex sublattice", format_members(image))))
        })
        .collect::<Result<Vec<_>>>()?;
    verified(q, SelectionMap { sets: cl_q.sets.sets().to_vec(), values }, "retract selection")
}

/// Result of passing a selection to a quotient `T/θ`.
#[derive(Clone, Debug)]
pub struct QuotientTransfer {
    pub quotient: Lattice,
    pub q: MonotoneMap,
    /// `f(y) = φ(q⁻¹(y))`, with `q ∘ f = id`.
    pub coretraction: MonotoneMap,
    pub cl: CLLattice,
    pub selection: SelectionMap,
}

/// The quotient is a retract through `f = φ ∘ q⁻¹`; the selection is then
/// transferred along the pair `(f, q)`.
pub fn transfer_quotient(cl_p: &CLLattice, m: &SelectionMap, theta: &Congruence, budget: &Budget) -> Result<QuotientTransfer> {
    let phi = index_by_set(cl_p, m)?;
    let (quot, q) = quotient(&cl_p.host, theta)?;
    let blocks = theta.blocks();
    let f_values = blocks
        .iter()
        .map(|b| phi.get(b).copied().ok_or_else(|| Error::Inconsistent("congruence block is not a convex sublattice".into())))
        .collect::<Result<Vec<_>>>()?;
    let f = MonotoneMap::new(quot.order(), cl_p.host.order(), f_values)?;
    if !f.then(&q).is_identity() {
        return Err(Error::NotARetraction("q ∘ f is not the identity".into()));
    }
    let cl = convex_sublattices(&quot, budget)?;
    let selection = transfer_retract(cl_p, m, &cl, &f, &q)?;
    Ok(QuotientTransfer { quotient: quot, q, coretraction: f, cl, selection })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{as_lattice, congruences};
    use crate::zoo::{enumerate_lattices, enumerate_posets, generate};

    fn budget() -> Budget {
        Budget::default()
    }

    fn cl_of(p: &Poset) -> CLLattice {
        convex_sublattices(&as_lattice(p).unwrap(), &budget()).unwrap()
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut v: Vec<usize> = (0..n).collect();
        fn go(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
            if k == v.len() {
                out.push(v.clone());
            }
            for i in k..v.len() {
                v.swap(k, i);
                go(v, k + 1, out);
                v.swap(k, i);
            }
        }
        go(&mut v, 0, &mut out);
        out
    }

    #[test]
    fn csp_examples() {
        for n in 1..=5 {
            assert!(decide_csp(&Poset::chain(n), &budget(), true).unwrap().holds);
        }
        let crown = generate("crown_bounded", &[6]).unwrap().poset;
        let v = decide_csp(&crown, &budget(), true).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness, Witness::Exhausted);
        assert!(decide_csp(&generate("powerset_plus", &[2]).unwrap().poset, &budget(), false).unwrap().holds);
        let v = decide_csp(&generate("powerset_plus", &[3]).unwrap().poset, &budget(), false).unwrap();
        assert!(!v.holds);
        assert_eq!(v.fast_path, Some("bounded crown retract"));
    }

    #[test]
    fn bipartite_shortcut_agrees_with_search() {
        for n in 1..=6 {
            for p in enumerate_posets(n).unwrap() {
                if is_bipartite_degree_two(&p) {
                    assert!(decide_csp(&p, &budget(), false).unwrap().fast_path.is_some());
                    assert!(!decide_csp(&p, &budget(), true).unwrap().holds);
                }
            }
        }
    }

    #[test]
    fn chain_selections() {
        let p = Poset::chain(3);
        let chain: Vec<Subset> = (0..3).map(subset::singleton).collect();
        assert_eq!(chain_selection(&p, &chain).unwrap().values, vec![0, 1, 2]);
        assert_eq!(chain_selection(&p, &[0b110]).unwrap().values, vec![1]);
        assert_eq!(chain_selection(&p, &[0b100, 0b001]), Err(Error::NotAChain(1)));
        assert_eq!(chain_selection(&p, &[0b101]), Err(Error::NotAChain(0)));
    }

    #[test]
    fn least_element_selections() {
        let b2 = generate("boolean", &[2]).unwrap().poset;
        let cl = cl_of(&b2);
        assert_eq!(cl.len(), 9);
        let comparable = (0..9).flat_map(|i| (0..9).map(move |j| (i, j))).filter(|&(i, j)| cl.sets.leq(i, j)).count();
        assert_eq!(comparable, 36);
        assert_eq!(verify_selection(&b2, &min_selection(&cl)), Ok(()));
        assert_eq!(verify_selection(&b2, &dual_min_selection(&cl)), Ok(()));

        let mut bad = min_selection(&cl);
        let i = (0..bad.len()).find(|&i| bad.sets[i] != b2.all() && subset::len(bad.sets[i]) == 1).unwrap();
        let outside = subset::iter(b2.all() & !bad.sets[i]).next().unwrap();
        bad.values[i] = outside;
        assert_eq!(verify_selection(&b2, &bad), Err(Violation::NotMember(i)));
    }

    #[test]
    fn weaving_all_enumerations() {
        for n in 1..=5 {
            for t in enumerate_lattices(n).unwrap() {
                let cl = convex_sublattices(&t, &budget()).unwrap();
                for perm in permutations(n) {
                    let m = weaving_selection(&cl, &perm).unwrap();
                    for i in 0..cl.len() {
                        if subset::contains(cl.set(i), perm[0]) {
                            assert_eq!(m.values[i], perm[0]);
                        }
                    }
                }
            }
        }
        let cl = cl_of(&Poset::chain(2));
        assert!(matches!(weaving_selection(&cl, &[0, 0]), Err(Error::InvalidParts(_))));
    }

    fn segment_selection(q: &Poset) -> SelectionMap {
        min_selection(&segment_lattices(q, &budget()).unwrap().1)
    }

    #[test]
    fn lexsum_examples() {
        let cases = [
            (Poset::chain(2), vec![Poset::antichain(2), Poset::antichain(2)]),
            (Poset::antichain(2), vec![Poset::chain(2), Poset::chain(3)]),
            (Poset::chain(3), vec![Poset::chain(1); 3]),
        ];
        for (index, blocks) in cases {
            let l = LexSum::new(&index, &blocks).unwrap();
            let subs: Vec<SelectionMap> = blocks.iter().map(segment_selection).collect();
            let m = lexsum_selection(&l, &subs, &segment_selection(&index), &budget()).unwrap();
            assert_eq!(m.len(), segment_lattices(&l.sum, &budget()).unwrap().1.len());
        }
        // Singleton blocks: the sum is the index itself, and the index selection is reproduced.
        let index = generate("two_level", &[]).unwrap().poset;
        let l = LexSum::new(&index, &vec![Poset::chain(1); 4]).unwrap();
        let subs = vec![segment_selection(&Poset::chain(1)); 4];
        let idx = segment_selection(&index);
        assert_eq!(lexsum_selection(&l, &subs, &idx, &budget()).unwrap(), idx);
    }

    #[test]
    fn transfers() {
        let c2 = cl_of(&Poset::chain(2));
        let c3 = cl_of(&Poset::chain(3));
        let (grid, m) = transfer_product(&c2, &min_selection(&c2), &c3, &dual_min_selection(&c3), &budget()).unwrap();
        assert_eq!(grid.host.len(), 6);
        assert_eq!(m.len(), grid.len());

        // Retract of B_2 onto the chain ∅ < {1} < {1,2} collapsing {2} to ∅.
        let b2 = cl_of(&generate("boolean", &[2]).unwrap().poset);
        let chain = Poset::chain(3);
        let s = MonotoneMap::new(&chain, b2.host.order(), vec![0, 1, 3]).unwrap();
        let r = MonotoneMap::new(b2.host.order(), &chain, vec![0, 1, 0, 2]).unwrap();
        transfer_retract(&b2, &min_selection(&b2), &c3, &s, &r).unwrap();

        // The 3-chain collapsed to a 2-chain.
        let theta = Congruence::new(&c3.host, vec![0, 0, 1]).unwrap();
        let out = transfer_quotient(&c3, &min_selection(&c3), &theta, &budget()).unwrap();
        assert_eq!(out.quotient.len(), 2);
        assert!(out.coretraction.then(&out.q).is_identity());
    }

    #[test]
    fn quotients_are_retracts() {
        for n in 1..=6 {
            for t in enumerate_lattices(n).unwrap() {
                let cl = convex_sublattices(&t, &budget()).unwrap();
                let m = min_selection(&cl);
                for theta in congruences(&t, &budget()).unwrap() {
                    transfer_quotient(&cl, &m, &theta, &budget()).unwrap();
                }
            }
        }
    }
}
