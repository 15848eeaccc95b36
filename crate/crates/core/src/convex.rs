//! Convex subsets and the bi-domination order.
//!
//! For nonempty `X, Y ⊆ P`, `X <= Y` iff `X ⊆ ↓Y` and `Y ⊆ ↑X`. On arbitrary
//! subsets this is a preorder whose classes are represented by convex
//! envelopes `Conv(X) = ↓X ∩ ↑X`, so `C(P)` is built on convex sets only.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::order::{MonotoneMap, Poset};
use crate::subset::{self, Subset};
use crate::{Budget, Error, Result};

/// `Conv(X) = ↓X ∩ ↑X`, with no emptiness check.
#[inline]
pub fn conv(p: &Poset, xs: Subset) -> Subset {
    p.down_set(xs) & p.up_set(xs)
}

pub fn is_convex(p: &Poset, xs: Subset) -> bool {
    conv(p, xs) == xs
}

/// Bi-domination on arbitrary subsets of the host.
#[inline]
pub fn bidom_leq(p: &Poset, xs: Subset, ys: Subset) -> bool {
    subset::is_subset(xs, p.down_set(ys)) && subset::is_subset(ys, p.up_set(xs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConvexSet {
    host_len: usize,
    members: Subset,
}

impl ConvexSet {
    pub fn new(p: &Poset, members: Subset) -> Result<ConvexSet> {
        subset::check_host(p.len())?;
        if members == 0 {
            return Err(Error::EmptyInput);
        }
        if !subset::is_subset(members, p.all()) {
            let index = (63 - members.leading_zeros()) as usize;
            return Err(Error::IndexOutOfRange { index, size: p.len() });
        }
        if !is_convex(p, members) {
            return Err(Error::Inconsistent(format!(
                "set {{{}}} is not convex",
                format_members(members)
            )));
        }
        Ok(ConvexSet { host_len: p.len(), members })
    }

    pub fn members(&self) -> Subset {
        self.members
    }

    pub fn host_len(&self) -> usize {
        self.host_len
    }
}

pub fn convex_envelope(p: &Poset, xs: Subset) -> Result<ConvexSet> {
    subset::check_host(p.len())?;
    if xs == 0 {
        return Err(Error::EmptyInput);
    }
    ConvexSet::new(p, conv(p, xs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Greater,
    Equal,
    Incomparable,
}

pub fn bidom_compare(p: &Poset, x: &ConvexSet, y: &ConvexSet) -> Result<Comparison> {
    if x.host_len != p.len() || y.host_len != p.len() {
        return Err(Error::HostMismatch);
    }
    let le = bidom_leq(p, x.members, y.members);
    let ge = bidom_leq(p, y.members, x.members);
    Ok(match (le, ge) {
        (true, true) => Comparison::Equal,
        (true, false) => Comparison::Less,
        (false, true) => Comparison::Greater,
        (false, false) => Comparison::Incomparable,
    })
}

/// A poset whose elements are subsets of a host poset.
///
/// Sets are listed by increasing size, ties broken by their bit pattern, so
/// the element numbering depends only on the host.
#[derive(Clone, Debug)]
pub struct DerivedPoset {
    host: Poset,
    sets: Vec<Subset>,
    order: Poset,
    index: HashMap<Subset, usize>,
}

/// `C(P)`: the nonempty convex subsets of `P` under bi-domination.
pub type CPoset = DerivedPoset;

impl DerivedPoset {
    /// Orders `sets` by bi-domination. The sets must be pairwise inequivalent.
    pub(crate) fn by_bidomination(host: &Poset, sets: Vec<Subset>) -> DerivedPoset {
        let downs: Vec<Subset> = sets.iter().map(|&s| host.down_set(s)).collect();
        let ups: Vec<Subset> = sets.iter().map(|&s| host.up_set(s)).collect();
        let order = Poset::from_leq_unchecked(sets.len(), |i, j| {
            subset::is_subset(sets[i], downs[j]) && subset::is_subset(sets[j], ups[i])
        });
        Self::assemble(host, sets, order)
    }

    /// Orders `sets` by inclusion.
    pub(crate) fn by_inclusion(host: &Poset, sets: Vec<Subset>) -> DerivedPoset {
        let order = Poset::from_leq_unchecked(sets.len(), |i, j| subset::is_subset(sets[i], sets[j]));
        Self::assemble(host, sets, order)
    }

    fn assemble(host: &Poset, sets: Vec<Subset>, order: Poset) -> DerivedPoset {
        let index = sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        DerivedPoset { host: host.clone(), sets, order, index }
    }

    pub(crate) fn sort_sets(sets: &mut [Subset]) {
        sets.sort_by_key(|&s| (s.count_ones(), s));
    }

    pub fn host(&self) -> &Poset {
        &self.host
    }

    pub fn order(&self) -> &Poset {
        &self.order
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> Subset {
        self.sets[i]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn index_of(&self, s: Subset) -> Option<usize> {
        self.index.get(&s).copied()
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.order.leq(i, j)
    }

    pub fn convex_set(&self, i: usize) -> ConvexSet {
        ConvexSet { host_len: self.host.len(), members: self.sets[i] }
    }

    /// Index of the singleton `{x}`, if present.
    pub fn singleton(&self, x: usize) -> Option<usize> {
        self.index_of(subset::singleton(x))
    }
}

/// Enumerates `C(P)` by growing convex sets one element at a time.
///
/// Every nonempty convex `S` is reached: adding the members of `S` one by one
/// to a singleton and taking envelopes stays inside `S` and ends at `S`.
pub fn enumerate_convex_poset(p: &Poset, budget: &Budget) -> Result<CPoset> {
    subset::check_host(p.len())?;
    let sets = convex_sets(p, budget.sets)?;
    Ok(DerivedPoset::by_bidomination(p, sets))
}

pub(crate) fn convex_sets(p: &Poset, limit: usize) -> Result<Vec<Subset>> {
    let mut seen: HashSet<Subset> = HashSet::new();
    let mut queue = VecDeque::new();
    for x in 0..p.len() {
        let s = subset::singleton(x);
        seen.insert(s);
        queue.push_back(s);
    }
    while let Some(s) = queue.pop_front() {
        for x in subset::iter(p.all() & !s) {
            let t = conv(p, s | subset::singleton(x));
            if seen.insert(t) {
                if seen.len() > limit {
                    return Err(Error::BudgetExceeded { what: "convex sets", limit: limit as u64 });
                }
                queue.push_back(t);
            }
        }
    }
    let mut sets: Vec<Subset> = seen.into_iter().collect();
    DerivedPoset::sort_sets(&mut sets);
    Ok(sets)
}

/// Checks that `A ↦ (↓A, ↑A)` embeds `C(P)` into `I(P) × F(P)*`.
/// Returns the first pair on which order and image order disagree.
pub fn phi_embedding_check(c: &CPoset) -> std::result::Result<(), (usize, usize)> {
    let p = c.host();
    let pairs: Vec<(Subset, Subset)> = c.sets().iter().map(|&s| (p.down_set(s), p.up_set(s))).collect();
    for i in 0..c.len() {
        for j in 0..c.len() {
            let image_le = subset::is_subset(pairs[i].0, pairs[j].0) && subset::is_subset(pairs[j].1, pairs[i].1);
            if image_le != c.leq(i, j) || (image_le && pairs[i] == pairs[j] && i != j) {
                return Err((i, j));
            }
        }
    }
    Ok(())
}

/// A pair of families of convex sets with every member of `a` below every
/// member of `b`. Families are kept exactly as given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pregap {
    pub a: Vec<Subset>,
    pub b: Vec<Subset>,
    /// `I_B = ⋂ ↓B` (the whole host when `b` is empty).
    pub i_b: Subset,
    /// `F_A = ⋂ ↑A` (the whole host when `a` is empty).
    pub f_a: Subset,
}

impl Pregap {
    pub fn new(p: &Poset, a: Vec<Subset>, b: Vec<Subset>) -> Result<Pregap> {
        subset::check_host(p.len())?;
        for &s in a.iter().chain(&b) {
            if s == 0 || !subset::is_subset(s, p.all()) || !is_convex(p, s) {
                return Err(Error::NotAPregap(format!(
                    "{{{}}} is not a nonempty convex set",
                    format_members(s)
                )));
            }
        }
        for &x in &a {
            for &y in &b {
                if !bidom_leq(p, x, y) {
                    return Err(Error::NotAPregap(format!(
                        "{{{}}} is not below {{{}}}",
                        format_members(x),
                        format_members(y)
                    )));
                }
            }
        }
        let i_b = b.iter().fold(p.all(), |acc, &s| acc & p.down_set(s));
        let f_a = a.iter().fold(p.all(), |acc, &s| acc & p.up_set(s));
        Ok(Pregap { a, b, i_b, f_a })
    }

    /// `F_A ∩ I_B`.
    pub fn core(&self) -> Subset {
        self.f_a & self.i_b
    }

    pub fn is_separated_by(&self, p: &Poset, c: Subset) -> bool {
        self.a.iter().all(|&x| bidom_leq(p, x, c)) && self.b.iter().all(|&y| bidom_leq(p, c, y))
    }
}

/// Indices of all elements `C` of `c` with `A <= C <= B` throughout.
pub fn separators(c: &CPoset, g: &Pregap) -> Vec<usize> {
    (0..c.len()).filter(|&i| g.is_separated_by(c.host(), c.set(i))).collect()
}

/// The special pregap `({I_B ∩ ↑A}, {F_A ∩ ↓B})`, with its defining
/// identities checked before it is returned.
pub fn special_pregap(c: &CPoset, g: &Pregap) -> Result<Pregap> {
    let p = c.host();
    let a2: Vec<Subset> = g.a.iter().map(|&x| g.i_b & p.up_set(x)).collect();
    let b2: Vec<Subset> = g.b.iter().map(|&y| g.f_a & p.down_set(y)).collect();
    let out = Pregap::new(p, a2, b2).map_err(|e| Error::Inconsistent(format!("special pregap: {e}")))?;
    if !g.a.is_empty() && out.f_a != g.f_a {
        return Err(Error::Inconsistent("special pregap changes F_A".into()));
    }
    if !g.b.is_empty() && out.i_b != g.i_b {
        return Err(Error::Inconsistent("special pregap changes I_B".into()));
    }
    let before: HashSet<usize> = separators(c, g).into_iter().collect();
    if separators(c, &out).iter().any(|i| !before.contains(i)) {
        return Err(Error::Inconsistent("special pregap gains a separator".into()));
    }
    Ok(out)
}

/// Builds the fixed-point-free map `P -> C(P)` attached to a totally ordered
/// gap with `F_A ∩ I_B = ∅`.
///
/// A totally ordered family of a finite poset has a largest member `A*`
/// (and `ℬ` a least `B*`); every element of `B*` then lies in `F_A ∩ I_B`.
/// So on finite hosts this always returns `PreconditionUnsatisfiable`.
pub fn fixpointfree_from_gap(c: &CPoset, g: &Pregap) -> Result<Vec<Subset>> {
    let p = c.host();
    if g.a.is_empty() || g.b.is_empty() {
        return Err(Error::PreconditionUnsatisfiable("both families must be nonempty".into()));
    }
    for fam in [&g.a, &g.b] {
        for &x in fam.iter() {
            for &y in fam.iter() {
                if !bidom_leq(p, x, y) && !bidom_leq(p, y, x) {
                    return Err(Error::PreconditionUnsatisfiable(
                        "families must be totally ordered".into(),
                    ));
                }
            }
        }
    }
    if g.core() != 0 {
        return Err(Error::PreconditionUnsatisfiable(format!(
            "F_A ∩ I_B = {{{}}} is nonempty; a finite totally ordered family has an extreme member",
            format_members(g.core())
        )));
    }
    let mut values = Vec::with_capacity(p.len());
    for x in 0..p.len() {
        let v = if !subset::contains(g.i_b, x) {
            g.b.iter().copied().find(|&b| !subset::contains(p.down_set(b), x))
        } else {
            g.a.iter().copied().find(|&a| !subset::contains(p.up_set(a), x))
        };
        values.push(v.ok_or_else(|| Error::Inconsistent(format!("no image for {x}")))?);
    }
    Ok(values)
}

/// The maps `s̄(Y) = Conv_P(s[Y])` and `r̄(X) = Conv_Q(r[X])` induced by a
/// retraction pair, as index vectors between `C(Q)` and `C(P)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CbarPair {
    pub sbar: Vec<usize>,
    pub rbar: Vec<usize>,
}

/// `s: Q -> P`, `r: P -> Q` with `r ∘ s = id_Q`.
pub fn cbar_retraction(cp: &CPoset, cq: &CPoset, s: &MonotoneMap, r: &MonotoneMap) -> Result<CbarPair> {
    let (p, q) = (cp.host(), cq.host());
    if s.domain_len() != q.len() || s.codomain_len() != p.len() || r.domain_len() != p.len() || r.codomain_len() != q.len() {
        return Err(Error::NotARetraction("maps do not match the hosts".into()));
    }
    if !s.then(r).is_identity() {
        return Err(Error::NotARetraction("r ∘ s is not the identity".into()));
    }
    let lookup = |c: &CPoset, x: Subset| {
        c.index_of(x)
            .ok_or_else(|| Error::Inconsistent("image set missing from C(P)".into()))
    };
    let sbar = (0..cq.len())
        .map(|i| lookup(cp, conv(p, s.image(cq.set(i)))))
        .collect::<Result<Vec<_>>>()?;
    let rbar = (0..cp.len())
        .map(|i| lookup(cq, conv(q, r.image(cp.set(i)))))
        .collect::<Result<Vec<_>>>()?;
    for (i, &j) in sbar.iter().enumerate() {
        if rbar[j] != i {
            return Err(Error::NotARetraction("r̄ ∘ s̄ is not the identity".into()));
        }
    }
    for (from, to, map) in [(cq, cp, &sbar), (cp, cq, &rbar)] {
        for i in 0..from.len() {
            for j in from.order().up_row(i).ones() {
                if !to.leq(map[i], map[j]) {
                    return Err(Error::NotMonotone(i, j));
                }
            }
        }
    }
    Ok(CbarPair { sbar, rbar })
}

pub(crate) fn format_members(s: Subset) -> String {
    subset::iter(s).map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_level() -> Poset {
        Poset::from_covers(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    fn brute_convex(p: &Poset) -> Vec<Subset> {
        let mut out: Vec<Subset> = (1..=p.all())
            .filter(|&s| {
                subset::iter(s).all(|x| {
                    subset::iter(s).all(|y| {
                        (0..p.len()).all(|z| !(p.leq(x, z) && p.leq(z, y)) || subset::contains(s, z))
                    })
                })
            })
            .collect();
        DerivedPoset::sort_sets(&mut out);
        out
    }

    #[test]
    fn envelope_examples() {
        let p = two_level();
        assert_eq!(convex_envelope(&p, 0b0101).unwrap().members(), 0b0101);
        let c3 = Poset::chain(3);
        assert_eq!(convex_envelope(&c3, 0b101).unwrap().members(), 0b111);
        assert_eq!(convex_envelope(&c3, 0b011).unwrap().members(), 0b011);
        assert_eq!(convex_envelope(&c3, 0), Err(Error::EmptyInput));
    }

    #[test]
    fn compare_examples() {
        let p = two_level();
        let a = ConvexSet::new(&p, 0b0001).unwrap();
        let cd = ConvexSet::new(&p, 0b1100).unwrap();
        assert_eq!(bidom_compare(&p, &a, &cd).unwrap(), Comparison::Less);
        let c3 = Poset::chain(3);
        let full = ConvexSet::new(&c3, 0b111).unwrap();
        let top = ConvexSet::new(&c3, 0b110).unwrap();
        assert_eq!(bidom_compare(&c3, &full, &top).unwrap(), Comparison::Less);
        assert_eq!(bidom_compare(&p, &a, &full), Err(Error::HostMismatch));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let b = Budget::default();
        let c3 = enumerate_convex_poset(&Poset::chain(3), &b).unwrap();
        assert_eq!(c3.len(), 6);
        assert_eq!(enumerate_convex_poset(&two_level(), &b).unwrap().len(), 15);
        assert_eq!(enumerate_convex_poset(&Poset::chain(1), &b).unwrap().len(), 1);
        let fence = Poset::from_covers(5, &[(0, 1), (2, 1), (2, 3), (4, 3)]).unwrap();
        for p in [Poset::chain(4), two_level(), fence] {
            assert_eq!(enumerate_convex_poset(&p, &b).unwrap().sets(), brute_convex(&p).as_slice());
        }
        let err = enumerate_convex_poset(&Poset::antichain(6), &b.with_sets(10)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn embedding_and_singletons() {
        let b = Budget::default();
        let crown = Poset::from_covers(6, &[(0, 3), (0, 4), (1, 4), (1, 5), (2, 5), (2, 3)]).unwrap();
        for p in [Poset::chain(4), two_level(), crown] {
            let c = enumerate_convex_poset(&p, &b).unwrap();
            assert_eq!(phi_embedding_check(&c), Ok(()));
            for x in 0..p.len() {
                for y in 0..p.len() {
                    let (i, j) = (c.singleton(x).unwrap(), c.singleton(y).unwrap());
                    assert_eq!(c.leq(i, j), p.leq(x, y));
                }
            }
        }
    }

    #[test]
    fn separator_examples() {
        let p = two_level();
        let c = enumerate_convex_poset(&p, &Budget::default()).unwrap();
        let g = Pregap::new(&p, vec![0b0001], vec![0b0100]).unwrap();
        let seps: Vec<Subset> = separators(&c, &g).into_iter().map(|i| c.set(i)).collect();
        for s in [0b0001, 0b0100, 0b0101] {
            assert!(seps.contains(&s));
        }
        let gap = Pregap::new(&p, vec![0b0001, 0b0010], vec![0b0100, 0b1000]).unwrap();
        assert!(separators(&c, &gap).is_empty());
        assert_eq!(gap.core(), 0);
        let sp = special_pregap(&c, &g).unwrap();
        assert_eq!(sp.a, vec![0b0101]);
        assert_eq!(sp.b, vec![0b0101]);
        assert!(matches!(Pregap::new(&p, vec![0b0100], vec![0b0001]), Err(Error::NotAPregap(_))));
    }

    #[test]
    fn gap_map_precondition_never_holds_for_chains_of_sets() {
        let p = two_level();
        let c = enumerate_convex_poset(&p, &Budget::default()).unwrap();
        let g = Pregap::new(&p, vec![0b0001], vec![0b0100]).unwrap();
        assert!(matches!(fixpointfree_from_gap(&c, &g), Err(Error::PreconditionUnsatisfiable(_))));
        let empty = Pregap::new(&p, vec![], vec![]).unwrap();
        assert!(matches!(fixpointfree_from_gap(&c, &empty), Err(Error::PreconditionUnsatisfiable(_))));
    }

    #[test]
    fn cbar_for_chain_collapse() {
        let b = Budget::default();
        let (p, q) = (Poset::chain(3), Poset::chain(2));
        let s = MonotoneMap::new(&q, &p, vec![0, 1]).unwrap();
        let r = MonotoneMap::new(&p, &q, vec![0, 1, 1]).unwrap();
        let (cp, cq) = (enumerate_convex_poset(&p, &b).unwrap(), enumerate_convex_poset(&q, &b).unwrap());
        let pair = cbar_retraction(&cp, &cq, &s, &r).unwrap();
        assert_eq!(pair.sbar.len(), 3);
        let id = MonotoneMap::identity(&p);
        let pair = cbar_retraction(&cp, &cp, &id, &id).unwrap();
        assert!(pair.sbar.iter().enumerate().all(|(i, &j)| i == j));
        let bad = MonotoneMap::new(&p, &q, vec![0, 0, 1]).unwrap();
        assert!(matches!(cbar_retraction(&cp, &cq, &s, &bad), Err(Error::NotARetraction(_))));
    }
}
