//! Finite posets stored as their full order relation.
//!
//! Row `x` of the relation is the bitset `{y : x <= y}`; the transposed rows
//! `{y : y <= x}` are kept alongside so that both cones are O(1) lookups.
//! Covers are recomputed on demand.

use std::collections::VecDeque;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::subset::{self, Subset};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("n", &self.n)
            .field("covers", &self.covers())
            .finish()
    }
}

fn row_mask(row: &FixedBitSet) -> Subset {
    row.as_slice().first().copied().unwrap_or(0) as Subset
}

impl Poset {
    /// Reflexive-transitive closure of `pairs`, where `(i, j)` means `i < j`.
    ///
    /// Pairs need not be covers; any relation pairs are accepted and closed.
    pub fn from_covers(n: usize, pairs: &[(usize, usize)]) -> Result<Poset> {
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in pairs {
            for i in [a, b] {
                if i >= n {
                    return Err(Error::IndexOutOfRange { index: i, size: n });
                }
            }
            if a == b {
                continue;
            }
            succ[a].push(b);
            indeg[b] += 1;
        }
        // Kahn's algorithm; leftover vertices lie on a cycle.
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            topo.push(v);
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if topo.len() < n {
            let on_cycle = (0..n).find(|&v| indeg[v] > 0).unwrap();
            let next = succ[on_cycle]
                .iter()
                .copied()
                .find(|&w| indeg[w] > 0)
                .unwrap_or(on_cycle);
            return Err(Error::CycleDetected(on_cycle, next));
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &v in topo.iter().rev() {
            let mut row = FixedBitSet::with_capacity(n);
            row.insert(v);
            for &w in &succ[v] {
                row.union_with(&up[w]);
            }
            up[v] = row;
        }
        let poset = Self::from_up_rows(up);
        debug_assert!(poset.check_axioms().is_ok());
        Ok(poset)
    }

    /// Builds a poset from an arbitrary relation predicate, checking the
    /// three partial-order axioms.
    pub fn from_leq<F: Fn(usize, usize) -> bool>(n: usize, leq: F) -> Result<Poset> {
        let poset = Self::from_leq_unchecked(n, leq);
        poset.check_axioms()?;
        Ok(poset)
    }

    /// Builds a poset from a relation already known to be a partial order.
    pub(crate) fn from_leq_unchecked<F: Fn(usize, usize) -> bool>(n: usize, leq: F) -> Poset {
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (x, row) in up.iter_mut().enumerate() {
            for y in 0..n {
                if leq(x, y) {
                    row.insert(y);
                }
            }
        }
        Self::from_up_rows(up)
    }

    pub(crate) fn from_up_rows(up: Vec<FixedBitSet>) -> Poset {
        let n = up.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (x, row) in up.iter().enumerate() {
            for y in row.ones() {
                down[y].insert(x);
            }
        }
        Poset { n, up, down }
    }

    pub fn check_axioms(&self) -> Result<()> {
        for x in 0..self.n {
            if !self.up[x].contains(x) {
                return Err(Error::NotAPartialOrder(format!("{x} <= {x} fails")));
            }
            for y in self.up[x].ones() {
                if y != x && self.up[y].contains(x) {
                    return Err(Error::NotAPartialOrder(format!(
                        "{x} and {y} violate antisymmetry"
                    )));
                }
                if !self.up[y].is_subset(&self.up[x]) {
                    return Err(Error::NotAPartialOrder(format!(
                        "transitivity fails above {x} <= {y}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn antichain(n: usize) -> Poset {
        Self::from_leq_unchecked(n, |x, y| x == y)
    }

    pub fn chain(n: usize) -> Poset {
        Self::from_leq_unchecked(n, |x, y| x <= y)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    #[inline]
    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// `{y : x <= y}`.
    #[inline]
    pub fn up_row(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    /// `{y : y <= x}`.
    #[inline]
    pub fn down_row(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    /// `↑x` as a packed subset. Only meaningful for posets of at most 64 elements.
    #[inline]
    pub fn up_mask(&self, x: usize) -> Subset {
        debug_assert!(self.n <= subset::MAX_HOST);
        row_mask(&self.up[x])
    }

    #[inline]
    pub fn down_mask(&self, x: usize) -> Subset {
        debug_assert!(self.n <= subset::MAX_HOST);
        row_mask(&self.down[x])
    }

    pub fn all(&self) -> Subset {
        subset::full(self.n)
    }

    /// `↓X`.
    pub fn down_set(&self, xs: Subset) -> Subset {
        subset::iter(xs).fold(0, |acc, x| acc | self.down_mask(x))
    }

    /// `↑X`.
    pub fn up_set(&self, xs: Subset) -> Subset {
        subset::iter(xs).fold(0, |acc, x| acc | self.up_mask(x))
    }

    /// Upper bounds `U(X)`; all elements when `X` is empty.
    pub fn upper_bounds(&self, xs: Subset) -> Subset {
        subset::iter(xs).fold(self.all(), |acc, x| acc & self.up_mask(x))
    }

    /// Lower bounds `L(X)`; all elements when `X` is empty.
    pub fn lower_bounds(&self, xs: Subset) -> Subset {
        subset::iter(xs).fold(self.all(), |acc, x| acc & self.down_mask(x))
    }

    pub fn cones(&self, xs: Subset) -> Cones {
        Cones {
            down: self.down_set(xs),
            up: self.up_set(xs),
            upper_bounds: self.upper_bounds(xs),
            lower_bounds: self.lower_bounds(xs),
        }
    }

    pub fn is_down_set(&self, xs: Subset) -> bool {
        self.down_set(xs) == xs
    }

    pub fn is_up_set(&self, xs: Subset) -> bool {
        self.up_set(xs) == xs
    }

    pub fn dual(&self) -> Poset {
        Poset {
            n: self.n,
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }

    /// Componentwise order on pairs; `(i, j)` is element `i * other.len() + j`.
    pub fn direct_product(&self, other: &Poset) -> Poset {
        let m = other.n;
        Self::from_leq_unchecked(self.n * m, |a, b| {
            self.leq(a / m, b / m) && other.leq(a % m, b % m)
        })
    }

    /// Cover pairs `(x, y)` with `x < y` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in self.up[x].ones() {
                if y != x && self.up[x].intersection_count(&self.down[y]) == 2 {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn upper_covers(&self, x: usize) -> Vec<usize> {
        self.up[x]
            .ones()
            .filter(|&y| y != x && self.up[x].intersection_count(&self.down[y]) == 2)
            .collect()
    }

    pub fn lower_covers(&self, x: usize) -> Vec<usize> {
        self.down[x]
            .ones()
            .filter(|&y| y != x && self.down[x].intersection_count(&self.up[y]) == 2)
            .collect()
    }

    /// A linear extension: elements sorted by the size of their down-set,
    /// ties broken by index.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&x| (self.down[x].count_ones(..), x));
        order
    }

    /// Length of the longest chain ending at each element (minimal elements have height 0).
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.n];
        for x in self.linear_extension() {
            h[x] = self.down[x]
                .ones()
                .filter(|&y| y != x)
                .map(|y| h[y] + 1)
                .max()
                .unwrap_or(0);
        }
        h
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&x| self.down[x].count_ones(..) == 1)
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&x| self.up[x].count_ones(..) == 1)
            .collect()
    }

    /// The least element, if any.
    pub fn bottom(&self) -> Option<usize> {
        (0..self.n).find(|&x| self.up[x].count_ones(..) == self.n)
    }

    /// The greatest element, if any.
    pub fn top(&self) -> Option<usize> {
        (0..self.n).find(|&x| self.down[x].count_ones(..) == self.n)
    }

    pub fn is_chain(&self) -> bool {
        (0..self.n).all(|x| (0..self.n).all(|y| self.comparable(x, y)))
    }

    pub fn is_antichain_set(&self, xs: Subset) -> bool {
        subset::iter(xs).all(|x| (self.up_mask(x) | self.down_mask(x)) & xs == subset::singleton(x))
    }

    /// Number of elements comparable to `x`, excluding `x`.
    pub fn comparability_degree(&self, x: usize) -> usize {
        self.up[x].count_ones(..) + self.down[x].count_ones(..) - 2
    }

    /// Subposet induced on `elems`; element `i` of the result is `elems[i]`.
    pub fn induced(&self, elems: &[usize]) -> Poset {
        Self::from_leq_unchecked(elems.len(), |i, j| self.leq(elems[i], elems[j]))
    }

    /// Relabeling: element `x` of `self` becomes `perm[x]` of the result.
    pub fn permuted(&self, perm: &[usize]) -> Poset {
        assert_eq!(perm.len(), self.n);
        let mut inv = vec![0; self.n];
        for (x, &p) in perm.iter().enumerate() {
            inv[p] = x;
        }
        Self::from_leq_unchecked(self.n, |a, b| self.leq(inv[a], inv[b]))
    }

    /// Adds a new least element (index 0) and a new greatest element (index `n + 1`);
    /// old element `x` becomes `x + 1`.
    pub fn with_bounds(&self) -> Poset {
        let n = self.n + 2;
        Self::from_leq_unchecked(n, |a, b| {
            a == 0 || b == n - 1 || (a != n - 1 && b != 0 && self.leq(a - 1, b - 1))
        })
    }

    /// Adds a new greatest element with index `n`.
    pub fn with_top(&self) -> Poset {
        let n = self.n + 1;
        Self::from_leq_unchecked(n, |a, b| b == n - 1 || (a != n - 1 && self.leq(a, b)))
    }

    /// A maximum antichain, found by branch and bound on the incomparability graph.
    pub fn max_antichain(&self) -> Vec<usize> {
        assert!(self.n <= subset::MAX_HOST, "max_antichain supports at most 64 elements");
        let incomparable: Vec<Subset> = (0..self.n)
            .map(|x| self.all() & !(self.up_mask(x) | self.down_mask(x)))
            .collect();
        let mut best = 0;
        if self.n > 0 {
            best = 1;
        }
        fn expand(inc: &[Subset], current: Subset, mut cand: Subset, best: &mut Subset) {
            if cand == 0 {
                if current.count_ones() > best.count_ones() {
                    *best = current;
                }
                return;
            }
            while cand != 0 {
                if current.count_ones() + cand.count_ones() <= best.count_ones() {
                    return;
                }
                let x = cand.trailing_zeros() as usize;
                cand &= cand - 1;
                expand(inc, current | subset::singleton(x), cand & inc[x], best);
            }
            if current.count_ones() > best.count_ones() {
                *best = current;
            }
        }
        expand(&incomparable, 0, self.all(), &mut best);
        subset::iter(best).collect()
    }

    pub fn width(&self) -> usize {
        self.max_antichain().len()
    }

    /// Isomorphism-invariant encoding of the poset.
    ///
    /// Elements are grouped by (height, strict down-degree, strict up-degree);
    /// among labelings that list the groups in sorted order, the one with the
    /// lexicographically least relation matrix is chosen.
    pub fn canonical_form(&self) -> CanonicalForm {
        let n = self.n;
        let heights = self.heights();
        let inv: Vec<(usize, usize, usize)> = (0..n)
            .map(|x| {
                (
                    heights[x],
                    self.down[x].count_ones(..) - 1,
                    self.up[x].count_ones(..) - 1,
                )
            })
            .collect();
        let mut slots: Vec<(usize, usize, usize)> = inv.clone();
        slots.sort();

        let mut search = CanonSearch {
            poset: self,
            inv: &inv,
            slots: &slots,
            perm: Vec::with_capacity(n),
            used: vec![false; n],
            bits: Vec::with_capacity(n * n),
            best_bits: None,
            best_perm: Vec::new(),
        };
        search.run();
        let perm = search.best_perm;

        let mut bytes = Vec::with_capacity(2 + (n * n).div_ceil(8));
        bytes.extend_from_slice(&(n as u16).to_le_bytes());
        let mut acc = 0u8;
        let mut k = 0;
        for i in 0..n {
            for j in 0..n {
                if self.leq(perm[i], perm[j]) {
                    acc |= 1 << (k % 8);
                }
                k += 1;
                if k % 8 == 0 {
                    bytes.push(acc);
                    acc = 0;
                }
            }
        }
        if k % 8 != 0 {
            bytes.push(acc);
        }
        CanonicalForm(bytes)
    }

    /// Rebuilds the canonical representative from its encoding.
    pub fn from_canonical(form: &CanonicalForm) -> Result<Poset> {
        let bytes = &form.0;
        if bytes.len() < 2 {
            return Err(Error::Parse { line: 0, msg: "canonical form too short".into() });
        }
        let n = u16::from_le_bytes([bytes[0], bytes[1]]) as usize;
        if bytes.len() != 2 + (n * n).div_ceil(8) {
            return Err(Error::Parse { line: 0, msg: "canonical form has wrong length".into() });
        }
        let bit = |k: usize| bytes[2 + k / 8] >> (k % 8) & 1 == 1;
        Poset::from_leq(n, |i, j| bit(i * n + j))
    }

    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        self.n == other.n && self.canonical_form() == other.canonical_form()
    }

    /// Disjoint union: elements of `other` are shifted by `self.len()`.
    pub fn disjoint_union(&self, other: &Poset) -> Poset {
        let n = self.n;
        Self::from_leq_unchecked(n + other.n, |a, b| match (a < n, b < n) {
            (true, true) => self.leq(a, b),
            (false, false) => other.leq(a - n, b - n),
            _ => false,
        })
    }

    /// Ordinal sum: every element of `self` lies below every element of `other`.
    pub fn ordinal_sum(&self, other: &Poset) -> Poset {
        let n = self.n;
        Self::from_leq_unchecked(n + other.n, |a, b| match (a < n, b < n) {
            (true, true) => self.leq(a, b),
            (false, false) => other.leq(a - n, b - n),
            (true, false) => true,
            (false, true) => false,
        })
    }
}

struct CanonSearch<'a> {
    poset: &'a Poset,
    inv: &'a [(usize, usize, usize)],
    slots: &'a [(usize, usize, usize)],
    perm: Vec<usize>,
    used: Vec<bool>,
    bits: Vec<bool>,
    best_bits: Option<Vec<bool>>,
    best_perm: Vec<usize>,
}

impl CanonSearch<'_> {
    /// Extends the current prefix in every way that is not already worse
    /// than the best complete labeling found so far.
    fn run(&mut self) {
        let k = self.perm.len();
        let n = self.slots.len();
        if k == n {
            if self.best_bits.as_ref().is_none_or(|best| self.bits < *best) {
                self.best_bits = Some(self.bits.clone());
                self.best_perm = self.perm.clone();
            }
            return;
        }
        for x in 0..n {
            if self.used[x] || self.inv[x] != self.slots[k] {
                continue;
            }
            let start = self.bits.len();
            for j in 0..k {
                let y = self.perm[j];
                self.bits.push(self.poset.leq(y, x));
                self.bits.push(self.poset.leq(x, y));
            }
            let worse = self.best_bits.as_ref().is_some_and(|best| self.bits[..] > best[..self.bits.len()]);
            if !worse {
                self.used[x] = true;
                self.perm.push(x);
                self.run();
                self.perm.pop();
                self.used[x] = false;
            }
            self.bits.truncate(start);
        }
    }
}

/// Byte encoding of an isomorphism class: element count followed by the
/// canonical relation matrix, row-major, one bit per entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(pub Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Result<CanonicalForm> {
        let s = s.trim();
        if !s.len().is_multiple_of(2) {
            return Err(Error::Parse { line: 0, msg: "odd-length hex string".into() });
        }
        (0..s.len())
            .step_by(2)
            .map(|i| {
                u8::from_str_radix(&s[i..i + 2], 16)
                    .map_err(|e| Error::Parse { line: 0, msg: e.to_string() })
            })
            .collect::<Result<Vec<u8>>>()
            .map(CanonicalForm)
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cones {
    pub down: Subset,
    pub up: Subset,
    pub upper_bounds: Subset,
    pub lower_bounds: Subset,
}

/// An order-preserving single-valued map between two posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    values: Vec<usize>,
    codomain_len: usize,
}

impl MonotoneMap {
    pub fn new(domain: &Poset, codomain: &Poset, values: Vec<usize>) -> Result<MonotoneMap> {
        if values.len() != domain.len() {
            return Err(Error::ArityMismatch { expected: domain.len(), got: values.len() });
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= codomain.len()) {
            return Err(Error::IndexOutOfRange { index: bad, size: codomain.len() });
        }
        for x in 0..domain.len() {
            for y in domain.up_row(x).ones() {
                if !codomain.leq(values[x], values[y]) {
                    return Err(Error::NotMonotone(x, y));
                }
            }
        }
        Ok(MonotoneMap { values, codomain_len: codomain.len() })
    }

    pub fn identity(p: &Poset) -> MonotoneMap {
        MonotoneMap { values: (0..p.len()).collect(), codomain_len: p.len() }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn domain_len(&self) -> usize {
        self.values.len()
    }

    pub fn codomain_len(&self) -> usize {
        self.codomain_len
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &MonotoneMap) -> MonotoneMap {
        assert_eq!(self.codomain_len, other.domain_len());
        MonotoneMap {
            values: self.values.iter().map(|&v| other.values[v]).collect(),
            codomain_len: other.codomain_len,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.codomain_len == self.values.len() && self.values.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Image of a packed subset.
    pub fn image(&self, xs: Subset) -> Subset {
        subset::iter(xs).fold(0, |acc, x| acc | subset::singleton(self.values[x]))
    }
}

/// Lexicographic sum of blocks indexed by a poset.
///
/// Block `α` occupies the contiguous range `offsets[α] .. offsets[α] + blocks[α].len()`
/// of the sum.
#[derive(Clone, Debug)]
pub struct LexSum {
    pub index: Poset,
    pub blocks: Vec<Poset>,
    pub sum: Poset,
    pub projection: Vec<usize>,
    pub offsets: Vec<usize>,
}

impl LexSum {
    pub fn new(index: &Poset, blocks: &[Poset]) -> Result<LexSum> {
        if blocks.len() != index.len() {
            return Err(Error::ArityMismatch { expected: index.len(), got: blocks.len() });
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut projection = Vec::new();
        let mut local = Vec::new();
        for (alpha, b) in blocks.iter().enumerate() {
            offsets.push(projection.len());
            for i in 0..b.len() {
                projection.push(alpha);
                local.push(i);
            }
        }
        let sum = Poset::from_leq_unchecked(projection.len(), |x, y| {
            let (a, b) = (projection[x], projection[y]);
            if a == b {
                blocks[a].leq(local[x], local[y])
            } else {
                index.leq(a, b)
            }
        });
        Ok(LexSum {
            index: index.clone(),
            blocks: blocks.to_vec(),
            sum,
            projection,
            offsets,
        })
    }

    /// Elements of block `alpha`, as a subset of the sum (requires at most 64 elements).
    pub fn block_mask(&self, alpha: usize) -> Subset {
        let len = self.blocks[alpha].len();
        subset::full(len) << self.offsets[alpha]
    }

    /// `p[X]` for a subset of the sum.
    pub fn project(&self, xs: Subset) -> Subset {
        subset::iter(xs).fold(0, |acc, x| acc | subset::singleton(self.projection[x]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_level() -> Poset {
        Poset::from_covers(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }

    #[test]
    fn from_covers_examples() {
        let one = Poset::from_covers(1, &[]).unwrap();
        assert!(one.leq(0, 0));
        let c3 = Poset::from_covers(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(c3.lt(0, 2));
        assert!(!c3.leq(2, 0));
        assert!(matches!(
            Poset::from_covers(2, &[(0, 1), (1, 0)]),
            Err(Error::CycleDetected(_, _))
        ));
        assert_eq!(
            Poset::from_covers(2, &[(0, 5)]),
            Err(Error::IndexOutOfRange { index: 5, size: 2 })
        );
    }

    #[test]
    fn dual_examples() {
        let c3 = Poset::chain(3);
        let d = c3.dual();
        assert!(d.lt(2, 1) && d.lt(1, 0));
        assert_eq!(d.dual(), c3);
        assert_eq!(Poset::antichain(3).dual(), Poset::antichain(3));
    }

    #[test]
    fn product_examples() {
        let c2 = Poset::chain(2);
        let b2 = c2.direct_product(&c2);
        assert_eq!(b2.len(), 4);
        assert_eq!(b2.bottom(), Some(0));
        assert_eq!(b2.top(), Some(3));
        assert!(!b2.comparable(1, 2));
        assert!(c2.direct_product(&Poset::chain(1)).is_isomorphic(&c2));
        assert_eq!(c2.direct_product(&Poset::chain(3)).width(), 2);
    }

    #[test]
    fn lexsum_examples() {
        let s = LexSum::new(&Poset::chain(2), &[Poset::chain(1), Poset::chain(1)]).unwrap();
        assert_eq!(s.sum, Poset::chain(2));
        let s = LexSum::new(&Poset::antichain(2), &[Poset::antichain(2), Poset::antichain(2)]).unwrap();
        assert_eq!(s.sum, Poset::antichain(4));
        let s = LexSum::new(&Poset::chain(2), &[Poset::antichain(2), Poset::antichain(2)]).unwrap();
        assert_eq!(s.sum, two_level());
        assert_eq!(
            LexSum::new(&Poset::chain(2), &[Poset::chain(1)]).unwrap_err(),
            Error::ArityMismatch { expected: 2, got: 1 }
        );
    }

    #[test]
    fn cones_examples() {
        let c4 = Poset::chain(4);
        assert_eq!(c4.cones(subset::singleton(2)).down, 0b0111);
        let p = two_level();
        assert_eq!(p.cones(0b0011).upper_bounds, 0b1100);
        assert_eq!(p.cones(p.all()).upper_bounds, 0);
        assert_eq!(c4.cones(c4.all()).upper_bounds, 0b1000);
        let empty = p.cones(0);
        assert_eq!((empty.down, empty.up), (0, 0));
        assert_eq!((empty.upper_bounds, empty.lower_bounds), (p.all(), p.all()));
    }

    #[test]
    fn antichain_examples() {
        assert_eq!(Poset::chain(5).width(), 1);
        let b3 = Poset::chain(2)
            .direct_product(&Poset::chain(2))
            .direct_product(&Poset::chain(2));
        assert_eq!(b3.width(), 3);
        let crown = Poset::from_covers(6, &[(0, 3), (0, 4), (1, 4), (1, 5), (2, 5), (2, 3)]).unwrap();
        assert_eq!(crown.width(), 3);
    }

    #[test]
    fn canonical_examples() {
        let c3a = Poset::from_covers(3, &[(0, 1), (1, 2)]).unwrap();
        let c3b = Poset::from_covers(3, &[(2, 0), (0, 1)]).unwrap();
        assert_eq!(c3a.canonical_form(), c3b.canonical_form());
        assert_ne!(c3a.canonical_form(), Poset::antichain(3).canonical_form());
        let p = two_level();
        let back = Poset::from_canonical(&p.canonical_form()).unwrap();
        assert!(back.is_isomorphic(&p));
        let hex = p.canonical_form().to_hex();
        assert_eq!(CanonicalForm::from_hex(&hex).unwrap(), p.canonical_form());
    }

    #[test]
    fn covers_and_extensions() {
        let p = two_level();
        assert_eq!(p.covers(), vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
        let ext = p.linear_extension();
        for i in 0..4 {
            for j in 0..i {
                assert!(!p.lt(ext[i], ext[j]));
            }
        }
        assert_eq!(p.heights(), vec![0, 0, 1, 1]);
    }

    #[test]
    fn monotone_map_validation() {
        let c2 = Poset::chain(2);
        assert!(MonotoneMap::new(&c2, &c2, vec![0, 1]).is_ok());
        assert_eq!(MonotoneMap::new(&c2, &c2, vec![1, 0]), Err(Error::NotMonotone(0, 1)));
    }
}
