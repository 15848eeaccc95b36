//! Exhaustive verification suites over all small posets or lattices.
//!
//! Each suite checks one family of statements on every isomorphism class up
//! to a size bound, in parallel. Failures are keyed by canonical form so that
//! any row can be regenerated and replayed.

use std::ops::ControlFlow;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::convex::{CPoset, Pregap, bidom_leq, enumerate_convex_poset, fixpointfree_from_gap, separators, special_pregap};
use crate::fixpoint::{decide_cfpp, decide_fpp, decide_fpp_cposet, decide_rfpp, dismantle};
use crate::lattice::{
    Lattice, as_lattice, boolean_embedding_search, congruences, convex_sublattices, find_embedding_sequences,
    initial_segments, tarski_fixpoint,
};
use crate::order::{LexSum, MonotoneMap, Poset};
use crate::search::{MapProblem, ValueOrder, find_map, for_each_map};
use crate::selection::{
    chain_selection, decide_csp, dual_min_selection, lexsum_selection, min_selection, segment_lattices,
    transfer_product, transfer_quotient, transfer_retract, verify_selection, weaving_selection,
};
use crate::subset::{self, Subset};
use crate::zoo::{RandomStructure, StructureKind, enumerate_lattices, enumerate_posets, random_structure};
use crate::{Budget, Error, Result};

pub const SUITES: &[&str] = &[
    "walker",
    "not-fpp",
    "clfpp-finite",
    "width-boolean",
    "quotient-retract",
    "pregaps",
    "filling",
    "cl-algebra",
    "embedding",
    "chain",
    "csp",
    "selection",
];

/// Largest poset size for which the walker suite also runs the
/// arbitrary-subset decider.
pub const WALKER_RFPP_MAX: usize = 4;
/// Random lattices checked by `cl-algebra` in addition to the enumerated ones.
pub const RANDOM_LATTICES: u64 = 500;
/// Largest random lattice size in `cl-algebra`.
pub const RANDOM_LATTICE_MAX: usize = 10;

#[derive(Clone, Debug)]
pub struct SuiteParams {
    pub max_n: usize,
    /// Boolean rank for `width-boolean` and `embedding`.
    pub k: usize,
    pub no_fast_path: bool,
    pub budget: Budget,
}

impl SuiteParams {
    pub fn new(max_n: usize) -> SuiteParams {
        SuiteParams { max_n, k: 3, no_fast_path: false, budget: Budget::from_env() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure {
    /// Canonical form of the instance, in hex.
    pub instance: String,
    pub property: String,
    pub witness: String,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub instances: usize,
    /// Sorted by instance, then property.
    pub failures: Vec<Failure>,
    pub elapsed_secs: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Collects failures for one instance.
struct Check<'a> {
    instance: &'a Poset,
    failures: Vec<Failure>,
}

impl Check<'_> {
    fn expect(&mut self, ok: bool, property: &str, witness: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(Failure {
                instance: self.instance.canonical_form().to_hex(),
                property: property.to_string(),
                witness: witness(),
            });
        }
    }

    /// Turns a non-budget error into a failure row.
    fn ok<T>(&mut self, property: &str, r: Result<T>) -> Result<Option<T>> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(e @ Error::BudgetExceeded { .. }) => Err(e),
            Err(e) => {
                self.expect(false, property, || e.to_string());
                Ok(None)
            }
        }
    }
}

fn posets_up_to(max_n: usize) -> Result<Vec<Poset>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(enumerate_posets(n)?);
    }
    Ok(out)
}

fn lattices_up_to(max_n: usize) -> Result<Vec<Lattice>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(enumerate_lattices(n)?);
    }
    Ok(out)
}

fn run_over<T, F>(name: &str, instances: Vec<T>, host: impl Fn(&T) -> Poset + Sync, check: F) -> Result<SuiteReport>
where
    T: Sync,
    F: Fn(&T, &mut Check) -> Result<()> + Sync,
{
    let start = Instant::now();
    let results: Vec<Result<Vec<Failure>>> = instances
        .par_iter()
        .map(|inst| {
            let p = host(inst);
            let mut c = Check { instance: &p, failures: Vec::new() };
            check(inst, &mut c)?;
            Ok(c.failures)
        })
        .collect();
    let mut failures = Vec::new();
    for r in results {
        failures.extend(r?);
    }
    failures.sort();
    Ok(SuiteReport {
        suite: name.to_string(),
        instances: instances.len(),
        failures,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

pub fn run_suite(name: &str, params: &SuiteParams) -> Result<SuiteReport> {
    let b = &params.budget;
    let nf = params.no_fast_path;
    match name {
        "walker" => run_over(name, posets_up_to(params.max_n)?, Poset::clone, |p, c| {
            let dismantlable = dismantle(p).holds;
            if let Some(v) = c.ok("CFPP", decide_cfpp(p, b, true))? {
                c.expect(v.holds == dismantlable, "CFPP equals dismantlable", || v.to_string());
            }
            if let Some(v) = c.ok("CFPP", decide_cfpp(p, b, nf))? {
                c.expect(v.holds == dismantlable, "CFPP shortcut equals dismantlable", || v.to_string());
            }
            if p.len() <= WALKER_RFPP_MAX {
                if let Some(v) = c.ok("RFPP", decide_rfpp(p, b, true))? {
                    c.expect(v.holds == dismantlable, "RFPP equals dismantlable", || v.to_string());
                }
            }
            Ok(())
        }),
        "not-fpp" => run_over(name, posets_up_to(params.max_n)?, Poset::clone, |p, c| {
            if let Some(v) = c.ok("CFPP", decide_cfpp(p, b, true))? {
                if v.holds {
                    if let Some(w) = c.ok("C(P) FPP", decide_fpp_cposet(p, b, true))? {
                        c.expect(w.holds, "CFPP implies C(P) FPP", || format!("{:?}", w.witness));
                    }
                }
            }
            Ok(())
        }),
        "csp" => run_over(name, posets_up_to(params.max_n)?, Poset::clone, |p, c| {
            if let Some(v) = c.ok("CSP", decide_csp(p, b, nf))? {
                if v.holds {
                    let fpp = c.ok("FPP", decide_fpp(p, b, nf))?;
                    let cfpp = c.ok("CFPP", decide_cfpp(p, b, nf))?;
                    if let (Some(f), Some(g)) = (fpp, cfpp) {
                        c.expect(f.holds == g.holds, "CSP implies FPP iff CFPP", || format!("{f} {g}"));
                    }
                }
            }
            Ok(())
        }),
        "chain" => run_over(name, posets_up_to(params.max_n)?, Poset::clone, |p, c| {
            let cp = enumerate_convex_poset(p, b)?;
            for chain in maximal_chains(&cp, 64) {
                let sets: Vec<Subset> = chain.iter().map(|&i| cp.set(i)).collect();
                c.ok("chain selection", chain_selection(p, &sets))?;
            }
            Ok(())
        }),
        "width-boolean" => run_over(name, posets_up_to(params.max_n)?, Poset::clone, |p, c| {
            let segs = initial_segments(p, b)?;
            let width = p.width();
            for k in 1..=params.k {
                let embeds = boolean_embedding_search(segs.sets.order(), k, b)?.is_some();
                c.expect(embeds == (width >= k), "B_k embeds in I(P) iff width >= k", || {
                    format!("k={k} width={width} embeds={embeds}")
                });
            }
            Ok(())
        }),
        "pregaps" => run_over(name, posets_up_to(params.max_n)?, Poset::clone, |p, c| {
            let cp = enumerate_convex_poset(p, b)?;
            for g in sample_pregaps(p, cp.sets(), 200, seed_of(p)) {
                check_pregap(&cp, &g, c)?;
            }
            Ok(())
        }),
        "filling" => run_over(name, lattices_up_to(params.max_n)?, |t| t.order().clone(), |t, c| {
            let cl = convex_sublattices(t, b)?;
            let cp = enumerate_convex_poset(t.order(), b)?;
            let p = t.order();
            for g in sample_pregaps(p, cl.sets.sets(), 200, seed_of(p)) {
                let gap_cl = !(0..cl.len()).any(|i| g.is_separated_by(p, cl.set(i)));
                let gap_c = separators(&cp, &g).is_empty();
                let empty_core = g.core() == 0;
                c.expect(gap_cl == empty_core && empty_core == gap_c, "gap in C_L iff empty core iff gap in C", || {
                    format!("gap_cl={gap_cl} empty_core={empty_core} gap_c={gap_c}")
                });
            }
            Ok(())
        }),
        "cl-algebra" => {
            let mut instances = lattices_up_to(params.max_n)?;
            for seed in 0..RANDOM_LATTICES {
                let n = 3 + (seed as usize) % (RANDOM_LATTICE_MAX - 2);
                if let RandomStructure::Lattice(t) = random_structure(StructureKind::Lattice, n, seed)? {
                    instances.push(t);
                }
            }
            run_over(name, instances, |t| t.order().clone(), |t, c| {
                // Both join/meet formulas and the K(T) identities are checked on construction.
                c.ok("C_L(T) construction", convex_sublattices(t, b))?;
                Ok(())
            })
        }
        "embedding" => run_over(name, lattices_up_to(params.max_n)?, |t| t.order().clone(), |t, c| {
            for k in 1..=params.k {
                let by_sequences = find_embedding_sequences(t, k, b)?.is_some();
                let direct = boolean_embedding_search(t.order(), k, b)?.is_some();
                c.expect(by_sequences == direct, "sequence criterion equals direct search", || {
                    format!("k={k} sequences={by_sequences} direct={direct}")
                });
            }
            Ok(())
        }),
        "clfpp-finite" => run_over(name, lattices_up_to(params.max_n)?, |t| t.order().clone(), |t, c| {
            let cl = convex_sublattices(t, b)?;
            let sel = min_selection(&cl);
            c.expect(verify_selection(t.order(), &sel).is_ok(), "least-element selection", String::new);
            let values = ValueOrder::from_poset(cl.sets.order());
            let mut rng = ChaCha8Rng::seed_from_u64(seed_of(t.order()));
            for _ in 0..8 {
                let mut ranks: Vec<i64> = (0..cl.len() as i64).collect();
                ranks.shuffle(&mut rng);
                let problem = MapProblem { priority: Some(ranks), ..MapProblem::unrestricted(t.order(), &values) };
                let Some(f) = find_map(&problem, b.nodes)?.map else {
                    c.expect(false, "monotone map exists", String::new);
                    continue;
                };
                let g = MonotoneMap::new(t.order(), t.order(), f.iter().map(|&s| sel.values[s]).collect())?;
                let x = tarski_fixpoint(t, &g);
                c.expect(subset::contains(cl.set(f[x]), x), "fixed point of a multimap", || format!("map {f:?}"));
            }
            Ok(())
        }),
        "quotient-retract" => run_over(name, lattices_up_to(params.max_n)?, |t| t.order().clone(), |t, c| {
            let cl = convex_sublattices(t, b)?;
            let sel = min_selection(&cl);
            for theta in congruences(t, b)? {
                if let Some(out) = c.ok("quotient transfer", transfer_quotient(&cl, &sel, &theta, b))? {
                    c.expect(out.coretraction.then(&out.q).is_identity(), "q ∘ f = id", String::new);
                }
            }
            Ok(())
        }),
        "selection" => run_over(name, lattices_up_to(params.max_n)?, |t| t.order().clone(), |t, c| {
            check_selections(t, b, c)
        }),
        _ => Err(Error::UnknownSuite(name.to_string())),
    }
}

/// Deterministic per-instance seed.
fn seed_of(p: &Poset) -> u64 {
    p.canonical_form().as_bytes().iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

/// Up to `limit` maximal chains of `C(P)`, bottom to top, by depth-first
/// search along covers.
pub fn maximal_chains(cp: &CPoset, limit: usize) -> Vec<Vec<usize>> {
    let o = cp.order();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = o.minimal_elements().into_iter().map(|m| vec![m]).collect();
    stack.reverse();
    while let Some(chain) = stack.pop() {
        if out.len() >= limit {
            break;
        }
        let last = *chain.last().unwrap();
        let ups = o.upper_covers(last);
        if ups.is_empty() {
            out.push(chain);
            continue;
        }
        for &u in ups.iter().rev() {
            let mut next = chain.clone();
            next.push(u);
            stack.push(next);
        }
    }
    out
}

/// All pregaps with one set on each side, all with one empty side, and
/// `random` further samples with up to three sets per side.
pub fn sample_pregaps(p: &Poset, sets: &[Subset], random: usize, seed: u64) -> Vec<Pregap> {
    let mut out = Vec::new();
    for &a in sets {
        out.push(Pregap::new(p, vec![a], vec![]).expect("one-sided pregap"));
        out.push(Pregap::new(p, vec![], vec![a]).expect("one-sided pregap"));
        for &b in sets {
            if bidom_leq(p, a, b) {
                out.push(Pregap::new(p, vec![a], vec![b]).expect("comparable pair"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let pick = |rng: &mut ChaCha8Rng| -> Vec<Subset> {
            let k = rng.gen_range(1..=3);
            (0..k).map(|_| sets[rng.gen_range(0..sets.len())]).collect()
        };
        let (a, bb) = (pick(&mut rng), pick(&mut rng));
        if let Ok(g) = Pregap::new(p, a, bb) {
            out.push(g);
        }
    }
    out
}

fn check_pregap(cp: &CPoset, g: &Pregap, c: &mut Check) -> Result<()> {
    let p = cp.host();
    let describe = || format!("A={:?} B={:?}", g.a, g.b);
    let seps = separators(cp, g);
    let core = g.core();
    if !seps.is_empty() {
        c.expect(core != 0 && g.is_separated_by(p, core), "core separates a separable pregap", describe);
        c.expect(seps.iter().all(|&i| subset::is_subset(cp.set(i), core)), "core contains every separator", describe);
    }
    c.ok("special pregap", special_pregap(cp, g))?;
    for &a in &g.a {
        let lifted = g.i_b & p.up_set(a);
        c.expect(p.up_set(lifted) == p.up_set(a), "↑(I_B ∩ ↑A) = ↑A", describe);
        for &bset in &g.b {
            let dropped = g.f_a & p.down_set(bset);
            let chain = [a, lifted, dropped, bset];
            c.expect(chain.windows(2).all(|w| bidom_leq(p, w[0], w[1])), "A ≤ I_B ∩ ↑A ≤ F_A ∩ ↓B ≤ B", describe);
        }
    }
    for &bset in &g.b {
        c.expect(p.down_set(g.f_a & p.down_set(bset)) == p.down_set(bset), "↓(F_A ∩ ↓B) = ↓B", describe);
    }
    let totally_ordered = [&g.a, &g.b]
        .iter()
        .all(|fam| fam.iter().all(|&x| fam.iter().all(|&y| bidom_leq(p, x, y) || bidom_leq(p, y, x))));
    if totally_ordered {
        c.expect(core != 0, "totally ordered pregap has a nonempty core", describe);
        if !g.a.is_empty() && !g.b.is_empty() {
            c.expect(
                matches!(fixpointfree_from_gap(cp, g), Err(Error::PreconditionUnsatisfiable(_))),
                "no fixed-point-free map from a finite totally ordered pregap",
                describe,
            );
        }
    }
    Ok(())
}

/// Least-element, dual, weaving, product, retract and lexicographic-sum
/// selections built from `t`, all verified.
fn check_selections(t: &Lattice, b: &Budget, c: &mut Check) -> Result<()> {
    let p = t.order();
    let cl = convex_sublattices(t, b)?;
    let min = min_selection(&cl);
    c.expect(verify_selection(p, &min).is_ok(), "least-element selection", String::new);
    c.expect(verify_selection(p, &dual_min_selection(&cl)).is_ok(), "dual least-element selection", String::new);

    // Every enumeration for small lattices, a seeded sample otherwise.
    let mut rng = ChaCha8Rng::seed_from_u64(seed_of(p));
    let enumerations: Vec<Vec<usize>> = if t.len() <= 5 {
        all_permutations(t.len())
    } else {
        (0..24)
            .map(|_| {
                let mut v: Vec<usize> = (0..t.len()).collect();
                v.shuffle(&mut rng);
                v
            })
            .collect()
    };
    for e in enumerations {
        c.ok("weaving selection", weaving_selection(&cl, &e))?;
    }

    if t.len() <= 4 {
        let two = convex_sublattices(&as_lattice(&Poset::chain(2))?, b)?;
        c.ok("product selection", transfer_product(&cl, &min, &two, &min_selection(&two), b))?;
    }

    // Retract onto the lattice with one irreducible element removed.
    if let Some(x) = crate::fixpoint::irreducibles(p).into_iter().find(|&x| x != t.bottom() && x != t.top()) {
        let target = crate::fixpoint::irreducible_target(p, x).expect("irreducible");
        let keep: Vec<usize> = (0..p.len()).filter(|&y| y != x).collect();
        let q = as_lattice(&p.induced(&keep))?;
        let s = MonotoneMap::new(q.order(), p, keep.clone())?;
        let r_values: Vec<usize> = (0..p.len())
            .map(|y| keep.binary_search(if y == x { &target } else { &y }).expect("kept element"))
            .collect();
        let r = MonotoneMap::new(p, q.order(), r_values)?;
        let clq = convex_sublattices(&q, b)?;
        c.ok("retract selection", transfer_retract(&cl, &min, &clq, &s, &r))?;
    }

    // Lexicographic sum of small chains and antichains indexed by the lattice.
    if t.len() <= 4 {
        let blocks: Vec<Poset> = (0..t.len()).map(|i| if i % 2 == 0 { Poset::chain(1 + i % 3) } else { Poset::antichain(2) }).collect();
        let l = LexSum::new(p, &blocks)?;
        let subs = blocks
            .iter()
            .map(|q| segment_lattices(q, b).map(|(_, cl)| min_selection(&cl)))
            .collect::<Result<Vec<_>>>()?;
        let index = min_selection(&segment_lattices(p, b)?.1);
        c.ok("lexicographic sum selection", lexsum_selection(&l, &subs, &index, b))?;
    }
    Ok(())
}

pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let p = Poset::antichain(n);
    let values = ValueOrder::from_fn(n, |u, v| u == v);
    let mut problem = MapProblem::unrestricted(&p, &values);
    problem.priority = None;
    let mut out = Vec::new();
    // Injective maps of an n-set into itself, read off a search over values.
    for_each_map(&problem, u64::MAX, |m| {
        let mut seen = vec![false; n];
        if m.iter().all(|&v| !std::mem::replace(&mut seen[v], true)) {
            out.push(m.to_vec());
        }
        ControlFlow::Continue(())
    })
    .expect("unbounded");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(name: &str, max_n: usize) -> SuiteReport {
        let params = SuiteParams { max_n, k: 3, no_fast_path: false, budget: Budget::default() };
        let r = run_suite(name, &params).unwrap();
        assert!(r.passed(), "{name}: {:?}", r.failures);
        r
    }

    #[test]
    fn small_runs_pass() {
        assert_eq!(run("walker", 4).instances, 1 + 2 + 5 + 16);
        run("not-fpp", 3);
        run("csp", 4);
        run("chain", 4);
        run("width-boolean", 4);
        run("pregaps", 3);
        run("filling", 5);
        run("embedding", 6);
        run("clfpp-finite", 5);
        run("quotient-retract", 5);
        run("selection", 5);
    }

    #[test]
    fn unknown_suite() {
        assert_eq!(run_suite("nope", &SuiteParams::new(3)).unwrap_err(), Error::UnknownSuite("nope".into()));
    }

    #[test]
    fn permutations_and_chains() {
        assert_eq!(all_permutations(4).len(), 24);
        let cp = enumerate_convex_poset(&Poset::chain(2), &Budget::default()).unwrap();
        // C(2-chain): {0} < {0,1} < {1}.
        assert_eq!(maximal_chains(&cp, 10).len(), 1);
    }
}
