//! Acceptance gate: every criterion is an exact combinatorial check with its
//! runtime limit. One PASS/FAIL line is printed per criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use ordfix::convex::{CPoset, bidom_leq, enumerate_convex_poset};
use ordfix::fixpoint::{Witness, decide_cfpp, decide_fpp_cposet, irreducibles, validate_set_map};
use ordfix::lattice::{as_lattice, convex_sublattices};
use ordfix::selection::{SelectionMap, decide_csp, verify_selection};
use ordfix::suite::{SuiteParams, run_suite};
use ordfix::zoo::{NamedExample, enumerate_posets, generate, robert_down_level, robert_duality};
use ordfix::{Budget, Poset, Subset};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn budget() -> Budget {
    Budget::default()
}

fn suite(name: &str, max_n: usize, k: usize, expected_instances: usize) -> Outcome {
    let params = SuiteParams { max_n, k, no_fast_path: false, budget: budget() };
    let r = run_suite(name, &params).map_err(|e| e.to_string())?;
    ensure(r.instances == expected_instances, || {
        format!("{name}: {} instances, expected {expected_instances}", r.instances)
    })?;
    ensure(r.passed(), || format!("{name}: {} failures, first {:?}", r.failures.len(), r.failures.first()))?;
    Ok(format!("{name} n<={max_n}: {} instances, 0 failures", r.instances))
}

fn maximal_lower_bounds(c: &CPoset, x: usize, y: usize) -> Vec<usize> {
    let o = c.order();
    let lower: Vec<usize> = (0..c.len()).filter(|&z| o.leq(z, x) && o.leq(z, y)).collect();
    lower.iter().copied().filter(|&z| !lower.iter().any(|&w| o.lt(z, w))).collect()
}

fn crit_nine_example() -> Outcome {
    let ex = generate("nine_example", &[]).map_err(|e| e.to_string())?;
    ensure(as_lattice(&ex.poset).is_ok(), || "not a lattice".into())?;
    let c = enumerate_convex_poset(&ex.poset, &budget()).map_err(|e| e.to_string())?;
    let idx = |labels: &[&str]| {
        let s = ex.elements(labels);
        c.index_of(s).ok_or_else(|| format!("{labels:?} is not convex"))
    };
    let (x, y) = (idx(&["00", "c", "11"])?, idx(&["01", "10"])?);
    let (z0, z1) = (idx(&["0", "a", "1"])?, idx(&["0", "b", "1"])?);
    let maximal = maximal_lower_bounds(&c, x, y);
    ensure(maximal.contains(&z0) && maximal.contains(&z1), || format!("maximal lower bounds {maximal:?}"))?;
    ensure(maximal.len() >= 2, || "infimum exists".into())?;
    Ok(format!("|C(P)| = {}, {} maximal lower bounds, no infimum", c.len(), maximal.len()))
}

fn crit_two_level() -> Outcome {
    let ex = generate("two_level", &[]).map_err(|e| e.to_string())?;
    let p = &ex.poset;
    ensure(irreducibles(p).is_empty(), || "has irreducibles".into())?;
    let v = decide_cfpp(p, &budget(), true).map_err(|e| e.to_string())?;
    ensure(!v.holds, || "CFPP holds".into())?;
    let Witness::SetMap(f) = &v.witness else {
        return Err(format!("unexpected witness {:?}", v.witness));
    };
    validate_set_map(p, f, true).map_err(|e| format!("witness invalid: {e}"))?;
    let c = enumerate_convex_poset(p, &budget()).map_err(|e| e.to_string())?;
    ensure(c.len() == 15, || format!("|C(P)| = {}", c.len()))?;
    let w = decide_fpp_cposet(p, &budget(), true).map_err(|e| e.to_string())?;
    ensure(w.holds && w.fast_path.is_none(), || format!("C(P) FPP verdict {w}"))?;
    Ok(format!("fixed-point-free witness validated, C(P) FPP after {} search nodes", w.nodes))
}

fn selection_of(w: &Witness) -> Option<SelectionMap> {
    let Witness::Selection(pairs) = w else { return None };
    Some(SelectionMap { sets: pairs.iter().map(|p| p.0).collect(), values: pairs.iter().map(|p| p.1).collect() })
}

fn crit_csp() -> Outcome {
    let crown = generate("crown_bounded", &[6]).map_err(|e| e.to_string())?;
    let c = enumerate_convex_poset(&crown.poset, &budget()).map_err(|e| e.to_string())?;
    ensure(c.len() == 100, || format!("|C(P)| = {}", c.len()))?;
    let v = decide_csp(&crown.poset, &budget(), true).map_err(|e| e.to_string())?;
    ensure(!v.holds && v.fast_path.is_none(), || format!("bounded crown: {v}"))?;

    let p2 = generate("powerset_plus", &[2]).map_err(|e| e.to_string())?;
    let v2 = decide_csp(&p2.poset, &budget(), true).map_err(|e| e.to_string())?;
    let sel = selection_of(&v2.witness).ok_or("no selection for powerset_plus(2)")?;
    let c2 = enumerate_convex_poset(&p2.poset, &budget()).map_err(|e| e.to_string())?;
    ensure(v2.holds && sel.len() == c2.len(), || format!("powerset_plus(2): {v2}"))?;
    verify_selection(&p2.poset, &sel).map_err(|e| format!("powerset_plus(2) selection: {e}"))?;

    let p3 = generate("powerset_plus", &[3]).map_err(|e| e.to_string())?;
    let v3 = decide_csp(&p3.poset, &budget(), false).map_err(|e| e.to_string())?;
    ensure(!v3.holds && v3.fast_path == Some("bounded crown retract"), || format!("powerset_plus(3): {v3}"))?;
    Ok(format!("bounded crown exhaustive after {} nodes; powerset_plus(2) yes; powerset_plus(3) no", v.nodes))
}

fn crit_selections() -> Outcome {
    let a = suite("selection", 8, 3, 300)?;
    let b = suite("quotient-retract", 7, 3, 78)?;
    Ok(format!("{a}; {b}"))
}

fn crit_embedding() -> Outcome {
    let a = suite("embedding", 8, 3, 300)?;
    let b = suite("width-boolean", 5, 3, 87)?;
    Ok(format!("{a}; {b}"))
}

fn crit_cl_algebra() -> Outcome {
    let a = suite("cl-algebra", 7, 3, 78 + 500)?;
    let b2 = generate("boolean", &[2]).map_err(|e| e.to_string())?;
    let t = as_lattice(&b2.poset).map_err(|e| e.to_string())?;
    let cl = convex_sublattices(&t, &budget()).map_err(|e| e.to_string())?;
    ensure(cl.len() == 9, || format!("|C_L(B_2)| = {}", cl.len()))?;
    Ok(format!("{a}; |C_L(B_2)| = 9"))
}

/// For each member of `C(P)`, every value of the intersection of the cones
/// over a chain ending (`up`) or starting (`!up`) there.
fn chain_cone_values(c: &CPoset, up: bool) -> Vec<BTreeSet<Subset>> {
    let p = c.host();
    let o = c.order();
    let cone = |i: usize| if up { p.up_set(c.set(i)) } else { p.down_set(c.set(i)) };
    let mut order = o.linear_extension();
    if !up {
        order.reverse();
    }
    let mut values: Vec<BTreeSet<Subset>> = vec![BTreeSet::new(); c.len()];
    for &a in &order {
        let mut vs = BTreeSet::from([cone(a)]);
        for (b, earlier) in values.iter().enumerate() {
            let before = if up { o.lt(b, a) } else { o.lt(a, b) };
            if before {
                vs.extend(earlier.iter().map(|&v| v & cone(a)));
            }
        }
        values[a] = vs;
    }
    values
}

/// Every pregap of chains, including empty ones, has a nonempty core. The
/// intersection over a chain of up-sets depends only on the chain, and every
/// achievable value is enumerated by extending chains one step at a time.
fn totally_ordered_cores_nonempty(p: &Poset) -> Result<usize, String> {
    let c = enumerate_convex_poset(p, &budget()).map_err(|e| e.to_string())?;
    let f = chain_cone_values(&c, true);
    let i = chain_cone_values(&c, false);
    let all = p.all();
    let mut ends: Vec<(Option<usize>, Vec<Subset>)> = vec![(None, vec![all])];
    ends.extend((0..c.len()).map(|a| (Some(a), f[a].iter().copied().collect())));
    let mut starts: Vec<(Option<usize>, Vec<Subset>)> = vec![(None, vec![all])];
    starts.extend((0..c.len()).map(|b| (Some(b), i[b].iter().copied().collect())));
    let mut checked = 0;
    for (a, fs) in &ends {
        for (b, is) in &starts {
            if let (Some(a), Some(b)) = (a, b) {
                if !bidom_leq(p, c.set(*a), c.set(*b)) {
                    continue;
                }
            }
            for &fv in fs {
                for &iv in is {
                    checked += 1;
                    if fv & iv == 0 {
                        return Err(format!("empty core for chains ending at {a:?} and starting at {b:?}"));
                    }
                }
            }
        }
    }
    Ok(checked)
}

fn crit_pregaps() -> Outcome {
    let a = suite("pregaps", 4, 3, 24)?;
    let mut classes = 0;
    let mut combos = 0;
    for n in 1..=5 {
        for p in enumerate_posets(n).map_err(|e| e.to_string())? {
            combos += totally_ordered_cores_nonempty(&p).map_err(|e| format!("{}: {e}", p.canonical_form()))?;
            classes += 1;
        }
    }
    Ok(format!("{a}; totally ordered pregaps nonempty core over {classes} posets ({combos} cone combinations)"))
}

fn qbar_family(ex: &NamedExample, prefix: char, from: usize, n_max: usize) -> Subset {
    (from..=n_max).fold(0, |acc, m| acc | ex.elements(&[&format!("{prefix}{m}")]))
}

fn crit_closed_forms() -> Outcome {
    const N: usize = 6;
    let ex = generate("qbar", &[N]).map_err(|e| e.to_string())?;
    let p = &ex.poset;
    ensure(as_lattice(p).is_ok(), || "qbar is not a lattice".into())?;
    let fam = |prefix, from| qbar_family(&ex, prefix, from, N);
    let (a, b, c) = (fam('a', 0), fam('b', 0), fam('c', 0));
    let (zero, one) = (ex.elements(&["0"]), ex.elements(&["1"]));
    let f_all = a | b | one;
    let i_all = a | c | zero;
    let an = |n| a | fam('c', n);
    let bn = |n| a | fam('b', n);
    for n in 0..=4 {
        let f_n = p.up_set(a | ex.elements(&[&format!("c{n}")]));
        let i_n = p.down_set(a | fam('b', n));
        ensure(f_n == a | b | fam('c', n) | one, || format!("F_{n}"))?;
        ensure(i_n == a | fam('b', n) | c | zero, || format!("I_{n}"))?;
        ensure(f_n & i_all == an(n) && i_n & f_all == bn(n), || format!("A_{n}, B_{n}"))?;
        ensure(p.up_set(an(n)) == f_n && p.down_set(bn(n)) == i_n, || format!("cones of A_{n}, B_{n}"))?;
        for m in 0..=4 {
            let chain = bidom_leq(p, an(n), an(n + 1))
                && !bidom_leq(p, an(n + 1), an(n))
                && bidom_leq(p, an(n + 1), bn(m + 1))
                && bidom_leq(p, bn(m + 1), bn(m))
                && !bidom_leq(p, bn(m), bn(m + 1));
            ensure(chain, || format!("A_{n} < A_{} <= B_{} < B_{m}", n + 1, m + 1))?;
        }
    }

    let r = generate("robert", &[3]).map_err(|e| e.to_string())?;
    let t = as_lattice(&r.poset).map_err(|e| e.to_string())?;
    let s = robert_duality(3);
    let anti = (0..t.len()).all(|x| (0..t.len()).all(|y| t.leq(x, y) == t.leq(s[y], s[x])));
    ensure(anti && (0..t.len()).all(|x| s[s[x]] == x), || "S is not an involutive duality".into())?;
    let mut pairs = 0;
    for &x in &robert_down_level(3) {
        for y in 0..t.len() {
            if t.order().comparable(x, y) {
                continue;
            }
            let j = t.join(x, y);
            ensure(j == t.join(x, s[y]) && j == t.join(s[x], y) && j == t.join(s[x], s[y]), || {
                format!("join identity fails for {}, {}", r.labels[x], r.labels[y])
            })?;
            pairs += 1;
        }
    }
    Ok(format!("qbar({N}) closed forms for n<=4; robert(3) self-dual, join identity on {pairs} pairs"))
}

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        ("nine-element lattice with non-lattice C(P)", Duration::from_secs(1), crit_nine_example),
        ("two-level poset separates CFPP from C(P) FPP", Duration::from_secs(10), crit_two_level),
        ("CFPP equals dismantlability, RFPP agrees", Duration::from_secs(600), || suite("walker", 5, 3, 87)),
        ("CFPP implies FPP of C(P)", Duration::from_secs(300), || suite("not-fpp", 4, 3, 24)),
        ("selection property on bounded crown and powersets", Duration::from_secs(1800), crit_csp),
        ("convex sublattice algebra", Duration::from_secs(600), crit_cl_algebra),
        ("selection constructions and quotient retracts", Duration::from_secs(900), crit_selections),
        ("Boolean embedding criterion", Duration::from_secs(600), crit_embedding),
        ("pregap machinery", Duration::from_secs(600), crit_pregaps),
        ("gap closed forms and self-dual tree lattice", Duration::from_secs(1), crit_closed_forms),
    ];
    let mut failed = Vec::new();
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= limit {
                Ok(detail)
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS [{elapsed:.2?}] {name}: {detail}", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL [{elapsed:.2?}] {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn nine_example_lower_bounds_are_exactly_two() {
    let ex = generate("nine_example", &[]).unwrap();
    let c = enumerate_convex_poset(&ex.poset, &budget()).unwrap();
    let x = c.index_of(ex.elements(&["00", "c", "11"])).unwrap();
    let y = c.index_of(ex.elements(&["01", "10"])).unwrap();
    let names: BTreeMap<usize, Subset> = maximal_lower_bounds(&c, x, y).into_iter().map(|z| (z, c.set(z))).collect();
    let expected: BTreeSet<Subset> = [ex.elements(&["0", "a", "1"]), ex.elements(&["0", "b", "1"])].into();
    assert_eq!(names.values().copied().collect::<BTreeSet<_>>(), expected);
}
