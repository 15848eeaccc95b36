//! Named example structures, exhaustive enumeration of small posets and
//! lattices, and seeded random generation.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::{Lattice, as_lattice};
use crate::order::{CanonicalForm, Poset};
use crate::subset;
use crate::{Error, Result};

/// Largest size accepted by [`enumerate_posets`].
pub const MAX_ENUMERATED_POSET: usize = 7;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedExample {
    pub key: String,
    pub params: Vec<usize>,
    pub poset: Poset,
    pub labels: Vec<String>,
}

impl NamedExample {
    /// Index of the element carrying `label`.
    pub fn element(&self, label: &str) -> usize {
        self.labels
            .iter()
            .position(|l| l == label)
            .unwrap_or_else(|| panic!("no element labelled {label} in {}", self.key))
    }

    /// Packed subset of the elements with the given labels.
    pub fn elements(&self, labels: &[&str]) -> subset::Subset {
        subset::from_elems(labels.iter().map(|l| self.element(l)))
    }
}

pub const KEYS: &[&str] = &[
    "crown",
    "crown_bounded",
    "nine_example",
    "two_level",
    "qbar",
    "robert",
    "powerset_plus",
    "boolean",
    "chain",
    "antichain",
    "fence",
];

fn bad(key: &str, msg: impl Into<String>) -> Error {
    Error::BadParams { key: key.to_string(), msg: msg.into() }
}

fn one_param(key: &str, params: &[usize], default: Option<usize>) -> Result<usize> {
    match (params, default) {
        ([n], _) => Ok(*n),
        ([], Some(d)) => Ok(d),
        _ => Err(bad(key, "expected exactly one parameter")),
    }
}

pub fn generate(key: &str, params: &[usize]) -> Result<NamedExample> {
    let (poset, labels) = match key {
        "crown" => {
            let n = one_param(key, params, Some(6))?;
            crown(key, n)?
        }
        "crown_bounded" => {
            let n = one_param(key, params, Some(6))?;
            let (p, labels) = crown(key, n)?;
            with_bounds_labelled(&p, labels)
        }
        "nine_example" => {
            no_params(key, params)?;
            nine_example()
        }
        "two_level" => {
            no_params(key, params)?;
            let p = Poset::from_covers(4, &[(0, 2), (0, 3), (1, 2), (1, 3)])?;
            (p, labels_of(&["a", "b", "c", "d"]))
        }
        "qbar" => {
            let n = one_param(key, params, Some(6))?;
            if n == 0 {
                return Err(bad(key, "N must be at least 1"));
            }
            qbar(n)?
        }
        "robert" => {
            let d = one_param(key, params, Some(3))?;
            if !(1..=4).contains(&d) {
                return Err(bad(key, "depth must be between 1 and 4"));
            }
            robert(d)?
        }
        "powerset_plus" | "boolean" => {
            let k = one_param(key, params, None)?;
            if k > 5 {
                return Err(bad(key, "k must be at most 5"));
            }
            let (p, labels) = boolean(k)?;
            if key == "boolean" {
                (p, labels)
            } else {
                let mut labels = labels;
                labels.push("⊤".into());
                (p.with_top(), labels)
            }
        }
        "chain" | "antichain" | "fence" => {
            let n = one_param(key, params, None)?;
            if n == 0 || n > subset::MAX_HOST {
                return Err(bad(key, "size must be between 1 and 64"));
            }
            let p = match key {
                "chain" => Poset::chain(n),
                "antichain" => Poset::antichain(n),
                _ => fence(n)?,
            };
            (p, (0..n).map(|i| i.to_string()).collect())
        }
        _ => return Err(Error::UnknownKey(key.to_string())),
    };
    Ok(NamedExample { key: key.to_string(), params: params.to_vec(), poset, labels })
}

fn no_params(key: &str, params: &[usize]) -> Result<()> {
    if params.is_empty() {
        Ok(())
    } else {
        Err(bad(key, "takes no parameters"))
    }
}

fn labels_of(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// `⊥` becomes element 0 and `⊤` the last element.
fn with_bounds_labelled(p: &Poset, labels: Vec<String>) -> (Poset, Vec<String>) {
    let mut out = vec!["⊥".to_string()];
    out.extend(labels);
    out.push("⊤".into());
    (p.with_bounds(), out)
}

/// `a_i < b_i` and `a_i < b_{i+1 mod m}` for `m = n / 2`.
fn crown(key: &str, n: usize) -> Result<(Poset, Vec<String>)> {
    if n < 6 || !n.is_multiple_of(2) || n > 62 {
        return Err(bad(key, "crown size must be even, from 6 to 62"));
    }
    let m = n / 2;
    let mut covers = Vec::new();
    for i in 0..m {
        covers.push((i, m + i));
        covers.push((i, m + (i + 1) % m));
    }
    let mut labels: Vec<String> = (0..m).map(|i| format!("a{i}")).collect();
    labels.extend((0..m).map(|i| format!("b{i}")));
    Ok((Poset::from_covers(n, &covers)?, labels))
}

/// Elements numbered bottom to top and left to right in the usual drawing,
/// where `c` sits between `01` and `10`; `⊥` and `⊤` come last.
fn nine_example() -> (Poset, Vec<String>) {
    let names = ["a", "b", "0", "1", "00", "01", "c", "10", "11"];
    let id = |s: &str| names.iter().position(|&n| n == s).unwrap();
    let mut covers = Vec::new();
    for i in ["0", "1"] {
        for j in ["0", "1"] {
            covers.push((id(i), id(&format!("{i}{j}"))));
        }
    }
    for (x, y) in [("a", "0"), ("a", "c"), ("b", "c"), ("b", "1")] {
        covers.push((id(x), id(y)));
    }
    let q = Poset::from_covers(names.len(), &covers).expect("cover list is acyclic");
    // Put ⊥ and ⊤ after the named elements.
    let p = q.with_bounds();
    let n = p.len();
    let mut perm = vec![0; n];
    perm[0] = n - 2;
    for (x, slot) in perm.iter_mut().enumerate().take(n - 1).skip(1) {
        *slot = x - 1;
    }
    perm[n - 1] = n - 1;
    let mut labels = labels_of(&names);
    labels.push("⊥".into());
    labels.push("⊤".into());
    (p.permuted(&perm), labels)
}

/// `a_m, b_m, c_m` for `m <= N` with `a_n < b_n`, `c_m < b_n`, `c_m <= c_n`
/// for `m <= n`, then a least element `0` and a largest element `1`.
fn qbar(n: usize) -> Result<(Poset, Vec<String>)> {
    let k = n + 1;
    let (a, b, c) = (|m: usize| m, |m: usize| k + m, |m: usize| 2 * k + m);
    let (zero, one) = (3 * k, 3 * k + 1);
    let mut covers = Vec::new();
    for m in 0..k {
        covers.push((a(m), b(m)));
        for j in 0..k {
            covers.push((c(m), b(j)));
        }
        if m + 1 < k {
            covers.push((c(m), c(m + 1)));
        }
        covers.push((zero, a(m)));
        covers.push((zero, c(m)));
        covers.push((b(m), one));
    }
    let mut labels: Vec<String> = Vec::new();
    for x in ["a", "b", "c"] {
        labels.extend((0..k).map(|m| format!("{x}{m}")));
    }
    labels.push("0".into());
    labels.push("1".into());
    Ok((Poset::from_covers(3 * k + 2, &covers)?, labels))
}

/// A finite binary sequence: `len` bits, bit `i` of `bits` is position `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Seq {
    len: usize,
    bits: usize,
}

impl Seq {
    fn is_prefix_of(self, other: Seq) -> bool {
        self.len <= other.len && other.bits & ((1 << self.len) - 1) == self.bits
    }

    fn label(self) -> String {
        (0..self.len).map(|i| if self.bits >> i & 1 == 1 { '1' } else { '0' }).collect()
    }
}

fn sequences(len: usize) -> impl Iterator<Item = Seq> {
    (0..1usize << len).map(move |bits| Seq { len, bits })
}

/// Element kinds of the truncated binary-tree lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Node {
    Down(Seq),
    Up(Seq),
    Leaf(Seq),
}

fn robert_nodes(d: usize) -> Vec<Node> {
    let mut nodes = Vec::new();
    for len in 0..d {
        nodes.extend(sequences(len).map(Node::Down));
    }
    for len in 0..d {
        nodes.extend(sequences(len).map(Node::Up));
    }
    nodes.extend(sequences(d).map(Node::Leaf));
    nodes
}

fn robert_lt(x: Node, y: Node) -> bool {
    let strict = |s: Seq, t: Seq| s != t && s.is_prefix_of(t);
    match (x, y) {
        (Node::Down(s), Node::Down(t)) => strict(s, t),
        (Node::Up(s), Node::Up(t)) => strict(t, s),
        // Equal sequences included: (s,0) < t < (s,1) for any leaf t extending s.
        (Node::Down(s), Node::Up(t)) => s.is_prefix_of(t) || t.is_prefix_of(s),
        (Node::Down(s), Node::Leaf(t)) => strict(s, t),
        (Node::Leaf(s), Node::Up(t)) => strict(t, s),
        _ => false,
    }
}

/// Levels `D` and `U` hold sequences shorter than `d`; leaves `A` have length `d`.
fn robert(d: usize) -> Result<(Poset, Vec<String>)> {
    let nodes = robert_nodes(d);
    let mut pairs = Vec::new();
    for (i, &x) in nodes.iter().enumerate() {
        for (j, &y) in nodes.iter().enumerate() {
            if robert_lt(x, y) {
                pairs.push((i, j));
            }
        }
    }
    let p = Poset::from_covers(nodes.len(), &pairs)?;
    let labels = nodes
        .iter()
        .map(|&x| match x {
            Node::Down(s) => format!("D{}", s.label()),
            Node::Up(s) => format!("U{}", s.label()),
            Node::Leaf(s) => format!("A{}", s.label()),
        })
        .collect();
    Ok((p, labels))
}

/// The map `S` of the truncated tree lattice: swaps `D` and `U` copies of each
/// sequence and fixes leaves.
pub fn robert_duality(d: usize) -> Vec<usize> {
    let nodes = robert_nodes(d);
    let find = |t: Node| nodes.iter().position(|&x| x == t).unwrap();
    nodes
        .iter()
        .map(|&x| match x {
            Node::Down(s) => find(Node::Up(s)),
            Node::Up(s) => find(Node::Down(s)),
            Node::Leaf(_) => find(x),
        })
        .collect()
}

/// Elements of `robert(d)` lying in the `D` level.
pub fn robert_down_level(d: usize) -> Vec<usize> {
    robert_nodes(d)
        .iter()
        .enumerate()
        .filter(|(_, x)| matches!(x, Node::Down(_)))
        .map(|(i, _)| i)
        .collect()
}

/// Subsets of `{1..k}` by inclusion; element `mask` is the subset with those bits.
fn boolean(k: usize) -> Result<(Poset, Vec<String>)> {
    let n = 1usize << k;
    let p = Poset::from_leq(n, |x, y| x & !y == 0)?;
    let labels = (0..n)
        .map(|mask| {
            if mask == 0 {
                "∅".to_string()
            } else {
                (0..k).filter(|i| mask >> i & 1 == 1).map(|i| (i + 1).to_string()).collect()
            }
        })
        .collect();
    Ok((p, labels))
}

/// Zigzag `0 < 1 > 2 < 3 > ...`.
fn fence(n: usize) -> Result<Poset> {
    let covers: Vec<(usize, usize)> = (0..n.saturating_sub(1))
        .map(|i| if i % 2 == 0 { (i, i + 1) } else { (i + 1, i) })
        .collect();
    Poset::from_covers(n, &covers)
}

fn poset_cache() -> &'static Mutex<BTreeMap<usize, Vec<Poset>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, Vec<Poset>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// One poset per isomorphism class on `n` elements, sorted by canonical form.
///
/// Every poset arises from one on `n - 1` elements by adding a new maximal
/// element above some down-set; duplicates are removed by canonical form.
pub fn enumerate_posets(n: usize) -> Result<Vec<Poset>> {
    if n > MAX_ENUMERATED_POSET {
        return Err(Error::BudgetExceeded { what: "enumerated poset size", limit: MAX_ENUMERATED_POSET as u64 });
    }
    if let Some(v) = poset_cache().lock().unwrap().get(&n) {
        return Ok(v.clone());
    }
    let out = if n == 0 {
        vec![Poset::antichain(0)]
    } else {
        let mut classes: BTreeMap<CanonicalForm, Poset> = BTreeMap::new();
        for q in enumerate_posets(n - 1)? {
            for d in 0..=q.all() {
                if !q.is_down_set(d) {
                    continue;
                }
                let ext = Poset::from_leq_unchecked(n, |x, y| {
                    if y == n - 1 {
                        x == n - 1 || subset::contains(d, x)
                    } else {
                        x != n - 1 && q.leq(x, y)
                    }
                });
                classes.entry(ext.canonical_form()).or_insert(ext);
            }
        }
        classes.into_values().collect()
    };
    poset_cache().lock().unwrap().insert(n, out.clone());
    Ok(out)
}

/// One lattice per isomorphism class on `n >= 1` elements.
///
/// A lattice with at least two elements is its interior plus bounds, and
/// non-isomorphic interiors give non-isomorphic lattices.
pub fn enumerate_lattices(n: usize) -> Result<Vec<Lattice>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![as_lattice(&Poset::chain(1))?]);
    }
    if n - 2 > MAX_ENUMERATED_POSET {
        return Err(Error::BudgetExceeded { what: "enumerated lattice size", limit: MAX_ENUMERATED_POSET as u64 + 2 });
    }
    Ok(enumerate_posets(n - 2)?
        .into_iter()
        .filter_map(|q| as_lattice(&q.with_bounds()).ok())
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureKind {
    Poset,
    Lattice,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RandomStructure {
    Poset(Poset),
    Lattice(Lattice),
}

/// Deterministic for a fixed seed. Posets are random order relations
/// compatible with a hidden linear order, relabelled at random. Lattices are
/// random intersection-closed families of subsets of an `n`-set together with
/// the full set, ordered by inclusion, with at most `n` members.
pub fn random_structure(kind: StructureKind, n: usize, seed: u64) -> Result<RandomStructure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        StructureKind::Poset => Ok(RandomStructure::Poset(random_poset(n, 0.35, &mut rng)?)),
        StructureKind::Lattice => Ok(RandomStructure::Lattice(random_lattice(n, &mut rng)?)),
    }
}

pub fn random_poset(n: usize, density: f64, rng: &mut impl Rng) -> Result<Poset> {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let pairs: Vec<(usize, usize)> = pairs.into_iter().map(|(i, j)| (perm[i], perm[j])).collect();
    Poset::from_covers(n, &pairs)
}

pub fn random_lattice(n: usize, rng: &mut impl Rng) -> Result<Lattice> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let ground = n.clamp(2, 16);
    let full: u64 = (1 << ground) - 1;
    let mut family: Vec<u64> = vec![full];
    for _ in 0..8 * n {
        if family.len() >= n {
            break;
        }
        let s: u64 = rng.gen::<u64>() & full;
        let mut next = family.clone();
        let mut frontier = vec![s];
        while let Some(t) = frontier.pop() {
            if next.contains(&t) {
                continue;
            }
            next.push(t);
            let meets: Vec<u64> = next.iter().map(|&u| u & t).collect();
            frontier.extend(meets);
            if next.len() > n {
                break;
            }
        }
        if next.len() <= n {
            family = next;
        }
    }
    family.sort_by_key(|&s| (s.count_ones(), s));
    let p = Poset::from_leq_unchecked(family.len(), |i, j| family[i] & !family[j] == 0);
    as_lattice(&p)
}
