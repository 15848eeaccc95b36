//! Line-based text format for posets and for the sets, selections and maps
//! attached to them.
//!
//! ```text
//! poset 4
//! # name 0 a
//! 0 < 2
//! 1 < 2
//! convex-family
//! set 0: 0 2
//! select 0 -> 2
//! map: 0 -> {1 2}
//! ```
//!
//! Cover lines use element indices; `set`, `select` and `map:` lines accept
//! labels as well. Other lines starting with `#` are comments.

use std::fmt::Write as _;

use crate::order::Poset;
use crate::subset::{self, Subset};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub poset: Poset,
    pub labels: Vec<String>,
    /// Sets declared in the `convex-family` section, by id.
    pub sets: Vec<Subset>,
    /// `(set id, element)` pairs.
    pub selection: Vec<(usize, usize)>,
    /// `(element, image set)` pairs.
    pub map: Vec<(usize, Subset)>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn index(tok: &str, n: usize, line: usize) -> Result<usize> {
    let i: usize = tok.parse().map_err(|_| parse_err(line, format!("expected an element index, found {tok:?}")))?;
    if i >= n {
        return Err(parse_err(line, format!("element {i} out of range for {n} elements")));
    }
    Ok(i)
}

/// Resolves a label first, then an index.
fn element(tok: &str, labels: &[String], line: usize) -> Result<usize> {
    match labels.iter().position(|l| l == tok) {
        Some(i) => Ok(i),
        None => index(tok, labels.len(), line),
    }
}

pub fn parse(text: &str) -> Result<Document> {
    let mut n = None;
    let mut labels: Vec<String> = Vec::new();
    let mut pairs = Vec::new();
    let mut set_lines = Vec::new();
    let mut select_lines = Vec::new();
    let mut map_lines = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let s = raw.trim();
        if s.is_empty() || s == "convex-family" {
            continue;
        }
        let toks: Vec<&str> = s.split_whitespace().collect();
        if let Some(rest) = s.strip_prefix('#') {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.first() == Some(&"name") {
                let n = n.ok_or_else(|| parse_err(line, "name before poset header"))?;
                if toks.len() != 3 {
                    return Err(parse_err(line, "expected `# name <index> <label>`"));
                }
                labels[index(toks[1], n, line)?] = toks[2].to_string();
            }
            continue;
        }
        if toks[0] == "poset" {
            if n.is_some() {
                return Err(parse_err(line, "second poset header"));
            }
            let size: usize = toks
                .get(1)
                .and_then(|t| t.parse().ok())
                .filter(|_| toks.len() == 2)
                .ok_or_else(|| parse_err(line, "expected `poset <n>`"))?;
            subset::check_host(size).map_err(|e| parse_err(line, e.to_string()))?;
            n = Some(size);
            labels = (0..size).map(|i| i.to_string()).collect();
            continue;
        }
        let n = n.ok_or_else(|| parse_err(line, "missing `poset <n>` header"))?;
        match toks[0] {
            "set" => set_lines.push((line, s.to_string())),
            "select" => select_lines.push((line, toks.iter().map(|t| t.to_string()).collect::<Vec<_>>())),
            "map:" => map_lines.push((line, s["map:".len()..].to_string())),
            _ => {
                if toks.len() != 3 || toks[1] != "<" {
                    return Err(parse_err(line, format!("unrecognised line {s:?}")));
                }
                pairs.push((index(toks[0], n, line)?, index(toks[2], n, line)?, line));
            }
        }
    }
    let n = n.ok_or_else(|| parse_err(0, "missing `poset <n>` header"))?;
    let covers: Vec<(usize, usize)> = pairs.iter().map(|&(a, b, _)| (a, b)).collect();
    let poset = Poset::from_covers(n, &covers).map_err(|e| {
        let line = match e {
            Error::CycleDetected(a, b) => pairs.iter().find(|p| (p.0, p.1) == (a, b)).map_or(0, |p| p.2),
            _ => 0,
        };
        parse_err(line, e.to_string())
    })?;

    let mut sets = Vec::new();
    for (line, s) in set_lines {
        let (head, body) = s.split_once(':').ok_or_else(|| parse_err(line, "expected `set <id>: <elements>`"))?;
        let id: usize = head["set".len()..]
            .trim()
            .parse()
            .map_err(|_| parse_err(line, "bad set id"))?;
        if id != sets.len() {
            return Err(parse_err(line, format!("set ids must be consecutive; expected {}", sets.len())));
        }
        let mut members: Subset = 0;
        for t in body.split_whitespace() {
            members |= subset::singleton(element(t, &labels, line)?);
        }
        sets.push(members);
    }
    let mut selection = Vec::new();
    for (line, toks) in select_lines {
        if toks.len() != 4 || toks[2] != "->" {
            return Err(parse_err(line, "expected `select <set-id> -> <element>`"));
        }
        let id: usize = toks[1].parse().map_err(|_| parse_err(line, "bad set id"))?;
        if id >= sets.len() {
            return Err(parse_err(line, format!("unknown set {id}")));
        }
        selection.push((id, element(&toks[3], &labels, line)?));
    }
    let mut map = Vec::new();
    for (line, body) in map_lines {
        let (x, img) = body.split_once("->").ok_or_else(|| parse_err(line, "expected `map: x -> {a b}`"))?;
        let img = img
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| parse_err(line, "image must be enclosed in braces"))?;
        let mut members: Subset = 0;
        for t in img.split_whitespace() {
            members |= subset::singleton(element(t, &labels, line)?);
        }
        map.push((element(x.trim(), &labels, line)?, members));
    }
    Ok(Document { poset, labels, sets, selection, map })
}

/// Header, `# name` lines for labels differing from the index, and covers.
pub fn write_poset(p: &Poset, labels: &[String]) -> String {
    let mut out = format!("poset {}\n", p.len());
    for (i, l) in labels.iter().enumerate() {
        if *l != i.to_string() {
            writeln!(out, "# name {i} {l}").unwrap();
        }
    }
    for (a, b) in p.covers() {
        writeln!(out, "{a} < {b}").unwrap();
    }
    out
}

pub fn format_set(s: Subset, labels: &[String]) -> String {
    let names: Vec<&str> = subset::iter(s).map(|x| labels[x].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

/// `convex-family` section followed by one `select` line per set.
pub fn write_selection(pairs: &[(Subset, usize)], labels: &[String]) -> String {
    let mut out = String::from("convex-family\n");
    for (i, &(s, _)) in pairs.iter().enumerate() {
        let names: Vec<&str> = subset::iter(s).map(|x| labels[x].as_str()).collect();
        writeln!(out, "set {i}: {}", names.join(" ")).unwrap();
    }
    for (i, &(_, v)) in pairs.iter().enumerate() {
        writeln!(out, "select {i} -> {}", labels[v]).unwrap();
    }
    out
}

/// One `map:` line per element.
pub fn write_set_map(f: &[Subset], labels: &[String]) -> String {
    let mut out = String::new();
    for (x, &s) in f.iter().enumerate() {
        let names: Vec<&str> = subset::iter(s).map(|y| labels[y].as_str()).collect();
        writeln!(out, "map: {} -> {{{}}}", labels[x], names.join(" ")).unwrap();
    }
    out
}
