//! Hasse diagrams in Graphviz `dot` syntax.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::convex::enumerate_convex_poset;
use crate::lattice::{as_lattice, convex_sublattices};
use crate::order::Poset;
use crate::text::format_set;
use crate::{Budget, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// The poset itself.
    P,
    /// Nonempty convex subsets under bi-domination.
    CP,
    /// Convex sublattices of a lattice.
    CL,
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Target> {
        match s {
            "P" => Ok(Target::P),
            "CP" => Ok(Target::CP),
            "CL" => Ok(Target::CL),
            _ => Err(Error::Parse { line: 0, msg: format!("unknown target {s:?}; expected P, CP or CL") }),
        }
    }
}

/// Nodes in index order, edges along covers, bottom to top.
pub fn hasse_dot(p: &Poset, names: &[String]) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for (i, name) in names.iter().enumerate() {
        writeln!(out, "  n{i} [label=\"{}\"];", name.replace('"', "\\\"")).unwrap();
    }
    for (a, b) in p.covers() {
        writeln!(out, "  n{a} -> n{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn emit_dot(p: &Poset, labels: &[String], target: Target, budget: &Budget) -> Result<String> {
    Ok(match target {
        Target::P => hasse_dot(p, labels),
        Target::CP => {
            let c = enumerate_convex_poset(p, budget)?;
            let names: Vec<String> = c.sets().iter().map(|&s| format_set(s, labels)).collect();
            hasse_dot(c.order(), &names)
        }
        Target::CL => {
            let cl = convex_sublattices(&as_lattice(p)?, budget)?;
            let names: Vec<String> = cl.sets.sets().iter().map(|&s| format_set(s, labels)).collect();
            hasse_dot(cl.sets.order(), &names)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::generate;

    fn counts(dot: &str) -> (usize, usize) {
        let nodes = dot.lines().filter(|l| l.contains("[label=")).count();
        let edges = dot.lines().filter(|l| l.contains("->")).count();
        (nodes, edges)
    }

    fn emit(key: &str, params: &[usize], target: Target) -> String {
        let ex = generate(key, params).unwrap();
        emit_dot(&ex.poset, &ex.labels, target, &Budget::default()).unwrap()
    }

    #[test]
    fn sizes() {
        assert_eq!(counts(&emit("chain", &[3], Target::P)), (3, 2));
        assert_eq!(counts(&emit("two_level", &[], Target::CP)).0, 15);
        assert_eq!(counts(&emit("boolean", &[2], Target::CL)).0, 9);
        assert_eq!(emit("boolean", &[2], Target::CL), emit("boolean", &[2], Target::CL));
        assert!(emit("chain", &[2], Target::P).contains("n0 -> n1;"));
    }

    #[test]
    fn cl_requires_a_lattice() {
        let ex = generate("two_level", &[]).unwrap();
        assert!(matches!(
            emit_dot(&ex.poset, &ex.labels, Target::CL, &Budget::default()),
            Err(Error::NotALattice { .. })
        ));
        assert!("XY".parse::<Target>().is_err());
    }
}
