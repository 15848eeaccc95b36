//! Finite order theory toolkit.
//!
//! Builds the poset `C(P)` of nonempty convex subsets of a finite poset under
//! the bi-domination order, the lattice `C_L(T)` of convex sublattices of a
//! finite lattice, and decides fixed point and selection properties for
//! multivalued maps into them. Every negative decision carries a witness map
//! that is re-validated independently of the search that produced it.
//!
//! Elements of every structure are dense indices `0..n`. Set-valued
//! constructions (`C(P)`, `I(P)`, `C_L(T)`) work on hosts of at most 64
//! elements, with subsets packed into a `u64`.

pub mod analyze;
pub mod convex;
pub mod dot;
mod error;
pub mod fixpoint;
pub mod lattice;
pub mod order;
pub mod search;
pub mod selection;
pub mod subset;
pub mod suite;
pub mod text;
pub mod zoo;

pub use error::{Error, Result};
pub use order::{CanonicalForm, LexSum, MonotoneMap, Poset};
pub use subset::Subset;

/// Work limits shared by every search and enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of search nodes a single decision may visit.
    pub nodes: u64,
    /// Maximum number of elements of an enumerated derived poset.
    pub sets: usize,
    /// Largest lattice whose congruences are generated.
    pub congruence_elems: usize,
    /// Largest `k` accepted by the Boolean embedding search.
    pub max_boolean_k: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            nodes: 10_000_000,
            sets: 20_000,
            congruence_elems: 10,
            max_boolean_k: 4,
        }
    }
}

impl Budget {
    /// Name of the environment variable that overrides node budgets.
    pub const ENV_VAR: &'static str = "ORDFIX_BUDGET";

    /// Default budget with `nodes` replaced by `ORDFIX_BUDGET` when it is set
    /// to a positive integer.
    pub fn from_env() -> Self {
        let mut budget = Budget::default();
        if let Some(nodes) = std::env::var(Self::ENV_VAR)
            .ok()
            .and_then(|v| v.trim().parse::<u64>().ok())
            .filter(|&v| v > 0)
        {
            budget.nodes = nodes;
        }
        budget
    }

    pub fn with_nodes(mut self, nodes: u64) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn with_sets(mut self, sets: usize) -> Self {
        self.sets = sets;
        self
    }
}
