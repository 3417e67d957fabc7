//! Centralized ground truth for augmentations.
//!
//! Nothing here is used by the agents. The distributed protocol is checked
//! against these functions: tight-edge and tight-set predicates, a verdict on
//! a proposed augmentation, and an exhaustive minimum search for tiny graphs.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::graph::{Digraph, Edge, GraphError, NodeId};
use crate::scc::{profile_of, tarjan_scc, SccKind};

/// Default node cap for [`brute_force_min_augment`].
pub const DEFAULT_MAX_NODES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("digraph is already strongly connected")]
    StronglyConnected,
    #[error("edge {0} is already in the digraph")]
    ExistingEdge(Edge),
    #[error("brute force refused: {nodes} nodes exceeds the limit of {max}")]
    TooLarge { nodes: usize, max: usize },
}

/// An augmenting edge and the round that created it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AddedEdge {
    pub edge: Edge,
    pub round: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AugmentationResult {
    pub added: Vec<AddedEdge>,
    pub rounds: usize,
}

impl AugmentationResult {
    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.added.iter().map(|a| a.edge).collect()
    }

    pub fn len(&self) -> usize {
        self.added.len()
    }

    pub fn is_empty(&self) -> bool {
        self.added.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Optimal,
    FeasibleSuboptimal,
    Infeasible,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Optimal => "optimal",
            Verdict::FeasibleSuboptimal => "feasible-suboptimal",
            Verdict::Infeasible => "infeasible",
        })
    }
}

/// Checks conditions (i)-(iv) for the augmenting edge `(t, s)`:
/// `s` in a source SCC, `t` in a target SCC, some other source reaches `t`
/// unless there is one source, and `s` reaches some other target unless
/// there is one target.
pub fn is_tight_edge(g: &Digraph, e: Edge) -> Result<bool, OracleError> {
    for n in [e.from, e.to] {
        if !g.contains_node(n) {
            return Err(GraphError::UnknownNode(n).into());
        }
    }
    if g.contains_edge(&e) {
        return Err(OracleError::ExistingEdge(e));
    }
    let d = tarjan_scc(g);
    if d.len() <= 1 {
        return Err(OracleError::StronglyConnected);
    }
    let (t, s) = (e.from, e.to);
    let s_scc = d.scc_of(s).expect("node in decomposition");
    let t_scc = d.scc_of(t).expect("node in decomposition");
    if d.kind(s_scc) != SccKind::Source || d.kind(t_scc) != SccKind::Target {
        return Ok(false);
    }
    let p = d.profile();

    let other_source_reaches_t = p.alpha == 1 || {
        let anc = g.ancestors(t)?;
        anc.iter().any(|&v| {
            let i = d.scc_of(v).expect("node in decomposition");
            i != s_scc && d.kind(i) == SccKind::Source
        })
    };
    if !other_source_reaches_t {
        return Ok(false);
    }
    let s_reaches_other_target = p.beta == 1 || {
        let desc = g.descendants(s)?;
        desc.iter().any(|&v| {
            let i = d.scc_of(v).expect("node in decomposition");
            i != t_scc && d.kind(i) == SccKind::Target
        })
    };
    Ok(s_reaches_other_target)
}

/// Breakdown behind [`gamma_drop_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightSetReport {
    pub non_tight: Vec<Edge>,
    pub endpoints_distinct: bool,
    pub gamma_before: usize,
    pub gamma_after: usize,
}

impl TightSetReport {
    pub fn is_tight_set(&self) -> bool {
        self.non_tight.is_empty() && self.endpoints_distinct
    }

    pub fn gamma_drop(&self) -> isize {
        self.gamma_before as isize - self.gamma_after as isize
    }
}

pub fn tight_set_report(g: &Digraph, set: &BTreeSet<Edge>) -> Result<TightSetReport, OracleError> {
    let gamma_before = profile_of(g).gamma;
    if set.is_empty() {
        return Ok(TightSetReport {
            non_tight: Vec::new(),
            endpoints_distinct: true,
            gamma_before,
            gamma_after: gamma_before,
        });
    }
    let mut non_tight = Vec::new();
    for &e in set {
        if !is_tight_edge(g, e)? {
            non_tight.push(e);
        }
    }
    let d = tarjan_scc(g);
    let endpoint_sccs: BTreeSet<usize> = set
        .iter()
        .flat_map(|e| [e.from, e.to])
        .map(|n| d.scc_of(n).expect("checked by is_tight_edge"))
        .collect();
    let gamma_after = profile_of(&g.add_edges(set)?).gamma;
    Ok(TightSetReport {
        non_tight,
        endpoints_distinct: endpoint_sccs.len() == 2 * set.len(),
        gamma_before,
        gamma_after,
    })
}

/// True iff `set` is a tight set and adding it lowers γ by exactly `|set|`.
pub fn gamma_drop_check(g: &Digraph, set: &BTreeSet<Edge>) -> Result<bool, OracleError> {
    let r = tight_set_report(g, set)?;
    Ok(r.is_tight_set() && r.gamma_drop() == set.len() as isize)
}

pub fn verify_solution(g: &Digraph, added: &BTreeSet<Edge>) -> Result<Verdict, OracleError> {
    g.require_weakly_connected()?;
    if let Some(e) = added.iter().find(|e| g.contains_edge(e)) {
        return Err(OracleError::ExistingEdge(*e));
    }
    let augmented = g.add_edges(added)?;
    if tarjan_scc(&augmented).len() != 1 {
        return Ok(Verdict::Infeasible);
    }
    if added.len() > profile_of(g).gamma {
        Ok(Verdict::FeasibleSuboptimal)
    } else {
        Ok(Verdict::Optimal)
    }
}

/// Reachability closure check on a bitmask adjacency (n <= 64).
fn strongly_connected_mask(adj: &[u64], radj: &[u64]) -> bool {
    let n = adj.len();
    if n <= 1 {
        return true;
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let closure = |a: &[u64]| {
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let i = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= a[i];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen
    };
    closure(adj) == full && closure(radj) == full
}

/// Smallest augmentation found by trying every candidate set of size
/// 0, 1, 2, ... in lexicographic `(t, s)` order.
pub fn brute_force_min_augment(
    g: &Digraph,
    max_nodes: usize,
) -> Result<AugmentationResult, OracleError> {
    let n = g.node_count();
    if n > max_nodes || n > 64 {
        return Err(OracleError::TooLarge {
            nodes: n,
            max: max_nodes.min(64),
        });
    }
    g.require_weakly_connected()?;

    let ids: Vec<NodeId> = g.nodes().iter().copied().collect();
    let pos = |v: NodeId| ids.binary_search(&v).expect("node id");
    let mut adj = vec![0u64; n];
    let mut radj = vec![0u64; n];
    for e in g.edges() {
        adj[pos(e.from)] |= 1 << pos(e.to);
        radj[pos(e.to)] |= 1 << pos(e.from);
    }
    let candidates: Vec<(usize, usize)> = (0..n)
        .cartesian_product(0..n)
        .filter(|&(t, s)| t != s && adj[t] & (1 << s) == 0)
        .collect();

    for k in 0..=candidates.len() {
        for combo in candidates.iter().combinations(k) {
            let (mut a, mut r) = (adj.clone(), radj.clone());
            for &&(t, s) in &combo {
                a[t] |= 1 << s;
                r[s] |= 1 << t;
            }
            if strongly_connected_mask(&a, &r) {
                let added = combo
                    .into_iter()
                    .map(|&(t, s)| AddedEdge {
                        edge: Edge {
                            from: ids[t],
                            to: ids[s],
                        },
                        round: 0,
                    })
                    .collect();
                return Ok(AugmentationResult { added, rounds: 0 });
            }
        }
    }
    unreachable!("the complete digraph is strongly connected")
}
