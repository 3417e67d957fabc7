//! Strongly connected components, condensation and the s/t/m/i classification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::graph::{Digraph, Edge, NodeId};

/// Classification of an SCC by its condensation in- and out-edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SccKind {
    /// Out-edges only.
    Source,
    /// In-edges only.
    Target,
    /// Both.
    Mixed,
    /// Neither; the whole (weakly connected) graph is strongly connected.
    Isolated,
}

impl SccKind {
    pub fn from_degrees(has_in: bool, has_out: bool) -> Self {
        match (has_in, has_out) {
            (false, true) => SccKind::Source,
            (true, false) => SccKind::Target,
            (true, true) => SccKind::Mixed,
            (false, false) => SccKind::Isolated,
        }
    }
}

impl fmt::Display for SccKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SccKind::Source => "s-SCC",
            SccKind::Target => "t-SCC",
            SccKind::Mixed => "m-SCC",
            SccKind::Isolated => "i-SCC",
        };
        f.write_str(s)
    }
}

/// SCC partition of a digraph. SCC indices are ordered by minimum member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    scc_of: BTreeMap<NodeId, usize>,
    members: Vec<BTreeSet<NodeId>>,
    kinds: Vec<SccKind>,
    condensation: Vec<BTreeSet<usize>>,
}

impl SccDecomposition {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn scc_of(&self, n: NodeId) -> Option<usize> {
        self.scc_of.get(&n).copied()
    }

    pub fn members(&self, idx: usize) -> &BTreeSet<NodeId> {
        &self.members[idx]
    }

    pub fn all_members(&self) -> &[BTreeSet<NodeId>] {
        &self.members
    }

    pub fn kind(&self, idx: usize) -> SccKind {
        self.kinds[idx]
    }

    pub fn kind_of(&self, n: NodeId) -> Option<SccKind> {
        self.scc_of(n).map(|i| self.kinds[i])
    }

    /// Lowest-ID member, the SCC's representative.
    pub fn representative(&self, idx: usize) -> NodeId {
        *self.members[idx].first().expect("SCCs are never empty")
    }

    /// Condensation successors of SCC `idx`.
    pub fn successors(&self, idx: usize) -> &BTreeSet<usize> {
        &self.condensation[idx]
    }

    pub fn indices_of_kind(&self, kind: SccKind) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.kinds[i] == kind)
    }

    /// Kahn's algorithm over the condensation; `None` if it has a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let k = self.len();
        let mut indeg = vec![0usize; k];
        for succ in &self.condensation {
            for &j in succ {
                indeg[j] += 1;
            }
        }
        let mut ready: Vec<usize> = (0..k).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(k);
        while let Some(i) = ready.pop() {
            order.push(i);
            for &j in &self.condensation[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.push(j);
                }
            }
        }
        (order.len() == k).then_some(order)
    }

    pub fn profile(&self) -> ConnectivityProfile {
        profile(self)
    }
}

/// Counts of source and target SCCs together with the augmentation number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConnectivityProfile {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
}

impl fmt::Display for ConnectivityProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={} beta={} gamma={}",
            self.alpha, self.beta, self.gamma
        )
    }
}

/// Tarjan's algorithm, iterative so deep paths do not overflow the stack.
pub fn tarjan_scc(g: &Digraph) -> SccDecomposition {
    let edges: Vec<Edge> = g.edges().iter().copied().collect();
    tarjan_scc_of_edges(g.nodes().iter().copied(), &edges)
}

/// Same as [`tarjan_scc`] over `nodes` plus every edge endpoint, without
/// building a [`Digraph`] first. Edge order does not affect the result.
pub fn tarjan_scc_of_edges(
    nodes: impl IntoIterator<Item = NodeId>,
    edges: &[Edge],
) -> SccDecomposition {
    let mut ids: Vec<NodeId> = Vec::new();
    let mut index: FxHashMap<NodeId, usize> = FxHashMap::default();
    let mut index_of = |n: NodeId| {
        *index.entry(n).or_insert_with(|| {
            ids.push(n);
            ids.len() - 1
        })
    };
    for n in nodes {
        index_of(n);
    }
    let endpoints: Vec<(usize, usize)> = edges
        .iter()
        .map(|e| (index_of(e.from), index_of(e.to)))
        .collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); ids.len()];
    for &(a, b) in &endpoints {
        adj[a].push(b);
    }

    const UNVISITED: usize = usize::MAX;
    let n = ids.len();
    let mut num = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut raw_sccs: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0usize;
    // (node, next child position)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if num[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        num[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(frame) = call.last_mut() {
            let v = frame.0;
            if frame.1 < adj[v].len() {
                let w = adj[v][frame.1];
                frame.1 += 1;
                if num[w] == UNVISITED {
                    num[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(num[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == num[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                raw_sccs.push(comp);
            }
        }
    }

    let mut members: Vec<BTreeSet<NodeId>> = raw_sccs
        .into_iter()
        .map(|c| c.into_iter().map(|i| ids[i]).collect())
        .collect();
    members.sort_by_key(|m: &BTreeSet<NodeId>| *m.first().expect("non-empty"));

    let mut scc_of = BTreeMap::new();
    let mut comp = vec![0usize; ids.len()];
    for (i, m) in members.iter().enumerate() {
        for &v in m {
            scc_of.insert(v, i);
            comp[index[&v]] = i;
        }
    }

    let k = members.len();
    let mut condensation = vec![BTreeSet::new(); k];
    let mut has_in = vec![false; k];
    for &(a, b) in &endpoints {
        let (a, b) = (comp[a], comp[b]);
        if a != b {
            condensation[a].insert(b);
            has_in[b] = true;
        }
    }
    let kinds = (0..k)
        .map(|i| SccKind::from_degrees(has_in[i], !condensation[i].is_empty()))
        .collect();

    SccDecomposition {
        scc_of,
        members,
        kinds,
        condensation,
    }
}

/// Members of the SCC containing `u` in the graph formed by `edges`: the
/// nodes both reachable from `u` and reaching it. Much cheaper than a full
/// decomposition when only one component matters.
pub fn component_of(u: NodeId, edges: &[Edge]) -> BTreeSet<NodeId> {
    let mut ids: Vec<NodeId> = vec![u];
    let mut index: FxHashMap<NodeId, usize> = FxHashMap::default();
    index.insert(u, 0);
    let mut index_of = |n: NodeId| {
        *index.entry(n).or_insert_with(|| {
            ids.push(n);
            ids.len() - 1
        })
    };
    let endpoints: Vec<(usize, usize)> = edges
        .iter()
        .map(|e| (index_of(e.from), index_of(e.to)))
        .collect();
    let n = ids.len();
    let reach = |forward: bool| -> Vec<bool> {
        // CSR adjacency in the requested direction.
        let mut start = vec![0usize; n + 1];
        for &(a, b) in &endpoints {
            start[if forward { a } else { b } + 1] += 1;
        }
        for i in 0..n {
            start[i + 1] += start[i];
        }
        let mut fill = start.clone();
        let mut adj = vec![0usize; endpoints.len()];
        for &(a, b) in &endpoints {
            let (x, y) = if forward { (a, b) } else { (b, a) };
            adj[fill[x]] = y;
            fill[x] += 1;
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut todo = vec![0usize];
        while let Some(v) = todo.pop() {
            for &w in &adj[start[v]..start[v + 1]] {
                if !seen[w] {
                    seen[w] = true;
                    todo.push(w);
                }
            }
        }
        seen
    };
    let (fwd, bwd) = (reach(true), reach(false));
    (0..n)
        .filter(|&i| fwd[i] && bwd[i])
        .map(|i| ids[i])
        .collect()
}

pub fn profile(d: &SccDecomposition) -> ConnectivityProfile {
    let alpha = d.indices_of_kind(SccKind::Source).count();
    let beta = d.indices_of_kind(SccKind::Target).count();
    let gamma = if d.len() > 1 { alpha.max(beta) } else { 0 };
    ConnectivityProfile { alpha, beta, gamma }
}

/// Shorthand for `profile(&tarjan_scc(g))`.
pub fn profile_of(g: &Digraph) -> ConnectivityProfile {
    profile(&tarjan_scc(g))
}

pub fn is_strongly_connected(g: &Digraph) -> bool {
    tarjan_scc(g).len() == 1
}
