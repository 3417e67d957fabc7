//! Directed graph of agents.
//!
//! A [`Digraph`] is a node set plus a set of ordered pairs. Self-loops are
//! rejected at construction and both forward and reverse adjacency are kept,
//! so in- and out-neighbour lookups cost the same.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Unique agent identifier. IDs need not be consecutive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for NodeId {
    fn from(v: u64) -> Self {
        NodeId(v)
    }
}

/// Directed edge `from -> to`. Augmenting edges `(t, s)` go from a target
/// agent to a source agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
}

impl Edge {
    pub fn new(from: impl Into<NodeId>, to: impl Into<NodeId>) -> Self {
        Edge {
            from: from.into(),
            to: to.into(),
        }
    }

    pub fn is_self_loop(&self) -> bool {
        self.from == self.to
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.from, self.to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("graph has no nodes")]
    Empty,
    #[error(
        "graph is not weakly connected: the component containing node {first} \
         and the component containing node {second} are disjoint"
    )]
    NotWeaklyConnected { first: NodeId, second: NodeId },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Digraph {
    nodes: BTreeSet<NodeId>,
    edges: BTreeSet<Edge>,
    out_adj: BTreeMap<NodeId, BTreeSet<NodeId>>,
    in_adj: BTreeMap<NodeId, BTreeSet<NodeId>>,
}

impl Digraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a digraph whose node set is `nodes` plus every edge endpoint.
    pub fn from_parts(
        nodes: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, GraphError> {
        let mut g = Digraph::new();
        for n in nodes {
            g.add_node(n);
        }
        for e in edges {
            if e.is_self_loop() {
                return Err(GraphError::SelfLoop(e.from));
            }
            g.add_node(e.from);
            g.add_node(e.to);
            g.insert_edge_unchecked(e);
        }
        Ok(g)
    }

    /// Convenience constructor from raw `(u, v)` pairs.
    pub fn from_pairs(pairs: &[(u64, u64)]) -> Result<Self, GraphError> {
        Self::from_parts([], pairs.iter().map(|&(u, v)| Edge::new(u, v)))
    }

    pub fn add_node(&mut self, n: NodeId) {
        if self.nodes.insert(n) {
            self.out_adj.insert(n, BTreeSet::new());
            self.in_adj.insert(n, BTreeSet::new());
        }
    }

    fn insert_edge_unchecked(&mut self, e: Edge) -> bool {
        if self.edges.insert(e) {
            self.out_adj.entry(e.from).or_default().insert(e.to);
            self.in_adj.entry(e.to).or_default().insert(e.from);
            true
        } else {
            false
        }
    }

    /// Inserts one edge between existing nodes. Returns `false` when the edge
    /// was already present.
    pub fn insert_edge(&mut self, e: Edge) -> Result<bool, GraphError> {
        self.check_edge(&e)?;
        Ok(self.insert_edge_unchecked(e))
    }

    fn check_edge(&self, e: &Edge) -> Result<(), GraphError> {
        if e.is_self_loop() {
            return Err(GraphError::SelfLoop(e.from));
        }
        for n in [e.from, e.to] {
            if !self.nodes.contains(&n) {
                return Err(GraphError::UnknownNode(n));
            }
        }
        Ok(())
    }

    /// Returns a copy of `self` with `es` unioned into the edge set.
    pub fn add_edges<'a>(
        &self,
        es: impl IntoIterator<Item = &'a Edge>,
    ) -> Result<Digraph, GraphError> {
        let mut g = self.clone();
        for e in es {
            g.insert_edge(*e)?;
        }
        Ok(g)
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_node(&self, n: NodeId) -> bool {
        self.nodes.contains(&n)
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    pub fn out_neighbors(&self, n: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.out_adj.get(&n).into_iter().flatten().copied()
    }

    pub fn in_neighbors(&self, n: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.in_adj.get(&n).into_iter().flatten().copied()
    }

    pub fn out_degree(&self, n: NodeId) -> usize {
        self.out_adj.get(&n).map_or(0, BTreeSet::len)
    }

    pub fn in_degree(&self, n: NodeId) -> usize {
        self.in_adj.get(&n).map_or(0, BTreeSet::len)
    }

    fn require(&self, n: NodeId) -> Result<(), GraphError> {
        if self.nodes.contains(&n) {
            Ok(())
        } else {
            Err(GraphError::UnknownNode(n))
        }
    }

    /// Nodes reachable from `start` along directed edges, `start` included.
    pub fn descendants(&self, start: NodeId) -> Result<BTreeSet<NodeId>, GraphError> {
        self.require(start)?;
        Ok(self.bfs(start, |g, n| g.out_neighbors(n).collect()))
    }

    /// Nodes that reach `start`, `start` included.
    pub fn ancestors(&self, start: NodeId) -> Result<BTreeSet<NodeId>, GraphError> {
        self.require(start)?;
        Ok(self.bfs(start, |g, n| g.in_neighbors(n).collect()))
    }

    fn bfs<F>(&self, start: NodeId, next: F) -> BTreeSet<NodeId>
    where
        F: Fn(&Self, NodeId) -> Vec<NodeId>,
    {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(n) = queue.pop_front() {
            for m in next(self, n) {
                if seen.insert(m) {
                    queue.push_back(m);
                }
            }
        }
        seen
    }

    /// True iff there is a directed path `u ~> v`. `u ~> u` always holds.
    pub fn reaches(&self, u: NodeId, v: NodeId) -> Result<bool, GraphError> {
        self.require(v)?;
        Ok(self.descendants(u)?.contains(&v))
    }

    /// Connected components of the undirected shadow, each sorted, ordered by
    /// smallest member.
    pub fn weak_components(&self) -> Vec<BTreeSet<NodeId>> {
        let mut seen = BTreeSet::new();
        let mut comps = Vec::new();
        for &start in &self.nodes {
            if seen.contains(&start) {
                continue;
            }
            let comp = self.bfs(start, |g, n| {
                g.out_neighbors(n).chain(g.in_neighbors(n)).collect()
            });
            seen.extend(comp.iter().copied());
            comps.push(comp);
        }
        comps
    }

    pub fn is_weakly_connected(&self) -> Result<bool, GraphError> {
        if self.nodes.is_empty() {
            return Err(GraphError::Empty);
        }
        Ok(self.weak_components().len() == 1)
    }

    /// Like [`Digraph::is_weakly_connected`] but reports two disjoint
    /// components by their smallest members.
    pub fn require_weakly_connected(&self) -> Result<(), GraphError> {
        if self.nodes.is_empty() {
            return Err(GraphError::Empty);
        }
        let comps = self.weak_components();
        if comps.len() > 1 {
            let first = *comps[0].first().expect("components are non-empty");
            let second = *comps[1].first().expect("components are non-empty");
            return Err(GraphError::NotWeaklyConnected { first, second });
        }
        Ok(())
    }
}
