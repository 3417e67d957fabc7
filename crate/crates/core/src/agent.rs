//! Per-agent protocol state machine.
//!
//! Each round an agent floods the edges it knows to its out-neighbours until
//! nothing new arrives, computes SCCs over what it learned and classifies its
//! own SCC. Representatives (lowest ID in their SCC) of target SCCs then
//! propose to every source representative they know of, source
//! representatives answer at most one target, and targets pick at most one
//! answering source. Every transition is a deterministic function of the
//! state and the inbox, so agents can run in any order or in parallel.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rustc_hash::FxHashSet;

use thiserror::Error;

use crate::graph::{Digraph, Edge, NodeId};
use crate::scc::{component_of, tarjan_scc_of_edges, SccDecomposition, SccKind};
use crate::seed::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    /// Along an existing edge of the digraph.
    ShortRange,
    /// End-to-end, addressed by agent ID.
    LongRange,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    /// Sorted and duplicate-free; shared between the copies sent to each
    /// out-neighbour.
    EdgeBatch(Arc<Vec<Edge>>),
    /// Source representatives known to the sending target representative.
    TargetProposal { source_reps: BTreeSet<NodeId> },
    /// Targets that proposed to the sending source representative.
    SourceProposal { proposer_targets: BTreeSet<NodeId> },
}

impl Payload {
    pub fn channel(&self) -> Channel {
        match self {
            Payload::EdgeBatch(_) => Channel::ShortRange,
            Payload::TargetProposal { .. } | Payload::SourceProposal { .. } => Channel::LongRange,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub from: NodeId,
    pub to: NodeId,
    pub channel: Channel,
    pub payload: Payload,
}

impl Message {
    pub fn new(from: NodeId, to: NodeId, payload: Payload) -> Self {
        Message {
            from,
            to,
            channel: payload.channel(),
            payload,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Propagate,
    TargetPropose,
    SourceSelect,
    TargetSelect,
    /// Idle until the next round.
    Wait,
    Done,
}

/// Outcome of classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transition {
    /// The agent's SCC is isolated: the digraph is strongly connected.
    Exit,
    TargetRepresentative,
    SourceRepresentative,
    Wait,
}

/// What a target representative does when every answering source reaches
/// only that target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AugmentRule {
    /// Connect to all answering sources only when they are exactly the
    /// sources the target proposed to, i.e. the target is the only one.
    #[default]
    Guarded,
    /// Always connect to all answering sources.
    Literal,
}

/// How a representative picks among several qualifying candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TieBreak {
    #[default]
    LowestId,
    /// Pseudo-random but reproducible choice keyed on (seed, agent, round).
    Seeded(u64),
}

impl TieBreak {
    fn pick(&self, candidates: &[NodeId], agent: NodeId, round: usize) -> NodeId {
        match *self {
            TieBreak::LowestId => *candidates.iter().min().expect("candidates non-empty"),
            TieBreak::Seeded(seed) => {
                let h = derive_seed(&[seed, agent.0, round as u64]);
                candidates[(h % candidates.len() as u64) as usize]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AgentError {
    #[error("agent {agent}: protocol violation: {detail}")]
    ProtocolViolation { agent: NodeId, detail: String },
    #[error("agent {agent}: {op} not allowed in phase {phase:?}")]
    WrongPhase {
        agent: NodeId,
        op: &'static str,
        phase: Phase,
    },
    #[error("agent {0}: classification before propagation converged")]
    NotConverged(NodeId),
    #[error("agent {0}: only a target representative may propose")]
    NotTargetRepresentative(NodeId),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PropagateOutput {
    pub outbox: Vec<Message>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SourceOutcome {
    pub outbox: Vec<Message>,
    pub edges_added: BTreeSet<Edge>,
}

#[derive(Debug, Clone)]
pub struct AgentState {
    id: NodeId,
    round: usize,
    in_neighbors: BTreeSet<NodeId>,
    out_neighbors: BTreeSet<NodeId>,
    /// Learned edges in arrival order, with a hash index for membership.
    known_list: Vec<Edge>,
    known_index: FxHashSet<Edge>,
    /// Edges first learned in the latest flooding step, sorted.
    new_edges: Vec<Edge>,
    broadcast_done: bool,
    /// The last flooding step after the initial broadcast brought nothing new.
    quiet: bool,
    local_sccs: Option<SccDecomposition>,
    my_scc_kind: Option<SccKind>,
    is_representative: bool,
    source_reps: BTreeSet<NodeId>,
    proposals_received: BTreeMap<NodeId, BTreeSet<NodeId>>,
    phase: Phase,
}

impl AgentState {
    pub fn new(
        id: NodeId,
        round: usize,
        in_neighbors: BTreeSet<NodeId>,
        out_neighbors: BTreeSet<NodeId>,
    ) -> Self {
        AgentState {
            id,
            round,
            in_neighbors,
            out_neighbors,
            known_list: Vec::new(),
            known_index: FxHashSet::default(),
            new_edges: Vec::new(),
            broadcast_done: false,
            quiet: false,
            local_sccs: None,
            my_scc_kind: None,
            is_representative: false,
            source_reps: BTreeSet::new(),
            proposals_received: BTreeMap::new(),
            phase: Phase::Propagate,
        }
    }

    /// Agent for node `id` with its current neighbourhood in `g`.
    pub fn from_graph(g: &Digraph, id: NodeId, round: usize) -> Self {
        Self::new(
            id,
            round,
            g.in_neighbors(id).collect(),
            g.out_neighbors(id).collect(),
        )
    }

    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn known_edges(&self) -> BTreeSet<Edge> {
        self.known_list.iter().copied().collect()
    }

    pub fn known_edge_count(&self) -> usize {
        self.known_list.len()
    }

    pub fn new_edges(&self) -> &[Edge] {
        &self.new_edges
    }

    /// Full local decomposition; kept only by target representatives.
    pub fn local_sccs(&self) -> Option<&SccDecomposition> {
        self.local_sccs.as_ref()
    }

    pub fn scc_kind(&self) -> Option<SccKind> {
        self.my_scc_kind
    }

    pub fn is_representative(&self) -> bool {
        self.is_representative
    }

    pub fn source_reps(&self) -> &BTreeSet<NodeId> {
        &self.source_reps
    }

    pub fn proposals_received(&self) -> &BTreeMap<NodeId, BTreeSet<NodeId>> {
        &self.proposals_received
    }

    fn expect_phase(&self, want: Phase, op: &'static str) -> Result<(), AgentError> {
        if self.phase == want {
            Ok(())
        } else {
            Err(AgentError::WrongPhase {
                agent: self.id,
                op,
                phase: self.phase,
            })
        }
    }

    fn violation(&self, detail: String) -> AgentError {
        AgentError::ProtocolViolation {
            agent: self.id,
            detail,
        }
    }

    /// One synchronous flooding step. The first call seeds the known set
    /// with the agent's own out-edges and broadcasts them.
    pub fn propagate_step(&mut self, inbox: &[Message]) -> Result<PropagateOutput, AgentError> {
        self.expect_phase(Phase::Propagate, "propagate_step")?;
        let mut fresh = Vec::new();
        for m in inbox {
            let Payload::EdgeBatch(batch) = &m.payload else {
                return Err(self.violation(format!(
                    "unexpected {:?} from {} during propagation",
                    m.payload, m.from
                )));
            };
            if m.to != self.id || m.channel != Channel::ShortRange {
                return Err(self.violation(format!("misrouted edge batch from {}", m.from)));
            }
            if !self.in_neighbors.contains(&m.from) {
                return Err(self.violation(format!(
                    "short-range message from non-in-neighbour {}",
                    m.from
                )));
            }
            fresh.extend(batch.iter().filter(|&&e| self.known_index.insert(e)));
        }

        let initial = !self.broadcast_done;
        if initial {
            for &v in &self.out_neighbors {
                let e = Edge {
                    from: self.id,
                    to: v,
                };
                if self.known_index.insert(e) {
                    fresh.push(e);
                }
            }
            self.broadcast_done = true;
        }

        fresh.sort_unstable();
        self.known_list.extend_from_slice(&fresh);
        let outbox = if fresh.is_empty() {
            Vec::new()
        } else {
            let shared = Arc::new(fresh.clone());
            self.out_neighbors
                .iter()
                .map(|&v| Message::new(self.id, v, Payload::EdgeBatch(Arc::clone(&shared))))
                .collect()
        };
        let converged = !initial && fresh.is_empty();
        self.new_edges = fresh;
        self.quiet = converged;
        Ok(PropagateOutput { outbox, converged })
    }

    pub fn is_converged(&self) -> bool {
        self.quiet
    }

    /// SCCs from local knowledge and self-classification.
    pub fn classify(&mut self) -> Result<Transition, AgentError> {
        self.expect_phase(Phase::Propagate, "classify")?;
        if !self.is_converged() {
            return Err(AgentError::NotConverged(self.id));
        }
        if let Some(e) = self.known_list.iter().find(|e| e.is_self_loop()) {
            return Err(self.violation(format!("learned a self-loop {e}")));
        }
        let own = component_of(self.id, &self.known_list);

        let entering = self
            .known_list
            .iter()
            .any(|e| !own.contains(&e.from) && own.contains(&e.to));
        let leaving = self
            .known_list
            .iter()
            .any(|e| own.contains(&e.from) && !own.contains(&e.to));
        let kind = SccKind::from_degrees(entering, leaving);
        self.is_representative = own.first() == Some(&self.id);
        self.my_scc_kind = Some(kind);
        // Only target representatives need the whole local picture.
        self.local_sccs = (kind == SccKind::Target && self.is_representative)
            .then(|| tarjan_scc_of_edges([self.id], &self.known_list));

        let t = match (kind, self.is_representative) {
            (SccKind::Isolated, _) => Transition::Exit,
            (SccKind::Source, true) => Transition::SourceRepresentative,
            (SccKind::Target, true) => Transition::TargetRepresentative,
            _ => Transition::Wait,
        };
        self.phase = match t {
            Transition::Exit => Phase::Done,
            Transition::SourceRepresentative => Phase::SourceSelect,
            Transition::TargetRepresentative => Phase::TargetPropose,
            Transition::Wait => Phase::Wait,
        };
        Ok(t)
    }

    /// A target representative proposes to the representative of every
    /// source SCC it knows.
    pub fn target_propose(&mut self) -> Result<Vec<Message>, AgentError> {
        if !(self.is_representative && self.my_scc_kind == Some(SccKind::Target)) {
            return Err(AgentError::NotTargetRepresentative(self.id));
        }
        self.expect_phase(Phase::TargetPropose, "target_propose")?;
        let d = self.local_sccs.as_ref().expect("set by classify");
        self.source_reps = d
            .indices_of_kind(SccKind::Source)
            .map(|i| d.representative(i))
            .collect();
        let outbox = self
            .source_reps
            .iter()
            .map(|&s| {
                Message::new(
                    self.id,
                    s,
                    Payload::TargetProposal {
                        source_reps: self.source_reps.clone(),
                    },
                )
            })
            .collect();
        self.phase = Phase::TargetSelect;
        Ok(outbox)
    }

    fn collect_long(
        &self,
        inbox: &[Message],
        extract: impl Fn(&Payload) -> Option<&BTreeSet<NodeId>>,
        what: &str,
    ) -> Result<BTreeMap<NodeId, BTreeSet<NodeId>>, AgentError> {
        let mut got = BTreeMap::new();
        for m in inbox {
            let Some(set) = extract(&m.payload) else {
                return Err(self.violation(format!("expected {what}, got {:?}", m.payload)));
            };
            if m.to != self.id || m.channel != Channel::LongRange {
                return Err(self.violation(format!("misrouted {what} from {}", m.from)));
            }
            got.insert(m.from, set.clone());
        }
        Ok(got)
    }

    /// A source representative prefers a proposing target that is reached
    /// by several sources and answers it with the full list of proposers.
    /// If no such target exists, this is the only source and it connects
    /// every proposing target to itself.
    pub fn source_select(
        &mut self,
        inbox: &[Message],
        tie: TieBreak,
    ) -> Result<SourceOutcome, AgentError> {
        self.expect_phase(Phase::SourceSelect, "source_select")?;
        self.proposals_received = self.collect_long(
            inbox,
            |p| match p {
                Payload::TargetProposal { source_reps } => Some(source_reps),
                _ => None,
            },
            "target proposal",
        )?;
        self.phase = Phase::Wait;

        let mut out = SourceOutcome::default();
        if self.proposals_received.is_empty() {
            return Ok(out);
        }
        let shared: Vec<NodeId> = self
            .proposals_received
            .iter()
            .filter(|(_, reps)| reps.len() > 1)
            .map(|(&t, _)| t)
            .collect();
        let proposers: BTreeSet<NodeId> = self.proposals_received.keys().copied().collect();
        if shared.is_empty() {
            out.edges_added = proposers
                .iter()
                .map(|&t| Edge {
                    from: t,
                    to: self.id,
                })
                .collect();
        } else {
            let t = tie.pick(&shared, self.id, self.round);
            out.outbox.push(Message::new(
                self.id,
                t,
                Payload::SourceProposal {
                    proposer_targets: proposers,
                },
            ));
        }
        Ok(out)
    }

    /// A target representative prefers an answering source that reaches
    /// several targets and connects itself to that one source.
    pub fn target_select(
        &mut self,
        inbox: &[Message],
        rule: AugmentRule,
        tie: TieBreak,
    ) -> Result<BTreeSet<Edge>, AgentError> {
        self.expect_phase(Phase::TargetSelect, "target_select")?;
        self.proposals_received = self.collect_long(
            inbox,
            |p| match p {
                Payload::SourceProposal { proposer_targets } => Some(proposer_targets),
                _ => None,
            },
            "source proposal",
        )?;
        self.phase = Phase::Wait;

        if self.proposals_received.is_empty() {
            return Ok(BTreeSet::new());
        }
        let edge_to = |s: NodeId| Edge {
            from: self.id,
            to: s,
        };
        let spread: Vec<NodeId> = self
            .proposals_received
            .iter()
            .filter(|(_, targets)| targets.len() > 1)
            .map(|(&s, _)| s)
            .collect();
        if !spread.is_empty() {
            let s = tie.pick(&spread, self.id, self.round);
            return Ok(BTreeSet::from([edge_to(s)]));
        }
        let answered: BTreeSet<NodeId> = self.proposals_received.keys().copied().collect();
        let sole_target = answered == self.source_reps;
        if rule == AugmentRule::Literal || sole_target {
            Ok(answered.into_iter().map(edge_to).collect())
        } else {
            Ok(BTreeSet::new())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use crate::scc::tarjan_scc;

    fn ids(v: &[u64]) -> BTreeSet<NodeId> {
        v.iter().map(|&i| NodeId(i)).collect()
    }

    fn edges(v: &[(u64, u64)]) -> BTreeSet<Edge> {
        v.iter().map(|&(a, b)| Edge::new(a, b)).collect()
    }

    /// Runs synchronous flooding over all of `g` and returns the agents.
    fn flood(g: &Digraph, steps: Option<usize>) -> BTreeMap<NodeId, AgentState> {
        let mut agents: BTreeMap<NodeId, AgentState> = g
            .nodes()
            .iter()
            .map(|&n| (n, AgentState::from_graph(g, n, 1)))
            .collect();
        let mut pending: Vec<Message> = Vec::new();
        for a in agents.values_mut() {
            pending.extend(a.propagate_step(&[]).unwrap().outbox);
        }
        let mut done = 0;
        loop {
            if steps == Some(done) {
                break;
            }
            let mut inboxes: BTreeMap<NodeId, Vec<Message>> = BTreeMap::new();
            for m in pending.drain(..) {
                inboxes.entry(m.to).or_default().push(m);
            }
            let mut all = true;
            for (id, a) in agents.iter_mut() {
                let out = a
                    .propagate_step(inboxes.get(id).map_or(&[][..], Vec::as_slice))
                    .unwrap();
                all &= out.converged;
                pending.extend(out.outbox);
            }
            done += 1;
            if steps.is_none() && all {
                break;
            }
        }
        agents
    }

    #[test]
    fn initial_step_broadcasts_own_edges() {
        let g = samples::six_agents();
        let mut a = AgentState::from_graph(&g, NodeId(1), 1);
        let out = a.propagate_step(&[]).unwrap();
        assert!(!out.converged);
        assert_eq!(a.known_edges(), edges(&[(1, 2), (1, 6)]));
        let to: Vec<_> = out.outbox.iter().map(|m| m.to).collect();
        assert_eq!(to, vec![NodeId(2), NodeId(6)]);
        for m in &out.outbox {
            assert_eq!(
                m.payload,
                Payload::EdgeBatch(Arc::new(vec![Edge::new(1, 2), Edge::new(1, 6)]))
            );
            assert_eq!(m.channel, Channel::ShortRange);
        }
    }

    #[test]
    fn source_without_in_neighbours_converges_at_once() {
        let g = samples::six_agents();
        let mut a = AgentState::from_graph(&g, NodeId(1), 1);
        a.propagate_step(&[]).unwrap();
        let out = a.propagate_step(&[]).unwrap();
        assert!(out.converged);
        assert!(out.outbox.is_empty());
        assert_eq!(a.known_edges(), edges(&[(1, 2), (1, 6)]));
    }

    #[test]
    fn path_end_after_two_steps() {
        let g = Digraph::from_pairs(&[(1, 2), (2, 3)]).unwrap();
        let agents = flood(&g, Some(2));
        assert_eq!(agents[&NodeId(3)].known_edges(), edges(&[(1, 2), (2, 3)]));
    }

    #[test]
    fn rejects_message_from_stranger() {
        let g = samples::six_agents();
        let mut a = AgentState::from_graph(&g, NodeId(6), 1);
        a.propagate_step(&[]).unwrap();
        let bogus = Message::new(
            NodeId(2),
            NodeId(6),
            Payload::EdgeBatch(Arc::new(vec![Edge::new(2, 3)])),
        );
        assert!(matches!(
            a.propagate_step(&[bogus]),
            Err(AgentError::ProtocolViolation { .. })
        ));
    }

    #[test]
    fn classify_requires_convergence() {
        let g = samples::six_agents();
        let mut a = AgentState::from_graph(&g, NodeId(6), 1);
        assert_eq!(a.classify(), Err(AgentError::NotConverged(NodeId(6))));
        a.propagate_step(&[]).unwrap();
        assert_eq!(a.classify(), Err(AgentError::NotConverged(NodeId(6))));
    }

    #[test]
    fn classification_on_six_agents() {
        let g = samples::six_agents();
        let mut agents = flood(&g, None);
        let t6 = agents.get_mut(&NodeId(6)).unwrap().classify().unwrap();
        assert_eq!(t6, Transition::TargetRepresentative);
        let a5 = agents.get_mut(&NodeId(5)).unwrap();
        assert_eq!(a5.classify().unwrap(), Transition::Wait);
        assert_eq!(a5.scc_kind(), Some(SccKind::Source));
        assert!(!a5.is_representative());
        assert_eq!(
            agents.get_mut(&NodeId(4)).unwrap().classify().unwrap(),
            Transition::SourceRepresentative
        );
        assert_eq!(
            agents.get_mut(&NodeId(3)).unwrap().classify().unwrap(),
            Transition::Wait
        );
    }

    #[test]
    fn strongly_connected_agents_exit() {
        let g = Digraph::from_pairs(&[(1, 2), (2, 3), (3, 1)]).unwrap();
        for (_, mut a) in flood(&g, None) {
            assert_eq!(a.classify().unwrap(), Transition::Exit);
            assert_eq!(a.phase(), Phase::Done);
            assert_eq!(a.scc_kind(), Some(SccKind::Isolated));
        }
    }

    #[test]
    fn target_proposals_on_six_agents() {
        let g = samples::six_agents();
        let mut agents = flood(&g, None);
        let a6 = agents.get_mut(&NodeId(6)).unwrap();
        a6.classify().unwrap();
        let out = a6.target_propose().unwrap();
        assert_eq!(out.len(), 2);
        for (m, to) in out.iter().zip([1, 4]) {
            assert_eq!(m.to, NodeId(to));
            assert_eq!(m.channel, Channel::LongRange);
            assert_eq!(
                m.payload,
                Payload::TargetProposal {
                    source_reps: ids(&[1, 4])
                }
            );
        }
        let a2 = agents.get_mut(&NodeId(2)).unwrap();
        a2.classify().unwrap();
        let out = a2.target_propose().unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].to, NodeId(1));
        assert_eq!(
            out[0].payload,
            Payload::TargetProposal {
                source_reps: ids(&[1])
            }
        );

        let a5 = agents.get_mut(&NodeId(5)).unwrap();
        a5.classify().unwrap();
        assert_eq!(
            a5.target_propose(),
            Err(AgentError::NotTargetRepresentative(NodeId(5)))
        );
    }

    #[test]
    fn target_without_known_sources_sends_nothing() {
        // Not reachable from a weakly connected input; guarded as a no-op.
        let mut a = AgentState::new(NodeId(2), 1, ids(&[1]), BTreeSet::new());
        a.phase = Phase::TargetPropose;
        a.is_representative = true;
        a.my_scc_kind = Some(SccKind::Target);
        a.local_sccs = Some(tarjan_scc(&Digraph::from_pairs(&[(3, 2), (2, 3)]).unwrap()));
        assert!(a.target_propose().unwrap().is_empty());
    }

    fn proposal(from: u64, to: u64, reps: &[u64]) -> Message {
        Message::new(
            NodeId(from),
            NodeId(to),
            Payload::TargetProposal {
                source_reps: ids(reps),
            },
        )
    }

    fn answer(from: u64, to: u64, targets: &[u64]) -> Message {
        Message::new(
            NodeId(from),
            NodeId(to),
            Payload::SourceProposal {
                proposer_targets: ids(targets),
            },
        )
    }

    fn in_phase(id: u64, phase: Phase) -> AgentState {
        let mut a = AgentState::new(NodeId(id), 1, BTreeSet::new(), BTreeSet::new());
        a.phase = phase;
        a
    }

    #[test]
    fn source_select_prefers_shared_target() {
        let mut a1 = in_phase(1, Phase::SourceSelect);
        let out = a1
            .source_select(
                &[proposal(2, 1, &[1]), proposal(6, 1, &[1, 4])],
                TieBreak::LowestId,
            )
            .unwrap();
        assert!(out.edges_added.is_empty());
        assert_eq!(out.outbox, vec![answer(1, 6, &[2, 6])]);

        let mut a4 = in_phase(4, Phase::SourceSelect);
        let out = a4
            .source_select(&[proposal(6, 4, &[1, 4])], TieBreak::LowestId)
            .unwrap();
        assert_eq!(out.outbox, vec![answer(4, 6, &[6])]);
    }

    #[test]
    fn single_source_connects_all_targets() {
        let mut a = in_phase(3, Phase::SourceSelect);
        let out = a
            .source_select(
                &[proposal(7, 3, &[3]), proposal(9, 3, &[3])],
                TieBreak::LowestId,
            )
            .unwrap();
        assert!(out.outbox.is_empty());
        assert_eq!(out.edges_added, edges(&[(7, 3), (9, 3)]));
    }

    #[test]
    fn source_with_empty_inbox_is_noop() {
        let mut a = in_phase(3, Phase::SourceSelect);
        assert_eq!(
            a.source_select(&[], TieBreak::LowestId).unwrap(),
            SourceOutcome::default()
        );
        assert_eq!(a.phase(), Phase::Wait);
    }

    #[test]
    fn source_select_rejects_wrong_payload() {
        let mut a = in_phase(1, Phase::SourceSelect);
        assert!(matches!(
            a.source_select(&[answer(6, 1, &[2])], TieBreak::LowestId),
            Err(AgentError::ProtocolViolation { .. })
        ));
    }

    #[test]
    fn target_select_prefers_spread_source() {
        let mut a6 = in_phase(6, Phase::TargetSelect);
        a6.source_reps = ids(&[1, 4]);
        let added = a6
            .target_select(
                &[answer(1, 6, &[2, 6]), answer(4, 6, &[6])],
                AugmentRule::Guarded,
                TieBreak::LowestId,
            )
            .unwrap();
        assert_eq!(added, edges(&[(6, 1)]));
    }

    #[test]
    fn target_select_empty_inbox() {
        let mut a = in_phase(6, Phase::TargetSelect);
        assert!(a
            .target_select(&[], AugmentRule::Guarded, TieBreak::LowestId)
            .unwrap()
            .is_empty());
        assert_eq!(a.phase(), Phase::Wait);
    }

    #[test]
    fn sole_target_connects_all_sources() {
        for rule in [AugmentRule::Guarded, AugmentRule::Literal] {
            let mut a = in_phase(9, Phase::TargetSelect);
            a.source_reps = ids(&[1, 3]);
            let added = a
                .target_select(
                    &[answer(1, 9, &[9]), answer(3, 9, &[9])],
                    rule,
                    TieBreak::LowestId,
                )
                .unwrap();
            assert_eq!(added, edges(&[(9, 1), (9, 3)]));
        }
    }

    #[test]
    fn guarded_rule_waits_when_a_source_went_elsewhere() {
        // Source 3 reaches this target but answered another one.
        let mut a = in_phase(12, Phase::TargetSelect);
        a.source_reps = ids(&[3, 5]);
        let inbox = [answer(5, 12, &[12])];
        assert!(a
            .clone()
            .target_select(&inbox, AugmentRule::Guarded, TieBreak::LowestId)
            .unwrap()
            .is_empty());
        assert_eq!(
            a.target_select(&inbox, AugmentRule::Literal, TieBreak::LowestId)
                .unwrap(),
            edges(&[(12, 5)])
        );
    }

    #[test]
    fn seeded_tie_break_picks_a_candidate() {
        let cands = [NodeId(3), NodeId(8), NodeId(11)];
        for seed in 0..20 {
            let p = TieBreak::Seeded(seed).pick(&cands, NodeId(1), 2);
            assert!(cands.contains(&p));
            assert_eq!(p, TieBreak::Seeded(seed).pick(&cands, NodeId(1), 2));
        }
        assert_eq!(TieBreak::LowestId.pick(&cands, NodeId(1), 2), NodeId(3));
    }
}
