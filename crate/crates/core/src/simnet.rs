//! Bulk-synchronous round engine.
//!
//! A round rebuilds every agent from the current digraph, floods edges to a
//! global fixpoint, classifies, then runs the three proposal exchanges with a
//! barrier after each. Augmenting edges are installed at the end-of-round
//! barrier. Messages are delivered sorted by `(from, to)`, and agent
//! transitions only see whole inboxes, so sequential and parallel schedules
//! produce identical results.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::agent::{
    AgentError, AgentState, AugmentRule, Channel, Message, PropagateOutput, SourceOutcome,
    TieBreak, Transition,
};
use crate::graph::{Digraph, Edge, GraphError, NodeId};
use crate::oracle::{AddedEdge, AugmentationResult};
use crate::scc::{profile_of, ConnectivityProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SimConfig {
    /// Safety net on the number of rounds; `None` means `|V| + 1`.
    pub max_rounds: Option<usize>,
    pub rule: AugmentRule,
    pub tie_break: TieBreak,
    /// Run agent transitions on the rayon pool.
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error("message from {from} addressed to unknown agent {to}")]
    UnknownRecipient { from: NodeId, to: NodeId },
    #[error("short-range message {from} -> {to} does not follow an edge")]
    NotAnEdge { from: NodeId, to: NodeId },
    #[error("edge propagation did not converge within {limit} steps")]
    PropagationDiverged { limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub round: usize,
    pub short_msgs: usize,
    pub long_msgs: usize,
    pub propagation_steps: usize,
    pub edges_added: Vec<Edge>,
    pub profile_before: ConnectivityProfile,
    pub profile_after: ConnectivityProfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InputSummary {
    pub nodes: usize,
    pub edges: usize,
    pub profile: ConnectivityProfile,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTrace {
    pub input_summary: InputSummary,
    pub rounds: Vec<RoundRecord>,
    pub result: AugmentationResult,
    pub terminated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundOutcome {
    pub record: RoundRecord,
    /// Every agent classified its SCC as isolated and exited.
    pub all_exited: bool,
}

/// Per-run state: the evolving digraph and the agents of the current round.
#[derive(Debug, Clone)]
pub struct World {
    graph: Digraph,
    agents: Vec<AgentState>,
    slot: BTreeMap<NodeId, usize>,
    round: usize,
    config: SimConfig,
}

impl World {
    pub fn new(g: Digraph, config: SimConfig) -> Result<Self, SimError> {
        g.require_weakly_connected()?;
        let slot = g.nodes().iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let mut w = World {
            graph: g,
            agents: Vec::new(),
            slot,
            round: 0,
            config,
        };
        w.reset_agents();
        Ok(w)
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn agents(&self) -> &[AgentState] {
        &self.agents
    }

    pub fn agent(&self, id: NodeId) -> Option<&AgentState> {
        self.slot.get(&id).map(|&i| &self.agents[i])
    }

    pub fn round(&self) -> usize {
        self.round
    }

    fn reset_agents(&mut self) {
        let g = &self.graph;
        let round = self.round + 1;
        self.agents = g
            .nodes()
            .iter()
            .map(|&n| AgentState::from_graph(g, n, round))
            .collect();
    }

    fn route(&self, mut msgs: Vec<Message>) -> Result<Vec<Vec<Message>>, SimError> {
        msgs.sort_by_key(|m| (m.from, m.to));
        let mut inboxes = vec![Vec::new(); self.agents.len()];
        for m in msgs {
            let &i = self.slot.get(&m.to).ok_or(SimError::UnknownRecipient {
                from: m.from,
                to: m.to,
            })?;
            if m.channel == Channel::ShortRange
                && !self.graph.contains_edge(&Edge {
                    from: m.from,
                    to: m.to,
                })
            {
                return Err(SimError::NotAnEdge {
                    from: m.from,
                    to: m.to,
                });
            }
            inboxes[i].push(m);
        }
        Ok(inboxes)
    }

    /// Applies `f` to every agent with its inbox, in slot order.
    fn each_agent<T, F>(&mut self, inboxes: Vec<Vec<Message>>, f: F) -> Result<Vec<T>, SimError>
    where
        T: Send,
        F: Fn(&mut AgentState, &[Message]) -> Result<T, AgentError> + Sync + Send,
    {
        let out: Result<Vec<T>, AgentError> = if self.config.parallel {
            self.agents
                .par_iter_mut()
                .zip(inboxes.par_iter())
                .map(|(a, inbox)| f(a, inbox))
                .collect()
        } else {
            self.agents
                .iter_mut()
                .zip(inboxes.iter())
                .map(|(a, inbox)| f(a, inbox))
                .collect()
        };
        Ok(out?)
    }

    /// Floods edges until every agent reports no new information in the
    /// same step. Returns `(steps, short-range messages)`.
    pub fn propagate(&mut self) -> Result<(usize, usize), SimError> {
        let limit = self.graph.node_count();
        let empty = vec![Vec::new(); self.agents.len()];
        let first: Vec<PropagateOutput> =
            self.each_agent(empty, |a, inbox| a.propagate_step(inbox))?;
        let mut pending: Vec<Message> = first.into_iter().flat_map(|o| o.outbox).collect();
        let mut short = 0;
        let mut steps = 0;
        loop {
            steps += 1;
            if steps > limit {
                return Err(SimError::PropagationDiverged { limit });
            }
            short += pending.len();
            let inboxes = self.route(std::mem::take(&mut pending))?;
            let outs = self.each_agent(inboxes, |a, inbox| a.propagate_step(inbox))?;
            let converged = outs.iter().all(|o| o.converged);
            pending = outs.into_iter().flat_map(|o| o.outbox).collect();
            if converged {
                debug_assert!(pending.is_empty());
                return Ok((steps, short));
            }
        }
    }

    /// Runs one full round and installs the edges it creates.
    pub fn step_round(&mut self) -> Result<RoundOutcome, SimError> {
        self.reset_agents();
        self.round += 1;
        let profile_before = profile_of(&self.graph);
        let (propagation_steps, short_msgs) = self.propagate()?;

        let n = self.agents.len();
        let transitions = self.each_agent(vec![Vec::new(); n], |a, _| a.classify())?;
        let mut record = RoundRecord {
            round: self.round,
            short_msgs,
            long_msgs: 0,
            propagation_steps,
            edges_added: Vec::new(),
            profile_before,
            profile_after: profile_before,
        };
        if transitions.iter().all(|t| *t == Transition::Exit) {
            return Ok(RoundOutcome {
                record,
                all_exited: true,
            });
        }

        let proposals = self.each_agent(vec![Vec::new(); n], |a, _| {
            if transitions_of(a) == Some(Transition::TargetRepresentative) {
                a.target_propose()
            } else {
                Ok(Vec::new())
            }
        })?;
        let proposals: Vec<Message> = proposals.into_iter().flatten().collect();
        record.long_msgs += proposals.len();

        let tie = self.config.tie_break;
        let inboxes = self.route(proposals)?;
        let source_out: Vec<SourceOutcome> = self.each_agent(inboxes, |a, inbox| {
            if transitions_of(a) == Some(Transition::SourceRepresentative) {
                a.source_select(inbox, tie)
            } else {
                Ok(SourceOutcome::default())
            }
        })?;
        let mut added: BTreeSet<Edge> = BTreeSet::new();
        let mut answers = Vec::new();
        for o in source_out {
            added.extend(o.edges_added);
            answers.extend(o.outbox);
        }
        record.long_msgs += answers.len();

        let rule = self.config.rule;
        let inboxes = self.route(answers)?;
        let target_out = self.each_agent(inboxes, |a, inbox| {
            if a.phase() == crate::agent::Phase::TargetSelect {
                a.target_select(inbox, rule, tie)
            } else {
                Ok(BTreeSet::new())
            }
        })?;
        for es in target_out {
            added.extend(es);
        }

        for &e in &added {
            self.graph.insert_edge(e)?;
        }
        record.edges_added = added.into_iter().collect();
        record.profile_after = profile_of(&self.graph);
        Ok(RoundOutcome {
            record,
            all_exited: false,
        })
    }
}

/// Recovers the classification outcome from an agent's post-classify phase.
fn transitions_of(a: &AgentState) -> Option<Transition> {
    use crate::agent::Phase;
    match a.phase() {
        Phase::Done => Some(Transition::Exit),
        Phase::TargetPropose => Some(Transition::TargetRepresentative),
        Phase::SourceSelect => Some(Transition::SourceRepresentative),
        Phase::Wait => Some(Transition::Wait),
        _ => None,
    }
}

/// Runs the protocol on `g` until all agents exit or the round cap is hit.
pub fn run(g: &Digraph, config: &SimConfig) -> Result<RunTrace, SimError> {
    let input_summary = InputSummary {
        nodes: g.node_count(),
        edges: g.edge_count(),
        profile: profile_of(g),
    };
    let max_rounds = config.max_rounds.unwrap_or(g.node_count() + 1);
    let mut world = World::new(g.clone(), *config)?;
    let mut rounds = Vec::new();
    let mut added = Vec::new();
    let mut terminated = false;

    for _ in 0..max_rounds {
        let outcome = world.step_round()?;
        if outcome.all_exited {
            // The detection round is only reported when nothing was needed.
            if rounds.is_empty() {
                rounds.push(outcome.record);
            }
            terminated = true;
            break;
        }
        let r = outcome.record.round;
        added.extend(
            outcome
                .record
                .edges_added
                .iter()
                .map(|&edge| AddedEdge { edge, round: r }),
        );
        rounds.push(outcome.record);
    }

    Ok(RunTrace {
        input_summary,
        result: AugmentationResult {
            added,
            rounds: rounds.len(),
        },
        rounds,
        terminated,
    })
}
