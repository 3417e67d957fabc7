//! Line-delimited JSON run traces.
//!
//! The first line summarises the run, every following line describes one
//! round. Field order is fixed by the struct layout, so output is
//! byte-deterministic.

use std::fmt;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Edge;
use crate::simnet::RunTrace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEdge {
    pub t: u64,
    pub s: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceAdded {
    pub t: u64,
    pub s: u64,
    pub round: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub nodes: usize,
    pub edges: usize,
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    pub rounds: usize,
    pub added: Vec<TraceAdded>,
    pub terminated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRound {
    pub round: usize,
    pub short_msgs: usize,
    pub long_msgs: usize,
    pub propagation_steps: usize,
    pub edges_added: Vec<TraceEdge>,
    pub alpha_after: usize,
    pub beta_after: usize,
}

/// The serialized view of a [`RunTrace`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceDoc {
    pub summary: TraceSummary,
    pub rounds: Vec<TraceRound>,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        source: serde_json::Error,
    },
    #[error("trace is empty")]
    Empty,
}

fn te(e: &Edge) -> TraceEdge {
    TraceEdge {
        t: e.from.0,
        s: e.to.0,
    }
}

impl From<&RunTrace> for TraceDoc {
    fn from(t: &RunTrace) -> Self {
        let p = t.input_summary.profile;
        TraceDoc {
            summary: TraceSummary {
                nodes: t.input_summary.nodes,
                edges: t.input_summary.edges,
                alpha: p.alpha,
                beta: p.beta,
                gamma: p.gamma,
                rounds: t.result.rounds,
                added: t
                    .result
                    .added
                    .iter()
                    .map(|a| TraceAdded {
                        t: a.edge.from.0,
                        s: a.edge.to.0,
                        round: a.round,
                    })
                    .collect(),
                terminated: t.terminated,
            },
            rounds: t
                .rounds
                .iter()
                .map(|r| TraceRound {
                    round: r.round,
                    short_msgs: r.short_msgs,
                    long_msgs: r.long_msgs,
                    propagation_steps: r.propagation_steps,
                    edges_added: r.edges_added.iter().map(te).collect(),
                    alpha_after: r.profile_after.alpha,
                    beta_after: r.profile_after.beta,
                })
                .collect(),
        }
    }
}

impl TraceDoc {
    pub fn write<W: Write>(&self, mut sink: W) -> io::Result<()> {
        serde_json::to_writer(&mut sink, &self.summary)?;
        sink.write_all(b"\n")?;
        for r in &self.rounds {
            serde_json::to_writer(&mut sink, r)?;
            sink.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(src: R) -> Result<Self, TraceError> {
        let mut summary = None;
        let mut rounds = Vec::new();
        for (i, line) in src.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let json = |source| TraceError::Json {
                line: i + 1,
                source,
            };
            if summary.is_none() {
                summary = Some(serde_json::from_str(&line).map_err(json)?);
            } else {
                rounds.push(serde_json::from_str(&line).map_err(json)?);
            }
        }
        Ok(TraceDoc {
            summary: summary.ok_or(TraceError::Empty)?,
            rounds,
        })
    }

    pub fn parse(text: &str) -> Result<Self, TraceError> {
        Self::read(text.as_bytes())
    }
}

impl fmt::Display for TraceDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut buf = Vec::new();
        self.write(&mut buf).map_err(|_| fmt::Error)?;
        f.write_str(std::str::from_utf8(&buf).map_err(|_| fmt::Error)?)
    }
}

pub fn write_trace<W: Write>(t: &RunTrace, sink: W) -> io::Result<()> {
    TraceDoc::from(t).write(sink)
}

pub fn trace_to_string(t: &RunTrace) -> String {
    TraceDoc::from(t).to_string()
}
