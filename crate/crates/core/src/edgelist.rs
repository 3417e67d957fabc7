//! Plain-text edge lists.
//!
//! One edge `u v` per line (decimal IDs, edge `u -> v`), `#` starts a comment
//! line, blank lines are ignored and `node u` declares a node that may have
//! no incident edges.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Digraph, Edge, GraphError, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

fn parse_id(tok: &str, line: usize) -> Result<NodeId, ParseError> {
    tok.parse::<u64>()
        .map(NodeId)
        .map_err(|_| ParseError::Syntax {
            line,
            msg: format!("expected a non-negative integer node id, found {tok:?}"),
        })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_edge_list(text: &str) -> Result<Digraph, ParseError> {
    let mut g = Digraph::new();
    for (line, l) in content_lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            ["node", id] => g.add_node(parse_id(id, line)?),
            [u, v] => {
                let e = Edge::new(parse_id(u, line)?, parse_id(v, line)?);
                if e.is_self_loop() {
                    return Err(ParseError::Graph {
                        line,
                        source: GraphError::SelfLoop(e.from),
                    });
                }
                g.add_node(e.from);
                g.add_node(e.to);
                g.insert_edge(e).expect("endpoints were just added");
            }
            _ => {
                return Err(ParseError::Syntax {
                    line,
                    msg: format!("expected \"u v\" or \"node u\", found {l:?}"),
                })
            }
        }
    }
    Ok(g)
}

/// Canonical form: `node` lines for nodes without incident edges, then every
/// edge in sorted order.
pub fn format_edge_list(g: &Digraph) -> String {
    let mut out = String::new();
    for &n in g.nodes() {
        if g.in_degree(n) == 0 && g.out_degree(n) == 0 {
            let _ = writeln!(out, "node {n}");
        }
    }
    for e in g.edges() {
        let _ = writeln!(out, "{} {}", e.from, e.to);
    }
    out
}

/// Reads a list of augmenting edges. Accepts `t s` or `t s round` lines, so
/// the output of `solve` can be fed back as-is; the trailing
/// `added=... gamma=...` summary line is skipped.
pub fn parse_edge_set(text: &str) -> Result<BTreeSet<Edge>, ParseError> {
    let mut out = BTreeSet::new();
    for (line, l) in content_lines(text) {
        if l.starts_with("added=") {
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            [t, s] | [t, s, _] => {
                if let [_, _, round] = toks.as_slice() {
                    round.parse::<u64>().map_err(|_| ParseError::Syntax {
                        line,
                        msg: format!("expected a round number, found {round:?}"),
                    })?;
                }
                out.insert(Edge::new(parse_id(t, line)?, parse_id(s, line)?));
            }
            _ => {
                return Err(ParseError::Syntax {
                    line,
                    msg: format!("expected \"t s\" or \"t s round\", found {l:?}"),
                })
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn parses_comments_and_isolated_nodes() {
        let g = parse_edge_list("# header\n\n1 2\n  2 3 \nnode 9\n2 3\n").unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 2);
        assert!(g.contains_node(NodeId(9)));
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(
            parse_edge_list("1 2\n1 x\n"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("1 2 3\n"),
            Err(ParseError::Syntax { line: 1, .. })
        ));
        assert_eq!(
            parse_edge_list("4 4\n"),
            Err(ParseError::Graph {
                line: 1,
                source: GraphError::SelfLoop(NodeId(4))
            })
        );
        assert!(parse_edge_list("-1 2\n").is_err());
    }

    #[test]
    fn canonical_format_round_trips() {
        let mut g = samples::ten_agents();
        g.add_node(NodeId(77));
        let text = format_edge_list(&g);
        assert!(text.starts_with("node 77\n1 5\n"));
        assert_eq!(parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn edge_set_accepts_solve_output() {
        let es = parse_edge_set("6 1 1\n2 4 2\nadded=2 gamma=2 rounds=2\n").unwrap();
        assert_eq!(es, BTreeSet::from([Edge::new(6, 1), Edge::new(2, 4)]));
        assert!(parse_edge_set("6 1 r\n").is_err());
    }
}
