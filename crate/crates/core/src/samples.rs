//! Small hand-built networks used by tests, the CLI and the demo page.

use crate::graph::Digraph;

/// Six agents: sources {1}, {4,5}; targets {2,3}, {6}.
pub fn six_agents() -> Digraph {
    Digraph::from_pairs(&[(1, 2), (2, 3), (3, 2), (4, 5), (5, 4), (5, 6), (1, 6)])
        .expect("valid sample")
}

/// Ten agents: sources {1}, {3}, {9,10}; targets {4}, {2,6,7,8}; {5} mixed.
pub fn ten_agents() -> Digraph {
    Digraph::from_pairs(&[
        (1, 5),
        (1, 6),
        (2, 7),
        (2, 8),
        (3, 5),
        (5, 4),
        (6, 2),
        (7, 6),
        (8, 2),
        (9, 2),
        (9, 4),
        (9, 10),
        (10, 6),
        (10, 9),
    ])
    .expect("valid sample")
}

/// Fourteen agents: sources {1,2}, {3,4}, {5,6,7,8}; targets {9,10,11},
/// {12,13,14}.
pub fn fourteen_agents() -> Digraph {
    Digraph::from_pairs(&[
        (1, 2),
        (2, 1),
        (3, 4),
        (4, 3),
        (5, 6),
        (5, 7),
        (5, 8),
        (6, 5),
        (6, 8),
        (7, 6),
        (8, 6),
        (8, 7),
        (9, 10),
        (10, 11),
        (11, 9),
        (12, 14),
        (13, 12),
        (14, 13),
        (1, 11),
        (4, 10),
        (4, 13),
        (8, 13),
    ])
    .expect("valid sample")
}

/// [`fourteen_agents`] plus a target {15} reached only from {1,2}. Target
/// {12,13,14} sees exactly the same local information in both networks, but
/// here (12,5) belongs to no optimal augmentation.
pub fn fourteen_agents_extra_target() -> Digraph {
    let mut g = fourteen_agents();
    g.add_node(15.into());
    g.insert_edge(crate::graph::Edge::new(1, 15))
        .expect("valid sample");
    g
}

/// Sources 5..=8, targets 1..=4 (γ = 4). Target 2 only hears from sources
/// that reach nothing but 2, while β > 1 and α = β.
pub fn eight_agents() -> Digraph {
    Digraph::from_pairs(&[(5, 2), (6, 2), (7, 2), (7, 1), (7, 3), (8, 1), (8, 4)])
        .expect("valid sample")
}
