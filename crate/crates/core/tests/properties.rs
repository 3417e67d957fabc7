use std::collections::BTreeSet;

use augnet::graph::{Digraph, Edge, NodeId};
use augnet::oracle::{
    brute_force_min_augment, is_tight_edge, tight_set_report, verify_solution, Verdict,
};
use augnet::scc::{is_strongly_connected, profile_of, tarjan_scc, SccKind};
use augnet::simnet::{run, SimConfig, World};
use augnet::{AugmentRule, TieBreak};
use proptest::prelude::*;

/// Weakly connected digraph on `1..=n`: a random spanning tree with random
/// orientation plus random extra edges.
fn connected_graph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(|n| {
        let tree = proptest::collection::vec((any::<prop::sample::Index>(), any::<bool>()), n - 1);
        let extra =
            proptest::collection::vec((1..=n as u64, 1..=n as u64), 0..=(n * (n - 1)).min(2 * n));
        (Just(n), tree, extra).prop_map(|(n, tree, extra)| {
            let mut g = Digraph::from_parts((1..=n as u64).map(NodeId), []).unwrap();
            for (i, (parent, forward)) in tree.into_iter().enumerate() {
                let child = i as u64 + 2;
                let p = parent.index(child as usize - 1) as u64 + 1;
                let e = if forward {
                    Edge::new(p, child)
                } else {
                    Edge::new(child, p)
                };
                g.insert_edge(e).unwrap();
            }
            for (a, b) in extra {
                if a != b {
                    g.insert_edge(Edge::new(a, b)).unwrap();
                }
            }
            g
        })
    })
}

/// Any digraph on `1..=n`, possibly disconnected.
fn any_graph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((1..=n as u64, 1..=n as u64), 0..=n * n).prop_map(move |pairs| {
            let edges = pairs
                .into_iter()
                .filter(|(a, b)| a != b)
                .map(|(a, b)| Edge::new(a, b));
            Digraph::from_parts((1..=n as u64).map(NodeId), edges).unwrap()
        })
    })
}

fn config(rule_literal: bool, seed: Option<u64>) -> SimConfig {
    SimConfig {
        rule: if rule_literal {
            AugmentRule::Literal
        } else {
            AugmentRule::Guarded
        },
        tie_break: seed.map_or(TieBreak::LowestId, TieBreak::Seeded),
        ..SimConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn scc_partition_matches_mutual_reachability(g in any_graph(7)) {
        let d = tarjan_scc(&g);
        let covered: usize = d.all_members().iter().map(|m| m.len()).sum();
        prop_assert_eq!(covered, g.node_count());
        for &u in g.nodes() {
            for &v in g.nodes() {
                let mutual = g.reaches(u, v).unwrap() && g.reaches(v, u).unwrap();
                prop_assert_eq!(d.scc_of(u) == d.scc_of(v), mutual, "{} {}", u, v);
            }
        }
        // Condensation edges respect a topological order.
        let order = d.topological_order().expect("condensation is acyclic");
        let pos: Vec<usize> = {
            let mut p = vec![0; d.len()];
            for (i, &c) in order.iter().enumerate() { p[c] = i; }
            p
        };
        for c in 0..d.len() {
            for &s in d.successors(c) {
                prop_assert!(pos[c] < pos[s]);
            }
        }
    }

    #[test]
    fn tight_edges_drop_gamma_by_one(g in connected_graph(7)) {
        prop_assume!(!is_strongly_connected(&g));
        let before = profile_of(&g).gamma;
        for &t in g.nodes() {
            for &s in g.nodes() {
                let e = Edge::new(t, s);
                if t == s || g.contains_edge(&e) {
                    continue;
                }
                if is_tight_edge(&g, e).unwrap() {
                    let after = profile_of(&g.add_edges([&e]).unwrap()).gamma;
                    prop_assert_eq!(after + 1, before, "edge {}", e);
                }
            }
        }
    }

    #[test]
    fn tight_sets_with_outside_witnesses_drop_gamma_by_their_size(
        g in connected_graph(8),
        pick in any::<u64>(),
    ) {
        prop_assume!(!is_strongly_connected(&g));
        // Greedily gather tight edges with fresh endpoint components.
        let d = tarjan_scc(&g);
        let mut tight: Vec<Edge> = Vec::new();
        for &t in g.nodes() {
            for &s in g.nodes() {
                let e = Edge::new(t, s);
                if t != s && !g.contains_edge(&e) && is_tight_edge(&g, e).unwrap() {
                    tight.push(e);
                }
            }
        }
        if !tight.is_empty() {
            let rot = (pick as usize) % tight.len();
            tight.rotate_left(rot);
        }
        let mut used = BTreeSet::new();
        let mut greedy = Vec::new();
        for e in tight {
            let (ct, cs) = (d.scc_of(e.from).unwrap(), d.scc_of(e.to).unwrap());
            if !used.contains(&ct) && !used.contains(&cs) {
                used.insert(ct);
                used.insert(cs);
                greedy.push(e);
            }
        }
        // Keep edges whose (iii)/(iv) witnesses lie outside the set.
        let p = profile_of(&g);
        let outside = |kind: SccKind| -> Vec<NodeId> {
            d.indices_of_kind(kind)
                .filter(|c| !used.contains(c))
                .map(|c| d.representative(c))
                .collect()
        };
        let (free_sources, free_targets) = (outside(SccKind::Source), outside(SccKind::Target));
        let set: BTreeSet<Edge> = greedy
            .into_iter()
            .filter(|e| {
                let fed = p.alpha == 1 || free_sources.iter().any(|&s| g.reaches(s, e.from).unwrap());
                let feeds = p.beta == 1 || free_targets.iter().any(|&t| g.reaches(e.to, t).unwrap());
                fed && feeds
            })
            .collect();
        let r = tight_set_report(&g, &set).unwrap();
        prop_assert!(r.is_tight_set());
        prop_assert_eq!(r.gamma_drop(), set.len() as isize);
    }

    #[test]
    fn minimum_augmentation_is_gamma(g in connected_graph(5)) {
        let best = brute_force_min_augment(&g, 6).unwrap();
        prop_assert_eq!(best.len(), profile_of(&g).gamma);
        prop_assert_eq!(verify_solution(&g, &best.edge_set()).unwrap(), Verdict::Optimal);
    }

    #[test]
    fn flooding_learns_exactly_the_ancestor_edges(g in connected_graph(10)) {
        let mut w = World::new(g.clone(), SimConfig::default()).unwrap();
        let (steps, _) = w.propagate().unwrap();
        prop_assert!(steps <= g.node_count());
        for a in w.agents() {
            let u = a.id();
            let anc = g.ancestors(u).unwrap();
            let expected: BTreeSet<Edge> = g
                .edges()
                .iter()
                .filter(|e| e.from == u || anc.contains(&e.from))
                .copied()
                .collect();
            prop_assert_eq!(a.known_edges(), expected, "agent {}", u);
        }
    }

    #[test]
    fn protocol_is_optimal_and_fast(g in connected_graph(7), seed in proptest::option::of(any::<u64>())) {
        let p = profile_of(&g);
        let t = run(&g, &config(false, seed)).unwrap();
        prop_assert!(t.terminated);
        prop_assert_eq!(t.result.len(), p.gamma);
        let done = g.add_edges(&t.result.edge_set()).unwrap();
        prop_assert!(is_strongly_connected(&done));
        prop_assert!(t.result.rounds <= p.alpha.min(p.beta).max(1));
        if p.alpha == 1 || p.beta == 1 {
            prop_assert_eq!(t.result.rounds, 1);
        }
        for r in &t.rounds {
            let k = r.edges_added.len();
            prop_assert_eq!(r.profile_before.gamma - r.profile_after.gamma, k);
            if r.profile_before.gamma > 0 {
                prop_assert!(k >= 1, "round {} added nothing", r.round);
            }
        }
    }

    #[test]
    fn parallel_schedule_is_identical(g in connected_graph(9), seed in any::<u64>()) {
        let cfg = config(false, Some(seed));
        let par = SimConfig { parallel: true, ..cfg };
        prop_assert_eq!(run(&g, &cfg).unwrap(), run(&g, &par).unwrap());
    }
}

/// Distinct endpoint components alone are not enough: here each edge's
/// witness is an endpoint of the other, the two edges close the cycle
/// 2 -> 4 -> 6 -> 1 -> 2, and the merged component becomes a new source.
#[test]
fn disjoint_tight_edges_can_share_witnesses() {
    let g = Digraph::from_pairs(&[(2, 1), (2, 3), (2, 4), (5, 3), (6, 1)]).unwrap();
    let set = BTreeSet::from([Edge::new(1, 2), Edge::new(4, 6)]);
    let r = tight_set_report(&g, &set).unwrap();
    assert!(r.is_tight_set());
    assert_eq!((r.gamma_before, r.gamma_after), (3, 2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn small_graphs_match_brute_force(g in connected_graph(5), seed in proptest::option::of(any::<u64>())) {
        let best = brute_force_min_augment(&g, 5).unwrap();
        let t = run(&g, &config(false, seed)).unwrap();
        prop_assert_eq!(t.result.len(), best.len());
    }
}
