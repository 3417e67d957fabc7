//! The unguarded fast path ("connect to every answering source") can add
//! more edges than necessary. These graphs pin down why the default rule
//! checks that the answering sources are all the sources it proposed to.

use augnet::oracle::{verify_solution, Verdict};
use augnet::samples;
use augnet::scc::profile_of;
use augnet::simnet::run;
use augnet::{AugmentRule, Digraph, SimConfig};

fn solve(g: &Digraph, rule: AugmentRule) -> (usize, usize, Verdict) {
    let t = run(
        g,
        &SimConfig {
            rule,
            ..SimConfig::default()
        },
    )
    .unwrap();
    assert!(t.terminated);
    let v = verify_solution(g, &t.result.edge_set()).unwrap();
    (t.result.len(), t.result.rounds, v)
}

#[test]
fn eight_agents_literal_overshoots() {
    let g = samples::eight_agents();
    assert_eq!(profile_of(&g).gamma, 4);
    let (added, _, verdict) = solve(&g, AugmentRule::Literal);
    assert!(added > 4, "literal rule added {added}");
    assert_eq!(verdict, Verdict::FeasibleSuboptimal);
}

#[test]
fn eight_agents_guarded_is_optimal() {
    let g = samples::eight_agents();
    let (added, rounds, verdict) = solve(&g, AugmentRule::Guarded);
    assert_eq!(added, 4);
    assert_eq!(verdict, Verdict::Optimal);
    let p = profile_of(&g);
    assert!(rounds <= p.alpha.min(p.beta));
}

#[test]
fn extra_target_literal_overshoots() {
    let g = samples::fourteen_agents_extra_target();
    assert_eq!(profile_of(&g).gamma, 3);
    let (added, _, verdict) = solve(&g, AugmentRule::Literal);
    assert!(added > 3, "literal rule added {added}");
    assert_eq!(verdict, Verdict::FeasibleSuboptimal);
}

#[test]
fn extra_target_guarded_is_optimal() {
    let g = samples::fourteen_agents_extra_target();
    let (added, _, verdict) = solve(&g, AugmentRule::Guarded);
    assert_eq!(added, 3);
    assert_eq!(verdict, Verdict::Optimal);
}

#[test]
fn rules_agree_when_one_side_is_single() {
    // One source, three targets: both rules finish in one round.
    let g = Digraph::from_pairs(&[(1, 2), (1, 3), (1, 4)]).unwrap();
    assert_eq!(
        solve(&g, AugmentRule::Literal),
        solve(&g, AugmentRule::Guarded)
    );
    // Three sources, one target.
    let g = Digraph::from_pairs(&[(2, 1), (3, 1), (4, 1)]).unwrap();
    assert_eq!(solve(&g, AugmentRule::Literal), (3, 1, Verdict::Optimal));
    assert_eq!(solve(&g, AugmentRule::Guarded), (3, 1, Verdict::Optimal));
}
