//! Browser bindings for the demo page in `www/`.
//!
//! Each export takes and returns plain strings (edge lists in, JSON out) so
//! the page needs no glue beyond `JSON.parse`. The `*_json` functions hold
//! the logic and are tested natively.

use augnet::graphgen::{generate, GenSpec, ModelKind};
use augnet::{format_edge_list, parse_edge_list, run, tarjan_scc, Digraph, SimConfig, TieBreak};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest network the page will simulate; keeps the tab responsive.
pub const MAX_NODES: usize = 400;

fn load(edge_list: &str) -> Result<Digraph, String> {
    let g = parse_edge_list(edge_list).map_err(|e| e.to_string())?;
    if g.node_count() > MAX_NODES {
        return Err(format!(
            "{} nodes is more than the demo allows ({MAX_NODES})",
            g.node_count()
        ));
    }
    Ok(g)
}

fn graph_value(g: &Digraph) -> Value {
    let d = tarjan_scc(g);
    let sccs: Vec<Value> = (0..d.len())
        .map(|i| {
            json!({
                "kind": format!("{:?}", d.kind(i)).to_lowercase(),
                "members": d.members(i).iter().map(|n| n.0).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "nodes": g.nodes().iter().map(|n| n.0).collect::<Vec<_>>(),
        "edges": g.edges().iter().map(|e| [e.from.0, e.to.0]).collect::<Vec<_>>(),
        "sccs": sccs,
    })
}

/// SCCs with their kinds, plus alpha/beta/gamma.
pub fn inspect_json(edge_list: &str) -> Result<String, String> {
    let g = load(edge_list)?;
    let p = augnet::profile_of(&g);
    let mut v = graph_value(&g);
    v["alpha"] = p.alpha.into();
    v["beta"] = p.beta.into();
    v["gamma"] = p.gamma.into();
    Ok(v.to_string())
}

/// Runs the protocol. `seed < 0` means lowest-id tie-breaks.
pub fn solve_json(edge_list: &str, seed: f64) -> Result<String, String> {
    let g = load(edge_list)?;
    let config = SimConfig {
        tie_break: if seed < 0.0 {
            TieBreak::LowestId
        } else {
            TieBreak::Seeded(seed as u64)
        },
        ..SimConfig::default()
    };
    let t = run(&g, &config).map_err(|e| e.to_string())?;
    let mut v = graph_value(&g);
    v["gamma"] = t.input_summary.profile.gamma.into();
    v["rounds"] = t.result.rounds.into();
    v["terminated"] = t.terminated.into();
    v["added"] = t
        .result
        .added
        .iter()
        .map(|a| json!({"t": a.edge.from.0, "s": a.edge.to.0, "round": a.round}))
        .collect();
    v["per_round"] = t
        .rounds
        .iter()
        .map(|r| {
            json!({
                "round": r.round,
                "long_msgs": r.long_msgs,
                "short_msgs": r.short_msgs,
                "gamma_after": r.profile_after.gamma,
            })
        })
        .collect();
    Ok(v.to_string())
}

/// A random weakly connected network as an edge list.
pub fn generate_edge_list(model: &str, n: usize, param: f64, seed: f64) -> Result<String, String> {
    if n == 0 || n > MAX_NODES {
        return Err(format!("n must be in 1..={MAX_NODES}"));
    }
    let kind = ModelKind::parse(model).ok_or_else(|| format!("unknown model {model:?}"))?;
    let model = kind.with_param(param).map_err(|e| e.to_string())?;
    let spec = GenSpec::new(model, n, seed.max(0.0) as u64);
    let g = generate(&spec).map_err(|e| e.to_string())?;
    Ok(format!("# {spec}\n{}", format_edge_list(&g)))
}

#[wasm_bindgen]
pub fn inspect(edge_list: &str) -> Result<String, JsError> {
    inspect_json(edge_list).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn solve(edge_list: &str, seed: f64) -> Result<String, JsError> {
    solve_json(edge_list, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn random_graph(model: &str, n: usize, param: f64, seed: f64) -> Result<String, JsError> {
    generate_edge_list(model, n, param, seed).map_err(|e| JsError::new(&e))
}
