//! Seeded random digraph generators.
//!
//! All generators draw from ChaCha8 seeded with a 64-bit value, label nodes
//! `0..n`, and reject samples that are not weakly connected, retrying with a
//! derived sub-seed.

use std::fmt;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Digraph, Edge, NodeId};
use crate::seed::derive_seed;

pub const RETRY_BUDGET: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GenModel {
    /// Each ordered pair independently with probability `p`.
    ErdosRenyi { p: f64 },
    /// Complete digraph with each edge removed independently with probability `p`.
    Bernoulli { p: f64 },
    /// Exactly `m` distinct ordered pairs, uniformly.
    ErdosRenyiUniform { m: usize },
    /// Exactly `m` edges oriented forward along a random node permutation.
    RandomDag { m: usize },
}

/// Model family without its parameter, as named on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    ErdosRenyi,
    Bernoulli,
    ErdosRenyiUniform,
    RandomDag,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::ErdosRenyi,
        ModelKind::Bernoulli,
        ModelKind::ErdosRenyiUniform,
        ModelKind::RandomDag,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::ErdosRenyi => "er",
            ModelKind::Bernoulli => "bernoulli",
            ModelKind::ErdosRenyiUniform => "er-uniform",
            ModelKind::RandomDag => "dag",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Whether the parameter is an edge count rather than a probability.
    pub fn takes_edge_count(self) -> bool {
        matches!(self, ModelKind::ErdosRenyiUniform | ModelKind::RandomDag)
    }

    /// Builds the model; an edge-count parameter must be a whole number.
    pub fn with_param(self, param: f64) -> Result<GenModel, GenError> {
        let count = || {
            if param >= 0.0 && param.fract() == 0.0 && param <= usize::MAX as f64 {
                Ok(param as usize)
            } else {
                Err(GenError::Invalid(format!(
                    "{}: edge count must be a non-negative integer, got {param}",
                    self.name()
                )))
            }
        };
        Ok(match self {
            ModelKind::ErdosRenyi => GenModel::ErdosRenyi { p: param },
            ModelKind::Bernoulli => GenModel::Bernoulli { p: param },
            ModelKind::ErdosRenyiUniform => GenModel::ErdosRenyiUniform { m: count()? },
            ModelKind::RandomDag => GenModel::RandomDag { m: count()? },
        })
    }

    fn tag(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl GenModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            GenModel::ErdosRenyi { .. } => ModelKind::ErdosRenyi,
            GenModel::Bernoulli { .. } => ModelKind::Bernoulli,
            GenModel::ErdosRenyiUniform { .. } => ModelKind::ErdosRenyiUniform,
            GenModel::RandomDag { .. } => ModelKind::RandomDag,
        }
    }

    pub fn param(&self) -> f64 {
        match *self {
            GenModel::ErdosRenyi { p } | GenModel::Bernoulli { p } => p,
            GenModel::ErdosRenyiUniform { m } | GenModel::RandomDag { m } => m as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub model: GenModel,
    pub n: usize,
    pub seed: u64,
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (k, v) = match self.model {
            GenModel::ErdosRenyi { p } | GenModel::Bernoulli { p } => ("p", p.to_string()),
            GenModel::ErdosRenyiUniform { m } | GenModel::RandomDag { m } => ("m", m.to_string()),
        };
        write!(
            f,
            "{}(n={}, {k}={v}, seed={})",
            self.model.kind(),
            self.n,
            self.seed
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    Invalid(String),
    #[error("{spec}: no weakly connected sample in {attempts} attempts")]
    RetryBudgetExhausted { spec: String, attempts: usize },
}

impl GenSpec {
    pub fn new(model: GenModel, n: usize, seed: u64) -> Self {
        GenSpec { model, n, seed }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |why: String| Err(GenError::Invalid(format!("{self}: {why}")));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        let pairs = self.n.saturating_mul(self.n - 1);
        match self.model {
            GenModel::ErdosRenyi { p } | GenModel::Bernoulli { p } => {
                if !(0.0..=1.0).contains(&p) {
                    return bad(format!("probability {p} outside [0, 1]"));
                }
            }
            GenModel::ErdosRenyiUniform { m } => {
                if m > pairs {
                    return bad(format!("m={m} exceeds n(n-1)={pairs}"));
                }
            }
            GenModel::RandomDag { m } => {
                if m > pairs / 2 {
                    return bad(format!("m={m} exceeds the {} forward pairs", pairs / 2));
                }
            }
        }
        Ok(())
    }
}

/// Maps `k < n(n-1)` to the k-th ordered pair `(u, v)` with `u != v`.
fn ordered_pair(k: usize, n: usize) -> (usize, usize) {
    let (u, r) = (k / (n - 1), k % (n - 1));
    (u, if r >= u { r + 1 } else { r })
}

/// Maps `k < n(n-1)/2` to the k-th pair `(i, j)` with `i < j`.
fn forward_pair(mut k: usize, n: usize) -> (usize, usize) {
    let mut i = 0;
    while k >= n - 1 - i {
        k -= n - 1 - i;
        i += 1;
    }
    (i, i + 1 + k)
}

fn sample_once(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Digraph {
    let n = spec.n;
    let mut pairs = Vec::new();
    match spec.model {
        GenModel::ErdosRenyi { p } | GenModel::Bernoulli { p } => {
            let keep_if_hit = matches!(spec.model, GenModel::ErdosRenyi { .. });
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.gen_bool(p) == keep_if_hit {
                        pairs.push((u, v));
                    }
                }
            }
        }
        GenModel::ErdosRenyiUniform { m } => {
            let mut ks = index::sample(rng, n * (n - 1), m).into_vec();
            ks.sort_unstable();
            pairs.extend(ks.into_iter().map(|k| ordered_pair(k, n)));
        }
        GenModel::RandomDag { m } => {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            let mut ks = index::sample(rng, n * (n - 1) / 2, m).into_vec();
            ks.sort_unstable();
            pairs.extend(ks.into_iter().map(|k| {
                let (i, j) = forward_pair(k, n);
                (perm[i], perm[j])
            }));
        }
    }
    Digraph::from_parts(
        (0..n as u64).map(NodeId),
        pairs
            .into_iter()
            .map(|(u, v)| Edge::new(u as u64, v as u64)),
    )
    .expect("generated edges use generated nodes")
}

/// Draws a weakly connected digraph from `spec`.
pub fn generate(spec: &GenSpec) -> Result<Digraph, GenError> {
    spec.validate()?;
    for attempt in 0..RETRY_BUDGET {
        let sub = derive_seed(&[spec.seed, attempt as u64]);
        let g = sample_once(spec, &mut ChaCha8Rng::seed_from_u64(sub));
        if g.is_weakly_connected().unwrap_or(false) {
            return Ok(g);
        }
    }
    Err(GenError::RetryBudgetExhausted {
        spec: spec.to_string(),
        attempts: RETRY_BUDGET,
    })
}

/// Seed of one trial in a sweep cell.
pub fn trial_seed(master: u64, kind: ModelKind, n: usize, param: f64, trial: usize) -> u64 {
    derive_seed(&[master, kind.tag(), n as u64, param.to_bits(), trial as u64])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edgelist::format_edge_list;
    use crate::scc::{is_strongly_connected, profile_of, tarjan_scc};

    #[test]
    fn pair_indexing_is_a_bijection() {
        let n = 6;
        let all: Vec<_> = (0..n * (n - 1)).map(|k| ordered_pair(k, n)).collect();
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), n * (n - 1));
        assert!(all.iter().all(|&(u, v)| u != v && u < n && v < n));
        let fwd: Vec<_> = (0..n * (n - 1) / 2).map(|k| forward_pair(k, n)).collect();
        assert_eq!(fwd[0], (0, 1));
        assert_eq!(*fwd.last().unwrap(), (n - 2, n - 1));
        assert!(fwd.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn single_node_er() {
        let g = generate(&GenSpec::new(GenModel::ErdosRenyi { p: 0.5 }, 1, 7)).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn full_uniform_is_complete() {
        let g = generate(&GenSpec::new(GenModel::ErdosRenyiUniform { m: 12 }, 4, 1)).unwrap();
        assert_eq!(g.edge_count(), 12);
        assert!(is_strongly_connected(&g));
        assert_eq!(profile_of(&g).gamma, 0);
    }

    #[test]
    fn dag_is_acyclic() {
        for seed in 0..20 {
            let g = generate(&GenSpec::new(GenModel::RandomDag { m: 40 }, 20, seed)).unwrap();
            assert_eq!(g.edge_count(), 40);
            assert_eq!(tarjan_scc(&g).len(), 20);
        }
    }

    #[test]
    fn seeded_output_is_stable() {
        let spec = GenSpec::new(GenModel::Bernoulli { p: 0.7 }, 12, 99);
        let a = format_edge_list(&generate(&spec).unwrap());
        let b = format_edge_list(&generate(&spec).unwrap());
        assert_eq!(a, b);
        let other = GenSpec { seed: 100, ..spec };
        assert_ne!(a, format_edge_list(&generate(&other).unwrap()));
    }

    #[test]
    fn invalid_specs() {
        let e = |model, n| generate(&GenSpec::new(model, n, 0)).unwrap_err();
        assert!(matches!(
            e(GenModel::ErdosRenyi { p: 1.5 }, 3),
            GenError::Invalid(_)
        ));
        assert!(matches!(
            e(GenModel::ErdosRenyi { p: 0.5 }, 0),
            GenError::Invalid(_)
        ));
        assert!(matches!(
            e(GenModel::ErdosRenyiUniform { m: 7 }, 3),
            GenError::Invalid(_)
        ));
        assert!(matches!(
            e(GenModel::RandomDag { m: 4 }, 3),
            GenError::Invalid(_)
        ));
        assert!(matches!(
            e(GenModel::ErdosRenyi { p: 0.0 }, 3),
            GenError::RetryBudgetExhausted {
                attempts: RETRY_BUDGET,
                ..
            }
        ));
        assert!(ModelKind::RandomDag.with_param(2.5).is_err());
    }

    #[test]
    fn model_names_round_trip() {
        for k in ModelKind::ALL {
            assert_eq!(ModelKind::parse(k.name()), Some(k));
        }
        assert_eq!(ModelKind::parse("nope"), None);
    }

    #[test]
    fn edge_counts_within_six_sigma() {
        let n = 15usize;
        let pairs = (n * (n - 1)) as f64;
        for (model, expect_frac) in [
            (GenModel::ErdosRenyi { p: 0.3 }, 0.3),
            (GenModel::Bernoulli { p: 0.3 }, 0.7),
        ] {
            for seed in 0..30 {
                let g = generate(&GenSpec::new(model, n, seed)).unwrap();
                let mean = pairs * expect_frac;
                let sd = (pairs * expect_frac * (1.0 - expect_frac)).sqrt();
                assert!(
                    (g.edge_count() as f64 - mean).abs() <= 6.0 * sd,
                    "{model:?} seed {seed}: {} edges",
                    g.edge_count()
                );
            }
        }
    }
}
