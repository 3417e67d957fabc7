//! Benchmark sweeps over generator parameters.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::graphgen::{generate, trial_seed, GenSpec, ModelKind};
use crate::scc::profile_of;
use crate::simnet::{run, SimConfig};

pub const CSV_HEADER: &str = "model,n,param,trials,avg_rounds,avg_long_msgs,avg_gamma";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchCell {
    pub model: ModelKind,
    pub n: usize,
    pub param: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellStats {
    pub avg_rounds: f64,
    pub avg_long_msgs: f64,
    pub avg_gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub cell: BenchCell,
    pub trials: usize,
    /// `Err` holds the first failure; the rest of the sweep is unaffected.
    pub stats: Result<CellStats, String>,
}

fn run_cell(cell: BenchCell, trials: usize, seed: u64, config: &SimConfig) -> BenchRow {
    let one = |trial: usize| -> Result<(usize, usize, usize), String> {
        let model = cell
            .model
            .with_param(cell.param)
            .map_err(|e| e.to_string())?;
        let spec = GenSpec::new(
            model,
            cell.n,
            trial_seed(seed, cell.model, cell.n, cell.param, trial),
        );
        let g = generate(&spec).map_err(|e| e.to_string())?;
        let t = run(&g, config).map_err(|e| format!("{spec}: {e}"))?;
        if !t.terminated {
            return Err(format!("{spec}: did not terminate"));
        }
        let long: usize = t.rounds.iter().map(|r| r.long_msgs).sum();
        Ok((t.result.rounds, long, profile_of(&g).gamma))
    };
    let results: Result<Vec<_>, String> = (0..trials).into_par_iter().map(one).collect();
    let stats = results.and_then(|rs| {
        if rs.is_empty() {
            return Err("no trials".into());
        }
        let k = rs.len() as f64;
        let avg =
            |f: fn(&(usize, usize, usize)) -> usize| rs.iter().map(f).sum::<usize>() as f64 / k;
        Ok(CellStats {
            avg_rounds: avg(|r| r.0),
            avg_long_msgs: avg(|r| r.1),
            avg_gamma: avg(|r| r.2),
        })
    });
    BenchRow {
        cell,
        trials,
        stats,
    }
}

/// Runs every listed cell; rows come back sorted by (model name, n, param).
pub fn bench_cells(
    cells: &[BenchCell],
    trials: usize,
    seed: u64,
    config: &SimConfig,
) -> Vec<BenchRow> {
    let mut rows: Vec<BenchRow> = cells
        .par_iter()
        .map(|&c| run_cell(c, trials, seed, config))
        .collect();
    rows.sort_by(|a, b| {
        (a.cell.model.name(), a.cell.n)
            .cmp(&(b.cell.model.name(), b.cell.n))
            .then(a.cell.param.total_cmp(&b.cell.param))
    });
    rows
}

/// Full grid `models × n_values × param_values`.
pub fn bench_sweep(
    models: &[ModelKind],
    n_values: &[usize],
    param_values: &[f64],
    trials: usize,
    seed: u64,
    config: &SimConfig,
) -> Vec<BenchRow> {
    let mut cells = Vec::new();
    for &model in models {
        for &n in n_values {
            for &param in param_values {
                cells.push(BenchCell { model, n, param });
            }
        }
    }
    bench_cells(&cells, trials, seed, config)
}

/// CSV with [`CSV_HEADER`]; failed cells leave the averages empty.
pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = write!(
            out,
            "{},{},{},{},",
            r.cell.model, r.cell.n, r.cell.param, r.trials
        );
        match &r.stats {
            Ok(s) => {
                let _ = writeln!(
                    out,
                    "{:.4},{:.4},{:.4}",
                    s.avg_rounds, s.avg_long_msgs, s.avg_gamma
                );
            }
            Err(_) => out.push_str(",,\n"),
        }
    }
    out
}

/// Gnuplot script drawing one heat map of `avg_rounds` over (n, param) per
/// model, reading `csv_path`.
pub fn plot_script(rows: &[BenchRow], csv_path: &str) -> String {
    let mut models: Vec<ModelKind> = rows.iter().map(|r| r.cell.model).collect();
    models.sort_by_key(|m| m.name());
    models.dedup();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# avg_rounds heat maps; run with: gnuplot -p <this file>"
    );
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set view map");
    let _ = writeln!(s, "set xlabel 'n'");
    let _ = writeln!(s, "set ylabel 'param'");
    let _ = writeln!(s, "set cblabel 'avg rounds'");
    let _ = writeln!(s, "set multiplot layout 1,{}", models.len().max(1));
    for m in &models {
        let _ = writeln!(s, "set title '{m}'");
        let _ = writeln!(
            s,
            "plot '{csv_path}' every ::1 using 2:(strcol(1) eq '{m}' ? $3 : NaN):5 with points pt 5 ps 3 palette notitle"
        );
    }
    let _ = writeln!(s, "unset multiplot");
    s
}
