use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use augnet::bench::{bench_sweep, plot_script, to_csv};
use augnet::graphgen::{generate, GenError, GenSpec, ModelKind};
use augnet::oracle::{brute_force_min_augment, OracleError, DEFAULT_MAX_NODES};
use augnet::scc::tarjan_scc;
use augnet::trace::write_trace;
use augnet::{
    format_edge_list, parse_edge_list, parse_edge_set, profile_of, run, verify_solution,
    AugmentRule, Digraph, GraphError, SimConfig, SimError, TieBreak, Verdict,
};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

/// Distributed strong-connectivity augmentation: solve, verify, generate, benchmark.
#[derive(Parser, Debug)]
#[command(name = "augnet", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the protocol and print the added edges as `t s round`.
    Solve {
        #[arg(long)]
        input: PathBuf,
        /// Write the line-delimited JSON trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Seed for reproducible random tie-breaks (default: lowest id).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Rule::Guarded)]
        rule: Rule,
    },
    /// Classify a set of added edges as optimal, feasible-suboptimal or infeasible.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        added: PathBuf,
    },
    /// Centralized view: SCCs, gamma, and a brute-force optimum on small graphs.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
        max_nodes: usize,
    },
    /// Generate a weakly connected random digraph as an edge list.
    #[command(group(ArgGroup::new("param").required(true).args(["p", "m"])))]
    Gen {
        #[arg(long, value_parser = parse_model)]
        model: ModelKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep models x n x param and write averages as CSV.
    #[command(group(ArgGroup::new("params").required(true).args(["p_list", "m_list"])))]
    Bench {
        #[arg(long, value_parser = parse_model, value_delimiter = ',', required = true)]
        models: Vec<ModelKind>,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        p_list: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        m_list: Vec<usize>,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write a gnuplot script reading the CSV.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Rule {
    Guarded,
    Literal,
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    ModelKind::parse(s).ok_or_else(|| {
        let names: Vec<&str> = ModelKind::ALL.iter().map(|m| m.name()).collect();
        format!("unknown model {s:?}; expected one of {}", names.join(", "))
    })
}

/// A failure with its process exit code.
struct Failure {
    code: u8,
    msg: String,
}

// 1: internal failure, 2: unusable input, 3: not weakly connected,
// 4: verify found a non-optimal answer.
impl Failure {
    fn internal(msg: impl Into<String>) -> Self {
        Failure {
            code: 1,
            msg: msg.into(),
        }
    }
    fn input(msg: impl Into<String>) -> Self {
        Failure {
            code: 2,
            msg: msg.into(),
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        let code = match e {
            GraphError::NotWeaklyConnected { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Graph(g) => g.into(),
            other => Failure::internal(other.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Graph(g) => g.into(),
            other => Failure::internal(other.to_string()),
        }
    }
}

fn check_input(path: &Path) -> Result<(), Failure> {
    if !path.is_file() {
        return Err(Failure::input(format!("{}: no such file", path.display())));
    }
    Ok(())
}

fn check_output(path: &Path) -> Result<(), Failure> {
    if path.is_dir() {
        return Err(Failure::input(format!(
            "{}: is a directory",
            path.display()
        )));
    }
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = parent {
        if !dir.is_dir() {
            return Err(Failure::input(format!(
                "{}: no such directory",
                dir.display()
            )));
        }
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::internal(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Digraph, Failure> {
    parse_edge_list(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn solve(input: &Path, trace: Option<&Path>, seed: Option<u64>, rule: Rule) -> Result<(), Failure> {
    check_input(input)?;
    if let Some(t) = trace {
        check_output(t)?;
    }
    let g = read_graph(input)?;
    g.require_weakly_connected()?;
    let config = SimConfig {
        rule: match rule {
            Rule::Guarded => AugmentRule::Guarded,
            Rule::Literal => AugmentRule::Literal,
        },
        tie_break: seed.map_or(TieBreak::LowestId, TieBreak::Seeded),
        ..SimConfig::default()
    };
    let t = run(&g, &config)?;
    if let Some(path) = trace {
        let f = fs::File::create(path)
            .map_err(|e| Failure::internal(format!("{}: {e}", path.display())))?;
        write_trace(&t, std::io::BufWriter::new(f))
            .map_err(|e| Failure::internal(format!("{}: {e}", path.display())))?;
    }
    if !t.terminated {
        return Err(Failure::internal(format!(
            "protocol did not terminate within {} rounds",
            t.rounds.len()
        )));
    }
    for a in &t.result.added {
        println!("{} {} {}", a.edge.from, a.edge.to, a.round);
    }
    println!(
        "added={} gamma={} rounds={}",
        t.result.len(),
        t.input_summary.profile.gamma,
        t.result.rounds
    );
    Ok(())
}

fn verify(input: &Path, added: &Path) -> Result<(), Failure> {
    check_input(input)?;
    check_input(added)?;
    let g = read_graph(input)?;
    let set = parse_edge_set(&read(added)?)
        .map_err(|e| Failure::input(format!("{}: {e}", added.display())))?;
    g.require_weakly_connected()?;
    let verdict = verify_solution(&g, &set)?;
    println!(
        "{verdict} gamma={} added={}",
        profile_of(&g).gamma,
        set.len()
    );
    match verdict {
        Verdict::Optimal => Ok(()),
        _ => Err(Failure {
            code: 4,
            msg: String::new(),
        }),
    }
}

fn oracle(input: &Path, max_nodes: usize) -> Result<(), Failure> {
    check_input(input)?;
    let g = read_graph(input)?;
    g.require_weakly_connected()?;
    let d = tarjan_scc(&g);
    let p = profile_of(&g);
    println!(
        "nodes={} edges={} sccs={}",
        g.node_count(),
        g.edge_count(),
        d.len()
    );
    println!("alpha={} beta={} gamma={}", p.alpha, p.beta, p.gamma);
    for (i, members) in d.all_members().iter().enumerate() {
        let ids: Vec<String> = members.iter().map(|m| m.to_string()).collect();
        println!(
            "scc {i} {} {}",
            format!("{:?}", d.kind(i)).to_lowercase(),
            ids.join(" ")
        );
    }
    match brute_force_min_augment(&g, max_nodes) {
        Ok(best) => {
            let edges: Vec<String> = best.added.iter().map(|a| a.edge.to_string()).collect();
            println!("brute_force={} {}", best.len(), edges.join(" "));
        }
        Err(OracleError::TooLarge { nodes, max }) => {
            println!("brute_force skipped: {nodes} nodes > {max}");
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn gen_error(e: GenError) -> Failure {
    match e {
        GenError::Invalid(_) => Failure::input(e.to_string()),
        GenError::RetryBudgetExhausted { .. } => Failure {
            code: 3,
            msg: e.to_string(),
        },
    }
}

fn model_param(model: ModelKind, p: Option<f64>, m: Option<usize>) -> Result<f64, Failure> {
    match (model.takes_edge_count(), p, m) {
        (true, _, Some(m)) => Ok(m as f64),
        (false, Some(p), _) => Ok(p),
        (true, _, None) => Err(Failure::input(format!("model {model} needs --m"))),
        (false, None, _) => Err(Failure::input(format!("model {model} needs --p"))),
    }
}

fn gen(
    model: ModelKind,
    n: usize,
    p: Option<f64>,
    m: Option<usize>,
    seed: u64,
    out: &Path,
) -> Result<(), Failure> {
    check_output(out)?;
    let param = model_param(model, p, m)?;
    let spec = GenSpec::new(model.with_param(param).map_err(gen_error)?, n, seed);
    let g = generate(&spec).map_err(gen_error)?;
    write(out, &format!("# {spec}\n{}", format_edge_list(&g)))
}

#[allow(clippy::too_many_arguments)]
fn bench(
    models: &[ModelKind],
    n_list: &[usize],
    p_list: &[f64],
    m_list: &[usize],
    trials: usize,
    seed: u64,
    out: &Path,
    plot: Option<&Path>,
) -> Result<(), Failure> {
    check_output(out)?;
    if let Some(p) = plot {
        check_output(p)?;
    }
    if trials == 0 {
        return Err(Failure::input("--trials must be positive"));
    }
    let params: Vec<f64> = if m_list.is_empty() {
        p_list.to_vec()
    } else {
        m_list.iter().map(|&m| m as f64).collect()
    };
    for &model in models {
        if model.takes_edge_count() == m_list.is_empty() {
            let want = if model.takes_edge_count() {
                "--m-list"
            } else {
                "--p-list"
            };
            return Err(Failure::input(format!("model {model} needs {want}")));
        }
    }
    let rows = bench_sweep(models, n_list, &params, trials, seed, &SimConfig::default());
    let mut failed = 0;
    for r in &rows {
        if let Err(e) = &r.stats {
            failed += 1;
            eprintln!(
                "cell {} n={} param={}: {e}",
                r.cell.model, r.cell.n, r.cell.param
            );
        }
    }
    write(out, &to_csv(&rows))?;
    if let Some(p) = plot {
        write(p, &plot_script(&rows, &out.to_string_lossy()))?;
    }
    if failed == rows.len() {
        return Err(Failure::internal("every cell failed"));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Command::Solve {
            input,
            trace,
            seed,
            rule,
        } => solve(input, trace.as_deref(), *seed, *rule),
        Command::Verify { input, added } => verify(input, added),
        Command::Oracle { input, max_nodes } => oracle(input, *max_nodes),
        Command::Gen {
            model,
            n,
            p,
            m,
            seed,
            out,
        } => gen(*model, *n, *p, *m, *seed, out),
        Command::Bench {
            models,
            n_list,
            p_list,
            m_list,
            trials,
            seed,
            out,
            plot,
        } => bench(
            models,
            n_list,
            p_list,
            m_list,
            *trials,
            *seed,
            out,
            plot.as_deref(),
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.msg.is_empty() {
                eprintln!("augnet: {}", f.msg);
            }
            ExitCode::from(f.code)
        }
    }
}
