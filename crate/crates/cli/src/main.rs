//! `flood`: analytics, single-graph simulation, sweeps and calibrated comparisons.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use flood_core::experiment::{
    analyze_grid, comparison_rows, point_graph, run_comparison, run_sweep, write_json, write_rows,
};
use flood_core::{FloodRule, ModelFamily, OutputFormat, SweepConfig, SweepRow};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "flood",
    version,
    about = "Probabilistic and heuristic flooding on random graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytical predictions only
    Analyze(Common),
    /// Flood a single graph under one rule
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Write the generated graph as an edge list
        #[arg(long, value_name = "PATH")]
        dump_graph: Option<PathBuf>,
    },
    /// Simulation and predictions over a parameter grid
    Sweep(Common),
    /// Heuristic flooding against probabilistic flooding at reach-matched p
    Compare(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Poisson,
    PowerLaw,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum RuleArg {
    Uninformed,
    Probabilistic,
    Heuristic,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON file with sweep settings; flags override its values
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    /// Mean degree(s) for the Poisson model, comma separated
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    z: Vec<f64>,
    /// Exponent(s) for the power-law model, comma separated
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    tau: Vec<f64>,
    /// Node count
    #[arg(long)]
    n: Option<usize>,
    /// Rule families to run; inferred from --p/--alpha when omitted
    #[arg(long, value_enum, value_delimiter = ',', num_args = 1..)]
    rule: Vec<RuleArg>,
    /// Forwarding probabilities, comma separated
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    p: Vec<f64>,
    /// Heuristic target reach values, comma separated
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    alpha: Vec<f64>,
    /// Graphs per grid point
    #[arg(long)]
    graphs: Option<usize>,
    /// Flooding instances per graph
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// n=10000, 15 graphs (Poisson) or 300 (power law), 1000 instances
    #[arg(long)]
    full_scale: bool,
    /// Degree truncation bound; n-1 when absent
    #[arg(long)]
    max_degree: Option<usize>,
    /// Accept grid points at or below the phase transition
    #[arg(long)]
    allow_subcritical: bool,
    /// Exit nonzero with a JSON error record on stderr if any point fails
    #[arg(long)]
    strict: bool,
}

impl Common {
    fn rules(&self) -> anyhow::Result<Vec<FloodRule>> {
        let mut kinds = self.rule.clone();
        if kinds.is_empty() {
            if !self.p.is_empty() {
                kinds.push(RuleArg::Probabilistic);
            }
            if !self.alpha.is_empty() {
                kinds.push(RuleArg::Heuristic);
            }
        }
        let mut rules = Vec::new();
        for kind in kinds {
            match kind {
                RuleArg::Uninformed => rules.push(FloodRule::Uninformed),
                RuleArg::Probabilistic => {
                    if self.p.is_empty() {
                        bail!("--rule probabilistic needs --p");
                    }
                    for &p in &self.p {
                        rules.push(FloodRule::probabilistic(p)?);
                    }
                }
                RuleArg::Heuristic => {
                    if self.alpha.is_empty() {
                        bail!("--rule heuristic needs --alpha");
                    }
                    for &alpha in &self.alpha {
                        rules.push(FloodRule::heuristic(alpha)?);
                    }
                }
            }
        }
        Ok(rules)
    }

    /// File values, then the full-scale preset, then explicit flags.
    fn sweep_config(&self) -> anyhow::Result<SweepConfig> {
        let mut config = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => SweepConfig::default(),
        };
        if let Some(model) = self.model {
            config.family = match model {
                ModelArg::Poisson => ModelFamily::Poisson,
                ModelArg::PowerLaw => ModelFamily::PowerLaw,
            };
        }
        match (self.z.is_empty(), self.tau.is_empty()) {
            (false, false) => bail!("give either --z or --tau, not both"),
            (false, true) => {
                if self.model.is_none() {
                    config.family = ModelFamily::Poisson;
                } else if config.family != ModelFamily::Poisson {
                    bail!("--z applies to the poisson model");
                }
                config.grid = self.z.clone();
            }
            (true, false) => {
                if self.model.is_none() {
                    config.family = ModelFamily::PowerLaw;
                } else if config.family != ModelFamily::PowerLaw {
                    bail!("--tau applies to the power-law model");
                }
                config.grid = self.tau.clone();
            }
            (true, true) => {}
        }
        if self.full_scale {
            config = config.full_scale();
        }
        let rules = self.rules()?;
        if !rules.is_empty() {
            config.rules = rules;
        }
        if let Some(n) = self.n {
            config.n = n;
        }
        if let Some(g) = self.graphs {
            config.graphs = g;
        }
        if let Some(i) = self.instances {
            config.instances = i;
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(out) = &self.out {
            config.out = Some(out.clone());
        }
        if let Some(format) = self.format {
            config.format = match format {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Json => OutputFormat::Json,
            };
        }
        if self.max_degree.is_some() {
            config.max_degree = self.max_degree;
        }
        config.allow_subcritical |= self.allow_subcritical;
        config.validate()?;
        Ok(config)
    }
}

fn open_output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn failures(rows: &[SweepRow]) -> Vec<serde_json::Value> {
    rows.iter()
        .filter_map(|r| {
            r.error.as_ref().map(|e| {
                json!({
                    "family": r.family,
                    "param": r.param,
                    "rule": r.rule,
                    "rule_param": r.rule_param,
                    "message": e,
                })
            })
        })
        .collect()
}

enum Failure {
    Points(Vec<serde_json::Value>),
    Fatal(anyhow::Error),
}

fn execute(command: &Command) -> Result<Vec<serde_json::Value>, anyhow::Error> {
    match command {
        Command::Analyze(common) | Command::Sweep(common) => {
            let config = common.sweep_config()?;
            let rows = if matches!(command, Command::Analyze(_)) {
                analyze_grid(&config)?
            } else {
                run_sweep(&config)?
            };
            write_rows(&rows, config.format, open_output(config.out.as_deref())?)?;
            Ok(failures(&rows))
        }
        Command::Simulate { common, dump_graph } => {
            let mut config = common.sweep_config()?;
            if config.grid.len() != 1 || config.rules.len() != 1 {
                bail!("simulate takes one model parameter and one rule");
            }
            config.graphs = 1;
            if let Some(path) = dump_graph {
                let model = config.model_at(config.grid[0])?;
                let graph = point_graph(&config, 0, 0, &model)?;
                let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
                let mut out = BufWriter::new(file);
                graph.write_edge_list(&mut out)?;
                out.flush()?;
            }
            let rows = run_sweep(&config)?;
            write_rows(&rows, config.format, open_output(config.out.as_deref())?)?;
            Ok(failures(&rows))
        }
        Command::Compare(common) => {
            let mut config = common.sweep_config()?;
            if !config.rules.iter().any(|r| matches!(r, FloodRule::Heuristic { .. })) {
                config.rules = vec![FloodRule::heuristic(0.99)?];
            }
            let pairs = run_comparison(&config)?;
            let rows = comparison_rows(&pairs);
            let out = open_output(config.out.as_deref())?;
            match config.format {
                OutputFormat::Csv => write_rows(&rows, OutputFormat::Csv, out)?,
                OutputFormat::Json => write_json(&pairs, out)?,
            }
            Ok(failures(&rows))
        }
    }
}

fn common(command: &Command) -> &Common {
    match command {
        Command::Analyze(c) | Command::Sweep(c) | Command::Compare(c) => c,
        Command::Simulate { common, .. } => common,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let strict = common(&cli.command).strict;
    let result = match execute(&cli.command) {
        Ok(points) if points.is_empty() || !strict => Ok(()),
        Ok(points) => Err(Failure::Points(points)),
        Err(err) => Err(Failure::Fatal(err)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Points(points)) => {
            let record = json!({ "error": "failed_points", "failures": points });
            eprintln!("{record}");
            ExitCode::from(2)
        }
        Err(Failure::Fatal(err)) => {
            if strict {
                eprintln!("{}", json!({ "error": "fatal", "message": format!("{err:#}") }));
            } else {
                eprintln!("error: {err:#}");
            }
            ExitCode::FAILURE
        }
    }
}
