use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use wos_core::analysis::SyntheticFunctional;
use wos_core::engine::{Method, PointKind, Variant};
use wos_harness::config::{parse_fraction, parse_list};
use wos_harness::ExperimentConfig;

#[derive(Parser)]
#[command(name = "wos", version, about = "Walk-on-spheres solvers under MC, RQMC and array-RQMC sampling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run replicates and write results.csv.
    Run(ExpArgs),
    /// Variance/MSE rates and reduction factors from a results CSV.
    Rates {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Exact solution; enables MSE columns.
        #[arg(long)]
        exact: Option<f64>,
    },
    /// Kolmogorov-Smirnov distance of exit angles on the unit disk.
    Ks(ExpArgs),
    /// Vector-wise Sobol' indices and partial mean dimension.
    Sobol {
        #[command(flatten)]
        exp: ExpArgs,
        /// Replace the walk by a functional of known mean dimension.
        #[arg(long, value_enum)]
        synthetic: Option<Synthetic>,
    },
    /// Write a built-in scene as a scene file.
    ExportScene {
        name: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Synthetic {
    Additive,
    Product,
}

#[derive(Args)]
struct ExpArgs {
    /// JSON experiment config; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in scene name or scene-file path.
    #[arg(long)]
    scene: Option<String>,
    /// Start point, comma-separated.
    #[arg(long)]
    z0: Option<String>,
    /// Comma-separated: mc, rqmc, array-rqmc, array-mc.
    #[arg(long)]
    method: Option<String>,
    /// Comma-separated: sobol, lattice, fibonacci, ...
    #[arg(long)]
    points: Option<String>,
    /// Comma-separated sample sizes (powers of two).
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Take exactly this many steps per walk.
    #[arg(long)]
    fixed_k: Option<usize>,
    #[arg(long)]
    max_steps: Option<usize>,
    /// Draw all steps from one large point set.
    #[arg(long)]
    one_large_set: bool,
    #[arg(long)]
    threads: Option<usize>,
    /// Start abscissae for the KS study, e.g. "1/3,1/2".
    #[arg(long)]
    t: Option<String>,
    /// Columns for the mean-dimension study.
    #[arg(long)]
    k_prime: Option<usize>,
}

impl ExpArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = &self.scene {
            c.scene = s.clone();
        }
        if let Some(z) = &self.z0 {
            c.z0 = Some(parse_list(z, |s| Ok(s.parse::<f64>()?))?);
        }
        if let Some(m) = &self.method {
            c.methods = parse_list(m, |s| Ok(Method::parse(s)?))?;
        }
        if let Some(p) = &self.points {
            c.points = parse_list(p, |s| Ok(PointKind::parse(s)?))?;
        }
        if let Some(n) = &self.n {
            c.n = parse_list(n, |s| Ok(s.parse::<usize>()?))?;
        }
        if let Some(v) = &self.variant {
            c.variant = Variant::parse(v)?;
        }
        if let Some(t) = &self.t {
            c.t = parse_list(t, parse_fraction)?;
        }
        c.reps = self.reps.unwrap_or(c.reps);
        c.eps = self.eps.or(c.eps);
        c.seed = self.seed.unwrap_or(c.seed);
        c.out = self.out.clone().unwrap_or(c.out);
        c.fixed_k = self.fixed_k.or(c.fixed_k);
        c.max_steps = self.max_steps.or(c.max_steps);
        c.one_large_set |= self.one_large_set;
        c.threads = self.threads.or(c.threads);
        c.k_prime = self.k_prime.unwrap_or(c.k_prime);
        c.validate()?;
        Ok(c)
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(a) => {
            let path = wos_harness::cmd_run(&a.resolve()?)?;
            println!("wrote {}", path.display());
        }
        Command::Rates { input, out, exact } => {
            wos_harness::cmd_rates(&input, &out, exact)?;
            print!("{}", std::fs::read_to_string(out.join("rates_table.txt"))?);
        }
        Command::Ks(a) => {
            let cfg = a.resolve()?;
            let rows = wos_harness::cmd_ks(&cfg)?;
            println!("wrote {} rows to {}", rows.len(), cfg.out.join("ks.csv").display());
        }
        Command::Sobol { exp, synthetic } => {
            let cfg = exp.resolve()?;
            let f = synthetic.map(|s| match s {
                Synthetic::Additive => SyntheticFunctional::Additive,
                Synthetic::Product => SyntheticFunctional::Product,
            });
            wos_harness::cmd_sobol(&cfg, f)?;
            print!("{}", std::fs::read_to_string(cfg.out.join("sobol_table.txt"))?);
        }
        Command::ExportScene { name, output } => {
            let path = output.unwrap_or_else(|| PathBuf::from(format!("{name}.json")));
            wos_harness::cmd_export_scene(&name, &path)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
