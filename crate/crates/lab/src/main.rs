use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qdist_core::discriminators::{separation_bounds, ClassicalTest, Label};
use qdist_core::distributions::{generate, metrics, stream_rng, ProbDist};
use qdist_lab::config::{CertificateConfig, GarbageConfig, GarbageKindName, QuantumConfig};
use qdist_lab::experiment::{hidden_for_seed, quantum_instance, run_quantum};
use qdist_lab::family::{FamilySpec, PairFile};
use qdist_lab::report::{to_toml, CertificateReport, WitnessReport};
use qdist_lab::{fit_scaling, render_svg, run_experiment, Algorithm, ExperimentConfig, LabError, ModelName, Result};

#[derive(Parser)]
#[command(name = "qdist", version, about = "Distinguish two distributions in the query model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print distance metrics of a pair.
    Dist {
        #[command(flatten)]
        pair: PairArgs,
        /// Also write the pair to this file.
        #[arg(long)]
        write_pair: Option<PathBuf>,
    },
    /// One discrimination run.
    Simulate {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_enum, default_value = "iii")]
        model: ModelName,
        #[arg(long, value_enum, default_value = "quantum")]
        algo: Algorithm,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = QuantumConfig::default().epsilon)]
        epsilon: f64,
        #[arg(long, default_value_t = QuantumConfig::default().kappa)]
        kappa: f64,
        #[arg(long, default_value_t = QuantumConfig::default().rounds)]
        rounds: usize,
        /// Hidden label; defaults to P for even seeds and Q for odd ones.
        #[arg(long, value_enum)]
        hidden: Option<HiddenArg>,
        #[command(flatten)]
        garbage: GarbageArgs,
        /// String length for models i and ii.
        #[arg(long, default_value_t = 20)]
        length: usize,
        /// Classical calibration error target.
        #[arg(long, default_value_t = 0.1)]
        error_target: f64,
    },
    /// Build the adversary witness and report its residuals.
    Witness {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        garbage: GarbageArgs,
        /// Seed of Haar garbage.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build the lower-bound certificate and report its checks.
    Lowerbound {
        #[command(flatten)]
        pair: PairArgs,
        /// String length of the tensor check; 0 skips it.
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = CertificateConfig::default().s_p)]
        sp: f64,
        #[arg(long, default_value_t = CertificateConfig::default().s_q)]
        sq: f64,
    },
    /// Constrained and unconstrained bounds on the tiered family for t = 1..=T.
    Sep {
        #[arg(long, default_value_t = 6)]
        t: u32,
    },
    /// Run an experiment configuration.
    Experiment { config: PathBuf },
    /// Render an experiment CSV as SVG.
    Plot {
        csv: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PairArgs {
    /// collision:N, tiered:T or bernoulli:P:Q.
    #[arg(long, default_value = "collision:4", conflicts_with = "pair")]
    family: FamilySpec,
    /// TOML file with arrays `p` and `q`.
    #[arg(long)]
    pair: Option<PathBuf>,
}

impl PairArgs {
    fn dists(&self) -> Result<(ProbDist, ProbDist)> {
        match &self.pair {
            Some(path) => PairFile::load(path)?.dists(),
            None => Ok(generate(&self.family.0)?),
        }
    }
}

#[derive(Args)]
struct GarbageArgs {
    #[arg(long, value_enum, default_value = "trivial")]
    garbage: GarbageKindName,
    #[arg(long, default_value_t = 1)]
    garbage_dim: usize,
}

impl GarbageArgs {
    fn config(&self) -> GarbageConfig {
        GarbageConfig { kind: self.garbage, dim: self.garbage_dim }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum HiddenArg {
    #[value(name = "P")]
    P,
    #[value(name = "Q")]
    Q,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}

/// Returns whether every verified fact held.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Dist { pair, write_pair } => {
            let (p, q) = pair.dists()?;
            let m = metrics(&p, &q)?;
            println!("alphabet = {}", p.alphabet_size());
            println!("hellinger = {}", m.hellinger);
            println!("bhattacharyya = {}", m.bhattacharyya);
            println!("angle = {}", m.angle);
            println!("mu_distance = {}", m.mu_distance);
            if let Some(path) = write_pair {
                PairFile::from_dists(&p, &q).save(&path)?;
            }
            Ok(true)
        }
        Command::Simulate { pair, model, algo, seed, epsilon, kappa, rounds, hidden, garbage, length, error_target } => {
            let (p, q) = pair.dists()?;
            let hidden = match hidden {
                Some(HiddenArg::P) => Label::P,
                Some(HiddenArg::Q) => Label::Q,
                None => hidden_for_seed(seed),
            };
            let quantum = QuantumConfig { epsilon, kappa, rounds };
            quantum.params().validate()?;
            let mut rng = stream_rng(seed, 0);
            let (decision, cost, unit) = match algo {
                Algorithm::Classical => {
                    let t = ClassicalTest::calibrate(&p, &q, error_target, 2000, 0)?;
                    let out = t.run(if hidden == Label::P { &p } else { &q }, &mut rng);
                    (out.decision, out.samples_used, "samples")
                }
                _ => {
                    let mut inst =
                        quantum_instance(&p, &q, model, &garbage.config(), length, seed, hidden, &mut rng)?;
                    let out = run_quantum(&mut inst, model, algo, &quantum, &mut rng)?;
                    (out.decision, out.queries_used, "queries")
                }
            };
            println!("hidden = {hidden}");
            println!("decision = {decision}");
            println!("correct = {}", decision == hidden);
            println!("{unit} = {cost}");
            Ok(true)
        }
        Command::Witness { pair, garbage, seed } => {
            let (p, q) = pair.dists()?;
            let (gp, gq) = garbage.config().specs(seed);
            let report = WitnessReport::new(&p, &q, &gp, &gq)?;
            print!("{}", to_toml(&report));
            Ok(report.verified)
        }
        Command::Lowerbound { pair, n, sp, sq } => {
            let (p, q) = pair.dists()?;
            let report = CertificateReport::new(&p, &q, n, sp, sq)?;
            print!("{}", to_toml(&report));
            Ok(report.verified)
        }
        Command::Sep { t } => {
            if t == 0 {
                return Err(LabError::Config("t must be at least 1".into()));
            }
            println!("{:>3} {:>8} {:>14} {:>14} {:>14} {:>6} {:>10}", "t", "n", "alpha", "unconstrained", "constrained", "prefix", "ratio");
            for t in 1..=t {
                let b = separation_bounds(t)?;
                println!(
                    "{:>3} {:>8} {:>14.6e} {:>14.6} {:>14.6} {:>6} {:>10.6}",
                    b.t,
                    b.n,
                    b.alpha,
                    b.unconstrained,
                    b.constrained,
                    b.best_prefix,
                    b.ratio()
                );
            }
            Ok(true)
        }
        Command::Experiment { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let records = run_experiment(&cfg)?;
            let failed = records.iter().filter(|r| r.error.is_some()).count();
            println!("{} records written to {}", records.len(), cfg.csv_path().display());
            if failed > 0 {
                println!("{failed} rows carry errors");
            }
            let mut series: Vec<String> = records.iter().filter(|r| r.error.is_none()).map(|r| r.series()).collect();
            series.sort();
            series.dedup();
            for s in series {
                match fit_scaling(&records, &s) {
                    Ok(f) => println!("{s}: slope {:.3}, r2 {:.3}", f.slope, f.r2),
                    Err(e) => println!("{s}: {e}"),
                }
            }
            Ok(true)
        }
        Command::Plot { csv, output } => {
            let text = std::fs::read_to_string(&csv).map_err(|e| LabError::Io { path: csv.clone(), source: e })?;
            let svg = render_svg(&text)?;
            match output {
                Some(path) => std::fs::write(&path, svg).map_err(|e| LabError::Io { path, source: e })?,
                None => print!("{svg}"),
            }
            Ok(true)
        }
    }
}
