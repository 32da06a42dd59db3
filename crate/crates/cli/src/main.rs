use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use osn_cli::{RunConfig, BUNDLE_FILE};
use osn_core::synth::SynthConfig;

#[derive(Parser)]
#[command(
    name = "osn",
    version,
    about = "Blogroll enrichment and evaluation pipeline"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Blog posts, one {"user", "resource"} object per line.
    #[arg(long, global = true)]
    posts: Option<PathBuf>,
    /// Tag assignments, one {"user", "tag", "resource"} object per line.
    #[arg(long, global = true)]
    assignments: Option<PathBuf>,
    /// Blogroll edges, one {"source", "target"} object per line.
    #[arg(long, global = true)]
    blogroll: Option<PathBuf>,
    /// Known track labels, one per line. Posts about other resources are dropped.
    #[arg(long, global = true)]
    dictionary: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = osn_core::DEFAULT_TAG_CAP)]
    tag_cap: usize,
    /// Size of the optimal blogrolls.
    #[arg(long, global = true, default_value_t = osn_core::DEFAULT_K)]
    k: usize,
    #[arg(long, global = true, default_value_t = osn_core::DEFAULT_BIN_WIDTH)]
    bin_width: f64,
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Drop blogroll edges whose endpoints never posted instead of adding them.
    #[arg(long, global = true)]
    strict: bool,
    /// Worker threads for the similarity matrix.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic dataset with planted communities.
    Synth {
        /// Defaults to the fixture seed, or the seed in --config.
        #[arg(long)]
        seed: Option<u64>,
        /// Generator settings as JSON, in the format of the written manifest.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Join posts with tag assignments.
    Enrich,
    /// Build track and tag profiles.
    Profiles,
    /// Compute similarities and optimal blogrolls from stored profiles.
    Similarity,
    /// Compare explicit and optimal blogrolls.
    Evaluate,
    /// Structural statistics of the blogroll graph.
    Stats,
    /// Write the explorer bundle from earlier outputs.
    ExportBundle,
    /// Run every stage from enrich to export-bundle.
    Run,
    /// Serve a bundle over HTTP.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Defaults to bundle.json in the output directory.
        #[arg(long)]
        bundle: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<()> {
    let cfg = RunConfig {
        posts: cli.posts,
        assignments: cli.assignments,
        blogroll: cli.blogroll,
        dictionary: cli.dictionary,
        tag_cap: cli.tag_cap,
        k: cli.k,
        bin_width: cli.bin_width,
        out: cli.out,
        strict: cli.strict,
        workers: cli.workers.unwrap_or_else(osn_cli::default_workers),
    };
    match cli.command {
        Command::Synth { seed, config } => {
            let mut sc = match config {
                Some(p) => {
                    let text = std::fs::read_to_string(&p)
                        .with_context(|| format!("reading {}", p.display()))?;
                    serde_json::from_str(&text)
                        .with_context(|| format!("parsing {}", p.display()))?
                }
                None => SynthConfig::fixture(),
            };
            if let Some(seed) = seed {
                sc.seed = seed;
            }
            osn_cli::cmd_synth(&sc, &cfg.out)
        }
        Command::Enrich => osn_cli::cmd_enrich(&cfg),
        Command::Profiles => osn_cli::cmd_profiles(&cfg),
        Command::Similarity => osn_cli::cmd_similarity(&cfg),
        Command::Evaluate => {
            let r = osn_cli::cmd_evaluate(&cfg)?;
            let f = |v: Option<f64>, digits: usize| {
                v.map_or("n/a".to_owned(), |x| format!("{x:.digits$}"))
            };
            for (name, q) in [("track", &r.track), ("tag", &r.tag)] {
                println!(
                    "{name:<6} AvgSim(B) {}  AvgSim(B*) {}  improvement {}%",
                    f(q.avg_sim_explicit, 3),
                    f(q.avg_sim_optimal, 3),
                    f(q.improvement_percent, 0)
                );
            }
            Ok(())
        }
        Command::Stats => {
            let s = osn_cli::cmd_stats(&cfg)?;
            println!(
                "{} nodes, {} edges, {} weak components, {} reciprocal pairs",
                s.nodes, s.edges, s.weak_components, s.reciprocal_pairs
            );
            Ok(())
        }
        Command::ExportBundle => {
            let p = osn_cli::cmd_export_bundle(&cfg)?;
            println!("{}", p.display());
            Ok(())
        }
        Command::Run => {
            let p = osn_cli::cmd_run(&cfg)?;
            println!("{}", p.display());
            Ok(())
        }
        Command::Serve { port, host, bundle } => {
            let path = bundle.unwrap_or_else(|| cfg.out.join(BUNDLE_FILE));
            osn_cli::serve::serve(&path, SocketAddr::new(host, port))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
