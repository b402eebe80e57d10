//! Command-line pipeline: graph generation, network analysis, census
//! batches, dataset construction, training and saliency, all emitting
//! plot-ready CSV and JSON.
//!
//! Exit codes: 0 success, 1 validation error, 2 resource-budget abort. On
//! failure a machine-readable JSON object is printed to stderr.

mod manifest;
mod output;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use trisig::analysis;
use trisig::dataset;
use trisig::graph::{self, Budget, GenerateError};
use trisig::isosig::{decode, encode, IsoSig};
use trisig::mlp;
use trisig::moves::MoveSet;
use trisig::sigfile;

#[derive(Parser)]
#[command(name = "trisig", version, about = "Triangulation signature pipelines")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a move graph from a seed signature.
    Generate {
        #[arg(long)]
        seed: String,
        /// Move set: `23`, `14` or `all`.
        #[arg(long, default_value = "23")]
        moves: String,
        #[arg(long)]
        depth: u16,
        #[arg(long)]
        out: PathBuf,
        /// Node budget before generation truncates.
        #[arg(long, default_value_t = 5_000_000)]
        max_nodes: usize,
    },
    /// Network metrics of a graph file.
    Analyze {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate and analyze graphs for every seed in a list file.
    Census {
        #[arg(long)]
        seeds: PathBuf,
        #[arg(long, default_value = "23")]
        moves: String,
        #[arg(long)]
        depth: u16,
        #[arg(long)]
        out: PathBuf,
        /// Shared node budget across the whole batch.
        #[arg(long, default_value_t = 5_000_000)]
        max_nodes: usize,
    },
    /// Join census summaries with an invariants table and fit the
    /// lower envelope.
    Correlate {
        /// `summaries.csv` from a census run.
        #[arg(long)]
        summaries: PathBuf,
        /// CSV with columns `isosig,volume,systole,cusps`.
        #[arg(long)]
        invariants: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Invariant column used for the fit.
        #[arg(long, default_value = "systole")]
        invariant: String,
        #[arg(long, default_value_t = 20)]
        bins: usize,
        /// Candidate lower-bound coefficient `c` in `c/sqrt(invariant)`.
        #[arg(long, default_value_t = 75.0)]
        candidate_c: f64,
    },
    /// Signature length histogram of a graph.
    Lengths {
        #[arg(long)]
        graph: PathBuf,
        /// Output directory; prints CSV to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample fixed-length signatures from a graph.
    Sample {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        rng_seed: u64,
        /// Output signature list file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Build a two-class dataset with stratified folds.
    Dataset {
        #[arg(long)]
        class_a: PathBuf,
        #[arg(long)]
        class_b: PathBuf,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        rng_seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-validate the classifier on a dataset directory.
    Train {
        #[arg(long)]
        dataset: PathBuf,
        /// Flat JSON of classifier configuration fields.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Gradient saliency of trained models over their test folds.
    Saliency {
        /// Output directory of a `train` run.
        #[arg(long)]
        models: PathBuf,
        /// Dataset directory the models were trained on.
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check encode(decode(s)) == s for every signature in a file.
    Roundtrip {
        #[arg(long)]
        isosigs: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}

/// Top-level error with the exit-code classification.
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub code: u8,
}

impl CliError {
    fn validation(message: impl Into<String>) -> CliError {
        CliError {
            kind: "validation",
            message: message.into(),
            code: 1,
        }
    }

    fn budget(message: impl Into<String>) -> CliError {
        CliError {
            kind: "budget",
            message: message.into(),
            code: 2,
        }
    }

    fn io(message: impl Into<String>) -> CliError {
        CliError {
            kind: "io",
            message: message.into(),
            code: 1,
        }
    }

    fn to_json(&self) -> String {
        serde_json::json!({ "error": self.message, "kind": self.kind }).to_string()
    }

    fn exit_code(&self) -> u8 {
        self.code
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::io(e.to_string())
    }
}

fn parse_moves(s: &str) -> Result<MoveSet, CliError> {
    match s {
        "23" => Ok(MoveSet::EXCHANGE),
        "14" => Ok(MoveSet::CONE),
        "all" => Ok(MoveSet::ALL),
        other => MoveSet::parse(other)
            .ok_or_else(|| CliError::validation(format!("unknown move set `{other}`"))),
    }
}

fn read_graph(path: &PathBuf) -> Result<trisig::graph::PachnerGraph, CliError> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    graph::import(std::io::BufReader::new(file))
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
}

fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Generate {
            seed,
            moves,
            depth,
            out,
            max_nodes,
        } => {
            let kinds = parse_moves(&moves)?;
            let mut m = manifest::Manifest::new("generate");
            m.flag("seed", &seed);
            m.flag("moves", &kinds.to_string());
            m.flag("depth", depth);
            m.flag("max-nodes", max_nodes);
            let budget = Budget::new(max_nodes);
            let (g, truncated) = match graph::generate(&seed, kinds, depth, &budget) {
                Ok(g) => (g, false),
                Err(GenerateError::Budget {
                    completed_depth,
                    partial,
                }) => {
                    eprintln!(
                        "{}",
                        serde_json::json!({
                            "warning": "node budget exceeded",
                            "completed_depth": completed_depth,
                        })
                    );
                    (*partial, true)
                }
                Err(e) => return Err(CliError::validation(e.to_string())),
            };
            std::fs::create_dir_all(&out)?;
            output::write_graph(&out.join("graph.txt"), &g)?;
            output::write_growth_csv(&out.join("growth.csv"), &g.growth_profile())?;
            m.note("truncated", truncated);
            m.write(&out)?;
            if truncated {
                return Err(CliError::budget("node budget exceeded; partial graph written"));
            }
            Ok(())
        }
        Command::Analyze { graph: gpath, out } => {
            let mut m = manifest::Manifest::new("analyze");
            m.input("graph", &gpath)?;
            let g = read_graph(&gpath)?;
            let report = analysis::metrics_report(&g)
                .map_err(|e| CliError::validation(e.to_string()))?;
            std::fs::create_dir_all(&out)?;
            output::write_json(&out.join("metrics.json"), &report)?;
            m.write(&out)?;
            Ok(())
        }
        Command::Census {
            seeds,
            moves,
            depth,
            out,
            max_nodes,
        } => {
            let kinds = parse_moves(&moves)?;
            let mut m = manifest::Manifest::new("census");
            m.input("seeds", &seeds)?;
            m.flag("moves", &kinds.to_string());
            m.flag("depth", depth);
            m.flag("max-nodes", max_nodes);
            let file = std::fs::File::open(&seeds)
                .map_err(|e| CliError::io(format!("{}: {e}", seeds.display())))?;
            let list = sigfile::read_sig_list(std::io::BufReader::new(file))
                .map_err(|e| CliError::validation(e.to_string()))?;
            let seed_strings: Vec<String> =
                list.iter().map(|s| s.as_str().to_owned()).collect();
            let budget = Budget::new(max_nodes);
            let records = graph::batch_generate(&seed_strings, kinds, depth, &budget, |g| {
                analysis::metrics_report(g).map(|r| (r, g.meta.depth))
            });
            std::fs::create_dir_all(&out)?;
            let mut degree_histograms = Vec::new();
            for r in &records {
                if let Ok(Ok((report, _))) = &r.result {
                    degree_histograms.push(report.degree_histogram.clone());
                }
            }
            output::write_census_csv(&out.join("summaries.csv"), &records)?;
            if !degree_histograms.is_empty() {
                let mean = analysis::mean_degree_distribution(&degree_histograms)
                    .map_err(|e| CliError::validation(e.to_string()))?;
                output::write_mean_degree_csv(&out.join("mean_degree_distribution.csv"), &mean)?;
            }
            m.write(&out)?;
            Ok(())
        }
        Command::Correlate {
            summaries,
            invariants,
            out,
            invariant,
            bins,
            candidate_c,
        } => {
            let mut m = manifest::Manifest::new("correlate");
            m.input("summaries", &summaries)?;
            m.input("invariants", &invariants)?;
            m.flag("invariant", &invariant);
            m.flag("bins", bins);
            m.flag("candidate-c", candidate_c);
            let sizes = output::read_census_sizes(&summaries)?;
            let table = output::read_invariants(&invariants)?;
            let mut scatter = Vec::new();
            let mut points = Vec::new();
            for (sig, nodes) in &sizes {
                if let Some(row) = table.get(sig) {
                    let inv = match invariant.as_str() {
                        "volume" => row.volume,
                        "systole" => row.systole,
                        other => {
                            return Err(CliError::validation(format!(
                                "unknown invariant column `{other}`"
                            )))
                        }
                    };
                    scatter.push((sig.clone(), row.volume, row.systole, row.cusps, *nodes));
                    points.push((inv, *nodes as f64));
                }
            }
            let fit = analysis::invariant_correlation(&points, bins, candidate_c)
                .map_err(|e| CliError::validation(e.to_string()))?;
            std::fs::create_dir_all(&out)?;
            output::write_scatter_csv(&out.join("scatter.csv"), &scatter)?;
            output::write_json(&out.join("envelope.json"), &fit)?;
            m.write(&out)?;
            Ok(())
        }
        Command::Lengths { graph: gpath, out } => {
            let g = read_graph(&gpath)?;
            let hist = dataset::length_histogram(&g);
            match out {
                None => {
                    print!("{}", output::lengths_csv(&hist));
                    Ok(())
                }
                Some(dir) => {
                    let mut m = manifest::Manifest::new("lengths");
                    m.input("graph", &gpath)?;
                    std::fs::create_dir_all(&dir)?;
                    std::fs::write(dir.join("lengths.csv"), output::lengths_csv(&hist))?;
                    m.write(&dir)?;
                    Ok(())
                }
            }
        }
        Command::Sample {
            graph: gpath,
            length,
            count,
            rng_seed,
            out,
        } => {
            let g = read_graph(&gpath)?;
            let sigs = dataset::sample_fixed_length(&g, length, count, rng_seed)
                .map_err(|e| CliError::validation(e.to_string()))?;
            if let Some(parent) = out.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            let mut buf = Vec::new();
            sigfile::write_sig_list(&mut buf, &sigs)?;
            std::fs::write(&out, buf)?;
            Ok(())
        }
        Command::Dataset {
            class_a,
            class_b,
            length,
            rng_seed,
            out,
        } => {
            let mut m = manifest::Manifest::new("dataset");
            m.input("class-a", &class_a)?;
            m.input("class-b", &class_b)?;
            m.flag("length", length);
            m.rng_seed(rng_seed);
            let read = |p: &PathBuf| -> Result<Vec<IsoSig>, CliError> {
                let f = std::fs::File::open(p)
                    .map_err(|e| CliError::io(format!("{}: {e}", p.display())))?;
                sigfile::read_sig_list(std::io::BufReader::new(f))
                    .map_err(|e| CliError::validation(e.to_string()))
            };
            let a = read(&class_a)?;
            let b = read(&class_b)?;
            let name = |p: &PathBuf| {
                p.file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "class".to_owned())
            };
            let ds = dataset::build_binary_dataset(
                &a,
                &b,
                [name(&class_a), name(&class_b)],
                length,
                rng_seed,
            )
            .map_err(|e| CliError::validation(e.to_string()))?;
            std::fs::create_dir_all(&out)?;
            output::write_dataset(&out, &ds)?;
            m.write(&out)?;
            Ok(())
        }
        Command::Train {
            dataset: dpath,
            config,
            out,
        } => {
            let mut m = manifest::Manifest::new("train");
            m.input("dataset", &dpath.join("dataset.csv"))?;
            let ds = output::read_dataset(&dpath)?;
            let mut cfg = mlp::MlpConfig::default();
            if let Some(cpath) = &config {
                m.input("config", cpath)?;
                let text = std::fs::read_to_string(cpath)
                    .map_err(|e| CliError::io(format!("{}: {e}", cpath.display())))?;
                cfg = serde_json::from_str(&text)
                    .map_err(|e| CliError::validation(format!("bad config: {e}")))?;
            }
            m.rng_seed(cfg.rng_seed);
            let (report, models) = mlp::cross_validate(&ds, &cfg)
                .map_err(|e| CliError::validation(e.to_string()))?;
            std::fs::create_dir_all(&out)?;
            output::write_train_outputs(&out, &ds, &report, &models, &cfg)?;
            m.write(&out)?;
            Ok(())
        }
        Command::Saliency {
            models: mpath,
            dataset: dpath,
            out,
        } => {
            let mut m = manifest::Manifest::new("saliency");
            m.input("dataset", &dpath.join("dataset.csv"))?;
            let ds = output::read_dataset(&dpath)?;
            let models = output::read_models(&mpath)?;
            if models.is_empty() {
                return Err(CliError::validation(format!(
                    "no model checkpoints under {}",
                    mpath.display()
                )));
            }
            // Each model's test inputs are its held-out fold.
            let encoded = ds
                .encode_all()
                .map_err(|e| CliError::validation(e.to_string()))?;
            let test_sets: Vec<Vec<Vec<f64>>> = (0..models.len())
                .map(|fold| {
                    ds.folds[fold % dataset::FOLDS]
                        .iter()
                        .map(|&i| encoded[i].clone())
                        .collect()
                })
                .collect();
            let report = mlp::gradient_saliency(&models, &test_sets, ds.len)
                .map_err(|e| CliError::validation(e.to_string()))?;
            std::fs::create_dir_all(&out)?;
            output::write_saliency(&out, &report)?;
            m.write(&out)?;
            Ok(())
        }
        Command::Roundtrip { isosigs } => {
            let f = std::fs::File::open(&isosigs)
                .map_err(|e| CliError::io(format!("{}: {e}", isosigs.display())))?;
            let sigs = sigfile::read_sig_list(std::io::BufReader::new(f))
                .map_err(|e| CliError::validation(e.to_string()))?;
            let mut failures = 0;
            for sig in &sigs {
                match decode(sig.as_str()) {
                    Ok(tri) => match encode(&tri) {
                        Ok(back) if back == *sig => println!("PASS {sig}"),
                        Ok(back) => {
                            failures += 1;
                            println!("FAIL {sig} re-encodes as {back}");
                        }
                        Err(e) => {
                            failures += 1;
                            println!("FAIL {sig} encode error: {e}");
                        }
                    },
                    Err(e) => {
                        failures += 1;
                        println!("FAIL {sig} decode error: {e}");
                    }
                }
            }
            if failures > 0 {
                Err(CliError::validation(format!(
                    "{failures} of {} signatures failed",
                    sigs.len()
                )))
            } else {
                Ok(())
            }
        }
    }
}
