//! File formats written and read by the subcommands: graph files, CSV
//! tables, dataset directories and model checkpoints.

use crate::CliError;
use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::{Path, PathBuf};
use trisig::analysis::{AnalysisError, MetricsReport};
use trisig::dataset::{BinaryDataset, Sample, FOLDS};
use trisig::graph::{GenerateError, GrowthProfile, PachnerGraph, SeedRecord};
use trisig::isosig::IsoSig;
use trisig::mlp::{CvReport, MlpConfig, MlpModel, SaliencyReport};

pub fn write_graph(path: &Path, g: &PachnerGraph) -> Result<(), CliError> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    trisig::graph::export(g, &mut file)?;
    file.flush()?;
    Ok(())
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::io(format!("serialising {}: {e}", path.display())))?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn write_growth_csv(path: &Path, profile: &GrowthProfile) -> Result<(), CliError> {
    let mut out = String::from("depth,nodes_at_depth,cumulative_nodes,density\n");
    for d in 0..profile.nodes_per_depth.len() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            d, profile.nodes_per_depth[d], profile.cumulative_nodes[d], profile.densities[d]
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn lengths_csv(hist: &BTreeMap<usize, usize>) -> String {
    let mut out = String::from("length,count\n");
    for (len, count) in hist {
        out.push_str(&format!("{len},{count}\n"));
    }
    out
}

fn cycle_basis_field(hist: &[(usize, usize)]) -> String {
    hist.iter()
        .map(|(l, f)| format!("{l}:{f}"))
        .collect::<Vec<_>>()
        .join(";")
}

type CensusRecord = SeedRecord<Result<(MetricsReport, u16), AnalysisError>>;

pub fn write_census_csv(path: &Path, records: &[CensusRecord]) -> Result<(), CliError> {
    let mut out = String::from(
        "isosig,status,depth,nodes,edges,density,triangle_clustering,square_clustering,\
         wiener_full,wiener_normalized,centrality_argmax,centrality_range,cycle_basis,\
         min_tet_index,min_tet_count,avg_tet_count\n",
    );
    for r in records {
        match &r.result {
            Ok(Ok((m, depth))) => {
                out.push_str(&format!(
                    "{},ok,{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    r.seed,
                    depth,
                    m.node_count,
                    m.edge_count,
                    m.density,
                    m.triangle_clustering,
                    m.square_clustering,
                    m.wiener_full,
                    m.wiener_normalized,
                    m.centrality_argmax_index,
                    m.centrality_range,
                    cycle_basis_field(&m.cycle_basis_histogram),
                    m.min_tet_index,
                    m.min_tet_count,
                    m.avg_tet_count
                ));
            }
            Ok(Err(e)) => out.push_str(&format!("{},analysis-error: {e},,,,,,,,,,,,,,\n", r.seed)),
            Err(GenerateError::Budget {
                completed_depth, ..
            }) => out.push_str(&format!(
                "{},budget-exceeded-at-depth-{completed_depth},,,,,,,,,,,,,,\n",
                r.seed
            )),
            Err(e) => out.push_str(&format!("{},error: {e},,,,,,,,,,,,,,\n", r.seed)),
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Node counts of the successful rows of a census summaries file.
pub fn read_census_sizes(path: &Path) -> Result<Vec<(String, usize)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 4 || fields[1] != "ok" {
            continue;
        }
        let nodes: usize = fields[3]
            .parse()
            .map_err(|_| CliError::validation(format!("line {}: bad node count", i + 1)))?;
        out.push((fields[0].to_owned(), nodes));
    }
    Ok(out)
}

#[derive(Clone, Copy)]
pub struct InvariantRow {
    pub volume: f64,
    pub systole: f64,
    pub cusps: u32,
}

/// Reads the `isosig,volume,systole,cusps` table.
pub fn read_invariants(path: &Path) -> Result<HashMap<String, InvariantRow>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let mut out = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if i == 0 && line.starts_with("isosig") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(CliError::validation(format!(
                "{}: line {} needs `isosig,volume,systole,cusps`",
                path.display(),
                i + 1
            )));
        }
        let parse = |s: &str, what: &str| -> Result<f64, CliError> {
            s.trim().parse().map_err(|_| {
                CliError::validation(format!("{}: line {}: bad {what}", path.display(), i + 1))
            })
        };
        out.insert(
            fields[0].trim().to_owned(),
            InvariantRow {
                volume: parse(fields[1], "volume")?,
                systole: parse(fields[2], "systole")?,
                cusps: parse(fields[3], "cusps")? as u32,
            },
        );
    }
    Ok(out)
}

pub fn write_scatter_csv(
    path: &Path,
    rows: &[(String, f64, f64, u32, usize)],
) -> Result<(), CliError> {
    let mut out = String::from("isosig,volume,systole,cusps,nodes\n");
    for (sig, vol, sys, cusps, nodes) in rows {
        out.push_str(&format!("{sig},{vol},{sys},{cusps},{nodes}\n"));
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn write_mean_degree_csv(
    path: &Path,
    mean: &BTreeMap<usize, f64>,
) -> Result<(), CliError> {
    let mut out = String::from("degree,mean_frequency\n");
    for (deg, freq) in mean {
        out.push_str(&format!("{deg},{freq}\n"));
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn write_dataset(dir: &Path, ds: &BinaryDataset) -> Result<(), CliError> {
    let mut csv = String::from("isosig,label\n");
    for s in &ds.samples {
        csv.push_str(&format!("{},{}\n", s.sig, s.label));
    }
    std::fs::write(dir.join("dataset.csv"), csv)?;
    let sidecar = serde_json::json!({
        "rng_seed": ds.rng_seed,
        "length": ds.len,
        "class_names": ds.class_names,
        "folds": ds.folds,
    });
    std::fs::write(
        dir.join("folds.json"),
        serde_json::to_string_pretty(&sidecar).expect("folds serialise"),
    )?;
    Ok(())
}

pub fn read_dataset(dir: &Path) -> Result<BinaryDataset, CliError> {
    let csv_path = dir.join("dataset.csv");
    let text = std::fs::read_to_string(&csv_path)
        .map_err(|e| CliError::io(format!("{}: {e}", csv_path.display())))?;
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let (sig, label) = line
            .split_once(',')
            .ok_or_else(|| CliError::validation(format!("dataset.csv line {}: bad row", i + 1)))?;
        let sig = IsoSig::parse(sig.trim())
            .map_err(|e| CliError::validation(format!("dataset.csv line {}: {e}", i + 1)))?;
        let label: u8 = label.trim().parse().map_err(|_| {
            CliError::validation(format!("dataset.csv line {}: bad label", i + 1))
        })?;
        if label > 1 {
            return Err(CliError::validation(format!(
                "dataset.csv line {}: label must be 0 or 1",
                i + 1
            )));
        }
        samples.push(Sample { sig, label });
    }
    let folds_path = dir.join("folds.json");
    let text = std::fs::read_to_string(&folds_path)
        .map_err(|e| CliError::io(format!("{}: {e}", folds_path.display())))?;
    let sidecar: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("folds.json: {e}")))?;
    let rng_seed = sidecar["rng_seed"]
        .as_u64()
        .ok_or_else(|| CliError::validation("folds.json: missing rng_seed".into()))?;
    let len = sidecar["length"]
        .as_u64()
        .ok_or_else(|| CliError::validation("folds.json: missing length".into()))?
        as usize;
    let names: Vec<String> = serde_json::from_value(sidecar["class_names"].clone())
        .map_err(|e| CliError::validation(format!("folds.json class_names: {e}")))?;
    let folds_vec: Vec<Vec<usize>> = serde_json::from_value(sidecar["folds"].clone())
        .map_err(|e| CliError::validation(format!("folds.json folds: {e}")))?;
    if names.len() != 2 || folds_vec.len() != FOLDS {
        return Err(CliError::validation(
            "folds.json: need 2 class names and 5 folds".into(),
        ));
    }
    let mut folds: [Vec<usize>; FOLDS] = Default::default();
    for (i, f) in folds_vec.into_iter().enumerate() {
        for &idx in &f {
            if idx >= samples.len() {
                return Err(CliError::validation(
                    "folds.json: fold index out of range".into(),
                ));
            }
        }
        folds[i] = f;
    }
    Ok(BinaryDataset {
        samples,
        class_names: [names[0].clone(), names[1].clone()],
        len,
        rng_seed,
        folds,
    })
}

pub fn write_train_outputs(
    dir: &Path,
    ds: &BinaryDataset,
    report: &CvReport,
    models: &[MlpModel],
    cfg: &MlpConfig,
) -> Result<(), CliError> {
    let seeds: Vec<u64> = (0..models.len() as u64)
        .map(|f| cfg.rng_seed.wrapping_add(f))
        .collect();
    let doc = serde_json::json!({
        "pair": ds.class_names,
        "accuracy_mean": report.accuracy_mean,
        "accuracy_std": report.accuracy_std,
        "mcc_mean": report.mcc_mean,
        "mcc_std": report.mcc_std,
        "folds": report.folds,
        "seeds": seeds,
    });
    std::fs::write(
        dir.join("report.json"),
        serde_json::to_string_pretty(&doc).expect("report serialises"),
    )?;

    let mut curve = String::from("epoch,fold,train_loss,train_accuracy,val_loss,val_accuracy\n");
    for (fold, model) in models.iter().enumerate() {
        for h in &model.history {
            curve.push_str(&format!(
                "{},{},{},{},{},{}\n",
                h.epoch,
                fold,
                h.train_loss,
                h.train_accuracy,
                h.val_loss.map(|v| v.to_string()).unwrap_or_default(),
                h.val_accuracy.map(|v| v.to_string()).unwrap_or_default(),
            ));
        }
    }
    std::fs::write(dir.join("training_curve.csv"), curve)?;

    let models_dir = dir.join("models");
    std::fs::create_dir_all(&models_dir)?;
    for (fold, model) in models.iter().enumerate() {
        write_json(&models_dir.join(format!("fold_{fold}.json")), model)?;
    }
    Ok(())
}

/// Loads checkpoints from a train output directory (or its `models`
/// subdirectory), in fold order.
pub fn read_models(dir: &Path) -> Result<Vec<MlpModel>, CliError> {
    let dir: PathBuf = if dir.join("models").is_dir() {
        dir.join("models")
    } else {
        dir.to_path_buf()
    };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| CliError::io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| {
            p.file_name()
                .map(|n| {
                    let n = n.to_string_lossy();
                    n.starts_with("fold_") && n.ends_with(".json")
                })
                .unwrap_or(false)
        })
        .collect();
    paths.sort();
    let mut models = Vec::new();
    for p in paths {
        let text = std::fs::read_to_string(&p)
            .map_err(|e| CliError::io(format!("{}: {e}", p.display())))?;
        let model: MlpModel = serde_json::from_str(&text)
            .map_err(|e| CliError::validation(format!("{}: {e}", p.display())))?;
        models.push(model);
    }
    Ok(models)
}

pub fn write_saliency(dir: &Path, report: &SaliencyReport) -> Result<(), CliError> {
    let mut matrix = String::new();
    for row in 0..report.len {
        let cells: Vec<String> = (0..trisig::dataset::ALPHABET_SIZE)
            .map(|col| report.matrix[row * trisig::dataset::ALPHABET_SIZE + col].to_string())
            .collect();
        matrix.push_str(&cells.join(","));
        matrix.push('\n');
    }
    std::fs::write(dir.join("saliency_matrix.csv"), matrix)?;

    let mut letters = String::from("alphabet_index,character,count\n");
    for (i, count) in report.letter_histogram.iter().enumerate() {
        letters.push_str(&format!(
            "{},{},{}\n",
            i,
            trisig::isosig::alphabet_encode(i as u8),
            count
        ));
    }
    std::fs::write(dir.join("letter_histogram.csv"), letters)?;

    let mut positions = String::from("position,count\n");
    for (i, count) in report.position_histogram.iter().enumerate() {
        positions.push_str(&format!("{i},{count}\n"));
    }
    std::fs::write(dir.join("position_histogram.csv"), positions)?;
    Ok(())
}
