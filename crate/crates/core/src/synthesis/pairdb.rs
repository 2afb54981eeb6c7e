use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use log::{debug, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{graph_from_result, render_synthetic, FillMode};
use crate::error::{Error, Result};
use crate::features::report::{sha256_hex, ParamsRecord, ResultDocument};
use crate::features::{extract, PipelineParams};
use crate::imaging::pnm::{decode_gray, encode_pgm};
use crate::imaging::Preprocess;

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct PairDbConfig {
    pub pipeline: PipelineParams,
    pub preprocess: Preprocess,
    pub fill: FillMode,
    /// Worker threads; `None` uses the available parallelism.
    pub workers: Option<usize>,
}

impl Default for PairDbConfig {
    fn default() -> Self {
        Self {
            pipeline: PipelineParams::default(),
            preprocess: Preprocess::default(),
            fill: FillMode::Solid,
            workers: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestParams {
    pub pipeline: ParamsRecord,
    pub fill: String,
}

/// One original/synthetic pair. File names are relative to the output
/// directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairEntry {
    pub source: String,
    pub original: String,
    pub synthetic: String,
    pub result: String,
    pub sha256_source: String,
    pub sha256_synthetic: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorEntry {
    pub source: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: u32,
    pub params: ManifestParams,
    pub pairs: Vec<PairEntry>,
    pub errors: Vec<ErrorEntry>,
}

impl Manifest {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Output stem: the file name without its final extension.
fn stem_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "input".to_string())
}

struct Artifacts {
    entry: PairEntry,
    files: Vec<(PathBuf, Vec<u8>)>,
}

fn process_one(
    path: &Path,
    cfg: &PairDbConfig,
    out_dir: &Path,
) -> std::result::Result<Artifacts, String> {
    let source = path.display().to_string();
    let raw = fs::read(path).map_err(|e| format!("cannot read {source}: {e}"))?;
    let gray = decode_gray(&raw).map_err(|e| format!("malformed image {source}: {e}"))?;
    let binary = cfg.preprocess.apply(&gray).map_err(|e| e.to_string())?;
    let result = extract(&binary, &cfg.pipeline).map_err(|e| e.to_string())?;
    let graph = graph_from_result(&result);
    let synthetic = render_synthetic(&graph, cfg.fill).map_err(|e| e.to_string())?;

    let sha_source = sha256_hex(&raw);
    let doc = ResultDocument::new(
        &result,
        &cfg.pipeline,
        Some(&cfg.preprocess),
        Some(source.clone()),
        Some(sha_source.clone()),
    );
    let json = doc.to_json().map_err(|e| e.to_string())?;
    let original_pgm = encode_pgm(&binary.to_gray());
    let synthetic_pgm = encode_pgm(&synthetic.to_gray());

    let stem = stem_of(path);
    let entry = PairEntry {
        source,
        original: format!("{stem}.original.pgm"),
        synthetic: format!("{stem}.synthetic.pgm"),
        result: format!("{stem}.result.json"),
        sha256_source: sha_source,
        sha256_synthetic: sha256_hex(&synthetic_pgm),
    };
    let files = vec![
        (out_dir.join(&entry.original), original_pgm),
        (out_dir.join(&entry.synthetic), synthetic_pgm),
        (out_dir.join(&entry.result), json.into_bytes()),
    ];
    Ok(Artifacts { entry, files })
}

/// Extracts every input, renders its synthetic twin and writes the pair plus
/// `manifest.json` under `out_dir`.
///
/// Per-file failures are recorded in the manifest and do not stop the run;
/// failing to write into `out_dir` is fatal. Inputs are processed in sorted
/// path order, so the manifest is identical for any worker count.
pub fn build_pair_db(inputs: &[PathBuf], cfg: &PairDbConfig, out_dir: &Path) -> Result<Manifest> {
    cfg.pipeline.validate()?;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let sorted: Vec<PathBuf> = inputs
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut seen = BTreeSet::new();
    let unique: Vec<bool> = sorted.iter().map(|p| seen.insert(stem_of(p))).collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<std::result::Result<Artifacts, String>> = pool.install(|| {
        sorted
            .par_iter()
            .zip(unique.par_iter())
            .map(|(path, &unique)| {
                if !unique {
                    return Err(format!(
                        "output stem {:?} of {} collides with an earlier input",
                        stem_of(path),
                        path.display()
                    ));
                }
                debug!("pairing {}", path.display());
                process_one(path, cfg, out_dir)
            })
            .collect()
    });

    let mut manifest = Manifest {
        version: MANIFEST_VERSION,
        params: ManifestParams {
            pipeline: ParamsRecord::new(&cfg.pipeline, Some(&cfg.preprocess)),
            fill: cfg.fill.to_string(),
        },
        pairs: Vec::new(),
        errors: Vec::new(),
    };
    for (path, outcome) in sorted.iter().zip(outcomes) {
        match outcome {
            Ok(art) => {
                for (file, bytes) in &art.files {
                    fs::write(file, bytes).map_err(|e| Error::io(file, e))?;
                }
                manifest.pairs.push(art.entry);
            }
            Err(error) => {
                warn!("{error}");
                manifest.errors.push(ErrorEntry {
                    source: path.display().to_string(),
                    error,
                });
            }
        }
    }
    let manifest_path = out_dir.join("manifest.json");
    fs::write(&manifest_path, manifest.to_json()?).map_err(|e| Error::io(&manifest_path, e))?;
    Ok(manifest)
}
