//! Command-line front end: `extract`, `overlay` and `synth`.
//!
//! Every tunable resolves as flag, then `--config` file, then built-in
//! default. Exit codes: 0 success, 1 runtime failure, 2 usage error.

pub mod config;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::parser::ValueSource;
use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use log::info;
use rayon::prelude::*;

use crate::clustering::{OpticsParams, SampleConfig};
use crate::error::{Error, Result};
use crate::features::report::{sha256_hex, ResultDocument};
use crate::features::{extract, PipelineParams};
use crate::imaging::pnm::{decode_gray, write_gray};
use crate::imaging::{BinarizeConfig, MorphConfig, Polarity, Preprocess, ThresholdMethod};
use crate::synthesis::{build_pair_db, FillMode, PairDbConfig};

pub use config::ConfigFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "stroketrap",
    version,
    about = "Stroke-trapezoid features and synthetic pairs for glyph images"
)]
struct Cli {
    /// More diagnostics on stderr (repeat for more)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write one `<stem>.result.json` per input image
    Extract(ExtractArgs),
    /// Draw the densest trapezoids of a result over its source image
    Overlay(OverlayArgs),
    /// Build an original/synthetic pair database with a manifest
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct ExtractArgs {
    /// Input images, directories or glob patterns (repeatable)
    #[arg(long = "input", short = 'i')]
    input: Vec<String>,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct OverlayArgs {
    /// Source image the result was extracted from
    #[arg(long = "input", short = 'i')]
    input: Vec<String>,
    /// Result JSON written by `extract`
    #[arg(long)]
    result: Option<PathBuf>,
    /// Overlay file (`.png` or `.pgm`)
    #[arg(long, default_value = "overlay.pgm")]
    out: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Input images, directories or glob patterns (repeatable)
    #[arg(long = "input", short = 'i')]
    input: Vec<String>,
    /// Output directory for pairs and manifest.json
    #[arg(long, default_value = "pairs")]
    out: PathBuf,
    /// `solid`, `stochastic` (uses --seed) or `stochastic:<seed>`
    #[arg(long, default_value = "solid")]
    fill: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Flat `key = value` run file; keys mirror flag names
    #[arg(long)]
    config: Option<PathBuf>,
    /// OPTICS minimum points
    #[arg(long, default_value_t = 5)]
    min_pts: usize,
    /// OPTICS neighborhood radius in pixels (`inf` for unbounded)
    #[arg(long, default_value = "inf")]
    eps: f64,
    /// Share of ink pixels sampled, in (0, 1]
    #[arg(long, default_value_t = 1.0)]
    sample_fraction: f64,
    /// Seed for sampling and stochastic fill
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Radius histogram bin width in pixels
    #[arg(long, default_value_t = 1.0)]
    bin_width: f64,
    /// Reachability quantile used for the cluster cut
    #[arg(long, default_value_t = 0.75)]
    reach_quantile: f64,
    /// Multiplier applied to the reachability quantile
    #[arg(long, default_value_t = 3.0)]
    reach_factor: f64,
    /// Drop trapezoids with a smaller area (px²)
    #[arg(long, default_value_t = 4.0)]
    min_area: f64,
    /// Drop trapezoids with a lower ink density
    #[arg(long, default_value_t = 0.15)]
    min_density: f64,
    /// Trapezoids drawn in overlays (N_T)
    #[arg(long, default_value_t = 50)]
    max_trapezoids: usize,
    /// `otsu` or a fixed level 0..=255
    #[arg(long, default_value = "otsu")]
    threshold: String,
    /// Ink polarity: `dark` or `light`
    #[arg(long, default_value = "dark")]
    polarity: String,
    /// Morphology sequence such as `open,close:2` (`none` for no cleanup)
    #[arg(long, default_value = "none")]
    morph: String,
    /// Worker threads (0 = available parallelism)
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub inputs: Vec<String>,
    pub out: PathBuf,
    pub result: Option<PathBuf>,
    pub pipeline: PipelineParams,
    pub preprocess: Preprocess,
    pub fill: FillMode,
    pub workers: Option<usize>,
}

struct Resolver<'a> {
    matches: &'a ArgMatches,
    file: ConfigFile,
}

impl Resolver<'_> {
    fn on_command_line(&self, id: &str) -> bool {
        self.matches.value_source(id) == Some(ValueSource::CommandLine)
    }

    /// Flag value if given on the command line, else the file's value, else
    /// the flag default.
    fn pick<T: FromStr>(&self, id: &str, key: &str, cli: T) -> Result<T> {
        if self.on_command_line(id) {
            return Ok(cli);
        }
        match self.file.get(key) {
            Some(text) => text
                .parse()
                .map_err(|_| Error::invalid(format!("config key {key:?}: cannot parse {text:?}"))),
            None => Ok(cli),
        }
    }

    fn inputs(&self, cli: &[String]) -> Vec<String> {
        if self.on_command_line("input") {
            cli.to_vec()
        } else {
            self.file.get_all("input").to_vec()
        }
    }
}

fn resolve(
    matches: &ArgMatches,
    common: &CommonArgs,
    inputs: &[String],
    out: &Path,
    result: Option<&Path>,
    fill: Option<&str>,
) -> Result<RunConfig> {
    let file = match &common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let r = Resolver { matches, file };

    let seed: u64 = r.pick("seed", "seed", common.seed)?;
    let fraction: f64 = r.pick("sample_fraction", "sample-fraction", common.sample_fraction)?;
    let pipeline = PipelineParams {
        sample: SampleConfig::new(fraction, seed)?,
        optics: OpticsParams {
            min_pts: r.pick("min_pts", "min-pts", common.min_pts)?,
            eps: r.pick("eps", "eps", common.eps)?,
            reach_quantile: r.pick("reach_quantile", "reach-quantile", common.reach_quantile)?,
            reach_factor: r.pick("reach_factor", "reach-factor", common.reach_factor)?,
            bin_width: r.pick("bin_width", "bin-width", common.bin_width)?,
        },
        min_area: r.pick("min_area", "min-area", common.min_area)?,
        min_density: r.pick("min_density", "min-density", common.min_density)?,
        max_trapezoids: r.pick("max_trapezoids", "max-trapezoids", common.max_trapezoids)?,
    };
    pipeline.validate()?;

    let threshold: String = r.pick("threshold", "threshold", common.threshold.clone())?;
    let polarity: String = r.pick("polarity", "polarity", common.polarity.clone())?;
    let morph: String = r.pick("morph", "morph", common.morph.clone())?;
    let preprocess = Preprocess {
        binarize: BinarizeConfig {
            method: threshold.parse::<ThresholdMethod>()?,
            polarity: polarity.parse::<Polarity>()?,
        },
        morph: morph.parse::<MorphConfig>()?,
    };

    let fill = match fill {
        Some(text) => {
            let text: String = r.pick("fill", "fill", text.to_string())?;
            if text.trim() == "stochastic" {
                FillMode::Stochastic { seed }
            } else {
                text.parse()?
            }
        }
        None => FillMode::Solid,
    };
    let workers: usize = r.pick("workers", "workers", common.workers)?;
    let out: PathBuf = r.pick("out", "out", out.to_path_buf())?;
    let result = match result {
        Some(p) => Some(p.to_path_buf()),
        None => r.file.get("result").map(PathBuf::from),
    };

    Ok(RunConfig {
        inputs: r.inputs(inputs),
        out,
        result,
        pipeline,
        preprocess,
        fill,
        workers: (workers > 0).then_some(workers),
    })
}

fn is_image(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| matches!(e.to_ascii_lowercase().as_str(), "pgm" | "png"))
}

/// Expands input arguments: directories list their `.pgm`/`.png` files,
/// glob patterns are matched, anything else is taken literally. The result
/// is sorted and free of duplicates.
pub fn expand_inputs(inputs: &[String]) -> Result<Vec<PathBuf>> {
    let mut out = std::collections::BTreeSet::new();
    for arg in inputs {
        let path = Path::new(arg);
        if path.is_dir() {
            let entries = fs::read_dir(path).map_err(|e| Error::io(path, e))?;
            for entry in entries {
                let p = entry.map_err(|e| Error::io(path, e))?.path();
                if p.is_file() && is_image(&p) {
                    out.insert(p);
                }
            }
        } else if arg.contains(['*', '?', '[']) {
            let paths =
                glob::glob(arg).map_err(|e| Error::invalid(format!("bad glob {arg:?}: {e}")))?;
            out.extend(paths.flatten().filter(|p| p.is_file()));
        } else {
            out.insert(path.to_path_buf());
        }
    }
    Ok(out.into_iter().collect())
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))
}

fn extract_one(path: &Path, cfg: &RunConfig) -> Result<PathBuf> {
    let raw = fs::read(path).map_err(|e| Error::io(path, e))?;
    let gray = decode_gray(&raw).map_err(|reason| Error::Format {
        path: path.to_path_buf(),
        reason,
    })?;
    let binary = cfg.preprocess.apply(&gray)?;
    let result = extract(&binary, &cfg.pipeline)?;
    let doc = ResultDocument::new(
        &result,
        &cfg.pipeline,
        Some(&cfg.preprocess),
        Some(path.display().to_string()),
        Some(sha256_hex(&raw)),
    );
    let stem = path
        .file_stem()
        .map_or("input".into(), |s| s.to_string_lossy());
    let target = cfg.out.join(format!("{stem}.result.json"));
    fs::write(&target, doc.to_json()?).map_err(|e| Error::io(&target, e))?;
    Ok(target)
}

/// Writes one result JSON per input.
pub fn cmd_extract(cfg: &RunConfig) -> i32 {
    let inputs = match expand_inputs(&cfg.inputs) {
        Ok(v) if !v.is_empty() => v,
        Ok(_) => {
            eprintln!("error: no inputs matched");
            return EXIT_FAILURE;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    };
    if let Err(e) = fs::create_dir_all(&cfg.out) {
        eprintln!("error: cannot create {}: {e}", cfg.out.display());
        return EXIT_FAILURE;
    }
    let outcomes: Vec<Result<PathBuf>> = match pool(cfg.workers) {
        Ok(p) => p.install(|| inputs.par_iter().map(|p| extract_one(p, cfg)).collect()),
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    };
    let mut failed = 0;
    for (input, outcome) in inputs.iter().zip(outcomes) {
        match outcome {
            Ok(target) => {
                info!("{} -> {}", input.display(), target.display());
                println!("{}", target.display());
            }
            Err(e) => {
                failed += 1;
                eprintln!("error: {}: {e}", input.display());
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} of {} inputs failed", inputs.len());
        EXIT_FAILURE
    } else {
        EXIT_OK
    }
}

fn overlay(cfg: &RunConfig) -> Result<PathBuf> {
    let result_path = cfg
        .result
        .as_ref()
        .ok_or_else(|| Error::invalid("overlay needs --result"))?;
    let image_path = match cfg.inputs.as_slice() {
        [one] => PathBuf::from(one),
        _ => return Err(Error::invalid("overlay needs exactly one --input image")),
    };
    let text = fs::read_to_string(result_path).map_err(|e| Error::io(result_path, e))?;
    let doc = ResultDocument::from_json(&text)?;
    let raw = fs::read(&image_path).map_err(|e| Error::io(&image_path, e))?;
    if let Some(expected) = &doc.image.sha256 {
        let actual = sha256_hex(&raw);
        if &actual != expected {
            return Err(Error::invalid(format!(
                "result/image mismatch: {} has sha256 {actual}, result records {expected}",
                image_path.display()
            )));
        }
    }
    let gray = decode_gray(&raw).map_err(|reason| Error::Format {
        path: image_path.clone(),
        reason,
    })?;
    if (gray.width(), gray.height()) != (doc.image.width, doc.image.height) {
        return Err(Error::invalid(format!(
            "result/image mismatch: image is {}x{}, result records {}x{}",
            gray.width(),
            gray.height(),
            doc.image.width,
            doc.image.height
        )));
    }
    let preprocess = match &doc.params.preprocess {
        Some(rec) => rec.to_preprocess()?,
        None => cfg.preprocess.clone(),
    };
    let binary = preprocess.apply(&gray)?;
    let drawn = doc
        .overlay_shapes()
        .draw(&binary, cfg.pipeline.max_trapezoids);
    if let Some(parent) = cfg.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    write_gray(&cfg.out, &drawn)?;
    Ok(cfg.out.clone())
}

/// Renders the top `N_T` trapezoids of a result over its source image.
pub fn cmd_overlay(cfg: &RunConfig) -> i32 {
    match overlay(cfg) {
        Ok(path) => {
            println!("{}", path.display());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

/// Builds the pair database and prints the manifest path.
pub fn cmd_synth(cfg: &RunConfig) -> i32 {
    let inputs = match expand_inputs(&cfg.inputs) {
        Ok(v) if !v.is_empty() => v,
        Ok(_) => {
            eprintln!("error: no inputs");
            return EXIT_FAILURE;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    };
    let db = PairDbConfig {
        pipeline: cfg.pipeline,
        preprocess: cfg.preprocess.clone(),
        fill: cfg.fill,
        workers: cfg.workers,
    };
    match build_pair_db(&inputs, &db, &cfg.out) {
        Ok(manifest) => {
            for e in &manifest.errors {
                eprintln!("error: {}: {}", e.source, e.error);
            }
            println!("{}", cfg.out.join("manifest.json").display());
            if manifest.errors.is_empty() {
                EXIT_OK
            } else {
                eprintln!(
                    "{} of {} inputs failed",
                    manifest.errors.len(),
                    manifest.errors.len() + manifest.pairs.len()
                );
                EXIT_FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILURE
        }
    }
}

/// Parses arguments, resolves configuration and dispatches. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return EXIT_USAGE;
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .target(env_logger::Target::Stderr)
        .try_init();

    let cfg = match resolve_command(&cli, &matches) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match cli.command {
        Command::Extract(_) => cmd_extract(&cfg),
        Command::Overlay(_) => cmd_overlay(&cfg),
        Command::Synth(_) => cmd_synth(&cfg),
    }
}

fn resolve_command(cli: &Cli, matches: &ArgMatches) -> Result<RunConfig> {
    let (_, sub) = matches.subcommand().expect("subcommand is required");
    match &cli.command {
        Command::Extract(a) => resolve(sub, &a.common, &a.input, &a.out, None, None),
        Command::Overlay(a) => resolve(sub, &a.common, &a.input, &a.out, a.result.as_deref(), None),
        Command::Synth(a) => resolve(sub, &a.common, &a.input, &a.out, None, Some(&a.fill)),
    }
}

/// Parses `args` into a [`RunConfig`] without running anything.
pub fn resolve_args<I, T>(args: I) -> std::result::Result<RunConfig, String>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = Cli::command()
        .try_get_matches_from(args)
        .map_err(|e| e.to_string())?;
    let cli = Cli::from_arg_matches(&matches).map_err(|e| e.to_string())?;
    resolve_command(&cli, &matches).map_err(|e| e.to_string())
}

/// Help text of a subcommand, as printed by `--help`.
pub fn help_text(subcommand: &str) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    cmd.find_subcommand_mut(subcommand)
        .map(|c| c.render_long_help().to_string())
        .unwrap_or_default()
}
