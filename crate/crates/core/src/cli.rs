//! Command-line front end: single-image detection, mask scoring, comparison
//! runs and synthetic dataset generation.
//!
//! Configuration files are flat `key = value` text. Blank lines and lines
//! starting with `#` are ignored. Flags override file values, which override
//! the built-in defaults.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::colorspace::FeaturePairId;
use crate::evaluation::{
    comparison_csv, comparison_table, evaluate_dirs, load_dataset, run_comparison, BaselineId, ComparisonReport,
    EvalReport, ImageIssue, Variant,
};
use crate::face_region::{annotation_key, parse_annotations, EyePair, PreprocessConfig};
use crate::imaging::{encode_mask_png, encode_rgb_png, load_png, BinaryMask, RgbImage};
use crate::skin_model::{detect_with_reason, DetectError, DetectorParams, FusionMode};
use crate::synth::{generate_suite, write_dataset, SuiteConfig};

#[derive(Debug, Parser)]
#[command(name = "skinfuse", version, about = "Face-anchored skin detection and evaluation")]
pub struct Cli {
    /// Worker threads for per-image work (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Detect skin in one image and write the mask.
    Detect(DetectArgs),
    /// Score prediction masks against truth masks.
    Eval(EvalArgs),
    /// Run feature, mode and baseline variants over a dataset.
    Compare(CompareArgs),
    /// Write a synthetic dataset with exact ground truth.
    Synth(SynthArgs),
}

/// Options shared by the commands that run the detector.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// Flat key=value configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override one configuration key (repeatable), e.g. `--set lambda=5`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct DetectArgs {
    #[arg(long)]
    pub image: PathBuf,
    /// Eye centres as `x1,y1,x2,y2` (repeatable, one per face).
    #[arg(long, value_name = "X1,Y1,X2,Y2", allow_hyphen_values = true)]
    pub eyes: Vec<String>,
    /// Annotations JSON; records for this image's file name are used.
    #[arg(long)]
    pub annotations: Option<PathBuf>,
    #[arg(long)]
    pub feature: Option<FeaturePairId>,
    #[arg(long)]
    pub mode: Option<FusionMode>,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the input with detected skin tinted red.
    #[arg(long)]
    pub overlay: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub pred_dir: PathBuf,
    #[arg(long)]
    pub truth_dir: PathBuf,
    /// Write the full report as JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Directory holding `images/`, `truth/` and `annotations.json`.
    #[arg(long)]
    pub dataset: PathBuf,
    /// Feature pairs run through the fused detector, e.g. `iby,hs,ycb`.
    #[arg(long, value_delimiter = ',')]
    pub features: Vec<FeaturePairId>,
    /// Classifier outputs on the log-opponent pair: `fusion,hist,gmm`.
    #[arg(long, value_delimiter = ',')]
    pub modes: Vec<FusionMode>,
    /// Fixed-range baselines: `sobottka_hs,wang_yuan`.
    #[arg(long, value_delimiter = ',')]
    pub baselines: Vec<BaselineId>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[command(flatten)]
    pub config: ConfigArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
}

/// Every tunable of a detector run.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunConfig {
    pub feature: FeaturePairId,
    pub mode: FusionMode,
    #[serde(flatten)]
    pub preprocess: PreprocessConfig,
    #[serde(flatten)]
    pub detector: DetectorParams,
}

impl RunConfig {
    pub const KEYS: [&'static str; 16] = [
        "feature",
        "mode",
        "minor_axis_factor",
        "major_axis_factor",
        "axes_are_full_lengths",
        "edge_threshold",
        "dilate_radius",
        "dilate_iterations",
        "rotate_with_eye_line",
        "bins_a",
        "bins_b",
        "lambda",
        "hist_threshold",
        "boundary_scale",
        "literal_variance_axes",
        "exact_ellipse",
    ];

    /// Assign one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T>
        where
            T::Err: std::fmt::Display,
        {
            v.parse::<T>().map_err(|e| anyhow!("invalid value '{v}' for {key}: {e}"))
        }
        let p = &mut self.preprocess;
        let d = &mut self.detector;
        match key {
            "feature" => self.feature = value.parse().map_err(|e: String| anyhow!(e))?,
            "mode" => self.mode = value.parse().map_err(|e: String| anyhow!(e))?,
            "minor_axis_factor" => p.minor_axis_factor = num(key, value)?,
            "major_axis_factor" => p.major_axis_factor = num(key, value)?,
            "axes_are_full_lengths" => p.axes_are_full_lengths = num(key, value)?,
            "edge_threshold" => p.edge_threshold = num(key, value)?,
            "dilate_radius" => p.dilate_radius = num(key, value)?,
            "dilate_iterations" => p.dilate_iterations = num(key, value)?,
            "rotate_with_eye_line" => p.rotate_with_eye_line = num(key, value)?,
            "bins_a" => d.bins_a = num(key, value)?,
            "bins_b" => d.bins_b = num(key, value)?,
            "lambda" => d.lambda = num(key, value)?,
            "hist_threshold" => d.hist_threshold = num(key, value)?,
            "boundary_scale" => d.boundary_scale = num(key, value)?,
            "literal_variance_axes" => d.literal_variance_axes = num(key, value)?,
            "exact_ellipse" => d.exact_ellipse = num(key, value)?,
            _ => bail!("unknown configuration key '{key}' (known: {})", Self::KEYS.join(", ")),
        }
        Ok(())
    }

    /// Apply every `key = value` line of a configuration text.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key=value, got '{line}'", n + 1))?;
            self.set(k.trim(), v.trim()).with_context(|| format!("line {}", n + 1))?;
        }
        Ok(())
    }

    pub fn apply_override(&mut self, kv: &str) -> Result<()> {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| anyhow!("--set expects key=value, got '{kv}'"))?;
        self.set(k.trim(), v.trim())
    }

    /// Defaults, then the config file, then `--set` overrides.
    pub fn resolve(args: &ConfigArgs) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &args.config {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
            cfg.apply_text(&text)
                .with_context(|| format!("invalid config {}", path.display()))?;
        }
        for kv in &args.overrides {
            cfg.apply_override(kv)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.preprocess.validate().map_err(|e| anyhow!(e))?;
        self.detector.validate()?;
        Ok(())
    }
}

/// Write `bytes` to a sibling temp file and rename it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let name = path
        .file_name()
        .ok_or_else(|| anyhow!("{} is not a file path", path.display()))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    std::fs::write(&tmp, bytes).with_context(|| format!("cannot write {}", tmp.display()))?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        anyhow!("cannot move output into {}: {e}", path.display())
    })
}

/// Parse `x1,y1,x2,y2`.
pub fn parse_eyes(s: &str) -> Result<EyePair> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| anyhow!("malformed --eyes '{s}': expected x1,y1,x2,y2"))?;
    if v.len() != 4 {
        bail!("malformed --eyes '{s}': expected 4 numbers, got {}", v.len());
    }
    EyePair::new((v[0], v[1]), (v[2], v[3])).map_err(|e| anyhow!("degenerate eye annotation '{s}': {e}"))
}

/// The image with mask pixels blended 50% towards pure red.
pub fn overlay(img: &RgbImage, mask: &BinaryMask) -> RgbImage {
    RgbImage::from_fn(img.width(), img.height(), |x, y| {
        let p = img.get(x, y);
        if mask.get(x, y) {
            let half = |a: u8, b: u8| (a as u16 + b as u16).div_ceil(2) as u8;
            [half(p[0], 255), half(p[1], 0), half(p[2], 0)]
        } else {
            p
        }
    })
}

pub fn cmd_detect(args: &DetectArgs) -> Result<()> {
    let mut cfg = RunConfig::resolve(&args.config)?;
    if let Some(f) = args.feature {
        cfg.feature = f;
    }
    if let Some(m) = args.mode {
        cfg.mode = m;
    }
    let img = load_png(&args.image)?;
    let mut faces = args.eyes.iter().map(|s| parse_eyes(s)).collect::<Result<Vec<_>>>()?;
    if let Some(path) = &args.annotations {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read annotations {}", path.display()))?;
        let ann = parse_annotations(&text).with_context(|| format!("invalid annotations {}", path.display()))?;
        let key = annotation_key(&args.image.to_string_lossy());
        faces.extend(ann.get(&key).into_iter().flatten().copied());
    }
    for f in &faces {
        f.validate(img.dims()).map_err(|e| anyhow!("{e}"))?;
    }
    let (mask, why) = detect_with_reason(&img, &faces, cfg.feature, cfg.mode, &cfg.preprocess, &cfg.detector);
    match why {
        None => {}
        Some(DetectError::NoFace) => eprintln!("warning: no face input; writing a blank mask"),
        Some(e) => eprintln!("warning: {e}; writing a blank mask"),
    }
    write_atomic(&args.out, &encode_mask_png(&mask)?)?;
    if let Some(path) = &args.overlay {
        write_atomic(path, &encode_rgb_png(&overlay(&img, &mask))?)?;
    }
    log::info!("{}: {} skin pixels", args.out.display(), mask.count());
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct EvalOutput {
    pub pred_dir: String,
    pub truth_dir: String,
    pub issues: Vec<ImageIssue>,
    pub report: EvalReport,
}

fn print_issues(issues: &[ImageIssue]) {
    for i in issues {
        eprintln!("skipped {}: {}", i.id, i.message);
    }
}

pub fn cmd_eval(args: &EvalArgs) -> Result<EvalOutput> {
    let (report, issues) = evaluate_dirs(&args.pred_dir, &args.truth_dir)?;
    print_issues(&issues);
    if report.per_image.is_empty() {
        bail!("no prediction/truth pair could be evaluated");
    }
    let out = EvalOutput {
        pred_dir: args.pred_dir.display().to_string(),
        truth_dir: args.truth_dir.display().to_string(),
        issues,
        report,
    };
    if let Some(path) = &args.report {
        write_atomic(path, (serde_json::to_string_pretty(&out)? + "\n").as_bytes())?;
    }
    print!("{}", comparison_table(std::slice::from_ref(&out.report)));
    Ok(out)
}

/// Variants in the order features, modes, baselines.
pub fn requested_variants(args: &CompareArgs) -> Vec<Variant> {
    args.features
        .iter()
        .map(|&p| Variant::Feature(p))
        .chain(args.modes.iter().map(|&m| Variant::Mode(m)))
        .chain(args.baselines.iter().map(|&b| Variant::Baseline(b)))
        .collect()
}

pub fn cmd_compare(args: &CompareArgs) -> Result<ComparisonReport> {
    let variants = requested_variants(args);
    if variants.is_empty() {
        bail!("no variants requested; pass --features, --modes and/or --baselines");
    }
    let cfg = RunConfig::resolve(&args.config)?;
    let load = load_dataset(&args.dataset)?;
    print_issues(&load.issues);
    if load.samples.is_empty() {
        bail!("dataset {} has no usable images", args.dataset.display());
    }
    let report = run_comparison(
        &args.dataset.display().to_string(),
        &load.samples,
        &load.issues,
        &variants,
        &cfg.preprocess,
        &cfg.detector,
    );
    if let Some(path) = &args.csv {
        write_atomic(path, comparison_csv(&report.variants).as_bytes())?;
    }
    if let Some(path) = &args.json {
        write_atomic(path, (serde_json::to_string_pretty(&report)? + "\n").as_bytes())?;
    }
    print!("{}", comparison_table(&report.variants));
    Ok(report)
}

pub fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let cfg = SuiteConfig {
        count: args.count,
        seed: args.seed,
        ..SuiteConfig::default()
    };
    write_dataset(&args.out, &generate_suite(&cfg))?;
    println!("wrote {} scenes to {}", cfg.count, args.out.display());
    Ok(())
}

pub fn run(cli: Cli) -> Result<()> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            bail!("--jobs must be at least 1");
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build()?;
    pool.install(|| match &cli.command {
        Command::Detect(a) => cmd_detect(a),
        Command::Eval(a) => cmd_eval(a).map(drop),
        Command::Compare(a) => cmd_compare(a).map(drop),
        Command::Synth(a) => cmd_synth(a),
    })
}
