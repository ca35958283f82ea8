use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "fsbi", version, about = "Self-blended image forensics toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Configuration file (TOML). Defaults to $FSBI_CONFIG when set.
    #[arg(long, global = true, env = "FSBI_CONFIG")]
    pub config: Option<PathBuf>,

    /// Seed overriding the configuration file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads for per-image work (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the single-level DWT subbands and the fused image of one PNG.
    Dwt(DwtArgs),
    /// Create real/fake training images from a manifest of face crops.
    Generate(GenerateArgs),
    /// Fit the detector on a generated dataset.
    Train(TrainArgs),
    /// Score the faces listed in a manifest.
    Score(ScoreArgs),
    /// Reduce face predictions to video scores.
    Aggregate(AggregateArgs),
    /// Print the AUC of video scores against labels.
    Auc(AucArgs),
    /// Write a corpus of procedural face crops with a manifest.
    Synth(SynthArgs),
}

#[derive(Args, Debug)]
pub struct DwtArgs {
    pub input: PathBuf,

    /// Wavelet family (haar, db, sym, bior, coif) or short name such as sym4.
    #[arg(long)]
    pub wavelet: Option<String>,

    /// Order, e.g. 4 or 2.2; omit when --wavelet already names one.
    #[arg(long)]
    pub order: Option<String>,

    /// Extension mode: symmetric, reflect, antireflect, periodic or zero.
    #[arg(long)]
    pub mode: Option<String>,

    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long)]
    pub manifest: PathBuf,

    #[arg(long)]
    pub out_dir: PathBuf,

    /// Fraction of fakes passed through the frequency feature generator.
    #[arg(long)]
    pub mix: Option<f64>,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    /// Dataset directory (containing manifest.json) or a manifest file.
    #[arg(long)]
    pub dataset: PathBuf,

    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ScoreArgs {
    #[arg(long)]
    pub model: PathBuf,

    /// Dataset directory (containing manifest.json) or a manifest file.
    #[arg(long)]
    pub manifest: PathBuf,

    #[arg(long)]
    pub out: PathBuf,

    /// Frames sampled per video.
    #[arg(long, default_value_t = fsbi_core::inference::DEFAULT_FRAMES_PER_VIDEO)]
    pub frames_per_video: usize,
}

#[derive(Args, Debug)]
pub struct AggregateArgs {
    #[arg(long)]
    pub preds: PathBuf,

    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct AucArgs {
    #[arg(long)]
    pub videos: PathBuf,

    #[arg(long)]
    pub labels: PathBuf,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[arg(long)]
    pub out_dir: PathBuf,

    #[arg(long, default_value_t = 10)]
    pub videos: usize,

    #[arg(long, default_value_t = 2)]
    pub frames: usize,

    /// Crop side length in pixels (at least 32).
    #[arg(long, default_value_t = 64)]
    pub size: usize,

    /// Index of the first video, for building disjoint corpora.
    #[arg(long, default_value_t = 0)]
    pub first_video: usize,
}
