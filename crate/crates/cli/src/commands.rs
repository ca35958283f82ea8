use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use fsbi_core::detector::{extract_features, train, Model};
use fsbi_core::ffg::{channel_frequency_map, fuse_channel, make_fsbi};
use fsbi_core::imaging::{load_png, resize_image, save_png};
use fsbi_core::inference::{
    aggregate, auc, join_labels, open_csv, read_labels, read_predictions, read_video_scores,
    sample_frames, write_labels, write_predictions, write_video_scores,
};
use fsbi_core::sbi::make_sbi;
use fsbi_core::synth::synthetic_face;
use fsbi_core::wavelet::{dwt2d, ExtensionMode, Family, Order, WaveletSpec};
use fsbi_core::{Config, Image, Manifest, ManifestEntry, Plane, PredictionRecord, SeededRng};
use rayon::prelude::*;
use serde_json::json;

use crate::args::{
    AggregateArgs, AucArgs, DwtArgs, GenerateArgs, GlobalArgs, ScoreArgs, SynthArgs, TrainArgs,
};
use crate::error::{CliError, CliResult};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const LABELS_FILE: &str = "labels.csv";
const FAKE_SUFFIX: &str = "__fake";

pub fn load_config(global: &GlobalArgs) -> CliResult<Config> {
    let mut cfg = match &global.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(seed) = global.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn create_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}

/// Prints one line to stdout; a closed pipe is not an error.
fn emit(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn write_file(path: &Path, contents: &[u8]) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn create_file(path: &Path) -> CliResult<fs::File> {
    fs::File::create(path).map_err(|e| CliError::io(path, e))
}

/// Accepts either a manifest file or a directory holding `manifest.json`.
fn manifest_location(path: &Path) -> PathBuf {
    if path.is_dir() {
        path.join(MANIFEST_FILE)
    } else {
        path.to_path_buf()
    }
}

fn load_manifest(path: &Path) -> CliResult<(Manifest, PathBuf)> {
    let file = manifest_location(path);
    let manifest = Manifest::load(&file)?;
    let base = file
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    Ok((manifest, base))
}

fn resolve_wavelet(args: &DwtArgs, default: WaveletSpec) -> CliResult<WaveletSpec> {
    let mode = match &args.mode {
        Some(m) => m.parse::<ExtensionMode>()?,
        None => default.mode(),
    };
    let spec = match (&args.wavelet, &args.order) {
        (None, None) => default.with_mode(mode),
        (None, Some(order)) => WaveletSpec::new(default.family(), order.parse::<Order>()?, mode)?,
        (Some(name), None) => WaveletSpec::parse(name, mode)?,
        (Some(name), Some(order)) => {
            WaveletSpec::new(name.parse::<Family>()?, order.parse::<Order>()?, mode)?
        }
    };
    Ok(spec)
}

/// Min-max stretch into `[0, 1]`; a constant plane maps to 0.
fn display_plane(p: &Plane) -> Plane {
    let (lo, hi) = (p.min(), p.max());
    if hi > lo {
        p.map(|v| (v - lo) / (hi - lo))
    } else {
        p.map(|_| 0.0)
    }
}

fn plane_stats(p: &Plane) -> serde_json::Value {
    let n = p.data().len() as f64;
    let mean = p.mean();
    let std = (p.data().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    let mean_abs = p.data().iter().map(|v| v.abs()).sum::<f64>() / n;
    json!({
        "min": p.min(),
        "max": p.max(),
        "mean": mean,
        "std": std,
        "mean_abs": mean_abs,
    })
}

pub fn dwt(global: &GlobalArgs, args: &DwtArgs) -> CliResult<()> {
    let cfg = load_config(global)?;
    let spec = resolve_wavelet(args, cfg.wavelet)?;
    let image = load_png(&args.input)?;
    let bank = spec.filter_bank();

    let planes = image.planes();
    let bands = planes
        .iter()
        .map(|p| dwt2d(p, &bank, spec.mode()))
        .collect::<Result<Vec<_>, _>>()?;
    let ffg = fsbi_core::FfgConfig {
        wavelet: spec,
        normalize_dc: cfg.ffg.normalize_dc,
    };
    let fused = planes
        .iter()
        .map(|p| fuse_channel(p, &channel_frequency_map(p, &ffg)?))
        .collect::<Result<Vec<_>, _>>()?;

    create_dir(&args.out_dir)?;
    let names = ["ll", "lh", "hl", "hh"];
    let mut stats = serde_json::Map::new();
    for (k, name) in names.iter().enumerate() {
        let per_channel: Vec<Plane> = bands.iter().map(|b| display_plane(b.bands()[k])).collect();
        save_png(
            &Image::from_planes(&per_channel)?,
            args.out_dir.join(format!("{name}.png")),
        )?;
        let channel_stats: Vec<_> = bands.iter().map(|b| plane_stats(b.bands()[k])).collect();
        stats.insert(name.to_string(), json!(channel_stats));
    }
    save_png(&Image::from_planes(&fused)?, args.out_dir.join("fused.png"))?;

    let (sh, sw) = bands[0].ll().shape();
    let report = json!({
        "wavelet": spec.name(),
        "mode": spec.mode().name(),
        "input": {"height": image.height(), "width": image.width(), "channels": image.channels()},
        "subband_shape": [sh, sw],
        "subbands": stats,
    });
    emit(&serde_json::to_string_pretty(&report).expect("json"));
    Ok(())
}

struct Generated {
    real: ManifestEntry,
    fake: ManifestEntry,
    fake_is_fsbi: bool,
}

fn generate_entry(
    cfg: &Config,
    base: &Path,
    out_dir: &Path,
    index: usize,
    entry: &ManifestEntry,
) -> CliResult<Generated> {
    let mut rng = SeededRng::substream(cfg.seed, &entry.item_id());
    let image = load_png(Manifest::resolve(base, entry))?;
    if image.channels() != 3 {
        return Err(fsbi_core::Error::ChannelMismatch {
            expected: 3,
            actual: image.channels(),
        }
        .into());
    }
    let landmarks = entry.landmarks()?;
    let ffg = cfg.ffg_config();
    let sbi = make_sbi(&image, &landmarks, &mut rng, &cfg.stg, &cfg.mask)?;
    let fake_is_fsbi = rng.chance(cfg.mix);
    let fake = if fake_is_fsbi {
        make_fsbi(&sbi, &ffg)?
    } else {
        sbi
    };
    let real = if cfg.ffg.apply_to_real {
        make_fsbi(&image, &ffg)?
    } else {
        image
    };

    let real_rel = format!("real/{index:06}.png");
    let fake_rel = format!("fake/{index:06}.png");
    save_png(&real, out_dir.join(&real_rel))?;
    save_png(&fake, out_dir.join(&fake_rel))?;
    let with = |path: String, video_id: String, label: u8| ManifestEntry {
        image_path: path,
        video_id,
        label: Some(label),
        ..entry.clone()
    };
    Ok(Generated {
        real: with(real_rel, entry.video_id.clone(), 0),
        fake: with(fake_rel, format!("{}{FAKE_SUFFIX}", entry.video_id), 1),
        fake_is_fsbi,
    })
}

fn push_label(labels: &mut Vec<(String, u8)>, video: &str, label: u8) {
    if !labels.iter().any(|(v, _)| v == video) {
        labels.push((video.to_string(), label));
    }
}

pub fn generate(global: &GlobalArgs, args: &GenerateArgs) -> CliResult<()> {
    let mut cfg = load_config(global)?;
    if let Some(mix) = args.mix {
        cfg.mix = mix;
    }
    cfg.validate()?;
    let (manifest, base) = load_manifest(&args.manifest)?;
    if manifest.entries.is_empty() {
        return Err(CliError::Usage("manifest has no entries".into()));
    }
    create_dir(&args.out_dir.join("real"))?;
    create_dir(&args.out_dir.join("fake"))?;

    let results: Vec<CliResult<Generated>> = manifest
        .entries
        .par_iter()
        .enumerate()
        .map(|(i, e)| generate_entry(&cfg, &base, &args.out_dir, i, e))
        .collect();

    let mut entries = Vec::new();
    let mut labels = Vec::new();
    let (mut failed, mut fsbi_count) = (0, 0);
    for (entry, result) in manifest.entries.iter().zip(results) {
        match result {
            Ok(g) => {
                push_label(&mut labels, &g.real.video_id, 0);
                push_label(&mut labels, &g.fake.video_id, 1);
                fsbi_count += g.fake_is_fsbi as usize;
                entries.push(g.real);
                entries.push(g.fake);
            }
            Err(e) => {
                failed += 1;
                eprintln!("fsbi: skipping {}: {e}", entry.image_path);
            }
        }
    }
    let count = entries.len() / 2;
    let out = Manifest::new(entries);
    write_file(&args.out_dir.join(MANIFEST_FILE), out.to_json().as_bytes())?;
    let labels_path = args.out_dir.join(LABELS_FILE);
    write_labels(create_file(&labels_path)?, &labels)?;
    emit(
        &json!({"real": count, "fake": count, "fake_fsbi": fsbi_count, "failed": failed})
            .to_string(),
    );
    if failed > 0 {
        return Err(CliError::Partial {
            failed,
            total: manifest.entries.len(),
        });
    }
    Ok(())
}

/// Loads, resizes to the configured side length and featurizes one entry.
fn entry_features(
    cfg: &Config,
    wavelet: &WaveletSpec,
    base: &Path,
    entry: &ManifestEntry,
) -> CliResult<Vec<f64>> {
    let image = load_png(Manifest::resolve(base, entry))?;
    let image = if (image.height(), image.width()) == (cfg.image_size, cfg.image_size) {
        image
    } else {
        resize_image(&image, cfg.image_size, cfg.image_size)?
    };
    Ok(extract_features(&image, wavelet)?)
}

pub fn train_cmd(global: &GlobalArgs, args: &TrainArgs) -> CliResult<()> {
    let cfg = load_config(global)?;
    let (manifest, base) = load_manifest(&args.dataset)?;
    let labels = manifest
        .entries
        .iter()
        .map(|e| {
            e.label
                .ok_or_else(|| CliError::Schema(format!("{} has no label", e.image_path)))
        })
        .collect::<CliResult<Vec<u8>>>()?;
    let features = manifest
        .entries
        .par_iter()
        .map(|e| entry_features(&cfg, &cfg.wavelet, &base, e))
        .collect::<CliResult<Vec<_>>>()?;
    let outcome = train(&features, &labels, cfg.wavelet, &cfg.train_config())?;
    write_file(&args.out, outcome.model.to_json().as_bytes())?;
    let first = outcome.losses.first().copied().unwrap_or(f64::NAN);
    let last = outcome.losses.last().copied().unwrap_or(f64::NAN);
    emit(
        &json!({"samples": features.len(), "initial_loss": first, "final_loss": last}).to_string(),
    );
    Ok(())
}

/// Entries whose frame index is among the `k` sampled frames of their video.
fn sampled_entries(entries: &[ManifestEntry], k: usize) -> Vec<&ManifestEntry> {
    let mut frames: std::collections::HashMap<&str, Vec<u64>> = Default::default();
    for e in entries {
        frames.entry(&e.video_id).or_default().push(e.frame_index);
    }
    let keep: std::collections::HashMap<&str, Vec<u64>> = frames
        .into_iter()
        .map(|(v, mut f)| {
            f.sort_unstable();
            f.dedup();
            let picked = sample_frames(f.len(), k)
                .into_iter()
                .map(|i| f[i])
                .collect();
            (v, picked)
        })
        .collect();
    entries
        .iter()
        .filter(|e| keep[e.video_id.as_str()].contains(&e.frame_index))
        .collect()
}

pub fn score(global: &GlobalArgs, args: &ScoreArgs) -> CliResult<()> {
    let cfg = load_config(global)?;
    if args.frames_per_video == 0 {
        return Err(CliError::Usage(
            "--frames-per-video must be at least 1".into(),
        ));
    }
    let text = fs::read_to_string(&args.model).map_err(|e| CliError::io(&args.model, e))?;
    let model = Model::from_json(&text)?;
    let (manifest, base) = load_manifest(&args.manifest)?;
    let entries = sampled_entries(&manifest.entries, args.frames_per_video);
    let results: Vec<CliResult<f64>> = entries
        .par_iter()
        .map(|e| {
            let f = entry_features(&cfg, &model.wavelet, &base, e)?;
            Ok(model.predict_features(&f)?)
        })
        .collect();
    let mut records = Vec::new();
    let mut failed = 0;
    for (e, r) in entries.iter().zip(results) {
        match r {
            Ok(c) => records.push(PredictionRecord {
                video_id: e.video_id.clone(),
                frame_index: e.frame_index,
                face_index: e.face_index,
                confidence: Some(c),
            }),
            Err(err) => {
                failed += 1;
                eprintln!("fsbi: skipping {}: {err}", e.image_path);
            }
        }
    }
    write_predictions(create_file(&args.out)?, &records)?;
    if failed > 0 {
        return Err(CliError::Partial {
            failed,
            total: entries.len(),
        });
    }
    Ok(())
}

pub fn aggregate_cmd(args: &AggregateArgs) -> CliResult<()> {
    let records = read_predictions(open_csv(&args.preds)?)?;
    let videos = aggregate(&records)?;
    write_video_scores(create_file(&args.out)?, &videos)?;
    Ok(())
}

pub fn auc_cmd(args: &AucArgs) -> CliResult<()> {
    let videos = read_video_scores(open_csv(&args.videos)?)?;
    let labels = read_labels(open_csv(&args.labels)?)?;
    let value = auc(&join_labels(&videos, &labels)?)?;
    emit(&format!("{value:.4}"));
    Ok(())
}

pub fn synth(global: &GlobalArgs, args: &SynthArgs) -> CliResult<()> {
    let cfg = load_config(global)?;
    if args.videos == 0 || args.frames == 0 {
        return Err(CliError::Usage(
            "--videos and --frames must be positive".into(),
        ));
    }
    create_dir(&args.out_dir)?;
    let items: Vec<(usize, usize)> = (args.first_video..args.first_video + args.videos)
        .flat_map(|v| (0..args.frames).map(move |f| (v, f)))
        .collect();
    let entries = items
        .par_iter()
        .map(|&(v, f)| {
            let video_id = format!("video{v:04}");
            let mut rng = SeededRng::substream(cfg.seed, &format!("{video_id}/{f}"));
            let (image, landmarks) = synthetic_face(args.size, args.size, &mut rng)?;
            let name = format!("{video_id}_{f:03}.png");
            save_png(&image, args.out_dir.join(&name))?;
            Ok(ManifestEntry {
                image_path: name,
                video_id,
                frame_index: f as u64,
                face_index: 0,
                landmarks: landmarks.points().iter().map(|&(x, y)| [x, y]).collect(),
                label: Some(0),
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let manifest = Manifest::new(entries);
    write_file(
        &args.out_dir.join(MANIFEST_FILE),
        manifest.to_json().as_bytes(),
    )?;
    emit(&json!({"images": items.len()}).to_string());
    Ok(())
}
