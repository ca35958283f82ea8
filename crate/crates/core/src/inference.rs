//! Frame sampling, face → frame → video aggregation, and AUC.

use std::collections::{HashMap, HashSet};
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub const DEFAULT_FRAMES_PER_VIDEO: usize = 32;
/// Score assigned to a video in which no frame contains a face.
pub const FACELESS_SCORE: f64 = 0.5;

/// One classifier output. `confidence` is `None` for a frame that was
/// processed but had no detectable face.
#[derive(Clone, Debug, PartialEq)]
pub struct PredictionRecord {
    pub video_id: String,
    pub frame_index: u64,
    pub face_index: u64,
    pub confidence: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VideoScore {
    pub video_id: String,
    pub score: f64,
    pub frames_used: usize,
}

/// `k` evenly spaced frame indices `floor(i · total / k)`, or every frame
/// when the video is short.
pub fn sample_frames(total_frames: usize, k: usize) -> Vec<usize> {
    if total_frames <= k {
        return (0..total_frames).collect();
    }
    let mut out: Vec<usize> = (0..k)
        .map(|i| ((i as u128 * total_frames as u128) / k as u128) as usize)
        .collect();
    out.dedup();
    out
}

/// Highest face confidence in a frame; `None` when the frame has no faces.
pub fn frame_score(face_confidences: &[f64]) -> Option<f64> {
    face_confidences.iter().copied().reduce(f64::max)
}

/// Mean of the available frame scores, or [`FACELESS_SCORE`] if there are
/// none.
pub fn video_score(video_id: &str, frame_scores: &[f64]) -> VideoScore {
    let score = if frame_scores.is_empty() {
        FACELESS_SCORE
    } else {
        let mut sorted = frame_scores.to_vec();
        // Summing in sorted order makes the mean independent of input order.
        sorted.sort_by(f64::total_cmp);
        (sorted.iter().sum::<f64>() / sorted.len() as f64).clamp(0.0, 1.0)
    };
    VideoScore {
        video_id: video_id.to_string(),
        score,
        frames_used: frame_scores.len(),
    }
}

/// Groups records by video then frame, scores each frame by its maximum
/// face confidence and each video by the mean of its scored frames. Videos
/// appear in order of first occurrence.
pub fn aggregate(records: &[PredictionRecord]) -> Result<Vec<VideoScore>> {
    let mut seen = HashSet::new();
    let mut order: Vec<&str> = Vec::new();
    let mut frames: HashMap<&str, Vec<(u64, Option<f64>)>> = HashMap::new();
    for r in records {
        if !seen.insert((&r.video_id, r.frame_index, r.face_index)) {
            return Err(Error::Schema(format!(
                "duplicate prediction for video {} frame {} face {}",
                r.video_id, r.frame_index, r.face_index
            )));
        }
        if let Some(c) = r.confidence {
            if !(0.0..=1.0).contains(&c) {
                return Err(Error::Schema(format!("confidence {c} outside [0, 1]")));
            }
        }
        let entry = frames.entry(&r.video_id).or_insert_with(|| {
            order.push(&r.video_id);
            Vec::new()
        });
        entry.push((r.frame_index, r.confidence));
    }
    Ok(order
        .into_iter()
        .map(|vid| {
            let mut by_frame: HashMap<u64, Vec<f64>> = HashMap::new();
            for &(frame, conf) in &frames[vid] {
                let faces = by_frame.entry(frame).or_default();
                faces.extend(conf);
            }
            let scores: Vec<f64> = by_frame.values().filter_map(|f| frame_score(f)).collect();
            video_score(vid, &scores)
        })
        .collect())
}

/// Mann-Whitney AUC: the fraction of (positive, negative) pairs in which the
/// positive scores higher, ties counting one half.
pub fn auc(scored: &[(f64, u8)]) -> Result<f64> {
    let mut items = scored.to_vec();
    for &(s, y) in &items {
        if y > 1 {
            return Err(Error::Schema(format!("label {y} is not 0 or 1")));
        }
        if s.is_nan() {
            return Err(Error::Schema("NaN score".into()));
        }
    }
    let n_pos = items.iter().filter(|(_, y)| *y == 1).count();
    let n_neg = items.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClassData);
    }
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Count, in half-units, the negatives each positive beats or ties.
    let mut twice_wins: u128 = 0;
    let mut negatives_below: u128 = 0;
    let mut i = 0;
    while i < items.len() {
        let mut j = i;
        while j < items.len() && items[j].0 == items[i].0 {
            j += 1;
        }
        let group = &items[i..j];
        let pos = group.iter().filter(|(_, y)| *y == 1).count() as u128;
        let neg = group.len() as u128 - pos;
        twice_wins += pos * (2 * negatives_below + neg);
        negatives_below += neg;
        i = j;
    }
    Ok(twice_wins as f64 / (2.0 * n_pos as f64 * n_neg as f64))
}

fn csv_reader<R: Read>(input: R, expected: &[&str], what: &str) -> Result<csv::Reader<R>> {
    let mut reader = csv::ReaderBuilder::new().from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| Error::Schema(format!("{what}: {e}")))?;
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(Error::Schema(format!(
            "{what}: expected columns {}, found {}",
            expected.join(","),
            got.join(",")
        )));
    }
    Ok(reader)
}

fn parse_field<T: std::str::FromStr>(value: &str, column: &str, line: u64) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Schema(format!("line {line}: bad {column} value {value:?}")))
}

fn for_each_row<R: Read>(
    mut reader: csv::Reader<R>,
    what: &str,
    mut f: impl FnMut(&csv::StringRecord, u64) -> Result<()>,
) -> Result<()> {
    for row in reader.records() {
        let row = row.map_err(|e| Error::Schema(format!("{what}: {e}")))?;
        let line = row.position().map_or(0, |p| p.line());
        f(&row, line)?;
    }
    Ok(())
}

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::Schema(e.to_string())
}

fn confidence_field(c: f64, line: u64) -> Result<f64> {
    if (0.0..=1.0).contains(&c) {
        Ok(c)
    } else {
        Err(Error::Schema(format!(
            "line {line}: confidence {c} outside [0, 1]"
        )))
    }
}

pub const PREDICTION_COLUMNS: [&str; 4] = ["video_id", "frame_index", "face_index", "confidence"];
pub const VIDEO_COLUMNS: [&str; 3] = ["video_id", "score", "frames_used"];
pub const LABEL_COLUMNS: [&str; 2] = ["video_id", "label"];

pub fn read_predictions<R: Read>(input: R) -> Result<Vec<PredictionRecord>> {
    let reader = csv_reader(input, &PREDICTION_COLUMNS, "predictions")?;
    let mut out = Vec::new();
    for_each_row(reader, "predictions", |row, line| {
        let confidence = match &row[3] {
            "" => None,
            text => Some(confidence_field(
                parse_field(text, "confidence", line)?,
                line,
            )?),
        };
        out.push(PredictionRecord {
            video_id: row[0].to_string(),
            frame_index: parse_field(&row[1], "frame_index", line)?,
            face_index: parse_field(&row[2], "face_index", line)?,
            confidence,
        });
        Ok(())
    })?;
    Ok(out)
}

pub fn write_predictions<W: Write>(out: W, records: &[PredictionRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().from_writer(out);
    w.write_record(PREDICTION_COLUMNS).map_err(csv_err)?;
    for r in records {
        let conf = r.confidence.map(|c| format!("{c:.6}")).unwrap_or_default();
        w.write_record([
            r.video_id.as_str(),
            &r.frame_index.to_string(),
            &r.face_index.to_string(),
            &conf,
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}

pub fn read_video_scores<R: Read>(input: R) -> Result<Vec<VideoScore>> {
    let reader = csv_reader(input, &VIDEO_COLUMNS, "video scores")?;
    let mut out = Vec::new();
    for_each_row(reader, "video scores", |row, line| {
        out.push(VideoScore {
            video_id: row[0].to_string(),
            score: confidence_field(parse_field(&row[1], "score", line)?, line)?,
            frames_used: parse_field(&row[2], "frames_used", line)?,
        });
        Ok(())
    })?;
    Ok(out)
}

pub fn write_video_scores<W: Write>(out: W, scores: &[VideoScore]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().from_writer(out);
    w.write_record(VIDEO_COLUMNS).map_err(csv_err)?;
    for s in scores {
        w.write_record([
            s.video_id.as_str(),
            &format!("{:.6}", s.score),
            &s.frames_used.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}

pub fn read_labels<R: Read>(input: R) -> Result<Vec<(String, u8)>> {
    let reader = csv_reader(input, &LABEL_COLUMNS, "labels")?;
    let mut out = Vec::new();
    for_each_row(reader, "labels", |row, line| {
        let label: u8 = parse_field(&row[1], "label", line)?;
        if label > 1 {
            return Err(Error::Schema(format!("line {line}: label {label}")));
        }
        out.push((row[0].to_string(), label));
        Ok(())
    })?;
    Ok(out)
}

pub fn write_labels<W: Write>(out: W, labels: &[(String, u8)]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().from_writer(out);
    w.write_record(LABEL_COLUMNS).map_err(csv_err)?;
    for (id, y) in labels {
        w.write_record([id.as_str(), &y.to_string()])
            .map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}

/// Opens `path` for one of the CSV readers above, mapping I/O failures.
pub fn open_csv(path: &Path) -> Result<std::fs::File> {
    std::fs::File::open(path).map_err(|e| Error::io(path, e))
}

/// Pairs video scores with labels by id. Every scored video needs a label.
pub fn join_labels(scores: &[VideoScore], labels: &[(String, u8)]) -> Result<Vec<(f64, u8)>> {
    let mut map = HashMap::new();
    for (id, y) in labels {
        if map.insert(id.as_str(), *y).is_some() {
            return Err(Error::Schema(format!("duplicate label for video {id}")));
        }
    }
    scores
        .iter()
        .map(|s| {
            map.get(s.video_id.as_str())
                .map(|&y| (s.score, y))
                .ok_or_else(|| Error::Schema(format!("no label for video {}", s.video_id)))
        })
        .collect()
}
