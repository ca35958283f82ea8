//! Face-crop manifest: the JSON index of input images and their landmarks.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sbi::Landmarks;

pub const MANIFEST_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub format_version: u32,
    pub entries: Vec<ManifestEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    /// Relative paths resolve against the manifest's directory.
    pub image_path: String,
    pub video_id: String,
    pub frame_index: u64,
    #[serde(default)]
    pub face_index: u64,
    pub landmarks: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<u8>,
}

impl ManifestEntry {
    pub fn landmarks(&self) -> Result<Landmarks> {
        Landmarks::new(self.landmarks.iter().map(|&[x, y]| (x, y)).collect())
    }

    /// Stable identifier used to derive the entry's random substream.
    pub fn item_id(&self) -> String {
        format!("{}/{}/{}", self.video_id, self.frame_index, self.face_index)
    }
}

impl Manifest {
    pub fn new(entries: Vec<ManifestEntry>) -> Self {
        Manifest {
            format_version: MANIFEST_FORMAT_VERSION,
            entries,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: Manifest =
            serde_json::from_str(text).map_err(|e| Error::Schema(format!("manifest: {e}")))?;
        m.validate()?;
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Manifest::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.format_version != MANIFEST_FORMAT_VERSION {
            return Err(Error::Schema(format!(
                "manifest format_version {} (expected {MANIFEST_FORMAT_VERSION})",
                self.format_version
            )));
        }
        let mut seen = HashSet::new();
        for e in &self.entries {
            if !seen.insert((&e.video_id, e.frame_index, e.face_index)) {
                return Err(Error::Schema(format!(
                    "duplicate entry for video {} frame {} face {}",
                    e.video_id, e.frame_index, e.face_index
                )));
            }
            if let Some(l) = e.label {
                if l > 1 {
                    return Err(Error::Schema(format!("label {l} is not 0 or 1")));
                }
            }
            e.landmarks()
                .map_err(|err| Error::Schema(format!("landmarks of {}: {err}", e.image_path)))?;
        }
        Ok(())
    }

    /// Resolves an entry's image path against `base` (the manifest directory).
    pub fn resolve(base: &Path, entry: &ManifestEntry) -> PathBuf {
        let p = Path::new(&entry.image_path);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            base.join(p)
        }
    }
}
