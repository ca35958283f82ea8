#![allow(dead_code)]

use std::path::PathBuf;

use fsbi_core::imaging::{load_png, save_png};
use fsbi_core::raster::Image;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_image(rng: &mut ChaCha8Rng, h: usize, w: usize, channels: usize) -> Image {
    let data = (0..h * w * channels).map(|_| rng.random::<f64>()).collect();
    Image::new(h, w, channels, data).unwrap()
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(name)
}

/// Compares `bytes` with the stored golden file, creating it when absent.
pub fn check_golden(name: &str, bytes: &[u8]) {
    let path = fixture_path(name);
    match std::fs::read(&path) {
        Ok(stored) => assert!(
            stored == bytes,
            "{name} differs from the stored golden file"
        ),
        Err(_) => {
            std::fs::write(&path, bytes).unwrap();
            eprintln!("wrote new golden file {}", path.display());
        }
    }
}

pub fn png_bytes(image: &Image) -> Vec<u8> {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.png");
    save_png(image, &path).unwrap();
    std::fs::read(path).unwrap()
}

/// Golden check on quantized pixels, so encoder details do not matter.
pub fn check_golden_png(name: &str, image: &Image) {
    let path = fixture_path(name);
    if path.exists() {
        let stored = load_png(&path).unwrap();
        assert_eq!(
            (stored.height(), stored.width(), stored.channels()),
            (image.height(), image.width(), image.channels()),
            "{name}: shape changed"
        );
        assert!(
            stored.to_u8() == image.to_u8(),
            "{name} differs from the stored golden file"
        );
    } else {
        save_png(image, &path).unwrap();
        eprintln!("wrote new golden file {}", path.display());
    }
}
