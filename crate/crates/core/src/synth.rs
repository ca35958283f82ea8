//! Procedural face-like crops for fixtures and desk-scale experiments.

use crate::error::Result;
use crate::raster::Image;
use crate::rng::SeededRng;
use crate::sbi::{synthetic_landmarks, Landmarks};

/// Half-width of the uniform per-sample noise, as from a single camera.
pub const SENSOR_NOISE: f64 = 0.03;

/// Draws a crop with a shaded background, a skin-toned ellipse matching the
/// synthetic landmark layout, darker eye and mouth blobs, and fine sensor
/// noise of fixed strength. Returns the image together with landmarks drawn
/// from the same stream.
pub fn synthetic_face(h: usize, w: usize, rng: &mut SeededRng) -> Result<(Image, Landmarks)> {
    let landmarks = synthetic_landmarks(h, w, rng)?;
    let (cx, cy) = ((w - 1) as f64 / 2.0, (h - 1) as f64 / 2.0);
    let (ax, ay) = (0.3 * w as f64, 0.4 * h as f64);

    let bg_top: Vec<f64> = (0..3).map(|_| rng.uniform(0.1, 0.9)).collect();
    let bg_bottom: Vec<f64> = (0..3).map(|_| rng.uniform(0.1, 0.9)).collect();
    let skin = [
        rng.uniform(0.55, 0.85),
        rng.uniform(0.40, 0.65),
        rng.uniform(0.30, 0.55),
    ];
    let light = (rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    let eye_dy = rng.uniform(-0.35, -0.2);
    let eye_dx = rng.uniform(0.3, 0.45);
    let mouth_dy = rng.uniform(0.35, 0.5);
    let texture_freq = rng.uniform(0.6, 1.2);

    let blob = |u: f64, v: f64, bu: f64, bv: f64, ru: f64, rv: f64| {
        let d = ((u - bu) / ru).powi(2) + ((v - bv) / rv).powi(2);
        (-d * 2.0).exp()
    };

    let mut data = Vec::with_capacity(h * w * 3);
    for y in 0..h {
        for x in 0..w {
            // Normalized face coordinates: the ellipse boundary is r = 1.
            let u = (x as f64 - cx) / ax;
            let v = (y as f64 - cy) / ay;
            let r = (u * u + v * v).sqrt();
            let inside = (1.0 - (r - 1.0) * 6.0).clamp(0.0, 1.0);
            let t = y as f64 / (h - 1) as f64;
            let shade = 0.85 + 0.15 * (light.0 * u + light.1 * v).tanh();
            let features = 0.5
                * (blob(u, v, -eye_dx, eye_dy, 0.15, 0.08)
                    + blob(u, v, eye_dx, eye_dy, 0.15, 0.08)
                    + blob(u, v, 0.0, mouth_dy, 0.3, 0.07));
            let ripple = 0.02 * ((x as f64 * texture_freq).sin() * (y as f64 * texture_freq).cos());
            for c in 0..3 {
                let bg = bg_top[c] * (1.0 - t) + bg_bottom[c] * t;
                let face = skin[c] * shade * (1.0 - features) + ripple;
                let value =
                    bg * (1.0 - inside) + face * inside + rng.uniform(-SENSOR_NOISE, SENSOR_NOISE);
                data.push(value.clamp(0.0, 1.0));
            }
        }
    }
    Ok((Image::new(h, w, 3, data)?, landmarks))
}
