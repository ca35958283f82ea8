mod common;

use common::{check_golden, rng};
use fsbi_core::detector::{
    extract_features, loss_and_grad, predict, train, Model, TrainConfig, FEATURE_DIM,
};
use fsbi_core::rng::SeededRng;
use fsbi_core::synth::synthetic_face;
use fsbi_core::wavelet::WaveletSpec;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Batch = Vec<(Vec<f64>, u8)>;

fn random_case(r: &mut ChaCha8Rng) -> (Model, Batch, f64) {
    let dim = r.random_range(1..10);
    let mut model = Model::zeros(dim, WaveletSpec::default());
    model.weights = (0..dim).map(|_| r.random_range(-2.0..2.0)).collect();
    model.bias = r.random_range(-1.0..1.0);
    let n = r.random_range(1..20);
    let batch = (0..n)
        .map(|_| {
            let x = (0..dim).map(|_| r.random_range(-2.0..2.0)).collect();
            (x, r.random_range(0..2u8))
        })
        .collect();
    (model, batch, r.random_range(0.0..0.1))
}

/// Objective recomputed from its definition, independently of the library.
fn objective(w: &[f64], b: f64, batch: &Batch, l2: f64) -> f64 {
    let n = batch.len() as f64;
    let data: f64 = batch
        .iter()
        .map(|(x, y)| {
            let z: f64 = w.iter().zip(x).map(|(a, c)| a * c).sum::<f64>() + b;
            let p = 1.0 / (1.0 + (-z).exp());
            -(*y as f64 * p.ln() + (1.0 - *y as f64) * (1.0 - p).ln())
        })
        .sum();
    data / n + 0.5 * l2 * w.iter().map(|v| v * v).sum::<f64>()
}

#[test]
fn gradient_matches_central_differences() {
    let mut r = rng(31);
    let h = 1e-5;
    for case in 0..100 {
        let (model, batch, l2) = random_case(&mut r);
        let g = loss_and_grad(&model, &batch, l2).unwrap();
        assert!((g.loss - objective(&model.weights, model.bias, &batch, l2)).abs() < 1e-12);

        let mut numeric = Vec::new();
        for j in 0..model.weights.len() {
            let mut plus = model.weights.clone();
            let mut minus = model.weights.clone();
            plus[j] += h;
            minus[j] -= h;
            numeric.push(
                (objective(&plus, model.bias, &batch, l2)
                    - objective(&minus, model.bias, &batch, l2))
                    / (2.0 * h),
            );
        }
        numeric.push(
            (objective(&model.weights, model.bias + h, &batch, l2)
                - objective(&model.weights, model.bias - h, &batch, l2))
                / (2.0 * h),
        );
        let analytic: Vec<f64> = g.grad_w.iter().copied().chain([g.grad_b]).collect();
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let diff: Vec<f64> = analytic.iter().zip(&numeric).map(|(a, n)| a - n).collect();
        let rel = norm(&diff) / norm(&analytic).max(norm(&numeric)).max(1e-300);
        assert!(rel <= 1e-4, "case {case}: relative error {rel:e}");
    }
}

fn separable_set(r: &mut ChaCha8Rng, n: usize, dim: usize) -> (Vec<Vec<f64>>, Vec<u8>) {
    let labels: Vec<u8> = (0..n).map(|i| (i % 2) as u8).collect();
    let features = labels
        .iter()
        .map(|&y| {
            let centre = if y == 1 { 1.5 } else { -1.5 };
            (0..dim)
                .map(|_| centre + r.random_range(-1.0..1.0))
                .collect()
        })
        .collect();
    (features, labels)
}

#[test]
fn loss_decreases_every_epoch() {
    let mut r = rng(32);
    for (lr, epochs) in [(0.01, 400), (0.1, 300)] {
        let (x, y) = separable_set(&mut r, 80, 5);
        let cfg = TrainConfig {
            learning_rate: lr,
            epochs,
            l2: 1e-4,
            seed: 3,
        };
        let out = train(&x, &y, WaveletSpec::default(), &cfg).unwrap();
        assert_eq!(out.losses.len(), epochs + 1);
        for (i, w) in out.losses.windows(2).enumerate() {
            assert!(
                w[1] < w[0],
                "lr {lr}: epoch {i} loss rose {} -> {}",
                w[0],
                w[1]
            );
        }
    }
}

#[test]
fn training_is_deterministic() {
    let mut r = rng(33);
    let (x, y) = separable_set(&mut r, 40, 3);
    let cfg = TrainConfig {
        epochs: 50,
        seed: 9,
        ..TrainConfig::default()
    };
    let a = train(&x, &y, WaveletSpec::default(), &cfg).unwrap().model;
    let b = train(&x, &y, WaveletSpec::default(), &cfg).unwrap().model;
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn frozen_normalization_decouples_predictions() {
    let mut r = rng(34);
    let (x, y) = separable_set(&mut r, 40, 3);
    let model = train(&x, &y, WaveletSpec::default(), &TrainConfig::default())
        .unwrap()
        .model;
    let probe = vec![0.3, -0.2, 0.9];
    let before = model.predict_features(&probe).unwrap();
    for other in &x {
        model.predict_features(other).unwrap();
    }
    assert_eq!(model.predict_features(&probe).unwrap(), before);
    assert!(model.feature_std.iter().all(|s| *s > 0.0));
}

#[test]
fn constant_features_use_std_floor() {
    let x = vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![1.0, 2.0]];
    let model = train(
        &x,
        &[0, 1, 1],
        WaveletSpec::default(),
        &TrainConfig::default(),
    )
    .unwrap()
    .model;
    assert_eq!(model.feature_std[0], 1e-8);
    assert!(model.predict_features(&[1.0, 1.0]).unwrap().is_finite());
}

#[test]
fn confidences_strictly_inside_unit_interval() {
    let mut r = rng(35);
    for _ in 0..50 {
        let (mut model, batch, _) = random_case(&mut r);
        model.weights.iter_mut().for_each(|w| *w *= 500.0);
        for (x, _) in &batch {
            let p = model.predict_features(x).unwrap();
            assert!(p > 0.0 && p < 1.0);
        }
    }
}

#[test]
fn feature_and_prediction_goldens() {
    let (img, _) = synthetic_face(48, 48, &mut SeededRng::new(42)).unwrap();
    let features = extract_features(&img, &WaveletSpec::default()).unwrap();
    assert_eq!(features.len(), FEATURE_DIM);
    assert_eq!(
        features,
        extract_features(&img, &WaveletSpec::default()).unwrap()
    );
    let text: String = features.iter().map(|v| format!("{v:.12e}\n")).collect();
    check_golden("features_seed42.txt", text.as_bytes());

    let mut model = Model::zeros(FEATURE_DIM, WaveletSpec::default());
    for (i, w) in model.weights.iter_mut().enumerate() {
        *w = (i as f64 - 11.5) / 10.0;
    }
    model.bias = 0.25;
    let conf = predict(&model, &img).unwrap();
    assert!(conf > 0.0 && conf < 1.0);
    check_golden("prediction_seed42.txt", format!("{conf:.12}\n").as_bytes());
}
