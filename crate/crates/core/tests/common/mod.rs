#![allow(dead_code)]

use std::f64::consts::TAU;

use deltoid_core::poly::{gamma_point, sample_deltoid};
use deltoid_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` equally spaced points on the boundary curve.
pub fn boundary_points(count: usize) -> Vec<Complex64> {
    (0..count).map(|k| gamma_point(TAU * k as f64 / count as f64)).collect()
}

/// `count` interior points, uniform over the region.
pub fn interior_points(count: usize, seed: u64) -> Vec<Complex64> {
    sample_deltoid(2 * count, seed).split_off(count)
}

/// Uniform points of the region mixing boundary and interior.
pub fn region_points(count: usize, seed: u64) -> Vec<Complex64> {
    sample_deltoid(count, seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).collect()
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn max_abs_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Least-squares slope of `ln(errors[k])` against `k` over `range` (inclusive),
/// where `errors[k - 1]` is the error of iterate `k`.
pub fn log_slope(errors: &[f64], from: usize, to: usize) -> f64 {
    let pts: Vec<(f64, f64)> = (from..=to).map(|k| (k as f64, errors[k - 1].ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
