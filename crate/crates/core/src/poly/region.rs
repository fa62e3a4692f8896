use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;

use super::{cubic_roots_general, gamma_point};
use crate::error::{Error, Result};
use crate::rng;

/// Cusps of the deltoid: the cube roots of unity.
pub const CUSPS: [Complex64; 3] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(-0.5, 0.866_025_403_784_438_6),
    Complex64::new(-0.5, -0.866_025_403_784_438_6),
];

/// Membership parameters for the closed deltoid region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltoidRegion {
    root_tolerance: f64,
    boundary_samples: usize,
}

impl Default for DeltoidRegion {
    fn default() -> Self {
        Self { root_tolerance: 1e-9, boundary_samples: 4096 }
    }
}

impl DeltoidRegion {
    pub fn new(root_tolerance: f64, boundary_samples: usize) -> Result<Self> {
        if !(root_tolerance > 0.0) {
            return Err(Error::Domain(format!("root_tolerance must be positive, got {root_tolerance}")));
        }
        if boundary_samples < 64 {
            return Err(Error::Domain(format!("boundary_samples must be at least 64, got {boundary_samples}")));
        }
        Ok(Self { root_tolerance, boundary_samples })
    }

    pub fn root_tolerance(&self) -> f64 {
        self.root_tolerance
    }

    pub fn boundary_samples(&self) -> usize {
        self.boundary_samples
    }

    /// `z` lies in the region iff every root of `p_z` has modulus at most
    /// `1 + root_tolerance`. Points within the tolerance of a cusp count as
    /// inside.
    pub fn contains(&self, z: Complex64) -> bool {
        if !z.is_finite() {
            return false;
        }
        if CUSPS.iter().any(|c| (z - c).norm() <= self.root_tolerance) {
            return true;
        }
        let limit = 1.0 + self.root_tolerance;
        cubic_roots_general(z).iter().all(|r| r.norm() <= limit)
    }

    /// Vertices of the boundary polygon, `gamma` at `boundary_samples`
    /// equally spaced parameters.
    pub fn boundary_polygon(&self) -> Vec<Complex64> {
        let n = self.boundary_samples;
        (0..n).map(|k| gamma_point(TAU * k as f64 / n as f64)).collect()
    }

    /// Even-odd ray casting against [`boundary_polygon`](Self::boundary_polygon).
    /// Independent of the root criterion; used to cross-check it.
    pub fn polygon_contains(&self, z: Complex64) -> bool {
        polygon_contains(&self.boundary_polygon(), z)
    }
}

/// Shorthand for `region.contains(z)`.
pub fn in_deltoid(z: Complex64, region: &DeltoidRegion) -> bool {
    region.contains(z)
}

pub(crate) fn polygon_contains(vertices: &[Complex64], z: Complex64) -> bool {
    let mut inside = false;
    let n = vertices.len();
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        if (a.im > z.im) != (b.im > z.im) {
            let x = a.re + (z.im - a.im) * (b.re - a.re) / (b.im - a.im);
            if z.re < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// `count` points of the region: the first half on the boundary curve at
/// equally spaced parameters, the rest uniform in the interior by rejection
/// from `[-1, 1]^2`.
pub fn sample_deltoid(count: usize, seed: u64) -> Vec<Complex64> {
    let boundary = count / 2;
    let mut out: Vec<Complex64> = (0..boundary)
        .map(|k| gamma_point(2.0 * PI * k as f64 / boundary as f64))
        .collect();
    let region = DeltoidRegion::default();
    let mut rng = rng::seeded(seed, 0);
    while out.len() < count {
        let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if region.contains(z) {
            out.push(z);
        }
    }
    out
}
