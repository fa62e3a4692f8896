use num_complex::Complex64;

use super::eval_p_scaled;
use crate::error::{Error, Result};

/// Magnitudes above this are stored as this value.
pub const RASTER_CLAMP: f64 = 1e6;

/// Square grid of `resolution x resolution` cells over
/// `[re_min, re_max] x [im_min, im_max]`. Row 0 is the top row (largest
/// imaginary part); column 0 the leftmost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub resolution: usize,
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::unit_square(512)
    }
}

impl GridSpec {
    /// `[-1, 1]^2` at the given resolution.
    pub fn unit_square(resolution: usize) -> Self {
        Self { resolution, re_min: -1.0, re_max: 1.0, im_min: -1.0, im_max: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution == 0 {
            return Err(Error::Domain("grid resolution must be positive".into()));
        }
        if !(self.re_max > self.re_min) || !(self.im_max > self.im_min) {
            return Err(Error::Domain("grid extent must be a nonempty box".into()));
        }
        Ok(())
    }

    /// Center of cell `(row, col)`.
    pub fn cell_center(&self, row: usize, col: usize) -> Complex64 {
        let n = self.resolution as f64;
        let dx = (self.re_max - self.re_min) / n;
        let dy = (self.im_max - self.im_min) / n;
        Complex64::new(
            self.re_min + (col as f64 + 0.5) * dx,
            self.im_max - (row as f64 + 0.5) * dy,
        )
    }
}

/// Row-major magnitudes `|P_n|` at cell centers.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub n: usize,
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl Raster {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.grid.resolution + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.grid.resolution)
    }

    /// Cell centers paired with their values.
    pub fn cells(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        let res = self.grid.resolution;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.grid.cell_center(i / res, i % res), *v))
    }
}

/// `|P_n(z)|` at every cell center, clamped at [`RASTER_CLAMP`].
pub fn raster_magnitude(n: usize, grid: &GridSpec) -> Result<Raster> {
    grid.validate()?;
    let res = grid.resolution;
    let mut values = Vec::with_capacity(res * res);
    for row in 0..res {
        for col in 0..res {
            let v = eval_p_scaled(n, grid.cell_center(row, col));
            let clamp_log2 = RASTER_CLAMP.log2();
            let mag = if v.log2_abs() >= clamp_log2 { RASTER_CLAMP } else { v.abs() };
            values.push(mag);
        }
    }
    Ok(Raster { n, grid: *grid, values })
}
