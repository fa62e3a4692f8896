//! Power-type iterations with optional momentum.
//!
//! All methods keep a unit iterate `x_k` and record, for each step `k`,
//! `v_{k+1} = A x_k`, the Rayleigh quotient `nu_k = <v_{k+1}, x_k>`, the
//! residual `d_k = |v_{k+1} - nu_k x_k|` and the normalization
//! `h_{k+1} = |u_{k+1}|` where `u_{k+1}` is the (momentum-corrected) update.
//!
//! * power:        `u_{k+1} = v_{k+1}`
//! * order 1:      `u_{k+1} = v_{k+1} - (beta / h_k) x_{k-1}`
//! * deltoid:      two power steps on `(2/3) A`, then
//!   `u_{k+1} = v_{k+1} - (beta / (h_k h_{k-1})) x_{k-2}`
//! * dynamic:      as deltoid with `beta_k = 4 (nu_k r_k)^3 / 27`,
//!   `r_k = r(min(d_k / d_{k-1}, 1))`

use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng;

/// Matrix-vector product contract.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    /// `y = A x`. Both slices have length [`dim`](Self::dim).
    fn apply(&self, x: &[f64], y: &mut [f64]);

    fn apply_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.apply(x, &mut y);
        y
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        (**self).apply(x, y)
    }
}

/// Residual below which the dynamic method stops.
pub const CONVERGED_RESIDUAL: f64 = 1e-15;

/// Lower clamp for the observed contraction ratio before taking its log.
pub const RHO_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Power,
    /// Order-1 momentum with lag one (Chebyshev).
    Chebyshev { beta: f64 },
    /// Order-2 momentum with lag two and a fixed parameter.
    Deltoid { beta: f64 },
    /// Order-2 momentum with the parameter estimated on the fly.
    DynamicDeltoid,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Power => "power",
            Method::Chebyshev { .. } => "cheb1",
            Method::Deltoid { .. } => "deltoid",
            Method::DynamicDeltoid => "deltoid-dyn",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    /// Index of the iterate produced by this step (`k + 1`).
    pub iter: usize,
    pub h: f64,
    pub nu: f64,
    pub d: f64,
    /// Momentum parameter applied in this step; zero for plain steps.
    pub beta: f64,
    /// Relative error of `x_{k+1}` when a reference vector was supplied.
    pub rel_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub method: Method,
    /// `|v_0|`.
    pub h0: f64,
    pub records: Vec<IterationRecord>,
    /// Final unit iterate.
    pub x: Vec<f64>,
    /// Set when the dynamic method stopped on a vanishing residual.
    pub converged: bool,
    /// `x_0, ..., x_N` when requested.
    pub iterates: Option<Vec<Vec<f64>>>,
    /// The products `v_{k+1}` (including the `2/3` warmup scaling) when requested.
    pub products: Option<Vec<Vec<f64>>>,
}

impl IterationTrace {
    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }

    pub fn final_rel_err(&self) -> Option<f64> {
        self.last().and_then(|r| r.rel_err)
    }

    /// Relative errors indexed by iterate number (`errors[0]` is for `x_1`).
    pub fn rel_errors(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.rel_err.unwrap_or(f64::NAN)).collect()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions<'a> {
    /// Reference eigenvector for relative errors.
    pub reference: Option<&'a [f64]>,
    /// Keep every iterate and product in the trace.
    pub keep_iterates: bool,
}

impl<'a> RunOptions<'a> {
    pub fn with_reference(reference: &'a [f64]) -> Self {
        Self { reference: Some(reference), keep_iterates: false }
    }
}

/// Settings shared by experiment runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumConfig {
    pub iterations: usize,
    pub beta: f64,
    pub seed: u64,
    pub record_errors: bool,
}

impl MomentumConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations < 3 {
            return Err(Error::Domain(format!("iterations must be at least 3, got {}", self.iterations)));
        }
        if !self.beta.is_finite() {
            return Err(Error::Domain("beta must be finite".into()));
        }
        Ok(())
    }

    pub fn start_vector(&self, dim: usize) -> Vec<f64> {
        seeded_start_vector(dim, self.seed)
    }
}

/// Unit vector with i.i.d. uniform `[0, 1)` entries before normalization.
pub fn seeded_start_vector(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng::seeded(seed, 1);
    let mut v: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
    let n = norm(&v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    v
}

pub fn power_method<A: LinearOperator + ?Sized>(
    a: &A,
    v0: &[f64],
    iterations: usize,
    opts: &RunOptions<'_>,
) -> Result<IterationTrace> {
    run(a, v0, iterations, Method::Power, opts)
}

pub fn chebyshev_momentum<A: LinearOperator + ?Sized>(
    a: &A,
    v0: &[f64],
    beta: f64,
    iterations: usize,
    opts: &RunOptions<'_>,
) -> Result<IterationTrace> {
    run(a, v0, iterations, Method::Chebyshev { beta }, opts)
}

pub fn deltoid_momentum<A: LinearOperator + ?Sized>(
    a: &A,
    v0: &[f64],
    beta: f64,
    iterations: usize,
    opts: &RunOptions<'_>,
) -> Result<IterationTrace> {
    run(a, v0, iterations, Method::Deltoid { beta }, opts)
}

pub fn dynamic_deltoid<A: LinearOperator + ?Sized>(
    a: &A,
    v0: &[f64],
    iterations: usize,
    opts: &RunOptions<'_>,
) -> Result<IterationTrace> {
    run(a, v0, iterations, Method::DynamicDeltoid, opts)
}

/// Runs `iterations` steps of `method` from `v0`.
pub fn run<A: LinearOperator + ?Sized>(
    a: &A,
    v0: &[f64],
    iterations: usize,
    method: Method,
    opts: &RunOptions<'_>,
) -> Result<IterationTrace> {
    let dim = a.dim();
    check_len(dim, v0.len())?;
    if let Some(r) = opts.reference {
        check_len(dim, r.len())?;
    }
    let h0 = norm(v0);
    if !(h0 > 0.0) || !h0.is_finite() {
        return Err(Error::Domain("initial vector must be nonzero and finite".into()));
    }
    let momentum_lag = match method {
        Method::Power => 0,
        Method::Chebyshev { beta } => {
            check_beta(beta)?;
            1
        }
        Method::Deltoid { beta } => {
            check_beta(beta)?;
            2
        }
        Method::DynamicDeltoid => 2,
    };
    if momentum_lag == 2 && iterations < 3 {
        return Err(Error::Domain(format!("deltoid methods need at least 3 iterations, got {iterations}")));
    }

    let x0: Vec<f64> = v0.iter().map(|v| v / h0).collect();
    // xs[k] = x_k for the three most recent k, hs[k] = h_k likewise
    let mut history = History::new(x0, h0);
    let mut records = Vec::with_capacity(iterations);
    let mut iterates = opts.keep_iterates.then(|| vec![history.x(0).to_vec()]);
    let mut products = opts.keep_iterates.then(Vec::new);
    let mut v = vec![0.0; dim];
    let mut prev_d = f64::NAN;
    let mut converged = false;

    for k in 0..iterations {
        let warmup = momentum_lag == 2 && k < 2;
        let x_k = history.x(k);
        a.apply(x_k, &mut v);
        if warmup {
            v.iter_mut().for_each(|e| *e *= 2.0 / 3.0);
        }
        let nu = dot(&v, x_k);
        let d = residual(&v, nu, x_k);
        if let Some(p) = products.as_mut() {
            p.push(v.clone());
        }

        let beta = if warmup {
            0.0
        } else {
            match method {
                Method::Power => 0.0,
                Method::Chebyshev { beta } | Method::Deltoid { beta } => beta,
                Method::DynamicDeltoid => {
                    if d <= CONVERGED_RESIDUAL {
                        converged = true;
                        break;
                    }
                    let rho = (d / prev_d).clamp(RHO_FLOOR, 1.0);
                    let r = 1.0 / (rho.ln().powi(2) + 1.0);
                    4.0 * (nu * r).powi(3) / 27.0
                }
            }
        };
        prev_d = d;

        let mut u = std::mem::take(&mut v);
        if beta != 0.0 {
            match momentum_lag {
                1 if k >= 1 => axpy(&mut u, -beta / history.h(k), history.x(k - 1)),
                2 if k >= 2 => {
                    let c = beta / (history.h(k) * history.h(k - 1));
                    axpy(&mut u, -c, history.x(k - 2));
                }
                _ => {}
            }
        }
        let h = norm(&u);
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Breakdown { step: k + 1, norm: h });
        }
        u.iter_mut().for_each(|e| *e /= h);
        let rel_err = opts.reference.map(|phi| relative_error_unchecked(&u, phi));
        records.push(IterationRecord { iter: k + 1, h, nu, d, beta, rel_err });
        if let Some(it) = iterates.as_mut() {
            it.push(u.clone());
        }
        v = history.push(u, h);
    }

    Ok(IterationTrace {
        method,
        h0,
        records,
        x: history.latest().to_vec(),
        converged,
        iterates,
        products,
    })
}

/// Ring buffer holding `x_{k-2..=k}` and `h_{k-2..=k}`.
struct History {
    xs: [Vec<f64>; 3],
    hs: [f64; 3],
    newest: usize,
}

impl History {
    fn new(x0: Vec<f64>, h0: f64) -> Self {
        let dim = x0.len();
        Self { xs: [x0, vec![0.0; dim], vec![0.0; dim]], hs: [h0, 0.0, 0.0], newest: 0 }
    }

    fn x(&self, k: usize) -> &[f64] {
        &self.xs[k % 3]
    }

    fn h(&self, k: usize) -> f64 {
        self.hs[k % 3]
    }

    fn latest(&self) -> &[f64] {
        &self.xs[self.newest % 3]
    }

    /// Stores `x_{k+1}` and returns the evicted buffer for reuse.
    fn push(&mut self, x: Vec<f64>, h: f64) -> Vec<f64> {
        self.newest += 1;
        let slot = self.newest % 3;
        self.hs[slot] = h;
        std::mem::replace(&mut self.xs[slot], x)
    }
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::Dimension { expected, actual })
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("beta must be finite, got {beta}")))
    }
}

/// `y = A_beta x` for the block operator
///
/// ```text
/// [ A  0  -beta I ]
/// [ I  0   0      ]
/// [ 0  I   0      ]
/// ```
///
/// without forming it.
pub fn augmented_apply<A: LinearOperator + ?Sized>(a: &A, beta: f64, y: &[f64]) -> Result<Vec<f64>> {
    let n = a.dim();
    check_len(3 * n, y.len())?;
    let mut out = vec![0.0; 3 * n];
    AugmentedOperator { inner: a, beta }.apply(y, &mut out);
    Ok(out)
}

/// The block operator of [`augmented_apply`] as a [`LinearOperator`].
#[derive(Debug, Clone, Copy)]
pub struct AugmentedOperator<'a, A: ?Sized> {
    pub inner: &'a A,
    pub beta: f64,
}

impl<A: LinearOperator + ?Sized> LinearOperator for AugmentedOperator<'_, A> {
    fn dim(&self) -> usize {
        3 * self.inner.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.inner.dim();
        let (y1, rest) = y.split_at_mut(n);
        let (y2, y3) = rest.split_at_mut(n);
        self.inner.apply(&x[..n], y1);
        axpy(y1, -self.beta, &x[2 * n..]);
        y2.copy_from_slice(&x[..n]);
        y3.copy_from_slice(&x[n..2 * n]);
    }
}

/// `r(rho) = 1 / ((log rho)^2 + 1)`, mapping an observed contraction ratio
/// to an eigenvalue-ratio estimate.
pub fn rate_of_rho(rho: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("rho must be positive, got {rho}")));
    }
    Ok(1.0 / (rho.ln().powi(2) + 1.0))
}

/// Inverse of [`rate_of_rho`] on `(0, 1]`: `rho(r) = exp(-sqrt(1/r - 1))`.
pub fn rho_of_rate(r: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::Domain(format!("r must lie in (0, 1], got {r}")));
    }
    Ok((-(1.0 / r - 1.0).sqrt()).exp())
}

/// Phase-invariant relative error of `x` as an approximation of `phi`:
/// `|phi - (<phi, x> / |x|^2) x| / |phi|`.
///
/// Evaluated as the sine of the angle between the two lines, computed from
/// the chord between phase-aligned unit vectors so that tiny errors are not
/// lost to cancellation.
pub fn relative_error(x: &[f64], phi: &[f64]) -> Result<f64> {
    check_len(phi.len(), x.len())?;
    if norm(x) == 0.0 || norm(phi) == 0.0 {
        return Err(Error::Domain("relative error needs nonzero vectors".into()));
    }
    Ok(relative_error_unchecked(x, phi))
}

fn relative_error_unchecked(x: &[f64], phi: &[f64]) -> f64 {
    let nx = norm(x);
    let nphi = norm(phi);
    let s = x.iter().zip(phi).map(|(a, b)| a * b).sum::<f64>();
    if s == 0.0 {
        return 1.0;
    }
    let sign = s.signum();
    let chord_sq: f64 = x
        .iter()
        .zip(phi)
        .map(|(a, b)| {
            let d = sign * a / nx - b / nphi;
            d * d
        })
        .sum();
    sine_from_chord(chord_sq)
}

/// Complex version of [`relative_error`], with `<a, b> = sum a_i conj(b_i)`.
pub fn relative_error_complex(x: &[Complex64], phi: &[Complex64]) -> Result<f64> {
    check_len(phi.len(), x.len())?;
    let nx = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let nphi = phi.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if nx == 0.0 || nphi == 0.0 {
        return Err(Error::Domain("relative error needs nonzero vectors".into()));
    }
    let s: Complex64 = phi.iter().zip(x).map(|(p, v)| p * v.conj()).sum();
    if s.norm() == 0.0 {
        return Ok(1.0);
    }
    let phase = s / s.norm();
    let chord_sq: f64 = x
        .iter()
        .zip(phi)
        .map(|(a, b)| (phase * a / nx - b / nphi).norm_sqr())
        .sum();
    Ok(sine_from_chord(chord_sq))
}

/// `sin(theta)` from the chord `|u - f|^2 = 4 sin^2(theta/2)` of unit vectors.
fn sine_from_chord(chord_sq: f64) -> f64 {
    let c = chord_sq.sqrt();
    (c * (1.0 - chord_sq / 4.0).max(0.0).sqrt()).min(1.0)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `|v - nu x|`.
pub(crate) fn residual(v: &[f64], nu: f64, x: &[f64]) -> f64 {
    v.iter().zip(x).map(|(a, b)| (a - nu * b).powi(2)).sum::<f64>().sqrt()
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    y.iter_mut().zip(x).for_each(|(a, b)| *a += alpha * b);
}
