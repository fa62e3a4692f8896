//! Test matrices and a residual-certified reference eigenpair.

use std::io::{BufRead, Write};

use rand::Rng;

use crate::error::{Error, Result};
use crate::iterative::{dot, dynamic_deltoid, norm, residual, seeded_start_vector, LinearOperator, RunOptions};
use crate::rng;

/// Square dense matrix, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Dimension { expected: n * n, actual: data.len() });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::Dimension { expected: n, actual: r.len() });
            }
            data.extend_from_slice(r);
        }
        Self::from_row_major(n, data)
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.n..(row + 1) * self.n]
    }
}

impl LinearOperator for DenseMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = dot(self.row(i), x);
        }
    }
}

/// Square sparse matrix in compressed-row form.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Validates the layout: offsets nondecreasing from zero to `nnz`, column
    /// indices in range and strictly increasing within each row.
    pub fn new(n: usize, row_offsets: Vec<usize>, col_indices: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if row_offsets.len() != n + 1 {
            return Err(Error::Dimension { expected: n + 1, actual: row_offsets.len() });
        }
        if col_indices.len() != values.len() {
            return Err(Error::Dimension { expected: col_indices.len(), actual: values.len() });
        }
        if row_offsets[0] != 0 || row_offsets[n] != col_indices.len() {
            return Err(Error::Domain("row offsets must run from 0 to nnz".into()));
        }
        for (i, w) in row_offsets.windows(2).enumerate() {
            if w[0] > w[1] {
                return Err(Error::Domain(format!("row offsets decrease at row {i}")));
            }
            let cols = &col_indices[w[0]..w[1]];
            if cols.iter().any(|c| *c >= n) {
                return Err(Error::Domain(format!("column index out of range in row {i}")));
            }
            if cols.windows(2).any(|c| c[0] >= c[1]) {
                return Err(Error::Domain(format!("unsorted or duplicate columns in row {i}")));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(Self { n, row_offsets, col_indices, values })
    }

    /// Builds from `(row, col, value)` triplets in any order; duplicates are
    /// rejected.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Result<Self> {
        triplets.sort_by_key(|t| (t.0, t.1));
        let mut row_offsets = vec![0usize; n + 1];
        for &(r, c, _) in &triplets {
            if r >= n || c >= n {
                return Err(Error::Domain(format!("entry ({r}, {c}) outside a {n}x{n} matrix")));
            }
            row_offsets[r + 1] += 1;
        }
        for i in 0..n {
            row_offsets[i + 1] += row_offsets[i];
        }
        let col_indices = triplets.iter().map(|t| t.1).collect();
        let values = triplets.iter().map(|t| t.2).collect();
        Self::new(n, row_offsets, col_indices, values)
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Stored value at `(row, col)`, zero when absent.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        let span = self.row_offsets[row]..self.row_offsets[row + 1];
        match self.col_indices[span.clone()].binary_search(&col) {
            Ok(i) => self.values[span.start + i],
            Err(_) => 0.0,
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |r| {
            (self.row_offsets[r]..self.row_offsets[r + 1]).map(move |i| (r, self.col_indices[i], self.values[i]))
        })
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n];
        for (c, v) in self.col_indices.iter().zip(&self.values) {
            sums[*c] += v;
        }
        sums
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut data = vec![0.0; self.n * self.n];
        for (r, c, v) in self.triplets() {
            data[r * self.n + c] = v;
        }
        DenseMatrix { n: self.n, data }
    }

    /// Text export: a header line `n nnz`, then one `row col value` line per
    /// stored entry, 0-indexed, in row-major order.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {}", self.n, self.nnz())?;
        for (r, c, v) in self.triplets() {
            writeln!(out, "{r} {c} {v:e}")?;
        }
        Ok(())
    }

    /// Parses the format written by [`write_text`](Self::write_text). Blank
    /// lines and lines starting with `#` are skipped.
    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut triplets = Vec::new();
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = text.split_whitespace().collect();
            let parse_err = |message: String| Error::Parse { line: lineno, message };
            match header {
                None => {
                    if fields.len() != 2 {
                        return Err(parse_err(format!("expected header `n nnz`, got `{text}`")));
                    }
                    let n = fields[0].parse().map_err(|e| parse_err(format!("bad n: {e}")))?;
                    let nnz = fields[1].parse().map_err(|e| parse_err(format!("bad nnz: {e}")))?;
                    header = Some((n, nnz));
                }
                Some(_) => {
                    if fields.len() != 3 {
                        return Err(parse_err(format!("expected `row col value`, got `{text}`")));
                    }
                    let r: usize = fields[0].parse().map_err(|e| parse_err(format!("bad row: {e}")))?;
                    let c: usize = fields[1].parse().map_err(|e| parse_err(format!("bad col: {e}")))?;
                    let v: f64 = fields[2].parse().map_err(|e| parse_err(format!("bad value: {e}")))?;
                    triplets.push((r, c, v));
                }
            }
        }
        let (n, nnz) = header.ok_or(Error::Parse { line: 0, message: "empty matrix file".into() })?;
        if triplets.len() != nnz {
            return Err(Error::Parse {
                line: 0,
                message: format!("header declares {nnz} entries, found {}", triplets.len()),
            });
        }
        Self::from_triplets(n, triplets)
    }
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (r, yr) in y.iter_mut().enumerate() {
            let span = self.row_offsets[r]..self.row_offsets[r + 1];
            let cols = &self.col_indices[span.clone()];
            let vals = &self.values[span];
            // four independent partial sums hide the gather latency
            let mut acc = [0.0; 4];
            let mut cc = cols.chunks_exact(4);
            let mut vc = vals.chunks_exact(4);
            for (c, v) in (&mut cc).zip(&mut vc) {
                for k in 0..4 {
                    acc[k] += v[k] * x[c[k]];
                }
            }
            let tail: f64 = cc.remainder().iter().zip(vc.remainder()).map(|(c, v)| v * x[*c]).sum();
            *yr = (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail;
        }
    }
}

/// The 4x4 matrix `diag(101/100, 1)` joined with the rotation block
/// `[[0, -1/3], [1/3, 0]]`; eigenvalues `1.01, 1, i/3, -i/3`.
pub fn toy_matrix() -> DenseMatrix {
    DenseMatrix::from_rows(&[
        vec![1.01, 0.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, -1.0 / 3.0],
        vec![0.0, 0.0, 1.0 / 3.0, 0.0],
    ])
    .expect("toy matrix is well formed")
}

/// Column-stochastic transition matrix of a random barbell graph on `2n`
/// nodes.
///
/// The adjacency `B` has two independent `n x n` Bernoulli(`p`) diagonal
/// blocks and the bridge `B[n-1, n] = B[n, n-1] = 1`. Empty columns receive
/// a self loop; the result is `B D^{-1}` with `D` the column sums of `B`.
pub fn barbell_matrix(n: usize, p: f64, seed: u64) -> Result<CsrMatrix> {
    if n < 2 {
        return Err(Error::Domain(format!("barbell block size must be at least 2, got {n}")));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("edge probability must lie in (0, 1), got {p}")));
    }
    let size = 2 * n;
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); size];
    for block in 0..2 {
        let mut rng = rng::seeded(seed, 2 + block as u64);
        let base = block * n;
        for i in 0..n {
            let row = &mut rows[base + i];
            for j in 0..n {
                if rng.random::<f64>() < p {
                    row.push(base + j);
                }
            }
        }
    }
    for (row, col) in [(n - 1, n), (n, n - 1)] {
        let pos = rows[row].partition_point(|c| *c < col);
        rows[row].insert(pos, col);
    }

    let mut counts = vec![0usize; size];
    for row in &rows {
        for c in row {
            counts[*c] += 1;
        }
    }
    for (i, count) in counts.iter_mut().enumerate() {
        if *count == 0 {
            let row = &mut rows[i];
            let pos = row.partition_point(|c| *c < i);
            row.insert(pos, i);
            *count = 1;
        }
    }

    let mut row_offsets = Vec::with_capacity(size + 1);
    row_offsets.push(0);
    let mut col_indices = Vec::new();
    let mut values = Vec::new();
    for row in &rows {
        for &c in row {
            col_indices.push(c);
            values.push(1.0 / counts[c] as f64);
        }
        row_offsets.push(col_indices.len());
    }
    CsrMatrix::new(size, row_offsets, col_indices, values)
}

/// Dominant eigenpair from the plain power method.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// Unit vector, signed so that its entries sum to a nonnegative value.
    pub vector: Vec<f64>,
    /// `|A x - value x|` for the returned vector.
    pub residual: f64,
    pub iterations: usize,
    /// Whether `residual <= tol |value|` held.
    pub certified: bool,
}

/// Seed of the start vector used by [`reference_eigenpair`].
pub const REFERENCE_SEED: u64 = 0x5eed_0fe1;

/// Power iteration until `|A x - nu x| <= tol |nu|`. On failure the last
/// iterate is returned inside [`Error::NoConvergence`].
pub fn reference_eigenpair<A: LinearOperator + ?Sized>(a: &A, tol: f64, max_iters: usize) -> Result<EigenPair> {
    reference_eigenpair_from(a, &seeded_start_vector(a.dim(), REFERENCE_SEED), tol, max_iters)
}

/// [`reference_eigenpair`] started from `start`.
pub fn reference_eigenpair_from<A: LinearOperator + ?Sized>(
    a: &A,
    start: &[f64],
    tol: f64,
    max_iters: usize,
) -> Result<EigenPair> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if max_iters == 0 {
        return Err(Error::Domain("max_iters must be positive".into()));
    }
    let dim = a.dim();
    if start.len() != dim {
        return Err(Error::Dimension { expected: dim, actual: start.len() });
    }
    let h0 = norm(start);
    if !(h0 > 0.0) || !h0.is_finite() {
        return Err(Error::Domain("start vector must be nonzero and finite".into()));
    }
    let mut x: Vec<f64> = start.iter().map(|v| v / h0).collect();
    let mut v = vec![0.0; dim];
    let mut last = (0.0, f64::INFINITY);
    for it in 1..=max_iters {
        a.apply(&x, &mut v);
        let nu = dot(&v, &x);
        let res = residual(&v, nu, &x);
        last = (nu, res);
        if res <= tol * nu.abs() {
            return Ok(finish(nu, x, res, it, true));
        }
        let h = norm(&v);
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Breakdown { step: it, norm: h });
        }
        x.iter_mut().zip(&v).for_each(|(xi, vi)| *xi = vi / h);
    }
    let best = finish(last.0, x, last.1, max_iters, false);
    Err(Error::NoConvergence { best: Box::new(best) })
}

/// Reference pair for slowly mixing matrices. Up to `warmup` steps of the
/// dynamic deltoid iteration from the reference seed supply the start
/// vector; the plain power method then certifies it with the same residual
/// test as [`reference_eigenpair`]. Falls back to the seeded start if the
/// warmup breaks down.
pub fn accelerated_reference<A: LinearOperator + ?Sized>(
    a: &A,
    tol: f64,
    warmup: usize,
    max_iters: usize,
) -> Result<EigenPair> {
    let seeded = seeded_start_vector(a.dim(), REFERENCE_SEED);
    let start = if warmup >= 3 {
        match dynamic_deltoid(a, &seeded, warmup, &RunOptions::default()) {
            Ok(trace) => trace.x,
            Err(Error::Breakdown { .. }) => seeded,
            Err(e) => return Err(e),
        }
    } else {
        seeded
    };
    reference_eigenpair_from(a, &start, tol, max_iters)
}

fn finish(value: f64, mut vector: Vec<f64>, residual: f64, iterations: usize, certified: bool) -> EigenPair {
    if vector.iter().sum::<f64>() < 0.0 {
        vector.iter_mut().for_each(|v| *v = -*v);
    }
    EigenPair { value, vector, residual, iterations, certified }
}
