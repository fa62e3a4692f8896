use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use deltoid_core::iterative::{run, seeded_start_vector};
use deltoid_core::matgen::{accelerated_reference, barbell_matrix, toy_matrix, REFERENCE_SEED};
use deltoid_core::poly::{raster_magnitude, sample_deltoid, GridSpec, RASTER_CLAMP};
use deltoid_core::walk::{approx_monomial_with, beta_coeffs, tail_bound, truncation_degree};
use deltoid_core::{CsrMatrix, DenseMatrix, LinearOperator, RunOptions};
use serde::Serialize;

use crate::config::{rate_line, ExperimentConfig, MatrixSpec, REFERENCE_WARMUP};
use crate::error::CliError;
use crate::output::{atomic_write, emit, ensure_dir, num, sidecar_path};

#[derive(Debug, Serialize)]
struct GridJson {
    resolution: usize,
    re_min: f64,
    re_max: f64,
    im_min: f64,
    im_max: f64,
    /// Row 0 holds the largest imaginary part.
    row_order: &'static str,
}

#[derive(Debug, Serialize)]
struct RasterJson<'a> {
    n: usize,
    grid: GridJson,
    clamp: f64,
    values: Vec<&'a [f64]>,
}

/// Writes `region_n{n}.json` into `out_dir` for each degree; returns the paths.
pub fn cmd_region(ns: &[usize], resolution: usize, out_dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    if ns.is_empty() {
        return Err(CliError::invalid("--n: at least one degree is required"));
    }
    let grid = GridSpec::unit_square(resolution);
    grid.validate().map_err(|e| CliError::invalid(format!("--resolution: {e}")))?;
    ensure_dir(out_dir)?;
    let mut written = Vec::with_capacity(ns.len());
    for &n in ns {
        let raster = raster_magnitude(n, &grid)?;
        let doc = RasterJson {
            n,
            grid: GridJson {
                resolution,
                re_min: grid.re_min,
                re_max: grid.re_max,
                im_min: grid.im_min,
                im_max: grid.im_max,
                row_order: "top_to_bottom",
            },
            clamp: RASTER_CLAMP,
            values: raster.rows().collect(),
        };
        let bytes = serde_json::to_vec(&doc).map_err(|e| CliError::invalid(e.to_string()))?;
        let path = out_dir.join(format!("region_n{n}.json"));
        atomic_write(&path, &bytes)?;
        written.push(path);
    }
    Ok(written)
}

/// Columns `k,beta_k`, one row per `k = 0..=n`, then a `sum` footer row.
pub fn coeffs_csv(n: usize) -> String {
    let beta = beta_coeffs(n);
    let mut out = String::from("k,beta_k\n");
    for (k, b) in beta.beta.iter().enumerate() {
        let _ = writeln!(out, "{k},{}", num(*b));
    }
    let _ = writeln!(out, "sum,{}", num(beta.sum()));
    out
}

pub fn cmd_coeffs(n: usize, out: Option<&Path>) -> Result<(), CliError> {
    emit(out, coeffs_csv(n).as_bytes())
}

/// One row per `(n, t)`: the largest `|z^n - approx|` over region samples
/// next to the bound `2 exp(-t^2/7)`.
pub fn approx_csv(ns: &[usize], ts: &[f64], samples: usize, seed: u64) -> Result<String, CliError> {
    if ns.is_empty() || ns.contains(&0) {
        return Err(CliError::invalid("--n: give at least one degree, each at least 1"));
    }
    if ts.is_empty() || ts.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
        return Err(CliError::invalid("--t: give at least one positive, finite value"));
    }
    if samples == 0 {
        return Err(CliError::invalid("--samples: must be positive"));
    }
    let points = sample_deltoid(samples, seed);
    let mut out = String::from("n,t,degree,samples,max_err,bound,pass\n");
    for &n in ns {
        let beta = beta_coeffs(n);
        for &t in ts {
            let mut worst = 0.0f64;
            for &z in &points {
                let approx = approx_monomial_with(&beta, z, t)?;
                worst = worst.max((z.powi(n as i32) - approx).norm());
            }
            let bound = tail_bound(t);
            let _ = writeln!(
                out,
                "{n},{},{},{samples},{},{},{}",
                num(t),
                truncation_degree(n, t),
                num(worst),
                num(bound),
                worst <= bound
            );
        }
    }
    Ok(out)
}

pub fn cmd_approx(ns: &[usize], ts: &[f64], samples: usize, seed: u64, out: Option<&Path>) -> Result<(), CliError> {
    emit(out, approx_csv(ns, ts, samples, seed)?.as_bytes())
}

#[derive(Debug)]
pub enum LoadedMatrix {
    Dense(DenseMatrix),
    Sparse(CsrMatrix),
}

impl LoadedMatrix {
    pub fn load(spec: &MatrixSpec) -> Result<Self, CliError> {
        Ok(match spec {
            MatrixSpec::Toy => LoadedMatrix::Dense(toy_matrix()),
            MatrixSpec::Barbell { n, p, seed } => LoadedMatrix::Sparse(barbell_matrix(*n, *p, *seed)?),
            MatrixSpec::File(path) => {
                let file = File::open(path).map_err(|e| CliError::io(path, e))?;
                let m = CsrMatrix::read_text(BufReader::new(file)).map_err(|e| match e {
                    deltoid_core::Error::Io(source) => CliError::io(path, source),
                    other => CliError::invalid(format!("{}: {other}", path.display())),
                })?;
                LoadedMatrix::Sparse(m)
            }
        })
    }

    pub fn op(&self) -> &dyn LinearOperator {
        match self {
            LoadedMatrix::Dense(m) => m,
            LoadedMatrix::Sparse(m) => m,
        }
    }

    pub fn to_csr(&self) -> Result<CsrMatrix, CliError> {
        match self {
            LoadedMatrix::Sparse(m) => Ok(m.clone()),
            LoadedMatrix::Dense(m) => {
                let n = m.dim();
                let triplets = (0..n)
                    .flat_map(|r| (0..n).map(move |c| (r, c)))
                    .map(|(r, c)| (r, c, m.get(r, c)))
                    .filter(|t| t.2 != 0.0)
                    .collect();
                Ok(CsrMatrix::from_triplets(n, triplets)?)
            }
        }
    }
}

#[derive(Debug, Serialize)]
struct MatrixMeta {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
    dim: usize,
}

#[derive(Debug, Serialize)]
struct MethodMeta {
    name: &'static str,
    beta: Option<f64>,
    rows: usize,
    converged: bool,
    final_rel_err: Option<f64>,
}

#[derive(Debug, Serialize)]
struct ReferenceMeta {
    lambda1: f64,
    residual: f64,
    tol: f64,
    power_iterations: usize,
    warmup_iterations: usize,
    start_seed: u64,
}

#[derive(Debug, Serialize)]
struct ConvergeMeta {
    matrix: MatrixMeta,
    iterations: usize,
    start_seed: u64,
    beta_oracle: bool,
    lambda2: Option<f64>,
    methods: Vec<MethodMeta>,
    reference: ReferenceMeta,
    lambda_star: Option<f64>,
    /// `(1 + sqrt(|lambda1/lambda_star| - 1))^{-k}` for `k = 1..=iterations`.
    rate_line: Option<Vec<f64>>,
}

/// Output of a `converge` run: the long-format CSV and its metadata.
#[derive(Debug)]
pub struct ConvergeOutput {
    pub csv: String,
    pub meta: String,
}

pub fn converge(config: &ExperimentConfig) -> Result<ConvergeOutput, CliError> {
    config.validate()?;
    let matrix = LoadedMatrix::load(&config.matrix)?;
    let a = matrix.op();
    let reference = accelerated_reference(a, config.reference_tol, REFERENCE_WARMUP, config.reference_max_iters)?;
    let v0 = seeded_start_vector(a.dim(), config.start_seed);
    let opts = RunOptions::with_reference(&reference.vector);

    let mut csv = String::from("iter,method,h,nu,d,beta_used,rel_err\n");
    let mut methods = Vec::new();
    for method in config.resolved_methods() {
        let trace = run(a, &v0, config.iterations, method, &opts)?;
        for r in &trace.records {
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{}",
                r.iter,
                method.name(),
                num(r.h),
                num(r.nu),
                num(r.d),
                num(r.beta),
                num(r.rel_err.unwrap_or(f64::NAN))
            );
        }
        let beta = match method {
            deltoid_core::Method::Chebyshev { beta } | deltoid_core::Method::Deltoid { beta } => Some(beta),
            _ => None,
        };
        methods.push(MethodMeta {
            name: method.name(),
            beta,
            rows: trace.records.len(),
            converged: trace.converged,
            final_rel_err: trace.final_rel_err(),
        });
    }

    let lambda_star = config.lambda_star();
    let matrix_meta = match &config.matrix {
        MatrixSpec::Toy => MatrixMeta { kind: "toy", n: None, p: None, seed: None, path: None, dim: a.dim() },
        MatrixSpec::Barbell { n, p, seed } => {
            MatrixMeta { kind: "barbell", n: Some(*n), p: Some(*p), seed: Some(*seed), path: None, dim: a.dim() }
        }
        MatrixSpec::File(path) => MatrixMeta {
            kind: "file",
            n: None,
            p: None,
            seed: None,
            path: Some(path.display().to_string()),
            dim: a.dim(),
        },
    };
    let meta = ConvergeMeta {
        matrix: matrix_meta,
        iterations: config.iterations,
        start_seed: config.start_seed,
        beta_oracle: config.beta_oracle,
        lambda2: config.oracle_lambda2(),
        methods,
        reference: ReferenceMeta {
            lambda1: reference.value,
            residual: reference.residual,
            tol: config.reference_tol,
            power_iterations: reference.iterations,
            warmup_iterations: REFERENCE_WARMUP,
            start_seed: REFERENCE_SEED,
        },
        lambda_star,
        rate_line: lambda_star.and_then(|l| rate_line(reference.value, l, config.iterations)),
    };
    let meta = serde_json::to_string_pretty(&meta).map_err(|e| CliError::invalid(e.to_string()))? + "\n";
    Ok(ConvergeOutput { csv, meta })
}

/// Runs the experiment, writes the CSV and, next to it, `<out>.meta.json`.
/// Without `out` the CSV goes to stdout and the metadata to `meta` if given.
pub fn cmd_converge(config: &ExperimentConfig, meta: Option<&Path>) -> Result<Vec<PathBuf>, CliError> {
    let result = converge(config)?;
    let mut written = Vec::new();
    emit(config.out.as_deref(), result.csv.as_bytes())?;
    if let Some(out) = &config.out {
        written.push(out.clone());
    }
    let meta_path = meta.map(Path::to_path_buf).or_else(|| config.out.as_deref().map(sidecar_path));
    if let Some(path) = meta_path {
        atomic_write(&path, result.meta.as_bytes())?;
        written.push(path);
    }
    Ok(written)
}

/// Writes a matrix in the sparse text format.
pub fn cmd_export(spec: &MatrixSpec, out: Option<&Path>) -> Result<(), CliError> {
    let csr = LoadedMatrix::load(spec)?.to_csr()?;
    let mut buf = Vec::new();
    csr.write_text(&mut buf)?;
    emit(out, &buf)
}
