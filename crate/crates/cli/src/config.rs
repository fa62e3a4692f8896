use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use deltoid_core::Method;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodName {
    Power,
    Cheb1,
    Deltoid,
    #[value(name = "deltoid-dyn")]
    DeltoidDyn,
}

impl MethodName {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodName::Power => "power",
            MethodName::Cheb1 => "cheb1",
            MethodName::Deltoid => "deltoid",
            MethodName::DeltoidDyn => "deltoid-dyn",
        }
    }

    fn needs_beta(self) -> bool {
        matches!(self, MethodName::Cheb1 | MethodName::Deltoid)
    }
}

/// `toy`, `barbell`, or `file:<path>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixKind {
    Toy,
    Barbell,
    File(PathBuf),
}

impl FromStr for MatrixKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "toy" => Ok(MatrixKind::Toy),
            "barbell" => Ok(MatrixKind::Barbell),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(MatrixKind::File(PathBuf::from(p))),
                _ => Err(format!("expected toy, barbell or file:<path>, got '{s}'")),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MatrixSpec {
    Toy,
    Barbell { n: usize, p: f64, seed: u64 },
    File(PathBuf),
}

impl MatrixSpec {
    pub fn new(kind: MatrixKind, n: usize, p: f64, seed: u64) -> Result<Self, CliError> {
        Ok(match kind {
            MatrixKind::Toy => MatrixSpec::Toy,
            MatrixKind::File(path) => MatrixSpec::File(path),
            MatrixKind::Barbell => {
                if n < 2 {
                    return Err(CliError::invalid(format!("--n: barbell block size must be at least 2, got {n}")));
                }
                if !(p > 0.0 && p < 1.0) {
                    return Err(CliError::invalid(format!("--p: edge probability must lie in (0, 1), got {p}")));
                }
                MatrixSpec::Barbell { n, p, seed }
            }
        })
    }
}

/// Validated settings of one `converge` run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub matrix: MatrixSpec,
    pub methods: Vec<MethodName>,
    pub iterations: usize,
    pub beta: Option<f64>,
    pub beta_oracle: bool,
    pub lambda2: Option<f64>,
    pub start_seed: u64,
    pub reference_tol: f64,
    pub reference_max_iters: usize,
    pub out: Option<PathBuf>,
}

/// Iterations of the dynamic warmup that seeds the reference eigenpair.
pub const REFERENCE_WARMUP: usize = 5000;

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.methods.is_empty() {
            return Err(CliError::invalid("--methods: at least one method is required"));
        }
        for (i, m) in self.methods.iter().enumerate() {
            if self.methods[..i].contains(m) {
                return Err(CliError::invalid(format!("--methods: '{}' is listed twice", m.as_str())));
            }
        }
        if self.iterations == 0 {
            return Err(CliError::invalid("--iterations: must be positive"));
        }
        let momentum2 = self.methods.iter().any(|m| matches!(m, MethodName::Deltoid | MethodName::DeltoidDyn));
        if momentum2 && self.iterations < 3 {
            return Err(CliError::invalid(format!(
                "--iterations: deltoid methods need at least 3, got {}",
                self.iterations
            )));
        }

        let needs_beta = self.methods.iter().any(|m| m.needs_beta());
        match (self.beta, self.beta_oracle) {
            (Some(_), true) => return Err(CliError::invalid("--beta: conflicts with --beta-oracle")),
            (Some(b), false) if !b.is_finite() => {
                return Err(CliError::invalid(format!("--beta: must be finite, got {b}")))
            }
            (Some(_), false) if !needs_beta => {
                return Err(CliError::invalid("--beta: only cheb1 and deltoid take a fixed beta"))
            }
            (None, false) if needs_beta => {
                return Err(CliError::invalid(
                    "--beta: required when cheb1 or deltoid is selected without --beta-oracle",
                ))
            }
            _ => {}
        }
        match (self.lambda2, self.beta_oracle) {
            (Some(_), false) => return Err(CliError::invalid("--lambda2: only used together with --beta-oracle")),
            (Some(l), true) if !(l.is_finite() && l > 0.0) => {
                return Err(CliError::invalid(format!("--lambda2: must be positive and finite, got {l}")))
            }
            (None, true) if self.matrix != MatrixSpec::Toy => {
                return Err(CliError::invalid("--lambda2: required with --beta-oracle unless --matrix is toy"))
            }
            _ => {}
        }
        if !(self.reference_tol > 0.0) {
            return Err(CliError::invalid(format!(
                "--reference-tol: must be positive, got {}",
                self.reference_tol
            )));
        }
        if self.reference_max_iters == 0 {
            return Err(CliError::invalid("--reference-max-iters: must be positive"));
        }
        Ok(())
    }

    /// `lambda_2` for the oracle; the toy default is 1.
    pub fn oracle_lambda2(&self) -> Option<f64> {
        self.beta_oracle.then(|| self.lambda2.unwrap_or(1.0))
    }

    /// Methods with their parameters resolved.
    pub fn resolved_methods(&self) -> Vec<Method> {
        let lambda2 = self.oracle_lambda2();
        self.methods
            .iter()
            .map(|m| match m {
                MethodName::Power => Method::Power,
                MethodName::DeltoidDyn => Method::DynamicDeltoid,
                MethodName::Cheb1 => Method::Chebyshev {
                    beta: self.beta.or(lambda2.map(|l| l * l / 4.0)).unwrap_or(0.0),
                },
                MethodName::Deltoid => Method::Deltoid {
                    beta: self.beta.or(lambda2.map(|l| 4.0 * l.powi(3) / 27.0)).unwrap_or(0.0),
                },
            })
            .collect()
    }

    /// The scale `lambda_*` of the deltoid filter, when one is fixed: the
    /// oracle `lambda_2`, or the root of `beta = 4 lambda_*^3 / 27`.
    pub fn lambda_star(&self) -> Option<f64> {
        if let Some(l) = self.oracle_lambda2() {
            return Some(l);
        }
        if self.methods.contains(&MethodName::Deltoid) {
            return self.beta.map(|b| (27.0 * b / 4.0).cbrt());
        }
        None
    }
}

/// `(1 + sqrt(|lambda1 / lambda_star| - 1))^{-k}` for `k = 1..=iterations`.
pub fn rate_line(lambda1: f64, lambda_star: f64, iterations: usize) -> Option<Vec<f64>> {
    let ratio = (lambda1 / lambda_star).abs();
    if !(ratio >= 1.0) || !ratio.is_finite() {
        return None;
    }
    let base = 1.0 + (ratio - 1.0).sqrt();
    Some((1..=iterations).map(|k| base.powi(-(k as i32))).collect())
}
