//! The Markov walk `Y_n` behind the expansion `z^n = sum_k beta_k P_k(z)`.
//!
//! Transitions (mirrored for negative states):
//!
//! ```text
//! 0  -> +1 : 1/2     0  -> -1 : 1/2
//! 1  -> +2 : 3/4     1  -> -2 : 1/4
//! i  -> i+1: 2/3     i  -> i-2: 1/3      (i >= 2)
//! ```
//!
//! With `P_{-k} := P_k` the walk satisfies `E[P_{Y_k} | Y_{k-1}] = z P_{Y_{k-1}}`,
//! so `E[P_{Y_n}(z)] = z^n`.

use std::thread;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::eval_p_sequence;
use crate::rng;

/// Number of independent generator streams used by [`simulate_walk`].
pub const SIMULATION_SHARDS: usize = 8;

/// Successor states of `state` with their probabilities.
pub fn transitions(state: i64) -> [(i64, f64); 2] {
    let sign = if state < 0 { -1 } else { 1 };
    match state.abs() {
        0 => [(1, 0.5), (-1, 0.5)],
        1 => [(2 * sign, 0.75), (-2 * sign, 0.25)],
        i => [((i + 1) * sign, 2.0 / 3.0), ((i - 2) * sign, 1.0 / 3.0)],
    }
}

/// Law of `Y_n` over the states `-n..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl WalkDistribution {
    /// Point mass at the origin (`Y_0 = 0`).
    pub fn initial() -> Self {
        Self { n: 0, probs: vec![1.0] }
    }

    /// Builds a distribution from `2n + 1` masses for states `-n..=n`.
    pub fn from_probs(n: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 2 * n + 1 {
            return Err(Error::Dimension { expected: 2 * n + 1, actual: probs.len() });
        }
        Ok(Self { n, probs })
    }

    pub fn steps(&self) -> usize {
        self.n
    }

    /// `P(Y_n = state)`; zero outside `-n..=n`.
    pub fn prob(&self, state: i64) -> f64 {
        let idx = state + self.n as i64;
        if idx < 0 || idx as usize >= self.probs.len() {
            0.0
        } else {
            self.probs[idx as usize]
        }
    }

    /// Masses for states `-n..=n`.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let n = self.n as i64;
        self.probs.iter().enumerate().map(move |(i, p)| (i as i64 - n, *p))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.states().map(|(s, p)| s as f64 * p).sum()
    }

    /// Folds over `|Y_n|`.
    pub fn fold_abs(&self) -> BetaCoefficients {
        let n = self.n;
        let mut beta = vec![0.0; n + 1];
        for (s, p) in self.states() {
            beta[s.unsigned_abs() as usize] += p;
        }
        BetaCoefficients { n, beta }
    }

    /// Total variation distance; the shorter support is padded with zeros.
    pub fn total_variation(&self, other: &Self) -> f64 {
        let n = self.n.max(other.n) as i64;
        0.5 * (-n..=n).map(|s| (self.prob(s) - other.prob(s)).abs()).sum::<f64>()
    }
}

/// `beta_k = P(|Y_n| = k)` for `k = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaCoefficients {
    pub n: usize,
    pub beta: Vec<f64>,
}

impl BetaCoefficients {
    pub fn sum(&self) -> f64 {
        self.beta.iter().sum()
    }

    /// `P(|Y_n| >= threshold)`.
    pub fn tail(&self, threshold: f64) -> f64 {
        self.beta
            .iter()
            .enumerate()
            .filter(|(k, _)| *k as f64 >= threshold)
            .map(|(_, b)| b)
            .sum()
    }
}

/// One step of the chain. Each target sums its predecessors in an order
/// mirrored through the origin, so symmetric inputs stay exactly symmetric.
pub fn step_distribution(d: &WalkDistribution) -> WalkDistribution {
    let n = d.n + 1;
    let mut probs = vec![0.0; 2 * n + 1];
    for t in -(n as i64)..=(n as i64) {
        let dir = if t < 0 { -1 } else { 1 };
        let mut acc = 0.0;
        for offset in -3..=3 {
            let s = t + dir * offset;
            let p = d.prob(s);
            if p == 0.0 {
                continue;
            }
            for (to, q) in transitions(s) {
                if to == t {
                    acc += p * q;
                }
            }
        }
        probs[(t + n as i64) as usize] = acc;
    }
    WalkDistribution { n, probs }
}

/// Exact law of `Y_n` by dynamic programming, `O(n^2)`.
pub fn walk_distribution(n: usize) -> WalkDistribution {
    (0..n).fold(WalkDistribution::initial(), |d, _| step_distribution(&d))
}

pub fn beta_coeffs(n: usize) -> BetaCoefficients {
    walk_distribution(n).fold_abs()
}

/// Truncated expansion `sum_{k <= min(floor(t sqrt n), n)} beta_k P_k(z)`.
pub fn approx_monomial(z: Complex64, n: usize, t: f64) -> Result<Complex64> {
    approx_monomial_with(&beta_coeffs(n), z, t)
}

/// [`approx_monomial`] with precomputed coefficients.
pub fn approx_monomial_with(beta: &BetaCoefficients, z: Complex64, t: f64) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    let degree = truncation_degree(beta.n, t);
    let ps = eval_p_sequence(degree, z);
    Ok(beta.beta[..=degree]
        .iter()
        .zip(&ps)
        .map(|(b, p)| *b * p.to_complex())
        .sum())
}

/// `min(floor(t sqrt n), n)`.
pub fn truncation_degree(n: usize, t: f64) -> usize {
    ((t * (n as f64).sqrt()).floor() as usize).min(n)
}

/// Two-sided concentration bound `2 exp(-t^2 / 7)`.
pub fn tail_bound(t: f64) -> f64 {
    2.0 * (-t * t / 7.0).exp()
}

/// Monte Carlo estimate of the law of `Y_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalWalk {
    pub distribution: WalkDistribution,
    pub trials: u64,
    pub seed: u64,
    /// Generator streams; stream `i` runs a fixed slice of the trials.
    pub shards: usize,
}

/// Runs `trials` independent walks of `n` steps. Trials are split over
/// [`SIMULATION_SHARDS`] generator streams, so the result depends only on
/// `(n, trials, seed)`.
pub fn simulate_walk(n: usize, trials: u64, seed: u64) -> Result<EmpiricalWalk> {
    if trials == 0 {
        return Err(Error::Domain("trials must be at least 1".into()));
    }
    let shards = SIMULATION_SHARDS as u64;
    let counts: Vec<Vec<u64>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..shards)
            .map(|shard| {
                let share = trials / shards + u64::from(shard < trials % shards);
                scope.spawn(move || run_shard(n, share, seed, shard))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("walk shard panicked")).collect()
    });
    let mut total = vec![0u64; 2 * n + 1];
    for c in &counts {
        for (t, x) in total.iter_mut().zip(c) {
            *t += x;
        }
    }
    let probs = total.iter().map(|c| *c as f64 / trials as f64).collect();
    Ok(EmpiricalWalk {
        distribution: WalkDistribution { n, probs },
        trials,
        seed,
        shards: SIMULATION_SHARDS,
    })
}

fn run_shard(n: usize, trials: u64, seed: u64, shard: u64) -> Vec<u64> {
    let mut rng = rng::seeded(seed, shard);
    let mut counts = vec![0u64; 2 * n + 1];
    for _ in 0..trials {
        let mut state = 0i64;
        for _ in 0..n {
            let [(up, p_up), (down, _)] = transitions(state);
            state = if rng.random::<f64>() < p_up { up } else { down };
        }
        counts[(state + n as i64) as usize] += 1;
    }
    counts
}
