//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::f64::consts::{LN_2, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{boundary_points, interior_points, log_slope, max_abs_diff, norm, random_matrix, random_vector, region_points, rng};
use deltoid_core::iterative::{
    augmented_apply, chebyshev_momentum, deltoid_momentum, dynamic_deltoid, power_method, rate_of_rho,
    seeded_start_vector,
};
use deltoid_core::matgen::{accelerated_reference, barbell_matrix, toy_matrix, DenseMatrix};
use deltoid_core::poly::{
    characteristic, cubic_roots_general, cubic_solution_trig, eval_p_sequence, growth_lower_bound,
};
use deltoid_core::walk::{approx_monomial_with, beta_coeffs, simulate_walk, tail_bound, walk_distribution};
use deltoid_core::{Complex64, RunOptions};
use rand::Rng;

type Outcome = Result<String, String>;

struct Criterion {
    name: &'static str,
    budget: Option<Duration>,
    check: fn() -> Outcome,
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn boundedness() -> Outcome {
    let mut points = boundary_points(512);
    points.extend(interior_points(2000, 1));
    let worst = points
        .iter()
        .flat_map(|&z| eval_p_sequence(200, z).into_iter().map(|p| p.abs()))
        .fold(0.0, f64::max);
    ensure(worst <= 1.0 + 1e-9, format!("max |P_n| = {worst:.12} over n <= 200, {} points", points.len()))
}

fn growth() -> Outcome {
    let mut worst = f64::INFINITY;
    for eps in [0.01, 0.05, 0.1, 0.5, 1.0, 2.0] {
        for j in 0..64 {
            let z = Complex64::from_polar(1.0 + eps, TAU * j as f64 / 64.0);
            for (n, p) in eval_p_sequence(200, z).iter().enumerate() {
                let margin = (p.log2_abs() - growth_lower_bound(n, eps).map_err(|e| e.to_string())?) * LN_2;
                worst = worst.min(margin);
            }
        }
    }
    ensure(worst >= -1e-9, format!("min log|P_n| - log bound = {worst:.3e}"))
}

fn exact_expansion() -> Outcome {
    let points = region_points(200, 2);
    let mut worst = 0.0f64;
    for n in 0..=60usize {
        let beta = beta_coeffs(n);
        for &z in &points {
            let full = approx_monomial_with(&beta, z, n as f64 + 1.0).map_err(|e| e.to_string())?;
            let exact = z.powi(n as i32);
            worst = worst.max((full - exact).norm() / exact.norm().max(1.0));
        }
    }
    ensure(worst <= 1e-10, format!("max scaled error = {worst:.3e} for n <= 60"))
}

fn truncation_bound() -> Outcome {
    let points = region_points(500, 3);
    let mut worst_ratio = 0.0f64;
    for n in [16usize, 64, 256] {
        let beta = beta_coeffs(n);
        for t in [1.0, 2.0, 3.0] {
            let mut err = 0.0f64;
            for &z in &points {
                let approx = approx_monomial_with(&beta, z, t).map_err(|e| e.to_string())?;
                err = err.max((z.powi(n as i32) - approx).norm());
            }
            worst_ratio = worst_ratio.max(err / tail_bound(t));
        }
    }
    ensure(worst_ratio <= 1.0, format!("max error / bound = {worst_ratio:.4}"))
}

fn appendix_suite() -> Outcome {
    let mut r = rng(5);
    let (mut root_res, mut oracle, mut system) = (0.0f64, 0.0f64, 0.0f64);
    let mut order_ok = true;
    for _ in 0..1000 {
        let eps: f64 = 10.0 * (1.0 - r.random::<f64>());
        let s = cubic_solution_trig(eps).map_err(|e| e.to_string())?;
        let z = Complex64::new(s.z, 0.0);
        let general = cubic_roots_general(z);
        for root in s.roots() {
            root_res = root_res.max(characteristic(z, Complex64::new(root, 0.0)).norm());
            let nearest = general.iter().map(|g| (g - root).norm()).fold(f64::INFINITY, f64::min);
            oracle = oracle.max(nearest);
        }
        for (k, target) in [1.0, s.z, s.z * s.z].into_iter().enumerate() {
            let lhs: f64 = s.coefficients().iter().zip(s.roots()).map(|(c, r)| c * r.powi(k as i32)).sum();
            system = system.max((lhs - target).abs());
        }
        order_ok &= s.c1 >= 1.0 / 3.0
            && s.r3 > -s.r2
            && -s.r2 > 0.0
            && s.c3 > -s.c2
            && -s.c2 > 0.0
            && s.r1 >= 1.0 + eps.sqrt();
        if eps <= 0.25 {
            order_ok &= s.r1 <= 1.0 + eps.sqrt() + 2.0 * eps;
        }
    }
    for i in 1..=250 {
        let eps = 0.25 * i as f64 / 250.0;
        let s = cubic_solution_trig(eps).map_err(|e| e.to_string())?;
        order_ok &= s.r1 >= 1.0 + eps.sqrt() && s.r1 <= 1.0 + eps.sqrt() + 2.0 * eps;
    }
    ensure(
        root_res <= 1e-11 && oracle <= 1e-10 && system <= 1e-11 && order_ok,
        format!("|p_z(r)| <= {root_res:.1e}, oracle gap {oracle:.1e}, system {system:.1e}, order facts {order_ok}"),
    )
}

fn derivative(rho: f64) -> Result<f64, String> {
    let h = 1e-7;
    let up = (rho + h).min(1.0);
    Ok((rate_of_rho(up).map_err(|e| e.to_string())? - rate_of_rho(rho - h).map_err(|e| e.to_string())?)
        / (up - rho + h))
}

fn contraction() -> Outcome {
    let points = 10_000;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..points {
        let rho = 0.629 + (1.0 - 1e-6 - 0.629) * i as f64 / (points - 1) as f64;
        worst = worst.max(derivative(rho)?);
    }
    let at = derivative(0.629)?;
    ensure(
        worst <= 0.999 && (at - 0.998689).abs() <= 1e-4,
        format!("max r' = {worst:.6}, r'(0.629) = {at:.6}"),
    )
}

const TOY_PHI: [f64; 4] = [1.0, 0.0, 0.0, 0.0];

fn toy_experiment() -> Outcome {
    let a = toy_matrix();
    let v0 = seeded_start_vector(4, 0);
    let opts = RunOptions::with_reference(&TOY_PHI);
    let err = |e: deltoid_core::Error| e.to_string();
    let deltoid = deltoid_momentum(&a, &v0, 4.0 / 27.0, 400, &opts).map_err(err)?.rel_errors();
    let power = power_method(&a, &v0, 1000, &opts).map_err(err)?.rel_errors();
    let cheb = chebyshev_momentum(&a, &v0, 0.25, 2000, &opts).map_err(err)?.rel_errors();

    let deltoid_slope = log_slope(&deltoid, 100, 400);
    let power_slope = log_slope(&power, 200, 1000);
    let target_d = -(1.1f64).ln();
    let target_p = -(1.01f64).ln();
    let cheb_min = cheb.iter().copied().fold(f64::INFINITY, f64::min);
    let d_ok = ((deltoid_slope - target_d) / target_d).abs() <= 0.1;
    let p_ok = ((power_slope - target_p) / target_p).abs() <= 0.1;
    ensure(
        d_ok && p_ok && cheb_min > 1e-2,
        format!(
            "deltoid slope {deltoid_slope:.5} (target {target_d:.5}), power slope {power_slope:.6} (target {target_p:.6}), cheb1 min error {cheb_min:.3}"
        ),
    )
}

fn dynamic_tracking() -> Outcome {
    let a = toy_matrix();
    let v0 = seeded_start_vector(4, 0);
    let opts = RunOptions::with_reference(&TOY_PHI);
    let err = |e: deltoid_core::Error| e.to_string();
    let dynamic = dynamic_deltoid(&a, &v0, 1000, &opts).map_err(err)?;
    let stat = deltoid_momentum(&a, &v0, 4.0 / 27.0, 1000, &opts).map_err(err)?;

    let recs = &dynamic.records;
    let half = &recs[recs.len() / 2..];
    let mean_beta = half.iter().map(|r| r.beta).sum::<f64>() / half.len() as f64;
    let target = 4.0 / 27.0;
    let beta_ok = ((mean_beta - target) / target).abs() <= 0.05;

    // the run stops early once the residual vanishes; compare each iterate
    // with the static iterate of the same index, including the last
    let last = dynamic.last().ok_or("empty dynamic trace")?;
    let dyn_errs = dynamic.rel_errors();
    let static_errs = stat.rel_errors();
    let ratio = dyn_errs
        .iter()
        .zip(&static_errs)
        .map(|(d, s)| d / s.max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    ensure(
        beta_ok && ratio <= 10.0,
        format!(
            "mean beta {mean_beta:.6} vs {target:.6}; stopped at {} (converged {}) with error {:.2e} vs static {:.2e}; worst ratio x{ratio:.2}",
            last.iter,
            dynamic.converged,
            dyn_errs[last.iter - 1],
            static_errs[last.iter - 1],
        ),
    )
}

fn barbell_experiment() -> Outcome {
    let (n, p, iters) = (2000usize, 1.0 / 125.0, 800usize);
    let mut lines = Vec::new();
    let mut ok = true;
    for seed in 0..3u64 {
        let m = barbell_matrix(n, p, seed).map_err(|e| e.to_string())?;
        let reference = accelerated_reference(&m, 1e-13, 5000, 1_000_000).map_err(|e| e.to_string())?;
        let v0 = seeded_start_vector(2 * n, seed);
        let opts = RunOptions::with_reference(&reference.vector);
        let power = power_method(&m, &v0, iters, &opts).map_err(|e| e.to_string())?;
        let dynamic = dynamic_deltoid(&m, &v0, iters, &opts).map_err(|e| e.to_string())?;
        let pe = power.final_rel_err().ok_or("missing error")?;
        let de = dynamic.final_rel_err().ok_or("missing error")?;
        ok &= de < pe;
        lines.push(format!("seed {seed}: dyn {de:.2e} < power {pe:.2e}"));
    }
    ensure(ok, lines.join("; "))
}

fn augmented_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let mut r = rng(1000 + seed);
        let n = 10;
        let a = DenseMatrix::from_rows(&random_matrix(&mut r, n)).map_err(|e| e.to_string())?;
        let beta = r.random_range(0.01..0.5);
        let v0 = random_vector(&mut r, n);
        let opts = RunOptions { reference: None, keep_iterates: true };
        let trace = deltoid_momentum(&a, &v0, beta, 40, &opts).map_err(|e| e.to_string())?;
        let xs = trace.iterates.as_ref().ok_or("iterates not kept")?;
        let h = |k: usize| trace.records[k - 1].h;
        let mut state = xs[2].clone();
        state.extend(xs[1].iter().map(|v| v / h(2)));
        state.extend(xs[0].iter().map(|v| v / (h(2) * h(1))));
        for k in 2..40 {
            let u = augmented_apply(&a, beta, &state).map_err(|e| e.to_string())?;
            let hk = norm(&u[..n]);
            state = u.iter().map(|v| v / hk).collect();
            worst = worst.max(max_abs_diff(&state[..n], &xs[k + 1]));
        }
    }
    ensure(worst <= 1e-10, format!("max iterate gap {worst:.2e} over 20 matrices, N = 40"))
}

fn walk_oracle() -> Outcome {
    let beta = beta_coeffs(20);
    let sim = simulate_walk(20, 1_000_000, 20).map_err(|e| e.to_string())?;
    let mut tv = 0.0;
    for s in -20i64..=20 {
        let k = s.unsigned_abs() as usize;
        let implied = if k == 0 { beta.beta[0] } else { beta.beta[k] / 2.0 };
        tv += (implied - sim.distribution.prob(s)).abs();
    }
    tv *= 0.5;
    let mut worst_mean = 0.0f64;
    let mut d = walk_distribution(0);
    for _ in 0..200 {
        d = deltoid_core::walk::step_distribution(&d);
        worst_mean = worst_mean.max(d.mean().abs());
    }
    ensure(
        tv <= 0.02 && worst_mean <= 1e-12,
        format!("total variation {tv:.4}, max |mean| {worst_mean:.1e} for n <= 200"),
    )
}

fn main() -> ExitCode {
    let secs = |s: u64| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { name: "boundedness", budget: secs(30), check: boundedness },
        Criterion { name: "growth", budget: secs(30), check: growth },
        Criterion { name: "exact-expansion", budget: None, check: exact_expansion },
        Criterion { name: "truncation-bound", budget: None, check: truncation_bound },
        Criterion { name: "cubic-closed-forms", budget: None, check: appendix_suite },
        Criterion { name: "contraction", budget: None, check: contraction },
        Criterion { name: "toy-experiment", budget: secs(5), check: toy_experiment },
        Criterion { name: "dynamic-tracking", budget: None, check: dynamic_tracking },
        Criterion { name: "barbell-experiment", budget: secs(60), check: barbell_experiment },
        Criterion { name: "augmented-equivalence", budget: None, check: augmented_equivalence },
        Criterion { name: "walk-oracle", budget: None, check: walk_oracle },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let over = c.budget.is_some_and(|b| elapsed > b);
        let (tag, detail) = match outcome {
            Ok(d) if !over => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over budget {:?}", c.budget.unwrap())),
            Err(d) => ("FAIL", d),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("{tag} {:<22} {detail} [{:.2}s]", c.name, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
