//! Deltoid polynomials and the momentum power iterations built on them.
//!
//! The polynomials `P_n` obey the three-term-skip recurrence
//!
//! ```text
//! P_0 = 1,  P_1 = z,  P_2 = z^2,
//! P_{n+1}(z) = (3/2) z P_n(z) - (1/2) P_{n-2}(z)    (n >= 2)
//! ```
//!
//! They stay bounded by one on the deltoid region enclosed by
//! `gamma(t) = (2/3) e^{it} + (1/3) e^{-2it}` and grow like `(1 + sqrt(eps))^n`
//! on the circle `|z| = 1 + eps`. The crate is split into:
//!
//! * [`poly`]: stable evaluation of `P_n`, region membership, closed-form
//!   roots and coefficients of the characteristic cubic, magnitude rasters.
//! * [`walk`]: the Markov walk whose absolute-value law gives the exact
//!   expansion `z^n = sum_k beta_k P_k(z)` and its `sqrt(n)`-degree truncation.
//! * [`iterative`]: power method, order-1 (Chebyshev) momentum, static and
//!   dynamic deltoid momentum, and the augmented block operator.
//! * [`matgen`]: dense/CSR matrices, the 4x4 toy problem, random barbell
//!   Markov chains and a residual-certified reference eigenpair.

#![warn(missing_debug_implementations)]

pub mod error;
pub mod iterative;
pub mod matgen;
pub mod poly;
mod rng;
pub mod walk;

pub use error::{Error, Result};
pub use iterative::{IterationRecord, IterationTrace, LinearOperator, Method, MomentumConfig, RunOptions};
pub use matgen::{CsrMatrix, DenseMatrix, EigenPair};
pub use num_complex::Complex64;
pub use poly::{CubicSolution, DeltoidRegion, GridSpec, ScaledComplex};
pub use walk::{BetaCoefficients, EmpiricalWalk, WalkDistribution};

/// Complex scalar used throughout the crate.
pub type ComplexValue = Complex64;
