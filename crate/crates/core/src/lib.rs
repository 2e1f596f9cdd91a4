//! Parseval frames from row co-isometries.
//!
//! A family of operators `(V_i)` on a Hilbert space with `sum V_i V_i* = I` acts,
//! on suitable finite-dimensional subspaces, as a random walk on a graph: a finite
//! vertex set, one edge per letter, and a complex weight whose squared modulus is
//! a transition probability. Iterating the operators over the words that do not
//! end in a cycle word produces Parseval frames; whether they are orthonormal
//! bases or genuinely overcomplete is decided by the combinatorics of the walk.
//!
//! This crate implements the finite, computable side of that story:
//!
//! * [`model`] — affine IFS filter systems, the spectral transition maps
//!   `g_i(t) = (R^T)^{-1}(t - l_i)` with weights `nu_i(t)`, and the truncated
//!   Fourier transform of the invariant measure.
//! * [`walkgraph`] — finite random walks, their property checks (irreducible,
//!   injective, separating, simple), cycle words, first-passage mass, and the
//!   word sets indexing frames.
//! * [`invariants`] — minimal compact invariant sets of the spectral dynamics:
//!   exact one-dimensional search, candidate verification in any dimension,
//!   Ruelle-operator checks, and the bridge from a minimal set to a walk.
//! * [`frames`] — frame atoms: weighted exponentials on fractal measures,
//!   generalized Walsh step functions on `[0,1)`, and a sparse model of the
//!   `l^2(Q)` family that fails to be a frame.
//! * [`verify`] — Gram matrices, Parseval partial-sum profiles, exact Walsh
//!   Parseval identities, empirical frame bounds, and the incompleteness check.
//!
//! Spectral points are exact rationals throughout ([`rational::RationalPoint`]);
//! only transition weights and inner products are evaluated in floating point.
//! All floating-point kernels are generic over the scalar type via [`Real`];
//! `f64` is the default everywhere and the concrete aliases at the crate root
//! ([`C64`], [`FilterSystem64`], ...) pin it explicitly.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive};

pub mod config;
pub mod fixtures;
pub mod frames;
mod graph;
pub mod invariants;
pub mod model;
pub mod rational;
pub mod verify;
pub mod walkgraph;
pub mod words;

pub use config::{FilterConfig, WalkConfig, WalshConfig};
pub use model::FilterSystem;
pub use rational::RationalPoint;
pub use walkgraph::WalkGraph;
pub use words::Word;

/// Floating-point scalar for weights, atoms and certification sums: `f32` or `f64`.
///
/// Exact data (spectral points, labels, lattice tests) never passes through this
/// type; it only carries transition weights, inner products and tolerances.
pub trait Real:
    Float + FloatConst + FromPrimitive + fmt::Debug + fmt::Display + Default + 'static
{
    /// Nearest representable value of an exact rational.
    fn from_rational(r: &BigRational) -> Self {
        Self::from_f64(num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN))
            .expect("f64 converts into Real scalar")
    }

    /// Conversion for tolerance constants and other exact `f64` literals.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal converts into Real scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Pinned tolerances and defaults. All values are exact `f64` literals; generic
/// code converts them with [`Real::lit`].
pub mod tol {
    /// Isometry/unitarity defect bound for filter matrices.
    pub const MATRIX: f64 = 1e-10;
    /// A transition weight below this modulus counts as "not possible".
    pub const ZERO_WEIGHT: f64 = 1e-9;
    /// Relative singular-value cutoff for the sigma-fixed-space rank.
    pub const RANK: f64 = 1e-8;
    /// Slack for row-normalization checks `sum_i |nu_i(c)|^2 = 1`.
    pub const NORMALIZATION: f64 = 1e-10;
    /// Default truncation depth for the infinite product defining `mu_hat`.
    pub const DEFAULT_DEPTH: usize = 40;
    /// Hard cap on word lengths accepted from configuration (word counts grow as `M^L`).
    pub const MAX_WORD_LEN: usize = 16;
}

/// Complex double — the scalar of every default-precision weight and pairing.
pub type C64 = num_complex::Complex<f64>;
/// Filter system at default precision.
pub type FilterSystem64 = model::FilterSystem<f64>;
/// Random walk at default precision.
pub type WalkGraph64 = walkgraph::WalkGraph<f64>;
/// Step function at default precision.
pub type StepFunction64 = frames::StepFunction<f64>;
