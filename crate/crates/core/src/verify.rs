//! Numerical certification of the frame claims.
//!
//! Everything here is certified-approximate: inner products between
//! exponentials go through the truncated product `mu_hat`, and every report
//! carries the truncation depth plus the deviation of the last product factor
//! from 1, so the truncation error is surfaced rather than hidden. The Walsh
//! side needs no truncation: step-function sums are exact at finite resolution.

use num_complex::Complex;
use serde::Serialize;
use thiserror::Error;

use crate::frames::{fourier_atoms, FourierAtom, FrameError, StepFunction, WalshSystem};
use crate::invariants::{orbit_closure, walk_from_minimal_set, InvariantError, MinimalSet};
use crate::model::{mu_hat_with_tail, FilterSystem, ModelError};
use crate::rational::RationalPoint;
use crate::walkgraph::{WalkError, WalkGraph};
use crate::{tol, Real};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("no test vectors supplied")]
    EmptyTestSet,
    #[error("basepoint {point} does not belong to a finite orbit closure")]
    BasepointOrbit { point: RationalPoint },
    #[error("partial sums are not monotone at length {at}")]
    NotMonotone { at: usize },
    #[error("partial sum {sum} exceeds the target {target} beyond tolerance")]
    BesselExceeded { sum: f64, target: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

/// Extrema of a Gram matrix of atoms against the identity.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GramReport<F: Real = f64> {
    pub size: usize,
    pub max_off_diag: F,
    pub max_diag_dev: F,
    /// Truncation depth used for every pairing.
    pub depth: usize,
    /// Largest deviation of a last product factor from 1 over all pairings.
    pub last_factor_dev: F,
}

/// Gram matrix `G_{jk} = w_j conj(w_k) mu_hat(lambda_j - lambda_k)` of Fourier
/// atoms, reported as its worst deviations from the identity.
pub fn gram<F: Real>(
    atoms: &[FourierAtom<F>],
    fs: &FilterSystem<F>,
    depth: usize,
) -> Result<GramReport<F>, VerifyError> {
    let mut max_off = F::zero();
    let mut max_diag = F::zero();
    let mut tail = F::zero();
    for (j, a) in atoms.iter().enumerate() {
        let diag_dev = (a.weight.norm_sqr() - F::one()).abs();
        if diag_dev > max_diag {
            max_diag = diag_dev;
        }
        for b in atoms.iter().skip(j + 1) {
            let xi = &a.label - &b.label;
            let (value, dev) = mu_hat_with_tail(fs, &xi, depth)?;
            if dev > tail {
                tail = dev;
            }
            let entry = (a.weight * b.weight.conj() * value).norm();
            if entry > max_off {
                max_off = entry;
            }
        }
    }
    Ok(GramReport {
        size: atoms.len(),
        max_off_diag: max_off,
        max_diag_dev: max_diag,
        depth,
        last_factor_dev: tail,
    })
}

/// Parseval partial sums `s_n = sum_{|omega| <= n} |<v, V_omega e_c>|^2`
/// against the target `|v|^2 = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct ParsevalProfile<F: Real = f64> {
    /// `partial_sums[n]` is `s_n`, `n = 0..=lmax`.
    pub partial_sums: Vec<F>,
    pub target: F,
    pub depth: usize,
    pub last_factor_dev: F,
}

impl<F: Real> ParsevalProfile<F> {
    /// Monotone and Bessel-bounded within `slack`.
    pub fn check(&self, slack: F) -> Result<(), VerifyError> {
        for n in 1..self.partial_sums.len() {
            if self.partial_sums[n] < self.partial_sums[n - 1] - slack {
                return Err(VerifyError::NotMonotone { at: n });
            }
        }
        if let Some(worst) = self
            .partial_sums
            .iter()
            .cloned()
            .fold(None::<F>, |acc, s| Some(acc.map_or(s, |a| a.max(s))))
        {
            if worst > self.target + slack {
                return Err(VerifyError::BesselExceeded {
                    sum: worst.to_f64().unwrap_or(f64::NAN),
                    target: self.target.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }
}

/// Profile of the frame at cycle point `c` against the exponential `e_v`.
///
/// The finite orbit closure of `c` is bridged to a walk, the frame words up to
/// `lmax` are enumerated there, and all pairings go through the floating-point
/// product at the given depth.
pub fn parseval_profile<F: Real>(
    fs: &FilterSystem<F>,
    c: &RationalPoint,
    v: &RationalPoint,
    lmax: usize,
    depth: usize,
) -> Result<ParsevalProfile<F>, VerifyError> {
    Ok(parseval_profiles(fs, c, std::slice::from_ref(v), lmax, depth)?
        .pop()
        .expect("one profile per test"))
}

/// Profiles at several test frequencies in one pass over the frame words.
///
/// Words stream through without materializing: words ending in a cycle word
/// for `c` are dropped, words whose weight vanishes (a letter with
/// `alpha_i = 0`) contribute nothing and are skipped, and each surviving label
/// is computed exactly once and paired against every test in floating point.
pub fn parseval_profiles<F: Real>(
    fs: &FilterSystem<F>,
    c: &RationalPoint,
    tests: &[RationalPoint],
    lmax: usize,
    depth: usize,
) -> Result<Vec<ParsevalProfile<F>>, VerifyError> {
    let alpha = fs.alpha_form().ok_or(FrameError::NotAlphaForm)?.to_vec();
    if !fs.ifs().is_extreme_point(c) {
        return Err(VerifyError::Frame(FrameError::NonExtremeBasepoint {
            point: c.clone(),
        }));
    }
    let orbit = orbit_closure(fs, c, 4096).map_err(|_| VerifyError::BasepointOrbit {
        point: c.clone(),
    })?;
    let set = MinimalSet::new(orbit);
    let walk = walk_from_minimal_set(fs, &set)?;
    let index = walk.find_point(c).expect("basepoint lies in its own orbit");
    let cycles: Vec<Word> = walk
        .enumerate_cycle_words(index, lmax)?
        .into_iter()
        .map(|cw| cw.word)
        .collect();

    let dynamics = FloatDynamics::new(fs);
    let scaling = fs.ifs().scaling();
    let test_floats: Vec<Vec<F>> = tests.iter().map(|t| t.to_floats()).collect();
    let mut by_length = vec![vec![F::zero(); lmax + 1]; tests.len()];
    let mut tail = F::zero();
    let mut xi = vec![F::zero(); fs.dim()];
    for word in crate::words::words_up_to(fs.filter_count(), lmax) {
        if cycles.iter().any(|beta| word.ends_with(beta)) {
            continue;
        }
        let mut weight = Complex::new(F::one(), F::zero());
        for &letter in word.letters() {
            weight = weight * alpha[letter as usize];
        }
        if weight.norm_sqr() == F::zero() {
            continue;
        }
        let mut label = c.clone();
        for &letter in word.letters().iter().rev() {
            label = crate::model::affine_label(scaling, &fs.freqs()[letter as usize], &label);
        }
        let label_floats: Vec<F> = label.to_floats();
        for (ti, t) in test_floats.iter().enumerate() {
            for (x, (a, b)) in xi.iter_mut().zip(t.iter().zip(&label_floats)) {
                *x = *a - *b;
            }
            let (value, dev) = dynamics.mu_hat_with_tail(&xi, depth);
            if dev > tail {
                tail = dev;
            }
            let mass = (weight.conj() * value).norm_sqr();
            by_length[ti][word.len()] = by_length[ti][word.len()] + mass;
        }
    }
    Ok(by_length
        .into_iter()
        .map(|lengths| {
            let mut partial_sums = Vec::with_capacity(lmax + 1);
            let mut acc = F::zero();
            for mass in lengths {
                acc = acc + mass;
                partial_sums.push(acc);
            }
            ParsevalProfile {
                partial_sums,
                target: F::one(),
                depth,
                last_factor_dev: tail,
            }
        })
        .collect())
}

/// Profile from explicit atoms; exposed for unions over several basepoints.
pub fn profile_from_atoms<F: Real>(
    fs: &FilterSystem<F>,
    atoms: &[FourierAtom<F>],
    v: &RationalPoint,
    lmax: usize,
    depth: usize,
) -> Result<ParsevalProfile<F>, VerifyError> {
    let mut by_length = vec![F::zero(); lmax + 1];
    let mut tail = F::zero();
    for atom in atoms {
        let xi = v - &atom.label;
        let (value, dev) = mu_hat_with_tail(fs, &xi, depth)?;
        if dev > tail {
            tail = dev;
        }
        let pairing = (atom.weight.conj() * value).norm_sqr();
        by_length[atom.word.len()] = by_length[atom.word.len()] + pairing;
    }
    let mut partial_sums = Vec::with_capacity(lmax + 1);
    let mut acc = F::zero();
    for mass in by_length {
        acc = acc + mass;
        partial_sums.push(acc);
    }
    Ok(ParsevalProfile {
        partial_sums,
        target: F::one(),
        depth,
        last_factor_dev: tail,
    })
}

/// Exact finite-stage Parseval defect for a level-`n` step function:
/// `| sum_{omega in Omega_0, |omega| <= n} |<f, V_omega 1>|^2 - |f|^2 |`.
///
/// Zero up to rounding: the words of length exactly `n` resolve the identity,
/// and trailing zeros collapse them onto `Omega_0`.
pub fn walsh_parseval_defect<F: Real>(
    ws: &WalshSystem<F>,
    f: &StepFunction<F>,
) -> Result<F, VerifyError> {
    let sums = walsh_partial_sums(ws, f, f.level())?;
    let total = *sums.last().expect("at least the empty word");
    Ok((total - f.norm_sqr()).abs())
}

/// Partial sums of `|<f, V_omega 1>|^2` over `Omega_0` by word length.
pub fn walsh_partial_sums<F: Real>(
    ws: &WalshSystem<F>,
    f: &StepFunction<F>,
    lmax: usize,
) -> Result<Vec<F>, VerifyError> {
    let mut by_length = vec![F::zero(); lmax + 1];
    for (word, atom) in ws.frame_atoms(lmax)? {
        let pairing = f.inner(&atom)?.norm_sqr();
        by_length[word.len()] = by_length[word.len()] + pairing;
    }
    let mut out = Vec::with_capacity(lmax + 1);
    let mut acc = F::zero();
    for mass in by_length {
        acc = acc + mass;
        out.push(acc);
    }
    Ok(out)
}

/// Worst deviation from orthonormality among the Walsh atoms up to `lmax`.
pub fn walsh_gram_defect<F: Real>(ws: &WalshSystem<F>, lmax: usize) -> Result<F, VerifyError> {
    let atoms = ws.frame_atoms(lmax)?;
    let mut worst = F::zero();
    for (j, (_, a)) in atoms.iter().enumerate() {
        for (k, (_, b)) in atoms.iter().enumerate().skip(j) {
            let target = if j == k { F::one() } else { F::zero() };
            let dev = (a.inner(b)? - Complex::new(target, F::zero())).norm();
            if dev > worst {
                worst = dev;
            }
        }
    }
    Ok(worst)
}

/// Empirical frame bounds: min and max over tests of `mass / norm^2`.
pub fn frame_bounds_from_masses<F: Real>(tests: &[(F, F)]) -> Result<(F, F), VerifyError> {
    if tests.is_empty() {
        return Err(VerifyError::EmptyTestSet);
    }
    let mut lower = F::infinity();
    let mut upper = F::zero();
    for &(mass, norm_sqr) in tests {
        let ratio = mass / norm_sqr;
        if ratio < lower {
            lower = ratio;
        }
        if ratio > upper {
            upper = ratio;
        }
    }
    Ok((lower, upper))
}

/// Frame-bound estimates for Fourier atoms over test frequencies, with
/// pairings through `mu_hat` at the given depth.
pub fn fourier_frame_bounds<F: Real>(
    fs: &FilterSystem<F>,
    atoms: &[FourierAtom<F>],
    tests: &[RationalPoint],
    depth: usize,
) -> Result<(F, F), VerifyError> {
    let masses = tests
        .iter()
        .map(|v| {
            let mut acc = F::zero();
            for atom in atoms {
                let xi = v - &atom.label;
                let (value, _) = mu_hat_with_tail(fs, &xi, depth)?;
                acc = acc + (atom.weight.conj() * value).norm_sqr();
            }
            Ok((acc, F::one()))
        })
        .collect::<Result<Vec<_>, VerifyError>>()?;
    frame_bounds_from_masses(&masses)
}

/// Frame-bound estimates of the `l^2(Q)` family against the tests `e_{2^m}`,
/// `m = 1..=mmax`, over words of length at most `lmax`.
pub fn l2q_frame_bounds<F: Real>(mmax: u32, lmax: usize) -> Result<(F, F), VerifyError> {
    let masses: Vec<(F, F)> = (1..=mmax)
        .map(|m| (crate::frames::l2q::mass_at_power_of_two(m, lmax), F::one()))
        .collect();
    frame_bounds_from_masses(&masses)
}

/// Cycle structure at a vertex and the completeness verdict it implies.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IncompletenessReport {
    pub vertex: usize,
    /// Every weight has modulus 0 or 1: the walk is a single deterministic cycle.
    pub single_cycle: bool,
    /// Some vertex admits two letters with nonzero weight.
    pub multi_cycle: bool,
    pub verdict: Verdict,
}

/// What the cycle structure says about the family `{S_omega e_c}` over the
/// frame words.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Verdict {
    /// Unimodular single-cycle walk: the atoms form an orthonormal basis of
    /// their closed span.
    OrthonormalBasisOfSpan,
    /// A vertex carries two possible letters, so the vertex has two distinct
    /// cycle words and the family misses part of the dilation space. Advisory:
    /// the dilation itself is not materialized here.
    IncompleteInDilation,
}

/// Decides between the basis case (all weights unimodular or zero) and the
/// incompleteness case (some vertex with two possible letters).
pub fn incompleteness_check<F: Real>(g: &WalkGraph<F>, vertex: usize) -> IncompletenessReport {
    let zero = F::lit(tol::ZERO_WEIGHT);
    let mut single_cycle = true;
    let mut multi_cycle = false;
    for c in 0..g.len() {
        let mut active = 0usize;
        for i in 0..g.alphabet() {
            let modulus = g.weight(i, c).norm();
            if modulus > zero {
                active += 1;
                if (modulus - F::one()).abs() > zero {
                    single_cycle = false;
                }
            }
        }
        if active >= 2 {
            multi_cycle = true;
            single_cycle = false;
        }
    }
    let verdict = if multi_cycle {
        Verdict::IncompleteInDilation
    } else {
        Verdict::OrthonormalBasisOfSpan
    };
    IncompletenessReport {
        vertex,
        single_cycle,
        multi_cycle,
        verdict,
    }
}
