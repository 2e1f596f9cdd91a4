//! Minimal compact invariant sets of the spectral dynamics.
//!
//! A set is invariant when every possible transition from a member stays inside,
//! minimal when the orbit of each point is the whole set, and extreme when
//! `|m_B(t)| = 1` at every point. In dimension one, for digit-independent
//! coefficients, the candidates form a finite lattice slice: every point of a
//! nontrivial finite minimal set satisfies `t . b` integral for all digits and
//! lies in the interval spanned by the fixed points `-l_i / (R - 1)`. The
//! search scans that slice exactly and returns the sink strongly connected
//! components of the possible-transition graph.
//!
//! In dimension two and higher no search is attempted (infinite minimal sets
//! exist); user-supplied candidates are verified instead, and one-dimensional
//! affine slices can be sampled for invariance.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::graph::tarjan_scc;
use crate::model::{
    check_filter_matrix, spectral_transition, FilterSystem, MatrixClass, ModelError,
};
use crate::rational::RationalPoint;
use crate::walkgraph::{Vertex, WalkError, WalkGraph};
use crate::{tol, Real};

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error("minimal-set search supports dimension 1 only, got {dim}; use verify_invariant for candidates")]
    UnsupportedDimension { dim: usize },
    #[error("minimal-set search needs digit-independent coefficients (alpha form)")]
    NotAlphaForm,
    #[error("minimal-set search needs a positive scaling factor R >= 2, got {r}")]
    UnsupportedScaling { r: i64 },
    #[error("digit set {{0}} admits no finite candidate lattice")]
    DegenerateDigits,
    #[error("filter matrix fails column orthonormality (defect {defect}); fix the system first")]
    InvalidSystem { defect: f64 },
    #[error("set is not invariant: {escapes} possible transition(s) leave it")]
    NotInvariant { escapes: usize },
    #[error("orbit exceeded the budget of {cap} points; it may be infinite")]
    OrbitBudget { cap: usize },
    #[error("line direction must be nonzero")]
    ZeroDirection,
    #[error("line sampling supports dimension 2 only, got {dim}")]
    LineDimension { dim: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

/// Finite invariant set of spectral points, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalSet {
    points: Vec<RationalPoint>,
}

impl MinimalSet {
    pub fn new(mut points: Vec<RationalPoint>) -> Self {
        points.sort();
        points.dedup();
        MinimalSet { points }
    }

    pub fn points(&self) -> &[RationalPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        self.points.binary_search(p).is_ok()
    }
}

impl std::fmt::Display for MinimalSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, p) in self.points.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// One recorded spectral transition, exact target.
#[derive(Clone, Debug)]
pub struct TransitionRecord<F: Real = f64> {
    pub source: RationalPoint,
    pub letter: usize,
    pub target: RationalPoint,
    pub weight: Complex<F>,
}

/// Violation witnesses of [`verify_invariant`].
#[derive(Clone, Debug)]
pub enum InvariantViolation<F: Real = f64> {
    /// A possible transition leaves the set.
    Escaping(TransitionRecord<F>),
    /// `to` is not in the orbit of `from` inside the set.
    Unreachable {
        from: RationalPoint,
        to: RationalPoint,
    },
    /// `|m_B|` is below 1 at this point (fails `t . b` integrality).
    NotExtreme { point: RationalPoint },
}

#[derive(Clone, Debug)]
pub struct InvariantReport<F: Real = f64> {
    pub invariant: bool,
    pub minimal: bool,
    pub extreme: bool,
    pub witnesses: Vec<InvariantViolation<F>>,
}

impl<F: Real> InvariantReport<F> {
    pub fn all_hold(&self) -> bool {
        self.invariant && self.minimal && self.extreme
    }
}

/// Exhaustive search for the finite minimal invariant sets of a one-dimensional
/// digit-independent system. Points are returned sorted ascending inside each
/// set; sets are ordered by largest point, descending, so the trivial set
/// `{0}` comes first for nonnegative frequencies.
pub fn find_minimal_sets_1d<F: Real>(
    fs: &FilterSystem<F>,
) -> Result<Vec<MinimalSet>, InvariantError> {
    if fs.dim() != 1 {
        return Err(InvariantError::UnsupportedDimension { dim: fs.dim() });
    }
    let alpha = fs.alpha_form().ok_or(InvariantError::NotAlphaForm)?;
    if let MatrixClass::Invalid { max_defect } = check_filter_matrix(fs) {
        return Err(InvariantError::InvalidSystem {
            defect: max_defect.to_f64().unwrap_or(f64::NAN),
        });
    }
    let r = fs.ifs().scaling()[0][0];
    if r < 2 {
        return Err(InvariantError::UnsupportedScaling { r });
    }
    let zero_tol = F::lit(tol::ZERO_WEIGHT);
    let participating: Vec<usize> = (0..fs.filter_count())
        .filter(|&i| alpha[i].norm() > zero_tol)
        .collect();

    // t . b integral for all digits means t in (1/g) Z with g = gcd of digits
    let mut g: i64 = 0;
    for b in fs.ifs().digits() {
        g = g.gcd(&b[0]);
    }
    if g == 0 {
        return Err(InvariantError::DegenerateDigits);
    }
    let g_big = BigInt::from(g.abs());

    // candidate interval: convex hull of the participating fixed points -l_i/(R-1)
    let scale = BigRational::from_integer(BigInt::from(r - 1));
    let fixed: Vec<BigRational> = participating
        .iter()
        .map(|&i| BigRational::from_integer(BigInt::from(-fs.freqs()[i][0])) / &scale)
        .collect();
    let lo = fixed.iter().min().expect("l_0 participates").clone();
    let hi = fixed.iter().max().expect("l_0 participates").clone();

    let k_lo = (lo * BigRational::from_integer(g_big.clone())).ceil().to_integer();
    let k_hi = (hi * BigRational::from_integer(g_big.clone())).floor().to_integer();

    let mut points: Vec<RationalPoint> = Vec::new();
    let mut k = k_lo;
    while k <= k_hi {
        points.push(RationalPoint::new(vec![BigRational::new(
            k.clone(),
            g_big.clone(),
        )]));
        k += 1;
    }
    let index: BTreeMap<RationalPoint, usize> = points
        .iter()
        .cloned()
        .enumerate()
        .map(|(j, p)| (p, j))
        .collect();

    let mut adjacency = vec![Vec::new(); points.len()];
    let mut escapes = vec![false; points.len()];
    for (j, t) in points.iter().enumerate() {
        for &i in &participating {
            let target = fs.g_map(i, t)?;
            match index.get(&target) {
                // lattice targets are extreme, so the transition weight is
                // alpha_i times a unimodular phase: always possible here
                Some(&to) => adjacency[j].push(to),
                None => {
                    let m_b: Complex<F> = fs.ifs().m_b(&target);
                    if m_b.norm() > zero_tol {
                        escapes[j] = true;
                    }
                }
            }
        }
    }

    let mut sets = Vec::new();
    for comp in tarjan_scc(&adjacency) {
        if comp.iter().any(|&v| escapes[v]) {
            continue;
        }
        let inside = |v: usize| comp.binary_search(&v).is_ok();
        if comp
            .iter()
            .any(|&v| adjacency[v].iter().any(|&u| !inside(u)))
        {
            continue;
        }
        sets.push(MinimalSet::new(
            comp.iter().map(|&v| points[v].clone()).collect(),
        ));
    }
    sets.sort_by(|a, b| {
        let ka = a.points().last().expect("nonempty set");
        let kb = b.points().last().expect("nonempty set");
        kb.cmp(ka)
    });
    Ok(sets)
}

/// Checks a user-supplied candidate set in any dimension: invariance and
/// extremality exactly, minimality by orbit closure inside the set.
pub fn verify_invariant<F: Real>(
    fs: &FilterSystem<F>,
    points: &[RationalPoint],
) -> Result<InvariantReport<F>, InvariantError> {
    let set = MinimalSet::new(points.to_vec());
    let mut witnesses = Vec::new();

    let mut invariant = true;
    let mut adjacency = vec![Vec::new(); set.len()];
    for (j, t) in set.points().iter().enumerate() {
        for tr in spectral_transition(fs, t)? {
            if !tr.is_possible() {
                continue;
            }
            if set.contains(&tr.target) {
                let to = set.points().binary_search(&tr.target).expect("member");
                adjacency[j].push(to);
            } else {
                invariant = false;
                witnesses.push(InvariantViolation::Escaping(TransitionRecord {
                    source: t.clone(),
                    letter: tr.letter,
                    target: tr.target,
                    weight: tr.weight,
                }));
            }
        }
    }

    let minimal = if set.is_empty() {
        false
    } else {
        let comps = tarjan_scc(&adjacency);
        if comps.len() == 1 {
            true
        } else {
            // witness: first pair split across components
            let comp_of = {
                let mut ids = vec![0usize; set.len()];
                for (cid, comp) in comps.iter().enumerate() {
                    for &v in comp {
                        ids[v] = cid;
                    }
                }
                ids
            };
            if let Some(j) = (1..set.len()).find(|&j| comp_of[j] != comp_of[0]) {
                witnesses.push(InvariantViolation::Unreachable {
                    from: set.points()[0].clone(),
                    to: set.points()[j].clone(),
                });
            }
            false
        }
    };

    let mut extreme = true;
    for t in set.points() {
        if !fs.ifs().is_extreme_point(t) {
            extreme = false;
            witnesses.push(InvariantViolation::NotExtreme { point: t.clone() });
        }
    }

    Ok(InvariantReport {
        invariant,
        minimal,
        extreme,
        witnesses,
    })
}

/// Closure of the possible-transition orbit of `start`, sorted; errors out
/// once more than `cap` points accumulate.
pub fn orbit_closure<F: Real>(
    fs: &FilterSystem<F>,
    start: &RationalPoint,
    cap: usize,
) -> Result<Vec<RationalPoint>, InvariantError> {
    let mut seen: Vec<RationalPoint> = vec![start.clone()];
    let mut queue: Vec<RationalPoint> = vec![start.clone()];
    while let Some(t) = queue.pop() {
        for tr in spectral_transition(fs, &t)? {
            if !tr.is_possible() {
                continue;
            }
            if !seen.contains(&tr.target) {
                if seen.len() >= cap {
                    return Err(InvariantError::OrbitBudget { cap });
                }
                seen.push(tr.target.clone());
                queue.push(tr.target);
            }
        }
    }
    seen.sort();
    Ok(seen)
}

/// Restriction of the spectral walk to a finite invariant set.
///
/// Vertices are the points of the set, ascending; edges and weights come from
/// the spectral transitions. The reversing flag is set when the system is in
/// alpha form and every point passes the exact integrality test — the regime
/// in which `V_i e_{g_i(c)} = conj(nu_i(c)) e_c` holds.
pub fn walk_from_minimal_set<F: Real>(
    fs: &FilterSystem<F>,
    set: &MinimalSet,
) -> Result<WalkGraph<F>, InvariantError> {
    let report = verify_invariant(fs, set.points())?;
    if !report.invariant {
        let escapes = report
            .witnesses
            .iter()
            .filter(|w| matches!(w, InvariantViolation::Escaping(_)))
            .count();
        return Err(InvariantError::NotInvariant { escapes });
    }
    let m = set.len();
    let alphabet = fs.filter_count();
    let mut edges = vec![vec![0usize; m]; alphabet];
    let mut weights = vec![vec![Complex::new(F::zero(), F::zero()); m]; alphabet];
    for (c, t) in set.points().iter().enumerate() {
        for tr in spectral_transition(fs, t)? {
            match set.points().binary_search(&tr.target) {
                Ok(to) => {
                    edges[tr.letter][c] = to;
                    weights[tr.letter][c] = tr.weight;
                }
                // impossible transition out of the set: park the edge on the
                // source with weight exactly zero
                Err(_) => {
                    edges[tr.letter][c] = c;
                }
            }
        }
    }
    let reversing = if fs.alpha_form().is_some()
        && set.points().iter().all(|t| fs.ifs().is_extreme_point(t))
    {
        Some(true)
    } else {
        None
    };
    let vertices = set
        .points()
        .iter()
        .cloned()
        .map(Vertex::from_point)
        .collect();
    Ok(WalkGraph::from_parts(
        alphabet, vertices, edges, weights, reversing,
    )?)
}

/// Ruelle transfer operator `R f(t) = sum_i |nu_i(t)|^2 f(g_i(t))` applied to a
/// sampled function.
pub fn ruelle_apply<F: Real>(
    fs: &FilterSystem<F>,
    f: impl Fn(&RationalPoint) -> Complex<F>,
    t: &RationalPoint,
) -> Result<Complex<F>, InvariantError> {
    let mut acc = Complex::new(F::zero(), F::zero());
    for tr in spectral_transition(fs, t)? {
        acc = acc + f(&tr.target) * tr.weight.norm_sqr();
    }
    Ok(acc)
}

/// Max deviation of `R 1` from 1 over the given points; the normalization
/// identity behind every Parseval partial sum.
pub fn ruelle_deviation<F: Real>(
    fs: &FilterSystem<F>,
    points: &[RationalPoint],
) -> Result<F, InvariantError> {
    let one = |_: &RationalPoint| Complex::new(F::one(), F::zero());
    let mut worst = F::zero();
    for t in points {
        let dev = (ruelle_apply(fs, one, t)? - Complex::new(F::one(), F::zero())).norm();
        if dev > worst {
            worst = dev;
        }
    }
    Ok(worst)
}

/// Affine map `s -> slope * s + intercept` induced on the line parameter by one
/// letter whose transitions stay on the line.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedMap {
    pub letter: usize,
    pub slope: BigRational,
    pub intercept: BigRational,
}

/// Outcome of sampling a one-dimensional affine slice for invariance.
#[derive(Clone, Debug)]
pub struct LineReport<F: Real = f64> {
    pub samples: usize,
    /// Letters with at least one possible transition among the samples.
    pub letters_realized: Vec<usize>,
    /// Induced affine parameter maps for letters that always stayed on the line
    /// (two or more distinct samples needed to pin the map down).
    pub induced: Vec<InducedMap>,
    /// Possible transitions that left the line.
    pub off_line: Vec<TransitionRecord<F>>,
}

/// Samples `count` points `anchor + s * direction`, `s` equally spaced in
/// `[s_from, s_to]`, and records which letters act, whether they stay on the
/// line, and the exact affine maps they induce on the parameter.
pub fn sample_line_invariance<F: Real>(
    fs: &FilterSystem<F>,
    anchor: &RationalPoint,
    direction: &RationalPoint,
    s_from: &BigRational,
    s_to: &BigRational,
    count: usize,
) -> Result<LineReport<F>, InvariantError> {
    if fs.dim() != 2 {
        return Err(InvariantError::LineDimension { dim: fs.dim() });
    }
    if direction.is_zero() {
        return Err(InvariantError::ZeroDirection);
    }
    let mut letters_realized = Vec::new();
    let mut off_line = Vec::new();
    let mut pairs: BTreeMap<usize, Vec<(BigRational, BigRational)>> = BTreeMap::new();

    // component used to read the parameter off an on-line point
    let read = direction
        .coords()
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero direction");

    for j in 0..count {
        let s = if count == 1 {
            s_from.clone()
        } else {
            let span = s_to - s_from;
            s_from + &(span * BigRational::new(BigInt::from(j), BigInt::from(count - 1)))
        };
        let point = RationalPoint::new(
            anchor
                .coords()
                .iter()
                .zip(direction.coords())
                .map(|(a, d)| a + &(d * &s))
                .collect(),
        );
        for tr in spectral_transition(fs, &point)? {
            if !tr.is_possible() {
                continue;
            }
            if !letters_realized.contains(&tr.letter) {
                letters_realized.push(tr.letter);
            }
            let rel: Vec<BigRational> = tr
                .target
                .coords()
                .iter()
                .zip(anchor.coords())
                .map(|(t, a)| t - a)
                .collect();
            let cross = &rel[0] * direction.coord(1) - &rel[1] * direction.coord(0);
            if cross.is_zero() {
                let s_image = &rel[read] / direction.coord(read);
                pairs.entry(tr.letter).or_default().push((s.clone(), s_image));
            } else {
                off_line.push(TransitionRecord {
                    source: point.clone(),
                    letter: tr.letter,
                    target: tr.target,
                    weight: tr.weight,
                });
            }
        }
    }

    let mut induced = Vec::new();
    for (letter, list) in &pairs {
        if off_line.iter().any(|w| w.letter == *letter) {
            continue;
        }
        let (s0, t0) = &list[0];
        if let Some((s1, t1)) = list.iter().find(|(s, _)| s != s0) {
            let slope = (t1 - t0) / (s1 - s0);
            let intercept = t0 - &(&slope * s0);
            if list
                .iter()
                .all(|(s, t)| *t == &(&slope * s) + &intercept)
            {
                induced.push(InducedMap {
                    letter: *letter,
                    slope,
                    intercept,
                });
            }
        }
    }
    letters_realized.sort_unstable();

    Ok(LineReport {
        samples: count,
        letters_realized,
        induced,
        off_line,
    })
}
