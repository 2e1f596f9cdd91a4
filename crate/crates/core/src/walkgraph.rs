//! Finite random walks `(M, {g_i}, {nu_i})` and their word combinatorics.
//!
//! A walk has a finite vertex set, one edge per letter out of every vertex, and
//! a complex weight per edge whose squared modulus is a transition probability;
//! weight 0 marks an impossible transition. [`WalkGraph::analyze`] decides the
//! structural properties that govern the generated frames:
//!
//! * irreducible — every vertex reaches every vertex through possible words;
//! * injective — no letter merges two vertices along possible transitions;
//! * separating — no two distinct vertices survive arbitrarily long common
//!   words (decided on the ordered-pair product graph);
//! * simple — the only fixed points of `T -> sum_i nu_i(c') conj(nu_i(c))
//!   T_{g_i(c), g_i(c')}` are multiples of the identity, measured as the
//!   dimension of the fixed space (`sigma_fixed_dim == 1`).
//!
//! Cycle words are first-return words with nonzero weight; the frame index set
//! at a vertex consists of the words that do not end in a cycle word.

use num_complex::{Complex, Complex64};
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::graph::{reachable_from, tarjan_scc};
use crate::model::{FilterSystem, ModelError};
use crate::rational::RationalPoint;
use crate::words::{words_up_to, Letter, Word, WordError};
use crate::{tol, Real};

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("walk is not normalized at vertex {vertex}: sum of squared weights deviates by {defect}")]
    NonNormalized { vertex: usize, defect: f64 },
    #[error(
        "walk is not injective: some letter merges two vertices with nonzero weight, so a word \
         may end in both one and two cycle words and the cycle-word decomposition is not unique; \
         frame-word enumeration is refused"
    )]
    NonInjective,
    #[error("word {word} is a power of a shorter word; an irreducible word is required")]
    ReducibleWord { word: Word },
    #[error("empty word cannot index a cycle")]
    EmptyWord,
    #[error("not a periodic unit orbit: {reason}")]
    NotPeriodicUnitOrbit { reason: String },
    #[error("vertex index {index} out of range ({len} vertices)")]
    VertexOutOfRange { index: usize, len: usize },
    #[error("edge table shape mismatch: {detail}")]
    Shape { detail: String },
    #[error("alphabet size {0} exceeds the supported maximum of 256")]
    AlphabetTooLarge(usize),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Walk vertex: an opaque id with optional display name and spectral payload.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Vertex {
    pub name: Option<String>,
    pub point: Option<RationalPoint>,
}

impl Vertex {
    pub fn from_point(point: RationalPoint) -> Self {
        Vertex {
            name: None,
            point: Some(point),
        }
    }

    pub fn label(&self, index: usize) -> String {
        if let Some(p) = &self.point {
            p.to_string()
        } else if let Some(n) = &self.name {
            n.clone()
        } else {
            format!("#{index}")
        }
    }
}

/// Structural report of [`WalkGraph::analyze`].
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct WalkReport {
    pub normalized: bool,
    pub irreducible: bool,
    pub injective: bool,
    pub separating: bool,
    /// Not decidable from the walk data alone; populated by the builders that
    /// can certify it (spectral minimal sets, periodic orbits).
    pub reversing: Option<bool>,
    /// Dimension of the fixed space of the sigma map on matrix space.
    pub sigma_fixed_dim: usize,
    /// `sigma_fixed_dim == 1`.
    pub simple: bool,
}

/// First-return word at a vertex with its path weight.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleWord<F: Real = f64> {
    pub word: Word,
    pub weight: Complex<F>,
    pub base: usize,
}

/// Finite random walk on a graph. Immutable after construction.
#[derive(Clone, Debug)]
pub struct WalkGraph<F: Real = f64> {
    alphabet: usize,
    vertices: Vec<Vertex>,
    /// `edges[letter][vertex]` — target vertex, total on alphabet x vertices.
    edges: Vec<Vec<usize>>,
    /// `weights[letter][vertex]` — 0 marks an impossible transition.
    weights: Vec<Vec<Complex<F>>>,
    reversing: Option<bool>,
}

impl<F: Real> WalkGraph<F> {
    pub fn from_parts(
        alphabet: usize,
        vertices: Vec<Vertex>,
        edges: Vec<Vec<usize>>,
        weights: Vec<Vec<Complex<F>>>,
        reversing: Option<bool>,
    ) -> Result<Self, WalkError> {
        if alphabet > Letter::MAX as usize + 1 {
            return Err(WalkError::AlphabetTooLarge(alphabet));
        }
        let m = vertices.len();
        if edges.len() != alphabet || weights.len() != alphabet {
            return Err(WalkError::Shape {
                detail: format!(
                    "expected {alphabet} edge and weight rows, got {} and {}",
                    edges.len(),
                    weights.len()
                ),
            });
        }
        for (i, (erow, wrow)) in edges.iter().zip(&weights).enumerate() {
            if erow.len() != m || wrow.len() != m {
                return Err(WalkError::Shape {
                    detail: format!(
                        "letter {i}: expected {m} entries, got {} edges and {} weights",
                        erow.len(),
                        wrow.len()
                    ),
                });
            }
            if let Some(&bad) = erow.iter().find(|&&t| t >= m) {
                return Err(WalkError::VertexOutOfRange { index: bad, len: m });
            }
        }
        Ok(WalkGraph {
            alphabet,
            vertices,
            edges,
            weights,
            reversing,
        })
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edge(&self, letter: usize, vertex: usize) -> usize {
        self.edges[letter][vertex]
    }

    pub fn weight(&self, letter: usize, vertex: usize) -> Complex<F> {
        self.weights[letter][vertex]
    }

    pub fn is_possible(&self, letter: usize, vertex: usize) -> bool {
        self.weights[letter][vertex].norm() > F::lit(tol::ZERO_WEIGHT)
    }

    pub fn reversing(&self) -> Option<bool> {
        self.reversing
    }

    pub fn set_reversing(&mut self, value: Option<bool>) {
        self.reversing = value;
    }

    /// Vertex whose payload equals the given point.
    pub fn find_point(&self, point: &RationalPoint) -> Option<usize> {
        self.vertices
            .iter()
            .position(|v| v.point.as_ref() == Some(point))
    }

    /// Vertex by display name.
    pub fn find_name(&self, name: &str) -> Option<usize> {
        self.vertices
            .iter()
            .position(|v| v.name.as_deref() == Some(name))
    }

    fn check_vertex(&self, index: usize) -> Result<(), WalkError> {
        if index >= self.len() {
            return Err(WalkError::VertexOutOfRange {
                index,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// Worst deviation of `sum_i |nu_i(c)|^2` from 1 over vertices.
    pub fn normalization_defect(&self) -> F {
        let mut worst = F::zero();
        for c in 0..self.len() {
            let mut mass = F::zero();
            for i in 0..self.alphabet {
                mass = mass + self.weights[i][c].norm_sqr();
            }
            let dev = (mass - F::one()).abs();
            if dev > worst {
                worst = dev;
            }
        }
        worst
    }

    fn require_normalized(&self) -> Result<(), WalkError> {
        for c in 0..self.len() {
            let mut mass = F::zero();
            for i in 0..self.alphabet {
                mass = mass + self.weights[i][c].norm_sqr();
            }
            let dev = (mass - F::one()).abs();
            if dev > F::lit(tol::NORMALIZATION) {
                return Err(WalkError::NonNormalized {
                    vertex: c,
                    defect: dev.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }

    /// Adjacency lists of the possible-transition digraph.
    fn possible_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for c in 0..self.len() {
            for i in 0..self.alphabet {
                if self.is_possible(i, c) {
                    adj[c].push(self.edges[i][c]);
                }
            }
        }
        adj
    }

    fn is_irreducible(&self) -> bool {
        tarjan_scc(&self.possible_adjacency()).len() == 1
    }

    fn is_injective(&self) -> bool {
        for i in 0..self.alphabet {
            let mut seen = vec![false; self.len()];
            for c in 0..self.len() {
                if self.is_possible(i, c) {
                    let target = self.edges[i][c];
                    if seen[target] {
                        return false;
                    }
                    seen[target] = true;
                }
            }
        }
        true
    }

    /// Separating test on ordered pairs. The diagonal is part of the product
    /// graph: non-injective letters can merge a pair into it, and then the pair
    /// survives forever. The walk is separating iff no off-diagonal pair
    /// reaches a vertex lying on a directed cycle.
    fn is_separating(&self) -> bool {
        let m = self.len();
        if m <= 1 {
            return true;
        }
        let dim = m * m;
        let mut adj = vec![Vec::new(); dim];
        for c1 in 0..m {
            for c2 in 0..m {
                let v = c1 * m + c2;
                for i in 0..self.alphabet {
                    if self.is_possible(i, c1) && self.is_possible(i, c2) {
                        adj[v].push(self.edges[i][c1] * m + self.edges[i][c2]);
                    }
                }
            }
        }
        let mut cyclic = vec![false; dim];
        for comp in tarjan_scc(&adj) {
            let on_cycle = comp.len() > 1 || adj[comp[0]].contains(&comp[0]);
            if on_cycle {
                for v in comp {
                    cyclic[v] = true;
                }
            }
        }
        let off_diagonal = (0..dim).filter(|v| v / m != v % m);
        let seen = reachable_from(&adj, off_diagonal);
        !seen.iter().zip(&cyclic).any(|(&s, &c)| s && c)
    }

    /// Dimension of the solution space of
    /// `T_{c,c'} = sum_i nu_i(c') conj(nu_i(c)) T_{g_i(c), g_i(c')}`,
    /// by singular-value rank of the map minus the identity on matrix space.
    pub fn sigma_fixed_dim(&self) -> usize {
        let m = self.len();
        let dim = m * m;
        let mut phi = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
        for c in 0..m {
            for c2 in 0..m {
                let row = c * m + c2;
                for i in 0..self.alphabet {
                    let factor = to_c64(self.weights[i][c]).conj() * to_c64(self.weights[i][c2]);
                    let col = self.edges[i][c] * m + self.edges[i][c2];
                    phi[(row, col)] += factor;
                }
            }
        }
        for k in 0..dim {
            phi[(k, k)] -= Complex64::new(1.0, 0.0);
        }
        let singular = phi.svd(false, false).singular_values;
        let largest = singular.iter().cloned().fold(0.0_f64, f64::max);
        if largest <= tol::RANK {
            return dim;
        }
        let rank = singular.iter().filter(|&&s| s > tol::RANK * largest).count();
        dim - rank
    }

    /// Full structural report. Refuses non-normalized walks.
    pub fn analyze(&self) -> Result<WalkReport, WalkError> {
        self.require_normalized()?;
        let sigma_fixed_dim = self.sigma_fixed_dim();
        Ok(WalkReport {
            normalized: true,
            irreducible: self.is_irreducible(),
            injective: self.is_injective(),
            separating: self.is_separating(),
            reversing: self.reversing,
            sigma_fixed_dim,
            simple: sigma_fixed_dim == 1,
        })
    }

    /// Path weight `nu_omega(t)`, or `None` when some step is impossible.
    pub fn path_weight(&self, start: usize, word: &Word) -> Option<(usize, Complex<F>)> {
        let mut cur = start;
        let mut acc = Complex::new(F::one(), F::zero());
        for &letter in word.letters() {
            let i = letter as usize;
            if i >= self.alphabet || !self.is_possible(i, cur) {
                return None;
            }
            acc = acc * self.weights[i][cur];
            cur = self.edges[i][cur];
        }
        Some((cur, acc))
    }

    /// True iff `word` is a first-return word at `c` with nonzero weight.
    pub fn is_first_return(&self, c: usize, word: &Word) -> bool {
        if word.is_empty() {
            return false;
        }
        let mut cur = c;
        let letters = word.letters();
        for (k, &letter) in letters.iter().enumerate() {
            let i = letter as usize;
            if i >= self.alphabet || !self.is_possible(i, cur) {
                return false;
            }
            cur = self.edges[i][cur];
            if k + 1 < letters.len() && cur == c {
                return false;
            }
        }
        cur == c
    }

    /// All first-return words at `c` of length at most `lmax`, with their path
    /// weights, in length-lexicographic order.
    pub fn enumerate_cycle_words(&self, c: usize, lmax: usize) -> Result<Vec<CycleWord<F>>, WalkError> {
        self.check_vertex(c)?;
        let mut out = Vec::new();
        let mut path: Vec<Letter> = Vec::new();
        self.cycle_dfs(c, c, Complex::new(F::one(), F::zero()), lmax, &mut path, &mut out);
        out.sort_by(|a, b| a.word.cmp(&b.word));
        Ok(out)
    }

    fn cycle_dfs(
        &self,
        base: usize,
        cur: usize,
        acc: Complex<F>,
        lmax: usize,
        path: &mut Vec<Letter>,
        out: &mut Vec<CycleWord<F>>,
    ) {
        if !path.is_empty() && cur == base {
            out.push(CycleWord {
                word: Word::new(path.clone()),
                weight: acc,
                base,
            });
            return;
        }
        if path.len() == lmax {
            return;
        }
        for i in 0..self.alphabet {
            if !self.is_possible(i, cur) {
                continue;
            }
            path.push(i as Letter);
            self.cycle_dfs(base, self.edges[i][cur], acc * self.weights[i][cur], lmax, path, out);
            path.pop();
        }
    }

    /// Sum of `|nu_omega(t)|^2` over words reaching `c` for the first time,
    /// up to length `lmax`. Nondecreasing in `lmax`, at most 1.
    ///
    /// Computed by propagating first-passage probabilities, which is exact for
    /// the word sum because the squared path weights factor through vertex
    /// paths.
    pub fn first_passage_mass(&self, t: usize, c: usize, lmax: usize) -> Result<F, WalkError> {
        self.check_vertex(t)?;
        self.check_vertex(c)?;
        let m = self.len();
        // probability of one step x -> y through any letter
        let mut step = vec![vec![F::zero(); m]; m];
        for x in 0..m {
            for i in 0..self.alphabet {
                step[x][self.edges[i][x]] = step[x][self.edges[i][x]] + self.weights[i][x].norm_sqr();
            }
        }
        let mut mass = F::zero();
        let mut current = vec![F::zero(); m];
        current[t] = F::one();
        for _ in 1..=lmax {
            let mut next = vec![F::zero(); m];
            for x in 0..m {
                if current[x] == F::zero() {
                    continue;
                }
                for (y, next_y) in next.iter_mut().enumerate() {
                    *next_y = *next_y + current[x] * step[x][y];
                }
            }
            mass = mass + next[c];
            next[c] = F::zero();
            current = next;
        }
        Ok(mass)
    }

    /// Whether some suffix of `word` is a cycle word for `c`.
    ///
    /// Only meaningful on injective walks, where the decomposition of a word
    /// into cycle words is unique; non-injective walks are refused.
    pub fn ends_in_cycle_word(&self, c: usize, word: &Word) -> Result<bool, WalkError> {
        self.check_vertex(c)?;
        if !self.is_injective() {
            return Err(WalkError::NonInjective);
        }
        Ok(self.ends_in_cycle_word_unchecked(c, word))
    }

    fn ends_in_cycle_word_unchecked(&self, c: usize, word: &Word) -> bool {
        (1..=word.len()).any(|p| self.is_first_return(c, &word.suffix(p)))
    }

    /// The frame index set: all words of length at most `lmax` that do not end
    /// in a cycle word for `c`, in length-lexicographic order. The empty word
    /// is always included.
    pub fn enumerate_frame_words(&self, c: usize, lmax: usize) -> Result<Vec<Word>, WalkError> {
        self.check_vertex(c)?;
        if !self.is_injective() {
            return Err(WalkError::NonInjective);
        }
        let cycles: Vec<Word> = self
            .enumerate_cycle_words(c, lmax)?
            .into_iter()
            .map(|cw| cw.word)
            .collect();
        Ok(words_up_to(self.alphabet, lmax)
            .filter(|w| !cycles.iter().any(|beta| w.ends_with(beta)))
            .collect())
    }
}

fn to_c64<F: Real>(z: Complex<F>) -> Complex64 {
    Complex64::new(
        z.re.to_f64().unwrap_or(f64::NAN),
        z.im.to_f64().unwrap_or(f64::NAN),
    )
}

/// All words of length at most `lmax` that do not have `beta` as a suffix.
/// `beta` must be nonempty and irreducible.
pub fn enumerate_omega_beta(
    alphabet: usize,
    beta: &Word,
    lmax: usize,
) -> Result<Vec<Word>, WalkError> {
    if beta.is_empty() {
        return Err(WalkError::EmptyWord);
    }
    beta.check_alphabet(alphabet)?;
    if !beta.is_irreducible() {
        return Err(WalkError::ReducibleWord { word: beta.clone() });
    }
    Ok(words_up_to(alphabet, lmax)
        .filter(|w| !w.ends_with(beta))
        .collect())
}

/// Builds the deterministic walk on the periodic orbit of `v0` under the
/// irreducible word `beta`: vertices are the orbit points, the letter
/// `beta[k]` moves point `k` to point `k+1` with weight exactly 1, and every
/// other transition is impossible.
///
/// Requires every step along `beta` to have a weight of modulus 1 and the
/// orbit to return to `v0`; such a walk is irreducible, separating, reversing
/// and simple.
pub fn build_periodic_walk<F: Real>(
    fs: &FilterSystem<F>,
    v0: &RationalPoint,
    beta: &Word,
) -> Result<WalkGraph<F>, WalkError> {
    if beta.is_empty() {
        return Err(WalkError::EmptyWord);
    }
    beta.check_alphabet(fs.filter_count())?;
    if !beta.is_irreducible() {
        return Err(WalkError::ReducibleWord { word: beta.clone() });
    }
    let unit_tol = F::lit(tol::ZERO_WEIGHT);
    let mut points: Vec<RationalPoint> = vec![v0.clone()];
    let mut cur = v0.clone();
    for (k, &letter) in beta.letters().iter().enumerate() {
        let i = letter as usize;
        let nu = fs.nu(i, &cur)?;
        let modulus = nu.norm();
        if (modulus - F::one()).abs() > unit_tol {
            return Err(WalkError::NotPeriodicUnitOrbit {
                reason: format!("|nu_{i}| = {modulus} at step {k}, expected 1"),
            });
        }
        cur = fs.g_map(i, &cur)?;
        if k + 1 < beta.len() {
            if points.contains(&cur) {
                return Err(WalkError::NotPeriodicUnitOrbit {
                    reason: format!("orbit revisits {cur} before closing"),
                });
            }
            points.push(cur.clone());
        }
    }
    if cur != *v0 {
        return Err(WalkError::NotPeriodicUnitOrbit {
            reason: format!("orbit ends at {cur}, not at {v0}"),
        });
    }
    let p = points.len();
    let alphabet = fs.filter_count();
    let mut edges = vec![vec![0usize; p]; alphabet];
    let mut weights = vec![vec![Complex::new(F::zero(), F::zero()); p]; alphabet];
    for k in 0..p {
        let active = beta.letters()[k] as usize;
        for i in 0..alphabet {
            if i == active {
                edges[i][k] = (k + 1) % p;
                weights[i][k] = Complex::new(F::one(), F::zero());
            } else {
                edges[i][k] = k;
            }
        }
    }
    let vertices = points.into_iter().map(Vertex::from_point).collect();
    WalkGraph::from_parts(alphabet, vertices, edges, weights, Some(true))
}

/// Shape of the random normalized walks used by the property suites.
#[derive(Clone, Debug)]
pub struct RandomWalkParams {
    /// Inclusive vertex-count range.
    pub vertices: (usize, usize),
    /// Inclusive alphabet-size range.
    pub alphabet: (usize, usize),
    /// Most letters with nonzero weight per vertex.
    pub max_active_letters: usize,
    /// Two-way splits stay within `[0.4, 0.6]` so that first-passage mass
    /// accumulates quickly.
    pub balanced: bool,
}

impl RandomWalkParams {
    /// Walks for simplicity/separation checks: up to 5 vertices, skewed splits allowed.
    pub fn structural() -> Self {
        RandomWalkParams {
            vertices: (2, 5),
            alphabet: (2, 4),
            max_active_letters: 2,
            balanced: false,
        }
    }

    /// Walks for first-passage accumulation: small and well mixed.
    pub fn mixing() -> Self {
        RandomWalkParams {
            vertices: (1, 3),
            alphabet: (2, 3),
            max_active_letters: 2,
            balanced: true,
        }
    }
}

/// Random normalized walk: per letter a random permutation edge map (hence
/// injective where possible), per vertex a random unit weight row supported on
/// a few letters.
pub fn random_walk<F: Real, R: Rng>(rng: &mut R, params: &RandomWalkParams) -> WalkGraph<F> {
    let m = rng.gen_range(params.vertices.0..=params.vertices.1);
    let alphabet = rng.gen_range(params.alphabet.0..=params.alphabet.1);
    let mut edges = Vec::with_capacity(alphabet);
    for _ in 0..alphabet {
        let mut perm: Vec<usize> = (0..m).collect();
        perm.shuffle(rng);
        edges.push(perm);
    }
    let mut weights = vec![vec![Complex::new(F::zero(), F::zero()); m]; alphabet];
    for c in 0..m {
        let active = rng.gen_range(1..=params.max_active_letters.min(alphabet));
        let mut letters: Vec<usize> = (0..alphabet).collect();
        letters.shuffle(rng);
        let letters = &letters[..active];
        let shares: Vec<f64> = if active == 1 {
            vec![1.0]
        } else if params.balanced && active == 2 {
            let s = rng.gen_range(0.4..=0.6);
            vec![s, 1.0 - s]
        } else {
            let raw: Vec<f64> = (0..active).map(|_| rng.gen_range(0.1..=1.0)).collect();
            let total: f64 = raw.iter().sum();
            raw.iter().map(|r| r / total).collect()
        };
        for (&i, &share) in letters.iter().zip(&shares) {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let modulus = share.sqrt();
            weights[i][c] = Complex::new(
                F::lit(modulus * theta.cos()),
                F::lit(modulus * theta.sin()),
            );
        }
    }
    let vertices = (0..m).map(|_| Vertex::default()).collect();
    WalkGraph::from_parts(alphabet, vertices, edges, weights, None)
        .expect("generated walk is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn words(list: &[&str]) -> Vec<Word> {
        list.iter().map(|s| word(s)).collect()
    }

    /// Single spectral vertex, alphabet {0, 1}: letter 0 loops with weight 1.
    fn single_loop() -> WalkGraph<f64> {
        WalkGraph::from_parts(
            2,
            vec![Vertex::from_point(RationalPoint::from_integers(&[0]))],
            vec![vec![0], vec![0]],
            vec![
                vec![Complex64::new(1.0, 0.0)],
                vec![Complex64::new(0.0, 0.0)],
            ],
            None,
        )
        .unwrap()
    }

    #[test]
    fn single_loop_walk_analysis() {
        let report = single_loop().analyze().unwrap();
        assert!(report.normalized && report.irreducible && report.injective);
        assert!(report.separating, "one-point walk is vacuously separating");
        assert_eq!(report.sigma_fixed_dim, 1);
        assert!(report.simple);
    }

    #[test]
    fn single_loop_words() {
        let g = single_loop();
        let cycles = g.enumerate_cycle_words(0, 3).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].word, word("0"));
        assert_eq!(cycles[0].weight, Complex64::new(1.0, 0.0));
        assert_eq!(
            g.enumerate_frame_words(0, 2).unwrap(),
            words(&["ε", "1", "01", "11"])
        );
        assert_eq!(g.enumerate_frame_words(0, 0).unwrap(), words(&["ε"]));
    }

    #[test]
    fn remmc_walk_report() {
        let g = fixtures::remmc_walk();
        let report = g.analyze().unwrap();
        assert!(report.normalized);
        assert!(report.irreducible);
        assert!(!report.injective, "letter 0 merges both vertices into vertex 1");
        assert!(!report.separating);
        assert_eq!(report.sigma_fixed_dim, 1);
        assert!(report.simple);
        assert_eq!(report.reversing, None);
    }

    #[test]
    fn remmc_cycle_words() {
        let g = fixtures::remmc_walk();
        let cycles = g.enumerate_cycle_words(0, 2).unwrap();
        let found: Vec<Word> = cycles.iter().map(|c| c.word.clone()).collect();
        assert_eq!(found, words(&["0", "10"]));
        // weight of "10" is nu_1(1) nu_0(2) = 1/2
        assert!((cycles[1].weight - Complex64::new(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn remmc_refuses_frame_words() {
        let g = fixtures::remmc_walk();
        assert!(matches!(
            g.ends_in_cycle_word(0, &word("1010")),
            Err(WalkError::NonInjective)
        ));
        assert!(matches!(
            g.enumerate_frame_words(0, 2),
            Err(WalkError::NonInjective)
        ));
    }

    #[test]
    fn non_normalized_walk_is_refused() {
        let g: WalkGraph<f64> = WalkGraph::from_parts(
            1,
            vec![Vertex::default()],
            vec![vec![0]],
            vec![vec![Complex64::new(0.5, 0.0)]],
            None,
        )
        .unwrap();
        assert!(matches!(
            g.analyze(),
            Err(WalkError::NonNormalized { vertex: 0, .. })
        ));
    }

    #[test]
    fn omega_beta_examples() {
        assert_eq!(
            enumerate_omega_beta(2, &word("0"), 2).unwrap(),
            words(&["ε", "1", "01", "11"])
        );
        assert_eq!(
            enumerate_omega_beta(2, &word("10"), 2).unwrap(),
            words(&["ε", "0", "1", "00", "01", "11"])
        );
        assert!(matches!(
            enumerate_omega_beta(2, &word("1010"), 3),
            Err(WalkError::ReducibleWord { .. })
        ));
    }

    #[test]
    fn periodic_walk_from_fixed_point() {
        // L = {0, 3}: g_1(-1) = -1 with m_B(-1) = 1
        let fs = fixtures::l03();
        let v0 = RationalPoint::from_integers(&[-1]);
        let g = build_periodic_walk(&fs, &v0, &word("1")).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.weight(1, 0), Complex64::new(1.0, 0.0));
        assert_eq!(g.weight(0, 0), Complex64::new(0.0, 0.0));
        assert_eq!(g.reversing(), Some(true));
        let report = g.analyze().unwrap();
        assert!(report.irreducible && report.separating && report.simple);
    }

    #[test]
    fn periodic_walk_mu4_fixed_point() {
        let fs = fixtures::mu4();
        let zero = RationalPoint::zero(1);
        let g = build_periodic_walk(&fs, &zero, &word("0")).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.weight(0, 0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn periodic_walk_rejects_zero_weight_step() {
        let fs = fixtures::mu4();
        let zero = RationalPoint::zero(1);
        // nu_1(0) = m_B(-1/4) = 0
        assert!(matches!(
            build_periodic_walk(&fs, &zero, &word("1")),
            Err(WalkError::NotPeriodicUnitOrbit { .. })
        ));
    }

    /// R = 4, B = {0,2}, L = {0,15}: the orbit -1 -> -4 -> -1 is deterministic
    /// with unit weights, so "10" is a periodic unit word at -1.
    fn l015() -> crate::FilterSystem64 {
        crate::config::FilterConfig::from_json(
            r#"{"r":[[4]],"b":[[0],[2]],"l":[[0],[15]],"alpha":[1,1]}"#,
        )
        .unwrap()
        .build()
        .unwrap()
    }

    #[test]
    fn periodic_walk_two_point_orbit() {
        let fs = l015();
        let v0 = RationalPoint::from_integers(&[-1]);
        let g = build_periodic_walk(&fs, &v0, &word("10")).unwrap();
        assert_eq!(g.len(), 2);
        let report = g.analyze().unwrap();
        assert!(report.irreducible && report.separating && report.simple);
        assert_eq!(report.reversing, Some(true));
        // orbit order: -1 then -4
        assert_eq!(
            g.vertices()[1].point,
            Some(RationalPoint::from_integers(&[-4]))
        );
    }

    #[test]
    fn periodic_walk_rejects_non_unit_cycle() {
        // in the reduced system the weights at -1 split between letters 1 and
        // 3, so "30" is a cycle of the walk but not a unit orbit
        let fs = fixtures::ex411_reduced();
        let v0 = RationalPoint::from_integers(&[-1]);
        assert!(matches!(
            build_periodic_walk(&fs, &v0, &word("30")),
            Err(WalkError::NotPeriodicUnitOrbit { .. })
        ));
    }

    /// Brute-force word-sum oracle for the first-passage mass.
    fn first_passage_oracle(g: &WalkGraph<f64>, t: usize, c: usize, lmax: usize) -> f64 {
        let mut mass = 0.0;
        for w in words_up_to(g.alphabet(), lmax) {
            if w.is_empty() {
                continue;
            }
            let mut cur = t;
            let mut acc = Complex64::new(1.0, 0.0);
            let mut hit_early = false;
            let letters = w.letters();
            for (k, &letter) in letters.iter().enumerate() {
                let i = letter as usize;
                acc *= g.weight(i, cur);
                cur = g.edge(i, cur);
                if k + 1 < letters.len() && cur == c {
                    hit_early = true;
                    break;
                }
            }
            if !hit_early && cur == c {
                mass += acc.norm_sqr();
            }
        }
        mass
    }

    #[test]
    fn first_passage_matches_word_sum_on_random_walks() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let params = RandomWalkParams::structural();
        for _ in 0..20 {
            let g: WalkGraph<f64> = random_walk(&mut rng, &params);
            let t = rng.gen_range(0..g.len());
            let c = rng.gen_range(0..g.len());
            for lmax in [0, 1, 3, 5] {
                let dp = g.first_passage_mass(t, c, lmax).unwrap();
                let oracle = first_passage_oracle(&g, t, c, lmax);
                assert!((dp - oracle).abs() < 1e-12, "dp {dp} oracle {oracle}");
            }
        }
    }

    #[test]
    fn first_passage_no_path_is_zero() {
        let g = single_loop();
        assert_eq!(g.first_passage_mass(0, 0, 0).unwrap(), 0.0);
        let mass = g.first_passage_mass(0, 0, 4).unwrap();
        assert_eq!(mass, 1.0, "immediate return through the loop");
    }

    #[test]
    fn cycle_word_suffix_is_unique_on_injective_walks() {
        // uniqueness of the decomposition: on an injective walk no word has
        // two distinct cycle-word suffixes, so greedy stripping is unique
        let fs = fixtures::ex411_reduced();
        let set = crate::invariants::find_minimal_sets_1d(&fs).unwrap().remove(1);
        let g = crate::invariants::walk_from_minimal_set(&fs, &set).unwrap();
        let c = g
            .find_point(&RationalPoint::from_integers(&[-1]))
            .unwrap();
        let cycles: Vec<Word> = g
            .enumerate_cycle_words(c, 8)
            .unwrap()
            .into_iter()
            .map(|cw| cw.word)
            .collect();
        assert_eq!(cycles.len(), 2, "cycle words at -1 are 1 and 30");
        for w in words_up_to(g.alphabet(), 8) {
            let suffixes = cycles.iter().filter(|beta| w.ends_with(beta)).count();
            assert!(suffixes <= 1, "word {w} has {suffixes} cycle-word suffixes");
        }
    }

    #[test]
    fn random_walks_are_normalized_and_injective_where_possible() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let g: WalkGraph<f64> = random_walk(&mut rng, &RandomWalkParams::structural());
            let report = g.analyze().unwrap();
            assert!(report.normalized);
            assert!(report.injective, "permutation edge maps are injective");
        }
    }
}
