//! Filter systems on affine iterated function systems and their spectral maps.
//!
//! The input datum is `(R, B, {l_i}, {a_{i,b}})`: an expansive integer matrix
//! `R`, digits `B` with `0 in B`, integer frequencies `l_i` with `l_0 = 0`, and
//! complex coefficients. The normalized matrix
//! `(1/sqrt(N)) (e^{2 pi i R^{-1} b . l_i} a_{i,b})` must have orthonormal
//! columns; [`check_filter_matrix`] classifies it. The induced dynamics on
//! frequency space is `g_i(t) = (R^T)^{-1}(t - l_i)` with weight
//! `nu_i(t) = (1/N) sum_b e^{2 pi i g_i(t) . b} conj(a_{i,b})`, and the Fourier
//! transform of the invariant measure is the infinite product
//! `mu_hat(xi) = prod_k m_B((R^T)^{-k} xi)`, truncated here at a caller-chosen
//! depth.
//!
//! All spectral points are exact rationals; weights are evaluated in floating
//! point from exactly reduced phases.

use num_complex::Complex;
use num_rational::BigRational;
use thiserror::Error;

use crate::rational::{fract, int_matrix_apply, unit_phase, RatMatrix, RationalPoint};
use crate::{tol, Real};

/// Eigenvalue modulus must exceed `1 +` this margin to count as expansive.
const EXPANSIVE_MARGIN: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("scaling matrix must be square, got {rows} rows of widths up to {cols}")]
    NonSquareMatrix { rows: usize, cols: usize },
    #[error("scaling matrix is not expansive: eigenvalue modulus {modulus}")]
    NotExpansive { modulus: f64 },
    #[error("digit set must contain the zero vector")]
    MissingZeroDigit,
    #[error("digit {index} duplicates digit {first}")]
    DuplicateDigit { first: usize, index: usize },
    #[error("digit {index} has dimension {got}, expected {expected}")]
    DigitDimension {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("frequency l_0 must be the zero vector")]
    NonZeroFirstFrequency,
    #[error("frequency {index} has dimension {got}, expected {expected}")]
    FrequencyDimension {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("coefficient matrix row {row} has {got} entries, expected {expected}")]
    CoefficientShape {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("coefficient matrix must have {expected} rows (one per frequency), got {got}")]
    CoefficientRows { got: usize, expected: usize },
    #[error("alpha_0 must equal 1 in the digit-independent form")]
    AlphaZeroNotOne,
    #[error("point has dimension {got}, expected {expected}")]
    PointDimension { got: usize, expected: usize },
    #[error(transparent)]
    Rational(#[from] crate::rational::RationalError),
}

/// Affine iterated function system `tau_b(x) = R^{-1}(x + b)`.
#[derive(Clone, Debug)]
pub struct IfsSpec {
    r: Vec<Vec<i64>>,
    digits: Vec<Vec<i64>>,
    r_inv: RatMatrix,
    rt_inv: RatMatrix,
}

impl IfsSpec {
    pub fn new(r: Vec<Vec<i64>>, digits: Vec<Vec<i64>>) -> Result<Self, ModelError> {
        let dim = r.len();
        if dim == 0 || r.iter().any(|row| row.len() != dim) {
            let cols = r.iter().map(|row| row.len()).max().unwrap_or(0);
            return Err(ModelError::NonSquareMatrix { rows: dim, cols });
        }
        let flat: Vec<f64> = r.iter().flatten().map(|&e| e as f64).collect();
        let eigen = nalgebra::DMatrix::from_row_slice(dim, dim, &flat).complex_eigenvalues();
        if let Some(small) = eigen.iter().find(|l| l.norm() <= 1.0 + EXPANSIVE_MARGIN) {
            return Err(ModelError::NotExpansive {
                modulus: small.norm(),
            });
        }
        for (index, b) in digits.iter().enumerate() {
            if b.len() != dim {
                return Err(ModelError::DigitDimension {
                    index,
                    got: b.len(),
                    expected: dim,
                });
            }
            if let Some(first) = digits[..index].iter().position(|earlier| earlier == b) {
                return Err(ModelError::DuplicateDigit { first, index });
            }
        }
        if !digits.iter().any(|b| b.iter().all(|&c| c == 0)) {
            return Err(ModelError::MissingZeroDigit);
        }
        let mat = RatMatrix::from_int_rows(&r)?;
        let r_inv = mat.inverse()?;
        let rt_inv = mat.transpose().inverse()?;
        Ok(IfsSpec {
            r,
            digits,
            r_inv,
            rt_inv,
        })
    }

    pub fn dim(&self) -> usize {
        self.r.len()
    }

    /// Number of digits `N`.
    pub fn digit_count(&self) -> usize {
        self.digits.len()
    }

    pub fn scaling(&self) -> &[Vec<i64>] {
        &self.r
    }

    pub fn digits(&self) -> &[Vec<i64>] {
        &self.digits
    }

    pub fn rt_inv(&self) -> &RatMatrix {
        &self.rt_inv
    }

    /// `m_B(t) = (1/N) sum_b e^{2 pi i b . t}`; modulus is at most 1, with
    /// equality exactly when `b . t` is an integer for every digit.
    pub fn m_b<F: Real>(&self, t: &RationalPoint) -> Complex<F> {
        eval_m_b(&self.digits, t)
    }

    /// Exact extremality test: `|m_B(t)| = 1`, equivalently `b . t` integral
    /// for all digits (the digit set contains 0).
    pub fn is_extreme_point(&self, t: &RationalPoint) -> bool {
        self.digits.iter().all(|b| t.dot_int(b).is_integer())
    }
}

/// `m_B` for a bare digit set.
pub fn eval_m_b<F: Real>(digits: &[Vec<i64>], t: &RationalPoint) -> Complex<F> {
    let mut acc = Complex::new(F::zero(), F::zero());
    for b in digits {
        acc = acc + unit_phase::<F>(&t.dot_int(b));
    }
    acc / F::from_usize(digits.len()).expect("digit count fits scalar")
}

/// The full input datum: IFS plus frequencies and coefficients.
#[derive(Clone, Debug)]
pub struct FilterSystem<F: Real = f64> {
    ifs: IfsSpec,
    freqs: Vec<Vec<i64>>,
    coeffs: Vec<Vec<Complex<F>>>,
    alpha: Option<Vec<Complex<F>>>,
}

impl<F: Real> FilterSystem<F> {
    /// General coefficient matrix `a_{i,b}`, one row per frequency.
    pub fn new(
        ifs: IfsSpec,
        freqs: Vec<Vec<i64>>,
        coeffs: Vec<Vec<Complex<F>>>,
    ) -> Result<Self, ModelError> {
        let dim = ifs.dim();
        let n = ifs.digit_count();
        for (index, l) in freqs.iter().enumerate() {
            if l.len() != dim {
                return Err(ModelError::FrequencyDimension {
                    index,
                    got: l.len(),
                    expected: dim,
                });
            }
        }
        match freqs.first() {
            Some(l0) if l0.iter().all(|&c| c == 0) => {}
            _ => return Err(ModelError::NonZeroFirstFrequency),
        }
        if coeffs.len() != freqs.len() {
            return Err(ModelError::CoefficientRows {
                got: coeffs.len(),
                expected: freqs.len(),
            });
        }
        for (row, r) in coeffs.iter().enumerate() {
            if r.len() != n {
                return Err(ModelError::CoefficientShape {
                    row,
                    got: r.len(),
                    expected: n,
                });
            }
        }
        // detect the digit-independent case
        let alpha = if coeffs
            .iter()
            .all(|row| row.iter().all(|c| *c == row[0]))
        {
            let alpha: Vec<Complex<F>> = coeffs.iter().map(|row| row[0]).collect();
            if alpha[0] != Complex::new(F::one(), F::zero()) {
                return Err(ModelError::AlphaZeroNotOne);
            }
            Some(alpha)
        } else {
            None
        };
        Ok(FilterSystem {
            ifs,
            freqs,
            coeffs,
            alpha,
        })
    }

    /// Digit-independent coefficients `a_{i,b} = alpha_i`.
    pub fn from_alpha(
        ifs: IfsSpec,
        freqs: Vec<Vec<i64>>,
        alpha: Vec<Complex<F>>,
    ) -> Result<Self, ModelError> {
        let n = ifs.digit_count();
        let coeffs = alpha.iter().map(|&a| vec![a; n]).collect();
        FilterSystem::new(ifs, freqs, coeffs)
    }

    pub fn ifs(&self) -> &IfsSpec {
        &self.ifs
    }

    pub fn dim(&self) -> usize {
        self.ifs.dim()
    }

    /// Alphabet size `M`.
    pub fn filter_count(&self) -> usize {
        self.freqs.len()
    }

    pub fn freqs(&self) -> &[Vec<i64>] {
        &self.freqs
    }

    pub fn coeffs(&self) -> &[Vec<Complex<F>>] {
        &self.coeffs
    }

    /// The weights `alpha_i` when the coefficients do not depend on the digit.
    pub fn alpha_form(&self) -> Option<&[Complex<F>]> {
        self.alpha.as_deref()
    }

    /// `g_i(t) = (R^T)^{-1}(t - l_i)`, exact.
    pub fn g_map(&self, letter: usize, t: &RationalPoint) -> Result<RationalPoint, ModelError> {
        if t.dim() != self.dim() {
            return Err(ModelError::PointDimension {
                got: t.dim(),
                expected: self.dim(),
            });
        }
        let shifted = t - &RationalPoint::from_integers(&self.freqs[letter]);
        Ok(self.ifs.rt_inv.apply(&shifted))
    }

    /// `nu_i(t) = (1/N) sum_b e^{2 pi i g_i(t) . b} conj(a_{i,b})`.
    pub fn nu(&self, letter: usize, t: &RationalPoint) -> Result<Complex<F>, ModelError> {
        let g = self.g_map(letter, t)?;
        Ok(self.nu_at_target(letter, &g))
    }

    /// `nu` evaluated at an already computed target `g = g_i(t)`.
    pub fn nu_at_target(&self, letter: usize, g: &RationalPoint) -> Complex<F> {
        let n = self.ifs.digit_count();
        let mut acc = Complex::new(F::zero(), F::zero());
        for (b, a) in self.ifs.digits.iter().zip(&self.coeffs[letter]) {
            acc = acc + unit_phase::<F>(&g.dot_int(b)) * a.conj();
        }
        acc / F::from_usize(n).expect("digit count fits scalar")
    }
}

/// Classification of the normalized filter matrix of a system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MatrixClass<F> {
    /// Square with orthonormal columns and rows: the operators are Cuntz isometries.
    Unitary,
    /// Orthonormal columns only: a genuine row co-isometry.
    Isometry,
    /// Columns fail orthonormality; carries the largest defect
    /// `|(1/N) sum_i a_{i,b} conj(a_{i,b'}) e^{2 pi i R^{-1}(b-b') . l_i} - delta_{b,b'}|`.
    Invalid { max_defect: F },
}

/// Classifies the matrix `(1/sqrt(N)) (e^{2 pi i R^{-1} b . l_i} a_{i,b})`.
pub fn check_filter_matrix<F: Real>(fs: &FilterSystem<F>) -> MatrixClass<F> {
    let n = fs.ifs.digit_count();
    let m = fs.filter_count();
    let inv_sqrt_n = F::one() / F::from_usize(n).unwrap().sqrt();
    // entries[i][b]
    let mut entries = vec![vec![Complex::new(F::zero(), F::zero()); n]; m];
    for (i, l) in fs.freqs.iter().enumerate() {
        for (bi, b) in fs.ifs.digits.iter().enumerate() {
            let rb = fs
                .ifs
                .r_inv
                .apply(&RationalPoint::from_integers(b))
                .dot_int(l);
            entries[i][bi] = unit_phase::<F>(&rb) * fs.coeffs[i][bi] * inv_sqrt_n;
        }
    }
    let matrix_tol = F::lit(tol::MATRIX);
    let mut col_defect = F::zero();
    for b in 0..n {
        for b2 in 0..n {
            let mut acc = Complex::new(F::zero(), F::zero());
            for row in entries.iter() {
                acc = acc + row[b].conj() * row[b2];
            }
            let target = if b == b2 { F::one() } else { F::zero() };
            let dev = (acc - Complex::new(target, F::zero())).norm();
            if dev > col_defect {
                col_defect = dev;
            }
        }
    }
    if col_defect > matrix_tol {
        return MatrixClass::Invalid {
            max_defect: col_defect,
        };
    }
    if m == n {
        let mut row_defect = F::zero();
        for i in 0..m {
            for i2 in 0..m {
                let mut acc = Complex::new(F::zero(), F::zero());
                for b in 0..n {
                    acc = acc + entries[i][b] * entries[i2][b].conj();
                }
                let target = if i == i2 { F::one() } else { F::zero() };
                let dev = (acc - Complex::new(target, F::zero())).norm();
                if dev > row_defect {
                    row_defect = dev;
                }
            }
        }
        if row_defect <= matrix_tol {
            return MatrixClass::Unitary;
        }
    }
    MatrixClass::Isometry
}

/// One spectral transition out of a point: letter, exact target, weight.
#[derive(Clone, Debug)]
pub struct Transition<F: Real = f64> {
    pub letter: usize,
    pub target: RationalPoint,
    pub weight: Complex<F>,
}

impl<F: Real> Transition<F> {
    /// Whether the transition is possible (weight above the zero threshold).
    pub fn is_possible(&self) -> bool {
        self.weight.norm() > F::lit(tol::ZERO_WEIGHT)
    }
}

/// All `M` transitions out of `t`: `(i, g_i(t), nu_i(t))`.
///
/// Row normalization `sum_i |nu_i(t)|^2 = 1` holds for every valid system.
pub fn spectral_transition<F: Real>(
    fs: &FilterSystem<F>,
    t: &RationalPoint,
) -> Result<Vec<Transition<F>>, ModelError> {
    (0..fs.filter_count())
        .map(|letter| {
            let target = fs.g_map(letter, t)?;
            let weight = fs.nu_at_target(letter, &target);
            Ok(Transition {
                letter,
                target,
                weight,
            })
        })
        .collect()
}

/// Truncated Fourier transform of the invariant measure:
/// `prod_{k=1..depth} m_B((R^T)^{-k} xi)`. Depth 0 returns 1 by convention.
pub fn mu_hat<F: Real>(
    fs: &FilterSystem<F>,
    xi: &RationalPoint,
    depth: usize,
) -> Result<Complex<F>, ModelError> {
    mu_hat_with_tail(fs, xi, depth).map(|(value, _)| value)
}

/// [`mu_hat`] plus the convergence diagnostic `|1 - m_B((R^T)^{-depth} xi)|`,
/// the deviation of the last factor from 1.
pub fn mu_hat_with_tail<F: Real>(
    fs: &FilterSystem<F>,
    xi: &RationalPoint,
    depth: usize,
) -> Result<(Complex<F>, F), ModelError> {
    if xi.dim() != fs.dim() {
        return Err(ModelError::PointDimension {
            got: xi.dim(),
            expected: fs.dim(),
        });
    }
    let one = Complex::new(F::one(), F::zero());
    let mut product = one;
    let mut last_dev = F::zero();
    let mut t = xi.clone();
    for _ in 0..depth {
        t = fs.ifs.rt_inv.apply(&t);
        let factor = fs.ifs.m_b::<F>(&t);
        last_dev = (one - factor).norm();
        product = product * factor;
    }
    Ok((product, last_dev))
}

/// Floating-point copy of the spectral dynamics for bulk bound checks.
///
/// Profiles and frame-bound sweeps evaluate `mu_hat` millions of times; there
/// the exact-phase route is needless, since monotonicity is structural and the
/// Bessel bounds carry `1e-8` slack. Anything asserting exact orthogonality
/// (Gram matrices, reversing identities) should keep using [`mu_hat`].
#[derive(Clone, Debug)]
pub struct FloatDynamics<F: Real = f64> {
    dim: usize,
    rt_inv: Vec<F>,
    digits: Vec<Vec<F>>,
}

impl<F: Real> FloatDynamics<F> {
    pub fn new(fs: &FilterSystem<F>) -> Self {
        let dim = fs.dim();
        let rt_inv = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| F::from_rational(fs.ifs.rt_inv.at(i, j)))
            .collect();
        let digits = fs
            .ifs
            .digits
            .iter()
            .map(|b| b.iter().map(|&c| F::from_i64(c).expect("digit fits scalar")).collect())
            .collect();
        FloatDynamics {
            dim,
            rt_inv,
            digits,
        }
    }

    fn m_b(&self, t: &[F]) -> Complex<F> {
        let two_pi = F::PI() + F::PI();
        let mut acc = Complex::new(F::zero(), F::zero());
        for b in &self.digits {
            let mut dot = F::zero();
            for (x, y) in b.iter().zip(t) {
                dot = dot + *x * *y;
            }
            let (sin, cos) = (two_pi * dot).sin_cos();
            acc = acc + Complex::new(cos, sin);
        }
        acc / F::from_usize(self.digits.len()).expect("digit count fits scalar")
    }

    /// Truncated product `prod_k m_B((R^T)^{-k} xi)` in floating point, with
    /// the last-factor deviation from 1.
    pub fn mu_hat_with_tail(&self, xi: &[F], depth: usize) -> (Complex<F>, F) {
        let one = Complex::new(F::one(), F::zero());
        let mut product = one;
        let mut last_dev = F::zero();
        let mut t = xi.to_vec();
        let mut next = vec![F::zero(); self.dim];
        for _ in 0..depth {
            for i in 0..self.dim {
                let mut acc = F::zero();
                for j in 0..self.dim {
                    acc = acc + self.rt_inv[i * self.dim + j] * t[j];
                }
                next[i] = acc;
            }
            std::mem::swap(&mut t, &mut next);
            let factor = self.m_b(&t);
            last_dev = (one - factor).norm();
            product = product * factor;
        }
        (product, last_dev)
    }
}

/// No-overlap test: digits pairwise incongruent mod `R Z^d`, decided exactly by
/// solving `R x = b - b'` over the rationals and testing integrality.
pub fn check_no_overlap(ifs: &IfsSpec) -> bool {
    let digits = ifs.digits();
    for (i, b) in digits.iter().enumerate() {
        for b2 in digits.iter().skip(i + 1) {
            let diff: Vec<i64> = b.iter().zip(b2).map(|(x, y)| x - y).collect();
            let solution = ifs.r_inv.apply(&RationalPoint::from_integers(&diff));
            if solution.is_integral() {
                return false;
            }
        }
    }
    true
}

/// Congruence-based sufficient condition for the measure `mu_B` to have no
/// overlap; alias of [`check_no_overlap`] taking the full system.
pub fn has_no_overlap<F: Real>(fs: &FilterSystem<F>) -> bool {
    check_no_overlap(&fs.ifs)
}

/// Deterministic rational points for randomized checks: numerators in
/// `[-max_num, max_num]`, denominators in `[1, max_den]`.
pub fn random_point<R: rand::Rng>(
    rng: &mut R,
    dim: usize,
    max_num: i64,
    max_den: i64,
) -> RationalPoint {
    let coords = (0..dim)
        .map(|_| {
            let num = rng.gen_range(-max_num..=max_num);
            let den = rng.gen_range(1..=max_den);
            BigRational::new(num.into(), den.into())
        })
        .collect();
    RationalPoint::new(coords)
}

/// Largest deviation of `sum_i |nu_i(t)|^2` from 1 over the given points.
pub fn row_normalization_defect<F: Real>(
    fs: &FilterSystem<F>,
    points: &[RationalPoint],
) -> Result<F, ModelError> {
    let mut worst = F::zero();
    for t in points {
        let mut mass = F::zero();
        for tr in spectral_transition(fs, t)? {
            mass = mass + tr.weight.norm_sqr();
        }
        let dev = (mass - F::one()).abs();
        if dev > worst {
            worst = dev;
        }
    }
    Ok(worst)
}

/// Fractional parts of all digit pairings `b . t`, exposed for diagnostics.
pub fn digit_phases(ifs: &IfsSpec, t: &RationalPoint) -> Vec<BigRational> {
    ifs.digits().iter().map(|b| fract(&t.dot_int(b))).collect()
}

/// Integer label arithmetic for atoms: `l + R t` with exact rationals.
pub fn affine_label(r: &[Vec<i64>], l: &[i64], t: &RationalPoint) -> RationalPoint {
    &RationalPoint::from_integers(l) + &int_matrix_apply(r, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num_complex::Complex64;

    fn rp(coords: &[i64]) -> RationalPoint {
        RationalPoint::from_integers(coords)
    }

    #[test]
    fn expansive_validation() {
        assert!(matches!(
            IfsSpec::new(vec![vec![1]], vec![vec![0]]),
            Err(ModelError::NotExpansive { .. })
        ));
        assert!(matches!(
            IfsSpec::new(vec![vec![1, 1], vec![0, 1]], vec![vec![0, 0]]),
            Err(ModelError::NotExpansive { .. })
        ));
        assert!(IfsSpec::new(vec![vec![4, 0], vec![0, 2]], vec![vec![0, 0]]).is_ok());
    }

    #[test]
    fn digit_validation() {
        assert!(matches!(
            IfsSpec::new(vec![vec![4]], vec![vec![2]]),
            Err(ModelError::MissingZeroDigit)
        ));
        assert!(matches!(
            IfsSpec::new(vec![vec![4]], vec![vec![0], vec![2], vec![2]]),
            Err(ModelError::DuplicateDigit { first: 1, index: 2 })
        ));
    }

    #[test]
    fn filter_matrix_mu4_is_unitary() {
        let fs = fixtures::mu4();
        assert_eq!(check_filter_matrix(&fs), MatrixClass::<f64>::Unitary);
    }

    #[test]
    fn filter_matrix_ex411_full_is_unitary() {
        let fs = fixtures::ex411_full();
        assert_eq!(check_filter_matrix(&fs), MatrixClass::<f64>::Unitary);
    }

    #[test]
    fn filter_matrix_reduced_ex411_is_isometry() {
        let fs = fixtures::ex411_reduced();
        assert_eq!(check_filter_matrix(&fs), MatrixClass::<f64>::Isometry);
    }

    #[test]
    fn filter_matrix_scaled_column_defect() {
        // mu_4 with the b = 2 coefficient column doubled: that column's norm^2
        // becomes 4, so the worst deviation from the identity is 3.
        let ifs = IfsSpec::new(vec![vec![4]], vec![vec![0], vec![2]]).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let two = Complex64::new(2.0, 0.0);
        let fs =
            FilterSystem::new(ifs, vec![vec![0], vec![1]], vec![vec![one, two], vec![one, two]])
                .unwrap();
        match check_filter_matrix(&fs) {
            MatrixClass::Invalid { max_defect } => assert!((max_defect - 3.0).abs() < 1e-12),
            other => panic!("expected Invalid, got {other:?}"),
        }
    }

    #[test]
    fn m_b_values_on_two_digit_set() {
        let digits = vec![vec![0], vec![2]];
        let at = |p: i64, q: i64| eval_m_b::<f64>(&digits, &RationalPoint::scalar(p, q));
        assert_eq!(at(0, 1), Complex64::new(1.0, 0.0));
        assert_eq!(at(1, 4), Complex64::new(0.0, 0.0));
        assert_eq!(at(-1, 1), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn spectral_transition_mu4_at_zero() {
        let fs = fixtures::mu4();
        let transitions = spectral_transition(&fs, &rp(&[0])).unwrap();
        assert_eq!(transitions.len(), 2);
        assert_eq!(transitions[0].weight, Complex64::new(1.0, 0.0));
        assert!(transitions[0].target.is_zero());
        // nu_1(0) = m_B(-1/4) = 0
        assert_eq!(transitions[1].weight.norm(), 0.0);
        let mass: f64 = transitions.iter().map(|t| t.weight.norm_sqr()).sum();
        assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_transition_ex411_at_minus_one() {
        let fs = fixtures::ex411_full();
        let t = rp(&[-1, 0]);
        let transitions = spectral_transition(&fs, &t).unwrap();
        assert!(transitions[0].weight.norm() < 1e-15);
        assert!(transitions[2].weight.norm() < 1e-15);
        // nu_1 = conj(alpha_1), nu_3 = conj(alpha_3) with alpha = (1 +- i)/2
        let nu1 = transitions[1].weight;
        let nu3 = transitions[3].weight;
        assert!((nu1 - Complex64::new(0.5, -0.5)).norm() < 1e-15);
        assert!((nu3 - Complex64::new(0.5, 0.5)).norm() < 1e-15);
        assert!((nu1.norm_sqr() + nu3.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn row_normalization_at_generic_points() {
        let fs = fixtures::ex411_reduced();
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let points: Vec<RationalPoint> =
            (0..200).map(|_| random_point(&mut rng, 1, 50, 40)).collect();
        let defect = row_normalization_defect(&fs, &points).unwrap();
        assert!(defect < 1e-10, "defect {defect}");
    }

    #[test]
    fn mu_hat_identity_cases() {
        let fs = fixtures::mu4();
        let zero = rp(&[0]);
        for depth in [0, 1, 40] {
            assert_eq!(
                mu_hat(&fs, &zero, depth).unwrap(),
                Complex64::new(1.0, 0.0)
            );
        }
    }

    /// Independent oracle: evaluate the truncated product directly in floats,
    /// with no rational reduction, for the Jorgensen-Pedersen spectrum.
    fn mu4_product_oracle(xi: f64, depth: usize) -> Complex64 {
        let mut product = Complex64::new(1.0, 0.0);
        let mut scale = 4.0;
        for _ in 0..depth {
            let theta = 2.0 * std::f64::consts::PI * 2.0 * xi / scale;
            product *= Complex64::new(0.5 + 0.5 * theta.cos(), 0.5 * theta.sin());
            scale *= 4.0;
        }
        product
    }

    #[test]
    fn mu_hat_orthogonality_of_jp_spectrum() {
        let fs = fixtures::mu4();
        // lambda = l_0 + 4 l_1 + 16 l_2 over {0,1}^3
        let labels: Vec<i64> = (0..8)
            .map(|k| (k & 1) + 4 * ((k >> 1) & 1) + 16 * ((k >> 2) & 1))
            .collect();
        for &a in &labels {
            for &b in &labels {
                if a == b {
                    continue;
                }
                let xi = rp(&[a - b]);
                let value = mu_hat(&fs, &xi, 40).unwrap();
                assert!(value.norm() < 1e-8, "mu_hat({}) = {}", a - b, value);
                let oracle = mu4_product_oracle((a - b) as f64, 40);
                assert!((value - oracle).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn mu_hat_reports_tail_factor() {
        let fs = fixtures::mu4();
        let (_, tail) = mu_hat_with_tail(&fs, &rp(&[3]), 40).unwrap();
        assert!(tail < 1e-12);
        let (v30, _) = mu_hat_with_tail(&fs, &rp(&[2]), 30).unwrap();
        let (v40, _) = mu_hat_with_tail(&fs, &rp(&[2]), 40).unwrap();
        assert!((v30 - v40).norm() < 1e-12);
    }

    #[test]
    fn float_dynamics_matches_exact_mu_hat() {
        for fs in [fixtures::mu4(), fixtures::ex421()] {
            let dynamics = FloatDynamics::new(&fs);
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
            for _ in 0..50 {
                let xi = random_point(&mut rng, fs.dim(), 40, 12);
                let exact = mu_hat(&fs, &xi, 40).unwrap();
                let fast = dynamics.mu_hat_with_tail(&xi.to_floats::<f64>(), 40).0;
                assert!((exact - fast).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn no_overlap_tests() {
        let scale4 = IfsSpec::new(vec![vec![4]], vec![vec![0], vec![2]]).unwrap();
        assert!(check_no_overlap(&scale4));
        let scale2 = IfsSpec::new(vec![vec![2]], vec![vec![0], vec![2]]).unwrap();
        assert!(!check_no_overlap(&scale2));
        let ex421 = fixtures::ex421();
        assert!(has_no_overlap(&ex421));
        let ex411 = fixtures::ex411_full();
        assert!(has_no_overlap(&ex411));
    }

    #[test]
    fn alpha_form_detection() {
        assert!(fixtures::mu4().alpha_form().is_some());
        assert!(fixtures::ex411_full().alpha_form().is_none());
        let alpha = fixtures::ex411_reduced().alpha_form().unwrap().to_vec();
        assert_eq!(alpha[2], Complex64::new(0.0, 0.0));
    }
}
