//! Frame atoms generated by iterating the co-isometry over word sets.
//!
//! Three concrete realizations:
//!
//! * weighted exponentials on a fractal measure — `V_omega e_c` has frequency
//!   label `l_{w1} + R l_{w2} + ... + R^{n-1} l_{wn} + R^n c` and weight
//!   `alpha_{w1} ... alpha_{wn}` (digit-independent systems at extreme cycle
//!   points);
//! * generalized Walsh step functions on `[0,1)` — `V_omega 1` is constant on
//!   `N^n`-adic cells with values given by products of matrix entries along the
//!   base-`N` digits of the cell index;
//! * a sparse exact model of operators on `l^2(Q)` whose generated family has
//!   frame bound zero.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::model::{affine_label, FilterSystem};
use crate::rational::RationalPoint;
use crate::words::{words_up_to, Word, WordError};
use crate::{tol, Real};

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("fourier atoms need digit-independent coefficients (alpha form)")]
    NotAlphaForm,
    #[error("basepoint {point} fails the integrality test t . b in Z; it is not an extreme cycle point")]
    NonExtremeBasepoint { point: RationalPoint },
    #[error("walsh matrix must be rectangular and nonempty")]
    BadShape,
    #[error("walsh normalization failed: |(1/N) A* A - I| reaches {defect}")]
    NotNormalized { defect: f64 },
    #[error("walsh matrix first row must be all ones")]
    FirstRowNotOnes,
    #[error("step function at level {level} over base {base} needs {expected} values, got {got}")]
    ValueCount {
        base: usize,
        level: usize,
        expected: usize,
        got: usize,
    },
    #[error("step function level overflow: {base}^{level} does not fit in memory")]
    LevelOverflow { base: usize, level: usize },
    #[error("cannot lower the level of a level-0 step function")]
    LevelUnderflow,
    #[error("step functions have different bases: {0} vs {1}")]
    BaseMismatch(usize, usize),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// One weighted exponential `V_omega e_c = weight * e_label`.
#[derive(Clone, Debug)]
pub struct FourierAtom<F: Real = f64> {
    pub label: RationalPoint,
    pub weight: Complex<F>,
    pub word: Word,
    pub basepoint: RationalPoint,
}

/// Atoms for the given words at an extreme cycle point `c`.
///
/// Labels are computed in exact arithmetic by the Horner recursion
/// `label = l_{w_k} + R * label` from the innermost letter; the empty word
/// yields `(c, 1)`.
pub fn fourier_atoms<F: Real>(
    fs: &FilterSystem<F>,
    c: &RationalPoint,
    words: &[Word],
) -> Result<Vec<FourierAtom<F>>, FrameError> {
    let alpha = fs.alpha_form().ok_or(FrameError::NotAlphaForm)?;
    if !fs.ifs().is_extreme_point(c) {
        return Err(FrameError::NonExtremeBasepoint { point: c.clone() });
    }
    let scaling = fs.ifs().scaling();
    let mut out = Vec::with_capacity(words.len());
    for word in words {
        word.check_alphabet(fs.filter_count())?;
        let mut label = c.clone();
        let mut weight = Complex::new(F::one(), F::zero());
        for &letter in word.letters().iter().rev() {
            label = affine_label(scaling, &fs.freqs()[letter as usize], &label);
            weight = weight * alpha[letter as usize];
        }
        out.push(FourierAtom {
            label,
            weight,
            word: word.clone(),
            basepoint: c.clone(),
        });
    }
    Ok(out)
}

/// Complex step function constant on the `N^n`-adic cells of `[0,1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction<F: Real = f64> {
    base: usize,
    level: usize,
    values: Vec<Complex<F>>,
}

impl<F: Real> StepFunction<F> {
    pub fn new(base: usize, level: usize, values: Vec<Complex<F>>) -> Result<Self, FrameError> {
        let expected = cells(base, level)?;
        if values.len() != expected {
            return Err(FrameError::ValueCount {
                base,
                level,
                expected,
                got: values.len(),
            });
        }
        Ok(StepFunction {
            base,
            level,
            values,
        })
    }

    pub fn constant_one(base: usize) -> Self {
        StepFunction {
            base,
            level: 0,
            values: vec![Complex::new(F::one(), F::zero())],
        }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn values(&self) -> &[Complex<F>] {
        &self.values
    }

    /// Lebesgue norm squared: `N^{-n} sum |values|^2`.
    pub fn norm_sqr(&self) -> F {
        let mut acc = F::zero();
        for v in &self.values {
            acc = acc + v.norm_sqr();
        }
        acc / F::from_usize(self.values.len()).expect("cell count fits scalar")
    }

    /// Exact replication to a finer level.
    pub fn lift_to(&self, level: usize) -> Result<StepFunction<F>, FrameError> {
        if level < self.level {
            return Err(FrameError::LevelUnderflow);
        }
        if level == self.level {
            return Ok(self.clone());
        }
        let copies = cells(self.base, level - self.level)?;
        let mut values = Vec::with_capacity(self.values.len() * copies);
        for v in &self.values {
            values.extend(std::iter::repeat(*v).take(copies));
        }
        StepFunction::new(self.base, level, values)
    }

    /// `integral f conj(g)`, lifting to the finer of the two levels.
    pub fn inner(&self, other: &StepFunction<F>) -> Result<Complex<F>, FrameError> {
        if self.base != other.base {
            return Err(FrameError::BaseMismatch(self.base, other.base));
        }
        let level = self.level.max(other.level);
        let f = self.lift_to(level)?;
        let g = other.lift_to(level)?;
        let mut acc = Complex::new(F::zero(), F::zero());
        for (a, b) in f.values.iter().zip(&g.values) {
            acc = acc + a * b.conj();
        }
        Ok(acc / F::from_usize(f.values.len()).expect("cell count fits scalar"))
    }
}

fn cells(base: usize, level: usize) -> Result<usize, FrameError> {
    base.checked_pow(level as u32)
        .filter(|&c| c <= 1 << 28)
        .ok_or(FrameError::LevelOverflow { base, level })
}

/// Validated generalized Walsh filter matrix: `M x N` with `(1/N) A* A = I_N`
/// and constant first row 1.
#[derive(Clone, Debug)]
pub struct WalshSystem<F: Real = f64> {
    rows: Vec<Vec<Complex<F>>>,
}

impl<F: Real> WalshSystem<F> {
    pub fn new(rows: Vec<Vec<Complex<F>>>) -> Result<Self, FrameError> {
        let m = rows.len();
        let n = rows.first().map(|r| r.len()).unwrap_or(0);
        if m == 0 || n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(FrameError::BadShape);
        }
        let matrix_tol = F::lit(tol::MATRIX);
        let one = Complex::new(F::one(), F::zero());
        if rows[0].iter().any(|a| (*a - one).norm() > matrix_tol) {
            return Err(FrameError::FirstRowNotOnes);
        }
        let inv_n = F::one() / F::from_usize(n).expect("column count fits scalar");
        let mut defect = F::zero();
        for j in 0..n {
            for k in 0..n {
                let mut acc = Complex::new(F::zero(), F::zero());
                for row in &rows {
                    acc = acc + row[j].conj() * row[k];
                }
                acc = acc * inv_n;
                let target = if j == k { F::one() } else { F::zero() };
                let dev = (acc - Complex::new(target, F::zero())).norm();
                if dev > defect {
                    defect = dev;
                }
            }
        }
        if defect > matrix_tol {
            return Err(FrameError::NotNormalized {
                defect: num_traits::ToPrimitive::to_f64(&defect).unwrap_or(f64::NAN),
            });
        }
        Ok(WalshSystem { rows })
    }

    /// Filter count `M` (alphabet size).
    pub fn filter_count(&self) -> usize {
        self.rows.len()
    }

    /// Digit count `N` (subdivision base).
    pub fn base(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<Complex<F>>] {
        &self.rows
    }

    /// Whether the matrix is square with orthonormal rows as well (Cuntz case).
    pub fn is_unitary(&self) -> bool {
        let m = self.filter_count();
        let n = self.base();
        if m != n {
            return false;
        }
        let inv_n = F::one() / F::from_usize(n).expect("column count fits scalar");
        let matrix_tol = F::lit(tol::MATRIX);
        for i in 0..m {
            for i2 in 0..m {
                let mut acc = Complex::new(F::zero(), F::zero());
                for j in 0..n {
                    acc = acc + self.rows[i][j] * self.rows[i2][j].conj();
                }
                acc = acc * inv_n;
                let target = if i == i2 { F::one() } else { F::zero() };
                if (acc - Complex::new(target, F::zero())).norm() > matrix_tol {
                    return false;
                }
            }
        }
        true
    }

    /// `V_omega 1`, materialized exactly at level `|omega|`: the value on cell
    /// `j` is the product of `a[w_k][d_k]` over the base-`N` digits `d_k` of
    /// `j`, most significant first.
    pub fn atom(&self, word: &Word) -> Result<StepFunction<F>, FrameError> {
        word.check_alphabet(self.filter_count())?;
        let n = self.base();
        let level = word.len();
        let count = cells(n, level)?;
        let mut values = Vec::with_capacity(count);
        for j in 0..count {
            let mut v = Complex::new(F::one(), F::zero());
            let mut rest = j;
            let mut divisor = count;
            for &letter in word.letters() {
                divisor /= n;
                let digit = rest / divisor;
                rest %= divisor;
                v = v * self.rows[letter as usize][digit];
            }
            values.push(v);
        }
        StepFunction::new(n, level, values)
    }

    /// Frame atoms `V_omega 1` over the words of length at most `lmax` that do
    /// not end in letter 0, plus the empty word; length-lexicographic order.
    ///
    /// Letter 0 is the unique cycle word at the trivial minimal set: the first
    /// row is constant 1, so `V_0 1 = 1` and trailing zeros reproduce atoms.
    pub fn frame_atoms(&self, lmax: usize) -> Result<Vec<(Word, StepFunction<F>)>, FrameError> {
        words_up_to(self.filter_count(), lmax)
            .filter(|w| w.letters().last() != Some(&0))
            .map(|w| self.atom(&w).map(|a| (w, a)))
            .collect()
    }

    /// `V_k f(x) = m_k(x) f(N x mod 1)`: raises the level by one.
    pub fn apply_v(&self, k: usize, f: &StepFunction<F>) -> Result<StepFunction<F>, FrameError> {
        if f.base() != self.base() {
            return Err(FrameError::BaseMismatch(f.base(), self.base()));
        }
        let n = self.base();
        let inner = f.values.len();
        let mut values = Vec::with_capacity(n * inner);
        for d in 0..n {
            for c in 0..inner {
                values.push(self.rows[k][d] * f.values[c]);
            }
        }
        StepFunction::new(n, f.level + 1, values)
    }

    /// `V_k* f(x) = (1/N) sum_j conj(a_{k,j}) f((x + j)/N)`: lowers the level
    /// by one; level 0 underflows.
    pub fn apply_v_star(
        &self,
        k: usize,
        f: &StepFunction<F>,
    ) -> Result<StepFunction<F>, FrameError> {
        if f.base() != self.base() {
            return Err(FrameError::BaseMismatch(f.base(), self.base()));
        }
        if f.level == 0 {
            return Err(FrameError::LevelUnderflow);
        }
        let n = self.base();
        let inner = f.values.len() / n;
        let inv_n = F::one() / F::from_usize(n).expect("base fits scalar");
        let mut values = Vec::with_capacity(inner);
        for c in 0..inner {
            let mut acc = Complex::new(F::zero(), F::zero());
            for j in 0..n {
                acc = acc + self.rows[k][j].conj() * f.values[j * inner + c];
            }
            values.push(acc * inv_n);
        }
        StepFunction::new(n, f.level - 1, values)
    }
}

/// Exact sparse model of the `l^2(Q)` family generated from
/// `V_0* e_r = lambda_r^0 e_{r/2}`, `V_1* e_r = lambda_r^1 e_{(r-1)/2}`
/// with `lambda_0^0 = 1`, `lambda_0^1 = 0` and `lambda_r^i = 1/sqrt(2)`
/// otherwise. The adjoints act by `V_i e_r = conj(lambda^i_{h_i(r)}) e_{h_i(r)}`
/// with `h_0(r) = 2r`, `h_1(r) = 2r + 1`.
pub mod l2q {
    use super::*;

    /// Finitely supported vector indexed by exact rationals.
    #[derive(Clone, Debug, Default, PartialEq)]
    pub struct SparseRationalVector<F: Real = f64>(BTreeMap<BigRational, Complex<F>>);

    impl<F: Real> SparseRationalVector<F> {
        pub fn zero() -> Self {
            SparseRationalVector(BTreeMap::new())
        }

        pub fn basis(r: BigRational) -> Self {
            let mut map = BTreeMap::new();
            map.insert(r, Complex::new(F::one(), F::zero()));
            SparseRationalVector(map)
        }

        pub fn amplitude(&self, r: &BigRational) -> Complex<F> {
            self.0
                .get(r)
                .copied()
                .unwrap_or_else(|| Complex::new(F::zero(), F::zero()))
        }

        pub fn norm_sqr(&self) -> F {
            let mut acc = F::zero();
            for v in self.0.values() {
                acc = acc + v.norm_sqr();
            }
            acc
        }

        pub fn support(&self) -> impl Iterator<Item = (&BigRational, &Complex<F>)> {
            self.0.iter()
        }

        fn insert_add(&mut self, r: BigRational, v: Complex<F>) {
            if v.norm_sqr() == F::zero() {
                return;
            }
            let entry = self
                .0
                .entry(r)
                .or_insert_with(|| Complex::new(F::zero(), F::zero()));
            *entry = *entry + v;
        }
    }

    fn lambda<F: Real>(i: usize, q: &BigRational) -> F {
        if q.is_zero() {
            if i == 0 {
                F::one()
            } else {
                F::zero()
            }
        } else {
            F::lit(std::f64::consts::FRAC_1_SQRT_2)
        }
    }

    fn h(i: usize, r: &BigRational) -> BigRational {
        let two = BigRational::from_integer(BigInt::from(2));
        if i == 0 {
            r * &two
        } else {
            r * &two + BigRational::one()
        }
    }

    /// `V_i` applied to a sparse vector.
    pub fn apply_v<F: Real>(i: usize, v: &SparseRationalVector<F>) -> SparseRationalVector<F> {
        let mut out = SparseRationalVector::zero();
        for (r, amp) in v.support() {
            let target = h(i, r);
            let coeff = lambda::<F>(i, &target);
            out.insert_add(target, *amp * coeff);
        }
        out
    }

    /// `V_omega v_0` with `v_0 = e_0`; the rightmost letter acts first.
    pub fn apply_word<F: Real>(word: &Word) -> SparseRationalVector<F> {
        let mut v = SparseRationalVector::basis(BigRational::zero());
        for &letter in word.letters().iter().rev() {
            v = apply_v(letter as usize, &v);
        }
        v
    }

    /// `< e_target, V_omega v_0 >`.
    pub fn pairing<F: Real>(target: &BigRational, word: &Word) -> Complex<F> {
        apply_word::<F>(word).amplitude(target)
    }

    /// `< e_{2^m}, V_omega v_0 >`; nonzero exactly on the words `0^m 1 0^j`,
    /// where it equals `(1/sqrt(2))^{m+1}`.
    pub fn pairing_power_of_two<F: Real>(m: u32, word: &Word) -> Complex<F> {
        pairing(
            &BigRational::from_integer(BigInt::from(2).pow(m)),
            word,
        )
    }

    /// `sum_{omega in Omega_0, |omega| <= lmax} |< e_{2^m}, V_omega v_0 >|^2`,
    /// the frame sum the counterexample sends to zero.
    pub fn mass_at_power_of_two<F: Real>(m: u32, lmax: usize) -> F {
        let mut acc = F::zero();
        for w in words_up_to(2, lmax) {
            if w.letters().last() == Some(&0) {
                continue;
            }
            acc = acc + pairing_power_of_two::<F>(m, &w).norm_sqr();
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num_complex::Complex64;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn label_i64(atom: &FourierAtom<f64>) -> i64 {
        use num_traits::ToPrimitive;
        assert!(atom.label.is_integral());
        atom.label.coord(0).to_integer().to_i64().unwrap()
    }

    #[test]
    fn mu4_atoms_reproduce_jp_spectrum() {
        let fs = fixtures::mu4();
        let c = RationalPoint::zero(1);
        let words: Vec<Word> = ["ε", "1", "01", "11"].iter().map(|s| w(s)).collect();
        let atoms = fourier_atoms(&fs, &c, &words).unwrap();
        let labels: Vec<i64> = atoms.iter().map(label_i64).collect();
        assert_eq!(labels, vec![0, 1, 4, 5]);
        assert!(atoms
            .iter()
            .all(|a| (a.weight - Complex64::new(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn empty_word_atom_is_basepoint() {
        let fs = fixtures::l03();
        let c = RationalPoint::from_integers(&[-1]);
        let atoms = fourier_atoms(&fs, &c, &[Word::empty()]).unwrap();
        assert_eq!(atoms[0].label, c);
        assert_eq!(atoms[0].weight, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn l03_word_zero_label() {
        // label of "0" at c = -1: l_0 + 4 * (-1) = -4
        let fs = fixtures::l03();
        let c = RationalPoint::from_integers(&[-1]);
        let atoms = fourier_atoms(&fs, &c, &[w("0")]).unwrap();
        assert_eq!(label_i64(&atoms[0]), -4);
        assert_eq!(atoms[0].weight, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn atoms_reject_non_extreme_basepoint() {
        let fs = fixtures::mu4();
        let c = RationalPoint::scalar(1, 3);
        assert!(matches!(
            fourier_atoms(&fs, &c, &[Word::empty()]),
            Err(FrameError::NonExtremeBasepoint { .. })
        ));
    }

    #[test]
    fn classical_walsh_atoms() {
        let ws = fixtures::walsh_classical();
        assert!(ws.is_unitary());
        let atoms = ws.frame_atoms(2).unwrap();
        let words: Vec<String> = atoms.iter().map(|(w, _)| w.to_string()).collect();
        assert_eq!(words, vec!["ε", "1", "01", "11"]);
        let values: Vec<Vec<f64>> = atoms
            .iter()
            .map(|(_, a)| a.values().iter().map(|v| v.re).collect())
            .collect();
        assert_eq!(values[0], vec![1.0]);
        assert_eq!(values[1], vec![1.0, -1.0]);
        assert_eq!(values[2], vec![1.0, -1.0, 1.0, -1.0]);
        assert_eq!(values[3], vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn derived_isometry_atom_count() {
        // words not ending in 0 over three letters: 1 + 2 + 6
        let ws = fixtures::walsh_isometry_3x2();
        assert!(!ws.is_unitary());
        let atoms = ws.frame_atoms(2).unwrap();
        assert_eq!(atoms.len(), 9);
        assert!(atoms.iter().all(|(w, a)| a.level() == w.len()));
    }

    #[test]
    fn walsh_rejects_bad_normalization() {
        let rows = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
        ];
        assert!(matches!(
            WalshSystem::new(rows),
            Err(FrameError::NotNormalized { .. })
        ));
    }

    #[test]
    fn walsh_rejects_non_unit_first_row() {
        let rows = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
        ];
        assert!(matches!(
            WalshSystem::new(rows),
            Err(FrameError::FirstRowNotOnes)
        ));
    }

    fn random_step(ws: &WalshSystem<f64>, level: usize, seed: u64) -> StepFunction<f64> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let count = ws.base().pow(level as u32);
        let values = (0..count)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        StepFunction::new(ws.base(), level, values).unwrap()
    }

    #[test]
    fn v_zero_fixes_constants() {
        for ws in [fixtures::walsh_classical(), fixtures::walsh_isometry_3x2()] {
            let one = StepFunction::constant_one(ws.base());
            let lifted = ws.apply_v(0, &one).unwrap();
            assert!(lifted
                .values()
                .iter()
                .all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-15));
        }
    }

    #[test]
    fn co_isometry_identity_on_random_functions() {
        for ws in [fixtures::walsh_classical(), fixtures::walsh_isometry_3x2()] {
            for seed in 0..10 {
                let f = random_step(&ws, 3, seed);
                let mut sum = StepFunction::new(
                    ws.base(),
                    3,
                    vec![Complex64::new(0.0, 0.0); ws.base().pow(3)],
                )
                .unwrap();
                for k in 0..ws.filter_count() {
                    let back = ws.apply_v(k, &ws.apply_v_star(k, &f).unwrap()).unwrap();
                    let values: Vec<Complex64> = sum
                        .values()
                        .iter()
                        .zip(back.values())
                        .map(|(a, b)| a + b)
                        .collect();
                    sum = StepFunction::new(ws.base(), 3, values).unwrap();
                }
                let max_err = sum
                    .values()
                    .iter()
                    .zip(f.values())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                assert!(max_err < 1e-12, "sum V_k V_k* f != f: {max_err}");
            }
        }
    }

    #[test]
    fn unitary_orthogonality_of_operators() {
        let ws = fixtures::walsh_classical();
        let f = random_step(&ws, 2, 77);
        for j in 0..2 {
            for k in 0..2 {
                let vf = ws.apply_v(k, &f).unwrap();
                let back = ws.apply_v_star(j, &vf).unwrap();
                let expect = if j == k { f.clone() } else {
                    StepFunction::new(ws.base(), 2, vec![Complex64::new(0.0, 0.0); 4]).unwrap()
                };
                let max_err = back
                    .values()
                    .iter()
                    .zip(expect.values())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                assert!(max_err < 1e-12);
            }
        }
    }

    #[test]
    fn v_star_underflows_at_level_zero() {
        let ws = fixtures::walsh_classical();
        let one = StepFunction::constant_one(2);
        assert!(matches!(
            ws.apply_v_star(0, &one),
            Err(FrameError::LevelUnderflow)
        ));
    }

    #[test]
    fn prefix_orthogonality_exhaustive() {
        // inner products of V_w 1 and V_w' 1 vanish unless one word is a
        // prefix of the other (unitary case), all pairs up to length 4
        let ws = fixtures::walsh_classical();
        let all: Vec<Word> = words_up_to(2, 4).collect();
        for a in &all {
            for b in &all {
                let is_prefix = a.letters().starts_with(b.letters())
                    || b.letters().starts_with(a.letters());
                if is_prefix {
                    continue;
                }
                let fa = ws.atom(a).unwrap();
                let fb = ws.atom(b).unwrap();
                let ip = fa.inner(&fb).unwrap();
                assert!(ip.norm() < 1e-12, "<V_{a} 1, V_{b} 1> = {ip}");
            }
        }
    }

    #[test]
    fn l2q_pairing_values() {
        use super::l2q::*;
        // m = 1: the matching word inside Omega_0 is "01"
        let p: Complex64 = pairing_power_of_two(1, &w("01"));
        assert!((p.re - 0.5).abs() < 1e-15 && p.im == 0.0);
        // m = 3 with a non-matching word
        let p: Complex64 = pairing_power_of_two(3, &w("0011"));
        assert_eq!(p, Complex64::new(0.0, 0.0));
        // empty word pairs v_0 with itself
        let p: Complex64 = pairing(&BigRational::zero(), &Word::empty());
        assert_eq!(p, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn l2q_trailing_zeros_reproduce_the_same_label() {
        use super::l2q::*;
        let direct: Complex64 = pairing_power_of_two(2, &w("001"));
        let padded: Complex64 = pairing_power_of_two(2, &w("0010"));
        assert!((direct - padded).norm() < 1e-15);
        let expected = (0.5f64).sqrt().powi(3);
        assert!((direct.re - expected).abs() < 1e-15);
    }

    #[test]
    fn l2q_masses_decay_geometrically() {
        use super::l2q::*;
        for m in 1..=4u32 {
            let mass: f64 = mass_at_power_of_two(m, (m + 1) as usize);
            let expected = 0.5f64.powi(m as i32 + 1);
            assert!((mass - expected).abs() < 1e-14, "m={m}: {mass} vs {expected}");
        }
    }
}
