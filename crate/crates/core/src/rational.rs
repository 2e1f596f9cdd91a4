//! Exact rational points and the small linear algebra the spectral maps need.
//!
//! Cycle detection, lattice membership and invariance of candidate sets are all
//! decided by exact equality of rationals; nothing here rounds. Conversion to
//! floating point happens only at the unit circle, in [`unit_phase`].

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::Real;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RationalError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("cannot parse rational point from {0:?}")]
    Parse(String),
}

/// Point of `Q^d` with reduced exact coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint(Vec<BigRational>);

impl RationalPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        RationalPoint(coords)
    }

    pub fn zero(dim: usize) -> Self {
        RationalPoint(vec![BigRational::zero(); dim])
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        RationalPoint(
            coords
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// One-dimensional point `p/q`.
    pub fn scalar(p: i64, q: i64) -> Self {
        RationalPoint(vec![BigRational::new(BigInt::from(p), BigInt::from(q))])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn coord(&self, j: usize) -> &BigRational {
        &self.0[j]
    }

    /// `sum_j b_j t_j` against an integer vector.
    pub fn dot_int(&self, b: &[i64]) -> BigRational {
        assert_eq!(self.0.len(), b.len(), "dot dimension mismatch");
        let mut acc = BigRational::zero();
        for (t, &bj) in self.0.iter().zip(b) {
            acc += t * BigRational::from_integer(BigInt::from(bj));
        }
        acc
    }

    /// True iff every coordinate is an integer.
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn to_floats<F: Real>(&self) -> Vec<F> {
        self.0.iter().map(F::from_rational).collect()
    }
}

impl Add for &RationalPoint {
    type Output = RationalPoint;
    fn add(self, rhs: &RationalPoint) -> RationalPoint {
        assert_eq!(self.dim(), rhs.dim(), "add dimension mismatch");
        RationalPoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RationalPoint {
    type Output = RationalPoint;
    fn sub(self, rhs: &RationalPoint) -> RationalPoint {
        assert_eq!(self.dim(), rhs.dim(), "sub dimension mismatch");
        RationalPoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (j, c) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for RationalPoint {
    type Err = RationalError;

    /// Accepts `-1`, `3/4`, `(-1, 0)`, `-1,0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        if trimmed.is_empty() {
            return Err(RationalError::Parse(s.to_string()));
        }
        let coords = trimmed
            .split(',')
            .map(|c| BigRational::from_str(c.trim()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| RationalError::Parse(s.to_string()))?;
        Ok(RationalPoint(coords))
    }
}

/// Fractional part in `[0, 1)`.
pub fn fract(r: &BigRational) -> BigRational {
    r - r.floor()
}

/// `e^{2 pi i r}` for exact rational `r`, reduced mod 1 first.
///
/// Quarter-turn phases are returned exactly, so sums of fourth roots of unity
/// cancel to exactly zero instead of leaving `~1e-16` residues; everything else
/// goes through `cos`/`sin`.
pub fn unit_phase<F: Real>(r: &BigRational) -> Complex<F> {
    let frac = fract(r);
    let denom = frac.denom();
    if denom.is_one() {
        return Complex::new(F::one(), F::zero());
    }
    if *denom == BigInt::from(2) {
        return Complex::new(-F::one(), F::zero());
    }
    if *denom == BigInt::from(4) {
        // numerator is 1 or 3 after reduction
        return if frac.numer().is_one() {
            Complex::new(F::zero(), F::one())
        } else {
            Complex::new(F::zero(), -F::one())
        };
    }
    let theta = F::from_rational(&frac) * (F::PI() + F::PI());
    Complex::new(theta.cos(), theta.sin())
}

/// Square matrix over the rationals, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl RatMatrix {
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self, RationalError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(RationalError::DimensionMismatch(row.len(), n));
            }
            entries.extend(
                row.iter()
                    .map(|&e| BigRational::from_integer(BigInt::from(e))),
            );
        }
        Ok(RatMatrix { n, entries })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    pub fn transpose(&self) -> RatMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                entries.push(self.at(i, j).clone());
            }
        }
        RatMatrix { n, entries }
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<RatMatrix, RationalError> {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv: Vec<BigRational> = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r * n + col].is_zero())
                .ok_or(RationalError::Singular)?;
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                    inv.swap(col * n + j, pivot * n + j);
                }
            }
            let p = a[col * n + col].clone();
            for j in 0..n {
                a[col * n + j] /= &p;
                inv[col * n + j] /= &p;
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let factor = a[r * n + col].clone();
                for j in 0..n {
                    let s = &a[col * n + j] * &factor;
                    a[r * n + j] -= s;
                    let s = &inv[col * n + j] * &factor;
                    inv[r * n + j] -= s;
                }
            }
        }
        Ok(RatMatrix { n, entries: inv })
    }

    pub fn apply(&self, p: &RationalPoint) -> RationalPoint {
        assert_eq!(p.dim(), self.n, "matrix apply dimension mismatch");
        let mut out = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut acc = BigRational::zero();
            for j in 0..self.n {
                acc += self.at(i, j) * p.coord(j);
            }
            out.push(acc);
        }
        RationalPoint(out)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            for j in 0..self.n {
                write!(f, "{}{}", if j > 0 { " " } else { "" }, self.at(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Applies an integer matrix to a rational point: `R t`.
pub fn int_matrix_apply(rows: &[Vec<i64>], p: &RationalPoint) -> RationalPoint {
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        out.push(p.dot_int(row));
    }
    RationalPoint(out)
}

/// True iff `|r| < eps` when rounded; exact zero short-circuits.
pub fn rational_abs_below(r: &BigRational, eps: f64) -> bool {
    if r.is_zero() {
        return true;
    }
    r.abs().to_f64().map(|v| v < eps).unwrap_or(false)
}
