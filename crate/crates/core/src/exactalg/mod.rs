//! Exact integer and rational linear algebra.
//!
//! Everything here is unbounded-precision; there is no fixed-width fast path.
//! The Smith normal form is pinned to the convention `u · m · v = d`.

mod matrix;
mod smith;

pub use matrix::IntMatrix;
pub use smith::{smith_normal_form, SmithDecomposition};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactAlgError {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{rows}x{cols} matrix needs {} entries, found {found}", rows * cols)]
    EntryCount {
        rows: usize,
        cols: usize,
        found: usize,
    },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
}

/// A vector of exact rationals. `BigRational` keeps every entry in lowest
/// terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![BigRational::zero(); len])
    }

    pub fn from_integers(v: &[BigInt]) -> Self {
        Self(v.iter().cloned().map(BigRational::from_integer).collect())
    }

    /// `numerators / denom`, entrywise.
    pub fn from_scaled(numerators: &[BigInt], denom: &BigInt) -> Self {
        Self(
            numerators
                .iter()
                .map(|n| BigRational::new(n.clone(), denom.clone()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    /// Least common denominator of the entries (1 for the empty vector).
    pub fn common_denominator(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// Splits the vector as `numerators / denom` with `denom` the least common denominator.
    pub fn to_scaled(&self) -> (Vec<BigInt>, BigInt) {
        let denom = self.common_denominator();
        let nums = self
            .0
            .iter()
            .map(|x| x.numer() * (&denom / x.denom()))
            .collect();
        (nums, denom)
    }

    pub fn add_integers(&self, l: &[BigInt]) -> Result<Self, ExactAlgError> {
        if l.len() != self.len() {
            return Err(ExactAlgError::DimensionMismatch {
                expected: self.len(),
                found: l.len(),
            });
        }
        Ok(Self(
            self.0
                .iter()
                .zip(l)
                .map(|(x, y)| x + BigRational::from_integer(y.clone()))
                .collect(),
        ))
    }

    /// Integer entries, if every entry is integral.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.0
            .iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect()
    }
}

/// A ℤ-basis of `{ x ∈ ℤ^cols : m·x = 0 }`, read off the trailing columns of `v`.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    (snf.rank()..m.cols()).map(|j| snf.v.column(j)).collect()
}

/// Some integer `w` with `m·w = v`, or `None` when `v ∉ Im m` over ℤ.
pub fn in_image(m: &IntMatrix, v: &[BigInt]) -> Result<Option<Vec<BigInt>>, ExactAlgError> {
    if v.len() != m.rows() {
        return Err(ExactAlgError::DimensionMismatch {
            expected: m.rows(),
            found: v.len(),
        });
    }
    Ok(solve_with(&smith_normal_form(m), v))
}

/// Image membership against a precomputed decomposition of the matrix.
pub fn solve_with(snf: &SmithDecomposition, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let target = snf.u.mul_vec(v).ok()?;
    let diag = snf.diagonal();
    let mut w = vec![BigInt::zero(); snf.m.cols()];
    for (i, t) in target.iter().enumerate() {
        match diag.get(i) {
            Some(d) if !d.is_zero() => {
                let (q, r) = t.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                w[i] = q;
            }
            _ => {
                if !t.is_zero() {
                    return None;
                }
            }
        }
    }
    snf.v.mul_vec(&w).ok()
}

/// Euclidean inner product `Σ a_i b_i`, exact.
pub fn inner_product<A, B>(a: &[A], b: &[B]) -> Result<BigRational, ExactAlgError>
where
    A: Clone + Into<BigRational>,
    B: Clone + Into<BigRational>,
{
    if a.len() != b.len() {
        return Err(ExactAlgError::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| {
        acc + x.clone().into() * y.clone().into()
    }))
}

/// Integer dot product; lengths must already agree.
pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
pub(crate) fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().copied().map(BigInt::from).collect()
}
