//! Exact phases in ℚ/ℤ and finite integer combinations of roots of unity.
//!
//! A [`CyclotomicSum`] stands for `Σ c · e^{2πi q}`. Zero-testing is exact:
//! [`CyclotomicSum::normalize`] reduces modulo the cyclotomic polynomial of
//! the common denominator, so the result is empty exactly when the sum
//! vanishes as a complex number.

mod phi;

pub use phi::cyclotomic_polynomial;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("invalid phase literal {0:?}")]
    BadPhase(String),
    #[error("common denominator {0} is too large to reduce")]
    DenominatorTooLarge(BigInt),
}

/// An element of ℚ/ℤ, stored as its representative in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalMod1(BigRational);

impl RationalMod1 {
    pub fn new(value: BigRational) -> Self {
        let floor = value.floor();
        Self(value - floor)
    }

    pub fn from_ratio(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Self::new(BigRational::new(numer.into(), denom.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// `n · self` reduced mod 1.
    pub fn scale(&self, n: &BigInt) -> Self {
        Self::new(&self.0 * BigRational::from_integer(n.clone()))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }
}

impl Default for RationalMod1 {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for RationalMod1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for RationalMod1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for RationalMod1 {
    type Err = CycloError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CycloError::BadPhase(s.to_string());
        let value = match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(s.trim().parse().map_err(|_| bad())?),
        };
        Ok(Self::new(value))
    }
}

impl Add for &RationalMod1 {
    type Output = RationalMod1;

    fn add(self, rhs: &RationalMod1) -> RationalMod1 {
        RationalMod1::new(&self.0 + &rhs.0)
    }
}

impl Add for RationalMod1 {
    type Output = RationalMod1;

    fn add(self, rhs: RationalMod1) -> RationalMod1 {
        &self + &rhs
    }
}

impl Sub for &RationalMod1 {
    type Output = RationalMod1;

    fn sub(self, rhs: &RationalMod1) -> RationalMod1 {
        RationalMod1::new(&self.0 - &rhs.0)
    }
}

impl Neg for &RationalMod1 {
    type Output = RationalMod1;

    fn neg(self) -> RationalMod1 {
        RationalMod1::new(-&self.0)
    }
}

impl Neg for RationalMod1 {
    type Output = RationalMod1;

    fn neg(self) -> RationalMod1 {
        -&self
    }
}

/// `(a + b) mod 1`.
pub fn phase_add(a: &RationalMod1, b: &RationalMod1) -> RationalMod1 {
    a + b
}

/// A finite formal sum `Σ c · e^{2πi q}` with nonzero integer coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct CyclotomicSum {
    terms: BTreeMap<RationalMod1, BigInt>,
}

impl CyclotomicSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(RationalMod1::zero(), BigInt::one())
    }

    /// The integer `n` as a sum (phase 0).
    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self::monomial(RationalMod1::zero(), n.into())
    }

    pub fn monomial(phase: RationalMod1, coeff: impl Into<BigInt>) -> Self {
        let mut s = Self::zero();
        s.add_term(phase, coeff.into());
        s
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (RationalMod1, BigInt)>,
    {
        let mut s = Self::zero();
        for (q, c) in terms {
            s.add_term(q, c);
        }
        s
    }

    pub fn add_term(&mut self, phase: RationalMod1, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(phase) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<RationalMod1, BigInt> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when no terms are stored. Use [`is_zero`](Self::is_zero) for the
    /// value test.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplies by `e^{2πi shift}`.
    pub fn rotate(&self, shift: &RationalMod1) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(q, c)| (q + shift, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(q, c)| (q.clone(), c * n)).collect(),
        }
    }

    /// Least common denominator of the stored phases (1 when empty).
    pub fn common_denominator(&self) -> BigInt {
        self.terms
            .keys()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
    }

    /// Canonical representative modulo the cyclotomic relations of the
    /// common denominator `N`: the sum is read as an integer polynomial in
    /// `ζ_N`, reduced modulo `Φ_N`, and read back.
    ///
    /// Empty iff the sum is zero. Idempotent.
    ///
    /// Panics if `N` does not fit in `usize`; see [`try_normalize`](Self::try_normalize).
    pub fn normalize(&self) -> Self {
        self.try_normalize().expect("phase denominator too large")
    }

    pub fn try_normalize(&self) -> Result<Self, CycloError> {
        if self.terms.is_empty() {
            return Ok(Self::zero());
        }
        let big_n = self.common_denominator();
        let n = big_n
            .to_usize()
            .ok_or_else(|| CycloError::DenominatorTooLarge(big_n.clone()))?;
        let mut poly = vec![BigInt::zero(); n];
        for (q, c) in &self.terms {
            let e = (q.numer() * (&big_n / q.denom()))
                .to_usize()
                .expect("exponent below N");
            poly[e] += c;
        }
        let phi = cyclotomic_polynomial(n);
        let deg = phi.len() - 1;
        for top in (deg..n).rev() {
            let c = std::mem::take(&mut poly[top]);
            if c.is_zero() {
                continue;
            }
            // x^top ≡ -Σ_{j<deg} φ_j x^{top-deg+j}  (Φ_N is monic)
            for (j, phi_j) in phi[..deg].iter().enumerate() {
                if !phi_j.is_zero() {
                    poly[top - deg + j] -= &c * phi_j;
                }
            }
        }
        Ok(Self::from_terms(
            poly.into_iter()
                .take(deg)
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (RationalMod1::from_ratio(e, big_n.clone()), c)),
        ))
    }

    /// Exact zero test.
    pub fn is_zero(&self) -> bool {
        self.normalize().is_empty()
    }

    /// Exact equality of values (not of formal term maps).
    pub fn exact_eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    /// The value as an integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        let norm = self.normalize();
        match norm.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (q, c) = norm.terms.iter().next().expect("one term");
                q.is_zero().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Double-precision value `(re, im)`.
    pub fn eval_complex(&self) -> (f64, f64) {
        self.terms.iter().fold((0.0, 0.0), |(re, im), (q, c)| {
            let angle = TAU * q.to_f64();
            let c = c.to_f64().unwrap_or(f64::NAN);
            (re + c * angle.cos(), im + c * angle.sin())
        })
    }
}

impl fmt::Debug for CyclotomicSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// Termwise addition with cancellation.
pub fn sum_add(x: &CyclotomicSum, y: &CyclotomicSum) -> CyclotomicSum {
    let mut out = x.clone();
    for (q, c) in &y.terms {
        out.add_term(q.clone(), c.clone());
    }
    out
}

/// Distributive product; phases add mod 1.
pub fn sum_mul(x: &CyclotomicSum, y: &CyclotomicSum) -> CyclotomicSum {
    let mut out = CyclotomicSum::zero();
    for (qa, ca) in &x.terms {
        for (qb, cb) in &y.terms {
            out.add_term(qa + qb, ca * cb);
        }
    }
    out
}

pub fn normalize(x: &CyclotomicSum) -> CyclotomicSum {
    x.normalize()
}

pub fn eval_complex(x: &CyclotomicSum) -> (f64, f64) {
    x.eval_complex()
}

impl Add for &CyclotomicSum {
    type Output = CyclotomicSum;

    fn add(self, rhs: &CyclotomicSum) -> CyclotomicSum {
        sum_add(self, rhs)
    }
}

impl Sub for &CyclotomicSum {
    type Output = CyclotomicSum;

    fn sub(self, rhs: &CyclotomicSum) -> CyclotomicSum {
        sum_add(self, &-rhs)
    }
}

impl Neg for &CyclotomicSum {
    type Output = CyclotomicSum;

    fn neg(self) -> CyclotomicSum {
        CyclotomicSum {
            terms: self.terms.iter().map(|(q, c)| (q.clone(), -c)).collect(),
        }
    }
}

impl Mul for &CyclotomicSum {
    type Output = CyclotomicSum;

    fn mul(self, rhs: &CyclotomicSum) -> CyclotomicSum {
        sum_mul(self, rhs)
    }
}

/// Histogram of phases `r / denom`, the hot accumulator behind the Gauss sums.
#[derive(Clone, Debug)]
pub(crate) struct PhaseHistogram {
    denom: BigInt,
    counts: Vec<i64>,
}

impl PhaseHistogram {
    pub(crate) fn new(denom: &BigInt) -> Self {
        let len = denom
            .to_usize()
            .expect("histogram denominator fits in memory");
        Self {
            denom: denom.clone(),
            counts: vec![0; len],
        }
    }

    /// Records one term `e^{2πi numer/denom}`.
    pub(crate) fn push(&mut self, numer: &BigInt) {
        let r = numer.mod_floor(&self.denom);
        let idx = r.to_usize().expect("residue below denominator");
        self.counts[idx] += 1;
    }

    pub(crate) fn into_sum(self) -> CyclotomicSum {
        let denom = self.denom;
        CyclotomicSum::from_terms(
            self.counts
                .into_iter()
                .enumerate()
                .filter(|(_, c)| *c != 0)
                .map(|(r, c)| (RationalMod1::from_ratio(r, denom.clone()), BigInt::from(c))),
        )
    }
}
