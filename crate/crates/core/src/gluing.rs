//! Heegaard gluing data.
//!
//! The gluing automorphism acts on `H_1` of the genus-`g` surface through the
//! `2g × 2g` matrix
//!
//! ```text
//!     M = | R  P |        M⁻¹ = | -Qᵀ   Pᵀ |
//!         | S  Q |              |  Sᵀ  -Rᵀ |
//! ```
//!
//! in the longitude/meridian basis. A block tuple is accepted when the six
//! block relations below hold; they are together equivalent to `M · M⁻¹ = 1`
//! with `M⁻¹` built as shown. The determinant is reported but not enforced.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactalg::{ExactAlgError, IntMatrix};

/// The six block relations, in a fixed reporting order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    QtP,
    PStMinusRQt,
    StR,
    RPt,
    PtSMinusQtR,
    SQt,
}

impl Relation {
    pub const ALL: [Relation; 6] = [
        Relation::QtP,
        Relation::PStMinusRQt,
        Relation::StR,
        Relation::RPt,
        Relation::PtSMinusQtR,
        Relation::SQt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::QtP => "Q†P = P†Q",
            Relation::PStMinusRQt => "PS† − RQ† = 1",
            Relation::StR => "S†R = R†S",
            Relation::RPt => "RP† = PR†",
            Relation::PtSMinusQtR => "P†S − Q†R = 1",
            Relation::SQt => "SQ† = QS†",
        }
    }

    /// `lhs − rhs`; zero exactly when the relation holds.
    fn residual(self, r: &IntMatrix, p: &IntMatrix, s: &IntMatrix, q: &IntMatrix) -> IntMatrix {
        let one = IntMatrix::identity(p.rows());
        let (rt, pt, st, qt) = (r.transpose(), p.transpose(), s.transpose(), q.transpose());
        match self {
            Relation::QtP => &(&qt * p) - &(&pt * q),
            Relation::PStMinusRQt => &(&(p * &st) - &(r * &qt)) - &one,
            Relation::StR => &(&st * r) - &(&rt * s),
            Relation::RPt => &(r * &pt) - &(p * &rt),
            Relation::PtSMinusQtR => &(&(&pt * s) - &(&qt * r)) - &one,
            Relation::SQt => &(s * &qt) - &(q * &st),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub relation: Relation,
    pub residual: IntMatrix,
}

impl RelationCheck {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Relation-by-relation outcome of checking a block tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub genus: usize,
    pub checks: Vec<RelationCheck>,
    /// `det M`, informational only.
    pub determinant: BigInt,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(RelationCheck::holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| !c.holds())
    }

    /// `(-1)^g`, the determinant every relation-satisfying matrix has.
    pub fn expected_determinant(&self) -> BigInt {
        if self.genus.is_multiple_of(2) {
            BigInt::one()
        } else {
            -BigInt::one()
        }
    }

    /// Set when the determinant is not −1, the value usually quoted for an
    /// orientation-reversing gluing. For even genus the relations force +1.
    pub fn determinant_note(&self) -> Option<String> {
        if self.determinant == -BigInt::one() {
            return None;
        }
        Some(format!(
            "det M = {} (not -1); relation-satisfying matrices of genus {} have det {}",
            self.determinant,
            self.genus,
            self.expected_determinant()
        ))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            if c.holds() {
                writeln!(f, "PASS {}", c.relation)?;
            } else {
                writeln!(f, "FAIL {}: residual {}", c.relation, c.residual)?;
            }
        }
        write!(f, "det M = {}", self.determinant)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GluingError {
    #[error("genus must be positive")]
    ZeroGenus,
    #[error("block {block} is {rows}x{cols}, expected {genus}x{genus}")]
    BlockShape {
        block: char,
        rows: usize,
        cols: usize,
        genus: usize,
    },
    #[error("gluing relations violated: {}", .0.violations().map(|c| c.relation.name()).collect::<Vec<_>>().join(", "))]
    Relations(ValidationReport),
    #[error("lens space parameters must satisfy p ≥ 0, (p, q) ≠ (0, 0) and gcd(p, q) = 1; got ({p}, {q})")]
    LensParameters { p: BigInt, q: BigInt },
    #[error(transparent)]
    Algebra(#[from] ExactAlgError),
}

/// Validated gluing blocks `R, P, S, Q` of a genus-`g` Heegaard splitting.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GluingData {
    genus: usize,
    r: IntMatrix,
    p: IntMatrix,
    s: IntMatrix,
    q: IntMatrix,
}

/// Runs all six relation checks without deciding validity.
pub fn check_relations(
    genus: usize,
    r: &IntMatrix,
    p: &IntMatrix,
    s: &IntMatrix,
    q: &IntMatrix,
) -> Result<ValidationReport, GluingError> {
    if genus == 0 {
        return Err(GluingError::ZeroGenus);
    }
    for (block, m) in [('R', r), ('P', p), ('S', s), ('Q', q)] {
        if m.rows() != genus || m.cols() != genus {
            return Err(GluingError::BlockShape {
                block,
                rows: m.rows(),
                cols: m.cols(),
                genus,
            });
        }
    }
    let checks = Relation::ALL
        .iter()
        .map(|&relation| RelationCheck {
            relation,
            residual: relation.residual(r, p, s, q),
        })
        .collect();
    let determinant = IntMatrix::from_blocks(r, p, s, q)?.determinant()?;
    Ok(ValidationReport {
        genus,
        checks,
        determinant,
    })
}

/// Accepts the blocks iff all six relations hold.
pub fn validate(
    genus: usize,
    r: IntMatrix,
    p: IntMatrix,
    s: IntMatrix,
    q: IntMatrix,
) -> Result<GluingData, GluingError> {
    let report = check_relations(genus, &r, &p, &s, &q)?;
    if !report.is_valid() {
        return Err(GluingError::Relations(report));
    }
    Ok(GluingData { genus, r, p, s, q })
}

/// `M · M⁻¹ = 1` with `M⁻¹` assembled from the transposed blocks.
/// Equivalent to the six relations; kept separate as a cross-check.
pub fn satisfies_block_inverse(
    r: &IntMatrix,
    p: &IntMatrix,
    s: &IntMatrix,
    q: &IntMatrix,
) -> Result<bool, GluingError> {
    let m = IntMatrix::from_blocks(r, p, s, q)?;
    let n = IntMatrix::from_blocks(
        &-&q.transpose(),
        &p.transpose(),
        &s.transpose(),
        &-&r.transpose(),
    )?;
    Ok(m.try_mul(&n)?.is_identity())
}

impl GluingData {
    /// Genus-1 data for the lens space `L(p, q)`: `P = [p]`, `Q = [q]`, with
    /// `r, s` chosen so that `ps − rq = 1`. For `p > 0` the pick is the least
    /// nonnegative `r`; for `p = 0` (so `q = ±1`) it is `r = −q, s = 0`.
    pub fn lens(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, GluingError> {
        let (p, q) = (p.into(), q.into());
        let bad = || GluingError::LensParameters {
            p: p.clone(),
            q: q.clone(),
        };
        if p.is_negative() || (p.is_zero() && q.is_zero()) || !p.gcd(&q).is_one() {
            return Err(bad());
        }
        let (r, s) = if p.is_zero() {
            (-&q, BigInt::zero())
        } else {
            // ps − rq = 1  ⇒  rq ≡ −1 (mod p)
            let ext = q.extended_gcd(&p);
            // ext.x · q + ext.y · p = 1, so r = −x (mod p)
            let r = (-ext.x).mod_floor(&p);
            let s = (BigInt::one() + &r * &q) / &p;
            (r, s)
        };
        let one = |x: BigInt| IntMatrix::diagonal([x]);
        validate(1, one(r), one(p.clone()), one(s), one(q.clone()))
    }

    pub fn from_matrix(m: &IntMatrix) -> Result<Self, GluingError> {
        if !m.is_square() || !m.rows().is_multiple_of(2) {
            return Err(GluingError::BlockShape {
                block: 'M',
                rows: m.rows(),
                cols: m.cols(),
                genus: m.rows() / 2,
            });
        }
        let g = m.rows() / 2;
        validate(
            g,
            m.submatrix(0, 0, g, g),
            m.submatrix(0, g, g, g),
            m.submatrix(g, 0, g, g),
            m.submatrix(g, g, g, g),
        )
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn r(&self) -> &IntMatrix {
        &self.r
    }

    pub fn p(&self) -> &IntMatrix {
        &self.p
    }

    pub fn s(&self) -> &IntMatrix {
        &self.s
    }

    pub fn q(&self) -> &IntMatrix {
        &self.q
    }

    /// The full `2g × 2g` gluing matrix.
    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_blocks(&self.r, &self.p, &self.s, &self.q).expect("blocks are g×g")
    }

    pub fn report(&self) -> ValidationReport {
        check_relations(self.genus, &self.r, &self.p, &self.s, &self.q)
            .expect("validated blocks have consistent shapes")
    }

    /// Gluing data of the inverse map: blocks `(−Qᵀ, Pᵀ, Sᵀ, −Rᵀ)`.
    pub fn inverse(&self) -> Self {
        Self {
            genus: self.genus,
            r: -&self.q.transpose(),
            p: self.p.transpose(),
            s: self.s.transpose(),
            q: -&self.r.transpose(),
        }
    }

    /// Block-diagonal composition; the relations hold blockwise.
    pub fn connected_sum(&self, other: &Self) -> Self {
        Self {
            genus: self.genus + other.genus,
            r: self.r.direct_sum(&other.r),
            p: self.p.direct_sum(&other.p),
            s: self.s.direct_sum(&other.s),
            q: self.q.direct_sum(&other.q),
        }
    }

    /// Connected sum with the genus-1 presentation of the 3-sphere.
    pub fn stabilize(&self) -> Self {
        self.connected_sum(&Self::sphere())
    }

    /// `L(1, 0)`.
    pub fn sphere() -> Self {
        Self::lens(1, 0).expect("L(1,0) is valid")
    }
}

/// Free-function form of [`GluingData::inverse`].
pub fn inverse(gd: &GluingData) -> GluingData {
    gd.inverse()
}

pub fn lens(p: i64, q: i64) -> Result<GluingData, GluingError> {
    GluingData::lens(p, q)
}

pub fn connected_sum(a: &GluingData, b: &GluingData) -> GluingData {
    a.connected_sum(b)
}

pub fn stabilize(a: &GluingData) -> GluingData {
    a.stabilize()
}
