//! Homology of the glued manifold read off the `P` block:
//! `H_2 ≅ ker P` and `H_1 ≅ coker P = ℤ^b ⊕ ℤ_{d_1} ⊕ … ⊕ ℤ_{d_N}`.
//!
//! Torsion classes are handled through rational vectors `θ` with `P·θ`
//! integral. Canonical representatives live in Smith coordinates: with
//! `U·P·V = D`, a torsion element is `θ = V·η` where `η_i = c_i / d_i`,
//! `0 ≤ c_i < d_i`, on the torsion positions and `η_i = 0` elsewhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::exactalg::{self, IntMatrix, RationalVector, SmithDecomposition};
use crate::gluing::GluingData;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("P·θ is not integral, so θ does not represent a torsion class")]
    NotTorsion,
    #[error("torsion index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: BigInt, order: BigInt },
}

/// Free rank and invariant factors of `coker P`, with the Smith data needed
/// to enumerate and decompose classes.
#[derive(Clone, Debug)]
pub struct HomologyStructure {
    snf: SmithDecomposition,
    diagonal: Vec<BigInt>,
    free_indices: Vec<usize>,
    torsion_indices: Vec<usize>,
    exponent: BigInt,
}

/// A torsion element, identified by its Smith coordinates in `[0, 1)`.
#[derive(Clone, Debug)]
pub struct TorsionElement {
    theta: RationalVector,
    coords: Vec<BigRational>,
}

impl TorsionElement {
    /// Representative `θ = V·η`.
    pub fn theta(&self) -> &RationalVector {
        &self.theta
    }

    /// `η_i` on the torsion positions, each in `[0, 1)`.
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl PartialEq for TorsionElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for TorsionElement {}

impl std::hash::Hash for TorsionElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

/// `n = n_f + P·θ_τ`, with `θ_τ = m / p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDecomposition {
    pub n: Vec<BigInt>,
    pub n_f: Vec<BigInt>,
    pub theta_tau: TorsionElement,
    /// Least common denominator of `theta_tau` (1 for the zero class).
    pub p: BigInt,
    pub m_vec: Vec<BigInt>,
}

impl HomologyStructure {
    /// Structure of `coker m` for a square integer matrix.
    pub fn of_matrix(m: &IntMatrix) -> Self {
        assert!(m.is_square(), "the P block is square");
        let snf = exactalg::smith_normal_form(m);
        let diagonal = snf.diagonal();
        let free_indices = (0..diagonal.len())
            .filter(|&i| diagonal[i].is_zero())
            .collect();
        let torsion_indices: Vec<usize> = (0..diagonal.len())
            .filter(|&i| diagonal[i] > BigInt::one())
            .collect();
        let exponent = torsion_indices
            .iter()
            .fold(BigInt::one(), |acc, &i| acc.lcm(&diagonal[i]));
        Self {
            snf,
            diagonal,
            free_indices,
            torsion_indices,
            exponent,
        }
    }

    pub fn genus(&self) -> usize {
        self.diagonal.len()
    }

    pub fn p(&self) -> &IntMatrix {
        &self.snf.m
    }

    pub fn snf(&self) -> &SmithDecomposition {
        &self.snf
    }

    pub fn free_rank(&self) -> usize {
        self.free_indices.len()
    }

    pub fn free_indices(&self) -> &[usize] {
        &self.free_indices
    }

    pub fn torsion_indices(&self) -> &[usize] {
        &self.torsion_indices
    }

    /// Diagonal entries `> 1`, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.torsion_indices
            .iter()
            .map(|&i| self.diagonal[i].clone())
            .collect()
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion_indices
            .iter()
            .map(|&i| &self.diagonal[i])
            .product()
    }

    /// Largest invariant factor (1 when torsion is trivial); every torsion
    /// representative has denominator dividing it.
    pub fn exponent(&self) -> &BigInt {
        &self.exponent
    }

    /// A ℤ-basis of `ker P`.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        self.free_indices
            .iter()
            .map(|&j| self.snf.v.column(j))
            .collect()
    }

    fn check_len(&self, len: usize) -> Result<(), HomologyError> {
        if len != self.genus() {
            return Err(HomologyError::LengthMismatch {
                expected: self.genus(),
                found: len,
            });
        }
        Ok(())
    }

    /// `U·n`.
    pub fn snf_coordinates(&self, n: &[BigInt]) -> Result<Vec<BigInt>, HomologyError> {
        self.check_len(n.len())?;
        Ok(self.snf.u.mul_vec(n).expect("length checked"))
    }

    /// The free Smith coordinates of `U·n`.
    pub fn free_coordinates(&self, n: &[BigInt]) -> Result<Vec<BigInt>, HomologyError> {
        let tilde = self.snf_coordinates(n)?;
        Ok(self
            .free_indices
            .iter()
            .map(|&i| tilde[i].clone())
            .collect())
    }

    /// True when `n ∈ Im P`.
    pub fn is_trivial_class(&self, n: &[BigInt]) -> Result<bool, HomologyError> {
        let tilde = self.snf_coordinates(n)?;
        Ok(tilde.iter().zip(&self.diagonal).all(|(x, d)| {
            if d.is_zero() {
                x.is_zero()
            } else {
                x.is_multiple_of(d)
            }
        }))
    }

    /// Canonical form of an arbitrary representative `θ` with `P·θ ∈ ℤ^g`.
    /// Free Smith coordinates are dropped; torsion ones are reduced mod 1.
    pub fn torsion_element(&self, theta: &RationalVector) -> Result<TorsionElement, HomologyError> {
        self.check_len(theta.len())?;
        let image = self.p().mul_rational_vec(&theta.0).expect("length checked");
        if !RationalVector(image).is_integral() {
            return Err(HomologyError::NotTorsion);
        }
        let eta = self
            .snf
            .v_inv
            .mul_rational_vec(&theta.0)
            .expect("length checked");
        let coords: Vec<BigRational> = self
            .torsion_indices
            .iter()
            .map(|&i| &eta[i] - eta[i].floor())
            .collect();
        Ok(self.element_from_coords(coords))
    }

    fn element_from_coords(&self, coords: Vec<BigRational>) -> TorsionElement {
        let g = self.genus();
        let mut eta = vec![BigRational::zero(); g];
        for (&i, c) in self.torsion_indices.iter().zip(&coords) {
            eta[i] = c.clone();
        }
        let theta = RationalVector(self.snf.v.mul_rational_vec(&eta).expect("square V"));
        TorsionElement { theta, coords }
    }

    /// The element with Smith counters `c_i` (taken mod `d_i`).
    pub fn element_from_counters(
        &self,
        counters: &[BigInt],
    ) -> Result<TorsionElement, HomologyError> {
        if counters.len() != self.torsion_indices.len() {
            return Err(HomologyError::LengthMismatch {
                expected: self.torsion_indices.len(),
                found: counters.len(),
            });
        }
        let coords = self
            .torsion_indices
            .iter()
            .zip(counters)
            .map(|(&i, c)| {
                let d = &self.diagonal[i];
                BigRational::new(c.mod_floor(d), d.clone())
            })
            .collect();
        Ok(self.element_from_coords(coords))
    }

    /// The canonical generator of the `j`-th cyclic factor (Smith coordinate `1/d_j`).
    pub fn generator(&self, j: usize) -> TorsionElement {
        let mut counters = vec![BigInt::zero(); self.torsion_indices.len()];
        counters[j] = BigInt::one();
        self.element_from_counters(&counters)
            .expect("counter length matches")
    }

    /// All `|T|` torsion elements, zero first.
    pub fn torsion_elements(&self) -> impl Iterator<Item = TorsionElement> + '_ {
        self.scaled_torsion_vectors().map(move |(counters, _)| {
            self.element_from_counters(&counters)
                .expect("counter length matches")
        })
    }

    /// The element at position `index` of the enumeration order of
    /// [`torsion_elements`](Self::torsion_elements), for strided parallel walks.
    pub fn torsion_element_at(&self, index: &BigInt) -> Result<TorsionElement, HomologyError> {
        let order = self.torsion_order();
        if index.sign() == num_bigint::Sign::Minus || *index >= order {
            return Err(HomologyError::IndexOutOfRange {
                index: index.clone(),
                order,
            });
        }
        let mut rest = index.clone();
        let mut counters = vec![BigInt::zero(); self.torsion_indices.len()];
        for (slot, &i) in counters.iter_mut().zip(&self.torsion_indices) {
            let (q, r) = rest.div_mod_floor(&self.diagonal[i]);
            *slot = r;
            rest = q;
        }
        self.element_from_counters(&counters)
    }

    /// Walks the torsion group yielding `(counters, t)` with `θ = t / exponent`
    /// an integer-scaled representative. Avoids rational arithmetic in the
    /// Gauss-sum loops.
    pub(crate) fn scaled_torsion_vectors(&self) -> ScaledTorsionIter<'_> {
        let radices: Vec<u64> = self
            .torsion_indices
            .iter()
            .map(|&i| {
                self.diagonal[i]
                    .to_u64()
                    .expect("invariant factor too large to enumerate")
            })
            .collect();
        let steps = self
            .torsion_indices
            .iter()
            .map(|&i| {
                let scale = &self.exponent / &self.diagonal[i];
                self.snf
                    .v
                    .column(i)
                    .into_iter()
                    .map(|x| x * &scale)
                    .collect()
            })
            .collect();
        ScaledTorsionIter {
            structure: self,
            radices,
            steps,
            counters: None,
            done: false,
        }
    }

    /// `n = n_f + P·θ_τ` with `θ_τ` canonical and `n_f` carrying no torsion residue.
    pub fn decompose_class(&self, n: &[BigInt]) -> Result<ClassDecomposition, HomologyError> {
        let tilde = self.snf_coordinates(n)?;
        let g = self.genus();
        // residues r_i = ñ_i mod d_i on the non-free positions; D·η = r
        let mut residues = vec![BigInt::zero(); g];
        let mut eta = vec![BigRational::zero(); g];
        for i in 0..g {
            let d = &self.diagonal[i];
            if d.is_zero() {
                continue;
            }
            let r = tilde[i].mod_floor(d);
            eta[i] = BigRational::new(r.clone(), d.clone());
            residues[i] = r;
        }
        let coords = self
            .torsion_indices
            .iter()
            .map(|&i| eta[i].clone())
            .collect();
        let theta_tau = self.element_from_coords(coords);
        let p_theta = self.snf.u_inv.mul_vec(&residues).expect("square U");
        let n_f = n.iter().zip(&p_theta).map(|(a, b)| a - b).collect();
        let (m_vec, p) = theta_tau.theta.to_scaled();
        Ok(ClassDecomposition {
            n: n.to_vec(),
            n_f,
            theta_tau,
            p,
            m_vec,
        })
    }
}

/// Mixed-radix walk over the torsion group, see
/// [`HomologyStructure::scaled_torsion_vectors`].
pub(crate) struct ScaledTorsionIter<'a> {
    structure: &'a HomologyStructure,
    radices: Vec<u64>,
    steps: Vec<Vec<BigInt>>,
    counters: Option<Vec<u64>>,
    done: bool,
}

impl Iterator for ScaledTorsionIter<'_> {
    type Item = (Vec<BigInt>, Vec<BigInt>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let counters = match self.counters.as_mut() {
            None => self.counters.insert(vec![0; self.radices.len()]),
            Some(c) => {
                let mut carry = true;
                for (slot, &radix) in c.iter_mut().zip(&self.radices) {
                    *slot += 1;
                    if *slot < radix {
                        carry = false;
                        break;
                    }
                    *slot = 0;
                }
                if carry {
                    self.done = true;
                    return None;
                }
                c
            }
        };
        let g = self.structure.genus();
        let mut t = vec![BigInt::zero(); g];
        for (&c, step) in counters.iter().zip(&self.steps) {
            if c == 0 {
                continue;
            }
            let c = BigInt::from(c);
            for (x, s) in t.iter_mut().zip(step) {
                *x += &c * s;
            }
        }
        Some((counters.iter().map(|&c| BigInt::from(c)).collect(), t))
    }
}

/// `H_1 ≅ coker P`.
pub fn h1(gd: &GluingData) -> HomologyStructure {
    HomologyStructure::of_matrix(gd.p())
}

/// A ℤ-basis of `H_2 ≅ ker P`.
pub fn h2(gd: &GluingData) -> Vec<Vec<BigInt>> {
    exactalg::kernel_basis(gd.p())
}

pub fn torsion_elements(h: &HomologyStructure) -> impl Iterator<Item = TorsionElement> + '_ {
    h.torsion_elements()
}

pub fn decompose_class(
    h: &HomologyStructure,
    n: &[BigInt],
) -> Result<ClassDecomposition, HomologyError> {
    h.decompose_class(n)
}

/// `Qᵀ·n`. Descends to a map `coker P → coker Pᵀ`.
pub fn q_transport(gd: &GluingData, n: &[BigInt]) -> Result<Vec<BigInt>, HomologyError> {
    if n.len() != gd.genus() {
        return Err(HomologyError::LengthMismatch {
            expected: gd.genus(),
            found: n.len(),
        });
    }
    Ok(gd.q().transpose().mul_vec(n).expect("length checked"))
}
