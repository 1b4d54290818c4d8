//! Abelian Chern–Simons and BF invariants as exact Gauss sums over the
//! torsion of `H_1`.
//!
//! With `Γ(θ, θ') = ⟨P·θ, Q·θ'⟩ mod 1` the torsion linking form:
//!
//! ```text
//! Z_CS(k) = Σ_θ      e^{-2πi k Γ(θ, θ)}
//! Z_BF(k) = Σ_{θ,θ'} e^{-2πi k Γ(θ, θ')}
//! ```
//!
//! Wilson loops add a delta constraint on the free part of the link class,
//! a framing phase, and a shift `Θ` of the quadratic form by the torsion part
//! of the link class. Every exponent carries the sign `e^{-2πi(…)}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::cyclo::{CyclotomicSum, PhaseHistogram, RationalMod1};
use crate::exactalg::{self, dot, RationalVector};
use crate::gluing::GluingData;
use crate::homology::{self, HomologyError, HomologyStructure, TorsionElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("level k must be a positive integer")]
    ZeroLevel,
    #[error("{what} has length {found}, expected {expected}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// How the self-linking of a link is supplied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Framing {
    /// `lk(Z^p, Z̆^p)`: linking of the `p`-fold of the cycle with its framing,
    /// `p` being the torsion denominator of the link class.
    ///
    /// Any integer is accepted. Whether it is realized by an actual framed
    /// embedding is left to the caller.
    Direct { p_fold_self_linking: BigInt },
    /// The three pieces of the framing phase: the self-linking of the
    /// homologically trivial part and its intersections with the `g`
    /// boundary longitudes.
    Decomposed {
        self_linking_trivial: BigInt,
        boundary_intersections: Vec<BigInt>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkPresentation {
    /// Total class `N ∈ ℤ^g` of the link cycle.
    pub homology_class: Vec<BigInt>,
    pub framing: Framing,
}

impl LinkPresentation {
    /// A link in class `n` with direct framing `l`.
    pub fn direct(n: Vec<BigInt>, l: impl Into<BigInt>) -> Self {
        Self {
            homology_class: n,
            framing: Framing::Direct {
                p_fold_self_linking: l.into(),
            },
        }
    }

    pub fn decomposed(n: Vec<BigInt>, c_lk: impl Into<BigInt>, intersections: Vec<BigInt>) -> Self {
        Self {
            homology_class: n,
            framing: Framing::Decomposed {
                self_linking_trivial: c_lk.into(),
                boundary_intersections: intersections,
            },
        }
    }

    /// Zero class, zero framing.
    pub fn trivial(genus: usize) -> Self {
        Self::direct(vec![BigInt::zero(); genus], 0)
    }
}

/// Delta factor × framing phase × torsion sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectationResult {
    pub delta_satisfied: bool,
    pub perturbative_phase: RationalMod1,
    pub torsion_sum: CyclotomicSum,
    /// `torsion_sum` rotated by the framing phase; empty when the delta fails.
    pub total: CyclotomicSum,
}

fn check_level(k: u64) -> Result<BigInt, InvariantError> {
    if k == 0 {
        return Err(InvariantError::ZeroLevel);
    }
    Ok(BigInt::from(k))
}

fn check_len(what: &'static str, len: usize, genus: usize) -> Result<(), InvariantError> {
    if len != genus {
        return Err(InvariantError::Dimension {
            what,
            expected: genus,
            found: len,
        });
    }
    Ok(())
}

/// `⟨P·a, Q·b⟩` for arbitrary rational vectors, exact.
pub fn pq_pairing(
    gd: &GluingData,
    a: &RationalVector,
    b: &RationalVector,
) -> Result<BigRational, InvariantError> {
    check_len("θ", a.len(), gd.genus())?;
    check_len("θ'", b.len(), gd.genus())?;
    let pa = gd.p().mul_rational_vec(&a.0).expect("length checked");
    let qb = gd.q().mul_rational_vec(&b.0).expect("length checked");
    Ok(exactalg::inner_product(&pa, &qb).expect("length checked"))
}

/// Torsion linking form `Γ(t1, t2) = ⟨P·θ_1, Q·θ_2⟩ mod 1`.
pub fn linking_form(
    h: &HomologyStructure,
    gd: &GluingData,
    t1: &TorsionElement,
    t2: &TorsionElement,
) -> RationalMod1 {
    debug_assert_eq!(h.genus(), gd.genus());
    RationalMod1::new(pq_pairing(gd, t1.theta(), t2.theta()).expect("elements of h have length g"))
}

/// `Γ(g_i, g_j)` over the canonical generators of the cyclic factors.
pub fn linking_form_matrix(h: &HomologyStructure, gd: &GluingData) -> Vec<Vec<RationalMod1>> {
    let gens: Vec<TorsionElement> = (0..h.torsion_indices().len())
        .map(|j| h.generator(j))
        .collect();
    gens.iter()
        .map(|a| gens.iter().map(|b| linking_form(h, gd, a, b)).collect())
        .collect()
}

/// Phase of a single Chern–Simons torsion term,
/// `−(k⟨Pθ, Qθ⟩ − ⟨Pθ, QΘ⟩) mod 1`, for any representatives.
pub fn cs_term_phase(
    gd: &GluingData,
    k: u64,
    theta: &RationalVector,
    big_theta: &RationalVector,
) -> Result<RationalMod1, InvariantError> {
    let k = BigRational::from_integer(check_level(k)?);
    let quad = pq_pairing(gd, theta, theta)?;
    let shift = pq_pairing(gd, theta, big_theta)?;
    Ok(RationalMod1::new(-(k * quad - shift)))
}

/// Phase of a single BF torsion term,
/// `−(k⟨Pθ, Qθ'⟩ − ⟨Pθ, QΘ₁⟩ − ⟨Pθ', QΘ₂⟩) mod 1`.
pub fn bf_term_phase(
    gd: &GluingData,
    k: u64,
    theta: &RationalVector,
    theta_prime: &RationalVector,
    big_theta_1: &RationalVector,
    big_theta_2: &RationalVector,
) -> Result<RationalMod1, InvariantError> {
    let k = BigRational::from_integer(check_level(k)?);
    let cross = pq_pairing(gd, theta, theta_prime)?;
    let s1 = pq_pairing(gd, theta, big_theta_1)?;
    let s2 = pq_pairing(gd, theta_prime, big_theta_2)?;
    Ok(RationalMod1::new(-(k * cross - s1 - s2)))
}

/// Per-element integer data: `θ = t / E`, `a = P·θ = P·t / E ∈ ℤ^g`, `b = Q·t`.
struct TorsionTable {
    exponent: BigInt,
    a: Vec<Vec<BigInt>>,
    b: Vec<Vec<BigInt>>,
}

impl TorsionTable {
    fn build(gd: &GluingData, h: &HomologyStructure) -> Self {
        let exponent = h.exponent().clone();
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (_, t) in h.scaled_torsion_vectors() {
            let pt = gd.p().mul_vec(&t).expect("genus-length vector");
            a.push(pt.into_iter().map(|x| x / &exponent).collect());
            b.push(gd.q().mul_vec(&t).expect("genus-length vector"));
        }
        Self { exponent, a, b }
    }

    /// `⟨a_i, Q·m⟩` for every element, where `Θ = m / p`.
    fn shifts(&self, gd: &GluingData, m: &[BigInt]) -> Vec<BigInt> {
        let qm = gd.q().mul_vec(m).expect("genus-length vector");
        self.a.iter().map(|a| dot(a, &qm)).collect()
    }
}

/// `Σ_θ e^{-2πi(k⟨Pθ,Qθ⟩ − ⟨Pθ,QΘ⟩)}` over the canonical torsion enumeration.
pub fn cs_torsion_sum(
    gd: &GluingData,
    h: &HomologyStructure,
    k: u64,
    big_theta: &RationalVector,
) -> Result<CyclotomicSum, InvariantError> {
    let k = check_level(k)?;
    check_len("Θ", big_theta.len(), gd.genus())?;
    let table = TorsionTable::build(gd, h);
    let (m, p) = big_theta.to_scaled();
    let denom = table.exponent.lcm(&p);
    let quad_scale = &denom / &table.exponent * &k;
    let shift_scale = &denom / &p;
    let shifts = table.shifts(gd, &m);
    let mut hist = PhaseHistogram::new(&denom);
    for ((a, b), s) in table.a.iter().zip(&table.b).zip(&shifts) {
        let numer = &shift_scale * s - &quad_scale * dot(a, b);
        hist.push(&numer);
    }
    Ok(hist.into_sum())
}

/// `Σ_{θ,θ'} e^{-2πi(k⟨Pθ,Qθ'⟩ − ⟨Pθ,QΘ₁⟩ − ⟨Pθ',QΘ₂⟩)}`.
pub fn bf_torsion_sum(
    gd: &GluingData,
    h: &HomologyStructure,
    k: u64,
    big_theta_1: &RationalVector,
    big_theta_2: &RationalVector,
) -> Result<CyclotomicSum, InvariantError> {
    let k = check_level(k)?;
    check_len("Θ₁", big_theta_1.len(), gd.genus())?;
    check_len("Θ₂", big_theta_2.len(), gd.genus())?;
    let table = TorsionTable::build(gd, h);
    let (m1, p1) = big_theta_1.to_scaled();
    let (m2, p2) = big_theta_2.to_scaled();
    let denom = table.exponent.lcm(&p1).lcm(&p2);
    let cross_scale = &denom / &table.exponent * &k;
    let s1: Vec<BigInt> = table
        .shifts(gd, &m1)
        .into_iter()
        .map(|x| x * (&denom / &p1))
        .collect();
    let s2: Vec<BigInt> = table
        .shifts(gd, &m2)
        .into_iter()
        .map(|x| x * (&denom / &p2))
        .collect();
    let mut hist = PhaseHistogram::new(&denom);
    for (a, s1) in table.a.iter().zip(&s1) {
        for (b, s2) in table.b.iter().zip(&s2) {
            let numer = s1 + s2 - &cross_scale * dot(a, b);
            hist.push(&numer);
        }
    }
    Ok(hist.into_sum())
}

/// Chern–Simons partition function at level `k`.
pub fn z_cs(gd: &GluingData, k: u64) -> Result<CyclotomicSum, InvariantError> {
    cs_torsion_sum(gd, &homology::h1(gd), k, &RationalVector::zeros(gd.genus()))
}

/// BF partition function at level `k`.
pub fn z_bf(gd: &GluingData, k: u64) -> Result<CyclotomicSum, InvariantError> {
    let zero = RationalVector::zeros(gd.genus());
    bf_torsion_sum(gd, &homology::h1(gd), k, &zero, &zero)
}

/// True when every free Smith coordinate of `U·N` is divisible by `modulus`.
pub fn free_delta(
    h: &HomologyStructure,
    n: &[BigInt],
    modulus: &BigInt,
) -> Result<bool, InvariantError> {
    Ok(h.free_coordinates(n)?
        .iter()
        .all(|x| x.is_multiple_of(modulus)))
}

/// Framing phase of a Chern–Simons Wilson loop whose class has torsion part `m / p`.
pub fn cs_framing_phase(
    gd: &GluingData,
    k: u64,
    framing: &Framing,
    p: &BigInt,
    m: &[BigInt],
) -> Result<RationalMod1, InvariantError> {
    let k = check_level(k)?;
    let four_k = BigInt::from(4) * &k;
    match framing {
        Framing::Direct {
            p_fold_self_linking,
        } => Ok(RationalMod1::from_ratio(
            -p_fold_self_linking,
            four_k * p * p,
        )),
        Framing::Decomposed {
            self_linking_trivial,
            boundary_intersections,
        } => {
            check_len(
                "boundary_intersections",
                boundary_intersections.len(),
                gd.genus(),
            )?;
            check_len("m", m.len(), gd.genus())?;
            let pm = gd.p().mul_vec(m).expect("length checked");
            let qm = gd.q().mul_vec(m).expect("length checked");
            let trivial = BigRational::new(self_linking_trivial.clone(), four_k.clone());
            let cross =
                BigRational::new(dot(&pm, boundary_intersections), BigInt::from(2) * &k * p);
            let torsion = BigRational::new(dot(&pm, &qm), four_k * p * p);
            Ok(RationalMod1::new(-(trivial + cross + torsion)))
        }
    }
}

/// Reduced expectation value of a Chern–Simons Wilson loop.
pub fn wilson_cs(
    gd: &GluingData,
    k: u64,
    link: &LinkPresentation,
) -> Result<ExpectationResult, InvariantError> {
    let level = check_level(k)?;
    check_len("homology_class", link.homology_class.len(), gd.genus())?;
    let h = homology::h1(gd);
    let dec = h.decompose_class(&link.homology_class)?;
    let delta_satisfied = free_delta(&h, &link.homology_class, &(BigInt::from(2) * level))?;
    let perturbative_phase = cs_framing_phase(gd, k, &link.framing, &dec.p, &dec.m_vec)?;
    let torsion_sum = cs_torsion_sum(gd, &h, k, dec.theta_tau.theta())?;
    let total = if delta_satisfied {
        torsion_sum.rotate(&perturbative_phase)
    } else {
        CyclotomicSum::zero()
    };
    Ok(ExpectationResult {
        delta_satisfied,
        perturbative_phase,
        torsion_sum,
        total,
    })
}

/// Reduced expectation value of a BF observable built from two links.
///
/// Only the classes of the links enter; their mutual linking
/// `lk(Z₁^{p₁}, Z₂^{p₂})` is passed separately and framings are ignored.
pub fn wilson_bf(
    gd: &GluingData,
    k: u64,
    link1: &LinkPresentation,
    link2: &LinkPresentation,
    mutual_linking: &BigInt,
) -> Result<ExpectationResult, InvariantError> {
    let level = check_level(k)?;
    check_len("homology_class", link1.homology_class.len(), gd.genus())?;
    check_len("homology_class", link2.homology_class.len(), gd.genus())?;
    let h = homology::h1(gd);
    let dec1 = h.decompose_class(&link1.homology_class)?;
    let dec2 = h.decompose_class(&link2.homology_class)?;
    let delta_satisfied = free_delta(&h, &link1.homology_class, &level)?
        && free_delta(&h, &link2.homology_class, &level)?;
    let perturbative_phase = RationalMod1::from_ratio(-mutual_linking, &level * &dec1.p * &dec2.p);
    let torsion_sum = bf_torsion_sum(gd, &h, k, dec1.theta_tau.theta(), dec2.theta_tau.theta())?;
    let total = if delta_satisfied {
        torsion_sum.rotate(&perturbative_phase)
    } else {
        CyclotomicSum::zero()
    };
    Ok(ExpectationResult {
        delta_satisfied,
        perturbative_phase,
        torsion_sum,
        total,
    })
}

/// Framing integer that makes the direct-mode phase equal the decomposed one:
/// `L = p²·C + 2p·Σ_a (P·m)_a I_a + ⟨P·m, Q·m⟩`.
pub fn equivalent_direct_framing(
    gd: &GluingData,
    p: &BigInt,
    m: &[BigInt],
    self_linking_trivial: &BigInt,
    boundary_intersections: &[BigInt],
) -> Result<BigInt, InvariantError> {
    check_len("m", m.len(), gd.genus())?;
    check_len(
        "boundary_intersections",
        boundary_intersections.len(),
        gd.genus(),
    )?;
    let pm = gd.p().mul_vec(m).expect("length checked");
    let qm = gd.q().mul_vec(m).expect("length checked");
    Ok(p * p * self_linking_trivial
        + BigInt::from(2) * p * dot(&pm, boundary_intersections)
        + dot(&pm, &qm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ints;

    fn lens(p: i64, q: i64) -> GluingData {
        GluingData::lens(p, q).unwrap()
    }

    fn ph(n: i64, d: i64) -> RationalMod1 {
        RationalMod1::from_ratio(n, d)
    }

    #[test]
    fn linking_form_on_lens_generators() {
        for (p, q) in [(5, 2), (7, 3), (4, 3), (9, 2)] {
            let gd = lens(p, q);
            let h = homology::h1(&gd);
            let g = h.generator(0);
            assert_eq!(linking_form(&h, &gd, &g, &g), ph(q, p), "L({p},{q})");
        }
    }

    #[test]
    fn linking_form_zero_and_mixed() {
        let gd = lens(4, 3);
        let h = homology::h1(&gd);
        let elems: Vec<_> = h.torsion_elements().collect();
        let zero = &elems[0];
        for t in &elems {
            assert!(linking_form(&h, &gd, t, zero).is_zero());
        }
        assert_eq!(linking_form(&h, &gd, &elems[1], &elems[2]), ph(1, 2));
    }

    #[test]
    fn linking_matrix_examples() {
        let gd = lens(5, 2);
        assert_eq!(
            linking_form_matrix(&homology::h1(&gd), &gd),
            vec![vec![ph(2, 5)]]
        );
        let gd = lens(1, 0);
        assert!(linking_form_matrix(&homology::h1(&gd), &gd).is_empty());
        let gd = lens(2, 1).connected_sum(&lens(4, 1));
        let m = linking_form_matrix(&homology::h1(&gd), &gd);
        assert_eq!(m.len(), 2);
        assert_eq!(m[0][1], m[1][0]);
    }

    #[test]
    fn partition_small_cases() {
        assert_eq!(z_cs(&lens(1, 0), 4).unwrap(), CyclotomicSum::one());
        assert!(z_cs(&lens(2, 1), 1).unwrap().is_zero());
        assert_eq!(z_bf(&lens(1, 0), 7).unwrap(), CyclotomicSum::one());
        assert_eq!(
            z_bf(&lens(2, 1), 1).unwrap().as_integer(),
            Some(BigInt::from(2))
        );
        assert_eq!(
            z_bf(&lens(4, 1), 2).unwrap().as_integer(),
            Some(BigInt::from(8))
        );
        assert_eq!(z_cs(&lens(2, 1), 0), Err(InvariantError::ZeroLevel));
    }

    #[test]
    fn wilson_small_cases() {
        let s3 = lens(1, 0);
        for f in -3..=3 {
            let r = wilson_cs(&s3, 2, &LinkPresentation::direct(ints(&[0]), f)).unwrap();
            assert!(r.delta_satisfied);
            assert_eq!(r.total, CyclotomicSum::monomial(ph(-f, 8), 1));
        }
        let r = wilson_cs(&lens(2, 1), 1, &LinkPresentation::direct(ints(&[1]), 0)).unwrap();
        assert_eq!(r.total.as_integer(), Some(BigInt::from(2)));

        let l1 = LinkPresentation::direct(ints(&[1]), 0);
        let l2 = LinkPresentation::direct(ints(&[0]), 0);
        let r = wilson_bf(&lens(2, 1), 1, &l1, &l2, &BigInt::zero()).unwrap();
        assert_eq!(r.torsion_sum.as_integer(), Some(BigInt::from(2)));

        let t = LinkPresentation::trivial(1);
        let r = wilson_bf(&s3, 3, &t, &t, &BigInt::from(2)).unwrap();
        assert_eq!(r.total, CyclotomicSum::monomial(ph(-2, 3), 1));
    }

    #[test]
    fn delta_fails_on_odd_free_charge() {
        let gd = lens(0, 1);
        let r = wilson_cs(&gd, 1, &LinkPresentation::direct(ints(&[1]), 0)).unwrap();
        assert!(!r.delta_satisfied);
        assert!(r.total.is_empty());
        let r = wilson_cs(&gd, 1, &LinkPresentation::direct(ints(&[2]), 0)).unwrap();
        assert!(r.delta_satisfied);
    }

    #[test]
    fn dimension_errors() {
        let gd = lens(3, 1);
        assert!(matches!(
            wilson_cs(&gd, 1, &LinkPresentation::direct(ints(&[1, 0]), 0)),
            Err(InvariantError::Dimension { .. })
        ));
        let bad = LinkPresentation::decomposed(ints(&[1]), 0, ints(&[1, 2]));
        assert!(matches!(
            wilson_cs(&gd, 1, &bad),
            Err(InvariantError::Dimension { .. })
        ));
    }
}
