mod common;

use common::*;
use heegaard::cyclo::{CyclotomicSum, RationalMod1};
use heegaard::exactalg::{self, IntMatrix, RationalVector};
use heegaard::gluing::{self, GluingData};
use heegaard::homology;
use heegaard::invariants::{self, LinkPresentation};
use heegaard::SmithDecomposition;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = Mat> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r)
    })
}

fn to_int(m: &Mat) -> IntMatrix {
    IntMatrix::from_rows(m).unwrap()
}

/// A corpus manifold chosen by seed; proptest shrinks the seed.
fn gluing() -> impl Strategy<Value = Mat> {
    any::<u64>().prop_map(|seed| random_gluing_matrix(&mut StdRng::seed_from_u64(seed), 3, 6))
}

fn phase_sum(max_terms: usize) -> impl Strategy<Value = CyclotomicSum> {
    prop::collection::vec((0i64..36, 1i64..=12, -3i64..=3), 0..max_terms).prop_map(|terms| {
        CyclotomicSum::from_terms(
            terms
                .into_iter()
                .map(|(n, d, c)| (RationalMod1::from_ratio(n, d), BigInt::from(c))),
        )
    })
}

fn close(a: (f64, f64), b: (f64, f64)) -> bool {
    let scale = 1.0 + a.0.abs().max(a.1.abs()).max(b.0.abs()).max(b.1.abs());
    (a.0 - b.0).abs() < 1e-9 * scale && (a.1 - b.1).abs() < 1e-9 * scale
}

fn check_smith(m: &IntMatrix, s: &SmithDecomposition) -> Result<(), TestCaseError> {
    prop_assert_eq!(&(&(&s.u * m) * &s.v), &s.d);
    prop_assert!((&s.u * &s.u_inv).is_identity());
    prop_assert!((&s.v * &s.v_inv).is_identity());
    let diag = s.diagonal();
    for (i, row) in s.d.to_rows().iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j {
                prop_assert!(x.is_zero());
            }
        }
    }
    for w in diag.windows(2) {
        prop_assert!(!w[0].is_negative() && !w[1].is_negative());
        if w[0].is_zero() {
            prop_assert!(w[1].is_zero(), "zeros must come last: {:?}", diag);
        } else {
            prop_assert!(
                (&w[1] % &w[0]).is_zero(),
                "divisibility chain broken: {:?}",
                diag
            );
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn smith_form_is_a_valid_decomposition(m in matrix(4, 20)) {
        let im = to_int(&m);
        let s = exactalg::smith_normal_form(&im);
        check_smith(&im, &s)?;
        prop_assert_eq!(s.rank(), rank(&m));
    }

    #[test]
    fn smith_torsion_matches_minor_gcd(m in matrix(3, 9)) {
        let s = exactalg::smith_normal_form(&to_int(&m));
        let product: BigInt = s.diagonal().iter().filter(|d| !d.is_zero()).product();
        prop_assert_eq!(product, BigInt::from(torsion_order(&m)));
    }

    #[test]
    fn kernel_basis_spans_a_kernel_of_full_rank(m in matrix(4, 6)) {
        let im = to_int(&m);
        let basis = exactalg::kernel_basis(&im);
        prop_assert_eq!(basis.len(), m[0].len() - rank(&m));
        for v in &basis {
            prop_assert!(im.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
        let as_rows: Mat = basis.iter().map(|v| small(v)).collect();
        if !as_rows.is_empty() {
            prop_assert_eq!(rank(&as_rows), as_rows.len());
        }
    }

    #[test]
    fn in_image_agrees_with_enumeration(m in matrix(3, 4), seed in any::<u64>()) {
        let im = to_int(&m);
        let mut rng = StdRng::seed_from_u64(seed);
        let v = random_vec(&mut rng, m.len(), 8);
        let got = exactalg::in_image(&im, &big(&v)).unwrap();
        prop_assert_eq!(got.is_some(), oracle_in_image(&m, &v));
        if let Some(w) = got {
            prop_assert_eq!(im.mul_vec(&w).unwrap(), big(&v));
        }
    }

    #[test]
    fn normalize_is_idempotent_and_value_preserving(s in phase_sum(12)) {
        let n = s.normalize();
        prop_assert_eq!(n.normalize(), n.clone());
        prop_assert!(close(n.eval_complex(), s.eval_complex()));
        let (re, im) = s.eval_complex();
        if n.is_empty() {
            prop_assert!(re.abs() < 1e-9 && im.abs() < 1e-9);
        }
        prop_assert!(s.exact_eq(&n));
    }

    #[test]
    fn nonzero_normal_forms_have_nonzero_value(s in phase_sum(6)) {
        // A nonzero polynomial of degree below φ(N) cannot vanish at a
        // primitive N-th root of unity.
        let n = s.normalize();
        let (re, im) = n.eval_complex();
        if !n.is_empty() {
            prop_assert!(re.abs() > 1e-12 || im.abs() > 1e-12, "{:?} evaluates to zero", n);
        }
    }

    #[test]
    fn products_multiply_values(a in phase_sum(6), b in phase_sum(6), c in phase_sum(4)) {
        let ab = &a * &b;
        let (x, y) = (a.eval_complex(), b.eval_complex());
        prop_assert!(close(ab.eval_complex(), (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0)));
        prop_assert_eq!(&ab, &(&b * &a));
        prop_assert!((&a * &(&b + &c)).exact_eq(&(&ab + &(&a * &c))));
    }

    #[test]
    fn relations_agree_with_symplectic_oracle(m in gluing(), i in 0usize..36, j in 0usize..36, bump in -2i64..=2) {
        let mut m = m;
        let n = m.len();
        m[i % n][j % n] += bump;
        let g = n / 2;
        let blk = |r0: usize, c0: usize| to_int(&m[r0..r0 + g].iter().map(|r| r[c0..c0 + g].to_vec()).collect::<Vec<_>>());
        let (r, p, s, q) = (blk(0, 0), blk(0, g), blk(g, 0), blk(g, g));
        let report = gluing::check_relations(g, &r, &p, &s, &q).unwrap();
        let oracle = is_anti_symplectic(&m);
        prop_assert_eq!(report.is_valid(), oracle);
        prop_assert_eq!(gluing::satisfies_block_inverse(&r, &p, &s, &q).unwrap(), oracle);
        if oracle {
            prop_assert_eq!(&report.determinant, &report.expected_determinant());
        }
    }

    #[test]
    fn property_one_on_random_manifolds(m in gluing(), seed in any::<u64>()) {
        let gd = to_gluing(&m);
        let (p, q) = (p_block(&m), q_block(&m));
        let mut rng = StdRng::seed_from_u64(seed);
        for forced in [true, false] {
            let n = if forced { mat_vec(&p, &random_vec(&mut rng, p.len(), 4)) } else { random_vec(&mut rng, p.len(), 6) };
            let left = exactalg::in_image(gd.p(), &big(&n)).unwrap().is_some();
            let qt_n = homology::q_transport(&gd, &big(&n)).unwrap();
            prop_assert_eq!(qt_n.clone(), big(&mat_vec(&transpose(&q), &n)));
            let right = exactalg::in_image(&gd.p().transpose(), &qt_n).unwrap().is_some();
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn class_decomposition_round_trips(m in gluing(), seed in any::<u64>()) {
        let gd = to_gluing(&m);
        let h = homology::h1(&gd);
        let mut rng = StdRng::seed_from_u64(seed);
        let n = big(&random_vec(&mut rng, gd.genus(), 7));
        let dec = h.decompose_class(&n).unwrap();
        // n = n_f + P·θ_τ exactly
        let p_theta = gd.p().mul_rational_vec(&dec.theta_tau.theta().0).unwrap();
        for ((a, b), c) in n.iter().zip(&dec.n_f).zip(&p_theta) {
            prop_assert_eq!(BigRational::from_integer(a - b), c.clone());
        }
        // θ_τ = m / p, and n_f carries no torsion
        prop_assert_eq!(RationalVector::from_scaled(&dec.m_vec, &dec.p), dec.theta_tau.theta().clone());
        let again = h.decompose_class(&dec.n_f).unwrap();
        prop_assert!(again.theta_tau.is_zero());
        // adding an element of Im P leaves θ_τ unchanged
        let shift = gd.p().mul_vec(&big(&random_vec(&mut rng, gd.genus(), 3))).unwrap();
        let moved: Vec<BigInt> = n.iter().zip(&shift).map(|(a, b)| a + b).collect();
        prop_assert_eq!(h.decompose_class(&moved).unwrap().theta_tau, dec.theta_tau);
    }

    #[test]
    fn term_phases_ignore_representatives(m in gluing(), seed in any::<u64>(), k in 1u64..6) {
        let gd = to_gluing(&m);
        let h = homology::h1(&gd);
        let order = u64::try_from(&h.torsion_order()).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        use rand::Rng;
        let mut pick = || h.torsion_element_at(&BigInt::from(rng.gen_range(0..order))).unwrap().theta().clone();
        let (a, b, t1, t2) = (pick(), pick(), pick(), pick());
        let mut rng = StdRng::seed_from_u64(seed ^ 1);
        let mut shift = |v: &RationalVector| v.add_integers(&big(&random_vec(&mut rng, gd.genus(), 5))).unwrap();
        prop_assert_eq!(
            invariants::cs_term_phase(&gd, k, &a, &t1).unwrap(),
            invariants::cs_term_phase(&gd, k, &shift(&a), &shift(&t1)).unwrap()
        );
        prop_assert_eq!(
            invariants::bf_term_phase(&gd, k, &a, &b, &t1, &t2).unwrap(),
            invariants::bf_term_phase(&gd, k, &shift(&a), &shift(&b), &shift(&t1), &shift(&t2)).unwrap()
        );
    }

    #[test]
    fn cs_sum_counts_every_torsion_element_once(m in gluing(), k in 1u64..5) {
        let gd = to_gluing(&m);
        let z = invariants::z_cs(&gd, k).unwrap();
        let total: BigInt = z.terms().values().sum();
        prop_assert_eq!(total, homology::h1(&gd).torsion_order());
    }

    #[test]
    fn framing_modes_agree(m in gluing(), seed in any::<u64>(), k in 1u64..5, c in -5i64..=5) {
        let gd = to_gluing(&m);
        let h = homology::h1(&gd);
        let mut rng = StdRng::seed_from_u64(seed);
        let n = big(&random_vec(&mut rng, gd.genus(), 4));
        let inter = big(&random_vec(&mut rng, gd.genus(), 4));
        let dec = h.decompose_class(&n).unwrap();
        let l = invariants::equivalent_direct_framing(&gd, &dec.p, &dec.m_vec, &BigInt::from(c), &inter).unwrap();
        let direct = invariants::wilson_cs(&gd, k, &LinkPresentation::direct(n.clone(), l)).unwrap();
        let decomposed = invariants::wilson_cs(&gd, k, &LinkPresentation::decomposed(n, c, inter)).unwrap();
        prop_assert_eq!(direct, decomposed);
    }

    #[test]
    fn inverse_and_lens_shift_preserve_invariants(p in 1i64..12, q in -11i64..12, t in -3i64..=3, k in 1u64..5) {
        prop_assume!(num_integer::gcd(p, q) == 1);
        let gd = GluingData::lens(p, q).unwrap();
        // any other (r, s) = (r + t·p, s + t·q) presents the same manifold
        let (r, s) = (gd.r().get(0, 0) + BigInt::from(t * p), gd.s().get(0, 0) + BigInt::from(t * q));
        let one = |x: BigInt| IntMatrix::diagonal([x]);
        let other = gluing::validate(1, one(r), one(BigInt::from(p)), one(s), one(BigInt::from(q))).unwrap();
        prop_assert_eq!(invariants::z_cs(&gd, k).unwrap(), invariants::z_cs(&other, k).unwrap());
        prop_assert_eq!(invariants::z_bf(&gd, k).unwrap(), invariants::z_bf(&other, k).unwrap());
        prop_assert_eq!(homology::h1(&gd).invariant_factors(), homology::h1(&other).invariant_factors());
        prop_assert!(gd.inverse().report().is_valid());
        prop_assert_eq!(gd.inverse().inverse(), gd);
    }
}
