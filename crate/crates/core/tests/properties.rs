use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vsi_core::cluster::build_complex;
use vsi_core::decomposition::{generic_decomposition, DecompositionOptions};
use vsi_core::presentation::{canonical_decomp, minimal_decomp};
use vsi_core::rep::{fitting_decompose, hom_dim, DEFAULT_SPLIT_RETRIES};
use vsi_core::{DimVector, Fp32003, Matrix, Presentation, Quiver, Rational, Representation};

type F = Fp32003;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Acyclic quivers on up to four vertices with arrows pointing from lower to higher index.
fn acyclic_quiver() -> impl Strategy<Value = Quiver> {
    (1usize..=4).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
        let k = pairs.len();
        prop::collection::vec(0..k.max(1), 0..=if k == 0 { 0 } else { 4 })
            .prop_map(move |picks| Quiver::from_edges(n, &picks.iter().map(|&i| pairs[i]).collect::<Vec<_>>()).unwrap())
    })
}

fn dynkin_quiver() -> impl Strategy<Value = Quiver> {
    prop_oneof![
        Just(Quiver::a_n(2)),
        Just(Quiver::a_n(3)),
        Just(Quiver::from_edges(3, &[(1, 2), (3, 2)]).unwrap()),
        Just(Quiver::from_edges(3, &[(2, 1), (2, 3)]).unwrap()),
        Just(Quiver::d_n(4)),
        Just(Quiver::from_edges(4, &[(1, 2), (3, 2), (4, 2)]).unwrap()),
    ]
}

fn vector(n: usize, lo: i64, hi: i64) -> impl Strategy<Value = DimVector> {
    prop::collection::vec(lo..=hi, n).prop_map(DimVector::new)
}

fn quiver_and_vectors(lo: i64, hi: i64) -> impl Strategy<Value = (Quiver, DimVector, DimVector)> {
    acyclic_quiver().prop_flat_map(move |q| {
        let n = q.n();
        (Just(q), vector(n, lo, hi), vector(n, lo, hi))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projectives_and_injectives_pair_with_coordinates((q, x, _) in quiver_and_vectors(-5, 5)) {
        for v in 0..q.n() {
            prop_assert_eq!(q.euler_form(&q.proj_vector(v).unwrap(), &x).unwrap(), x[v]);
            prop_assert_eq!(q.euler_form(&x, &q.inj_vector(v).unwrap()).unwrap(), x[v]);
        }
    }

    #[test]
    fn coxeter_transformation_is_invertible((q, x, y) in quiver_and_vectors(-5, 5)) {
        prop_assert_eq!(q.tau_inverse(&q.tau(&x).unwrap()).unwrap(), x.clone());
        // <x, y> = -<y, tau x>
        prop_assert_eq!(q.euler_form(&x, &y).unwrap(), -q.euler_form(&y, &q.tau(&x).unwrap()).unwrap());
    }

    #[test]
    fn euler_form_is_bilinear((q, x, y) in quiver_and_vectors(-5, 5), z in -3i64..=3) {
        let lhs = q.euler_form(&(&x + &(z * &y)), &y).unwrap();
        let rhs = q.euler_form(&x, &y).unwrap() + z * q.tits_form(&y).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dim_vector_text_roundtrip(v in prop::collection::vec(-50i64..50, 1..6)) {
        let d = DimVector::new(v);
        prop_assert_eq!(DimVector::parse(&d.to_string()).unwrap(), d);
    }

    #[test]
    fn canonical_and_minimal_decompositions((q, a, _) in quiver_and_vectors(-6, 6)) {
        let can = canonical_decomp(&q, &a).unwrap();
        prop_assert!(can.mu.is_nonneg() && can.gamma.is_nonneg());
        prop_assert!(can.mu.disjoint_support(&can.gamma));
        prop_assert_eq!(&can.mu - &q.et_inv_apply(&can.gamma), a.clone());
        let min = minimal_decomp(&q, &a).unwrap();
        prop_assert!(min.is_minimal());
        prop_assert_eq!(&min.gamma0 - &min.gamma1, q.et_apply(&a));
        prop_assert!(min.le(&can.presentation_space(&q)));
    }

    #[test]
    fn rank_nullity_and_determinants(seed in any::<u64>(), n in 1usize..6, m in 1usize..6) {
        let mut r = rng(seed);
        let a = Matrix::<F>::random(n, m, &mut r);
        prop_assert_eq!(a.rank() + a.kernel().len(), m);
        let x = Matrix::<F>::random(n, n, &mut r);
        let y = Matrix::<F>::random(n, n, &mut r);
        prop_assert_eq!(x.mul(&y).det(), x.det() * y.det());
        if let Some(inv) = x.inverse() {
            prop_assert_eq!(x.mul(&inv), Matrix::identity(n));
        }
    }

    #[test]
    fn rational_determinant_matches_rank(rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 4), 4)) {
        let a = Matrix::<Rational>::from_i64_rows(&rows);
        prop_assert_eq!(a.det() == Rational::from_integer(0.into()), a.rank() < 4);
        let ints: Vec<Vec<num_bigint::BigInt>> = rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        prop_assert_eq!(a.det(), Rational::from_integer(vsi_core::bareiss::det(ints)));
    }

    #[test]
    fn projective_hom_counts_coordinates((q, d, _) in quiver_and_vectors(0, 2), seed in any::<u64>()) {
        let q = Arc::new(q);
        let mut r = rng(seed);
        let n = Representation::<F>::random(&q, d.clone(), &mut r).unwrap();
        for v in 0..q.n() {
            prop_assert_eq!(hom_dim(&Representation::projective(&q, v), &n).unwrap(), d[v] as usize);
            prop_assert_eq!(hom_dim(&n, &Representation::injective(&q, v)).unwrap(), d[v] as usize);
        }
    }

    #[test]
    fn hom_matrix_kernel_is_hom_from_cokernel(
        (q, g0, g1) in quiver_and_vectors(0, 2),
        d in prop::collection::vec(0i64..=2, 4),
        seed in any::<u64>(),
    ) {
        let q = Arc::new(q);
        let mut r = rng(seed);
        let decomp = vsi_core::ProjDecomp::new(&q, g0, g1).unwrap();
        let phi = Presentation::<F>::random(&q, decomp, &mut r);
        let v = Representation::<F>::random(&q, DimVector::new(d[..q.n()].to_vec()), &mut r).unwrap();
        let h = phi.hom_matrix(&v).unwrap();
        prop_assert_eq!(h.kernel().len(), hom_dim(&phi.cokernel(), &v).unwrap());
    }

    #[test]
    fn canonical_presentation_recovers_module((q, d, _) in quiver_and_vectors(0, 2), seed in any::<u64>()) {
        let q = Arc::new(q);
        let mut r = rng(seed);
        let m = Representation::<F>::random(&q, d.clone(), &mut r).unwrap();
        let p = Presentation::canonical(&m);
        prop_assert!(p.is_injective());
        let c = p.cokernel();
        prop_assert_eq!(c.dim(), &d);
        prop_assert!(vsi_core::rep::is_isomorphic(&c, &m, &mut r).unwrap());
    }

    #[test]
    fn fitting_summands_add_up((q, d, _) in quiver_and_vectors(0, 2), seed in any::<u64>()) {
        let q = Arc::new(q);
        let mut r = rng(seed);
        let m = Representation::<F>::random(&q, d.clone(), &mut r).unwrap();
        let parts = fitting_decompose(&m, &mut r, DEFAULT_SPLIT_RETRIES).unwrap();
        let mut total = DimVector::zeros(q.n());
        for p in &parts {
            prop_assert!(!p.dim().is_zero());
            total += p.dim();
        }
        prop_assert_eq!(total, d);
    }

    #[test]
    fn stabilization_keeps_cv(
        q in dynkin_quiver(),
        seed in any::<u64>(),
        extra in prop::collection::vec(0i64..=1, 4),
    ) {
        let q = Arc::new(q);
        let n = q.n();
        let mut r = rng(seed);
        // <alpha, beta> = (gamma0 - gamma1) . beta, which vanishes for beta = e_0 + e_{n-1}.
        let decomp = vsi_core::ProjDecomp::new(&q, DimVector::unit(n, 0), DimVector::unit(n, n - 1)).unwrap();
        let phi = Presentation::<F>::random(&q, decomp, &mut r);
        let dim = &DimVector::unit(n, 0) + &DimVector::unit(n, n - 1);
        let v = Representation::<F>::random(&q, dim, &mut r).unwrap();
        let g = DimVector::new(extra[..n].to_vec());
        prop_assert_eq!(phi.stabilize(&g).unwrap().cv_value(&v).unwrap(), phi.cv_value(&v).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generic_decompositions_reconstruct(q in dynkin_quiver(), raw in prop::collection::vec(-4i64..=4, 4), seed in any::<u64>()) {
        let q = Arc::new(q);
        let a = DimVector::new(raw[..q.n()].to_vec());
        let d = generic_decomposition::<F, _>(&q, &a, &mut rng(seed), DecompositionOptions::default()).unwrap();
        prop_assert_eq!(d.reconstruct(&q), a);
        prop_assert!(d.gamma.is_nonneg());
        for p in &d.parts {
            prop_assert_eq!(q.tits_form(p).unwrap(), 1);
            prop_assert!(p.disjoint_support(&d.gamma));
        }
    }

    #[test]
    fn complexes_are_flag_pseudomanifolds(q in dynkin_quiver(), seed in any::<u64>()) {
        let q = Arc::new(q);
        let c = build_complex::<F, _>(&q, &mut rng(seed), 3).unwrap();
        for i in 0..c.vertices.len() {
            prop_assert!(!c.compat[i][i]);
            for j in 0..c.vertices.len() {
                prop_assert_eq!(c.compat[i][j], c.compat[j][i]);
            }
        }
        for f in &c.facets {
            prop_assert_eq!(f.len(), q.n());
            for &a in f {
                for &b in f {
                    prop_assert!(a == b || c.compat[a][b]);
                }
            }
        }
        prop_assert!(c.ridges().values().all(|fs| fs.len() == 2));
    }
}
