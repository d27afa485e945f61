use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use osp21_core::eigen::{eigen_matrix, match_multiset, EigenOptions, Tolerance};
use osp21_core::fock::FockSpace;
use osp21_core::json::to_pretty_string;
use osp21_core::operator::{commutator, AnyOperator, Domain, Operator};
use osp21_core::spectra::jck::build_jck_full;
use osp21_core::spectra::mjc::{build_mjc_full, mjc_excitation};
use osp21_core::spectra::recurrence::jck_recurrence;
use osp21_core::spectra::{JCKerrParams, MJCParams};

fn sparse(dim: usize) -> impl Strategy<Value = Operator<f64>> {
    prop::collection::vec((0..dim, 0..dim, -3.0f64..3.0), 0..3 * dim)
        .prop_map(move |t| Operator::from_triplets(Domain::Plain { dim }, t))
}

fn coupling() -> impl Strategy<Value = f64> {
    -2.0f64..2.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative(a in sparse(6), b in sparse(6), c in sparse(6)) {
        let left = (&(&a * &b)) * &c;
        let right = &a * &(&b * &c);
        prop_assert!((&left - &right).max_abs() < 1e-12);
    }

    #[test]
    fn similarity_preserves_eigenvalues(
        diag in prop::collection::vec(-5.0f64..5.0, 5),
        mix in prop::collection::vec(-0.3f64..0.3, 25),
    ) {
        // Spread the values so the spectrum is well separated.
        let values: Vec<f64> = diag.iter().enumerate().map(|(i, d)| d + 12.0 * i as f64).collect();
        let p = DMatrix::from_fn(5, 5, |i, j| if i == j { 1.0 } else { 0.0 } + mix[5 * i + j]);
        let p_inv = p.clone().try_inverse().unwrap();
        let m = &p * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(values.clone())) * p_inv;
        let spec = eigen_matrix(&m, EigenOptions::default()).unwrap();
        let expected: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let matching = match_multiset(&spec.eigenvalues, &expected, Tolerance::Additive { abs: 1e-10, rel: 1e-10 });
        prop_assert!(matching.is_complete(), "{:?} vs {:?}", spec.eigenvalues, values);
    }

    #[test]
    fn recurrence_scales_with_couplings(
        w in coupling(), w0 in coupling(), k in coupling(), l in coupling(), c in 0.1f64..4.0, j in 1usize..6,
    ) {
        let p = JCKerrParams::new(w, w0, k, l).unwrap();
        let base: Vec<Complex64> = jck_recurrence(j, &p).unwrap().eigenvalues.iter().map(|z| z * c).collect();
        let scaled = jck_recurrence(j, &p.scaled(c)).unwrap().eigenvalues;
        let tol = Tolerance::Relative { rel: 1e-9 };
        prop_assert!(match_multiset(&base, &scaled, tol).is_complete());
    }

    #[test]
    fn full_models_are_hermitian_and_conserving(
        w in coupling(), w0 in coupling(), l1 in coupling(), l2 in coupling(),
    ) {
        let space = FockSpace::new(4, 4);
        let h = build_mjc_full(space, &MJCParams::new(w, w0, l1, l2).unwrap()).unwrap();
        prop_assert!(h.is_symmetric());
        prop_assert!(commutator(&h, &mjc_excitation(space).unwrap()).unwrap().max_abs() < 1e-12);
        let k = build_jck_full(space, &JCKerrParams::new(w, w0, l1, l2).unwrap()).unwrap();
        prop_assert!(k.is_symmetric());
    }

    #[test]
    fn operator_json_round_trips(a in sparse(5)) {
        let doc = a.to_json();
        prop_assert_eq!(AnyOperator::from_json(&doc).unwrap(), AnyOperator::Float(a.clone()));
        prop_assert_eq!(to_pretty_string(&doc), to_pretty_string(&a.to_json()));
    }
}
