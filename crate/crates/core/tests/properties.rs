use hdx_core::cochain::{
    build_d, build_delta, build_down_laplacian, build_full_laplacian, build_up_laplacian,
    inner_product, Cochain,
};
use hdx_core::generators::{random_facet_weights, random_pure_complex};
use hdx_core::harness::{descent_f, verify_structural_identities, Outcome};
use hdx_core::spectral::{betti_numbers, harmonic_dimension, spectral_report};
use hdx_core::weights::{extend_top_values, homogeneous_weight, verify_balanced};
use hdx_core::{parse_complex, ComplexDocument, HarnessConfig, SimplicialComplex, WeightedComplex};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn complexes() -> impl Strategy<Value = WeightedComplex> {
    (5usize..8, 1usize..4, 0.4f64..0.95, any::<u64>(), any::<bool>()).prop_filter_map(
        "generator rejected the instance",
        |(v, n, p, seed, weighted)| {
            let x = random_pure_complex(v, n.min(v - 2), p, seed).ok()?;
            Some(if weighted {
                let m = extend_top_values(&x, &random_facet_weights(x.facets().len(), seed)).ok()?;
                WeightedComplex::new(x, m).ok()?
            } else {
                WeightedComplex::homogeneous(x)
            })
        },
    )
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coboundary_squares_to_zero(wc in complexes()) {
        let n = wc.dim() as isize;
        for k in -1..n - 1 {
            let dd = build_d(&wc, k + 1).unwrap().compose(&build_d(&wc, k).unwrap()).unwrap();
            prop_assert!(dd.matrix().iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn codifferential_is_adjoint(wc in complexes(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for k in -1..wc.dim() as isize {
            let phi = Cochain::random(&wc, k, &mut rng).unwrap();
            let psi = Cochain::random(&wc, k + 1, &mut rng).unwrap();
            let lhs = inner_product(&wc, &build_d(&wc, k).unwrap().apply(&phi).unwrap(), &psi).unwrap();
            let rhs = inner_product(&wc, &phi, &build_delta(&wc, k).unwrap().apply(&psi).unwrap()).unwrap();
            prop_assert!(rel(lhs, rhs) < 1e-10, "k={k}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn laplacians_are_positive_semidefinite(wc in complexes()) {
        for k in 0..=wc.dim() as isize {
            let r = spectral_report(&build_full_laplacian(&wc, k).unwrap(), "full", 1e-8).unwrap();
            prop_assert!(r.eigenvalues.iter().all(|&v| v > -1e-9), "k={k}: {:?}", r.eigenvalues);
        }
    }

    #[test]
    fn up_and_down_share_nonzero_spectra(wc in complexes()) {
        for k in 1..=wc.dim() as isize {
            let up = spectral_report(&build_up_laplacian(&wc, k - 1).unwrap(), "up", 1e-8).unwrap();
            let down = spectral_report(&build_down_laplacian(&wc, k).unwrap(), "down", 1e-8).unwrap();
            let (a, b) = (up.nonzero(), down.nonzero());
            prop_assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn harmonic_dimension_matches_betti_and_euler(wc in complexes()) {
        let n = wc.dim() as isize;
        let betti = betti_numbers(&wc).unwrap();
        let mut euler_counts = 0i64;
        let mut euler_betti = 0i64;
        for k in 0..=n {
            prop_assert_eq!(harmonic_dimension(&wc, k, 1e-8).unwrap(), betti[k as usize]);
            let sign = if k % 2 == 0 { 1 } else { -1 };
            euler_counts += sign * wc.complex().count(k) as i64;
            euler_betti += sign * betti[k as usize] as i64;
        }
        prop_assert_eq!(euler_counts, euler_betti);
    }

    #[test]
    fn spectra_ignore_weight_scale(wc in complexes(), c in 0.1f64..10.0) {
        let x = wc.complex().clone();
        let top: Vec<f64> = wc.weights().level(wc.dim() as isize).iter().map(|w| w * c).collect();
        let scaled = WeightedComplex::new(x.clone(), extend_top_values(&x, &top).unwrap()).unwrap();
        for k in 0..wc.dim() as isize {
            let a = spectral_report(&build_up_laplacian(&wc, k).unwrap(), "up", 1e-8).unwrap();
            let b = spectral_report(&build_up_laplacian(&scaled, k).unwrap(), "up", 1e-8).unwrap();
            for (u, v) in a.eigenvalues.iter().zip(&b.eigenvalues) {
                prop_assert!((u - v).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn spectra_ignore_vertex_labels(wc in complexes(), shift in 1usize..50) {
        let x = wc.complex();
        let n = x.dim() as isize;
        // Reverse the order and shift the labels.
        let top = x.vertices().last().copied().unwrap();
        let relabelled = SimplicialComplex::from_facets(
            x.facets().iter().map(|f| f.vertices().iter().map(|v| top - v + shift).collect::<Vec<_>>()),
        )
        .unwrap();
        let a = WeightedComplex::homogeneous(x.clone());
        let b = WeightedComplex::homogeneous(relabelled);
        for k in 0..n {
            let sa = spectral_report(&build_up_laplacian(&a, k).unwrap(), "up", 1e-8).unwrap();
            let sb = spectral_report(&build_up_laplacian(&b, k).unwrap(), "up", 1e-8).unwrap();
            for (u, v) in sa.eigenvalues.iter().zip(&sb.eigenvalues) {
                prop_assert!((u - v).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn homogeneous_weight_counts_facets(wc in complexes()) {
        let x = wc.complex();
        let n = x.dim();
        let m = homogeneous_weight(x);
        prop_assert!(verify_balanced(x, &m).is_empty());
        for k in 0..=n {
            for (i, s) in x.simplices(k as isize).iter().enumerate() {
                let containing = x.facets().iter().filter(|f| s.is_face_of(f)).count();
                let want = factorial(n - k) * containing as f64;
                prop_assert!(rel(m.get(k as isize, i), want) < 1e-12);
            }
        }
    }

    #[test]
    fn extended_weights_are_balanced(wc in complexes()) {
        prop_assert!(verify_balanced(wc.complex(), wc.weights()).is_empty());
    }

    #[test]
    fn structural_identities_hold(wc in complexes(), seed in any::<u64>()) {
        let cfg = HarnessConfig { seed, samples: 4, ..HarnessConfig::default() };
        let r = verify_structural_identities(&wc, None, &cfg).unwrap();
        prop_assert_eq!(r.outcome, Outcome::Pass, "{:#?}", r);
    }

    #[test]
    fn descent_composes(x in 0.7f64..4.0, a in 0usize..4, b in 0usize..4) {
        let Ok(inner) = descent_f(x, b) else { return Ok(()) };
        let (Ok(lhs), Ok(rhs)) = (descent_f(x, a + b), descent_f(inner, a)) else { return Ok(()) };
        prop_assert!(rel(lhs, rhs) < 1e-9);
    }

    #[test]
    fn documents_round_trip(wc in complexes(), weighted in any::<bool>()) {
        let x = wc.complex();
        let weights = weighted.then(|| wc.weights().level(x.dim() as isize).to_vec());
        let doc = ComplexDocument::new(x, weights, None, None);
        let back = parse_complex(&doc.to_json()).unwrap();
        prop_assert_eq!(&back, &doc);
        let (rebuilt, _) = back.build().unwrap();
        prop_assert_eq!(rebuilt.complex(), x);
        if weighted {
            prop_assert_eq!(rebuilt.weights(), wc.weights());
        }
    }

    #[test]
    fn parser_never_panics(text in ".{0,200}") {
        let _ = parse_complex(&text);
    }

    #[test]
    fn parser_handles_structured_noise(
        facets in prop::collection::vec(prop::collection::vec(0usize..12, 0..5), 0..8),
        weights in prop::option::of(prop::collection::vec(-1.0f64..3.0, 0..8)),
    ) {
        let doc = serde_json::json!({ "facets": facets, "facet_weights": weights });
        if let Ok(d) = parse_complex(&doc.to_string()) {
            prop_assert!(d.build().is_ok());
        }
    }
}
