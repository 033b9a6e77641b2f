//! Randomized invariant checks across the library.

use num::complex::Complex64;
use proptest::prelude::*;

use floer::algebra::{
    binomial, contraction_homology, contraction_matrix, exterior_dims, CupForm, GradedUModule,
};
use floer::flatdirac::{
    dirac_spectrum, hermitian2_stratum, kernel_locus_membership, spectral_flow, FlatPoint,
    LocusMembership, PolyPath,
};
use floer::floercore::palindrome_check;
use floer::productgeom::{lambda1_star, sym_product_homology, ProductSpectrumQuery};

const TAU: f64 = std::f64::consts::TAU;

/// Sparse cup form on b1 generators from a seed list of raw triples.
fn cup_strategy() -> impl Strategy<Value = CupForm> {
    (3usize..=8).prop_flat_map(|b1| {
        let term = (1usize..=b1, 1usize..=b1, 1usize..=b1, -3i64..=3);
        prop::collection::vec(term, 1..=6).prop_map(move |raw| {
            let mut terms: Vec<([usize; 3], i64)> = Vec::new();
            for (i, j, k, c) in raw {
                if i == j || j == k || i == k || c == 0 {
                    continue;
                }
                let mut idx = [i, j, k];
                idx.sort();
                if !terms.iter().any(|(t, _)| *t == idx) {
                    terms.push((idx, c));
                }
            }
            CupForm::new(b1, terms).expect("normalized terms are valid")
        })
    })
}

fn point_strategy() -> impl Strategy<Value = [f64; 3]> {
    [0.0..TAU, 0.0..TAU, 0.0..TAU]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn contraction_squares_to_zero(cup in cup_strategy()) {
        let b1 = cup.b1() as i64;
        for m in 6..=b1 {
            let outer = contraction_matrix(&cup, m - 3).unwrap();
            let inner = contraction_matrix(&cup, m).unwrap();
            prop_assert!(outer.matmul(&inner).is_zero());
        }
    }

    #[test]
    fn contraction_homology_has_zero_euler_characteristic(cup in cup_strategy()) {
        prop_assert_eq!(contraction_homology(&cup).euler_characteristic(), 0);
    }

    #[test]
    fn homology_of_zero_form_is_full_exterior_algebra(b1 in 1usize..=8) {
        let zero = CupForm::zero(b1);
        prop_assert_eq!(contraction_homology(&zero), exterior_dims(b1));
    }

    #[test]
    fn homology_rank_bounded_by_exterior_rank(cup in cup_strategy()) {
        let h = contraction_homology(&cup);
        for k in 0..=cup.b1() as i64 {
            prop_assert!(h.rank(k) <= binomial(cup.b1(), k as usize));
        }
    }

    #[test]
    fn tower_shift_is_additive(
        degrees in prop::collection::vec((-10i64..10, 1usize..4), 1..5),
        a in -5i64..5,
        b in -5i64..5,
    ) {
        let mut m = GradedUModule::new();
        for (d, mult) in degrees {
            m.add_tower(d, mult);
        }
        prop_assert_eq!(m.shift(a).shift(b), m.shift(a + b));
        prop_assert_eq!(palindrome_check(&m.shift(a)), palindrome_check(&m));
    }

    #[test]
    fn unperturbed_spectrum_is_symmetric(beta in point_strategy()) {
        let w = dirac_spectrum(&FlatPoint::new(beta), 0.0, 8.0).unwrap();
        let mut mirror: Vec<(f64, usize)> =
            w.entries.iter().map(|&(v, m)| (-v, m)).collect();
        mirror.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        for (&(v, m), &(mv, mm)) in w.entries.iter().zip(&mirror) {
            prop_assert!((v - mv).abs() < 1e-9);
            prop_assert_eq!(m, mm);
        }
    }

    #[test]
    fn spectrum_is_lattice_periodic(beta in point_strategy(), axis in 0usize..3) {
        let mut shifted = beta;
        shifted[axis] += TAU;
        let a = dirac_spectrum(&FlatPoint::new(beta), 0.1, 5.0).unwrap();
        let b = dirac_spectrum(&FlatPoint::new(shifted), 0.1, 5.0).unwrap();
        prop_assert_eq!(a.entries.len(), b.entries.len());
        for (&(va, ma), &(vb, mb)) in a.entries.iter().zip(&b.entries) {
            prop_assert!((va - vb).abs() < 1e-9);
            prop_assert_eq!(ma, mb);
        }
    }

    #[test]
    fn flow_matches_membership_change(p in point_strategy(), q in point_strategy()) {
        let delta = 0.3;
        let level = |v: [f64; 3]| {
            match kernel_locus_membership(&FlatPoint::new(v), delta).unwrap() {
                LocusMembership::Inside => 0i64,
                LocusMembership::On => unreachable!("measure zero"),
                LocusMembership::Outside => 1,
            }
        };
        let path = PolyPath::new(vec![p, q]).unwrap();
        prop_assert_eq!(spectral_flow(&path, delta).unwrap(), level(q) - level(p));
    }

    #[test]
    fn loops_have_zero_flow(vs in prop::collection::vec(point_strategy(), 2..6)) {
        let mut vertices = vs;
        vertices.push(vertices[0]);
        let path = PolyPath::new(vertices).unwrap();
        prop_assert_eq!(spectral_flow(&path, 0.3).unwrap(), 0);
    }

    #[test]
    fn stratum_counts_zero_eigenvalues(a in -6i32..=6, b in -6i32..=6, re in -4i32..=4, im in -4i32..=4) {
        let (af, bf) = (a as f64, b as f64);
        let z = Complex64::new(re as f64, im as f64);
        // Eigenvalues of [[a, z], [conj(z), b]] by the quadratic formula.
        let mean = (af + bf) / 2.0;
        let disc = ((af - bf) / 2.0).powi(2) + z.norm_sqr();
        let eigs = [mean - disc.sqrt(), mean + disc.sqrt()];
        let zeros = eigs.iter().filter(|v| v.abs() < 1e-9).count() as u8;
        prop_assert_eq!(hermitian2_stratum(af, bf, z), zeros);
    }

    #[test]
    fn lambda1_star_caps_at_harmonic_mode(l1 in 0.01f64..10.0, l in 0.05f64..10.0) {
        let q = ProductSpectrumQuery {
            surface_eigenvalues: vec![l1],
            genus: 2,
            circle_l: l,
            count: 1,
        };
        let star = lambda1_star(&q).unwrap();
        prop_assert_eq!(star, l1.min(1.0 / (l * l)));
    }

    #[test]
    fn symmetric_product_betti_satisfy_poincare_duality(g in 0usize..5, n in 0usize..5) {
        let h = sym_product_homology(g, n);
        let d = 2 * n as i64;
        for i in 0..=d {
            prop_assert_eq!(h.rank(i), h.rank(d - i));
        }
        prop_assert_eq!(h.rank(0), 1);
    }
}
