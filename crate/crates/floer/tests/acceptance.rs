//! End-to-end acceptance checks; each test prints one pass/fail line.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use floer::algebra::{contraction_matrix, CupForm};
use floer::flatdirac::{spectral_flow, spin_points, PolyPath};
use floer::floercore::{
    hm_bar, normalize_grading, palindrome_check, simplest_hm, GradingMode, SimplestTypeDatum,
};
use floer::productgeom::{
    lambda1_star, spectrally_large, sym_product_homology, t3_flat_datum, theta_datum,
    ProductSpectrumQuery, HYPERBOLIC_PRODUCT_S_TILDE,
};

const TAU: f64 = std::f64::consts::TAU;

fn verdict(name: &str, pass: bool) {
    println!("acceptance {name}: {}", if pass { "pass" } else { "FAIL" });
    assert!(pass, "acceptance criterion failed: {name}");
}

fn absolute_profile(datum: &SimplestTypeDatum) -> (i64, Vec<usize>, Vec<(i64, u32, usize)>) {
    let hm = simplest_hm(datum).expect("preset datum is consistent");
    let (towers, reduced) =
        normalize_grading(&hm.tower_part, &hm.reduced, GradingMode::PaperAbsolute)
            .expect("presets have towers");
    let (lo, profile) = towers.tower_profile().expect("nonempty");
    (lo, profile, reduced.torsion().collect())
}

#[test]
fn criterion_1_hmbar_t3() {
    let cup = CupForm::parse(3, "1,2,3:1").unwrap();
    let pass = hm_bar(&cup).to_vec(0, 3) == vec![0, 3, 3, 0];
    verdict("1 (HM-bar of T^3)", pass);
}

#[test]
fn criterion_2_bolza() {
    let (lo, profile, reduced) = absolute_profile(&theta_datum(2).unwrap());
    let pass = lo == -4 && profile == vec![1, 9, 9, 1] && reduced.is_empty();
    verdict("2 (Bolza towers at -1..-4)", pass);
}

#[test]
fn criterion_3_klein() {
    let (lo, profile, reduced) = absolute_profile(&theta_datum(3).unwrap());
    let pass = lo == -6 && profile == vec![1, 6, 28, 28, 6, 1] && reduced == vec![(-4, 1, 1)];
    verdict("3 (Klein towers at -1..-6 plus Q[U]/U at -4)", pass);
}

#[test]
fn criterion_4_flat_t3_datum() {
    let hm = simplest_hm(&t3_flat_datum()).unwrap();
    let pass = hm.tower_part.tower_profile() == Some((-1, vec![3, 3])) && hm.reduced.is_empty();
    verdict("4 (flat T^3 relative profile (3,3))", pass);
}

#[test]
fn criterion_5_spin_points() {
    let pass = [0.1, 0.3, 3.0].iter().all(|&delta| {
        let pts = spin_points(delta).unwrap();
        pts.len() == 8
            && pts
                .iter()
                .all(|sp| (sp.side.as_str() == "inside") == sp.is_s0)
            && pts.iter().filter(|sp| sp.is_s0).count() == 1
    });
    verdict(
        "5 (spin points: only s0 inside for delta in {0.1, 0.3, 3.0})",
        pass,
    );
}

#[test]
fn criterion_6_spectral_flow() {
    let delta = 0.3;
    let exit = PolyPath::parse("0,0,0 ; pi,pi,pi").unwrap();
    let mut pass = spectral_flow(&exit, delta).unwrap() == 1;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5f3a);
    let random_vertex = |rng: &mut ChaCha8Rng| -> [f64; 3] {
        [
            rng.gen_range(0.0..TAU),
            rng.gen_range(0.0..TAU),
            rng.gen_range(0.0..TAU),
        ]
    };

    for _ in 0..1000 {
        let n = rng.gen_range(2..6);
        let mut vs: Vec<[f64; 3]> = (0..n).map(|_| random_vertex(&mut rng)).collect();
        vs.push(vs[0]);
        let loop_path = PolyPath::new(vs).unwrap();
        pass &= spectral_flow(&loop_path, delta).unwrap() == 0;
    }

    for _ in 0..1000 {
        let a = random_vertex(&mut rng);
        let b = random_vertex(&mut rng);
        let c = random_vertex(&mut rng);
        let p1 = PolyPath::new(vec![a, b]).unwrap();
        let p2 = PolyPath::new(vec![b, c]).unwrap();
        let whole = p1.compose(&p2).unwrap();
        pass &= spectral_flow(&whole, delta).unwrap()
            == spectral_flow(&p1, delta).unwrap() + spectral_flow(&p2, delta).unwrap();
    }
    verdict(
        "6 (spectral flow: exit +1, 1000 loops, 1000 additivity pairs)",
        pass,
    );
}

#[test]
fn criterion_7_waveguide() {
    let q = |l: f64| ProductSpectrumQuery {
        surface_eigenvalues: vec![3.84],
        genus: 2,
        circle_l: l,
        count: 1,
    };
    let short = lambda1_star(&q(0.25)).unwrap();
    let long = lambda1_star(&q(2.0)).unwrap();
    let pass = (short - 3.84).abs() < 1e-12
        && spectrally_large(short, HYPERBOLIC_PRODUCT_S_TILDE)
        && (long - 0.25).abs() < 1e-12
        && !spectrally_large(long, HYPERBOLIC_PRODUCT_S_TILDE);
    verdict("7 (waveguide lambda_1* and verdicts)", pass);
}

#[test]
fn criterion_8_property_suites() {
    // Squared contraction vanishes on 200 random sparse cup forms.
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0ffee);
    let mut iota_squared_zero = true;
    for _ in 0..200 {
        let b1 = rng.gen_range(3..=8usize);
        let max_terms = 4.min(b1 * (b1 - 1) * (b1 - 2) / 6);
        let nterms = rng.gen_range(1..=max_terms);
        let mut terms: Vec<([usize; 3], i64)> = Vec::new();
        while terms.len() < nterms {
            let mut idx = [0usize; 3];
            idx[0] = rng.gen_range(1..=b1);
            idx[1] = rng.gen_range(1..=b1);
            idx[2] = rng.gen_range(1..=b1);
            if idx[0] == idx[1] || idx[0] == idx[2] || idx[1] == idx[2] {
                continue;
            }
            idx.sort();
            if terms.iter().any(|(t, _)| *t == idx) {
                continue;
            }
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-3..=3i64);
            }
            terms.push((idx, c));
        }
        let cup = CupForm::new(b1, terms).unwrap();
        for m in 6..=b1 as i64 {
            let outer = contraction_matrix(&cup, m - 3).unwrap();
            let inner = contraction_matrix(&cup, m).unwrap();
            iota_squared_zero &= outer.matmul(&inner).is_zero();
        }
    }

    // Tower count of the cone equals the total HM-bar dimension.
    let presets: Vec<SimplestTypeDatum> = vec![
        t3_flat_datum(),
        theta_datum(2).unwrap(),
        theta_datum(3).unwrap(),
    ];
    let towers_match = presets.iter().all(|d| {
        let hm = simplest_hm(d).unwrap();
        hm.tower_part.total_towers() == hm_bar(d.cup()).total_dim()
    });

    let sym_ok = sym_product_homology(3, 2).to_vec(0, 4) == vec![1, 6, 16, 6, 1];
    let palindromes = presets
        .iter()
        .all(|d| palindrome_check(&simplest_hm(d).unwrap().tower_part));

    verdict(
        "8 (iota^2 = 0, tower counts, Sym^2 Betti, palindromes)",
        iota_squared_zero && towers_match && sym_ok && palindromes,
    );
}
