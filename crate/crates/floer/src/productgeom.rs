//! S¹×Σ geometry: waveguide coexact spectra, the spectrally-large
//! certificate, symmetric-product homology, and the preset data feeding
//! the mapping-cone computation (flat T³, Bolza, Klein).

use crate::algebra::{
    binomial, colex_rank, subsets_colex, wedge_masks, CupForm, GradedVectorSpace,
};
use crate::floercore::{FloerError, SimplestTypeDatum};
use crate::{Rat, RatMatrix};
use num::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeomError {
    #[error("circle parameter must be positive, got {0}")]
    BadCircleLength(f64),
    #[error("surface eigenvalue list is empty")]
    EmptySpectrum,
    #[error("surface eigenvalues must be positive and sorted ascending")]
    BadSpectrum,
    #[error("theta divisor singular: no smooth preset for genus {0} >= 4")]
    ThetaDivisorSingular(usize),
    #[error("unsupported genus {0} for theta datum (need 2 or 3)")]
    UnsupportedGenus(usize),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error(transparent)]
    Floer(#[from] FloerError),
}

/// Named surface with a known first nonzero Laplace eigenvalue.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSpectralData {
    pub name: String,
    pub genus: usize,
    pub lambda1: f64,
    pub hyperelliptic: bool,
    pub source: String,
}

/// Built-in surface presets. Bring and Fricke-Macbeath are query-only:
/// their theta divisors are singular, so no datum is constructed for them.
pub fn builtin_presets() -> Vec<SurfaceSpectralData> {
    vec![
        SurfaceSpectralData {
            name: "bolza".into(),
            genus: 2,
            lambda1: 3.84,
            hyperelliptic: true,
            source: "Bolza surface y^2 = x^5 - x; lambda_1 ~ 3.84 (Strohmaier-Uski)".into(),
        },
        SurfaceSpectralData {
            name: "klein".into(),
            genus: 3,
            lambda1: 2.68,
            hyperelliptic: false,
            source: "Klein quartic x^3 y + y^3 z + z^3 x = 0; lambda_1 ~ 2.68 (Cook)".into(),
        },
        SurfaceSpectralData {
            name: "bring".into(),
            genus: 4,
            lambda1: 1.92,
            hyperelliptic: false,
            source: "Bring curve; lambda_1 ~ 1.92 (Cook); query-only".into(),
        },
        SurfaceSpectralData {
            name: "fricke-macbeath".into(),
            genus: 7,
            lambda1: 1.23,
            hyperelliptic: false,
            source:
                "Fricke-Macbeath surface; lambda_1 in [1.23, 1.26] (lower bound stored); query-only"
                    .into(),
        },
    ]
}

pub fn find_preset(name: &str) -> Result<SurfaceSpectralData, GeomError> {
    builtin_presets()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| GeomError::UnknownPreset(name.to_string()))
}

/// Query for the coexact 1-form spectrum of S¹×Σ with S¹ = ℝ/2πLℤ.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductSpectrumQuery {
    /// Known coexact eigenvalues λ_n of the surface, ascending, all > 0.
    pub surface_eigenvalues: Vec<f64>,
    pub genus: usize,
    pub circle_l: f64,
    pub count: usize,
}

impl ProductSpectrumQuery {
    pub fn from_preset(preset: &SurfaceSpectralData, circle_l: f64, count: usize) -> Self {
        ProductSpectrumQuery {
            surface_eigenvalues: vec![preset.lambda1],
            genus: preset.genus,
            circle_l,
            count,
        }
    }

    fn validate(&self) -> Result<(), GeomError> {
        if self.circle_l.is_nan() || self.circle_l <= 0.0 {
            return Err(GeomError::BadCircleLength(self.circle_l));
        }
        if self.surface_eigenvalues.is_empty() {
            return Err(GeomError::EmptySpectrum);
        }
        if self.surface_eigenvalues.windows(2).any(|w| w[0] > w[1])
            || self
                .surface_eigenvalues
                .iter()
                .any(|&l| l.is_nan() || l <= 0.0)
        {
            return Err(GeomError::BadSpectrum);
        }
        Ok(())
    }
}

/// First `count` coexact eigenvalues of the product, with multiplicity:
/// the surface branch {λ_n + m²/L², m ∈ ℤ} and the harmonic branch
/// {m²/L² with multiplicity 2g, m ≠ 0}, counting m and −m separately.
pub fn coexact_spectrum(q: &ProductSpectrumQuery) -> Result<Vec<(f64, usize)>, GeomError> {
    q.validate()?;
    let inv_l2 = 1.0 / (q.circle_l * q.circle_l);
    let lam_max = *q.surface_eigenvalues.last().expect("nonempty");
    let mut cutoff = lam_max.max(inv_l2);
    loop {
        let mut raw: Vec<(f64, usize)> = Vec::new();
        for &lam in &q.surface_eigenvalues {
            let mut m = 0i64;
            loop {
                let v = lam + (m * m) as f64 * inv_l2;
                if v > cutoff {
                    break;
                }
                raw.push((v, if m == 0 { 1 } else { 2 }));
                m += 1;
            }
        }
        let mut m = 1i64;
        loop {
            let v = (m * m) as f64 * inv_l2;
            if v > cutoff {
                break;
            }
            // m and -m each contribute 2g harmonic-branch eigenforms.
            raw.push((v, 4 * q.genus));
            m += 1;
        }
        raw.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut grouped: Vec<(f64, usize)> = Vec::new();
        for (v, m) in raw {
            match grouped.last_mut() {
                Some((gv, gm)) if (v - *gv).abs() <= 1e-12 => *gm += m,
                _ => grouped.push((v, m)),
            }
        }
        let total: usize = grouped.iter().map(|(_, m)| m).sum();
        if total >= q.count {
            let mut out = Vec::new();
            let mut remaining = q.count;
            for (v, m) in grouped {
                if remaining == 0 {
                    break;
                }
                let take = m.min(remaining);
                out.push((v, take));
                remaining -= take;
            }
            return Ok(out);
        }
        cutoff *= 2.0;
    }
}

/// Head of the coexact spectrum: min(λ₁(Σ), 1/L²).
pub fn lambda1_star(q: &ProductSpectrumQuery) -> Result<f64, GeomError> {
    q.validate()?;
    Ok(q.surface_eigenvalues[0].min(1.0 / (q.circle_l * q.circle_l)))
}

/// The spectrally-large inequality λ₁* > −½ inf s̃.
pub fn spectrally_large(lambda1_star: f64, s_tilde_inf: f64) -> bool {
    lambda1_star > -0.5 * s_tilde_inf
}

/// s̃ for a product of a circle with a hyperbolic surface: the Ricci
/// eigenvalues are (0, −1, −1), so the sum of the two least is −2.
pub const HYPERBOLIC_PRODUCT_S_TILDE: f64 = -2.0;

/// Rational Betti numbers of Symⁿ(Σ_g): coefficient extraction of
/// (1 + t·u)^{2g} / ((1 − u)(1 − t²u)) at u^n.
pub fn sym_product_homology(genus: usize, n: usize) -> GradedVectorSpace {
    let mut out = GradedVectorSpace::new();
    for i in 0..=2 * n as i64 {
        let mut rank: u128 = 0;
        let mut c = 0i64;
        loop {
            let a = i - 2 * c;
            if a < 0 {
                break;
            }
            if a + c <= n as i64 {
                rank += binomial(2 * genus, a as usize) as u128;
            }
            c += 1;
        }
        out.set_rank(i, rank as usize);
    }
    out
}

fn rat(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// The cup form z ∪ x₁ ∪ y₁ + … + z ∪ x_g ∪ y_g on basis z, x₁, y₁, …, x_g, y_g.
fn product_cup(genus: usize) -> CupForm {
    let terms = (0..genus).map(|i| ([1, 2 * i + 2, 2 * i + 3], 1)).collect();
    CupForm::new(2 * genus + 1, terms).expect("valid preset cup form")
}

/// A multivector as a coefficient map from basis masks.
type MultiVec = BTreeMap<u32, Rat>;

fn wedge(a: &MultiVec, b: &MultiVec) -> MultiVec {
    let mut out = MultiVec::new();
    for (&ma, ca) in a {
        for (&mb, cb) in b {
            if let Some((m, sign)) = wedge_masks(ma, mb) {
                let term = ca.clone() * cb.clone() * rat(sign);
                let e = out.entry(m).or_insert_with(|| rat(0));
                *e = e.clone() + term;
            }
        }
    }
    out.retain(|_, c| !num_traits::Zero::is_zero(c));
    out
}

fn multivec_to_column(v: &MultiVec, b1: usize, k: usize) -> Vec<Rat> {
    let mut col = vec![rat(0); binomial(b1, k)];
    for (&m, c) in v {
        debug_assert_eq!(m.count_ones() as usize, k);
        col[colex_rank(m)] = c.clone();
    }
    col
}

/// Fundamental class of the surface inside the Jacobian: w = Σ xᵢ∧yᵢ.
fn omega_class(genus: usize) -> MultiVec {
    let mut w = MultiVec::new();
    for i in 0..genus {
        let mask = (1u32 << (2 * i + 1)) | (1 << (2 * i + 2));
        w.insert(mask, rat(1));
    }
    w
}

/// Preset datum for S¹×Σ_g with 𝕋₋ a disk bundle over the theta divisor,
/// so H(𝕋₋) = H(Sym^{g−1} Σ_g). Supported for g = 2, 3 only.
pub fn theta_datum(genus: usize) -> Result<SimplestTypeDatum, GeomError> {
    match genus {
        2 | 3 => {}
        g if g >= 4 => return Err(GeomError::ThetaDivisorSingular(g)),
        g => return Err(GeomError::UnsupportedGenus(g)),
    }
    let b1 = 2 * genus + 1;
    let h_minus = sym_product_homology(genus, genus - 1);
    let w = omega_class(genus);
    let mut inclusion: BTreeMap<i64, RatMatrix> = BTreeMap::new();

    // Degree 0: the point class.
    inclusion.insert(0, RatMatrix::identity(1));

    // Degree 1: H_1(Sigma) maps onto span(x_i, y_i), missing the circle class.
    let h1_cols: Vec<Vec<Rat>> = (1..b1)
        .map(|i| {
            let mut v = MultiVec::new();
            v.insert(1u32 << i, rat(1));
            multivec_to_column(&v, b1, 1)
        })
        .collect();
    inclusion.insert(1, RatMatrix::from_columns(b1, h1_cols));

    match genus {
        2 => {
            // Degree 2: the surface fundamental class w.
            let col = multivec_to_column(&w, b1, 2);
            inclusion.insert(2, RatMatrix::from_columns(binomial(b1, 2), vec![col]));
        }
        3 => {
            // Degree 2: Lambda^2 H_1(Sigma) identically, plus the extra
            // class mapping to zero.
            let mut cols: Vec<Vec<Rat>> = Vec::new();
            for mask in subsets_colex(b1, 2) {
                if mask & 1 != 0 {
                    continue; // involves the circle class
                }
                let mut v = MultiVec::new();
                v.insert(mask, rat(1));
                cols.push(multivec_to_column(&v, b1, 2));
            }
            cols.push(vec![rat(0); binomial(b1, 2)]);
            inclusion.insert(2, RatMatrix::from_columns(binomial(b1, 2), cols));

            // Degree 3: x -> x /\ w for x in H_1(Sigma).
            let mut cols3: Vec<Vec<Rat>> = Vec::new();
            for i in 1..b1 {
                let mut x = MultiVec::new();
                x.insert(1u32 << i, rat(1));
                cols3.push(multivec_to_column(&wedge(&x, &w), b1, 3));
            }
            inclusion.insert(3, RatMatrix::from_columns(binomial(b1, 3), cols3));

            // Degree 4: the class w^2 / 2.
            let w2 = wedge(&w, &w);
            let half: MultiVec = w2
                .iter()
                .map(|(&m, c)| (m, c.clone() * rat_frac(1, 2)))
                .collect();
            inclusion.insert(
                4,
                RatMatrix::from_columns(binomial(b1, 4), vec![multivec_to_column(&half, b1, 4)]),
            );
        }
        _ => unreachable!(),
    }

    Ok(SimplestTypeDatum::new(
        b1,
        product_cup(genus),
        h_minus,
        inclusion,
        match genus {
            2 => "bolza",
            _ => "klein",
        },
    )?)
}

/// Datum for the flat three-torus: 𝕋₋ is the ball bounded by the small
/// kernel sphere, so H(𝕋₋) = H(point).
pub fn t3_flat_datum() -> SimplestTypeDatum {
    let cup = CupForm::new(3, vec![([1, 2, 3], 1)]).expect("valid cup form");
    let mut h_minus = GradedVectorSpace::new();
    h_minus.set_rank(0, 1);
    let mut inclusion = BTreeMap::new();
    inclusion.insert(0, RatMatrix::identity(1));
    SimplestTypeDatum::new(3, cup, h_minus, inclusion, "t3-flat").expect("valid preset")
}
