//! Floer computation engines: U-localized homology from the cup form, the
//! long-exact-sequence splitting of a filtered torus of flat connections,
//! and the mapping-cone computation for manifolds of the simplest type.

use crate::algebra::{binomial, contraction_matrix, CupForm, GradedUModule, GradedVectorSpace};
use crate::linalg::Matrix;
use crate::{Rat, RatMatrix};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FloerError {
    #[error("inclusion matrix at degree {degree}: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    ShapeMismatch {
        degree: i64,
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("not simplest-type-consistent: {0}")]
    NotSimplestType(String),
    #[error("cannot normalize grading: no towers")]
    NoTowers,
    #[error("datum parse error: {0}")]
    Parse(String),
}

/// Full input to the simplest-type computation: the cup form on H¹, the
/// homology of the filtration bottom 𝕋₋, and the matrices of
/// i_* : H_k(𝕋₋) → Λ^k ℚ^{b₁} in the colex bases.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplestTypeDatum {
    b1: usize,
    cup: CupForm,
    h_minus: GradedVectorSpace,
    inclusion: BTreeMap<i64, RatMatrix>,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct DatumRepr {
    b1: usize,
    cup: String,
    h_minus: BTreeMap<i64, usize>,
    inclusion: BTreeMap<i64, Vec<Vec<String>>>,
    label: String,
}

impl SimplestTypeDatum {
    pub fn new(
        b1: usize,
        cup: CupForm,
        h_minus: GradedVectorSpace,
        inclusion: BTreeMap<i64, RatMatrix>,
        label: impl Into<String>,
    ) -> Result<Self, FloerError> {
        let datum = SimplestTypeDatum {
            b1,
            cup,
            h_minus,
            inclusion,
            label: label.into(),
        };
        datum.validate()?;
        Ok(datum)
    }

    fn validate(&self) -> Result<(), FloerError> {
        for (&k, m) in &self.inclusion {
            let rows = if (0..=self.b1 as i64).contains(&k) {
                binomial(self.b1, k as usize)
            } else {
                0
            };
            let cols = self.h_minus.rank(k);
            if m.rows() != rows || m.cols() != cols {
                return Err(FloerError::ShapeMismatch {
                    degree: k,
                    expected_rows: rows,
                    expected_cols: cols,
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
        }
        // Every degree with nonzero rank needs a matrix.
        for (k, r) in self.h_minus.iter() {
            if r > 0 && !self.inclusion.contains_key(&k) {
                return Err(FloerError::ShapeMismatch {
                    degree: k,
                    expected_rows: binomial(self.b1, k.max(0) as usize),
                    expected_cols: r,
                    rows: 0,
                    cols: 0,
                });
            }
        }
        Ok(())
    }

    pub fn b1(&self) -> usize {
        self.b1
    }

    pub fn cup(&self) -> &CupForm {
        &self.cup
    }

    pub fn h_minus(&self) -> &GradedVectorSpace {
        &self.h_minus
    }

    pub fn inclusion(&self, degree: i64) -> Option<&RatMatrix> {
        self.inclusion.get(&degree)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn to_json(&self) -> String {
        let repr = DatumRepr {
            b1: self.b1,
            cup: self.cup.to_text(),
            h_minus: self.h_minus.iter().collect(),
            inclusion: self
                .inclusion
                .iter()
                .map(|(&k, m)| {
                    let rows = (0..m.rows())
                        .map(|i| (0..m.cols()).map(|j| m.at(i, j).to_string()).collect())
                        .collect();
                    (k, rows)
                })
                .collect(),
            label: self.label.clone(),
        };
        serde_json::to_string_pretty(&repr).expect("datum serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, FloerError> {
        let repr: DatumRepr =
            serde_json::from_str(s).map_err(|e| FloerError::Parse(e.to_string()))?;
        let cup =
            CupForm::parse(repr.b1, &repr.cup).map_err(|e| FloerError::Parse(e.to_string()))?;
        let mut h_minus = GradedVectorSpace::new();
        for (k, r) in repr.h_minus {
            h_minus.set_rank(k, r);
        }
        let mut inclusion = BTreeMap::new();
        for (k, rows) in repr.inclusion {
            let parsed: Result<Vec<Vec<Rat>>, FloerError> = rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|s| {
                            Rat::from_str(s)
                                .map_err(|e| FloerError::Parse(format!("bad rational `{s}`: {e}")))
                        })
                        .collect()
                })
                .collect();
            let parsed = parsed?;
            let cols = h_minus.rank(k);
            let m = if parsed.is_empty() {
                Matrix::zeros(binomial(repr.b1, k.max(0) as usize), cols)
            } else {
                Matrix::from_rows(parsed)
            };
            inclusion.insert(k, m);
        }
        Self::new(repr.b1, cup, h_minus, inclusion, repr.label)
    }
}

/// The split pieces of the long exact sequence of (𝕋, 𝕋₋):
/// I⁻ = im i_*, I⁺ = H(𝕋)/I⁻, and E_k = ker(i_* at k−1).
#[derive(Clone, Debug)]
pub struct LesSplit {
    pub i_plus: GradedVectorSpace,
    pub i_minus: GradedVectorSpace,
    pub e: GradedVectorSpace,
    /// Columns: basis of I⁻ inside Λ^k.
    minus_basis: BTreeMap<i64, RatMatrix>,
    /// Columns: unit-vector representatives completing I⁻ to a basis of Λ^k.
    plus_basis: BTreeMap<i64, RatMatrix>,
}

impl LesSplit {
    pub fn minus_basis(&self, degree: i64) -> Option<&RatMatrix> {
        self.minus_basis.get(&degree)
    }

    pub fn plus_basis(&self, degree: i64) -> Option<&RatMatrix> {
        self.plus_basis.get(&degree)
    }
}

/// Split the long exact sequence of the pair into I⁺, I⁻ and E.
pub fn split_les(datum: &SimplestTypeDatum) -> Result<LesSplit, FloerError> {
    let b1 = datum.b1();
    let mut i_plus = GradedVectorSpace::new();
    let mut i_minus = GradedVectorSpace::new();
    let mut e = GradedVectorSpace::new();
    let mut minus_basis = BTreeMap::new();
    let mut plus_basis = BTreeMap::new();
    let mut inclusion_rank = BTreeMap::new();

    for k in 0..=b1 as i64 {
        let dim = binomial(b1, k as usize);
        let mb = match datum.inclusion(k) {
            Some(a) => a.column_space_basis(),
            None => Matrix::zeros(dim, 0),
        };
        inclusion_rank.insert(k, mb.cols());
        i_minus.set_rank(k, mb.cols());
        i_plus.set_rank(k, dim - mb.cols());
        // Extend the I⁻ basis by unit vectors: pivots of [basis | id] past
        // the basis block pick the complement representatives.
        let (_, pivots) = mb.hstack(&Matrix::identity(dim)).rref();
        let complement: Vec<usize> = pivots
            .iter()
            .filter(|&&p| p >= mb.cols())
            .map(|&p| p - mb.cols())
            .collect();
        let id = RatMatrix::identity(dim);
        plus_basis.insert(k, id.select_columns(&complement));
        minus_basis.insert(k, mb);
    }
    for k in 0..=b1 as i64 + 1 {
        let prev_rank = datum.h_minus().rank(k - 1);
        let ker = prev_rank - inclusion_rank.get(&(k - 1)).copied().unwrap_or(0);
        e.set_rank(k, ker);
    }
    Ok(LesSplit {
        i_plus,
        i_minus,
        e,
        minus_basis,
        plus_basis,
    })
}

/// Outcome of the simplest-type mapping-cone computation, in the relative
/// grading with the topmost tower at degree 0.
pub struct SimplestHm {
    /// tower_part ⊕ reduced.
    pub total: GradedUModule,
    /// One tower per basis vector of ker f and coker f.
    pub tower_part: GradedUModule,
    /// Torsion ℚ[U]/U summands, one per basis vector of E.
    pub reduced: GradedUModule,
}

/// Homology of the cone of the induced contraction f: I⁺ → I⁻, together
/// with the reduced part E⟨−2⟩.
///
/// Tower bookkeeping: ker(f_k) contributes at degree k−2 and coker(f)_m at
/// degree m; both are then shifted so the topmost tower sits at 0.
pub fn simplest_hm(datum: &SimplestTypeDatum) -> Result<SimplestHm, FloerError> {
    let split = split_les(datum)?;
    let b1 = datum.b1() as i64;

    // Consistency gate: the contraction must kill I⁻ in every degree.
    for k in 0..=b1 {
        if let Some(a) = datum.inclusion(k) {
            if a.cols() == 0 {
                continue;
            }
            let iota = contraction_matrix(datum.cup(), k).expect("degree in range");
            if iota.rows() > 0 && !iota.matmul(a).is_zero() {
                return Err(FloerError::NotSimplestType(format!(
                    "contraction does not vanish on i_*(H_{}(T-))",
                    k
                )));
            }
        }
    }

    let mut tower_part = GradedUModule::new();
    let mut rank_into: BTreeMap<i64, usize> = BTreeMap::new();

    for k in 0..=b1 {
        let plus = split.plus_basis(k).expect("degree covered");
        if plus.cols() == 0 {
            continue;
        }
        let target_dim = split.i_minus.rank(k - 3);
        if k < 3 || target_dim == 0 {
            // f_k is the zero map; the whole of I⁺_k is kernel. A nonzero
            // image with nowhere to land is a consistency failure.
            if k >= 3 {
                let iota = contraction_matrix(datum.cup(), k).expect("degree in range");
                if !iota.matmul(plus).is_zero() {
                    return Err(FloerError::NotSimplestType(format!(
                        "contraction image of I+ at degree {k} does not lie in I-"
                    )));
                }
            }
            tower_part.add_tower(k - 2, plus.cols());
            continue;
        }
        let iota = contraction_matrix(datum.cup(), k).expect("degree in range");
        let minus_target = split.minus_basis(k - 3).expect("degree covered");
        let mut f_cols = Vec::with_capacity(plus.cols());
        for j in 0..plus.cols() {
            let w = iota.mul_vec(&plus.column(j));
            let x = minus_target.solve(&w).ok_or_else(|| {
                FloerError::NotSimplestType(format!(
                    "contraction image of I+ at degree {k} does not lie in I-"
                ))
            })?;
            f_cols.push(x);
        }
        let f = RatMatrix::from_columns(target_dim, f_cols);
        let rank = f.rank();
        tower_part.add_tower(k - 2, f.cols() - rank);
        *rank_into.entry(k - 3).or_insert(0) += rank;
    }
    for (m, r) in split.i_minus.iter() {
        let coker = r - rank_into.get(&m).copied().unwrap_or(0);
        tower_part.add_tower(m, coker);
    }

    let mut reduced = GradedUModule::new();
    for (k, r) in split.e.iter() {
        reduced.add_torsion(k - 2, 1, r);
    }

    let (tower_part, reduced) = normalize_grading(&tower_part, &reduced, GradingMode::Relative)?;
    let total = tower_part.sum(&reduced);
    Ok(SimplestHm {
        total,
        tower_part,
        reduced,
    })
}

/// U-localized monopole homology: one U-period of ker d/im d, i.e. the
/// contraction homology of the cup form.
pub fn hm_bar(cup: &CupForm) -> GradedVectorSpace {
    crate::algebra::contraction_homology(cup)
}

/// Relative homologies H_*(𝕋_j, 𝕋_{j−1}) of a spectral-flow filtration,
/// listed from j = 0 (where the j = 0 entry is H_*(𝕋₀) itself).
#[derive(Clone, Debug)]
pub struct FiltrationDatum {
    pub relative_homologies: Vec<GradedVectorSpace>,
}

/// E¹ page of the filtration spectral sequence: one tower per generator of
/// H_*(𝕋_j, 𝕋_{j−1}), placed at (homological degree) − 2j.
pub fn e1_page(filtration: &FiltrationDatum) -> GradedUModule {
    let mut out = GradedUModule::new();
    for (j, h) in filtration.relative_homologies.iter().enumerate() {
        for (d, r) in h.iter() {
            out.add_tower(d - 2 * j as i64, r);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradingMode {
    /// Topmost tower at degree 0.
    Relative,
    /// Topmost tower at degree −1.
    PaperAbsolute,
}

/// Shift so the topmost tower sits at 0 (relative) or −1 (absolute); the
/// reduced part is shifted by the same amount.
pub fn normalize_grading(
    tower_part: &GradedUModule,
    reduced: &GradedUModule,
    mode: GradingMode,
) -> Result<(GradedUModule, GradedUModule), FloerError> {
    let top = match tower_part.max_tower_degree() {
        Some(t) => t,
        None if mode == GradingMode::Relative => return Ok((tower_part.clone(), reduced.clone())),
        None => return Err(FloerError::NoTowers),
    };
    let target = match mode {
        GradingMode::Relative => 0,
        GradingMode::PaperAbsolute => -1,
    };
    let s = target - top;
    Ok((tower_part.shift(s), reduced.shift(s)))
}

/// True iff the tower multiplicities over the occupied degree range read
/// the same in both directions.
pub fn palindrome_check(tower_part: &GradedUModule) -> bool {
    match tower_part.tower_profile() {
        Some((_, profile)) => {
            let mut rev = profile.clone();
            rev.reverse();
            rev == profile
        }
        None => true,
    }
}
