//! Exact graded linear algebra on exterior algebras.
//!
//! The exterior algebra Λ*ℚ^{b₁} is handled through bitmask basis indices:
//! a k-subset S ⊆ {0,…,b₁−1} is a `u32` mask, and the basis of Λ^k is
//! ordered colexicographically, which is exactly the numeric order of the
//! masks. The triple cup form acts by contraction ι_ω with the Koszul sign
//! obtained by extracting the 3-subset to the front of the ordered subset.

use crate::linalg::{Matrix, Scalar};
use num_traits::FromPrimitive;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("cup form parse error at term {term}: {msg}")]
    Parse { term: usize, msg: String },
    #[error("cup form term ({i},{j},{k}) is not strictly increasing in 1..={b1}")]
    BadTriple {
        i: usize,
        j: usize,
        k: usize,
        b1: usize,
    },
    #[error("duplicate cup form triple ({0},{1},{2})")]
    DuplicateTriple(usize, usize, usize),
    #[error("degree {k} out of range 0..={b1}")]
    DegreeOutOfRange { k: i64, b1: usize },
    #[error("empty degree window")]
    EmptyWindow,
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// All k-subsets of {0..n-1} as bitmasks, in colexicographic order
/// (= increasing numeric order of the masks).
pub fn subsets_colex(n: usize, k: usize) -> Vec<u32> {
    let count = binomial(n, k);
    let mut out = Vec::with_capacity(count);
    if k > n {
        return out;
    }
    if k == 0 {
        out.push(0);
        return out;
    }
    // Gosper's hack: next-larger mask with the same popcount.
    let mut v: u64 = (1u64 << k) - 1;
    while out.len() < count {
        out.push(v as u32);
        let t = v | (v - 1);
        v = (t + 1) | (((!t & t.wrapping_add(1)) - 1) >> (v.trailing_zeros() + 1));
    }
    out
}

/// Position of `mask` within the colex ordering of its own cardinality class.
pub fn colex_rank(mask: u32) -> usize {
    let mut rank = 0;
    let mut i = 0;
    let mut m = mask;
    while m != 0 {
        let e = m.trailing_zeros() as usize;
        rank += binomial(e, i + 1);
        m &= m - 1;
        i += 1;
    }
    rank
}

/// Wedge of two basis multivectors. `None` when the index sets overlap;
/// otherwise the union mask and the sign of the shuffle.
pub fn wedge_masks(a: u32, b: u32) -> Option<(u32, i64)> {
    if a & b != 0 {
        return None;
    }
    // Count inversions: pairs (x in a, y in b) with x > y.
    let mut inv = 0u32;
    let mut m = a;
    while m != 0 {
        let e = m.trailing_zeros();
        let below = if e == 0 { 0 } else { b & ((1 << e) - 1) };
        inv += below.count_ones();
        m &= m - 1;
    }
    Some((a | b, if inv.is_multiple_of(2) { 1 } else { -1 }))
}

/// Finite-support sequence of nonnegative ranks indexed by integer degree.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GradedVectorSpace {
    ranks: BTreeMap<i64, usize>,
}

impl GradedVectorSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_ranks(lowest_degree: i64, ranks: &[usize]) -> Self {
        let mut v = Self::new();
        for (i, &r) in ranks.iter().enumerate() {
            v.set_rank(lowest_degree + i as i64, r);
        }
        v
    }

    pub fn set_rank(&mut self, degree: i64, rank: usize) {
        if rank == 0 {
            self.ranks.remove(&degree);
        } else {
            self.ranks.insert(degree, rank);
        }
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.ranks.get(&degree).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        let min = *self.ranks.keys().next()?;
        let max = *self.ranks.keys().next_back()?;
        Some((min, max))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.ranks.iter().map(|(&d, &r)| (d, r))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .map(|(&d, &r)| {
                if d.rem_euclid(2) == 0 {
                    r as i64
                } else {
                    -(r as i64)
                }
            })
            .sum()
    }

    /// Ranks as a dense vector over `lo..=hi`.
    pub fn to_vec(&self, lo: i64, hi: i64) -> Vec<usize> {
        (lo..=hi).map(|d| self.rank(d)).collect()
    }
}

/// Alternating trilinear integer form on ℤ^{b₁}, stored by its values on
/// strictly increasing index triples (0-based internally, 1-based in text).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CupForm {
    b1: usize,
    terms: Vec<([usize; 3], i64)>,
}

impl CupForm {
    pub fn zero(b1: usize) -> Self {
        CupForm {
            b1,
            terms: Vec::new(),
        }
    }

    /// Build from 1-based strictly increasing triples.
    pub fn new(b1: usize, terms: Vec<([usize; 3], i64)>) -> Result<Self, AlgebraError> {
        let mut seen = BTreeMap::new();
        let mut stored = Vec::new();
        for ([i, j, k], c) in terms {
            if !(1 <= i && i < j && j < k && k <= b1) {
                return Err(AlgebraError::BadTriple { i, j, k, b1 });
            }
            if seen.insert([i, j, k], ()).is_some() {
                return Err(AlgebraError::DuplicateTriple(i, j, k));
            }
            if c != 0 {
                stored.push(([i - 1, j - 1, k - 1], c));
            }
        }
        stored.sort_by_key(|(t, _)| *t);
        Ok(CupForm { b1, terms: stored })
    }

    /// Parse the text syntax `i,j,k:c; i,j,k:c; ...` (1-based indices).
    /// An empty or all-whitespace string is the zero form.
    pub fn parse(b1: usize, s: &str) -> Result<Self, AlgebraError> {
        let mut terms = Vec::new();
        for (tn, raw) in s.split(';').enumerate() {
            let t = raw.trim();
            if t.is_empty() {
                continue;
            }
            let (idx, coeff) = t.split_once(':').ok_or_else(|| AlgebraError::Parse {
                term: tn + 1,
                msg: format!("missing ':' in `{t}`"),
            })?;
            let parts: Vec<&str> = idx.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(AlgebraError::Parse {
                    term: tn + 1,
                    msg: format!("expected three indices in `{idx}`"),
                });
            }
            let mut ijk = [0usize; 3];
            for (slot, p) in ijk.iter_mut().zip(&parts) {
                *slot = p.parse().map_err(|_| AlgebraError::Parse {
                    term: tn + 1,
                    msg: format!("bad index `{p}`"),
                })?;
            }
            let c: i64 = coeff.trim().parse().map_err(|_| AlgebraError::Parse {
                term: tn + 1,
                msg: format!("bad coefficient `{}`", coeff.trim()),
            })?;
            terms.push((ijk, c));
        }
        Self::new(b1, terms)
    }

    pub fn b1(&self) -> usize {
        self.b1
    }

    /// Terms with 0-based triples.
    pub fn terms(&self) -> &[([usize; 3], i64)] {
        &self.terms
    }

    /// Value on the basis triple given by a 3-element mask.
    pub fn eval_mask(&self, mask: u32) -> i64 {
        debug_assert_eq!(mask.count_ones(), 3);
        let mut t = [0usize; 3];
        let mut m = mask;
        for slot in &mut t {
            *slot = m.trailing_zeros() as usize;
            m &= m - 1;
        }
        self.terms
            .iter()
            .find(|(s, _)| *s == t)
            .map_or(0, |(_, c)| *c)
    }

    /// Canonical text form, inverse of [`CupForm::parse`].
    pub fn to_text(&self) -> String {
        self.terms
            .iter()
            .map(|([i, j, k], c)| format!("{},{},{}:{}", i + 1, j + 1, k + 1, c))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Ranks of Λ*ℚ^{b₁}: binomial coefficients.
pub fn exterior_dims(b1: usize) -> GradedVectorSpace {
    let ranks: Vec<usize> = (0..=b1).map(|k| binomial(b1, k)).collect();
    GradedVectorSpace::from_ranks(0, &ranks)
}

/// Matrix of the contraction ι_ω : Λ^k → Λ^{k−3} in the colex bases.
///
/// ι_ω(e_S) = Σ_{T ⊆ S, |T|=3} sign(T within S) · ω(T) · e_{S∖T}, where the
/// sign is the Koszul sign of moving T (in order) to the front of S.
pub fn contraction_matrix_in<F>(cup: &CupForm, k: i64) -> Result<Matrix<F>, AlgebraError>
where
    F: Scalar + FromPrimitive,
{
    let b1 = cup.b1();
    if k < 0 || k > b1 as i64 {
        return Err(AlgebraError::DegreeOutOfRange { k, b1 });
    }
    let k = k as usize;
    if k < 3 {
        return Ok(Matrix::<F>::zeros(0, binomial(b1, k)));
    }
    let domain = subsets_colex(b1, k);
    let mut m = Matrix::<F>::zeros(binomial(b1, k - 3), binomial(b1, k));
    let triples: Vec<u32> = cup
        .terms()
        .iter()
        .map(|([i, j, k2], _)| (1 << i) | (1 << j) | (1 << k2))
        .collect();
    for (col, &s) in domain.iter().enumerate() {
        for (&t, (_, c)) in triples.iter().zip(cup.terms()) {
            if t & s != t {
                continue;
            }
            // Positions of the three elements of t within s.
            let mut psum = 0u32;
            let mut m2 = t;
            while m2 != 0 {
                let e = m2.trailing_zeros();
                let below = if e == 0 { 0 } else { s & ((1 << e) - 1) };
                psum += below.count_ones();
                m2 &= m2 - 1;
            }
            // Koszul sign for extracting t to the front: (-1)^{p1 + (p2-1) + (p3-2)}.
            let sign: i64 = if (psum + 3).is_multiple_of(2) { 1 } else { -1 };
            let row = colex_rank(s & !t);
            let add = F::from_i64(sign * c).expect("small integer fits in scalar");
            let v = m.at(row, col).clone() + add;
            m.set(row, col, v);
        }
    }
    Ok(m)
}

/// Contraction matrix over exact rationals.
pub fn contraction_matrix(cup: &CupForm, k: i64) -> Result<Matrix<crate::Rat>, AlgebraError> {
    contraction_matrix_in(cup, k)
}

/// Homology of (Λ*ℚ^{b₁}, ι_ω): rank at k is
/// dim ker(ι: Λ^k → Λ^{k−3}) − rank(ι: Λ^{k+3} → Λ^k).
pub fn contraction_homology(cup: &CupForm) -> GradedVectorSpace {
    let b1 = cup.b1() as i64;
    let ranks: Vec<usize> = (0..=b1)
        .map(|k| contraction_matrix(cup, k).expect("degree in range").rank())
        .collect();
    let mut out = GradedVectorSpace::new();
    for k in 0..=b1 {
        let dim = binomial(cup.b1(), k as usize);
        let ker = dim - ranks[k as usize];
        let im = if k + 3 <= b1 {
            ranks[(k + 3) as usize]
        } else {
            0
        };
        out.set_rank(k, ker - im);
    }
    out
}

/// Finite direct sum of towers 𝒯₊ and finite-length torsion ℚ[U]-modules.
///
/// A tower entry is the degree of its bottom element; the tower occupies
/// that degree and every second degree above it (U has degree −2). A
/// torsion entry (d, ℓ) is ℚ[U]/U^ℓ with its top element in degree d.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedUModule {
    towers: BTreeMap<i64, usize>,
    torsion: BTreeMap<(i64, u32), usize>,
}

impl GradedUModule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_tower(&mut self, bottom_degree: i64, multiplicity: usize) {
        if multiplicity > 0 {
            *self.towers.entry(bottom_degree).or_insert(0) += multiplicity;
        }
    }

    pub fn add_torsion(&mut self, top_degree: i64, u_length: u32, multiplicity: usize) {
        assert!(u_length > 0, "torsion summand must have positive U-length");
        if multiplicity > 0 {
            *self.torsion.entry((top_degree, u_length)).or_insert(0) += multiplicity;
        }
    }

    pub fn towers(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.towers.iter().map(|(&d, &m)| (d, m))
    }

    pub fn torsion(&self) -> impl Iterator<Item = (i64, u32, usize)> + '_ {
        self.torsion.iter().map(|(&(d, l), &m)| (d, l, m))
    }

    pub fn total_towers(&self) -> usize {
        self.towers.values().sum()
    }

    pub fn total_torsion(&self) -> usize {
        self.torsion.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.towers.is_empty() && self.torsion.is_empty()
    }

    pub fn shift(&self, s: i64) -> Self {
        GradedUModule {
            towers: self.towers.iter().map(|(&d, &m)| (d + s, m)).collect(),
            torsion: self
                .torsion
                .iter()
                .map(|(&(d, l), &m)| ((d + s, l), m))
                .collect(),
        }
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, m) in other.towers() {
            out.add_tower(d, m);
        }
        for (d, l, m) in other.torsion() {
            out.add_torsion(d, l, m);
        }
        out
    }

    pub fn max_tower_degree(&self) -> Option<i64> {
        self.towers.keys().next_back().copied()
    }

    /// Tower multiplicities over the occupied bottom-degree range,
    /// ascending, as (lowest_degree, multiplicities).
    pub fn tower_profile(&self) -> Option<(i64, Vec<usize>)> {
        let lo = *self.towers.keys().next()?;
        let hi = *self.towers.keys().next_back()?;
        let profile = (lo..=hi)
            .map(|d| self.towers.get(&d).copied().unwrap_or(0))
            .collect();
        Some((lo, profile))
    }

    /// Exact rank in each degree of `lo..=hi`, nonzero entries only.
    pub fn poincare_report(&self, lo: i64, hi: i64) -> Result<Vec<(i64, usize)>, AlgebraError> {
        if lo > hi {
            return Err(AlgebraError::EmptyWindow);
        }
        let mut out = Vec::new();
        for d in lo..=hi {
            let mut rank = 0;
            for (&b, &m) in &self.towers {
                if d >= b && (d - b) % 2 == 0 {
                    rank += m;
                }
            }
            for (&(t, l), &m) in &self.torsion {
                if d <= t && (t - d) % 2 == 0 && (t - d) / 2 < l as i64 {
                    rank += m;
                }
            }
            if rank > 0 {
                out.push((d, rank));
            }
        }
        Ok(out)
    }
}
