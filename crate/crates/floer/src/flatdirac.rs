//! Closed-form spectral theory for the family of twisted Dirac operators
//! on the flat unit three-torus.
//!
//! The metric is fixed to ℝ³/ℤ³, so the dual lattice modes are 2πℤ³ and
//! the operator at holonomy β, shifted by a constant δ, has eigenvalues
//! ±|2πn + β| − δ with one eigenvalue per sign per lattice mode (the zero
//! mode carries the two-dimensional space of parallel spinors).

use num::complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

const TAU: f64 = 2.0 * PI;
const LOCUS_TOL: f64 = 1e-12;
const EIG_GROUP_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum DiracError {
    #[error("radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("perturbation not small: delta = {0} is outside (0, pi)")]
    PerturbationNotSmall(f64),
    #[error("path endpoint lies on the kernel locus")]
    EndpointOnLocus,
    #[error("path vertex lies on the kernel locus (ambiguous crossing)")]
    VertexOnLocus,
    #[error("polyline needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("consecutive vertices more than one fundamental domain apart")]
    SegmentTooLong,
    #[error("point parse error: {0}")]
    Parse(String),
}

/// Holonomy vector β ∈ ℝ³/2πℤ³, stored reduced to [0, 2π)³.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlatPoint {
    beta: [f64; 3],
}

impl FlatPoint {
    pub fn new(beta: [f64; 3]) -> Self {
        FlatPoint {
            beta: beta.map(|b| b.rem_euclid(TAU)),
        }
    }

    pub fn beta(&self) -> [f64; 3] {
        self.beta
    }

    /// Distance to the lattice 2πℤ³ (i.e. to the nearest lift of 0).
    pub fn dist_to_lattice(&self) -> f64 {
        dist_to_lattice(self.beta)
    }

    /// Parse `a,b,c` where each component may use a `pi` literal
    /// (`pi`, `-pi`, `0.5pi`, `2pi`).
    pub fn parse(s: &str) -> Result<Self, DiracError> {
        let v = parse_vec3(s)?;
        Ok(FlatPoint::new(v))
    }
}

fn dist_to_lattice(v: [f64; 3]) -> f64 {
    v.iter()
        .map(|&x| {
            let r = x.rem_euclid(TAU);
            r.min(TAU - r)
        })
        .map(|d| d * d)
        .sum::<f64>()
        .sqrt()
}

pub fn parse_component(s: &str) -> Result<f64, DiracError> {
    let t = s.trim();
    let bad = || DiracError::Parse(format!("bad component `{t}`"));
    if let Some(prefix) = t.strip_suffix("pi") {
        let p = prefix.trim();
        let coeff = match p {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => p.parse::<f64>().map_err(|_| bad())?,
        };
        Ok(coeff * PI)
    } else {
        t.parse::<f64>().map_err(|_| bad())
    }
}

pub fn parse_vec3(s: &str) -> Result<[f64; 3], DiracError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(DiracError::Parse(format!("expected 3 components in `{s}`")));
    }
    Ok([
        parse_component(parts[0])?,
        parse_component(parts[1])?,
        parse_component(parts[2])?,
    ])
}

/// Eigenvalues of D_β − δ within [−radius, radius], with multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumWindow {
    pub radius: f64,
    pub entries: Vec<(f64, usize)>,
}

/// All eigenvalues ±|2πn + β| − δ in the window, by lattice enumeration.
pub fn dirac_spectrum(
    p: &FlatPoint,
    delta: f64,
    radius: f64,
) -> Result<SpectrumWindow, DiracError> {
    if radius.is_nan() || radius <= 0.0 {
        return Err(DiracError::BadRadius(radius));
    }
    let beta = p.beta();
    let bound = radius + delta.abs();
    let mut raw: Vec<f64> = Vec::new();
    let n_max = ((bound + TAU) / TAU).ceil() as i64;
    for n0 in -n_max..=n_max {
        for n1 in -n_max..=n_max {
            for n2 in -n_max..=n_max {
                let v = [
                    TAU * n0 as f64 + beta[0],
                    TAU * n1 as f64 + beta[1],
                    TAU * n2 as f64 + beta[2],
                ];
                let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                if norm > bound {
                    continue;
                }
                for lam in [norm - delta, -norm - delta] {
                    if lam.abs() <= radius {
                        raw.push(lam);
                    }
                }
            }
        }
    }
    raw.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut entries: Vec<(f64, usize)> = Vec::new();
    for lam in raw {
        match entries.last_mut() {
            Some((v, m)) if (lam - *v).abs() <= EIG_GROUP_TOL => *m += 1,
            _ => entries.push((lam, 1)),
        }
    }
    Ok(SpectrumWindow { radius, entries })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocusMembership {
    Inside,
    On,
    Outside,
}

impl LocusMembership {
    pub fn as_str(&self) -> &'static str {
        match self {
            LocusMembership::Inside => "inside",
            LocusMembership::On => "on",
            LocusMembership::Outside => "outside",
        }
    }
}

/// Position of β relative to the kernel sphere dist(β, 2πℤ³) = δ.
pub fn kernel_locus_membership(p: &FlatPoint, delta: f64) -> Result<LocusMembership, DiracError> {
    if !(delta > 0.0 && delta < PI) {
        return Err(DiracError::PerturbationNotSmall(delta));
    }
    let d = p.dist_to_lattice();
    if (d - delta).abs() <= LOCUS_TOL {
        Ok(LocusMembership::On)
    } else if d < delta {
        Ok(LocusMembership::Inside)
    } else {
        Ok(LocusMembership::Outside)
    }
}

/// Continuous polyline lift in ℝ³.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyPath {
    vertices: Vec<[f64; 3]>,
}

impl PolyPath {
    pub fn new(vertices: Vec<[f64; 3]>) -> Result<Self, DiracError> {
        if vertices.len() < 2 {
            return Err(DiracError::TooFewVertices(vertices.len()));
        }
        for w in vertices.windows(2) {
            if (0..3).any(|i| (w[1][i] - w[0][i]).abs() > TAU) {
                return Err(DiracError::SegmentTooLong);
            }
        }
        Ok(PolyPath { vertices })
    }

    /// Parse `x,y,z ; x,y,z ; ...` with `pi` literals.
    pub fn parse(s: &str) -> Result<Self, DiracError> {
        let vertices: Result<Vec<[f64; 3]>, DiracError> = s.split(';').map(parse_vec3).collect();
        Self::new(vertices?)
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn start(&self) -> [f64; 3] {
        self.vertices[0]
    }

    pub fn end(&self) -> [f64; 3] {
        *self.vertices.last().expect("nonempty")
    }

    /// Concatenation; the other path must start where this one ends.
    pub fn compose(&self, other: &PolyPath) -> Result<PolyPath, DiracError> {
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        PolyPath::new(vertices)
    }
}

/// Signed count of kernel-sphere crossings along the polyline; crossing
/// from inside to outside counts +1.
///
/// The spheres around the lattice points are disjoint for δ < π, so the
/// signed count along a segment telescopes to the difference of the
/// inside/outside indicator at its endpoints.
pub fn spectral_flow(path: &PolyPath, delta: f64) -> Result<i64, DiracError> {
    if !(delta > 0.0 && delta < PI) {
        return Err(DiracError::PerturbationNotSmall(delta));
    }
    let level = |v: [f64; 3], endpoint: bool| -> Result<i64, DiracError> {
        let d = dist_to_lattice(v);
        if (d - delta).abs() <= LOCUS_TOL {
            Err(if endpoint {
                DiracError::EndpointOnLocus
            } else {
                DiracError::VertexOnLocus
            })
        } else {
            Ok(if d < delta { 0 } else { 1 })
        }
    };
    let n = path.vertices.len();
    let mut flow = 0;
    let mut prev = level(path.vertices[0], true)?;
    for (i, &v) in path.vertices.iter().enumerate().skip(1) {
        let cur = level(v, i == n - 1)?;
        flow += cur - prev;
        prev = cur;
    }
    Ok(flow)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinPoint {
    pub point: FlatPoint,
    pub side: LocusMembership,
    pub is_s0: bool,
}

/// The eight half-lattice points of {0, π}³ classified against the kernel
/// sphere; (0,0,0) is the distinguished spin point with parallel spinors.
pub fn spin_points(delta: f64) -> Result<Vec<SpinPoint>, DiracError> {
    if !(delta > 0.0 && delta < PI) {
        return Err(DiracError::PerturbationNotSmall(delta));
    }
    let mut out = Vec::with_capacity(8);
    for bits in 0..8u8 {
        let coord = |b: u8| if b != 0 { PI } else { 0.0 };
        let p = FlatPoint::new([coord(bits & 1), coord(bits & 2), coord(bits & 4)]);
        let side = kernel_locus_membership(&p, delta)?;
        out.push(SpinPoint {
            point: p,
            side,
            is_s0: bits == 0,
        });
    }
    Ok(out)
}

/// Kernel dimension of the hermitian 2×2 matrix [[a, z], [z̄, b]]:
/// 2 on the origin, 1 on the rest of the quadric ab − |z|² = 0, else 0.
pub fn hermitian2_stratum(a: f64, b: f64, z: Complex64) -> u8 {
    if a == 0.0 && b == 0.0 && z == Complex64::new(0.0, 0.0) {
        2
    } else if a * b - z.norm_sqr() == 0.0 {
        1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_spinor_kernel_at_origin() {
        let s = dirac_spectrum(&FlatPoint::new([0.0; 3]), 0.0, 1.0).unwrap();
        assert_eq!(s.entries, vec![(0.0, 2)]);
    }

    #[test]
    fn spectrum_at_half_lattice_point() {
        let s = dirac_spectrum(&FlatPoint::new([PI, 0.0, 0.0]), 0.0, 3.2).unwrap();
        // Modes n = 0 and n = (-1,0,0) both have |v| = pi.
        let smallest = s
            .entries
            .iter()
            .min_by(|a, b| a.0.abs().partial_cmp(&b.0.abs()).unwrap())
            .unwrap();
        assert!((smallest.0.abs() - PI).abs() < 1e-12);
        assert_eq!(smallest.1, 2);
        // Symmetric window: entries come in (lambda, -lambda) pairs.
        for (lam, m) in &s.entries {
            assert!(s
                .entries
                .iter()
                .any(|(l2, m2)| (l2 + lam).abs() < 1e-9 && m2 == m));
        }
    }

    #[test]
    fn kernel_point_on_sphere() {
        for delta in [0.1, 0.5, 3.0] {
            let s = dirac_spectrum(&FlatPoint::new([delta, 0.0, 0.0]), delta, 3.5).unwrap();
            assert!(s.entries.iter().any(|(l, _)| l.abs() < 1e-12));
        }
    }

    #[test]
    fn bad_radius_rejected() {
        assert!(matches!(
            dirac_spectrum(&FlatPoint::new([0.0; 3]), 0.0, 0.0),
            Err(DiracError::BadRadius(_))
        ));
    }

    #[test]
    fn locus_membership_examples() {
        let d = 0.3;
        let m = |b: [f64; 3]| kernel_locus_membership(&FlatPoint::new(b), d).unwrap();
        assert_eq!(m([0.0; 3]), LocusMembership::Inside);
        assert_eq!(m([0.3, 0.0, 0.0]), LocusMembership::On);
        assert_eq!(m([PI, PI, PI]), LocusMembership::Outside);
        assert!(matches!(
            kernel_locus_membership(&FlatPoint::new([0.0; 3]), 3.5),
            Err(DiracError::PerturbationNotSmall(_))
        ));
    }

    #[test]
    fn spectral_flow_examples() {
        let d = 0.3;
        let exit = PolyPath::new(vec![[0.0; 3], [PI, PI, PI]]).unwrap();
        assert_eq!(spectral_flow(&exit, d).unwrap(), 1);

        let loop_path =
            PolyPath::new(vec![[0.0; 3], [PI, 0.0, 0.0], [PI, PI, 0.0], [0.0; 3]]).unwrap();
        assert_eq!(spectral_flow(&loop_path, d).unwrap(), 0);

        let outside = PolyPath::new(vec![[PI, 0.0, 0.0], [PI, PI, 0.0]]).unwrap();
        assert_eq!(spectral_flow(&outside, d).unwrap(), 0);
    }

    #[test]
    fn on_locus_errors() {
        let d = 0.3;
        let bad_end = PolyPath::new(vec![[0.3, 0.0, 0.0], [PI, 0.0, 0.0]]).unwrap();
        assert_eq!(spectral_flow(&bad_end, d), Err(DiracError::EndpointOnLocus));
        let bad_mid = PolyPath::new(vec![[0.0; 3], [0.3, 0.0, 0.0], [PI, 0.0, 0.0]]).unwrap();
        assert_eq!(spectral_flow(&bad_mid, d), Err(DiracError::VertexOnLocus));
    }

    #[test]
    fn spin_point_classification() {
        let pts = spin_points(0.3).unwrap();
        assert_eq!(pts.len(), 8);
        let inside: Vec<&SpinPoint> = pts
            .iter()
            .filter(|p| p.side == LocusMembership::Inside)
            .collect();
        assert_eq!(inside.len(), 1);
        assert!(inside[0].is_s0);
        assert_eq!(pts.iter().filter(|p| p.is_s0).count(), 1);
        assert!(pts
            .iter()
            .filter(|p| !p.is_s0)
            .all(|p| p.side == LocusMembership::Outside));
    }

    #[test]
    fn hermitian_stratum_examples() {
        assert_eq!(hermitian2_stratum(0.0, 0.0, Complex64::new(0.0, 0.0)), 2);
        assert_eq!(hermitian2_stratum(1.0, 1.0, Complex64::new(1.0, 0.0)), 1);
        assert_eq!(hermitian2_stratum(1.0, -1.0, Complex64::new(0.0, 0.0)), 0);
    }

    #[test]
    fn point_parsing() {
        let p = FlatPoint::parse("pi,0,0.5pi").unwrap();
        assert!((p.beta()[0] - PI).abs() < 1e-15);
        assert_eq!(p.beta()[1], 0.0);
        assert!((p.beta()[2] - PI / 2.0).abs() < 1e-15);
        assert!(FlatPoint::parse("1,2").is_err());
        assert!(FlatPoint::parse("a,b,c").is_err());
        let neg = parse_component("-pi").unwrap();
        assert!((neg + PI).abs() < 1e-15);
    }

    #[test]
    fn lattice_periodicity() {
        let p = FlatPoint::new([1.0, 2.0, 3.0]);
        let q = FlatPoint::new([1.0 + TAU, 2.0, 3.0 - TAU]);
        assert_eq!(
            dirac_spectrum(&p, 0.2, 2.0).unwrap().entries,
            dirac_spectrum(&q, 0.2, 2.0).unwrap().entries
        );
    }
}
