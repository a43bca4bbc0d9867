//! Beurling lower density of finite samples of discrete sets `Λ ⊂ ℝ²`,
//! lattice covolumes, and the finite-model probes behind the density
//! theorem: homogeneous-approximation residuals and the projection-trace
//! comparison.
//!
//! Points are pairs `(ω, x)` of frequency and time. Balls are Euclidean
//! with volume `v(r) = πr²`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use crate::error::{Error, Result};

mod plane;

pub use plane::{hap_residual, rs_trace_bounds, RsTraceReport, TfPlane};

/// Volume of the Euclidean disc of radius `r` in `ℝ²`.
pub fn ball_volume(r: f64) -> f64 {
    PI * r * r
}

/// A finite piece of a discrete set, fully specified inside the square
/// `max(|ω|, |x|) ≤ declared_extent`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<(f64, f64)>,
    declared_extent: f64,
}

impl PointSet {
    pub fn new(points: Vec<(f64, f64)>, declared_extent: f64) -> Result<Self> {
        if !(declared_extent >= 0.0) || !declared_extent.is_finite() {
            return Err(Error::Extent(format!("declared extent {declared_extent} must be finite and nonnegative")));
        }
        for (i, &(w, x)) in points.iter().enumerate() {
            if !w.is_finite() || !x.is_finite() {
                return Err(Error::NonFinite { index: i });
            }
            if w.abs().max(x.abs()) > declared_extent {
                return Err(Error::Extent(format!("point ({w}, {x}) lies outside extent {declared_extent}")));
            }
        }
        let mut sorted = points.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(format!("duplicate point ({}, {})", w[0].0, w[0].1)));
        }
        Ok(Self { points, declared_extent })
    }

    pub fn empty(declared_extent: f64) -> Result<Self> {
        Self::new(Vec::new(), declared_extent)
    }

    /// All points `j·u + k·v` of the lattice inside the extent square.
    pub fn lattice(u: (f64, f64), v: (f64, f64), declared_extent: f64) -> Result<Self> {
        let det = lattice_covolume(u, v)?;
        // |coefficient| ≤ extent·(|u|+|v|)/|det| bounds every point in the square
        let bound = (declared_extent * 2.0 * (norm(u) + norm(v)) / det).ceil() as i64 + 1;
        let mut points = Vec::new();
        for j in -bound..=bound {
            for k in -bound..=bound {
                let p = (j as f64 * u.0 + k as f64 * v.0, j as f64 * u.1 + k as f64 * v.1);
                if p.0.abs().max(p.1.abs()) <= declared_extent * (1.0 + 1e-12) {
                    points.push((p.0.clamp(-declared_extent, declared_extent), p.1.clamp(-declared_extent, declared_extent)));
                }
            }
        }
        Self::new(points, declared_extent)
    }

    /// The separable lattice `αℤ × βℤ`.
    pub fn rectangular(alpha: f64, beta: f64, declared_extent: f64) -> Result<Self> {
        Self::lattice((alpha, 0.0), (0.0, beta), declared_extent)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn declared_extent(&self) -> f64 {
        self.declared_extent
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `sΛ`, with the extent scaled accordingly.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::InvalidParameter(format!("scale factor {s} must be positive")));
        }
        Self::new(self.points.iter().map(|&(w, x)| (s * w, s * x)).collect(), s * self.declared_extent)
    }

    /// Reads `omega,x` pairs, one per line. Blank lines and lines starting
    /// with `#` are skipped; the extent is the sup-norm of the points unless
    /// given.
    pub fn read<R: Read>(reader: R, declared_extent: Option<f64>) -> Result<Self> {
        let mut points = Vec::new();
        for (i, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            points.push(parse_pair(t, i + 1)?);
        }
        let extent = declared_extent.unwrap_or_else(|| points.iter().fold(0.0, |m, &(w, x): &(f64, f64)| m.max(w.abs()).max(x.abs())));
        Self::new(points, extent)
    }

    pub fn from_file(path: &Path, declared_extent: Option<f64>) -> Result<Self> {
        Self::read(std::fs::File::open(path)?, declared_extent)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for &(w, x) in &self.points {
            writeln!(out, "{w},{x}").expect("writing to a String");
        }
        out
    }
}

/// Parses one `a,b` line of plain decimals.
pub fn parse_pair(line: &str, line_no: usize) -> Result<(f64, f64)> {
    let parse_err = |message: String| Error::Parse { line: line_no, message };
    let mut parts = line.split(',');
    let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(parse_err(format!("expected two comma-separated numbers, got {line:?}")));
    };
    let num = |s: &str| -> Result<f64> {
        let v: f64 = s.trim().parse().map_err(|e| parse_err(format!("{s:?}: {e}")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(parse_err(format!("{s:?} is not finite")))
        }
    };
    Ok((num(a)?, num(b)?))
}

fn norm(p: (f64, f64)) -> f64 {
    p.0.hypot(p.1)
}

/// `|det[u v]|`, the area of a fundamental cell of `uℤ + vℤ`.
pub fn lattice_covolume(u: (f64, f64), v: (f64, f64)) -> Result<f64> {
    let det = (u.0 * v.1 - u.1 * v.0).abs();
    let scale = norm(u) * norm(v);
    if !det.is_finite() || scale == 0.0 || det <= 1e-12 * scale {
        return Err(Error::DegenerateLattice);
    }
    Ok(det)
}

/// Whether the lattice passes the necessary density condition `vol ≤ 1`.
pub fn frame_possible(u: (f64, f64), v: (f64, f64)) -> Result<bool> {
    Ok(lattice_covolume(u, v)? <= 1.0 + 1e-12)
}

/// Centres at which balls are placed when minimising counts.
#[derive(Debug, Clone, PartialEq)]
pub enum CenterGrid {
    /// 21 × 21 centres spanning `[−(E − r_max), E − r_max]²`.
    Default,
    /// `per_side²` centres spanning `[−half_width, half_width]²`.
    Regular { per_side: usize, half_width: f64 },
    Explicit(Vec<(f64, f64)>),
}

impl CenterGrid {
    fn resolve(&self, extent: f64, r_max: f64) -> Result<Vec<(f64, f64)>> {
        let regular = |n: usize, h: f64| -> Vec<(f64, f64)> {
            let coord = |i: usize| if n == 1 { 0.0 } else { -h + 2.0 * h * i as f64 / (n - 1) as f64 };
            (0..n).flat_map(|i| (0..n).map(move |k| (coord(i), coord(k)))).collect()
        };
        let centers = match self {
            CenterGrid::Default => {
                let h = extent - r_max;
                if h < 0.0 {
                    return Err(Error::Extent(format!("radius {r_max} exceeds declared extent {extent}")));
                }
                regular(21, h)
            }
            CenterGrid::Regular { per_side, half_width } => {
                if *per_side == 0 || !(*half_width >= 0.0) {
                    return Err(Error::InvalidParameter("center grid needs at least one point and a nonnegative width".into()));
                }
                regular(*per_side, *half_width)
            }
            CenterGrid::Explicit(c) => {
                if c.is_empty() {
                    return Err(Error::InvalidParameter("empty center list".into()));
                }
                c.clone()
            }
        };
        for &(w, x) in &centers {
            if w.abs().max(x.abs()) + r_max > extent * (1.0 + 1e-12) {
                return Err(Error::Extent(format!(
                    "ball of radius {r_max} at ({w}, {x}) leaves the declared extent {extent}"
                )));
            }
        }
        Ok(centers)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub radii: Vec<f64>,
    pub nu_minus: Vec<usize>,
    pub estimates: Vec<f64>,
    /// Estimate at the largest radius.
    pub lower_density: f64,
    /// Whether `ν⁻` is nondecreasing along `radii`.
    pub monotone: bool,
    pub center_count: usize,
}

/// `ν⁻(r) = min_c card(Λ ∩ B_r(c))` over the centre grid, and `ν⁻(r)/πr²`.
pub fn lower_density(lam: &PointSet, radii: &[f64], centers: &CenterGrid) -> Result<DensityReport> {
    if radii.is_empty() {
        return Err(Error::InvalidParameter("no radii given".into()));
    }
    if radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("radii must be positive and strictly increasing".into()));
    }
    let r_max = *radii.last().expect("nonempty");
    let centers = centers.resolve(lam.declared_extent, r_max)?;

    let mut by_omega = lam.points.clone();
    by_omega.sort_by(|a, b| a.0.total_cmp(&b.0));
    let nu_minus: Vec<usize> = radii
        .iter()
        .map(|&r| {
            centers
                .iter()
                .map(|&(cw, cx)| {
                    let lo = by_omega.partition_point(|p| p.0 < cw - r);
                    let hi = by_omega.partition_point(|p| p.0 <= cw + r);
                    by_omega[lo..hi]
                        .iter()
                        .filter(|&&(w, x)| (w - cw).powi(2) + (x - cx).powi(2) <= r * r)
                        .count()
                })
                .min()
                .expect("centers nonempty")
        })
        .collect();
    let estimates: Vec<f64> = radii.iter().zip(&nu_minus).map(|(&r, &n)| n as f64 / ball_volume(r)).collect();
    Ok(DensityReport {
        radii: radii.to_vec(),
        monotone: nu_minus.windows(2).all(|w| w[0] <= w[1]),
        lower_density: *estimates.last().expect("nonempty"),
        nu_minus,
        estimates,
        center_count: centers.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_set_has_zero_density() {
        let rep = lower_density(&PointSet::empty(10.0).unwrap(), &[2.0, 5.0], &CenterGrid::Default).unwrap();
        assert_eq!(rep.nu_minus, vec![0, 0]);
        assert_eq!(rep.lower_density, 0.0);
    }

    #[test]
    fn integer_lattice_density_one() {
        let lam = PointSet::rectangular(1.0, 1.0, 60.0).unwrap();
        assert_eq!(lam.len(), 121 * 121);
        let rep = lower_density(&lam, &[10.0, 20.0, 40.0], &CenterGrid::Default).unwrap();
        assert!(rep.monotone);
        assert!((rep.lower_density - 1.0).abs() < 0.05, "{}", rep.lower_density);
    }

    #[test]
    fn half_lattice_density_four() {
        let lam = PointSet::rectangular(0.5, 0.5, 60.0).unwrap();
        let rep = lower_density(&lam, &[40.0], &CenterGrid::Default).unwrap();
        assert!((rep.lower_density - 4.0).abs() < 0.2, "{}", rep.lower_density);
    }

    #[test]
    fn extent_violations() {
        let lam = PointSet::rectangular(1.0, 1.0, 10.0).unwrap();
        assert!(matches!(lower_density(&lam, &[11.0], &CenterGrid::Default), Err(Error::Extent(_))));
        let grid = CenterGrid::Explicit(vec![(5.0, 0.0)]);
        assert!(matches!(lower_density(&lam, &[6.0], &grid), Err(Error::Extent(_))));
        assert!(PointSet::new(vec![(11.0, 0.0)], 10.0).is_err());
    }

    #[test]
    fn point_set_rejects_duplicates_and_nan() {
        assert!(PointSet::new(vec![(1.0, 2.0), (1.0, 2.0)], 5.0).is_err());
        assert!(matches!(PointSet::new(vec![(f64::NAN, 0.0)], 5.0), Err(Error::NonFinite { index: 0 })));
    }

    #[test]
    fn covolume_examples() {
        assert_eq!(lattice_covolume((1.0, 0.0), (0.0, 1.0)).unwrap(), 1.0);
        assert!(frame_possible((1.0, 0.0), (0.0, 1.0)).unwrap());
        assert!((lattice_covolume((0.5, 0.0), (0.0, 1.5)).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(lattice_covolume((2.0, 0.0), (1.0, 1.0)).unwrap(), 2.0);
        assert!(!frame_possible((2.0, 0.0), (1.0, 1.0)).unwrap());
        assert!(matches!(lattice_covolume((1.0, 2.0), (2.0, 4.0)), Err(Error::DegenerateLattice)));
        assert!(matches!(lattice_covolume((0.0, 0.0), (0.0, 1.0)), Err(Error::DegenerateLattice)));
    }

    #[test]
    fn skew_lattice_density_matches_covolume() {
        let lam = PointSet::lattice((1.0, 0.0), (0.5, 0.8), 50.0).unwrap();
        let rep = lower_density(&lam, &[30.0], &CenterGrid::Default).unwrap();
        assert!((rep.lower_density * 0.8 - 1.0).abs() < 0.05, "{}", rep.lower_density);
    }

    #[test]
    fn file_round_trip() {
        let lam = PointSet::new(vec![(0.5, -1.25), (3.0, 2.0)], 4.0).unwrap();
        let back = PointSet::read(lam.to_text().as_bytes(), Some(4.0)).unwrap();
        assert_eq!(back, lam);
        let auto = PointSet::read("# comment\n1,2\n\n-3,0.5\n".as_bytes(), None).unwrap();
        assert_eq!(auto.declared_extent(), 3.0);
        assert!(matches!(PointSet::read("1;2\n".as_bytes(), None), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(PointSet::read("1,2\n1,x\n".as_bytes(), None), Err(Error::Parse { line: 2, .. })));
    }
}
