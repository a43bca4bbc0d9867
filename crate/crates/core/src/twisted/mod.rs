//! The twisted convolution algebra `(ℓ¹(ℤ^{2d}), ♮_γ, *_γ)`.
//!
//! ```text
//! (a ♮ b)_{jk} = Σ_{l,m} a_{lm} b_{(j-l)(k-m)} e^{-2πiγ (j-l)·m}
//! (a^*)_{jk}   = conj(a_{(-j)(-k)}) e^{-2πiγ j·k}
//! ```

mod dense;
mod operator;
mod rep;
mod wiener;

pub use operator::{
    extreme_eigenvalues, l1_spectral_radius, spectral_radius_l2, spectral_radius_l2_auto, truncate,
    L1RadiusEstimate, TruncatedOperator,
};
pub use rep::rep_pi;
pub use wiener::{wiener_invert, WienerInverse};

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modspace::LatticeWeight;
use crate::signal::cis_turns;
use dense::DenseSeq;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// An index `(j, k) ∈ ℤ^d × ℤ^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeIndex {
    pub j: Vec<i64>,
    pub k: Vec<i64>,
}

impl LatticeIndex {
    pub fn new(j: Vec<i64>, k: Vec<i64>) -> Self {
        Self { j, k }
    }

    pub fn new1(j: i64, k: i64) -> Self {
        Self { j: vec![j], k: vec![k] }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            j: vec![0; dim],
            k: vec![0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.j.len()
    }

    pub fn neg(&self) -> Self {
        Self {
            j: self.j.iter().map(|x| -x).collect(),
            k: self.k.iter().map(|x| -x).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            j: self.j.iter().zip(&other.j).map(|(a, b)| a + b).collect(),
            k: self.k.iter().zip(&other.k).map(|(a, b)| a + b).collect(),
        }
    }

    /// Largest coordinate modulus.
    pub fn radius(&self) -> i64 {
        self.j.iter().chain(&self.k).map(|x| x.abs()).max().unwrap_or(0)
    }
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `e^{-2πiγ·n}`.
pub(crate) fn twist(gamma: f64, n: i64) -> Complex64 {
    cis_turns(-gamma * n as f64)
}

/// A finitely supported element of the twisted convolution algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedSequence {
    dim: usize,
    gamma: f64,
    entries: BTreeMap<LatticeIndex, Complex64>,
}

impl TwistedSequence {
    /// The zero element.
    pub fn zero(dim: usize, gamma: f64) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self {
            dim,
            gamma,
            entries: BTreeMap::new(),
        }
    }

    /// The unit `e = δ_{(0,0)}`.
    pub fn identity(dim: usize, gamma: f64) -> Self {
        let mut s = Self::zero(dim, gamma);
        s.entries.insert(LatticeIndex::zero(dim), Complex64::new(1.0, 0.0));
        s
    }

    /// `δ_{(j,k)}` in dimension one.
    pub fn delta(gamma: f64, j: i64, k: i64) -> Self {
        let mut s = Self::zero(1, gamma);
        s.entries.insert(LatticeIndex::new1(j, k), Complex64::new(1.0, 0.0));
        s
    }

    pub fn from_entries<I>(dim: usize, gamma: f64, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LatticeIndex, Complex64)>,
    {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma {gamma}")));
        }
        let mut s = Self::zero(dim, gamma);
        for (idx, v) in entries {
            if idx.j.len() != dim || idx.k.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: idx.j.len().max(idx.k.len()),
                });
            }
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidParameter("non-finite coefficient".into()));
            }
            s.add_at(idx, v);
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&LatticeIndex, &Complex64)> {
        self.entries.iter()
    }

    pub fn get(&self, idx: &LatticeIndex) -> Complex64 {
        self.entries.get(idx).copied().unwrap_or(ZERO)
    }

    pub fn get1(&self, j: i64, k: i64) -> Complex64 {
        self.get(&LatticeIndex::new1(j, k))
    }

    /// Adds `v` at `idx`, dropping the entry if it becomes exactly zero.
    pub fn add_at(&mut self, idx: LatticeIndex, v: Complex64) {
        let slot = self.entries.entry(idx).or_insert(ZERO);
        *slot += v;
        if *slot == ZERO {
            self.entries.retain(|_, z| *z != ZERO);
        }
    }

    /// Largest coordinate modulus over the support.
    pub fn support_radius(&self) -> i64 {
        self.entries.keys().map(LatticeIndex::radius).max().unwrap_or(0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut s = Self::zero(self.dim, self.gamma);
        if c != ZERO {
            s.entries = self.entries.iter().map(|(i, v)| (i.clone(), v * c)).filter(|(_, v)| *v != ZERO).collect();
        }
        s
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut s = self.clone();
        for (i, v) in &other.entries {
            s.add_at(i.clone(), *v);
        }
        Ok(s)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Drops entries with modulus at most `threshold`.
    pub fn pruned(&self, threshold: f64) -> Self {
        let mut s = self.clone();
        s.entries.retain(|_, v| v.norm() > threshold);
        s
    }

    pub fn l1_norm(&self) -> f64 {
        self.entries.values().map(|v| v.norm()).sum()
    }

    /// `Σ |a_{jk}| ṽ(j,k)`.
    pub fn weighted_norm(&self, w: &LatticeWeight) -> f64 {
        self.entries.iter().map(|(i, v)| v.norm() * w.eval(&i.j, &i.k)).sum()
    }

    /// `ℓ¹` distance to `other`.
    pub fn l1_distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.l1_norm())
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        if (self.gamma - other.gamma).abs() > 1e-14 {
            return Err(Error::GammaMismatch {
                left: self.gamma,
                right: other.gamma,
            });
        }
        Ok(())
    }

    /// `a = a^*` up to `tol` in `ℓ¹`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.l1_distance(&self.involution()).map(|d| d <= tol).unwrap_or(false)
    }

    /// `self ♮ other`.
    pub fn conv(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.is_empty() || other.is_empty() {
            return Ok(Self::zero(self.dim, self.gamma));
        }
        if self.dim == 1 {
            if let (Some(a), Some(b)) = (DenseSeq::try_from_seq(self), DenseSeq::try_from_seq(other)) {
                return Ok(a.conv(&b, self.gamma).to_seq(self.gamma));
            }
        }
        let mut acc: HashMap<LatticeIndex, Complex64> = HashMap::new();
        for (ai, av) in &self.entries {
            for (bi, bv) in &other.entries {
                let phase = twist(self.gamma, dot(&bi.j, &ai.k));
                *acc.entry(ai.add(bi)).or_insert(ZERO) += av * bv * phase;
            }
        }
        let mut s = Self::zero(self.dim, self.gamma);
        s.entries = acc.into_iter().filter(|(_, v)| *v != ZERO).collect();
        Ok(s)
    }

    /// `self^{*γ}`.
    pub fn involution(&self) -> Self {
        let mut s = Self::zero(self.dim, self.gamma);
        s.entries = self
            .entries
            .iter()
            .map(|(i, v)| (i.neg(), v.conj() * twist(self.gamma, dot(&i.j, &i.k))))
            .collect();
        s
    }

    /// `self^{♮n}`, with `self^{♮0} = e`.
    pub fn power(&self, n: usize) -> Self {
        let mut out = Self::identity(self.dim, self.gamma);
        for _ in 0..n {
            out = self.conv(&out).expect("same algebra");
        }
        out
    }
}

impl fmt::Display for TwistedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[γ={}", self.gamma)?;
        for (i, v) in &self.entries {
            write!(f, " {:?},{:?}:{}", i.j, i.k, v)?;
        }
        write!(f, "]")
    }
}

/// `a ♮_γ b`.
pub fn twisted_conv(a: &TwistedSequence, b: &TwistedSequence) -> Result<TwistedSequence> {
    a.conv(b)
}

/// `a^{*_γ}`.
pub fn twisted_involution(a: &TwistedSequence) -> TwistedSequence {
    a.involution()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modspace::WeightSpec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample(gamma: f64, seed: u64) -> TwistedSequence {
        let mut s = TwistedSequence::zero(1, gamma);
        let mut x = seed;
        for j in -2..=2 {
            for k in -2..=2 {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let u = (x >> 11) as f64 / (1u64 << 53) as f64;
                let v = ((x >> 3) % 1000) as f64 / 1000.0;
                if u > 0.4 {
                    s.add_at(LatticeIndex::new1(j, k), c(u - 0.7, v - 0.5));
                }
            }
        }
        s
    }

    fn generic_conv(a: &TwistedSequence, b: &TwistedSequence) -> TwistedSequence {
        // direct transcription of the defining double sum
        let mut out = TwistedSequence::zero(1, a.gamma());
        for (ai, av) in a.entries() {
            for (bi, bv) in b.entries() {
                let (l, m) = (ai.j[0], ai.k[0]);
                let (p, q) = (bi.j[0], bi.k[0]);
                let (j, k) = (l + p, m + q);
                out.add_at(LatticeIndex::new1(j, k), av * bv * twist(a.gamma(), (j - l) * m));
            }
        }
        out
    }

    #[test]
    fn unit_is_two_sided() {
        let a = sample(0.37, 3);
        let e = TwistedSequence::identity(1, 0.37);
        assert!(a.conv(&e).unwrap().l1_distance(&a).unwrap() < 1e-15);
        assert!(e.conv(&a).unwrap().l1_distance(&a).unwrap() < 1e-15);
    }

    #[test]
    fn half_twist_anticommutes_generators() {
        let x = TwistedSequence::delta(0.5, 1, 0);
        let y = TwistedSequence::delta(0.5, 0, 1);
        let xy = x.conv(&y).unwrap();
        let yx = y.conv(&x).unwrap();
        assert!(xy.l1_distance(&TwistedSequence::delta(0.5, 1, 1)).unwrap() < 1e-15);
        assert!(yx.l1_distance(&TwistedSequence::delta(0.5, 1, 1).scale(c(-1.0, 0.0))).unwrap() < 1e-15);
    }

    #[test]
    fn involution_examples() {
        let e = TwistedSequence::identity(1, 0.5);
        assert_eq!(e.involution(), e);
        let a = TwistedSequence::delta(0.5, 1, 1).involution();
        assert!((a.get1(-1, -1) - c(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(a.len(), 1);
        for seed in 0..10 {
            let s = sample(0.618, seed);
            assert!(s.involution().involution().l1_distance(&s).unwrap() < 1e-14);
        }
    }

    #[test]
    fn dense_and_sparse_paths_agree() {
        for seed in 0..8 {
            let a = sample(std::f64::consts::FRAC_1_SQRT_2, seed);
            let b = sample(std::f64::consts::FRAC_1_SQRT_2, seed + 100);
            let fast = a.conv(&b).unwrap();
            let slow = generic_conv(&a, &b);
            assert!(fast.l1_distance(&slow).unwrap() < 1e-13);
        }
    }

    #[test]
    fn far_apart_supports_use_sparse_path() {
        let a = TwistedSequence::delta(0.3, 100_000, -7).add(&TwistedSequence::delta(0.3, -100_000, 2)).unwrap();
        let b = TwistedSequence::delta(0.3, 3, 50_000);
        let got = a.conv(&b).unwrap();
        assert!(got.l1_distance(&generic_conv(&a, &b)).unwrap() < 1e-12);
    }

    #[test]
    fn young_bounds() {
        let w = LatticeWeight::new(WeightSpec::polynomial_sum(2.0).unwrap(), 0.5, 0.25);
        for seed in 0..20 {
            let a = sample(0.41, seed);
            let b = sample(0.41, seed + 50);
            let ab = a.conv(&b).unwrap();
            assert!(ab.l1_norm() <= a.l1_norm() * b.l1_norm() + 1e-13);
            assert!(ab.weighted_norm(&w) <= a.weighted_norm(&w) * b.weighted_norm(&w) + 1e-13);
        }
    }

    #[test]
    fn higher_dimension_conv() {
        let g = 0.3;
        let a = TwistedSequence::from_entries(
            2,
            g,
            vec![
                (LatticeIndex::new(vec![1, 0], vec![0, 1]), c(1.0, 0.0)),
                (LatticeIndex::new(vec![0, 0], vec![0, 0]), c(0.5, 0.0)),
            ],
        )
        .unwrap();
        let b = TwistedSequence::from_entries(2, g, vec![(LatticeIndex::new(vec![0, 2], vec![1, 0]), c(0.0, 1.0))]).unwrap();
        let ab = a.conv(&b).unwrap();
        // phase e^{-2πiγ (0,2)·(0,1)} = e^{-2πi·0.6}
        let want = c(0.0, 1.0) * twist(g, 2);
        assert!((ab.get(&LatticeIndex::new(vec![1, 2], vec![1, 1])) - want).norm() < 1e-15);
        let abc = ab.conv(&a).unwrap();
        let a_bc = a.conv(&b.conv(&a).unwrap()).unwrap();
        assert!(abc.l1_distance(&a_bc).unwrap() < 1e-14);
    }

    #[test]
    fn mismatches_are_errors() {
        let a = TwistedSequence::identity(1, 0.5);
        let b = TwistedSequence::identity(1, 0.25);
        assert!(matches!(a.conv(&b), Err(Error::GammaMismatch { .. })));
        let d2 = TwistedSequence::identity(2, 0.5);
        assert!(matches!(a.conv(&d2), Err(Error::DimensionMismatch { .. })));
        assert!(TwistedSequence::from_entries(1, 0.5, vec![(LatticeIndex::new(vec![0, 0], vec![0]), c(1.0, 0.0))]).is_err());
    }
}
