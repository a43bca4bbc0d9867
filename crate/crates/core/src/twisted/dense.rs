//! Box-backed storage for one-dimensional twisted sequences.

use num_complex::Complex64;

use super::{twist, LatticeIndex, TwistedSequence};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Values on the box `[j0, j0+nj) × [k0, k0+nk)`, row-major in `j`.
#[derive(Debug, Clone)]
pub(crate) struct DenseSeq {
    pub j0: i64,
    pub k0: i64,
    pub nj: usize,
    pub nk: usize,
    pub data: Vec<Complex64>,
}

/// Boxes larger than this multiple of the support (plus slack) stay sparse.
const FILL_FACTOR: usize = 16;
const MAX_AREA: usize = 50_000_000;

impl DenseSeq {
    pub fn empty() -> Self {
        Self {
            j0: 0,
            k0: 0,
            nj: 0,
            nk: 0,
            data: Vec::new(),
        }
    }

    pub fn identity() -> Self {
        Self {
            j0: 0,
            k0: 0,
            nj: 1,
            nk: 1,
            data: vec![Complex64::new(1.0, 0.0)],
        }
    }

    pub fn try_from_seq(s: &TwistedSequence) -> Option<Self> {
        debug_assert_eq!(s.dim(), 1);
        if s.is_empty() {
            return Some(Self::empty());
        }
        let (mut jlo, mut jhi, mut klo, mut khi) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for (i, _) in s.entries() {
            jlo = jlo.min(i.j[0]);
            jhi = jhi.max(i.j[0]);
            klo = klo.min(i.k[0]);
            khi = khi.max(i.k[0]);
        }
        let nj = usize::try_from(jhi - jlo + 1).ok()?;
        let nk = usize::try_from(khi - klo + 1).ok()?;
        let area = nj.checked_mul(nk)?;
        if area > FILL_FACTOR * s.len() + 4096 || area > MAX_AREA {
            return None;
        }
        let mut out = Self {
            j0: jlo,
            k0: klo,
            nj,
            nk,
            data: vec![ZERO; area],
        };
        for (i, v) in s.entries() {
            let p = out.pos(i.j[0], i.k[0]);
            out.data[p] = *v;
        }
        Some(out)
    }

    fn pos(&self, j: i64, k: i64) -> usize {
        (j - self.j0) as usize * self.nk + (k - self.k0) as usize
    }

    pub fn to_seq(&self, gamma: f64) -> TwistedSequence {
        let mut s = TwistedSequence::zero(1, gamma);
        s.entries = self
            .nonzeros()
            .map(|(j, k, v)| (LatticeIndex::new1(j, k), v))
            .collect();
        s
    }

    pub fn nonzeros(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        self.data.iter().enumerate().filter(|(_, v)| **v != ZERO).map(move |(p, v)| {
            (self.j0 + (p / self.nk) as i64, self.k0 + (p % self.nk) as i64, *v)
        })
    }

    pub fn l1_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).sum()
    }

    /// `self ♮ right`: the outer loop runs over the nonzeros of `self`, the
    /// inner loop over the box of `right` with one phase row per entry.
    pub fn conv(&self, right: &DenseSeq, gamma: f64) -> DenseSeq {
        if self.data.is_empty() || right.data.is_empty() {
            return Self::empty();
        }
        let left: Vec<(i64, i64, Complex64)> = self.nonzeros().collect();
        if left.is_empty() {
            return Self::empty();
        }
        let mut out = DenseSeq {
            j0: self.j0 + right.j0,
            k0: self.k0 + right.k0,
            nj: self.nj + right.nj - 1,
            nk: self.nk + right.nk - 1,
            data: Vec::new(),
        };
        out.data = vec![ZERO; out.nj * out.nk];
        let mut phase_row = vec![ZERO; right.nj];
        for (l, m, av) in left {
            // phase depends on the right factor's first index times m
            for (pj, ph) in phase_row.iter_mut().enumerate() {
                *ph = av * twist(gamma, (right.j0 + pj as i64) * m);
            }
            for pj in 0..right.nj {
                let ph = phase_row[pj];
                let src = &right.data[pj * right.nk..(pj + 1) * right.nk];
                let j = right.j0 + pj as i64 + l;
                let k_start = right.k0 + m;
                let base = out.pos(j, k_start);
                for (dst, bv) in out.data[base..base + right.nk].iter_mut().zip(src) {
                    *dst += ph * bv;
                }
            }
        }
        out
    }

    /// `self += c · other`, growing the box as needed.
    pub fn add_scaled(&mut self, other: &DenseSeq, c: Complex64) {
        if other.data.is_empty() {
            return;
        }
        if self.data.is_empty() {
            *self = other.clone();
            self.data.iter_mut().for_each(|v| *v *= c);
            return;
        }
        let j0 = self.j0.min(other.j0);
        let k0 = self.k0.min(other.k0);
        let j1 = (self.j0 + self.nj as i64).max(other.j0 + other.nj as i64);
        let k1 = (self.k0 + self.nk as i64).max(other.k0 + other.nk as i64);
        if j0 != self.j0 || k0 != self.k0 || j1 != self.j0 + self.nj as i64 || k1 != self.k0 + self.nk as i64 {
            let mut grown = DenseSeq {
                j0,
                k0,
                nj: (j1 - j0) as usize,
                nk: (k1 - k0) as usize,
                data: Vec::new(),
            };
            grown.data = vec![ZERO; grown.nj * grown.nk];
            for pj in 0..self.nj {
                let base = grown.pos(self.j0 + pj as i64, self.k0);
                grown.data[base..base + self.nk].copy_from_slice(&self.data[pj * self.nk..(pj + 1) * self.nk]);
            }
            *self = grown;
        }
        for pj in 0..other.nj {
            let base = self.pos(other.j0 + pj as i64, other.k0);
            for (dst, v) in self.data[base..base + other.nk].iter_mut().zip(&other.data[pj * other.nk..(pj + 1) * other.nk]) {
                *dst += c * v;
            }
        }
    }

    /// Crops border rows and columns of total `ℓ¹` mass at most `budget`.
    pub fn trim(&mut self, budget: f64) {
        if self.data.is_empty() {
            return;
        }
        let rows: Vec<f64> = self.data.chunks(self.nk).map(|r| r.iter().map(|v| v.norm()).sum()).collect();
        let mut cols = vec![0.0; self.nk];
        for r in self.data.chunks(self.nk) {
            cols.iter_mut().zip(r).for_each(|(c, v)| *c += v.norm());
        }
        let (jlo, jhi) = keep_range(&rows, budget / 2.0);
        let (klo, khi) = keep_range(&cols, budget / 2.0);
        if (jlo, jhi, klo, khi) == (0, self.nj, 0, self.nk) {
            return;
        }
        if jlo >= jhi || klo >= khi {
            *self = Self::empty();
            return;
        }
        let nk = khi - klo;
        let mut data = Vec::with_capacity((jhi - jlo) * nk);
        for pj in jlo..jhi {
            data.extend_from_slice(&self.data[pj * self.nk + klo..pj * self.nk + khi]);
        }
        *self = DenseSeq {
            j0: self.j0 + jlo as i64,
            k0: self.k0 + klo as i64,
            nj: jhi - jlo,
            nk,
            data,
        };
    }
}

/// Largest index window whose complement, taken from both ends, has mass at
/// most `budget`.
fn keep_range(mass: &[f64], budget: f64) -> (usize, usize) {
    let (mut lo, mut hi, mut dropped) = (0, mass.len(), 0.0);
    while lo < hi {
        let take_front = mass[lo] <= mass[hi - 1];
        let m = if take_front { mass[lo] } else { mass[hi - 1] };
        if dropped + m > budget {
            break;
        }
        dropped += m;
        if take_front {
            lo += 1;
        } else {
            hi -= 1;
        }
    }
    (lo, hi)
}
