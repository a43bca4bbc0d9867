//! Finite signals on the cyclic group of order `L`.

use std::f64::consts::PI;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A length-`L` sequence of complex samples with cyclic indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<Complex64>,
}

impl Signal {
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySignal);
        }
        if let Some(index) = samples.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { samples })
    }

    pub fn from_real(samples: &[f64]) -> Result<Self> {
        Self::new(samples.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); len])
    }

    /// Unit mass at sample `at` (reduced mod `len`).
    pub fn delta(len: usize, at: usize) -> Result<Self> {
        let mut s = Self::zeros(len)?;
        s.samples[at % len] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// Sample at a cyclic index.
    pub fn at(&self, t: i64) -> Complex64 {
        self.samples[t.rem_euclid(self.len() as i64) as usize]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self, other⟩ = Σ self[t]·conj(other[t])`, linear in the first slot.
    pub fn inner(&self, other: &Signal) -> Result<Complex64> {
        self.check_len(other.len())?;
        Ok(inner(&self.samples, &other.samples))
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if self.len() != len {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: len,
            });
        }
        Ok(())
    }

    pub fn scale(&self, c: Complex64) -> Signal {
        Signal {
            samples: self.samples.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn normalized(&self) -> Result<Signal> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroWindow);
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn add(&self, other: &Signal) -> Result<Signal> {
        self.check_len(other.len())?;
        Ok(Signal {
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Signal) -> Result<Signal> {
        self.check_len(other.len())?;
        Ok(Signal {
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a - b).collect(),
        })
    }

    /// Largest pointwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Signal) -> Result<f64> {
        self.check_len(other.len())?;
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

impl Index<usize> for Signal {
    type Output = Complex64;

    fn index(&self, t: usize) -> &Complex64 {
        &self.samples[t]
    }
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

/// `e^{2πi·num/den}` with the numerator reduced first so large products stay exact.
pub(crate) fn root_of_unity(num: i64, den: usize) -> Complex64 {
    let r = num.rem_euclid(den as i64) as f64 / den as f64;
    Complex64::from_polar(1.0, 2.0 * PI * r)
}

/// `e^{2πi·x}` with `x` reduced mod 1.
pub(crate) fn cis_turns(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x.rem_euclid(1.0))
}

/// Symmetric representative of `i` mod `len` in `[-len/2, len/2)`.
pub fn symmetric_index(i: usize, len: usize) -> i64 {
    let i = (i % len) as i64;
    let l = len as i64;
    if 2 * i >= l {
        i - l
    } else {
        i
    }
}
