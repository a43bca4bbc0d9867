//! Submultiplicative weights and discrete modulation-space norms.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::signal::{symmetric_index, Signal};
use crate::tfcore::stft;
use crate::window::Window;

/// The weight families `(1+|ω|+|x|)^a`, `(1+|ω|)^a`, `e^{|x|^b}` and `v ≡ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSpec {
    PolynomialSum { exponent: f64 },
    PolynomialFreq { exponent: f64 },
    SubexpTime { exponent: f64 },
    Constant,
}

impl WeightSpec {
    pub fn polynomial_sum(exponent: f64) -> Result<Self> {
        check_positive(exponent)?;
        Ok(Self::PolynomialSum { exponent })
    }

    pub fn polynomial_freq(exponent: f64) -> Result<Self> {
        check_positive(exponent)?;
        Ok(Self::PolynomialFreq { exponent })
    }

    pub fn subexp_time(exponent: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent < 1.0) {
            return Err(Error::InvalidParameter(format!("subexponential exponent {exponent} not in (0,1)")));
        }
        Ok(Self::SubexpTime { exponent })
    }

    /// Re-check parameters of a value built directly from the enum.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::PolynomialSum { exponent } | Self::PolynomialFreq { exponent } => check_positive(exponent),
            Self::SubexpTime { exponent } => Self::subexp_time(exponent).map(|_| ()),
            Self::Constant => Ok(()),
        }
    }

    pub fn eval(&self, omega: f64, x: f64) -> f64 {
        match *self {
            Self::PolynomialSum { exponent } => (1.0 + omega.abs() + x.abs()).powf(exponent),
            Self::PolynomialFreq { exponent } => (1.0 + omega.abs()).powf(exponent),
            Self::SubexpTime { exponent } => x.abs().powf(exponent).exp(),
            Self::Constant => 1.0,
        }
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PolynomialSum { exponent } => write!(f, "poly({exponent})"),
            Self::PolynomialFreq { exponent } => write!(f, "poly-freq({exponent})"),
            Self::SubexpTime { exponent } => write!(f, "subexp({exponent})"),
            Self::Constant => write!(f, "const"),
        }
    }
}

/// Parses `const`, `poly(s)`, `poly-freq(s)` and `subexp(b)`.
impl FromStr for WeightSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "const" {
            return Ok(Self::Constant);
        }
        let bad = || Error::InvalidParameter(format!("unknown weight {s:?}"));
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let arg: f64 = rest.strip_suffix(')').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        match name.trim() {
            "poly" => Self::polynomial_sum(arg),
            "poly-freq" => Self::polynomial_freq(arg),
            "subexp" => Self::subexp_time(arg),
            _ => Err(bad()),
        }
    }
}

fn check_positive(exponent: f64) -> Result<()> {
    if !(exponent > 0.0) || !exponent.is_finite() {
        return Err(Error::InvalidParameter(format!("weight exponent {exponent} must be positive")));
    }
    Ok(())
}

/// Checked evaluation.
pub fn weight_eval(w: &WeightSpec, omega: f64, x: f64) -> Result<f64> {
    w.validate()?;
    Ok(w.eval(omega, x))
}

/// A weight restricted to a lattice: `ṽ(j, k) = v(j·freq_scale, k·time_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeWeight {
    pub weight: WeightSpec,
    pub freq_scale: f64,
    pub time_scale: f64,
}

impl LatticeWeight {
    pub fn new(weight: WeightSpec, freq_scale: f64, time_scale: f64) -> Self {
        Self {
            weight,
            freq_scale,
            time_scale,
        }
    }

    /// Euclidean lengths are used when `j`, `k` are vectors.
    pub fn eval(&self, j: &[i64], k: &[i64]) -> f64 {
        let len = |v: &[i64]| v.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().sqrt();
        self.weight.eval(len(j) * self.freq_scale, len(k) * self.time_scale)
    }
}

/// Default analysis window for [`m1v_norm`]: unit-norm Gaussian of width `√L`.
pub fn default_window(len: usize) -> Result<Signal> {
    Window::Gaussian((len as f64).sqrt()).generate(len)
}

/// `Σ_{m,n} |V_γ f(m,n)| · v(m̃, ñ)` with `m̃, ñ` the symmetric representatives
/// in `[-L/2, L/2)`.
pub fn m1v_norm(f: &Signal, w: &WeightSpec, gamma_window: &Signal) -> Result<f64> {
    w.validate()?;
    if gamma_window.norm_sqr() == 0.0 {
        return Err(Error::ZeroWindow);
    }
    let grid = stft(f, gamma_window)?;
    let len = f.len();
    let mut total = 0.0;
    for n in 0..len {
        let x = symmetric_index(n, len) as f64;
        for m in 0..len {
            let omega = symmetric_index(m, len) as f64;
            total += grid.get(m, n).norm() * w.eval(omega, x);
        }
    }
    Ok(total)
}
