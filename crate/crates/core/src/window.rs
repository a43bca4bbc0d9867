//! Named window generators.
//!
//! Every generator returns a unit-norm [`Signal`]. Windows are anchored at
//! sample 0 (the Gaussian is periodised around it) so that the atom
//! `M_m T_n φ` sits at time-frequency position `(m, n)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::signal::{symmetric_index, Signal};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    /// Unit mass at sample 0.
    Delta,
    /// `(δ₀ + δ₁)/√2`.
    TwoPoint,
    /// Indicator of `[0, n)`, normalised.
    Boxcar(usize),
    /// `exp(-π (t/width)²)` with `t` taken in `[-L/2, L/2)`, normalised.
    Gaussian(f64),
}

impl Window {
    pub fn generate(&self, len: usize) -> Result<Signal> {
        if len == 0 {
            return Err(Error::EmptySignal);
        }
        let raw: Vec<f64> = match *self {
            Window::Delta => (0..len).map(|t| if t == 0 { 1.0 } else { 0.0 }).collect(),
            Window::TwoPoint => {
                if len < 2 {
                    return Err(Error::InvalidParameter("twopoint needs L >= 2".into()));
                }
                (0..len).map(|t| if t < 2 { 1.0 } else { 0.0 }).collect()
            }
            Window::Boxcar(n) => {
                if n == 0 || n > len {
                    return Err(Error::InvalidParameter(format!("box({n}) needs 1 <= n <= L")));
                }
                (0..len).map(|t| if t < n { 1.0 } else { 0.0 }).collect()
            }
            Window::Gaussian(width) => {
                if !(width > 0.0) || !width.is_finite() {
                    return Err(Error::InvalidParameter(format!("gaussian width {width}")));
                }
                (0..len)
                    .map(|t| {
                        let s = symmetric_index(t, len) as f64 / width;
                        (-std::f64::consts::PI * s * s).exp()
                    })
                    .collect()
            }
        };
        Signal::from_real(&raw)?.normalized()
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::Delta => write!(f, "delta"),
            Window::TwoPoint => write!(f, "twopoint"),
            Window::Boxcar(n) => write!(f, "box({n})"),
            Window::Gaussian(w) => write!(f, "gaussian({w})"),
        }
    }
}

impl FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let arg = |name: &str| -> Option<&str> {
            s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')
        };
        let bad = || Error::InvalidParameter(format!("unknown window '{s}'"));
        match s {
            "delta" => Ok(Window::Delta),
            "twopoint" => Ok(Window::TwoPoint),
            _ => {
                if let Some(n) = arg("box") {
                    n.trim().parse().map(Window::Boxcar).map_err(|_| bad())
                } else if let Some(w) = arg("gaussian") {
                    w.trim().parse().map(Window::Gaussian).map_err(|_| bad())
                } else {
                    Err(bad())
                }
            }
        }
    }
}
