//! Gabor systems `{M_{mb} T_{na} φ}` on `ℂ^L` with lattice steps dividing `L`.

mod frame;
mod janssen;
mod trace;

pub use frame::{dual_window, frame_bounds, frame_operator, FrameBounds, FrameOperator, FRAME_TOLERANCE};
pub use janssen::{janssen, JanssenRep};
pub use trace::{density_trace_probe, normalized_trace, TraceProbePoint};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::signal::Signal;
use crate::tfcore::tf_shift;

/// A window together with a time step `a` and frequency step `b`, both dividing `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaborSystem {
    window: Signal,
    time_step: usize,
    freq_step: usize,
}

impl GaborSystem {
    pub fn new(window: Signal, time_step: usize, freq_step: usize) -> Result<Self> {
        let len = window.len();
        for step in [time_step, freq_step] {
            if step == 0 || len % step != 0 {
                return Err(Error::NotADivisor { step, len });
            }
        }
        if window.norm_sqr() == 0.0 {
            return Err(Error::ZeroWindow);
        }
        Ok(Self {
            window,
            time_step,
            freq_step,
        })
    }

    /// Same lattice, different window.
    pub fn with_window(&self, window: Signal) -> Result<Self> {
        window.check_len(self.len())?;
        Self::new(window, self.time_step, self.freq_step)
    }

    pub fn window(&self) -> &Signal {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time_step(&self) -> usize {
        self.time_step
    }

    pub fn freq_step(&self) -> usize {
        self.freq_step
    }

    /// Number of time positions `L/a`.
    pub fn time_positions(&self) -> usize {
        self.len() / self.time_step
    }

    /// Number of frequency positions `L/b`.
    pub fn freq_positions(&self) -> usize {
        self.len() / self.freq_step
    }

    pub fn atom_count(&self) -> usize {
        self.time_positions() * self.freq_positions()
    }

    /// `L/(ab)`, atoms per signal dimension.
    pub fn redundancy(&self) -> f64 {
        self.len() as f64 / (self.time_step * self.freq_step) as f64
    }

    /// `ab/L`, the finite counterpart of the lattice density parameter.
    pub fn density_parameter(&self) -> f64 {
        (self.time_step * self.freq_step) as f64 / self.len() as f64
    }

    /// `M_{mb} T_{na} φ`.
    pub fn atom(&self, m: usize, n: usize) -> Signal {
        tf_shift(
            &self.window,
            (m * self.freq_step) as i64,
            (n * self.time_step) as i64,
        )
    }

    /// All atoms, ordered by `(m, n)` with `n` fastest.
    pub fn atoms(&self) -> Vec<Signal> {
        let mut out = Vec::with_capacity(self.atom_count());
        for m in 0..self.freq_positions() {
            for n in 0..self.time_positions() {
                out.push(self.atom(m, n));
            }
        }
        out
    }

    /// `⟨f, M_{mb} T_{na} φ⟩` for every lattice point.
    pub fn analysis(&self, f: &Signal) -> Result<CoefGrid> {
        analyze(&self.window, self.time_step, self.freq_step, f)
    }

    /// `Σ c[m][n] M_{mb} T_{na} φ`, the adjoint of [`analysis`](Self::analysis).
    pub fn synthesis(&self, c: &CoefGrid) -> Result<Signal> {
        synthesize(&self.window, self.time_step, self.freq_step, c)
    }
}

/// Coefficients `(L/b) × (L/a)` indexed `(m, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefGrid {
    values: CMatrix,
}

impl CoefGrid {
    pub fn new(values: CMatrix) -> Self {
        Self { values }
    }

    pub fn zeros(sys: &GaborSystem) -> Self {
        Self {
            values: CMatrix::zeros(sys.freq_positions(), sys.time_positions()),
        }
    }

    pub fn values(&self) -> &CMatrix {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut CMatrix {
        &mut self.values
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Σ self·conj(other)`.
    pub fn inner(&self, other: &CoefGrid) -> Complex64 {
        self.values.iter().zip(other.values.iter()).map(|(x, y)| x * y.conj()).sum()
    }
}

pub(crate) fn analyze(window: &Signal, a: usize, b: usize, f: &Signal) -> Result<CoefGrid> {
    window.check_len(f.len())?;
    let len = f.len();
    let fft = FftPlanner::new().plan_fft_forward(len);
    let mut values = CMatrix::zeros(len / b, len / a);
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for n in 0..len / a {
        for (t, x) in buf.iter_mut().enumerate() {
            *x = f[t] * window.at(t as i64 - (n * a) as i64).conj();
        }
        fft.process(&mut buf);
        for m in 0..len / b {
            values[(m, n)] = buf[m * b];
        }
    }
    Ok(CoefGrid { values })
}

pub(crate) fn synthesize(window: &Signal, a: usize, b: usize, c: &CoefGrid) -> Result<Signal> {
    let len = window.len();
    let (rows, cols) = (len / b, len / a);
    if c.values.nrows() != rows || c.values.ncols() != cols {
        return Err(Error::GridShape {
            rows,
            cols,
            found_rows: c.values.nrows(),
            found_cols: c.values.ncols(),
        });
    }
    let ifft = FftPlanner::new().plan_fft_inverse(len);
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for n in 0..cols {
        buf.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
        for m in 0..rows {
            buf[m * b] = c.values[(m, n)];
        }
        ifft.process(&mut buf);
        for (t, o) in out.iter_mut().enumerate() {
            *o += buf[t] * window.at(t as i64 - (n * a) as i64);
        }
    }
    Signal::new(out)
}
