//! Translation, modulation and the full-grid windowed Fourier transform on `ℂ^L`.
//!
//! Conventions: `(T_n f)[t] = f[t-n]`, `(M_m f)[t] = e^{2πi m t/L} f[t]`, and
//! the forward kernel is `e^{-2πi m t/L}` with no `1/√L` factor.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::signal::{root_of_unity, Signal};

/// `M_m T_n f`, i.e. `result[t] = e^{2πi m t/L} f[t-n]`. Indices are reduced mod `L`.
pub fn tf_shift(f: &Signal, m: i64, n: i64) -> Signal {
    let len = f.len();
    let samples = (0..len)
        .map(|t| root_of_unity(m * t as i64, len) * f.at(t as i64 - n))
        .collect();
    Signal::new(samples).expect("shifts of a valid signal are valid")
}

pub fn translate(f: &Signal, n: i64) -> Signal {
    tf_shift(f, 0, n)
}

pub fn modulate(f: &Signal, m: i64) -> Signal {
    tf_shift(f, m, 0)
}

/// Matrix of `M_m T_n` on `ℂ^len`.
pub fn tf_shift_matrix(len: usize, m: i64, n: i64) -> CMatrix {
    let mut out = CMatrix::zeros(len, len);
    for t in 0..len {
        let src = (t as i64 - n).rem_euclid(len as i64) as usize;
        out[(t, src)] = root_of_unity(m * t as i64, len);
    }
    out
}

/// `L×L` table of STFT values indexed `(m, n)`: frequency row, time column.
#[derive(Debug, Clone, PartialEq)]
pub struct TfGrid {
    values: CMatrix,
}

impl TfGrid {
    pub fn new(values: CMatrix) -> Result<Self> {
        if values.nrows() != values.ncols() || values.nrows() == 0 {
            return Err(Error::GridShape {
                rows: values.nrows().max(1),
                cols: values.nrows().max(1),
                found_rows: values.nrows(),
                found_cols: values.ncols(),
            });
        }
        Ok(Self { values })
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            values: CMatrix::zeros(len, len),
        }
    }

    pub fn len(&self) -> usize {
        self.values.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &CMatrix {
        &self.values
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.values[(m, n)]
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// `V[m][n] = ⟨f, M_m T_n φ⟩`, one DFT of `f · conj(T_n φ)` per time column.
pub fn stft(f: &Signal, phi: &Signal) -> Result<TfGrid> {
    f.check_len(phi.len())?;
    let len = f.len();
    let fft = FftPlanner::new().plan_fft_forward(len);
    let mut values = CMatrix::zeros(len, len);
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for n in 0..len {
        for (t, b) in buf.iter_mut().enumerate() {
            *b = f[t] * phi.at(t as i64 - n as i64).conj();
        }
        fft.process(&mut buf);
        values.column_mut(n).iter_mut().zip(&buf).for_each(|(v, b)| *v = *b);
    }
    Ok(TfGrid { values })
}

/// Inverse of [`stft`] for any nonzero window, including the `1/(L‖φ‖²)` constant.
pub fn istft(grid: &TfGrid, phi: &Signal) -> Result<Signal> {
    let len = phi.len();
    if grid.len() != len {
        return Err(Error::GridShape {
            rows: len,
            cols: len,
            found_rows: grid.values.nrows(),
            found_cols: grid.values.ncols(),
        });
    }
    let energy = phi.norm_sqr();
    if energy == 0.0 {
        return Err(Error::ZeroWindow);
    }
    let ifft = FftPlanner::new().plan_fft_inverse(len);
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for n in 0..len {
        buf.iter_mut()
            .zip(grid.values.column(n).iter())
            .for_each(|(b, v)| *b = *v);
        ifft.process(&mut buf);
        for (t, o) in out.iter_mut().enumerate() {
            *o += buf[t] * phi.at(t as i64 - n as i64);
        }
    }
    let scale = 1.0 / (len as f64 * energy);
    Signal::new(out.into_iter().map(|z| z * scale).collect())
}
