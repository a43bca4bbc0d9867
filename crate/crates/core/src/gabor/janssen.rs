use num_complex::Complex64;

use super::GaborSystem;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::signal::{root_of_unity, Signal};
use crate::tfcore::tf_shift;

/// Expansion of `S_{ψ,φ}` over the adjoint lattice: modulation steps `L/a`,
/// translation steps `L/b`.
#[derive(Debug, Clone, PartialEq)]
pub struct JanssenRep {
    /// `a × b` table, entry `(j, k)` multiplies `M_{jL/a} T_{kL/b}`.
    pub coefficients: CMatrix,
    pub freq_step: usize,
    pub time_step: usize,
    pub len: usize,
}

impl JanssenRep {
    /// `Σ c_{jk} M_{jL/a} T_{kL/b}` as a dense matrix.
    pub fn operator(&self) -> CMatrix {
        let len = self.len;
        let mut out = CMatrix::zeros(len, len);
        for j in 0..self.coefficients.nrows() {
            for k in 0..self.coefficients.ncols() {
                let c = self.coefficients[(j, k)];
                if c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let shift = k * self.time_step;
                for t in 0..len {
                    let src = (t + len - shift % len) % len;
                    out[(t, src)] += c * root_of_unity((j * self.freq_step * t) as i64, len);
                }
            }
        }
        out
    }

    /// Coefficients with modulus above `tol`.
    pub fn significant(&self, tol: f64) -> Vec<(usize, usize, Complex64)> {
        let mut out = Vec::new();
        for j in 0..self.coefficients.nrows() {
            for k in 0..self.coefficients.ncols() {
                let c = self.coefficients[(j, k)];
                if c.norm() > tol {
                    out.push((j, k, c));
                }
            }
        }
        out
    }
}

/// `c_{jk} = (L/(ab)) ⟨ψ, M_{jL/a} T_{kL/b} φ⟩`, where `φ` is the system window
/// and `ψ` (default `φ`) the synthesis window of `S_{ψ,φ}`.
pub fn janssen(sys: &GaborSystem, psi: Option<&Signal>) -> Result<JanssenRep> {
    let len = sys.len();
    let (a, b) = (sys.time_step(), sys.freq_step());
    let psi = match psi {
        Some(p) => {
            sys.window().check_len(p.len())?;
            if p.norm_sqr() == 0.0 {
                return Err(Error::ZeroWindow);
            }
            p
        }
        None => sys.window(),
    };
    let freq_step = len / a;
    let time_step = len / b;
    let scale = sys.redundancy();
    let coefficients = CMatrix::from_fn(a, b, |j, k| {
        let shifted = tf_shift(sys.window(), (j * freq_step) as i64, (k * time_step) as i64);
        psi.inner(&shifted).expect("lengths checked") * scale
    });
    Ok(JanssenRep {
        coefficients,
        freq_step,
        time_step,
        len,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabor::frame_operator;
    use crate::linalg::operator_norm;
    use crate::window::Window;

    #[test]
    fn orthonormal_case_keeps_only_the_origin() {
        let sys = GaborSystem::new(Window::TwoPoint.generate(8).unwrap(), 2, 4).unwrap();
        let rep = janssen(&sys, None).unwrap();
        let sig = rep.significant(1e-12);
        assert_eq!(sig.len(), 1);
        let (j, k, c) = sig[0];
        assert_eq!((j, k), (0, 0));
        assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn reconstructs_the_cross_frame_operator() {
        let phi = Window::Gaussian(3.0).generate(24).unwrap();
        let psi = Window::Boxcar(5).generate(24).unwrap();
        let sys = GaborSystem::new(phi, 3, 4).unwrap();
        for p in [None, Some(&psi)] {
            let s = frame_operator(&sys, p).unwrap();
            let j = janssen(&sys, p).unwrap().operator();
            assert!(operator_norm(&(s - j)) < 1e-12);
        }
    }

    #[test]
    fn orthogonal_windows_give_zero_operator() {
        // ψ supported on odd samples, φ on even samples, lattice with a = 2:
        // every adjoint-lattice translate (steps L/b, even here) keeps parity.
        let len = 16;
        let phi = Signal::from_real(&(0..len).map(|t| if t % 2 == 0 { 1.0 } else { 0.0 }).collect::<Vec<_>>()).unwrap();
        let psi = Signal::from_real(&(0..len).map(|t| if t % 2 == 1 { 1.0 } else { 0.0 }).collect::<Vec<_>>()).unwrap();
        let sys = GaborSystem::new(phi, 8, 4).unwrap();
        let rep = janssen(&sys, Some(&psi)).unwrap();
        assert!(rep.significant(1e-14).is_empty());
        assert!(operator_norm(&frame_operator(&sys, Some(&psi)).unwrap()) < 1e-13);
    }
}
