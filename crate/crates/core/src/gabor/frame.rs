use num_complex::Complex64;

use super::{analyze, synthesize, GaborSystem};
use crate::error::{Error, Result};
use crate::linalg::{conjugate_gradient, dense_solve, hermitian_eigenvalues, lanczos_extremes, CMatrix};
use crate::signal::Signal;

/// `C₁` counts as zero when `C₁ ≤ FRAME_TOLERANCE · C₂`.
pub const FRAME_TOLERANCE: f64 = 1e-10;

/// Largest `L` handled by the dense Hermitian eigensolver.
const DENSE_LIMIT: usize = 512;

/// Matrix-free `S_{ψ,φ} f = Σ ⟨f, M_{mb}T_{na}φ⟩ M_{mb}T_{na}ψ`.
#[derive(Debug, Clone)]
pub struct FrameOperator {
    analysis_window: Signal,
    synthesis_window: Signal,
    time_step: usize,
    freq_step: usize,
}

impl FrameOperator {
    pub fn new(sys: &GaborSystem, psi: Option<&Signal>) -> Result<Self> {
        let synthesis_window = match psi {
            Some(p) => {
                sys.window().check_len(p.len())?;
                if p.norm_sqr() == 0.0 {
                    return Err(Error::ZeroWindow);
                }
                p.clone()
            }
            None => sys.window().clone(),
        };
        Ok(Self {
            analysis_window: sys.window().clone(),
            synthesis_window,
            time_step: sys.time_step(),
            freq_step: sys.freq_step(),
        })
    }

    pub fn len(&self) -> usize {
        self.analysis_window.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn apply(&self, f: &Signal) -> Result<Signal> {
        let c = analyze(&self.analysis_window, self.time_step, self.freq_step, f)?;
        synthesize(&self.synthesis_window, self.time_step, self.freq_step, &c)
    }

    pub(crate) fn apply_slice(&self, v: &[Complex64]) -> Vec<Complex64> {
        let f = Signal::new(v.to_vec()).expect("finite iterate");
        self.apply(&f).expect("lengths agree").into_samples()
    }

    /// Dense `L×L` matrix, accumulated as `Σ g_ψ g_φ^H` over the atoms.
    pub fn to_matrix(&self) -> CMatrix {
        let len = self.len();
        let mut out = CMatrix::zeros(len, len);
        let (a, b) = (self.time_step, self.freq_step);
        for m in 0..len / b {
            for n in 0..len / a {
                let (mm, nn) = ((m * b) as i64, (n * a) as i64);
                let gphi = crate::tfcore::tf_shift(&self.analysis_window, mm, nn);
                let gpsi = crate::tfcore::tf_shift(&self.synthesis_window, mm, nn);
                for j in 0..len {
                    let cj = gphi[j].conj();
                    if cj == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for i in 0..len {
                        out[(i, j)] += gpsi[i] * cj;
                    }
                }
            }
        }
        out
    }
}

/// Dense `S_{ψ,φ}`; with `psi = None` this is the frame operator `S`.
pub fn frame_operator(sys: &GaborSystem, psi: Option<&Signal>) -> Result<CMatrix> {
    Ok(FrameOperator::new(sys, psi)?.to_matrix())
}

/// Optimal frame bounds: the extreme eigenvalues of `S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub is_frame: bool,
}

pub fn frame_bounds(sys: &GaborSystem) -> FrameBounds {
    let op = FrameOperator::new(sys, None).expect("system window is valid");
    let (lo, hi) = if sys.len() <= DENSE_LIMIT {
        let ev = hermitian_eigenvalues(&op.to_matrix());
        (ev[0], ev[ev.len() - 1])
    } else {
        let ext = lanczos_extremes(sys.len(), |v| op.apply_slice(v), 400, 1e-12);
        (ext.min, ext.max)
    };
    let upper = hi.max(0.0);
    let is_frame = lo > FRAME_TOLERANCE * upper;
    FrameBounds {
        lower: if is_frame { lo } else { lo.max(0.0) },
        upper,
        is_frame,
    }
}

/// Canonical dual window `S⁻¹φ`.
///
/// Solved by conjugate gradient (relative residual `1e-13`, at most `10·L`
/// iterations) with a dense LU fallback.
pub fn dual_window(sys: &GaborSystem) -> Result<Signal> {
    let bounds = frame_bounds(sys);
    if !bounds.is_frame {
        return Err(Error::NotAFrame { lower: bounds.lower });
    }
    let op = FrameOperator::new(sys, None)?;
    let rhs = sys.window().samples();
    let sol = conjugate_gradient(|v| op.apply_slice(v), rhs, 1e-13, 10 * sys.len());
    if sol.converged {
        return Signal::new(sol.x);
    }
    let x = dense_solve(&op.to_matrix(), rhs).ok_or(Error::NotAFrame { lower: bounds.lower })?;
    Signal::new(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_defect, max_abs};
    use crate::tfcore::tf_shift_matrix;
    use crate::window::Window;

    fn orthonormal() -> GaborSystem {
        GaborSystem::new(Window::TwoPoint.generate(8).unwrap(), 2, 4).unwrap()
    }

    #[test]
    fn orthonormal_case_is_identity() {
        let s = frame_operator(&orthonormal(), None).unwrap();
        assert!(max_abs(&(s - CMatrix::identity(8, 8))) < 1e-12);
        let fb = frame_bounds(&orthonormal());
        assert!((fb.lower - 1.0).abs() < 1e-12 && (fb.upper - 1.0).abs() < 1e-12 && fb.is_frame);
        let dual = dual_window(&orthonormal()).unwrap();
        assert!(dual.max_abs_diff(orthonormal().window()).unwrap() < 1e-12);
    }

    #[test]
    fn frame_operator_commutes_with_lattice_shifts() {
        let sys = GaborSystem::new(Window::Gaussian(3.0).generate(12).unwrap(), 3, 2).unwrap();
        let s = frame_operator(&sys, None).unwrap();
        assert!(hermitian_defect(&s) < 1e-13);
        for (m, n) in [(2, 0), (0, 3), (4, 6)] {
            let g = tf_shift_matrix(12, m, n);
            assert!(max_abs(&(&s * &g - &g * &s)) < 1e-12);
        }
    }

    #[test]
    fn undersampled_system_is_not_a_frame() {
        let sys = GaborSystem::new(Window::TwoPoint.generate(8).unwrap(), 4, 4).unwrap();
        let s = frame_operator(&sys, None).unwrap();
        let rank = s.rank(1e-10);
        assert!(rank <= 4);
        let fb = frame_bounds(&sys);
        assert!(!fb.is_frame);
        assert!(fb.lower.abs() < 1e-12);
        match dual_window(&sys) {
            Err(Error::NotAFrame { lower }) => assert!(lower.abs() < 1e-12),
            other => panic!("expected NotAFrame, got {other:?}"),
        }
    }

    #[test]
    fn offset_gaussian_frame_has_positive_lower_bound() {
        let raw: Vec<f64> = (0..16).map(|t| (-std::f64::consts::PI * ((t as f64 - 8.0) / 4.0).powi(2)).exp()).collect();
        let sys = GaborSystem::new(Signal::from_real(&raw).unwrap(), 4, 2).unwrap();
        let fb = frame_bounds(&sys);
        assert!(fb.is_frame && fb.lower > 0.0);
        let ev = hermitian_eigenvalues(&frame_operator(&sys, None).unwrap());
        assert!((ev[0] - fb.lower).abs() < 1e-12 && (ev[15] - fb.upper).abs() < 1e-12);
    }

    #[test]
    fn matrix_free_matches_dense() {
        let sys = GaborSystem::new(Window::Gaussian(2.0).generate(12).unwrap(), 2, 3).unwrap();
        let psi = Window::Boxcar(3).generate(12).unwrap();
        let op = FrameOperator::new(&sys, Some(&psi)).unwrap();
        let dense = op.to_matrix();
        let f = Signal::new((0..12).map(|t| Complex64::new((t as f64).sin(), (t as f64 * 0.7).cos())).collect()).unwrap();
        let a = op.apply(&f).unwrap();
        let b = crate::linalg::mat_vec(&dense, f.samples());
        assert!(a.max_abs_diff(&Signal::new(b).unwrap()).unwrap() < 1e-13);
    }

    #[test]
    fn lanczos_path_agrees_with_dense() {
        let sys = GaborSystem::new(Window::Gaussian(24.0).generate(576).unwrap(), 24, 12).unwrap();
        let fb = frame_bounds(&sys);
        let ev = hermitian_eigenvalues(&frame_operator(&sys, None).unwrap());
        assert!((fb.upper - ev[ev.len() - 1]).abs() < 1e-8 * ev[ev.len() - 1]);
        assert!((fb.lower - ev[0]).abs() < 1e-8 * ev[ev.len() - 1]);
    }
}
