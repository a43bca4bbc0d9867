use num_complex::Complex64;

use super::{FrameOperator, GaborSystem};
use crate::error::{Error, Result};
use crate::linalg::{dense_solve, trace, CMatrix};
use crate::signal::Signal;

/// `tr(op)/L`, the normalised trace on the matrix algebra.
pub fn normalized_trace(op: &CMatrix) -> Result<Complex64> {
    let t = trace(op)?;
    Ok(t / op.nrows() as f64)
}

/// One regularisation level of [`density_trace_probe`].
#[derive(Debug, Clone, PartialEq)]
pub struct TraceProbePoint {
    pub eps: f64,
    /// `⟨ψ, φ_ε⟩` with `φ_ε = (εI + S_{ψ,ψ})⁻¹ψ`.
    pub value: Complex64,
    /// `‖A_ψ φ_ε‖`.
    pub analysis_norm: f64,
    /// `‖φ_ε‖²`.
    pub phi_norm_sqr: f64,
    /// `⟨ψ, φ_ε⟩ ≥ ‖A_ψ φ_ε‖²`.
    pub lower_ok: bool,
    /// `⟨ψ, φ_ε⟩ ≤ ‖A_ψ φ_ε‖`.
    pub upper_ok: bool,
}

const PROBE_SLACK: f64 = 1e-10;

/// Regularised dual-window inner products on the lattice of `sys`, with `psi`
/// as the window. For a full-rank frame operator the values tend to `ab/L`.
pub fn density_trace_probe(psi: &Signal, sys: &GaborSystem, eps_list: &[f64]) -> Result<Vec<TraceProbePoint>> {
    if let Some(&bad) = eps_list.iter().find(|&&e| !(e > 0.0) || !e.is_finite()) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {bad}")));
    }
    let probe_sys = sys.with_window(psi.clone())?;
    let s = FrameOperator::new(&probe_sys, None)?.to_matrix();
    let len = sys.len();
    eps_list
        .iter()
        .map(|&eps| {
            let shifted = &s + CMatrix::identity(len, len) * Complex64::new(eps, 0.0);
            let x = dense_solve(&shifted, psi.samples())
                .ok_or_else(|| Error::InvalidParameter(format!("εI + S singular at eps = {eps}")))?;
            let phi = Signal::new(x)?;
            let value = psi.inner(&phi)?;
            let analysis_norm = probe_sys.analysis(&phi)?.energy().sqrt();
            Ok(TraceProbePoint {
                eps,
                value,
                analysis_norm,
                phi_norm_sqr: phi.norm_sqr(),
                lower_ok: value.re >= analysis_norm * analysis_norm - PROBE_SLACK,
                upper_ok: value.re <= analysis_norm + PROBE_SLACK,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabor::frame_operator;
    use crate::tfcore::tf_shift_matrix;
    use crate::window::Window;

    #[test]
    fn orthonormal_trace_is_one() {
        let sys = GaborSystem::new(Window::TwoPoint.generate(8).unwrap(), 2, 4).unwrap();
        let t = normalized_trace(&frame_operator(&sys, None).unwrap()).unwrap();
        assert!((t - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn lattice_shifts_are_traceless() {
        for (m, n) in [(4, 0), (0, 2), (4, 6)] {
            let t = normalized_trace(&tf_shift_matrix(8, m, n)).unwrap();
            assert!(t.norm() < 1e-15);
        }
    }

    #[test]
    fn probe_in_orthonormal_case() {
        let sys = GaborSystem::new(Window::TwoPoint.generate(8).unwrap(), 2, 4).unwrap();
        let pts = density_trace_probe(sys.window(), &sys, &[1.0]).unwrap();
        assert!((pts[0].value - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert!(pts[0].lower_ok && pts[0].upper_ok);
    }

    #[test]
    fn probe_rejects_nonpositive_eps() {
        let sys = GaborSystem::new(Window::TwoPoint.generate(8).unwrap(), 2, 4).unwrap();
        assert!(density_trace_probe(sys.window(), &sys, &[0.0]).is_err());
        assert!(density_trace_probe(sys.window(), &sys, &[-1.0]).is_err());
    }

    #[test]
    fn probe_identity_holds_exactly() {
        // ⟨ψ,φ_ε⟩ = ε‖φ_ε‖² + ‖A_ψ φ_ε‖²
        let sys = GaborSystem::new(Window::Gaussian(3.0).generate(12).unwrap(), 2, 3).unwrap();
        for p in density_trace_probe(sys.window(), &sys, &[1e-3, 0.1, 2.0]).unwrap() {
            let rhs = p.eps * p.phi_norm_sqr + p.analysis_norm * p.analysis_norm;
            assert!((p.value.re - rhs).abs() < 1e-12);
            assert!(p.value.im.abs() < 1e-12);
        }
    }
}
