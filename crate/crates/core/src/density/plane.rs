use std::collections::BTreeSet;

use num_complex::Complex64;

use super::ball_volume;
use crate::error::{Error, Result};
use crate::gabor::GaborSystem;
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::signal::Signal;
use crate::tfcore::tf_shift;

/// Identification of the time-frequency plane with the grid of `ℂ^L`.
///
/// One unit of time is `time_unit` samples and one unit of frequency is
/// `freq_unit` bins, with `time_unit · freq_unit = L`. The point `(ω, x)`
/// labels the atom `M_{ω·freq_unit} T_{x·time_unit} φ`, and the plane is a
/// torus of `freq_unit` time units by `time_unit` frequency units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TfPlane {
    len: usize,
    time_unit: usize,
    freq_unit: usize,
}

const GRID_TOL: f64 = 1e-9;

impl TfPlane {
    pub fn new(len: usize, time_unit: usize, freq_unit: usize) -> Result<Self> {
        if time_unit == 0 || freq_unit == 0 || time_unit * freq_unit != len {
            return Err(Error::InvalidParameter(format!(
                "time unit {time_unit} times frequency unit {freq_unit} must equal L = {len}"
            )));
        }
        Ok(Self { len, time_unit, freq_unit })
    }

    /// Balanced units `√L × √L`; `L` must be a perfect square.
    pub fn square(len: usize) -> Result<Self> {
        let s = (len as f64).sqrt().round() as usize;
        if s * s != len {
            return Err(Error::InvalidParameter(format!("L = {len} is not a perfect square")));
        }
        Self::new(len, s, s)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn time_unit(&self) -> usize {
        self.time_unit
    }

    pub fn freq_unit(&self) -> usize {
        self.freq_unit
    }

    /// Length of the time circle, in time units.
    pub fn time_period(&self) -> f64 {
        self.freq_unit as f64
    }

    /// Length of the frequency circle, in frequency units.
    pub fn freq_period(&self) -> f64 {
        self.time_unit as f64
    }

    /// Grid indices `(m, n)` in `[0, L)²` of the point `(ω, x)`.
    pub fn grid_position(&self, omega: f64, x: f64) -> Result<(usize, usize)> {
        let snap = |v: f64| -> Option<usize> {
            let r = v.round();
            ((v - r).abs() <= GRID_TOL * v.abs().max(1.0)).then(|| (r as i64).rem_euclid(self.len as i64) as usize)
        };
        match (snap(omega * self.freq_unit as f64), snap(x * self.time_unit as f64)) {
            (Some(m), Some(n)) => Ok((m, n)),
            _ => Err(Error::OffGrid { omega, x }),
        }
    }

    /// Plane coordinates of grid indices, in the fundamental domain.
    pub fn coordinates(&self, m: usize, n: usize) -> (f64, f64) {
        (m as f64 / self.freq_unit as f64, n as f64 / self.time_unit as f64)
    }

    /// Minimum-image Euclidean distance on the torus.
    pub fn distance(&self, p: (f64, f64), q: (f64, f64)) -> f64 {
        let wrap = |d: f64, period: f64| {
            let r = d.rem_euclid(period);
            r.min(period - r)
        };
        wrap(p.0 - q.0, self.freq_period()).hypot(wrap(p.1 - q.1, self.time_period()))
    }

    pub fn atom(&self, window: &Signal, omega: f64, x: f64) -> Result<Signal> {
        window.check_len(self.len)?;
        let (m, n) = self.grid_position(omega, x)?;
        Ok(tf_shift(window, m as i64, n as i64))
    }

    /// Plane coordinates of every atom of a Gabor system.
    pub fn system_points(&self, sys: &GaborSystem) -> Result<Vec<(f64, f64)>> {
        if sys.len() != self.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                found: sys.len(),
            });
        }
        let (a, b) = (sys.time_step(), sys.freq_step());
        Ok((0..sys.freq_positions())
            .flat_map(|m| (0..sys.time_positions()).map(move |n| self.coordinates(m * b, n * a)))
            .collect())
    }

    /// The integer points of the torus: `ω ∈ [0, time_unit)`, `x ∈ [0, freq_unit)`.
    pub fn integer_points(&self) -> Vec<(f64, f64)> {
        (0..self.time_unit)
            .flat_map(|j| (0..self.freq_unit).map(move |k| (j as f64, k as f64)))
            .collect()
    }

    /// `χ`: the normalised indicator of one time unit. Its shifts by integer
    /// points form an orthonormal basis of `ℂ^L`.
    pub fn chi(&self) -> Signal {
        let c = 1.0 / (self.time_unit as f64).sqrt();
        let samples = (0..self.len)
            .map(|t| Complex64::new(if t < self.time_unit { c } else { 0.0 }, 0.0))
            .collect();
        Signal::new(samples).expect("finite")
    }

    /// Distinct grid atoms of `points` within distance `radius` of `center`.
    fn atoms_in_ball(&self, window: &Signal, points: &[(f64, f64)], center: (f64, f64), radius: f64) -> Result<Vec<Signal>> {
        let mut seen = BTreeSet::new();
        for &(w, x) in points {
            let (m, n) = self.grid_position(w, x)?;
            if self.distance(self.coordinates(m, n), center) <= radius {
                seen.insert((m, n));
            }
        }
        Ok(seen.into_iter().map(|(m, n)| tf_shift(window, m as i64, n as i64)).collect())
    }
}

fn columns(atoms: &[Signal], len: usize) -> CMatrix {
    CMatrix::from_fn(len, atoms.len(), |t, i| atoms[i][t])
}

const RIDGE: f64 = 1e-12;
const REFINEMENT_STEPS: usize = 4;

/// Least-squares projection of `g` onto the column span of `a`: normal
/// equations with ridge `1e-12·max diag`, followed by iterative refinement.
fn project(a: &CMatrix, g: &[Complex64]) -> Vec<Complex64> {
    let gv = nalgebra::DVector::from_column_slice(g);
    let gram = a.adjoint() * a;
    let scale = (0..gram.nrows()).map(|i| gram[(i, i)].re).fold(0.0, f64::max);
    let reg = &gram + CMatrix::identity(gram.nrows(), gram.nrows()) * Complex64::new(RIDGE * scale, 0.0);
    let chol = reg.cholesky().expect("ridge-regularised Gram matrix is positive definite");
    let mut coef = nalgebra::DVector::zeros(a.ncols());
    for _ in 0..=REFINEMENT_STEPS {
        let resid = &gv - a * &coef;
        coef += chol.solve(&(a.adjoint() * resid));
    }
    (a * coef).iter().copied().collect()
}

/// `‖P_W(M_η T_a f) − M_η T_a f‖₂`, `W` the span of the atoms of `Λ` in the
/// ball of radius `radius` around `center = (η, a)`.
pub fn hap_residual(
    plane: &TfPlane,
    lam: &[(f64, f64)],
    window: &Signal,
    f: &Signal,
    center: (f64, f64),
    radius: f64,
) -> Result<f64> {
    window.check_len(plane.len)?;
    f.check_len(plane.len)?;
    if !(radius >= 0.0) || !radius.is_finite() {
        return Err(Error::InvalidParameter(format!("radius {radius} must be nonnegative")));
    }
    let g = plane.atom(f, center.0, center.1)?;
    let atoms = plane.atoms_in_ball(window, lam, center, radius)?;
    if atoms.is_empty() {
        return Ok(f.norm());
    }
    let p = project(&columns(&atoms, plane.len), g.samples());
    Ok(p.iter().zip(g.samples()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RsTraceReport {
    pub trace_t: f64,
    pub card_lam: usize,
    pub card_grid: usize,
    pub epsilon_witness: f64,
    /// Eigenvalues of `T`, ascending.
    pub eigenvalues: Vec<f64>,
    pub rank_w: usize,
    pub r: f64,
    pub big_r: f64,
}

const EIG_SLACK: f64 = 1e-10;
const TRACE_SLACK: f64 = 1e-8;

impl RsTraceReport {
    pub fn eigenvalues_in_unit_interval(&self) -> bool {
        self.eigenvalues.iter().all(|&e| (-EIG_SLACK..=1.0 + EIG_SLACK).contains(&e))
    }

    pub fn trace_dominated_by_rank(&self) -> bool {
        self.trace_t <= self.card_lam as f64 + TRACE_SLACK
    }

    /// `(1−ε)·card_grid/v(r) ≤ card_lam/v(r+R) · v(r+R)/v(r)`, evaluated
    /// from the stored fields.
    pub fn chain_holds(&self) -> bool {
        let (vr, vrr) = (ball_volume(self.r), ball_volume(self.r + self.big_r));
        let lhs = (1.0 - self.epsilon_witness) * self.card_grid as f64 / vr;
        let rhs = self.card_lam as f64 / vrr * (vrr / vr);
        lhs <= rhs + TRACE_SLACK / vr
    }

    pub fn is_consistent(&self) -> bool {
        self.eigenvalues_in_unit_interval() && self.trace_dominated_by_rank() && self.chain_holds()
    }
}

/// Compares `V_r = span{M_j T_k χ : (j,k) ∈ ℤ² ∩ B_r(c)}` with
/// `W = span{Λ-atoms in B_{r+R}(c)}` through `T = P_V P_W |_V`.
pub fn rs_trace_bounds(
    plane: &TfPlane,
    lam: &[(f64, f64)],
    window: &Signal,
    r: f64,
    big_r: f64,
    center: (f64, f64),
) -> Result<RsTraceReport> {
    window.check_len(plane.len)?;
    if !(r > 0.0) || !(big_r >= 0.0) || !r.is_finite() || !big_r.is_finite() {
        return Err(Error::InvalidParameter(format!("radii r = {r}, R = {big_r} out of range")));
    }
    let side = plane.time_period().min(plane.freq_period());
    if 2.0 * r >= side {
        return Err(Error::Extent(format!(
            "ball of radius {r} wraps around a torus of side {side}; use a larger L"
        )));
    }
    let grid = plane.atoms_in_ball(&plane.chi(), &plane.integer_points(), center, r)?;
    let lam_atoms = plane.atoms_in_ball(window, lam, center, r + big_r)?;
    let (card_grid, card_lam) = (grid.len(), lam_atoms.len());

    let q = columns(&grid, plane.len);
    let (eigenvalues, rank_w) = if lam_atoms.is_empty() || grid.is_empty() {
        (vec![0.0; card_grid], 0)
    } else {
        let a = columns(&lam_atoms, plane.len);
        let svd = a.svd(true, false);
        let u_all = svd.u.expect("left singular vectors requested");
        let top = svd.singular_values.iter().fold(0.0, |m: f64, &v| m.max(v));
        let keep: Vec<usize> =
            (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i].powi(2) > 1e-10 * top * top).collect();
        let u = u_all.select_columns(&keep);
        let m = u.adjoint() * &q;
        (hermitian_eigenvalues(&(m.adjoint() * &m)), keep.len())
    };
    let trace_t: f64 = eigenvalues.iter().sum();
    let epsilon_witness = if card_grid == 0 { 0.0 } else { 1.0 - trace_t / card_grid as f64 };
    Ok(RsTraceReport {
        trace_t,
        card_lam,
        card_grid,
        epsilon_witness,
        eigenvalues,
        rank_w,
        r,
        big_r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::window::Window;

    #[test]
    fn plane_geometry() {
        let p = TfPlane::square(64).unwrap();
        assert_eq!((p.time_unit(), p.freq_unit()), (8, 8));
        assert!(TfPlane::square(48).is_err());
        assert!(TfPlane::new(48, 6, 7).is_err());
        assert_eq!(p.grid_position(1.0, 0.5).unwrap(), (8, 4));
        assert_eq!(p.grid_position(-1.0, 0.0).unwrap(), (56, 0));
        assert!(matches!(p.grid_position(0.1, 0.0), Err(Error::OffGrid { .. })));
        assert!((p.distance((0.0, 0.0), (7.0, 7.0)) - 2f64.sqrt()).abs() < 1e-15);
        assert!((p.distance((0.0, 0.0), (4.0, 4.0)) - 32f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn chi_shifts_are_orthonormal() {
        let p = TfPlane::new(24, 4, 6).unwrap();
        let chi = p.chi();
        let atoms: Vec<Signal> = p.integer_points().iter().map(|&(w, x)| p.atom(&chi, w, x).unwrap()).collect();
        assert_eq!(atoms.len(), 24);
        let q = columns(&atoms, 24);
        let gram = q.adjoint() * &q;
        assert!(crate::linalg::max_abs(&(gram - CMatrix::identity(24, 24))) < 1e-14);
    }

    #[test]
    fn hap_complete_basis_is_exact() {
        let p = TfPlane::square(16).unwrap();
        let f = Window::Gaussian(2.0).generate(16).unwrap();
        let lam = p.integer_points();
        let res = hap_residual(&p, &lam, &p.chi(), &f, (1.0, 2.0), 10.0).unwrap();
        assert!(res <= 1e-12, "{res}");
    }

    #[test]
    fn hap_empty_ball_returns_norm() {
        let p = TfPlane::square(16).unwrap();
        let f = Window::Gaussian(2.0).generate(16).unwrap().scale(Complex64::new(3.0, 0.0));
        let res = hap_residual(&p, &[(2.0, 2.0)], &p.chi(), &f, (0.0, 0.0), 1.0).unwrap();
        assert!((res - 3.0).abs() < 1e-14);
        assert_eq!(hap_residual(&p, &[], &p.chi(), &f, (0.0, 0.0), 5.0).unwrap(), 3.0);
    }

    #[test]
    fn hap_local_approximation_of_pulse() {
        // L = 256, 16 × 16 torus; lattice 1/2 time unit by 1 frequency unit
        let p = TfPlane::square(256).unwrap();
        let phi = Window::Gaussian(16.0).generate(256).unwrap();
        let sys = GaborSystem::new(phi.clone(), 8, 16).unwrap();
        assert_eq!(sys.redundancy(), 2.0);
        let lam = p.system_points(&sys).unwrap();
        let f = Window::Gaussian(8.0).generate(256).unwrap();
        let res = hap_residual(&p, &lam, &phi, &f, (3.0, 5.0), 6.0).unwrap();
        assert!(res < 0.01 * f.norm(), "{res}");
        let far = hap_residual(&p, &lam, &phi, &f, (3.0, 5.0), 1.0).unwrap();
        assert!(far > res);
    }

    #[test]
    fn rs_grid_contained_gives_identity() {
        let p = TfPlane::square(64).unwrap();
        let rep = rs_trace_bounds(&p, &p.integer_points(), &p.chi(), 2.5, 0.0, (0.0, 0.0)).unwrap();
        assert_eq!(rep.card_grid, 21);
        assert_eq!(rep.card_lam, 21);
        assert!((rep.trace_t - 21.0).abs() < 1e-10);
        assert!(rep.epsilon_witness.abs() < 1e-12);
        assert!(rep.is_consistent());
    }

    #[test]
    fn rs_empty_lambda() {
        let p = TfPlane::square(64).unwrap();
        let rep = rs_trace_bounds(&p, &[], &p.chi(), 2.0, 1.0, (0.0, 0.0)).unwrap();
        assert_eq!(rep.trace_t, 0.0);
        assert_eq!(rep.card_lam, 0);
        assert!(rep.is_consistent());
    }

    #[test]
    fn rs_gaussian_redundancy_two() {
        let p = TfPlane::square(64).unwrap();
        let phi = Window::Gaussian(8.0).generate(64).unwrap();
        let sys = GaborSystem::new(phi.clone(), 4, 8).unwrap();
        let lam = p.system_points(&sys).unwrap();
        let rep = rs_trace_bounds(&p, &lam, &phi, 3.0, 3.0, (0.0, 0.0)).unwrap();
        assert!(rep.eigenvalues_in_unit_interval(), "{:?}", rep.eigenvalues);
        assert!(rep.trace_dominated_by_rank());
        assert!(rep.chain_holds());
        assert!(rep.card_grid > 0 && rep.trace_t > 0.0);
    }

    #[test]
    fn rs_rejects_wrapping_ball() {
        let p = TfPlane::square(64).unwrap();
        assert!(matches!(rs_trace_bounds(&p, &[], &p.chi(), 4.0, 1.0, (0.0, 0.0)), Err(Error::Extent(_))));
    }
}
