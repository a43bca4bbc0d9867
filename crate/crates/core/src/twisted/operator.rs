//! Box truncations of `L_a(b) = a ♮ b` on `ℓ²(ℤ^{2d})` and spectral estimates.

use num_complex::Complex64;

use super::dense::DenseSeq;
use super::{dot, twist, TwistedSequence};
use crate::error::{Error, Result};
use crate::linalg::{lanczos_extremes_short, CMatrix, Extremes};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const LANCZOS_TOL: f64 = 1e-11;
const LANCZOS_ITERS: usize = 2000;
/// Largest box dimension [`spectral_radius_l2_auto`] will grow to.
pub(crate) const MAX_AUTO_DIM: usize = 20_000;

/// `L_a` compressed to the box `[-R, R]^{2d}`.
///
/// Entry `((j,k),(l,m))` is `a_{(j-l)(k-m)} e^{-2πiγ l·(k-m)}`; basis vectors
/// are ordered lexicographically in `(j₁..j_d, k₁..k_d)`.
#[derive(Debug, Clone)]
pub struct TruncatedOperator {
    radius: usize,
    dim: usize,
    gamma: f64,
    /// `(j-offset, k-offset, value)` of the generating sequence.
    taps: Vec<(Vec<i64>, Vec<i64>, Complex64)>,
}

/// Builds the truncation of `L_a` to radius `R ≥ 1`.
pub fn truncate(a: &TwistedSequence, radius: usize) -> Result<TruncatedOperator> {
    if radius == 0 {
        return Err(Error::InvalidParameter("truncation radius must be positive".into()));
    }
    Ok(TruncatedOperator {
        radius,
        dim: a.dim(),
        gamma: a.gamma(),
        taps: a.entries().map(|(i, v)| (i.j.clone(), i.k.clone(), *v)).collect(),
    })
}

impl TruncatedOperator {
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// `(2R+1)^{2d}`.
    pub fn size(&self) -> usize {
        (2 * self.radius + 1).pow(2 * self.dim as u32)
    }

    /// Whether the generating sequence fits inside the box.
    pub fn covers_support(&self) -> bool {
        self.taps
            .iter()
            .all(|(j, k, _)| j.iter().chain(k).all(|x| x.unsigned_abs() as usize <= self.radius))
    }

    fn side(&self) -> i64 {
        (2 * self.radius + 1) as i64
    }

    /// Coordinates `(j, k)` of basis vector `p`.
    pub fn coords(&self, mut p: usize) -> (Vec<i64>, Vec<i64>) {
        let side = self.side() as usize;
        let r = self.radius as i64;
        let mut c = vec![0i64; 2 * self.dim];
        for slot in c.iter_mut().rev() {
            *slot = (p % side) as i64 - r;
            p /= side;
        }
        let k = c.split_off(self.dim);
        (c, k)
    }

    /// Basis position of `(j, k)`, or `None` outside the box.
    pub fn position(&self, j: &[i64], k: &[i64]) -> Option<usize> {
        let r = self.radius as i64;
        let mut p = 0usize;
        for &x in j.iter().chain(k) {
            if x < -r || x > r {
                return None;
            }
            p = p * self.side() as usize + (x + r) as usize;
        }
        Some(p)
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![ZERO; x.len()];
        for (col, xv) in x.iter().enumerate() {
            if *xv == ZERO {
                continue;
            }
            let (l, m) = self.coords(col);
            for (p, q, av) in &self.taps {
                let j: Vec<i64> = l.iter().zip(p).map(|(a, b)| a + b).collect();
                let k: Vec<i64> = m.iter().zip(q).map(|(a, b)| a + b).collect();
                if let Some(row) = self.position(&j, &k) {
                    y[row] += av * twist(self.gamma, dot(&l, q)) * xv;
                }
            }
        }
        y
    }

    pub fn apply_adjoint(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![ZERO; x.len()];
        for (col, yv) in y.iter_mut().enumerate() {
            let (l, m) = self.coords(col);
            for (p, q, av) in &self.taps {
                let j: Vec<i64> = l.iter().zip(p).map(|(a, b)| a + b).collect();
                let k: Vec<i64> = m.iter().zip(q).map(|(a, b)| a + b).collect();
                if let Some(row) = self.position(&j, &k) {
                    *yv += (av * twist(self.gamma, dot(&l, q))).conj() * x[row];
                }
            }
        }
        y
    }

    /// Dense matrix; intended for small boxes.
    pub fn to_dense(&self) -> CMatrix {
        let n = self.size();
        let mut out = CMatrix::zeros(n, n);
        for col in 0..n {
            let (l, m) = self.coords(col);
            for (p, q, av) in &self.taps {
                let j: Vec<i64> = l.iter().zip(p).map(|(a, b)| a + b).collect();
                let k: Vec<i64> = m.iter().zip(q).map(|(a, b)| a + b).collect();
                if let Some(row) = self.position(&j, &k) {
                    out[(row, col)] += av * twist(self.gamma, dot(&l, q));
                }
            }
        }
        out
    }

    /// Extreme eigenvalues, assuming the operator is Hermitian.
    pub fn hermitian_extremes(&self) -> Extremes {
        self.hermitian_extremes_short(LANCZOS_TOL)
    }

    /// Extreme eigenvalues from the short Lanczos recurrence, to relative
    /// tolerance `rel_tol`.
    pub(crate) fn hermitian_extremes_short(&self, rel_tol: f64) -> Extremes {
        let m = self.to_sparse();
        lanczos_extremes_short(self.size(), |v| m.apply(v), LANCZOS_ITERS, rel_tol)
    }

    /// Extreme singular values `(σ_min, σ_max)`.
    pub fn singular_extremes(&self) -> (f64, f64) {
        let m = self.to_sparse();
        let e = lanczos_extremes_short(self.size(), |v| m.apply_adjoint(&m.apply(v)), LANCZOS_ITERS, LANCZOS_TOL);
        (e.min.max(0.0).sqrt(), e.max.max(0.0).sqrt())
    }

    fn to_sparse(&self) -> SparseColumns {
        let n = self.size();
        let mut out = SparseColumns {
            starts: Vec::with_capacity(n + 1),
            rows: Vec::with_capacity(n * self.taps.len()),
            values: Vec::with_capacity(n * self.taps.len()),
        };
        for col in 0..n {
            out.starts.push(out.rows.len());
            let (l, m) = self.coords(col);
            for (p, q, av) in &self.taps {
                let j: Vec<i64> = l.iter().zip(p).map(|(a, b)| a + b).collect();
                let k: Vec<i64> = m.iter().zip(q).map(|(a, b)| a + b).collect();
                if let Some(row) = self.position(&j, &k) {
                    out.rows.push(row);
                    out.values.push(av * twist(self.gamma, dot(&l, q)));
                }
            }
        }
        out.starts.push(out.rows.len());
        out
    }
}

/// Compressed sparse column storage of a truncated operator.
struct SparseColumns {
    starts: Vec<usize>,
    rows: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseColumns {
    fn column(&self, col: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let range = self.starts[col]..self.starts[col + 1];
        self.rows[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![ZERO; x.len()];
        for (col, xv) in x.iter().enumerate() {
            for (row, v) in self.column(col) {
                y[row] += v * xv;
            }
        }
        y
    }

    fn apply_adjoint(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..x.len()).map(|col| self.column(col).map(|(row, v)| v.conj() * x[row]).sum()).collect()
    }
}

fn hermitian_tol(a: &TwistedSequence) -> f64 {
    1e-12 * a.l1_norm().max(1.0)
}

/// `ℓ²` spectral radius estimate from the radius-`R` truncation: the extreme
/// eigenvalue modulus for Hermitian `a`, otherwise the largest singular value.
/// Both approach the infinite-dimensional value from below as `R` grows.
pub fn spectral_radius_l2(a: &TwistedSequence, radius: usize) -> Result<f64> {
    let op = truncate(a, radius)?;
    if a.is_hermitian(hermitian_tol(a)) {
        let e = op.hermitian_extremes();
        Ok(e.min.abs().max(e.max.abs()))
    } else {
        Ok(op.singular_extremes().1)
    }
}

/// [`spectral_radius_l2`] with `R` starting at `4 ×` the support radius and
/// doubling until the estimate moves by less than 1%. Returns `(value, R)`.
pub fn spectral_radius_l2_auto(a: &TwistedSequence) -> Result<(f64, usize)> {
    auto_radius(a, |r| spectral_radius_l2(a, r))
}

pub(crate) fn auto_radius<F>(a: &TwistedSequence, mut estimate: F) -> Result<(f64, usize)>
where
    F: FnMut(usize) -> Result<f64>,
{
    let mut radius = (4 * a.support_radius() as usize).max(4);
    let mut value = estimate(radius)?;
    loop {
        let next = 2 * radius;
        if (2 * next + 1).pow(2 * a.dim() as u32) > MAX_AUTO_DIM {
            return Ok((value, radius));
        }
        let v = estimate(next)?;
        let settled = (v - value).abs() <= 0.01 * v.abs().max(1e-300);
        value = v;
        radius = next;
        if settled {
            return Ok((value, radius));
        }
    }
}

/// Extreme eigenvalues of the truncation of a Hermitian element.
pub fn extreme_eigenvalues(a: &TwistedSequence, radius: usize) -> Result<Extremes> {
    if !a.is_hermitian(hermitian_tol(a)) {
        return Err(Error::InvalidParameter("element is not Hermitian".into()));
    }
    Ok(truncate(a, radius)?.hermitian_extremes())
}

/// `ℓ¹` spectral radius from the norms of powers.
#[derive(Debug, Clone)]
pub struct L1RadiusEstimate {
    /// `‖a^{♮n}‖₁` for `n = 1..=n_max`.
    pub norms: Vec<f64>,
    /// `‖a^{♮n_max}‖₁^{1/n_max}`.
    pub root_estimate: f64,
    /// `exp(slope)` from a least-squares fit `log‖a^n‖ ≈ n·s + p·log n + c`
    /// over the upper half of the powers.
    pub extrapolated: f64,
}

/// Estimates `lim ‖a^{♮n}‖₁^{1/n}` using powers up to `n_max`.
pub fn l1_spectral_radius(a: &TwistedSequence, n_max: usize) -> Result<L1RadiusEstimate> {
    if n_max < 4 {
        return Err(Error::InvalidParameter("need at least 4 powers".into()));
    }
    let mut norms = Vec::with_capacity(n_max);
    if a.dim() == 1 {
        if let Some(base) = DenseSeq::try_from_seq(a) {
            let mut p = DenseSeq::identity();
            for _ in 0..n_max {
                p = base.conv(&p, a.gamma());
                norms.push(p.l1_norm());
            }
        }
    }
    if norms.is_empty() {
        let mut p = TwistedSequence::identity(a.dim(), a.gamma());
        for _ in 0..n_max {
            p = a.conv(&p)?;
            norms.push(p.l1_norm());
        }
    }
    let last = norms[n_max - 1];
    if norms.iter().any(|&x| x == 0.0) {
        return Ok(L1RadiusEstimate {
            norms,
            root_estimate: 0.0,
            extrapolated: 0.0,
        });
    }
    let root_estimate = last.powf(1.0 / n_max as f64);
    let lo = n_max / 2;
    let mut ata = nalgebra::Matrix3::<f64>::zeros();
    let mut atb = nalgebra::Vector3::<f64>::zeros();
    for n in lo..=n_max {
        let row = nalgebra::Vector3::new(n as f64, (n as f64).ln(), 1.0);
        ata += row * row.transpose();
        atb += row * norms[n - 1].ln();
    }
    let coef = ata.lu().solve(&atb).unwrap_or_else(|| nalgebra::Vector3::new(root_estimate.ln(), 0.0, 0.0));
    Ok(L1RadiusEstimate {
        norms,
        root_estimate,
        extrapolated: coef[0].exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_defect, max_abs, mat_vec};
    use crate::twisted::LatticeIndex;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_truncates_to_identity() {
        let e = TwistedSequence::identity(1, 0.3);
        let m = truncate(&e, 2).unwrap().to_dense();
        assert!(max_abs(&(m - CMatrix::identity(25, 25))) == 0.0);
    }

    #[test]
    fn shift_truncation_matches_conv_on_interior() {
        let gamma = 0.3;
        let a = TwistedSequence::delta(gamma, 1, 0).add(&TwistedSequence::delta(gamma, 0, 1).scale(c(0.5))).unwrap();
        let op = truncate(&a, 1).unwrap();
        assert_eq!(op.size(), 9);
        // basis vector at (l, m) = (-1, 0): its image stays inside the box
        let mut b = TwistedSequence::zero(1, gamma);
        b.add_at(LatticeIndex::new1(-1, 0), Complex64::new(0.3, -0.2));
        b.add_at(LatticeIndex::new1(0, -1), Complex64::new(1.1, 0.4));
        let mut x = vec![Complex64::new(0.0, 0.0); 9];
        for (i, v) in b.entries() {
            x[op.position(&i.j, &i.k).unwrap()] = *v;
        }
        let y = mat_vec(&op.to_dense(), &x);
        let want = a.conv(&b).unwrap();
        for (i, v) in want.entries() {
            let p = op.position(&i.j, &i.k).unwrap();
            assert!((y[p] - v).norm() < 1e-15);
        }
        let y2 = op.apply(&x);
        assert!(y.iter().zip(&y2).all(|(u, v)| (u - v).norm() < 1e-15));
    }

    #[test]
    fn hermitian_element_gives_hermitian_matrix() {
        let gamma = std::f64::consts::FRAC_1_SQRT_2;
        let a = TwistedSequence::identity(1, gamma)
            .add(&TwistedSequence::delta(gamma, 1, 0).scale(c(0.3)))
            .unwrap()
            .add(&TwistedSequence::delta(gamma, 0, 1).scale(c(0.3)))
            .unwrap();
        let b = a.involution().conv(&a).unwrap();
        assert!(b.is_hermitian(1e-13));
        let m = truncate(&b, 3).unwrap().to_dense();
        assert!(hermitian_defect(&m) < 1e-14);
    }

    #[test]
    fn adjoint_apply_is_the_adjoint() {
        let gamma = 0.37;
        let a = TwistedSequence::delta(gamma, 1, -1).add(&TwistedSequence::delta(gamma, 0, 2).scale(Complex64::new(0.2, 0.7))).unwrap();
        let op = truncate(&a, 2).unwrap();
        let m = op.to_dense();
        let x: Vec<Complex64> = (0..op.size()).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let want = mat_vec(&m.adjoint(), &x);
        let got = op.apply_adjoint(&x);
        assert!(want.iter().zip(&got).all(|(u, v)| (u - v).norm() < 1e-13));
    }

    #[test]
    fn scalar_radius() {
        let a = TwistedSequence::identity(1, 0.2).scale(Complex64::new(0.0, -2.5));
        assert!((spectral_radius_l2(&a, 3).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn shift_perturbation_radius_in_range() {
        let a = TwistedSequence::identity(1, 0.3).sub(&TwistedSequence::delta(0.3, 1, 0).scale(c(0.5))).unwrap();
        let mut prev = 0.0;
        for r in [8, 16, 32] {
            let v = spectral_radius_l2(&a, r).unwrap();
            assert!((0.5..=1.5 + 1e-12).contains(&v), "{v}");
            assert!(v >= prev - 1e-9);
            prev = v;
        }
        assert!(prev > 1.49);
    }

    #[test]
    fn hermitian_radius_increases_with_r() {
        let gamma = 0.41;
        let a = TwistedSequence::identity(1, gamma).add(&TwistedSequence::delta(gamma, 1, 1).scale(Complex64::new(0.2, 0.1))).unwrap();
        let b = a.involution().conv(&a).unwrap();
        let vals: Vec<f64> = [2, 4, 8, 16].iter().map(|&r| spectral_radius_l2(&b, r).unwrap()).collect();
        for w in vals.windows(2) {
            assert!(w[1] >= w[0] - 1e-9, "{vals:?}");
        }
    }

    #[test]
    fn l1_radius_of_commutative_element() {
        // a = e + 0.25(δ_(1,0) + δ_(-1,0)): phases vanish, ρ = 1.5
        let g = 0.3;
        let a = TwistedSequence::identity(1, g)
            .add(&TwistedSequence::delta(g, 1, 0).scale(c(0.25)))
            .unwrap()
            .add(&TwistedSequence::delta(g, -1, 0).scale(c(0.25)))
            .unwrap();
        let est = l1_spectral_radius(&a, 64).unwrap();
        assert!((est.extrapolated - 1.5).abs() < 1e-6, "{}", est.extrapolated);
        assert!(est.root_estimate <= 1.5 + 1e-12);
    }

    #[test]
    fn zero_radius_rejected() {
        assert!(truncate(&TwistedSequence::identity(1, 0.0), 0).is_err());
    }
}
