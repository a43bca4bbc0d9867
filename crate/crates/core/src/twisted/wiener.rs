//! Inversion in the twisted algebra through the Hermitian element `a^* ♮ a`.

use num_complex::Complex64;

use super::dense::DenseSeq;
use super::operator::{truncate, MAX_AUTO_DIM};
use super::TwistedSequence;
use crate::error::{Error, Result};

/// Relative headroom added to the upper eigenvalue estimate: box truncations
/// see the spectrum from inside.
const UPPER_SLACK: f64 = 0.05;

/// Relative change below which an eigenvalue estimate counts as settled.
const SETTLE: f64 = 0.01;
/// Lanczos tolerance for the extreme eigenvalues driving the iteration.
const EXTREMES_TOL: f64 = 1e-6;
/// Fraction of the current term threshold that may be cropped from a term.
const TRIM_FRACTION: f64 = 1e-4;

#[derive(Debug, Clone)]
pub struct WienerInverse {
    pub inverse: TwistedSequence,
    /// Neumann terms summed.
    pub terms: usize,
    /// `‖a ♮ a⁻¹ − e‖₁`.
    pub right_residual: f64,
    /// `‖a⁻¹ ♮ a − e‖₁`.
    pub left_residual: f64,
    /// Extreme eigenvalue estimates of `a^* ♮ a` on the truncated `ℓ²`.
    pub lower: f64,
    pub upper: f64,
    /// Truncation radius used for the estimates.
    pub radius: usize,
    /// `ℓ¹` norm of the last Neumann term.
    pub last_term: f64,
}

/// Storage for the running Neumann term and partial sum.
trait Accumulator: Clone {
    fn unit(dim: usize, gamma: f64) -> Self;
    fn left_mul(&self, q: &Self, gamma: f64) -> Self;
    fn l1(&self) -> f64;
    fn add_scaled(&mut self, other: &Self, c: Complex64);
    fn to_seq(&self, gamma: f64) -> TwistedSequence;
    fn trim(&mut self, _budget: f64) {}
}

impl Accumulator for DenseSeq {
    fn unit(_: usize, _: f64) -> Self {
        DenseSeq::identity()
    }
    fn left_mul(&self, q: &Self, gamma: f64) -> Self {
        q.conv(self, gamma)
    }
    fn l1(&self) -> f64 {
        self.l1_norm()
    }
    fn add_scaled(&mut self, other: &Self, c: Complex64) {
        DenseSeq::add_scaled(self, other, c)
    }
    fn to_seq(&self, gamma: f64) -> TwistedSequence {
        DenseSeq::to_seq(self, gamma)
    }
    fn trim(&mut self, budget: f64) {
        DenseSeq::trim(self, budget)
    }
}

impl Accumulator for TwistedSequence {
    fn unit(dim: usize, gamma: f64) -> Self {
        TwistedSequence::identity(dim, gamma)
    }
    fn left_mul(&self, q: &Self, _: f64) -> Self {
        q.conv(self).expect("same algebra")
    }
    fn l1(&self) -> f64 {
        self.l1_norm()
    }
    fn add_scaled(&mut self, other: &Self, c: Complex64) {
        for (i, v) in other.entries() {
            self.add_at(i.clone(), v * c);
        }
    }
    fn to_seq(&self, _: f64) -> TwistedSequence {
        self.clone()
    }
}

/// Inverts `a` in `(ℓ¹(ℤ^{2d}), ♮_γ)`.
///
/// With `b = a^* ♮ a` and extreme eigenvalue estimates `m ≤ M` of `L_b`,
/// `b⁻¹ = c Σ_n (e − c b)^{♮n}` for `c = 2/(m+M)` and `a⁻¹ = b⁻¹ ♮ a^*`.
/// Terms are added until one has `ℓ¹` norm at most `tol` and both one-sided
/// residuals are at most `10·tol`. If the lower eigenvalue estimate keeps
/// moving as the truncation grows, the spectrum is not resolved and
/// [`Error::UnresolvedSpectrum`] is returned.
pub fn wiener_invert(a: &TwistedSequence, tol: f64, max_terms: usize) -> Result<WienerInverse> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let gamma = a.gamma();
    let e = TwistedSequence::identity(a.dim(), gamma);
    if a.is_empty() {
        return Err(Error::SingularAtTruncation {
            sigma_min: 0.0,
            radius: 1,
        });
    }
    let a_star = a.involution();
    let b = a_star.conv(a)?;

    let (lower, upper, radius) = extremes(&b)?;
    let sigma_min = lower.max(0.0).sqrt();
    if sigma_min <= tol {
        return Err(Error::SingularAtTruncation { sigma_min, radius });
    }
    let contraction = (upper * (1.0 + UPPER_SLACK) - lower) / (upper * (1.0 + UPPER_SLACK) + lower);
    let predicted = (tol.ln() / contraction.ln()).ceil();
    if predicted > max_terms as f64 {
        return Err(Error::NotConverged {
            terms: 0,
            last_term: 1.0,
        });
    }
    let c = 2.0 / (lower + upper * (1.0 + UPPER_SLACK));
    let q = e.sub(&b.scale(Complex64::new(c, 0.0)))?;

    let finish = |sum: TwistedSequence, terms: usize, last_term: f64| -> Result<WienerInverse> {
        let inverse = sum.scale(Complex64::new(c, 0.0)).conv(&a_star)?;
        let right_residual = a.conv(&inverse)?.l1_distance(&e)?;
        let left_residual = inverse.conv(a)?.l1_distance(&e)?;
        Ok(WienerInverse {
            inverse,
            terms,
            right_residual,
            left_residual,
            lower,
            upper,
            radius,
            last_term,
        })
    };

    if a.dim() == 1 {
        if let Some(qd) = DenseSeq::try_from_seq(&q) {
            return neumann(&qd, gamma, a.dim(), tol, max_terms, finish);
        }
    }
    neumann(&q, gamma, a.dim(), tol, max_terms, finish)
}

/// Extreme eigenvalues of `L_b` on boxes of radius `4·supp`, doubled until
/// both move by less than 1%.
fn extremes(b: &TwistedSequence) -> Result<(f64, f64, usize)> {
    let settled = |old: f64, new: f64| (new - old).abs() <= SETTLE * new.abs().max(1e-300);
    let mut radius = (4 * b.support_radius() as usize).max(4);
    let mut ext = truncate(b, radius)?.hermitian_extremes_short(EXTREMES_TOL);
    loop {
        let next = 2 * radius;
        if (2 * next + 1).pow(2 * b.dim() as u32) > MAX_AUTO_DIM {
            return Err(Error::UnresolvedSpectrum { lower: ext.min, radius });
        }
        let e = truncate(b, next)?.hermitian_extremes_short(EXTREMES_TOL);
        let done = settled(ext.min, e.min) && settled(ext.max, e.max);
        ext = e;
        radius = next;
        if done {
            return Ok((ext.min, ext.max, radius));
        }
    }
}

fn neumann<A, F>(q: &A, gamma: f64, dim: usize, tol: f64, max_terms: usize, finish: F) -> Result<WienerInverse>
where
    A: Accumulator,
    F: Fn(TwistedSequence, usize, f64) -> Result<WienerInverse>,
{
    let mut term = A::unit(dim, gamma);
    let mut sum = A::unit(dim, gamma);
    let mut threshold = tol;
    let mut last = 1.0;
    for n in 1..=max_terms {
        term = term.left_mul(q, gamma);
        term.trim(TRIM_FRACTION * threshold);
        last = term.l1();
        sum.add_scaled(&term, Complex64::new(1.0, 0.0));
        if last <= threshold {
            let out = finish(sum.to_seq(gamma), n + 1, last)?;
            if out.right_residual <= 10.0 * tol && out.left_residual <= 10.0 * tol {
                return Ok(out);
            }
            threshold /= 10.0;
        }
        if !last.is_finite() {
            break;
        }
    }
    Err(Error::NotConverged {
        terms: max_terms + 1,
        last_term: last,
    })
}
