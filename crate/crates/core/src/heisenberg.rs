//! The discrete Heisenberg group `ℍ_d`, its Gabor representation on `ℂ^L`,
//! the compact-centre group `H_γ` with the embedding `J`, and the
//! representations `σ_{γ,δ}` on `ℤ_N`.
//!
//! Group law: `(j,k,l)·(j',k',l') = (j+j', k+k', l+l'+k·j')`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::signal::{cis_turns, root_of_unity};
use crate::twisted::{dot, LatticeIndex, TwistedSequence};

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeisenbergElement {
    pub j: Vec<i64>,
    pub k: Vec<i64>,
    pub l: i64,
}

impl HeisenbergElement {
    pub fn new(j: Vec<i64>, k: Vec<i64>, l: i64) -> Result<Self> {
        if j.len() != k.len() || j.is_empty() {
            return Err(Error::DimensionMismatch {
                left: j.len(),
                right: k.len(),
            });
        }
        Ok(Self { j, k, l })
    }

    pub fn new1(j: i64, k: i64, l: i64) -> Self {
        Self { j: vec![j], k: vec![k], l }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            j: vec![0; dim],
            k: vec![0; dim],
            l: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.j.len()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(Self {
            j: self.j.iter().zip(&other.j).map(|(a, b)| a + b).collect(),
            k: self.k.iter().zip(&other.k).map(|(a, b)| a + b).collect(),
            l: self.l + other.l + dot(&self.k, &other.j),
        })
    }

    /// `(−j, −k, −l + k·j)`.
    pub fn inverse(&self) -> Self {
        Self {
            j: self.j.iter().map(|x| -x).collect(),
            k: self.k.iter().map(|x| -x).collect(),
            l: -self.l + dot(&self.k, &self.j),
        }
    }

    pub fn is_central(&self) -> bool {
        self.j.iter().chain(&self.k).all(|&x| x == 0)
    }

    /// `x y x⁻¹ y⁻¹`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.mul(&self.inverse())?.mul(&other.inverse())
    }
}

/// `h_mul` under its operational name.
pub fn h_mul(x: &HeisenbergElement, y: &HeisenbergElement) -> Result<HeisenbergElement> {
    x.mul(y)
}

fn check_steps(len: usize, a_step: usize, b_step: usize) -> Result<()> {
    for step in [a_step, b_step] {
        if step == 0 || len % step != 0 {
            return Err(Error::NotADivisor { step, len });
        }
    }
    Ok(())
}

/// `q` with `ab/L = p/q` in lowest terms; the kernel of [`pi_rep`] is `qZ`.
pub fn kernel_period(len: usize, a_step: usize, b_step: usize) -> Result<usize> {
    check_steps(len, a_step, b_step)?;
    Ok(len / gcd(a_step * b_step, len))
}

/// `π(j,k,l) = e^{−2πi(ab/L)l} M_{jb} T_{ka}` on `ℂ^L` (dimension one).
pub fn pi_rep(x: &HeisenbergElement, len: usize, a_step: usize, b_step: usize) -> Result<CMatrix> {
    check_steps(len, a_step, b_step)?;
    if x.dim() != 1 {
        return Err(Error::DimensionMismatch { left: 1, right: x.dim() });
    }
    let (a, b) = (a_step as i64, b_step as i64);
    let central = root_of_unity(-(a * b % len as i64) * x.l, len);
    let mut out = CMatrix::zeros(len, len);
    for t in 0..len {
        let src = (t as i64 - x.k[0] * a).rem_euclid(len as i64) as usize;
        out[(t, src)] = central * root_of_unity(x.j[0] * b * t as i64, len);
    }
    Ok(out)
}

/// An element `(j, k, ζ)` of `H_γ = ℤ^d × ℤ^d × 𝕋`.
#[derive(Debug, Clone, PartialEq)]
pub struct HGammaElement {
    pub j: Vec<i64>,
    pub k: Vec<i64>,
    pub zeta: Complex64,
}

const UNIT_TOL: f64 = 1e-12;

impl HGammaElement {
    pub fn new(j: Vec<i64>, k: Vec<i64>, zeta: Complex64) -> Result<Self> {
        if j.len() != k.len() || j.is_empty() {
            return Err(Error::DimensionMismatch {
                left: j.len(),
                right: k.len(),
            });
        }
        if (zeta.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidParameter(format!("|zeta| = {} is not 1", zeta.norm())));
        }
        Ok(Self { j, k, zeta })
    }

    /// Image of `(j,k,l)` under `(j,k,l) ↦ (j,k,e^{−2πiγl})`.
    pub fn from_heisenberg(x: &HeisenbergElement, gamma: f64) -> Self {
        Self {
            j: x.j.clone(),
            k: x.k.clone(),
            zeta: cis_turns(-gamma * x.l as f64),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            j: vec![0; dim],
            k: vec![0; dim],
            zeta: Complex64::new(1.0, 0.0),
        }
    }

    pub fn mul(&self, other: &Self, gamma: f64) -> Result<Self> {
        hgamma_mul(self, other, gamma)
    }

    pub fn inverse(&self, gamma: f64) -> Self {
        Self {
            j: self.j.iter().map(|x| -x).collect(),
            k: self.k.iter().map(|x| -x).collect(),
            zeta: self.zeta.conj() * cis_turns(-gamma * dot(&self.k, &self.j) as f64),
        }
    }

    /// Same lattice part and `ζ` within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.j == other.j && self.k == other.k && (self.zeta - other.zeta).norm() <= tol
    }
}

/// `(j,k,ζ)(j',k',ζ') = (j+j', k+k', ζζ' e^{−2πiγ k·j'})`.
pub fn hgamma_mul(x: &HGammaElement, y: &HGammaElement, gamma: f64) -> Result<HGammaElement> {
    if x.j.len() != y.j.len() {
        return Err(Error::DimensionMismatch {
            left: x.j.len(),
            right: y.j.len(),
        });
    }
    for z in [x.zeta, y.zeta] {
        if (z.norm() - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidParameter(format!("|zeta| = {} is not 1", z.norm())));
        }
    }
    Ok(HGammaElement {
        j: x.j.iter().zip(&y.j).map(|(a, b)| a + b).collect(),
        k: x.k.iter().zip(&y.k).map(|(a, b)| a + b).collect(),
        zeta: x.zeta * y.zeta * cis_turns(-gamma * dot(&x.k, &y.j) as f64),
    })
}

/// A function on `supp × {ζ_q = e^{2πiq/Q}}`, sampled from `H_γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct JTable {
    pub q_grid: usize,
    pub gamma: f64,
    pub values: BTreeMap<LatticeIndex, Vec<Complex64>>,
}

/// `ζ_q = e^{2πiq/Q}`.
pub fn grid_point(q: usize, q_grid: usize) -> Complex64 {
    root_of_unity(q as i64, q_grid)
}

/// Grid position of a unit complex number, if it lies on the `Q`-grid.
fn grid_index(z: Complex64, q_grid: usize) -> Option<usize> {
    let turns = (z.arg() / (2.0 * PI)).rem_euclid(1.0) * q_grid as f64;
    let q = turns.round();
    if (turns - q).abs() > 1e-8 {
        return None;
    }
    Some(q as usize % q_grid)
}

/// Samples `J(a)(j,k,ζ) = ζ⁻¹ a_{jk}` on the `Q` roots of unity.
pub fn j_embed(a: &TwistedSequence, q_grid: usize) -> Result<JTable> {
    if q_grid == 0 {
        return Err(Error::InvalidParameter("zeta grid must have at least one point".into()));
    }
    let values = a
        .entries()
        .map(|(i, v)| {
            let row = (0..q_grid).map(|q| grid_point(q, q_grid).conj() * v).collect();
            (i.clone(), row)
        })
        .collect();
    Ok(JTable {
        q_grid,
        gamma: a.gamma(),
        values,
    })
}

impl JTable {
    pub fn get(&self, idx: &LatticeIndex, q: usize) -> Complex64 {
        self.values.get(idx).map(|r| r[q % self.q_grid]).unwrap_or_default()
    }

    /// `max |f(j,k,ζ) − ζ⁻¹ f(j,k,1)|` over the table.
    pub fn covariance_defect(&self) -> f64 {
        self.values
            .values()
            .flat_map(|row| {
                (0..self.q_grid).map(move |q| (row[q] - grid_point(q, self.q_grid).conj() * row[0]).norm())
            })
            .fold(0.0, f64::max)
    }

    /// Brute-force convolution on `H_γ` with the circle replaced by the
    /// `Q`-grid (normalised counting measure). Requires every product's
    /// central coordinate to land on the grid, which holds when `γ = p/q`
    /// with `q | Q`.
    pub fn group_convolution(&self, other: &JTable) -> Result<JTable> {
        if self.q_grid != other.q_grid {
            return Err(Error::DimensionMismatch {
                left: self.q_grid,
                right: other.q_grid,
            });
        }
        if (self.gamma - other.gamma).abs() > 1e-14 {
            return Err(Error::GammaMismatch {
                left: self.gamma,
                right: other.gamma,
            });
        }
        let qn = self.q_grid;
        let weight = 1.0 / qn as f64;
        let mut out: BTreeMap<LatticeIndex, Vec<Complex64>> = BTreeMap::new();
        for (yi, yrow) in &self.values {
            for (zi, zrow) in &other.values {
                let twist = cis_turns(-self.gamma * dot(&yi.k, &zi.j) as f64);
                let xi = yi.add(zi);
                let row = out.entry(xi).or_insert_with(|| vec![Complex64::new(0.0, 0.0); qn]);
                for qy in 0..qn {
                    for qz in 0..qn {
                        let zeta = grid_point(qy, qn) * grid_point(qz, qn) * twist;
                        let qx = grid_index(zeta, qn).ok_or_else(|| {
                            Error::InvalidParameter(format!("gamma {} does not close on a {qn}-point grid", self.gamma))
                        })?;
                        row[qx] += yrow[qy] * zrow[qz] * weight;
                    }
                }
            }
        }
        out.retain(|_, r| r.iter().any(|z| z.norm() > 0.0));
        Ok(JTable {
            q_grid: qn,
            gamma: self.gamma,
            values: out,
        })
    }

    /// Largest pointwise difference over the union of supports.
    pub fn max_abs_diff(&self, other: &JTable) -> f64 {
        let keys: std::collections::BTreeSet<&LatticeIndex> = self.values.keys().chain(other.values.keys()).collect();
        keys.into_iter()
            .flat_map(|k| (0..self.q_grid).map(move |q| (self.get(k, q) - other.get(k, q)).norm()))
            .fold(0.0, f64::max)
    }
}

/// `[σ_{γ,δ}(j,k,l) c]_n = e^{2πi(δj − γl + nγj)} c_{n−k}` on `ℤ_N`.
pub fn sigma_rep(gamma: f64, delta: f64, x: &HeisenbergElement, c: &[Complex64]) -> Result<Vec<Complex64>> {
    if x.dim() != 1 {
        return Err(Error::DimensionMismatch { left: 1, right: x.dim() });
    }
    let n_len = c.len();
    if n_len == 0 {
        return Err(Error::EmptySignal);
    }
    let (j, k, l) = (x.j[0], x.k[0], x.l);
    Ok((0..n_len)
        .map(|n| {
            let phase = delta * j as f64 - gamma * l as f64 + n as f64 * gamma * j as f64;
            cis_turns(phase) * c[(n as i64 - k).rem_euclid(n_len as i64) as usize]
        })
        .collect())
}

/// Matrix of `σ_{γ,δ}(x)` on `ℂ^N`.
pub fn sigma_matrix(gamma: f64, delta: f64, x: &HeisenbergElement, n_len: usize) -> Result<CMatrix> {
    let mut out = CMatrix::zeros(n_len, n_len);
    let mut e = vec![Complex64::new(0.0, 0.0); n_len];
    for col in 0..n_len {
        e.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        e[col] = Complex64::new(1.0, 0.0);
        let y = sigma_rep(gamma, delta, x, &e)?;
        out.column_mut(col).iter_mut().zip(&y).for_each(|(o, v)| *o = *v);
    }
    Ok(out)
}
