
use super::TwistedSequence;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::signal::root_of_unity;

/// `π(a) = Σ a_{jk} M_{jL/a_step} T_{kL/b_step}` on `ℂ^L`.
///
/// This is a *-homomorphism of the twisted algebra exactly when the
/// sequence's `γ` agrees with `L/(a_step·b_step)` modulo 1.
pub fn rep_pi(a: &TwistedSequence, len: usize, a_step: usize, b_step: usize) -> Result<CMatrix> {
    if a.dim() != 1 {
        return Err(Error::DimensionMismatch { left: 1, right: a.dim() });
    }
    for step in [a_step, b_step] {
        if step == 0 || len % step != 0 {
            return Err(Error::NotADivisor { step, len });
        }
    }
    let expected = len as f64 / (a_step * b_step) as f64;
    let diff = (a.gamma() - expected).rem_euclid(1.0);
    if diff.min(1.0 - diff) > 1e-12 {
        return Err(Error::GammaMismatch {
            left: a.gamma(),
            right: expected,
        });
    }
    let freq = (len / a_step) as i64;
    let time = (len / b_step) as i64;
    let mut out = CMatrix::zeros(len, len);
    for (idx, v) in a.entries() {
        let (j, k) = (idx.j[0], idx.k[0]);
        for t in 0..len {
            let src = (t as i64 - k * time).rem_euclid(len as i64) as usize;
            out[(t, src)] += v * root_of_unity(j * freq * t as i64, len);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use crate::linalg::max_abs;
    use crate::twisted::LatticeIndex;

    #[test]
    fn identity_maps_to_identity() {
        let e = TwistedSequence::identity(1, 1.0);
        let m = rep_pi(&e, 12, 3, 4).unwrap();
        assert_eq!(max_abs(&(m - CMatrix::identity(12, 12))), 0.0);
    }

    #[test]
    fn homomorphism_with_nontrivial_twist() {
        // L = 20, a = 4, b = 2: γ = 20/8 = 2.5, i.e. 1/2 mod 1
        let g = 2.5;
        let a = TwistedSequence::from_entries(
            1,
            g,
            vec![
                (LatticeIndex::new1(1, 0), Complex64::new(0.4, 0.1)),
                (LatticeIndex::new1(0, 1), Complex64::new(-0.3, 0.2)),
                (LatticeIndex::new1(2, -1), Complex64::new(0.1, 0.0)),
            ],
        )
        .unwrap();
        let b = TwistedSequence::from_entries(1, g, vec![(LatticeIndex::new1(1, 1), Complex64::new(0.0, 1.0)), (LatticeIndex::new1(-1, 0), Complex64::new(2.0, 0.0))]).unwrap();
        let pa = rep_pi(&a, 20, 4, 2).unwrap();
        let pb = rep_pi(&b, 20, 4, 2).unwrap();
        let pab = rep_pi(&a.conv(&b).unwrap(), 20, 4, 2).unwrap();
        assert!(max_abs(&(&pa * &pb - pab)) < 1e-12);
        let pstar = rep_pi(&a.involution(), 20, 4, 2).unwrap();
        assert!(max_abs(&(pa.adjoint() - pstar)) < 1e-12);
    }

    #[test]
    fn mismatched_gamma_rejected() {
        let e = TwistedSequence::identity(1, 0.5);
        assert!(matches!(rep_pi(&e, 12, 3, 4), Err(Error::GammaMismatch { .. })));
        assert!(matches!(rep_pi(&e, 12, 5, 4), Err(Error::NotADivisor { .. })));
    }
}
