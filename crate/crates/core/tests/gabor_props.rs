mod common;

use common::{c, random_signal, signal};
use gaborkit::gabor::{
    density_trace_probe, dual_window, frame_bounds, frame_operator, janssen, normalized_trace, FrameOperator,
    GaborSystem,
};
use gaborkit::linalg::{hermitian_defect, hermitian_eigenvalues, max_abs, operator_norm};
use gaborkit::{Signal, Window};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Divisor pairs of 24 with at least as many atoms as samples.
fn lattice() -> impl Strategy<Value = (usize, usize)> {
    prop::sample::select(vec![(2, 3), (3, 4), (4, 6), (2, 12), (6, 4), (3, 8), (4, 4), (1, 24)])
}

/// Strictly redundant divisor pairs, `ab < 24`.
fn redundant_lattice() -> impl Strategy<Value = (usize, usize)> {
    prop::sample::select(vec![(2, 3), (3, 4), (4, 4), (2, 8), (3, 6), (4, 3), (1, 12), (6, 3)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn frame_operator_is_hermitian_psd((a, b) in lattice(), phi in signal(24)) {
        let sys = GaborSystem::new(phi, a, b).unwrap();
        let s = frame_operator(&sys, None).unwrap();
        prop_assert!(hermitian_defect(&s) <= 1e-13 * operator_norm(&s).max(1.0));
        prop_assert!(hermitian_eigenvalues(&s)[0] >= -1e-12 * operator_norm(&s));
    }

    #[test]
    fn janssen_matches_frame_operator((a, b) in lattice(), phi in signal(24), psi in signal(24)) {
        let sys = GaborSystem::new(phi.normalized().unwrap(), a, b).unwrap();
        let psi = psi.normalized().unwrap();
        for p in [None, Some(&psi)] {
            let s = frame_operator(&sys, p).unwrap();
            let j = janssen(&sys, p).unwrap().operator();
            prop_assert!(operator_norm(&(s - j)) <= 1e-10);
        }
    }

    #[test]
    fn trace_identity((a, b) in lattice(), phi in signal(24), psi in signal(24)) {
        let sys = GaborSystem::new(phi.clone(), a, b).unwrap();
        let t = normalized_trace(&frame_operator(&sys, Some(&psi)).unwrap()).unwrap();
        let want = psi.inner(&phi).unwrap() * sys.redundancy();
        prop_assert!((t - want).norm() <= 1e-12 * (1.0 + want.norm()));
        let t = normalized_trace(&frame_operator(&sys, None).unwrap()).unwrap();
        prop_assert!((t.re - sys.redundancy() * phi.norm_sqr()).abs() <= 1e-12 * t.re.abs().max(1.0));
    }

    #[test]
    fn dual_expansions_reconstruct((a, b) in redundant_lattice(), f in signal(24)) {
        let phi = Window::Gaussian(24f64.sqrt()).generate(24).unwrap();
        let sys = GaborSystem::new(phi, a, b).unwrap();
        let dual = sys.with_window(dual_window(&sys).unwrap()).unwrap();
        let r1 = sys.synthesis(&dual.analysis(&f).unwrap()).unwrap();
        let r2 = dual.synthesis(&sys.analysis(&f).unwrap()).unwrap();
        prop_assert!(r1.max_abs_diff(&f).unwrap() <= 1e-10);
        prop_assert!(r2.max_abs_diff(&f).unwrap() <= 1e-10);
    }
}

#[test]
fn operator_inequalities_hold_for_random_signals() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let phi = Window::Gaussian(5.0).generate(30).unwrap();
    let sys = GaborSystem::new(phi, 3, 5).unwrap();
    let fb = frame_bounds(&sys);
    let op = FrameOperator::new(&sys, None).unwrap();
    for _ in 0..200 {
        let f = random_signal(30, &mut rng);
        let q = op.apply(&f).unwrap().inner(&f).unwrap().re;
        let n = f.norm_sqr();
        assert!(q >= fb.lower * n * (1.0 - 1e-9) && q <= fb.upper * n * (1.0 + 1e-9));
    }
}

#[test]
fn overcritical_lattices_are_never_frames() {
    let windows = [Window::Delta, Window::TwoPoint, Window::Boxcar(4), Window::Gaussian(3.0), Window::Gaussian(6.0)];
    for (a, b) in [(4, 8), (6, 6), (3, 12), (8, 4), (12, 6), (24, 2)] {
        assert!(a * b > 24);
        for w in &windows {
            let sys = GaborSystem::new(w.generate(24).unwrap(), a, b).unwrap();
            assert!(!frame_bounds(&sys).is_frame, "{w} a={a} b={b}");
        }
    }
}

#[test]
fn trace_probe_examples() {
    let two = Window::TwoPoint.generate(8).unwrap();
    let sys = GaborSystem::new(two.clone(), 2, 4).unwrap();
    let p = density_trace_probe(&two, &sys, &[1.0]).unwrap();
    assert!((p[0].value - c(0.5, 0.0)).norm() < 1e-14);

    let phi = Window::Gaussian(24f64.sqrt()).generate(24).unwrap();
    let sys = GaborSystem::new(phi.clone(), 3, 4).unwrap();
    let p = density_trace_probe(&phi, &sys, &[1e-8]).unwrap();
    assert!((p[0].value.re - 0.5).abs() < 1e-6);
    assert!(p[0].lower_ok && p[0].upper_ok);
}

#[test]
fn offset_gaussian_example() {
    let samples: Vec<f64> = (0..16).map(|t| (-std::f64::consts::PI * ((t as f64 - 8.0) / 4.0).powi(2)).exp()).collect();
    let phi = Signal::from_real(&samples).unwrap();
    let sys = GaborSystem::new(phi, 2, 4).unwrap();
    let s = frame_operator(&sys, None).unwrap();
    let j = janssen(&sys, None).unwrap().operator();
    assert!(max_abs(&(s - j)) <= 1e-12);
}
