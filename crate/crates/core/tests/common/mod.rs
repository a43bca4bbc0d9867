#![allow(dead_code)]

use gaborkit::twisted::{LatticeIndex, TwistedSequence};
use gaborkit::{Complex64, Signal};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Nonzero signals with entries in the unit square.
pub fn signal(len: usize) -> impl Strategy<Value = Signal> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
        .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(|v| Signal::new(v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
}

pub fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| c(a, b))
}

/// Sequences on `ℤ²` with up to `n` entries supported in `[-r, r]²`.
pub fn sequence(gamma: f64, r: i64, n: usize) -> impl Strategy<Value = TwistedSequence> {
    prop::collection::vec(((-r..=r), (-r..=r), complex()), 1..=n).prop_map(move |v| {
        TwistedSequence::from_entries(1, gamma, v.into_iter().map(|(j, k, z)| (LatticeIndex::new1(j, k), z))).unwrap()
    })
}

pub fn random_signal(len: usize, rng: &mut ChaCha8Rng) -> Signal {
    Signal::new((0..len).map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect()).unwrap()
}

pub fn random_sequence(gamma: f64, r: i64, n: usize, rng: &mut ChaCha8Rng) -> TwistedSequence {
    TwistedSequence::from_entries(
        1,
        gamma,
        (0..n).map(|_| {
            (
                LatticeIndex::new1(rng.gen_range(-r..=r), rng.gen_range(-r..=r)),
                c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
            )
        }),
    )
    .unwrap()
}
