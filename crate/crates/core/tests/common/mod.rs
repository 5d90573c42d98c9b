//! Oracles shared by the integration tests. Nothing here calls the closed-form
//! brachistochrone times; they are recovered numerically.

#![allow(dead_code)]

use ptsym_core::linalg::{Complex, Gate2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Phase-invariant indicator whose first sign change marks arrival at `|1⟩`
/// for states of the form `g·(c, −i·s)` with real `c`, `s`: returns
/// `Im(a0·conj(a1)) / ‖a‖²`, which has the sign of `c·s`.
pub fn arrival_indicator(state: [Complex; 2]) -> f64 {
    let n2 = state[0].norm_sqr() + state[1].norm_sqr();
    (state[0] * state[1].conj()).im / n2
}

/// Smallest `t > 0` (up to `horizon`) where `indicator(t)` changes sign,
/// found by a geometric scan followed by bisection.
pub fn first_passage(indicator: impl Fn(f64) -> f64, horizon: f64) -> Option<f64> {
    let mut lo = horizon * 1e-12;
    let mut f_lo = indicator(lo);
    loop {
        let hi = (lo * 1.01).min(horizon);
        let f_hi = indicator(hi);
        if f_lo > 0.0 && f_hi <= 0.0 {
            return Some(bisect(&indicator, lo, hi));
        }
        if hi >= horizon {
            return None;
        }
        lo = hi;
        f_lo = f_hi;
    }
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn random_gate(rng: &mut ChaCha8Rng, bound: f64) -> Gate2 {
    let mut m = Gate2::zeros();
    for row in m.entries.iter_mut() {
        for z in row.iter_mut() {
            *z = Complex::new(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
        }
    }
    m
}

pub fn pt_grid_fractions() -> [f64; 5] {
    [0.0, 0.25, 0.5, 0.75, 1.0]
}
