//! Seeded random test functions and exponent fields.
//!
//! Every generator draws from its own ChaCha8 stream, so adding members to one corpus
//! never perturbs another.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exponents::{ExponentField, ExponentRole};
use crate::grid::{Grid, GridFunction};
use crate::mixed_norms::QExponent;
use crate::C64;

pub const DEFAULT_SEED: u64 = 0;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Real trigonometric polynomial with torus frequencies `k π/T`, `|k|_∞ ≤ k_max`.
pub fn trig_polynomial(grid: &Grid, rng: &mut ChaCha8Rng, k_max: i64, terms: usize) -> GridFunction {
    let w = std::f64::consts::PI / grid.half_extent();
    let dim = grid.dim();
    let modes: Vec<([f64; 2], f64, f64)> = (0..terms)
        .map(|_| {
            let mut k = [0.0; 2];
            for a in k.iter_mut().take(dim) {
                *a = rng.gen_range(-k_max..=k_max) as f64 * w;
            }
            (k, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect();
    GridFunction::from_real_fn(*grid, |x| {
        modes.iter().map(|(k, a, ph)| a * (k[0] * x[0] + k[1] * x.get(1).copied().unwrap_or(0.0) + ph).cos()).sum()
    })
}

/// Gaussian bump with random centre in the inner quarter and width in [0.4, 1].
pub fn gaussian(grid: &Grid, rng: &mut ChaCha8Rng) -> GridFunction {
    let t = grid.half_extent();
    let dim = grid.dim();
    let mut c = [0.0; 2];
    for a in c.iter_mut().take(dim) {
        *a = rng.gen_range(-t / 4.0..t / 4.0);
    }
    let width: f64 = rng.gen_range(0.4..1.0);
    let amp: f64 = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    GridFunction::from_real_fn(*grid, |x| {
        let r2: f64 = x.iter().zip(c).map(|(xi, ci)| (xi - ci).powi(2)).sum();
        amp * (-r2 / (width * width)).exp()
    })
}

/// Alternating low-frequency trigonometric polynomials and Gaussians.
pub fn smooth_corpus(grid: &Grid, seed: u64, count: usize) -> Vec<GridFunction> {
    let mut r = rng(seed, 1);
    let k_max = ((grid.nyquist() / 8.0) / (std::f64::consts::PI / grid.half_extent())).floor().max(1.0) as i64;
    (0..count)
        .map(|i| if i % 2 == 0 { gaussian(grid, &mut r) } else { trig_polynomial(grid, &mut r, k_max, 4) })
        .collect()
}

/// Rapidly decaying smooth functions: products of a Gaussian and a trigonometric polynomial.
pub fn decaying_corpus(grid: &Grid, seed: u64, count: usize) -> Vec<GridFunction> {
    let mut r = rng(seed, 2);
    (0..count)
        .map(|_| {
            let g = gaussian(grid, &mut r);
            let t = trig_polynomial(grid, &mut r, 3, 3);
            let shift = r.gen_range(1.5..2.5);
            g.zip_with(&t, |a, b| a * (b + C64::new(shift, 0.0))).expect("same grid")
        })
        .collect()
}

/// Rough random samples: i.i.d. uniform values, with a random sign and scale per function.
pub fn random_samples(grid: &Grid, seed: u64, stream: u64, count: usize) -> Vec<GridFunction> {
    let mut r = rng(seed, 100 + stream);
    (0..count)
        .map(|_| {
            let scale = 10f64.powf(r.gen_range(-2.0..2.0));
            let v: Vec<C64> = (0..grid.len()).map(|_| C64::new(scale * r.gen_range(-1.0..1.0), 0.0)).collect();
            GridFunction::new(*grid, v, crate::grid::Domain::Spatial).expect("length matches grid")
        })
        .collect()
}

/// Smooth exponent `base + amp·exp(−|x − c|²/w²)`, constant `base` at infinity.
pub fn bump_exponent(grid: &Grid, role: ExponentRole, base: f64, amp: f64, center: [f64; 2], width: f64) -> Result<ExponentField> {
    ExponentField::from_fn(*grid, role, |x| {
        let r2: f64 = x.iter().zip(center).map(|(a, c)| (a - c).powi(2)).sum();
        base + amp * (-r2 / (width * width)).exp()
    })?
    .with_limit(Some(base))
}

/// A triple (p, q, s) of smooth exponents.
#[derive(Clone, Debug)]
pub struct ExponentTriple {
    pub p: ExponentField,
    pub q: QExponent,
    pub s: ExponentField,
}

/// Random smooth triples with `p ∈ [p_lo, p_hi]`, `q ∈ [1.2, 3]` and
/// `s ∈ [s_lo, s_lo + 0.5]`.
pub fn exponent_triples(grid: &Grid, seed: u64, count: usize, p_lo: f64, p_hi: f64, s_lo: f64) -> Result<Vec<ExponentTriple>> {
    let mut r = rng(seed, 3);
    let t = grid.half_extent();
    let mut center = || {
        let mut c = [0.0; 2];
        for a in c.iter_mut().take(grid.dim()) {
            *a = r.gen_range(-t / 3.0..t / 3.0);
        }
        c
    };
    let centers: Vec<[f64; 2]> = (0..3 * count).map(|_| center()).collect();
    let mut out = Vec::with_capacity(count);
    for (i, c) in centers.chunks(3).enumerate() {
        let u = rng(seed, 1000 + i as u64).gen_range(0.0..1.0);
        let p_base = p_lo + (p_hi - p_lo) * 0.5 * u;
        let p = bump_exponent(grid, ExponentRole::Integrability, p_base, (p_hi - p_base) * 0.9, c[0], 1.0 + u)?;
        let q = bump_exponent(grid, ExponentRole::Integrability, 1.2 + u, 0.8, c[1], 1.5)?;
        let s = bump_exponent(grid, ExponentRole::Smoothness, s_lo + 0.2 * u, 0.3, c[2], 1.2)?;
        out.push(ExponentTriple { p, q: QExponent::Finite(q), s });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpora_are_reproducible() {
        let g = Grid::new(2, 4.0, 32).unwrap();
        let a = smooth_corpus(&g, 7, 4);
        let b = smooth_corpus(&g, 7, 4);
        assert_eq!(a, b);
        assert_ne!(a, smooth_corpus(&g, 8, 4));
        let t = exponent_triples(&g, 3, 2, 1.5, 3.0, 0.6).unwrap();
        assert!(t.iter().all(|e| e.p.inf_value() >= 1.5 && e.p.sup_value() <= 3.0));
        assert!(t.iter().all(|e| e.s.inf_value() >= 0.6 - 1e-12));
    }

    #[test]
    fn trig_polynomials_are_periodic_band_limited() {
        let g = Grid::new(1, 4.0, 64).unwrap();
        let f = trig_polynomial(&g, &mut rng(1, 0), 3, 5);
        let spec = f.forward_transform().unwrap();
        let top = 3.0 * std::f64::consts::PI / 4.0 + 1e-9;
        for (i, v) in spec.samples().iter().enumerate() {
            if g.frequency(i)[0].abs() > top {
                assert!(v.norm() <= 1e-10 * f.max_abs());
            }
        }
    }
}
