//! Smooth one-dimensional profiles: the compactly supported bump
//! `exp(-1/(t(1-t)))`, its normalised running integral (a C^∞ step from 0 to 1),
//! and Gauss-Legendre quadrature.

use std::sync::OnceLock;

const TABLE_INTERVALS: usize = 4096;
const NODES_PER_INTERVAL: usize = 16;

/// The bump `exp(-1/(t(1-t)))` on (0,1), zero elsewhere.
pub fn bump(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    (-1.0 / (t * (1.0 - t))).exp()
}

fn bump_derivative(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    let w = t * (1.0 - t);
    bump(t) * (1.0 - 2.0 * t) / (w * w)
}

struct StepTable {
    values: Vec<f64>,
    mass: f64,
}

fn step_table() -> &'static StepTable {
    static TABLE: OnceLock<StepTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let (nodes, weights) = gauss_legendre(NODES_PER_INTERVAL);
        let w = 1.0 / TABLE_INTERVALS as f64;
        let mut values = Vec::with_capacity(TABLE_INTERVALS + 1);
        let mut acc = 0.0;
        values.push(0.0);
        for k in 0..TABLE_INTERVALS {
            let a = k as f64 * w;
            let mut part = 0.0;
            for (x, wt) in nodes.iter().zip(&weights) {
                part += wt * bump(a + 0.5 * w * (x + 1.0));
            }
            acc += 0.5 * w * part;
            values.push(acc);
        }
        let mass = acc;
        for v in values.iter_mut() {
            *v /= mass;
        }
        StepTable { values, mass }
    })
}

/// Integral of [`bump`] over (0,1).
pub fn bump_mass() -> f64 {
    step_table().mass
}

/// Normalised bump density on (0,1), integrating to one.
pub fn bump_density(t: f64) -> f64 {
    bump(t) / bump_mass()
}

/// C^∞ step: 0 for t ≤ 0, 1 for t ≥ 1, the normalised running integral of the
/// bump in between. Evaluated by quintic Hermite interpolation of a
/// precomputed table using the exact first and second derivatives.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let table = step_table();
    let scaled = t * TABLE_INTERVALS as f64;
    let k = (scaled.floor() as usize).min(TABLE_INTERVALS - 1);
    let u = scaled - k as f64;
    let w = 1.0 / TABLE_INTERVALS as f64;
    let t0 = k as f64 * w;
    let t1 = t0 + w;
    let m = table.mass;
    let (f0, f1) = (table.values[k], table.values[k + 1]);
    let (d0, d1) = (bump(t0) / m * w, bump(t1) / m * w);
    let (s0, s1) = (
        bump_derivative(t0) / m * w * w,
        bump_derivative(t1) / m * w * w,
    );
    let u2 = u * u;
    let u3 = u2 * u;
    let u4 = u3 * u;
    let u5 = u4 * u;
    let h0 = 1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5;
    let h1 = u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5;
    let h2 = 0.5 * (u2 - 3.0 * u3 + 3.0 * u4 - u5);
    let h3 = 0.5 * (u3 - 2.0 * u4 + u5);
    let h4 = -4.0 * u3 + 7.0 * u4 - 3.0 * u5;
    let h5 = 10.0 * u3 - 15.0 * u4 + 6.0 * u5;
    f0 * h0 + d0 * h1 + s0 * h2 + s1 * h3 + d1 * h4 + f1 * h5
}

/// 1 on `[0, inner]`, 0 on `[outer, ∞)`, smooth in between.
pub fn plateau(r: f64, inner: f64, outer: f64) -> f64 {
    1.0 - smooth_step((r - inner) / (outer - inner))
}

/// Radial bump `exp(-1/(1-u²))` on |u| < 1, used for compactly supported test data.
pub fn radial_bump(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        return 0.0;
    }
    (-1.0 / (1.0 - u * u)).exp()
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = x;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn step_is_monotone_and_symmetric() {
        let mut prev = 0.0;
        for k in 0..=2000 {
            let t = k as f64 / 2000.0;
            let v = smooth_step(t);
            assert!(v >= prev - 1e-15);
            assert_abs_diff_eq!(v + smooth_step(1.0 - t), 1.0, epsilon = 1e-13);
            prev = v;
        }
        assert_eq!(smooth_step(-0.1), 0.0);
        assert_eq!(smooth_step(1.1), 1.0);
    }

    #[test]
    fn step_derivative_matches_bump() {
        let h = 1e-6;
        for &t in &[0.1, 0.3, 0.5, 0.77] {
            let fd = (smooth_step(t + h) - smooth_step(t - h)) / (2.0 * h);
            assert_abs_diff_eq!(fd, bump_density(t), epsilon = 1e-7);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(64);
        let total: f64 = w.iter().sum();
        assert_abs_diff_eq!(total, 2.0, epsilon = 1e-13);
        let quartic: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
        assert_abs_diff_eq!(quartic, 0.4, epsilon = 1e-13);
        let (x3, w3) = gauss_legendre(3);
        assert_abs_diff_eq!(x3[2], (0.6f64).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(w3[1], 8.0 / 9.0, epsilon = 1e-15);
    }
}
