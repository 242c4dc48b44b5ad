//! Hardy–Littlewood maximal functions and η-kernel convolutions on the periodic grid.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{fft_nd, Domain, Grid, GridFunction};
use crate::C64;

/// Dyadic ladder h·2^k, k = 0, 1, … up to 2T.
pub fn default_radii(grid: &Grid) -> Vec<f64> {
    let mut out = Vec::new();
    let mut r = grid.spacing();
    while r <= 2.0 * grid.half_extent() * (1.0 + 1e-12) {
        out.push(r);
        r *= 2.0;
    }
    out
}

/// Displacement (x_i − x_j) for a flat circular offset index.
fn displacement(grid: &Grid, idx: usize) -> [f64; 2] {
    let h = grid.spacing();
    let ix = grid.multi_index(idx);
    let mut d = [0.0; 2];
    for a in 0..grid.dim() {
        d[a] = grid.signed_index(ix[a]) as f64 * h;
    }
    d
}

/// Periodic convolution `Σ_j k[(i − j) mod N] f[j]` with the kernel given in circular layout.
fn circular_convolve(grid: &Grid, kernel: &[C64], f: &[C64]) -> Vec<C64> {
    let mut kh = kernel.to_vec();
    let mut fh = f.to_vec();
    fft_nd(grid, &mut kh, false);
    fft_nd(grid, &mut fh, false);
    for (a, b) in fh.iter_mut().zip(&kh) {
        *a *= b;
    }
    fft_nd(grid, &mut fh, true);
    let scale = 1.0 / grid.len() as f64;
    fh.iter_mut().for_each(|v| *v *= scale);
    fh
}

fn ball_averages(grid: &Grid, values: &[f64], radii: &[f64]) -> Result<Vec<f64>> {
    if radii.is_empty() {
        return Err(Error::InvalidInput("radii must be nonempty".into()));
    }
    if let Some(r) = radii.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
        return Err(Error::InvalidInput(format!("invalid radius {r}")));
    }
    let f: Vec<C64> = values.iter().map(|&v| C64::new(v, 0.0)).collect();
    let per_radius: Vec<Vec<f64>> = radii
        .par_iter()
        .map(|&r| {
            let tol = 1e-12 * r.max(grid.spacing());
            let mut count = 0usize;
            let ind: Vec<C64> = (0..grid.len())
                .map(|k| {
                    if grid.norm(displacement(grid, k)) <= r + tol {
                        count += 1;
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
                .collect();
            circular_convolve(grid, &ind, &f).iter().map(|z| (z.re / count as f64).max(0.0)).collect()
        })
        .collect();
    let mut out = vec![0.0f64; grid.len()];
    for avg in per_radius {
        for (o, a) in out.iter_mut().zip(avg) {
            *o = o.max(a);
        }
    }
    Ok(out)
}

/// `(Mf)(x)`: maximum over `radii` of the average of |f| over the discrete ball at x.
pub fn hl_maximal(f: &GridFunction, radii: &[f64]) -> Result<GridFunction> {
    f.expect_domain(Domain::Spatial)?;
    let avg = ball_averages(f.grid(), &f.abs_values(), radii)?;
    GridFunction::new(*f.grid(), avg.into_iter().map(|v| C64::new(v, 0.0)).collect(), Domain::Spatial)
}

/// `(M(|f|^r))^{1/r}` for 0 < r ≤ 1.
pub fn hl_maximal_r(f: &GridFunction, r: f64, radii: &[f64]) -> Result<GridFunction> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::OutOfRange(format!("r = {r} must lie in (0, 1]")));
    }
    f.expect_domain(Domain::Spatial)?;
    let pow: Vec<f64> = f.abs_values().iter().map(|v| v.powf(r)).collect();
    let avg = ball_averages(f.grid(), &pow, radii)?;
    GridFunction::new(*f.grid(), avg.into_iter().map(|v| C64::new(v.powf(1.0 / r), 0.0)).collect(), Domain::Spatial)
}

/// `η_{ν,m}(x) = 2^{νn}(1 + |2^ν x|)^{−m}` sampled in circular layout.
#[derive(Clone, Debug)]
pub struct EtaKernel {
    pub nu: u32,
    pub m_exponent: f64,
    pub grid: Grid,
    values: Vec<f64>,
    /// Factor applied so that h^n Σ values matches ∫η_m (1 when that integral diverges).
    scale: f64,
}

/// `∫_{R^n} (1+|x|)^{−m} dx`, finite for m > n.
pub fn eta_integral(dim: usize, m: f64) -> Option<f64> {
    match dim {
        1 if m > 1.0 => Some(2.0 / (m - 1.0)),
        2 if m > 2.0 => Some(2.0 * std::f64::consts::PI / ((m - 1.0) * (m - 2.0))),
        _ => None,
    }
}

pub fn eta_value(dim: usize, nu: u32, m: f64, x: [f64; 2]) -> f64 {
    let s = 2f64.powi(nu as i32);
    let r = x[..dim].iter().map(|v| v * v).sum::<f64>().sqrt();
    s.powi(dim as i32) * (1.0 + s * r).powf(-m)
}

impl EtaKernel {
    pub fn new(grid: &Grid, nu: u32, m: f64) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidInput(format!("m = {m} must be positive")));
        }
        if nu > 60 {
            return Err(Error::OutOfRange(format!("nu = {nu} too large")));
        }
        let values: Vec<f64> = (0..grid.len()).map(|k| eta_value(grid.dim(), nu, m, displacement(grid, k))).collect();
        let discrete = grid.cell_volume() * values.iter().sum::<f64>();
        let scale = eta_integral(grid.dim(), m).map_or(1.0, |c| c / discrete);
        Ok(EtaKernel { nu, m_exponent: m, grid: *grid, values, scale })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Kernel samples (unscaled) as a centred spatial function, for inspection.
    pub fn to_grid_function(&self) -> GridFunction {
        let g = self.grid;
        GridFunction::from_fn(g, |x| C64::new(eta_value(g.dim(), self.nu, self.m_exponent, [x[0], x.get(1).copied().unwrap_or(0.0)]), 0.0))
    }

    pub fn convolve(&self, f: &GridFunction) -> Result<GridFunction> {
        f.expect_domain(Domain::Spatial)?;
        f.grid().check_same(&self.grid)?;
        let k: Vec<C64> = self.values.iter().map(|&v| C64::new(v * self.scale * self.grid.cell_volume(), 0.0)).collect();
        GridFunction::new(self.grid, circular_convolve(&self.grid, &k, f.samples()), Domain::Spatial)
    }
}

/// Periodic `η_{ν,m} ∗ f` with the discrete integral renormalised to the continuum value.
pub fn eta_convolve(f: &GridFunction, nu: u32, m: f64) -> Result<GridFunction> {
    EtaKernel::new(f.grid(), nu, m)?.convolve(f)
}

/// Smallest c with `2^{k(s(x)−s(y))}(1+2^k|x−y|)^{−m} ≤ c` whenever
/// `|s(x)−s(y)| ≤ c_log / ln(e + 1/|x−y|)`, scanned over k ≤ `k_max` and a log grid of distances.
pub fn weight_shift_constant(c_log: f64, m: f64, k_max: u32) -> f64 {
    let e = std::f64::consts::E;
    let mut best = 1.0f64;
    for k in 0..=k_max {
        let a = k as f64 * std::f64::consts::LN_2 * c_log;
        let sk = 2f64.powi(k as i32);
        for i in 0..=4000 {
            let d = 10f64.powf(-20.0 + 24.0 * i as f64 / 4000.0);
            let v = a / (e + 1.0 / d).ln() - m * (1.0 + sk * d).ln();
            best = best.max(v.exp());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn brute_average(f: &[f64], g: &Grid, i: usize, r: f64, pow: f64) -> f64 {
        let mut s = 0.0;
        let mut c = 0;
        for j in 0..g.len() {
            let ii = g.multi_index(i);
            let jj = g.multi_index(j);
            let n = g.samples_per_axis();
            let mut d = [0.0; 2];
            for a in 0..g.dim() {
                let k = (ii[a] + n - jj[a]) % n;
                d[a] = g.signed_index(k) as f64 * g.spacing();
            }
            if g.norm(d) <= r * (1.0 + 1e-12) {
                s += f[j].powf(pow);
                c += 1;
            }
        }
        s / c as f64
    }

    #[test]
    fn constants_and_indicator() {
        let g = Grid::new(1, 4.0, 128).unwrap();
        let c = GridFunction::from_fn(g, |_| C64::new(0.0, -2.5));
        let radii = default_radii(&g);
        assert_eq!(radii.len(), 8);
        for v in hl_maximal(&c, &radii).unwrap().samples() {
            assert!((v.re - 2.5).abs() < 1e-12);
        }
        for v in hl_maximal_r(&c, 0.3, &radii).unwrap().samples() {
            assert!((v.re - 2.5).abs() < 1e-12);
        }
        assert!(hl_maximal(&c, &[]).is_err());
        assert!(hl_maximal_r(&c, 0.0, &radii).is_err());
        assert!(hl_maximal_r(&c, 1.5, &radii).is_err());

        let ind = GridFunction::from_real_fn(g, |x| if (0.0..=1.0).contains(&x[0]) { 1.0 } else { 0.0 });
        let vals = ind.abs_values();
        let m = hl_maximal(&ind, &radii).unwrap();
        let mr = hl_maximal_r(&ind, 0.5, &radii).unwrap();
        let m1 = hl_maximal_r(&ind, 1.0, &radii).unwrap();
        for i in (0..g.len()).step_by(7) {
            let brute = radii.iter().map(|&r| brute_average(&vals, &g, i, r, 1.0)).fold(0.0, f64::max);
            assert!((m.samples()[i].re - brute).abs() < 1e-12);
            assert!((m1.samples()[i].re - brute).abs() < 1e-12);
            let brute_r = radii.iter().map(|&r| brute_average(&vals, &g, i, r, 0.5)).fold(0.0, f64::max).powi(2);
            assert!((mr.samples()[i].re - brute_r).abs() < 1e-12);
            assert!(m.samples()[i].re >= brute_average(&vals, &g, i, radii[0], 1.0) - 1e-14);
        }
        // Mf(2): the average over [2−r, 2+r] ∩ [0,1] is maximised at some ladder radius.
        let i2 = (0..g.len()).find(|&i| (g.axis_coord(i) - 2.0).abs() < 1e-12).unwrap();
        assert!(m.samples()[i2].re > 0.0 && m.samples()[i2].re < 0.5);
    }

    #[test]
    fn maximal_two_dim_brute() {
        let g = Grid::new(2, 2.0, 16).unwrap();
        let f = GridFunction::from_real_fn(g, |x| (x[0] - 0.3 * x[1]).sin() + 0.2);
        let radii = [0.25, 0.6, 1.1];
        let m = hl_maximal(&f, &radii).unwrap();
        let vals = f.abs_values();
        for i in 0..g.len() {
            let brute = radii.iter().map(|&r| brute_average(&vals, &g, i, r, 1.0)).fold(0.0, f64::max);
            assert!((m.samples()[i].re - brute).abs() < 1e-12);
        }
    }

    #[test]
    fn eta_constant_matches_quadrature() {
        for (dim, t, n, nu, m) in [(1usize, 16.0, 1024usize, 0u32, 3.0), (1, 16.0, 1024, 3, 2.5), (2, 8.0, 128, 1, 4.0)] {
            let g = Grid::new(dim, t, n).unwrap();
            let one = GridFunction::from_real_fn(g, |_| 1.0);
            let out = eta_convolve(&one, nu, m).unwrap();
            // Independent radial quadrature of ∫η_m.
            let (xs, ws) = crate::profile::gauss_legendre(64);
            let mut quad = 0.0;
            for seg in 0..200 {
                let (a, b) = (seg as f64 * 5.0, (seg + 1) as f64 * 5.0);
                for (x, w) in xs.iter().zip(&ws) {
                    let r = 0.5 * (a + b) + 0.5 * (b - a) * x;
                    let jac = if dim == 1 { 2.0 } else { 2.0 * std::f64::consts::PI * r };
                    quad += 0.5 * (b - a) * w * jac * (1.0 + r).powf(-m);
                }
            }
            let tail = if dim == 1 { 2.0 * 1001f64.powf(1.0 - m) / (m - 1.0) } else { 2.0 * std::f64::consts::PI * (1001f64.powf(2.0 - m) / (m - 2.0) - 1001f64.powf(1.0 - m) / (m - 1.0)) };
            quad += tail;
            for v in out.samples() {
                assert_relative_eq!(v.re, quad, max_relative = 1e-6);
                assert!(v.im.abs() < 1e-12);
            }
        }
        let g = Grid::new(1, 4.0, 64).unwrap();
        let z = GridFunction::zeros(g, Domain::Spatial);
        assert!(eta_convolve(&z, 2, 3.0).unwrap().is_zero());
        assert!(eta_convolve(&z, 2, 0.0).is_err());
    }

    #[test]
    fn eta_matches_direct_sum() {
        let g = Grid::new(1, 4.0, 64).unwrap();
        let f = GridFunction::from_real_fn(g, |x| (-x[0] * x[0]).exp() + 0.1 * x[0]);
        let k = EtaKernel::new(&g, 2, 3.0).unwrap();
        let out = k.convolve(&f).unwrap();
        let n = g.samples_per_axis();
        for i in 0..n {
            let mut s = 0.0;
            for j in 0..n {
                let d = g.signed_index((i + n - j) % n) as f64 * g.spacing();
                s += eta_value(1, 2, 3.0, [d, 0.0]) * f.samples()[j].re;
            }
            s *= g.spacing() * k.scale();
            assert!((out.samples()[i].re - s).abs() < 1e-12);
        }
    }

    #[test]
    fn weight_shift_constant_is_finite_and_at_least_one() {
        let c = weight_shift_constant(0.5, 1.5, 40);
        assert!(c >= 1.0 && c.is_finite());
        assert!(weight_shift_constant(0.0, 1.0, 40) == 1.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn eta_linear(a in -2.0f64..2.0, b in -2.0f64..2.0, nu in 0u32..4) {
            let g = Grid::new(1, 4.0, 64).unwrap();
            let f = GridFunction::from_real_fn(g, |x| (a * x[0]).sin());
            let h = GridFunction::from_real_fn(g, |x| (-(x[0] - b).powi(2)).exp());
            let lhs = eta_convolve(&f.add(&h).unwrap(), nu, 3.0).unwrap();
            let rhs = eta_convolve(&f, nu, 3.0).unwrap().add(&eta_convolve(&h, nu, 3.0).unwrap()).unwrap();
            prop_assert!(lhs.sub(&rhs).unwrap().max_abs() <= 1e-12);
        }

        #[test]
        fn maximal_dominates_and_is_sublinear(a in 0.1f64..3.0, b in -2.0f64..2.0) {
            let g = Grid::new(1, 4.0, 64).unwrap();
            let mut radii = vec![0.0];
            radii.extend(default_radii(&g));
            let f = GridFunction::from_real_fn(g, |x| (a * x[0]).cos());
            let h = GridFunction::from_real_fn(g, |x| (-(x[0] - b).powi(2)).exp());
            let mf = hl_maximal(&f, &radii).unwrap();
            let mh = hl_maximal(&h, &radii).unwrap();
            let ms = hl_maximal(&f.add(&h).unwrap(), &radii).unwrap();
            for i in 0..g.len() {
                prop_assert!(mf.samples()[i].re >= f.samples()[i].norm() - 1e-12);
                prop_assert!(ms.samples()[i].re <= mf.samples()[i].re + mh.samples()[i].re + 1e-12);
            }
        }
    }
}
