//! The sampling kernel κ, its inverse transform and the φ-transform synthesis.

use rayon::prelude::*;

use super::sequence::{lattice_half, CoefficientArray};
use crate::error::{Error, Result};
use crate::grid::{fft_axes, Domain, Grid, GridFunction};
use crate::profile::plateau;
use crate::C64;

pub const KAPPA_INNER: f64 = 3.0;
pub const KAPPA_OUTER: f64 = 3.01;

/// 1-D factor of κ: 1 on [−3, 3], 0 outside (−3.01, 3.01).
pub fn kappa_profile(t: f64) -> f64 {
    plateau(t.abs(), KAPPA_INNER, KAPPA_OUTER)
}

/// Multi-indices β with |β| ≤ `max` in `dim` dimensions, graded by |β|.
pub fn multi_indices(dim: usize, max: u32) -> Vec<[u32; 2]> {
    let mut out = Vec::new();
    for total in 0..=max {
        if dim == 1 {
            out.push([total, 0]);
        } else {
            for b0 in (0..=total).rev() {
                out.push([b0, total - b0]);
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct KappaKernel {
    grid: Grid,
    beta_max: u32,
    kappa: GridFunction,
    inv_kappa: GridFunction,
    derivatives: Vec<([u32; 2], GridFunction)>,
}

pub fn build_kappa(grid: &Grid, beta_max: u32) -> Result<KappaKernel> {
    if grid.nyquist() <= KAPPA_OUTER {
        return Err(Error::Resolution(format!("Nyquist {:.4} must exceed {KAPPA_OUTER}", grid.nyquist())));
    }
    let g = *grid;
    let kappa = GridFunction::spectral_from_fn(g, |xi| C64::new(xi.iter().map(|t| kappa_profile(*t)).product(), 0.0));
    let inv_kappa = kappa.inverse_transform()?;
    let derivatives = multi_indices(g.dim(), beta_max)
        .into_par_iter()
        .map(|beta| crate::grid::spectral_derivative(&inv_kappa, &beta[..g.dim()]).map(|d| (beta, d)))
        .collect::<Result<Vec<_>>>()?;
    Ok(KappaKernel { grid: g, beta_max, kappa, inv_kappa, derivatives })
}

impl KappaKernel {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn beta_max(&self) -> u32 {
        self.beta_max
    }

    pub fn kappa(&self) -> &GridFunction {
        &self.kappa
    }

    /// `F^{-1}κ` on the grid, i.e. the kernel periodised with period 2T.
    pub fn inv_kappa(&self) -> &GridFunction {
        &self.inv_kappa
    }

    pub fn derivative(&self, beta: [u32; 2]) -> Option<&GridFunction> {
        self.derivatives.iter().find(|(b, _)| *b == beta).map(|(_, d)| d)
    }

    /// Least-squares slope of log max|∂^β F^{-1}κ| against log |y| over dyadic
    /// shells inside `[y_min, y_max]` along the first axis; returned with sign flipped.
    pub fn decay_exponent(&self, beta: [u32; 2], y_min: f64, y_max: f64) -> Result<f64> {
        let d = self.derivative(beta).ok_or_else(|| Error::OutOfRange(format!("β = {beta:?} not cached")))?;
        if !(y_min > 0.0 && y_max > 2.0 * y_min && y_max <= self.grid.half_extent()) {
            return Err(Error::InvalidInput("need 0 < y_min, 2 y_min < y_max <= T".into()));
        }
        let g = self.grid;
        let row = if g.dim() == 2 { g.origin_index() } else { 0 };
        let mut pts = Vec::new();
        let mut lo = y_min;
        while lo * 2.0 <= y_max * (1.0 + 1e-12) {
            let mut peak = 0.0f64;
            for i in 0..g.samples_per_axis() {
                let y = g.axis_coord(i).abs();
                if y >= lo && y < 2.0 * lo {
                    let idx = if g.dim() == 2 { g.flat_index([i, row]) } else { i };
                    peak = peak.max(d.samples()[idx].norm());
                }
            }
            if peak > 0.0 {
                pts.push(((lo * 2f64.sqrt()).ln(), peak.ln()));
            }
            lo *= 2.0;
        }
        if pts.len() < 2 {
            return Err(Error::Resolution("too few shells for a decay fit".into()));
        }
        let n = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (mx, my) = (sx / n, sy / n);
        let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Ok(-num / den)
    }
}

/// `∂^b K(k·P/len)` for k = 0..len, where `K(y) = Σ_l F^{-1}κ_1(y + lP)` is the
/// 1-D kernel periodised with period `P`. Requires `P/len < π/3.01`.
pub fn lattice_table(period: f64, len: usize, order: u32) -> Result<Vec<f64>> {
    if period / len as f64 >= std::f64::consts::PI / KAPPA_OUTER {
        return Err(Error::Resolution(format!("table spacing {} too coarse for κ", period / len as f64)));
    }
    let dw = 2.0 * std::f64::consts::PI / period;
    let mut data: Vec<C64> = (0..len)
        .map(|k| {
            let s = if k < len / 2 { k as i64 } else { k as i64 - len as i64 };
            let w = s as f64 * dw;
            C64::new(0.0, w).powu(order) * kappa_profile(w)
        })
        .collect();
    fft_axes(len, 1, &mut data, true);
    let c = dw / (2.0 * std::f64::consts::PI).sqrt();
    Ok(data.into_iter().map(|z| z.re * c).collect())
}

/// Row-major `rows × cols` real matrix.
pub(crate) struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    /// `A · X` for a complex `cols × k` block `x` (row-major).
    pub fn apply(&self, x: &[C64], k: usize) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.rows * k];
        out.par_chunks_mut(k).enumerate().for_each(|(r, orow)| {
            let arow = &self.data[r * self.cols..(r + 1) * self.cols];
            for (c, &a) in arow.iter().enumerate() {
                if a != 0.0 {
                    let xrow = &x[c * k..(c + 1) * k];
                    for (o, xv) in orow.iter_mut().zip(xrow) {
                        *o += a * xv;
                    }
                }
            }
        });
        out
    }
}

pub(crate) fn transpose(x: &[C64], rows: usize, cols: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); x.len()];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = x[r * cols + c];
        }
    }
    out
}

/// Applies `A` along every axis of a dense `size^dim` block.
pub(crate) fn separable_apply(a: &Matrix, block: &[C64], dim: usize) -> Vec<C64> {
    if dim == 1 {
        return a.apply(block, 1);
    }
    // rows: (A B)ᵀ then A again, giving A B Aᵀ.
    let first = a.apply(block, a.cols);
    let t = transpose(&first, a.rows, a.cols);
    let second = a.apply(&t, a.rows);
    transpose(&second, a.rows, a.rows)
}

/// `f(x) = (2π)^{−n/2} Σ_m S_m ∂^b K(R x − m)` per axis with `R = 2^ν`; `S` must
/// cover the full level-ν lattice of the torus.
pub(crate) fn lattice_synthesis_matrix(grid: &Grid, nu: u32, order: u32) -> Result<Matrix> {
    let half = lattice_half(grid, nu)?;
    let m_count = 2 * half as usize;
    let r = 2f64.powi(nu as i32);
    let rh = r * grid.spacing();
    let step = rh.min(1.0);
    let period = m_count as f64;
    let len = (period / step).round() as usize;
    if ((period / step) - len as f64).abs() > 1e-9 || (1.0 / step - (1.0 / step).round()).abs() > 1e-9 || (rh / step - (rh / step).round()).abs() > 1e-9 {
        return Err(Error::Resolution(format!("grid spacing {} incompatible with lattice level {nu}", grid.spacing())));
    }
    let table = lattice_table(period, len, order)?;
    let per_unit = (1.0 / step).round() as i64;
    let per_cell = (rh / step).round() as i64;
    let n = grid.samples_per_axis();
    let mut data = vec![0.0; n * m_count];
    for i in 0..n {
        // R x_i − m = (i·Rh − T R − m), measured in table steps.
        for (mi, slot) in data[i * m_count..(i + 1) * m_count].iter_mut().enumerate() {
            let m = mi as i64 - half;
            let k = i as i64 * per_cell - (half + m) * per_unit;
            *slot = table[k.rem_euclid(len as i64) as usize];
        }
    }
    Ok(Matrix { rows: n, cols: m_count, data })
}

/// Samples `f(m/2^ν)` on the whole level-ν lattice of the torus. Lattices coarser than the
/// grid are read off directly; finer ones come from the trigonometric interpolant of the samples.
pub fn lattice_samples(f: &GridFunction, nu: u32) -> Result<CoefficientArray> {
    f.expect_domain(Domain::Spatial)?;
    let g = *f.grid();
    let mut level = super::sequence::DyadicLevel::torus(&g, nu)?;
    let size = level.size();
    match super::sequence::cube_stride(&g, nu) {
        Ok(stride) => {
            for idx in 0..level.values().len() {
                let ix = if g.dim() == 1 { [idx * stride, 0] } else { [(idx / size) * stride, (idx % size) * stride] };
                level.values_mut()[idx] = f.samples()[g.flat_index(ix)];
            }
        }
        Err(_) => level.values_mut().copy_from_slice(&trig_upsample(f.samples(), g.samples_per_axis(), size, g.dim())?),
    }
    let mut out = CoefficientArray::new(g.dim());
    out.insert_level(level)?;
    Ok(out)
}

/// Trigonometric interpolation from `n` to `m` points per axis (m a multiple of n). The
/// Nyquist coefficient is split evenly between ±n/2 so real data stay real.
fn trig_upsample(samples: &[C64], n: usize, m: usize, dim: usize) -> Result<Vec<C64>> {
    if !m.is_multiple_of(n) {
        return Err(Error::Resolution(format!("lattice of {m} points is not a refinement of the {n}-point grid")));
    }
    let mut spec = samples.to_vec();
    fft_axes(n, dim, &mut spec, false);
    // Destination slots (and weights) of one signed source frequency along an axis.
    let slots = |k: usize| -> Vec<(usize, f64)> {
        let half = n / 2;
        if k < half {
            vec![(k, 1.0)]
        } else if k > half {
            vec![(m - (n - k), 1.0)]
        } else {
            vec![(half, 0.5), (m - half, 0.5)]
        }
    };
    let scale = 1.0 / n.pow(dim as u32) as f64;
    let mut out = vec![C64::new(0.0, 0.0); m.pow(dim as u32)];
    if dim == 1 {
        for (k, v) in spec.iter().enumerate() {
            for (d, w) in slots(k) {
                out[d] += v * w * scale;
            }
        }
    } else {
        for (idx, v) in spec.iter().enumerate() {
            for (d0, w0) in slots(idx / n) {
                for (d1, w1) in slots(idx % n) {
                    out[d0 * m + d1] += v * (w0 * w1 * scale);
                }
            }
        }
    }
    fft_axes(m, dim, &mut out, true);
    Ok(out)
}

/// `f = (2π)^{−n/2} Σ_m f(m/R) F^{-1}κ(R· − m)` with `R = 2^ν` on the periodic grid.
pub fn phi_transform_synthesize(samples: &CoefficientArray, kernel: &KappaKernel, nu: u32) -> Result<GridFunction> {
    let g = kernel.grid;
    if samples.dim() != g.dim() {
        return Err(Error::InvalidInput("sample and grid dimensions differ".into()));
    }
    let half = lattice_half(&g, nu)?;
    let m_count = 2 * half as usize;
    let mut block = vec![C64::new(0.0, 0.0); m_count.pow(g.dim() as u32)];
    if let Some(level) = samples.level(nu) {
        let covers = (0..g.dim()).all(|a| level.origin()[a] <= -half && level.origin()[a] + level.size() as i64 >= half);
        if !covers && level.max_abs() > 0.0 {
            return Err(Error::OutOfRange(format!("samples at level {nu} do not cover the lattice [-{half}, {half})^n")));
        }
        for (b, v) in block.iter_mut().enumerate() {
            let m = if g.dim() == 1 { [b as i64 - half, 0] } else { [(b / m_count) as i64 - half, (b % m_count) as i64 - half] };
            *v = level.get(m);
        }
    }
    if let Some(extra) = samples.levels().find(|l| l.nu() != nu && l.max_abs() > 0.0) {
        return Err(Error::InvalidInput(format!("samples carry level {} besides {nu}", extra.nu())));
    }
    let a = lattice_synthesis_matrix(&g, nu, 0)?;
    let c = (2.0 * std::f64::consts::PI).powf(-(g.dim() as f64) / 2.0);
    let out = separable_apply(&a, &block, g.dim());
    GridFunction::new(g, out.into_iter().map(|v| v * c).collect(), Domain::Spatial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kappa_plateau_values() {
        let g = Grid::new(2, 4.0, 64).unwrap();
        let k = build_kappa(&g, 2).unwrap();
        for idx in 0..g.len() {
            let xi = g.frequency(idx);
            let sup = xi[0].abs().max(xi[1].abs());
            let v = k.kappa().samples()[idx].re;
            if sup <= 3.0 {
                assert!((v - 1.0).abs() <= 1e-12);
            }
            if sup >= 3.01 {
                assert!(v.abs() <= 1e-12);
            }
        }
        assert!(build_kappa(&Grid::new(1, 8.0, 8).unwrap(), 0).is_err());
        assert_eq!(multi_indices(2, 2).len(), 6);
    }

    #[test]
    fn lattice_table_matches_grid_kernel() {
        // With period 2T and spacing h the table is F^{-1}κ on the grid itself.
        let g = Grid::new(1, 8.0, 256).unwrap();
        let k = build_kappa(&g, 2).unwrap();
        for b in 0..=2u32 {
            let t = lattice_table(16.0, 256, b).unwrap();
            let d = k.derivative([b, 0]).unwrap();
            for i in 0..256 {
                // grid index i has x = −8 + i h; table index is x/h mod 256.
                let ti = (i + 128) % 256;
                assert!((d.samples()[i].re - t[ti]).abs() < 1e-10, "b={b} i={i}");
                assert!(d.samples()[i].im.abs() < 1e-10);
            }
        }
    }

    fn check_reconstruction(f: &GridFunction, nu: u32) -> f64 {
        let g = *f.grid();
        let k = build_kappa(&g, 0).unwrap();
        let s = lattice_samples(f, nu).unwrap();
        let r = phi_transform_synthesize(&s, &k, nu).unwrap();
        let mut err = 0.0f64;
        for idx in 0..g.len() {
            let x = g.point(idx);
            if x[..g.dim()].iter().all(|v| v.abs() <= g.half_extent() / 2.0) {
                err = err.max((r.samples()[idx] - f.samples()[idx]).norm());
            }
        }
        err / f.max_abs()
    }

    #[test]
    fn phi_transform_reconstructs_band_limited() {
        let g = Grid::new(1, 8.0, 512).unwrap();
        let w = 3.0 * PI / 8.0;
        let plane = GridFunction::from_fn(g, |x| C64::from_polar(1.0, w * x[0]));
        assert!(check_reconstruction(&plane, 0) <= 1e-10);
        // Spectrum out to 2.9·2: needs R = 2.
        let wide = GridFunction::from_fn(g, |x| C64::from_polar(1.0, 15.0 * PI / 8.0 * x[0]) + 0.5 * (PI / 8.0 * x[0]).cos());
        assert!(check_reconstruction(&wide, 1) <= 1e-10);
        let g2 = Grid::new(2, 4.0, 32).unwrap();
        let trig = GridFunction::from_fn(g2, |x| C64::new((0.75 * PI * x[0]).cos() * (0.5 * PI * x[1]).sin(), 0.3) + C64::from_polar(0.2, PI / 4.0 * (x[0] - 2.0 * x[1])));
        assert!(check_reconstruction(&trig, 0) <= 1e-10);
        let zero = CoefficientArray::new(1);
        let k = build_kappa(&g, 0).unwrap();
        assert!(phi_transform_synthesize(&zero, &k, 0).unwrap().is_zero());
        let partial = CoefficientArray::from_entries(1, &[(0, [0, 0], C64::new(1.0, 0.0))]).unwrap();
        assert!(phi_transform_synthesize(&partial, &k, 0).is_err());
    }

    #[test]
    fn decay_fit_on_large_grid() {
        let g = Grid::new(1, 8192.0, 1 << 17).unwrap();
        let k = build_kappa(&g, 0).unwrap();
        // The 0.01-wide plateau edge makes the tail sinc-like until |y| ~ 10^3.
        let e = k.decay_exponent([0, 0], 1024.0, 8192.0).unwrap();
        assert!(e >= 4.0, "fitted decay exponent {e}");
    }
}
