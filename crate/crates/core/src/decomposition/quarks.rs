//! Quarks `ψ^β(2^ν x − m)`, quarkonial analysis and synthesis, and the quark norm.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kappa::{lattice_table, multi_indices, KappaKernel};
use super::sequence::{lattice_half, seq_norm, CoefficientArray, DyadicLevel};
use crate::error::{Error, Result};
use crate::exponents::{sigma_of, ExponentField};
use crate::grid::{fft_axes, Domain, Grid, GridFunction};
use crate::littlewood_paley::{phi_symbol, Flavor, ResolutionOfUnity};
use crate::mixed_norms::QExponent;
use crate::profile::smooth_step;
use crate::C64;

/// Half-width of supp μ: the unit hat mollified over radius 0.05.
pub const MU_HALF_WIDTH: f64 = 0.55;
pub const DEFAULT_RHO: u32 = 2;
pub const DEFAULT_BETA_MAX: u32 = 6;

/// `1_{[−1/2,1/2]}` mollified: `S((t + 0.55)/0.1) − S((t − 0.45)/0.1)`. Its integer
/// translates telescope to exactly 1.
pub fn mu(t: f64) -> f64 {
    smooth_step((t + MU_HALF_WIDTH) / 0.1) - smooth_step((t - 0.45) / 0.1)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuarkBasis {
    pub dim: usize,
    /// supp ψ ⊂ B(2^r).
    pub r: f64,
    pub rho: u32,
    pub beta_max: u32,
}

impl QuarkBasis {
    pub fn new(dim: usize, rho: u32, beta_max: u32) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidInput(format!("dimension {dim} not supported")));
        }
        let r = (MU_HALF_WIDTH * (dim as f64).sqrt()).log2();
        if rho as f64 <= r {
            return Err(Error::OutOfRange(format!("rho = {rho} must exceed r = {r:.4}")));
        }
        Ok(QuarkBasis { dim, r, rho, beta_max })
    }

    pub fn default_for(dim: usize) -> Result<Self> {
        Self::new(dim, DEFAULT_RHO, DEFAULT_BETA_MAX)
    }

    pub fn psi(&self, y: &[f64]) -> f64 {
        y[..self.dim].iter().map(|t| mu(*t)).product()
    }

    /// `ψ^β(y) = y^β ψ(y)`.
    pub fn psi_beta(&self, beta: [u32; 2], y: &[f64]) -> f64 {
        (0..self.dim).map(|a| y[a].powi(beta[a] as i32) * mu(y[a])).product()
    }

    /// `max |Σ_m ψ(x − m) − 1|` over the grid points.
    pub fn partition_defect(&self, grid: &Grid) -> f64 {
        let mut worst = 0.0f64;
        for idx in 0..grid.len() {
            let x = grid.point(idx);
            let per_axis: f64 = (0..self.dim)
                .map(|a| {
                    let c = x[a].round();
                    (-2..=2).map(|k| mu(x[a] - (c + k as f64))).sum::<f64>()
                })
                .product();
            worst = worst.max((per_axis - 1.0).abs());
        }
        worst
    }
}

/// `y = 2^ν x − m` reduced to the period `2T·2^ν` of the torus.
fn wrapped_offset(x: f64, nu: u32, m: i64, half: i64) -> f64 {
    let period = 2.0 * half as f64;
    let y = x * 2f64.powi(nu as i32) - m as f64;
    y - period * ((y + half as f64) / period).floor()
}

/// `(βqu)_{ν,m}(x) = ψ^β(2^ν x − m)` sampled on the periodic grid.
pub fn quark_eval(beta: [u32; 2], nu: u32, m: [i64; 2], basis: &QuarkBasis, grid: &Grid) -> Result<GridFunction> {
    if basis.dim != grid.dim() {
        return Err(Error::InvalidInput("basis and grid dimensions differ".into()));
    }
    let half = lattice_half(grid, nu)?;
    Ok(GridFunction::from_real_fn(*grid, |x| {
        let mut y = [0.0; 2];
        for a in 0..basis.dim {
            y[a] = wrapped_offset(x[a], nu, m[a], half);
        }
        basis.psi_beta(beta, &y)
    }))
}

/// Finitely supported `(β, ν, m) ↦ λ^β_{ν,m}`, one coefficient array per β.
#[derive(Clone, Debug, PartialEq)]
pub struct QuarkCoefficients {
    dim: usize,
    rho: u32,
    beta_max: u32,
    slices: BTreeMap<[u32; 2], CoefficientArray>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct QuarkRecord {
    beta: Vec<u32>,
    nu: u32,
    m: Vec<i64>,
    re: f64,
    im: f64,
}

impl QuarkCoefficients {
    pub fn new(dim: usize, rho: u32, beta_max: u32) -> Self {
        QuarkCoefficients { dim, rho, beta_max, slices: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho(&self) -> u32 {
        self.rho
    }

    pub fn beta_max(&self) -> u32 {
        self.beta_max
    }

    pub fn insert(&mut self, beta: [u32; 2], slice: CoefficientArray) -> Result<()> {
        if beta[0] + beta[1] > self.beta_max || (self.dim == 1 && beta[1] != 0) {
            return Err(Error::OutOfRange(format!("β = {beta:?} outside |β| <= {}", self.beta_max)));
        }
        if slice.dim() != self.dim {
            return Err(Error::InvalidInput("slice dimension mismatch".into()));
        }
        self.slices.insert(beta, slice);
        Ok(())
    }

    pub fn slice(&self, beta: [u32; 2]) -> Option<&CoefficientArray> {
        self.slices.get(&beta)
    }

    pub fn slices(&self) -> impl Iterator<Item = (&[u32; 2], &CoefficientArray)> {
        self.slices.iter()
    }

    pub fn from_entries(dim: usize, rho: u32, beta_max: u32, entries: &[([u32; 2], u32, [i64; 2], C64)]) -> Result<Self> {
        let mut grouped: BTreeMap<[u32; 2], Vec<(u32, [i64; 2], C64)>> = BTreeMap::new();
        for &(b, nu, m, v) in entries {
            grouped.entry(b).or_default().push((nu, m, v));
        }
        let mut out = QuarkCoefficients::new(dim, rho, beta_max);
        for (b, e) in grouped {
            out.insert(b, CoefficientArray::from_entries(dim, &e)?)?;
        }
        Ok(out)
    }

    /// Nonzero entries `(β, ν, m, λ)`.
    pub fn entries(&self) -> Vec<([u32; 2], u32, [i64; 2], C64)> {
        self.slices.iter().flat_map(|(b, s)| s.entries().into_iter().map(move |(nu, m, v)| (*b, nu, m, v))).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.slices.values().all(|s| s.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.slices.values().map(|s| s.max_abs()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        for s in out.slices.values_mut() {
            *s = s.scale(c);
        }
        out
    }

    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for (b, nu, m, v) in self.entries() {
            let rec = QuarkRecord { beta: b[..self.dim].to_vec(), nu, m: m[..self.dim].to_vec(), re: v.re, im: v.im };
            out.push_str(&serde_json::to_string(&rec)?);
            out.push('\n');
        }
        Ok(out)
    }

    /// Parses JSON lines; `dim` is taken from the first record (1 when empty) and
    /// `beta_max` from the largest |β| present.
    pub fn from_jsonl(text: &str, rho: u32) -> Result<Self> {
        let mut dim = None;
        let mut entries = Vec::new();
        let mut beta_max = 0;
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let rec: QuarkRecord = serde_json::from_str(line).map_err(|e| Error::Format(format!("line {}: {e}", lineno + 1)))?;
            let d = *dim.get_or_insert(rec.m.len());
            if !(1..=2).contains(&d) || rec.m.len() != d || rec.beta.len() != d {
                return Err(Error::Format(format!("line {}: inconsistent index lengths", lineno + 1)));
            }
            let mut b = [0u32; 2];
            let mut m = [0i64; 2];
            b[..d].copy_from_slice(&rec.beta);
            m[..d].copy_from_slice(&rec.m);
            beta_max = beta_max.max(b[0] + b[1]);
            entries.push((b, rec.nu, m, C64::new(rec.re, rec.im)));
        }
        QuarkCoefficients::from_entries(dim.unwrap_or(1), rho, beta_max, &entries)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        f.write_all(self.to_jsonl()?.as_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path, rho: u32) -> Result<Self> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut text = String::new();
        for line in f.lines() {
            text.push_str(&line?);
            text.push('\n');
        }
        Self::from_jsonl(&text, rho)
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// FFT of the 1-D table `∂^b K(k 2^{−ρ})`, k = 0..M′, for b = 0..=beta_max.
fn table_spectra(m_count: usize, rho: u32, beta_max: u32) -> Result<Vec<Vec<C64>>> {
    let fine = m_count << rho;
    (0..=beta_max)
        .map(|b| {
            let t = lattice_table(m_count as f64, fine, b)?;
            let mut d: Vec<C64> = t.into_iter().map(|v| C64::new(v, 0.0)).collect();
            fft_axes(fine, 1, &mut d, false);
            Ok(d)
        })
        .collect()
}

/// Quarkonial coefficients of the band `Λ` at level ν (full torus lattice, row-major):
/// `λ^β_{ν+ρ,l} = (2π)^{−n/2} 2^{−ρ|β|}/β! Σ_m Λ_m ∂^β K(2^{−ρ} l − m)`.
fn coefficients_from_samples(lambda: &DyadicLevel, basis: &QuarkBasis, grid: &Grid) -> Result<Vec<([u32; 2], DyadicLevel)>> {
    visit_coefficients(lambda, basis, grid, |beta, level| Ok((beta, level)))
}

/// Hands each β slice to `visit` as soon as it is computed.
fn visit_coefficients<R: Send>(
    lambda: &DyadicLevel,
    basis: &QuarkBasis,
    grid: &Grid,
    visit: impl Fn([u32; 2], DyadicLevel) -> Result<R> + Sync,
) -> Result<Vec<R>> {
    let dim = grid.dim();
    let nu = lambda.nu();
    let rho = basis.rho;
    let m_count = lambda.size();
    let fine = m_count << rho;
    let step = 1usize << rho;
    let mut up = vec![C64::new(0.0, 0.0); fine.pow(dim as u32)];
    for (i, v) in lambda.values().iter().enumerate() {
        let j = if dim == 1 { i * step } else { (i / m_count) * step * fine + (i % m_count) * step };
        up[j] = *v;
    }
    fft_axes(fine, dim, &mut up, false);
    let spectra = table_spectra(m_count, rho, basis.beta_max)?;
    let c0 = (2.0 * std::f64::consts::PI).powf(-(dim as f64) / 2.0) / (fine.pow(dim as u32) as f64);
    multi_indices(dim, basis.beta_max)
        .into_par_iter()
        .map(|beta| {
            let mut data = up.clone();
            for (idx, z) in data.iter_mut().enumerate() {
                let w = if dim == 1 { spectra[beta[0] as usize][idx] } else { spectra[beta[0] as usize][idx / fine] * spectra[beta[1] as usize][idx % fine] };
                *z *= w;
            }
            fft_axes(fine, dim, &mut data, true);
            let order = beta[0] + beta[1];
            let c = c0 * 2f64.powi(-((rho * order) as i32)) / (factorial(beta[0]) * factorial(beta[1]));
            data.iter_mut().for_each(|z| *z *= c);
            let mut level = DyadicLevel::torus(grid, nu + rho)?;
            level.values_mut().copy_from_slice(&data);
            visit(beta, level)
        })
        .collect()
}

/// Largest level whose band still meets the grid's frequencies.
pub fn max_quark_level(grid: &Grid) -> u32 {
    let top = grid.nyquist() * (grid.dim() as f64).sqrt();
    (top.log2().floor() as i64).max(0) as u32
}

/// Bands `τ(D)f, φ_1(D)f, …, φ_{ν_max}(D)f` from one forward transform. Bands past the
/// resolution's own range are built directly on the grid.
fn analysis_bands(f: &GridFunction, res: &ResolutionOfUnity, nu_max: u32) -> Result<Vec<GridFunction>> {
    let g = *f.grid();
    if nu_max > max_quark_level(&g) {
        return Err(Error::OutOfRange(format!("nu_max = {nu_max} exceeds the {} bands the grid supports", max_quark_level(&g))));
    }
    let spec = f.forward_transform()?;
    let extra: Vec<GridFunction> = (res.j_max() + 1..=nu_max as usize).map(|nu| phi_symbol(&g, nu)).collect();
    let mut symbols = vec![res.tau()];
    symbols.extend(res.phi().iter().take(nu_max as usize));
    symbols.extend(extra.iter());
    symbols.into_par_iter().map(|s| spec.zip_with(s, |a, b| a * b)?.inverse_transform()).collect()
}

fn check_inputs(f: &GridFunction, basis: &QuarkBasis, kernel: &KappaKernel, res: &ResolutionOfUnity) -> Result<Grid> {
    f.expect_domain(Domain::Spatial)?;
    let g = *f.grid();
    g.check_same(kernel.grid())?;
    g.check_same(res.grid())?;
    if basis.dim != g.dim() {
        return Err(Error::InvalidInput("basis and grid dimensions differ".into()));
    }
    Ok(g)
}

/// Quarkonial coefficients of `f` from the sampled bands `Λ_{ν,m}`, ν = 0..=`nu_max`.
pub fn quark_analyze(f: &GridFunction, basis: &QuarkBasis, kernel: &KappaKernel, res: &ResolutionOfUnity, nu_max: u32) -> Result<QuarkCoefficients> {
    let g = check_inputs(f, basis, kernel, res)?;
    let bands = analysis_bands(f, res, nu_max)?;
    let mut slices: BTreeMap<[u32; 2], CoefficientArray> = BTreeMap::new();
    for (nu, band) in bands.iter().enumerate() {
        let samples = super::kappa::lattice_samples(band, nu as u32)?;
        let level = samples.level(nu as u32).expect("level written by lattice_samples");
        for (beta, lv) in coefficients_from_samples(level, basis, &g)? {
            slices.entry(beta).or_insert_with(|| CoefficientArray::new(g.dim())).insert_level(lv)?;
        }
    }
    let mut out = QuarkCoefficients::new(g.dim(), basis.rho, basis.beta_max);
    for (b, s) in slices {
        out.insert(b, s)?;
    }
    Ok(out)
}

/// `quark_synthesize(quark_analyze(f))` evaluated one level at a time, so the full
/// coefficient set never sits in memory.
pub fn quark_round_trip(f: &GridFunction, basis: &QuarkBasis, kernel: &KappaKernel, res: &ResolutionOfUnity, nu_max: u32) -> Result<GridFunction> {
    let g = check_inputs(f, basis, kernel, res)?;
    let bands = analysis_bands(f, res, nu_max)?;
    let mut acc = GridFunction::zeros(g, Domain::Spatial);
    for (nu, band) in bands.iter().enumerate() {
        let samples = super::kappa::lattice_samples(band, nu as u32)?;
        let level = samples.level(nu as u32).expect("level written by lattice_samples");
        let parts = visit_coefficients(level, basis, &g, |beta, lv| {
            let mut arr = CoefficientArray::new(g.dim());
            arr.insert_level(lv)?;
            let mut one = QuarkCoefficients::new(g.dim(), basis.rho, basis.beta_max);
            one.insert(beta, arr)?;
            quark_synthesize(&one, basis, &g)
        })?;
        for p in parts {
            acc = acc.add(&p)?;
        }
    }
    Ok(acc)
}

/// `C_β = (2π)^{−n/2}/β! · sup_y Σ_m |∂^β K(y − m)|` over `y ∈ 2^{−ρ}Z`, so that
/// `|λ^β_{ν+ρ,l}| ≤ C_β 2^{−ρ|β|} sup_m |Λ_{ν,m}|`.
pub fn coefficient_bound(grid: &Grid, basis: &QuarkBasis, beta: [u32; 2], nu: u32) -> Result<f64> {
    let m_count = 2 * lattice_half(grid, nu)? as usize;
    let step = 1usize << basis.rho;
    let mut per_axis = 1.0;
    for a in 0..basis.dim {
        let t = lattice_table(m_count as f64, m_count * step, beta[a])?;
        let worst = (0..step).map(|r| (0..m_count).map(|m| t[r + m * step].abs()).sum::<f64>()).fold(0.0, f64::max);
        per_axis *= worst / ((2.0 * std::f64::consts::PI).sqrt() * factorial(beta[a]));
    }
    Ok(per_axis)
}

/// Per-axis quark weights at level ν: for each grid index the contributing
/// (wrapped l, [ψ-weights for b = 0..=beta_max]).
fn axis_weights(grid: &Grid, nu: u32, beta_max: u32) -> Result<Vec<Vec<(i64, Vec<f64>)>>> {
    let half = lattice_half(grid, nu)?;
    let r = 2f64.powi(nu as i32);
    Ok((0..grid.samples_per_axis())
        .map(|i| {
            let y = grid.axis_coord(i) * r;
            let lo = (y - MU_HALF_WIDTH).ceil() as i64;
            let hi = (y + MU_HALF_WIDTH).floor() as i64;
            (lo..=hi)
                .filter_map(|l| {
                    let t = y - l as f64;
                    let w = mu(t);
                    if w == 0.0 {
                        return None;
                    }
                    let lw = (l + half).rem_euclid(2 * half) - half;
                    Some((lw, (0..=beta_max).map(|b| t.powi(b as i32) * w).collect()))
                })
                .collect()
        })
        .collect())
}

/// `Σ_β Σ_ν Σ_m λ^β_{ν,m} ψ^β(2^ν x − m)` on the periodic grid.
pub fn quark_synthesize(lambda: &QuarkCoefficients, basis: &QuarkBasis, grid: &Grid) -> Result<GridFunction> {
    if lambda.dim != grid.dim() || basis.dim != grid.dim() {
        return Err(Error::InvalidInput("coefficient, basis and grid dimensions differ".into()));
    }
    let n = grid.samples_per_axis();
    let dim = grid.dim();
    let bmax = lambda.slices.keys().map(|b| b[0].max(b[1])).max().unwrap_or(0);
    let mut weights: BTreeMap<u32, Vec<Vec<(i64, Vec<f64>)>>> = BTreeMap::new();
    for s in lambda.slices.values() {
        for l in s.levels() {
            if l.max_abs() > 0.0 && !weights.contains_key(&l.nu()) {
                weights.insert(l.nu(), axis_weights(grid, l.nu(), bmax)?);
            }
        }
    }
    let rows: Vec<Vec<C64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![C64::new(0.0, 0.0); if dim == 1 { 1 } else { n }];
            for (beta, slice) in &lambda.slices {
                for level in slice.levels() {
                    let Some(w) = weights.get(&level.nu()) else { continue };
                    for (l1, w1) in &w[i] {
                        let a = w1[beta[0] as usize];
                        if dim == 1 {
                            row[0] += level.get([*l1, 0]) * a;
                            continue;
                        }
                        for (j, slot) in row.iter_mut().enumerate() {
                            for (l2, w2) in &w[j] {
                                let v = level.get([*l1, *l2]);
                                if v != C64::new(0.0, 0.0) {
                                    *slot += v * (a * w2[beta[1] as usize]);
                                }
                            }
                        }
                    }
                }
            }
            row
        })
        .collect();
    GridFunction::new(*grid, rows.into_iter().flatten().collect(), Domain::Spatial)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuarkNormReport {
    pub norm: f64,
    /// `(β, 2^{ρ|β|} ‖λ^β‖)` for every stored slice.
    pub per_beta: Vec<([u32; 2], f64)>,
    /// `inf (s − σ)`, with σ = σ_p (Besov) or σ_{p,q} (Triebel).
    pub condition_margin: f64,
    pub condition_ok: bool,
}

/// `sup_β 2^{ρ|β|} ‖λ^β‖` in the b- or f-sequence norm.
pub fn quark_norm(lambda: &QuarkCoefficients, p: &ExponentField, q: &QExponent, s: &ExponentField, flavor: Flavor) -> Result<QuarkNormReport> {
    let sigma = match (flavor, q) {
        (Flavor::Triebel, QExponent::Finite(qf)) => sigma_of(p, Some(qf))?,
        _ => sigma_of(p, None)?,
    };
    s.check_grid(p.grid())?;
    let condition_margin = s.values().iter().zip(&sigma.values).map(|(a, b)| a - b).fold(f64::INFINITY, f64::min);
    let per_beta = lambda
        .slices
        .par_iter()
        .map(|(b, slice)| {
            let v = seq_norm(slice, p, q, s, flavor)?;
            Ok((*b, 2f64.powi((lambda.rho * (b[0] + b[1])) as i32) * v))
        })
        .collect::<Result<Vec<_>>>()?;
    let norm = per_beta.iter().map(|(_, v)| *v).fold(0.0, f64::max);
    Ok(QuarkNormReport { norm, per_beta, condition_margin, condition_ok: condition_margin > 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::kappa::build_kappa;
    use crate::exponents::ExponentRole;
    use crate::littlewood_paley::{build_resolution, default_band_count};
    use approx::assert_relative_eq;

    #[test]
    fn basis_properties() {
        for dim in [1, 2] {
            let b = QuarkBasis::default_for(dim).unwrap();
            let g = Grid::new(dim, 4.0, if dim == 1 { 512 } else { 64 }).unwrap();
            assert!(b.partition_defect(&g) <= 1e-10);
            assert!(b.rho as f64 > b.r);
        }
        assert_eq!(mu(0.55), 0.0);
        assert_eq!(mu(-0.55), 0.0);
        assert_eq!(mu(0.0), 1.0);
    }

    #[test]
    fn quark_eval_examples() {
        let g = Grid::new(2, 4.0, 64).unwrap();
        let b = QuarkBasis::default_for(2).unwrap();
        let q = quark_eval([0, 0], 0, [0, 0], &b, &g).unwrap();
        for idx in 0..g.len() {
            assert_eq!(q.samples()[idx].re, b.psi(&g.point(idx)));
        }
        let shifted = quark_eval([2, 1], 0, [1, -2], &b, &g).unwrap();
        let base = quark_eval([2, 1], 0, [0, 0], &b, &g).unwrap();
        let step = (1.0 / g.spacing()) as usize;
        for i in step..64 {
            for j in 0..64 - 2 * step {
                let a = shifted.samples()[g.flat_index([i, j])];
                let c = base.samples()[g.flat_index([i - step, j + 2 * step])];
                assert!((a - c).norm() < 1e-14);
            }
        }
        // Support inside d·Q_{ν,m}, d = 2^{r+1} + 1.
        let (nu, m) = (2u32, [3i64, -5i64]);
        let d = 2f64.powf(b.r + 1.0) + 1.0;
        let cube = super::super::sequence::DyadicCube { nu, m };
        let qq = quark_eval([1, 3], nu, m, &b, &g).unwrap();
        for idx in 0..g.len() {
            if !cube.contains_dilated(&g.point(idx)[..2], d) {
                assert!(qq.samples()[idx].norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn synthesis_matches_naive_sum() {
        let g = Grid::new(2, 2.0, 32).unwrap();
        let b = QuarkBasis::default_for(2).unwrap();
        let entries = [
            ([0u32, 0u32], 0u32, [0i64, 0i64], C64::new(1.0, 0.0)),
            ([1, 2], 1, [-4, 3], C64::new(0.5, -1.0)),
            ([3, 0], 2, [7, -8], C64::new(-2.0, 0.25)),
        ];
        let lam = QuarkCoefficients::from_entries(2, 2, 6, &entries).unwrap();
        let fast = quark_synthesize(&lam, &b, &g).unwrap();
        let mut naive = GridFunction::zeros(g, Domain::Spatial);
        for (beta, nu, m, v) in entries {
            naive = naive.add(&quark_eval(beta, nu, m, &b, &g).unwrap().scale(v)).unwrap();
        }
        assert!(fast.sub(&naive).unwrap().max_abs() <= 1e-12);
        let single = QuarkCoefficients::from_entries(2, 2, 6, &entries[..1]).unwrap();
        let psi = quark_synthesize(&single, &b, &g).unwrap();
        assert!(psi.sub(&quark_eval([0, 0], 0, [0, 0], &b, &g).unwrap()).unwrap().max_abs() == 0.0);
        let doubled = quark_synthesize(&lam.scale(C64::new(2.0, 0.0)), &b, &g).unwrap();
        assert!(doubled.sub(&fast.scale(C64::new(2.0, 0.0))).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn analysis_round_trip_one_dim() {
        let g = Grid::new(1, 8.0, 2048).unwrap();
        let basis = QuarkBasis::default_for(1).unwrap();
        let kernel = build_kappa(&g, 0).unwrap();
        let res = build_resolution(&g, 5).unwrap();
        let f = GridFunction::from_real_fn(g, |x| (-(x[0] - 0.5).powi(2)).exp() * (2.0 * x[0]).cos() + 0.5 * (-(x[0] + 2.0).powi(2) * 4.0).exp());
        let lam = quark_analyze(&f, &basis, &kernel, &res, 5).unwrap();
        let back = quark_synthesize(&lam, &basis, &g).unwrap();
        let err = back.sub(&f).unwrap().max_abs() / f.max_abs();
        assert!(err <= 1e-3, "round trip error {err}");
        let z = quark_analyze(&GridFunction::zeros(g, Domain::Spatial), &basis, &kernel, &res, 5).unwrap();
        assert!(z.is_zero());
        assert!(quark_analyze(&f, &basis, &kernel, &res, max_quark_level(&g) + 1).is_err());
        // Coefficient decay bound with the lattice constant.
        let bands = analysis_bands(&f, &res, 5).unwrap();
        for beta in 0..=6u32 {
            for nu in 0..=5u32 {
                let lv = lam.slice([beta, 0]).unwrap().level(nu + 2).unwrap();
                let sup_lambda = bands[nu as usize].max_abs();
                let c = coefficient_bound(&g, &basis, [beta, 0], nu).unwrap();
                assert!(lv.max_abs() <= c * 4f64.powi(-(beta as i32)) * sup_lambda * (1.0 + 1e-9) + 1e-300);
            }
        }
    }

    #[test]
    fn analysis_round_trip_two_dim() {
        let g = Grid::new(2, 4.0, 64).unwrap();
        let basis = QuarkBasis::default_for(2).unwrap();
        let kernel = build_kappa(&g, 0).unwrap();
        let res = build_resolution(&g, 2).unwrap();
        let f = GridFunction::from_real_fn(g, |x| (-(x[0] * x[0] + 2.0 * x[1] * x[1])).exp() * (1.0 + 0.3 * x[0]));
        let lam = quark_analyze(&f, &basis, &kernel, &res, 2).unwrap();
        let back = quark_synthesize(&lam, &basis, &g).unwrap();
        let err = back.sub(&f).unwrap().max_abs() / f.max_abs();
        assert!(err <= 1e-3, "round trip error {err}");
    }

    #[test]
    fn deep_analysis_uses_interpolated_lattices() {
        // h = 1/4, so levels 3 and 4 sit on lattices finer than the grid.
        let g = Grid::new(2, 4.0, 32).unwrap();
        let basis = QuarkBasis::default_for(2).unwrap();
        let kernel = build_kappa(&g, 0).unwrap();
        let res = build_resolution(&g, default_band_count(&g)).unwrap();
        let f = GridFunction::from_real_fn(g, |x| (-(x[0] * x[0] + (x[1] - 0.3).powi(2))).exp() * (1.0 + 0.2 * x[0]));
        let lam = quark_analyze(&f, &basis, &kernel, &res, 4).unwrap();
        let back = quark_synthesize(&lam, &basis, &g).unwrap();
        assert!(back.sub(&f).unwrap().max_abs() <= 1e-6);
        let streamed = quark_round_trip(&f, &basis, &kernel, &res, 4).unwrap();
        assert!(streamed.sub(&back).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn quark_norm_examples() {
        let g = Grid::new(1, 4.0, 256).unwrap();
        let p = ExponentField::constant(g, 2.0, ExponentRole::Integrability).unwrap();
        let q = QExponent::Finite(ExponentField::constant(g, 1.5, ExponentRole::Integrability).unwrap());
        let s = ExponentField::from_fn(g, ExponentRole::Smoothness, |x| 0.5 + 0.1 * x[0].sin()).unwrap();
        let zero = QuarkCoefficients::new(1, 2, 6);
        assert_eq!(quark_norm(&zero, &p, &q, &s, Flavor::Besov).unwrap().norm, 0.0);
        let a = CoefficientArray::from_entries(1, &[(1, [2, 0], C64::new(1.0, 0.0)), (3, [-5, 0], C64::new(0.0, 2.0))]).unwrap();
        let b = CoefficientArray::from_entries(1, &[(0, [1, 0], C64::new(0.1, 0.0))]).unwrap();
        let mut one = QuarkCoefficients::new(1, 2, 6);
        one.insert([2, 0], a.clone()).unwrap();
        let r = quark_norm(&one, &p, &q, &s, Flavor::Triebel).unwrap();
        assert_relative_eq!(r.norm, 16.0 * seq_norm(&a, &p, &q, &s, Flavor::Triebel).unwrap(), max_relative = 1e-12);
        assert!(r.condition_ok);
        let mut two = one.clone();
        two.insert([1, 0], b.clone()).unwrap();
        let r2 = quark_norm(&two, &p, &q, &s, Flavor::Besov).unwrap();
        let expect = (16.0 * seq_norm(&a, &p, &q, &s, Flavor::Besov).unwrap()).max(4.0 * seq_norm(&b, &p, &q, &s, Flavor::Besov).unwrap());
        assert_relative_eq!(r2.norm, expect, max_relative = 1e-12);
    }

    #[test]
    fn jsonl_round_trip() {
        let entries = [([0u32, 1u32], 3u32, [4i64, -2i64], C64::new(1.5, -0.25)), ([2, 0], 0, [0, 0], C64::new(-1.0, 0.0))];
        let lam = QuarkCoefficients::from_entries(2, 2, 6, &entries).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("q.jsonl");
        lam.save(&path).unwrap();
        let back = QuarkCoefficients::load(&path, 2).unwrap();
        assert_eq!(back.entries(), lam.entries());
        assert!(QuarkCoefficients::from_jsonl("{\"beta\":[1],\"nu\":0,\"m\":[1,2],\"re\":1,\"im\":0}", 2).is_err());
    }
}
