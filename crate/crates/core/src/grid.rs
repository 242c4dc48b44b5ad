//! Uniform periodic grids on [-T, T)^n (n = 1, 2), sampled complex functions,
//! and a discrete Fourier transform scaled to the unitary continuous convention
//! `F f(ξ) = (2π)^{-n/2} ∫ f(x) e^{-i x·ξ} dx`.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Spatial,
    Spectral,
}

/// Serialisable description of a grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    #[serde(rename = "T")]
    pub half_extent: f64,
    #[serde(rename = "N")]
    pub samples_per_axis: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    dim: usize,
    half_extent: f64,
    n: usize,
}

impl Grid {
    pub fn new(dim: usize, half_extent: f64, samples_per_axis: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidInput(format!("grid dim must be 1 or 2, got {dim}")));
        }
        if !(half_extent.is_finite() && half_extent > 0.0) {
            return Err(Error::InvalidInput(format!("half extent must be positive, got {half_extent}")));
        }
        if samples_per_axis < 8 || !samples_per_axis.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "samples per axis must be a power of two >= 8, got {samples_per_axis}"
            )));
        }
        Ok(Grid { dim, half_extent, n: samples_per_axis })
    }

    pub fn from_spec(spec: &GridSpec) -> Result<Self> {
        Grid::new(spec.dim, spec.half_extent, spec.samples_per_axis)
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec { dim: self.dim, half_extent: self.half_extent, samples_per_axis: self.n }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn samples_per_axis(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / self.n as f64
    }

    /// Total number of samples, N^n.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// h^n, the quadrature weight of one sample.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn frequency_spacing(&self) -> f64 {
        PI / self.half_extent
    }

    pub fn nyquist(&self) -> f64 {
        PI * self.n as f64 / (2.0 * self.half_extent)
    }

    pub fn axis_coord(&self, i: usize) -> f64 {
        -self.half_extent + i as f64 * self.spacing()
    }

    /// Signed frequency index of FFT slot `k`.
    pub fn signed_index(&self, k: usize) -> i64 {
        if k < self.n / 2 {
            k as i64
        } else {
            k as i64 - self.n as i64
        }
    }

    pub fn axis_freq(&self, k: usize) -> f64 {
        self.signed_index(k) as f64 * self.frequency_spacing()
    }

    /// Axis indices of a flat index; the second entry is 0 in 1-D.
    pub fn multi_index(&self, idx: usize) -> [usize; 2] {
        if self.dim == 1 {
            [idx, 0]
        } else {
            [idx / self.n, idx % self.n]
        }
    }

    pub fn flat_index(&self, ix: [usize; 2]) -> usize {
        if self.dim == 1 {
            ix[0]
        } else {
            ix[0] * self.n + ix[1]
        }
    }

    /// Coordinates of sample `idx`; unused trailing entries are 0.
    pub fn point(&self, idx: usize) -> [f64; 2] {
        let [i, j] = self.multi_index(idx);
        if self.dim == 1 {
            [self.axis_coord(i), 0.0]
        } else {
            [self.axis_coord(i), self.axis_coord(j)]
        }
    }

    pub fn frequency(&self, idx: usize) -> [f64; 2] {
        let [i, j] = self.multi_index(idx);
        if self.dim == 1 {
            [self.axis_freq(i), 0.0]
        } else {
            [self.axis_freq(i), self.axis_freq(j)]
        }
    }

    pub fn norm(&self, v: [f64; 2]) -> f64 {
        if self.dim == 1 {
            v[0].abs()
        } else {
            v[0].hypot(v[1])
        }
    }

    /// Index along an axis of the sample at coordinate 0.
    pub fn origin_index(&self) -> usize {
        self.n / 2
    }

    /// `e` with h = 2^{-e}, if the spacing is an exact power of two.
    pub fn dyadic_exponent(&self) -> Option<i32> {
        let h = self.spacing();
        let e = -h.log2().round();
        if (2f64.powf(-e) - h).abs() <= 1e-15 * h {
            Some(e as i32)
        } else {
            None
        }
    }

    /// The (n-1)-dimensional grid of the hyperplane x_n = 0.
    pub fn boundary(&self) -> Result<Grid> {
        if self.dim != 2 {
            return Err(Error::InvalidInput("boundary grid needs dim 2".into()));
        }
        Grid::new(1, self.half_extent, self.n)
    }

    /// The same extent and resolution in `dim` dimensions.
    pub fn with_dim(&self, dim: usize) -> Result<Grid> {
        Grid::new(dim, self.half_extent, self.n)
    }

    pub fn check_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{:?} vs {:?}", self.spec(), other.spec())))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    samples: Vec<C64>,
    domain: Domain,
}

impl GridFunction {
    pub fn new(grid: Grid, samples: Vec<C64>, domain: Domain) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} samples, got {}",
                grid.len(),
                samples.len()
            )));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite sample".into()));
        }
        Ok(GridFunction { grid, samples, domain })
    }

    pub fn zeros(grid: Grid, domain: Domain) -> Self {
        GridFunction { grid, samples: vec![C64::new(0.0, 0.0); grid.len()], domain }
    }

    /// Samples `f` at every grid point (spatial domain).
    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> C64) -> Self {
        let samples = (0..grid.len())
            .map(|i| f(&grid.point(i)[..grid.dim()]))
            .collect();
        GridFunction { grid, samples, domain: Domain::Spatial }
    }

    pub fn from_real_fn(grid: Grid, f: impl Fn(&[f64]) -> f64) -> Self {
        Self::from_fn(grid, |x| C64::new(f(x), 0.0))
    }

    /// Samples a symbol at every grid frequency (spectral domain).
    pub fn spectral_from_fn(grid: Grid, f: impl Fn(&[f64]) -> C64) -> Self {
        let samples = (0..grid.len())
            .map(|i| f(&grid.frequency(i)[..grid.dim()]))
            .collect();
        GridFunction { grid, samples, domain: Domain::Spectral }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [C64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<C64> {
        self.samples
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn expect_domain(&self, expected: Domain) -> Result<()> {
        if self.domain == expected {
            Ok(())
        } else {
            Err(Error::WrongDomain { expected, found: self.domain })
        }
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        GridFunction {
            grid: self.grid,
            samples: self.samples.iter().map(|&z| f(z)).collect(),
            domain: self.domain,
        }
    }

    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        if self.domain != other.domain {
            return Err(Error::WrongDomain { expected: self.domain, found: other.domain });
        }
        Ok(GridFunction {
            grid: self.grid,
            samples: self.samples.iter().zip(&other.samples).map(|(&a, &b)| f(a, b)).collect(),
            domain: self.domain,
        })
    }

    pub fn add(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|z| z * c)
    }

    pub fn abs_values(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Rectangle-rule L² norm (spatial) or its spectral counterpart.
    pub fn l2_norm(&self) -> f64 {
        let w = match self.domain {
            Domain::Spatial => self.grid.cell_volume(),
            Domain::Spectral => self.grid.frequency_spacing().powi(self.grid.dim() as i32),
        };
        (w * self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// The spectral twin under the scaled transform.
    pub fn forward_transform(&self) -> Result<GridFunction> {
        self.expect_domain(Domain::Spatial)?;
        let g = self.grid;
        let mut data = self.samples.clone();
        fft_nd(&g, &mut data, false);
        let c = (2.0 * PI).powf(-(g.dim() as f64) / 2.0) * g.cell_volume();
        apply_phase(&g, &mut data, c);
        Ok(GridFunction { grid: g, samples: data, domain: Domain::Spectral })
    }

    pub fn inverse_transform(&self) -> Result<GridFunction> {
        self.expect_domain(Domain::Spectral)?;
        let g = self.grid;
        let mut data = self.samples.clone();
        let c = (2.0 * PI).powf(-(g.dim() as f64) / 2.0) * g.cell_volume();
        apply_phase(&g, &mut data, 1.0 / (c * g.len() as f64));
        fft_nd(&g, &mut data, true);
        Ok(GridFunction { grid: g, samples: data, domain: Domain::Spatial })
    }

    /// Writes `<path>` (little-endian re/im f64 pairs) and the sidecar `<path>.json`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut bytes = Vec::with_capacity(self.samples.len() * 16);
        for z in &self.samples {
            bytes.extend_from_slice(&z.re.to_le_bytes());
            bytes.extend_from_slice(&z.im.to_le_bytes());
        }
        std::fs::File::create(path)?.write_all(&bytes)?;
        let header = Sidecar { spec: self.grid.spec(), tag: self.domain };
        std::fs::write(sidecar_path(path), serde_json::to_string_pretty(&header)?)?;
        Ok(())
    }

    /// Loads a function saved by [`GridFunction::save`]; `path` may name the
    /// binary or its sidecar.
    pub fn load(path: &Path) -> Result<Self> {
        let bin = if path.extension().is_some_and(|e| e == "json") {
            path.with_extension("")
        } else {
            path.to_path_buf()
        };
        let header: Sidecar = serde_json::from_str(&std::fs::read_to_string(sidecar_path(&bin))?)?;
        let grid = Grid::from_spec(&header.spec)?;
        let mut bytes = Vec::new();
        std::fs::File::open(&bin)?.read_to_end(&mut bytes)?;
        if bytes.len() != grid.len() * 16 {
            return Err(Error::Format(format!(
                "{}: expected {} bytes, found {}",
                bin.display(),
                grid.len() * 16,
                bytes.len()
            )));
        }
        let samples = bytes
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..].try_into().unwrap());
                C64::new(re, im)
            })
            .collect();
        GridFunction::new(grid, samples, header.tag)
    }

    /// Reads a 1-D function from CSV. Without a header the columns are `re` or
    /// `re,im`; with a header the columns named `re` and (optionally) `im` are used.
    pub fn from_csv(path: &Path, half_extent: f64) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::Format(e.to_string()))?;
        let mut columns = (0usize, Some(1usize));
        let mut values = Vec::new();
        for (row, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| Error::Format(e.to_string()))?;
            if row == 0 && rec.get(0).is_some_and(|s| s.parse::<f64>().is_err()) {
                let find = |name: &str| rec.iter().position(|c| c.eq_ignore_ascii_case(name));
                let re = find("re").ok_or_else(|| Error::Format("CSV header lacks a `re` column".into()))?;
                columns = (re, find("im"));
                continue;
            }
            let parse = |i: usize| -> Result<f64> {
                rec.get(i)
                    .ok_or_else(|| Error::Format(format!("row {row}: missing column {i}")))?
                    .parse::<f64>()
                    .map_err(|e| Error::Format(format!("row {row}: {e}")))
            };
            let re = parse(columns.0)?;
            let im = match columns.1 {
                Some(i) if rec.len() > i => parse(i)?,
                _ => 0.0,
            };
            values.push(C64::new(re, im));
        }
        let grid = Grid::new(1, half_extent, values.len())?;
        GridFunction::new(grid, values, Domain::Spatial)
    }
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    #[serde(flatten)]
    spec: GridSpec,
    tag: Domain,
}

fn sidecar_path(bin: &Path) -> PathBuf {
    let mut s = bin.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Returns `θ(D) f`, the inverse transform of `θ · F f`.
pub fn multiplier_apply(theta: &GridFunction, f: &GridFunction) -> Result<GridFunction> {
    theta.expect_domain(Domain::Spectral)?;
    f.expect_domain(Domain::Spatial)?;
    theta.grid.check_same(&f.grid)?;
    let mut spec = f.forward_transform()?;
    for (s, t) in spec.samples.iter_mut().zip(&theta.samples) {
        *s *= t;
    }
    spec.inverse_transform()
}

/// `∂^α f` computed by multiplying the spectrum with `(iξ)^α`. The Nyquist
/// mode of an axis is dropped when that axis has odd order.
pub fn spectral_derivative(f: &GridFunction, alpha: &[u32]) -> Result<GridFunction> {
    f.expect_domain(Domain::Spatial)?;
    let g = f.grid;
    if alpha.len() != g.dim() {
        return Err(Error::InvalidInput(format!(
            "multi-index has {} entries for a {}-D grid",
            alpha.len(),
            g.dim()
        )));
    }
    if alpha.iter().all(|&a| a == 0) {
        return Ok(f.clone());
    }
    let symbol = GridFunction::spectral_from_fn(g, |xi| derivative_symbol(&g, xi, alpha));
    multiplier_apply(&symbol, f)
}

fn derivative_symbol(g: &Grid, xi: &[f64], alpha: &[u32]) -> C64 {
    let mut out = C64::new(1.0, 0.0);
    for (x, &a) in xi.iter().zip(alpha) {
        if a % 2 == 1 && (x.abs() - g.nyquist()).abs() < 1e-9 * g.nyquist() {
            return C64::new(0.0, 0.0);
        }
        out *= C64::new(0.0, *x).powu(a);
    }
    out
}

fn apply_phase(g: &Grid, data: &mut [C64], c: f64) {
    // e^{-i x_0 ξ_k} with x_0 = -T contributes (-1)^k.
    for (idx, z) in data.iter_mut().enumerate() {
        let [i, j] = g.multi_index(idx);
        let sign = if (i + j) % 2 == 0 { c } else { -c };
        *z *= sign;
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// Unnormalised n-D DFT along every axis.
pub(crate) fn fft_nd(g: &Grid, data: &mut [C64], inverse: bool) {
    let n = g.samples_per_axis();
    fft_axes(n, g.dim(), data, inverse);
}

pub(crate) fn fft_axes(n: usize, dim: usize, data: &mut [C64], inverse: bool) {
    let fft = plan(n, inverse);
    fft.process(data);
    if dim == 2 {
        let mut t = transpose(data, n);
        fft.process(&mut t);
        data.copy_from_slice(&transpose(&t, n));
    }
}

fn transpose(data: &[C64], n: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); data.len()];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = data[i * n + j];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn max_err(a: &GridFunction, b: &GridFunction) -> f64 {
        a.samples().iter().zip(b.samples()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(3, 1.0, 16).is_err());
        assert!(Grid::new(1, 0.0, 16).is_err());
        assert!(Grid::new(1, 1.0, 12).is_err());
        assert!(Grid::new(1, 1.0, 4).is_err());
        let g = Grid::new(2, 4.0, 64).unwrap();
        assert_abs_diff_eq!(g.spacing(), 0.125);
        assert_eq!(g.dyadic_exponent(), Some(3));
        assert_abs_diff_eq!(g.nyquist(), PI * 8.0, epsilon = 1e-12);
    }

    #[test]
    fn gaussian_transforms_to_gaussian() {
        let g = Grid::new(1, 16.0, 512).unwrap();
        let f = GridFunction::from_real_fn(g, |x| (-x[0] * x[0] / 2.0).exp());
        let ff = f.forward_transform().unwrap();
        let exact = GridFunction::spectral_from_fn(g, |xi| C64::new((-xi[0] * xi[0] / 2.0).exp(), 0.0));
        assert!(max_err(&ff, &exact) < 1e-10);
    }

    #[test]
    fn gaussian_transforms_to_gaussian_2d() {
        let g = Grid::new(2, 12.0, 128).unwrap();
        let f = GridFunction::from_real_fn(g, |x| (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp());
        let exact = GridFunction::spectral_from_fn(g, |xi| {
            C64::new((-(xi[0] * xi[0] + xi[1] * xi[1]) / 2.0).exp(), 0.0)
        });
        assert!(max_err(&f.forward_transform().unwrap(), &exact) < 1e-10);
    }

    #[test]
    fn shift_becomes_phase() {
        let g = Grid::new(1, 16.0, 512).unwrap();
        let a = 1.25;
        let f = GridFunction::from_real_fn(g, |x| (-x[0] * x[0] / 2.0).exp());
        let fs = GridFunction::from_real_fn(g, |x| (-(x[0] - a) * (x[0] - a) / 2.0).exp());
        let lhs = fs.forward_transform().unwrap();
        let ff = f.forward_transform().unwrap();
        let rhs = GridFunction::spectral_from_fn(g, |xi| C64::from_polar(1.0, -a * xi[0]));
        let rhs = rhs.zip_with(&ff, |p, v| p * v).unwrap();
        assert!(max_err(&lhs, &rhs) < 1e-10);
    }

    #[test]
    fn zero_and_identity_multipliers() {
        let g = Grid::new(1, PI * 4.0, 256).unwrap();
        let f = GridFunction::from_fn(g, |x| C64::from_polar(1.0, 3.0 * x[0]) + (x[0].sin() * 0.3));
        let one = GridFunction::spectral_from_fn(g, |_| C64::new(1.0, 0.0));
        assert!(max_err(&multiplier_apply(&one, &f).unwrap(), &f) < 1e-12);
        let zero = GridFunction::zeros(g, Domain::Spectral);
        assert!(multiplier_apply(&zero, &f).unwrap().max_abs() == 0.0);
        let low = GridFunction::spectral_from_fn(g, |xi| C64::new(if xi[0].abs() <= 1.0 { 1.0 } else { 0.0 }, 0.0));
        let e3 = GridFunction::from_fn(g, |x| C64::from_polar(1.0, 3.0 * x[0]));
        assert!(multiplier_apply(&low, &e3).unwrap().max_abs() < 1e-8);
        assert!(multiplier_apply(&f, &f).is_err());
    }

    #[test]
    fn derivatives_of_trig_functions() {
        let g = Grid::new(1, PI, 64).unwrap();
        let f = GridFunction::from_real_fn(g, |x| x[0].sin());
        let d = spectral_derivative(&f, &[1]).unwrap();
        let cos = GridFunction::from_real_fn(g, |x| x[0].cos());
        assert!(max_err(&d, &cos) < 1e-10);
        assert_eq!(spectral_derivative(&f, &[0]).unwrap(), f);
        let e = GridFunction::from_fn(g, |x| C64::from_polar(1.0, x[0]));
        let d2 = spectral_derivative(&e, &[2]).unwrap();
        assert!(max_err(&d2, &e.scale(C64::new(-1.0, 0.0))) < 1e-10);
        let g2 = Grid::new(2, PI, 32).unwrap();
        let f2 = GridFunction::from_real_fn(g2, |x| x[0].sin() * (2.0 * x[1]).cos());
        let d = spectral_derivative(&f2, &[1, 1]).unwrap();
        let exact = GridFunction::from_real_fn(g2, |x| -2.0 * x[0].cos() * (2.0 * x[1]).sin());
        assert!(max_err(&d, &exact) < 1e-10);
    }

    #[test]
    fn parseval_and_round_trip() {
        let g = Grid::new(2, 3.0, 32).unwrap();
        let f = GridFunction::from_fn(g, |x| C64::new((x[0] * 1.3).sin() + x[1], (x[0] * x[1]).cos()));
        let ff = f.forward_transform().unwrap();
        let lhs = f.l2_norm().powi(2);
        let rhs = ff.l2_norm().powi(2);
        assert!((lhs - rhs).abs() <= 1e-10 * lhs);
        let back = ff.inverse_transform().unwrap();
        assert!(max_err(&back, &f) < 1e-12);
        assert!(f.inverse_transform().is_err());
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::new(2, 2.0, 8).unwrap();
        let f = GridFunction::from_fn(g, |x| C64::new(x[0], x[1] * 0.5));
        let p = dir.path().join("f.bin");
        f.save(&p).unwrap();
        assert_eq!(GridFunction::load(&p).unwrap(), f);
        assert_eq!(GridFunction::load(&dir.path().join("f.bin.json")).unwrap(), f);
    }

    #[test]
    fn csv_import() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.csv");
        let body: String = (0..8).map(|i| format!("{i},{}\n", -i)).collect();
        std::fs::write(&p, format!("re,im\n{body}")).unwrap();
        let f = GridFunction::from_csv(&p, 1.0).unwrap();
        assert_eq!(f.samples()[3], C64::new(3.0, -3.0));
        std::fs::write(&p, (0..8).map(|i| format!("{i}\n")).collect::<String>()).unwrap();
        let f = GridFunction::from_csv(&p, 1.0).unwrap();
        assert_eq!(f.samples()[7], C64::new(7.0, 0.0));
    }
}
