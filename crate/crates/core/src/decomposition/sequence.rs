//! Dyadic cubes, coefficient arrays and their b/f sequence norms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{ExponentField, ExponentRole};
use crate::grid::Grid;
use crate::littlewood_paley::Flavor;
use crate::mixed_norms::{ell_q_lp_from_logs, lp_ell_q_from_logs, QExponent, MAX_SEQUENCE_LEN};
use crate::C64;

/// `Q_{ν,m} = Π_i [2^{−ν} m_i, 2^{−ν}(m_i + 1))`; unused trailing entries of `m` are 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicCube {
    pub nu: u32,
    pub m: [i64; 2],
}

impl DyadicCube {
    pub fn new(nu: u32, m: &[i64]) -> Self {
        let mut mm = [0; 2];
        mm[..m.len()].copy_from_slice(m);
        DyadicCube { nu, m: mm }
    }

    pub fn side(&self) -> f64 {
        2f64.powi(-(self.nu as i32))
    }

    pub fn center(&self) -> [f64; 2] {
        let s = self.side();
        [(self.m[0] as f64 + 0.5) * s, (self.m[1] as f64 + 0.5) * s]
    }

    /// Membership in the cube with the same centre and `gamma` times the side.
    pub fn contains_dilated(&self, x: &[f64], gamma: f64) -> bool {
        let c = self.center();
        let half = 0.5 * gamma * self.side();
        x.iter().zip(c).all(|(xi, ci)| *xi >= ci - half && *xi < ci + half)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let s = self.side();
        x.iter().zip(self.m).all(|(xi, mi)| (xi / s).floor() as i64 == mi)
    }
}

/// Dense square block of coefficients at one level: `m_i ∈ [origin_i, origin_i + size)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicLevel {
    dim: usize,
    nu: u32,
    origin: [i64; 2],
    size: usize,
    values: Vec<C64>,
}

impl DyadicLevel {
    pub fn zeros(dim: usize, nu: u32, origin: [i64; 2], size: usize) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidInput(format!("dimension {dim} not supported")));
        }
        let origin = if dim == 1 { [origin[0], 0] } else { origin };
        Ok(DyadicLevel { dim, nu, origin, size, values: vec![C64::new(0.0, 0.0); size.pow(dim as u32)] })
    }

    /// The block covering every cube of level `nu` in `[−T, T)^n`.
    pub fn torus(grid: &Grid, nu: u32) -> Result<Self> {
        let half = lattice_half(grid, nu)?;
        Self::zeros(grid.dim(), nu, [-half, -half], 2 * half as usize)
    }

    pub fn from_values(dim: usize, nu: u32, origin: [i64; 2], size: usize, values: Vec<C64>) -> Result<Self> {
        let mut out = Self::zeros(dim, nu, origin, size)?;
        if values.len() != out.values.len() {
            return Err(Error::InvalidInput(format!("expected {} values, got {}", out.values.len(), values.len())));
        }
        out.values = values;
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn origin(&self) -> [i64; 2] {
        self.origin
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn index_of(&self, m: [i64; 2]) -> Option<usize> {
        let mut idx = 0usize;
        for a in 0..self.dim {
            let k = m[a] - self.origin[a];
            if k < 0 || k >= self.size as i64 {
                return None;
            }
            idx = idx * self.size + k as usize;
        }
        if self.dim == 1 && m[1] != 0 {
            return None;
        }
        Some(idx)
    }

    pub fn m_of(&self, idx: usize) -> [i64; 2] {
        if self.dim == 1 {
            [self.origin[0] + idx as i64, 0]
        } else {
            [self.origin[0] + (idx / self.size) as i64, self.origin[1] + (idx % self.size) as i64]
        }
    }

    pub fn get(&self, m: [i64; 2]) -> C64 {
        self.index_of(m).map_or(C64::new(0.0, 0.0), |i| self.values[i])
    }

    pub fn set(&mut self, m: [i64; 2], v: C64) -> Result<()> {
        let i = self
            .index_of(m)
            .ok_or_else(|| Error::OutOfRange(format!("index {m:?} outside the window of level {}", self.nu)))?;
        self.values[i] = v;
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Nonzero entries as `(m, value)`.
    pub fn nonzero(&self) -> impl Iterator<Item = ([i64; 2], C64)> + '_ {
        self.values.iter().enumerate().filter(|(_, v)| **v != C64::new(0.0, 0.0)).map(|(i, v)| (self.m_of(i), *v))
    }
}

/// `2^ν T` as an integer: half the number of level-ν cubes per axis of `[−T, T)`.
pub fn lattice_half(grid: &Grid, nu: u32) -> Result<i64> {
    let v = grid.half_extent() * 2f64.powi(nu as i32);
    if (v - v.round()).abs() > 1e-9 * v.max(1.0) || v.round() < 1.0 {
        return Err(Error::Resolution(format!("2^{nu} T = {v} is not a positive integer")));
    }
    Ok(v.round() as i64)
}

/// Grid points per cube side at level `nu`; the spacing must be dyadic and at most 2^{−ν}.
pub fn cube_stride(grid: &Grid, nu: u32) -> Result<usize> {
    match grid.dyadic_exponent() {
        Some(e) if e >= nu as i32 => Ok(1usize << (e - nu as i32) as u32),
        _ => Err(Error::Resolution(format!(
            "level {nu} cubes need a dyadic spacing h <= 2^-{nu}, grid has h = {}",
            grid.spacing()
        ))),
    }
}

/// Finitely supported map `(ν, m) ↦ λ_{ν,m}` stored as one dense block per level.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CoefficientArray {
    dim: usize,
    levels: BTreeMap<u32, DyadicLevel>,
}

impl CoefficientArray {
    pub fn new(dim: usize) -> Self {
        CoefficientArray { dim, levels: BTreeMap::new() }
    }

    /// Builds minimal windows around the given entries; repeated indices are summed.
    pub fn from_entries(dim: usize, entries: &[(u32, [i64; 2], C64)]) -> Result<Self> {
        let mut bounds: BTreeMap<u32, ([i64; 2], [i64; 2])> = BTreeMap::new();
        for &(nu, m, _) in entries {
            if dim == 1 && m[1] != 0 {
                return Err(Error::InvalidInput("1-D entries must have m[1] = 0".into()));
            }
            let b = bounds.entry(nu).or_insert((m, m));
            for a in 0..2 {
                b.0[a] = b.0[a].min(m[a]);
                b.1[a] = b.1[a].max(m[a]);
            }
        }
        let mut out = CoefficientArray::new(dim);
        for (nu, (lo, hi)) in bounds {
            let size = (0..dim).map(|a| (hi[a] - lo[a] + 1) as usize).max().unwrap_or(1);
            out.levels.insert(nu, DyadicLevel::zeros(dim, nu, lo, size)?);
        }
        for &(nu, m, v) in entries {
            let level = out.levels.get_mut(&nu).expect("window created above");
            let i = level.index_of(m).expect("inside bounding box");
            level.values[i] += v;
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn insert_level(&mut self, level: DyadicLevel) -> Result<()> {
        if level.dim != self.dim {
            return Err(Error::InvalidInput("level dimension mismatch".into()));
        }
        self.levels.insert(level.nu, level);
        Ok(())
    }

    pub fn level(&self, nu: u32) -> Option<&DyadicLevel> {
        self.levels.get(&nu)
    }

    pub fn levels(&self) -> impl Iterator<Item = &DyadicLevel> {
        self.levels.values()
    }

    pub fn get(&self, nu: u32, m: [i64; 2]) -> C64 {
        self.levels.get(&nu).map_or(C64::new(0.0, 0.0), |l| l.get(m))
    }

    /// Largest level carrying a nonzero entry.
    pub fn nu_max(&self) -> Option<u32> {
        self.levels.values().filter(|l| l.max_abs() > 0.0).map(|l| l.nu).max()
    }

    pub fn is_zero(&self) -> bool {
        self.nu_max().is_none()
    }

    pub fn entries(&self) -> Vec<(u32, [i64; 2], C64)> {
        self.levels.values().flat_map(|l| l.nonzero().map(move |(m, v)| (l.nu, m, v))).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.levels.values().map(|l| l.max_abs()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        for l in out.levels.values_mut() {
            l.values.iter_mut().for_each(|v| *v *= c);
        }
        out
    }

    /// Entry-wise sum over the union of supports.
    pub fn add(&self, other: &CoefficientArray) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::InvalidInput("dimension mismatch".into()));
        }
        let mut e = self.entries();
        e.extend(other.entries());
        CoefficientArray::from_entries(self.dim, &e)
    }

    /// `λ_{ν, m − l}`: every index moved by `shift`.
    pub fn shifted(&self, shift: [i64; 2]) -> Self {
        let mut out = self.clone();
        for l in out.levels.values_mut() {
            for a in 0..self.dim {
                l.origin[a] += shift[a];
            }
        }
        out
    }

    /// Entries with `m_n = 0` of a 2-D array, as a 1-D array in `m′`.
    pub fn hyperplane_slice(&self) -> Result<Self> {
        if self.dim != 2 {
            return Err(Error::InvalidInput("hyperplane slice needs a 2-D array".into()));
        }
        let e: Vec<_> = self.entries().into_iter().filter(|(_, m, _)| m[1] == 0).map(|(nu, m, v)| (nu, [m[0], 0], v)).collect();
        CoefficientArray::from_entries(1, &e)
    }

    /// A 1-D array placed on the hyperplane `m_n = 0` of 2-D index space.
    pub fn embed_hyperplane(&self) -> Result<Self> {
        if self.dim != 1 {
            return Err(Error::InvalidInput("embedding needs a 1-D array".into()));
        }
        CoefficientArray::from_entries(2, &self.entries())
    }
}

/// Per-level log magnitudes `ln|2^{νs(x)} Σ_m λ_{ν,m} 1_{E_{ν,m}}(x)|` on the grid.
fn level_logs(
    lambda: &CoefficientArray,
    grid: &Grid,
    s: &ExponentField,
    fill: impl Fn(&DyadicLevel, &mut [C64]) -> Result<()>,
) -> Result<Vec<Vec<f64>>> {
    if lambda.dim != grid.dim() {
        return Err(Error::InvalidInput("coefficient and grid dimensions differ".into()));
    }
    s.check_grid(grid)?;
    if s.role() != ExponentRole::Smoothness {
        return Err(Error::InvalidInput("s must be a smoothness exponent".into()));
    }
    let nu_max = lambda.nu_max().unwrap_or(0);
    if nu_max as usize >= MAX_SEQUENCE_LEN {
        return Err(Error::OutOfRange(format!("level {nu_max} exceeds the supported sequence length")));
    }
    let ln2 = std::f64::consts::LN_2;
    let mut out = Vec::with_capacity(nu_max as usize + 1);
    for nu in 0..=nu_max {
        let mut vals = vec![C64::new(0.0, 0.0); grid.len()];
        if let Some(level) = lambda.level(nu) {
            if level.max_abs() > 0.0 {
                fill(level, &mut vals)?;
            }
        }
        out.push(
            vals.iter()
                .zip(s.values())
                .map(|(v, sv)| if v.norm() > 0.0 { v.norm().ln() + nu as f64 * sv * ln2 } else { f64::NEG_INFINITY })
                .collect(),
        );
    }
    Ok(out)
}

fn fill_cubes(grid: &Grid, level: &DyadicLevel, vals: &mut [C64]) -> Result<()> {
    let stride = cube_stride(grid, level.nu)?;
    let half = lattice_half(grid, level.nu)?;
    for (m, _) in level.nonzero() {
        if (0..grid.dim()).any(|a| m[a] < -half || m[a] >= half) {
            return Err(Error::OutOfRange(format!("cube (ν={}, m={:?}) lies outside the grid", level.nu, &m[..grid.dim()])));
        }
    }
    for (idx, v) in vals.iter_mut().enumerate() {
        let ix = grid.multi_index(idx);
        let mut m = [0i64; 2];
        for a in 0..grid.dim() {
            m[a] = (ix[a] / stride) as i64 - half;
        }
        *v = level.get(m);
    }
    Ok(())
}

fn finish(logs: &[Vec<f64>], grid: &Grid, p: &ExponentField, q: &QExponent, flavor: Flavor) -> Result<f64> {
    p.check_grid(grid)?;
    if let Some(q) = q.finite() {
        q.check_grid(grid)?;
    }
    let qv = q.finite().map(|q| q.values());
    let cell = grid.cell_volume();
    Ok(match flavor {
        Flavor::Besov => ell_q_lp_from_logs(logs, p.values(), qv, cell)?.norm,
        Flavor::Triebel => lp_ell_q_from_logs(logs, p.values(), qv, cell)?.norm,
    })
}

/// Norm of the step functions `2^{νs(·)} Σ_m λ_{ν,m} χ_{ν,m}` in the mixed space of `flavor`.
pub fn seq_norm(lambda: &CoefficientArray, p: &ExponentField, q: &QExponent, s: &ExponentField, flavor: Flavor) -> Result<f64> {
    let grid = *p.grid();
    let logs = level_logs(lambda, &grid, s, |level, vals| fill_cubes(&grid, level, vals))?;
    finish(&logs, &grid, p, q, flavor)
}

pub fn seq_norm_b(lambda: &CoefficientArray, p: &ExponentField, q: &QExponent, s: &ExponentField) -> Result<f64> {
    seq_norm(lambda, p, q, s, Flavor::Besov)
}

pub fn seq_norm_f(lambda: &CoefficientArray, p: &ExponentField, q: &QExponent, s: &ExponentField) -> Result<f64> {
    seq_norm(lambda, p, q, s, Flavor::Triebel)
}

/// As [`seq_norm`] with `χ_{ν,m}` replaced by the indicator of a set `E_{ν,m}`,
/// given as the flat grid indices it contains.
pub fn seq_norm_with_sets(
    lambda: &CoefficientArray,
    p: &ExponentField,
    q: &QExponent,
    s: &ExponentField,
    flavor: Flavor,
    sets: &dyn Fn(u32, [i64; 2]) -> Vec<usize>,
) -> Result<f64> {
    let grid = *p.grid();
    let logs = level_logs(lambda, &grid, s, |level, vals| {
        for (m, v) in level.nonzero() {
            for i in sets(level.nu, m) {
                let slot = vals.get_mut(i).ok_or_else(|| Error::OutOfRange(format!("set index {i} outside the grid")))?;
                *slot += v;
            }
        }
        Ok(())
    })?;
    finish(&logs, &grid, p, q, flavor)
}

/// Flat grid indices of the points inside `Q_{ν,m}`.
pub fn cube_points(grid: &Grid, cube: DyadicCube) -> Result<Vec<usize>> {
    let stride = cube_stride(grid, cube.nu)? as i64;
    let half = lattice_half(grid, cube.nu)?;
    let n = grid.samples_per_axis() as i64;
    let start: Vec<i64> = (0..grid.dim()).map(|a| (cube.m[a] + half) * stride).collect();
    if start.iter().any(|&s| s < 0 || s + stride > n) {
        return Err(Error::OutOfRange(format!("cube {cube:?} lies outside the grid")));
    }
    let mut out = Vec::new();
    if grid.dim() == 1 {
        out.extend((start[0]..start[0] + stride).map(|i| i as usize));
    } else {
        for i in start[0]..start[0] + stride {
            for j in start[1]..start[1] + stride {
                out.push(grid.flat_index([i as usize, j as usize]));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn field(g: Grid, v: f64, role: ExponentRole) -> ExponentField {
        ExponentField::constant(g, v, role).unwrap()
    }

    #[test]
    fn single_cube_norms() {
        let g = Grid::new(1, 4.0, 64).unwrap();
        let s0 = field(g, 0.0, ExponentRole::Smoothness);
        for pv in [1.0, 2.0, 3.5] {
            let p = field(g, pv, ExponentRole::Integrability);
            let q = QExponent::Finite(p.clone());
            let one = CoefficientArray::from_entries(1, &[(0, [0, 0], C64::new(1.0, 0.0))]).unwrap();
            assert_relative_eq!(seq_norm_b(&one, &p, &q, &s0).unwrap(), 1.0, max_relative = 1e-8);
            assert_relative_eq!(seq_norm_f(&one, &p, &q, &s0).unwrap(), 1.0, max_relative = 1e-8);
        }
        let p = field(g, 2.0, ExponentRole::Integrability);
        let q = QExponent::Finite(p.clone());
        let half = CoefficientArray::from_entries(1, &[(1, [0, 0], C64::new(1.0, 0.0))]).unwrap();
        assert_relative_eq!(seq_norm_b(&half, &p, &q, &s0).unwrap(), 0.5f64.sqrt(), max_relative = 1e-8);
        assert_eq!(seq_norm_b(&CoefficientArray::new(1), &p, &q, &s0).unwrap(), 0.0);
        assert_eq!(seq_norm_f(&CoefficientArray::new(1), &p, &q, &s0).unwrap(), 0.0);
        let outside = CoefficientArray::from_entries(1, &[(0, [4, 0], C64::new(1.0, 0.0))]).unwrap();
        assert!(matches!(seq_norm_b(&outside, &p, &q, &s0), Err(Error::OutOfRange(_))));
        let fine = CoefficientArray::from_entries(1, &[(5, [0, 0], C64::new(1.0, 0.0))]).unwrap();
        assert!(matches!(seq_norm_b(&fine, &p, &q, &s0), Err(Error::Resolution(_))));
    }

    #[test]
    fn flavours_agree_when_p_equals_q_and_scale() {
        let g = Grid::new(2, 2.0, 32).unwrap();
        let p = ExponentField::from_fn(g, ExponentRole::Integrability, |x| 1.8 + 0.4 * (x[0] * x[1]).sin()).unwrap();
        let s = ExponentField::from_fn(g, ExponentRole::Smoothness, |x| 0.3 + 0.1 * x[1].cos()).unwrap();
        let q = QExponent::Finite(p.clone());
        let lam = CoefficientArray::from_entries(
            2,
            &[
                (0, [0, 0], C64::new(1.0, 0.0)),
                (1, [-2, 1], C64::new(0.0, 0.5)),
                (2, [3, -4], C64::new(-2.0, 1.0)),
                (3, [0, 7], C64::new(0.3, 0.0)),
            ],
        )
        .unwrap();
        let b = seq_norm_b(&lam, &p, &q, &s).unwrap();
        let f = seq_norm_f(&lam, &p, &q, &s).unwrap();
        assert_relative_eq!(b, f, max_relative = 1e-6);
        let b3 = seq_norm_b(&lam.scale(C64::new(0.0, 3.0)), &p, &q, &s).unwrap();
        assert_relative_eq!(b3, 3.0 * b, max_relative = 1e-9);
        // Sets equal to the cubes reproduce the cube norm.
        let via_sets = seq_norm_with_sets(&lam, &p, &q, &s, Flavor::Besov, &|nu, m| cube_points(&g, DyadicCube { nu, m }).unwrap()).unwrap();
        assert_relative_eq!(via_sets, b, max_relative = 1e-12);
    }

    #[test]
    fn array_bookkeeping() {
        let lam = CoefficientArray::from_entries(
            2,
            &[(1, [2, 0], C64::new(1.0, 0.0)), (1, [-1, 3], C64::new(2.0, 0.0)), (0, [0, 0], C64::new(-1.0, 0.0)), (1, [2, 0], C64::new(1.0, 0.0))],
        )
        .unwrap();
        assert_eq!(lam.get(1, [2, 0]), C64::new(2.0, 0.0));
        assert_eq!(lam.nu_max(), Some(1));
        assert_eq!(lam.entries().len(), 3);
        let sh = lam.shifted([1, -1]);
        assert_eq!(sh.get(1, [3, -1]), C64::new(2.0, 0.0));
        let slice = lam.hyperplane_slice().unwrap();
        assert_eq!(slice.entries().len(), 2);
        assert_eq!(slice.embed_hyperplane().unwrap().hyperplane_slice().unwrap().entries(), slice.entries());
        let cube = DyadicCube::new(2, &[1, -3]);
        assert!(cube.contains(&[0.3, -0.7]));
        assert!(!cube.contains(&[0.5, -0.7]));
        assert!(cube.contains_dilated(&[0.5, -0.7], 3.0));
    }
}
