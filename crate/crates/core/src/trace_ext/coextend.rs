//! Right inverse of the trace built from boundary quark expansions.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::decomposition::{mu, quark_analyze, quark_synthesize, KappaKernel, QuarkBasis, QuarkCoefficients};
use crate::error::{Error, Result};
use crate::grid::{spectral_derivative, Domain, Grid, GridFunction};
use crate::littlewood_paley::ResolutionOfUnity;
use crate::C64;

/// Finest spacing of the auxiliary grid carrying the normal profiles.
const PROFILE_EXPONENT: i32 = 12;

/// `f = Σ_{j≤k} Σ_ν G_{j,ν}(x′) ∂_{x_n}^{2L}[x_n^{2L+j} μ(2^ν x_n)]/(2L+j)!`, where
/// `G_{j,ν}` is the level-ν part of the boundary quark expansion of `g_j`.
#[derive(Clone, Debug)]
pub struct CoExtension {
    grid: Grid,
    l_param: u32,
    /// `(j, ν, G_{j,ν})` on the boundary grid.
    parts: Vec<(u32, u32, Vec<C64>)>,
}

/// Samples of `[t^a μ(t)]^{(d)}` at `t = 2^ν x_n` for every grid row, computed
/// spectrally on a fine auxiliary grid over [−1, 1).
fn normal_profile(grid: &Grid, nu: u32, a: u32, d: u32) -> Result<Vec<f64>> {
    let e = grid
        .dyadic_exponent()
        .ok_or_else(|| Error::Resolution("co-extension needs a dyadic grid spacing".into()))?;
    let aux_e = PROFILE_EXPONENT.max(e - nu as i32);
    let n_aux = 1usize << (aux_e + 1);
    let aux = Grid::new(1, 1.0, n_aux)?;
    let base = GridFunction::from_real_fn(aux, |t| t[0].powi(a as i32) * mu(t[0]));
    let prof = spectral_derivative(&base, &[d])?;
    let n = grid.samples_per_axis();
    let mid = grid.origin_index() as i64;
    let per_row = 1i64 << (aux_e - e + nu as i32);
    Ok((0..n)
        .map(|r| {
            let k = (r as i64 - mid) * per_row;
            if k.abs() >= (n_aux / 2) as i64 {
                0.0
            } else {
                prof.samples()[(k + (n_aux / 2) as i64) as usize].re
            }
        })
        .collect())
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

impl CoExtension {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn k(&self) -> u32 {
        self.parts.iter().map(|p| p.0).max().unwrap_or(0)
    }

    pub fn function(&self) -> Result<GridFunction> {
        self.normal_derivative(0)
    }

    /// `∂_{x_n}^l f`, with the normal factors differentiated exactly.
    pub fn normal_derivative(&self, l: u32) -> Result<GridFunction> {
        let g = self.grid;
        let n = g.samples_per_axis();
        let mut profiles: BTreeMap<(u32, u32), Vec<f64>> = BTreeMap::new();
        for &(j, nu, _) in &self.parts {
            if let std::collections::btree_map::Entry::Vacant(e) = profiles.entry((j, nu)) {
                let a = 2 * self.l_param + j;
                let d = 2 * self.l_param + l;
                let scale = 2f64.powi(nu as i32 * (d as i32 - a as i32)) / factorial(a);
                let p = normal_profile(&g, nu, a, d)?;
                e.insert(p.into_iter().map(|v| v * scale).collect());
            }
        }
        let mut out = vec![C64::new(0.0, 0.0); g.len()];
        out.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for (j, nu, tang) in &self.parts {
                let prof = &profiles[&(*j, *nu)];
                let t = tang[i];
                if t == C64::new(0.0, 0.0) {
                    continue;
                }
                for (slot, p) in row.iter_mut().zip(prof) {
                    *slot += t * *p;
                }
            }
        });
        GridFunction::new(g, out, Domain::Spatial)
    }
}

/// Co-extension of boundary data `g_0..g_k` (1-D functions on the boundary grid):
/// `tr ∂_{x_n}^l f ≈ g_l` for l ≤ k.
pub fn coextend(
    g: &[GridFunction],
    l_param: u32,
    basis: &QuarkBasis,
    kernel: &KappaKernel,
    res: &ResolutionOfUnity,
    nu_max: u32,
) -> Result<CoExtension> {
    let first = g.first().ok_or_else(|| Error::InvalidInput("need at least g_0".into()))?;
    let bgrid = *first.grid();
    if bgrid.dim() != 1 {
        return Err(Error::InvalidInput("boundary data must be 1-D".into()));
    }
    let grid = bgrid.with_dim(2)?;
    let analyses = g
        .par_iter()
        .map(|gj| {
            gj.grid().check_same(&bgrid)?;
            quark_analyze(gj, basis, kernel, res, nu_max)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut parts = Vec::new();
    for (j, lam) in analyses.iter().enumerate() {
        let mut by_level: BTreeMap<u32, Vec<([u32; 2], u32, [i64; 2], C64)>> = BTreeMap::new();
        for e in lam.entries() {
            by_level.entry(e.1).or_default().push(e);
        }
        for (nu, entries) in by_level {
            let part = QuarkCoefficients::from_entries(1, lam.rho(), lam.beta_max(), &entries)?;
            let tang = quark_synthesize(&part, basis, &bgrid)?;
            parts.push((j as u32, nu, tang.into_samples()));
        }
    }
    Ok(CoExtension { grid, l_param, parts })
}
