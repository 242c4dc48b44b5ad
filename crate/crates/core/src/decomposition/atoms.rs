//! [K,L]-atom checks and smooth atom families built from quarks.

use serde::{Deserialize, Serialize};

use super::kappa::multi_indices;
use super::quarks::{quark_eval, QuarkBasis};
use super::sequence::DyadicCube;
use crate::error::{Error, Result};
use crate::grid::{spectral_derivative, Domain, Grid, GridFunction};
use crate::tolerances::SUPPORT_LEAKAGE;
use crate::C64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomReport {
    pub support_ok: bool,
    /// sup |a| outside γQ.
    pub support_leakage: f64,
    pub derivatives_ok: bool,
    /// min over |α| ≤ K of `2^{ν|α|} − ‖∂^α a‖_∞`.
    pub derivative_margin: f64,
    pub moments_ok: bool,
    /// max over |β| ≤ L of `|∫ x^β a| / max(1, ∫ |x^β a|)`.
    pub max_moment: f64,
}

impl AtomReport {
    pub fn passes(&self) -> bool {
        self.support_ok && self.derivatives_ok && self.moments_ok
    }
}

const MOMENT_TOL: f64 = 1e-10;
const DERIVATIVE_SLACK: f64 = 1e-9;

/// Checks support in `γ Q_{ν,m}`, `‖∂^α a‖_∞ ≤ 2^{ν|α|}` for |α| ≤ K and
/// vanishing moments up to order L (none when L < 0).
pub fn validate_atom(a: &GridFunction, k: u32, l: i32, cube: DyadicCube, gamma: f64) -> Result<AtomReport> {
    a.expect_domain(Domain::Spatial)?;
    if !(gamma > 1.0) {
        return Err(Error::OutOfRange(format!("gamma = {gamma} must exceed 1")));
    }
    let g = *a.grid();
    let dim = g.dim();
    let mut support_leakage = 0.0f64;
    for (idx, v) in a.samples().iter().enumerate() {
        if !cube.contains_dilated(&g.point(idx)[..dim], gamma) {
            support_leakage = support_leakage.max(v.norm());
        }
    }
    let mut derivative_margin = f64::INFINITY;
    for alpha in multi_indices(dim, k) {
        let d = spectral_derivative(a, &alpha[..dim])?;
        let bound = 2f64.powi((cube.nu * (alpha[0] + alpha[1])) as i32);
        derivative_margin = derivative_margin.min(bound - d.max_abs());
    }
    let mut max_moment = 0.0f64;
    if l >= 0 {
        for beta in multi_indices(dim, l as u32) {
            let (mut m, mut scale) = (C64::new(0.0, 0.0), 0.0);
            for (idx, v) in a.samples().iter().enumerate() {
                let x = g.point(idx);
                let w: f64 = (0..dim).map(|i| x[i].powi(beta[i] as i32)).product();
                m += v * w;
                scale += (v * w).norm();
            }
            max_moment = max_moment.max(m.norm() / scale.max(1.0 / g.cell_volume()));
        }
    }
    let top = a.max_abs().max(1.0);
    Ok(AtomReport {
        support_ok: support_leakage <= SUPPORT_LEAKAGE * top,
        support_leakage,
        derivatives_ok: derivative_margin >= -DERIVATIVE_SLACK * 2f64.powi((cube.nu * k) as i32),
        derivative_margin,
        moments_ok: max_moment <= MOMENT_TOL,
        max_moment,
    })
}

/// A smooth atom on `Q_{ν,m}`: the (L+1)-th forward difference along x_1, with a
/// step of about half a cube side rounded to whole grid cells, of `ψ(2^ν x − m)`
/// (plain ψ when L < 0). Differences of a compactly supported function kill every
/// moment of order ≤ L, also in discrete sums. The result is rescaled so that
/// `‖∂^α a‖_∞ ≤ 2^{ν|α|}` for |α| ≤ K.
pub fn quark_atom(grid: &Grid, basis: &QuarkBasis, cube: DyadicCube, k: u32, l: i32) -> Result<GridFunction> {
    let dim = grid.dim();
    let mut a = quark_eval([0, 0], cube.nu, cube.m, basis, grid)?;
    if l >= 0 {
        let cells = ((0.5 * cube.side() / grid.spacing()).round() as usize).max(1);
        let n = grid.samples_per_axis();
        for _ in 0..=l {
            let prev = a.samples().to_vec();
            for (idx, v) in a.samples_mut().iter_mut().enumerate() {
                let ix = grid.multi_index(idx);
                let back = grid.flat_index([(ix[0] + n - cells) % n, ix[1]]);
                *v = prev[idx] - prev[back];
            }
        }
    }
    let mut worst = 0.0f64;
    for alpha in multi_indices(dim, k) {
        let d = spectral_derivative(&a, &alpha[..dim])?;
        worst = worst.max(d.max_abs() / 2f64.powi((cube.nu * (alpha[0] + alpha[1])) as i32));
    }
    if worst == 0.0 {
        return Ok(a);
    }
    Ok(a.scale(C64::new(1.0 / worst, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_examples() {
        let g = Grid::new(1, 4.0, 512).unwrap();
        let basis = QuarkBasis::default_for(1).unwrap();
        let cube = DyadicCube::new(1, &[2]);
        let a = quark_atom(&g, &basis, cube, 2, -1).unwrap();
        let r = validate_atom(&a, 2, -1, cube, 3.0).unwrap();
        assert!(r.passes(), "{r:?}");
        // ψ has nonzero mean, so the order-0 moment fails.
        let r0 = validate_atom(&a, 2, 0, cube, 3.0).unwrap();
        assert!(!r0.moments_ok);
        let zero = GridFunction::zeros(g, Domain::Spatial);
        assert!(validate_atom(&zero, 3, 2, cube, 2.0).unwrap().passes());
        let moment = quark_atom(&g, &basis, cube, 2, 1).unwrap();
        let rm = validate_atom(&moment, 2, 1, cube, 3.0).unwrap();
        assert!(rm.passes(), "{rm:?}");
        // A too-small dilation loses the support check.
        assert!(!validate_atom(&a, 2, -1, cube, 1.5).unwrap().support_ok);
        assert!(validate_atom(&a, 2, -1, cube, 1.0).is_err());
    }

    #[test]
    fn two_dim_atom() {
        let g = Grid::new(2, 2.0, 64).unwrap();
        let basis = QuarkBasis::default_for(2).unwrap();
        let cube = DyadicCube::new(2, &[-1, 3]);
        let a = quark_atom(&g, &basis, cube, 1, 0).unwrap();
        let r = validate_atom(&a, 1, 0, cube, 3.0).unwrap();
        assert!(r.passes(), "{r:?}");
    }
}
