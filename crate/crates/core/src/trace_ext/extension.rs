//! Extension operators from the upper half-space and the quantities built on them.

use serde::{Deserialize, Serialize};

use super::hestenes::{hestenes_coeffs, hestenes_extend, HestenesVariant};
use super::lift::{build_lift_symbol, lift_apply};
use super::trace::{trace, HalfSpaceFunction};
use crate::decomposition::sequence::lattice_half;
use crate::decomposition::{build_kappa, max_quark_level, quark_round_trip, QuarkBasis, DEFAULT_BETA_MAX, DEFAULT_RHO};
use crate::error::{Error, Result};
use crate::exponents::ExponentField;
use crate::grid::{Grid, GridFunction};
use crate::littlewood_paley::{build_resolution, default_band_count, norm_report, Flavor};
use crate::mixed_norms::QExponent;
use crate::tolerances::LIFT_EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtPath {
    Smooth,
    Lifted,
    Hestenes,
}

impl ExtPath {
    pub const ALL: [ExtPath; 3] = [ExtPath::Smooth, ExtPath::Lifted, ExtPath::Hestenes];
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtParams {
    /// Order M of the reflection.
    pub order: usize,
    pub variant: HestenesVariant,
    /// Reflection order of the interior candidate analysed by the smooth path.
    pub candidate_order: usize,
    /// Highest analysis band; defaults to the largest the grid supports.
    pub nu_max: Option<u32>,
    pub rho: u32,
    pub beta_max: u32,
    pub epsilon: f64,
    /// Lift order of the lifted path; 1/2 when unset.
    pub sigma: Option<f64>,
}

impl Default for ExtParams {
    fn default() -> Self {
        ExtParams {
            order: 3,
            variant: HestenesVariant::DerivativeMatching,
            candidate_order: 3,
            nu_max: None,
            rho: DEFAULT_RHO,
            beta_max: DEFAULT_BETA_MAX,
            epsilon: LIFT_EPSILON,
            sigma: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExtResult {
    pub path: ExtPath,
    pub function: GridFunction,
    /// `sup_{x_n ≥ 0} |Ext f − f|`.
    pub restriction_error: f64,
    pub truncated_points: usize,
    pub sigma: Option<f64>,
    pub epsilon: Option<f64>,
}

/// Analysis depth of the smooth path: the first band reaching the axis Nyquist frequency,
/// so every axis-aligned frequency of the grid is analysed.
pub fn max_analysis_band(grid: &Grid) -> u32 {
    let mut nu = (grid.nyquist().log2().ceil() as i64 - 1).max(0) as u32;
    nu = nu.min(max_quark_level(grid));
    while nu > 0 && lattice_half(grid, nu).is_err() {
        nu -= 1;
    }
    nu
}

/// Smallest multiple of 1/2, and at least 1/2, with `s + σ > n/p` everywhere.
pub fn lift_sigma(p: &ExponentField, s: &ExponentField) -> Result<f64> {
    s.check_grid(p.grid())?;
    let n = p.grid().dim() as f64;
    let worst = p.values().iter().zip(s.values()).map(|(pv, sv)| n / pv - sv).fold(f64::NEG_INFINITY, f64::max);
    let sigma = ((worst * 2.0).floor() + 1.0) / 2.0;
    Ok(sigma.max(0.5))
}

/// Order-`order` reflection of `f` damped by `exp(−(x_n/w)^{2k})` below the boundary,
/// with 2k ≥ order so boundary derivatives of order < `order` still match, and `w`
/// chosen so the damping reaches 1e−12 before reflected points leave the grid.
pub fn interior_candidate(f: &HalfSpaceFunction, order: usize) -> Result<GridFunction> {
    let grid = *f.grid();
    let mut g = hestenes_extend(f, &hestenes_coeffs(order, HestenesVariant::DerivativeMatching)?).function;
    let k = order.div_ceil(2).max(1) as i32;
    let reach = grid.half_extent() / order as f64;
    let w = reach / (12.0 * std::f64::consts::LN_10).powf(0.5 / k as f64);
    let axis = grid.dim() - 1;
    for (idx, v) in g.samples_mut().iter_mut().enumerate() {
        let xn = grid.point(idx)[axis];
        if xn < 0.0 {
            *v *= (-(xn / w).powi(2 * k)).exp();
        }
    }
    Ok(g)
}

fn smooth_path(f: &HalfSpaceFunction, params: &ExtParams, candidate: Option<&GridFunction>) -> Result<(GridFunction, usize)> {
    let grid = *f.grid();
    let (cand, mut truncated) = match candidate {
        Some(c) => {
            c.grid().check_same(&grid)?;
            (c.clone(), 0)
        }
        None => (interior_candidate(f, params.candidate_order)?, 0),
    };
    let nu_max = params.nu_max.unwrap_or_else(|| max_analysis_band(&grid));
    let basis = QuarkBasis::new(grid.dim(), params.rho, params.beta_max)?;
    let kernel = build_kappa(&grid, 0)?;
    let res = build_resolution(&grid, (nu_max as usize).min(default_band_count(&grid)))?;
    let synth = quark_round_trip(&cand, &basis, &kernel, &res, nu_max)?;
    // Reflecting every quark and resynthesising equals reflecting the sum.
    let ext = hestenes_extend(&HalfSpaceFunction::restrict(&synth)?, &hestenes_coeffs(params.order, params.variant)?);
    truncated += ext.truncated_points;
    Ok((ext.function, truncated))
}

/// An extension of `f` to the full grid along `path`.
pub fn ext_n(f: &HalfSpaceFunction, path: ExtPath, params: &ExtParams, candidate: Option<&GridFunction>) -> Result<ExtResult> {
    let grid = *f.grid();
    let (function, truncated_points, sigma, epsilon) = match path {
        ExtPath::Hestenes => {
            let e = hestenes_extend(f, &hestenes_coeffs(params.order, params.variant)?);
            (e.function, e.truncated_points, None, None)
        }
        ExtPath::Smooth => {
            let (g, t) = smooth_path(f, params, candidate)?;
            (g, t, None, None)
        }
        ExtPath::Lifted => {
            let sigma = params.sigma.unwrap_or(0.5);
            let down = build_lift_symbol(-sigma, params.epsilon, &grid)?;
            let up = build_lift_symbol(sigma, params.epsilon, &grid)?;
            let g = match candidate {
                Some(c) => c.clone(),
                None => interior_candidate(f, params.candidate_order)?,
            };
            let lowered = HalfSpaceFunction::restrict(&lift_apply(&g, &down)?)?;
            let (ext, t) = smooth_path(&lowered, params, None)?;
            (lift_apply(&ext, &up)?, t, Some(sigma), Some(up.epsilon.min(down.epsilon)))
        }
    };
    let restriction_error = f.restriction_error(&function)?;
    Ok(ExtResult { path, function, restriction_error, truncated_points, sigma, epsilon })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceNormReport {
    /// Minimum over the paths: an upper bound for the half-space norm.
    pub upper_bound: f64,
    pub per_path: Vec<(ExtPath, f64)>,
    pub best_path: ExtPath,
}

/// `min_path ‖Ext_path f‖`, an upper bound for the infimum over all extensions.
pub fn halfspace_norm_upper(
    f: &HalfSpaceFunction,
    p: &ExponentField,
    q: &QExponent,
    s: &ExponentField,
    flavor: Flavor,
    params: &ExtParams,
) -> Result<HalfspaceNormReport> {
    let grid = *f.grid();
    let res = build_resolution(&grid, default_band_count(&grid))?;
    let mut per_path = Vec::new();
    for path in ExtPath::ALL {
        let mut prm = params.clone();
        if path == ExtPath::Lifted && prm.sigma.is_none() {
            prm.sigma = Some(lift_sigma(p, s)?);
        }
        let e = ext_n(f, path, &prm, None)?;
        per_path.push((path, norm_report(&e.function, p, q, s, &res, flavor)?.norm));
    }
    let (best_path, upper_bound) = per_path
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::NumericRange("no extension path".into()))?;
    Ok(HalfspaceNormReport { upper_bound, per_path, best_path })
}

#[derive(Clone, Debug)]
pub struct UtraceReport {
    pub per_path: Vec<(ExtPath, GridFunction)>,
    /// max over path pairs of `sup|tr_a − tr_b| / sup|tr_hestenes|`.
    pub spread: f64,
}

impl UtraceReport {
    pub fn trace_for(&self, path: ExtPath) -> Option<&GridFunction> {
        self.per_path.iter().find(|(p, _)| *p == path).map(|(_, g)| g)
    }
}

/// `tr[Ext f]` along every path, with their mutual spread.
pub fn utrace(f: &HalfSpaceFunction, params: &ExtParams) -> Result<UtraceReport> {
    let mut per_path = Vec::new();
    for path in ExtPath::ALL {
        per_path.push((path, trace(&ext_n(f, path, params, None)?.function)?));
    }
    let scale = per_path.iter().find(|(p, _)| *p == ExtPath::Hestenes).map_or(0.0, |(_, g)| g.max_abs());
    let mut spread = 0.0f64;
    for a in 0..per_path.len() {
        for b in a + 1..per_path.len() {
            let d = per_path[a].1.sub(&per_path[b].1)?.max_abs();
            spread = spread.max(if scale > 0.0 { d / scale } else { d });
        }
    }
    Ok(UtraceReport { per_path, spread })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::ExponentRole;
    use crate::C64;

    fn fixture(g: Grid) -> GridFunction {
        GridFunction::from_real_fn(g, |x| (-(x[0] * x[0] + (x[1] - 0.3).powi(2))).exp() * (1.0 + 0.2 * x[0]))
    }

    #[test]
    fn restriction_identity_and_traces() {
        let g = Grid::new(2, 4.0, 128).unwrap();
        let full = fixture(g);
        let f = HalfSpaceFunction::restrict(&full).unwrap();
        let params = ExtParams::default();
        let errs: Vec<f64> = ExtPath::ALL.iter().map(|p| ext_n(&f, *p, &params, None).unwrap().restriction_error).collect();
        assert!(errs[0] <= 1e-6, "smooth {:e}", errs[0]);
        // The lowered candidate's tail wraps around the torus; see the README.
        assert!(errs[1] <= 1e-3, "lifted {:e}", errs[1]);
        assert_eq!(errs[2], 0.0);
        let u = utrace(&f, &params).unwrap();
        assert!(u.spread <= 1e-4, "spread {:e}", u.spread);
        let exact = trace(&full).unwrap();
        assert!(u.trace_for(ExtPath::Hestenes).unwrap().sub(&exact).unwrap().max_abs() == 0.0);
        assert!(u.trace_for(ExtPath::Smooth).unwrap().sub(&exact).unwrap().max_abs() <= 1e-6);
    }

    #[test]
    fn zero_extends_to_zero() {
        let g = Grid::new(2, 2.0, 16).unwrap();
        let zero = HalfSpaceFunction::restrict(&GridFunction::zeros(g, crate::grid::Domain::Spatial)).unwrap();
        for path in ExtPath::ALL {
            assert!(ext_n(&zero, path, &ExtParams::default(), None).unwrap().function.is_zero());
        }
    }

    #[test]
    fn norm_upper_bound_properties() {
        let g = Grid::new(2, 2.0, 32).unwrap();
        let full = fixture(g);
        let f = HalfSpaceFunction::restrict(&full).unwrap();
        let p = ExponentField::constant(g, 2.0, ExponentRole::Integrability).unwrap();
        let q = QExponent::Finite(p.clone());
        let s = ExponentField::constant(g, 0.5, ExponentRole::Smoothness).unwrap();
        let prm = ExtParams::default();
        let r = halfspace_norm_upper(&f, &p, &q, &s, Flavor::Besov, &prm).unwrap();
        let r3 = halfspace_norm_upper(&f.scale(C64::new(-3.0, 0.0)), &p, &q, &s, Flavor::Besov, &prm).unwrap();
        assert!((r3.upper_bound - 3.0 * r.upper_bound).abs() <= 1e-9 * r3.upper_bound);
        assert_eq!(r.per_path.len(), 3);
        assert_eq!(lift_sigma(&p, &s).unwrap(), 1.0);
    }
}
