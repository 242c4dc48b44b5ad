//! Lifting multipliers `(⟨ξ′⟩ ψ_ε(ξ_n/⟨ξ′⟩))^σ` that preserve lower half-space supports.
//!
//! On the grid ξ_n enters through [`lattice_frequency`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{multiplier_apply, Grid, GridFunction};
use crate::profile::{bump, gauss_legendre};
use crate::tolerances::{LIFT_EPSILON_RETRIES, LIFT_QUADRATURE_NODES};
use crate::C64;

/// Quadrature nodes on (−2, −1) and weights already multiplied by η, normalised
/// so that the rule integrates η to exactly 2.
fn eta_rule() -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(LIFT_QUADRATURE_NODES);
    let t: Vec<f64> = x.iter().map(|v| -1.5 + 0.5 * v).collect();
    let raw: Vec<f64> = t.iter().zip(&w).map(|(ti, wi)| 0.5 * wi * bump(ti + 2.0)).collect();
    let total: f64 = raw.iter().sum();
    (t, raw.into_iter().map(|v| 2.0 * v / total).collect())
}

/// `ψ_ε(z) = ∫ η(t) e^{−iεtz} dt − iz` for real z.
pub fn psi_epsilon(epsilon: f64, z: f64) -> C64 {
    let (t, w) = eta_rule();
    psi_with_rule(&t, &w, epsilon, C64::new(z, 0.0))
}

/// `ψ_ε` at complex `z`; bounded for `Im z ≥ 0`.
fn psi_with_rule(t: &[f64], w: &[f64], epsilon: f64, z: C64) -> C64 {
    let i = C64::new(0.0, 1.0);
    let mut acc = -i * z;
    for (ti, wi) in t.iter().zip(w) {
        acc += (-i * epsilon * ti * z).exp() * wi;
    }
    acc
}

/// Lattice stand-in for the normal frequency: `(e^{ihξ} − 1)/(ih)`. It is periodic,
/// agrees with ξ to first order and maps `Im ξ ≥ 0` into itself, so a symbol analytic
/// there becomes a power series in the forward shift and keeps lattice supports in
/// `x_n ≤ 0` exactly.
pub fn lattice_frequency(xi: f64, h: f64) -> C64 {
    let i = C64::new(0.0, 1.0);
    ((i * h * xi).exp() - 1.0) / (i * h)
}

/// Membership in `{Re z > 1} ∪ {|Im z| > 1}`.
pub fn in_omega0(z: C64) -> bool {
    z.re > 1.0 || z.im.abs() > 1.0
}

#[derive(Clone, Debug)]
pub struct LiftSymbol {
    pub sigma: f64,
    pub epsilon: f64,
    /// Number of times the requested ε was halved to satisfy the range condition.
    pub halvings: u32,
    pub symbol: GridFunction,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparabilityBand {
    pub min: f64,
    pub max: f64,
}

fn bracket(xi: &[f64], dim: usize) -> f64 {
    (1.0 + xi[..dim - 1].iter().map(|v| v * v).sum::<f64>()).sqrt()
}

/// Base values `⟨ξ′⟩ ψ_ε(ξ_n/⟨ξ′⟩)` on the frequency grid, or `None` if some
/// `ψ_ε(ξ_n/⟨ξ′⟩)` leaves Ω₀.
fn base_values(grid: &Grid, epsilon: f64) -> Option<Vec<C64>> {
    let (t, w) = eta_rule();
    let dim = grid.dim();
    let mut out = Vec::with_capacity(grid.len());
    for idx in 0..grid.len() {
        let xi = grid.frequency(idx);
        let b = bracket(&xi, dim);
        let psi = psi_with_rule(&t, &w, epsilon, lattice_frequency(xi[dim - 1], grid.spacing()) / b);
        if !in_omega0(psi) {
            return None;
        }
        out.push(psi * b);
    }
    Some(out)
}

/// The symbol of `J_σ` via the principal power; ε is halved up to ten times if the
/// range condition fails on the grid.
pub fn build_lift_symbol(sigma: f64, epsilon: f64, grid: &Grid) -> Result<LiftSymbol> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::OutOfRange(format!("epsilon = {epsilon} must be positive")));
    }
    if !sigma.is_finite() {
        return Err(Error::InvalidInput("sigma must be finite".into()));
    }
    let mut eps = epsilon;
    for halvings in 0..=LIFT_EPSILON_RETRIES as u32 {
        if let Some(base) = base_values(grid, eps) {
            let vals = base.into_iter().map(|z| if sigma == 0.0 { C64::new(1.0, 0.0) } else { (z.ln() * sigma).exp() }).collect();
            let symbol = GridFunction::new(*grid, vals, crate::grid::Domain::Spectral)?;
            return Ok(LiftSymbol { sigma, epsilon: eps, halvings, symbol });
        }
        eps *= 0.5;
    }
    Err(Error::EpsilonTooLarge(format!(
        "range condition fails for epsilon = {epsilon} after {LIFT_EPSILON_RETRIES} halvings"
    )))
}

/// `J_σ f = φ^{(σ)}(D) f`.
pub fn lift_apply(f: &GridFunction, sym: &LiftSymbol) -> Result<GridFunction> {
    multiplier_apply(&sym.symbol, f)
}

/// Range of `|φ^{(1)}(ξ)| / (⟨ξ′⟩ + |ξ_n|)` over the frequency grid.
pub fn comparability_band(grid: &Grid, epsilon: f64) -> Result<ComparabilityBand> {
    let sym = build_lift_symbol(1.0, epsilon, grid)?;
    let dim = grid.dim();
    let mut band = ComparabilityBand { min: f64::INFINITY, max: 0.0 };
    for idx in 0..grid.len() {
        let xi = grid.frequency(idx);
        let r = sym.symbol.samples()[idx].norm() / (bracket(&xi, dim) + xi[dim - 1].abs());
        band.min = band.min.min(r);
        band.max = band.max.max(r);
    }
    Ok(band)
}

/// `‖J f‖²` over `{x_n > threshold}` divided by the total `‖J f‖²`.
pub fn upper_mass_ratio(f: &GridFunction, threshold: f64) -> f64 {
    let g = f.grid();
    let dim = g.dim();
    let (mut upper, mut total) = (0.0, 0.0);
    for (idx, v) in f.samples().iter().enumerate() {
        let e = v.norm_sqr();
        total += e;
        if g.point(idx)[dim - 1] > threshold {
            upper += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        upper / total
    }
}
