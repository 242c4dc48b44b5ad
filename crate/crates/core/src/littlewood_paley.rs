//! Dyadic resolutions of unity, Littlewood–Paley pieces and the
//! variable-exponent Besov and Triebel–Lizorkin norms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{ExponentField, ExponentRole};
use crate::grid::{Domain, Grid, GridFunction};
use crate::lebesgue::norm_from_logs;
use crate::mixed_norms::{ell_q_lp_from_logs, lp_ell_q_from_logs, DyadicSequence, QExponent};
use crate::profile::plateau;
use crate::C64;

/// Radial profile equal to 1 on |ξ| ≤ 1 and 0 on |ξ| ≥ 2; generates θ.
pub fn theta_base(r: f64) -> f64 {
    plateau(r, 1.0, 2.0)
}

/// Radial profile equal to 1 on |ξ| ≤ 2 and 0 on |ξ| ≥ 3; generates τ and φ_j.
pub fn tau_profile(r: f64) -> f64 {
    plateau(r, 2.0, 3.0)
}

/// θ_j at radius r: θ_0 = θ_base, θ_j = θ_base(2^{-j}·) − θ_base(2^{1-j}·).
pub fn theta_value(j: usize, r: f64) -> f64 {
    if j == 0 {
        theta_base(r)
    } else {
        theta_base(r / 2f64.powi(j as i32)) - theta_base(r / 2f64.powi(j as i32 - 1))
    }
}

/// φ_ν at radius r: φ_0 = τ, φ_ν = τ(2^{-ν}·) − τ(2^{1-ν}·).
pub fn phi_value(nu: usize, r: f64) -> f64 {
    if nu == 0 {
        tau_profile(r)
    } else {
        tau_profile(r / 2f64.powi(nu as i32)) - tau_profile(r / 2f64.powi(nu as i32 - 1))
    }
}

/// The spectral symbol φ_ν on `grid`.
pub fn phi_symbol(grid: &Grid, nu: usize) -> GridFunction {
    let g = *grid;
    GridFunction::spectral_from_fn(g, |xi| C64::new(phi_value(nu, norm(xi)), 0.0))
}

fn norm(xi: &[f64]) -> f64 {
    xi.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[derive(Clone, Debug)]
pub struct ResolutionOfUnity {
    grid: Grid,
    j_max: usize,
    tau: GridFunction,
    theta: Vec<GridFunction>,
    phi: Vec<GridFunction>,
}

impl ResolutionOfUnity {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    pub fn tau(&self) -> &GridFunction {
        &self.tau
    }

    pub fn theta(&self) -> &[GridFunction] {
        &self.theta
    }

    /// φ_1..φ_J (φ_0 is τ).
    pub fn phi(&self) -> &[GridFunction] {
        &self.phi
    }
}

/// The largest J with 2^{J+1} ≤ Nyquist, i.e. floor(log2(Nyquist)) − 1.
pub fn default_band_count(grid: &Grid) -> usize {
    (grid.nyquist().log2().floor() as i64 - 1).max(0) as usize
}

pub fn build_resolution(grid: &Grid, j_max: usize) -> Result<ResolutionOfUnity> {
    if 2f64.powi(j_max as i32 + 1) > grid.nyquist() {
        return Err(Error::OutOfRange(format!(
            "J = {j_max} needs Nyquist >= {}, grid has {:.3}",
            2f64.powi(j_max as i32 + 1),
            grid.nyquist()
        )));
    }
    let g = *grid;
    let tau = GridFunction::spectral_from_fn(g, |xi| C64::new(tau_profile(norm(xi)), 0.0));
    let theta = (0..=j_max)
        .map(|j| GridFunction::spectral_from_fn(g, |xi| C64::new(theta_value(j, norm(xi)), 0.0)))
        .collect();
    let phi = (1..=j_max).map(|nu| phi_symbol(&g, nu)).collect();
    Ok(ResolutionOfUnity { grid: g, j_max, tau, theta, phi })
}

#[derive(Clone, Debug)]
pub struct LpDecomposition {
    pub sequence: DyadicSequence,
    /// Spectral energy of f not covered by θ_0..θ_J.
    pub tail_energy: f64,
}

pub fn lp_decompose(f: &GridFunction, res: &ResolutionOfUnity) -> Result<LpDecomposition> {
    f.expect_domain(Domain::Spatial)?;
    f.grid().check_same(&res.grid)?;
    let spec = f.forward_transform()?;
    let mut entries = Vec::with_capacity(res.theta.len());
    let mut covered = vec![0.0; spec.samples().len()];
    for th in &res.theta {
        let band = spec.zip_with(th, |a, b| a * b)?;
        for (c, t) in covered.iter_mut().zip(th.samples()) {
            *c += t.re;
        }
        entries.push(band.inverse_transform()?);
    }
    let dxi = res.grid.frequency_spacing().powi(res.grid.dim() as i32);
    let tail_energy = dxi
        * spec
            .samples()
            .iter()
            .zip(&covered)
            .map(|(z, c)| z.norm_sqr() * (1.0 - c).powi(2))
            .sum::<f64>();
    Ok(LpDecomposition { sequence: DyadicSequence::new(res.grid, entries)?, tail_energy })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub norm: f64,
    /// ‖2^{j s(·)} θ_j(D) f‖_{L^{p(·)}} for j = 0..J.
    pub per_band_norms: Vec<f64>,
    pub tail_energy: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Besov,
    Triebel,
}

fn weighted_logs(seq: &DyadicSequence, s: &ExponentField) -> Vec<Vec<f64>> {
    let ln2 = std::f64::consts::LN_2;
    seq.log_magnitudes()
        .into_iter()
        .enumerate()
        .map(|(j, l)| l.iter().zip(s.values()).map(|(v, sv)| v + j as f64 * sv * ln2).collect())
        .collect()
}

fn check_smoothness(s: &ExponentField, grid: &Grid) -> Result<()> {
    s.check_grid(grid)?;
    if s.role() != ExponentRole::Smoothness {
        return Err(Error::InvalidInput("s must be a smoothness exponent".into()));
    }
    Ok(())
}

/// Norm of the weighted pieces `{2^{j s(·)} θ_j(D) f}` in the mixed space of `flavor`.
pub fn norm_report(
    f: &GridFunction,
    p: &ExponentField,
    q: &QExponent,
    s: &ExponentField,
    res: &ResolutionOfUnity,
    flavor: Flavor,
) -> Result<NormReport> {
    check_smoothness(s, f.grid())?;
    p.check_grid(f.grid())?;
    if let Some(q) = q.finite() {
        q.check_grid(f.grid())?;
    }
    let dec = lp_decompose(f, res)?;
    let logs = weighted_logs(&dec.sequence, s);
    let cell = f.grid().cell_volume();
    let qv = q.finite().map(|q| q.values());
    let norm = match flavor {
        Flavor::Besov => ell_q_lp_from_logs(&logs, p.values(), qv, cell)?.norm,
        Flavor::Triebel => lp_ell_q_from_logs(&logs, p.values(), qv, cell)?.norm,
    };
    let per_band_norms = logs
        .iter()
        .map(|l| norm_from_logs(l, p.values(), cell, None).map(|n| n.norm))
        .collect::<Result<Vec<_>>>()?;
    Ok(NormReport { norm, per_band_norms, tail_energy: dec.tail_energy })
}

pub fn besov_norm(f: &GridFunction, p: &ExponentField, q: &QExponent, s: &ExponentField, res: &ResolutionOfUnity) -> Result<f64> {
    Ok(norm_report(f, p, q, s, res, Flavor::Besov)?.norm)
}

pub fn triebel_norm(f: &GridFunction, p: &ExponentField, q: &QExponent, s: &ExponentField, res: &ResolutionOfUnity) -> Result<f64> {
    Ok(norm_report(f, p, q, s, res, Flavor::Triebel)?.norm)
}

/// `(1 − Δ)^σ f`.
pub fn bessel_potential(f: &GridFunction, sigma: f64) -> Result<GridFunction> {
    let g = *f.grid();
    let symbol = GridFunction::spectral_from_fn(g, |xi| C64::new((1.0 + norm(xi).powi(2)).powf(sigma), 0.0));
    crate::grid::multiplier_apply(&symbol, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lebesgue::luxemburg_norm;
    use approx::assert_relative_eq;

    fn konst(g: Grid, v: f64, role: ExponentRole) -> ExponentField {
        ExponentField::constant(g, v, role).unwrap()
    }

    #[test]
    fn resolution_identities() {
        let g = Grid::new(2, 4.0, 64).unwrap();
        let j = default_band_count(&g);
        assert_eq!(j, 3);
        assert!(build_resolution(&g, j + 1).is_err());
        let res = build_resolution(&g, j).unwrap();
        for idx in 0..g.len() {
            let r = g.norm(g.frequency(idx));
            let sum: f64 = res.theta().iter().map(|t| t.samples()[idx].re).sum();
            if r <= 2f64.powi(j as i32 - 1) {
                assert!((sum - 1.0).abs() <= 1e-12);
            }
            if r <= 1.0 {
                assert!(res.theta()[1].samples()[idx].re.abs() <= 1e-14);
            }
            for (k, th) in res.theta().iter().enumerate().skip(1) {
                let v = th.samples()[idx].re;
                assert!((v - theta_value(1, r / 2f64.powi(k as i32 - 1))).abs() <= 1e-12);
                let lo = 2f64.powi(k as i32 - 1);
                if r < lo || r > 2.0 * lo * 2.0 {
                    assert!(v.abs() <= 1e-14);
                }
            }
            if r > 2.0 {
                assert!(res.theta()[0].samples()[idx].re.abs() <= 1e-14);
            }
            let t = res.tau().samples()[idx].re;
            assert!((0.0..=1.0).contains(&t));
            if r <= 2.0 {
                assert_eq!(t, 1.0);
            }
            if r >= 3.0 {
                assert_eq!(t, 0.0);
            }
        }
    }

    #[test]
    fn scaled_derivatives_are_uniform_in_j() {
        // sup_r 2^{j a} |d^a/dr^a theta_j(r)| for a = 0, 1, 2 by central differences.
        let scaled = |j: usize| {
            let scale = 2f64.powi(j as i32);
            let step = scale * 1e-4;
            let mut sup = [0.0f64; 3];
            for k in 1..40_000 {
                let r = k as f64 * scale * 1e-4;
                let (a, b, c) = (theta_value(j, r - step), theta_value(j, r), theta_value(j, r + step));
                sup[0] = sup[0].max(b.abs());
                sup[1] = sup[1].max(scale * (c - a).abs() / (2.0 * step));
                sup[2] = sup[2].max(scale * scale * (c - 2.0 * b + a).abs() / (step * step));
            }
            sup
        };
        let base = scaled(1);
        assert!(base.iter().all(|v| v.is_finite() && *v > 0.0));
        for j in 2..=10 {
            for (v, b) in scaled(j).iter().zip(base) {
                assert!((v - b).abs() <= 1e-3 * b, "j = {j}: {v} vs {b}");
            }
        }
    }

    #[test]
    fn decomposition_support_arithmetic() {
        let g = Grid::new(1, 8.0 * std::f64::consts::PI, 1024).unwrap();
        let res = build_resolution(&g, default_band_count(&g)).unwrap();
        let low = GridFunction::from_fn(g, |x| C64::from_polar(1.0, 0.75 * x[0]));
        let dec = lp_decompose(&low, &res).unwrap();
        for (j, e) in dec.sequence.entries().iter().enumerate() {
            if j > 0 {
                assert!(e.max_abs() <= 1e-10);
            }
        }
        let mid = GridFunction::from_fn(g, |x| C64::from_polar(1.0, 2.5 * x[0]));
        let dec = lp_decompose(&mid, &res).unwrap();
        for (j, e) in dec.sequence.entries().iter().enumerate() {
            assert_eq!(e.max_abs() > 1e-10, j == 1 || j == 2, "band {j}");
        }
        let zero = GridFunction::zeros(g, Domain::Spatial);
        assert!(lp_decompose(&zero, &res).unwrap().sequence.entries().iter().all(|e| e.is_zero()));
    }

    #[test]
    fn plancherel_closed_form_for_p_q_2() {
        let g = Grid::new(1, 16.0, 512).unwrap();
        let res = build_resolution(&g, default_band_count(&g)).unwrap();
        let f = GridFunction::from_real_fn(g, |x| (-x[0] * x[0]).exp() * (3.0 * x[0]).cos() + 0.3 * (-(x[0] - 2.0).powi(2) / 0.1).exp());
        let p = konst(g, 2.0, ExponentRole::Integrability);
        let q = QExponent::Finite(p.clone());
        let s = konst(g, 0.0, ExponentRole::Smoothness);
        let ff = f.forward_transform().unwrap();
        let per_band: Vec<f64> = res
            .theta()
            .iter()
            .map(|t| ff.zip_with(t, |a, b| a * b).unwrap().l2_norm())
            .collect();
        let closed = per_band.iter().map(|v| v * v).sum::<f64>().sqrt();
        let b = norm_report(&f, &p, &q, &s, &res, Flavor::Besov).unwrap();
        let t = norm_report(&f, &p, &q, &s, &res, Flavor::Triebel).unwrap();
        assert_relative_eq!(b.norm, closed, max_relative = 1e-6);
        assert_relative_eq!(t.norm, closed, max_relative = 1e-6);
        for (a, c) in b.per_band_norms.iter().zip(&per_band) {
            assert_relative_eq!(*a, *c, max_relative = 1e-6, epsilon = 1e-300);
        }
        let ratio = closed / f.l2_norm();
        assert!(ratio >= 1.0 / 3f64.sqrt() && ratio <= 3f64.sqrt());
    }

    #[test]
    fn norm_examples() {
        let g = Grid::new(1, 8.0, 256).unwrap();
        let res = build_resolution(&g, default_band_count(&g)).unwrap();
        let p = ExponentField::from_fn(g, ExponentRole::Integrability, |x| 2.0 + 0.5 * (x[0] / 2.0).sin()).unwrap();
        let q = QExponent::Finite(ExponentField::from_fn(g, ExponentRole::Integrability, |x| 1.5 + 0.3 * x[0].cos()).unwrap());
        let s = ExponentField::from_fn(g, ExponentRole::Smoothness, |x| 0.5 + 0.2 * (-x[0] * x[0]).exp()).unwrap();
        let zero = GridFunction::zeros(g, Domain::Spatial);
        assert_eq!(besov_norm(&zero, &p, &q, &s, &res).unwrap(), 0.0);
        assert_eq!(triebel_norm(&zero, &p, &q, &s, &res).unwrap(), 0.0);
        let f = GridFunction::from_real_fn(g, |x| (-x[0] * x[0] / 0.5).exp());
        let b = besov_norm(&f, &p, &q, &s, &res).unwrap();
        let b3 = besov_norm(&f.scale(C64::new(0.0, -3.0)), &p, &q, &s, &res).unwrap();
        assert_relative_eq!(b3, 3.0 * b, max_relative = 1e-9);
        // p = q: both flavours coincide.
        let pq = QExponent::Finite(p.clone());
        assert_relative_eq!(
            besov_norm(&f, &p, &pq, &s, &res).unwrap(),
            triebel_norm(&f, &p, &pq, &s, &res).unwrap(),
            max_relative = 1e-6
        );
        // Spectrum inside B(1): a single band.
        let low = GridFunction::from_real_fn(g, |x| {
            let y = x[0];
            if y.abs() < 1e-12 { 0.5 / std::f64::consts::PI } else { (0.5 * y).sin() / (std::f64::consts::PI * y) }
        });
        let cut = GridFunction::spectral_from_fn(g, |xi| C64::new(if xi[0].abs() < 0.9 { 1.0 } else { 0.0 }, 0.0));
        let low = crate::grid::multiplier_apply(&cut, &low).unwrap();
        let s0 = konst(g, 0.0, ExponentRole::Smoothness);
        let t = triebel_norm(&low, &p, &q, &s0, &res).unwrap();
        assert_relative_eq!(t, luxemburg_norm(&low, &p, None).unwrap(), max_relative = 1e-8);
    }
}
