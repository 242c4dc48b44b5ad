//! Modulars and Luxemburg norms of the variable Lebesgue space L^{p(·)}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::ExponentField;
use crate::grid::{Domain, GridFunction};
use crate::tolerances::{MAX_DOUBLINGS, NORM_BRACKET_REL};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModularValue {
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LuxemburgNorm {
    pub norm: f64,
    pub modular_at_norm: f64,
    pub iterations: usize,
}

impl LuxemburgNorm {
    fn zero() -> Self {
        LuxemburgNorm { norm: 0.0, modular_at_norm: 0.0, iterations: 0 }
    }
}

fn check_mask(mask: Option<&[bool]>, len: usize) -> Result<()> {
    match mask {
        Some(m) if m.len() != len => Err(Error::GridMismatch(format!(
            "region mask has {} entries, grid has {len}",
            m.len()
        ))),
        _ => Ok(()),
    }
}

/// `h^n Σ |f(x_j)|^{p(x_j)}` over the masked points.
pub fn modular(f: &GridFunction, p: &ExponentField, region: Option<&[bool]>) -> Result<ModularValue> {
    f.expect_domain(Domain::Spatial)?;
    p.check_grid(f.grid())?;
    check_mask(region, f.grid().len())?;
    let cell = f.grid().cell_volume();
    let mut sum = 0.0;
    for (i, (z, &e)) in f.samples().iter().zip(p.values()).enumerate() {
        if region.is_some_and(|m| !m[i]) {
            continue;
        }
        let a = z.norm();
        if a > 0.0 {
            sum += a.powf(e);
        }
    }
    Ok(ModularValue { value: cell * sum })
}

/// `inf{λ > 0 : modular(f/λ) ≤ 1}`.
pub fn luxemburg_norm(f: &GridFunction, p: &ExponentField, region: Option<&[bool]>) -> Result<f64> {
    Ok(luxemburg_report(f, p, region)?.norm)
}

pub fn luxemburg_report(f: &GridFunction, p: &ExponentField, region: Option<&[bool]>) -> Result<LuxemburgNorm> {
    f.expect_domain(Domain::Spatial)?;
    p.check_grid(f.grid())?;
    check_mask(region, f.grid().len())?;
    let logs: Vec<f64> = f.samples().iter().map(|z| z.norm().ln()).collect();
    norm_from_logs(&logs, p.values(), f.grid().cell_volume(), region)
}

/// Luxemburg norm of the function with `ln|g| = logs`; `-inf` entries are zeros.
pub(crate) fn norm_from_logs(
    logs: &[f64],
    exponent: &[f64],
    cell: f64,
    mask: Option<&[bool]>,
) -> Result<LuxemburgNorm> {
    let lc = cell.ln();
    let mut terms = LogSum::default();
    for (i, (&l, &e)) in logs.iter().zip(exponent).enumerate() {
        if l == f64::NEG_INFINITY || mask.is_some_and(|m| !m[i]) {
            continue;
        }
        terms.push(lc + e * l, e);
    }
    if terms.is_empty() {
        return Ok(LuxemburgNorm::zero());
    }
    let (t, iterations) = solve_decreasing(|t| terms.eval(t))?;
    Ok(LuxemburgNorm { norm: t.exp(), modular_at_norm: terms.eval(t).0.exp(), iterations })
}

/// `ln Σ_x exp(a_x − s_x t)` as a function of t, with its derivative. Every
/// modular in this crate has this form once magnitudes are taken in logs.
#[derive(Clone, Debug, Default)]
pub(crate) struct LogSum {
    offsets: Vec<f64>,
    slopes: Vec<f64>,
}

impl LogSum {
    pub(crate) fn push(&mut self, offset: f64, slope: f64) {
        self.offsets.push(offset);
        self.slopes.push(slope);
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub(crate) fn eval(&self, t: f64) -> (f64, f64) {
        let mut peak = f64::NEG_INFINITY;
        for (a, s) in self.offsets.iter().zip(&self.slopes) {
            peak = peak.max(a - s * t);
        }
        let (mut w, mut ws) = (0.0, 0.0);
        for (a, s) in self.offsets.iter().zip(&self.slopes) {
            let e = (a - s * t - peak).exp();
            w += e;
            ws += e * s;
        }
        (peak + w.ln(), -ws / w)
    }

    /// Like [`LogSum::eval`] with a second variable u entering as `−r_x u`,
    /// returning the value and both partial derivatives.
    pub(crate) fn eval2(&self, t: f64, u: f64, u_slopes: &[f64]) -> (f64, f64, f64) {
        let mut peak = f64::NEG_INFINITY;
        for ((a, s), r) in self.offsets.iter().zip(&self.slopes).zip(u_slopes) {
            peak = peak.max(a - s * t - r * u);
        }
        let (mut w, mut ws, mut wr) = (0.0, 0.0, 0.0);
        for ((a, s), r) in self.offsets.iter().zip(&self.slopes).zip(u_slopes) {
            let e = (a - s * t - r * u - peak).exp();
            w += e;
            ws += e * s;
            wr += e * r;
        }
        (peak + w.ln(), -ws / w, -wr / w)
    }
}

/// Root of a decreasing function `g(t)` given with its derivative: bracketing
/// by steps of ln 2 from t = 0 (doubling or halving λ = e^t), then Newton steps
/// safeguarded by bisection. Returns the root and the number of evaluations.
pub(crate) fn solve_decreasing(mut eval: impl FnMut(f64) -> (f64, f64)) -> Result<(f64, usize)> {
    let step = std::f64::consts::LN_2;
    let (g0, _) = eval(0.0);
    let mut calls = 1;
    if !g0.is_finite() {
        return Err(Error::NumericRange(format!("modular at unit scale is {g0}")));
    }
    if g0 == 0.0 {
        return Ok((0.0, calls));
    }
    let (mut lo, mut hi);
    let mut t = 0.0;
    let mut k = 0;
    loop {
        k += 1;
        if k > MAX_DOUBLINGS {
            return Err(Error::NumericRange("no bracket within 200 doublings".into()));
        }
        t += if g0 > 0.0 { step } else { -step };
        let (g, _) = eval(t);
        calls += 1;
        if !g.is_finite() {
            return Err(Error::NumericRange(format!("modular overflow at scale e^{t}")));
        }
        if g0 > 0.0 && g <= 0.0 {
            lo = t - step;
            hi = t;
            if g == 0.0 {
                return Ok((t, calls));
            }
            break;
        }
        if g0 < 0.0 && g > 0.0 {
            lo = t;
            hi = t + step;
            break;
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (g, d) = eval(t);
        calls += 1;
        if g == 0.0 {
            return Ok((t, calls));
        }
        if g > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let mut next = t - g / d;
        if !(next.is_finite() && next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let delta = (next - t).abs();
        t = next;
        let scale = 1.0f64.max(t.abs());
        if delta <= 1e-15 * scale || hi - lo <= 1e-15 * scale {
            return Ok((t, calls));
        }
    }
    if hi - lo <= NORM_BRACKET_REL {
        Ok((t, calls))
    } else {
        Err(Error::NumericRange("root solve did not converge".into()))
    }
}
