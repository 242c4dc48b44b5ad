//! Mixed quasi-norms ℓ^{q(·)}(L^{p(·)}) and L^{p(·)}(ℓ^{q(·)}) of finite
//! sequences of grid functions.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exponents::{ExponentField, ExponentRole};
use crate::grid::{Domain, Grid, GridFunction};
use crate::lebesgue::{norm_from_logs, solve_decreasing, LogSum, LuxemburgNorm, ModularValue};

/// Longest sequence accepted by the mixed norms.
pub const MAX_SEQUENCE_LEN: usize = 65;

#[derive(Clone, Debug, PartialEq)]
pub struct DyadicSequence {
    grid: Grid,
    entries: Vec<GridFunction>,
}

impl DyadicSequence {
    pub fn new(grid: Grid, entries: Vec<GridFunction>) -> Result<Self> {
        if entries.len() > MAX_SEQUENCE_LEN {
            return Err(Error::InvalidInput(format!(
                "sequence has {} entries, at most {MAX_SEQUENCE_LEN} supported",
                entries.len()
            )));
        }
        for e in &entries {
            e.grid().check_same(&grid)?;
            e.expect_domain(Domain::Spatial)?;
        }
        Ok(DyadicSequence { grid, entries })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn entries(&self) -> &[GridFunction] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn map(&self, f: impl Fn(usize, &GridFunction) -> GridFunction) -> Result<Self> {
        DyadicSequence::new(self.grid, self.entries.iter().enumerate().map(|(j, e)| f(j, e)).collect())
    }

    pub fn add(&self, other: &DyadicSequence) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::InvalidInput("sequences differ in length".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        DyadicSequence::new(self.grid, entries)
    }

    pub(crate) fn log_magnitudes(&self) -> Vec<Vec<f64>> {
        self.entries
            .iter()
            .map(|e| e.samples().iter().map(|z| z.norm().ln()).collect())
            .collect()
    }
}

/// Sum exponent q(·), possibly the constant ∞.
#[derive(Clone, Debug, PartialEq)]
pub enum QExponent {
    Finite(ExponentField),
    Infinity,
}

impl QExponent {
    pub fn finite(&self) -> Option<&ExponentField> {
        match self {
            QExponent::Finite(q) => Some(q),
            QExponent::Infinity => None,
        }
    }

    /// Essential infimum, `inf` for q = ∞.
    pub fn inf_value(&self) -> f64 {
        self.finite().map_or(f64::INFINITY, |q| q.inf_value())
    }
}

fn check_exponents(grid: &Grid, p: &ExponentField, q: Option<&ExponentField>) -> Result<()> {
    p.check_grid(grid)?;
    if p.role() != ExponentRole::Integrability {
        return Err(Error::InvalidInput("p must be an integrability exponent".into()));
    }
    if let Some(q) = q {
        q.check_grid(grid)?;
        if q.role() != ExponentRole::Integrability {
            return Err(Error::InvalidInput("q must be an integrability exponent".into()));
        }
    }
    Ok(())
}

/// `Σ_j ‖(|f_j|/μ^{1/q(·)})^{q(·)}‖_{L^{p(·)/q(·)}}`.
pub fn iterated_modular(seq: &DyadicSequence, p: &ExponentField, q: &ExponentField, mu: f64) -> Result<ModularValue> {
    check_exponents(&seq.grid, p, Some(q))?;
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidInput(format!("mu must be positive, got {mu}")));
    }
    let r: Vec<f64> = p.values().iter().zip(q.values()).map(|(a, b)| a / b).collect();
    let cell = seq.grid.cell_volume();
    let lm = mu.ln();
    let mut total = 0.0;
    for logs in seq.log_magnitudes() {
        let inner: Vec<f64> = logs.iter().zip(q.values()).map(|(l, qv)| qv * l - lm).collect();
        total += norm_from_logs(&inner, &r, cell, None)?.norm;
    }
    Ok(ModularValue { value: total })
}

/// `inf{μ > 0 : Σ_j ‖|f_j/μ|^{q(·)}‖_{L^{p(·)/q(·)}} ≤ 1}`; for q = ∞,
/// `sup_j ‖f_j‖_{L^{p(·)}}`.
pub fn ell_q_lp_norm(seq: &DyadicSequence, p: &ExponentField, q: &QExponent) -> Result<f64> {
    check_exponents(&seq.grid, p, q.finite())?;
    let logs = seq.log_magnitudes();
    Ok(ell_q_lp_from_logs(&logs, p.values(), q.finite().map(|q| q.values()), seq.grid.cell_volume())?.norm)
}

/// `‖(Σ_j |f_j|^{q(·)})^{1/q(·)}‖_{L^{p(·)}}`, with the pointwise sup for q = ∞.
pub fn lp_ell_q_norm(seq: &DyadicSequence, p: &ExponentField, q: &QExponent) -> Result<f64> {
    check_exponents(&seq.grid, p, q.finite())?;
    let logs = seq.log_magnitudes();
    Ok(lp_ell_q_from_logs(&logs, p.values(), q.finite().map(|q| q.values()), seq.grid.cell_volume())?.norm)
}

pub(crate) fn lp_ell_q_from_logs(logs: &[Vec<f64>], p: &[f64], q: Option<&[f64]>, cell: f64) -> Result<LuxemburgNorm> {
    let len = p.len();
    let inner: Vec<f64> = (0..len)
        .map(|x| match q {
            None => logs.iter().map(|l| l[x]).fold(f64::NEG_INFINITY, f64::max),
            Some(q) => {
                let qx = q[x];
                let peak = logs.iter().map(|l| qx * l[x]).fold(f64::NEG_INFINITY, f64::max);
                if peak == f64::NEG_INFINITY {
                    return f64::NEG_INFINITY;
                }
                let s: f64 = logs.iter().map(|l| (qx * l[x] - peak).exp()).sum();
                (peak + s.ln()) / qx
            }
        })
        .collect();
    norm_from_logs(&inner, p, cell, None)
}

pub(crate) fn ell_q_lp_from_logs(logs: &[Vec<f64>], p: &[f64], q: Option<&[f64]>, cell: f64) -> Result<LuxemburgNorm> {
    let Some(q) = q else {
        let norms = logs
            .par_iter()
            .map(|l| norm_from_logs(l, p, cell, None))
            .collect::<Result<Vec<_>>>()?;
        let norm = norms.iter().map(|n| n.norm).fold(0.0, f64::max);
        let iterations = norms.iter().map(|n| n.iterations).sum();
        return Ok(LuxemburgNorm { norm, modular_at_norm: if norm > 0.0 { 1.0 } else { 0.0 }, iterations });
    };
    let lc = cell.ln();
    // For entry j and scale μ = e^u the inner Luxemburg problem reads
    // ln Σ_x h^n exp(p ℓ_j − p u − (p/q) t) = 0 in t = ln λ_j.
    let mut sums = Vec::new();
    let mut u_slopes = Vec::new();
    for l in logs {
        let mut s = LogSum::default();
        let mut us = Vec::new();
        for x in 0..p.len() {
            if l[x] == f64::NEG_INFINITY {
                continue;
            }
            s.push(lc + p[x] * l[x], p[x] / q[x]);
            us.push(p[x]);
        }
        if !s.is_empty() {
            sums.push(s);
            u_slopes.push(us);
        }
    }
    if sums.is_empty() {
        return Ok(LuxemburgNorm { norm: 0.0, modular_at_norm: 0.0, iterations: 0 });
    }
    let calls = std::sync::atomic::AtomicUsize::new(0);
    let inner = |u: f64| -> Result<Vec<(f64, f64)>> {
        sums.par_iter()
            .zip(&u_slopes)
            .map(|(s, us)| {
                let (t, c) = solve_decreasing(|t| {
                    let (g, dt, _) = s.eval2(t, u, us);
                    (g, dt)
                })?;
                calls.fetch_add(c, std::sync::atomic::Ordering::Relaxed);
                let (_, dt, du) = s.eval2(t, u, us);
                Ok((t, -du / dt))
            })
            .collect()
    };
    let mut failure = None;
    let (u, _) = solve_decreasing(|u| match inner(u) {
        Ok(ts) => {
            let peak = ts.iter().map(|x| x.0).fold(f64::NEG_INFINITY, f64::max);
            let (mut w, mut wd) = (0.0, 0.0);
            for (t, dt) in &ts {
                let e = (t - peak).exp();
                w += e;
                wd += e * dt;
            }
            (peak + w.ln(), wd / w)
        }
        Err(e) => {
            failure.get_or_insert(e);
            (f64::NAN, f64::NAN)
        }
    })
    .map_err(|e| failure.take().unwrap_or(e))?;
    let at = inner(u)?;
    let modular: f64 = at.iter().map(|(t, _)| t.exp()).sum();
    Ok(LuxemburgNorm {
        norm: u.exp(),
        modular_at_norm: modular,
        iterations: calls.into_inner(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lebesgue::luxemburg_norm;
    use crate::C64;
    use approx::assert_relative_eq;

    fn grid() -> Grid {
        Grid::new(1, 4.0, 256).unwrap()
    }

    fn konst(g: Grid, v: f64) -> ExponentField {
        ExponentField::constant(g, v, ExponentRole::Integrability).unwrap()
    }

    fn bump(g: Grid, c: f64, w: f64, a: f64) -> GridFunction {
        GridFunction::from_real_fn(g, move |x| a * (-(x[0] - c) * (x[0] - c) / w).exp())
    }

    #[test]
    fn modular_examples() {
        let g = grid();
        let p = ExponentField::from_fn(g, ExponentRole::Integrability, |x| 1.5 + 0.5 * x[0].sin()).unwrap();
        let empty = DyadicSequence::new(g, vec![]).unwrap();
        assert_eq!(iterated_modular(&empty, &p, &p, 1.0).unwrap().value, 0.0);

        let p2 = konst(g, 2.0);
        let f = bump(g, 0.3, 1.0, 2.0);
        let n = luxemburg_norm(&f, &p2, None).unwrap();
        let one = DyadicSequence::new(g, vec![f.clone()]).unwrap();
        let v = iterated_modular(&one, &p2, &p2, n * n).unwrap().value;
        assert!((v - 1.0).abs() <= 1e-6);

        let unit = f.scale(C64::new(1.0 / n, 0.0));
        let two = DyadicSequence::new(g, vec![unit.clone(), unit]).unwrap();
        assert!((iterated_modular(&two, &p2, &p2, 2.0).unwrap().value - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn ell_q_lp_examples() {
        let g = grid();
        let entries = vec![bump(g, -1.0, 0.5, 1.0), bump(g, 0.5, 2.0, 3.0), bump(g, 2.0, 0.1, 0.2)];
        let seq = DyadicSequence::new(g, entries.clone()).unwrap();
        for (pv, qv) in [(2.0, 2.0), (1.5, 3.0), (0.7, 0.5), (4.0, 1.0)] {
            let p = konst(g, pv);
            let closed: f64 = entries
                .iter()
                .map(|e| luxemburg_norm(e, &p, None).unwrap().powf(qv))
                .sum::<f64>()
                .powf(1.0 / qv);
            let got = ell_q_lp_norm(&seq, &p, &QExponent::Finite(konst(g, qv))).unwrap();
            assert_relative_eq!(got, closed, max_relative = 1e-6);
        }
        let p = ExponentField::from_fn(g, ExponentRole::Integrability, |x| 2.0 + 0.5 * x[0].cos()).unwrap();
        let q = ExponentField::from_fn(g, ExponentRole::Integrability, |x| 1.2 + 0.3 * x[0].sin()).unwrap();
        let single = DyadicSequence::new(g, vec![entries[1].clone()]).unwrap();
        assert_relative_eq!(
            ell_q_lp_norm(&single, &p, &QExponent::Finite(q.clone())).unwrap(),
            luxemburg_norm(&entries[1], &p, None).unwrap(),
            max_relative = 1e-8
        );
        let a = ell_q_lp_norm(&seq, &p, &QExponent::Finite(q.clone())).unwrap();
        let scaled = seq.map(|_, e| e.scale(C64::new(-3.0, 0.0))).unwrap();
        let b = ell_q_lp_norm(&scaled, &p, &QExponent::Finite(q)).unwrap();
        assert_relative_eq!(b, 3.0 * a, max_relative = 1e-9);
        let zero = DyadicSequence::new(g, vec![GridFunction::zeros(g, Domain::Spatial); 3]).unwrap();
        assert_eq!(ell_q_lp_norm(&zero, &p, &QExponent::Infinity).unwrap(), 0.0);
    }

    #[test]
    fn norm_is_the_unit_level_of_the_modular() {
        let g = grid();
        let p = ExponentField::from_fn(g, ExponentRole::Integrability, |x| 2.0 + 0.5 * x[0].cos()).unwrap();
        let q = ExponentField::from_fn(g, ExponentRole::Integrability, |x| 1.2 + 0.3 * x[0].sin()).unwrap();
        let seq = DyadicSequence::new(g, vec![bump(g, -1.0, 0.5, 1.0), bump(g, 0.5, 2.0, 3.0)]).unwrap();
        let n = ell_q_lp_norm(&seq, &p, &QExponent::Finite(q.clone())).unwrap();
        let unit = seq.map(|_, e| e.scale(C64::new(1.0 / n, 0.0))).unwrap();
        let m = iterated_modular(&unit, &p, &q, 1.0).unwrap().value;
        assert!((m - 1.0).abs() <= 1e-6, "{m}");
    }

    #[test]
    fn lp_ell_q_examples() {
        let g = grid();
        let p = ExponentField::from_fn(g, ExponentRole::Integrability, |x| 2.0 + 0.5 * x[0].cos()).unwrap();
        let f = bump(g, 0.0, 1.0, 1.0);
        let single = DyadicSequence::new(g, vec![f.clone()]).unwrap();
        let q = QExponent::Finite(konst(g, 1.5));
        assert_relative_eq!(
            lp_ell_q_norm(&single, &p, &q).unwrap(),
            luxemburg_norm(&f, &p, None).unwrap(),
            max_relative = 1e-12
        );
        let two = DyadicSequence::new(g, vec![f.clone(), f.scale(C64::new(2.0, 0.0))]).unwrap();
        assert_relative_eq!(
            lp_ell_q_norm(&two, &p, &QExponent::Infinity).unwrap(),
            luxemburg_norm(&f.scale(C64::new(2.0, 0.0)), &p, None).unwrap(),
            max_relative = 1e-12
        );
        // Disjoint supports with p = q: both orders give (Σ ∫|f_j|^p)^{1/p}.
        let disjoint: Vec<GridFunction> = (0..3)
            .map(|k| {
                GridFunction::from_real_fn(g, move |x| {
                    let c = -2.0 + 2.0 * k as f64;
                    if (x[0] - c).abs() < 0.5 {
                        (1.0 + k as f64) * (1.0 - 4.0 * (x[0] - c).powi(2))
                    } else {
                        0.0
                    }
                })
            })
            .collect();
        let seq = DyadicSequence::new(g, disjoint).unwrap();
        for pv in [0.8, 2.0, 3.5] {
            let pf = konst(g, pv);
            let qf = QExponent::Finite(konst(g, pv));
            assert_relative_eq!(
                lp_ell_q_norm(&seq, &pf, &qf).unwrap(),
                ell_q_lp_norm(&seq, &pf, &qf).unwrap(),
                max_relative = 1e-6
            );
        }
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let g = grid();
        let other = Grid::new(1, 4.0, 128).unwrap();
        assert!(DyadicSequence::new(g, vec![GridFunction::zeros(other, Domain::Spatial)]).is_err());
        let seq = DyadicSequence::new(g, vec![bump(g, 0.0, 1.0, 1.0)]).unwrap();
        assert!(ell_q_lp_norm(&seq, &konst(other, 2.0), &QExponent::Infinity).is_err());
    }
}
