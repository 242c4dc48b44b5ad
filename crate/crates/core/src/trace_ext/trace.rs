//! Half-space functions, the trace on x_n = 0 and its quark form.

use crate::decomposition::QuarkCoefficients;
use crate::error::{Error, Result};
use crate::grid::{Domain, Grid, GridFunction};
use crate::C64;

/// A function known on `x_n ≥ 0`; samples with `x_n < 0` are held at zero.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfSpaceFunction {
    values: GridFunction,
}

impl HalfSpaceFunction {
    /// Restricts a full-grid function to the upper half.
    pub fn restrict(f: &GridFunction) -> Result<Self> {
        f.expect_domain(Domain::Spatial)?;
        let g = *f.grid();
        let mut values = f.clone();
        for (idx, v) in values.samples_mut().iter_mut().enumerate() {
            if !is_upper(&g, idx) {
                *v = C64::new(0.0, 0.0);
            }
        }
        Ok(HalfSpaceFunction { values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> C64) -> Result<Self> {
        Self::restrict(&GridFunction::from_fn(grid, f))
    }

    pub fn grid(&self) -> &Grid {
        self.values.grid()
    }

    /// Zero extension to the full grid.
    pub fn zero_extended(&self) -> &GridFunction {
        &self.values
    }

    pub fn scale(&self, c: C64) -> Self {
        HalfSpaceFunction { values: self.values.scale(c) }
    }

    /// `sup_{x_n ≥ 0} |g − f|`.
    pub fn restriction_error(&self, g: &GridFunction) -> Result<f64> {
        g.grid().check_same(self.grid())?;
        let grid = *self.grid();
        Ok((0..grid.len())
            .filter(|&i| is_upper(&grid, i))
            .map(|i| (g.samples()[i] - self.values.samples()[i]).norm())
            .fold(0.0, f64::max))
    }
}

/// Whether sample `idx` lies in `x_n ≥ 0`.
pub fn is_upper(g: &Grid, idx: usize) -> bool {
    let ix = g.multi_index(idx);
    ix[g.dim() - 1] >= g.origin_index()
}

/// `f(x′, 0)` as a function on the boundary grid.
pub fn trace(f: &GridFunction) -> Result<GridFunction> {
    f.expect_domain(Domain::Spatial)?;
    let g = *f.grid();
    if g.dim() != 2 {
        return Err(Error::InvalidInput("trace needs a 2-D grid".into()));
    }
    if !g.samples_per_axis().is_multiple_of(2) {
        return Err(Error::Resolution("grid has no sample row at x_n = 0".into()));
    }
    let b = g.boundary()?;
    let row = g.origin_index();
    let vals = (0..g.samples_per_axis()).map(|i| f.samples()[g.flat_index([i, row])]).collect();
    GridFunction::new(b, vals, Domain::Spatial)
}

/// Trace of a quark expansion: at `x_n = 0` the normal factor `(−m_n)^{β_n} μ(−m_n)`
/// equals 1 for `β_n = m_n = 0` and vanishes otherwise.
pub fn trace_quark(lambda: &QuarkCoefficients) -> Result<QuarkCoefficients> {
    if lambda.dim() != 2 {
        return Err(Error::InvalidInput("trace_quark needs 2-D coefficients".into()));
    }
    let mu0 = crate::decomposition::mu(0.0);
    let kept: Vec<_> = lambda
        .entries()
        .into_iter()
        .filter(|(b, _, m, _)| b[1] == 0 && m[1] == 0)
        .map(|(b, nu, m, v)| ([b[0], 0], nu, [m[0], 0], v * mu0))
        .collect();
    QuarkCoefficients::from_entries(1, lambda.rho(), lambda.beta_max(), &kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{quark_synthesize, QuarkBasis};

    #[test]
    fn separable_trace() {
        let g = Grid::new(2, 4.0, 32).unwrap();
        let f = GridFunction::from_real_fn(g, |x| x[0].sin() * x[1].exp());
        let t = trace(&f).unwrap();
        for (i, v) in t.samples().iter().enumerate() {
            assert!((v.re - t.grid().axis_coord(i).sin()).abs() < 1e-14);
        }
        assert!(trace(&GridFunction::zeros(g, Domain::Spatial)).unwrap().is_zero());
        assert!(trace(&GridFunction::zeros(Grid::new(1, 4.0, 32).unwrap(), Domain::Spatial)).is_err());
    }

    #[test]
    fn quark_trace_routes_agree() {
        let g = Grid::new(2, 2.0, 64).unwrap();
        let b2 = QuarkBasis::default_for(2).unwrap();
        let b1 = QuarkBasis::default_for(1).unwrap();
        let lam = QuarkCoefficients::from_entries(
            2,
            2,
            6,
            &[
                ([0, 0], 0, [0, 0], C64::new(1.0, 0.0)),
                ([1, 0], 2, [3, 0], C64::new(0.5, -1.0)),
                ([0, 1], 1, [1, 0], C64::new(2.0, 0.0)),
                ([2, 0], 3, [-5, 1], C64::new(-1.0, 0.0)),
                ([0, 0], 1, [2, -1], C64::new(0.7, 0.0)),
            ],
        )
        .unwrap();
        let direct = trace(&quark_synthesize(&lam, &b2, &g).unwrap()).unwrap();
        let tq = trace_quark(&lam).unwrap();
        assert_eq!(tq.entries().len(), 2);
        let via = quark_synthesize(&tq, &b1, &g.boundary().unwrap()).unwrap();
        assert!(direct.sub(&via).unwrap().max_abs() <= 1e-10);
        let only_normal = QuarkCoefficients::from_entries(2, 2, 6, &[([0, 1], 0, [0, 0], C64::new(1.0, 0.0))]).unwrap();
        assert!(trace_quark(&only_normal).unwrap().is_zero());
    }

    #[test]
    fn restriction_masks_lower_half() {
        let g = Grid::new(2, 2.0, 16).unwrap();
        let f = HalfSpaceFunction::from_fn(g, |_| C64::new(1.0, 0.0)).unwrap();
        for idx in 0..g.len() {
            let expect = if g.point(idx)[1] >= 0.0 { 1.0 } else { 0.0 };
            assert_eq!(f.zero_extended().samples()[idx].re, expect);
        }
    }
}
