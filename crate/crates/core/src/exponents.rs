//! Variable exponents sampled on a grid: integrability exponents p(·), q(·)
//! (bounded away from 0 and ∞) and smoothness exponents s(·) (any finite values),
//! with log-Hölder diagnostics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, GridSpec};
use crate::tolerances::{DECAY_BAND_FRACTION, MAX_HOLDER_PAIRS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExponentRole {
    /// p(·) or q(·): strictly positive and bounded.
    Integrability,
    /// s(·): any finite values.
    Smoothness,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExponentField {
    grid: Grid,
    values: Vec<f64>,
    inf_value: f64,
    sup_value: f64,
    limit_at_infinity: Option<f64>,
    role: ExponentRole,
}

impl ExponentField {
    pub fn new(grid: Grid, values: Vec<f64>, role: ExponentRole, limit: Option<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "exponent has {} samples, grid has {}",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("exponent value at sample {i} is not finite")));
        }
        let inf_value = values.iter().copied().fold(f64::INFINITY, f64::min);
        let sup_value = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if role == ExponentRole::Integrability && inf_value <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "integrability exponent needs inf > 0, got {inf_value}"
            )));
        }
        if let Some(l) = limit {
            if !l.is_finite() || (role == ExponentRole::Integrability && l <= 0.0) {
                return Err(Error::InvalidInput(format!("invalid limit at infinity {l}")));
            }
        }
        Ok(ExponentField { grid, values, inf_value, sup_value, limit_at_infinity: limit, role })
    }

    pub fn integrability(grid: Grid, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, values, ExponentRole::Integrability, None)
    }

    pub fn smoothness(grid: Grid, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, values, ExponentRole::Smoothness, None)
    }

    pub fn constant(grid: Grid, value: f64, role: ExponentRole) -> Result<Self> {
        Self::new(grid, vec![value; grid.len()], role, Some(value))
    }

    pub fn from_fn(grid: Grid, role: ExponentRole, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(&grid.point(i)[..grid.dim()])).collect();
        Self::new(grid, values, role, None)
    }

    /// Samples a closed-form expression in the variables `x`, `y` (0 in 1-D)
    /// and `r = |x|`.
    pub fn from_expr(grid: Grid, expr: &str, role: ExponentRole, limit: Option<f64>) -> Result<Self> {
        let values = sample_expr(&grid, expr)?;
        Self::new(grid, values, role, limit)
    }

    pub fn with_limit(mut self, limit: Option<f64>) -> Result<Self> {
        if let Some(l) = limit {
            if !l.is_finite() {
                return Err(Error::InvalidInput("limit must be finite".into()));
            }
        }
        self.limit_at_infinity = limit;
        Ok(self)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn inf_value(&self) -> f64 {
        self.inf_value
    }

    pub fn sup_value(&self) -> f64 {
        self.sup_value
    }

    pub fn limit_at_infinity(&self) -> Option<f64> {
        self.limit_at_infinity
    }

    pub fn role(&self) -> ExponentRole {
        self.role
    }

    pub fn is_constant(&self) -> bool {
        self.inf_value == self.sup_value
    }

    pub fn check_grid(&self, grid: &Grid) -> Result<()> {
        self.grid.check_same(grid)
    }

    /// Pointwise map into a field of the given role.
    pub fn map(&self, role: ExponentRole, f: impl Fn(f64) -> f64) -> Result<Self> {
        let limit = self.limit_at_infinity.map(&f);
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect(), role, limit)
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip(&self, other: &ExponentField, role: ExponentRole, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let limit = match (self.limit_at_infinity, other.limit_at_infinity) {
            (Some(a), Some(b)) => Some(f(a, b)),
            _ => None,
        };
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Self::new(self.grid, values, role, limit)
    }

    /// Restriction to the hyperplane x_n = 0 of a 2-D field.
    pub fn trace(&self) -> Result<Self> {
        let bg = self.grid.boundary()?;
        let n = self.grid.samples_per_axis();
        let j0 = self.grid.origin_index();
        let values = (0..n).map(|i| self.values[i * n + j0]).collect();
        Self::new(bg, values, self.role, self.limit_at_infinity)
    }

    /// The 2-D field that is constant in x_n and equal to `self` in x'.
    pub fn extend_constant_normal(&self) -> Result<Self> {
        if self.grid.dim() != 1 {
            return Err(Error::InvalidInput("normal extension needs a 1-D field".into()));
        }
        let g2 = self.grid.with_dim(2)?;
        let n = self.grid.samples_per_axis();
        let values = (0..g2.len()).map(|idx| self.values[idx / n]).collect();
        Self::new(g2, values, self.role, self.limit_at_infinity)
    }
}

/// Evaluates `expr` at every grid point.
pub fn sample_expr(grid: &Grid, expr: &str) -> Result<Vec<f64>> {
    let parsed: meval::Expr = expr
        .parse()
        .map_err(|e| Error::InvalidInput(format!("cannot parse expression `{expr}`: {e}")))?;
    let f = parsed
        .bind3("x", "y", "r")
        .map_err(|e| Error::InvalidInput(format!("expression `{expr}`: {e}")))?;
    Ok((0..grid.len())
        .map(|i| {
            let p = grid.point(i);
            f(p[0], p[1], grid.norm(p))
        })
        .collect())
}

/// JSON exponent specification: either a closed-form `expr` or explicit `samples`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<f64>,
}

impl ExponentSpec {
    /// Builds the field on `grid`; a grid embedded in the spec must agree.
    pub fn build(&self, grid: &Grid, role: ExponentRole) -> Result<ExponentField> {
        if let Some(spec) = &self.grid {
            grid.check_same(&Grid::from_spec(spec)?)?;
        }
        match (&self.expr, &self.samples) {
            (Some(e), None) => ExponentField::from_expr(*grid, e, role, self.limit),
            (None, Some(s)) => ExponentField::new(*grid, s.clone(), role, self.limit),
            _ => Err(Error::InvalidInput("exponent spec needs exactly one of `expr`, `samples`".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogHolderReport {
    pub c_local: f64,
    pub c_decay: f64,
    pub limit_used: f64,
    pub admissible: bool,
    pub pairs_sampled: usize,
}

/// Grid estimates of the local log-Hölder constant and the decay constant.
pub fn estimate_log_holder(p: &ExponentField) -> Result<LogHolderReport> {
    let g = p.grid;
    let v = &p.values;
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("non-finite exponent".into()));
    }
    let total = g.len();
    let full_pairs = total * (total - 1) / 2;
    let stride = if full_pairs <= MAX_HOLDER_PAIRS {
        1
    } else {
        let keep = ((1.0 + (1.0 + 8.0 * MAX_HOLDER_PAIRS as f64).sqrt()) / 2.0).floor() as usize;
        total.div_ceil(keep.max(2))
    };
    let idx: Vec<usize> = (0..total).step_by(stride).collect();
    let pts: Vec<[f64; 2]> = idx.iter().map(|&i| g.point(i)).collect();
    let mut c_local: f64 = 0.0;
    let mut pairs = 0usize;
    for a in 0..idx.len() {
        for b in (a + 1)..idx.len() {
            let d = g.norm([pts[a][0] - pts[b][0], pts[a][1] - pts[b][1]]);
            let diff = (v[idx[a]] - v[idx[b]]).abs();
            c_local = c_local.max(diff * (std::f64::consts::E + 1.0 / d).ln());
            pairs += 1;
        }
    }
    let limit_used = match p.limit_at_infinity {
        Some(l) => l,
        None => outer_band_average(p),
    };
    let c_decay = (0..total)
        .map(|i| (v[i] - limit_used).abs() * (std::f64::consts::E + g.norm(g.point(i))).ln())
        .fold(0.0, f64::max);
    Ok(LogHolderReport {
        c_local,
        c_decay,
        limit_used,
        admissible: c_local.is_finite() && c_decay.is_finite(),
        pairs_sampled: pairs,
    })
}

/// Mean of the field over the points whose sup-norm coordinate lies in the
/// outermost band of relative width [`DECAY_BAND_FRACTION`].
fn outer_band_average(p: &ExponentField) -> f64 {
    let g = p.grid;
    let cut = (1.0 - DECAY_BAND_FRACTION) * g.half_extent();
    let (mut sum, mut count) = (0.0, 0usize);
    for i in 0..g.len() {
        let x = g.point(i);
        if x[0].abs().max(x[1].abs()) >= cut {
            sum += p.values[i];
            count += 1;
        }
    }
    sum / count as f64
}

/// The exponent p_0 with 1/p_0 = 1/p_1 + 1/p_2.
pub fn combine_holder(p1: &ExponentField, p2: &ExponentField) -> Result<ExponentField> {
    for p in [p1, p2] {
        if p.role != ExponentRole::Integrability {
            return Err(Error::InvalidInput("Hölder combination needs integrability exponents".into()));
        }
    }
    p1.zip(p2, ExponentRole::Integrability, |a, b| a * b / (a + b))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SigmaField {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl SigmaField {
    pub fn sup(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// σ_p = n(1/min(1,p) − 1), or σ_{p,q} = n(1/min(1,p,q) − 1) when `q` is given.
pub fn sigma_of(p: &ExponentField, q: Option<&ExponentField>) -> Result<SigmaField> {
    let n = p.grid.dim() as f64;
    if let Some(q) = q {
        p.grid.check_same(&q.grid)?;
    }
    let values = (0..p.grid.len())
        .map(|i| {
            let mut m = p.values[i].min(1.0);
            if let Some(q) = q {
                m = m.min(q.values[i]);
            }
            n * (1.0 / m - 1.0)
        })
        .collect();
    Ok(SigmaField { grid: p.grid, values })
}
