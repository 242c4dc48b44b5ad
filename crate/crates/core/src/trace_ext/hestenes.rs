//! Higher-order reflection across x_n = 0.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::trace::{is_upper, HalfSpaceFunction};
use crate::error::{Error, Result};
use crate::grid::{Domain, GridFunction};
use crate::tolerances::HESTENES_MAX_ORDER;
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum HestenesVariant {
    /// Right-hand side (1, 0, …, 0).
    #[serde(rename = "paper_delta")]
    Delta,
    /// Right-hand side all ones: every derivative of order < M matches across x_n = 0.
    #[default]
    DerivativeMatching,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HestenesCoeffs {
    pub m: usize,
    pub lambdas: Vec<f64>,
    pub variant: HestenesVariant,
    /// max_l |Σ_j (−j)^l λ_j − rhs_l| in floating point.
    pub residual: f64,
}

/// Solves `Σ_{j=1}^M (−j)^l λ_j = rhs_l`, l = 0..M−1, exactly in rationals.
pub fn hestenes_coeffs(m: usize, variant: HestenesVariant) -> Result<HestenesCoeffs> {
    if !(1..=HESTENES_MAX_ORDER).contains(&m) {
        return Err(Error::OutOfRange(format!("M = {m} outside 1..={HESTENES_MAX_ORDER}")));
    }
    let rhs = |l: usize| -> i64 {
        match variant {
            HestenesVariant::Delta => (l == 0) as i64,
            HestenesVariant::DerivativeMatching => 1,
        }
    };
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut a: Vec<Vec<BigRational>> = (0..m)
        .map(|l| {
            let mut row: Vec<BigRational> = (1..=m).map(|j| int(-(j as i64)).pow(l as i32)).collect();
            row.push(int(rhs(l)));
            row
        })
        .collect();
    for col in 0..m {
        let piv = (col..m).find(|&r| !a[r][col].is_zero()).ok_or_else(|| Error::NumericRange("singular moment system".into()))?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..m {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, pv) in a[r].iter_mut().zip(&pivot_row) {
                    *v = &*v - &f * pv;
                }
            }
        }
    }
    debug_assert!(a.iter().enumerate().all(|(i, row)| row[i].is_one() && row[i].is_positive()));
    let lambdas: Vec<f64> = a.iter().map(|row| row[m].to_f64().unwrap_or(f64::NAN)).collect();
    let residual = (0..m)
        .map(|l| {
            let s: f64 = lambdas.iter().enumerate().map(|(j, lj)| (-(j as f64 + 1.0)).powi(l as i32) * lj).sum();
            (s - rhs(l) as f64).abs()
        })
        .fold(0.0, f64::max);
    Ok(HestenesCoeffs { m, lambdas, variant, residual })
}

#[derive(Clone, Debug)]
pub struct HestenesExtension {
    pub function: GridFunction,
    /// Lower-half samples whose reflected points `−j x_n` fell outside the grid (taken as 0).
    pub truncated_points: usize,
}

/// `f*(x) = f(x)` for x_n ≥ 0 and `Σ_j λ_j f(x′, −j x_n)` for x_n < 0, on exact grid rows.
pub fn hestenes_extend(f: &HalfSpaceFunction, coeffs: &HestenesCoeffs) -> HestenesExtension {
    let g = *f.grid();
    let n = g.samples_per_axis();
    let mid = g.origin_index();
    let src = f.zero_extended();
    let mut out = src.clone();
    let mut truncated_points = 0;
    for idx in 0..g.len() {
        if is_upper(&g, idx) {
            continue;
        }
        let mut ix = g.multi_index(idx);
        let axis = g.dim() - 1;
        let r = mid - ix[axis];
        let mut acc = C64::new(0.0, 0.0);
        let mut cut = false;
        for (j, lj) in coeffs.lambdas.iter().enumerate() {
            let row = mid + (j + 1) * r;
            if row >= n {
                cut = true;
                continue;
            }
            ix[axis] = row;
            acc += src.samples()[g.flat_index(ix)] * *lj;
        }
        truncated_points += cut as usize;
        out.samples_mut()[idx] = acc;
    }
    HestenesExtension { function: out, truncated_points }
}

/// max over x′ of |D₊ − D₋|, the one-sided first-order difference quotients of
/// order `l` at x_n = 0 taken from above and from below.
pub fn boundary_derivative_mismatch(f: &GridFunction, l: u32) -> Result<f64> {
    f.expect_domain(Domain::Spatial)?;
    let g = *f.grid();
    let mid = g.origin_index();
    let n = g.samples_per_axis();
    let l = l as usize;
    if mid < l || mid + l >= n {
        return Err(Error::Resolution("grid too small for the difference stencil".into()));
    }
    let h = g.spacing();
    let binom = |k: usize| -> f64 { (0..k).fold(1.0, |acc, i| acc * (l - i) as f64 / (i + 1) as f64) };
    let lines = if g.dim() == 1 { 1 } else { n };
    let axis = g.dim() - 1;
    let mut worst = 0.0f64;
    for line in 0..lines {
        let at = |row: usize| {
            let mut ix = [line, 0];
            ix[axis] = row;
            if g.dim() == 1 {
                ix = [row, 0];
            }
            f.samples()[g.flat_index(ix)]
        };
        let mut up = C64::new(0.0, 0.0);
        let mut down = C64::new(0.0, 0.0);
        for k in 0..=l {
            let sign = if (l - k).is_multiple_of(2) { 1.0 } else { -1.0 };
            up += at(mid + k) * (sign * binom(k));
            down += at(mid - l + k) * (sign * binom(k));
        }
        worst = worst.max((up - down).norm() / h.powi(l as i32));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    fn assert_coeffs(m: usize, v: HestenesVariant, expect: &[f64]) {
        let c = hestenes_coeffs(m, v).unwrap();
        assert_eq!(c.lambdas.len(), expect.len());
        for (a, b) in c.lambdas.iter().zip(expect) {
            assert!((a - b).abs() <= 1e-12, "{:?}", c.lambdas);
        }
        assert!(c.residual <= 1e-12 * 10f64.powi(m as i32));
    }

    #[test]
    fn coefficient_examples() {
        assert_coeffs(1, HestenesVariant::DerivativeMatching, &[1.0]);
        assert_coeffs(1, HestenesVariant::Delta, &[1.0]);
        assert_coeffs(2, HestenesVariant::DerivativeMatching, &[3.0, -2.0]);
        assert_coeffs(3, HestenesVariant::DerivativeMatching, &[6.0, -8.0, 3.0]);
        assert_coeffs(2, HestenesVariant::Delta, &[2.0, -1.0]);
        assert!(hestenes_coeffs(0, HestenesVariant::Delta).is_err());
        assert!(hestenes_coeffs(13, HestenesVariant::Delta).is_err());
        let c = hestenes_coeffs(12, HestenesVariant::DerivativeMatching).unwrap();
        assert!(c.residual <= 1e-3, "{}", c.residual);
    }

    #[test]
    fn reproduces_polynomials() {
        let g = Grid::new(2, 4.0, 64).unwrap();
        let c = hestenes_coeffs(4, HestenesVariant::DerivativeMatching).unwrap();
        for l in 0..4 {
            let full = GridFunction::from_real_fn(g, |x| (0.3 * x[1]).powi(l) * (1.0 + 0.1 * x[0]));
            let ext = hestenes_extend(&HalfSpaceFunction::restrict(&full).unwrap(), &c);
            // Reflections of rows below −T/M leave the grid.
            for idx in 0..g.len() {
                if g.point(idx)[1] > -4.0 / 4.0 {
                    assert!((ext.function.samples()[idx] - full.samples()[idx]).norm() <= 1e-12 * 32.0);
                }
            }
            assert!(ext.truncated_points > 0);
        }
        let one = HalfSpaceFunction::from_fn(g, |_| C64::new(2.0, -1.0)).unwrap();
        let e = hestenes_extend(&one, &hestenes_coeffs(1, HestenesVariant::DerivativeMatching).unwrap());
        for (idx, v) in e.function.samples().iter().enumerate() {
            if g.point(idx)[1] > -4.0 {
                assert!((*v - C64::new(2.0, -1.0)).norm() < 1e-15);
            }
        }
        assert_eq!(e.truncated_points, 64);
    }

    #[test]
    fn mismatch_shrinks_linearly() {
        let c = hestenes_coeffs(3, HestenesVariant::DerivativeMatching).unwrap();
        let mut prev: Option<f64> = None;
        for n in [1024usize, 2048, 4096] {
            let g = Grid::new(1, 4.0, n).unwrap();
            let f = HalfSpaceFunction::from_fn(g, |x| C64::new((1.3 * x[0]).cos() + 0.2 * x[0].powi(3), 0.0)).unwrap();
            let ext = hestenes_extend(&f, &c).function;
            let m = boundary_derivative_mismatch(&ext, 1).unwrap();
            if let Some(p) = prev {
                let slope = (p / m).log2();
                assert!((slope - 1.0).abs() <= 0.2, "slope {slope}");
            }
            prev = Some(m);
        }
    }
}
