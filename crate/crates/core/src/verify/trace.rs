//! Trace, co-extension, reflection, lift and half-space extension checks.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::decomposition::random_array;
use super::{Check, Context, Outcome};
use crate::corpus::{decaying_corpus, exponent_triples, rng, ExponentTriple};
use crate::decomposition::{build_kappa, seq_norm, QuarkBasis};
use crate::error::Result;
use crate::exponents::{ExponentField, ExponentRole};
use crate::grid::{Grid, GridFunction};
use crate::littlewood_paley::{besov_norm, build_resolution, default_band_count, triebel_norm, Flavor};
use crate::mixed_norms::QExponent;
use crate::tolerances::LIFT_EPSILON;
use crate::trace_ext::lift::upper_mass_ratio;
use crate::trace_ext::{
    boundary_derivative_mismatch, build_lift_symbol, coextend, comparability_band, ext_n, hestenes_coeffs, hestenes_extend, lift_apply, trace, ExtParams, ExtPath,
    HalfSpaceFunction, HestenesVariant,
};
use crate::C64;

pub(super) fn checks() -> Vec<Check> {
    vec![
        Check { id: "trace_ext.hestenes_coefficients", module: "trace_ext", anchor: "reflection coefficients for M = 3 are 6, -8, 3", run: hestenes_coefficients },
        Check { id: "trace_ext.hestenes_monomials", module: "trace_ext", anchor: "reflection reproduces x_n^l for l < M", run: hestenes_monomials },
        Check { id: "trace_ext.hestenes_slope", module: "trace_ext", anchor: "discrete boundary derivative mismatch is first order in h", run: hestenes_slope },
        Check { id: "trace_ext.lift_identity", module: "trace_ext", anchor: "J_sigma composed with J_-sigma is the identity", run: lift_identity },
        Check { id: "trace_ext.lift_comparability", module: "trace_ext", anchor: "lift symbol comparable to <xi'> + |xi_n|", run: lift_comparability },
        Check { id: "trace_ext.support_preservation", module: "trace_ext", anchor: "lifts keep lower half-space supports", run: support_preservation },
        Check { id: "trace_ext.coextension", module: "trace_ext", anchor: "normal derivatives of the co-extension trace back to the data", run: coextension },
        Check { id: "trace_ext.utrace_paths", module: "trace_ext", anchor: "trace of an extension does not depend on the extension", run: utrace_paths },
        Check { id: "trace_ext.restriction_identity", module: "trace_ext", anchor: "extensions agree with f on the upper half-space", run: restriction_identity },
        Check { id: "trace_ext.restriction_identity_lifted", module: "trace_ext", anchor: "lift-conjugated extension agrees with f on the upper half-space", run: restriction_identity_lifted },
        Check { id: "trace_ext.trace_besov", module: "trace_ext", anchor: "trace is bounded into B^{s-1/p}_{p,q} of the hyperplane", run: trace_besov },
        Check { id: "trace_ext.trace_triebel", module: "trace_ext", anchor: "trace is bounded into F^{s-1/p}_{p,p} of the hyperplane", run: trace_triebel },
        Check { id: "trace_ext.hyperplane_b", module: "trace_ext", anchor: "b-norms of m_n = 0 arrays match across dimensions", run: hyperplane_b },
        Check { id: "trace_ext.hyperplane_f", module: "trace_ext", anchor: "f-norms of m_n = 0 arrays match across dimensions", run: hyperplane_f },
        Check { id: "trace_ext.exponent_change", module: "trace_ext", anchor: "m_n = 0 norms only see exponents near the hyperplane", run: exponent_change },
    ]
}

fn hestenes_coefficients(_: &Context) -> Result<Outcome> {
    let c = hestenes_coeffs(3, HestenesVariant::DerivativeMatching)?;
    let err = c.lambdas.iter().zip([6.0, -8.0, 3.0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(Outcome::at_most(err, 1e-12, format!("lambdas {:?}", c.lambdas)))
}

fn hestenes_monomials(_: &Context) -> Result<Outcome> {
    let g = Grid::new(2, 4.0, 64)?;
    let m = 3;
    let c = hestenes_coeffs(m, HestenesVariant::DerivativeMatching)?;
    let mut worst = 0.0f64;
    for l in 0..m as i32 {
        let full = GridFunction::from_real_fn(g, |x| x[1].powi(l) * (1.0 + 0.1 * x[0]));
        let ext = hestenes_extend(&HalfSpaceFunction::restrict(&full)?, &c).function;
        // Rows below −T/M reflect off the grid and are truncated.
        for idx in 0..g.len() {
            if g.point(idx)[1] > -g.half_extent() / m as f64 {
                worst = worst.max((ext.samples()[idx] - full.samples()[idx]).norm() / full.max_abs());
            }
        }
    }
    Ok(Outcome::at_most(worst, 1e-12, "relative error on reflected rows, M = 3, l = 0, 1, 2"))
}

fn hestenes_slope(_: &Context) -> Result<Outcome> {
    let c = hestenes_coeffs(3, HestenesVariant::DerivativeMatching)?;
    let mut mismatches = Vec::new();
    for n in [1024usize, 2048, 4096] {
        let g = Grid::new(1, 4.0, n)?;
        let f = HalfSpaceFunction::from_fn(g, |x| C64::new((1.3 * x[0]).cos() + 0.2 * x[0].powi(3), 0.0))?;
        mismatches.push(boundary_derivative_mismatch(&hestenes_extend(&f, &c).function, 1)?);
    }
    let slopes: Vec<f64> = mismatches.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let worst = slopes.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max);
    Ok(Outcome::at_most(worst, 0.2, format!("|slope - 1|, slopes {slopes:?}, N = 1024, 2048, 4096")))
}

/// A bump supported in `x_n ∈ [−2.5, −0.5]`, Gaussian in `x′`.
fn lower_fixture(g: Grid) -> GridFunction {
    GridFunction::from_real_fn(g, |x| (-x[0] * x[0]).exp() * crate::profile::bump(0.5 * (x[1] + 2.5)))
}

fn lift_identity(_: &Context) -> Result<Outcome> {
    let g = Grid::new(2, 8.0, 128)?;
    let f = lower_fixture(g);
    let mut worst = 0.0f64;
    for sigma in [0.5, 1.0, 2.0] {
        let up = build_lift_symbol(sigma, LIFT_EPSILON, &g)?;
        let down = build_lift_symbol(-sigma, LIFT_EPSILON, &g)?;
        worst = worst.max(lift_apply(&lift_apply(&f, &down)?, &up)?.sub(&f)?.max_abs() / f.max_abs());
    }
    Ok(Outcome::at_most(worst, 1e-8, "max relative error, sigma = 0.5, 1, 2"))
}

fn lift_comparability(_: &Context) -> Result<Outcome> {
    let mut values = Vec::new();
    for g in [Grid::new(2, 4.0, 32)?, Grid::new(2, 8.0, 128)?] {
        let b = comparability_band(&g, LIFT_EPSILON)?;
        values.extend([b.min, b.max]);
    }
    Ok(Outcome::range(&values, "|phi^(1)(xi)| / (<xi'> + |xi_n|) over every grid frequency, two grids"))
}

fn support_preservation(_: &Context) -> Result<Outcome> {
    let g = Grid::new(2, 8.0, 128)?;
    let f = lower_fixture(g);
    let mut worst = 0.0f64;
    for sigma in [0.5, 1.0] {
        worst = worst.max(upper_mass_ratio(&lift_apply(&f, &build_lift_symbol(sigma, LIFT_EPSILON, &g)?)?, 0.1));
    }
    Ok(Outcome::at_most(worst, 1e-3, "energy of J_sigma f in x_n > 0.1 over total, sigma = 0.5, 1"))
}

fn coextension(_: &Context) -> Result<Outcome> {
    let b = Grid::new(1, 4.0, 64)?;
    let (basis, kernel, res) = (QuarkBasis::default_for(1)?, build_kappa(&b, 0)?, build_resolution(&b, 3)?);
    let g0 = GridFunction::from_real_fn(b, |x| (-x[0] * x[0]).exp() * (1.0 + 0.5 * x[0]));
    let g1 = GridFunction::from_real_fn(b, |x| (-(x[0] - 0.5).powi(2) * 2.0).exp());
    let mut worst = 0.0f64;
    for l_param in [0u32, 1] {
        let co = coextend(&[g0.clone(), g1.clone()], l_param, &basis, &kernel, &res, 3)?;
        for (l, target) in [&g0, &g1].iter().enumerate() {
            let t = trace(&co.normal_derivative(l as u32)?)?;
            worst = worst.max(t.sub(target)?.max_abs() / target.max_abs());
        }
    }
    Ok(Outcome::at_most(worst, 1e-3, "relative error of tr d^l coextend(g0, g1), l = 0, 1, L = 0, 1"))
}

/// Extensions of the half-space fixtures along every path, shared between checks.
struct ExtRun {
    /// Per fixture: relative restriction errors and traces by path, plus the exact trace.
    cases: Vec<ExtCase>,
}

struct ExtCase {
    errors: BTreeMap<ExtPath, f64>,
    traces: BTreeMap<ExtPath, GridFunction>,
    exact: GridFunction,
}

fn ext_fixtures(seed: u64) -> Result<Vec<GridFunction>> {
    let g = Grid::new(2, 4.0, 128)?;
    let mut out = vec![GridFunction::from_real_fn(g, |x| (-(x[0] * x[0] + (x[1] - 0.3).powi(2))).exp() * (1.0 + 0.2 * x[0]))];
    out.extend(decaying_corpus(&g, seed, 1));
    Ok(out)
}

fn ext_run(seed: u64) -> Result<Arc<ExtRun>> {
    static CACHE: OnceLock<Mutex<BTreeMap<u64, Arc<ExtRun>>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(Default::default).lock().unwrap_or_else(|e| e.into_inner());
    if let Some(run) = cache.get(&seed) {
        return Ok(run.clone());
    }
    let params = ExtParams::default();
    let mut cases = Vec::new();
    for full in ext_fixtures(seed)? {
        let f = HalfSpaceFunction::restrict(&full)?;
        let scale = full.max_abs();
        let (mut errors, mut traces) = (BTreeMap::new(), BTreeMap::new());
        for path in ExtPath::ALL {
            let e = ext_n(&f, path, &params, None)?;
            errors.insert(path, e.restriction_error / scale);
            traces.insert(path, trace(&e.function)?);
        }
        cases.push(ExtCase { errors, traces, exact: trace(&full)? });
    }
    let run = Arc::new(ExtRun { cases });
    cache.insert(seed, run.clone());
    Ok(run)
}

fn utrace_paths(ctx: &Context) -> Result<Outcome> {
    let run = ext_run(ctx.seed)?;
    let mut spread = 0.0f64;
    for c in &run.cases {
        let scale = c.exact.max_abs();
        let mut all: Vec<&GridFunction> = c.traces.values().collect();
        all.push(&c.exact);
        for a in 0..all.len() {
            for b in a + 1..all.len() {
                spread = spread.max(all[a].sub(all[b])?.max_abs() / scale);
            }
        }
    }
    Ok(Outcome::at_most(spread, crate::tolerances::UTRACE_SPREAD, "max relative difference between traces of the three extensions and the exact trace, 2 fixtures"))
}

fn worst_error(seed: u64, paths: &[ExtPath]) -> Result<f64> {
    let run = ext_run(seed)?;
    Ok(run.cases.iter().flat_map(|c| paths.iter().map(|p| c.errors[p])).fold(0.0, f64::max))
}

fn restriction_identity(ctx: &Context) -> Result<Outcome> {
    let err = worst_error(ctx.seed, &[ExtPath::Smooth, ExtPath::Hestenes])?;
    Ok(Outcome::at_most(err, 1e-6, "sup over x_n >= 0 of |Ext f - f| / sup|f|, smooth and hestenes paths"))
}

fn restriction_identity_lifted(ctx: &Context) -> Result<Outcome> {
    let err = worst_error(ctx.seed, &[ExtPath::Lifted])?;
    Ok(Outcome::at_most(err, 1e-3, "sup over x_n >= 0 of |Ext f - f| / sup|f|, lifted path; limited by torus wrap of the lowered candidate"))
}

fn trace_plane() -> Grid {
    Grid::new(2, 4.0, 64).expect("valid grid")
}

/// Triples with `p ∈ [1.5, 3]` and `s ≥ 0.8 > 1/p`, so the trace condition holds with room.
fn trace_triples(seed: u64) -> Result<Vec<ExponentTriple>> {
    exponent_triples(&trace_plane(), seed, 3, 1.5, 3.0, 0.8)
}

/// Boundary exponents `(p̃, s̃ − 1/p̃)`.
fn boundary_exponents(t: &ExponentTriple) -> Result<(ExponentField, ExponentField)> {
    let p = t.p.trace()?;
    let s = t.s.trace()?.zip(&p, ExponentRole::Smoothness, |s, p| s - 1.0 / p)?;
    Ok((p, s))
}

fn trace_ratios(seed: u64, flavor: Flavor) -> Result<Vec<f64>> {
    let g = trace_plane();
    let b = g.boundary()?;
    let (res, bres) = (build_resolution(&g, default_band_count(&g))?, build_resolution(&b, default_band_count(&b))?);
    let corpus = decaying_corpus(&g, seed, 10);
    let mut ratios = Vec::new();
    for t in trace_triples(seed)? {
        let (pb, sb) = boundary_exponents(&t)?;
        let qb = match flavor {
            Flavor::Besov => QExponent::Finite(t.q.finite().expect("finite q").trace()?),
            Flavor::Triebel => QExponent::Finite(pb.clone()),
        };
        for f in &corpus {
            let tf = trace(f)?;
            let ratio = match flavor {
                Flavor::Besov => besov_norm(&tf, &pb, &qb, &sb, &bres)? / besov_norm(f, &t.p, &t.q, &t.s, &res)?,
                Flavor::Triebel => triebel_norm(&tf, &pb, &qb, &sb, &bres)? / triebel_norm(f, &t.p, &t.q, &t.s, &res)?,
            };
            ratios.push(ratio);
        }
    }
    Ok(ratios)
}

fn trace_besov(ctx: &Context) -> Result<Outcome> {
    Ok(Outcome::range(&trace_ratios(ctx.seed, Flavor::Besov)?, "||tr f|| in B^{s~-1/p~}_{p~,q~} over ||f|| in B^s_{p,q}, 10 functions x 3 triples"))
}

fn trace_triebel(ctx: &Context) -> Result<Outcome> {
    Ok(Outcome::range(&trace_ratios(ctx.seed, Flavor::Triebel)?, "||tr f|| in F^{s~-1/p~}_{p~,p~} over ||f|| in F^s_{p,q}, 10 functions x 3 triples"))
}

fn hyperplane_ratios(seed: u64, flavor: Flavor) -> Result<Vec<f64>> {
    let g = trace_plane();
    let mut r = rng(seed, 50);
    let triples = trace_triples(seed)?;
    let mut ratios = Vec::new();
    for i in 0..20 {
        let t = &triples[i % triples.len()];
        let (pb, sb) = boundary_exponents(t)?;
        let qb = match flavor {
            Flavor::Besov => QExponent::Finite(t.q.finite().expect("finite q").trace()?),
            Flavor::Triebel => QExponent::Finite(pb.clone()),
        };
        let lam = random_array(&mut r, &g, 3, 12, true)?;
        let slice = lam.hyperplane_slice()?;
        ratios.push(seq_norm(&slice, &pb, &qb, &sb, flavor)? / seq_norm(&lam, &t.p, &t.q, &t.s, flavor)?);
    }
    Ok(ratios)
}

fn hyperplane_b(ctx: &Context) -> Result<Outcome> {
    Ok(Outcome::range(&hyperplane_ratios(ctx.seed, Flavor::Besov)?, "(n-1)-dim b-norm with s~-1/p~ over n-dim b-norm with s, 20 arrays"))
}

fn hyperplane_f(ctx: &Context) -> Result<Outcome> {
    Ok(Outcome::range(&hyperplane_ratios(ctx.seed, Flavor::Triebel)?, "(n-1)-dim f-norm (q~ = p~) with s~-1/p~ over n-dim f-norm with s, 20 arrays"))
}

/// Adds `amp·(1 − exp(−x_n²))`, which vanishes on the hyperplane.
fn altered(e: &ExponentField, amp: f64) -> Result<ExponentField> {
    let g = *e.grid();
    let bump = ExponentField::from_fn(g, ExponentRole::Smoothness, |x| 1.0 - (-x[1] * x[1]).exp())?;
    e.zip(&bump, e.role(), |v, b| v + amp * b)?.with_limit(None)
}

fn exponent_change(ctx: &Context) -> Result<Outcome> {
    let g = trace_plane();
    let mut r = rng(ctx.seed, 51);
    let mut ratios = Vec::new();
    for t in trace_triples(ctx.seed)? {
        let p2 = altered(&t.p, 0.7)?;
        let q2 = QExponent::Finite(altered(t.q.finite().expect("finite q"), -0.3)?);
        let s2 = altered(&t.s, 0.5)?;
        for _ in 0..4 {
            let lam = random_array(&mut r, &g, 3, 12, true)?;
            for flavor in [Flavor::Besov, Flavor::Triebel] {
                ratios.push(seq_norm(&lam, &p2, &q2, &s2, flavor)? / seq_norm(&lam, &t.p, &t.q, &t.s, flavor)?);
            }
        }
    }
    Ok(Outcome::range(&ratios, "m_n = 0 sequence norm with exponents altered away from x_n = 0 over the original, both flavors"))
}

