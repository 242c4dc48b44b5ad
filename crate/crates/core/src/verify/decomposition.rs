//! φ-transform, quarkonial decomposition and sequence-space checks.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Check, Context, Outcome};
use crate::corpus::{decaying_corpus, exponent_triples, rng, trig_polynomial};
use crate::decomposition::sequence::cube_points;
use crate::decomposition::{
    build_kappa, lattice_samples, phi_transform_synthesize, quark_analyze, quark_atom, quark_norm, quark_synthesize, seq_norm, seq_norm_b, seq_norm_with_sets, validate_atom,
    CoefficientArray, DyadicCube, QuarkBasis,
};
use crate::error::Result;
use crate::grid::{Domain, Grid, GridFunction};
use crate::littlewood_paley::{besov_norm, build_resolution, default_band_count, Flavor};
use crate::C64;

pub(super) fn checks() -> Vec<Check> {
    vec![
        Check { id: "decomposition.phi_transform", module: "decomposition", anchor: "phi-transform sampling identity for band-limited functions", run: phi_transform },
        Check { id: "decomposition.quark_round_trip", module: "decomposition", anchor: "quarkonial analysis followed by synthesis reproduces f", run: quark_round_trip },
        Check { id: "decomposition.norm_equivalence", module: "decomposition", anchor: "quark coefficient norm is equivalent to the Besov norm", run: norm_equivalence },
        Check { id: "decomposition.synthesis_bound", module: "decomposition", anchor: "atomic synthesis is bounded from b^s_{p,q} into B^s_{p,q}", run: synthesis_bound },
        Check { id: "decomposition.shift_stability", module: "decomposition", anchor: "index shifts change sequence norms by a bounded factor", run: shift_stability },
        Check { id: "decomposition.e_sets", module: "decomposition", anchor: "cube indicators may be replaced by large subsets of 3Q", run: e_sets },
    ]
}

fn phi_transform(ctx: &Context) -> Result<Outcome> {
    let mut r = rng(ctx.seed, 40);
    // (grid, level, largest torus mode) with every mode inside Q(3·2^ν).
    let cases = [(Grid::new(1, 8.0, 512)?, 0u32, 7i64), (Grid::new(1, 8.0, 512)?, 1, 15), (Grid::new(2, 4.0, 32)?, 0, 3)];
    let mut worst = 0.0f64;
    for (g, nu, k_max) in cases {
        let f = trig_polynomial(&g, &mut r, k_max, 6);
        let kernel = build_kappa(&g, 0)?;
        let back = phi_transform_synthesize(&lattice_samples(&f, nu)?, &kernel, nu)?;
        let inner = g.half_extent() / 2.0;
        let mut err = 0.0f64;
        for i in 0..g.len() {
            if g.point(i)[..g.dim()].iter().all(|x| x.abs() <= inner) {
                err = err.max((back.samples()[i] - f.samples()[i]).norm());
            }
        }
        worst = worst.max(err / f.max_abs());
    }
    Ok(Outcome::at_most(worst, 1e-6, "max relative error on the inner half-domain, 3 fixtures"))
}

struct RoundTrip {
    grid: Grid,
    functions: Vec<GridFunction>,
    coefficients: Vec<crate::decomposition::QuarkCoefficients>,
    errors: Vec<f64>,
}

/// Analysis and synthesis of the 5-function corpus on T = 8, N = 2048 with ν_max = 5, β_max = 6.
fn round_trip(seed: u64) -> Result<RoundTrip> {
    let g = Grid::new(1, 8.0, 2048)?;
    let basis = QuarkBasis::new(1, crate::decomposition::DEFAULT_RHO, 6)?;
    let kernel = build_kappa(&g, 0)?;
    let res = build_resolution(&g, 5)?;
    let functions = decaying_corpus(&g, seed, 5);
    let mut coefficients = Vec::new();
    let mut errors = Vec::new();
    for f in &functions {
        let lam = quark_analyze(f, &basis, &kernel, &res, 5)?;
        let back = quark_synthesize(&lam, &basis, &g)?;
        errors.push(back.sub(f)?.max_abs() / f.max_abs());
        coefficients.push(lam);
    }
    Ok(RoundTrip { grid: g, functions, coefficients, errors })
}

fn quark_round_trip(ctx: &Context) -> Result<Outcome> {
    let rt = round_trip(ctx.seed)?;
    let worst = rt.errors.iter().copied().fold(0.0, f64::max);
    Ok(Outcome::at_most(worst, 1e-3, "max relative sup-norm error, 5 functions, nu_max = 5, beta_max = 6"))
}

fn norm_equivalence(ctx: &Context) -> Result<Outcome> {
    let rt = round_trip(ctx.seed)?;
    let g = rt.grid;
    let res = build_resolution(&g, default_band_count(&g))?;
    let mut ratios = Vec::new();
    for t in exponent_triples(&g, ctx.seed, 2, 1.2, 3.0, 0.2)? {
        for (f, lam) in rt.functions.iter().zip(&rt.coefficients) {
            ratios.push(quark_norm(lam, &t.p, &t.q, &t.s, Flavor::Besov)?.norm / besov_norm(f, &t.p, &t.q, &t.s, &res)?);
        }
    }
    Ok(Outcome::range(&ratios, "quark_norm(analyze f) / besov_norm(f)"))
}

/// Random complex entries on levels 0..=`nu_max` with indices inside the torus lattice.
pub(super) fn random_array(r: &mut ChaCha8Rng, g: &Grid, nu_max: u32, count: usize, hyperplane: bool) -> Result<CoefficientArray> {
    let t = g.half_extent();
    let entries: Vec<(u32, [i64; 2], C64)> = (0..count)
        .map(|_| {
            let nu = r.gen_range(0..=nu_max);
            let half = (t * 2f64.powi(nu as i32)) as i64;
            // Keep one cube of margin so shifted copies stay on the grid.
            let mut m = [0i64; 2];
            for (a, slot) in m.iter_mut().enumerate().take(g.dim()) {
                *slot = if hyperplane && a == 1 { 0 } else { r.gen_range(-half + 1..half - 1) };
            }
            (nu, m, C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
        })
        .collect();
    CoefficientArray::from_entries(g.dim(), &entries)
}

fn synthesis_bound(ctx: &Context) -> Result<Outcome> {
    let g = Grid::new(1, 8.0, 512)?;
    let basis = QuarkBasis::default_for(1)?;
    let res = build_resolution(&g, default_band_count(&g))?;
    let mut r = rng(ctx.seed, 41);
    let (k, l) = (3u32, 1i32);
    let mut ratios = Vec::new();
    let mut rejected = 0usize;
    let triples = exponent_triples(&g, ctx.seed, 2, 1.5, 3.0, 0.3)?;
    for _ in 0..3 {
        let lam = random_array(&mut r, &g, 3, 12, false)?;
        let mut sum = GridFunction::zeros(g, Domain::Spatial);
        for (nu, m, v) in lam.entries() {
            let cube = DyadicCube { nu, m };
            let a = quark_atom(&g, &basis, cube, k, l)?;
            if !validate_atom(&a, k, l, cube, 3.0)?.passes() {
                rejected += 1;
                continue;
            }
            sum = sum.add(&a.scale(v))?;
        }
        for t in &triples {
            ratios.push(besov_norm(&sum, &t.p, &t.q, &t.s, &res)? / seq_norm_b(&lam, &t.p, &t.q, &t.s)?);
        }
    }
    Ok(Outcome::range(&ratios, format!("besov_norm(sum lambda a) / seq_norm_b(lambda), [3,1]-atoms; {rejected} atoms failed validation")))
}

fn plane() -> Grid {
    Grid::new(2, 4.0, 64).expect("valid grid")
}

fn shift_stability(ctx: &Context) -> Result<Outcome> {
    let g = plane();
    let mut r = rng(ctx.seed, 42);
    let mut ratios = Vec::new();
    for t in exponent_triples(&g, ctx.seed, 2, 0.8, 3.0, 0.2)? {
        for _ in 0..5 {
            let lam = random_array(&mut r, &g, 3, 20, false)?;
            for flavor in [Flavor::Besov, Flavor::Triebel] {
                let base = seq_norm(&lam, &t.p, &t.q, &t.s, flavor)?;
                ratios.push(seq_norm(&lam.shifted([1, 0]), &t.p, &t.q, &t.s, flavor)? / base);
            }
        }
    }
    Ok(Outcome::range(&ratios, "||lambda shifted by (1,0)|| / ||lambda||, both flavors"))
}

/// A random subset of a cube inside 3Q holding at least half of its points.
fn random_e_set(g: &Grid, r: &mut ChaCha8Rng, nu: u32, m: [i64; 2]) -> Vec<usize> {
    let off = [r.gen_range(-1..=1), r.gen_range(-1..=1)];
    let moved = DyadicCube { nu, m: [m[0] + off[0], m[1] + off[1]] };
    let pts = cube_points(g, moved).or_else(|_| cube_points(g, DyadicCube { nu, m })).expect("cube on the grid");
    let keep = pts.len().div_ceil(2).max(1);
    let mut chosen: Vec<usize> = pts.clone();
    // Partial Fisher–Yates: a uniformly random `keep`-subset.
    for i in 0..keep {
        let j = r.gen_range(i..chosen.len());
        chosen.swap(i, j);
    }
    chosen.truncate(keep);
    chosen
}

fn e_sets(ctx: &Context) -> Result<Outcome> {
    let g = plane();
    let mut r = rng(ctx.seed, 43);
    let mut ratios = Vec::new();
    for t in exponent_triples(&g, ctx.seed, 2, 0.8, 3.0, 0.2)? {
        for _ in 0..4 {
            let lam = random_array(&mut r, &g, 3, 20, false)?;
            let sets: Vec<((u32, [i64; 2]), Vec<usize>)> = lam.entries().into_iter().map(|(nu, m, _)| ((nu, m), random_e_set(&g, &mut r, nu, m))).collect();
            let lookup = |nu: u32, m: [i64; 2]| sets.iter().find(|(k, _)| *k == (nu, m)).map(|(_, v)| v.clone()).unwrap_or_default();
            for flavor in [Flavor::Besov, Flavor::Triebel] {
                let base = seq_norm(&lam, &t.p, &t.q, &t.s, flavor)?;
                ratios.push(seq_norm_with_sets(&lam, &t.p, &t.q, &t.s, flavor, &lookup)? / base);
            }
        }
    }
    Ok(Outcome::range(&ratios, "norm with chi_E over norm with chi_Q, |E| >= |Q|/2, E in 3Q"))
}
