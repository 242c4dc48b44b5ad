//! Exponent, grid, Lebesgue and mixed-norm checks.

use rand::Rng;

use super::{Check, Context, Outcome, Tolerance};
use crate::corpus::{bump_exponent, decaying_corpus, exponent_triples, random_samples, rng};
use crate::error::Result;
use crate::exponents::{combine_holder, sigma_of, ExponentField, ExponentRole};
use crate::grid::{Domain, Grid, GridFunction};
use crate::lebesgue::{luxemburg_norm, modular};
use crate::maximal::eta_convolve;
use crate::mixed_norms::{ell_q_lp_norm, iterated_modular, lp_ell_q_norm, DyadicSequence, QExponent};
use crate::C64;

pub(super) fn checks() -> Vec<Check> {
    vec![
        Check { id: "exponents.bounds", module: "exponents", anchor: "admissible exponents are bounded away from 0 and infinity", run: exponent_bounds },
        Check { id: "exponents.combine_holder", module: "exponents", anchor: "Hölder exponent combination is symmetric and exact", run: holder_combination },
        Check { id: "exponents.sigma_zero", module: "exponents", anchor: "sigma_p vanishes exactly where p >= 1", run: sigma_zero },
        Check { id: "grid.round_trip", module: "grid", anchor: "inverse transform undoes the forward transform", run: grid_round_trip },
        Check { id: "grid.parseval", module: "grid", anchor: "Parseval identity under the grid scaling", run: grid_parseval },
        Check { id: "lebesgue.modular_monotone", module: "lebesgue", anchor: "modular of f/lambda is non-increasing in lambda", run: modular_monotone },
        Check { id: "lebesgue.unit_ball", module: "lebesgue", anchor: "Luxemburg norm is the unit level of the modular", run: unit_ball },
        Check { id: "lebesgue.homogeneity", module: "lebesgue", anchor: "Luxemburg norm is absolutely homogeneous", run: homogeneity },
        Check { id: "lebesgue.quasi_triangle", module: "lebesgue", anchor: "r-triangle inequality with r = min(p-, 1)", run: lebesgue_triangle },
        Check { id: "lebesgue.holder_ratio", module: "lebesgue", anchor: "Hölder inequality for variable exponents", run: holder_ratio },
        Check { id: "lebesgue.constant_reduction", module: "lebesgue", anchor: "constant exponent gives the classical L^p norm", run: constant_reduction },
        Check { id: "mixed_norms.quasi_triangle_lp_lq", module: "mixed_norms", anchor: "r-triangle inequality in L^p(l^q) with r = min(p-, q-, 1)", run: triangle_lp_lq },
        Check { id: "mixed_norms.quasi_triangle_lq_lp", module: "mixed_norms", anchor: "alpha-subadditivity in l^q(L^p) with alpha = min(q-, 1) min(1, (p/q)-)", run: triangle_lq_lp },
        Check { id: "mixed_norms.unit_modular", module: "mixed_norms", anchor: "mixed norms are unit levels of their modulars", run: mixed_unit_modular },
        Check { id: "mixed_norms.eta_lq_lp", module: "mixed_norms", anchor: "eta-convolution is bounded on l^q(L^p) for m > n", run: eta_lq_lp },
        Check { id: "mixed_norms.eta_lp_lq", module: "mixed_norms", anchor: "eta-convolution is bounded on L^p(l^q) for m > 2n", run: eta_lp_lq },
    ]
}

fn line() -> Grid {
    Grid::new(1, 4.0, 128).expect("valid grid")
}

fn plane() -> Grid {
    Grid::new(2, 4.0, 32).expect("valid grid")
}

/// Smooth exponent with values in [lo, hi] and a random bump centre.
fn random_exponent(g: &Grid, r: &mut impl Rng, lo: f64, hi: f64) -> Result<ExponentField> {
    let c = [r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0)];
    let base = r.gen_range(lo..hi);
    let top = r.gen_range(lo..hi);
    bump_exponent(g, ExponentRole::Integrability, base, top - base, c, r.gen_range(0.5..2.0))
}

fn konst(g: &Grid, v: f64) -> Result<ExponentField> {
    ExponentField::constant(*g, v, ExponentRole::Integrability)
}

fn exponent_bounds(ctx: &Context) -> Result<Outcome> {
    let g = plane();
    let mut worst = f64::INFINITY;
    for t in exponent_triples(&g, ctx.seed, 10, 0.6, 4.0, 0.2)? {
        let q = t.q.finite().expect("finite q");
        for p in [&t.p, q] {
            let (lo, hi) = (p.inf_value(), p.sup_value());
            worst = worst.min(if hi.is_finite() { lo } else { 0.0 });
        }
    }
    Ok(Outcome::Hard { measured: worst, tolerance: Tolerance::AtLeast { bound: f64::MIN_POSITIVE }, detail: "smallest p- over the corpus".into() })
}

fn holder_combination(ctx: &Context) -> Result<Outcome> {
    let g = plane();
    let mut r = rng(ctx.seed, 10);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let a = random_exponent(&g, &mut r, 0.5, 5.0)?;
        let b = random_exponent(&g, &mut r, 0.5, 5.0)?;
        let ab = combine_holder(&a, &b)?;
        let ba = combine_holder(&b, &a)?;
        for i in 0..g.len() {
            let exact = 1.0 / (1.0 / a.values()[i] + 1.0 / b.values()[i]);
            worst = worst.max((ab.values()[i] - ba.values()[i]).abs()).max((ab.values()[i] - exact).abs() / exact);
        }
    }
    Ok(Outcome::at_most(worst, 1e-14, "max asymmetry or relative deviation from 1/(1/p1 + 1/p2)"))
}

fn sigma_zero(ctx: &Context) -> Result<Outcome> {
    let g = plane();
    let mut r = rng(ctx.seed, 11);
    let mut mismatches = 0usize;
    for _ in 0..20 {
        let p = random_exponent(&g, &mut r, 0.4, 3.0)?;
        let s = sigma_of(&p, None)?;
        mismatches += p.values().iter().zip(&s.values).filter(|(pv, sv)| (**pv >= 1.0) != (**sv == 0.0)).count();
    }
    Ok(Outcome::at_most(mismatches as f64, 0.0, "grid points where sigma_p = 0 and p >= 1 disagree"))
}

fn grid_round_trip(ctx: &Context) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for (k, g) in [Grid::new(1, 4.0, 1024)?, Grid::new(2, 4.0, 64)?].iter().enumerate() {
        for f in random_samples(g, ctx.seed, k as u64, 5) {
            let back = f.forward_transform()?.inverse_transform()?;
            worst = worst.max(back.sub(&f)?.max_abs() / f.max_abs());
        }
    }
    Ok(Outcome::at_most(worst, 1e-12, "max relative round-trip error"))
}

fn grid_parseval(ctx: &Context) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for (k, g) in [Grid::new(1, 4.0, 1024)?, Grid::new(2, 4.0, 64)?].iter().enumerate() {
        for f in random_samples(g, ctx.seed, 10 + k as u64, 5) {
            let space: f64 = f.samples().iter().map(|v| v.norm_sqr()).sum::<f64>() * g.cell_volume();
            let spec = f.forward_transform()?;
            let freq: f64 = spec.samples().iter().map(|v| v.norm_sqr()).sum::<f64>() * g.frequency_spacing().powi(g.dim() as i32);
            worst = worst.max((space - freq).abs() / space);
        }
    }
    Ok(Outcome::at_most(worst, 1e-10, "max relative Parseval defect"))
}

fn modular_monotone(ctx: &Context) -> Result<Outcome> {
    let g = line();
    let mut r = rng(ctx.seed, 12);
    let mut violations = 0usize;
    for f in random_samples(&g, ctx.seed, 20, 10) {
        let p = random_exponent(&g, &mut r, 0.5, 4.0)?;
        let mut prev = f64::INFINITY;
        for k in -40..=40 {
            let lambda = 2f64.powf(k as f64 / 4.0);
            let m = modular(&f.scale(C64::new(1.0 / lambda, 0.0)), &p, None)?.value;
            if m > prev {
                violations += 1;
            }
            prev = m;
        }
    }
    Ok(Outcome::at_most(violations as f64, 0.0, "increases along the lambda ladder"))
}

/// 100 random functions with random variable exponents.
fn norm_corpus(seed: u64) -> Result<Vec<(GridFunction, ExponentField)>> {
    let g = line();
    let mut r = rng(seed, 13);
    random_samples(&g, seed, 30, 100).into_iter().map(|f| Ok((f, random_exponent(&g, &mut r, 0.5, 4.0)?))).collect()
}

fn unit_ball(ctx: &Context) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for (f, p) in norm_corpus(ctx.seed)? {
        let n = luxemburg_norm(&f, &p, None)?;
        let m = modular(&f.scale(C64::new(1.0 / n, 0.0)), &p, None)?.value;
        worst = worst.max((m - 1.0).abs());
    }
    Ok(Outcome::at_most(worst, 1e-6, "max |modular(f/||f||) - 1| over 100 functions"))
}

fn homogeneity(ctx: &Context) -> Result<Outcome> {
    let mut r = rng(ctx.seed, 14);
    let mut worst = 0.0f64;
    for (f, p) in norm_corpus(ctx.seed)? {
        let c = C64::from_polar(10f64.powf(r.gen_range(-3.0..3.0)), r.gen_range(0.0..std::f64::consts::TAU));
        let a = luxemburg_norm(&f.scale(c), &p, None)?;
        let b = c.norm() * luxemburg_norm(&f, &p, None)?;
        worst = worst.max((a - b).abs() / b);
    }
    Ok(Outcome::at_most(worst, 1e-9, "max relative homogeneity defect over 100 functions"))
}

fn lebesgue_triangle(ctx: &Context) -> Result<Outcome> {
    let g = line();
    let mut r = rng(ctx.seed, 15);
    let fs = random_samples(&g, ctx.seed, 40, 200);
    let mut worst = f64::NEG_INFINITY;
    for pair in fs.chunks(2) {
        let p = random_exponent(&g, &mut r, 0.3, 4.0)?;
        let rr = p.inf_value().min(1.0);
        let lhs = luxemburg_norm(&pair[0].add(&pair[1])?, &p, None)?.powf(rr);
        let rhs = luxemburg_norm(&pair[0], &p, None)?.powf(rr) + luxemburg_norm(&pair[1], &p, None)?.powf(rr);
        worst = worst.max((lhs - rhs) / rhs);
    }
    Ok(Outcome::at_most(worst, 1e-12, "max relative excess of ||f+g||^r over ||f||^r + ||g||^r, 100 pairs"))
}

fn holder_ratio(ctx: &Context) -> Result<Outcome> {
    let g = line();
    let mut r = rng(ctx.seed, 16);
    let fs = decaying_corpus(&g, ctx.seed, 20);
    let mut ratios = Vec::new();
    for pair in fs.chunks(2) {
        let p1 = random_exponent(&g, &mut r, 1.2, 4.0)?;
        let p2 = random_exponent(&g, &mut r, 1.2, 4.0)?;
        let p0 = combine_holder(&p1, &p2)?;
        let fg = pair[0].zip_with(&pair[1], |a, b| a * b)?;
        ratios.push(luxemburg_norm(&fg, &p0, None)? / (luxemburg_norm(&pair[0], &p1, None)? * luxemburg_norm(&pair[1], &p2, None)?));
    }
    Ok(Outcome::range(&ratios, "||fg||_{p0} / (||f||_{p1} ||g||_{p2})"))
}

fn constant_reduction(ctx: &Context) -> Result<Outcome> {
    let g = line();
    let mut worst = 0.0f64;
    for (k, f) in random_samples(&g, ctx.seed, 50, 20).into_iter().enumerate() {
        let pv = 0.5 + 0.25 * k as f64;
        let classical = (f.samples().iter().map(|v| v.norm().powf(pv)).sum::<f64>() * g.cell_volume()).powf(1.0 / pv);
        let n = luxemburg_norm(&f, &konst(&g, pv)?, None)?;
        worst = worst.max((n - classical).abs() / classical);
    }
    Ok(Outcome::at_most(worst, 1e-8, "max relative deviation from (h^n sum |f|^p)^(1/p)"))
}

/// Random sequences of four rough functions.
fn sequence_pairs(seed: u64, stream: u64, count: usize) -> Result<Vec<(DyadicSequence, DyadicSequence)>> {
    let g = line();
    let fs = random_samples(&g, seed, stream, 8 * count);
    fs.chunks(8)
        .map(|c| Ok((DyadicSequence::new(g, c[..4].to_vec())?, DyadicSequence::new(g, c[4..].to_vec())?)))
        .collect()
}

fn triangle_lp_lq(ctx: &Context) -> Result<Outcome> {
    let g = line();
    let mut r = rng(ctx.seed, 17);
    let mut worst = f64::NEG_INFINITY;
    for (a, b) in sequence_pairs(ctx.seed, 60, 100)? {
        let p = random_exponent(&g, &mut r, 0.4, 4.0)?;
        let q = random_exponent(&g, &mut r, 0.4, 4.0)?;
        let rr = p.inf_value().min(q.inf_value()).min(1.0);
        let q = QExponent::Finite(q);
        let lhs = lp_ell_q_norm(&a.add(&b)?, &p, &q)?.powf(rr);
        let rhs = lp_ell_q_norm(&a, &p, &q)?.powf(rr) + lp_ell_q_norm(&b, &p, &q)?.powf(rr);
        worst = worst.max((lhs - rhs) / rhs);
    }
    Ok(Outcome::at_most(worst, 1e-12, "max relative excess over 100 pairs"))
}

fn triangle_lq_lp(ctx: &Context) -> Result<Outcome> {
    let g = line();
    let mut r = rng(ctx.seed, 18);
    let mut worst = f64::NEG_INFINITY;
    for (a, b) in sequence_pairs(ctx.seed, 61, 100)? {
        let p = random_exponent(&g, &mut r, 0.4, 4.0)?;
        let q = random_exponent(&g, &mut r, 0.4, 4.0)?;
        let ratio = p.values().iter().zip(q.values()).map(|(x, y)| x / y).fold(f64::INFINITY, f64::min);
        let alpha = q.inf_value().min(1.0) * ratio.min(1.0);
        let q = QExponent::Finite(q);
        let lhs = ell_q_lp_norm(&a.add(&b)?, &p, &q)?.powf(alpha);
        let rhs = ell_q_lp_norm(&a, &p, &q)?.powf(alpha) + ell_q_lp_norm(&b, &p, &q)?.powf(alpha);
        worst = worst.max((lhs - rhs) / rhs);
    }
    Ok(Outcome::at_most(worst, 1e-12, "max relative excess over 100 pairs"))
}

fn mixed_unit_modular(ctx: &Context) -> Result<Outcome> {
    let g = line();
    let mut r = rng(ctx.seed, 19);
    let mut worst = 0.0f64;
    for (a, _) in sequence_pairs(ctx.seed, 62, 20)? {
        let p = random_exponent(&g, &mut r, 0.6, 4.0)?;
        let qf = random_exponent(&g, &mut r, 0.6, 4.0)?;
        let q = QExponent::Finite(qf.clone());
        let n = ell_q_lp_norm(&a, &p, &q)?;
        let unit = a.map(|_, e| e.scale(C64::new(1.0 / n, 0.0)))?;
        worst = worst.max((iterated_modular(&unit, &p, &qf, 1.0)?.value - 1.0).abs());
        // L^p(l^q): the modular of the pointwise l^q sum.
        let n = lp_ell_q_norm(&a, &p, &q)?;
        let sum: Vec<C64> = (0..g.len())
            .map(|i| {
                let qi = qf.values()[i];
                C64::new(a.entries().iter().map(|e| (e.samples()[i].norm() / n).powf(qi)).sum::<f64>().powf(1.0 / qi), 0.0)
            })
            .collect();
        worst = worst.max((modular(&GridFunction::new(g, sum, Domain::Spatial)?, &p, None)?.value - 1.0).abs());
    }
    Ok(Outcome::at_most(worst, 1e-6, "max |modular - 1| at the norm, both orders"))
}

/// Ratios `||{eta_{k,m} * f_k}|| / ||{f_k}||` for sequences of positive bumps.
fn eta_ratios(seed: u64, stream: u64, m: f64, norm: fn(&DyadicSequence, &ExponentField, &QExponent) -> Result<f64>) -> Result<Vec<f64>> {
    let g = Grid::new(1, 8.0, 256)?;
    let mut r = rng(seed, stream);
    let mut out = Vec::new();
    for chunk in decaying_corpus(&g, seed, 30).chunks(5) {
        let seq = DyadicSequence::new(g, chunk.iter().map(|f| f.map(|v| C64::new(v.norm(), 0.0))).collect())?;
        let conv = DyadicSequence::new(g, seq.entries().iter().enumerate().map(|(k, f)| eta_convolve(f, k as u32, m)).collect::<Result<_>>()?)?;
        let p = random_exponent(&g, &mut r, 1.2, 4.0)?;
        let q = QExponent::Finite(random_exponent(&g, &mut r, 1.2, 4.0)?);
        out.push(norm(&conv, &p, &q)? / norm(&seq, &p, &q)?);
    }
    Ok(out)
}

fn eta_lq_lp(ctx: &Context) -> Result<Outcome> {
    Ok(Outcome::range(&eta_ratios(ctx.seed, 20, 2.0, ell_q_lp_norm)?, "l^q(L^p) ratio, m = 2, six sequences"))
}

fn eta_lp_lq(ctx: &Context) -> Result<Outcome> {
    Ok(Outcome::range(&eta_ratios(ctx.seed, 21, 3.0, lp_ell_q_norm)?, "L^p(l^q) ratio, m = 3, six sequences"))
}
