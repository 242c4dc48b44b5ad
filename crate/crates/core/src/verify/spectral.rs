//! Littlewood–Paley norm and maximal-function checks.

use rand::Rng;

use super::{Check, Context, Outcome};
use crate::corpus::{bump_exponent, decaying_corpus, exponent_triples, rng, smooth_corpus, ExponentTriple};
use crate::error::Result;
use crate::exponents::{estimate_log_holder, ExponentField, ExponentRole};
use crate::grid::{multiplier_apply, Domain, Grid, GridFunction};
use crate::lebesgue::luxemburg_norm;
use crate::littlewood_paley::{besov_norm, bessel_potential, build_resolution, default_band_count, lp_decompose, norm_report, triebel_norm, Flavor, ResolutionOfUnity};
use crate::maximal::{default_radii, eta_convolve, eta_value, hl_maximal, weight_shift_constant};
use crate::mixed_norms::{lp_ell_q_norm, DyadicSequence, QExponent};
use crate::C64;

pub(super) fn checks() -> Vec<Check> {
    vec![
        Check { id: "littlewood_paley.constant_reduction", module: "littlewood_paley", anchor: "p = q = 2, s = 0 norms reduce to the Plancherel band sums", run: constant_reduction },
        Check { id: "littlewood_paley.sandwich_lower", module: "littlewood_paley", anchor: "B^s_{p,min(p,q)} embeds into F^s_{p,q}", run: sandwich_lower },
        Check { id: "littlewood_paley.sandwich_upper", module: "littlewood_paley", anchor: "F^s_{p,q} embeds into B^s_{p,max(p,q)}", run: sandwich_upper },
        Check { id: "littlewood_paley.q_monotone", module: "littlewood_paley", anchor: "norms decrease as q grows", run: q_monotone },
        Check { id: "littlewood_paley.bernstein", module: "littlewood_paley", anchor: "Bernstein-type L^p to L^q bound uniform in j", run: bernstein },
        Check { id: "littlewood_paley.sup_embedding", module: "littlewood_paley", anchor: "embedding into B^{s-n/p}_{inf,inf}", run: sup_embedding },
        Check { id: "littlewood_paley.lifting", module: "littlewood_paley", anchor: "(1 - Laplacian)^sigma shifts smoothness by 2 sigma", run: lifting },
        Check { id: "maximal.weight_shift", module: "maximal", anchor: "pointwise weight shift 2^{ks(x)} eta_{k,2m} <= c 2^{ks(y)} eta_{k,m}", run: weight_shift },
        Check { id: "maximal.band_limited_shape", module: "maximal", anchor: "band-limited f(x-z) is controlled by (eta * |f|^r)^{1/r}", run: band_limited_shape },
        Check { id: "maximal.vector", module: "maximal", anchor: "vector-valued maximal inequality on L^p(l^q)", run: vector_maximal },
    ]
}

fn line() -> Grid {
    Grid::new(1, 8.0, 512).expect("valid grid")
}

fn setup(g: &Grid) -> Result<ResolutionOfUnity> {
    build_resolution(g, default_band_count(g))
}

fn konst(g: &Grid, v: f64, role: ExponentRole) -> Result<ExponentField> {
    ExponentField::constant(*g, v, role)
}

/// Plancherel: `||theta_j(D) f||_2^2 = (pi/T)^n sum |theta_j F f|^2`.
fn plancherel_bands(f: &GridFunction, res: &ResolutionOfUnity) -> Result<Vec<f64>> {
    let spec = f.forward_transform()?;
    let dxi = f.grid().frequency_spacing().powi(f.grid().dim() as i32);
    Ok(res
        .theta()
        .iter()
        .map(|th| (dxi * spec.samples().iter().zip(th.samples()).map(|(a, t)| (a * t).norm_sqr()).sum::<f64>()).sqrt())
        .collect())
}

fn constant_reduction(ctx: &Context) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for g in [line(), Grid::new(2, 4.0, 64)?] {
        let res = setup(&g)?;
        let p = konst(&g, 2.0, ExponentRole::Integrability)?;
        let q = QExponent::Finite(p.clone());
        let s = konst(&g, 0.0, ExponentRole::Smoothness)?;
        for f in smooth_corpus(&g, ctx.seed, 5) {
            let bands = plancherel_bands(&f, &res)?;
            let total = bands.iter().map(|b| b * b).sum::<f64>().sqrt();
            for flavor in [Flavor::Besov, Flavor::Triebel] {
                let r = norm_report(&f, &p, &q, &s, &res, flavor)?;
                worst = worst.max((r.norm - total).abs() / total);
                for (a, b) in r.per_band_norms.iter().zip(&bands) {
                    if *b > 1e-8 * total {
                        worst = worst.max((a - b).abs() / b);
                    }
                }
            }
        }
    }
    Ok(Outcome::at_most(worst, 1e-6, "max relative deviation per band and in total, 5 functions on 1-D and 2-D grids"))
}

/// Decaying corpus crossed with smooth exponent triples on the 1-D grid.
fn norm_cases(seed: u64) -> Result<(Grid, ResolutionOfUnity, Vec<GridFunction>, Vec<ExponentTriple>)> {
    let g = line();
    let res = setup(&g)?;
    Ok((g, res, decaying_corpus(&g, seed, 4), exponent_triples(&g, seed, 3, 1.2, 4.0, 0.2)?))
}

fn pointwise_q(t: &ExponentTriple, f: fn(f64, f64) -> f64) -> Result<QExponent> {
    let q = t.q.finite().expect("finite q");
    Ok(QExponent::Finite(t.p.zip(q, ExponentRole::Integrability, f)?))
}

fn sandwich_lower(ctx: &Context) -> Result<Outcome> {
    let (_, res, fs, ts) = norm_cases(ctx.seed)?;
    let mut r = Vec::new();
    for t in &ts {
        let qmin = pointwise_q(t, f64::min)?;
        for f in &fs {
            r.push(triebel_norm(f, &t.p, &t.q, &t.s, &res)? / besov_norm(f, &t.p, &qmin, &t.s, &res)?);
        }
    }
    Ok(Outcome::range(&r, "||f||_F / ||f||_{B with q = min(p,q)}"))
}

fn sandwich_upper(ctx: &Context) -> Result<Outcome> {
    let (_, res, fs, ts) = norm_cases(ctx.seed)?;
    let mut r = Vec::new();
    for t in &ts {
        let qmax = pointwise_q(t, f64::max)?;
        for f in &fs {
            r.push(besov_norm(f, &t.p, &qmax, &t.s, &res)? / triebel_norm(f, &t.p, &t.q, &t.s, &res)?);
        }
    }
    Ok(Outcome::range(&r, "||f||_{B with q = max(p,q)} / ||f||_F"))
}

fn q_monotone(ctx: &Context) -> Result<Outcome> {
    let (_, res, fs, ts) = norm_cases(ctx.seed)?;
    let mut r = Vec::new();
    for t in &ts {
        let q1 = t.q.finite().expect("finite q").clone();
        let q2 = QExponent::Finite(q1.map(ExponentRole::Integrability, |v| v + 1.0)?);
        let q1 = QExponent::Finite(q1);
        for f in &fs {
            for flavor in [Flavor::Besov, Flavor::Triebel] {
                let a = norm_report(f, &t.p, &q2, &t.s, &res, flavor)?.norm;
                let b = norm_report(f, &t.p, &q1, &t.s, &res, flavor)?.norm;
                r.push(a / b);
            }
        }
    }
    Ok(Outcome::range(&r, "norm with q + 1 over norm with q, both flavors"))
}

fn bernstein(ctx: &Context) -> Result<Outcome> {
    let g = line();
    let res = setup(&g)?;
    let n = g.dim() as f64;
    let mut rr = rng(ctx.seed, 30);
    let mut ratios = Vec::new();
    for f in decaying_corpus(&g, ctx.seed, 4) {
        let p = bump_exponent(&g, ExponentRole::Integrability, rr.gen_range(1.2..1.6), 0.4, [rr.gen_range(-2.0..2.0), 0.0], 1.5)?;
        let q = p.map(ExponentRole::Integrability, |v| v + 1.5)?;
        let s = bump_exponent(&g, ExponentRole::Smoothness, 0.5, 0.3, [rr.gen_range(-2.0..2.0), 0.0], 1.0)?;
        let dec = lp_decompose(&f, &res)?;
        for (j, band) in dec.sequence.entries().iter().enumerate() {
            if band.max_abs() <= 1e-10 * f.max_abs() {
                continue;
            }
            let jf = j as f64;
            let lhs_fn = weighted(band, |i| 2f64.powf(jf * s.values()[i]));
            let rhs_fn = weighted(band, |i| 2f64.powf(jf * s.values()[i] + n * jf / p.values()[i] - n * jf / q.values()[i]));
            ratios.push(luxemburg_norm(&lhs_fn, &q, None)? / luxemburg_norm(&rhs_fn, &p, None)?);
        }
    }
    Ok(Outcome::range(&ratios, "||2^{js} phi_j||_q / ||2^{js + nj/p - nj/q} phi_j||_p over all bands j"))
}

fn weighted(f: &GridFunction, w: impl Fn(usize) -> f64) -> GridFunction {
    let v: Vec<C64> = f.samples().iter().enumerate().map(|(i, z)| z * w(i)).collect();
    GridFunction::new(*f.grid(), v, Domain::Spatial).expect("same length")
}

fn sup_embedding(ctx: &Context) -> Result<Outcome> {
    let (g, res, fs, ts) = norm_cases(ctx.seed)?;
    let n = g.dim() as f64;
    let mut r = Vec::new();
    for t in &ts {
        for f in &fs {
            let dec = lp_decompose(f, &res)?;
            let sup = dec
                .sequence
                .entries()
                .iter()
                .enumerate()
                .map(|(j, b)| weighted(b, |i| 2f64.powf(j as f64 * (t.s.values()[i] - n / t.p.values()[i]))).max_abs())
                .fold(0.0, f64::max);
            r.push(sup / besov_norm(f, &t.p, &t.q, &t.s, &res)?);
        }
    }
    Ok(Outcome::range(&r, "sup_j ||2^{j(s - n/p)} theta_j f||_inf / ||f||_B"))
}

fn lifting(ctx: &Context) -> Result<Outcome> {
    let (_, res, fs, ts) = norm_cases(ctx.seed)?;
    let mut r = Vec::new();
    for sigma in [0.5, 1.0] {
        for t in &ts {
            let shifted = t.s.map(ExponentRole::Smoothness, |v| v - 2.0 * sigma)?;
            for f in &fs {
                let lifted = bessel_potential(f, sigma)?;
                r.push(besov_norm(&lifted, &t.p, &t.q, &shifted, &res)? / besov_norm(f, &t.p, &t.q, &t.s, &res)?);
            }
        }
    }
    Ok(Outcome::range(&r, "||(1 - Laplacian)^sigma f||_{B^{s - 2 sigma}} / ||f||_{B^s}, sigma in {1/2, 1}"))
}

fn weight_shift(ctx: &Context) -> Result<Outcome> {
    let g = Grid::new(1, 4.0, 256)?;
    let mut rr = rng(ctx.seed, 31);
    let mut worst = 0.0f64;
    let k_max = 8;
    for _ in 0..3 {
        let s = bump_exponent(&g, ExponentRole::Smoothness, rr.gen_range(0.0..1.0), rr.gen_range(-1.0..1.0), [rr.gen_range(-1.0..1.0), 0.0], rr.gen_range(0.3..1.0))?;
        let c_log = estimate_log_holder(&s)?.c_local;
        let m = c_log + 1.0;
        let c = weight_shift_constant(c_log, m, k_max);
        for k in 0..=k_max {
            for i in (0..g.len()).step_by(4) {
                let x = g.point(i);
                for j in 0..g.len() {
                    let y = g.point(j);
                    let d = [x[0] - y[0], 0.0];
                    if d[0].abs() > 1.0 {
                        continue;
                    }
                    let lhs = 2f64.powf(k as f64 * s.values()[i]) * eta_value(1, k, 2.0 * m, d);
                    let rhs = 2f64.powf(k as f64 * s.values()[j]) * eta_value(1, k, m, d);
                    worst = worst.max(lhs / (c * rhs));
                }
            }
        }
    }
    Ok(Outcome::at_most(worst, 1.0, "max lhs / (c rhs) with c from the weight-shift scan, |x - y| <= 1, k <= 8"))
}

fn band_limited_shape(ctx: &Context) -> Result<Outcome> {
    let g = Grid::new(1, 8.0, 256)?;
    let mut ratios = Vec::new();
    for (k, f) in decaying_corpus(&g, ctx.seed, 4).into_iter().enumerate() {
        let nu = (k % 3) as u32 + 1;
        let cut = 2f64.powi(nu as i32 + 1);
        let low = multiplier_apply(&GridFunction::spectral_from_fn(g, |xi| C64::new(if xi[0].abs() <= cut { 1.0 } else { 0.0 }, 0.0)), &f)?;
        for r in [0.5, 1.0] {
            let m = 1.0 / r + 1.0;
            let pow = low.map(|v| C64::new(v.norm().powf(r), 0.0));
            let avg: Vec<f64> = eta_convolve(&pow, nu, m)?.samples().iter().map(|v| v.re.max(0.0).powf(1.0 / r)).collect();
            let n = g.samples_per_axis();
            let mut worst = 0.0f64;
            for i in (0..n).step_by(8) {
                for zk in 0..n {
                    let z = g.signed_index(zk) as f64 * g.spacing();
                    let v = low.samples()[(i + n - zk) % n].norm() * (1.0 + 2f64.powi(nu as i32) * z.abs()).powf(-m / r);
                    worst = worst.max(v / avg[i]);
                }
            }
            ratios.push(worst);
        }
    }
    Ok(Outcome::range(&ratios, "sup over sampled (x, z) of |f(x - z)| (1 + |2^nu z|)^{-m/r} / (eta_{nu,m} * |f|^r)^{1/r}(x)"))
}

fn vector_maximal(ctx: &Context) -> Result<Outcome> {
    let g = Grid::new(1, 8.0, 256)?;
    let radii = default_radii(&g);
    let mut rr = rng(ctx.seed, 32);
    let mut ratios = Vec::new();
    for chunk in decaying_corpus(&g, ctx.seed, 12).chunks(4) {
        let seq = DyadicSequence::new(g, chunk.to_vec())?;
        let max_seq = DyadicSequence::new(g, chunk.iter().map(|f| hl_maximal(f, &radii)).collect::<Result<_>>()?)?;
        let p = bump_exponent(&g, ExponentRole::Integrability, rr.gen_range(1.3..2.0), 1.0, [rr.gen_range(-2.0..2.0), 0.0], 1.5)?;
        for qv in [1.5, 2.0, 4.0] {
            let q = QExponent::Finite(konst(&g, qv, ExponentRole::Integrability)?);
            ratios.push(lp_ell_q_norm(&max_seq, &p, &q)? / lp_ell_q_norm(&seq, &p, &q)?);
        }
    }
    Ok(Outcome::range(&ratios, "||{M f_k}||_{L^p(l^q)} / ||{f_k}||_{L^p(l^q)}, q in {1.5, 2, 4}"))
}
