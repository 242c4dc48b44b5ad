//! Config-driven dispatch: one JSON [`RunConfig`] in, one JSON [`RunReport`] out, plus
//! any artifact files the operation writes.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::corpus::{decaying_corpus, smooth_corpus};
use crate::decomposition::{
    build_kappa, lattice_samples, quark_analyze, quark_norm, quark_synthesize, seq_norm, CoefficientArray, QuarkBasis, QuarkCoefficients, DEFAULT_BETA_MAX, DEFAULT_RHO,
};
use crate::error::{Error, Result};
use crate::exponents::{estimate_log_holder, sample_expr, sigma_of, ExponentField, ExponentRole, ExponentSpec};
use crate::grid::{Domain, Grid, GridFunction, GridSpec};
use crate::lebesgue::luxemburg_report;
use crate::littlewood_paley::{build_resolution, default_band_count, lp_decompose, norm_report, Flavor};
use crate::maximal::{default_radii, hl_maximal, hl_maximal_r};
use crate::mixed_norms::{ell_q_lp_norm, lp_ell_q_norm, QExponent};
use crate::tolerances::LIFT_EPSILON;
use crate::trace_ext::lift::upper_mass_ratio;
use crate::trace_ext::{build_lift_symbol, coextend, ext_n, lift_apply, trace, utrace, ExtParams, ExtPath, HalfSpaceFunction, HestenesVariant};
use crate::C64;

pub const OPERATIONS: [&str; 16] = [
    "norm.lp",
    "norm.mixed",
    "norm.besov",
    "norm.triebel",
    "norm.sequence",
    "norm.quark",
    "quark.analyze",
    "quark.synthesize",
    "trace",
    "utrace",
    "coextend",
    "extend",
    "lift",
    "maximal",
    "exponents.check",
    "grid.sample",
];

/// Where a grid function comes from. Exactly one field is set.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    /// Closed form in `x`, `y` and `r = |(x, y)|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    /// A function written by `GridFunction::save`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    /// A 1-D CSV column (`re` or `re,im`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    /// Member `index` of the seeded corpus `smooth` or `decaying`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corpus: Option<String>,
    #[serde(default)]
    pub index: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentSpecs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<ExponentSpec>,
    /// `{"expr": "inf"}` selects q = ∞.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<ExponentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<ExponentSpec>,
}

/// Operation parameters; each operation reads the ones it needs and ignores the rest.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flavor: Option<Flavor>,
    /// `lq_lp` (Besov order, the default) or `lp_lq`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<u32>,
    /// JSON-lines coefficient file (sequence or quark records).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<ExtPath>,
    /// Reflection order M.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reflection_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<HestenesVariant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Boundary data `g_0, g_1, …` for `coextend`, on the (1-D) config grid.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary: Vec<FunctionSpec>,
    /// The L of the co-extension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    /// Power 0 < r ≤ 1 for `(M|f|^r)^{1/r}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridSpec,
    #[serde(default)]
    pub exponents: ExponentSpecs,
    pub operation: String,
    #[serde(default)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<FunctionSpec>,
    /// Artifact written by the operation (grid function or coefficient file).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    /// Parses a config, reporting the offending field path on failure.
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub operation: String,
    pub seed: u64,
    pub grid: GridSpec,
    /// False when the operation finished but an invariant it checks did not hold.
    pub ok: bool,
    pub result: Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub artifacts: Vec<PathBuf>,
}

/// Prefixes an error with the config field it came from.
fn at(field: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::InvalidInput(m) | Error::OutOfRange(m) | Error::Format(m) | Error::GridMismatch(m) => Error::InvalidInput(format!("{field}: {m}")),
        other => Error::InvalidInput(format!("{field}: {other}")),
    }
}

fn missing(field: &str, op: &str) -> Error {
    Error::InvalidInput(format!("{field}: required by `{op}`"))
}

fn load_function(spec: &FunctionSpec, grid: &Grid, seed: u64, field: &str) -> Result<GridFunction> {
    let set = [spec.expr.is_some(), spec.file.is_some(), spec.csv.is_some(), spec.corpus.is_some()].iter().filter(|b| **b).count();
    if set != 1 {
        return Err(Error::InvalidInput(format!("{field}: needs exactly one of `expr`, `file`, `csv`, `corpus`")));
    }
    let f = if let Some(e) = &spec.expr {
        real(grid, sample_expr(grid, e).map_err(at(&format!("{field}.expr")))?)?
    } else if let Some(p) = &spec.file {
        GridFunction::load(p).map_err(at(&format!("{field}.file")))?
    } else if let Some(p) = &spec.csv {
        GridFunction::from_csv(p, grid.half_extent()).map_err(at(&format!("{field}.csv")))?
    } else {
        let name = spec.corpus.as_deref().unwrap_or_default();
        let members = match name {
            "smooth" => smooth_corpus(grid, seed, spec.index + 1),
            "decaying" => decaying_corpus(grid, seed, spec.index + 1),
            other => return Err(Error::InvalidInput(format!("{field}.corpus: unknown corpus `{other}`; expected smooth or decaying"))),
        };
        members.into_iter().nth(spec.index).expect("corpus has index + 1 members")
    };
    f.grid().check_same(grid).map_err(at(field))?;
    f.expect_domain(Domain::Spatial).map_err(at(field))?;
    Ok(f)
}

fn real(grid: &Grid, v: Vec<f64>) -> Result<GridFunction> {
    GridFunction::new(*grid, v.into_iter().map(|x| C64::new(x, 0.0)).collect(), Domain::Spatial)
}

struct Exponents {
    p: Option<ExponentField>,
    q: Option<QExponent>,
    s: Option<ExponentField>,
}

fn build_exponents(specs: &ExponentSpecs, grid: &Grid) -> Result<Exponents> {
    let p = specs.p.as_ref().map(|e| e.build(grid, ExponentRole::Integrability).map_err(at("exponents.p"))).transpose()?;
    let q = match &specs.q {
        Some(e) if e.expr.as_deref().map(str::trim) == Some("inf") => Some(QExponent::Infinity),
        Some(e) => Some(QExponent::Finite(e.build(grid, ExponentRole::Integrability).map_err(at("exponents.q"))?)),
        None => None,
    };
    let s = specs.s.as_ref().map(|e| e.build(grid, ExponentRole::Smoothness).map_err(at("exponents.s"))).transpose()?;
    Ok(Exponents { p, q, s })
}

impl Exponents {
    fn p(&self, op: &str) -> Result<&ExponentField> {
        self.p.as_ref().ok_or_else(|| missing("exponents.p", op))
    }

    fn q(&self, op: &str) -> Result<&QExponent> {
        self.q.as_ref().ok_or_else(|| missing("exponents.q", op))
    }

    fn s(&self, op: &str) -> Result<&ExponentField> {
        self.s.as_ref().ok_or_else(|| missing("exponents.s", op))
    }
}

fn ext_params(p: &Params) -> ExtParams {
    let mut e = ExtParams::default();
    if let Some(m) = p.reflection_order {
        e.order = m;
    }
    if let Some(v) = p.variant {
        e.variant = v;
    }
    e.nu_max = p.nu_max.or(e.nu_max);
    e.rho = p.rho.unwrap_or(e.rho);
    e.beta_max = p.beta_max.unwrap_or(e.beta_max);
    e.epsilon = p.epsilon.unwrap_or(e.epsilon);
    e.sigma = p.sigma.or(e.sigma);
    e
}

/// Sequence records `{"nu": ν, "m": [..], "re": .., "im": ..}`, one per line.
#[derive(Serialize, Deserialize)]
struct SequenceRecord {
    nu: u32,
    m: Vec<i64>,
    re: f64,
    #[serde(default)]
    im: f64,
}

fn load_sequence(path: &Path, dim: usize) -> Result<CoefficientArray> {
    let text = std::fs::read_to_string(path)?;
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let rec: SequenceRecord = serde_json::from_str(line).map_err(|e| Error::Format(format!("line {}: {e}", lineno + 1)))?;
        if rec.m.len() != dim {
            return Err(Error::Format(format!("line {}: m has {} entries, grid dimension is {dim}", lineno + 1, rec.m.len())));
        }
        let mut m = [0i64; 2];
        m[..dim].copy_from_slice(&rec.m);
        entries.push((rec.nu, m, C64::new(rec.re, rec.im)));
    }
    CoefficientArray::from_entries(dim, &entries)
}

fn write_function(f: &GridFunction, out: &Option<PathBuf>, artifacts: &mut Vec<PathBuf>) -> Result<()> {
    if let Some(p) = out {
        f.save(p).map_err(at("output"))?;
        artifacts.push(p.clone());
    }
    Ok(())
}

/// Executes `config`. Same config and seed give byte-identical reports and artifacts.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    let grid = Grid::from_spec(&config.grid).map_err(at("grid"))?;
    let op = config.operation.as_str();
    if !OPERATIONS.contains(&op) {
        return Err(Error::InvalidInput(format!("operation: unknown `{op}`; expected one of {}", OPERATIONS.join(", "))));
    }
    let ex = build_exponents(&config.exponents, &grid)?;
    let prm = &config.params;
    let input = || -> Result<GridFunction> {
        let spec = config.input.as_ref().ok_or_else(|| missing("input", op))?;
        load_function(spec, &grid, config.seed, "input")
    };
    let resolution = || build_resolution(&grid, prm.j_max.unwrap_or_else(|| default_band_count(&grid))).map_err(at("params.j_max"));
    let basis = |dim: usize| QuarkBasis::new(dim, prm.rho.unwrap_or(DEFAULT_RHO), prm.beta_max.unwrap_or(DEFAULT_BETA_MAX)).map_err(at("params.beta_max"));
    let mut artifacts = Vec::new();
    let mut ok = true;

    let result = match op {
        "norm.lp" => serde_json::to_value(luxemburg_report(&input()?, ex.p(op)?, None)?)?,
        "norm.mixed" => {
            let seq = lp_decompose(&input()?, &resolution()?)?.sequence;
            let (p, q) = (ex.p(op)?, ex.q(op)?);
            let order = prm.order.as_deref().unwrap_or("lq_lp");
            let norm = match order {
                "lq_lp" => ell_q_lp_norm(&seq, p, q)?,
                "lp_lq" => lp_ell_q_norm(&seq, p, q)?,
                other => return Err(Error::InvalidInput(format!("params.order: `{other}`; expected lq_lp or lp_lq"))),
            };
            json!({ "norm": norm, "order": order, "bands": seq.len() })
        }
        "norm.besov" | "norm.triebel" => {
            let flavor = if op == "norm.besov" { Flavor::Besov } else { Flavor::Triebel };
            serde_json::to_value(norm_report(&input()?, ex.p(op)?, ex.q(op)?, ex.s(op)?, &resolution()?, flavor)?)?
        }
        "norm.sequence" => {
            let lam = match &prm.coefficients {
                Some(path) => load_sequence(path, grid.dim()).map_err(at("params.coefficients"))?,
                None => {
                    // φ-transform samples of the input on levels 0..=ν_max.
                    let f = input()?;
                    let mut lam = CoefficientArray::new(grid.dim());
                    for nu in 0..=prm.nu_max.unwrap_or(3) {
                        lam = lam.add(&lattice_samples(&f, nu).map_err(at("params.nu_max"))?)?;
                    }
                    lam
                }
            };
            let flavor = prm.flavor.unwrap_or(Flavor::Besov);
            json!({ "norm": seq_norm(&lam, ex.p(op)?, ex.q(op)?, ex.s(op)?, flavor)?, "flavor": flavor, "entries": lam.entries().len() })
        }
        "norm.quark" | "quark.analyze" => {
            let f = input()?;
            let nu_max = prm.nu_max.unwrap_or(3);
            let b = basis(grid.dim())?;
            let lam = quark_analyze(&f, &b, &build_kappa(&grid, 0)?, &resolution()?, nu_max).map_err(at("params.nu_max"))?;
            if op == "norm.quark" {
                serde_json::to_value(quark_norm(&lam, ex.p(op)?, ex.q(op)?, ex.s(op)?, prm.flavor.unwrap_or(Flavor::Besov))?)?
            } else {
                let back = quark_synthesize(&lam, &b, &grid)?;
                let err = back.sub(&f)?.max_abs() / f.max_abs().max(f64::MIN_POSITIVE);
                if let Some(p) = &config.output {
                    lam.save(p).map_err(at("output"))?;
                    artifacts.push(p.clone());
                }
                json!({ "entries": lam.entries().len(), "max_abs": lam.max_abs(), "nu_max": nu_max, "beta_max": b.beta_max, "round_trip_error": err })
            }
        }
        "quark.synthesize" => {
            let path = prm.coefficients.as_ref().ok_or_else(|| missing("params.coefficients", op))?;
            let lam = QuarkCoefficients::load(path, prm.rho.unwrap_or(DEFAULT_RHO)).map_err(at("params.coefficients"))?;
            let b = QuarkBasis::new(lam.dim(), lam.rho(), lam.beta_max().max(prm.beta_max.unwrap_or(0)))?;
            let f = quark_synthesize(&lam, &b, &grid)?;
            write_function(&f, &config.output, &mut artifacts)?;
            json!({ "entries": lam.entries().len(), "max_abs": f.max_abs() })
        }
        "trace" => {
            let t = trace(&input()?)?;
            write_function(&t, &config.output, &mut artifacts)?;
            json!({ "max_abs": t.max_abs(), "samples": t.samples().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>() })
        }
        "utrace" => {
            let u = utrace(&HalfSpaceFunction::restrict(&input()?)?, &ext_params(prm))?;
            ok = u.spread <= crate::tolerances::UTRACE_SPREAD;
            let per_path: Vec<Value> = u.per_path.iter().map(|(p, t)| json!({ "path": p, "max_abs": t.max_abs() })).collect();
            json!({ "spread": u.spread, "tolerance": crate::tolerances::UTRACE_SPREAD, "per_path": per_path })
        }
        "coextend" => {
            if prm.boundary.is_empty() {
                return Err(missing("params.boundary", op));
            }
            // The data lives on the boundary; a 2-D grid stands for its x_n = 0 slice.
            let bgrid = if grid.dim() == 2 { grid.with_dim(1)? } else { grid };
            let g: Vec<GridFunction> = prm
                .boundary
                .iter()
                .enumerate()
                .map(|(i, spec)| load_function(spec, &bgrid, config.seed, &format!("params.boundary[{i}]")))
                .collect::<Result<_>>()?;
            let nu_max = prm.nu_max.unwrap_or(3);
            let res = build_resolution(&bgrid, prm.j_max.unwrap_or(nu_max as usize))?;
            let co = coextend(&g, prm.l.unwrap_or(1), &basis(1)?, &build_kappa(&bgrid, 0)?, &res, nu_max)?;
            let mut errors = Vec::new();
            for (l, target) in g.iter().enumerate() {
                let t = trace(&co.normal_derivative(l as u32)?)?;
                errors.push(t.sub(target)?.max_abs() / target.max_abs().max(f64::MIN_POSITIVE));
            }
            write_function(&co.function()?, &config.output, &mut artifacts)?;
            json!({ "trace_errors": errors, "k": co.k() })
        }
        "extend" => {
            let f = HalfSpaceFunction::restrict(&input()?)?;
            let path = prm.path.unwrap_or(ExtPath::Smooth);
            let e = ext_n(&f, path, &ext_params(prm), None)?;
            write_function(&e.function, &config.output, &mut artifacts)?;
            json!({
                "path": path,
                "restriction_error": e.restriction_error,
                "truncated_points": e.truncated_points,
                "sigma": e.sigma,
                "epsilon": e.epsilon,
            })
        }
        "lift" => {
            let f = input()?;
            let sigma = prm.sigma.ok_or_else(|| missing("params.sigma", op))?;
            let sym = build_lift_symbol(sigma, prm.epsilon.unwrap_or(LIFT_EPSILON), &grid).map_err(at("params.epsilon"))?;
            let out = lift_apply(&f, &sym)?;
            write_function(&out, &config.output, &mut artifacts)?;
            json!({ "sigma": sigma, "epsilon": sym.epsilon, "halvings": sym.halvings, "upper_mass_ratio": upper_mass_ratio(&out, 0.1), "max_abs": out.max_abs() })
        }
        "maximal" => {
            let f = input()?;
            let radii = prm.radii.clone().unwrap_or_else(|| default_radii(&grid));
            let m = match prm.r {
                Some(r) => hl_maximal_r(&f, r, &radii).map_err(at("params.r"))?,
                None => hl_maximal(&f, &radii).map_err(at("params.radii"))?,
            };
            write_function(&m, &config.output, &mut artifacts)?;
            let mut v = json!({ "max_abs": m.max_abs(), "radii": radii.len() });
            if let Some(p) = &ex.p {
                v["lp_ratio"] = json!(luxemburg_report(&m, p, None)?.norm / luxemburg_report(&f, p, None)?.norm);
            }
            v
        }
        "exponents.check" => {
            let p = ex.p(op)?;
            let holder = estimate_log_holder(p)?;
            let sigma = sigma_of(p, ex.q.as_ref().and_then(QExponent::finite))?;
            ok = holder.admissible;
            let mut v = json!({ "p_inf": p.inf_value(), "p_sup": p.sup_value(), "log_holder": holder, "sigma_sup": sigma.sup() });
            if let Some(s) = &ex.s {
                v["s_inf"] = json!(s.inf_value());
                v["s_sup"] = json!(s.sup_value());
            }
            v
        }
        "grid.sample" => {
            let f = input()?;
            write_function(&f, &config.output, &mut artifacts)?;
            json!({ "max_abs": f.max_abs(), "l2_norm": f.l2_norm() })
        }
        _ => unreachable!("operation list checked above"),
    };
    Ok(RunReport { operation: op.to_string(), seed: config.seed, grid: config.grid, ok, result, artifacts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lebesgue::luxemburg_norm;

    fn config(op: &str) -> RunConfig {
        RunConfig {
            grid: GridSpec { dim: 1, half_extent: 4.0, samples_per_axis: 128 },
            exponents: ExponentSpecs { p: Some(ExponentSpec { expr: Some("2 + 0.5*exp(-x^2)".into()), samples: None, grid: None, limit: Some(2.0) }), q: None, s: None },
            operation: op.into(),
            params: Params::default(),
            input: Some(FunctionSpec { expr: Some("exp(-x^2)".into()), ..Default::default() }),
            output: None,
            seed: 0,
        }
    }

    #[test]
    fn lp_dispatch_matches_direct_call() {
        let r = run(&config("norm.lp")).unwrap();
        let g = Grid::new(1, 4.0, 128).unwrap();
        let f = GridFunction::from_real_fn(g, |x| (-x[0] * x[0]).exp());
        let p = ExponentField::from_fn(g, ExponentRole::Integrability, |x| 2.0 + 0.5 * (-x[0] * x[0]).exp()).unwrap();
        assert_eq!(r.result["norm"].as_f64().unwrap(), luxemburg_norm(&f, &p, None).unwrap());
        assert!(r.ok);
    }

    #[test]
    fn validation_names_the_field() {
        let mut c = config("norm.lp");
        c.exponents.p = Some(ExponentSpec { expr: Some("0*x".into()), samples: None, grid: None, limit: None });
        let e = run(&c).unwrap_err();
        assert!(e.to_string().contains("exponents.p"), "{e}");
        let e = run(&config("norm.besov")).unwrap_err();
        assert!(e.to_string().contains("exponents.q"), "{e}");
        assert!(RunConfig::parse(r#"{"grid": {"dim": 1, "half_extent": 1, "samples_per_axis": 8}, "operation": "trace", "bogus": 1}"#).is_err());
        let mut c = config("nope");
        c.input = None;
        assert!(run(&c).unwrap_err().to_string().contains("operation"));
    }

    #[test]
    fn repeated_runs_are_identical() {
        let mut c = config("norm.besov");
        c.exponents.q = Some(ExponentSpec { expr: Some("inf".into()), samples: None, grid: None, limit: None });
        c.exponents.s = Some(ExponentSpec { expr: Some("0.5".into()), samples: None, grid: None, limit: None });
        c.input = Some(FunctionSpec { corpus: Some("decaying".into()), index: 2, ..Default::default() });
        let a = serde_json::to_string(&run(&c).unwrap()).unwrap();
        let b = serde_json::to_string(&run(&c).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sequence_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lam.jsonl");
        std::fs::write(&path, "{\"nu\": 0, \"m\": [1], \"re\": 2.0}\n{\"nu\": 2, \"m\": [-3], \"re\": 0.5, \"im\": 1.0}\n").unwrap();
        let mut c = config("norm.sequence");
        c.params.coefficients = Some(path);
        c.exponents.q = Some(ExponentSpec { expr: Some("2".into()), samples: None, grid: None, limit: None });
        c.exponents.s = Some(ExponentSpec { expr: Some("0".into()), samples: None, grid: None, limit: None });
        let r = run(&c).unwrap();
        assert_eq!(r.result["entries"], 2);
        assert!(r.result["norm"].as_f64().unwrap() > 0.0);
    }
}
