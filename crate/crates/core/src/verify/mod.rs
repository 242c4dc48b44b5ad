//! The verification suite: every registered property check, run against a seeded corpus.
//!
//! Hard checks compare against a fixed tolerance. Regression checks measure a constant the
//! theory only bounds qualitatively and compare it with a committed band.

mod basic;
mod decomposition;
mod spectral;
mod trace;

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fixture bands shipped with the crate.
pub const DEFAULT_BANDS: &str = include_str!("../../fixtures/bands.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tolerance {
    /// measured ≤ bound
    AtMost { bound: f64 },
    /// measured ≥ bound
    AtLeast { bound: f64 },
    /// measured range inside [lo, hi]
    Band { lo: f64, hi: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_id: String,
    /// Plain-language name of the property being checked.
    pub anchor: String,
    pub hard: bool,
    pub status: Status,
    /// The largest measured value (the constant, for regressions).
    pub measured_constant: f64,
    /// The smallest measured value, for two-sided regressions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured_min: Option<f64>,
    pub tolerance: Tolerance,
    pub runtime_ms: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub hard_failures: usize,
    pub regression_failures: usize,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.hard_failures == 0 && self.regression_failures == 0
    }

    pub fn record(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.check_id == id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

/// Committed regression bands keyed by check id.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Bands(pub BTreeMap<String, Band>);

impl Bands {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::MissingFixture(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn shipped() -> Self {
        Self::parse(DEFAULT_BANDS).expect("shipped fixture bands parse")
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// What a check function reports.
#[derive(Clone, Debug)]
pub enum Outcome {
    Hard { measured: f64, tolerance: Tolerance, detail: String },
    Regression { min: f64, max: f64, detail: String },
}

impl Outcome {
    pub fn at_most(measured: f64, bound: f64, detail: impl Into<String>) -> Self {
        Outcome::Hard { measured, tolerance: Tolerance::AtMost { bound }, detail: detail.into() }
    }

    pub fn range(values: &[f64], detail: impl Into<String>) -> Self {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Outcome::Regression { min, max, detail: detail.into() }
    }
}

pub struct Context {
    pub seed: u64,
}

pub struct Check {
    pub id: &'static str,
    pub module: &'static str,
    pub anchor: &'static str,
    pub run: fn(&Context) -> Result<Outcome>,
}

pub fn registry() -> Vec<Check> {
    let mut all = Vec::new();
    all.extend(basic::checks());
    all.extend(spectral::checks());
    all.extend(decomposition::checks());
    all.extend(trace::checks());
    all.sort_by_key(|c| c.id);
    all
}

pub const SUITES: [&str; 9] = ["exponents", "grid", "lebesgue", "mixed_norms", "littlewood_paley", "maximal", "decomposition", "trace_ext", "all"];

fn selected(suite: &str) -> Result<Vec<Check>> {
    if !SUITES.contains(&suite) {
        return Err(Error::InvalidInput(format!("unknown suite `{suite}`; expected one of {}", SUITES.join(", "))));
    }
    Ok(registry().into_iter().filter(|c| suite == "all" || c.module == suite).collect())
}

/// Runs one check by id.
pub fn run_check(id: &str, seed: u64, bands: &Bands) -> Result<CheckRecord> {
    let check = registry().into_iter().find(|c| c.id == id).ok_or_else(|| Error::InvalidInput(format!("unknown check `{id}`")))?;
    evaluate(&check, &Context { seed }, bands)
}

fn evaluate(check: &Check, ctx: &Context, bands: &Bands) -> Result<CheckRecord> {
    let start = Instant::now();
    let outcome = (check.run)(ctx);
    let runtime_ms = start.elapsed().as_millis() as u64;
    let rec = |hard, status, measured_constant, measured_min, tolerance, detail| CheckRecord {
        check_id: check.id.to_string(),
        anchor: check.anchor.to_string(),
        hard,
        status,
        measured_constant,
        measured_min,
        tolerance,
        runtime_ms,
        detail,
    };
    let outcome = match outcome {
        Ok(o) => o,
        // A check that cannot complete counts as a hard failure.
        Err(e) => return Ok(rec(true, Status::Fail, f64::NAN, None, Tolerance::AtMost { bound: 0.0 }, format!("check did not complete: {e}"))),
    };
    Ok(match outcome {
        Outcome::Hard { measured, tolerance, detail } => {
            let ok = match tolerance {
                Tolerance::AtMost { bound } => measured <= bound,
                Tolerance::AtLeast { bound } => measured >= bound,
                Tolerance::Band { lo, hi } => measured >= lo && measured <= hi,
            };
            rec(true, if ok { Status::Pass } else { Status::Fail }, measured, None, tolerance, detail)
        }
        Outcome::Regression { min, max, detail } => {
            let band = bands.0.get(check.id).ok_or_else(|| Error::MissingFixture(format!("no committed band for `{}`", check.id)))?;
            let ok = min.is_finite() && max.is_finite() && min >= band.lo && max <= band.hi;
            let detail = if ok {
                detail
            } else {
                format!("measured [{min:e}, {max:e}] outside committed band [{:e}, {:e}]; {detail}", band.lo, band.hi)
            };
            rec(false, if ok { Status::Pass } else { Status::Fail }, max, Some(min), Tolerance::Band { lo: band.lo, hi: band.hi }, detail)
        }
    })
}

/// Runs every check of `suite` ("all" or a module name); records come back ordered by id.
pub fn verify(suite: &str, seed: u64, bands: &Bands) -> Result<VerificationReport> {
    let checks = selected(suite)?;
    let ctx = Context { seed };
    let checks: Vec<CheckRecord> = checks.par_iter().map(|c| evaluate(c, &ctx, bands)).collect::<Result<_>>()?;
    let hard_failures = checks.iter().filter(|c| c.hard && c.status == Status::Fail).count();
    let regression_failures = checks.iter().filter(|c| !c.hard && c.status == Status::Fail).count();
    Ok(VerificationReport { suite: suite.to_string(), seed, checks, hard_failures, regression_failures })
}

/// Measures every regression constant of `suite` and widens it to [0.9·min, 1.1·max].
pub fn measure_bands(suite: &str, seed: u64) -> Result<Bands> {
    let ctx = Context { seed };
    let mut out = BTreeMap::new();
    for c in selected(suite)? {
        let outcome = (c.run)(&ctx).map_err(|e| Error::NumericRange(format!("{}: {e}", c.id)))?;
        if let Outcome::Regression { min, max, .. } = outcome {
            out.insert(c.id.to_string(), Band { lo: widen(min, 0.9), hi: widen(max, 1.1) });
        }
    }
    Ok(Bands(out))
}

fn widen(v: f64, factor: f64) -> f64 {
    // Scale away from the measured value whatever its sign.
    if v >= 0.0 {
        v * factor
    } else {
        v / factor
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_are_unique_and_anchored() {
        let r = registry();
        let mut ids: Vec<&str> = r.iter().map(|c| c.id).collect();
        ids.dedup();
        assert_eq!(ids.len(), r.len());
        assert!(r.iter().all(|c| !c.anchor.is_empty() && c.id.starts_with(c.module)));
        assert!(r.iter().all(|c| SUITES.contains(&c.module)));
    }

    #[test]
    fn shipped_bands_cover_every_regression() {
        let bands = Bands::shipped();
        for (id, b) in &bands.0 {
            assert!(b.lo <= b.hi, "{id}");
            assert!(registry().iter().any(|c| c.id == id), "stale band {id}");
        }
    }

    #[test]
    fn tampered_band_fails_with_both_values() {
        let mut bands = Bands::shipped();
        let id = "lebesgue.holder_ratio";
        bands.0.insert(id.into(), Band { lo: 100.0, hi: 101.0 });
        let r = run_check(id, 0, &bands).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert!(r.detail.contains("outside committed band") && r.detail.contains("1e2"));
        assert!(run_check(id, 0, &Bands::default()).is_err());
        assert!(verify("nonsense", 0, &bands).is_err());
    }

    /// Rewrites the shipped fixture from a fresh measurement: `cargo test -p varbesov regenerate_bands -- --ignored`.
    #[test]
    #[ignore]
    fn regenerate_bands() {
        let bands = measure_bands("all", crate::corpus::DEFAULT_SEED).unwrap();
        let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/bands.json");
        std::fs::write(&path, bands.to_json().unwrap() + "\n").unwrap();
        let report = verify("all", crate::corpus::DEFAULT_SEED, &bands).unwrap();
        for c in &report.checks {
            eprintln!("{:<45} {:?} {:>8} ms  {:e}  {}", c.check_id, c.status, c.runtime_ms, c.measured_constant, c.detail);
        }
        assert!(report.passed());
    }
}
