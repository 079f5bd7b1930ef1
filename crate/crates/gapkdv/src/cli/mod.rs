//! Command implementations behind the `gapkdv` binary.
//!
//! Each command loads and validates a [`RunConfig`], applies command-line
//! overrides, computes, and writes its artifacts to the output directory.
//! Failures are mapped onto exit codes by [`Outcome`].

pub mod battery;
pub mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::abel_flow::{AbelMap, FlowState};
use crate::abelian::{b_period_check, widom_sum_and_entropy, Domain, GreenPole, ThetaK};
use crate::band_geometry::DivisorPoint;
use crate::error::{Error, Result};
use crate::kdv::potential_grid;
use crate::spectral::{default_samples, geometric_family, truncation_study};

pub use battery::CheckRecord;
pub use config::{LatticeSpec, RunConfig, Validated, CONFIG_VERSION};

/// The four commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Geometry,
    Potential,
    Verify,
    Converge,
}

/// Command-line values that take precedence over the configuration file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub k: Option<usize>,
}

/// How a command ended.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Pass,
    Validation(String),
    Numerical(String),
    VerificationFailed(Vec<String>),
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Validation(_) => 1,
            Outcome::Numerical(_) => 2,
            Outcome::VerificationFailed(_) => 3,
        }
    }

    fn from_error(e: Error) -> Self {
        if e.is_validation() {
            Outcome::Validation(e.to_string())
        } else {
            Outcome::Numerical(e.to_string())
        }
    }
}

/// Where and on what the run happened. Deliberately free of timestamps so
/// that repeated runs produce identical files.
#[derive(Debug, Clone, Serialize)]
pub struct Environment {
    pub crate_version: &'static str,
    pub os: &'static str,
    pub arch: &'static str,
}

impl Environment {
    pub fn current() -> Self {
        Environment {
            crate_version: env!("CARGO_PKG_VERSION"),
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
        }
    }
}

/// The result of `verify`.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub records: Vec<CheckRecord>,
    pub config_hash: String,
    pub environment: Environment,
}

/// Loads the configuration and applies the overrides.
pub fn resolve_config(o: &Overrides) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(o.config.as_deref())?;
    if let Some(out) = &o.out {
        cfg.output.dir = out.clone();
    }
    if let Some(tol) = o.tol {
        cfg.tolerances = cfg.tolerances.with_quadrature(tol);
    }
    if let Some(seed) = o.seed {
        cfg.seed = seed;
    }
    if let Some(k) = o.k {
        cfg.k = k;
    }
    Ok(cfg)
}

/// Runs one command to completion and reports how it ended.
pub fn execute(cmd: Command, o: &Overrides) -> Outcome {
    let run = || -> Result<Outcome> {
        let cfg = resolve_config(o)?;
        let v = cfg.validate()?;
        std::fs::create_dir_all(&cfg.output.dir)
            .map_err(|e| Error::Validation(format!("cannot create output directory {}: {e}", cfg.output.dir.display())))?;
        match cmd {
            Command::Geometry => run_geometry(&cfg, &v),
            Command::Potential => run_potential(&cfg, &v),
            Command::Verify => run_verify(&cfg, &v),
            Command::Converge => run_converge(&cfg, &v),
        }
    };
    run().unwrap_or_else(Outcome::from_error)
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::Numerical(format!("cannot write {}: {e}", path.display())))
}

fn write_json(dir: &Path, name: &str, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Numerical(format!("cannot serialise {name}: {e}")))?;
    write_file(dir, name, &text)
}

/// Comb parameters, frequencies, harmonic measures, B-periods and the
/// divisor's character, written to `geometry.json`.
pub fn geometry_report(cfg: &RunConfig, v: &Validated) -> Result<Value> {
    let domain = Domain::with_tolerances(v.bands.clone(), cfg.tolerances)?;
    let martin = ThetaK::build(&domain, 0)?;
    let theta_k = ThetaK::build(&domain, cfg.k)?;
    let map = AbelMap::build(&domain, &martin)?;
    let widom = widom_sum_and_entropy(&domain, &martin)?;
    let harmonic = GreenPole::harmonic_measures(&domain, -1.0)?;
    let b_rows = if cfg.k > 0 {
        Some(b_period_check(&domain, &theta_k)?)
    } else {
        None
    };
    Ok(json!({
        "gaps": v.bands.gaps().iter().map(|g| (g.a, g.b)).collect::<Vec<_>>(),
        "critical_points": martin.critical_points,
        "frequencies": martin.frequencies,
        "needle_heights": martin.needle_heights,
        "flow_order": cfg.k,
        "flow_frequencies": theta_k.frequencies,
        "gap_residuals": { "martin": martin.gap_residuals, "flow": theta_k.gap_residuals },
        "widom_sum": widom.widom_sum,
        "entropy": widom.entropy,
        "harmonic_measures_at_minus_one": harmonic,
        "b_periods": b_rows,
        "divisor": v.divisor.points(),
        "divisor_character": map.character(&v.divisor)?,
        "config_hash": cfg.hash(),
        "environment": Environment::current(),
    }))
}

fn run_geometry(cfg: &RunConfig, v: &Validated) -> Result<Outcome> {
    let report = geometry_report(cfg, v)?;
    write_json(&cfg.output.dir, "geometry.json", &report)?;
    Ok(Outcome::Pass)
}

/// `x,t,V` rows with 17 significant digits; rows whose inversion failed
/// carry `NaN`.
pub fn potential_csv(xs: &[f64], ts: &[f64], v: &[Vec<f64>]) -> String {
    let mut out = String::from("x,t,V\n");
    for (ix, x) in xs.iter().enumerate() {
        for (it, t) in ts.iter().enumerate() {
            let _ = writeln!(out, "{x:.16e},{t:.16e},{:.16e}", v[ix][it]);
        }
    }
    out
}

fn run_potential(cfg: &RunConfig, v: &Validated) -> Result<Outcome> {
    let domain = Domain::with_tolerances(v.bands.clone(), cfg.tolerances)?;
    let martin = ThetaK::build(&domain, 0)?;
    let theta_k = ThetaK::build(&domain, cfg.k)?;
    let map = AbelMap::build(&domain, &martin)?;
    let flow = FlowState::new(&map, &v.divisor, &martin, &theta_k)?;
    let grid = potential_grid(&map, &flow, &cfg.x.points(), &cfg.t.points());
    write_file(&cfg.output.dir, "potential.csv", &potential_csv(&grid.x, &grid.t, &grid.v))?;
    let divisors: Vec<Value> = grid
        .x
        .iter()
        .enumerate()
        .flat_map(|(ix, &x)| {
            let grid = &grid;
            grid.t.iter().enumerate().map(move |(it, &t)| {
                json!({
                    "x": x,
                    "t": t,
                    "divisor": grid.divisors[ix][it].as_ref().map(|d| d.points().to_vec()),
                    "character": grid.characters[ix][it],
                })
            })
        })
        .collect();
    let partial = !grid.is_complete();
    write_json(
        &cfg.output.dir,
        "potential.json",
        &json!({
            "flow": grid.flow,
            "lattice": divisors,
            "failures": grid.failures,
            "partial": partial,
            "config_hash": cfg.hash(),
            "environment": Environment::current(),
        }),
    )?;
    if partial {
        return Ok(Outcome::Numerical(format!(
            "{} lattice points failed to invert",
            grid.failures.len()
        )));
    }
    Ok(Outcome::Pass)
}

/// The full battery on the configured band set.
pub fn verify_report(cfg: &RunConfig, v: &Validated) -> VerifyReport {
    let records = battery::full_battery(&v.bands, &v.divisor, cfg.seed, cfg.tolerances);
    VerifyReport {
        pass: records.iter().all(|r| r.pass),
        records,
        config_hash: cfg.hash(),
        environment: Environment::current(),
    }
}

fn run_verify(cfg: &RunConfig, v: &Validated) -> Result<Outcome> {
    let report = verify_report(cfg, v);
    write_json(&cfg.output.dir, "verify.json", &report)?;
    if report.pass {
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::VerificationFailed(
            report.records.iter().filter(|r| !r.pass).map(|r| r.name.clone()).collect(),
        ))
    }
}

/// Gaps and divisor for `converge`: the configured ones when there are at
/// least three gaps, otherwise the first six gaps of the geometric family.
pub fn convergence_family(v: &Validated) -> (Vec<(f64, f64)>, Vec<DivisorPoint>) {
    if v.bands.len() >= 3 {
        (v.bands.gaps().iter().map(|g| (g.a, g.b)).collect(), v.divisor.points().to_vec())
    } else {
        geometric_family(6)
    }
}

fn run_converge(cfg: &RunConfig, v: &Validated) -> Result<Outcome> {
    let (gaps, divisor) = convergence_family(v);
    let study = truncation_study(&gaps, &divisor, &default_samples(), cfg.tolerances)?;
    let mut csv = String::from("level,difference,ratio\n");
    for (i, (n, d)) in study.levels.iter().zip(&study.differences).enumerate() {
        let ratio = if i == 0 {
            String::new()
        } else {
            format!("{:.16e}", study.ratios[i - 1])
        };
        let _ = writeln!(csv, "{n},{d:.16e},{ratio}");
    }
    write_file(&cfg.output.dir, "converge.csv", &csv)?;
    write_json(
        &cfg.output.dir,
        "converge.json",
        &json!({
            "gaps": gaps,
            "divisor": divisor,
            "study": study,
            "contracts": study.contracts(),
            "config_hash": cfg.hash(),
            "environment": Environment::current(),
        }),
    )?;
    if study.contracts() {
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::VerificationFailed(vec!["truncation differences did not shrink".into()]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_distinct() {
        let codes: Vec<i32> = [
            Outcome::Pass,
            Outcome::Validation(String::new()),
            Outcome::Numerical(String::new()),
            Outcome::VerificationFailed(vec![]),
        ]
        .iter()
        .map(Outcome::exit_code)
        .collect();
        assert_eq!(codes, vec![0, 1, 2, 3]);
    }

    #[test]
    fn csv_uses_seventeen_digits() {
        let text = potential_csv(&[0.1], &[0.0], &[vec![1.0 / 3.0]]);
        let row = text.lines().nth(1).unwrap();
        let v: Vec<&str> = row.split(',').collect();
        assert_eq!(v[2], "3.3333333333333331e-1");
        assert_eq!(v[2].parse::<f64>().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn overrides_take_precedence() {
        let o = Overrides {
            tol: Some(1e-9),
            seed: Some(5),
            k: Some(2),
            out: Some("elsewhere".into()),
            ..Default::default()
        };
        let cfg = resolve_config(&o).unwrap();
        assert_eq!(cfg.tolerances.quadrature, 1e-9);
        assert_eq!((cfg.seed, cfg.k), (5, 2));
        assert_eq!(cfg.output.dir, PathBuf::from("elsewhere"));
    }

    #[test]
    fn missing_config_file_is_a_validation_failure() {
        let o = Overrides {
            config: Some("/nonexistent/gapkdv.json".into()),
            ..Default::default()
        };
        assert_eq!(execute(Command::Geometry, &o).exit_code(), 1);
    }
}
