//! Drivers for the four commands.

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use relay_core::environment::{
    additive_kappas, classify, eb_threshold, env_mutual_info, kappas, AdditiveEnvironmentParams,
    EnvironmentParams,
};
use relay_core::protocols::{
    evaluate_additive_point, evaluate_thermal_point, BellConvention, PointEvaluation,
};

use crate::config::{ConfigError, EnvSpec, OutputFormat, ScanConfig};
use crate::record::{fmt12, round12, Axis, PointRecord};

/// Driver-level failure, mapped to the process exit code in `main`.
#[derive(Debug)]
pub enum CliError {
    /// Exit 3.
    Config(ConfigError),
    /// Exit 2.
    UnphysicalEnvironment(String),
    /// Exit 1.
    Io(std::io::Error),
    /// Exit 1.
    Internal(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "configuration error: {e}"),
            CliError::UnphysicalEnvironment(e) => write!(f, "unphysical environment: {e}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
            CliError::Internal(e) => write!(f, "internal error: {e}"),
        }
    }
}

fn internal(e: relay_core::Error) -> CliError {
    CliError::Internal(e.to_string())
}

/// Grid samples over `[lo, hi]`; a degenerate range collapses to one point.
pub fn axis_points(lo: f64, hi: f64, resolution: usize) -> Vec<f64> {
    if lo == hi {
        return vec![lo];
    }
    (0..resolution)
        .map(|i| lo + (hi - lo) * i as f64 / (resolution - 1) as f64)
        .collect()
}

fn bell_name(b: BellConvention) -> &'static str {
    match b {
        BellConvention::QMinusPPlus => "qminus-pplus",
        BellConvention::QPlusPMinus => "qplus-pminus",
    }
}

fn format_name(f: OutputFormat) -> &'static str {
    match f {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    }
}

/// Config echo for headers. Runtime-only knobs (jobs, paths) are excluded
/// so scan output is byte-identical across worker counts.
fn echo_common(cfg: &ScanConfig, mode: &str) -> Vec<(String, String)> {
    let mut echo = vec![("mode".to_string(), mode.to_string())];
    match cfg.env {
        EnvSpec::Thermal {
            tau,
            omega,
            g,
            gprime,
        } => {
            echo.push(("tau".into(), fmt12(tau)));
            echo.push(("omega".into(), fmt12(omega)));
            if mode == "eval" || mode == "env-check" {
                echo.push(("g".into(), fmt12(g)));
                echo.push(("gprime".into(), fmt12(gprime)));
            }
        }
        EnvSpec::Additive { n, c, cprime } => {
            if mode == "eval" || mode == "env-check" {
                echo.push(("n".into(), fmt12(n)));
            }
            echo.push(("c".into(), fmt12(c)));
            echo.push(("cprime".into(), fmt12(cprime)));
        }
    }
    echo.push(("mu".into(), fmt12(cfg.mu_ent)));
    echo.push(("mu-qkd".into(), fmt12(cfg.mu_qkd)));
    echo.push(("xi".into(), fmt12(cfg.xi)));
    if mode.starts_with("scan") {
        echo.push(("grid".into(), cfg.grid.to_string()));
        echo.push((
            "range".into(),
            format!("{},{}", fmt12(cfg.range.0), fmt12(cfg.range.1)),
        ));
    }
    echo.push(("bell".into(), bell_name(cfg.bell).to_string()));
    echo.push(("format".into(), format_name(cfg.format).to_string()));
    echo
}

fn thermal_eval(
    cfg: &ScanConfig,
    tau: f64,
    omega: f64,
    g: f64,
    gprime: f64,
) -> Result<PointEvaluation, CliError> {
    let env = EnvironmentParams::new(tau, omega, g, gprime)
        .map_err(|e| CliError::Config(ConfigError(e.to_string())))?;
    evaluate_thermal_point(&env, cfg.mu_ent, cfg.mu_qkd, cfg.xi, cfg.bell).map_err(internal)
}

fn additive_eval(cfg: &ScanConfig, n: f64, c: f64, cprime: f64) -> Result<PointEvaluation, CliError> {
    let add = AdditiveEnvironmentParams::new(n, c, cprime)
        .map_err(|e| CliError::Config(ConfigError(e.to_string())))?;
    evaluate_additive_point(&add, cfg.mu_ent, cfg.mu_qkd, cfg.xi, cfg.bell).map_err(internal)
}

/// `eval`: one parameter point, one JSON object.
pub fn eval_point(cfg: &ScanConfig) -> Result<String, CliError> {
    let (record, mode_echo) = match cfg.env {
        EnvSpec::Thermal {
            tau,
            omega,
            g,
            gprime,
        } => {
            let p = thermal_eval(cfg, tau, omega, g, gprime)?;
            if !p.classification.physical {
                return Err(CliError::UnphysicalEnvironment(format!(
                    "omega = {omega}, g = {g}, g' = {gprime} is not a bona-fide environment"
                )));
            }
            (
                PointRecord::from_evaluation(Axis::Plane { g, gprime }, &p),
                echo_common(cfg, "eval"),
            )
        }
        EnvSpec::Additive { n, c, cprime } => {
            let p = additive_eval(cfg, n, c, cprime)?;
            (
                PointRecord::from_evaluation(Axis::Noise { n }, &p),
                echo_common(cfg, "eval"),
            )
        }
    };
    let mut config = Map::new();
    for (k, v) in mode_echo {
        config.insert(k, Value::String(v));
    }
    let mut root = Map::new();
    root.insert("config".into(), Value::Object(config));
    root.insert("record".into(), record.to_json());
    let mut text = serde_json::to_string_pretty(&Value::Object(root)).expect("serializable");
    text.push('\n');
    Ok(text)
}

/// `env-check`: classification report; the bool says whether the point is
/// physical (exit 2 otherwise).
pub fn env_check(cfg: &ScanConfig) -> Result<(String, bool), CliError> {
    let mut obj = Map::new();
    let physical = match cfg.env {
        EnvSpec::Thermal {
            tau,
            omega,
            g,
            gprime,
        } => {
            let env = EnvironmentParams::new(tau, omega, g, gprime)
                .map_err(|e| CliError::Config(ConfigError(e.to_string())))?;
            let c = classify(&env);
            let k = kappas(&env);
            obj.insert("tau".into(), json!(round12(tau)));
            obj.insert("omega".into(), json!(round12(omega)));
            obj.insert("g".into(), json!(round12(g)));
            obj.insert("gprime".into(), json!(round12(gprime)));
            obj.insert("physical".into(), json!(c.physical));
            obj.insert("separable".into(), json!(c.separable));
            obj.insert("entanglement_breaking".into(), json!(c.entanglement_breaking));
            obj.insert(
                "omega_eb".into(),
                json!(round12(eb_threshold(tau).map_err(internal)?)),
            );
            obj.insert("kappa".into(), json!(round12(k.kappa)));
            obj.insert("kappa_prime".into(), json!(round12(k.kappa_prime)));
            obj.insert(
                "i_env".into(),
                if c.physical {
                    json!(round12(env_mutual_info(omega, g, gprime).map_err(internal)?))
                } else {
                    Value::Null
                },
            );
            c.physical
        }
        EnvSpec::Additive { n, c, cprime } => {
            let add = AdditiveEnvironmentParams::new(n, c, cprime)
                .map_err(|e| CliError::Config(ConfigError(e.to_string())))?;
            let k = additive_kappas(&add);
            obj.insert("n".into(), json!(round12(n)));
            obj.insert("c".into(), json!(round12(c)));
            obj.insert("cprime".into(), json!(round12(cprime)));
            obj.insert("physical".into(), json!(true));
            obj.insert("separable".into(), json!(true));
            obj.insert(
                "entanglement_breaking".into(),
                json!(add.entanglement_breaking()),
            );
            obj.insert("eb_noise_threshold".into(), json!(2.0));
            obj.insert("kappa".into(), json!(round12(k.kappa)));
            obj.insert("kappa_prime".into(), json!(round12(k.kappa_prime)));
            obj.insert("i_env".into(), Value::Null);
            true
        }
    };
    let mut text = serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable");
    text.push('\n');
    Ok((text, physical))
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))
}

/// Output of a plane scan: the row-major grid plus the antidiagonal
/// diagnostic slice (`gprime = -g`), each with its header echo.
pub struct PlaneScan {
    pub echo: Vec<(String, String)>,
    pub records: Vec<PointRecord>,
    pub antidiagonal_echo: Vec<(String, String)>,
    pub antidiagonal: Vec<PointRecord>,
}

/// `scan-plane`: sweep the correlation plane `(g, g')` row-major.
pub fn run_plane(cfg: &ScanConfig) -> Result<PlaneScan, CliError> {
    let EnvSpec::Thermal { tau, omega, .. } = cfg.env else {
        return Err(CliError::Config(ConfigError(
            "plane scan needs a thermal environment".into(),
        )));
    };
    let axis = axis_points(cfg.range.0, cfg.range.1, cfg.grid);
    let mut points = Vec::with_capacity(axis.len() * axis.len());
    for &g in &axis {
        for &gp in &axis {
            points.push((g, gp));
        }
    }
    let pool = pool(cfg.jobs)?;
    let records: Vec<PointRecord> = pool.install(|| {
        points
            .par_iter()
            .map(|&(g, gp)| {
                thermal_eval(cfg, tau, omega, g, gp)
                    .map(|p| PointRecord::from_evaluation(Axis::Plane { g, gprime: gp }, &p))
            })
            .collect::<Result<Vec<_>, _>>()
    })?;

    let anti: Vec<PointRecord> = pool.install(|| {
        axis.par_iter()
            .map(|&g| {
                thermal_eval(cfg, tau, omega, g, -g)
                    .map(|p| PointRecord::from_evaluation(Axis::Plane { g, gprime: -g }, &p))
            })
            .collect::<Result<Vec<_>, _>>()
    })?;

    let mut antidiagonal_echo = echo_common(cfg, "scan-plane");
    antidiagonal_echo.push(("slice".into(), "antidiagonal gprime = -g".into()));
    Ok(PlaneScan {
        echo: echo_common(cfg, "scan-plane"),
        records,
        antidiagonal_echo,
        antidiagonal: anti,
    })
}

/// Output of a noise scan: the rate curve plus trailing diagnostics.
pub struct NoiseScan {
    pub echo: Vec<(String, String)>,
    pub records: Vec<PointRecord>,
    pub diagnostics: Vec<(String, String)>,
}

/// `scan-noise`: sweep the additive-noise variance `n`.
pub fn run_noise(cfg: &ScanConfig) -> Result<NoiseScan, CliError> {
    let EnvSpec::Additive { c, cprime, .. } = cfg.env else {
        return Err(CliError::Config(ConfigError(
            "noise scan needs an additive environment".into(),
        )));
    };
    let axis = axis_points(cfg.range.0, cfg.range.1, cfg.grid);
    let pool = pool(cfg.jobs)?;
    let records: Vec<PointRecord> = pool.install(|| {
        axis.par_iter()
            .map(|&n| {
                additive_eval(cfg, n, c, cprime)
                    .map(|p| PointRecord::from_evaluation(Axis::Noise { n }, &p))
            })
            .collect::<Result<Vec<_>, _>>()
    })?;

    let mut diagnostics = Vec::new();
    let rates: Vec<Option<f64>> = records.iter().map(|r| r.qkd_rate).collect();
    if rates.len() >= 2 && rates.iter().all(Option::is_some) {
        let rates: Vec<f64> = rates.into_iter().map(Option::unwrap).collect();
        let monotone = rates.windows(2).all(|w| w[1] < w[0]);
        diagnostics.push(("monotone_decreasing".into(), monotone.to_string()));
        let mut crossing = None;
        for (i, w) in rates.windows(2).enumerate() {
            if w[0] > 0.0 && w[1] <= 0.0 {
                let t = w[0] / (w[0] - w[1]);
                crossing = Some(axis[i] + t * (axis[i + 1] - axis[i]));
                break;
            }
        }
        diagnostics.push((
            "sign_change_n".into(),
            crossing.map_or("none".to_string(), fmt12),
        ));
    }
    Ok(NoiseScan {
        echo: echo_common(cfg, "scan-noise"),
        records,
        diagnostics,
    })
}
