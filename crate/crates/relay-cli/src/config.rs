//! Command-line and config-file handling.
//!
//! Every flag can also appear in a flat `key = value` config file passed via
//! `--config`; command-line flags override file values. `--jobs` falls back
//! to the `RELAY_JOBS` environment variable, then to the machine's core
//! count.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;

use clap::Args;
use relay_core::protocols::BellConvention;

/// Exit code 3: bad configuration.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Flat key = value config file; flags given here override it.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Transmissivity of each relay link, in (0, 1).
    #[arg(long)]
    pub tau: Option<f64>,

    /// Thermal noise variance of the environment (>= 1).
    #[arg(long)]
    pub omega: Option<f64>,

    /// Position-quadrature correlation of the environment.
    #[arg(long)]
    pub g: Option<f64>,

    /// Momentum-quadrature correlation of the environment.
    #[arg(long)]
    pub gprime: Option<f64>,

    /// Additive-noise variance (selects the additive environment).
    #[arg(long)]
    pub n: Option<f64>,

    /// Additive q-correlation coefficient in [-1, 1].
    #[arg(long)]
    pub c: Option<f64>,

    /// Additive p-correlation coefficient in [-1, 1].
    #[arg(long)]
    pub cprime: Option<f64>,

    /// Source variance for the entanglement-based protocols (>= 1).
    #[arg(long)]
    pub mu: Option<f64>,

    /// Modulation-plus-one variance for practical QKD (defaults to --mu).
    #[arg(long = "mu-qkd")]
    pub mu_qkd: Option<f64>,

    /// Reconciliation efficiency in [0, 1].
    #[arg(long)]
    pub xi: Option<f64>,

    /// Grid resolution per axis.
    #[arg(long)]
    pub grid: Option<usize>,

    /// Scan range as `min,max`.
    #[arg(long)]
    pub range: Option<String>,

    /// Bell detection convention.
    #[arg(long, value_parser = ["qminus-pplus", "qplus-pminus"])]
    pub bell: Option<String>,

    /// Output path (required for scans; stdout for eval/env-check).
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_parser = ["csv", "json"])]
    pub format: Option<String>,

    /// Worker-pool size (fallback: RELAY_JOBS, then core count).
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl CommonArgs {
    /// Fill unset fields from a parsed config file.
    fn merge_file(&mut self, file: &HashMap<String, String>) -> Result<(), ConfigError> {
        fn set_f64(
            slot: &mut Option<f64>,
            file: &HashMap<String, String>,
            key: &str,
        ) -> Result<(), ConfigError> {
            if slot.is_none() {
                if let Some(raw) = file.get(key) {
                    *slot = Some(
                        raw.parse::<f64>()
                            .map_err(|_| ConfigError(format!("bad number for `{key}`: {raw}")))?,
                    );
                }
            }
            Ok(())
        }
        set_f64(&mut self.tau, file, "tau")?;
        set_f64(&mut self.omega, file, "omega")?;
        set_f64(&mut self.g, file, "g")?;
        set_f64(&mut self.gprime, file, "gprime")?;
        set_f64(&mut self.n, file, "n")?;
        set_f64(&mut self.c, file, "c")?;
        set_f64(&mut self.cprime, file, "cprime")?;
        set_f64(&mut self.mu, file, "mu")?;
        set_f64(&mut self.mu_qkd, file, "mu-qkd")?;
        set_f64(&mut self.xi, file, "xi")?;
        if self.grid.is_none() {
            if let Some(raw) = file.get("grid") {
                self.grid = Some(
                    raw.parse::<usize>()
                        .map_err(|_| ConfigError(format!("bad integer for `grid`: {raw}")))?,
                );
            }
        }
        if self.jobs.is_none() {
            if let Some(raw) = file.get("jobs") {
                self.jobs = Some(
                    raw.parse::<usize>()
                        .map_err(|_| ConfigError(format!("bad integer for `jobs`: {raw}")))?,
                );
            }
        }
        for (slot, key) in [
            (&mut self.range, "range"),
            (&mut self.bell, "bell"),
            (&mut self.format, "format"),
        ] {
            if slot.is_none() {
                if let Some(raw) = file.get(key) {
                    *slot = Some(raw.clone());
                }
            }
        }
        if self.out.is_none() {
            if let Some(raw) = file.get("out") {
                self.out = Some(PathBuf::from(raw));
            }
        }
        Ok(())
    }
}

const KNOWN_KEYS: [&str; 16] = [
    "tau", "omega", "g", "gprime", "n", "c", "cprime", "mu", "mu-qkd", "xi", "grid", "range",
    "bell", "out", "format", "jobs",
];

/// Parse a flat `key = value` file; `#` starts a comment, blank lines are
/// skipped, unknown keys are rejected.
pub fn parse_config_file(text: &str) -> Result<HashMap<String, String>, ConfigError> {
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return err(format!("line {}: expected `key = value`", lineno + 1));
        };
        let key = key.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return err(format!("line {}: unknown key `{key}`", lineno + 1));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

/// Environment selection for point commands.
#[derive(Debug, Clone, Copy)]
pub enum EnvSpec {
    Thermal {
        tau: f64,
        omega: f64,
        g: f64,
        gprime: f64,
    },
    Additive {
        n: f64,
        c: f64,
        cprime: f64,
    },
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub env: EnvSpec,
    pub mu_ent: f64,
    pub mu_qkd: f64,
    pub xi: f64,
    pub grid: usize,
    pub range: (f64, f64),
    pub bell: BellConvention,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    Eval,
    ScanPlane,
    ScanNoise,
    EnvCheck,
}

fn parse_range(raw: &str) -> Result<(f64, f64), ConfigError> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return err(format!("--range wants `min,max`, got `{raw}`"));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| ConfigError(format!("bad range minimum `{}`", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| ConfigError(format!("bad range maximum `{}`", parts[1])))?;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return err(format!("range must be finite with min <= max, got `{raw}`"));
    }
    Ok((lo, hi))
}

pub fn resolve(mode: ModeKind, mut args: CommonArgs) -> Result<ScanConfig, ConfigError> {
    if let Some(path) = args.config.clone() {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        let file = parse_config_file(&text)?;
        args.merge_file(&file)?;
    }

    let thermal_given = args.tau.is_some()
        || args.omega.is_some()
        || args.g.is_some()
        || args.gprime.is_some();
    let additive_given = args.n.is_some() || args.c.is_some() || args.cprime.is_some();

    let env = match mode {
        ModeKind::ScanPlane => {
            if additive_given {
                return err("scan-plane sweeps the thermal correlation plane; additive flags (--n/--c/--cprime) do not apply");
            }
            EnvSpec::Thermal {
                tau: args.tau.ok_or(ConfigError("--tau is required".into()))?,
                omega: args.omega.ok_or(ConfigError("--omega is required".into()))?,
                g: 0.0,
                gprime: 0.0,
            }
        }
        ModeKind::ScanNoise => {
            if thermal_given {
                return err("scan-noise sweeps the additive environment; thermal flags (--tau/--omega/--g/--gprime) do not apply");
            }
            EnvSpec::Additive {
                n: 0.0,
                c: args.c.unwrap_or(0.0),
                cprime: args.cprime.unwrap_or(0.0),
            }
        }
        ModeKind::Eval | ModeKind::EnvCheck => {
            if thermal_given && additive_given {
                return err("give either a thermal environment (--tau --omega [--g --gprime]) or an additive one (--n [--c --cprime]), not both");
            }
            if additive_given {
                EnvSpec::Additive {
                    n: args.n.ok_or(ConfigError("--n is required".into()))?,
                    c: args.c.unwrap_or(0.0),
                    cprime: args.cprime.unwrap_or(0.0),
                }
            } else if thermal_given {
                EnvSpec::Thermal {
                    tau: args.tau.ok_or(ConfigError("--tau is required".into()))?,
                    omega: args.omega.ok_or(ConfigError("--omega is required".into()))?,
                    g: args.g.unwrap_or(0.0),
                    gprime: args.gprime.unwrap_or(0.0),
                }
            } else {
                return err("no environment given: pass --tau --omega (thermal) or --n (additive)");
            }
        }
    };

    if let EnvSpec::Thermal { tau, omega, .. } = env {
        if !(tau.is_finite() && tau > 0.0 && tau < 1.0) {
            return err(format!("--tau must lie in (0, 1), got {tau}"));
        }
        if !(omega.is_finite() && omega >= 1.0) {
            return err(format!("--omega must be >= 1, got {omega}"));
        }
    }
    if let EnvSpec::Additive { n, c, cprime } = env {
        if !(n.is_finite() && n >= 0.0) && mode != ModeKind::ScanNoise {
            return err(format!("--n must be >= 0, got {n}"));
        }
        for (name, v) in [("--c", c), ("--cprime", cprime)] {
            if !(v.is_finite() && v.abs() <= 1.0) {
                return err(format!("{name} must lie in [-1, 1], got {v}"));
            }
        }
    }

    let mu_ent = args.mu.unwrap_or(1e6);
    let mu_qkd = args.mu_qkd.unwrap_or(mu_ent);
    for (name, v) in [("--mu", mu_ent), ("--mu-qkd", mu_qkd)] {
        if !(v.is_finite() && v >= 1.0) {
            return err(format!("{name} must be >= 1, got {v}"));
        }
    }
    let xi = args.xi.unwrap_or(1.0);
    if !(xi.is_finite() && (0.0..=1.0).contains(&xi)) {
        return err(format!("--xi must lie in [0, 1], got {xi}"));
    }

    let grid = args.grid.unwrap_or(match mode {
        ModeKind::ScanNoise => 81,
        _ => 201,
    });

    let range = match (&args.range, mode) {
        (Some(raw), _) => parse_range(raw)?,
        (None, ModeKind::ScanPlane) => {
            let EnvSpec::Thermal { omega, .. } = env else {
                unreachable!("plane scan is thermal");
            };
            (-(omega - 1.0), omega - 1.0)
        }
        (None, ModeKind::ScanNoise) => (0.0, 4.0),
        (None, _) => (0.0, 0.0),
    };
    if matches!(mode, ModeKind::ScanPlane | ModeKind::ScanNoise) {
        if grid < 2 && range.0 < range.1 {
            return err(format!("--grid must be >= 2, got {grid}"));
        }
        if args.out.is_none() {
            return err("scans need --out");
        }
    }
    if mode == ModeKind::ScanNoise && range.0 < 0.0 {
        return err(format!("noise range must start at n >= 0, got {}", range.0));
    }

    let bell = match args.bell.as_deref() {
        None | Some("qminus-pplus") => BellConvention::QMinusPPlus,
        Some("qplus-pminus") => BellConvention::QPlusPMinus,
        Some(other) => return err(format!("unknown bell convention `{other}`")),
    };
    let format = match args.format.as_deref() {
        None | Some("csv") => OutputFormat::Csv,
        Some("json") => OutputFormat::Json,
        Some(other) => return err(format!("unknown format `{other}`")),
    };

    let jobs = match args.jobs {
        Some(j) if j >= 1 => j,
        Some(j) => return err(format!("--jobs must be >= 1, got {j}")),
        None => match std::env::var("RELAY_JOBS") {
            Ok(raw) => raw
                .parse::<usize>()
                .ok()
                .filter(|&j| j >= 1)
                .ok_or(ConfigError(format!("bad RELAY_JOBS value `{raw}`")))?,
            Err(_) => std::thread::available_parallelism().map_or(1, |p| p.get()),
        },
    };

    Ok(ScanConfig {
        env,
        mu_ent,
        mu_qkd,
        xi,
        grid,
        range,
        bell,
        out: args.out,
        format,
        jobs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_round_trip() {
        let map = parse_config_file(
            "# comment\n tau = 0.9\nomega= 19.38\n\nrange = -1,2 # inline\nmu-qkd = 50\n",
        )
        .unwrap();
        assert_eq!(map["tau"], "0.9");
        assert_eq!(map["range"], "-1,2");
        assert_eq!(map["mu-qkd"], "50");
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(parse_config_file("taus = 0.9").is_err());
        assert!(parse_config_file("tau 0.9").is_err());
    }

    #[test]
    fn cli_overrides_file() {
        let dir = std::env::temp_dir().join("relay-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.txt");
        std::fs::write(&path, "tau = 0.5\nomega = 3\nmu = 10\n").unwrap();
        let args = CommonArgs {
            config: Some(path),
            tau: Some(0.9),
            ..Default::default()
        };
        let cfg = resolve(ModeKind::Eval, args).unwrap();
        let EnvSpec::Thermal { tau, omega, .. } = cfg.env else {
            panic!("expected thermal")
        };
        assert_eq!(tau, 0.9);
        assert_eq!(omega, 3.0);
        assert_eq!(cfg.mu_ent, 10.0);
        assert_eq!(cfg.mu_qkd, 10.0);
    }

    #[test]
    fn scan_defaults() {
        let args = CommonArgs {
            tau: Some(0.9),
            omega: Some(19.38),
            out: Some(PathBuf::from("/tmp/x.csv")),
            ..Default::default()
        };
        let cfg = resolve(ModeKind::ScanPlane, args).unwrap();
        assert_eq!(cfg.grid, 201);
        assert!((cfg.range.0 + 18.38).abs() < 1e-12);
        assert!((cfg.range.1 - 18.38).abs() < 1e-12);
        assert_eq!(cfg.xi, 1.0);
        assert_eq!(cfg.mu_ent, 1e6);
    }

    #[test]
    fn bad_configs_rejected() {
        // No environment at all.
        assert!(resolve(ModeKind::Eval, CommonArgs::default()).is_err());
        // Both environments.
        let args = CommonArgs {
            tau: Some(0.9),
            omega: Some(3.0),
            n: Some(1.0),
            ..Default::default()
        };
        assert!(resolve(ModeKind::Eval, args).is_err());
        // Scan without output path.
        let args = CommonArgs {
            tau: Some(0.9),
            omega: Some(3.0),
            ..Default::default()
        };
        assert!(resolve(ModeKind::ScanPlane, args).is_err());
        // Invalid xi.
        let args = CommonArgs {
            tau: Some(0.9),
            omega: Some(3.0),
            xi: Some(1.5),
            ..Default::default()
        };
        assert!(resolve(ModeKind::Eval, args).is_err());
    }
}
