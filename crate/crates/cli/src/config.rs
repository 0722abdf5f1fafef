use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Table,
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "table" => Ok(Format::Table),
            other => Err(ConfigError(format!(
                "format must be csv, json or table, got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

// Flags shared by every subcommand. Everything is optional so that a
// config file can fill the gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Real part(s), comma separated.
    #[arg(long)]
    pub sigma: Option<String>,
    #[arg(long)]
    pub t: Option<f64>,
    /// Comma-separated list of heights; overrides --t.
    #[arg(long = "t-grid")]
    pub t_grid: Option<String>,
    #[arg(long)]
    pub d1: Option<f64>,
    #[arg(long)]
    pub d2: Option<f64>,
    #[arg(long)]
    pub d3: Option<f64>,
    #[arg(long)]
    pub d4: Option<f64>,
    /// Pass/fail bound of the command.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Quadrature tolerance.
    #[arg(long = "quad-tol")]
    pub quad_tol: Option<f64>,
    /// Ratio m2/m1 for j3.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, env = "THREADS")]
    pub threads: Option<usize>,
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Flat key=value file; command-line flags win over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub sigma: Option<Vec<f64>>,
    pub t: Option<Vec<f64>>,
    pub deltas: [Option<f64>; 4],
    pub tol: Option<f64>,
    pub quad_tol: Option<f64>,
    pub lambda: Option<f64>,
    pub threads: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 20240917;

const KEYS: &[&str] = &[
    "sigma", "t", "t_grid", "d1", "d2", "d3", "d4", "tol", "quad_tol", "lambda", "threads",
    "format", "out", "seed",
];

pub fn parse_file(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError(format!(
                "line {}: expected key=value, got {line:?}",
                i + 1
            )));
        };
        let key = k.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError(format!("line {}: unknown key {key:?}", i + 1)));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

fn num<T: FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.trim()
        .parse()
        .map_err(|_| ConfigError(format!("{key}: cannot parse {v:?}")))
}

fn list(key: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    let vals = v
        .split(',')
        .map(|x| num::<f64>(key, x))
        .collect::<Result<Vec<_>, _>>()?;
    if vals.is_empty() {
        return Err(ConfigError(format!("{key}: empty grid")));
    }
    Ok(vals)
}

fn pick<T: Clone>(cli: &Option<T>, file: Option<T>) -> Option<T> {
    cli.clone().or(file)
}

impl ExperimentConfig {
    pub fn resolve(flags: &Flags) -> Result<Self, ConfigError> {
        let file = match &flags.config {
            Some(path) => load(path)?,
            None => BTreeMap::new(),
        };
        let f = |k: &str| file.get(k).map(String::as_str);
        let fnum = |k: &str| f(k).map(|v| num::<f64>(k, v)).transpose();

        let sigma = match (flags.sigma.as_deref(), f("sigma")) {
            (Some(s), _) | (None, Some(s)) => Some(list("sigma", s)?),
            _ => None,
        };
        let t = if let Some(g) = &flags.t_grid {
            Some(list("t-grid", g)?)
        } else if let Some(t) = flags.t {
            Some(vec![t])
        } else if let Some(g) = f("t_grid") {
            Some(list("t_grid", g)?)
        } else {
            fnum("t")?.map(|t| vec![t])
        };
        let deltas = [
            pick(&flags.d1, fnum("d1")?),
            pick(&flags.d2, fnum("d2")?),
            pick(&flags.d3, fnum("d3")?),
            pick(&flags.d4, fnum("d4")?),
        ];
        let format = match flags.format.as_deref().or(f("format")) {
            Some(s) => s.parse()?,
            None => Format::Table,
        };
        let cfg = ExperimentConfig {
            sigma,
            t,
            deltas,
            tol: pick(&flags.tol, fnum("tol")?),
            quad_tol: pick(&flags.quad_tol, fnum("quad_tol")?),
            lambda: pick(&flags.lambda, fnum("lambda")?),
            threads: pick(
                &flags.threads,
                f("threads").map(|v| num("threads", v)).transpose()?,
            ),
            format,
            out: pick(&flags.out, f("out").map(PathBuf::from)),
            seed: pick(&flags.seed, f("seed").map(|v| num("seed", v)).transpose()?)
                .unwrap_or(DEFAULT_SEED),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in [
            ("tol", self.tol),
            ("quad_tol", self.quad_tol),
            ("lambda", self.lambda),
        ] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(ConfigError(format!("{name} must be positive, got {v}")));
                }
            }
        }
        for (i, d) in self.deltas.iter().enumerate() {
            if let Some(d) = d {
                if !(*d > 0.0 && *d < 1.0) {
                    return Err(ConfigError(format!(
                        "d{} must lie in (0, 1), got {d}",
                        i + 1
                    )));
                }
            }
        }
        if let Some(ts) = &self.t {
            if ts.iter().any(|t| !(*t > 1.0 && t.is_finite())) {
                return Err(ConfigError(format!("heights must exceed 1, got {ts:?}")));
            }
        }
        if let Some(ss) = &self.sigma {
            if ss.iter().any(|s| !(*s > 0.0 && *s < 1.0)) {
                return Err(ConfigError(format!("sigma must lie in (0, 1), got {ss:?}")));
            }
        }
        if self.threads == Some(0) {
            return Err(ConfigError("threads must be at least 1".into()));
        }
        Ok(())
    }

    pub fn sigmas(&self, default: &[f64]) -> Vec<f64> {
        self.sigma.clone().unwrap_or_else(|| default.to_vec())
    }

    pub fn ts(&self, default: &[f64]) -> Vec<f64> {
        self.t.clone().unwrap_or_else(|| default.to_vec())
    }

    pub fn single_t(&self, default: f64) -> Result<f64, ConfigError> {
        match self.t.as_deref() {
            None => Ok(default),
            Some([t]) => Ok(*t),
            Some(ts) => Err(ConfigError(format!(
                "this command takes one height, got {ts:?}"
            ))),
        }
    }

    pub fn single_sigma(&self, default: f64) -> Result<f64, ConfigError> {
        match self.sigma.as_deref() {
            None => Ok(default),
            Some([s]) => Ok(*s),
            Some(ss) => Err(ConfigError(format!(
                "this command takes one sigma, got {ss:?}"
            ))),
        }
    }

    /// d1..d4 by 1-based index.
    pub fn delta(&self, i: usize, default: f64) -> f64 {
        self.deltas[i - 1].unwrap_or(default)
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    pub fn quad_tol_or(&self, default: f64) -> f64 {
        self.quad_tol.unwrap_or(default)
    }
}

fn load(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    parse_file(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_parsing() {
        let m = parse_file("# comment\nsigma = 0.3,0.5\n\nt-grid=50,100\nformat=json\n").unwrap();
        assert_eq!(m["sigma"], "0.3,0.5");
        assert_eq!(m["t_grid"], "50,100");
        assert!(parse_file("sigma 0.5").is_err());
        assert!(parse_file("colour=red").is_err());
    }

    #[test]
    fn cli_beats_file() {
        let dir = std::env::temp_dir().join(format!("zetalab-cfg-{}", std::process::id()));
        std::fs::write(&dir, "t=300\ntol=0.5\nd2=0.4\nseed=7\n").unwrap();
        let flags = Flags {
            t: Some(100.0),
            config: Some(dir.clone()),
            ..Default::default()
        };
        let cfg = ExperimentConfig::resolve(&flags).unwrap();
        std::fs::remove_file(dir).unwrap();
        assert_eq!(cfg.t, Some(vec![100.0]));
        assert_eq!(cfg.tol, Some(0.5));
        assert_eq!(cfg.delta(2, 0.3), 0.4);
        assert_eq!(cfg.delta(1, 0.3), 0.3);
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn validation() {
        let bad = |f: Flags| ExperimentConfig::resolve(&f).is_err();
        assert!(bad(Flags {
            tol: Some(-1.0),
            ..Default::default()
        }));
        assert!(bad(Flags {
            d3: Some(1.5),
            ..Default::default()
        }));
        assert!(bad(Flags {
            format: Some("xml".into()),
            ..Default::default()
        }));
        assert!(bad(Flags {
            t_grid: Some("10,,20".into()),
            ..Default::default()
        }));
        assert!(bad(Flags {
            sigma: Some("1.2".into()),
            ..Default::default()
        }));
        assert!(bad(Flags {
            threads: Some(0),
            ..Default::default()
        }));
        assert!(bad(Flags {
            config: Some("/nonexistent/zetalab.cfg".into()),
            ..Default::default()
        }));
    }

    #[test]
    fn grid_precedence() {
        let flags = Flags {
            t: Some(5.0),
            t_grid: Some("10,20".into()),
            ..Default::default()
        };
        let cfg = ExperimentConfig::resolve(&flags).unwrap();
        assert_eq!(cfg.ts(&[1.0]), vec![10.0, 20.0]);
        assert!(cfg.single_t(3.0).is_err());
    }
}
