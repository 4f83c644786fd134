use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use lienard_core::rng::DEFAULT_SEED;
use lienard_core::{Interval, LienardModel};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("missing key `{0}`")]
    Missing(&'static str),
    #[error("line {line}: `{key}`: {reason}")]
    Invalid {
        line: usize,
        key: &'static str,
        reason: String,
    },
    #[error("invalid model: {0}")]
    Model(#[from] lienard_core::Error),
}

const KEYS: [&str; 8] = [
    "model.h",
    "model.omega",
    "model.A",
    "domain.xmin",
    "domain.xmax",
    "grid.n",
    "levels",
    "seed",
];

#[derive(Debug, Clone)]
pub struct Config {
    pub h: String,
    pub omega: f64,
    pub coupling: f64,
    pub xmin: f64,
    pub xmax: f64,
    pub grid_n: usize,
    pub levels: usize,
    pub seed: u64,
}

impl Config {
    pub fn model(&self) -> Result<LienardModel, ConfigError> {
        Ok(LienardModel::build(
            &self.h,
            self.omega,
            self.coupling,
            Interval::new(self.xmin, self.xmax),
        )?)
    }
}

pub fn load_config(path: &Path) -> Result<Config, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let cfg = parse_config(&text)?;
    cfg.model()?;
    Ok(cfg)
}

pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let mut entries: BTreeMap<&'static str, (usize, String)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| ConfigError::Malformed {
            line,
            text: body.to_string(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Malformed {
                line,
                text: body.to_string(),
            });
        }
        let known = KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            })?;
        if entries.insert(known, (line, value.to_string())).is_some() {
            return Err(ConfigError::Duplicate {
                line,
                key: key.to_string(),
            });
        }
    }

    let float = |key: &'static str| -> Result<f64, ConfigError> {
        let (line, v) = entries.get(key).ok_or(ConfigError::Missing(key))?;
        let x: f64 = v.parse().map_err(|_| ConfigError::Invalid {
            line: *line,
            key,
            reason: format!("`{v}` is not a number"),
        })?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(ConfigError::Invalid {
                line: *line,
                key,
                reason: "must be finite".into(),
            })
        }
    };
    let count = |key: &'static str, default: Option<u64>| -> Result<u64, ConfigError> {
        match entries.get(key) {
            None => default.ok_or(ConfigError::Missing(key)),
            Some((line, v)) => parse_int(v).ok_or_else(|| ConfigError::Invalid {
                line: *line,
                key,
                reason: format!("`{v}` is not a non-negative integer"),
            }),
        }
    };

    let h = entries
        .get("model.h")
        .map(|(_, v)| v.clone())
        .ok_or(ConfigError::Missing("model.h"))?;
    let cfg = Config {
        h,
        omega: float("model.omega")?,
        coupling: float("model.A")?,
        xmin: float("domain.xmin")?,
        xmax: float("domain.xmax")?,
        grid_n: count("grid.n", None)? as usize,
        levels: count("levels", Some(8))? as usize,
        seed: count("seed", Some(DEFAULT_SEED))?,
    };
    let line_of = |key| entries.get(key).map_or(0, |(l, _)| *l);
    if cfg.xmin >= cfg.xmax {
        return Err(ConfigError::Invalid {
            line: line_of("domain.xmax"),
            key: "domain.xmax",
            reason: format!("must exceed domain.xmin = {}", cfg.xmin),
        });
    }
    if cfg.levels == 0 {
        return Err(ConfigError::Invalid {
            line: line_of("levels"),
            key: "levels",
            reason: "must be at least 1".into(),
        });
    }
    Ok(cfg)
}

// decimal or 0x-prefixed hexadecimal
fn parse_int(v: &str) -> Option<u64> {
    match v.strip_prefix("0x").or_else(|| v.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16).ok(),
        None => v.parse().ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HO: &str = "# oscillator\nmodel.h = x\nmodel.omega = 1\nmodel.A = 0\ndomain.xmin = -10\ndomain.xmax = 10\ngrid.n = 2000\n";

    #[test]
    fn defaults_apply() {
        let c = parse_config(HO).unwrap();
        assert_eq!(c.levels, 8);
        assert_eq!(c.seed, 0x5EED);
        assert_eq!(c.grid_n, 2000);
    }

    #[test]
    fn crlf_and_comments() {
        let text = HO.replace('\n', "\r\n") + "seed = 0x10 # hex\r\n";
        assert_eq!(parse_config(&text).unwrap().seed, 16);
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse_config(&HO.replace("model.omega = 1\n", "")).unwrap_err();
        assert!(e.to_string().contains("model.omega"), "{e}");
        let e = parse_config(&HO.replace("grid.n = 2000", "grid.n = -5")).unwrap_err();
        assert!(e.to_string().starts_with("line 7"), "{e}");
        let e = parse_config(&(HO.to_string() + "model.B = 1\n")).unwrap_err();
        assert!(matches!(e, ConfigError::UnknownKey { line: 8, .. }));
        let e = parse_config(&(HO.to_string() + "nonsense\n")).unwrap_err();
        assert!(matches!(e, ConfigError::Malformed { line: 8, .. }));
    }
}
