//! Run configuration: config-file parsing (flat `key=value` text or JSON),
//! field-wise merging with command-line overrides, and resolution against
//! the built-in defaults.
//!
//! Precedence, lowest to highest: defaults, config file, command line.

use crate::report::{parse_json, Node};
use crate::{Error, Result};

pub const DEFAULT_A: f64 = 1.0;
pub const DEFAULT_B: f64 = 2.0;
pub const DEFAULT_C: f64 = 7.0;
pub const DEFAULT_THETA: f64 = std::f64::consts::FRAC_PI_3;
pub const DEFAULT_Q: f64 = 0.5;
pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 0;

/// Report output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::InvalidParameter {
                name: "output",
                message: format!("'{other}' is not a format; use json or csv"),
            }),
        }
    }
}

/// Partial configuration: the values one source (a config file, or the
/// command line) actually supplies. Missing fields fall through to the next
/// source.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialConfig {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub c: Option<f64>,
    pub theta: Option<f64>,
    pub grid: Option<usize>,
    pub q: Option<f64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub output: Option<OutputFormat>,
}

impl PartialConfig {
    /// Field-wise overlay: any value `over` supplies wins over `self`.
    pub fn merged_with(self, over: PartialConfig) -> PartialConfig {
        PartialConfig {
            a: over.a.or(self.a),
            b: over.b.or(self.b),
            c: over.c.or(self.c),
            theta: over.theta.or(self.theta),
            grid: over.grid.or(self.grid),
            q: over.q.or(self.q),
            samples: over.samples.or(self.samples),
            seed: over.seed.or(self.seed),
            output: over.output.or(self.output),
        }
    }
}

/// Fully resolved run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub theta: f64,
    /// θ-grid point count, when a grid scan was requested instead of a
    /// single θ.
    pub grid: Option<usize>,
    pub q: f64,
    pub samples: u64,
    pub seed: u64,
    pub output: OutputFormat,
}

/// Applies defaults to whatever the merged sources left unset, and
/// validates the structural constraints (positive sample and grid counts).
/// Domain constraints on θ and q are enforced by the functions that consume
/// them.
pub fn resolve(merged: PartialConfig) -> Result<RunConfig> {
    if merged.samples == Some(0) {
        return Err(Error::InvalidParameter {
            name: "samples",
            message: "at least one sample is required".to_string(),
        });
    }
    if merged.grid == Some(0) {
        return Err(Error::InvalidParameter {
            name: "grid",
            message: "grid must contain at least one point".to_string(),
        });
    }
    Ok(RunConfig {
        a: merged.a.unwrap_or(DEFAULT_A),
        b: merged.b.unwrap_or(DEFAULT_B),
        c: merged.c.unwrap_or(DEFAULT_C),
        theta: merged.theta.unwrap_or(DEFAULT_THETA),
        grid: merged.grid,
        q: merged.q.unwrap_or(DEFAULT_Q),
        samples: merged.samples.unwrap_or(DEFAULT_SAMPLES),
        seed: merged.seed.unwrap_or(DEFAULT_SEED),
        output: merged.output.unwrap_or(OutputFormat::Json),
    })
}

fn unknown_key(key: &str) -> Error {
    Error::InvalidParameter {
        name: "config",
        message: format!(
            "unknown key '{key}' (known keys: a, b, c, theta, grid, q, samples, seed, output)"
        ),
    }
}

fn bad_value(key: &str, value: &str) -> Error {
    Error::Parse(format!("config value for '{key}' is invalid: '{value}'"))
}

fn apply_pair(config: &mut PartialConfig, key: &str, value: &str) -> Result<()> {
    match key {
        "a" => config.a = Some(value.parse().map_err(|_| bad_value(key, value))?),
        "b" => config.b = Some(value.parse().map_err(|_| bad_value(key, value))?),
        "c" => config.c = Some(value.parse().map_err(|_| bad_value(key, value))?),
        "theta" => config.theta = Some(value.parse().map_err(|_| bad_value(key, value))?),
        "grid" => config.grid = Some(value.parse().map_err(|_| bad_value(key, value))?),
        "q" => config.q = Some(value.parse().map_err(|_| bad_value(key, value))?),
        "samples" => config.samples = Some(value.parse().map_err(|_| bad_value(key, value))?),
        "seed" => config.seed = Some(value.parse().map_err(|_| bad_value(key, value))?),
        "output" => config.output = Some(value.parse()?),
        other => return Err(unknown_key(other)),
    }
    Ok(())
}

fn parse_flat(text: &str) -> Result<PartialConfig> {
    let mut config = PartialConfig::default();
    for (line_number, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Parse(format!(
                "config line {} is not 'key=value': '{line}'",
                line_number + 1
            ))
        })?;
        apply_pair(&mut config, key.trim(), value.trim())?;
    }
    Ok(config)
}

fn json_f64(key: &str, node: &Node) -> Result<f64> {
    node.as_f64()
        .ok_or_else(|| Error::Parse(format!("config value for '{key}' must be a number")))
}

fn json_count(key: &str, node: &Node) -> Result<u64> {
    node.as_i64()
        .filter(|&n| n >= 0)
        .map(|n| n as u64)
        .ok_or_else(|| {
            Error::Parse(format!(
                "config value for '{key}' must be a nonnegative integer"
            ))
        })
}

fn parse_json_config(text: &str) -> Result<PartialConfig> {
    let doc = parse_json(text)?;
    let fields = match &doc {
        Node::Obj(fields) => fields,
        _ => return Err(Error::Parse("config document must be an object".to_string())),
    };
    let mut config = PartialConfig::default();
    for (key, value) in fields {
        match key.as_str() {
            "a" => config.a = Some(json_f64(key, value)?),
            "b" => config.b = Some(json_f64(key, value)?),
            "c" => config.c = Some(json_f64(key, value)?),
            "theta" => config.theta = Some(json_f64(key, value)?),
            "grid" => config.grid = Some(json_count(key, value)? as usize),
            "q" => config.q = Some(json_f64(key, value)?),
            "samples" => config.samples = Some(json_count(key, value)?),
            "seed" => config.seed = Some(json_count(key, value)?),
            "output" => {
                let s = value.as_str().ok_or_else(|| {
                    Error::Parse("config value for 'output' must be a string".to_string())
                })?;
                config.output = Some(s.parse()?);
            }
            other => return Err(unknown_key(other)),
        }
    }
    Ok(config)
}

/// Parses a config document in either accepted format: JSON if the first
/// non-whitespace character is `{`, flat `key=value` lines otherwise
/// (blank lines and `#` comments allowed).
pub fn parse_config(text: &str) -> Result<PartialConfig> {
    if text.trim_start().starts_with('{') {
        parse_json_config(text)
    } else {
        parse_flat(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_config_parses_with_comments() {
        let text = "\n# verification run\n a = 2.5 \nb=-1\ntheta=0.9\nsamples=5000\noutput=csv\n";
        let config = parse_config(text).unwrap();
        assert_eq!(config.a, Some(2.5));
        assert_eq!(config.b, Some(-1.0));
        assert_eq!(config.theta, Some(0.9));
        assert_eq!(config.samples, Some(5000));
        assert_eq!(config.output, Some(OutputFormat::Csv));
        assert_eq!(config.c, None);
    }

    #[test]
    fn json_config_parses() {
        let text = r#"{"a": 1.5, "c": 7, "q": 0.25, "seed": 42, "output": "json", "grid": 9}"#;
        let config = parse_config(text).unwrap();
        assert_eq!(config.a, Some(1.5));
        assert_eq!(config.c, Some(7.0));
        assert_eq!(config.q, Some(0.25));
        assert_eq!(config.seed, Some(42));
        assert_eq!(config.grid, Some(9));
        assert_eq!(config.output, Some(OutputFormat::Json));
    }

    #[test]
    fn unknown_keys_are_rejected_in_both_formats() {
        assert!(parse_config("alpha=1\n").is_err());
        assert!(parse_config(r#"{"alpha": 1}"#).is_err());
    }

    #[test]
    fn malformed_values_are_rejected() {
        assert!(parse_config("a=abc\n").is_err());
        assert!(parse_config("samples=-3\n").is_err());
        assert!(parse_config("just a line\n").is_err());
        assert!(parse_config(r#"{"samples": -3}"#).is_err());
        assert!(parse_config(r#"{"output": "yaml"}"#).is_err());
        assert!(parse_config(r#"[1, 2]"#).is_err());
    }

    #[test]
    fn merge_prefers_the_override() {
        let file = parse_config("a=1\nb=2\nseed=9\n").unwrap();
        let cli = PartialConfig {
            b: Some(5.0),
            theta: Some(0.4),
            ..PartialConfig::default()
        };
        let merged = file.merged_with(cli);
        assert_eq!(merged.a, Some(1.0));
        assert_eq!(merged.b, Some(5.0));
        assert_eq!(merged.theta, Some(0.4));
        assert_eq!(merged.seed, Some(9));
    }

    #[test]
    fn resolve_applies_defaults_and_guards_counts() {
        let resolved = resolve(PartialConfig::default()).unwrap();
        assert_eq!(resolved.a, DEFAULT_A);
        assert_eq!(resolved.b, DEFAULT_B);
        assert_eq!(resolved.c, DEFAULT_C);
        assert_eq!(resolved.theta, DEFAULT_THETA);
        assert_eq!(resolved.q, DEFAULT_Q);
        assert_eq!(resolved.samples, DEFAULT_SAMPLES);
        assert_eq!(resolved.seed, DEFAULT_SEED);
        assert_eq!(resolved.output, OutputFormat::Json);
        assert_eq!(resolved.grid, None);

        let zero_samples = PartialConfig {
            samples: Some(0),
            ..PartialConfig::default()
        };
        assert!(resolve(zero_samples).is_err());

        let zero_grid = PartialConfig {
            grid: Some(0),
            ..PartialConfig::default()
        };
        assert!(resolve(zero_grid).is_err());
    }
}
