//! Flat `key = value` sweep configs and their merge with command-line flags.
//!
//! The format is line-oriented: `#` starts a comment anywhere, blank lines
//! are skipped, and each remaining line must contain exactly one `=`. Scalar
//! keys set base parameters; `sweep.<param> = min:max:steps` adds an axis.
//! Command-line flags always win over file values, and anything left unset
//! falls back to the built-in defaults.

use std::fmt;
use std::path::{Path, PathBuf};

use opdc_core::dynamics::DynamicsParams;
use opdc_core::payoff::{GameParams, IncentiveScheme};
use opdc_core::strategy::GameVariant;
use opdc_core::sweep::{Axis, Extras, SweepParam, SweepSpec};

#[derive(Clone, Debug, PartialEq)]
pub enum ConfigError {
    /// A problem tied to one line of the config file.
    Line { line: usize, message: String },
    /// The merged spec failed validation (no single line to blame).
    Resolve(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Line { line, message } => write!(f, "line {line}: {message}"),
            ConfigError::Resolve(message) => write!(f, "{message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Line { line, message: message.into() }
}

/// Optional settings from one source (the file or the flags). `None` means
/// "not mentioned"; merge order decides who wins.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub variant: Option<GameVariant>,
    pub scheme: Option<IncentiveScheme>,
    pub sigma: Option<f64>,
    pub epsilon: Option<f64>,
    pub u: Option<f64>,
    pub population: Option<usize>,
    pub selection: Option<f64>,
    pub include_pd: Option<bool>,
    pub out: Option<PathBuf>,
}

/// Everything a config file can carry: scalar overrides plus up to two axes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FileConfig {
    pub values: Overrides,
    pub axes: Vec<Axis>,
}

pub fn parse_variant(name: &str) -> Option<GameVariant> {
    match name {
        "opd" => Some(GameVariant::Opd),
        "pd" => Some(GameVariant::Pd),
        _ => None,
    }
}

pub fn parse_scheme(name: &str) -> Option<IncentiveScheme> {
    match name {
        "none" => Some(IncentiveScheme::None),
        "strict" => Some(IncentiveScheme::StrictCom),
        "flexible" => Some(IncentiveScheme::FlexibleCom),
        _ => None,
    }
}

fn domain_note(param: SweepParam) -> &'static str {
    match param {
        SweepParam::Sigma => "sigma must lie in [0, 1]",
        SweepParam::Epsilon => "epsilon must be >= 0",
        SweepParam::U => "u must be >= 0",
    }
}

fn parse_number(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = value
        .parse()
        .map_err(|_| err(line, format!("malformed number \"{value}\" for {key}")))?;
    if !v.is_finite() {
        return Err(err(line, format!("{key} must be finite, got {value}")));
    }
    Ok(v)
}

fn parse_game_value(line: usize, param: SweepParam, value: &str) -> Result<f64, ConfigError> {
    let v = parse_number(line, param.name(), value)?;
    if !param.in_domain(v) {
        return Err(err(line, format!("{} (got {value})", domain_note(param))));
    }
    Ok(v)
}

fn parse_axis(line: usize, param: SweepParam, value: &str) -> Result<Axis, ConfigError> {
    let parts: Vec<&str> = value.split(':').map(str::trim).collect();
    let [min, max, steps] = parts[..] else {
        return Err(err(line, format!("axis syntax is min:max:steps, got \"{value}\"")));
    };
    let min = parse_game_value(line, param, min)?;
    let max = parse_game_value(line, param, max)?;
    let steps: usize = steps
        .parse()
        .map_err(|_| err(line, format!("malformed step count \"{steps}\"")))?;
    if steps < 2 {
        return Err(err(line, format!("axis needs at least 2 steps, got {steps}")));
    }
    if min > max {
        return Err(err(line, format!("axis range is reversed: {min} > {max}")));
    }
    Ok(Axis::new(param, min, max, steps))
}

pub fn parse_config_str(text: &str) -> Result<FileConfig, ConfigError> {
    let mut cfg = FileConfig::default();
    let mut seen: Vec<String> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let n = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.matches('=').count() != 1 {
            return Err(err(n, format!("expected exactly one `=` (key = value), got \"{line}\"")));
        }
        let (key, value) = line.split_once('=').expect("checked above");
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(err(n, "both key and value are required"));
        }
        if seen.iter().any(|k| k == key) {
            return Err(err(n, format!("duplicate key \"{key}\"")));
        }
        seen.push(key.to_owned());

        if let Some(name) = key.strip_prefix("sweep.") {
            let param = SweepParam::parse(name)
                .ok_or_else(|| err(n, format!("unknown sweep parameter \"{name}\"")))?;
            // same-param repeats already died on the duplicate-key check
            if cfg.axes.len() == 2 {
                return Err(err(n, "at most two sweep axes"));
            }
            cfg.axes.push(parse_axis(n, param, value)?);
            continue;
        }

        let v = &mut cfg.values;
        match key {
            "variant" => {
                v.variant = Some(parse_variant(value).ok_or_else(|| {
                    err(n, format!("unknown variant \"{value}\" (expected opd or pd)"))
                })?);
            }
            "scheme" => {
                v.scheme = Some(parse_scheme(value).ok_or_else(|| {
                    err(n, format!("unknown scheme \"{value}\" (expected none, strict, or flexible)"))
                })?);
            }
            "sigma" => v.sigma = Some(parse_game_value(n, SweepParam::Sigma, value)?),
            "epsilon" => v.epsilon = Some(parse_game_value(n, SweepParam::Epsilon, value)?),
            "u" => v.u = Some(parse_game_value(n, SweepParam::U, value)?),
            "M" => {
                let m: usize = value
                    .parse()
                    .map_err(|_| err(n, format!("malformed population size \"{value}\"")))?;
                if m < 2 {
                    return Err(err(n, format!("M must be at least 2, got {m}")));
                }
                v.population = Some(m);
            }
            "s" => {
                let s = parse_number(n, "s", value)?;
                if s < 0.0 {
                    return Err(err(n, format!("s must be >= 0, got {value}")));
                }
                v.selection = Some(s);
            }
            "include_pd" => {
                v.include_pd = Some(match value {
                    "true" => true,
                    "false" => false,
                    _ => {
                        return Err(err(n, format!("expected true or false, got \"{value}\"")));
                    }
                });
            }
            "out" => v.out = Some(PathBuf::from(value)),
            _ => return Err(err(n, format!("unknown key \"{key}\""))),
        }
    }
    Ok(cfg)
}

pub fn parse_config_file(path: &Path) -> anyhow::Result<FileConfig> {
    use anyhow::Context;
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    parse_config_str(&text).with_context(|| format!("in config {}", path.display()))
}

/// Merge defaults, file values, and flags (in that order of precedence,
/// lowest first) into a validated spec plus the requested output path.
pub fn resolve(
    file: &FileConfig,
    cli: &Overrides,
) -> Result<(SweepSpec, Option<PathBuf>), ConfigError> {
    let mut game = GameParams::default();
    let mut dynamics = DynamicsParams::default();
    let mut include_pd = false;
    let mut out = None;

    for layer in [&file.values, cli] {
        if let Some(x) = layer.variant {
            game.variant = x;
        }
        if let Some(x) = layer.scheme {
            game.scheme = x;
        }
        if let Some(x) = layer.sigma {
            game.sigma = x;
        }
        if let Some(x) = layer.epsilon {
            game.epsilon = x;
        }
        if let Some(x) = layer.u {
            game.u = x;
        }
        if let Some(x) = layer.population {
            dynamics.population = x;
        }
        if let Some(x) = layer.selection {
            dynamics.selection = x;
        }
        if let Some(x) = layer.include_pd {
            include_pd = x;
        }
        if let Some(x) = &layer.out {
            out = Some(x.clone());
        }
    }

    let extras = if include_pd {
        Extras::PdComparison { improvement: false }
    } else {
        Extras::None
    };
    let spec = SweepSpec { game, dynamics, axes: file.axes.clone(), extras };
    spec.validate().map_err(|e| ConfigError::Resolve(e.to_string()))?;
    Ok((spec, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_of(e: ConfigError) -> (usize, String) {
        match e {
            ConfigError::Line { line, message } => (line, message),
            ConfigError::Resolve(m) => panic!("expected a line error, got: {m}"),
        }
    }

    #[test]
    fn full_config_round_trip() {
        let text = "\
# phase diagram over cost and reward
variant = opd
scheme = strict   # reward rule
sigma = 0.3
M = 50
s = 0.25
include_pd = true
out = results/grid.csv
sweep.epsilon = 0:1:11
sweep.u = 0 : 1.5 : 4
";
        let file = parse_config_str(text).unwrap();
        let (spec, out) = resolve(&file, &Overrides::default()).unwrap();

        assert_eq!(spec.game.variant, GameVariant::Opd);
        assert_eq!(spec.game.scheme, IncentiveScheme::StrictCom);
        assert_eq!(spec.game.sigma, 0.3);
        assert_eq!(spec.game.epsilon, GameParams::default().epsilon);
        assert_eq!(spec.dynamics.population, 50);
        assert_eq!(spec.dynamics.selection, 0.25);
        assert_eq!(spec.extras, Extras::PdComparison { improvement: false });
        assert_eq!(spec.axes.len(), 2);
        assert_eq!(spec.axes[0], Axis::new(SweepParam::Epsilon, 0.0, 1.0, 11));
        assert_eq!(spec.axes[1], Axis::new(SweepParam::U, 0.0, 1.5, 4));
        assert_eq!(spec.point_count(), 44);
        assert_eq!(out, Some(PathBuf::from("results/grid.csv")));
    }

    #[test]
    fn flags_override_file_values() {
        let file = parse_config_str("scheme = strict\nsigma = 0.2\n").unwrap();
        let cli = Overrides {
            scheme: Some(IncentiveScheme::FlexibleCom),
            out: Some(PathBuf::from("elsewhere.csv")),
            ..Overrides::default()
        };
        let (spec, out) = resolve(&file, &cli).unwrap();
        assert_eq!(spec.game.scheme, IncentiveScheme::FlexibleCom);
        assert_eq!(spec.game.sigma, 0.2);
        assert_eq!(out, Some(PathBuf::from("elsewhere.csv")));
    }

    #[test]
    fn missing_keys_fall_back_to_defaults() {
        let file = parse_config_str("sweep.u = 0:1.5:21\n").unwrap();
        let (spec, out) = resolve(&file, &Overrides::default()).unwrap();
        assert_eq!(spec.dynamics.population, 100);
        assert_eq!(spec.dynamics.selection, 0.1);
        assert_eq!(spec.game, GameParams::default());
        assert_eq!(spec.extras, Extras::None);
        assert_eq!(out, None);
    }

    #[test]
    fn domain_violations_carry_line_numbers() {
        let e = parse_config_str("scheme = none\nsigma = 1.5\n").unwrap_err();
        let (line, message) = line_of(e);
        assert_eq!(line, 2);
        assert!(message.contains("[0, 1]"), "{message}");

        let e = parse_config_str("epsilon = -0.5\n").unwrap_err();
        assert!(line_of(e).1.contains(">= 0"));

        let e = parse_config_str("M = 1\n").unwrap_err();
        assert!(line_of(e).1.contains("at least 2"));

        let e = parse_config_str("sweep.sigma = 0:2:11\n").unwrap_err();
        assert!(line_of(e).1.contains("[0, 1]"));
    }

    #[test]
    fn malformed_lines_are_rejected() {
        for (text, needle) in [
            ("sigma = abc\n", "malformed number"),
            ("sigma 0.5\n", "exactly one `=`"),
            ("sigma = 0.5 = 0.6\n", "exactly one `=`"),
            ("= 0.5\n", "key and value"),
            ("sigma =\n", "key and value"),
            ("frobnicate = 1\n", "unknown key"),
            ("variant = maybe\n", "unknown variant"),
            ("scheme = strictest\n", "unknown scheme"),
            ("include_pd = yes\n", "true or false"),
            ("sweep.M = 2:100:5\n", "unknown sweep parameter"),
            ("sweep.u = 0:1.5\n", "min:max:steps"),
            ("sweep.u = 0:1.5:one\n", "malformed step count"),
            ("sweep.u = 0:1.5:1\n", "at least 2 steps"),
            ("sweep.u = 1.5:0:5\n", "reversed"),
            ("sigma = inf\n", "finite"),
        ] {
            let e = parse_config_str(text).unwrap_err();
            let (line, message) = line_of(e);
            assert_eq!(line, 1, "{text:?}");
            assert!(message.contains(needle), "{text:?} gave: {message}");
        }
    }

    #[test]
    fn duplicates_and_axis_count_are_enforced() {
        let e = parse_config_str("sigma = 0.1\nsigma = 0.2\n").unwrap_err();
        let (line, message) = line_of(e);
        assert_eq!(line, 2);
        assert!(message.contains("duplicate key"));

        let e = parse_config_str("sweep.u = 0:1:5\nsweep.u = 0:1:7\n").unwrap_err();
        assert!(line_of(e).1.contains("duplicate"));

        let text = "sweep.u = 0:1:5\nsweep.sigma = 0:1:5\nsweep.epsilon = 0:1:5\n";
        let e = parse_config_str(text).unwrap_err();
        let (line, message) = line_of(e);
        assert_eq!(line, 3);
        assert!(message.contains("two sweep axes"));
    }

    #[test]
    fn comments_and_blanks_are_ignored() {
        let text = "\n   \n# a full-line comment\nsigma = 0.7 # trailing\n";
        let file = parse_config_str(text).unwrap();
        assert_eq!(file.values.sigma, Some(0.7));
        assert!(file.axes.is_empty());
    }

    #[test]
    fn resolve_rejects_bad_flag_values() {
        let cli = Overrides { sigma: Some(1.5), ..Overrides::default() };
        let e = resolve(&FileConfig::default(), &cli).unwrap_err();
        assert!(matches!(e, ConfigError::Resolve(_)), "{e}");
    }
}
