//! Flat `key = value` configuration files and their merge with flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::ValueEnum;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Table => "txt",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Recurrence,
    Dense,
    ClosedForm,
}

/// Every setting a command can read; `None` means "use the command default".
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    pub realizations: Vec<String>,
    pub tags: Vec<String>,
    pub cutoffs: Option<(usize, usize)>,
    pub j: Option<usize>,
    pub margin: Option<usize>,
    pub omega: Option<f64>,
    pub omega0: Option<f64>,
    pub kappa: Option<f64>,
    pub lambda: Option<f64>,
    pub l1: Option<f64>,
    pub l2: Option<f64>,
    pub method: Option<Method>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub tol: Option<f64>,
    pub strict: Option<bool>,
    pub max_total: Option<usize>,
}

pub const KEYS: [&str; 17] = [
    "realization", "tag", "cutoffs", "j", "margin", "omega", "omega0", "kappa", "lambda", "l1", "l2", "method",
    "format", "output", "tol", "strict", "max_total",
];

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.trim().parse().map_err(|_| usage(format!("config key '{key}': cannot parse '{value}'")))
}

fn list(value: &str) -> Vec<String> {
    value.split([',', ' ']).filter(|s| !s.is_empty()).map(str::to_string).collect()
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut seen = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("config line {}: expected 'key = value'", lineno + 1)))?;
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                return Err(usage(format!("config line {}: unknown key '{key}'", lineno + 1)));
            }
            if seen.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(usage(format!("config line {}: duplicate key '{key}'", lineno + 1)));
            }
        }
        let mut s = Settings::default();
        for (key, value) in &seen {
            match key.as_str() {
                "realization" => s.realizations = list(value),
                "tag" => s.tags = list(value),
                "cutoffs" => {
                    let parts = list(value);
                    let [a, b] = parts.as_slice() else {
                        return Err(usage("config key 'cutoffs' needs two integers"));
                    };
                    s.cutoffs = Some((number(key, a)?, number(key, b)?));
                }
                "j" => s.j = Some(number(key, value)?),
                "margin" => s.margin = Some(number(key, value)?),
                "omega" => s.omega = Some(number(key, value)?),
                "omega0" => s.omega0 = Some(number(key, value)?),
                "kappa" => s.kappa = Some(number(key, value)?),
                "lambda" => s.lambda = Some(number(key, value)?),
                "l1" => s.l1 = Some(number(key, value)?),
                "l2" => s.l2 = Some(number(key, value)?),
                "method" => s.method = Some(Method::from_str(value, true).map_err(|e| usage(format!("method: {e}")))?),
                "format" => s.format = Some(Format::from_str(value, true).map_err(|e| usage(format!("format: {e}")))?),
                "output" => s.output = Some(PathBuf::from(value)),
                "tol" => s.tol = Some(number(key, value)?),
                "strict" => s.strict = Some(number(key, value)?),
                "max_total" => s.max_total = Some(number(key, value)?),
                _ => unreachable!("key list checked above"),
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Fields set in `self` win over `lower`.
    pub fn over(self, lower: Settings) -> Settings {
        fn pick<T>(a: Option<T>, b: Option<T>) -> Option<T> {
            a.or(b)
        }
        Settings {
            realizations: if self.realizations.is_empty() { lower.realizations } else { self.realizations },
            tags: if self.tags.is_empty() { lower.tags } else { self.tags },
            cutoffs: pick(self.cutoffs, lower.cutoffs),
            j: pick(self.j, lower.j),
            margin: pick(self.margin, lower.margin),
            omega: pick(self.omega, lower.omega),
            omega0: pick(self.omega0, lower.omega0),
            kappa: pick(self.kappa, lower.kappa),
            lambda: pick(self.lambda, lower.lambda),
            l1: pick(self.l1, lower.l1),
            l2: pick(self.l2, lower.l2),
            method: pick(self.method, lower.method),
            format: pick(self.format, lower.format),
            output: pick(self.output, lower.output),
            tol: pick(self.tol, lower.tol),
            strict: pick(self.strict, lower.strict),
            max_total: pick(self.max_total, lower.max_total),
        }
    }

    /// Tolerance override, which must be positive and finite.
    pub fn tolerance(&self, default: f64) -> Result<f64, CliError> {
        match self.tol {
            Some(t) if !(t > 0.0 && t.is_finite()) => Err(usage(format!("tolerance must be positive, got {t}"))),
            Some(t) => Ok(t),
            None => Ok(default),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_pairs() {
        let s = Settings::parse("# demo\nj = 3\ncutoffs = 9, 10\nrealization = ferma fermb\nformat = csv\nmax-total = 4\n").unwrap();
        assert_eq!(s.j, Some(3));
        assert_eq!(s.cutoffs, Some((9, 10)));
        assert_eq!(s.realizations, vec!["ferma", "fermb"]);
        assert_eq!(s.format, Some(Format::Csv));
        assert_eq!(s.max_total, Some(4));
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        assert!(matches!(Settings::parse("colour = red"), Err(CliError::Usage(_))));
        assert!(matches!(Settings::parse("j = 1\nj = 2"), Err(CliError::Usage(_))));
        assert!(matches!(Settings::parse("j"), Err(CliError::Usage(_))));
    }

    #[test]
    fn flags_override_config() {
        let cli = Settings { j: Some(5), ..Settings::default() };
        let file = Settings { j: Some(2), omega: Some(3.0), ..Settings::default() };
        let merged = cli.over(file);
        assert_eq!((merged.j, merged.omega), (Some(5), Some(3.0)));
    }
}
