//! Run configuration: command-line flags layered over a flat `key = value` file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use odd_elliptic::superkron::{AnsatzCoefficients, HeatParams};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Every registered suite, in report order.
pub const SUITE_NAMES: [&str; 22] = [
    "fay",
    "heat",
    "boundary",
    "super-fay",
    "super-fay-falsify",
    "super-heat",
    "super-heat-falsify",
    "basis-algebra",
    "shift-invariance",
    "aybe",
    "qybe",
    "cybe",
    "unitarity",
    "cubic-3-24",
    "super-aybe",
    "super-symmetry",
    "super-unitarity",
    "super-qybe-1",
    "super-qybe-2",
    "super-cybe",
    "residue",
    "scan",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Suite(usize);

impl Suite {
    pub fn all() -> impl Iterator<Item = Suite> {
        (0..SUITE_NAMES.len()).map(Suite)
    }

    pub fn name(self) -> &'static str {
        SUITE_NAMES[self.0]
    }

    /// Falsification suites pass when every sample has a large residual.
    pub fn is_falsification(self) -> bool {
        self.name().ends_with("-falsify")
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        SUITE_NAMES
            .iter()
            .position(|n| *n == s)
            .map(Suite)
            .ok_or_else(|| CliError::Config(format!("unknown suite `{s}`")))
    }
}

impl TryFrom<String> for Suite {
    type Error = CliError;

    fn try_from(s: String) -> Result<Self, CliError> {
        s.parse()
    }
}

impl From<Suite> for String {
    fn from(s: Suite) -> String {
        s.name().to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Text,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "text" => Ok(OutputFormat::Text),
            other => Err(CliError::Config(format!("unknown output format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub suites: Vec<Suite>,
    pub n_list: Vec<usize>,
    /// Fixed modular parameter; `None` draws τ per sample.
    pub tau: Option<Complex64>,
    pub samples: usize,
    pub seed: u64,
    pub cutoff: u32,
    pub tol: f64,
    pub pole_margin: f64,
    pub coeffs: AnsatzCoefficients,
    /// Index-shift coefficient of the super basis functions; `None` means B = A₃.
    pub b: Option<Complex64>,
    pub heat: HeatParams,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suites: Suite::all().collect(),
            n_list: vec![2, 3],
            tau: None,
            samples: 100,
            seed: 0,
            cutoff: odd_elliptic::context::DEFAULT_CUTOFF,
            tol: odd_elliptic::context::DEFAULT_TOL,
            pole_margin: odd_elliptic::context::DEFAULT_POLE_MARGIN,
            coeffs: AnsatzCoefficients::CANONICAL,
            b: None,
            heat: HeatParams::new(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)),
            output_format: OutputFormat::Text,
            output_path: None,
        }
    }
}

impl RunConfig {
    pub fn with_suites(suites: &[&str]) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        cfg.suites = suites.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.suites.is_empty() {
            return Err(CliError::Config("no suites selected".into()));
        }
        if self.samples == 0 {
            return Err(CliError::Config("samples must be at least 1".into()));
        }
        if self.n_list.is_empty() || self.n_list.contains(&0) {
            return Err(CliError::Config("matrix sizes must be at least 1".into()));
        }
        if !(self.tol > 0.0) || !(self.pole_margin > 0.0) || self.cutoff == 0 {
            return Err(CliError::Config("cutoff, tol and pole_margin must be positive".into()));
        }
        if let Some(tau) = self.tau {
            if !(tau.im > 0.0) {
                return Err(CliError::Config(format!("tau must have positive imaginary part, got {tau}")));
            }
        }
        Ok(())
    }

    /// Applies one `key = value` setting; keys match the long flag names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let value = value.trim();
        match key.trim() {
            "suites" => self.suites = list(value)?,
            "n" => self.n_list = list(value)?,
            "tau" => {
                self.tau = match value {
                    "random" => None,
                    v => Some(parse_complex(v)?),
                }
            }
            "samples" => self.samples = parse(value)?,
            "seed" => self.seed = parse(value)?,
            "cutoff" => self.cutoff = parse(value)?,
            "tol" => self.tol = parse(value)?,
            "pole-margin" => self.pole_margin = parse(value)?,
            "coeffs" => self.coeffs = parse_coefficients(value)?,
            "b" => {
                self.b = match value {
                    "a3" => None,
                    v => Some(parse_complex(v)?),
                }
            }
            "heat-k" => self.heat.k = parse_complex(value)?,
            "heat-kappa" => self.heat.kappa = parse_complex(value)?,
            "format" => self.output_format = value.parse()?,
            "output" => self.output_path = Some(PathBuf::from(value)),
            other => return Err(CliError::Config(format!("unknown setting `{other}`"))),
        }
        Ok(())
    }

    /// Reads a config file: one `key = value` per line, `#` comments.
    pub fn from_file_contents(contents: &str) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        for (key, value) in parse_key_values(contents)? {
            cfg.set(&key, &value)?;
        }
        Ok(cfg)
    }
}

fn parse_key_values(contents: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (lineno, line) in contents.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn parse<T: FromStr>(s: &str) -> Result<T, CliError> {
    s.parse().map_err(|_| CliError::Config(format!("cannot parse `{s}`")))
}

fn list<T: FromStr>(s: &str) -> Result<Vec<T>, CliError> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(|x| parse(x.trim())).collect()
}

/// Parses `a+bi`, `bi`, `a` or `i`.
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    Complex64::from_str(&s).map_err(|_| CliError::Config(format!("cannot parse complex number `{s}`")))
}

/// `canonical`, `truncated`, or five comma-separated complex numbers.
pub fn parse_coefficients(s: &str) -> Result<AnsatzCoefficients, CliError> {
    match s.trim() {
        "canonical" => return Ok(AnsatzCoefficients::CANONICAL),
        "truncated" => return Ok(AnsatzCoefficients::TRUNCATED),
        _ => {}
    }
    let parts: Vec<Complex64> = s.split(',').map(parse_complex).collect::<Result<_, _>>()?;
    let arr: [Complex64; 5] = parts
        .try_into()
        .map_err(|_| CliError::Config(format!("expected five coefficients in `{s}`")))?;
    Ok(AnsatzCoefficients::from_array(arr))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("0.1+1.2i").unwrap(), Complex64::new(0.1, 1.2));
        assert_eq!(parse_complex("-2i").unwrap(), Complex64::new(0.0, -2.0));
        assert_eq!(parse_complex("3").unwrap(), Complex64::new(3.0, 0.0));
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn file_then_override() {
        let mut cfg = RunConfig::from_file_contents("suites = fay, aybe\n# comment\nn = 2,3\nseed=7\n").unwrap();
        assert_eq!(cfg.suites.iter().map(|s| s.name()).collect::<Vec<_>>(), ["fay", "aybe"]);
        assert_eq!(cfg.seed, 7);
        cfg.set("seed", "9").unwrap();
        assert_eq!(cfg.seed, 9);
        assert!(RunConfig::from_file_contents("bogus = 1").is_err());
        assert!(RunConfig::from_file_contents("no equals sign").is_err());
    }

    #[test]
    fn validation() {
        assert!(RunConfig::with_suites(&[]).is_err());
        assert!(RunConfig::with_suites(&["nope"]).is_err());
        let mut cfg = RunConfig::with_suites(&["fay"]).unwrap();
        cfg.samples = 0;
        assert!(cfg.validate().is_err());
        cfg.samples = 1;
        cfg.n_list = vec![0];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn coefficient_keywords() {
        assert_eq!(parse_coefficients("truncated").unwrap(), AnsatzCoefficients::TRUNCATED);
        let a = parse_coefficients("1,1,6.283185307179586i,1,2").unwrap();
        assert_eq!(a.a5, Complex64::new(2.0, 0.0));
        assert!(parse_coefficients("1,2").is_err());
    }
}
