use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use prdepth::{Error, InnerEstimatorSpec};

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Lib(Error),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io(_) => 2,
            Self::Lib(e) if e.is_numerical() => 4,
            Self::Lib(_) => 3,
            Self::Internal(_) => 5,
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Self::Lib(Error::InvalidInput(msg.into()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Io(msg) => write!(f, "i/o error: {msg}"),
            Self::Lib(e) => write!(f, "{e}"),
            Self::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Lib(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Every flag a config file may set.
const KNOWN_KEYS: &[&str] = &[
    "beta", "data", "eps", "escape-threshold", "estimator", "inner", "n", "n-beta", "n-dir", "n-rep", "n-values",
    "no-intercept", "objective", "out", "p", "plot-data", "pwm-c", "pwm-k", "refine-max-iter", "refine-tol",
    "replications", "scenario", "seed", "sigma", "synthetic", "threads", "timing", "x-dist", "x0", "y0",
];

/// Flag values merged over a `key = value` config file. Keys are flag names
/// without the leading dashes; `_` and `-` are interchangeable.
pub struct Settings {
    file: BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let file = match path {
            Some(p) => prdepth::io::parse_config(&read_file(p)?)?
                .into_iter()
                .map(|(k, v)| (k.replace('_', "-"), v))
                .collect(),
            None => BTreeMap::new(),
        };
        if let Some(key) = file.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
            return Err(CliError::Lib(Error::Parse { line: 0, msg: format!("unknown config key '{key}'") }));
        }
        Ok(Self { file, used: RefCell::new(BTreeSet::new()) })
    }

    fn lookup(&self, key: &str) -> Option<&str> {
        let v = self.file.get(key)?;
        self.used.borrow_mut().insert(key.to_string());
        Some(v)
    }

    /// The flag if given, else the config entry parsed as `T`.
    pub fn value<T>(&self, key: &str, flag: Option<T>) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        let from_file = self.lookup(key);
        if flag.is_some() {
            return Ok(flag);
        }
        from_file
            .map(|raw| {
                raw.parse::<T>()
                    .map_err(|e| CliError::Lib(Error::Parse { line: 0, msg: format!("config key '{key}': {e}") }))
            })
            .transpose()
    }

    pub fn value_or<T>(&self, key: &str, flag: Option<T>, default: T) -> CliResult<T>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        Ok(self.value(key, flag)?.unwrap_or(default))
    }

    pub fn switch(&self, key: &str, flag: bool) -> CliResult<bool> {
        Ok(flag || self.value::<bool>(key, None)?.unwrap_or(false))
    }

    pub fn path(&self, key: &str, flag: Option<PathBuf>) -> Option<PathBuf> {
        let from_file = self.lookup(key).map(PathBuf::from);
        flag.or(from_file)
    }

    /// Rejects config entries that no flag of the command consumed.
    pub fn finish(&self) -> CliResult<()> {
        let used = self.used.borrow();
        let unknown: Vec<&str> = self.file.keys().filter(|k| !used.contains(*k)).map(String::as_str).collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(CliError::Lib(Error::Parse {
                line: 0,
                msg: format!("config keys not used by this command: {}", unknown.join(", ")),
            }))
        }
    }

    pub fn inner(&self, kind: Option<String>, k: Option<f64>, c: Option<f64>) -> CliResult<InnerEstimatorSpec> {
        let kind = self.value_or("inner", kind, "median".to_string())?;
        let k = self.value("pwm-k", k)?;
        let c = self.value("pwm-c", c)?;
        match kind.trim() {
            "median" if k.is_none() && c.is_none() => Ok(InnerEstimatorSpec::Median),
            "median" => Err(CliError::invalid("pwm-k and pwm-c need inner = pwm")),
            "pwm" => Ok(InnerEstimatorSpec::pwm(
                k.unwrap_or(InnerEstimatorSpec::DEFAULT_PWM_K),
                c.unwrap_or(InnerEstimatorSpec::DEFAULT_PWM_C),
            )?),
            other => Err(CliError::invalid(format!("unknown inner estimator '{other}' (median, pwm)"))),
        }
    }
}

/// A real written either plainly or as `a/b`.
pub fn parse_ratio(s: &str) -> CliResult<f64> {
    let bad = || CliError::Lib(Error::Parse { line: 0, msg: format!("'{s}' is not a number or fraction") });
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            a / b
        }
        None => s.trim().parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

pub fn parse_sizes(s: &str) -> CliResult<Vec<usize>> {
    prdepth::io::parse_real_list(s)?
        .into_iter()
        .map(|v| {
            if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v as usize)
            } else {
                Err(CliError::Lib(Error::Parse { line: 0, msg: format!("'{v}' is not a sample size") }))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(text: &str) -> Settings {
        let file = prdepth::io::parse_config(text).unwrap().into_iter().map(|(k, v)| (k.replace('_', "-"), v)).collect();
        Settings { file, used: RefCell::new(BTreeSet::new()) }
    }

    #[test]
    fn flags_override_file() {
        let s = settings("seed = 4\nn_dir = 50\n");
        assert_eq!(s.value("seed", Some(9u64)).unwrap(), Some(9));
        assert_eq!(s.value::<usize>("n-dir", None).unwrap(), Some(50));
        assert_eq!(s.value::<usize>("n-beta", None).unwrap(), None);
        assert!(s.finish().is_ok());
    }

    #[test]
    fn unused_and_bad_keys() {
        let s = settings("bogus = 1\n");
        assert!(s.finish().is_err());
        let s = settings("seed = x\n");
        assert!(s.value::<u64>("seed", None).is_err());
    }

    #[test]
    fn ratios_and_sizes() {
        assert_eq!(parse_ratio("1/4").unwrap(), 0.25);
        assert_eq!(parse_ratio("0.3").unwrap(), 0.3);
        assert!(parse_ratio("1/0").is_err());
        assert_eq!(parse_sizes("10, 20 40").unwrap(), vec![10, 20, 40]);
        assert!(parse_sizes("2.5").is_err());
    }
}
