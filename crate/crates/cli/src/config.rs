//! Run settings. Precedence: command-line flags, then `TVK_*` environment
//! variables, then a JSON config file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use tvk_core::PrecisionPolicy;

use crate::CliError;

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub digits: Option<u32>,
    pub cache_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub tolerance: Option<f64>,
    pub max_terms: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }

    fn from_env(get: &dyn Fn(&str) -> Option<String>) -> Result<Self, CliError> {
        fn num<T: std::str::FromStr>(key: &str, v: Option<String>) -> Result<Option<T>, CliError> {
            v.map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("{key}={s} is not a valid number")))
            })
            .transpose()
        }
        Ok(FileConfig {
            digits: num("TVK_DIGITS", get("TVK_DIGITS"))?,
            cache_dir: get("TVK_CACHE_DIR").map(PathBuf::from),
            jobs: num("TVK_JOBS", get("TVK_JOBS"))?,
            tolerance: num("TVK_TOLERANCE", get("TVK_TOLERANCE"))?,
            max_terms: num("TVK_MAX_TERMS", get("TVK_MAX_TERMS"))?,
        })
    }

    /// `self` wins wherever it is set.
    fn over(self, lower: FileConfig) -> FileConfig {
        FileConfig {
            digits: self.digits.or(lower.digits),
            cache_dir: self.cache_dir.or(lower.cache_dir),
            jobs: self.jobs.or(lower.jobs),
            tolerance: self.tolerance.or(lower.tolerance),
            max_terms: self.max_terms.or(lower.max_terms),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub digits: u32,
    pub cache_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    /// Tolerance for exact identities; oracle checks carry their own.
    pub tolerance: f64,
    /// Ceiling on outer series terms per T̃ value.
    pub max_terms: usize,
}

pub const DEFAULT_DIGITS: u32 = 30;
pub const DEFAULT_TOLERANCE: f64 = 1e-20;

impl Settings {
    /// Layers flags over the environment over the config file.
    pub fn resolve(
        flags: FileConfig,
        config_path: Option<&Path>,
        env: &dyn Fn(&str) -> Option<String>,
    ) -> Result<Self, CliError> {
        let env_cfg = FileConfig::from_env(env)?;
        let path = config_path
            .map(Path::to_path_buf)
            .or_else(|| env("TVK_CONFIG").map(PathBuf::from));
        let file = match path {
            Some(p) => FileConfig::load(&p)?,
            None => FileConfig::default(),
        };
        let c = flags.over(env_cfg).over(file);
        let digits = c.digits.unwrap_or(DEFAULT_DIGITS);
        if !(5..=500).contains(&digits) {
            return Err(CliError::Usage(format!("digits must be in 5..=500, got {digits}")));
        }
        let tolerance = c.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(CliError::Usage(format!("tolerance must be positive, got {tolerance}")));
        }
        Ok(Settings {
            digits,
            cache_dir: c.cache_dir,
            jobs: c.jobs,
            tolerance,
            max_terms: c.max_terms.unwrap_or(PrecisionPolicy::default().max_outer_terms),
        })
    }

    pub fn policy(&self) -> PrecisionPolicy {
        PrecisionPolicy {
            max_outer_terms: self.max_terms,
            ..PrecisionPolicy::with_digits(self.digits)
        }
    }

    pub fn from_process_env(flags: FileConfig, config_path: Option<&Path>) -> Result<Self, CliError> {
        Self::resolve(flags, config_path, &|k| std::env::var(k).ok())
    }
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            digits: DEFAULT_DIGITS,
            cache_dir: None,
            jobs: None,
            tolerance: DEFAULT_TOLERANCE,
            max_terms: PrecisionPolicy::default().max_outer_terms,
        }
    }
}
