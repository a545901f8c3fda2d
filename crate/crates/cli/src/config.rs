//! Settings file named by `PDRANK_CONFIG`; keys mirror the command-line flags.
//! Flags given on the command line take precedence.

use std::path::Path;

use serde::Deserialize;

pub const ENV_VAR: &str = "PDRANK_CONFIG";

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub k: Option<u32>,
    pub format: Option<String>,
    pub order: Option<String>,
    pub order_dir: Option<String>,
    pub vertex_trials: Option<usize>,
    pub seed: Option<u64>,
    pub budget: Option<u64>,
    pub max_rows: Option<usize>,
    pub max_cols: Option<usize>,
    pub elimination_budget: Option<u64>,
    pub max_ground: Option<usize>,
    pub threads: Option<usize>,
    pub oracle: Option<bool>,
    pub samples: Option<usize>,
    pub timings: Option<bool>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// The file named by the environment variable, or defaults when unset.
    pub fn from_env() -> Result<Self, String> {
        match std::env::var_os(ENV_VAR) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_kebab_case() {
        let c = FileConfig::parse("k = 2\nmax-rows = 10\norder-dir = \"max\"\noracle = true\n").unwrap();
        assert_eq!(c.k, Some(2));
        assert_eq!(c.max_rows, Some(10));
        assert_eq!(c.order_dir.as_deref(), Some("max"));
        assert_eq!(c.oracle, Some(true));
        assert!(FileConfig::parse("max_rows = 10").is_err());
        assert!(FileConfig::parse("k = -1").is_err());
    }
}
