// SPDX-License-Identifier: Apache-2.0

//! Project configuration file (TOML). Relative paths are resolved against
//! the directory holding the file.
//!
//! ```toml
//! rtl_paths = ["rtl"]
//! db_path = "regs.csv"
//! out_dir = "gen"
//! map_path = "soc.map"
//!
//! [naming]
//! control = "cfg_"
//! mode = "prefix"
//!
//! [emit]
//! block_name = "periph"
//! base_address = 0x70000000
//! region_size = 0x1000
//! diag_pins = 2
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

/// Environment variable naming the config file.
pub const CONFIG_ENV: &str = "CHIPKIT_CONFIG";

/// Picked up from the working directory when no other config is named.
pub const DEFAULT_CONFIG_FILE: &str = "chipkit.toml";

#[derive(Debug, Clone, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ProjectConfig {
    #[serde(default)]
    pub rtl_paths: Vec<PathBuf>,
    pub db_path: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub map_path: Option<PathBuf>,
    pub pads_path: Option<PathBuf>,
    pub sram_mode: Option<String>,
    pub listen_port: Option<u16>,
    #[serde(default)]
    pub naming: NamingSection,
    #[serde(default)]
    pub emit: EmitSection,
    #[serde(default)]
    pub lint: LintSection,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct NamingSection {
    pub control: Option<String>,
    pub status: Option<String>,
    pub diag: Option<String>,
    pub mode: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct EmitSection {
    pub block_name: Option<String>,
    pub base_address: Option<u32>,
    pub region_size: Option<u32>,
    /// Memory-map region that hosts the CSR block.
    pub csr_region: Option<String>,
    pub targets: Option<Vec<String>>,
    pub unmapped_value: Option<u32>,
    pub diag_pins: Option<u32>,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LintSection {
    #[serde(default)]
    pub disabled: Vec<String>,
    pub enforce_ff_macro: Option<bool>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config {}: {source}", path.display())]
    Parse { path: PathBuf, source: toml::de::Error },
}

impl ProjectConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, toml::de::Error> {
        let mut cfg: ProjectConfig = toml::from_str(text)?;
        cfg.resolve(base_dir);
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let dir = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, dir).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Loads the explicit path, else `$CHIPKIT_CONFIG`, else defaults.
    pub fn discover(explicit: Option<&Path>) -> Result<Self, ConfigError> {
        match explicit {
            Some(p) => Self::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
                _ if Path::new(DEFAULT_CONFIG_FILE).is_file() => Self::load(Path::new(DEFAULT_CONFIG_FILE)),
                _ => Ok(Self::default()),
            },
        }
    }

    fn resolve(&mut self, dir: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        self.rtl_paths.iter_mut().for_each(fix);
        for p in [
            &mut self.db_path,
            &mut self.out_dir,
            &mut self.map_path,
            &mut self.pads_path,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
    }
}
