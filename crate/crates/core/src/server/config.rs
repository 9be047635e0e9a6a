//! Server configuration: `key = value` lines plus `ARMORDB_*` environment
//! overrides.
//!
//! ```text
//! listen = 127.0.0.1:7878
//! buffered_manipulation = false
//! continuous_reasoner_update = true
//! mandatory_mount = false
//! reasoner = builtin-el
//! procedures = procs.armorproc
//! preload.map = map.ofn
//! ```

use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use crate::model::name::is_identifier;
use crate::registry::{Flags, RegistryConfig};

pub const DEFAULT_LISTEN: &str = "127.0.0.1:7878";
pub const BUILTIN_REASONER: &str = "builtin-el";
pub const ENV_PREFIX: &str = "ARMORDB_";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ServerConfig {
    pub listen: SocketAddr,
    pub default_flags: Flags,
    pub mandatory_mount: bool,
    pub reasoner: String,
    pub procedures: Option<PathBuf>,
    pub preload: Vec<(String, PathBuf)>,
    /// Directory that relative LOAD and SAVE paths resolve against.
    pub base_dir: PathBuf,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            listen: DEFAULT_LISTEN.parse().expect("valid default address"),
            default_flags: Flags::default(),
            mandatory_mount: false,
            reasoner: BUILTIN_REASONER.to_owned(),
            procedures: None,
            preload: Vec::new(),
            base_dir: PathBuf::from("."),
        }
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("`{key}` expects true or false, found `{value}`")),
    }
}

impl ServerConfig {
    pub fn registry_config(&self) -> RegistryConfig {
        RegistryConfig {
            default_flags: self.default_flags,
            mandatory_mount: self.mandatory_mount,
        }
    }

    fn resolve(&self, p: &str) -> PathBuf {
        let p = Path::new(p);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "listen" => {
                self.listen = value
                    .parse()
                    .map_err(|_| format!("`listen` expects host:port, found `{value}`"))?
            }
            "buffered_manipulation" => {
                self.default_flags.buffered_manipulation = parse_bool(key, value)?
            }
            "continuous_reasoner_update" => {
                self.default_flags.continuous_reasoner_update = parse_bool(key, value)?
            }
            "mandatory_mount" => self.mandatory_mount = parse_bool(key, value)?,
            "reasoner" => self.reasoner = value.to_owned(),
            "procedures" => self.procedures = Some(self.resolve(value)),
            _ => match key.strip_prefix("preload.") {
                Some(name) if is_identifier(name) => {
                    let path = self.resolve(value);
                    match self.preload.iter_mut().find(|(n, _)| n == name) {
                        Some(slot) => slot.1 = path,
                        None => self.preload.push((name.to_owned(), path)),
                    }
                }
                Some(name) => return Err(format!("invalid reference name `{name}`")),
                None => return Err(format!("unknown key `{key}`")),
            },
        }
        Ok(())
    }

    /// Parses config text; relative paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let mut cfg = ServerConfig {
            base_dir: base_dir.to_path_buf(),
            ..ServerConfig::default()
        };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let syntax = |message: String| ConfigError::Syntax {
                line: i + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| syntax("expected `key = value`".into()))?;
            cfg.set(key.trim(), value.trim()).map_err(syntax)?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let base = path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Applies `ARMORDB_<KEY>` overrides, e.g. `ARMORDB_LISTEN` or
    /// `ARMORDB_MANDATORY_MOUNT`. Preloads cannot be set this way.
    pub fn apply_env(
        &mut self,
        vars: impl IntoIterator<Item = (String, String)>,
    ) -> Result<(), ConfigError> {
        for (k, v) in vars {
            let Some(key) = k.strip_prefix(ENV_PREFIX) else {
                continue;
            };
            let key = key.to_ascii_lowercase();
            if key.starts_with("preload") {
                return Err(ConfigError::Invalid(format!(
                    "{k}: preloads are set in the config file only"
                )));
            }
            self.set(&key, &v)
                .map_err(|m| ConfigError::Invalid(format!("{k}: {m}")))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.reasoner != BUILTIN_REASONER {
            return Err(ConfigError::Invalid(format!(
                "unknown reasoner `{}` (only `{BUILTIN_REASONER}` is available)",
                self.reasoner
            )));
        }
        Ok(())
    }
}
