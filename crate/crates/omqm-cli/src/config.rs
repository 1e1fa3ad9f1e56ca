//! Flat JSON configuration with dotted keys, a strict whitelist, and
//! defaults → file → flags precedence.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use omqm_core::omcore::{default_alpha_tilde, OmConstants, SpinSign, RING_DIMENSION};
use serde_json::Value;

/// A configuration problem: bad file, unknown key, or wrong value type.
/// Reported on exit status 2 alongside usage errors.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Every key a config file may define. Anything else is rejected.
pub const ALLOWED_KEYS: &[&str] = &[
    "global.seed",
    "global.out_dir",
    "global.svg",
    "global.s_tilde_sign",
    "global.alpha_tilde",
    "global.dimension",
    "born.samples",
    "collapse.path",
    "zeros.precision",
    "chaos.feigenbaum_levels",
    "chaos.a",
    "chaos.b",
    "chaos.c",
    "chaos.dt",
    "chaos.t_total",
    "weierstrass.grid",
    "weierstrass.extent",
    "numtheory.table_bound",
];

/// Parsed config file contents (possibly empty when no file is in play).
#[derive(Debug, Default)]
pub struct FileConfig {
    values: BTreeMap<String, Value>,
}

impl FileConfig {
    /// Load and validate a config file: a single flat JSON object whose keys
    /// all come from [`ALLOWED_KEYS`].
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        let parsed: Value = serde_json::from_str(&text)
            .map_err(|e| ConfigError(format!("config {} is not valid JSON: {e}", path.display())))?;
        let object = parsed
            .as_object()
            .ok_or_else(|| ConfigError(format!("config {} must be a JSON object", path.display())))?;
        let mut values = BTreeMap::new();
        for (key, value) in object {
            if !ALLOWED_KEYS.contains(&key.as_str()) {
                return Err(ConfigError(format!(
                    "unknown config key {key:?} (allowed: {})",
                    ALLOWED_KEYS.join(", ")
                )));
            }
            values.insert(key.clone(), value.clone());
        }
        Ok(FileConfig { values })
    }

    /// Resolve which config file to read: an explicit `--config` path wins,
    /// then the `OMQM_CONFIG` environment variable, then no file at all.
    /// A named file that does not exist is an error in both explicit cases.
    pub fn resolve(explicit: Option<&Path>) -> Result<Self, ConfigError> {
        if let Some(path) = explicit {
            return Self::load(path);
        }
        match std::env::var_os("OMQM_CONFIG") {
            Some(path) if !path.is_empty() => Self::load(Path::new(&path)),
            _ => Ok(FileConfig::default()),
        }
    }

    fn get(&self, key: &str) -> Option<&Value> {
        debug_assert!(ALLOWED_KEYS.contains(&key), "getter for unlisted key {key}");
        self.values.get(key)
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(Some)
                .ok_or_else(|| ConfigError(format!("config key {key} must be a non-negative integer"))),
        }
    }

    pub fn get_i64(&self, key: &str) -> Result<Option<i64>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_i64()
                .map(Some)
                .ok_or_else(|| ConfigError(format!("config key {key} must be an integer"))),
        }
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| ConfigError(format!("config key {key} must be a number"))),
        }
    }

    pub fn get_bool(&self, key: &str) -> Result<Option<bool>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_bool()
                .map(Some)
                .ok_or_else(|| ConfigError(format!("config key {key} must be true or false"))),
        }
    }

    pub fn get_str(&self, key: &str) -> Result<Option<&str>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_str()
                .map(Some)
                .ok_or_else(|| ConfigError(format!("config key {key} must be a string"))),
        }
    }
}

/// Fully-resolved global settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Globals {
    /// Base RNG seed for sampling commands.
    pub seed: u64,
    /// Directory all outputs are written into.
    pub out_dir: PathBuf,
    /// Whether SVG plots are emitted where supported.
    pub svg: bool,
    /// Resolved sign of the spin constant, recorded as ±1.
    pub s_tilde_sign: i8,
    /// Resolved unit loop volume.
    pub alpha_tilde: f64,
    /// Resolved ring dimension for scaling reports.
    pub dimension: f64,
    /// The constant set handed to the core modules.
    pub constants: OmConstants,
}

/// The global CLI flags before resolution (shapes the precedence chain).
#[derive(Debug, Default)]
pub struct GlobalFlags {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub svg: bool,
    pub s_tilde_sign: Option<i8>,
    pub alpha_tilde: Option<f64>,
    pub dimension: Option<f64>,
}

/// Default RNG seed: an arbitrary fixed value so bare runs are reproducible.
pub const DEFAULT_SEED: u64 = 1729;

pub fn resolve_globals(flags: &GlobalFlags, file: &FileConfig) -> Result<Globals, ConfigError> {
    let seed = match flags.seed {
        Some(s) => s,
        None => file.get_u64("global.seed")?.unwrap_or(DEFAULT_SEED),
    };
    let out_dir = match &flags.out_dir {
        Some(dir) => dir.clone(),
        None => file
            .get_str("global.out_dir")?
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("out")),
    };
    let svg = flags.svg || file.get_bool("global.svg")?.unwrap_or(false);
    let sign_value = match flags.s_tilde_sign {
        Some(s) => i64::from(s),
        None => file.get_i64("global.s_tilde_sign")?.unwrap_or(1),
    };
    let sign = match sign_value {
        1 => SpinSign::Plus,
        -1 => SpinSign::Minus,
        other => {
            return Err(ConfigError(format!(
                "s_tilde_sign must be +1 or -1, got {other}"
            )))
        }
    };
    let dimension = match flags.dimension {
        Some(d) => d,
        None => file.get_f64("global.dimension")?.unwrap_or(RING_DIMENSION),
    };
    if !(dimension.is_finite() && dimension > 0.0) {
        return Err(ConfigError(format!(
            "dimension must be a positive number, got {dimension}"
        )));
    }
    let alpha_tilde = match flags.alpha_tilde {
        Some(a) => a,
        None => file
            .get_f64("global.alpha_tilde")?
            .unwrap_or_else(|| default_alpha_tilde(dimension)),
    };
    if !(alpha_tilde.is_finite() && alpha_tilde > 0.0) {
        return Err(ConfigError(format!(
            "alpha_tilde must be a positive number, got {alpha_tilde}"
        )));
    }
    Ok(Globals {
        seed,
        out_dir,
        svg,
        s_tilde_sign: if sign_value == 1 { 1 } else { -1 },
        alpha_tilde,
        dimension,
        constants: OmConstants::with_alpha(sign, alpha_tilde),
    })
}
