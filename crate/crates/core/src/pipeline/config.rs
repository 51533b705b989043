//! Settings resolved from flags, `SVGFORGE_*` variables, a TOML file and defaults,
//! in that order of precedence.

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::augment::{AugmentError, AugmentOps, AugmentSpec};
use crate::model::Rgb;
use crate::parser::parse_color;
use crate::rewards::{MatchSemantics, RewardParams};
use crate::verify::DEFAULT_TOLERANCE;

use super::curriculum::DEFAULT_EPOCHS;

pub const ENV_PREFIX: &str = "SVGFORGE_";

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {message}")]
    File { path: String, message: String },
    #[error("invalid value for {key} from {origin}: {message}")]
    Value {
        key: &'static str,
        origin: String,
        message: String,
    },
}

/// Every setting as optional, one layer of the precedence chain.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialSettings {
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub quiet: Option<bool>,
    pub strict: Option<bool>,
    pub tolerance: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub semantics: Option<String>,
    pub epochs: Option<Vec<u32>>,
    pub n_variants: Option<usize>,
    pub palette: Option<Vec<String>>,
    pub allow_overlap_swap: Option<bool>,
    pub ops: Option<String>,
}

impl PartialSettings {
    pub fn from_toml_file(path: &Path) -> Result<Self, ConfigError> {
        let file_err = |message: String| ConfigError::File {
            path: path.display().to_string(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| file_err(e.to_string()))?;
        toml::from_str(&text).map_err(|e| file_err(e.to_string()))
    }

    /// Reads `SVGFORGE_<KEY>` variables through `lookup`.
    pub fn from_env(lookup: impl Fn(&str) -> Option<String>) -> Result<Self, ConfigError> {
        let get = |key: &'static str| lookup(&format!("{ENV_PREFIX}{}", key.to_ascii_uppercase()));
        let origin = |key: &str| format!("{ENV_PREFIX}{}", key.to_ascii_uppercase());
        fn parsed<T: std::str::FromStr>(
            key: &'static str,
            raw: Option<String>,
            origin: String,
        ) -> Result<Option<T>, ConfigError>
        where
            T::Err: std::fmt::Display,
        {
            raw.map(|s| {
                s.trim().parse::<T>().map_err(|e| ConfigError::Value {
                    key,
                    origin,
                    message: e.to_string(),
                })
            })
            .transpose()
        }
        let list = |raw: Option<String>| {
            raw.map(|s| s.split(',').map(|p| p.trim().to_owned()).filter(|p| !p.is_empty()).collect::<Vec<_>>())
        };
        let epochs = match list(get("epochs")) {
            None => None,
            Some(parts) => Some(
                parts
                    .iter()
                    .map(|p| p.parse::<u32>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| ConfigError::Value {
                        key: "epochs",
                        origin: origin("epochs"),
                        message: e.to_string(),
                    })?,
            ),
        };
        Ok(Self {
            jobs: parsed("jobs", get("jobs"), origin("jobs"))?,
            seed: parsed("seed", get("seed"), origin("seed"))?,
            quiet: parsed("quiet", get("quiet"), origin("quiet"))?,
            strict: parsed("strict", get("strict"), origin("strict"))?,
            tolerance: parsed("tolerance", get("tolerance"), origin("tolerance"))?,
            alpha: parsed("alpha", get("alpha"), origin("alpha"))?,
            beta: parsed("beta", get("beta"), origin("beta"))?,
            gamma: parsed("gamma", get("gamma"), origin("gamma"))?,
            semantics: get("semantics"),
            epochs,
            n_variants: parsed("n_variants", get("n_variants"), origin("n_variants"))?,
            palette: list(get("palette")),
            allow_overlap_swap: parsed("allow_overlap_swap", get("allow_overlap_swap"), origin("allow_overlap_swap"))?,
            ops: get("ops"),
        })
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: PartialSettings) -> PartialSettings {
        PartialSettings {
            jobs: over.jobs.or(self.jobs),
            seed: over.seed.or(self.seed),
            quiet: over.quiet.or(self.quiet),
            strict: over.strict.or(self.strict),
            tolerance: over.tolerance.or(self.tolerance),
            alpha: over.alpha.or(self.alpha),
            beta: over.beta.or(self.beta),
            gamma: over.gamma.or(self.gamma),
            semantics: over.semantics.or(self.semantics),
            epochs: over.epochs.or(self.epochs),
            n_variants: over.n_variants.or(self.n_variants),
            palette: over.palette.or(self.palette),
            allow_overlap_swap: over.allow_overlap_swap.or(self.allow_overlap_swap),
            ops: over.ops.or(self.ops),
        }
    }
}

/// Fully resolved settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    /// Worker threads; 0 means one per core.
    pub jobs: usize,
    pub seed: u64,
    pub quiet: bool,
    pub strict: bool,
    pub tolerance: f64,
    pub reward: RewardParams,
    pub epochs: [u32; 4],
    pub augment: AugmentSpec,
    pub ops: AugmentOps,
}

impl Settings {
    /// Resolves `flags > env > file > defaults`.
    pub fn resolve(
        file: Option<&Path>,
        env: impl Fn(&str) -> Option<String>,
        flags: PartialSettings,
    ) -> Result<Settings, ConfigError> {
        let from_file = match file {
            Some(path) => PartialSettings::from_toml_file(path)?,
            None => PartialSettings::default(),
        };
        let merged = from_file.overlay(PartialSettings::from_env(env)?).overlay(flags);
        Settings::from_partial(merged)
    }

    pub fn from_partial(p: PartialSettings) -> Result<Settings, ConfigError> {
        let invalid = |key: &'static str, message: String| ConfigError::Value {
            key,
            origin: "settings".to_owned(),
            message,
        };
        let semantics = match p.semantics.as_deref().map(str::to_ascii_lowercase).as_deref() {
            None | Some("prose") | Some("prose_consistent") => MatchSemantics::ProseConsistent,
            Some("literal") | Some("literal_formula") => MatchSemantics::LiteralFormula,
            Some(other) => return Err(invalid("semantics", format!("unknown semantics {other:?}"))),
        };
        let reward = RewardParams::new(
            p.alpha.unwrap_or(1.0),
            p.beta.unwrap_or(1.0),
            p.gamma.unwrap_or(1.0),
            semantics,
        )
        .map_err(|e| invalid("alpha/beta/gamma", e.to_string()))?;
        let epochs = match p.epochs {
            None => DEFAULT_EPOCHS,
            Some(v) => <[u32; 4]>::try_from(v.as_slice())
                .map_err(|_| invalid("epochs", format!("expected 4 values, got {}", v.len())))?,
        };
        let palette = p
            .palette
            .map(|colors| {
                colors
                    .iter()
                    .map(|c| parse_color(c).ok_or_else(|| invalid("palette", format!("not a color: {c:?}"))))
                    .collect::<Result<Vec<Rgb>, _>>()
            })
            .transpose()?;
        let seed = p.seed.unwrap_or(0);
        let augment = AugmentSpec::new(
            seed,
            p.n_variants.unwrap_or(1),
            palette,
            p.allow_overlap_swap.unwrap_or(false),
        )
        .map_err(|e: AugmentError| invalid("augment", e.to_string()))?;
        let ops = match p.ops.as_deref() {
            None => AugmentOps::default(),
            Some(s) => AugmentOps::parse(s).ok_or_else(|| invalid("ops", format!("unknown ops {s:?}")))?,
        };
        let tolerance = p.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(invalid("tolerance", format!("must be positive, got {tolerance}")));
        }
        Ok(Settings {
            jobs: p.jobs.unwrap_or(0),
            seed,
            quiet: p.quiet.unwrap_or(false),
            strict: p.strict.unwrap_or(false),
            tolerance,
            reward,
            epochs,
            augment,
            ops,
        })
    }
}

impl Default for Settings {
    fn default() -> Self {
        Settings::from_partial(PartialSettings::default()).expect("defaults are valid")
    }
}
