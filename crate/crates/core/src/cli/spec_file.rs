//! The JSON race description read by every command except `divergence`.
//!
//! ```json
//! {
//!   "horses": [{ "p": 0.6, "odds": 2.0 }, { "p": 0.4, "odds": 2.0 }],
//!   "side_info": { "signals": ["dry", "wet"], "joint": [[0.4, 0.1], [0.2, 0.3]] },
//!   "beta": "0.5",
//!   "mode": "full"
//! }
//! ```
//!
//! `joint` has one row per signal and one column per horse. A horse's `p` may
//! be omitted when `side_info` is present; if given it must match the
//! column sums of `joint`.

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::market::{RaceMarket, SideInfoMarket, NORMALIZATION_TOLERANCE};
use crate::strategy::BetaParam;
use crate::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RaceSpecFile {
    pub horses: Vec<HorseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_info: Option<SideInfoSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<BetaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HorseSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub odds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideInfoSpec {
    pub signals: Vec<String>,
    pub joint: Vec<Vec<f64>>,
}

/// `beta` may be written as a number or as `"kelly"`, `"+inf"`, `"-inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BetaSpec {
    Number(f64),
    Text(String),
}

impl BetaSpec {
    pub fn to_param(&self) -> Result<BetaParam, CliError> {
        match self {
            BetaSpec::Number(b) => BetaParam::finite(*b),
            BetaSpec::Text(s) => s.parse(),
        }
        .map_err(|e| CliError::Input(format!("beta: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Full,
    Partial,
    SideInfo,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::Partial => "partial",
            Mode::SideInfo => "side-info",
        }
    }
}

impl RaceSpecFile {
    /// Parses JSON, reporting the path of the offending field on failure.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Input(format!("{path}: {}", e.into_inner()))
        })?;
        if spec.horses.is_empty() {
            return Err(CliError::Input("horses: at least one horse is required".into()));
        }
        Ok(spec)
    }

    pub fn odds(&self) -> Vec<f64> {
        self.horses.iter().map(|h| h.odds).collect()
    }

    /// Market without side information; every horse needs `p`.
    pub fn race_market(&self) -> Result<RaceMarket, CliError> {
        let probs = self
            .horses
            .iter()
            .enumerate()
            .map(|(i, h)| h.p.ok_or_else(|| CliError::Input(format!("horses[{i}].p: missing"))))
            .collect::<Result<Vec<_>, _>>()?;
        RaceMarket::new(probs, self.odds()).map_err(|e| CliError::Input(horse_field(&e)))
    }

    pub fn side_info_market(&self) -> Result<SideInfoMarket, CliError> {
        let info = self
            .side_info
            .as_ref()
            .ok_or_else(|| CliError::Incompatible("side-info mode needs a side_info block".into()))?;
        if info.signals.len() != info.joint.len() {
            return Err(CliError::Input(format!(
                "side_info.joint: {} rows for {} signals",
                info.joint.len(),
                info.signals.len()
            )));
        }
        if let Some((y, row)) = info.joint.iter().enumerate().find(|(_, r)| r.len() != self.horses.len()) {
            return Err(CliError::Input(format!(
                "side_info.joint[{y}]: {} columns for {} horses",
                row.len(),
                self.horses.len()
            )));
        }
        let market = SideInfoMarket::new(info.joint.clone(), self.odds()).map_err(|e| {
            CliError::Input(match e {
                Error::NonPositiveOdds { .. } => horse_field(&e),
                Error::ZeroSignalProbability { index } => {
                    format!("side_info.joint[{index}]: signal has zero probability")
                }
                other => format!("side_info.joint: {other}"),
            })
        })?;
        let marginal = market.horse_probs();
        for (i, (h, px)) in self.horses.iter().zip(marginal).enumerate() {
            if let Some(p) = h.p {
                if (p - px).abs() > NORMALIZATION_TOLERANCE {
                    return Err(CliError::Input(format!(
                        "horses[{i}].p: {p} disagrees with side_info.joint column sum {px}"
                    )));
                }
            }
        }
        Ok(market)
    }
}

fn horse_field(e: &Error) -> String {
    match e {
        Error::NonPositiveProbability { index, .. } => format!("horses[{index}].p: {e}"),
        Error::NonPositiveOdds { index, .. } => format!("horses[{index}].odds: {e}"),
        Error::NotNormalized { .. } => format!("horses[*].p: {e}"),
        other => format!("horses: {other}"),
    }
}
