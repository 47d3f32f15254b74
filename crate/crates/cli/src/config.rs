//! TOML scenario configuration: parsing, validation, and conversion
//! into the core model types.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

use ringwalk_core::{CavityConfig, PlateKind, PulseModel, QPlateSpec, SorterDesign, WaveplateSpec};

/// Wave-plate coin specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoinSpec {
    /// "quarter" or "half".
    pub kind: String,
    pub angle_deg: f64,
}

impl CoinSpec {
    pub fn to_plate(&self) -> Result<WaveplateSpec> {
        let kind = match self.kind.as_str() {
            "quarter" => PlateKind::Quarter,
            "half" => PlateKind::Half,
            other => bail!("walk.coin.kind: expected \"quarter\" or \"half\", got \"{other}\""),
        };
        Ok(WaveplateSpec::new(kind, self.angle_deg))
    }
}

/// Walk parameters for the lattice scenarios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    /// Coin plate applied after each q-plate pass; absent means the
    /// bare NOT walk.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coin: Option<CoinSpec>,
    /// Quarter-wave-plate angles for sweep scenarios.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_angles_deg: Option<Vec<f64>>,
    /// Orientation of the half-wave plate preparing the input
    /// polarization from vertical.
    pub init_hwp_deg: f64,
    /// q-plate charge (2q must be a nonzero integer).
    pub q: f64,
    /// Number of walk steps.
    pub steps: usize,
}

impl WalkConfig {
    pub fn qplate(&self) -> Result<QPlateSpec> {
        QPlateSpec::new(self.q).with_context(|| format!("walk.q = {}", self.q))
    }
}

/// Cavity overlap-model parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CavityToml {
    pub round_trip_ns: f64,
    pub transmission: f64,
    pub pulse_window_ns: f64,
    pub gate_width_ns: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pulse: Option<PulseToml>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseToml {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub k: f64,
}

impl CavityToml {
    pub fn to_cavity(&self) -> Result<CavityConfig> {
        let pulse = match &self.pulse {
            Some(p) => PulseModel::new(p.a, p.b, p.c, p.k)
                .with_context(|| format!("cavity.pulse = {p:?}"))?,
            None => PulseModel::canonical(),
        };
        CavityConfig::new(
            self.round_trip_ns,
            self.transmission,
            pulse,
            self.pulse_window_ns,
            self.gate_width_ns,
        )
        .context("cavity")
    }

    pub fn canonical() -> Self {
        CavityToml {
            round_trip_ns: 10.0,
            transmission: 0.5,
            pulse_window_ns: 40.0,
            gate_width_ns: 10.0,
            pulse: None,
        }
    }
}

/// Sorter build parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SorterToml {
    pub d_mm: f64,
    pub f_mm: f64,
    pub wavelength_nm: f64,
    pub copies: usize,
}

impl SorterToml {
    pub fn to_design(&self) -> Result<SorterDesign> {
        SorterDesign::new(
            self.d_mm * 1e-3,
            self.f_mm * 1e-3,
            self.wavelength_nm * 1e-9,
            self.copies,
        )
        .with_context(|| format!("sorter = {self:?}"))
    }
}

/// One scenario run, as stored in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    /// Registered scenario name; see `list-scenarios`.
    pub scenario: String,
    /// Output directory; created if missing. Overridden by the
    /// RINGWALK_OUTPUT_DIR environment variable.
    pub output_dir: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walk: Option<WalkConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cavity: Option<CavityToml>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sorter: Option<SorterToml>,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).context("config parse error")
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).context("config serialize error")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_toml(&text)
    }
}
