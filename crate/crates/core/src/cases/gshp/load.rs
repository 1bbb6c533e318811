use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{VoiError, VoiResult};
use crate::math::{cos, exp};

pub const HOURS_PER_YEAR: usize = 8760;

/// Relative tolerance on annual energy.
pub const ANNUAL_TOLERANCE: f64 = 0.01;
/// Relative tolerance on peak and mean power.
pub const POWER_TOLERANCE: f64 = 0.02;

/// Shape and targets of the synthetic heating load.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct LoadProfileParams {
    /// kWh/year
    pub annual_energy: f64,
    /// kW
    pub peak_power: f64,
    /// Relative amplitude of the annual cosine.
    pub seasonal_amplitude: f64,
    /// Relative amplitude of the morning/evening heating peaks.
    pub diurnal_amplitude: f64,
    /// Day of year (0-based) at which the seasonal term peaks.
    pub peak_day: f64,
}

impl Default for LoadProfileParams {
    fn default() -> Self {
        Self {
            annual_energy: 116_000.0,
            peak_power: 25.2,
            seasonal_amplitude: 1.0,
            diurnal_amplitude: 0.1,
            peak_day: 15.0,
        }
    }
}

/// One representative year of hourly heating demand in kW.
#[derive(Debug, Clone, PartialEq)]
pub struct HourlyLoadProfile {
    values: Vec<f64>,
}

impl HourlyLoadProfile {
    /// Accept user data. Structural problems are errors; deviations from the
    /// reference annual energy, peak and mean are returned as warnings.
    pub fn from_values(values: Vec<f64>) -> VoiResult<(Self, Vec<String>)> {
        if values.len() != HOURS_PER_YEAR {
            return Err(VoiError::LoadProfile(format!(
                "expected {HOURS_PER_YEAR} hourly values, got {}",
                values.len()
            )));
        }
        if let Some((hour, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(VoiError::LoadProfile(format!("hour {hour}: invalid load {v}")));
        }
        let profile = Self { values };
        let warnings = profile.target_deviations(&LoadProfileParams::default());
        Ok((profile, warnings))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// kWh over the year.
    pub fn annual_energy(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn peak(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.annual_energy() / self.values.len() as f64
    }

    fn target_deviations(&self, target: &LoadProfileParams) -> Vec<String> {
        let mut out = Vec::new();
        let target_mean = target.annual_energy / HOURS_PER_YEAR as f64;
        for (what, got, want, tol) in [
            ("annual energy (kWh)", self.annual_energy(), target.annual_energy, ANNUAL_TOLERANCE),
            ("peak power (kW)", self.peak(), target.peak_power, POWER_TOLERANCE),
            ("mean power (kW)", self.mean(), target_mean, POWER_TOLERANCE),
        ] {
            if (got - want).abs() > tol * want {
                out.push(format!("{what} {got:.3} deviates from {want:.3} by more than {:.0}%", tol * 100.0));
            }
        }
        out
    }
}

/// Unit-free shape: seasonal cosine times a two-peak diurnal pattern.
fn raw_shape(hour: usize, params: &LoadProfileParams) -> f64 {
    let day = hour as f64 / 24.0;
    let h = (hour % 24) as f64;
    let seasonal = 1.0 + params.seasonal_amplitude * cos(2.0 * PI * (day - params.peak_day) / 365.0);
    let bump = |centre: f64, width: f64| exp(-((h - centre) / width) * ((h - centre) / width));
    let diurnal = 1.0 + params.diurnal_amplitude * (bump(7.5, 1.5) + bump(18.5, 2.0) - 0.3);
    seasonal * diurnal
}

/// Deterministic synthetic profile mapped affinely onto the annual energy and
/// peak targets.
pub fn synthesize_load(params: &LoadProfileParams) -> VoiResult<HourlyLoadProfile> {
    let mean_target = params.annual_energy / HOURS_PER_YEAR as f64;
    if !(params.annual_energy > 0.0 && params.peak_power.is_finite()) || params.peak_power <= mean_target {
        return Err(VoiError::LoadProfile(format!(
            "peak {} kW must exceed mean {mean_target:.3} kW",
            params.peak_power
        )));
    }
    let raw: Vec<f64> = (0..HOURS_PER_YEAR).map(|h| raw_shape(h, params)).collect();
    let raw_mean = raw.iter().sum::<f64>() / HOURS_PER_YEAR as f64;
    let raw_max = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = raw_max - raw_mean;
    if spread.is_nan() || spread <= 1e-9 * raw_mean.abs().max(1.0) {
        return Err(VoiError::LoadProfile("shape has no variation; peak target cannot be met".into()));
    }
    let scale = (params.peak_power - mean_target) / spread;
    let offset = mean_target - scale * raw_mean;
    let values = raw.iter().map(|r| (scale * r + offset).max(0.0)).collect();
    let profile = HourlyLoadProfile { values };
    let deviations = profile.target_deviations(params);
    if !deviations.is_empty() {
        return Err(VoiError::LoadProfile(deviations.join("; ")));
    }
    Ok(profile)
}
