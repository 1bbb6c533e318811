//! Office ventilation scheduling under uncertain occupancy.
//!
//! One air-change setting is chosen per day. The daily cost is the fan
//! electricity plus lost productivity from airborne infections, with the
//! infection risk given by a steady-state Wells–Riley model marginalized
//! exactly over the binomial number of infectious occupants.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{VoiError, VoiResult};
use crate::math::{exp, powf};
use crate::problem::{validate_actions, Action, DecisionProblem, Sense};
use crate::rng::sample_index_rng;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct VentilationParams {
    /// m²
    pub floor_area: f64,
    /// m
    pub ceiling_height: f64,
    /// persons
    pub max_occupancy: u32,
    /// Air changes per hour available to the scheduler.
    pub ach_options: Vec<f64>,
    /// W per l/s
    pub fan_specific_power: f64,
    pub fan_efficiency: f64,
    /// Fan operating hours per day.
    pub fan_hours: f64,
    /// £/kWh
    pub electricity_price: f64,
    /// Fraction of occupants who are infectious.
    pub prevalence: f64,
    /// Days of sick leave per infection.
    pub sick_days: f64,
    /// £ per sick day.
    pub daily_salary_loss: f64,
    /// Hours per day occupants spend in the room.
    pub exposure_hours: f64,
    /// Quanta emitted per hour by one infector (calibrated, not measured).
    pub quanta_rate: f64,
    /// m³/h inhaled per occupant.
    pub breathing_rate: f64,
}

impl Default for VentilationParams {
    fn default() -> Self {
        Self {
            floor_area: 500.0,
            ceiling_height: 4.0,
            max_occupancy: 55,
            ach_options: alloc::vec![1.0, 3.0, 5.0, 10.0],
            fan_specific_power: 1.9,
            fan_efficiency: 0.60,
            fan_hours: 10.0,
            electricity_price: 0.34,
            prevalence: 0.0218,
            sick_days: 3.0,
            daily_salary_loss: 128.0,
            exposure_hours: 8.0,
            quanta_rate: 11.0,
            breathing_rate: 0.6,
        }
    }
}

fn positive(name: &str, v: f64) -> VoiResult<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(VoiError::param(name, format!("must be positive, got {v}")))
    }
}

impl VentilationParams {
    pub fn validate(&self) -> VoiResult<()> {
        positive("floor_area", self.floor_area)?;
        positive("ceiling_height", self.ceiling_height)?;
        positive("fan_specific_power", self.fan_specific_power)?;
        positive("fan_hours", self.fan_hours)?;
        positive("electricity_price", self.electricity_price)?;
        positive("sick_days", self.sick_days)?;
        positive("daily_salary_loss", self.daily_salary_loss)?;
        positive("exposure_hours", self.exposure_hours)?;
        positive("quanta_rate", self.quanta_rate)?;
        positive("breathing_rate", self.breathing_rate)?;
        if !(self.fan_efficiency > 0.0 && self.fan_efficiency <= 1.0) {
            return Err(VoiError::param("fan_efficiency", format!("must lie in (0, 1], got {}", self.fan_efficiency)));
        }
        if !(0.0..=1.0).contains(&self.prevalence) {
            return Err(VoiError::param("prevalence", format!("must lie in [0, 1], got {}", self.prevalence)));
        }
        if self.ach_options.is_empty() {
            return Err(VoiError::param("ach_options", "at least one setting is required"));
        }
        for &ach in &self.ach_options {
            positive("ach_options", ach)?;
        }
        Ok(())
    }

    /// Room volume in m³.
    pub fn volume(&self) -> f64 {
        self.floor_area * self.ceiling_height
    }
}

/// Daily fan electricity cost in £ at `ach` air changes per hour.
pub fn ventilation_energy_cost(ach: f64, params: &VentilationParams) -> VoiResult<f64> {
    if !ach.is_finite() || ach < 0.0 {
        return Err(VoiError::InvalidArgument(format!("air change rate must be non-negative, got {ach}")));
    }
    let flow_l_per_s = ach * params.volume() * 1000.0 / 3600.0;
    let fan_kw = params.fan_specific_power * flow_l_per_s / params.fan_efficiency / 1000.0;
    Ok(params.electricity_price * params.fan_hours * fan_kw)
}

/// Expected number of new infections per day among `occupancy` occupants.
pub fn expected_new_infections(occupancy: u32, ach: f64, params: &VentilationParams) -> VoiResult<f64> {
    if occupancy > params.max_occupancy {
        return Err(VoiError::InvalidArgument(format!(
            "occupancy {occupancy} exceeds max_occupancy {}",
            params.max_occupancy
        )));
    }
    if !ach.is_finite() || ach <= 0.0 {
        return Err(VoiError::InvalidArgument(format!("air change rate must be positive, got {ach}")));
    }
    let p = params.prevalence;
    if occupancy <= 1 || p == 0.0 {
        return Ok(0.0);
    }
    // Inhaled quanta per susceptible per infector over the exposure window.
    let dose = params.quanta_rate * params.breathing_rate * params.exposure_hours / (ach * params.volume());
    let n = occupancy;
    let mut total = 0.0;
    for (infectors, prob) in binomial_pmf(n, p).into_iter().enumerate() {
        let susceptible = f64::from(n) - infectors as f64;
        let attack = 1.0 - exp(-(infectors as f64) * dose);
        total += prob * susceptible * attack;
    }
    Ok(total)
}

fn binomial_pmf(n: u32, p: f64) -> Vec<f64> {
    let mut pmf = alloc::vec![0.0; n as usize + 1];
    if p >= 1.0 {
        pmf[n as usize] = 1.0;
        return pmf;
    }
    let ratio = p / (1.0 - p);
    pmf[0] = powf(1.0 - p, f64::from(n));
    for k in 0..n as usize {
        pmf[k + 1] = pmf[k] * (f64::from(n) - k as f64) / (k as f64 + 1.0) * ratio;
    }
    pmf
}

/// Electricity plus expected productivity loss, £/day.
pub fn ventilation_daily_cost(ach: f64, occupancy: u32, params: &VentilationParams) -> VoiResult<f64> {
    let energy = ventilation_energy_cost(ach, params)?;
    let infections = expected_new_infections(occupancy, ach, params)?;
    Ok(energy + infections * params.sick_days * params.daily_salary_loss)
}

/// Ventilation scheduling as a decision problem over uniform occupancy.
///
/// Daily costs are tabulated for every (setting, occupancy) pair up front.
#[derive(Debug, Clone)]
pub struct VentilationProblem {
    params: VentilationParams,
    actions: Vec<Action>,
    /// `cost[action][occupancy]`
    cost: Vec<Vec<f64>>,
}

impl VentilationProblem {
    pub fn params(&self) -> &VentilationParams {
        &self.params
    }

    pub fn cost_table(&self) -> &[Vec<f64>] {
        &self.cost
    }
}

pub fn build_ventilation_problem(params: &VentilationParams) -> VoiResult<VentilationProblem> {
    params.validate()?;
    let actions: Vec<Action> =
        params.ach_options.iter().map(|ach| Action::new(format!("{ach}"), format!("{ach} ACH"))).collect();
    validate_actions(&actions)?;
    let cost = params
        .ach_options
        .iter()
        .map(|&ach| (0..=params.max_occupancy).map(|occ| ventilation_daily_cost(ach, occ, params)).collect())
        .collect::<VoiResult<Vec<Vec<f64>>>>()?;
    Ok(VentilationProblem { params: params.clone(), actions, cost })
}

impl DecisionProblem for VentilationProblem {
    /// Number of occupants present.
    type Param = u32;

    fn actions(&self) -> &[Action] {
        &self.actions
    }

    fn sense(&self) -> Sense {
        Sense::Minimize
    }

    fn sample(&self, seed: u64, index: u64) -> u32 {
        sample_index_rng(seed, index).random_range(0..=self.params.max_occupancy)
    }

    fn utility(&self, action: usize, occupancy: &u32) -> f64 {
        self.cost[action][*occupancy as usize]
    }
}
