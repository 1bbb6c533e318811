//! Infinite line source with hourly temporal superposition and greedy dispatch.
//!
//! Each borehole carries an equal share of the extraction and is modelled in
//! isolation. The fluid temperature is the borehole-wall temperature from the
//! superposed line-source response minus the drop across the borehole
//! resistance.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::load::HourlyLoadProfile;
use super::GshpParams;
use crate::error::{VoiError, VoiResult};
use crate::math::{expint_e1, sqrt};

const SECONDS_PER_HOUR: f64 = 3600.0;

/// How past extraction pulses are superposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Superposition {
    /// Every past hour contributes individually, O(hours²).
    Exact,
    /// Hours older than `window_hours` are merged into blocks of `block_hours`.
    Aggregated { window_hours: usize, block_hours: usize },
}

impl Default for Superposition {
    fn default() -> Self {
        Superposition::Aggregated { window_hours: 168, block_hours: 24 }
    }
}

/// Step response of the line source sampled on whole hours.
///
/// `g[m]` is the dimensionless wall response after `m` hours of unit
/// extraction; the temperature drop for `q` W/m is `q·g[m] / (2πλ)`.
#[derive(Debug, Clone)]
pub struct LineSourceKernel {
    conductivity: f64,
    g: Vec<f64>,
}

impl LineSourceKernel {
    pub fn new(conductivity: f64, params: &GshpParams, hours: usize) -> Self {
        let diffusivity = conductivity / (params.volumetric_heat_capacity * 1e6);
        let r2 = params.borehole_radius * params.borehole_radius;
        let mut g = vec![0.0; hours + 1];
        for (m, slot) in g.iter_mut().enumerate().skip(1) {
            *slot = 0.5 * expint_e1(r2 / (4.0 * diffusivity * m as f64 * SECONDS_PER_HOUR));
        }
        Self { conductivity, g }
    }

    pub fn conductivity(&self) -> f64 {
        self.conductivity
    }

    /// K per (W/m) for a response coefficient.
    fn scale(&self) -> f64 {
        1.0 / (2.0 * PI * self.conductivity)
    }
}

/// Hourly outcome of one simulated year; energies are kWh per hour.
#[derive(Debug, Clone, PartialEq)]
pub struct DispatchResult {
    /// Heat extracted from the ground.
    pub ground: Vec<f64>,
    /// Heat delivered by the heat pump.
    pub gshp: Vec<f64>,
    /// Heat delivered by the auxiliary system.
    pub aux: Vec<f64>,
    /// Mean fluid temperature, °C.
    pub fluid_temp: Vec<f64>,
    pub cop: Vec<f64>,
}

impl DispatchResult {
    /// Electricity drawn over the year, kWh.
    pub fn electricity(&self, aux_cop: f64) -> f64 {
        self.gshp.iter().zip(&self.cop).map(|(e, c)| e / c).sum::<f64>() + self.aux.iter().sum::<f64>() / aux_cop
    }

    pub fn aux_total(&self) -> f64 {
        self.aux.iter().sum()
    }
}

pub fn dispatch(load: &HourlyLoadProfile, lambda: f64, length: f64, params: &GshpParams) -> VoiResult<DispatchResult> {
    check_inputs(lambda, length, params)?;
    let kernel = LineSourceKernel::new(lambda, params, load.values().len());
    dispatch_with_kernel(load, &kernel, length, params, Superposition::default())
}

fn check_inputs(lambda: f64, length: f64, params: &GshpParams) -> VoiResult<()> {
    if !(lambda.is_finite() && lambda >= params.lambda_floor) {
        return Err(VoiError::InvalidArgument(alloc::format!(
            "ground conductivity {lambda} below floor {}",
            params.lambda_floor
        )));
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(VoiError::InvalidArgument(alloc::format!("borehole length must be positive, got {length}")));
    }
    Ok(())
}

/// Greedy hourly dispatch: extract as much as the fluid-temperature floor
/// allows, never more than the remaining load needs.
pub fn dispatch_with_kernel(
    load: &HourlyLoadProfile,
    kernel: &LineSourceKernel,
    length: f64,
    params: &GshpParams,
    superposition: Superposition,
) -> VoiResult<DispatchResult> {
    let demand = load.values();
    let hours = demand.len();
    assert!(kernel.g.len() > hours, "kernel shorter than the simulated horizon");
    let (window, block) = match superposition {
        Superposition::Exact => (usize::MAX, 1),
        Superposition::Aggregated { window_hours, block_hours } => (window_hours, block_hours.max(1)),
    };
    let g = &kernel.g;
    // dg[m] = g[m+1] - g[m]: response at lag m to a one-hour pulse.
    let dg: Vec<f64> = g.windows(2).map(|w| w[1] - w[0]).collect();
    let scale = kernel.scale();
    let total_length = f64::from(params.n_boreholes) * length;
    // K per kW of total extraction held for the current hour.
    let slope = (g[1] * scale + params.borehole_resistance) * 1000.0 / total_length;
    let (c0, c1) = (params.cop_intercept, params.cop_slope);

    let mut q = vec![0.0; hours]; // W/m per borehole
    let mut block_means: Vec<f64> = Vec::new();
    let mut out = DispatchResult {
        ground: vec![0.0; hours],
        gshp: vec![0.0; hours],
        aux: vec![0.0; hours],
        fluid_temp: vec![0.0; hours],
        cop: vec![0.0; hours],
    };

    for n in 0..hours {
        let merged = if n >= window { (n - window) / block } else { 0 };
        while block_means.len() < merged {
            let j = block_means.len();
            block_means.push(q[j * block..(j + 1) * block].iter().sum::<f64>() / block as f64);
        }
        let mut history = 0.0;
        for (j, mean) in block_means.iter().enumerate() {
            let start = j * block;
            history += mean * (g[n + 1 - start] - g[n + 1 - start - block]);
        }
        for k in merged * block..n {
            history += q[k] * dg[n - k];
        }
        let t_idle = params.ground_temp - history * scale;
        if t_idle < params.fluid_min - 1e-9 || t_idle > params.fluid_max + 1e-9 {
            return Err(VoiError::InfeasibleDispatch { hour: n, temperature: t_idle });
        }

        let need = demand[n];
        let e_cap = ((t_idle - params.fluid_min) / slope).max(0.0);
        // Extraction that exactly meets demand: E·COP(T(E)) = need·(COP(T(E)) − 1)
        // with T(E) = t_idle − slope·E; take the smaller root.
        let a = c1 * slope;
        let b = -(c0 + c1 * t_idle + need * c1 * slope);
        let c = need * (c0 - 1.0 + c1 * t_idle);
        let e_full = if c <= 0.0 { 0.0 } else { 2.0 * c / (-b + sqrt(b * b - 4.0 * a * c)) };
        let e_ground = e_full.min(e_cap).max(0.0);

        let t_fluid = (t_idle - slope * e_ground).max(params.fluid_min);
        let cop = c0 + c1 * t_fluid;
        let gshp = (e_ground / (1.0 - 1.0 / cop)).min(need);
        q[n] = e_ground * 1000.0 / total_length;
        out.ground[n] = e_ground;
        out.gshp[n] = gshp;
        out.aux[n] = need - gshp;
        out.fluid_temp[n] = t_fluid;
        out.cop[n] = cop;
    }
    Ok(out)
}

/// Lifetime cost in £: drilling plus undiscounted electricity, with the
/// simulated year repeated for the whole lifetime.
pub fn lifetime_cost(load: &HourlyLoadProfile, lambda: f64, length: f64, params: &GshpParams) -> VoiResult<f64> {
    let year = dispatch(load, lambda, length, params)?;
    Ok(cost_of(&year, length, params))
}

pub fn capital_cost(length: f64, params: &GshpParams) -> f64 {
    params.drilling_cost * length * f64::from(params.n_boreholes)
}

pub(crate) fn cost_of(year: &DispatchResult, length: f64, params: &GshpParams) -> f64 {
    capital_cost(length, params) + params.lifetime * params.electricity_price * year.electricity(params.aux_cop)
}
