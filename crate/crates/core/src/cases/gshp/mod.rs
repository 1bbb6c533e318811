//! Ground-source heat-pump borehole sizing under uncertain ground conductivity.
//!
//! The designer picks one borehole length for a fixed field of boreholes. The
//! lifetime cost (drilling plus electricity) depends on the unknown ground
//! conductivity λ through an hourly line-source dispatch simulation. Because
//! the utility depends on the parameter only through scalar λ, the costs are
//! tabulated once on a λ grid and interpolated during sampling.

mod ground;
mod load;

use alloc::format;
use alloc::vec::Vec;

use rand_distr::{Distribution, StandardNormal};

pub use ground::{
    capital_cost, dispatch, dispatch_with_kernel, lifetime_cost, DispatchResult, LineSourceKernel, Superposition,
};
pub use load::{
    synthesize_load, HourlyLoadProfile, LoadProfileParams, ANNUAL_TOLERANCE, HOURS_PER_YEAR, POWER_TOLERANCE,
};

use crate::error::{VoiError, VoiResult};
use crate::problem::{Action, DecisionProblem, Sense};
use crate::rng::sample_index_rng;
use crate::solve::Execution;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct GshpParams {
    /// Candidate borehole lengths, m.
    pub lengths: Vec<f64>,
    pub n_boreholes: u32,
    /// £ per metre per borehole.
    pub drilling_cost: f64,
    /// Years of operation.
    pub lifetime: f64,
    /// £/kWh
    pub electricity_price: f64,
    /// W/mK
    pub lambda_mu: f64,
    pub lambda_sigma: f64,
    pub lambda_floor: f64,
    /// °C
    pub fluid_min: f64,
    pub fluid_max: f64,
    /// Undisturbed ground temperature, °C.
    pub ground_temp: f64,
    /// MJ/m³K
    pub volumetric_heat_capacity: f64,
    /// mK/W
    pub borehole_resistance: f64,
    /// m
    pub borehole_radius: f64,
    pub cop_intercept: f64,
    /// 1/°C
    pub cop_slope: f64,
    pub aux_cop: f64,
    /// Points on the λ grid of the cost surface.
    pub surface_points: usize,
    pub load: LoadProfileParams,
}

impl Default for GshpParams {
    fn default() -> Self {
        Self {
            lengths: (0..13).map(|i| 140.0 + 5.0 * i as f64).collect(),
            n_boreholes: 9,
            drilling_cost: 70.0,
            lifetime: 50.0,
            electricity_price: 0.34,
            lambda_mu: 2.0,
            lambda_sigma: 0.12,
            lambda_floor: 0.5,
            fluid_min: 5.0,
            fluid_max: 35.0,
            ground_temp: 10.0,
            volumetric_heat_capacity: 2.3,
            borehole_resistance: 0.10,
            borehole_radius: 0.075,
            cop_intercept: 4.0279,
            cop_slope: 0.1319,
            aux_cop: 1.0,
            surface_points: 201,
            load: LoadProfileParams::default(),
        }
    }
}

impl GshpParams {
    pub fn validate(&self) -> VoiResult<()> {
        if self.lengths.is_empty() {
            return Err(VoiError::param("lengths", "at least one length is required"));
        }
        if self.lengths.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(VoiError::param("lengths", "lengths must be positive"));
        }
        if self.lengths.windows(2).any(|w| w[1] <= w[0]) {
            return Err(VoiError::param("lengths", "lengths must be strictly increasing"));
        }
        if self.n_boreholes == 0 {
            return Err(VoiError::param("n_boreholes", "must be positive"));
        }
        for (name, v) in [
            ("drilling_cost", self.drilling_cost),
            ("lifetime", self.lifetime),
            ("electricity_price", self.electricity_price),
            ("lambda_mu", self.lambda_mu),
            ("lambda_sigma", self.lambda_sigma),
            ("lambda_floor", self.lambda_floor),
            ("volumetric_heat_capacity", self.volumetric_heat_capacity),
            ("borehole_resistance", self.borehole_resistance),
            ("borehole_radius", self.borehole_radius),
            ("cop_intercept", self.cop_intercept),
            ("aux_cop", self.aux_cop),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(VoiError::param(name, format!("must be positive, got {v}")));
            }
        }
        if !self.cop_slope.is_finite() || self.cop_slope < 0.0 {
            return Err(VoiError::param("cop_slope", "must be non-negative"));
        }
        if !self.fluid_min.is_finite() || !self.fluid_max.is_finite() || self.fluid_min >= self.fluid_max {
            return Err(VoiError::param("fluid_min", "must be below fluid_max"));
        }
        if !(self.fluid_min..=self.fluid_max).contains(&self.ground_temp) {
            return Err(VoiError::param("ground_temp", "must lie within the fluid temperature bounds"));
        }
        if self.cop_intercept + self.cop_slope * self.fluid_min <= 1.0 {
            return Err(VoiError::param("cop_intercept", "COP at fluid_min must exceed 1"));
        }
        if self.lambda_mu <= self.lambda_floor {
            return Err(VoiError::param("lambda_mu", "must exceed lambda_floor"));
        }
        if self.surface_points < 2 {
            return Err(VoiError::param("surface_points", "need at least 2 grid points"));
        }
        Ok(())
    }

    /// Half-width of the λ grid in standard deviations.
    pub const GRID_SIGMAS: f64 = 6.0;

    pub fn lambda_grid(&self) -> Vec<f64> {
        let lo = (self.lambda_mu - Self::GRID_SIGMAS * self.lambda_sigma).max(self.lambda_floor);
        let hi = self.lambda_mu + Self::GRID_SIGMAS * self.lambda_sigma;
        let steps = (self.surface_points - 1) as f64;
        (0..self.surface_points).map(|i| lo + (hi - lo) * i as f64 / steps).collect()
    }
}

/// Lifetime cost tabulated over borehole length × λ.
#[derive(Debug, Clone, PartialEq)]
pub struct CostSurface {
    lambda_grid: Vec<f64>,
    /// `costs[length][node]`, £
    costs: Vec<Vec<f64>>,
}

impl CostSurface {
    pub fn lambda_grid(&self) -> &[f64] {
        &self.lambda_grid
    }

    pub fn costs(&self) -> &[Vec<f64>] {
        &self.costs
    }

    /// Linear interpolation in λ; flat beyond the grid ends.
    pub fn interpolate(&self, length_index: usize, lambda: f64) -> f64 {
        let grid = &self.lambda_grid;
        let row = &self.costs[length_index];
        let last = grid.len() - 1;
        if lambda.is_nan() || lambda <= grid[0] {
            return row[0];
        }
        if lambda >= grid[last] {
            return row[last];
        }
        let i = grid.partition_point(|x| *x <= lambda) - 1;
        let frac = (lambda - grid[i]) / (grid[i + 1] - grid[i]);
        row[i] + frac * (row[i + 1] - row[i])
    }
}

pub fn build_cost_surface(
    load: &HourlyLoadProfile,
    params: &GshpParams,
    execution: Execution,
) -> VoiResult<CostSurface> {
    params.validate()?;
    let lambda_grid = params.lambda_grid();
    let hours = load.values().len();
    let column = |node: usize| -> VoiResult<Vec<f64>> {
        let kernel = LineSourceKernel::new(lambda_grid[node], params, hours);
        params
            .lengths
            .iter()
            .map(|&length| {
                let year = dispatch_with_kernel(load, &kernel, length, params, Superposition::default())?;
                Ok(ground::cost_of(&year, length, params))
            })
            .collect()
    };
    let columns: Vec<VoiResult<Vec<f64>>> = match execution {
        Execution::Serial => (0..lambda_grid.len()).map(column).collect(),
        Execution::Parallel { workers } => crate::solve::parallel_map(lambda_grid.len(), workers, column)?,
    };
    let columns = columns.into_iter().collect::<VoiResult<Vec<_>>>()?;
    let costs = (0..params.lengths.len()).map(|l| columns.iter().map(|c| c[l]).collect()).collect();
    Ok(CostSurface { lambda_grid, costs })
}

#[derive(Debug, Clone)]
pub struct GshpProblem {
    params: GshpParams,
    actions: Vec<Action>,
    surface: CostSurface,
}

impl GshpProblem {
    pub fn params(&self) -> &GshpParams {
        &self.params
    }

    pub fn surface(&self) -> &CostSurface {
        &self.surface
    }

    /// Conductivity prior: normal, clipped below at `lambda_floor`.
    pub fn sample_lambda(&self, seed: u64, index: u64) -> f64 {
        let z: f64 = StandardNormal.sample(&mut sample_index_rng(seed, index));
        (self.params.lambda_mu + self.params.lambda_sigma * z).max(self.params.lambda_floor)
    }
}

/// Build the problem on the synthetic load profile described by `params.load`.
pub fn build_gshp_problem(params: &GshpParams) -> VoiResult<GshpProblem> {
    let load = synthesize_load(&params.load)?;
    build_gshp_problem_with(params, &load, Execution::Serial)
}

pub fn build_gshp_problem_with(
    params: &GshpParams,
    load: &HourlyLoadProfile,
    execution: Execution,
) -> VoiResult<GshpProblem> {
    let surface = build_cost_surface(load, params, execution)?;
    let actions = params.lengths.iter().map(|l| Action::new(format!("{l}"), format!("{l} m"))).collect();
    Ok(GshpProblem { params: params.clone(), actions, surface })
}

impl DecisionProblem for GshpProblem {
    /// Ground conductivity λ, W/mK.
    type Param = f64;

    fn actions(&self) -> &[Action] {
        &self.actions
    }

    fn sense(&self) -> Sense {
        Sense::Minimize
    }

    fn sample(&self, seed: u64, index: u64) -> f64 {
        self.sample_lambda(seed, index)
    }

    fn utility(&self, action: usize, lambda: &f64) -> f64 {
        self.surface.interpolate(action, *lambda)
    }
}
