//! Air-source heat-pump maintenance scheduling under uncertain degradation.
//!
//! The owner picks the number of evenly spaced maintenance visits per year.
//! Each visit raises the seasonal performance factor through a saturating
//! uplift; the degradation factor α is unknown and follows a normal prior
//! truncated to `[0, alpha_cap]`.

use alloc::format;
use alloc::vec::Vec;

use rand_distr::{Distribution, StandardNormal};

use crate::error::{VoiError, VoiResult};
use crate::math::powf;
use crate::problem::{Action, DecisionProblem, Sense};
use crate::rng::sample_index_rng;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct AshpParams {
    /// Building heating load, kWh/year.
    pub heating_load: f64,
    /// SPF of a new, unmaintained unit.
    pub base_spf: f64,
    /// Asymptotic SPF uplift from maintenance.
    pub beta_a: f64,
    pub beta_b: f64,
    pub gamma: f64,
    /// £ per maintenance visit covering all units.
    pub maintenance_cost: f64,
    /// £/kWh
    pub electricity_price: f64,
    pub alpha_mu: f64,
    pub alpha_sigma: f64,
    /// Upper truncation of α; keeps E[1/(1-α)] finite.
    pub alpha_cap: f64,
    pub n_max: u32,
}

impl Default for AshpParams {
    fn default() -> Self {
        Self {
            heating_load: 1.75e6,
            base_spf: 3.0,
            beta_a: 0.05,
            beta_b: 2.5,
            gamma: 1.4,
            maintenance_cost: 2210.0,
            electricity_price: 0.34,
            alpha_mu: 0.01,
            alpha_sigma: 0.25,
            alpha_cap: 0.95,
            n_max: 12,
        }
    }
}

impl AshpParams {
    pub fn validate(&self) -> VoiResult<()> {
        for (name, v) in [
            ("heating_load", self.heating_load),
            ("beta_a", self.beta_a),
            ("beta_b", self.beta_b),
            ("gamma", self.gamma),
            ("maintenance_cost", self.maintenance_cost),
            ("electricity_price", self.electricity_price),
            ("alpha_mu", self.alpha_mu),
            ("alpha_sigma", self.alpha_sigma),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(VoiError::param(name, format!("must be positive, got {v}")));
            }
        }
        if !(self.base_spf.is_finite() && self.base_spf > 1.0) {
            return Err(VoiError::param("base_spf", format!("must exceed 1, got {}", self.base_spf)));
        }
        if !(self.alpha_cap > 0.0 && self.alpha_cap < 1.0) {
            return Err(VoiError::param("alpha_cap", format!("must lie in (0, 1), got {}", self.alpha_cap)));
        }
        if self.alpha_mu >= self.alpha_cap {
            return Err(VoiError::param("alpha_mu", "must lie below alpha_cap"));
        }
        Ok(())
    }
}

/// Fractional SPF uplift from `n_m` maintenance visits per year.
pub fn maintenance_uplift(n_m: u32, params: &AshpParams) -> f64 {
    if n_m == 0 {
        return 0.0;
    }
    let x = powf(f64::from(n_m), params.gamma);
    params.beta_a * x / (params.beta_b + x)
}

pub fn seasonal_performance(alpha: f64, n_m: u32, params: &AshpParams) -> VoiResult<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(VoiError::InvalidArgument(format!("degradation must lie in [0, 1), got {alpha}")));
    }
    Ok(params.base_spf * (1.0 - alpha) * (1.0 + maintenance_uplift(n_m, params)))
}

/// Electricity plus maintenance, £/year.
pub fn annual_cost(n_m: u32, alpha: f64, params: &AshpParams) -> VoiResult<f64> {
    let spf = seasonal_performance(alpha, n_m, params)?;
    Ok(params.electricity_price * params.heating_load / spf + params.maintenance_cost * f64::from(n_m))
}

/// Raw normal draws discarded while sampling one α.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rejections {
    pub below: u32,
    pub above: u32,
}

/// Degradation draw for sample `index`, with the rejection tally.
pub fn sample_alpha_counted(seed: u64, index: u64, params: &AshpParams) -> (f64, Rejections) {
    let mut rng = sample_index_rng(seed, index);
    let mut rejected = Rejections::default();
    loop {
        let z: f64 = StandardNormal.sample(&mut rng);
        let alpha = params.alpha_mu + params.alpha_sigma * z;
        if alpha < 0.0 {
            rejected.below += 1;
        } else if alpha > params.alpha_cap {
            rejected.above += 1;
        } else {
            return (alpha, rejected);
        }
    }
}

pub fn sample_alpha(seed: u64, index: u64, params: &AshpParams) -> f64 {
    sample_alpha_counted(seed, index, params).0
}

#[derive(Debug, Clone)]
pub struct AshpProblem {
    params: AshpParams,
    actions: Vec<Action>,
}

impl AshpProblem {
    pub fn params(&self) -> &AshpParams {
        &self.params
    }
}

pub fn build_ashp_problem(params: &AshpParams) -> VoiResult<AshpProblem> {
    params.validate()?;
    let actions = (0..=params.n_max).map(|n| Action::new(format!("{n}"), format!("{n} visits/year"))).collect();
    Ok(AshpProblem { params: params.clone(), actions })
}

impl DecisionProblem for AshpProblem {
    /// Degradation factor α.
    type Param = f64;

    fn actions(&self) -> &[Action] {
        &self.actions
    }

    fn sense(&self) -> Sense {
        Sense::Minimize
    }

    fn sample(&self, seed: u64, index: u64) -> f64 {
        sample_alpha(seed, index, &self.params)
    }

    fn utility(&self, action: usize, alpha: &f64) -> f64 {
        // α ∈ [0, alpha_cap] by construction, so this cannot fail.
        annual_cost(action as u32, *alpha, &self.params).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solve::solve_voi;

    #[test]
    fn uplift_values() {
        let p = AshpParams::default();
        assert_eq!(maintenance_uplift(0, &p), 0.0);
        assert!((maintenance_uplift(2, &p) - 0.025676).abs() < 5e-7);
        assert!(maintenance_uplift(12, &p) < p.beta_a);
        for n in 1..12 {
            assert!(maintenance_uplift(n + 1, &p) > maintenance_uplift(n, &p));
        }
    }

    #[test]
    fn spf_values() {
        let p = AshpParams::default();
        assert_eq!(seasonal_performance(0.0, 0, &p).unwrap(), 3.0);
        assert_eq!(seasonal_performance(0.5, 0, &p).unwrap(), 1.5);
        assert!((seasonal_performance(0.1, 2, &p).unwrap() - 2.7693).abs() < 5e-5);
        assert!(seasonal_performance(1.0, 0, &p).is_err());
        assert!(seasonal_performance(-0.1, 0, &p).is_err());
    }

    #[test]
    fn annual_cost_values() {
        let p = AshpParams::default();
        let base = annual_cost(0, 0.0, &p).unwrap();
        assert!((base - 198_333.333_333).abs() < 1e-3);
        let maintained = annual_cost(12, 0.0, &p).unwrap();
        let energy = maintained - 12.0 * 2210.0;
        assert!(energy < base);
        assert!((maintained - energy - 26_520.0).abs() < 1e-6);
    }

    #[test]
    fn cost_increases_with_degradation() {
        let p = AshpParams::default();
        for n in 0..=12 {
            let mut prev = 0.0;
            for i in 0..95 {
                let c = annual_cost(n, i as f64 * 0.01, &p).unwrap();
                assert!(c > prev);
                prev = c;
            }
        }
    }

    #[test]
    fn per_alpha_optimum_is_non_decreasing() {
        let p = AshpParams::default();
        let mut prev = 0;
        for i in 0..=9 {
            let alpha = i as f64 * 0.1;
            let costs = (0..=12).map(|n| annual_cost(n, alpha, &p).unwrap());
            let best = Sense::Minimize.argbest(costs).unwrap();
            assert!(best >= prev, "alpha {alpha}: {best} < {prev}");
            prev = best;
        }
    }

    #[test]
    fn draws_respect_truncation() {
        let p = AshpParams::default();
        for i in 0..20_000 {
            let a = sample_alpha(3, i, &p);
            assert!((0.0..=p.alpha_cap).contains(&a));
        }
        assert_eq!(sample_alpha(3, 17, &p), sample_alpha(3, 17, &p));
    }

    #[test]
    fn problem_actions_and_vanishing_uncertainty() {
        let prob = build_ashp_problem(&AshpParams::default()).unwrap();
        assert_eq!(prob.actions().len(), 13);
        let tight = AshpParams { alpha_sigma: 1e-9, ..Default::default() };
        let est = solve_voi(&build_ashp_problem(&tight).unwrap(), 20_000, 0).unwrap();
        assert_eq!(est.evpi, 0.0);
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(AshpParams { alpha_cap: 1.0, ..Default::default() }.validate().is_err());
        assert!(AshpParams { base_spf: 1.0, ..Default::default() }.validate().is_err());
        assert!(AshpParams { heating_load: -1.0, ..Default::default() }.validate().is_err());
    }
}
