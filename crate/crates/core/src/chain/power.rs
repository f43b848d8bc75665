use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::config::{PowerConfig, PowerEntry};
use crate::error::{ensure, Result};

/// Dynamic power scaled to a new supply, P·(V_new/V_ref)².
pub fn power_scaling(p_ref: f64, vdd_ref: f64, vdd_new: f64) -> Result<f64> {
    ensure!(
        [p_ref, vdd_ref, vdd_new]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0),
        Domain,
        "power and supply voltages must be positive"
    );
    let r = vdd_new / vdd_ref;
    Ok(p_ref * r * r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetUse {
    /// power/budget, clamped to 1.
    pub fraction: f64,
    /// Set when the unclamped ratio exceeds 1.
    pub over_budget: bool,
}

/// Share of the stage cooling budget consumed by `power`.
pub fn thermal_budget_fraction(power: f64, stage_budget: f64) -> Result<BudgetUse> {
    ensure!(
        power.is_finite() && power > 0.0 && stage_budget.is_finite() && stage_budget > 0.0,
        Domain,
        "power and budget must be positive"
    );
    let raw = power / stage_budget;
    Ok(BudgetUse {
        fraction: raw.min(1.0),
        over_budget: raw > 1.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerBudget {
    pub node_nm: f64,
    pub vdd: f64,
    /// W
    pub steady_state_power: f64,
    pub budget_fraction: f64,
    pub over_budget: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerReport {
    pub current: PowerBudget,
    /// Same design at the projected node and supply.
    pub projected: PowerBudget,
    /// W
    pub stage_budget: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub breakdown: Vec<PowerEntry>,
}

pub fn power_report(cfg: &PowerConfig) -> Result<PowerReport> {
    cfg.validate()?;
    let now = thermal_budget_fraction(cfg.steady_state_power, cfg.stage_budget)?;
    let p_new = power_scaling(cfg.steady_state_power, cfg.vdd, cfg.projected_vdd)?;
    let then = thermal_budget_fraction(p_new, cfg.stage_budget)?;
    Ok(PowerReport {
        current: PowerBudget {
            node_nm: cfg.node_nm,
            vdd: cfg.vdd,
            steady_state_power: cfg.steady_state_power,
            budget_fraction: now.fraction,
            over_budget: now.over_budget,
        },
        projected: PowerBudget {
            node_nm: cfg.projected_node_nm,
            vdd: cfg.projected_vdd,
            steady_state_power: p_new,
            budget_fraction: then.fraction,
            over_budget: then.over_budget,
        },
        stage_budget: cfg.stage_budget,
        breakdown: cfg.breakdown.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn scaling_examples() {
        assert_abs_diff_eq!(
            power_scaling(0.1997, 1.8, 1.2).unwrap(),
            0.088756,
            epsilon = 1e-6
        );
        assert_eq!(power_scaling(0.1997, 1.8, 1.8).unwrap(), 0.1997);
        assert_abs_diff_eq!(
            power_scaling(0.1, 2.0, 1.0).unwrap(),
            0.025,
            epsilon = 1e-15
        );
        assert!(power_scaling(0.1, 0.0, 1.0).is_err());
    }

    #[test]
    fn budget_examples() {
        assert_abs_diff_eq!(
            thermal_budget_fraction(0.1997, 1.0).unwrap().fraction,
            0.1997,
            epsilon = 1e-15
        );
        let p = power_scaling(0.1997, 1.8, 1.2).unwrap();
        assert_abs_diff_eq!(
            thermal_budget_fraction(p, 1.0).unwrap().fraction,
            0.0888,
            epsilon = 1e-4
        );
        let full = thermal_budget_fraction(1.0, 1.0).unwrap();
        assert_eq!((full.fraction, full.over_budget), (1.0, false));
        let over = thermal_budget_fraction(1.5, 1.0).unwrap();
        assert_eq!((over.fraction, over.over_budget), (1.0, true));
    }

    #[test]
    fn default_report() {
        let r = power_report(&PowerConfig::default()).unwrap();
        assert_abs_diff_eq!(r.projected.steady_state_power, 0.08876, epsilon = 1e-5);
        assert_eq!(r.current.node_nm, 180.0);
        assert_eq!(r.projected.node_nm, 65.0);
    }

    proptest! {
        #[test]
        fn square_law(p in 1e-3f64..10.0, v in 0.5f64..3.0, k in 0.1f64..3.0) {
            let once = power_scaling(p, v, v * k).unwrap();
            prop_assert!((once / p - k * k).abs() < 1e-12 * k * k);
            let back = power_scaling(once, v * k, v).unwrap();
            prop_assert!((back - p).abs() < 1e-12 * p);
        }
    }
}
