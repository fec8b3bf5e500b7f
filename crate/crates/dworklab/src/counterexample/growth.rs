//! The growth experiment: assemble the certified lower bound on the
//! maximal function over the constructed set, normalize by R^s and the
//! datum norm, and track the ratio along R = 2^j.

use std::path::Path;

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::boxes::{build_boxes, omega_star};
use super::instance::{feasible_instance, Constants, InstanceSpec, TestFunction};
use super::params::ParamPlan;
use super::CxError;
use crate::poly::Form;

#[derive(Debug, Clone)]
pub struct GrowthRow {
    pub j: u64,
    pub feasible: bool,
    pub skip_reason: Option<String>,
    pub r_value: f64,
    pub l_value: f64,
    pub q_cap: f64,
    pub omega_measure: f64,
    pub omega_star_measure: f64,
    pub pointwise_bound: f64,
    pub f_norm: f64,
    pub ratio: f64,
}

impl GrowthRow {
    pub fn to_json(&self) -> Value {
        json!({
            "j": self.j,
            "feasible": self.feasible,
            "skip_reason": self.skip_reason,
            "R": self.r_value,
            "L": self.l_value,
            "Q": self.q_cap,
            "omega_measure": self.omega_measure,
            "omega_star_measure": self.omega_star_measure,
            "lower_bound": self.omega_star_measure * self.pointwise_bound,
            "f_norm_bracket": [self.f_norm, self.f_norm],
            "ratio": self.ratio,
        })
    }
}

#[derive(Debug, Clone)]
pub struct GrowthReport {
    pub s: f64,
    pub s_threshold: f64,
    /// sigma/2 + (n-r)/2 - (kappa+lambda)(n-r)/2 - s.
    pub analytic_exponent: f64,
    pub rows: Vec<GrowthRow>,
    /// Least-squares slope of log2(ratio) against log2(R) over feasible rows.
    pub slope_raw: Option<f64>,
    /// Same slope after multiplying the ratio by ln Q, removing the known
    /// logarithmic factor carried by the box-union measure.
    pub slope_log_adjusted: Option<f64>,
    pub increasing: bool,
    pub nonincreasing: bool,
}

impl GrowthReport {
    pub fn to_json(&self) -> Value {
        json!({
            "s": self.s,
            "s_threshold": self.s_threshold,
            "analytic_exponent": self.analytic_exponent,
            "slope_raw": self.slope_raw,
            "slope_log_adjusted": self.slope_log_adjusted,
            "increasing": self.increasing,
            "nonincreasing": self.nonincreasing,
            "rows": self.rows.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        })
    }
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    (denom.abs() > 1e-12).then(|| (n * sxy - sx * sy) / denom)
}

/// One experiment row: build the instance and its box set, transfer the
/// measure, and form ratio = |Omega*| * bound / (R^s * ||f||), where bound
/// is the certified pointwise floor
/// (1/2)(1-c0)^n 2^(-(n-r)-1) (R/(L sqrt(Q)))^(n-r).
#[allow(clippy::too_many_arguments)]
pub fn growth_row(
    plan: &ParamPlan,
    pk: &Form,
    witness: &[i64],
    j: u64,
    s: f64,
    constants: &Constants,
    cache_dir: Option<&Path>,
    seed: u64,
) -> GrowthRow {
    let nr = (plan.n - plan.r) as f64;
    let skip = |reason: String| GrowthRow {
        j,
        feasible: false,
        skip_reason: Some(reason),
        r_value: (j as f64).exp2(),
        l_value: 0.0,
        q_cap: 0.0,
        omega_measure: 0.0,
        omega_star_measure: 0.0,
        pointwise_bound: 0.0,
        f_norm: 0.0,
        ratio: 0.0,
    };
    let inst = match feasible_instance(plan, InstanceSpec::Progression { j }) {
        Ok(i) => i,
        Err(e) => return skip(e.to_string()),
    };
    let set = match build_boxes(&inst, pk, witness, constants, cache_dir, seed) {
        Ok(s) => s,
        Err(e) => return skip(e.to_string()),
    };
    let star = omega_star(&inst, pk, witness, constants, set.union_measure);
    let bound = 0.5
        * (1.0 - constants.c0).powi(plan.n as i32)
        * 0.5f64.powi(nr as i32 + 1)
        * (inst.rl as f64 / inst.q_cap.sqrt()).powf(nr);
    let tf = TestFunction::new(inst.clone(), witness.to_vec());
    let f_norm = tf.norm_lower;
    let r_pow_s = (j as f64 * s).exp2();
    let ratio = star.measure * bound / (r_pow_s * f_norm);
    GrowthRow {
        j,
        feasible: star.measure > 0.0,
        skip_reason: (star.measure <= 0.0)
            .then(|| "no complete angle period fits the slab at this scale".to_string()),
        r_value: inst.r_value,
        l_value: inst.l_value,
        q_cap: inst.q_cap,
        omega_measure: set.union_measure,
        omega_star_measure: star.measure,
        pointwise_bound: bound,
        f_norm,
        ratio,
    }
}

/// Assembles rows into the report: monotonicity of the certified ratio and
/// its measured slopes against log2 R.
pub fn summarize_growth(plan: &ParamPlan, s: f64, rows: Vec<GrowthRow>) -> GrowthReport {
    let feasible: Vec<&GrowthRow> = rows.iter().filter(|r| r.feasible).collect();
    let raw_pts: Vec<(f64, f64)> = feasible
        .iter()
        .map(|r| (r.j as f64, r.ratio.log2()))
        .collect();
    let adj_pts: Vec<(f64, f64)> = feasible
        .iter()
        .map(|r| (r.j as f64, (r.ratio * r.q_cap.ln()).log2()))
        .collect();

    let increasing = feasible.windows(2).all(|w| w[1].ratio > w[0].ratio) && feasible.len() >= 2;
    let nonincreasing =
        feasible.windows(2).all(|w| w[1].ratio <= w[0].ratio) && feasible.len() >= 2;

    GrowthReport {
        s,
        s_threshold: plan.s_threshold.to_f64().unwrap(),
        analytic_exponent: plan.ratio_exponent(s),
        rows,
        slope_raw: least_squares_slope(&raw_pts),
        slope_log_adjusted: least_squares_slope(&adj_pts),
        increasing,
        nonincreasing,
    }
}

/// Runs the experiment at each j; infeasible j are reported and skipped.
#[allow(clippy::too_many_arguments)]
pub fn growth_experiment(
    plan: &ParamPlan,
    pk: &Form,
    witness: &[i64],
    j_list: &[u64],
    s: f64,
    constants: &Constants,
    cache_dir: Option<&Path>,
    seed: u64,
) -> Result<GrowthReport, CxError> {
    let rows = j_list
        .iter()
        .map(|&j| growth_row(plan, pk, witness, j, s, constants, cache_dir, seed))
        .collect();
    Ok(summarize_growth(plan, s, rows))
}
