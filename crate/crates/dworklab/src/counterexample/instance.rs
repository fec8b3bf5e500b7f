//! Concrete instances of the construction: small constants, feasibility
//! checks for (R, L, Q, S1), the test function with its norm bracket, and
//! the certified lower-bound chain at a good box point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::params::ParamPlan;
use super::profile;
use super::CxError;
use crate::expsum::{complete_sum, real_sum, specialize_leading_form, RationalAngle};
use crate::poly::{FieldElem, Form};

/// The small constants of the construction. Only their smallness matters;
/// the defaults are overridable. `delta0` is measured from the realized
/// profile: the largest radius where phi stays above 1 - c0/2.
#[derive(Debug, Clone)]
pub struct Constants {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub delta0: f64,
}

impl Constants {
    pub fn with_c0(c0: f64) -> Self {
        assert!(c0 > 0.0 && c0 < 0.5, "c0 must lie in (0, 1/2), got {c0}");
        Constants {
            c0,
            c1: 0.01,
            c2: 0.01,
            c3: 0.01,
            c4: 0.5,
            c5: 0.5,
            delta0: profile::delta0(c0),
        }
    }

    /// Re-measures delta0 after any change to c0.
    pub fn refresh_delta0(&mut self) {
        self.delta0 = profile::delta0(self.c0);
    }
}

impl Default for Constants {
    fn default() -> Self {
        Constants::with_c0(0.1)
    }
}

/// How an instance is specified: on the dyadic progression R = 2^j with
/// all exponents derived from the plan, or as an explicit quadruple.
#[derive(Debug, Clone, Copy)]
pub enum InstanceSpec {
    Progression { j: u64 },
    Explicit { r: f64, l: f64, q: f64, s1: f64 },
}

/// A feasible realization of the parameters: R, L = R^lambda, S1 =
/// R^sigma, Q = R^kappa (or explicit values), with R/L integral and the
/// three size constraints verified.
#[derive(Debug, Clone)]
pub struct Instance {
    pub plan: ParamPlan,
    pub j: Option<u64>,
    pub r_value: f64,
    pub l_value: f64,
    pub s1: f64,
    pub q_cap: f64,
    /// R/L, exactly integral.
    pub rl: i64,
}

impl Instance {
    pub fn dims(&self) -> usize {
        self.plan.n - self.plan.r
    }

    pub fn to_json(&self) -> Value {
        json!({
            "j": self.j,
            "R": self.r_value,
            "L": self.l_value,
            "S1": self.s1,
            "Q": self.q_cap,
            "R_over_L": self.rl,
        })
    }
}

fn check_f64(name: &'static str, lhs: f64, rhs: f64) -> Result<(), CxError> {
    // lhs <= rhs with tiny relative slack
    if lhs <= rhs * (1.0 + 1e-9) {
        Ok(())
    } else {
        Err(CxError::ConstraintViolated {
            name,
            detail: format!("{lhs:e} > {rhs:e}"),
        })
    }
}

/// Validates a specification against the plan: integrality of R/L and the
/// three constraints (with unit implied constants)
/// 1/Q <= L^k/(S1 R^(k-1)),  Q^(-1-1/(n-r)) <= L/R,  R/L >= Q^(1+1/(n-r)).
/// The first violated constraint is named in the error.
pub fn feasible_instance(plan: &ParamPlan, spec: InstanceSpec) -> Result<Instance, CxError> {
    match spec {
        InstanceSpec::Progression { j } => {
            if j == 0 || j % plan.progression_modulus != 0 {
                return Err(CxError::OffProgression {
                    j,
                    modulus: plan.progression_modulus,
                });
            }
            // With j on the progression every exponent is an integer, and
            // the closed-form exponents satisfy all three constraints with
            // equality; verify exactly in exponent arithmetic.
            let jr = BigRational::from_integer(BigInt::from(j));
            let jl = &plan.lambda * &jr;
            let js = &plan.sigma * &jr;
            let jq = &plan.kappa * &jr;
            for v in [&jl, &js, &jq] {
                if !v.is_integer() {
                    return Err(CxError::ParameterRange(format!(
                        "internal: exponent {v} not integral at j = {j}"
                    )));
                }
            }
            let k = BigRational::from_integer(BigInt::from(plan.k));
            let one_plus_d0 = BigRational::from_integer(BigInt::from(1)) + &plan.delta0;
            // (1)  -jq <= k jl - js - (k-1) jr
            if -&jq > &k * &jl - &js - (&k - BigRational::from_integer(BigInt::from(1))) * &jr {
                return Err(CxError::ConstraintViolated {
                    name: "1/Q <= L^k/(S1 R^(k-1))",
                    detail: format!("exponents at j = {j}"),
                });
            }
            // (2)  -(1+d0) jq <= jl - jr
            if -(&one_plus_d0 * &jq) > &jl - &jr {
                return Err(CxError::ConstraintViolated {
                    name: "Q^(-1-1/(n-r)) <= L/R",
                    detail: format!("exponents at j = {j}"),
                });
            }
            // (3)  jr - jl >= (1+d0) jq
            if &jr - &jl < &one_plus_d0 * &jq {
                return Err(CxError::ConstraintViolated {
                    name: "R/L >= Q^(1+1/(n-r))",
                    detail: format!("exponents at j = {j}"),
                });
            }
            let rl_exp = (&jr - &jl).to_integer().to_u32().ok_or_else(|| {
                CxError::ParameterRange(format!("R/L exponent too large at j = {j}"))
            })?;
            if rl_exp >= 63 {
                return Err(CxError::ParameterRange(format!(
                    "R/L = 2^{rl_exp} exceeds the integer range"
                )));
            }
            Ok(Instance {
                plan: plan.clone(),
                j: Some(j),
                r_value: (j as f64).exp2(),
                l_value: jl.to_f64().unwrap().exp2(),
                s1: js.to_f64().unwrap().exp2(),
                q_cap: jq.to_f64().unwrap().exp2(),
                rl: 1i64 << rl_exp,
            })
        }
        InstanceSpec::Explicit { r, l, q, s1 } => {
            if !(r > 1.0 && l >= 1.0 && q >= 2.0 && s1 >= 1.0) {
                return Err(CxError::ParameterRange(format!(
                    "explicit instance needs R > 1, L >= 1, Q >= 2, S1 >= 1; \
                     got R={r}, L={l}, Q={q}, S1={s1}"
                )));
            }
            let ratio = r / l;
            if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
                return Err(CxError::NonIntegralRatio { value: ratio });
            }
            let k = plan.k as f64;
            let nr = (plan.n - plan.r) as f64;
            check_f64(
                "1/Q <= L^k/(S1 R^(k-1))",
                1.0 / q,
                l.powf(k) / (s1 * r.powf(k - 1.0)),
            )?;
            check_f64("Q^(-1-1/(n-r)) <= L/R", q.powf(-1.0 - 1.0 / nr), l / r)?;
            check_f64("R/L >= Q^(1+1/(n-r))", q.powf(1.0 + 1.0 / nr), ratio)?;
            check_f64("S1 <= R^(1/2)", s1, r.sqrt())?;
            Ok(Instance {
                plan: plan.clone(),
                j: None,
                r_value: r,
                l_value: l,
                s1,
                q_cap: q,
                rl: ratio.round() as i64,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Test function
// ---------------------------------------------------------------------------

/// The constructed initial datum: a profile window in the first r
/// coordinates around frequency witness * R, times a Dirichlet kernel over
/// the lattice L * [R/L, 2R/L)^(n-r) in the rest.
#[derive(Debug, Clone)]
pub struct TestFunction {
    pub instance: Instance,
    pub witness: Vec<i64>,
    pub amplitude: f64,
    /// max(2, M_1, ..., M_r).
    pub m_star: i64,
    /// Annulus constant C = 2 M* sqrt(n): the Fourier support lies in
    /// { R/C <= |xi| <= C R } once S1 <= R/2.
    pub annulus_constant: f64,
    pub norm_lower: f64,
    pub norm_upper: f64,
}

impl TestFunction {
    pub fn new(instance: Instance, witness: Vec<i64>) -> Self {
        let n = instance.plan.n;
        let nr = instance.dims();
        let m_star = witness.iter().copied().max().unwrap_or(1).max(2);
        let annulus_constant = 2.0 * m_star as f64 * (n as f64).sqrt();
        let phi_l2 = profile::profile().phi_l2;
        // R/L is integral, so floor and ceiling agree and the bracket is
        // a single value.
        let block = (instance.rl as f64).powf(nr as f64 / 2.0);
        let norm = instance.s1.powf(-0.5) * block * phi_l2.powi(n as i32);
        TestFunction {
            instance,
            witness,
            amplitude: 1.0,
            m_star,
            annulus_constant,
            norm_lower: norm,
            norm_upper: norm,
        }
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn l2_norm(&self) -> f64 {
        self.amplitude * self.norm_lower
    }

    pub fn to_json(&self) -> Value {
        json!({
            "instance": self.instance.to_json(),
            "witness": self.witness,
            "annulus_constant": self.annulus_constant,
            "l2_norm_lower": self.norm_lower,
            "l2_norm_upper": self.norm_upper,
        })
    }
}

// ---------------------------------------------------------------------------
// Lower-bound chain
// ---------------------------------------------------------------------------

/// Everything measured while certifying |S| at one good box point.
#[derive(Debug, Clone)]
pub struct ChainReport {
    pub q: u64,
    pub a: u64,
    pub b: Vec<u64>,
    pub offsets: Vec<f64>,
    pub s_magnitude: f64,
    pub t_magnitude: f64,
    pub main: f64,
    pub error2: f64,
    /// (1/2) floor(R/(Lq))^(n-r) q^((n-r)/2).
    pub threshold: f64,
    pub certified: bool,
    pub error_within_half_main: bool,
    /// 2^(-(n-r)-1) (R/(L sqrt(Q)))^(n-r), the floor the main term must meet.
    pub main_floor: f64,
    pub main_above_floor: bool,
    /// c1/(2 d1) - c2 delta0 / (S1 R^(k-1)), positive when the time window
    /// is nonempty.
    pub t_window: f64,
}

impl ChainReport {
    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "a": self.a,
            "b": self.b,
            "offsets": self.offsets,
            "s_magnitude": self.s_magnitude,
            "t_magnitude": self.t_magnitude,
            "main": self.main,
            "error2": self.error2,
            "threshold": self.threshold,
            "certified": self.certified,
            "error_within_half_main": self.error_within_half_main,
            "main_floor": self.main_floor,
            "main_above_floor": self.main_above_floor,
            "t_window": self.t_window,
        })
    }
}

/// d/dx1 of the leading form at (witness * R, range-top), the denominator
/// of the time normalization. The range top is L(ceil(2R/L) - 1) = 2R - L
/// in every trailing coordinate since R/L is integral.
pub fn derivative_at_scale(pk: &Form, witness: &[i64], inst: &Instance) -> f64 {
    let n = pk.nvars();
    let r = witness.len();
    let d1 = pk.partial_derivative(0);
    let point: Vec<BigRational> = (0..n)
        .map(|i| {
            if i < r {
                BigRational::from_integer(BigInt::from(witness[i]))
                    * big_from_f64_pow2(inst.r_value)
            } else {
                BigRational::from_integer(BigInt::from(2)) * big_from_f64_pow2(inst.r_value)
                    - big_from_f64_pow2(inst.l_value)
            }
        })
        .collect();
    d1.evaluate(&point)
        .expect("arity matches")
        .to_f64()
        .unwrap_or(f64::INFINITY)
}

/// Exact rational from an f64 that is a power of two (as all instance
/// magnitudes are).
fn big_from_f64_pow2(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite instance magnitude")
}

/// Certifies the lattice-sum lower bound at one good box point: chooses the
/// time so that the leading phase hits 2 pi a / q exactly, evaluates the
/// sum with the given offsets on the linear angles, splits off
/// floor(R/(Lq))^(n-r) copies of T(a,b;q), and checks
/// |S| >= (1/2) floor(R/(Lq))^(n-r) q^((n-r)/2) with the remainder at most
/// half the main term.
#[allow(clippy::too_many_arguments)]
pub fn lower_bound_chain(
    inst: &Instance,
    pk: &Form,
    witness: &[i64],
    constants: &Constants,
    q: u64,
    a: u64,
    b: &[u64],
    offsets: &[f64],
) -> Result<ChainReport, CxError> {
    let nr = inst.dims();
    if b.len() != nr || offsets.len() != nr {
        return Err(CxError::ParameterRange(format!(
            "expected {nr} trailing coordinates, got {} and {}",
            b.len(),
            offsets.len()
        )));
    }
    let k = inst.plan.k as f64;

    // Time-window compatibility. Both sides are tiny at scale; the check is
    // the sign of the difference.
    let d1 = derivative_at_scale(pk, witness, inst).abs();
    if d1 == 0.0 {
        return Err(CxError::TimeWindowEmpty(
            "the leading derivative vanishes at the witness scale".into(),
        ));
    }
    let t_window = constants.c1 / (2.0 * d1)
        - constants.c2 * constants.delta0 / (inst.s1 * inst.r_value.powf(k - 1.0));
    if t_window <= 0.0 {
        return Err(CxError::TimeWindowEmpty(format!(
            "c1/(2 d1) = {:e} <= c2 delta0/(S1 R^(k-1)) = {:e}",
            constants.c1 / (2.0 * d1),
            constants.c2 * constants.delta0 / (inst.s1 * inst.r_value.powf(k - 1.0))
        )));
    }
    // The wiggle room in the time parameter must cover the box half-width
    // c4/q so that the leading angle can be made exactly rational.
    let wiggle = constants.c2 * constants.delta0 * inst.l_value.powf(k)
        / (inst.s1 * inst.r_value.powf(k - 1.0));
    if constants.c4 / q as f64 > wiggle {
        return Err(CxError::TimeWindowEmpty(format!(
            "c4/q = {:e} exceeds the admissible phase shift {:e}",
            constants.c4 / q as f64,
            wiggle
        )));
    }

    let uppers = vec![2.0 * inst.rl as f64; nr];
    let coeff_angle = RationalAngle::exact(a as i64, q);
    let linear_angles: Vec<RationalAngle> = b
        .iter()
        .zip(offsets)
        .map(|(&bi, &off)| RationalAngle::exact(bi as i64, q).with_offset(off))
        .collect();
    let s_value = real_sum(pk, witness, inst.rl, &uppers, coeff_angle, &linear_angles)?;

    let spec = specialize_leading_form(pk, witness, inst.rl)?;
    let reduced = spec.reduce_mod(q)?;
    let a_el = FieldElem::new(a as i64, q)?;
    let b_el: Vec<FieldElem> = b
        .iter()
        .map(|&bi| FieldElem::new(bi as i64, q))
        .collect::<Result<_, _>>()?;
    let t_value = complete_sum(&reduced, a_el, &b_el)?;

    let blocks = (inst.rl as f64 / q as f64).floor();
    let main = blocks.powi(nr as i32) * t_value.norm();
    let s_magnitude = s_value.norm();
    let error2 = (s_magnitude - main).abs();
    let threshold = 0.5 * blocks.powi(nr as i32) * (q as f64).powf(nr as f64 / 2.0);
    let main_floor =
        0.5f64.powi(nr as i32 + 1) * (inst.rl as f64 / inst.q_cap.sqrt()).powf(nr as f64);

    Ok(ChainReport {
        q,
        a,
        b: b.to_vec(),
        offsets: offsets.to_vec(),
        s_magnitude,
        t_magnitude: t_value.norm(),
        main,
        error2,
        threshold,
        certified: s_magnitude >= threshold,
        error_within_half_main: error2 <= 0.5 * main,
        main_floor,
        main_above_floor: main >= main_floor * (1.0 - 1e-12),
        t_window,
    })
}
