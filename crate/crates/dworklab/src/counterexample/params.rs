//! Closed-form solution of the exponent optimization: sigma, kappa and
//! lambda as exact rationals, with every constraint re-verified and the
//! equality pattern recorded.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::CxError;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// All exponents and derived constants of a counterexample construction:
/// S_1 = R^sigma, L = R^lambda, Q = R^kappa, the threshold increment
/// delta, and the progression modulus that keeps R/L integral along
/// R = 2^j.
#[derive(Debug, Clone)]
pub struct ParamPlan {
    pub n: usize,
    pub k: u32,
    pub r: usize,
    pub sigma: BigRational,
    pub kappa: BigRational,
    pub lambda: BigRational,
    pub delta: BigRational,
    pub s_threshold: BigRational,
    /// Delta_0 = 1/(n-r), the block-count exponent margin.
    pub delta0: BigRational,
    /// D = (k-1)(n-(r-1)) + 1, the common denominator scale.
    pub depth: i64,
    /// R = 2^j must have j divisible by this (equal to 2D).
    pub progression_modulus: u64,
}

/// One verified constraint with its slack at the chosen exponents.
#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub name: &'static str,
    pub holds: bool,
    pub equality: bool,
}

impl ParamPlan {
    /// Re-derives every constraint of the exponent system; at the closed-form
    /// optimum the first three hold with equality.
    pub fn verify_relations(&self) -> Vec<RelationCheck> {
        let (n, r) = (self.n as i64, self.r as i64);
        let k = BigRational::from_integer(BigInt::from(self.k));
        let one = BigRational::one();

        let mut checks = Vec::new();
        let mut push = |name: &'static str, lhs: BigRational, rhs: BigRational, ge: bool| {
            let holds = if ge { lhs >= rhs } else { lhs <= rhs };
            checks.push(RelationCheck {
                name,
                holds,
                equality: lhs == rhs,
            });
        };

        // kappa + k*lambda >= k - 1 + sigma
        push(
            "kappa + k*lambda >= k - 1 + sigma",
            &self.kappa + &k * &self.lambda,
            &k - &one + &self.sigma,
            true,
        );
        // ((n-r+1)/(n-r)) kappa + lambda >= 1
        push(
            "((n-r+1)/(n-r))*kappa + lambda >= 1",
            rat(n - r + 1, n - r) * &self.kappa + &self.lambda,
            one.clone(),
            true,
        );
        // lambda <= 1 - kappa (1 + Delta_0)
        push(
            "lambda <= 1 - kappa*(1 + delta0)",
            self.lambda.clone(),
            &one - &self.kappa * (&one + &self.delta0),
            false,
        );
        // lambda > (k-1)/k, needed for the measure transfer
        let lk = (&k - &one) / &k;
        checks.push(RelationCheck {
            name: "lambda > (k-1)/k",
            holds: self.lambda > lk,
            equality: false,
        });
        // 0 < kappa, lambda < 1 and sigma = 1/2
        checks.push(RelationCheck {
            name: "0 < kappa < 1 and 0 < lambda < 1",
            holds: self.kappa > BigRational::zero()
                && self.kappa < one
                && self.lambda > BigRational::zero()
                && self.lambda < BigRational::one(),
            equality: false,
        });
        checks
    }

    /// The growth exponent available below the threshold:
    /// sigma/2 + (n-r)/2 - (kappa+lambda)(n-r)/2 - s, evaluated as f64.
    pub fn ratio_exponent(&self, s: f64) -> f64 {
        let nr = (self.n - self.r) as f64;
        let sigma = self.sigma.to_f64().unwrap();
        let kl = (&self.kappa + &self.lambda).to_f64().unwrap();
        sigma / 2.0 + nr / 2.0 - kl * nr / 2.0 - s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "k": self.k,
            "r": self.r,
            "sigma": self.sigma.to_string(),
            "kappa": self.kappa.to_string(),
            "lambda": self.lambda.to_string(),
            "delta": self.delta.to_string(),
            "s_threshold": self.s_threshold.to_string(),
            "delta0": self.delta0.to_string(),
            "progression_modulus": self.progression_modulus,
            "relations": self.verify_relations().iter().map(|c| json!({
                "name": c.name, "holds": c.holds, "equality": c.equality,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Solves the exponent system exactly: sigma = 1/2,
/// kappa = (n-r)/(2D), lambda = 1 - (n-r+1)/(2D) with
/// D = (k-1)(n-(r-1)) + 1. Refuses r = n, where the threshold degenerates
/// to 1/4 and the lattice sum over the last n-r coordinates is empty.
pub fn solve_parameters(n: usize, k: u32, r: usize) -> Result<ParamPlan, CxError> {
    if n < 2 || k < 2 || r < 1 {
        return Err(CxError::ParameterRange(format!(
            "need n >= 2, k >= 2, r >= 1; got n={n}, k={k}, r={r}"
        )));
    }
    if r >= n {
        return Err(CxError::ParameterRange(format!(
            "r = {r} >= n = {n}: the construction sums over n-r coordinates, and \
             the threshold degenerates to 1/4"
        )));
    }
    let (ni, ki, ri) = (n as i64, k as i64, r as i64);
    let depth = (ki - 1) * (ni - (ri - 1)) + 1;
    let plan = ParamPlan {
        n,
        k,
        r,
        sigma: rat(1, 2),
        kappa: rat(ni - ri, 2 * depth),
        lambda: BigRational::one() - rat(ni - ri + 1, 2 * depth),
        delta: rat(ni - ri, 4 * depth),
        s_threshold: rat(1, 4) + rat(ni - ri, 4 * depth),
        delta0: rat(1, ni - ri),
        depth,
        progression_modulus: 2 * depth as u64,
    };
    debug_assert!(plan.verify_relations().iter().all(|c| c.holds));
    Ok(plan)
}
