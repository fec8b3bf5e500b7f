//! Numerical evaluation of the evolution operator on the constructed test
//! function: adaptive tensor Gauss-Legendre quadrature of the frequency
//! integral times the lattice sum in angle coordinates.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::instance::TestFunction;
use super::profile::{gauss_legendre, profile};
use super::CxError;
use crate::expsum::{cis, real_sum, RationalAngle};
use crate::poly::Form;

const TAU: f64 = std::f64::consts::TAU;

/// Flattened polynomial with f64 coefficients for fast quadrature-node
/// evaluation.
struct F64Poly {
    terms: Vec<(Vec<u32>, f64)>,
}

impl F64Poly {
    fn from_form(f: &Form) -> Self {
        let terms = f
            .terms()
            .map(|(m, c)| (m.exponents().to_vec(), c.to_f64().unwrap_or(0.0)))
            .collect();
        F64Poly { terms }
    }

    fn eval(&self, point: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (exps, c) in &self.terms {
            let mut t = *c;
            for (i, &e) in exps.iter().enumerate() {
                t *= point[i].powi(e as i32);
            }
            acc += t;
        }
        acc
    }
}

/// The non-arithmetic part of the phase after centering at the frozen
/// lattice corner: P(S o xi + M o R, eta + Rtop) - P(M o R, Rtop) as an
/// exact polynomial in (xi, eta), built by affine substitution.
fn centered_phase_poly(tf: &TestFunction, pk: &Form) -> Form {
    let inst = &tf.instance;
    let n = pk.nvars();
    let r = tf.witness.len();
    let big = |v: f64| BigRational::from_float(v).expect("instance magnitudes are finite");
    let r_big = big(inst.r_value);
    let l_big = big(inst.l_value);
    let rtop = BigRational::from_integer(BigInt::from(2)) * &r_big - &l_big;

    let mut scales = Vec::with_capacity(n);
    let mut shifts = Vec::with_capacity(n);
    for i in 0..n {
        if i < r {
            scales.push(if i == 0 {
                big(inst.s1)
            } else {
                BigRational::from_integer(BigInt::from(1))
            });
            shifts.push(BigRational::from_integer(BigInt::from(tf.witness[i])) * &r_big);
        } else {
            scales.push(BigRational::from_integer(BigInt::from(1)));
            shifts.push(rtop.clone());
        }
    }
    let composed = pk.compose_affine(&scales, &shifts);
    let zeros = vec![BigRational::zero(); n];
    let constant = composed.evaluate(&zeros).expect("arity matches");
    composed.sub(&Form::constant(n, constant))
}

/// |T_t f(x)|: the frequency integral over [-1,1]^n of the profile window
/// times the centered phase, evaluated by node-doubling tensor
/// Gauss-Legendre, multiplied by the lattice sum evaluated in angle
/// coordinates. The unimodular factor carried by the witness frequency is
/// dropped under the absolute value.
pub fn evaluate_operator(tf: &TestFunction, pk: &Form, x: &[f64], t: f64) -> Result<f64, CxError> {
    let inst = &tf.instance;
    let n = inst.plan.n;
    let r = inst.plan.r;
    let nr = inst.dims();
    if x.len() != n {
        return Err(CxError::ParameterRange(format!(
            "point has {} coordinates, expected {n}",
            x.len()
        )));
    }

    // Lattice sum in angle coordinates: y_j = L x_j, leading coefficient
    // angle L^k t, both as real offsets (arguments are modest at desk
    // scale; the compensated reduction handles the rest).
    let lk_t = inst.l_value.powf(inst.plan.k as f64) * t;
    let coeff_angle = RationalAngle::zero().with_offset(lk_t);
    let linear_angles: Vec<RationalAngle> = (r..n)
        .map(|j| RationalAngle::zero().with_offset(inst.l_value * x[j]))
        .collect();
    let uppers = vec![2.0 * inst.rl as f64; nr];
    let lattice = real_sum(
        pk,
        &tf.witness,
        inst.rl,
        &uppers,
        coeff_angle,
        &linear_angles,
    )?;

    // Frequency integral.
    let phase_poly = F64Poly::from_form(&centered_phase_poly(tf, pk));
    let prof = profile();
    let mut scaled_x = x.to_vec();
    scaled_x[0] *= inst.s1;

    let mut previous: Option<f64> = None;
    for nodes_per_axis in [8usize, 16, 32, 64, 128] {
        let (nodes, weights) = gauss_legendre(nodes_per_axis);
        let total_nodes = nodes_per_axis.pow(n as u32);
        let value: Complex64 = (0..total_nodes)
            .into_par_iter()
            .map(|flat| {
                let mut idx = flat;
                let mut point = vec![0.0f64; n];
                let mut weight = 1.0;
                let mut window = 1.0;
                for d in 0..n {
                    let i = idx % nodes_per_axis;
                    idx /= nodes_per_axis;
                    point[d] = nodes[i];
                    weight *= weights[i];
                    window *= prof.phi_hat.eval(nodes[i]);
                }
                if window == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                // linear phase (S o xi, eta) . x plus the centered symbol phase
                let mut theta = 0.0;
                for d in 0..n {
                    let scale = if d == 0 { inst.s1 } else { 1.0 };
                    theta += scale * point[d] * x[d];
                }
                theta += t * phase_poly.eval(&point);
                cis(theta.rem_euclid(TAU)) * window * weight
            })
            .reduce(|| Complex64::new(0.0, 0.0), |a, b| a + b);
        let magnitude = value.norm() / TAU.powi(n as i32);
        if let Some(prev) = previous {
            if (magnitude - prev).abs() <= 1e-6 * magnitude.abs().max(1e-12) {
                return Ok(tf.amplitude * magnitude * lattice.norm());
            }
        }
        previous = Some(magnitude);
    }
    Err(CxError::QuadratureDivergence)
}

/// Direct evaluation of |f(x)| from the defining series, used as an
/// independent cross-check of the operator at t = 0.
pub fn test_function_magnitude(tf: &TestFunction, x: &[f64]) -> f64 {
    let inst = &tf.instance;
    let n = inst.plan.n;
    let r = inst.plan.r;
    let prof = profile();
    let mut window = prof.phi.eval(inst.s1 * x[0]);
    for xi in x.iter().take(r).skip(1) {
        window *= prof.phi.eval(*xi);
    }
    for xi in x.iter().take(n).skip(r) {
        window *= prof.phi.eval(*xi);
    }
    let mut lattice = Complex64::new(0.0, 0.0);
    let mut m = vec![inst.rl; n - r];
    loop {
        let mut theta = 0.0;
        for (mj, xj) in m.iter().zip(x.iter().skip(r)) {
            theta += inst.l_value * *mj as f64 * *xj;
        }
        lattice += cis(theta.rem_euclid(TAU));
        let mut pos = 0;
        while pos < n - r {
            m[pos] += 1;
            if m[pos] < 2 * inst.rl {
                break;
            }
            m[pos] = inst.rl;
            pos += 1;
        }
        if pos == n - r {
            break;
        }
    }
    tf.amplitude * window * lattice.norm()
}
