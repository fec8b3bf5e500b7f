//! Individual exponential sums: complete sums by direct enumeration, good
//! pair extraction, incomplete-sum ratios, lattice sums with near-rational
//! real phases, and their decomposition into complete sums plus remainder.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::phase::{cis, roots_of_unity, DoubleDouble};
use super::table::SumTable;
use super::tolerances::WEIL_REL_SLACK;
use super::ExpSumError;
use crate::poly::{FieldElem, FieldPoly, Form};

/// T(a,b;q) by direct enumeration of F_q^m, with integer phases reduced
/// mod q before a single root-of-unity table lookup. The histogram of
/// phases makes the result independent of enumeration order, hence
/// bit-stable.
pub fn complete_sum(
    poly: &FieldPoly,
    a: FieldElem,
    b: &[FieldElem],
) -> Result<Complex64, ExpSumError> {
    let q = a.modulus();
    if poly.modulus().is_some_and(|pq| pq != q) || b.iter().any(|x| x.modulus() != q) {
        return Err(ExpSumError::ModulusMismatch);
    }
    let m = poly.nvars();
    if b.len() != m {
        return Err(ExpSumError::DimensionMismatch {
            expected: m,
            got: b.len(),
        });
    }
    let mut hist = vec![0u64; q as usize];
    let mut x = vec![0u64; m];
    loop {
        let mut phase = (a.value() as u128 * poly.evaluate_residues(&x, q) as u128) % q as u128;
        for (bi, xi) in b.iter().zip(x.iter()) {
            phase = (phase + bi.value() as u128 * *xi as u128) % q as u128;
        }
        hist[phase as usize] += 1;
        let mut pos = 0;
        while pos < m {
            x[pos] += 1;
            if x[pos] < q {
                break;
            }
            x[pos] = 0;
            pos += 1;
        }
        if pos == m {
            break;
        }
    }
    let roots = roots_of_unity(q);
    let mut acc = Complex64::new(0.0, 0.0);
    for (count, w) in hist.iter().zip(roots.iter()) {
        acc += w * *count as f64;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Good pairs
// ---------------------------------------------------------------------------

/// Pairs (a,b) whose complete sum has the generic square-root size:
/// alpha1 * q^(m/2) <= |T| <= (k-1)^m * q^(m/2).
#[derive(Debug, Clone)]
pub struct GoodPairSet {
    pub q: u64,
    pub m: usize,
    pub degree: u32,
    pub alpha1: BigRational,
    pub alpha2: BigRational,
    /// Flat table indices of the good pairs, ascending.
    pub indices: Vec<usize>,
    /// alpha2 * q^(m+1), the promised lower bound on the count.
    pub required: u64,
}

impl GoodPairSet {
    pub fn count(&self) -> usize {
        self.indices.len()
    }

    pub fn pairs<'t>(&self, table: &'t SumTable) -> impl Iterator<Item = (u64, Vec<u64>)> + 't {
        let idx = self.indices.clone();
        idx.into_iter().map(move |i| table.pair_of(i))
    }
}

/// Default density constant alpha2 = (1/8) (k-1)^(-2m).
pub fn default_alpha2(k: u32, m: usize) -> BigRational {
    let base = BigInt::from((k.max(2) - 1) as i64).pow(2 * m as u32);
    BigRational::new(BigInt::one(), BigInt::from(8) * base)
}

/// Smallest modulus making the pair-counting argument effective:
/// the least q with (1/4)(k-1)^(-2m) q^(m+1) >= 2.
pub fn k2_threshold(k: u32, m: usize) -> u64 {
    let need = 8u128 * (k.max(2) as u128 - 1).pow(2 * m as u32);
    let mut q = 2u128;
    while q.pow(m as u32 + 1) < need {
        q += 1;
    }
    q as u64
}

/// Filters the two-sided bound and asserts the density promise
/// count >= alpha2 * q^(m+1). Numerical slack of 1e-9 relative is allowed
/// on both sides so that sums meeting a bound exactly (Gauss sums) pass.
pub fn good_pairs(
    table: &SumTable,
    alpha1: &BigRational,
    alpha2: &BigRational,
) -> Result<GoodPairSet, ExpSumError> {
    let q = table.q;
    let m = table.m;
    let k = table.degree.max(2);
    let qm2 = (q as f64).powf(m as f64 / 2.0);
    let lower = alpha1.to_f64().expect("small rational") * qm2 * (1.0 - WEIL_REL_SLACK);
    let upper = ((k - 1) as f64).powi(m as i32) * qm2 * (1.0 + WEIL_REL_SLACK);
    let indices: Vec<usize> = table
        .values()
        .iter()
        .enumerate()
        .filter_map(|(i, v)| {
            let norm = v.norm();
            (norm >= lower && norm <= upper).then_some(i)
        })
        .collect();
    let space = BigRational::from_integer(BigInt::from(q).pow(m as u32 + 1));
    let required_rat = alpha2 * &space;
    let required = required_rat
        .ceil()
        .to_integer()
        .to_u64()
        .unwrap_or(u64::MAX);
    let count = BigRational::from_integer(BigInt::from(indices.len() as u64));
    if count < required_rat {
        return Err(ExpSumError::GoodPairDensity {
            q,
            count: indices.len() as u64,
            required,
        });
    }
    Ok(GoodPairSet {
        q,
        m,
        degree: table.degree,
        alpha1: alpha1.clone(),
        alpha2: alpha2.clone(),
        indices,
        required,
    })
}

// ---------------------------------------------------------------------------
// Incomplete sums
// ---------------------------------------------------------------------------

/// Mixed complete/incomplete sum report: coordinates in `complete_axes`
/// run over full residue systems, the rest over [1, H_i]; the ratio
/// normalizes by q^(n/2) (log q)^{#incomplete}.
#[derive(Debug, Clone)]
pub struct IncompleteSumReport {
    pub value: Complex64,
    pub magnitude: f64,
    pub normalization: f64,
    pub ratio: f64,
}

pub fn incomplete_sum_check(
    poly: &FieldPoly,
    complete_axes: &[bool],
    cutoffs: &[u64],
) -> Result<IncompleteSumReport, ExpSumError> {
    let q = poly.modulus().ok_or(ExpSumError::ZeroPolynomial)?;
    let n = poly.nvars();
    if complete_axes.len() != n || cutoffs.len() != n {
        return Err(ExpSumError::DimensionMismatch {
            expected: n,
            got: complete_axes.len().min(cutoffs.len()),
        });
    }
    let mut ranges = Vec::with_capacity(n);
    let mut incomplete = 0usize;
    for i in 0..n {
        if complete_axes[i] {
            ranges.push(q);
        } else {
            if cutoffs[i] < 1 || cutoffs[i] > q {
                return Err(ExpSumError::RangeViolation {
                    index: i,
                    cutoff: cutoffs[i],
                    q,
                });
            }
            ranges.push(cutoffs[i]);
            incomplete += 1;
        }
    }

    let roots = roots_of_unity(q);
    let mut hist = vec![0u64; q as usize];
    let mut x: Vec<u64> = vec![1; n];
    loop {
        let point: Vec<u64> = x.iter().map(|&v| v % q).collect();
        hist[poly.evaluate_residues(&point, q) as usize] += 1;
        let mut pos = 0;
        while pos < n {
            x[pos] += 1;
            if x[pos] <= ranges[pos] {
                break;
            }
            x[pos] = 1;
            pos += 1;
        }
        if pos == n {
            break;
        }
    }
    let mut value = Complex64::new(0.0, 0.0);
    for (count, w) in hist.iter().zip(roots.iter()) {
        value += w * *count as f64;
    }
    let magnitude = value.norm();
    let normalization = (q as f64).powf(n as f64 / 2.0) * (q as f64).ln().powi(incomplete as i32);
    Ok(IncompleteSumReport {
        value,
        magnitude,
        normalization,
        ratio: magnitude / normalization,
    })
}

// ---------------------------------------------------------------------------
// Real-coefficient lattice sums
// ---------------------------------------------------------------------------

/// An angle 2*pi*numer/denom plus a small real perturbation; the exact part
/// is handled with integer arithmetic and a root-of-unity table, the
/// perturbation with compensated accumulation.
#[derive(Debug, Clone, Copy)]
pub struct RationalAngle {
    pub numer: i64,
    pub denom: u64,
    pub offset: f64,
}

impl RationalAngle {
    pub fn exact(numer: i64, denom: u64) -> Self {
        RationalAngle {
            numer,
            denom,
            offset: 0.0,
        }
    }

    pub fn zero() -> Self {
        RationalAngle {
            numer: 0,
            denom: 1,
            offset: 0.0,
        }
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn value(&self) -> f64 {
        std::f64::consts::TAU * self.numer as f64 / self.denom as f64 + self.offset
    }
}

/// Specialized integer polynomial for the sums: the leading form with its
/// first r variables fixed at witness * (R/L), restricted to the trailing
/// variables, with all coefficients integral.
pub fn specialize_leading_form(pk: &Form, witness: &[i64], rl: i64) -> Result<Form, ExpSumError> {
    let n = pk.nvars();
    let r = witness.len();
    if r >= n {
        return Err(ExpSumError::DimensionMismatch {
            expected: n - 1,
            got: r,
        });
    }
    let assignments: BTreeMap<usize, BigRational> = witness
        .iter()
        .enumerate()
        .map(|(i, &mi)| {
            (
                i,
                BigRational::from_integer(BigInt::from(mi) * BigInt::from(rl)),
            )
        })
        .collect();
    let specialized = pk
        .specialize(&assignments)
        .map_err(|_| ExpSumError::DimensionMismatch {
            expected: n,
            got: r,
        })?;
    let rest: Vec<usize> = (r..n).collect();
    let restricted = specialized
        .restrict_to_vars(&rest)
        .map_err(|_| ExpSumError::NonIntegerCoefficients)?;
    if restricted.integer_terms().is_none() {
        return Err(ExpSumError::NonIntegerCoefficients);
    }
    Ok(restricted)
}

struct IntPoly {
    terms: Vec<(Vec<u32>, i128)>,
    nvars: usize,
}

impl IntPoly {
    fn from_form(f: &Form) -> Result<Self, ExpSumError> {
        let terms = f
            .integer_terms()
            .ok_or(ExpSumError::NonIntegerCoefficients)?;
        let terms = terms
            .into_iter()
            .map(|(m, c)| {
                let c = c.to_i128().ok_or(ExpSumError::CoefficientOverflow)?;
                Ok((m.exponents().to_vec(), c))
            })
            .collect::<Result<Vec<_>, ExpSumError>>()?;
        Ok(IntPoly {
            terms,
            nvars: f.nvars(),
        })
    }

    fn eval(&self, point: &[i64]) -> Option<i128> {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc: i128 = 0;
        for (exps, c) in &self.terms {
            let mut t = *c;
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    t = t.checked_mul(point[i] as i128)?;
                }
            }
            acc = acc.checked_add(t)?;
        }
        Some(acc)
    }
}

/// The lattice sum sum_m e(m . y + V(m) * c) over the box
/// prod_j [rl, upper_j), where V is the integer polynomial `pk` specialized
/// at witness * rl, y_j and c are near-rational angles. When every
/// perturbation vanishes the computation is pure integer phase arithmetic
/// through one root-of-unity table, so repeated runs are bit-identical.
pub fn real_sum(
    pk: &Form,
    witness: &[i64],
    rl: i64,
    uppers: &[f64],
    coeff_angle: RationalAngle,
    linear_angles: &[RationalAngle],
) -> Result<Complex64, ExpSumError> {
    if rl < 1 {
        return Err(ExpSumError::RangeViolation {
            index: 0,
            cutoff: rl.max(0) as u64,
            q: 0,
        });
    }
    let spec = specialize_leading_form(pk, witness, rl)?;
    let dim = spec.nvars();
    if uppers.len() != dim || linear_angles.len() != dim {
        return Err(ExpSumError::DimensionMismatch {
            expected: dim,
            got: uppers.len().min(linear_angles.len()),
        });
    }
    let poly = IntPoly::from_form(&spec)?;

    // Common denominator for the exact phase parts.
    let mut denom: u64 = coeff_angle.denom.max(1);
    for a in linear_angles {
        denom = denom.lcm(&a.denom.max(1));
    }
    if denom > 1_000_000 {
        return Err(ExpSumError::DenominatorTooLarge { denom });
    }
    let roots = roots_of_unity(denom);
    let coeff_mult = (coeff_angle.numer as i128) * (denom / coeff_angle.denom.max(1)) as i128;
    let lin_mult: Vec<i128> = linear_angles
        .iter()
        .map(|a| (a.numer as i128) * (denom / a.denom.max(1)) as i128)
        .collect();
    let exact_only = coeff_angle.offset == 0.0 && linear_angles.iter().all(|a| a.offset == 0.0);

    let counts: Vec<i64> = uppers
        .iter()
        .map(|&u| ((u.ceil() as i64) - rl).max(0))
        .collect();
    if counts.contains(&0) {
        return Ok(Complex64::new(0.0, 0.0));
    }

    let mut hist = vec![0u64; denom as usize];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut m: Vec<i64> = vec![rl; dim];
    loop {
        let v = poly.eval(&m).ok_or(ExpSumError::CoefficientOverflow)?;
        let mut exact = (v.rem_euclid(denom as i128)) * coeff_mult.rem_euclid(denom as i128);
        for (mult, mj) in lin_mult.iter().zip(m.iter()) {
            exact += mult.rem_euclid(denom as i128) * (*mj as i128).rem_euclid(denom as i128);
        }
        let phase_idx = exact.rem_euclid(denom as i128) as usize;
        if exact_only {
            hist[phase_idx] += 1;
        } else {
            let mut dd = DoubleDouble::zero().add_prod(v as f64, coeff_angle.offset);
            for (a, mj) in linear_angles.iter().zip(m.iter()) {
                dd = dd.add_prod(*mj as f64, a.offset);
            }
            acc += roots[phase_idx] * cis(dd.rem_tau());
        }
        let mut pos = 0;
        while pos < dim {
            m[pos] += 1;
            if m[pos] < rl + counts[pos] {
                break;
            }
            m[pos] = rl;
            pos += 1;
        }
        if pos == dim {
            break;
        }
    }
    if exact_only {
        for (count, w) in hist.iter().zip(roots.iter()) {
            if *count > 0 {
                acc += w * *count as f64;
            }
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Decomposition into complete sums
// ---------------------------------------------------------------------------

/// Split of a near-rational lattice sum into floor(N_i/q) copies of the
/// complete sum T(a,b;q) plus a measured remainder, with the error budget
/// floor(N/q)^m q^(m/2) (V N + floor(N/q)^(-1) (log q)^m) scaled by an
/// empirical constant.
#[derive(Debug, Clone)]
pub struct CompleteSumSplit {
    pub s_value: Complex64,
    pub t_value: Complex64,
    pub main: f64,
    pub error_measured: f64,
    pub error_budget: f64,
    pub vn: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn decompose_sum(
    pk: &Form,
    witness: &[i64],
    rl: i64,
    uppers: &[f64],
    coeff_angle: RationalAngle,
    linear_angles: &[RationalAngle],
    q: u64,
    a: u64,
    b: &[u64],
    v_width: f64,
    budget_constant: f64,
) -> Result<CompleteSumSplit, ExpSumError> {
    let spec = specialize_leading_form(pk, witness, rl)?;
    let dim = spec.nvars();
    let counts: Vec<f64> = uppers
        .iter()
        .map(|&u| (u.ceil() - rl as f64).max(0.0))
        .collect();
    let n_max = counts.iter().fold(0.0f64, |acc, &c| acc.max(c));
    let vn = v_width * n_max;
    if vn > 1.0 {
        return Err(ExpSumError::PerturbationTooLarge { vn });
    }

    let s_value = real_sum(pk, witness, rl, uppers, coeff_angle, linear_angles)?;

    let reduced = spec
        .reduce_mod(q)
        .map_err(|_| ExpSumError::ModulusMismatch)?;
    let a_el = FieldElem::new(a as i64, q).map_err(|_| ExpSumError::ModulusMismatch)?;
    let b_el: Vec<FieldElem> = b
        .iter()
        .map(|&bi| FieldElem::new(bi as i64, q).map_err(|_| ExpSumError::ModulusMismatch))
        .collect::<Result<_, _>>()?;
    let t_value = complete_sum(&reduced, a_el, &b_el)?;

    let block_product: f64 = counts.iter().map(|&c| (c / q as f64).floor()).product();
    let main = block_product * t_value.norm();
    let error_measured = (s_value.norm() - main).abs();

    let blocks = (n_max / q as f64).floor();
    let qm2 = (q as f64).powf(dim as f64 / 2.0);
    let logs = (q as f64).ln().powi(dim as i32);
    let error_budget = if blocks >= 1.0 {
        budget_constant * blocks.powi(dim as i32) * qm2 * (vn + logs / blocks)
    } else {
        budget_constant * qm2 * logs
    };

    Ok(CompleteSumSplit {
        s_value,
        t_value,
        main,
        error_measured,
        error_budget,
        vn,
    })
}
