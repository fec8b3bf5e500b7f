//! Structural analysis of forms: intertwining rank, nonsingularity and
//! Dwork regularity over Q and over prime fields, bad-prime scans, Deligne
//! specialization, derivative witnesses, dispersivity, the explicit example
//! family, and the threshold/codimension formulas.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::groebner::{is_irrelevant, Ideal};
use crate::poly::{
    is_prime, FieldElem, FieldPoly, Form, Monomial, PolyError, Polynomial, RationalMatrix, Scalar,
};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("input must be homogeneous")]
    NotHomogeneous,
    #[error("degree {got} is below the required minimum {min}")]
    DegreeTooSmall { min: u32, got: u32 },
    #[error("characteristic {q} divides the degree {degree}")]
    CharDividesDegree { q: u64, degree: u32 },
    #[error("input is not Dwork-regular: {0}")]
    NotDworkRegular(String),
    #[error("x1 does not realize intertwining rank {r}: it intertwines x{}", bad_var + 1)]
    RankStructureViolated { r: usize, bad_var: usize },
    #[error("no witness tuple with nonzero derivative found in [1,{b_max}]^r")]
    WitnessSearchExhausted { b_max: u32 },
    #[error("parameter out of range: {0}")]
    ParameterRange(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

// ---------------------------------------------------------------------------
// Intertwining rank
// ---------------------------------------------------------------------------

/// Intertwining structure of a form: which variables share a nonzero mixed
/// second partial with which, per-variable counts, and the minimizing
/// witness. Variable indices are 0-based internally and 1-based in JSON.
#[derive(Debug, Clone)]
pub struct RankReport {
    pub intertwine_sets: Vec<Vec<usize>>,
    pub per_variable_rank: Vec<usize>,
    pub rank: usize,
    pub witness: usize,
    /// Relabeling that moves the witness to position 0 followed by its
    /// intertwined partners: `permutation[new] = old`.
    pub permutation: Vec<usize>,
}

impl RankReport {
    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "witness_variable": self.witness + 1,
            "per_variable_rank": self.per_variable_rank,
            "intertwine_sets": self.intertwine_sets
                .iter()
                .map(|s| s.iter().map(|v| v + 1).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "permutation": self.permutation.iter().map(|v| v + 1).collect::<Vec<_>>(),
        })
    }
}

/// Computes the intertwining rank of a homogeneous form of degree >= 2 by
/// symbolic mixed partials. A variable intertwines with itself by
/// convention.
pub fn intertwining_rank(f: &Form) -> Result<RankReport, AnalysisError> {
    if !f.is_homogeneous() {
        return Err(AnalysisError::NotHomogeneous);
    }
    let deg = f.degree().unwrap_or(0);
    if deg < 2 {
        return Err(AnalysisError::DegreeTooSmall { min: 2, got: deg });
    }
    let n = f.nvars();
    let firsts: Vec<Form> = (0..n).map(|i| f.partial_derivative(i)).collect();
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i == j || !firsts[i].partial_derivative(j).is_zero() {
                sets[i].push(j);
            }
        }
    }
    let ranks: Vec<usize> = sets.iter().map(|s| s.len()).collect();
    let rank = *ranks.iter().min().expect("n >= 1");
    let witness = ranks.iter().position(|&r| r == rank).unwrap();
    let mut permutation = vec![witness];
    permutation.extend(sets[witness].iter().filter(|&&j| j != witness));
    let rest: Vec<usize> = (0..n).filter(|j| !permutation.contains(j)).collect();
    permutation.extend(rest);
    Ok(RankReport {
        intertwine_sets: sets,
        per_variable_rank: ranks,
        rank,
        witness,
        permutation,
    })
}

/// Applies the report's permutation as an explicit change of variables, so
/// that in the result x1 realizes the rank and intertwines exactly
/// x1..x_rank.
pub fn relabel_for_witness(f: &Form, report: &RankReport) -> Form {
    let p = RationalMatrix::permutation(&report.permutation);
    f.change_variables(&p)
        .expect("permutation matrices are invertible")
}

// ---------------------------------------------------------------------------
// Nonsingularity
// ---------------------------------------------------------------------------

fn jacobian_ideal<C: Scalar>(h: &Polynomial<C>) -> Ideal<C> {
    let mut gens = vec![h.clone()];
    gens.extend((0..h.nvars()).map(|i| h.partial_derivative(i)));
    Ideal::new(h.nvars(), gens).expect("nonzero homogeneous input")
}

/// Cheap sound falsifier over Q: a small-height integral projective point
/// where H and all partials vanish certifies singularity outright.
fn rational_singular_probe(h: &Form) -> bool {
    let n = h.nvars();
    if n > 5 {
        return false;
    }
    let partials: Vec<Form> = (0..n).map(|i| h.partial_derivative(i)).collect();
    let vals: Vec<BigRational> = (-2..=2)
        .map(|v| BigRational::from_integer(BigInt::from(v)))
        .collect();
    let mut point = vec![0usize; n];
    loop {
        if point.iter().any(|&i| vals[i] != BigRational::zero()) {
            let p: Vec<BigRational> = point.iter().map(|&i| vals[i].clone()).collect();
            let all_zero = h.evaluate(&p).unwrap().is_zero()
                && partials.iter().all(|d| d.evaluate(&p).unwrap().is_zero());
            if all_zero {
                return true;
            }
        }
        let mut carry = 0;
        loop {
            point[carry] += 1;
            if point[carry] < vals.len() {
                break;
            }
            point[carry] = 0;
            carry += 1;
            if carry == n {
                return false;
            }
        }
    }
}

/// Visits one representative of every point of P^{n-1}(F_q): first nonzero
/// coordinate normalized to 1. Stops early when the visitor returns true.
pub(crate) fn any_projective_point_fq(
    n: usize,
    q: u64,
    mut visit: impl FnMut(&[u64]) -> bool,
) -> bool {
    let mut point = vec![0u64; n];
    for chart in 0..n {
        let free = n - chart - 1;
        point.iter_mut().for_each(|v| *v = 0);
        point[chart] = 1;
        let mut done = false;
        while !done {
            if visit(&point) {
                return true;
            }
            done = true;
            for i in (chart + 1)..n {
                point[i] += 1;
                if point[i] < q {
                    done = false;
                    break;
                }
                point[i] = 0;
            }
            if free == 0 {
                break;
            }
        }
    }
    false
}

/// Sound falsifier over F_q: full projective enumeration over the base
/// field. Finding a common zero proves singularity; absence decides
/// nothing (zeros may live in an extension).
fn field_singular_probe(h: &FieldPoly, q: u64) -> Option<bool> {
    let n = h.nvars();
    if (q as u128).pow(n as u32) > 2_000_000 {
        return None;
    }
    let partials: Vec<FieldPoly> = (0..n).map(|i| h.partial_derivative(i)).collect();
    let found = any_projective_point_fq(n, q, |point| {
        h.evaluate_residues(point, q) == 0
            && partials.iter().all(|d| d.evaluate_residues(point, q) == 0)
    });
    Some(found)
}

/// Nonsingularity over Q: H and all its first partials have no common zero
/// in projective space over the algebraic closure, decided by the
/// irrelevance of the Jacobian ideal under an exact Gröbner computation.
pub fn is_nonsingular_q(h: &Form) -> Result<bool, AnalysisError> {
    if !h.is_homogeneous() {
        return Err(AnalysisError::NotHomogeneous);
    }
    let deg = h.degree().unwrap_or(0);
    if deg < 1 {
        return Err(AnalysisError::DegreeTooSmall { min: 1, got: deg });
    }
    if h.nvars() == 1 {
        return Ok(!h.is_zero());
    }
    if rational_singular_probe(h) {
        return Ok(false);
    }
    Ok(is_irrelevant(&jacobian_ideal(h)))
}

/// Nonsingularity over F_q; requires q not dividing the degree.
pub fn is_nonsingular_fq(h: &FieldPoly) -> Result<bool, AnalysisError> {
    if !h.is_homogeneous() {
        return Err(AnalysisError::NotHomogeneous);
    }
    let deg = h.degree().unwrap_or(0);
    if deg < 1 {
        return Err(AnalysisError::DegreeTooSmall { min: 1, got: deg });
    }
    let q = h.modulus().expect("nonzero polynomial has a modulus");
    if (deg as u64).is_multiple_of(q) {
        return Err(AnalysisError::CharDividesDegree { q, degree: deg });
    }
    if h.nvars() == 1 {
        return Ok(!h.is_zero());
    }
    if field_singular_probe(h, q) == Some(true) {
        return Ok(false);
    }
    Ok(is_irrelevant(&jacobian_ideal(h)))
}

// ---------------------------------------------------------------------------
// Dwork regularity
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    /// A single-variable restriction H_S vanished identically.
    ZeroPolynomial,
    /// A restriction H_S with |S| >= 2 defines a singular hypersurface.
    SingularRestriction,
}

/// Outcome of the subset criterion: H is Dwork-regular exactly when every
/// single-variable restriction is nonzero and every larger restriction is
/// nonsingular in its own variables.
#[derive(Debug, Clone)]
pub struct RegularityVerdict {
    pub dwork_regular: bool,
    pub nonsingular: bool,
    /// First failing subset in (size, lexicographic) order, 0-based.
    pub failing_subset: Option<Vec<usize>>,
    pub failure_kind: Option<FailureKind>,
}

impl RegularityVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "dwork_regular": self.dwork_regular,
            "nonsingular": self.nonsingular,
            "failing_subset": self.failing_subset
                .as_ref()
                .map(|s| s.iter().map(|v| v + 1).collect::<Vec<_>>()),
            "kind": self.failure_kind.map(|k| match k {
                FailureKind::ZeroPolynomial => "zero_polynomial",
                FailureKind::SingularRestriction => "singular",
            }),
        })
    }
}

fn subsets_in_order(n: usize) -> Vec<Vec<usize>> {
    let mut subsets: Vec<Vec<usize>> = (1u32..(1 << n))
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    subsets
}

fn dwork_core<C, F>(h: &Polynomial<C>, nonsingular: F) -> Result<RegularityVerdict, AnalysisError>
where
    C: Scalar,
    F: Fn(&Polynomial<C>) -> Result<bool, AnalysisError> + Sync,
{
    let n = h.nvars();
    let subsets = subsets_in_order(n);

    enum Outcome {
        Ok,
        ZeroSingle,
        Singular,
        Err(AnalysisError),
    }

    let outcomes: Vec<Outcome> = subsets
        .par_iter()
        .map(|s| {
            let assignments: BTreeMap<usize, C> = (0..n)
                .filter(|i| !s.contains(i))
                .map(|i| (i, h.sample_coeff().expect("nonzero input").zero_like()))
                .collect();
            let restricted = match h.specialize(&assignments) {
                Ok(r) => r,
                Err(e) => return Outcome::Err(e.into()),
            };
            if s.len() == 1 {
                if restricted.is_zero() {
                    Outcome::ZeroSingle
                } else {
                    Outcome::Ok
                }
            } else if restricted.is_zero() {
                Outcome::Singular
            } else {
                match restricted.restrict_to_vars(s) {
                    Ok(sub) => match nonsingular(&sub) {
                        Ok(true) => Outcome::Ok,
                        Ok(false) => Outcome::Singular,
                        Err(e) => Outcome::Err(e),
                    },
                    Err(e) => Outcome::Err(e.into()),
                }
            }
        })
        .collect();

    let full_set_index = subsets.len() - 1;
    let nonsingular_full = matches!(outcomes[full_set_index], Outcome::Ok);
    for (s, outcome) in subsets.iter().zip(outcomes) {
        match outcome {
            Outcome::Ok => {}
            Outcome::Err(e) => return Err(e),
            Outcome::ZeroSingle => {
                return Ok(RegularityVerdict {
                    dwork_regular: false,
                    nonsingular: nonsingular_full,
                    failing_subset: Some(s.clone()),
                    failure_kind: Some(FailureKind::ZeroPolynomial),
                });
            }
            Outcome::Singular => {
                return Ok(RegularityVerdict {
                    dwork_regular: false,
                    nonsingular: nonsingular_full,
                    failing_subset: Some(s.clone()),
                    failure_kind: Some(FailureKind::SingularRestriction),
                });
            }
        }
    }
    Ok(RegularityVerdict {
        dwork_regular: true,
        nonsingular: nonsingular_full,
        failing_subset: None,
        failure_kind: None,
    })
}

fn check_dwork_pre<C: Scalar>(h: &Polynomial<C>) -> Result<u32, AnalysisError> {
    if h.is_zero() {
        return Err(AnalysisError::DegreeTooSmall { min: 2, got: 0 });
    }
    if !h.is_homogeneous() {
        return Err(AnalysisError::NotHomogeneous);
    }
    let deg = h.degree().unwrap();
    if deg < 2 {
        return Err(AnalysisError::DegreeTooSmall { min: 2, got: deg });
    }
    Ok(deg)
}

/// Dwork regularity over Q via the subset criterion: checks all 2^n - 1
/// nonempty coordinate restrictions exactly.
pub fn is_dwork_regular_q(h: &Form) -> Result<RegularityVerdict, AnalysisError> {
    check_dwork_pre(h)?;
    dwork_core(h, is_nonsingular_q)
}

/// Dwork regularity over F_q; requires q not dividing the degree.
pub fn is_dwork_regular_fq(h: &FieldPoly) -> Result<RegularityVerdict, AnalysisError> {
    let deg = check_dwork_pre(h)?;
    let q = h.modulus().expect("nonzero");
    if (deg as u64).is_multiple_of(q) {
        return Err(AnalysisError::CharDividesDegree { q, degree: deg });
    }
    dwork_core(h, is_nonsingular_fq)
}

// ---------------------------------------------------------------------------
// Bad primes
// ---------------------------------------------------------------------------

/// Classification of all primes up to a bound: excluded (dividing the
/// degree or some coefficient denominator), bad (reduction not
/// Dwork-regular), or good. The three classes partition the scanned range.
#[derive(Debug, Clone)]
pub struct BadPrimeReport {
    pub q_max: u64,
    pub excluded: Vec<u64>,
    pub bad: Vec<u64>,
    pub good: Vec<u64>,
}

impl BadPrimeReport {
    pub fn largest_bad(&self) -> Option<u64> {
        self.bad.last().copied()
    }

    /// Smallest bound above every prime where any check failed; the
    /// empirical stand-in for the reduction threshold.
    pub fn empirical_threshold(&self) -> u64 {
        self.bad
            .iter()
            .chain(self.excluded.iter())
            .max()
            .map_or(2, |&q| q + 1)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "q_max": self.q_max,
            "excluded": self.excluded,
            "bad_primes": self.bad,
            "good_count": self.good.len(),
            "largest_bad": self.largest_bad(),
        })
    }
}

fn primes_up_to(q_max: u64) -> Vec<u64> {
    (2..=q_max).filter(|&q| is_prime(q)).collect()
}

/// Scans primes up to `q_max`, classifying each by whether the reduction of
/// a Dwork-regular form stays Dwork-regular.
pub fn bad_primes(h: &Form, q_max: u64) -> Result<BadPrimeReport, AnalysisError> {
    let verdict = is_dwork_regular_q(h)?;
    if !verdict.dwork_regular {
        return Err(AnalysisError::NotDworkRegular(
            "bad-prime scan requires a Dwork-regular input".into(),
        ));
    }
    let k = h.degree().unwrap() as u64;

    #[derive(Clone, Copy)]
    enum Class {
        Excluded,
        Bad,
        Good,
    }
    let classified: Vec<(u64, Class)> = primes_up_to(q_max)
        .into_par_iter()
        .map(|q| {
            if k.is_multiple_of(q) {
                return (q, Class::Excluded);
            }
            match h.reduce_mod(q) {
                Err(_) => (q, Class::Excluded),
                Ok(red) => {
                    if red.degree() != h.degree() {
                        return (q, Class::Bad);
                    }
                    let v = is_dwork_regular_fq(&red)
                        .expect("degree and characteristic already validated");
                    (
                        q,
                        if v.dwork_regular {
                            Class::Good
                        } else {
                            Class::Bad
                        },
                    )
                }
            }
        })
        .collect();

    let mut report = BadPrimeReport {
        q_max,
        excluded: Vec::new(),
        bad: Vec::new(),
        good: Vec::new(),
    };
    for (q, class) in classified {
        match class {
            Class::Excluded => report.excluded.push(q),
            Class::Bad => report.bad.push(q),
            Class::Good => report.good.push(q),
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Deligne specialization
// ---------------------------------------------------------------------------

/// Fixes the first `c.len()` variables of a Dwork-regular polynomial over
/// F_q and certifies that the result is a Deligne polynomial in the
/// remaining variables: the degree survives, the characteristic does not
/// divide it, and the leading form is nonsingular (nonzero when a single
/// variable remains). Returns the certificate and the leading form.
pub fn deligne_after_specialization(
    h: &FieldPoly,
    c: &[FieldElem],
) -> Result<(bool, FieldPoly), AnalysisError> {
    let verdict = is_dwork_regular_fq(h)?;
    if !verdict.dwork_regular {
        return Err(AnalysisError::NotDworkRegular(format!(
            "failing subset {:?}",
            verdict.failing_subset
        )));
    }
    let n = h.nvars();
    let r = c.len();
    if r == 0 || r >= n {
        return Err(AnalysisError::ParameterRange(format!(
            "must fix between 1 and {} variables, got {r}",
            n - 1
        )));
    }
    let k = h.degree().unwrap();
    let assignments: BTreeMap<usize, FieldElem> = c.iter().cloned().enumerate().collect();
    let specialized = h.specialize(&assignments)?;
    let remaining: Vec<usize> = (r..n).collect();
    let g = specialized.restrict_to_vars(&remaining)?;
    if g.degree() != Some(k) {
        return Ok((false, FieldPoly::zero(n - r)));
    }
    let lead = g.leading_form()?;
    let ok = if n - r == 1 {
        !lead.is_zero()
    } else {
        is_nonsingular_fq(&lead)?
    };
    Ok((ok, lead))
}

// ---------------------------------------------------------------------------
// Derivative witness
// ---------------------------------------------------------------------------

/// An integral tuple with all entries >= 1 where the first partial of the
/// leading form is nonzero; scaling the tuple by R then keeps the partial
/// of size R^(k-1).
#[derive(Debug, Clone)]
pub struct DerivativeWitness {
    pub tuple: Vec<i64>,
    pub value: BigRational,
}

/// Searches the boxes [1,B]^r in lexicographic order, doubling B up to
/// `b_max`, for the first tuple where d/dx1 of `pk` is nonzero. Requires
/// x1 to intertwine only x1..x_r (so the partial depends only on those
/// variables).
pub fn find_derivative_witness(
    pk: &Form,
    r: usize,
    b_max: u32,
) -> Result<DerivativeWitness, AnalysisError> {
    let n = pk.nvars();
    if r == 0 || r > n {
        return Err(AnalysisError::ParameterRange(format!(
            "rank {r} out of range"
        )));
    }
    let d1 = pk.partial_derivative(0);
    for j in r..n {
        if !d1.partial_derivative(j).is_zero() {
            return Err(AnalysisError::RankStructureViolated { r, bad_var: j });
        }
    }
    if d1.is_zero() {
        return Err(AnalysisError::WitnessSearchExhausted { b_max });
    }

    let mut bound = 1u32;
    loop {
        let mut tuple = vec![1i64; r];
        loop {
            let point: Vec<BigRational> = (0..n)
                .map(|i| {
                    if i < r {
                        BigRational::from_integer(BigInt::from(tuple[i]))
                    } else {
                        BigRational::zero()
                    }
                })
                .collect();
            let value = d1.evaluate(&point)?;
            if !value.is_zero() {
                return Ok(DerivativeWitness { tuple, value });
            }
            // lexicographic successor within [1, bound]^r
            let mut pos = r;
            loop {
                if pos == 0 {
                    tuple.clear();
                    break;
                }
                pos -= 1;
                tuple[pos] += 1;
                if tuple[pos] <= bound as i64 {
                    for t in tuple.iter_mut().skip(pos + 1) {
                        *t = 1;
                    }
                    break;
                }
            }
            if tuple.is_empty() {
                break;
            }
        }
        if bound >= b_max {
            return Err(AnalysisError::WitnessSearchExhausted { b_max });
        }
        bound = (bound * 2).min(b_max);
    }
}

// ---------------------------------------------------------------------------
// Dispersivity
// ---------------------------------------------------------------------------

/// Certificate that the symbol defines a dispersive evolution: the gradient
/// of the leading form vanishes only at the origin, and each one-variable
/// section meets a level set in at most `root_bound` points.
#[derive(Debug, Clone)]
pub struct DispersivityReport {
    pub root_bound: u32,
}

/// For a polynomial whose leading form is Dwork-regular over Q, the leading
/// form is nonsingular, so its gradient has no nontrivial real zero, and
/// every single-variable specialization retains a nonzero multiple of
/// x^k; hence at most k solutions per section.
pub fn is_dispersive(p: &Form) -> Result<DispersivityReport, AnalysisError> {
    let lead = p.leading_form().map_err(AnalysisError::Poly)?;
    let verdict = is_dwork_regular_q(&lead)?;
    if !verdict.dwork_regular {
        return Err(AnalysisError::NotDworkRegular(format!(
            "failing subset {:?}",
            verdict.failing_subset
        )));
    }
    Ok(DispersivityReport {
        root_bound: lead.degree().unwrap(),
    })
}

// ---------------------------------------------------------------------------
// Example family
// ---------------------------------------------------------------------------

/// The explicit indecomposable Dwork-regular family of degree k and
/// intertwining rank r: diagonal powers plus x1*xj^(k-1) for j <= r and
/// xi*xj^(k-1) for 2 <= i < j (odd k), with squares replacing the linear
/// factors when k is even.
pub fn generate_example(n: usize, k: u32, r: usize) -> Result<Form, AnalysisError> {
    if n < 2 || k < 3 || r < 2 || r > n {
        return Err(AnalysisError::ParameterRange(format!(
            "need n >= 2, k >= 3, 2 <= r <= n; got n={n}, k={k}, r={r}"
        )));
    }
    let mut terms: Vec<(Vec<u32>, i64)> = Vec::new();
    for i in 0..n {
        let mut e = vec![0u32; n];
        e[i] = k;
        terms.push((e, 1));
    }
    let low = if k % 2 == 1 { 1 } else { 2 };
    for j in 1..r {
        let mut e = vec![0u32; n];
        e[0] = low;
        e[j] = k - low;
        terms.push((e, 1));
    }
    for i in 1..n {
        for j in (i + 1)..n {
            let mut e = vec![0u32; n];
            e[i] = low;
            e[j] = k - low;
            terms.push((e, 1));
        }
    }
    Ok(Form::from_int_terms(n, terms))
}

// ---------------------------------------------------------------------------
// Thresholds and codimension
// ---------------------------------------------------------------------------

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The regularity-threshold increment for a Dwork-regular leading form of
/// degree k and intertwining rank r in n variables:
/// (n-r) / (4((k-1)(n-(r-1))+1)).
pub fn delta_threshold(n: usize, k: u32, r: usize) -> Result<BigRational, AnalysisError> {
    if n < 2 || k < 2 || r < 1 || r > n {
        return Err(AnalysisError::ParameterRange(format!(
            "need n >= 2, k >= 2, 1 <= r <= n; got n={n}, k={k}, r={r}"
        )));
    }
    let (n, k, r) = (n as i64, k as i64, r as i64);
    Ok(rat(n - r, 4 * ((k - 1) * (n - (r - 1)) + 1)))
}

/// Threshold for decomposable nonsingular leading forms:
/// 1/4 + n / (4((k-1)(n+2)+2)).
pub fn corollary_threshold(n: usize, k: u32) -> Result<BigRational, AnalysisError> {
    if n < 2 || k < 2 {
        return Err(AnalysisError::ParameterRange(format!(
            "need n >= 2, k >= 2; got n={n}, k={k}"
        )));
    }
    let (n, k) = (n as i64, k as i64);
    Ok(rat(1, 4) + rat(n, 4 * ((k - 1) * (n + 2) + 2)))
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Codimension, in the moduli space of degree-k forms in n variables, of
/// the rank <= n-1 class and of the rank <= 1 class:
/// (C(n+k-3, n-1), C(n+k-1, n-1) - C(n+k-2, n-2) - 1).
pub fn codimensions(n: usize, k: u32) -> Result<(u128, u128), AnalysisError> {
    if n < 2 || k < 2 {
        return Err(AnalysisError::ParameterRange(format!(
            "need n >= 2, k >= 2; got n={n}, k={k}"
        )));
    }
    let (n, k) = (n as u64, k as u64);
    let high = binomial(n + k - 3, n - 1);
    let low = binomial(n + k - 1, n - 1) - binomial(n + k - 2, n - 2) - 1;
    Ok((high, low))
}

// ---------------------------------------------------------------------------

/// Convenience: the monomial x_i^e as a Form term key.
pub fn var_monomial(n: usize, i: usize, e: u32) -> Monomial {
    Monomial::var_pow(n, i, e)
}

pub fn rational_one() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_form;

    fn f(s: &str) -> Form {
        parse_form(s, None).unwrap()
    }

    #[test]
    fn rank_of_diagonal_form_is_one() {
        let r = intertwining_rank(&f("x1^3 + x2^3 + x3^3 + x4^3")).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.witness, 0);
        assert_eq!(r.per_variable_rank, vec![1, 1, 1, 1]);
    }

    #[test]
    fn rank_two_example() {
        let r = intertwining_rank(&f("x1^3 + x1*x2^2 + x2*x3*x4")).unwrap();
        assert_eq!(r.rank, 2);
        // x1 intertwines {x1, x2}; x3 and x4 have rank 3
        assert_eq!(r.intertwine_sets[0], vec![0, 1]);
        assert_eq!(r.witness, 0);
    }

    #[test]
    fn generated_family_has_requested_rank() {
        let g = generate_example(3, 3, 2).unwrap();
        assert_eq!(g, f("x1^3 + x2^3 + x3^3 + x1*x2^2 + x2*x3^2"));
        assert_eq!(intertwining_rank(&g).unwrap().rank, 2);

        let e = generate_example(3, 4, 2).unwrap();
        assert_eq!(e, f("x1^4 + x2^4 + x3^4 + x1^2*x2^2 + x2^2*x3^2"));
        assert_eq!(intertwining_rank(&e).unwrap().rank, 2);
    }

    #[test]
    fn rank_permutation_relabels_witness_first() {
        // x3 is the low-rank variable here
        let g = f("x1*x2^2 + x1^2*x2 + x3^3");
        let r = intertwining_rank(&g).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.witness, 2);
        let relabeled = relabel_for_witness(&g, &r);
        let rr = intertwining_rank(&relabeled).unwrap();
        assert_eq!(rr.witness, 0);
        assert_eq!(rr.rank, 1);
    }

    #[test]
    fn nonsingular_examples() {
        assert!(is_nonsingular_q(&f("x1^2 + x2^2")).unwrap());
        assert!(!is_nonsingular_q(&f("x1^2 + 2*x1*x2 + x2^2")).unwrap());
        assert!(is_nonsingular_q(&f("x1^3 + x2^3 + x2*x3^2")).unwrap());
    }

    #[test]
    fn dwork_regular_examples() {
        let v = is_dwork_regular_q(&f("x1^3 + x2^3 + x3^3 + x1*x2^2 + x2*x3^2")).unwrap();
        assert!(v.dwork_regular);
        assert!(v.nonsingular);

        let v = is_dwork_regular_q(&f("x1^3 + x2^3 + x2*x3^2")).unwrap();
        assert!(!v.dwork_regular);
        assert!(v.nonsingular, "nonsingular but not Dwork-regular");
        assert_eq!(v.failing_subset, Some(vec![2]));
        assert_eq!(v.failure_kind, Some(FailureKind::ZeroPolynomial));

        let v = is_dwork_regular_q(&f("x1*x2")).unwrap();
        assert!(!v.dwork_regular);
        assert_eq!(v.failure_kind, Some(FailureKind::ZeroPolynomial));
    }

    #[test]
    fn bad_prime_scan_matches_discriminant() {
        let h = f("x1^2 + 5*x1*x2 + x2^2");
        let report = bad_primes(&h, 10).unwrap();
        assert_eq!(report.excluded, vec![2]);
        assert_eq!(report.bad, vec![3, 7]);
        assert_eq!(report.good, vec![5]);
    }

    #[test]
    fn diagonal_quadratic_has_no_odd_bad_primes() {
        let h = f("x1^2 + x2^2");
        let report = bad_primes(&h, 20).unwrap();
        assert_eq!(report.excluded, vec![2]);
        assert!(report.bad.is_empty());
    }

    #[test]
    fn deligne_specialization_examples() {
        let h = generate_example(3, 3, 2).unwrap().reduce_mod(7).unwrap();
        let zeros = vec![FieldElem::new(0, 7).unwrap(), FieldElem::new(0, 7).unwrap()];
        let (ok, lead) = deligne_after_specialization(&h, &zeros).unwrap();
        assert!(ok);
        assert!(!lead.is_zero());

        let c = vec![FieldElem::new(3, 7).unwrap(), FieldElem::new(5, 7).unwrap()];
        let (ok, _) = deligne_after_specialization(&h, &c).unwrap();
        assert!(ok);

        // non-DR input is rejected
        let bad = f("x1^3 + x2^3 + x2*x3^2").reduce_mod(7).unwrap();
        assert!(matches!(
            deligne_after_specialization(&bad, &zeros),
            Err(AnalysisError::NotDworkRegular(_))
        ));
    }

    #[test]
    fn witness_search() {
        let w = find_derivative_witness(&f("x1^3 + x2^3"), 1, 32).unwrap();
        assert_eq!(w.tuple, vec![1]);
        assert_eq!(w.value, BigRational::from_integer(BigInt::from(3)));

        let w = find_derivative_witness(&generate_example(3, 3, 2).unwrap(), 2, 32).unwrap();
        assert_eq!(w.tuple, vec![1, 1]);
        assert_eq!(w.value, BigRational::from_integer(BigInt::from(4)));

        // first tuple vanishes, lexicographic successor wins
        let w = find_derivative_witness(&f("x1^3 - 3*x1*x2^2"), 2, 32).unwrap();
        assert_eq!(w.tuple, vec![1, 2]);
        assert_eq!(w.value, BigRational::from_integer(BigInt::from(-9)));
    }

    #[test]
    fn dispersivity() {
        let d = is_dispersive(&generate_example(3, 3, 2).unwrap()).unwrap();
        assert_eq!(d.root_bound, 3);
        assert!(is_dispersive(&f("x1*x2")).is_err());
        assert_eq!(is_dispersive(&f("x1^2 + x2^2")).unwrap().root_bound, 2);
    }

    #[test]
    fn threshold_formulas() {
        // rank 1 reduces to (n-1)/(4((k-1)n+1))
        assert_eq!(delta_threshold(3, 3, 1).unwrap(), rat(2, 28));
        // quadratic rank 1 matches (n-1)/(4(n+1)) at n = 3
        assert_eq!(delta_threshold(3, 2, 1).unwrap(), rat(1, 8));
        assert_eq!(delta_threshold(3, 3, 2).unwrap(), rat(1, 20));

        let c = corollary_threshold(4, 3).unwrap();
        assert_eq!(c, rat(1, 4) + rat(1, 14));
        // consistency with delta at r = n/2 for even n
        let d = delta_threshold(4, 3, 2).unwrap();
        assert_eq!(c, rat(1, 4) + d);
        // decreasing toward 1/4 in k
        assert!(corollary_threshold(4, 5).unwrap() < c);

        assert_eq!(codimensions(3, 3).unwrap(), (3, 5));
    }

    #[test]
    fn decomposable_split_bounds_rank() {
        // f(x1,x2) + g(x3,x4) has rank at most 2 = n/2
        let g = f("x1^3 + x1*x2^2 + x2^3 + x3^3 + x3*x4^2 + x4^3");
        let r = intertwining_rank(&g).unwrap();
        assert!(r.rank <= 2);
    }
}
