//! Sparse multivariate polynomials over an abstract coefficient field.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::RationalMatrix;
use super::monomial::Monomial;
use super::scalar::{FieldElem, Scalar};
use super::PolyError;

/// A polynomial with a fixed ambient variable count `n` and a sparse,
/// canonically sorted term map. No zero coefficients are stored; the zero
/// polynomial has an empty term map.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial<C: Scalar> {
    n: usize,
    terms: BTreeMap<Monomial, C>,
}

/// Exact polynomial over the rationals.
pub type Form = Polynomial<BigRational>;
/// Polynomial with coefficients in a prime field F_q.
pub type FieldPoly = Polynomial<FieldElem>;

impl<C: Scalar> Polynomial<C> {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, C)>,
    {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn constant(n: usize, c: C) -> Self {
        Self::from_terms(n, [(Monomial::one(n), c)])
    }

    /// Adds `c * x^m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: C) {
        assert_eq!(m.nvars(), self.n, "monomial arity mismatch");
        if c.is_zero_elem() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add_ref(&c);
                if s.is_zero_elem() {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterates terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    /// A nonzero coefficient, if any; used to derive field constants.
    pub fn sample_coeff(&self) -> Option<&C> {
        self.terms.values().next()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn check_arity(&self, other: &Self) {
        assert_eq!(
            self.n, other.n,
            "variable count mismatch: {} vs {}",
            self.n, other.n
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_arity(other);
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_arity(other);
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), c.neg_ref());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref()));
        Polynomial {
            n: self.n,
            terms: terms.collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_arity(other);
        let mut out = Self::zero(self.n);
        for (ma, ca) in self.terms.iter() {
            for (mb, cb) in other.terms.iter() {
                out.add_term(ma.mul(mb), ca.mul_ref(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero_elem() {
            return Self::zero(self.n);
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k.mul_ref(c)));
        Polynomial {
            n: self.n,
            terms: terms.collect(),
        }
    }

    /// Formal partial derivative with respect to variable `i` (0-based).
    pub fn partial_derivative(&self, i: usize) -> Self {
        assert!(i < self.n, "variable index {i} out of range");
        let mut out = Self::zero(self.n);
        for (m, c) in self.terms.iter() {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] = e - 1;
            out.add_term(Monomial::new(exps), c.mul_nat(e));
        }
        out
    }

    /// Exact evaluation at a point with the same coefficient field.
    pub fn evaluate(&self, point: &[C]) -> Result<C, PolyError> {
        if point.len() != self.n {
            return Err(PolyError::PointLength {
                expected: self.n,
                got: point.len(),
            });
        }
        let zero = match (self.sample_coeff(), point.first()) {
            (Some(c), _) => c.zero_like(),
            (None, Some(p)) => p.zero_like(),
            (None, None) => {
                return Err(PolyError::PointLength {
                    expected: self.n,
                    got: 0,
                })
            }
        };
        let mut acc = zero;
        for (m, c) in self.terms.iter() {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = t.mul_ref(&point[i]);
                }
            }
            acc = acc.add_ref(&t);
        }
        Ok(acc)
    }

    /// Substitutes values for a subset of the variables. The ambient
    /// variable count is preserved; assigned variables simply no longer
    /// occur in the result.
    pub fn specialize(&self, assignments: &BTreeMap<usize, C>) -> Result<Self, PolyError> {
        for &i in assignments.keys() {
            if i >= self.n {
                return Err(PolyError::IndexOutOfRange {
                    index: i,
                    nvars: self.n,
                });
            }
        }
        let mut out = Self::zero(self.n);
        for (m, c) in self.terms.iter() {
            let mut coeff = c.clone();
            let mut exps = m.exponents().to_vec();
            for (&i, v) in assignments.iter() {
                for _ in 0..exps[i] {
                    coeff = coeff.mul_ref(v);
                }
                exps[i] = 0;
            }
            out.add_term(Monomial::new(exps), coeff);
        }
        Ok(out)
    }

    /// Sum of the terms of exactly total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == d)
            .map(|(m, c)| (m.clone(), c.clone()));
        Polynomial {
            n: self.n,
            terms: terms.collect(),
        }
    }

    /// Homogeneous part of highest degree.
    pub fn leading_form(&self) -> Result<Self, PolyError> {
        let d = self.degree().ok_or(PolyError::ZeroPolynomial)?;
        Ok(self.homogeneous_part(d))
    }

    /// The n-by-n symmetric matrix of second partials.
    pub fn hessian(&self) -> Vec<Vec<Self>> {
        let firsts: Vec<Self> = (0..self.n).map(|i| self.partial_derivative(i)).collect();
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| firsts[i].partial_derivative(j))
                    .collect()
            })
            .collect()
    }

    /// Variables that actually occur in some term.
    pub fn support_vars(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    s.insert(i);
                }
            }
        }
        s
    }

    /// Re-expresses the polynomial in the variable subset `vars` (sorted,
    /// 0-based); fails if any term involves a variable outside the subset.
    pub fn restrict_to_vars(&self, vars: &[usize]) -> Result<Self, PolyError> {
        let mut pos = BTreeMap::new();
        for (new, &old) in vars.iter().enumerate() {
            if old >= self.n {
                return Err(PolyError::IndexOutOfRange {
                    index: old,
                    nvars: self.n,
                });
            }
            pos.insert(old, new);
        }
        let mut out = Self::zero(vars.len());
        for (m, c) in self.terms.iter() {
            let mut exps = vec![0u32; vars.len()];
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match pos.get(&i) {
                    Some(&new) => exps[new] = e,
                    None => {
                        return Err(PolyError::VariableOutsideSupport { index: i });
                    }
                }
            }
            out.add_term(Monomial::new(exps), c.clone());
        }
        Ok(out)
    }

    /// Relabels variables: new variable `j` is old variable `perm[j]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut inv = vec![0usize; self.n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps = vec![0u32; self.n];
            for (old, &e) in m.exponents().iter().enumerate() {
                exps[inv[old]] = e;
            }
            (Monomial::new(exps), c.clone())
        });
        Polynomial {
            n: self.n,
            terms: terms.collect(),
        }
    }
}

impl Form {
    pub fn from_int_terms<I>(n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, i64)>,
    {
        Self::from_terms(
            n,
            terms
                .into_iter()
                .map(|(e, c)| (Monomial::new(e), BigRational::from_integer(BigInt::from(c)))),
        )
    }

    /// Coefficient-wise reduction modulo a prime `q`. Fails when some
    /// coefficient has a denominator divisible by `q`.
    pub fn reduce_mod(&self, q: u64) -> Result<FieldPoly, PolyError> {
        if !super::scalar::is_prime(q) || q >= (1 << 32) {
            return Err(PolyError::NotPrime { q });
        }
        let qi = BigInt::from(q);
        let mut out = FieldPoly::zero(self.n);
        for (m, c) in self.terms.iter() {
            let den = c.denom().mod_floor(&qi);
            if den.is_zero() {
                return Err(PolyError::DenominatorDivisibleByModulus { q });
            }
            let num = c.numer().mod_floor(&qi);
            let num_u = u64::try_from(&num).expect("reduced residue fits u64");
            let den_u = u64::try_from(&den).expect("reduced residue fits u64");
            let elem = FieldElem::from_residue(num_u, q)
                .mul_ref(&FieldElem::from_residue(den_u, q).inverse());
            out.add_term(m.clone(), elem);
        }
        Ok(out)
    }

    /// Composes with the linear substitution `x = A y`: the result `g`
    /// satisfies `g(y) = f(A y)`.
    pub fn change_variables(&self, a: &RationalMatrix) -> Result<Self, PolyError> {
        if a.rows() != self.n || a.cols() != self.n {
            return Err(PolyError::MatrixShape {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        if a.determinant().is_zero() {
            return Err(PolyError::SingularMatrix);
        }
        let images: Vec<Form> = (0..self.n)
            .map(|i| {
                Form::from_terms(
                    self.n,
                    (0..self.n).map(|j| (Monomial::var_pow(self.n, j, 1), a.get(i, j).clone())),
                )
            })
            .collect();
        Ok(self.substitute_linear(&images))
    }

    /// Substitutes `x_i -> scale_i * x_i + shift_i`.
    pub fn compose_affine(&self, scales: &[BigRational], shifts: &[BigRational]) -> Self {
        assert_eq!(scales.len(), self.n);
        assert_eq!(shifts.len(), self.n);
        let images: Vec<Form> = (0..self.n)
            .map(|i| {
                let mut f = Form::zero(self.n);
                f.add_term(Monomial::var_pow(self.n, i, 1), scales[i].clone());
                f.add_term(Monomial::one(self.n), shifts[i].clone());
                f
            })
            .collect();
        self.substitute_linear(&images)
    }

    fn substitute_linear(&self, images: &[Form]) -> Self {
        // Memoize powers of each image polynomial.
        let mut pows: Vec<Vec<Form>> = images
            .iter()
            .map(|f| vec![Form::constant(self.n, BigRational::one()), f.clone()])
            .collect();
        let mut out = Form::zero(self.n);
        for (m, c) in self.terms.iter() {
            let mut term = Form::constant(self.n, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while pows[i].len() <= e as usize {
                    let last = pows[i].last().unwrap().mul(&images[i]);
                    pows[i].push(last);
                }
                term = term.mul(&pows[i][e as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Returns the terms with integer coefficients, or `None` when some
    /// coefficient is not an integer.
    pub fn integer_terms(&self) -> Option<Vec<(Monomial, BigInt)>> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in self.terms.iter() {
            if !c.denom().is_one() {
                return None;
            }
            out.push((m.clone(), c.numer().clone()));
        }
        Some(out)
    }

    /// Clears denominators and strips content, returning the primitive
    /// integer polynomial spanning the same line (positive leading
    /// coefficient in graded-lex order).
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut terms: Vec<(Monomial, BigRational)> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        <BigRational as Scalar>::canonical_scale(&mut terms);
        Polynomial {
            n: self.n,
            terms: terms.into_iter().collect(),
        }
    }
}

impl FieldPoly {
    /// The common modulus of the coefficients, if any term is present.
    pub fn modulus(&self) -> Option<u64> {
        self.sample_coeff().map(|c| c.modulus())
    }

    /// Exact evaluation with the moduli of the point validated against the
    /// polynomial's.
    pub fn evaluate_mod(&self, point: &[FieldElem]) -> Result<FieldElem, PolyError> {
        if let Some(q) = self.modulus() {
            if point.iter().any(|p| p.modulus() != q) {
                return Err(PolyError::ModulusMismatch);
            }
        }
        self.evaluate(point)
    }

    /// Evaluation at a raw residue point (moduli checked by caller).
    pub fn evaluate_residues(&self, point: &[u64], q: u64) -> u64 {
        debug_assert_eq!(point.len(), self.n);
        let mut acc: u128 = 0;
        for (m, c) in self.terms.iter() {
            let mut t = c.value() as u128;
            for (i, &e) in m.exponents().iter().enumerate() {
                let mut base = point[i] as u128 % q as u128;
                let mut ee = e;
                let mut p: u128 = 1;
                while ee > 0 {
                    if ee & 1 == 1 {
                        p = p * base % q as u128;
                    }
                    base = base * base % q as u128;
                    ee >>= 1;
                }
                t = t * p % q as u128;
            }
            acc = (acc + t) % q as u128;
        }
        acc as u64
    }
}

impl<C: Scalar> std::fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{:?}*{:?}", c, m)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_form;

    fn f(s: &str) -> Form {
        parse_form(s, None).unwrap()
    }

    #[test]
    fn additive_cancellation() {
        let sum = f("x1 + x2").add(&parse_form("-x2", Some(2)).unwrap());
        assert_eq!(sum, parse_form("x1", Some(2)).unwrap());
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(f("x1 + x2").mul(&f("x1 - x2")), f("x1^2 - x2^2"));
    }

    #[test]
    fn zero_absorbs() {
        let z = Form::zero(3);
        let g = f("x1^2*x2 + x3");
        assert!(z.mul(&g).is_zero());
    }

    #[test]
    fn power_rule() {
        let g = f("x1^3 + x1*x2^2");
        assert_eq!(g.partial_derivative(0), f("3*x1^2 + x2^2"));
        assert!(parse_form("x1^3", Some(2))
            .unwrap()
            .partial_derivative(1)
            .is_zero());
        // mixed partial of a monomial without x1
        let h = parse_form("x2*x3*x4", Some(4)).unwrap();
        assert!(h.partial_derivative(1).partial_derivative(0).is_zero());
    }

    #[test]
    fn evaluation() {
        let g = f("x1^2 + x2^2");
        let p: Vec<BigRational> = [3, 4]
            .iter()
            .map(|&v| BigRational::from_integer(BigInt::from(v)))
            .collect();
        assert_eq!(
            g.evaluate(&p).unwrap(),
            BigRational::from_integer(BigInt::from(25))
        );
        // any homogeneous form vanishes at the origin
        let origin = vec![BigRational::zero(); 2];
        assert!(g.evaluate(&origin).unwrap().is_zero());
        assert!(g.evaluate(&p[..1]).is_err());
    }

    #[test]
    fn evaluation_mod_q() {
        let g = f("x1*x2").reduce_mod(5).unwrap();
        let p = vec![FieldElem::new(2, 5).unwrap(), FieldElem::new(3, 5).unwrap()];
        assert_eq!(g.evaluate_mod(&p).unwrap().value(), 1);
        // mixed moduli are rejected
        let bad = vec![FieldElem::new(2, 5).unwrap(), FieldElem::new(3, 7).unwrap()];
        assert_eq!(g.evaluate_mod(&bad), Err(PolyError::ModulusMismatch));
    }

    #[test]
    fn specialization() {
        let g = f("x1^3 + x2^3 + x2*x3^2");
        let mut a = BTreeMap::new();
        a.insert(2usize, BigRational::zero());
        assert_eq!(
            g.specialize(&a).unwrap(),
            parse_form("x1^3 + x2^3", Some(3)).unwrap()
        );

        // direct-substitution oracle: x1 = x2 = 1 in x1^3+x2^3+x3^3+x1*x2^2+x2*x3^2
        let g = f("x1^3 + x2^3 + x3^3 + x1*x2^2 + x2*x3^2");
        let one = BigRational::one();
        let mut a = BTreeMap::new();
        a.insert(0usize, one.clone());
        a.insert(1usize, one);
        assert_eq!(
            g.specialize(&a).unwrap(),
            parse_form("3 + x3^2 + x3^3", Some(3)).unwrap()
        );

        assert_eq!(g.specialize(&BTreeMap::new()).unwrap(), g);
    }

    #[test]
    fn leading_form_and_parts() {
        let g = f("x1^3 + x1 + 7");
        assert_eq!(
            g.leading_form().unwrap(),
            parse_form("x1^3", Some(1)).unwrap()
        );
        let h = f("x1^2*x2 + x1*x2 + x2^3");
        assert_eq!(h.homogeneous_part(3), f("x1^2*x2 + x2^3"));
        let hom = f("x1^2*x2 + x2^3");
        assert_eq!(hom.leading_form().unwrap(), hom);
        assert!(Form::zero(2).leading_form().is_err());
    }

    #[test]
    fn hessian_entries() {
        let two = |s: &str| parse_form(s, Some(2)).unwrap();
        let h = f("x1^3 + x2^3").hessian();
        assert_eq!(h[0][0], two("6*x1"));
        assert!(h[0][1].is_zero());
        assert_eq!(h[1][1], two("6*x2"));

        let h = f("x1*x2").hessian();
        assert!(h[0][0].is_zero());
        assert_eq!(h[0][1], Form::constant(2, BigRational::one()));

        // symbolic-differentiation oracle for x1^3+x2^3+x1*x2^2
        let h = f("x1^3 + x2^3 + x1*x2^2").hessian();
        assert_eq!(h[0][0], two("6*x1"));
        assert_eq!(h[0][1], two("2*x2"));
        assert_eq!(h[1][0], two("2*x2"));
        assert_eq!(h[1][1], two("6*x2 + 2*x1"));
    }

    #[test]
    fn reduction_mod_q() {
        let g = f("x1^2 + 5*x1*x2 + x2^2");
        let r = g.reduce_mod(3).unwrap();
        assert_eq!(r, f("x1^2 + 2*x1*x2 + x2^2").reduce_mod(3).unwrap());

        let h = f("1/2*x1^2");
        let r = h.reduce_mod(5).unwrap();
        assert_eq!(r, f("3*x1^2").reduce_mod(5).unwrap());

        assert!(matches!(
            h.reduce_mod(2),
            Err(PolyError::DenominatorDivisibleByModulus { q: 2 })
        ));
    }

    #[test]
    fn change_of_variables() {
        let g = f("x1*x2");
        let a = RationalMatrix::from_i64(2, 2, &[1, 1, 1, -1]);
        assert_eq!(g.change_variables(&a).unwrap(), f("x1^2 - x2^2"));

        let id = RationalMatrix::identity(2);
        assert_eq!(g.change_variables(&id).unwrap(), g);

        let sing = RationalMatrix::from_i64(2, 2, &[1, 1, 1, 1]);
        assert!(matches!(
            g.change_variables(&sing),
            Err(PolyError::SingularMatrix)
        ));
    }
}
