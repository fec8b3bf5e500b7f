//! Coefficient abstraction shared by rational forms and prime-field polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::PolyError;

/// A field element usable as a polynomial coefficient.
///
/// `FieldElem` needs a modulus to produce constants, so zero/one are derived
/// from an existing element rather than from a bare associated constant.
pub trait Scalar: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn inv_ref(&self) -> Self;
    /// `k * self` for a small natural number (derivative coefficients).
    fn mul_nat(&self, k: u32) -> Self;
    /// Scale a nonzero term vector to its canonical representative within
    /// its scalar-multiple class. Over Q this clears denominators, divides
    /// by the content and fixes the leading sign; over a prime field it
    /// makes the polynomial monic. The leading term is `terms[0]`.
    fn canonical_scale(terms: &mut [(Monomial, Self)]);
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv_ref(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        self.recip()
    }
    fn mul_nat(&self, k: u32) -> Self {
        self * BigRational::from_integer(BigInt::from(k))
    }
    fn canonical_scale(terms: &mut [(Monomial, Self)]) {
        if terms.is_empty() {
            return;
        }
        let mut den_lcm = BigInt::one();
        for (_, c) in terms.iter() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for (_, c) in terms.iter() {
            let scaled = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&scaled);
        }
        if num_gcd.is_zero() {
            return;
        }
        let lead_scaled = terms[0].1.numer() * (&den_lcm / terms[0].1.denom());
        if lead_scaled.is_negative() {
            num_gcd = -num_gcd;
        }
        let factor = BigRational::new(den_lcm, num_gcd);
        for (_, c) in terms.iter_mut() {
            *c = &*c * &factor;
        }
    }
}

const MAX_MODULUS: u64 = 1 << 32;

/// Deterministic primality by trial division; moduli are desk-scale.
pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    if q.is_multiple_of(2) {
        return q == 2;
    }
    let mut d = 3u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of the prime field F_q, stored as the least residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    value: u64,
    modulus: u64,
}

impl FieldElem {
    /// Constructs an element, verifying primality of the modulus.
    pub fn new(value: i64, q: u64) -> Result<Self, PolyError> {
        if q >= MAX_MODULUS || !is_prime(q) {
            return Err(PolyError::NotPrime { q });
        }
        Ok(Self::reduce(value, q))
    }

    /// Internal constructor for moduli already known to be prime.
    pub(crate) fn reduce(value: i64, q: u64) -> Self {
        debug_assert!(is_prime(q));
        let r = value.rem_euclid(q as i64) as u64;
        FieldElem {
            value: r,
            modulus: q,
        }
    }

    pub(crate) fn from_residue(value: u64, q: u64) -> Self {
        debug_assert!(is_prime(q) && value < q);
        FieldElem { value, modulus: q }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn check(&self, rhs: &Self) {
        assert_eq!(
            self.modulus, rhs.modulus,
            "mixed moduli {} and {}",
            self.modulus, rhs.modulus
        );
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let q = self.modulus;
        let mut base = self.value as u128;
        let mut acc = 1u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % q as u128;
            }
            base = base * base % q as u128;
            e >>= 1;
        }
        FieldElem {
            value: acc as u64,
            modulus: q,
        }
    }

    pub fn inverse(&self) -> Self {
        assert!(self.value != 0, "inverse of zero in F_{}", self.modulus);
        // q is prime, so a^(q-2) = a^(-1).
        self.pow(self.modulus - 2)
    }
}

impl std::fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl std::fmt::Display for FieldElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Scalar for FieldElem {
    fn zero_like(&self) -> Self {
        FieldElem {
            value: 0,
            modulus: self.modulus,
        }
    }
    fn one_like(&self) -> Self {
        FieldElem {
            value: 1 % self.modulus,
            modulus: self.modulus,
        }
    }
    fn is_zero_elem(&self) -> bool {
        self.value == 0
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let mut v = self.value + rhs.value;
        if v >= self.modulus {
            v -= self.modulus;
        }
        FieldElem {
            value: v,
            modulus: self.modulus,
        }
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.modulus - rhs.value
        };
        FieldElem {
            value: v,
            modulus: self.modulus,
        }
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let v = (self.value as u128 * rhs.value as u128 % self.modulus as u128) as u64;
        FieldElem {
            value: v,
            modulus: self.modulus,
        }
    }
    fn neg_ref(&self) -> Self {
        let v = if self.value == 0 {
            0
        } else {
            self.modulus - self.value
        };
        FieldElem {
            value: v,
            modulus: self.modulus,
        }
    }
    fn inv_ref(&self) -> Self {
        self.inverse()
    }
    fn mul_nat(&self, k: u32) -> Self {
        let v =
            (self.value as u128 * (k as u64 % self.modulus) as u128 % self.modulus as u128) as u64;
        FieldElem {
            value: v,
            modulus: self.modulus,
        }
    }
    fn canonical_scale(terms: &mut [(Monomial, Self)]) {
        if terms.is_empty() {
            return;
        }
        let inv = terms[0].1.inverse();
        for (_, c) in terms.iter_mut() {
            *c = c.mul_ref(&inv);
        }
    }
}
