//! Exponent vectors and monomial orders.

use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial in a fixed ambient variable set.
///
/// The length of the vector is the ambient variable count `n`; entry `i`
/// is the exponent of the variable with 0-based index `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents.into_boxed_slice())
    }

    /// The trivial monomial (all exponents zero) in `n` variables.
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n].into_boxed_slice())
    }

    /// `x_i^e` in `n` variables, `i` 0-based.
    pub fn var_pow(n: usize, i: usize, e: u32) -> Self {
        assert!(i < n, "variable index {i} out of range for {n} variables");
        let mut v = vec![0; n];
        v[i] = e;
        Monomial(v.into_boxed_slice())
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// If this monomial is a pure power `x_i^e` with `e >= 1`, returns `i`.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut seen = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if seen.is_some() {
                    return None;
                }
                seen = Some(i);
            }
        }
        seen
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars(), other.nvars());
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.nvars() == other.nvars() && self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn div_into(&self, other: &Self) -> Option<Self> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial(
            other
                .0
                .iter()
                .zip(self.0.iter())
                .map(|(b, a)| b - a)
                .collect(),
        ))
    }

    pub fn lcm(&self, other: &Self) -> Self {
        assert_eq!(self.nvars(), other.nvars());
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime_with(&self, other: &Self) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Graded lexicographic order: first by total degree, ties broken
/// lexicographically on the exponent vector. This is the storage and
/// printing order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.nvars(), other.nvars());
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded reverse lexicographic order, used for Gröbner bases.
///
/// Higher total degree compares larger; on equal degree the monomial with
/// the *smaller* exponent at the last differing position is larger.
pub fn grevlex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    debug_assert_eq!(a.nvars(), b.nvars());
    match a.degree().cmp(&b.degree()) {
        Ordering::Equal => {}
        ord => return ord,
    }
    for i in (0..a.nvars()).rev() {
        let (ea, eb) = (a.exponent(i), b.exponent(i));
        if ea != eb {
            return eb.cmp(&ea);
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[u32]) -> Monomial {
        Monomial::new(v.to_vec())
    }

    #[test]
    fn grlex_sorts_by_degree_then_lex() {
        assert!(m(&[2, 0]) > m(&[0, 1]));
        assert!(m(&[2, 0]) > m(&[0, 2]));
        assert!(m(&[1, 1]) > m(&[0, 2]));
    }

    #[test]
    fn grevlex_prefers_small_trailing_exponents() {
        // x*y^2 > x^2*z in grevlex with x > y > z
        assert_eq!(
            grevlex_cmp(&m(&[1, 2, 0]), &m(&[2, 0, 1])),
            Ordering::Greater
        );
        assert_eq!(grevlex_cmp(&m(&[2, 0]), &m(&[0, 2])), Ordering::Greater);
    }

    #[test]
    fn division_and_lcm() {
        let a = m(&[1, 2]);
        let b = m(&[2, 2]);
        assert!(a.divides(&b));
        assert_eq!(a.div_into(&b).unwrap(), m(&[1, 0]));
        assert_eq!(a.lcm(&m(&[3, 0])), m(&[3, 2]));
        assert!(m(&[1, 0]).is_coprime_with(&m(&[0, 3])));
        assert_eq!(m(&[0, 3]).pure_power_var(), Some(1));
        assert_eq!(m(&[1, 3]).pure_power_var(), None);
    }
}
