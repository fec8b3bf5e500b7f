//! Exact multivariate polynomial arithmetic over Q and over prime fields.
//!
//! Everything downstream (regularity analysis, Gröbner bases, exponential
//! sums, the counterexample pipeline) consumes the types in this module.
//! Coefficients over Q are arbitrary-precision rationals throughout; no
//! floating point enters any algebraic decision.

mod form;
mod matrix;
mod monomial;
mod scalar;

pub use form::{FieldPoly, Form, Polynomial};
pub use matrix::{nullspace, rref, RationalMatrix};
pub use monomial::{grevlex_cmp, Monomial};
pub use scalar::{is_prime, FieldElem, Scalar};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("point has length {got}, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("{q} is not an admissible prime modulus")]
    NotPrime { q: u64 },
    #[error("a coefficient denominator is divisible by {q}")]
    DenominatorDivisibleByModulus { q: u64 },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix has shape {rows}x{cols}, expected square of the variable count")]
    MatrixShape { rows: usize, cols: usize },
    #[error("the zero polynomial has no leading form")]
    ZeroPolynomial,
    #[error("variable x{} occurs outside the restriction subset", index + 1)]
    VariableOutsideSupport { index: usize },
    #[error("mixed coefficient moduli")]
    ModulusMismatch,
}

/// Euler's identity `k*f = sum_i x_i * df/dx_i` for homogeneous `f` of
/// degree `k`; exposed for tests and internal assertions.
pub fn euler_identity_holds(f: &Form) -> bool {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    let Some(k) = f.degree() else { return true };
    if !f.is_homogeneous() {
        return false;
    }
    let mut rhs = Form::zero(f.nvars());
    for i in 0..f.nvars() {
        let xi = Form::from_terms(
            f.nvars(),
            [(
                Monomial::var_pow(f.nvars(), i, 1),
                BigRational::from_integer(BigInt::from(1)),
            )],
        );
        rhs = rhs.add(&xi.mul(&f.partial_derivative(i)));
    }
    f.scale(&BigRational::from_integer(BigInt::from(k))) == rhs
}
