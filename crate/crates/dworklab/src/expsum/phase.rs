//! Phase arithmetic: root-of-unity tables for exact rational angles, and
//! compensated accumulation for the real perturbation part.

use num_complex::Complex64;

/// e(2*pi*j/q) for j in [0, q); computed once per modulus.
pub fn roots_of_unity(q: u64) -> Vec<Complex64> {
    let step = std::f64::consts::TAU / q as f64;
    (0..q)
        .map(|j| {
            let (s, c) = (j as f64 * step).sin_cos();
            Complex64::new(c, s)
        })
        .collect()
}

/// Double-double accumulator: an unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
/// Polynomial phase values reach ~2^30 at desk scale, so a plain f64 sum of
/// offset * value products would lose the low bits that matter after
/// reduction mod 2*pi.
#[derive(Clone, Copy, Debug, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = f64::mul_add(a, b, -p);
    (p, err)
}

impl DoubleDouble {
    pub fn zero() -> Self {
        DoubleDouble::default()
    }

    pub fn add_f64(self, x: f64) -> Self {
        let (s, e) = two_sum(self.hi, x);
        let lo = self.lo + e;
        let (hi, lo) = two_sum(s, lo);
        DoubleDouble { hi, lo }
    }

    /// Adds the exact product a*b.
    pub fn add_prod(self, a: f64, b: f64) -> Self {
        let (p, pe) = two_prod(a, b);
        let (s, e) = two_sum(self.hi, p);
        let lo = self.lo + e + pe;
        let (hi, lo) = two_sum(s, lo);
        DoubleDouble { hi, lo }
    }

    /// Value reduced into [0, 2*pi).
    pub fn rem_tau(self) -> f64 {
        let tau = std::f64::consts::TAU;
        let q = (self.hi / tau).floor();
        let (mut r, e) = two_sum(self.hi, -q * tau);
        r += e + self.lo;
        r.rem_euclid(tau)
    }
}

/// e(i*theta) for a phase already reduced to a modest range.
pub fn cis(theta: f64) -> Complex64 {
    let (s, c) = theta.sin_cos();
    Complex64::new(c, s)
}
