//! The fixed one-dimensional profile behind every test function: a
//! nonnegative Schwartz function with value 1 at the origin and Fourier
//! transform supported in [-1,1].
//!
//! Realization: phi = c |g|^2 where g-hat is the standard smooth bump
//! exp(-1/(1-4 xi^2)) on [-1/2, 1/2]. Then phi >= 0, phi-hat = c (g-hat
//! convolved with itself) / (2 pi) lives in [-1,1], and c normalizes
//! phi(0) = 1. Both phi and phi-hat are tabulated once at 2^14 samples and
//! read back through cubic interpolation.

use std::sync::LazyLock;

/// Nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1],
/// by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-based initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, nodes: &[f64], weights: &[f64]) -> f64 {
    let half = (b - a) / 2.0;
    let mid = (a + b) / 2.0;
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

fn g_hat(xi: f64) -> f64 {
    let s = 1.0 - 4.0 * xi * xi;
    if s <= 0.0 {
        0.0
    } else {
        (-1.0 / s).exp()
    }
}

/// Uniformly sampled table on [0, range] with cubic interpolation; all
/// profile functions here are even, so negative arguments fold over.
#[derive(Debug, Clone)]
pub struct EvenTable {
    range: f64,
    values: Vec<f64>,
}

impl EvenTable {
    fn build(range: f64, samples: usize, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..samples)
            .map(|i| f(range * i as f64 / (samples - 1) as f64))
            .collect();
        EvenTable { range, values }
    }

    /// Catmull-Rom interpolation; clamps to 0 outside the tabulated range.
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.abs();
        if x >= self.range {
            return 0.0;
        }
        let step = self.range / (self.values.len() - 1) as f64;
        let t = x / step;
        let i = (t as usize).min(self.values.len() - 2);
        let frac = t - i as f64;
        let get = |j: i64| -> f64 {
            if j < 0 {
                // even extension across 0
                self.values[(-j) as usize]
            } else {
                let j = j as usize;
                if j >= self.values.len() {
                    0.0
                } else {
                    self.values[j]
                }
            }
        };
        let (p0, p1, p2, p3) = (
            get(i as i64 - 1),
            get(i as i64),
            get(i as i64 + 1),
            get(i as i64 + 2),
        );
        let f2 = frac * frac;
        let f3 = f2 * frac;
        0.5 * ((2.0 * p1)
            + (-p0 + p2) * frac
            + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * f2
            + (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * f3)
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    fn step(&self) -> f64 {
        self.range / (self.values.len() - 1) as f64
    }
}

/// The tabulated profile: phi, phi-hat, and the L2 norm of phi.
#[derive(Debug, Clone)]
pub struct Profile {
    pub phi: EvenTable,
    pub phi_hat: EvenTable,
    pub phi_l2: f64,
}

const SAMPLES: usize = 1 << 14;
const PHI_RANGE: f64 = 24.0;
const QUAD_NODES: usize = 160;

fn build_profile() -> Profile {
    let (nodes, weights) = gauss_legendre(QUAD_NODES);
    // g(x) = (1/pi) int_0^(1/2) g_hat(xi) cos(x xi) d xi  (g_hat even)
    let g = |x: f64| {
        integrate(|xi| g_hat(xi) * (x * xi).cos(), 0.0, 0.5, &nodes, &weights)
            / std::f64::consts::PI
    };
    let g0 = g(0.0);
    let norm = 1.0 / (g0 * g0);

    let phi = EvenTable::build(PHI_RANGE, SAMPLES, |y| {
        let v = g(y);
        norm * v * v
    });

    // phi_hat(z) = norm * (g_hat * g_hat)(z) / (2 pi), support [-1, 1]
    let phi_hat = EvenTable::build(1.0, SAMPLES, |z| {
        let lo = (-0.5f64).max(z - 0.5);
        let hi = 0.5f64.min(z + 0.5);
        if hi <= lo {
            return 0.0;
        }
        norm * integrate(|u| g_hat(u) * g_hat(z - u), lo, hi, &nodes, &weights)
            / std::f64::consts::TAU
    });

    // Simpson over the fine phi table for the L2 norm; the tail beyond the
    // tabulated range is far below the 1e-6 tolerances in play.
    let step = phi.step();
    let mut int = 0.0;
    for i in 0..phi.values.len() - 1 {
        let a = phi.values[i];
        let b = phi.values[i + 1];
        let m = phi.eval(step * (i as f64 + 0.5));
        int += step / 6.0 * (a + 4.0 * m + b);
    }
    let phi_l2 = (2.0 * int).sqrt();

    Profile {
        phi,
        phi_hat,
        phi_l2,
    }
}

static PROFILE: LazyLock<Profile> = LazyLock::new(build_profile);

pub fn profile() -> &'static Profile {
    &PROFILE
}

/// Largest delta_0 with phi(y) >= 1 - c0/2 throughout |y| <= delta_0,
/// measured conservatively from the table.
pub fn delta0(c0: f64) -> f64 {
    let p = profile();
    let threshold = 1.0 - c0 / 2.0;
    let step = p.phi.step();
    let mut last_ok = 0.0;
    for i in 0..p.phi.values.len() {
        if p.phi.values[i] >= threshold {
            last_ok = i as f64 * step;
        } else {
            break;
        }
    }
    last_ok
}
