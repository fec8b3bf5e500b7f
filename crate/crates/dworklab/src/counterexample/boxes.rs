//! The large-sum set Omega: for every prime q in [Q/2, Q], boxes around
//! the rationals (2 pi a/q, 2 pi b/q) attached to good pairs, with exact
//! union-measure accounting, and the transfer of its measure back to
//! physical coordinates.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::instance::{derivative_at_scale, Constants, Instance};
use super::CxError;
use crate::expsum::{
    check_table, default_alpha2, good_pairs, k2_threshold, load_or_scan, specialize_leading_form,
};
use crate::poly::{is_prime, Form};

const TAU: f64 = std::f64::consts::TAU;

/// One box in the swept coordinates (the leading angle plus the n-r
/// trailing angles); the slab over the intermediate coordinates is a
/// shared constant factor.
#[derive(Debug, Clone)]
pub struct BoxGeometry {
    pub q: u64,
    pub a: u64,
    pub b: Vec<u64>,
    /// lo/hi per swept dimension: index 0 is the leading angle.
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxGeometry {
    pub fn measure(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (h - l).max(0.0))
            .product()
    }
}

#[derive(Debug, Clone)]
pub struct BoxSet {
    pub q_cap: f64,
    pub primes: Vec<u64>,
    pub skipped: Vec<(u64, String)>,
    /// (q, good pairs found, required by the density promise).
    pub pair_counts: Vec<(u64, usize, u64)>,
    pub boxes: Vec<BoxGeometry>,
    /// c1^(r-1), the measure of the slab over the intermediate coordinates.
    pub slab_factor: f64,
    pub sum_measure: f64,
    pub union_measure: f64,
    /// Standard error when the union was estimated by sampling (swept
    /// dimension >= 4); exact sweeps report None.
    pub union_stderr: Option<f64>,
}

impl BoxSet {
    /// Number of boxes B(a,b;q), i.e. good pairs across all primes. The
    /// geometry list can be longer: boxes straddling the torus seam are
    /// stored as split pieces.
    pub fn box_count(&self) -> usize {
        self.pair_counts.iter().map(|(_, c, _)| c).sum()
    }

    /// union * log Q, the quantity that should stay bounded below.
    pub fn log_q_product(&self) -> f64 {
        self.union_measure * self.q_cap.ln()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "Q": self.q_cap,
            "primes": self.primes,
            "skipped": self.skipped.iter().map(|(q, r)| json!({"q": q, "reason": r})).collect::<Vec<_>>(),
            "pairs": self.pair_counts.iter().map(|(q, c, req)| json!({
                "q": q, "count": c, "required": req,
            })).collect::<Vec<_>>(),
            "box_count": self.box_count(),
            "sum_measure": self.sum_measure,
            "union_measure": self.union_measure,
            "union_stderr": self.union_stderr,
            "union_times_log_q": self.log_q_product(),
        })
    }
}

/// Splits a box into pieces lying inside [0, 2 pi)^d, wrapping coordinates
/// that spill over either end of the torus.
fn wrap_box(b: BoxGeometry) -> Vec<BoxGeometry> {
    let mut pieces = vec![b];
    let dims = pieces[0].lo.len();
    for d in 0..dims {
        let mut next = Vec::new();
        for p in pieces {
            if p.lo[d] < 0.0 {
                let mut low = p.clone();
                low.lo[d] = p.lo[d] + TAU;
                low.hi[d] = TAU;
                let mut high = p.clone();
                high.lo[d] = 0.0;
                next.push(low);
                next.push(high);
            } else if p.hi[d] > TAU {
                let mut low = p.clone();
                low.hi[d] = TAU;
                let mut high = p.clone();
                high.lo[d] = 0.0;
                high.hi[d] = p.hi[d] - TAU;
                next.push(low);
                next.push(high);
            } else {
                next.push(p);
            }
        }
        pieces = next;
    }
    pieces
}

/// Enumerates primes in [Q/2, Q], builds the good-pair set of the
/// specialized polynomial for each, and materializes the boxes with their
/// exact union measure.
pub fn build_boxes(
    inst: &Instance,
    pk: &Form,
    witness: &[i64],
    constants: &Constants,
    cache_dir: Option<&Path>,
    seed: u64,
) -> Result<BoxSet, CxError> {
    let nr = inst.dims();
    let k = inst.plan.k;
    let lo = (inst.q_cap / 2.0).ceil() as u64;
    let hi = inst.q_cap.floor() as u64;
    let floor_q = k2_threshold(k, nr).max(k as u64);

    let mut primes = Vec::new();
    let mut skipped = Vec::new();
    let mut pair_counts = Vec::new();
    let mut boxes: Vec<BoxGeometry> = Vec::new();

    let spec = specialize_leading_form(pk, witness, inst.rl)?;
    let alpha1 = BigRational::new(BigInt::from(1), BigInt::from(2));
    let alpha2 = default_alpha2(k, nr);

    for q in lo..=hi {
        if !is_prime(q) {
            continue;
        }
        if q <= floor_q {
            skipped.push((q, format!("q <= max(k, K2) = {floor_q}")));
            continue;
        }
        let reduced = match spec.reduce_mod(q) {
            Ok(r) => r,
            Err(e) => {
                skipped.push((q, format!("reduction failed: {e}")));
                continue;
            }
        };
        if reduced.degree() != Some(k) {
            skipped.push((q, "degree drops under reduction".into()));
            continue;
        }
        // Deligne certificate for the specialized polynomial.
        let lead = reduced.leading_form().expect("nonzero by the degree check");
        let lead_ok = if nr == 1 {
            !lead.is_zero()
        } else {
            crate::analysis::is_nonsingular_fq(&lead).map_err(CxError::Analysis)?
        };
        if !lead_ok {
            skipped.push((q, "leading form singular mod q".into()));
            continue;
        }

        let table = load_or_scan(cache_dir, &reduced, 1 << 30)?;
        check_table(&table)?;
        let set = good_pairs(&table, &alpha1, &alpha2)?;
        pair_counts.push((q, set.count(), set.required));

        let half1 = constants.c4 / q as f64;
        let half_trail = constants.c5 * (q as f64).powf(-1.0 - 1.0 / nr as f64);
        for (a, b) in set.pairs(&table) {
            debug_assert!(a != 0, "a = 0 is never a good pair");
            let c1y = TAU * a as f64 / q as f64;
            let mut lo_v = vec![c1y - half1];
            let mut hi_v = vec![c1y + half1];
            for &bj in &b {
                let c = TAU * bj as f64 / q as f64;
                lo_v.push(c - half_trail);
                hi_v.push(c + half_trail);
            }
            boxes.extend(wrap_box(BoxGeometry {
                q,
                a,
                b,
                lo: lo_v,
                hi: hi_v,
            }));
        }
        primes.push(q);
    }

    if primes.is_empty() {
        return Err(CxError::NoPrimes {
            lo,
            hi,
            detail: if skipped.is_empty() {
                "the interval contains no primes".into()
            } else {
                format!(
                    "{} primes skipped (thresholds or bad reduction)",
                    skipped.len()
                )
            },
        });
    }

    let slab_factor = constants.c1.powi(inst.plan.r as i32 - 1);
    let sum_measure: f64 = boxes.iter().map(|b| b.measure()).sum::<f64>() * slab_factor;
    let dims = 1 + nr;
    let (union_raw, union_stderr) = match dims {
        2 => (union_2d(&boxes), None),
        3 => (union_3d(&boxes), None),
        _ => {
            let (m, se) = union_monte_carlo(&boxes, dims, seed);
            (m, Some(se * slab_factor))
        }
    };

    Ok(BoxSet {
        q_cap: inst.q_cap,
        primes,
        skipped,
        pair_counts,
        boxes,
        slab_factor,
        sum_measure,
        union_measure: union_raw * slab_factor,
        union_stderr,
    })
}

// ---------------------------------------------------------------------------
// Union measures
// ---------------------------------------------------------------------------

fn interval_union_length(mut ivals: Vec<(f64, f64)>) -> f64 {
    ivals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (lo, hi) in ivals {
        match cur {
            None => cur = Some((lo, hi)),
            Some((clo, chi)) => {
                if lo <= chi {
                    cur = Some((clo, chi.max(hi)));
                } else {
                    total += chi - clo;
                    cur = Some((lo, hi));
                }
            }
        }
    }
    if let Some((clo, chi)) = cur {
        total += chi - clo;
    }
    total
}

/// Exact union area of axis-aligned rectangles by an event sweep along the
/// first dimension with interval merging in the second.
fn union_2d(boxes: &[BoxGeometry]) -> f64 {
    sweep_union(boxes, |active| {
        interval_union_length(active.iter().map(|b| (b.lo[1], b.hi[1])).collect())
    })
}

/// Exact union volume in three dimensions: sweep on the first coordinate,
/// rectangle union in the remaining two per slab.
fn union_3d(boxes: &[BoxGeometry]) -> f64 {
    sweep_union(boxes, |active| {
        // rectangle union over dims (1, 2) by a nested sweep
        let mut coords: Vec<f64> = active.iter().flat_map(|b| [b.lo[1], b.hi[1]]).collect();
        coords.sort_by(f64::total_cmp);
        coords.dedup();
        let mut area = 0.0;
        for w in coords.windows(2) {
            let (x0, x1) = (w[0], w[1]);
            if x1 <= x0 {
                continue;
            }
            let ivals: Vec<(f64, f64)> = active
                .iter()
                .filter(|b| b.lo[1] <= x0 && b.hi[1] >= x1)
                .map(|b| (b.lo[2], b.hi[2]))
                .collect();
            area += (x1 - x0) * interval_union_length(ivals);
        }
        area
    })
}

fn sweep_union<F>(boxes: &[BoxGeometry], cross_section: F) -> f64
where
    F: Fn(&[&BoxGeometry]) -> f64,
{
    // Boxes from one (q, a) share their leading interval exactly, so group
    // them and test activity per group rather than per box.
    let mut groups: std::collections::BTreeMap<(u64, u64), Vec<&BoxGeometry>> =
        std::collections::BTreeMap::new();
    for b in boxes {
        groups
            .entry((b.lo[0].to_bits(), b.hi[0].to_bits()))
            .or_default()
            .push(b);
    }
    let spans: Vec<(f64, f64, &Vec<&BoxGeometry>)> = groups
        .values()
        .map(|g| (g[0].lo[0], g[0].hi[0], g))
        .collect();

    let mut events: Vec<f64> = spans.iter().flat_map(|&(lo, hi, _)| [lo, hi]).collect();
    events.sort_by(f64::total_cmp);
    events.dedup();
    let mut total = 0.0;
    let mut active: Vec<&BoxGeometry> = Vec::new();
    for w in events.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        if x1 <= x0 {
            continue;
        }
        active.clear();
        for &(lo, hi, g) in &spans {
            if lo <= x0 && hi >= x1 {
                active.extend(g.iter().copied());
            }
        }
        if active.is_empty() {
            continue;
        }
        total += (x1 - x0) * cross_section(&active);
    }
    total
}

/// Monte Carlo estimate over the bounding box, with its standard error;
/// used only when the swept dimension exceeds three.
fn union_monte_carlo(boxes: &[BoxGeometry], dims: usize, seed: u64) -> (f64, f64) {
    if boxes.is_empty() {
        return (0.0, 0.0);
    }
    let mut lo = vec![f64::INFINITY; dims];
    let mut hi = vec![f64::NEG_INFINITY; dims];
    for b in boxes {
        for d in 0..dims {
            lo[d] = lo[d].min(b.lo[d]);
            hi[d] = hi[d].max(b.hi[d]);
        }
    }
    let vol: f64 = lo.iter().zip(&hi).map(|(l, h)| h - l).product();
    let samples = 1_000_000usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    let mut point = vec![0.0f64; dims];
    for _ in 0..samples {
        for d in 0..dims {
            point[d] = rng.gen_range(lo[d]..hi[d]);
        }
        if boxes.iter().any(|b| {
            point
                .iter()
                .enumerate()
                .all(|(d, &x)| b.lo[d] <= x && x <= b.hi[d])
        }) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let stderr = vol * (p * (1.0 - p) / samples as f64).sqrt();
    (vol * p, stderr)
}

// ---------------------------------------------------------------------------
// Measure transfer to physical coordinates
// ---------------------------------------------------------------------------

/// The pre-image accounting: complete angle periods of each wrapped
/// coordinate inside the physical slab, times the inverse linear scales.
#[derive(Debug, Clone)]
pub struct OmegaStar {
    pub measure: f64,
    /// Product of complete periods nu_1 * prod_j nu_j.
    pub periods: f64,
    /// Product of the inverse linear scales (the Jacobian of one period
    /// block).
    pub jacobian: f64,
}

impl OmegaStar {
    pub fn to_json(&self) -> Value {
        json!({
            "measure": self.measure,
            "periods": self.periods,
            "jacobian": self.jacobian,
        })
    }
}

/// Transfers the angle-space measure to the physical slab
/// (-c1, -c1/2] x [-c1, c1]^(n-1): each complete period block of the
/// wrapped coordinates maps affinely onto the torus, so the pre-image
/// measure is (number of blocks) * (block Jacobian) * |Omega|.
pub fn omega_star(
    inst: &Instance,
    pk: &Form,
    witness: &[i64],
    constants: &Constants,
    omega_measure: f64,
) -> OmegaStar {
    let nr = inst.dims() as f64;
    let k = inst.plan.k as f64;
    let d1 = derivative_at_scale(pk, witness, inst).abs();
    let lk = inst.l_value.powf(k);
    let span1 = 0.5 * constants.c1 * lk / d1;
    let nu1 = (span1 / TAU).floor();
    let scale1 = d1 / lk;
    let span_j = 2.0 * constants.c1 * inst.l_value;
    let nu_j = (span_j / TAU).floor();
    let scale_j = 1.0 / inst.l_value;

    let periods = nu1 * nu_j.powf(nr);
    let jacobian = scale1 * scale_j.powf(nr);
    OmegaStar {
        measure: periods * jacobian * omega_measure,
        periods,
        jacobian,
    }
}
