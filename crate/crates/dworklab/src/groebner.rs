//! Buchberger's algorithm under graded reverse lexicographic order, and the
//! projective irrelevance test built on it.
//!
//! Polynomials are converted to term vectors sorted descending by grevlex;
//! reduction uses cross-multiplied elimination so that over Q all
//! intermediates stay integral, with content stripped after every reduction.
//! Pair pruning follows Gebauer–Möller (coprime leading terms plus the chain
//! criterion), with pairs selected by lowest lcm degree.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::poly::{grevlex_cmp, Monomial, Polynomial, Scalar};

/// A list of homogeneous generators over a common variable set.
#[derive(Clone, Debug)]
pub struct Ideal<C: Scalar> {
    n: usize,
    generators: Vec<Polynomial<C>>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum IdealError {
    #[error("generators must share one variable count")]
    MixedArity,
    #[error("generators must be homogeneous")]
    NotHomogeneous,
    #[error("an ideal needs at least one nonzero generator")]
    Empty,
}

impl<C: Scalar> Ideal<C> {
    pub fn new(n: usize, generators: Vec<Polynomial<C>>) -> Result<Self, IdealError> {
        let gens: Vec<_> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        if gens.is_empty() {
            return Err(IdealError::Empty);
        }
        if gens.iter().any(|g| g.nvars() != n) {
            return Err(IdealError::MixedArity);
        }
        if gens.iter().any(|g| !g.is_homogeneous()) {
            return Err(IdealError::NotHomogeneous);
        }
        Ok(Ideal {
            n,
            generators: gens,
        })
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Polynomial<C>] {
        &self.generators
    }
}

/// A reduced Gröbner basis under grevlex: every S-polynomial reduces to
/// zero, no leading term divides another, tails are fully reduced, and all
/// elements are monic.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<C: Scalar> {
    n: usize,
    elements: Vec<Polynomial<C>>,
    leading: Vec<Monomial>,
}

impl<C: Scalar> GroebnerBasis<C> {
    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[Polynomial<C>] {
        &self.elements
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leading
    }
}

type Terms<C> = Vec<(Monomial, C)>;

fn to_terms<C: Scalar>(p: &Polynomial<C>) -> Terms<C> {
    let mut v: Terms<C> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    v.sort_by(|a, b| grevlex_cmp(&b.0, &a.0));
    v
}

fn from_terms<C: Scalar>(n: usize, terms: Terms<C>) -> Polynomial<C> {
    Polynomial::from_terms(n, terms)
}

/// `f_mult * f - g_mult * x^shift * g` with merged term lists; the
/// workhorse of both cross-multiplied and exact reduction.
fn eliminate<C: Scalar>(
    f: &Terms<C>,
    g: &Terms<C>,
    f_mult: &C,
    g_mult: &C,
    shift: &Monomial,
) -> Terms<C> {
    let scale_f = *f_mult != f_mult.one_like();
    let mut out: Terms<C> = Vec::with_capacity(f.len() + g.len());
    let mut i = 0;
    let mut j = 0;
    while i < f.len() || j < g.len() {
        let pick_f = if i == f.len() {
            false
        } else if j == g.len() {
            true
        } else {
            let mg = g[j].0.mul(shift);
            match grevlex_cmp(&f[i].0, &mg) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => {
                    let fa = if scale_f {
                        f[i].1.mul_ref(f_mult)
                    } else {
                        f[i].1.clone()
                    };
                    let v = fa.sub_ref(&g_mult.mul_ref(&g[j].1));
                    if !v.is_zero_elem() {
                        out.push((mg, v));
                    }
                    i += 1;
                    j += 1;
                    continue;
                }
            }
        };
        if pick_f {
            let fa = if scale_f {
                f[i].1.mul_ref(f_mult)
            } else {
                f[i].1.clone()
            };
            out.push((f[i].0.clone(), fa));
            i += 1;
        } else {
            let mg = g[j].0.mul(shift);
            out.push((mg, g_mult.mul_ref(&g[j].1).neg_ref()));
            j += 1;
        }
    }
    out
}

/// Full normal form of `f` against `basis`, cross-multiplying by reducer
/// leading coefficients and content-stripping in step. The result is an
/// exact nonzero scalar multiple of the division remainder, which is all
/// the Buchberger loop needs.
fn reduce_scaled<C: Scalar>(mut f: Terms<C>, basis: &[Terms<C>]) -> Terms<C> {
    let mut remainder: Terms<C> = Vec::new();
    'outer: while !f.is_empty() {
        let (lm, lc) = (&f[0].0, &f[0].1);
        for g in basis {
            if let Some(shift) = g[0].0.div_into(lm) {
                let lg = g[0].1.clone();
                f = eliminate(&f, g, &lg, lc, &shift);
                if !remainder.is_empty() && lg != lg.one_like() {
                    for (_, c) in remainder.iter_mut() {
                        *c = c.mul_ref(&lg);
                    }
                }
                // Joint content strip: remainder terms all precede f in the
                // order, so the concatenation is a valid sorted term vector.
                let rlen = remainder.len();
                let mut all = std::mem::take(&mut remainder);
                all.append(&mut f);
                C::canonical_scale(&mut all);
                f = all.split_off(rlen);
                remainder = all;
                continue 'outer;
            }
        }
        remainder.push(f.remove(0));
    }
    remainder
}

/// Exact division remainder of `f` by `basis`, with no rescaling. The
/// first eligible reducer wins, so the result is deterministic.
fn reduce_exact<C: Scalar>(mut f: Terms<C>, basis: &[Terms<C>]) -> Terms<C> {
    let mut remainder: Terms<C> = Vec::new();
    'outer: while !f.is_empty() {
        let (lm, lc) = (&f[0].0, &f[0].1);
        for g in basis {
            if let Some(shift) = g[0].0.div_into(lm) {
                let one = lc.one_like();
                let factor = lc.mul_ref(&g[0].1.inv_ref());
                f = eliminate(&f, g, &one, &factor, &shift);
                continue 'outer;
            }
        }
        remainder.push(f.remove(0));
    }
    remainder
}

fn s_polynomial<C: Scalar>(f: &Terms<C>, g: &Terms<C>) -> Terms<C> {
    let lcm = f[0].0.lcm(&g[0].0);
    let shift_f = f[0].0.div_into(&lcm).unwrap();
    let shift_g = g[0].0.div_into(&lcm).unwrap();
    // lc_g * x^sf * f - lc_f * x^sg * g
    let scaled_f: Terms<C> = f
        .iter()
        .map(|(m, c)| (m.mul(&shift_f), c.mul_ref(&g[0].1)))
        .collect();
    let scaled_g: Terms<C> = g
        .iter()
        .map(|(m, c)| (m.mul(&shift_g), c.mul_ref(&f[0].1)))
        .collect();
    // merge-subtract
    let mut out: Terms<C> = Vec::with_capacity(scaled_f.len() + scaled_g.len());
    let mut i = 0;
    let mut j = 0;
    while i < scaled_f.len() || j < scaled_g.len() {
        if i == scaled_f.len() {
            out.push((scaled_g[j].0.clone(), scaled_g[j].1.neg_ref()));
            j += 1;
        } else if j == scaled_g.len() {
            out.push(scaled_f[i].clone());
            i += 1;
        } else {
            match grevlex_cmp(&scaled_f[i].0, &scaled_g[j].0) {
                Ordering::Greater => {
                    out.push(scaled_f[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((scaled_g[j].0.clone(), scaled_g[j].1.neg_ref()));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = scaled_f[i].1.sub_ref(&scaled_g[j].1);
                    if !v.is_zero_elem() {
                        out.push((scaled_f[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq)]
struct Pair {
    deg: u32,
    lcm: Monomial,
    i: usize,
    j: usize,
}

impl Ord for Pair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg
            .cmp(&other.deg)
            .then_with(|| self.lcm.cmp(&other.lcm))
            .then_with(|| (self.i, self.j).cmp(&(other.i, other.j)))
    }
}

impl PartialOrd for Pair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Gebauer–Möller update: prune the new pairs (multiple/duplicate lcm and
/// coprime criteria) and drop old pairs strictly superseded by the new
/// element (chain criterion).
fn update_pairs<C: Scalar>(pairs: &mut BTreeSet<Pair>, basis: &[Terms<C>], t: usize) {
    let lt_t = &basis[t][0].0;
    let mut fresh: Vec<Pair> = (0..t)
        .map(|i| {
            let lcm = basis[i][0].0.lcm(lt_t);
            Pair {
                deg: lcm.degree(),
                lcm,
                i,
                j: t,
            }
        })
        .collect();

    // M criterion: drop (i,t) when another new pair's lcm properly divides its lcm.
    let keep_m: Vec<bool> = fresh
        .iter()
        .map(|p| {
            !fresh
                .iter()
                .any(|q| q.lcm != p.lcm && q.lcm.divides(&p.lcm))
        })
        .collect();
    let mut filtered: Vec<Pair> = fresh
        .drain(..)
        .zip(keep_m)
        .filter_map(|(p, k)| k.then_some(p))
        .collect();

    // F criterion: among equal lcms keep the single smallest index.
    filtered.sort();
    filtered.dedup_by(|a, b| a.lcm == b.lcm);

    // B criterion: coprime leading terms reduce to zero.
    filtered.retain(|p| !basis[p.i][0].0.is_coprime_with(lt_t));

    // Chain criterion on old pairs.
    let old: Vec<Pair> = pairs.iter().cloned().collect();
    for p in old {
        if lt_t.divides(&p.lcm) {
            let lcm_it = basis[p.i][0].0.lcm(lt_t);
            let lcm_jt = basis[p.j][0].0.lcm(lt_t);
            if lcm_it != p.lcm && lcm_jt != p.lcm {
                pairs.remove(&p);
            }
        }
    }
    pairs.extend(filtered);
}

/// Computes the reduced Gröbner basis of `ideal` under grevlex.
pub fn buchberger<C: Scalar>(ideal: &Ideal<C>) -> GroebnerBasis<C> {
    let n = ideal.nvars();
    let mut basis: Vec<Terms<C>> = Vec::new();
    let mut pairs: BTreeSet<Pair> = BTreeSet::new();

    for g in ideal.generators() {
        let mut t = to_terms(g);
        C::canonical_scale(&mut t);
        let reduced = reduce_scaled(t, &basis);
        if reduced.is_empty() {
            continue;
        }
        basis.push(reduced);
        update_pairs(&mut pairs, &basis, basis.len() - 1);
    }

    while let Some(pair) = pairs.iter().next().cloned() {
        pairs.remove(&pair);
        let s = s_polynomial(&basis[pair.i], &basis[pair.j]);
        if s.is_empty() {
            continue;
        }
        let mut h = reduce_scaled(s, &basis);
        if h.is_empty() {
            continue;
        }
        C::canonical_scale(&mut h);
        basis.push(h);
        update_pairs(&mut pairs, &basis, basis.len() - 1);
    }

    // Interreduce: keep only elements with minimal leading terms, then
    // fully reduce each tail against the others and normalize monic.
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i != j && keep[j] && basis[j][0].0.divides(&basis[i][0].0) {
                // Prefer the later, already-reduced representative on ties.
                if basis[j][0].0 != basis[i][0].0 || j > i {
                    keep[i] = false;
                    break;
                }
            }
        }
    }
    let minimal: Vec<Terms<C>> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(b, k)| k.then_some(b))
        .collect();

    let mut reduced: Vec<Terms<C>> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Terms<C>> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _b)| j != i)
            .map(|(_j, b)| b.clone())
            .collect();
        let mut r = reduce_scaled(minimal[i].clone(), &others);
        debug_assert!(!r.is_empty(), "minimal basis element reduced away");
        let inv = r[0].1.inv_ref();
        for (_, c) in r.iter_mut() {
            *c = c.mul_ref(&inv);
        }
        reduced.push(r);
    }
    reduced.sort_by(|a, b| grevlex_cmp(&a[0].0, &b[0].0));

    let leading = reduced.iter().map(|t| t[0].0.clone()).collect();
    let elements = reduced.into_iter().map(|t| from_terms(n, t)).collect();
    GroebnerBasis {
        n,
        elements,
        leading,
    }
}

/// Remainder of multivariate division of `f` by the basis; zero exactly
/// when `f` lies in the ideal.
pub fn normal_form<C: Scalar>(f: &Polynomial<C>, basis: &GroebnerBasis<C>) -> Polynomial<C> {
    assert_eq!(f.nvars(), basis.n, "variable count mismatch");
    let terms: Vec<Terms<C>> = basis.elements.iter().map(to_terms).collect();
    let r = reduce_exact(to_terms(f), &terms);
    from_terms(basis.n, r)
}

/// Decides whether the projective zero set of a homogeneous ideal is empty
/// over the algebraic closure: this holds exactly when the leading-term
/// ideal of a Gröbner basis contains a pure power of every variable.
pub fn is_irrelevant<C: Scalar>(ideal: &Ideal<C>) -> bool {
    let gb = buchberger(ideal);
    irrelevant_from_basis(&gb)
}

pub fn irrelevant_from_basis<C: Scalar>(gb: &GroebnerBasis<C>) -> bool {
    // A unit in the basis makes the zero set empty outright.
    if gb.leading.iter().any(|m| m.is_one()) {
        return true;
    }
    (0..gb.n).all(|i| gb.leading.iter().any(|m| m.pure_power_var() == Some(i)))
}
