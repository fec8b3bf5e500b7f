//! Dense tables of complete sums T(a,b;q) over F_q x F_q^m, built as the
//! (m+1)-dimensional DFT of the value histogram of the phase polynomial,
//! with an on-disk cache.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::phase::roots_of_unity;
use super::tolerances;
use super::ExpSumError;
use crate::poly::FieldPoly;

const CACHE_MAGIC: &[u8; 4] = b"DWXS";
const CACHE_VERSION: u32 = 1;

/// All complete sums T(a,b;q) = sum_x e((2*pi/q)(a*Q(x) + b.x)) for one
/// polynomial Q over F_q in m variables, indexed row-major by (a, b_1,
/// ..., b_m).
#[derive(Clone)]
pub struct SumTable {
    pub q: u64,
    pub m: usize,
    pub degree: u32,
    pub poly_hash: [u8; 32],
    values: Vec<Complex64>,
}

/// Canonical content hash of a prime-field polynomial, keyed with its
/// modulus and arity.
pub fn poly_hash(poly: &FieldPoly) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(poly.modulus().unwrap_or(0).to_le_bytes());
    h.update((poly.nvars() as u64).to_le_bytes());
    for (mono, c) in poly.terms() {
        for &e in mono.exponents() {
            h.update((e as u64).to_le_bytes());
        }
        h.update(c.value().to_le_bytes());
    }
    h.finalize().into()
}

impl SumTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Flat index of (a, b): row-major with a slowest.
    pub fn index_of(&self, a: u64, b: &[u64]) -> usize {
        debug_assert_eq!(b.len(), self.m);
        let mut idx = a as usize;
        for &bi in b {
            idx = idx * self.q as usize + bi as usize;
        }
        idx
    }

    pub fn pair_of(&self, mut idx: usize) -> (u64, Vec<u64>) {
        let q = self.q as usize;
        let mut b = vec![0u64; self.m];
        for i in (0..self.m).rev() {
            b[i] = (idx % q) as u64;
            idx /= q;
        }
        (idx as u64, b)
    }

    pub fn get(&self, a: u64, b: &[u64]) -> Complex64 {
        self.values[self.index_of(a, b)]
    }

    /// Relative defect of sum |T|^2 against q^(2m+1); the identity holds
    /// for any phase polynomial.
    pub fn parseval_defect(&self) -> f64 {
        let total: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        let expect = (self.q as f64).powi(2 * self.m as i32 + 1);
        (total - expect).abs() / expect
    }

    /// Largest |T(a,b)| / ((k-1)^m q^(m/2)) over a != 0; at most 1 + slack
    /// when the polynomial is Deligne.
    pub fn weil_excess(&self) -> f64 {
        let bound = ((self.degree.max(2) - 1) as f64).powi(self.m as i32)
            * (self.q as f64).powf(self.m as f64 / 2.0);
        let block = self.q.pow(self.m as u32) as usize;
        self.values[block..]
            .iter()
            .map(|v| v.norm() / bound)
            .fold(0.0, f64::max)
    }

    /// Largest absolute defect of T(q-a, q-b) = conj T(a, b).
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let q = self.q;
        let mut worst = 0.0f64;
        for idx in 0..self.values.len() {
            let (a, b) = self.pair_of(idx);
            let ra = (q - a) % q;
            let rb: Vec<u64> = b.iter().map(|&bi| (q - bi) % q).collect();
            let defect = (self.get(ra, &rb) - self.get(a, &b).conj()).norm();
            worst = worst.max(defect);
        }
        worst
    }
}

/// Computes every T(a,b;q) as the (m+1)-dimensional DFT over Z_q of the
/// histogram N(u,x) = #{Q(x) = u} (a point mass per x), using naive
/// length-q transforms along each axis.
pub fn scan_all_pairs(poly: &FieldPoly, memory_cap_bytes: usize) -> Result<SumTable, ExpSumError> {
    let q = poly.modulus().ok_or(ExpSumError::ZeroPolynomial)?;
    let m = poly.nvars();
    let size = (q as u128).pow(m as u32 + 1);
    let bytes = size * std::mem::size_of::<Complex64>() as u128;
    if bytes > memory_cap_bytes as u128 {
        return Err(ExpSumError::MemoryCap {
            needed: bytes as u64,
            cap: memory_cap_bytes as u64,
        });
    }
    let size = size as usize;
    let qi = q as usize;

    // Histogram of (Q(x), x).
    let mut values = vec![Complex64::new(0.0, 0.0); size];
    let mut x = vec![0u64; m];
    loop {
        let u = poly.evaluate_residues(&x, q) as usize;
        let mut idx = u;
        for &xi in &x {
            idx = idx * qi + xi as usize;
        }
        values[idx] += Complex64::new(1.0, 0.0);
        let mut pos = 0;
        loop {
            if pos == m {
                break;
            }
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

    // One naive forward transform of length q per line and axis, with the
    // e(+2*pi*i*ts/q) kernel. Each axis pass reads a snapshot and writes
    // every output entry independently, chunked for the worker pool.
    let roots = roots_of_unity(q);
    let axes = m + 1;
    let chunk = 4096;
    for axis in 0..axes {
        let stride = qi.pow((axes - 1 - axis) as u32);
        let snapshot = std::mem::take(&mut values);
        let mut next = vec![Complex64::new(0.0, 0.0); size];
        next.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(ci, out)| {
                for (off, slot) in out.iter_mut().enumerate() {
                    let flat = ci * chunk + off;
                    let t = flat / stride % qi;
                    let base = flat - t * stride;
                    let mut acc = Complex64::new(0.0, 0.0);
                    for s in 0..qi {
                        acc += snapshot[base + s * stride] * roots[t * s % qi];
                    }
                    *slot = acc;
                }
            });
        values = next;
    }

    Ok(SumTable {
        q,
        m,
        degree: poly.degree().unwrap_or(0),
        poly_hash: poly_hash(poly),
        values,
    })
}

// ---------------------------------------------------------------------------
// Cache
// ---------------------------------------------------------------------------

fn cache_file(dir: &Path, q: u64, m: usize, hash: &[u8; 32]) -> PathBuf {
    let short: String = hash[..8].iter().map(|b| format!("{b:02x}")).collect();
    dir.join(format!("dwxs-q{q}-m{m}-{short}.bin"))
}

pub fn write_cache(dir: &Path, table: &SumTable) -> Result<(), ExpSumError> {
    std::fs::create_dir_all(dir)?;
    let path = cache_file(dir, table.q, table.m, &table.poly_hash);
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(CACHE_MAGIC)?;
        f.write_all(&CACHE_VERSION.to_le_bytes())?;
        f.write_all(&(table.q as u32).to_le_bytes())?;
        f.write_all(&(table.m as u32).to_le_bytes())?;
        f.write_all(&table.degree.to_le_bytes())?;
        f.write_all(&table.poly_hash)?;
        let mut buf = Vec::with_capacity(table.values.len() * 16);
        for v in &table.values {
            buf.extend_from_slice(&v.re.to_le_bytes());
            buf.extend_from_slice(&v.im.to_le_bytes());
        }
        f.write_all(&buf)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, &path)?;
    Ok(())
}

pub fn read_cache(
    dir: &Path,
    q: u64,
    m: usize,
    hash: &[u8; 32],
) -> Result<Option<SumTable>, ExpSumError> {
    let path = cache_file(dir, q, m, hash);
    if !path.exists() {
        return Ok(None);
    }
    let mut f = std::fs::File::open(&path)?;
    let mut header = [0u8; 4 + 4 + 4 + 4 + 4 + 32];
    f.read_exact(&mut header)?;
    if &header[0..4] != CACHE_MAGIC {
        return Ok(None);
    }
    let ver = u32::from_le_bytes(header[4..8].try_into().unwrap());
    let fq = u32::from_le_bytes(header[8..12].try_into().unwrap()) as u64;
    let fm = u32::from_le_bytes(header[12..16].try_into().unwrap()) as usize;
    let degree = u32::from_le_bytes(header[16..20].try_into().unwrap());
    let fhash: [u8; 32] = header[20..52].try_into().unwrap();
    if ver != CACHE_VERSION || fq != q || fm != m || &fhash != hash {
        return Ok(None);
    }
    let size = (q as usize).pow(m as u32 + 1);
    let mut buf = vec![0u8; size * 16];
    f.read_exact(&mut buf)?;
    let values = buf
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[0..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..16].try_into().unwrap()),
            )
        })
        .collect();
    Ok(Some(SumTable {
        q,
        m,
        degree,
        poly_hash: *hash,
        values,
    }))
}

/// Cache-aware scan: loads a previously scanned table when the (q, m,
/// polynomial-hash) key matches, otherwise scans and writes through.
pub fn load_or_scan(
    dir: Option<&Path>,
    poly: &FieldPoly,
    memory_cap_bytes: usize,
) -> Result<SumTable, ExpSumError> {
    let q = poly.modulus().ok_or(ExpSumError::ZeroPolynomial)?;
    let hash = poly_hash(poly);
    if let Some(dir) = dir {
        if let Some(t) = read_cache(dir, q, poly.nvars(), &hash)? {
            return Ok(t);
        }
    }
    let table = scan_all_pairs(poly, memory_cap_bytes)?;
    if let Some(dir) = dir {
        write_cache(dir, &table)?;
    }
    Ok(table)
}

/// Sanity bundle used by callers after a scan.
pub fn check_table(table: &SumTable) -> Result<(), ExpSumError> {
    let defect = table.parseval_defect();
    if defect > tolerances::PARSEVAL_REL_TOL {
        return Err(ExpSumError::ParsevalViolated { defect });
    }
    Ok(())
}
