//! Dense matrices over the rationals: change-of-variable maps and the exact
//! linear solves behind center computations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::PolyError;

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    /// Permutation matrix `P` with `P e_j = e_{perm[j]}`, so that applying
    /// `change_variables(f, P)` relabels new variable `j` to old variable
    /// `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zero(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, BigRational::one());
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        RationalMatrix {
            rows,
            cols,
            data: entries
                .iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        }
    }

    pub fn from_entries(rows: usize, cols: usize, data: Vec<BigRational>) -> Self {
        assert_eq!(data.len(), rows * cols);
        RationalMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a + b)
            .collect();
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a - b)
            .collect();
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let data = self.data.iter().map(|a| a * c).collect();
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn determinant(&self) -> BigRational {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_zero());
            let Some(pr) = pivot else {
                return BigRational::zero();
            };
            if pr != col {
                for j in 0..n {
                    a.swap(pr * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in (col + 1)..n {
                let factor = &a[r * n + col] / &p;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = &a[r * n + j] - &factor * &a[col * n + j];
                    a[r * n + j] = v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self, PolyError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero());
            let Some(pr) = pivot else {
                return Err(PolyError::SingularMatrix);
            };
            if pr != col {
                for j in 0..n {
                    let (x, y) = (a.get(pr, j).clone(), a.get(col, j).clone());
                    a.set(pr, j, y);
                    a.set(col, j, x);
                    let (x, y) = (inv.get(pr, j).clone(), inv.get(col, j).clone());
                    inv.set(pr, j, y);
                    inv.set(col, j, x);
                }
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                a.set(col, j, a.get(col, j) / &p);
                inv.set(col, j, inv.get(col, j) / &p);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, a.get(r, j) - &factor * a.get(col, j));
                    inv.set(r, j, inv.get(r, j) - &factor * inv.get(col, j));
                }
            }
        }
        Ok(inv)
    }
}

impl std::fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut RationalMatrix) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        // Full scan of the remaining column for any nonzero pivot.
        let pivot = (row..rows).find(|&r| !m.get(r, col).is_zero());
        let Some(pr) = pivot else { continue };
        if pr != row {
            for j in 0..cols {
                let (x, y) = (m.get(pr, j).clone(), m.get(row, j).clone());
                m.set(pr, j, y);
                m.set(row, j, x);
            }
        }
        let p = m.get(row, col).clone();
        for j in col..cols {
            m.set(row, j, m.get(row, j) / &p);
        }
        for r in 0..rows {
            if r == row {
                continue;
            }
            let factor = m.get(r, col).clone();
            if factor.is_zero() {
                continue;
            }
            for j in col..cols {
                m.set(r, j, m.get(r, j) - &factor * m.get(row, j));
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Basis of the nullspace of `m`, one vector per free column, in the
/// reduced echelon parameterization (free variable set to 1).
pub fn nullspace(m: &RationalMatrix) -> Vec<Vec<BigRational>> {
    let mut r = m.clone();
    let pivots = rref(&mut r);
    let cols = m.cols;
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r.get(row, free).clone();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        let a = RationalMatrix::from_i64(2, 2, &[1, 1, 1, -1]);
        assert_eq!(a.determinant(), BigRational::from_integer(BigInt::from(-2)));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RationalMatrix::identity(2));

        let s = RationalMatrix::from_i64(2, 2, &[2, 4, 1, 2]);
        assert!(s.determinant().is_zero());
        assert!(s.inverse().is_err());
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = RationalMatrix::from_i64(1, 3, &[1, 2, 3]);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot: BigRational = (0..3).map(|j| a.get(0, j) * &v[j]).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn permutation_matrix_shape() {
        let p = RationalMatrix::permutation(&[2, 0, 1]);
        assert_eq!(p.get(2, 0), &BigRational::one());
        assert_eq!(p.get(0, 1), &BigRational::one());
        assert_eq!(p.get(1, 2), &BigRational::one());
    }
}
