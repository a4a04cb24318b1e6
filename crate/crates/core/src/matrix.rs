//! Dense square matrices over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{fmt_rat, parse_rat, RatScalar};

/// Basis in which a matrix realizes an operator on `M_N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Delta,
    Phi,
    U,
    V,
}

impl std::str::FromStr for Basis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "delta" | "e" => Ok(Basis::Delta),
            "phi" => Ok(Basis::Phi),
            "u" => Ok(Basis::U),
            "v" => Ok(Basis::V),
            _ => Err(Error::UnknownSelector(format!("basis {s:?}"))),
        }
    }
}

/// Square matrix, row-major; column `k` holds the image of basis vector `k`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    dim: usize,
    entries: Vec<RatScalar>,
    pub basis: Basis,
}

impl ExactMatrix {
    pub fn zeros(dim: usize, basis: Basis) -> Self {
        ExactMatrix {
            dim,
            entries: vec![RatScalar::zero(); dim * dim],
            basis,
        }
    }

    pub fn identity(dim: usize, basis: Basis) -> Self {
        let mut m = Self::zeros(dim, basis);
        for i in 0..dim {
            m.set(i, i, RatScalar::one());
        }
        m
    }

    pub fn diagonal(diag: Vec<RatScalar>, basis: Basis) -> Self {
        let mut m = Self::zeros(diag.len(), basis);
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn from_fn(dim: usize, basis: Basis, mut f: impl FnMut(usize, usize) -> RatScalar) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        ExactMatrix {
            dim,
            entries,
            basis,
        }
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(cols: &[Vec<RatScalar>], basis: Basis) -> Result<Self> {
        let dim = cols.len();
        if let Some(bad) = cols.iter().find(|c| c.len() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: bad.len(),
            });
        }
        Ok(Self::from_fn(dim, basis, |i, j| cols[j][i].clone()))
    }

    pub fn from_rows(rows: Vec<Vec<RatScalar>>, basis: Basis) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: r.len(),
                });
            }
            entries.extend(r);
        }
        Ok(ExactMatrix {
            dim,
            entries,
            basis,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &RatScalar {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatScalar) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<RatScalar>> {
        self.entries
            .chunks(self.dim.max(1))
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<RatScalar> {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn with_basis(mut self, basis: Basis) -> Self {
        self.basis = basis;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// `Some(c)` if the matrix is `c·I`.
    pub fn scalar_value(&self) -> Option<RatScalar> {
        let c = if self.dim == 0 {
            RatScalar::zero()
        } else {
            self.get(0, 0).clone()
        };
        for i in 0..self.dim {
            for j in 0..self.dim {
                let expect = if i == j { &c } else { &RatScalar::zero() };
                if self.get(i, j) != expect {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Every nonzero entry lies within the given band (`lower` below and
    /// `upper` above the diagonal).
    pub fn is_banded(&self, lower: usize, upper: usize) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let inside = (i <= j + lower) && (j <= i + upper);
                inside || self.get(i, j).is_zero()
            })
        })
    }

    pub fn scale(&self, s: &RatScalar) -> Self {
        ExactMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * s).collect(),
            basis: self.basis,
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, self.basis, |i, j| self.get(j, i).clone())
    }

    pub fn mul_vec(&self, v: &[RatScalar]) -> Result<Vec<RatScalar>> {
        self.check_dim(v.len())?;
        Ok((0..self.dim)
            .map(|i| {
                let mut acc = RatScalar::zero();
                for (j, vj) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !vj.is_zero() {
                        acc += a * vj;
                    }
                }
                acc
            })
            .collect())
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n, self.basis);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs.dim)?;
        Ok(ExactMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
            basis: self.basis,
        })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs.dim)?;
        Ok(ExactMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
            basis: self.basis,
        })
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim != other {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other,
            });
        }
        Ok(())
    }

    /// Solves `self · c = rhs` by Gaussian elimination. Pivot choice only
    /// looks for a nonzero entry; magnitude is irrelevant in exact arithmetic.
    pub fn solve(&self, rhs: &[RatScalar]) -> Result<Vec<RatScalar>> {
        self.check_dim(rhs.len())?;
        let cols: Vec<Vec<RatScalar>> = vec![rhs.to_vec()];
        let sol = self.solve_many(&cols)?;
        Ok(sol.into_iter().next().expect("one right-hand side"))
    }

    /// Solves for several right-hand sides at once.
    pub fn solve_many(&self, rhs: &[Vec<RatScalar>]) -> Result<Vec<Vec<RatScalar>>> {
        let n = self.dim;
        let m = rhs.len();
        for r in rhs {
            self.check_dim(r.len())?;
        }
        // augmented rows [A | B]
        let mut a: Vec<Vec<RatScalar>> = (0..n)
            .map(|i| {
                let mut row: Vec<RatScalar> = self.entries[i * n..(i + 1) * n].to_vec();
                row.extend(rhs.iter().map(|r| r[i].clone()));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(Error::SingularBasisMatrix)?;
            a.swap(col, pivot);
            let inv = a[col][col].recip();
            for v in a[col].iter_mut().skip(col) {
                *v *= &inv;
            }
            let pivot_row = a[col].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *v -= &factor * p;
                }
            }
        }
        Ok((0..m)
            .map(|k| (0..n).map(|i| a[i][n + k].clone()).collect())
            .collect())
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let unit: Vec<Vec<RatScalar>> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| {
                        if i == j {
                            RatScalar::one()
                        } else {
                            RatScalar::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let cols = self.solve_many(&unit)?;
        Self::from_columns(&cols, self.basis)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows()
            .iter()
            .map(|r| r.iter().map(fmt_rat).collect())
            .collect()
    }

    pub fn from_strings(rows: &[Vec<String>], basis: Basis) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(parsed, basis)
    }
}

/// `AB - BA`
pub fn commutator(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
    a.checked_mul(b)?.checked_sub(&b.checked_mul(a)?)
}

/// `AB + BA`
pub fn anticommutator(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
    a.checked_mul(b)?.checked_add(&b.checked_mul(a)?)
}

// Operator sugar for same-dimension matrices; dimension mismatches panic.
impl Mul for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_mul(rhs).expect("matrix dimensions agree")
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_add(rhs).expect("matrix dimensions agree")
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_sub(rhs).expect("matrix dimensions agree")
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        self.scale(&-RatScalar::one())
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix<{:?}>[", self.basis)?;
        for r in self.to_strings() {
            writeln!(f, "  {}", r.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rat};

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
            Basis::Delta,
        )
        .unwrap()
    }

    #[test]
    fn self_commutator_vanishes() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert!(commutator(&a, &a).unwrap().is_zero());
        assert_eq!(anticommutator(&a, &a).unwrap(), (&a * &a).scale(&int(2)));
    }

    #[test]
    fn inverse_and_solve() {
        let a = m(&[&[0, 1, 0], &[2, 0, 1], &[1, 1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, ExactMatrix::identity(3, Basis::Delta));
        let c = a.solve(&[int(1), int(2), int(3)]).unwrap();
        assert_eq!(a.mul_vec(&c).unwrap(), vec![int(1), int(2), int(3)]);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(a.inverse(), Err(Error::SingularBasisMatrix));
    }

    #[test]
    fn dimension_mismatch() {
        let a = m(&[&[1]]);
        let b = m(&[&[1, 0], &[0, 1]]);
        assert_eq!(
            commutator(&a, &b),
            Err(Error::DimensionMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn scalar_detection_and_strings() {
        let s = ExactMatrix::identity(3, Basis::U).scale(&rat(1, 9));
        assert_eq!(s.scalar_value(), Some(rat(1, 9)));
        assert_eq!(m(&[&[1, 1], &[0, 1]]).scalar_value(), None);
        let back = ExactMatrix::from_strings(&s.to_strings(), Basis::U).unwrap();
        assert_eq!(back, s);
        assert!(m(&[&[1, 0], &[5, 1]]).is_banded(1, 0));
        assert!(!m(&[&[1, 2], &[0, 1]]).is_banded(1, 0));
    }
}
