use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::GaussianRational;
use crate::error::{Error, Result};

/// Dense row-major matrix of Gaussian rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianRational>,
}

impl ExactMatrix {
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<GaussianRational>) -> Result<Self> {
        if rows * cols != entries.len() {
            return Err(Error::shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::shape("ragged rows"));
        }
        Self::from_entries(r, c, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix from integer `(re, im)` pairs; convenient for tests and fixtures.
    pub fn from_int_pairs(rows: usize, cols: usize, pairs: &[(i64, i64)]) -> Result<Self> {
        let entries = pairs
            .iter()
            .map(|&(re, im)| {
                GaussianRational::new(
                    BigRational::from_integer(re.into()),
                    BigRational::from_integer(im.into()),
                )
            })
            .collect();
        Self::from_entries(rows, cols, entries)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = GaussianRational::one();
        }
        m
    }

    pub fn scalar(v: GaussianRational) -> Self {
        Self {
            rows: 1,
            cols: 1,
            entries: vec![v],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[GaussianRational] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussianRational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussianRational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[GaussianRational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(GaussianRational::is_zero)
    }

    fn same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::shape(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn require_square(&self, what: &str) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::shape(format!(
                "{what} needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(self.rows)
    }

    pub fn mat_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs, "add")?;
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect();
        Ok(Self { entries, ..*self })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs, "sub")?;
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect();
        Ok(Self { entries, ..*self })
    }

    pub fn neg(&self) -> Self {
        self.map(|e| -e)
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        self.map(|e| e * k)
    }

    pub fn scale_real(&self, k: &BigRational) -> Self {
        self.map(|e| e.scale(k))
    }

    fn map(&self, f: impl Fn(&GaussianRational) -> GaussianRational) -> Self {
        Self {
            entries: self.entries.iter().map(f).collect(),
            ..*self
        }
    }

    pub fn conj_transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).conj());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.set(i * rhs.rows + k, j * rhs.cols + l, a * rhs.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Kronecker product of a list, left to right. The empty product is `[1]`.
    pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ExactMatrix>) -> Self {
        factors
            .into_iter()
            .fold(Self::identity(1), |acc, m| acc.kron(m))
    }

    pub fn trace(&self) -> Result<GaussianRational> {
        let n = self.require_square("trace")?;
        let mut t = GaussianRational::zero();
        for i in 0..n {
            t += self.get(i, i);
        }
        Ok(t)
    }

    /// `A^H A = I`.
    pub fn is_unitary(&self) -> Result<bool> {
        let n = self.require_square("is_unitary")?;
        Ok(self.conj_transpose().mat_mul(self)? == Self::identity(n))
    }

    /// `A^H = -A`.
    pub fn is_anti_hermitian(&self) -> Result<bool> {
        self.require_square("is_anti_hermitian")?;
        Ok(self.conj_transpose() == self.neg())
    }

    /// `A² = -I`.
    pub fn squares_to_neg_identity(&self) -> Result<bool> {
        let n = self.require_square("squares_to_neg_identity")?;
        Ok(self.mat_mul(self)? == Self::identity(n).neg())
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, keep: &[usize]) -> Result<Self> {
        if let Some(&bad) = keep.iter().find(|&&c| c >= self.cols) {
            return Err(Error::shape(format!("column {bad} out of range for {} columns", self.cols)));
        }
        let mut entries = Vec::with_capacity(self.rows * keep.len());
        for r in 0..self.rows {
            for &c in keep {
                entries.push(self.get(r, c).clone());
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: keep.len(),
            entries,
        })
    }

    /// Real vector of length `2·rows·cols`: row-major real parts followed by
    /// row-major imaginary parts.
    pub fn flatten_real(&self) -> Vec<BigRational> {
        self.entries
            .iter()
            .map(|e| e.re.clone())
            .chain(self.entries.iter().map(|e| e.im.clone()))
            .collect()
    }

    /// If every row and column holds exactly one nonzero entry and that entry
    /// is one of ±1, ±j, returns the column index of the nonzero in each row.
    pub fn unit_monomial_support(&self) -> Option<Vec<usize>> {
        let mut cols = Vec::with_capacity(self.rows);
        let mut seen = vec![false; self.cols];
        for r in 0..self.rows {
            let mut hit = None;
            for (c, e) in self.row(r).iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                if hit.is_some() || e.unit_phase().is_none() {
                    return None;
                }
                hit = Some(c);
            }
            let c = hit?;
            if seen[c] {
                return None;
            }
            seen[c] = true;
            cols.push(c);
        }
        Some(cols)
    }

    /// Exact determinant by Gaussian elimination over the Gaussian rationals.
    pub fn det(&self) -> Result<GaussianRational> {
        let n = self.require_square("det")?;
        let mut m = self.entries.clone();
        let mut det = GaussianRational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[r * n + col].is_zero()) else {
                return Ok(GaussianRational::zero());
            };
            if p != col {
                for c in 0..n {
                    m.swap(p * n + c, col * n + c);
                }
                det = -det;
            }
            let pivot = m[col * n + col].clone();
            det = &det * &pivot;
            let inv = pivot.inv()?;
            for r in col + 1..n {
                let f = &m[r * n + col] * &inv;
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let t = &f * &m[col * n + c];
                    m[r * n + c] = &m[r * n + c] - &t;
                }
            }
        }
        Ok(det)
    }
}

/// Rank over ℝ of a family of equally shaped matrices, each flattened by
/// [`ExactMatrix::flatten_real`]. Rows are scaled to integers and reduced by
/// fraction-free (Bareiss) elimination.
pub fn rank_over_reals(ms: &[ExactMatrix]) -> Result<usize> {
    let Some(first) = ms.first() else {
        return Ok(0);
    };
    if let Some(bad) = ms.iter().find(|m| m.rows != first.rows || m.cols != first.cols) {
        return Err(Error::shape(format!(
            "rank_over_reals: mixed shapes {}x{} and {}x{}",
            first.rows, first.cols, bad.rows, bad.cols
        )));
    }
    let rows: Vec<Vec<BigInt>> = ms.iter().map(|m| integer_row(&m.flatten_real())).collect();
    Ok(bareiss_rank(rows))
}

fn integer_row(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

pub(crate) fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        let (head, tail) = m.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail {
            let f = row[col].clone();
            for (c, v) in row.iter_mut().enumerate().take(ncols).skip(col) {
                *v = (&pivot * &*v - &f * &prow[c]) / &prev;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for (c, e) in self.row(r).iter().enumerate() {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{e}")?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for r in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|c| format!("{:>width$}", cells[r * self.cols + c]))
                .collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(ToString::to_string).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(deserializer)?;
        let parsed = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| s.parse::<GaussianRational>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        ExactMatrix::from_rows(parsed).map_err(D::Error::custom)
    }
}
