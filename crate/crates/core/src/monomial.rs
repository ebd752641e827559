//! Compact exact representation of unit monomial matrices (one nonzero per
//! row and column, every nonzero in `{±1, ±j}`), plus an incremental real-span
//! tracker. The search works in this representation; every result is
//! re-validated with [`ExactMatrix`] before it leaves the crate.

use std::fmt;

use num_bigint::BigInt;

use crate::exactmat::{bareiss_rank, ExactMatrix, GaussianRational};

/// Largest supported dimension (`a ≤ 3`).
pub const MAX_DIM: usize = 8;

/// Row `r` holds `j^phases[r]` in column `cols[r]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitMonomial {
    n: u8,
    cols: [u8; MAX_DIM],
    phases: [u8; MAX_DIM],
}

impl UnitMonomial {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_DIM);
        let mut cols = [0u8; MAX_DIM];
        for (r, c) in cols.iter_mut().enumerate().take(n) {
            *c = r as u8;
        }
        Self {
            n: n as u8,
            cols,
            phases: [0; MAX_DIM],
        }
    }

    pub fn from_parts(cols: &[usize], phases: &[u8]) -> Option<Self> {
        let n = cols.len();
        if n > MAX_DIM || phases.len() != n {
            return None;
        }
        let mut seen = [false; MAX_DIM];
        let mut m = Self::identity(n);
        for r in 0..n {
            if cols[r] >= n || seen[cols[r]] {
                return None;
            }
            seen[cols[r]] = true;
            m.cols[r] = cols[r] as u8;
            m.phases[r] = phases[r] % 4;
        }
        Some(m)
    }

    pub fn from_exact(m: &ExactMatrix) -> Option<Self> {
        if !m.is_square() || m.rows() > MAX_DIM {
            return None;
        }
        let cols = m.unit_monomial_support()?;
        let phases: Vec<u8> = cols
            .iter()
            .enumerate()
            .map(|(r, &c)| m.get(r, c).unit_phase().unwrap())
            .collect();
        Self::from_parts(&cols, &phases)
    }

    pub fn to_exact(&self) -> ExactMatrix {
        let n = self.dim();
        let mut m = ExactMatrix::zeros(n, n);
        for r in 0..n {
            m.set(r, self.cols[r] as usize, GaussianRational::j_pow(self.phases[r] as i64));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn col(&self, r: usize) -> usize {
        self.cols[r] as usize
    }

    pub fn phase(&self, r: usize) -> u8 {
        self.phases[r]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.n, rhs.n);
        let mut out = *self;
        for r in 0..self.dim() {
            let k = self.cols[r] as usize;
            out.cols[r] = rhs.cols[k];
            out.phases[r] = (self.phases[r] + rhs.phases[k]) & 3;
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = *self;
        for p in out.phases.iter_mut().take(self.dim()) {
            *p = (*p + 2) & 3;
        }
        out
    }

    pub fn scale_j_pow(&self, k: u8) -> Self {
        let mut out = *self;
        for p in out.phases.iter_mut().take(self.dim()) {
            *p = (*p + k) & 3;
        }
        out
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = *self;
        for r in 0..self.dim() {
            let c = self.cols[r] as usize;
            out.cols[c] = r as u8;
            out.phases[c] = (4 - self.phases[r]) & 3;
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim()).all(|r| self.cols[r] as usize == r && self.phases[r] == 0)
    }

    pub fn is_neg_identity(&self) -> bool {
        (0..self.dim()).all(|r| self.cols[r] as usize == r && self.phases[r] == 2)
    }

    /// `M² = -I`.
    pub fn squares_to_neg_identity(&self) -> bool {
        (0..self.dim()).all(|r| {
            let c = self.cols[r] as usize;
            self.cols[c] as usize == r && (self.phases[r] + self.phases[c]) & 3 == 2
        })
    }

    pub fn anticommutes(&self, other: &Self) -> bool {
        self.mul(other) == other.mul(self).neg()
    }

    pub fn commutes(&self, other: &Self) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// Integer image of [`ExactMatrix::flatten_real`]: real parts row-major,
    /// then imaginary parts row-major.
    pub fn real_vector(&self) -> Vec<i64> {
        let n = self.dim();
        let mut v = vec![0i64; 2 * n * n];
        for r in 0..n {
            let pos = r * n + self.cols[r] as usize;
            match self.phases[r] {
                0 => v[pos] = 1,
                1 => v[n * n + pos] = 1,
                2 => v[pos] = -1,
                _ => v[n * n + pos] = -1,
            }
        }
        v
    }
}

impl fmt::Debug for UnitMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SYM: [&str; 4] = ["1", "j", "-1", "-j"];
        write!(f, "[")?;
        for r in 0..self.dim() {
            if r > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}:{}", self.cols[r], SYM[self.phases[r] as usize])?;
        }
        write!(f, "]")
    }
}

/// Incrementally maintained real span of integer vectors, kept in row
/// echelon form. Supports stack-like push/pop for depth-first search.
#[derive(Debug, Clone, Default)]
pub struct RealSpan {
    /// Echelon rows with their pivot column.
    rows: Vec<(usize, Vec<i64>)>,
    /// The inserted vectors as given, for the exact fallback.
    originals: Vec<Vec<i64>>,
    /// Depth at which i64 elimination overflowed; inserts at or above it
    /// use big-integer rank instead.
    exact_from: Option<usize>,
}

impl RealSpan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.originals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.originals.is_empty()
    }

    /// Inserts `v` if it is independent of the span; returns whether it was.
    pub fn push_if_independent(&mut self, v: &[i64]) -> bool {
        if self.exact_from.is_none() {
            match self.reduce(v) {
                Some(None) => return false,
                Some(Some(row)) => {
                    self.rows.push(row);
                    self.originals.push(v.to_vec());
                    return true;
                }
                None => self.exact_from = Some(self.len()),
            }
        }
        let mut all: Vec<Vec<BigInt>> = self
            .originals
            .iter()
            .chain(std::iter::once(&v.to_vec()))
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let want = all.len();
        if bareiss_rank(std::mem::take(&mut all)) == want {
            self.originals.push(v.to_vec());
            true
        } else {
            false
        }
    }

    /// Whether `v` lies outside the span, without inserting it.
    pub fn is_independent(&self, v: &[i64]) -> bool {
        self.clone().push_if_independent(v)
    }

    /// Drops everything inserted after the first `len` vectors.
    pub fn truncate(&mut self, len: usize) {
        self.originals.truncate(len);
        if let Some(from) = self.exact_from {
            if len <= from {
                self.exact_from = None;
            }
        }
        self.rows.truncate(len.min(self.rows.len()));
    }

    /// `Some(None)`: dependent. `Some(Some(row))`: new echelon row. `None`: overflow.
    fn reduce(&self, v: &[i64]) -> Option<Option<(usize, Vec<i64>)>> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            let x = v[*p];
            if x == 0 {
                continue;
            }
            let piv = row[*p];
            for (vi, &ri) in v.iter_mut().zip(row) {
                *vi = vi.checked_mul(piv)?.checked_sub(ri.checked_mul(x)?)?;
            }
            let g = v.iter().fold(0i64, |g, &x| gcd(g, x.unsigned_abs() as i64));
            if g > 1 {
                v.iter_mut().for_each(|x| *x /= g);
            }
        }
        Some(v.iter().position(|&x| x != 0).map(|p| (p, v)))
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}
