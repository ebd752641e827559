//! Small Gaussian-integer matrix kit, written independently of the engine,
//! used to cross-check what the command-line tool emits.

#![allow(dead_code)]

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gi {
    pub re: i64,
    pub im: i64,
}

pub const ZERO: Gi = Gi { re: 0, im: 0 };
pub const ONE: Gi = Gi { re: 1, im: 0 };
pub const J: Gi = Gi { re: 0, im: 1 };

impl Gi {
    pub fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn norm(self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    pub fn j_pow(k: u32) -> Self {
        [ONE, J, -ONE, -J][(k % 4) as usize]
    }

    /// Parses the tool's scalar grammar restricted to integer parts:
    /// `3`, `-j`, `2j`, `1+j`, `-1-2j`.
    pub fn parse(s: &str) -> Self {
        let s = s.trim();
        let int = |t: &str| -> i64 {
            match t {
                "" | "+" => 1,
                "-" => -1,
                _ => t.parse().unwrap_or_else(|_| panic!("not a Gaussian integer: '{s}'")),
            }
        };
        match s.strip_suffix('j') {
            None => Self::new(int(s), 0),
            Some(body) => match body.get(1..).and_then(|t| t.rfind(['+', '-'])) {
                Some(p) => Self::new(int(&body[..p + 1]), int(&body[p + 1..])),
                None => Self::new(0, int(body)),
            },
        }
    }
}

impl Add for Gi {
    type Output = Gi;
    fn add(self, o: Gi) -> Gi {
        Gi::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Gi {
    type Output = Gi;
    fn sub(self, o: Gi) -> Gi {
        Gi::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Gi {
    type Output = Gi;
    fn mul(self, o: Gi) -> Gi {
        Gi::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl Neg for Gi {
    type Output = Gi;
    fn neg(self) -> Gi {
        Gi::new(-self.re, -self.im)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    pub n: usize,
    pub m: usize,
    pub e: Vec<Gi>,
}

impl Mat {
    pub fn zeros(n: usize, m: usize) -> Self {
        Self { n, m, e: vec![ZERO; n * m] }
    }

    pub fn eye(n: usize) -> Self {
        let mut r = Self::zeros(n, n);
        for i in 0..n {
            r.e[i * n + i] = ONE;
        }
        r
    }

    pub fn from_rows(rows: &[&[Gi]]) -> Self {
        let n = rows.len();
        let m = rows[0].len();
        Self {
            n,
            m,
            e: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    /// Rows of scalar strings as written by the tool.
    pub fn from_json(v: &serde_json::Value) -> Self {
        let rows: Vec<Vec<Gi>> = v
            .as_array()
            .expect("matrix rows")
            .iter()
            .map(|r| r.as_array().expect("row").iter().map(|x| Gi::parse(x.as_str().expect("scalar"))).collect())
            .collect();
        let refs: Vec<&[Gi]> = rows.iter().map(Vec::as_slice).collect();
        Self::from_rows(&refs)
    }

    pub fn at(&self, r: usize, c: usize) -> Gi {
        self.e[r * self.m + c]
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.m, o.n);
        let mut r = Mat::zeros(self.n, o.m);
        for i in 0..self.n {
            for k in 0..self.m {
                let a = self.at(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..o.m {
                    r.e[i * o.m + j] = r.e[i * o.m + j] + a * o.at(k, j);
                }
            }
        }
        r
    }

    pub fn add(&self, o: &Mat) -> Mat {
        Mat {
            n: self.n,
            m: self.m,
            e: self.e.iter().zip(&o.e).map(|(a, b)| *a + *b).collect(),
        }
    }

    pub fn scale(&self, k: Gi) -> Mat {
        Mat {
            n: self.n,
            m: self.m,
            e: self.e.iter().map(|a| *a * k).collect(),
        }
    }

    pub fn h(&self) -> Mat {
        let mut r = Mat::zeros(self.m, self.n);
        for i in 0..self.n {
            for j in 0..self.m {
                r.e[j * self.n + i] = self.at(i, j).conj();
            }
        }
        r
    }

    pub fn kron(&self, o: &Mat) -> Mat {
        let (n, m) = (self.n * o.n, self.m * o.m);
        let mut r = Mat::zeros(n, m);
        for i in 0..self.n {
            for j in 0..self.m {
                for k in 0..o.n {
                    for l in 0..o.m {
                        r.e[(i * o.n + k) * m + j * o.m + l] = self.at(i, j) * o.at(k, l);
                    }
                }
            }
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|x| *x == ZERO)
    }

    pub fn trace(&self) -> Gi {
        (0..self.n).fold(ZERO, |acc, i| acc + self.at(i, i))
    }

    pub fn cols(&self, keep: &[usize]) -> Mat {
        let mut r = Mat::zeros(self.n, keep.len());
        for i in 0..self.n {
            for (c, &k) in keep.iter().enumerate() {
                r.e[i * keep.len() + c] = self.at(i, k);
            }
        }
        r
    }

    /// Determinant of a square matrix by cofactor expansion.
    pub fn det(&self) -> Gi {
        assert_eq!(self.n, self.m);
        if self.n == 1 {
            return self.e[0];
        }
        let mut acc = ZERO;
        for c in 0..self.n {
            let a = self.at(0, c);
            if a == ZERO {
                continue;
            }
            let mut minor = Mat::zeros(self.n - 1, self.n - 1);
            for i in 1..self.n {
                let mut cc = 0;
                for j in 0..self.n {
                    if j != c {
                        minor.e[(i - 1) * (self.n - 1) + cc] = self.at(i, j);
                        cc += 1;
                    }
                }
            }
            let term = a * minor.det();
            acc = if c % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }
}

pub fn sigma1() -> Mat {
    Mat::from_rows(&[&[ZERO, ONE], &[-ONE, ZERO]])
}

pub fn sigma2() -> Mat {
    Mat::from_rows(&[&[ZERO, J], &[J, ZERO]])
}

pub fn sigma3() -> Mat {
    Mat::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]])
}

fn kron_chain(parts: &[Mat]) -> Mat {
    parts.iter().skip(1).fold(parts[0].clone(), |acc, p| acc.kron(p))
}

/// The `2a+1` generators, straight from their Kronecker definitions.
pub fn generators(a: usize, sign: i64) -> Vec<Mat> {
    let mut out = vec![kron_chain(&vec![sigma3(); a]).scale(Gi::new(0, sign))];
    for k in 1..=a {
        for s in [sigma1(), sigma2()] {
            let mut parts = vec![Mat::eye(1 << (a - k)), s];
            parts.extend(std::iter::repeat_n(sigma3(), k - 1));
            out.push(kron_chain(&parts));
        }
    }
    out
}

/// The 4x4 basis table: (power of j, generator subset).
pub const TABLE_4X4: [(u32, &[usize]); 16] = [
    (1, &[]),
    (0, &[1]),
    (0, &[2]),
    (0, &[3]),
    (0, &[4]),
    (0, &[1, 2]),
    (0, &[1, 3]),
    (0, &[1, 4]),
    (0, &[2, 3]),
    (0, &[2, 4]),
    (0, &[3, 4]),
    (1, &[1, 2, 3]),
    (1, &[1, 2, 4]),
    (1, &[1, 3, 4]),
    (1, &[2, 3, 4]),
    (1, &[1, 2, 3, 4]),
];

/// Anti-hermitian basis for `2^a` antennas: `jI`, then products of distinct
/// generators among `R_1 … R_2a`, each scaled by the power of `j` that makes
/// it anti-hermitian, ordered by product length then lexicographically.
pub fn basis(a: usize) -> Vec<Mat> {
    let g = generators(a, 1);
    let n = 1usize << a;
    let mut subsets: Vec<Vec<usize>> = (1u32..1 << (2 * a))
        .map(|mask| (0..2 * a).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect())
        .collect();
    subsets.sort_by(|x: &Vec<usize>, y| x.len().cmp(&y.len()).then(x.cmp(y)));
    let mut out = vec![Mat::eye(n).scale(J)];
    for s in subsets {
        let p = s.iter().fold(Mat::eye(n), |acc, &i| acc.mul(&g[i - 1]));
        // pick the phase that makes the product anti-hermitian
        let m = (0..4)
            .map(|k| p.scale(Gi::j_pow(k)))
            .find(|c| c.h().add(c).is_zero())
            .expect("some phase is anti-hermitian");
        out.push(m);
    }
    out
}

/// Real rank of a family of matrices, by exact elimination on their
/// real/imaginary coordinates.
pub fn real_rank(ms: &[Mat]) -> usize {
    let mut rows: Vec<Vec<i128>> = ms
        .iter()
        .map(|m| m.e.iter().flat_map(|x| [x.re as i128, x.im as i128]).collect())
        .collect();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (x, &p) in row.iter_mut().zip(&pivot).take(width) {
                    *x = *x * pivot[col] - f * p;
                }
                let g = row.iter().fold(0i128, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    row.iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `X^H Y + Y^H X`.
pub fn cross(x: &Mat, y: &Mat) -> Mat {
    x.h().mul(y).add(&y.h().mul(x))
}

/// Cross-group condition over every pair of groups, and full real rank.
pub fn code_ok(groups: &[Vec<Mat>]) -> bool {
    for (i, gi) in groups.iter().enumerate() {
        for gj in &groups[i + 1..] {
            for x in gi {
                for y in gj {
                    if !cross(x, y).is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    let all: Vec<Mat> = groups.iter().flatten().cloned().collect();
    real_rank(&all) == all.len()
}

/// Weight matrices of a code record as written by the tool.
pub fn code_groups(code: &serde_json::Value) -> Vec<Vec<Mat>> {
    code["groups"]
        .as_array()
        .expect("groups")
        .iter()
        .map(|g| g.as_array().expect("group").iter().map(Mat::from_json).collect())
        .collect()
}

/// Every single-thread matrix whose entries are all unit Gaussian integers.
pub fn is_unit_monomial(m: &Mat) -> bool {
    let rows_ok = (0..m.n).all(|r| (0..m.m).filter(|&c| m.at(r, c) != ZERO).count() == 1);
    let cols_ok = (0..m.m).all(|c| (0..m.n).filter(|&r| m.at(r, c) != ZERO).count() == 1);
    rows_ok && cols_ok && m.e.iter().all(|x| *x == ZERO || x.norm() == 1)
}
