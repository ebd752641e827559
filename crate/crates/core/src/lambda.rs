//! Admissible `Λ` matrices: unitary, squaring to `-I`, single-thread (one
//! nonzero per row and column) with every nonzero in `{±1, ±j}`.
//!
//! Two independent constructions are provided:
//!
//! - coefficient space: real coefficient vectors over the anti-hermitian
//!   basis, with values quantized to `(n - 2κ)/n` and unit norm, filtered by
//!   the commuting-pair condition and a matrix-level re-check;
//! - structure space: every anti-hermitian unit monomial, assembled from an
//!   involution of the rows (fixed points carry `±j`, swapped pairs carry
//!   `c` and `-c̄`).
//!
//! For `a ≤ 2` the coefficient route is the production path; it is
//! cross-checked against the structure route in tests. For `a = 3` the
//! coefficient space is far too large to walk, so the structure route is
//! used and every candidate's coefficients are recovered with the trace
//! formula and validated.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::clifford::{self, CliffordBasis, ProductTable, Sign};
use crate::exactmat::{rational, ExactMatrix, GaussianRational};
use crate::exec::{map_collect, Execution};
use crate::monomial::UnitMonomial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaCandidate {
    /// Real coefficients `a_k` over `α_1 … α_{n²}` (index 0 is `α_1`).
    pub coeffs: Vec<BigRational>,
    pub matrix: ExactMatrix,
    /// 1-based basis indices with nonzero coefficient.
    pub support: Vec<usize>,
    /// 1-based indices of the threads `T_i` the nonzero entries sit on.
    pub threads: Vec<usize>,
    pub monomial: UnitMonomial,
}

impl LambdaCandidate {
    /// Canonical sign representative of `{Λ, -Λ}`: first nonzero coefficient positive.
    pub fn is_sign_representative(&self) -> bool {
        self.coeffs
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_positive())
    }

    fn order_key(&self, other: &Self) -> Ordering {
        self.support
            .len()
            .cmp(&other.support.len())
            .then_with(|| self.support.cmp(&other.support))
            .then_with(|| {
                // larger coefficients first, so +α_k precedes -α_k
                let a = self.support.iter().map(|&k| &self.coeffs[k - 1]);
                let b = other.support.iter().map(|&k| &other.coeffs[k - 1]);
                b.cmp(a)
            })
    }
}

impl Serialize for LambdaCandidate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("LambdaCandidate", 5)?;
        let coeffs: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.serialize_field("support", &self.support)?;
        let single = (self.threads.len() == 1).then(|| self.threads[0]);
        st.serialize_field("thread_index", &single)?;
        st.serialize_field("threads", &self.threads)?;
        st.serialize_field("matrix", &self.matrix)?;
        st.end()
    }
}

/// `{(n - 2κ)/n : κ ∈ ℕ}` restricted to `[-1, 1]`, in descending order.
pub fn coefficient_domain(a: usize) -> Result<Vec<BigRational>> {
    if a == 0 {
        return Err(Error::domain("antenna exponent a must be at least 1"));
    }
    let n = 1i64 << a;
    Ok((0..=n).map(|kappa| rational(n - 2 * kappa, n)).collect())
}

/// Sum of squares is one and the commuting-pair products cancel:
/// `Σ_{k<l, α_kα_l = α_lα_k} a_k a_l α_k α_l = 0`.
pub fn check_prop5(b: &CliffordBasis, table: &ProductTable, coeffs: &[BigRational]) -> Result<bool> {
    if coeffs.len() != b.len() {
        return Err(Error::shape(format!(
            "expected {} coefficients, got {}",
            b.len(),
            coeffs.len()
        )));
    }
    let norm: BigRational = coeffs.iter().map(|c| c * c).sum();
    if !norm.is_one() {
        return Ok(false);
    }
    let support: Vec<usize> = (0..coeffs.len()).filter(|&i| !coeffs[i].is_zero()).collect();
    let mut acc = vec![GaussianRational::zero(); b.len()];
    for (i, &k) in support.iter().enumerate() {
        for &l in &support[i + 1..] {
            if !table.commutes(k + 1, l + 1) {
                continue;
            }
            let (lambda, m) = table.get(k + 1, l + 1).expect("k != l");
            acc[m - 1] += &lambda.scale(&(&coeffs[k] * &coeffs[l]));
        }
    }
    Ok(acc.iter().all(GaussianRational::is_zero))
}

/// Support of a single-thread unit-entry matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleThread {
    /// Column of the nonzero entry in each row.
    pub cols: Vec<usize>,
    /// 1-based indices of the threads touched, ascending.
    pub threads: Vec<usize>,
}

impl SingleThread {
    /// The thread index when the whole support is one `T_i`.
    pub fn single(&self) -> Option<usize> {
        match self.threads.as_slice() {
            [t] => Some(*t),
            _ => None,
        }
    }
}

/// `Some` iff `m` has exactly one nonzero per row and column, each in
/// `{±1, ±j}`; reports which of the given threads the support meets.
pub fn is_single_thread_unit(m: &ExactMatrix, threads: &[ExactMatrix]) -> Option<SingleThread> {
    if !m.is_square() {
        return None;
    }
    let cols = m.unit_monomial_support()?;
    let mut touched = Vec::new();
    for (r, &c) in cols.iter().enumerate() {
        let t = threads.iter().position(|t| !t.get(r, c).is_zero())? + 1;
        if !touched.contains(&t) {
            touched.push(t);
        }
    }
    touched.sort_unstable();
    Some(SingleThread { cols, threads: touched })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EnumerateOptions {
    /// `a = 3` is expensive and must be requested explicitly.
    pub allow_a3: bool,
    pub execution: Execution,
}

/// Every admissible `Λ` for `2^a` antennas, duplicate-free, in canonical
/// order: support size, then support, then sign pattern.
pub fn enumerate_lambdas(a: usize, opts: EnumerateOptions) -> Result<Vec<LambdaCandidate>> {
    match a {
        1 | 2 => {}
        3 if opts.allow_a3 => {}
        3 => {
            return Err(Error::domain(
                "a = 3 enumeration is expensive; enable it explicitly",
            ))
        }
        _ => return Err(Error::domain(format!("enumeration supports a in 1..=3, got {a}"))),
    }
    let b = clifford::basis_cached(a, Sign::Plus)?;
    let threads = clifford::thread_permutations(a)?;
    let mut out = if a <= 2 {
        let table = ProductTable::new(&b)?;
        coefficient_space(&b, &table, &threads, opts.execution)?
    } else {
        let table = ProductTable::new(&b)?;
        let ms = structure_space(a)?;
        let built = map_collect(opts.execution, ms, |m| from_matrix(&b, &table, &threads, &m));
        built.into_iter().collect::<Result<Vec<_>>>()?
    };
    out.sort_by(LambdaCandidate::order_key);
    for w in out.windows(2) {
        if w[0].matrix == w[1].matrix {
            return Err(Error::verification("distinct Λ", "duplicate matrix in enumeration"));
        }
    }
    Ok(out)
}

/// Nonzero magnitudes, as multisets in descending order, whose squares sum to one.
fn magnitude_patterns(domain: &[BigRational]) -> Vec<Vec<BigRational>> {
    let mags: Vec<BigRational> = domain.iter().filter(|v| v.is_positive()).cloned().collect();
    let mut out = Vec::new();
    fn rec(
        mags: &[BigRational],
        start: usize,
        remaining: BigRational,
        cur: &mut Vec<BigRational>,
        out: &mut Vec<Vec<BigRational>>,
    ) {
        if remaining.is_zero() {
            out.push(cur.clone());
            return;
        }
        for i in start..mags.len() {
            let sq = &mags[i] * &mags[i];
            if sq <= remaining {
                cur.push(mags[i].clone());
                rec(mags, i, &remaining - &sq, cur, out);
                cur.pop();
            }
        }
    }
    rec(&mags, 0, BigRational::one(), &mut Vec::new(), &mut out);
    out
}

/// Distinct orderings of a multiset (input sorted).
fn distinct_permutations(items: &[BigRational]) -> Vec<Vec<BigRational>> {
    let mut cur = items.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    // next_permutation
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn coefficient_space(
    b: &CliffordBasis,
    table: &ProductTable,
    threads: &[ExactMatrix],
    mode: Execution,
) -> Result<Vec<LambdaCandidate>> {
    let domain = coefficient_domain(b.a)?;
    let len = b.len();
    let mut jobs = Vec::new();
    for pattern in magnitude_patterns(&domain) {
        for support in subsets(len, pattern.len()) {
            jobs.push((pattern.clone(), support));
        }
    }
    let per_job = map_collect(mode, jobs, |(pattern, support)| -> Result<Vec<LambdaCandidate>> {
        let mut found = Vec::new();
        let s = support.len();
        for mags in distinct_permutations(&pattern) {
            for signs in 0u32..(1 << s) {
                let mut coeffs = vec![BigRational::zero(); len];
                for (i, &k) in support.iter().enumerate() {
                    let v = mags[i].clone();
                    coeffs[k] = if signs >> i & 1 == 1 { -v } else { v };
                }
                if let Some(c) = admit(b, table, threads, coeffs)? {
                    found.push(c);
                }
            }
        }
        Ok(found)
    });
    let mut out = Vec::new();
    for r in per_job {
        out.extend(r?);
    }
    Ok(out)
}

/// Applies every admissibility test to a coefficient vector.
fn admit(
    b: &CliffordBasis,
    table: &ProductTable,
    threads: &[ExactMatrix],
    coeffs: Vec<BigRational>,
) -> Result<Option<LambdaCandidate>> {
    if !check_prop5(b, table, &coeffs)? {
        return Ok(None);
    }
    let n = b.dim();
    let mut matrix = ExactMatrix::zeros(n, n);
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            matrix = matrix.add(&b.alpha(k + 1).scale_real(c))?;
        }
    }
    let Some(st) = is_single_thread_unit(&matrix, threads) else {
        return Ok(None);
    };
    if !(matrix.is_unitary()? && matrix.is_anti_hermitian()? && matrix.squares_to_neg_identity()?) {
        return Ok(None);
    }
    let monomial = UnitMonomial::from_exact(&matrix)
        .ok_or_else(|| Error::verification("unit monomial", "single-thread matrix not representable"))?;
    let support = (0..coeffs.len()).filter(|&k| !coeffs[k].is_zero()).map(|k| k + 1).collect();
    Ok(Some(LambdaCandidate {
        coeffs,
        matrix,
        support,
        threads: st.threads,
        monomial,
    }))
}

/// `a_k = tr(α_k^H Λ) / n`.
pub fn recover_coefficients(b: &CliffordBasis, m: &ExactMatrix) -> Result<Vec<GaussianRational>> {
    let n = rational(b.dim() as i64, 1);
    let inv_n = BigRational::one() / n;
    b.elements
        .iter()
        .map(|e| Ok(e.matrix.conj_transpose().mat_mul(m)?.trace()?.scale(&inv_n)))
        .collect()
}

/// Builds the candidate for an admissible matrix found in structure space.
fn from_matrix(
    b: &CliffordBasis,
    table: &ProductTable,
    threads: &[ExactMatrix],
    m: &ExactMatrix,
) -> Result<LambdaCandidate> {
    let coeffs = recover_coefficients(b, m)?;
    if let Some(bad) = coeffs.iter().position(|c| !c.is_real()) {
        return Err(Error::verification(
            "real coefficients",
            format!("coefficient of α_{} is not real", bad + 1),
        ));
    }
    let coeffs: Vec<BigRational> = coeffs.into_iter().map(|c| c.re).collect();
    let domain = coefficient_domain(b.a)?;
    if coeffs.iter().any(|c| !domain.contains(c)) {
        return Err(Error::verification("coefficient quantization", "coefficient outside domain"));
    }
    admit(b, table, threads, coeffs)?.ok_or_else(|| {
        Error::verification("admissibility", "structure-space matrix rejected by coefficient checks")
    })
}

/// All anti-hermitian unit monomials of size `2^a` (these automatically square to `-I`).
pub fn structure_space(a: usize) -> Result<Vec<ExactMatrix>> {
    if a == 0 || a > 3 {
        return Err(Error::domain(format!("structure-space enumeration supports a in 1..=3, got {a}")));
    }
    let n = 1usize << a;
    let mut out = Vec::new();
    let mut cols = vec![usize::MAX; n];
    let mut phases = vec![0u8; n];
    fn rec(
        cols: &mut Vec<usize>,
        phases: &mut Vec<u8>,
        out: &mut Vec<ExactMatrix>,
    ) {
        let n = cols.len();
        let Some(r) = cols.iter().position(|&c| c == usize::MAX) else {
            out.push(UnitMonomial::from_parts(cols, phases).unwrap().to_exact());
            return;
        };
        // fixed point: ±j on the diagonal
        for p in [1u8, 3] {
            cols[r] = r;
            phases[r] = p;
            rec(cols, phases, out);
        }
        cols[r] = usize::MAX;
        // swapped pair (r, s): entries j^p and -conj(j^p) = j^(2-p)
        for s in r + 1..n {
            if cols[s] != usize::MAX {
                continue;
            }
            for p in 0u8..4 {
                cols[r] = s;
                cols[s] = r;
                phases[r] = p;
                phases[s] = (6 - p) % 4;
                rec(cols, phases, out);
            }
            cols[r] = usize::MAX;
            cols[s] = usize::MAX;
        }
    }
    rec(&mut cols, &mut phases, &mut out);
    Ok(out)
}
