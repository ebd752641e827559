//! Unitary matrix representations of the Clifford algebra generators in
//! dimension `2^a`, and the anti-hermitian basis of all `2^a × 2^a` complex
//! matrices built from their products.
//!
//! Basis layout (1-based indices, matching the familiar 4×4 table for `a = 2`):
//! `α_1 = jI`, then the single generators `R_1 … R_{2a}`, then products
//! `j^δ(m) R_{k_1}…R_{k_m}` grouped by ascending `m` and lexicographic in
//! the index subset.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::exactmat::{pauli, rational, ExactMatrix, GaussianRational};
use crate::error::{Error, Result};

/// Sign in front of `±j σ3 ⊗ … ⊗ σ3` for the first generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+1" | "1" | "+" => Ok(Sign::Plus),
            "-1" | "-" => Ok(Sign::Minus),
            _ => Err(Error::Parse(format!("sign must be +1 or -1, got '{s}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GeneratorFamily {
    pub a: usize,
    pub sign_gamma1: Sign,
    /// `R_1 … R_{2a+1}`; `gens[0]` is `R_1`.
    pub gens: Vec<ExactMatrix>,
}

impl GeneratorFamily {
    pub fn dim(&self) -> usize {
        1 << self.a
    }

    /// 1-based access.
    pub fn r(&self, i: usize) -> &ExactMatrix {
        &self.gens[i - 1]
    }
}

fn check_a(a: usize) -> Result<()> {
    if a == 0 {
        return Err(Error::domain("antenna exponent a must be at least 1"));
    }
    if a > 4 {
        return Err(Error::domain(format!("antenna exponent a = {a} is outside the supported range 1..=4")));
    }
    Ok(())
}

/// The `2a+1` generator representations:
/// `R_1 = ±j σ3^{⊗a}`, `R_{2k} = I_{2^{a-k}} ⊗ σ1 ⊗ σ3^{⊗(k-1)}`,
/// `R_{2k+1} = I_{2^{a-k}} ⊗ σ2 ⊗ σ3^{⊗(k-1)}`.
pub fn generators(a: usize, sign_gamma1: Sign) -> Result<GeneratorFamily> {
    check_a(a)?;
    let (s1, s2, s3) = (pauli::sigma1(), pauli::sigma2(), pauli::sigma3());
    let s3_pow = |k: usize| ExactMatrix::kron_all(std::iter::repeat_n(&s3, k));

    let mut gens = Vec::with_capacity(2 * a + 1);
    let phase = GaussianRational::j().scale(&rational(sign_gamma1.value(), 1));
    gens.push(s3_pow(a).scale(&phase));
    for k in 1..=a {
        let eye = ExactMatrix::identity(1 << (a - k));
        let tail = s3_pow(k - 1);
        gens.push(eye.kron(&s1).kron(&tail));
        gens.push(eye.kron(&s2).kron(&tail));
    }
    Ok(GeneratorFamily { a, sign_gamma1, gens })
}

/// Power of `j` that makes a product of `m` distinct generators
/// anti-hermitian: `((m mod 4) - 1)((m mod 4) - 2) / 2`.
pub fn delta(m: usize) -> u32 {
    let r = (m % 4) as i64;
    (((r - 1) * (r - 2)) / 2) as u32
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisElement {
    /// 1-based position in the basis.
    pub index: usize,
    /// Sorted 1-based generator indices; empty for `jI`.
    pub gen_subset: Vec<usize>,
    /// Power of `j` applied to the generator product (1 for `jI`).
    pub phase_power: u32,
    pub matrix: ExactMatrix,
}

impl BasisElement {
    /// Generator subset as a bitmask (bit `i-1` for `R_i`).
    pub fn subset_mask(&self) -> u32 {
        self.gen_subset.iter().fold(0, |m, &k| m | (1 << (k - 1)))
    }
}

#[derive(Debug, Clone)]
pub struct CliffordBasis {
    pub a: usize,
    pub sign_gamma1: Sign,
    pub elements: Vec<BasisElement>,
}

impl CliffordBasis {
    pub fn dim(&self) -> usize {
        1 << self.a
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// 1-based access, `alpha(1) = jI`.
    pub fn alpha(&self, k: usize) -> &ExactMatrix {
        &self.elements[k - 1].matrix
    }

    pub fn matrices(&self) -> Vec<ExactMatrix> {
        self.elements.iter().map(|e| e.matrix.clone()).collect()
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.len() {
            return Err(Error::domain(format!("basis index {k} outside 1..={}", self.len())));
        }
        Ok(())
    }

    /// `(λ, m)` with `α_k α_l = λ α_m`, found by exact comparison against the basis.
    pub fn product(&self, k: usize, l: usize) -> Result<(GaussianRational, usize)> {
        self.check_index(k)?;
        self.check_index(l)?;
        if k == l {
            return Err(Error::domain(format!(
                "α_{k}·α_{k} = -I is not a multiple of a basis element"
            )));
        }
        let p = self.alpha(k).mat_mul(self.alpha(l))?;
        self.match_multiple(&p)
            .ok_or_else(|| Error::verification("basis closure", format!("α_{k}·α_{l} not found")))
    }

    /// Finds `(λ, m)` with `p = λ α_m`, `λ ∈ {±1, ±j}`.
    pub fn match_multiple(&self, p: &ExactMatrix) -> Option<(GaussianRational, usize)> {
        let n = self.dim();
        // Every basis element is a unit monomial; row 0 pins down λ.
        let c0 = (0..n).find(|&c| !p.get(0, c).is_zero())?;
        for el in &self.elements {
            let e = el.matrix.get(0, c0);
            if e.is_zero() {
                continue;
            }
            let lambda = p.get(0, c0).div(e).ok()?;
            if lambda.unit_phase().is_some() && el.matrix.scale(&lambda) == *p {
                return Some((lambda, el.index));
            }
        }
        None
    }

    /// Whether `α_k` and `α_l` commute, decided from the generator subsets:
    /// `R_S R_T = (-1)^{|S||T| - |S∩T|} R_T R_S`.
    pub fn commutes(&self, k: usize, l: usize) -> Result<bool> {
        self.check_index(k)?;
        self.check_index(l)?;
        let s = self.elements[k - 1].subset_mask();
        let t = self.elements[l - 1].subset_mask();
        let swaps = s.count_ones() * t.count_ones() - (s & t).count_ones();
        Ok(swaps.is_multiple_of(2))
    }

    /// Row `c` of `T_i` is `c XOR (i-1)`: the support permutation of each basis element.
    pub fn thread_of(&self, k: usize) -> Result<usize> {
        self.check_index(k)?;
        let support = self.alpha(k).unit_monomial_support().ok_or_else(|| {
            Error::verification("single-thread basis", format!("α_{k} is not a unit monomial"))
        })?;
        Ok(support[0] + 1)
    }
}

/// Builds the ordered anti-hermitian basis. Generator `R_{2a+1}` is not used.
pub fn basis(a: usize, sign_gamma1: Sign) -> Result<CliffordBasis> {
    let fam = generators(a, sign_gamma1)?;
    let n = fam.dim();
    let ngen = 2 * a;
    let j = GaussianRational::j();

    let mut elements = Vec::with_capacity(n * n);
    elements.push(BasisElement {
        index: 1,
        gen_subset: Vec::new(),
        phase_power: 1,
        matrix: ExactMatrix::identity(n).scale(&j),
    });
    for m in 1..=ngen {
        for subset in combinations(ngen, m) {
            let mut prod = ExactMatrix::identity(n);
            for &k in &subset {
                prod = prod.mat_mul(fam.r(k))?;
            }
            let phase_power = delta(m);
            let matrix = prod.scale(&GaussianRational::j_pow(phase_power as i64));
            elements.push(BasisElement {
                index: elements.len() + 1,
                gen_subset: subset,
                phase_power,
                matrix,
            });
        }
    }
    Ok(CliffordBasis { a, sign_gamma1, elements })
}

type BasisCache = Mutex<HashMap<(usize, Sign), Arc<CliffordBasis>>>;

/// Memoized [`basis`]; the returned value is shared and read-only.
pub fn basis_cached(a: usize, sign_gamma1: Sign) -> Result<Arc<CliffordBasis>> {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.lock().unwrap().get(&(a, sign_gamma1)) {
        return Ok(Arc::clone(b));
    }
    let b = Arc::new(basis(a, sign_gamma1)?);
    cache
        .lock()
        .unwrap()
        .insert((a, sign_gamma1), Arc::clone(&b));
    Ok(b)
}

/// All `m`-subsets of `1..=n` in lexicographic order.
fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for k in start..=n {
            if n - k + 1 < m - cur.len() {
                break;
            }
            cur.push(k);
            rec(k + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, m, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Precomputed `α_k α_l = λ α_m` for every ordered pair `k ≠ l`.
#[derive(Debug, Clone)]
pub struct ProductTable {
    len: usize,
    /// Indexed `(k-1)·len + (l-1)`; `None` on the diagonal.
    entries: Vec<Option<(GaussianRational, usize)>>,
    commuting: Vec<bool>,
}

impl ProductTable {
    pub fn new(b: &CliffordBasis) -> Result<Self> {
        let len = b.len();
        let mut entries = Vec::with_capacity(len * len);
        let mut commuting = Vec::with_capacity(len * len);
        for k in 1..=len {
            for l in 1..=len {
                entries.push(if k == l { None } else { Some(b.product(k, l)?) });
                commuting.push(b.commutes(k, l)?);
            }
        }
        Ok(Self { len, entries, commuting })
    }

    pub fn get(&self, k: usize, l: usize) -> Option<&(GaussianRational, usize)> {
        self.entries[(k - 1) * self.len + (l - 1)].as_ref()
    }

    pub fn commutes(&self, k: usize, l: usize) -> bool {
        self.commuting[(k - 1) * self.len + (l - 1)]
    }
}

/// `α_k = T_i · D` with `D` diagonal, entries in `{±1, ±j}`.
#[derive(Debug, Clone, Serialize)]
pub struct ThreadDecomposition {
    /// 1-based thread index `i` of `T_i`.
    pub thread_index: usize,
    pub diagonal: ExactMatrix,
}

/// The `2^a` disjoint symmetric permutation matrices occupied by the basis
/// elements, ordered so that `T_1 = I` and `T_i` maps row `r` to column
/// `r XOR (i-1)`.
pub fn thread_permutations(a: usize) -> Result<Vec<ExactMatrix>> {
    check_a(a)?;
    let n = 1usize << a;
    Ok((0..n).map(|mask| permutation_matrix(&xor_perm(n, mask))).collect())
}

pub(crate) fn xor_perm(n: usize, mask: usize) -> Vec<usize> {
    (0..n).map(|r| r ^ mask).collect()
}

pub(crate) fn permutation_matrix(cols: &[usize]) -> ExactMatrix {
    let n = cols.len();
    let mut m = ExactMatrix::zeros(n, n);
    for (r, &c) in cols.iter().enumerate() {
        m.set(r, c, GaussianRational::one());
    }
    m
}

pub fn thread_decompose(b: &CliffordBasis, k: usize) -> Result<ThreadDecomposition> {
    let thread_index = b.thread_of(k)?;
    let n = b.dim();
    let perm = xor_perm(n, thread_index - 1);
    let alpha = b.alpha(k);
    // T is a symmetric permutation, so D = T·α.
    let mut diagonal = ExactMatrix::zeros(n, n);
    for (r, &c) in perm.iter().enumerate() {
        if alpha.get(r, c).is_zero() {
            return Err(Error::verification(
                "thread decomposition",
                format!("α_{k} leaves thread T_{thread_index}"),
            ));
        }
        // (T α)[c][c] = α[r][c] because T maps row c to column r.
        diagonal.set(c, c, alpha.get(r, c).clone());
    }
    Ok(ThreadDecomposition { thread_index, diagonal })
}
