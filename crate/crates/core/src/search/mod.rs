//! Generating-set search, weight-matrix reconstruction and maximum-rate
//! sweeps for unitary-weight multi-group decodable codes.

mod engine;
mod gamma;

pub use engine::{
    count_gamma_sets, count_gamma_sets_unpruned, find_gamma_sets, symmetry_factor, SearchOptions,
};
pub use gamma::{validate_gamma, GammaCondition, GammaSet};

use num_rational::BigRational;
use serde::Serialize;

use crate::code::{GroupSignature, Provenance, StbcCode};
use crate::codecheck::{check_g_group, check_independence, check_single_thread_diversity};
use crate::exactmat::ExactMatrix;
use crate::exec::Execution;
use crate::lambda::{enumerate_lambdas, EnumerateOptions, LambdaCandidate};
use crate::monomial::UnitMonomial;
use crate::error::{Error, Result};

/// [`reconstruct_weights`] over many sets, in input order.
pub fn reconstruct_many(sets: &[GammaSet], a1: &ExactMatrix, exec: Execution) -> Result<Vec<StbcCode>> {
    crate::exec::map_collect(exec, sets.iter().collect(), |gs| reconstruct_weights(gs, a1))
        .into_iter()
        .collect()
}

/// Builds the code of `gs`: `B_l = Λ_1l^H A_1`, `A_k = Λ_k1 B_1`, and
/// re-verifies it from the matrices alone.
pub fn reconstruct_weights(gs: &GammaSet, a1: &ExactMatrix) -> Result<StbcCode> {
    let n = 1usize << gs.a;
    if a1.rows() != n || a1.cols() != n {
        return Err(Error::shape(format!("A_1 must be {n}x{n}")));
    }
    if !a1.is_unitary()? {
        return Err(Error::domain("A_1 must be unitary"));
    }
    let bs: Vec<ExactMatrix> = gs
        .l_family()
        .iter()
        .map(|c| c.matrix.conj_transpose().mat_mul(a1))
        .collect::<Result<_>>()?;
    let mut first = vec![a1.clone()];
    for c in &gs.lambda_k1 {
        first.push(c.matrix.mat_mul(&bs[0])?);
    }
    let mut groups = vec![first];
    let mut rest = bs.into_iter();
    for &size in gs.sub_sizes() {
        groups.push(rest.by_ref().take(size).collect());
    }
    let mut code = StbcCode::new(gs.a, groups)?;
    code.provenance = Some(Provenance {
        lambda_11: GammaSet::record(&gs.lambda_11),
        lambda_k1: gs.lambda_k1.iter().map(GammaSet::record).collect(),
        lambda_1l: gs.lambda_1l.iter().map(GammaSet::record).collect(),
        sub_sizes: gs.sub_sizes().to_vec(),
        a1: a1.clone(),
        kept_columns: None,
    });
    verify_code(&code)?;
    Ok(code)
}

fn verify_code(code: &StbcCode) -> Result<()> {
    let g = check_g_group(code)?;
    if let Some(v) = g.violation {
        return Err(Error::verification(
            "cross-group",
            format!("{} and {} violate A^H B + B^H A = 0", v.label_k, v.label_l),
        ));
    }
    let ind = check_independence(code)?;
    if !ind.holds {
        return Err(Error::verification(
            "real independence",
            format!("rank {} of {} weight matrices", ind.rank, ind.expected),
        ));
    }
    if check_single_thread_diversity(code)? == Some(false) {
        return Err(Error::verification(
            "single-thread",
            "a weight matrix is not single-thread with entries in {±1, ±j}",
        ));
    }
    Ok(())
}

/// Restricts every weight matrix to the columns `keep` (0-based, distinct).
pub fn remove_columns(code: &StbcCode, keep: &[usize]) -> Result<StbcCode> {
    let mut seen = vec![false; code.n_t];
    for &c in keep {
        if c >= code.n_t || std::mem::replace(&mut seen[c], true) {
            return Err(Error::domain(format!("invalid or repeated column {c}")));
        }
    }
    if keep.is_empty() {
        return Err(Error::domain("keep at least one column"));
    }
    let groups = code
        .groups
        .iter()
        .map(|g| g.iter().map(|m| m.select_columns(keep)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut out = StbcCode::new(code.a, groups)?;
    out.labels = code.labels.clone();
    out.provenance = code.provenance.clone().map(|mut p| {
        let kept = match &p.kept_columns {
            Some(prev) => keep.iter().map(|&c| prev[c]).collect(),
            None => keep.to_vec(),
        };
        p.kept_columns = Some(kept);
        p
    });
    verify_code(&out)?;
    Ok(out)
}

/// Splits the `Λ_1l` family of `gs` (led by `Λ_11`) into consecutive groups
/// of sizes `sub_sizes`, keeping only splits whose members anticommute
/// across groups. Results are in canonical form when `gs` is.
pub fn split_second_group(gs: &GammaSet, sub_sizes: &[usize]) -> Result<Vec<GammaSet>> {
    let family = gs.l_family();
    if sub_sizes.is_empty() || sub_sizes.contains(&0) || sub_sizes.iter().sum::<usize>() != family.len() {
        return Err(Error::domain(format!(
            "group sizes {sub_sizes:?} do not partition {} members",
            family.len()
        )));
    }
    let mono: Vec<UnitMonomial> = family.iter().map(|c| c.monomial).collect();
    let mut assign = vec![0usize];
    let mut fill = vec![0usize; sub_sizes.len()];
    fill[0] = 1;
    let mut out = Vec::new();
    fn rec(
        mono: &[UnitMonomial],
        sizes: &[usize],
        assign: &mut Vec<usize>,
        fill: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = assign.len();
        if i == mono.len() {
            out.push(assign.clone());
            return;
        }
        for s in 0..sizes.len() {
            if fill[s] == sizes[s] {
                continue;
            }
            // equal-size groups beyond the second open in order
            if fill[s] == 0 && s >= 2 && sizes[s] == sizes[s - 1] && fill[s - 1] == 0 {
                continue;
            }
            if (0..i).any(|j| assign[j] != s && !mono[i].anticommutes(&mono[j])) {
                continue;
            }
            assign.push(s);
            fill[s] += 1;
            rec(mono, sizes, assign, fill, out);
            fill[s] -= 1;
            assign.pop();
        }
    }
    let mut assignments = Vec::new();
    rec(&mono, sub_sizes, &mut assign, &mut fill, &mut assignments);
    let mut sizes = vec![gs.signature.sizes()[0]];
    sizes.extend_from_slice(sub_sizes);
    let signature = GroupSignature::new(sizes)?;
    for a in assignments {
        let mut lambda_1l = Vec::new();
        for s in 0..sub_sizes.len() {
            for (i, c) in family.iter().enumerate().skip(1) {
                if a[i] == s {
                    lambda_1l.push((*c).clone());
                }
            }
        }
        out.push(GammaSet {
            a: gs.a,
            signature: signature.clone(),
            lambda_11: gs.lambda_11.clone(),
            lambda_k1: gs.lambda_k1.clone(),
            lambda_1l,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MaxRateOptions {
    pub allow_a3: bool,
    pub execution: Execution,
    /// Smallest group size considered; 0 and 1 both allow single-member groups.
    pub min_group_size: usize,
}

/// Outcome of searching one signature during a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SignatureOutcome {
    pub signature: GroupSignature,
    pub found: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaxRateResult {
    pub a: usize,
    pub groups: usize,
    pub symmetric: bool,
    pub min_group_size: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub max_rate: BigRational,
    /// Every signature attaining the maximum.
    pub signatures: Vec<GroupSignature>,
    /// One reconstructed code per signature in `signatures`, with `A_1 = I`.
    pub witnesses: Vec<StbcCode>,
    /// Every signature searched, in order.
    pub explored: Vec<SignatureOutcome>,
    /// The generating sets behind `witnesses`.
    #[serde(skip)]
    pub gammas: Vec<GammaSet>,
}

fn ser_ratio<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Non-decreasing `g`-part partitions of `total`, lexicographically decreasing.
pub fn partitions(total: usize, g: usize) -> Vec<Vec<usize>> {
    partitions_at_least(total, g, 1)
}

/// Non-decreasing partitions of `total` into `g` parts of at least `min`,
/// in lexicographically decreasing order.
pub fn partitions_at_least(total: usize, g: usize, min: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for v in min..=left / parts {
            cur.push(v);
            rec(left - v, parts - 1, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if g > 0 {
        rec(total, g, min.max(1), &mut Vec::new(), &mut out);
    }
    out.reverse();
    out
}

/// Largest rate over signatures with `g` groups (all equal when
/// `symmetric`) and every group holding at least `min_group_size` members.
/// Totals are swept upwards: dropping a weight matrix from a group above the
/// minimum keeps a code valid, so once a total is infeasible every larger
/// total is too.
pub fn max_rate_search(a: usize, g: usize, symmetric: bool, opts: MaxRateOptions) -> Result<MaxRateResult> {
    if g < 2 {
        return Err(Error::domain("maximum-rate search needs at least two groups"));
    }
    let cands = enumerate_lambdas(
        a,
        EnumerateOptions {
            allow_a3: opts.allow_a3,
            execution: opts.execution,
        },
    )?;
    let n = 1usize << a;
    // the weight matrices live in a real space of dimension 2n²
    let cap = 2 * n * n;
    let min = opts.min_group_size.max(1);
    let mut explored = Vec::new();
    let probe = |sizes: Vec<usize>, explored: &mut Vec<SignatureOutcome>| -> Result<Option<GammaSet>> {
        let signature = GroupSignature::new(sizes)?;
        let found = find_gamma_sets(
            &signature,
            &cands,
            SearchOptions {
                limit: Some(1),
                execution: opts.execution,
            },
        )?
        .pop();
        explored.push(SignatureOutcome {
            signature,
            found: found.is_some(),
        });
        Ok(found)
    };
    let mut best: Vec<GammaSet> = Vec::new();
    if symmetric {
        for k in min..=cap / g {
            match probe(vec![k; g], &mut explored)? {
                Some(gs) => best = vec![gs],
                None => break,
            }
        }
    } else {
        // first feasible partition at the last feasible total, and its position
        let mut last: Option<(usize, usize)> = None;
        for total in g * min..=cap {
            let parts = partitions_at_least(total, g, min);
            let mut hit = None;
            for (i, p) in parts.iter().enumerate() {
                if let Some(gs) = probe(p.clone(), &mut explored)? {
                    hit = Some(i);
                    best = vec![gs];
                    break;
                }
            }
            match hit {
                Some(i) => last = Some((total, i)),
                None => break,
            }
        }
        if let Some((total, i)) = last {
            for p in partitions_at_least(total, g, min).into_iter().skip(i + 1) {
                if let Some(gs) = probe(p, &mut explored)? {
                    best.push(gs);
                }
            }
        }
    }
    let identity = ExactMatrix::identity(n);
    let witnesses = best
        .iter()
        .map(|gs| reconstruct_weights(gs, &identity))
        .collect::<Result<Vec<_>>>()?;
    let signatures: Vec<GroupSignature> = best.iter().map(|gs| gs.signature.clone()).collect();
    let max_rate = signatures
        .first()
        .map(|s| s.rate(n))
        .unwrap_or_else(|| BigRational::from_integer(0.into()));
    Ok(MaxRateResult {
        a,
        groups: g,
        symmetric,
        min_group_size: min,
        max_rate,
        signatures,
        witnesses,
        explored,
        gammas: best,
    })
}

/// Candidates for `a`, with `a = 3` gated behind `allow_a3`.
pub fn candidates(a: usize, allow_a3: bool, execution: Execution) -> Result<Vec<LambdaCandidate>> {
    enumerate_lambdas(a, EnumerateOptions { allow_a3, execution })
}
