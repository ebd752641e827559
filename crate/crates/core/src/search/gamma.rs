//! Generating sets `Γ` and their from-scratch validation.

use serde::Serialize;

use crate::code::{GroupSignature, LambdaRecord};
use crate::exactmat::{rank_over_reals, ExactMatrix};
use crate::lambda::LambdaCandidate;
use crate::error::{Error, Result};

/// `Γ = {Λ_11, Λ_k1 (k ≥ 2), Λ_1l (l ≥ 2)}` with the `Λ_1l` family (led by
/// `Λ_11`) split consecutively into groups `2…g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaSet {
    pub a: usize,
    pub signature: GroupSignature,
    pub lambda_11: LambdaCandidate,
    pub lambda_k1: Vec<LambdaCandidate>,
    pub lambda_1l: Vec<LambdaCandidate>,
}

impl GammaSet {
    /// Sizes of groups `2…g`.
    pub fn sub_sizes(&self) -> &[usize] {
        &self.signature.sizes()[1..]
    }

    /// The full `Λ_1l` family, `l = 1…N_2`, with `Λ_11` first.
    pub fn l_family(&self) -> Vec<&LambdaCandidate> {
        std::iter::once(&self.lambda_11).chain(&self.lambda_1l).collect()
    }

    /// 0-based subgroup (0 is group 2) of each member of [`Self::l_family`].
    pub fn subgroup_of(&self) -> Vec<usize> {
        self.sub_sizes()
            .iter()
            .enumerate()
            .flat_map(|(s, &n)| std::iter::repeat_n(s, n))
            .collect()
    }

    pub(crate) fn record(c: &LambdaCandidate) -> LambdaRecord {
        LambdaRecord {
            support: c.support.clone(),
            coeffs: c.support.iter().map(|&k| c.coeffs[k - 1].to_string()).collect(),
            matrix: c.matrix.clone(),
        }
    }

    /// Replaces one member by its negation: 0 is `Λ_11`, then the `Λ_k1`, then the `Λ_1l`.
    pub fn negate_member(&self, idx: usize, all: &[LambdaCandidate]) -> Result<Self> {
        let mut out = self.clone();
        let slot = if idx == 0 {
            &mut out.lambda_11
        } else if idx <= out.lambda_k1.len() {
            &mut out.lambda_k1[idx - 1]
        } else {
            out.lambda_1l
                .get_mut(idx - 1 - self.lambda_k1.len())
                .ok_or_else(|| Error::domain(format!("member {idx} out of range")))?
        };
        let neg = slot.matrix.neg();
        *slot = all
            .iter()
            .find(|c| c.matrix == neg)
            .cloned()
            .ok_or_else(|| Error::domain("negation missing from candidate list"))?;
        Ok(out)
    }
}

impl Serialize for GammaSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            a: usize,
            signature: &'a GroupSignature,
            lambda_11: &'a LambdaCandidate,
            lambda_k1: &'a [LambdaCandidate],
            lambda_1l: &'a [LambdaCandidate],
        }
        Repr {
            a: self.a,
            signature: &self.signature,
            lambda_11: &self.lambda_11,
            lambda_k1: &self.lambda_k1,
            lambda_1l: &self.lambda_1l,
        }
        .serialize(s)
    }
}

/// Which defining condition of a generating set failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GammaCondition {
    /// Every member unitary and squaring to `-I`.
    UnitarySquare,
    /// `(Λ_k1 Λ_11 Λ_1l)² = -I`.
    CrossProduct,
    /// `{Λ_k1} ∪ {Λ_1l Λ_11}` independent over the reals.
    Independence,
    /// Members of different subgroups anticommute.
    Anticommute,
}

impl std::fmt::Display for GammaCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::UnitarySquare => "unitary, squares to -I",
            Self::CrossProduct => "(Λ_k1 Λ_11 Λ_1l)² = -I",
            Self::Independence => "real independence",
            Self::Anticommute => "cross-subgroup anticommutation",
        };
        f.write_str(s)
    }
}

/// Re-checks all four conditions with exact matrix arithmetic only.
pub fn validate_gamma(gs: &GammaSet) -> Result<std::result::Result<(), GammaCondition>> {
    let sig = gs.signature.sizes();
    if sig.len() < 2
        || gs.lambda_k1.len() + 1 != sig[0]
        || gs.lambda_1l.len() + 1 != sig[1..].iter().sum::<usize>()
    {
        return Err(Error::shape("generating set does not match its signature"));
    }
    let ks: Vec<&ExactMatrix> = std::iter::once(&gs.lambda_11.matrix)
        .chain(gs.lambda_k1.iter().map(|c| &c.matrix))
        .collect();
    let ls: Vec<&ExactMatrix> = gs.l_family().into_iter().map(|c| &c.matrix).collect();
    for m in ks.iter().chain(&ls) {
        if !(m.is_unitary()? && m.squares_to_neg_identity()?) {
            return Ok(Err(GammaCondition::UnitarySquare));
        }
    }
    let l11 = &gs.lambda_11.matrix;
    for k in &ks {
        let kl = k.mat_mul(l11)?;
        for l in &ls {
            if !kl.mat_mul(l)?.squares_to_neg_identity()? {
                return Ok(Err(GammaCondition::CrossProduct));
            }
        }
    }
    let mut vecs: Vec<ExactMatrix> = ks.iter().map(|&m| m.clone()).collect();
    for l in &ls {
        vecs.push(l.mat_mul(l11)?);
    }
    if rank_over_reals(&vecs)? != vecs.len() {
        return Ok(Err(GammaCondition::Independence));
    }
    let sub = gs.subgroup_of();
    for i in 0..ls.len() {
        for j in i + 1..ls.len() {
            if sub[i] != sub[j] {
                let sum = ls[i].mat_mul(ls[j])?.add(&ls[j].mat_mul(ls[i])?)?;
                if !sum.is_zero() {
                    return Ok(Err(GammaCondition::Anticommute));
                }
            }
        }
    }
    Ok(Ok(()))
}
