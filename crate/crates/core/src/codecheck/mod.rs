//! Standalone verification of a code: cross-group decodability, real
//! independence, single-thread structure, decoding complexity and coding gain.

mod complexity;
mod gain;

pub use complexity::{
    decoding_complexity, Complexity, ConstellationKind, ReferencedRow, Term, REFERENCED_ROWS,
};
pub use gain::{coding_gain, CodingGainReport, ConstellationSpec, GainMode, DEFAULT_BUDGET};

use serde::Serialize;

use crate::clifford;
use crate::code::StbcCode;
use crate::exactmat::{rank_over_reals, ExactMatrix};
use crate::lambda::is_single_thread_unit;
use crate::error::Result;

/// First cross-group pair breaking `A_k^H A_l + A_l^H A_k = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// 1-based group indices.
    pub group_i: usize,
    pub group_j: usize,
    /// 1-based member indices within those groups.
    pub k: usize,
    pub l: usize,
    pub label_k: String,
    pub label_l: String,
    pub residual: ExactMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupCheck {
    pub holds: bool,
    pub violation: Option<Violation>,
}

/// `A_k^H A_l + A_l^H A_k`.
pub fn cross_term(x: &ExactMatrix, y: &ExactMatrix) -> Result<ExactMatrix> {
    x.conj_transpose().mat_mul(y)?.add(&y.conj_transpose().mat_mul(x)?)
}

pub fn check_g_group(code: &StbcCode) -> Result<GroupCheck> {
    for (gi, gx) in code.groups.iter().enumerate() {
        for (gj, gy) in code.groups.iter().enumerate().skip(gi + 1) {
            for (k, x) in gx.iter().enumerate() {
                for (l, y) in gy.iter().enumerate() {
                    let residual = cross_term(x, y)?;
                    if !residual.is_zero() {
                        return Ok(GroupCheck {
                            holds: false,
                            violation: Some(Violation {
                                group_i: gi + 1,
                                group_j: gj + 1,
                                k: k + 1,
                                l: l + 1,
                                label_k: code.label(gi, k),
                                label_l: code.label(gj, l),
                                residual,
                            }),
                        });
                    }
                }
            }
        }
    }
    Ok(GroupCheck {
        holds: true,
        violation: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependenceCheck {
    pub holds: bool,
    pub rank: usize,
    pub expected: usize,
}

pub fn check_independence(code: &StbcCode) -> Result<IndependenceCheck> {
    let all: Vec<ExactMatrix> = code.weights().cloned().collect();
    let rank = rank_over_reals(&all)?;
    Ok(IndependenceCheck {
        holds: rank == all.len(),
        rank,
        expected: all.len(),
    })
}

/// `None` when columns were removed and the check does not apply.
pub fn check_single_thread_diversity(code: &StbcCode) -> Result<Option<bool>> {
    if !code.has_full_columns() {
        return Ok(None);
    }
    let threads = clifford::thread_permutations(code.a)?;
    Ok(Some(
        code.weights()
            .all(|m| is_single_thread_unit(m, &threads).is_some()),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

impl From<bool> for Outcome {
    fn from(b: bool) -> Self {
        if b {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub signature: crate::code::GroupSignature,
    pub rate: String,
    pub shape: [usize; 2],
    pub g_group: Outcome,
    pub g_group_violation: Option<Violation>,
    pub independence: Outcome,
    pub rank: usize,
    pub single_thread: Outcome,
    pub complexity: Option<Complexity>,
    pub coding_gain: Option<CodingGainReport>,
    pub passed: bool,
}

/// Runs every structural check; complexity and coding gain only when a
/// constellation is given (coding gain additionally on request).
pub fn verify_report(
    code: &StbcCode,
    cs: Option<&ConstellationSpec>,
    with_gain: bool,
    budget: u64,
) -> Result<VerifyReport> {
    let group = check_g_group(code)?;
    let indep = check_independence(code)?;
    let single = match check_single_thread_diversity(code)? {
        Some(b) => Outcome::from(b),
        None => Outcome::Skipped,
    };
    let complexity = match cs {
        Some(cs) => Some(decoding_complexity(&code.signature(), cs.m, cs.kind)?),
        None => None,
    };
    let coding_gain = match cs {
        Some(cs) if with_gain => Some(coding_gain(
            code,
            cs,
            GainMode::PerGroup,
            budget,
            crate::exec::Execution::default(),
        )?),
        _ => None,
    };
    let passed = group.holds && indep.holds && single != Outcome::Fail;
    Ok(VerifyReport {
        signature: code.signature(),
        rate: code.rate().to_string(),
        shape: [code.t, code.n_t],
        g_group: group.holds.into(),
        g_group_violation: group.violation,
        independence: indep.holds.into(),
        rank: indep.rank,
        single_thread: single,
        complexity,
        coding_gain,
        passed,
    })
}
