//! Exact coding gain `min det(ΔX^H ΔX)` by enumerating codeword differences.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use super::complexity::ConstellationKind;
use crate::code::StbcCode;
use crate::exactmat::{parse_ratio, rational, ExactMatrix};
use crate::exec::{map_collect, Execution};
use crate::error::{Error, Result};

/// Default cap on nonzero difference vectors per enumeration.
pub const DEFAULT_BUDGET: u64 = 1 << 20;

const CHUNK: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstellationSpec {
    pub kind: ConstellationKind,
    pub m: u64,
    /// Values each real symbol ranges over.
    pub real_axis_values: Vec<BigRational>,
}

impl ConstellationSpec {
    /// Square `M`-QAM with real components `{±1, ±3, …, ±(√M - 1)}`.
    pub fn square_qam(m: u64) -> Result<Self> {
        if !(m.is_power_of_two() && m.trailing_zeros().is_multiple_of(2) && m >= 4) {
            return Err(Error::domain(format!("square QAM needs M = 4^k ≥ 4, got {m}")));
        }
        let side = 1i64 << (m.trailing_zeros() / 2);
        let values = (0..side).map(|i| rational(2 * i - (side - 1), 1)).collect();
        Ok(Self {
            kind: ConstellationKind::Square,
            m,
            real_axis_values: values,
        })
    }

    pub fn custom(kind: ConstellationKind, m: u64, values: Vec<BigRational>) -> Result<Self> {
        let mut sorted = values.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() < 2 || sorted.len() != values.len() {
            return Err(Error::domain("real-axis values must be at least two distinct numbers"));
        }
        if kind == ConstellationKind::Square && (m as u128) != (values.len() as u128).pow(2) {
            return Err(Error::domain("square QAM needs √M real-axis values"));
        }
        Ok(Self {
            kind,
            m,
            real_axis_values: values,
        })
    }

    /// Parses `{"kind": "square"|"nonrect", "M": 4, "real_axis_values": ["-1", "1"]}`.
    pub fn from_json(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Record {
            kind: ConstellationKind,
            #[serde(rename = "M")]
            m: u64,
            real_axis_values: Vec<String>,
        }
        let r: Record = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let values = r
            .real_axis_values
            .iter()
            .map(|v| parse_ratio(v))
            .collect::<Result<Vec<_>>>()?;
        Self::custom(r.kind, r.m, values)
    }

    /// Pairwise differences, zero first, then ascending.
    pub fn differences(&self) -> Vec<BigRational> {
        let mut d: Vec<BigRational> = self
            .real_axis_values
            .iter()
            .flat_map(|x| self.real_axis_values.iter().map(move |y| x - y))
            .filter(|v| !v.is_zero())
            .collect();
        d.sort();
        d.dedup();
        d.insert(0, BigRational::zero());
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GainMode {
    /// Each group separately, overall the minimum.
    PerGroup,
    /// All symbols of the code at once.
    Composite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Attained {
    /// 1-based group, absent in composite mode.
    pub group: Option<usize>,
    #[serde(serialize_with = "ser_ratios")]
    pub differences: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodingGainReport {
    pub mode: GainMode,
    #[serde(serialize_with = "ser_ratios")]
    pub per_group: Vec<BigRational>,
    #[serde(serialize_with = "ser_ratio")]
    pub overall: BigRational,
    pub attained_at: Attained,
}

fn ser_ratio<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_ratios<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

pub fn coding_gain(
    code: &StbcCode,
    cs: &ConstellationSpec,
    mode: GainMode,
    budget: u64,
    exec: Execution,
) -> Result<CodingGainReport> {
    let diffs = cs.differences();
    match mode {
        GainMode::PerGroup => {
            for (i, g) in code.groups.iter().enumerate() {
                check_budget(diffs.len(), g.len(), budget, &format!("group {}", i + 1))?;
            }
            let mut per_group = Vec::new();
            let mut best: Option<(BigRational, Attained)> = None;
            for (i, g) in code.groups.iter().enumerate() {
                let (v, at) = min_det(g, &diffs, exec)?;
                if best.as_ref().is_none_or(|(b, _)| v < *b) {
                    best = Some((
                        v.clone(),
                        Attained {
                            group: Some(i + 1),
                            differences: at,
                        },
                    ));
                }
                per_group.push(v);
            }
            let (overall, attained_at) = best.expect("codes have at least one group");
            Ok(CodingGainReport {
                mode,
                per_group,
                overall,
                attained_at,
            })
        }
        GainMode::Composite => {
            let all: Vec<ExactMatrix> = code.weights().cloned().collect();
            check_budget(diffs.len(), all.len(), budget, "composite codebook")?;
            let (overall, at) = min_det(&all, &diffs, exec)?;
            Ok(CodingGainReport {
                mode,
                per_group: Vec::new(),
                overall,
                attained_at: Attained {
                    group: None,
                    differences: at,
                },
            })
        }
    }
}

fn check_budget(base: usize, n: usize, budget: u64, what: &str) -> Result<()> {
    let count = (base as u64).checked_pow(n as u32).map(|c| c - 1);
    match count {
        Some(c) if c <= budget => Ok(()),
        _ => Err(Error::Budget(format!(
            "{what}: {base}^{n} - 1 difference vectors exceed the budget of {budget}"
        ))),
    }
}

/// Minimum over nonzero difference vectors, first minimiser in enumeration order.
fn min_det(
    weights: &[ExactMatrix],
    diffs: &[BigRational],
    exec: Execution,
) -> Result<(BigRational, Vec<BigRational>)> {
    let base = diffs.len() as u64;
    let total = base.pow(weights.len() as u32);
    let chunks: Vec<(u64, u64)> = (1..total)
        .step_by(CHUNK as usize)
        .map(|s| (s, (s + CHUNK).min(total)))
        .collect();
    let results = map_collect(exec, chunks, |(start, end)| -> Result<Option<(BigRational, u64)>> {
        let mut best: Option<(BigRational, u64)> = None;
        for idx in start..end {
            let d = digits(idx, base, weights.len());
            let mut dx = ExactMatrix::zeros(weights[0].rows(), weights[0].cols());
            for (w, &di) in weights.iter().zip(&d) {
                if di != 0 {
                    dx = dx.add(&w.scale_real(&diffs[di]))?;
                }
            }
            let det = dx.conj_transpose().mat_mul(&dx)?.det()?;
            if !det.is_real() || det.re.is_negative() {
                return Err(Error::verification("gram determinant", "not a non-negative real"));
            }
            if best.as_ref().is_none_or(|(b, _)| det.re < *b) {
                best = Some((det.re, idx));
            }
        }
        Ok(best)
    });
    let mut best: Option<(BigRational, u64)> = None;
    for r in results {
        if let Some((v, idx)) = r? {
            if best.as_ref().is_none_or(|(b, _)| v < *b) {
                best = Some((v, idx));
            }
        }
    }
    let (v, idx) = best.ok_or_else(|| Error::domain("no nonzero difference vectors"))?;
    let at = digits(idx, base, weights.len())
        .into_iter()
        .map(|d| diffs[d].clone())
        .collect();
    Ok((v, at))
}

fn digits(mut idx: u64, base: u64, n: usize) -> Vec<usize> {
    let mut d = vec![0usize; n];
    for x in d.iter_mut() {
        *x = (idx % base) as usize;
        idx /= base;
    }
    d
}
