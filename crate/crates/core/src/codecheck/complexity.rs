//! Maximum-likelihood decoding complexity orders, as polynomials in `√M`.

use serde::{Deserialize, Serialize};

use crate::code::GroupSignature;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstellationKind {
    /// Square QAM: each complex symbol splits into two PAM components.
    Square,
    /// Non-rectangular: the two real components of a complex symbol are coupled.
    Nonrect,
}

impl std::str::FromStr for ConstellationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(Self::Square),
            "nonrect" | "non-rectangular" => Ok(Self::Nonrect),
            _ => Err(Error::Parse(format!("unknown constellation kind '{s}'"))),
        }
    }
}

/// `coeff · M^(half_exp / 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Term {
    pub coeff: u64,
    pub half_exp: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Complexity {
    pub kind: ConstellationKind,
    /// Whether every group carries whole complex symbols.
    pub structure_preserved: bool,
    /// Combined terms, ascending in exponent.
    pub terms: Vec<Term>,
    pub symbolic: String,
    pub m: u64,
    /// Exact value at `m`, when it fits.
    pub value: Option<u128>,
}

/// Rows of the comparison table whose values come from outside this search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReferencedRow {
    pub groups: &'static str,
    pub max_rate: &'static str,
    pub square: &'static str,
    pub nonrect: &'static str,
    pub source: &'static str,
}

pub const REFERENCED_ROWS: [ReferencedRow; 2] = [
    ReferencedRow {
        groups: "2 (non-sym)",
        max_rate: "17/8",
        square: "M^5.5",
        nonrect: "6M^6.5",
        source: "external construction, factor not derived here",
    },
    ReferencedRow {
        groups: "3 (sym)",
        max_rate: "3/4",
        square: "3√M",
        nonrect: "3M",
        source: "external upper bound",
    },
];

/// Complexity order of ML decoding with conditional detection.
///
/// - square: `Σ √M^(n_i - 1)`, one PAM component per group sliced;
/// - non-rectangular, all groups of even size: `Σ M^(n_i / 2)`;
/// - non-rectangular with odd groups: complex symbols straddling two groups
///   are exhausted jointly, `M^s · Σ M^⌊n_i / 2⌋` with `s` straddling symbols.
pub fn decoding_complexity(sig: &GroupSignature, m: u64, kind: ConstellationKind) -> Result<Complexity> {
    if m < 2 {
        return Err(Error::domain(format!("constellation size must be at least 2, got {m}")));
    }
    if kind == ConstellationKind::Square && !is_even_power_of_two(m) {
        return Err(Error::domain(format!("square QAM needs M = 4^k, got {m}")));
    }
    let sizes = sig.sizes();
    let odd = sizes.iter().filter(|&&n| n % 2 == 1).count();
    let structure_preserved = odd == 0;
    let raw: Vec<Term> = match kind {
        ConstellationKind::Square => sizes
            .iter()
            .map(|&n| Term { coeff: 1, half_exp: n as u32 - 1 })
            .collect(),
        ConstellationKind::Nonrect => {
            if odd % 2 == 1 {
                return Err(Error::domain("odd total of real symbols has no complex pairing"));
            }
            let straddle = (odd / 2) as u32;
            sizes
                .iter()
                .map(|&n| Term { coeff: 1, half_exp: 2 * (straddle + n as u32 / 2) })
                .collect()
        }
    };
    let terms = combine(raw);
    Ok(Complexity {
        kind,
        structure_preserved,
        symbolic: render(&terms),
        value: evaluate(&terms, m),
        terms,
        m,
    })
}

fn is_even_power_of_two(m: u64) -> bool {
    m.is_power_of_two() && m.trailing_zeros().is_multiple_of(2)
}

fn combine(mut raw: Vec<Term>) -> Vec<Term> {
    raw.sort_by_key(|t| t.half_exp);
    let mut out: Vec<Term> = Vec::new();
    for t in raw {
        match out.last_mut() {
            Some(last) if last.half_exp == t.half_exp => last.coeff += t.coeff,
            _ => out.push(t),
        }
    }
    out
}

fn evaluate(terms: &[Term], m: u64) -> Option<u128> {
    let root = (m as f64).sqrt().round() as u128;
    let m = m as u128;
    let mut total: u128 = 0;
    for t in terms {
        let whole = m.checked_pow(t.half_exp / 2)?;
        let v = if t.half_exp % 2 == 1 {
            if root * root != m {
                return None;
            }
            whole.checked_mul(root)?
        } else {
            whole
        };
        total = total.checked_add(v.checked_mul(t.coeff as u128)?)?;
    }
    Some(total)
}

/// `2√M + M^1.5`, `2M^2`, `2M + M^2`.
pub fn render(terms: &[Term]) -> String {
    terms
        .iter()
        .map(|t| {
            let base = match t.half_exp {
                0 => String::new(),
                1 => "√M".to_string(),
                2 => "M".to_string(),
                h if h % 2 == 0 => format!("M^{}", h / 2),
                h => format!("M^{}.5", h / 2),
            };
            match (t.coeff, base.is_empty()) {
                (c, true) => c.to_string(),
                (1, false) => base,
                (c, false) => format!("{c}{base}"),
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}
