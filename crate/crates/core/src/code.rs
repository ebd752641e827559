//! Group signatures and code records shared by the search and the checker.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::exactmat::{parse_ratio, rational, ExactMatrix};
use crate::error::{Error, Result};

/// Group sizes `(n_1, …, n_g)`; the code carries `Σ n_i` real symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSignature {
    sizes: Vec<usize>,
}

impl GroupSignature {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::domain(format!("invalid group sizes {sizes:?}")));
        }
        Ok(Self { sizes })
    }

    pub fn symmetric_of(groups: usize, size: usize) -> Result<Self> {
        Self::new(vec![size; groups])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn groups(&self) -> usize {
        self.sizes.len()
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.sizes.windows(2).all(|w| w[0] == w[1])
    }

    /// Complex symbols per channel use over `period` channel uses.
    pub fn rate(&self, period: usize) -> BigRational {
        rational(self.total() as i64, 2 * period as i64)
    }

    /// Parses `"n1,n2,…"`.
    pub fn parse_list(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("invalid group size '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sizes)
    }
}

impl std::fmt::Display for GroupSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for GroupSignature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            sizes: &'a [usize],
            symmetric: bool,
        }
        Repr {
            sizes: &self.sizes,
            symmetric: self.is_symmetric(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupSignature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            sizes: Vec<usize>,
        }
        let r = Repr::deserialize(d)?;
        GroupSignature::new(r.sizes).map_err(serde::de::Error::custom)
    }
}

/// One `Λ` of the generating set, as recorded in code provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaRecord {
    /// 1-based basis indices with nonzero coefficient.
    pub support: Vec<usize>,
    /// Coefficients on `support`, exact, as strings.
    pub coeffs: Vec<String>,
    pub matrix: ExactMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub lambda_11: LambdaRecord,
    pub lambda_k1: Vec<LambdaRecord>,
    pub lambda_1l: Vec<LambdaRecord>,
    /// Sizes of groups `2…g`; the `Λ_1l` family (led by `Λ_11`) is split in this order.
    pub sub_sizes: Vec<usize>,
    pub a1: ExactMatrix,
    /// Columns kept after column removal, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kept_columns: Option<Vec<usize>>,
}

/// A linear space-time block code given by its weight matrices, split into groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StbcCode {
    pub a: usize,
    /// Signalling period (rows of every weight matrix), `2^a`.
    pub t: usize,
    /// Transmit antennas (columns of every weight matrix).
    pub n_t: usize,
    pub groups: Vec<Vec<ExactMatrix>>,
    pub labels: Option<Vec<Vec<String>>>,
    pub provenance: Option<Provenance>,
}

impl StbcCode {
    pub fn new(a: usize, groups: Vec<Vec<ExactMatrix>>) -> Result<Self> {
        let t = 1usize << a;
        let n_t = groups
            .iter()
            .flatten()
            .next()
            .map(ExactMatrix::cols)
            .ok_or_else(|| Error::domain("code has no weight matrices"))?;
        let code = Self {
            a,
            t,
            n_t,
            groups,
            labels: None,
            provenance: None,
        };
        code.check_shapes()?;
        Ok(code)
    }

    fn check_shapes(&self) -> Result<()> {
        if self.groups.is_empty() || self.groups.iter().any(Vec::is_empty) {
            return Err(Error::domain("every group needs at least one weight matrix"));
        }
        if self.n_t == 0 || self.n_t > self.t {
            return Err(Error::shape(format!("{} columns for period {}", self.n_t, self.t)));
        }
        for m in self.groups.iter().flatten() {
            if m.rows() != self.t || m.cols() != self.n_t {
                return Err(Error::shape(format!(
                    "weight matrix is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    self.t,
                    self.n_t
                )));
            }
        }
        if let Some(labels) = &self.labels {
            let ok = labels.len() == self.groups.len()
                && labels.iter().zip(&self.groups).all(|(l, g)| l.len() == g.len());
            if !ok {
                return Err(Error::shape("labels do not match the group layout"));
            }
        }
        Ok(())
    }

    pub fn signature(&self) -> GroupSignature {
        GroupSignature::new(self.groups.iter().map(Vec::len).collect())
            .expect("groups are non-empty")
    }

    pub fn rate(&self) -> BigRational {
        self.signature().rate(self.t)
    }

    pub fn weights(&self) -> impl Iterator<Item = &ExactMatrix> {
        self.groups.iter().flatten()
    }

    pub fn has_full_columns(&self) -> bool {
        self.n_t == self.t
    }

    /// Name of member `k` (0-based) of group `g` (0-based).
    pub fn label(&self, g: usize, k: usize) -> String {
        match &self.labels {
            Some(l) => l[g][k].clone(),
            None => format!("G{}[{}]", g + 1, k + 1),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CodeRecord {
    a: usize,
    #[serde(rename = "T")]
    t: usize,
    n_t: usize,
    #[serde(default, skip_deserializing)]
    signature: Option<GroupSignature>,
    #[serde(default)]
    rate: Option<String>,
    groups: Vec<Vec<ExactMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

impl Serialize for StbcCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CodeRecord {
            a: self.a,
            t: self.t,
            n_t: self.n_t,
            signature: Some(self.signature()),
            rate: Some(self.rate().to_string()),
            groups: self.groups.clone(),
            labels: self.labels.clone(),
            provenance: self.provenance.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StbcCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = CodeRecord::deserialize(d)?;
        if r.t != 1usize << r.a {
            return Err(D::Error::custom(format!("T = {} but a = {} gives {}", r.t, r.a, 1usize << r.a)));
        }
        let code = StbcCode {
            a: r.a,
            t: r.t,
            n_t: r.n_t,
            groups: r.groups,
            labels: r.labels,
            provenance: r.provenance,
        };
        code.check_shapes().map_err(D::Error::custom)?;
        if let Some(rate) = r.rate {
            let declared = parse_ratio(&rate).map_err(D::Error::custom)?;
            if declared != code.rate() {
                return Err(D::Error::custom(format!(
                    "declared rate {rate} does not match computed {}",
                    code.rate()
                )));
            }
        }
        Ok(code)
    }
}

/// A JSON document holding either one code or a list of codes.
pub fn parse_codes(json: &str) -> Result<Vec<StbcCode>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        Many(Vec<StbcCode>),
        One(Box<StbcCode>),
    }
    match serde_json::from_str::<OneOrMany>(json) {
        Ok(OneOrMany::Many(v)) => Ok(v),
        Ok(OneOrMany::One(c)) => Ok(vec![*c]),
        Err(_) => {
            // untagged enums swallow the useful message; retry for it
            let detail = serde_json::from_str::<StbcCode>(json)
                .err()
                .map(|e| e.to_string())
                .unwrap_or_else(|| "not a code or list of codes".into());
            Err(Error::Parse(detail))
        }
    }
}
