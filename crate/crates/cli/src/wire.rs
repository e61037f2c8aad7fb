//! JSON instance files.
//!
//! Numbers are integers or `[num, den]` rational pairs; floats are rejected.
//! Permutations are 0-based image arrays and matrices are row-major.

use serde::Deserialize;

use closeknit::Rational;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub kind: Kind,
    #[serde(default)]
    pub options: Options,
    pub set: Option<SetBlock>,
    pub group: Option<GroupBlock>,
    pub vector: Option<VectorBlock>,
    #[serde(rename = "abstract")]
    pub abstract_: Option<AbstractBlock>,
    pub galois: Option<GroupBlock>,
    pub metric: Option<MetricBlock>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Set,
    Group,
    Vector,
    Abstract,
    Galois,
    Metric,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Set => "set",
            Kind::Group => "group",
            Kind::Vector => "vector",
            Kind::Abstract => "abstract",
            Kind::Galois => "galois",
            Kind::Metric => "metric",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Full,
    Proof,
    Both,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default = "default_max_orbit")]
    pub max_orbit: usize,
    #[serde(default = "default_max_elements")]
    pub max_elements: usize,
    pub mode: Option<Mode>,
}

fn default_max_orbit() -> usize {
    10_000
}

fn default_max_elements() -> usize {
    100_000
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_orbit: default_max_orbit(),
            max_elements: default_max_elements(),
            mode: None,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetBlock {
    pub carrier_size: usize,
    pub seeds: Vec<Vec<usize>>,
    #[serde(default)]
    pub gamma: Vec<Vec<usize>>,
}

/// Used for both `group` and `galois`: the ambient group by generators, each
/// seed subgroup by generators, and Γ either explicit or `"inner"`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupBlock {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
    pub seeds: Vec<Vec<Vec<usize>>>,
    /// Absent means trivial Γ.
    pub gamma: Option<Gamma>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum Gamma {
    Inner(InnerTag),
    Explicit(Vec<Vec<usize>>),
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InnerTag {
    Inner,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorBlock {
    pub p: u32,
    pub dim: usize,
    /// Each seed is a list of spanning rows.
    pub seeds: Vec<Vec<Vec<u32>>>,
    #[serde(default)]
    pub gamma: Vec<Vec<Vec<u32>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbstractBlock {
    pub size: usize,
    pub meet: Vec<Vec<usize>>,
    pub family: Vec<usize>,
    /// `delta[s][a]` as a coordinate list: all integers, or all rationals in `[0, 1]`.
    pub delta: Vec<Vec<Vec<WireNumber>>>,
    /// Common bound for integer coordinates; defaults to the largest one present.
    pub delta_cap: Option<u64>,
    pub increment: Vec<Vec<usize>>,
    #[serde(default)]
    pub gamma: Vec<Vec<usize>>,
    pub family_action: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricBlock {
    pub points: usize,
    /// Defaults to the discrete metric.
    pub distance: Option<Vec<Vec<WireNumber>>>,
    pub formulas: Vec<FormulaBlock>,
    pub group: Option<GroupTableBlock>,
    pub vector: Option<VectorTableBlock>,
    pub query: Query,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormulaBlock {
    pub name: String,
    /// `values[x][a]`.
    pub values: Vec<Vec<WireNumber>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupTableBlock {
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorTableBlock {
    pub p: u32,
    pub coords: Vec<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Set,
    Group,
    Vector,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Query {
    pub form: Form,
    pub subset: Vec<usize>,
    #[serde(default)]
    pub parameter: usize,
    pub gamma: Option<Vec<usize>>,
    pub n_max: Option<usize>,
}

/// An integer or a `[num, den]` pair.
#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(untagged)]
pub enum WireNumber {
    Int(i64),
    Pair([i64; 2]),
}

impl WireNumber {
    pub fn to_rational(self) -> Result<Rational, String> {
        match self {
            WireNumber::Int(n) => Ok(Rational::from_integer(n)),
            WireNumber::Pair([_, 0]) => Err("rational with zero denominator".into()),
            WireNumber::Pair([n, d]) => Ok(Rational::new(n, d)),
        }
    }
}
