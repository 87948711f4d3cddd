//! Inductive reductions between tuples, encoded as rewrite rules whose
//! hypotheses are checked and recorded, plus a search that chains them into
//! replayable certificates.

mod certificate;
mod rules;
mod search;

use std::borrow::Cow;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::json::dec;
use crate::numerics::Instance;

pub use certificate::{verify_certificate, Certificate, VerifyError};
pub use rules::{
    rule_add_can, rule_add_half, rule_add_line, rule_descend_degree, rule_exc_good, rule_glue,
    wh_parameters, GlueSplit, Step, WhParameters,
};
pub use search::{
    decide_excellent, decide_good, lemma_wh_reduction, minimal_degree, DecideError, GoodSearch, SearchOptions,
    DEFAULT_DEPTH_LIMIT,
};

/// What a certificate node asserts about its instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Claim {
    /// The general hyperplane section contains `d - n` general points.
    Good,
    /// `N_f(-D)` satisfies interpolation for `D` of degree `d - n` in a hyperplane section.
    Excellent,
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Claim::Good => "good",
            Claim::Excellent => "excellent",
        })
    }
}

/// How the gluing rule reads the `n` in its second hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GlueReading {
    /// `n` is the excellent summand's `n2`; this is what the Euler characteristic
    /// count of the glued component requires.
    #[default]
    SecondSummand,
    /// `n` is the glued tuple's `n1 + n2`, the literal printed form.
    Combined,
}

impl GlueReading {
    pub fn as_str(self) -> &'static str {
        match self {
            GlueReading::SecondSummand => "n2",
            GlueReading::Combined => "n1+n2",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "n2" => Some(GlueReading::SecondSummand),
            "n1+n2" => Some(GlueReading::Combined),
            _ => None,
        }
    }
}

/// One reduction step or base case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Leaf: the base excellence criterion.
    BaseExcellent,
    /// Leaf: interpolation for the twist, i.e. `n = 0` excellence.
    ThmMain1Excellent,
    /// Excellent implies good.
    ExcellentImpliesGood,
    /// Attach a canonical curve in a second hyperplane.
    AddCan,
    /// Attach a rational curve of degree `ceil((r - 2) / 2)`.
    AddHalf,
    /// Attach a 2-secant line.
    AddLine,
    /// Goodness propagates from degree `d - steps` up to degree `d`.
    DescendDegree { steps: i64 },
    /// Good from excellent after peeling off a rational curve of degree `b`.
    ExcGood { b: i64 },
    /// Glue a good curve and an excellent curve along `k` points.
    Glue(GlueSplit),
    /// The fixed AddHalf/AddLine/ExcGood recipe with the given step counts.
    LemmaWh { x: i64, y: i64, z: i64 },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::BaseExcellent => "base-excellent",
            Rule::ThmMain1Excellent => "thm-main-1-excellent",
            Rule::ExcellentImpliesGood => "excellent-implies-good",
            Rule::AddCan => "add-can",
            Rule::AddHalf => "add-half",
            Rule::AddLine => "add-line",
            Rule::DescendDegree { .. } => "descend-degree",
            Rule::ExcGood { .. } => "exc-good",
            Rule::Glue(_) => "glue",
            Rule::LemmaWh { .. } => "lemma-wh",
        }
    }

    /// The claim a node using this rule establishes.
    pub fn claim(&self) -> Claim {
        match self {
            Rule::BaseExcellent | Rule::ThmMain1Excellent => Claim::Excellent,
            _ => Claim::Good,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Rule::BaseExcellent | Rule::ThmMain1Excellent)
    }

    /// Rule parameters in their canonical order.
    pub fn params(&self) -> Vec<(&'static str, String)> {
        match *self {
            Rule::DescendDegree { steps } => vec![("steps", steps.to_string())],
            Rule::ExcGood { b } => vec![("b", b.to_string())],
            Rule::LemmaWh { x, y, z } => vec![
                ("x", x.to_string()),
                ("y", y.to_string()),
                ("z", z.to_string()),
            ],
            Rule::Glue(s) => vec![
                ("d1", s.d1.to_string()),
                ("g1", s.g1.to_string()),
                ("n1", s.n1.to_string()),
                ("d2", s.d2.to_string()),
                ("g2", s.g2.to_string()),
                ("n2", s.n2.to_string()),
                ("k", s.k.to_string()),
                ("reading", s.reading.as_str().to_string()),
            ],
            _ => Vec::new(),
        }
    }

    /// Inverse of [`Rule::name`] and [`Rule::params`].
    pub fn from_parts(name: &str, params: &dyn Fn(&str) -> Option<String>) -> Result<Rule, String> {
        let int = |key: &str| -> Result<i64, String> {
            let text = params(key).ok_or_else(|| format!("rule {name} is missing parameter {key}"))?;
            dec::parse(&text)
        };
        Ok(match name {
            "base-excellent" => Rule::BaseExcellent,
            "thm-main-1-excellent" => Rule::ThmMain1Excellent,
            "excellent-implies-good" => Rule::ExcellentImpliesGood,
            "add-can" => Rule::AddCan,
            "add-half" => Rule::AddHalf,
            "add-line" => Rule::AddLine,
            "descend-degree" => Rule::DescendDegree { steps: int("steps")? },
            "exc-good" => Rule::ExcGood { b: int("b")? },
            "lemma-wh" => Rule::LemmaWh {
                x: int("x")?,
                y: int("y")?,
                z: int("z")?,
            },
            "glue" => {
                let reading = params("reading").ok_or("rule glue is missing parameter reading")?;
                Rule::Glue(GlueSplit {
                    d1: int("d1")?,
                    g1: int("g1")?,
                    n1: int("n1")?,
                    d2: int("d2")?,
                    g2: int("g2")?,
                    n2: int("n2")?,
                    k: int("k")?,
                    reading: GlueReading::parse(&reading)
                        .ok_or_else(|| format!("unknown glue reading {reading:?}"))?,
                })
            }
            other => return Err(format!("unknown rule {other:?}")),
        })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        let params = self.params();
        if !params.is_empty() {
            let body: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", body.join(", "))?;
        }
        Ok(())
    }
}

/// Comparator of a recorded hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cmp {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
    /// `lhs` is the index of the tuple in an excluded list (or -1 when absent)
    /// and `rhs` is the list's length.
    #[serde(rename = "not-in")]
    NotIn,
}

impl Cmp {
    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Cmp::Le => lhs <= rhs,
            Cmp::Lt => lhs < rhs,
            Cmp::Ge => lhs >= rhs,
            Cmp::Gt => lhs > rhs,
            Cmp::Eq => lhs == rhs,
            Cmp::Ne => lhs != rhs,
            Cmp::NotIn => !(0..rhs).contains(&lhs),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Le => "<=",
            Cmp::Lt => "<",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
            Cmp::Eq => "=",
            Cmp::Ne => "!=",
            Cmp::NotIn => "not-in",
        }
    }
}

/// One evaluated hypothesis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleCheck {
    pub name: Cow<'static, str>,
    #[serde(with = "dec")]
    pub lhs: i64,
    #[serde(with = "dec")]
    pub rhs: i64,
    pub cmp: Cmp,
    pub ok: bool,
}

impl RuleCheck {
    pub fn new(name: impl Into<Cow<'static, str>>, lhs: i64, cmp: Cmp, rhs: i64) -> Self {
        RuleCheck {
            name: name.into(),
            lhs,
            rhs,
            cmp,
            ok: cmp.holds(lhs, rhs),
        }
    }

    /// Membership check of `item` against `list`, stored as an index witness.
    pub fn not_in<T: PartialEq>(name: impl Into<Cow<'static, str>>, item: &T, list: &[T]) -> Self {
        let index = list.iter().position(|x| x == item).map_or(-1, |i| i as i64);
        RuleCheck::new(name, index, Cmp::NotIn, list.len() as i64)
    }
}

impl fmt::Display for RuleCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {} {} [{}]",
            self.name,
            self.lhs,
            self.cmp.symbol(),
            self.rhs,
            if self.ok { "ok" } else { "FAILED" }
        )
    }
}

/// A rule that does not apply, with the first hypothesis that failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub instance: Instance,
    pub rule: &'static str,
    pub check: RuleCheck,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rejected at {}: {}", self.rule, self.instance, self.check)
    }
}

impl std::error::Error for Rejection {}
