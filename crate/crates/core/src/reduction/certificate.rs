use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};

use crate::numerics::{Instance, MAX_PARAM};

use super::{Claim, Rejection, Rule, RuleCheck};

/// A derivation tree. Each node records the rule used, the hypotheses it
/// checked, and one child per sub-claim the rule reduces to.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(try_from = "CertificateRepr")]
pub struct Certificate {
    pub claim: Claim,
    pub instance: Instance,
    pub rule: Rule,
    pub checks: Vec<RuleCheck>,
    pub children: Vec<Certificate>,
}

impl Certificate {
    /// Applies `rule` to `instance` and attaches `children`, which must prove
    /// exactly the sub-claims the rule produces.
    pub fn derive(rule: Rule, instance: Instance, children: Vec<Certificate>) -> Result<Self, Rejection> {
        let step = rule.apply(&instance)?;
        debug_assert_eq!(step.children.len(), children.len());
        debug_assert!(step
            .children
            .iter()
            .zip(&children)
            .all(|((claim, inst), c)| *claim == c.claim && *inst == c.instance));
        Ok(Certificate {
            claim: rule.claim(),
            instance,
            rule,
            checks: step.checks,
            children,
        })
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(Certificate::node_count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(Certificate::depth).max().unwrap_or(0)
    }

    /// Rule names along the first-child spine, root first.
    pub fn spine(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut node = Some(self);
        while let Some(n) = node {
            out.push(n.rule.name());
            node = n.children.first();
        }
        out
    }

    /// All nodes in preorder.
    pub fn nodes(&self) -> Vec<&Certificate> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            out.push(node);
            stack.extend(node.children.iter().rev());
        }
        out
    }

    pub fn to_json(&self) -> String {
        crate::json::to_canonical(self)
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let mut de = serde_json::Deserializer::from_str(text);
        de.disable_recursion_limit();
        let cert = Certificate::deserialize(&mut de)?;
        de.end()?;
        Ok(cert)
    }

    /// Indented one-line-per-node rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(self, 0usize)];
        while let Some((node, indent)) = stack.pop() {
            out.push_str(&format!(
                "{:indent$}{} {} by {}\n",
                "",
                node.claim,
                node.instance,
                node.rule,
                indent = indent * 2
            ));
            stack.extend(node.children.iter().rev().map(|c| (c, indent + 1)));
        }
        out
    }
}

struct Params<'a>(&'a [(&'static str, String)]);

impl Serialize for Params<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let params = self.rule.params();
        let mut st = s.serialize_struct("Certificate", 6)?;
        st.serialize_field("claim", &self.claim)?;
        st.serialize_field("instance", &self.instance)?;
        st.serialize_field("rule", self.rule.name())?;
        st.serialize_field("params", &Params(&params))?;
        st.serialize_field("checks", &self.checks)?;
        st.serialize_field("children", &self.children)?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateRepr {
    claim: Claim,
    instance: Instance,
    rule: String,
    params: BTreeMap<String, String>,
    checks: Vec<RuleCheck>,
    children: Vec<Certificate>,
}

impl TryFrom<CertificateRepr> for Certificate {
    type Error = String;

    fn try_from(repr: CertificateRepr) -> Result<Self, String> {
        let rule = Rule::from_parts(&repr.rule, &|k| repr.params.get(k).cloned())?;
        let expected = rule.params().len();
        if repr.params.len() != expected {
            return Err(format!(
                "rule {} takes {expected} parameters, found {}",
                repr.rule,
                repr.params.len()
            ));
        }
        Ok(Certificate {
            claim: repr.claim,
            instance: repr.instance,
            rule,
            checks: repr.checks,
            children: repr.children,
        })
    }
}

/// Why a certificate failed to replay, and where: `path` lists child indices
/// from the root.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct VerifyError {
    pub path: Vec<usize>,
    pub instance: Instance,
    pub reason: String,
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(usize::to_string).collect();
        write!(f, "node [{}] at {}: {}", path.join("."), self.instance, self.reason)
    }
}

fn params_in_range(rule: &Rule) -> bool {
    let within = |v: i64| (-MAX_PARAM..=MAX_PARAM).contains(&v);
    match *rule {
        Rule::DescendDegree { steps } => within(steps),
        Rule::ExcGood { b } => within(b),
        Rule::LemmaWh { x, y, z } => [x, y, z].into_iter().all(within),
        Rule::Glue(s) => [s.d1, s.g1, s.n1, s.d2, s.g2, s.n2, s.k].into_iter().all(within),
        _ => true,
    }
}

/// The chain a recipe node must expand to: `x` AddHalf, `y` AddLine, then ExcGood(`z`).
fn check_recipe_shape(child: &Certificate, x: i64, y: i64, z: i64) -> Result<(), String> {
    let mut node = child;
    let expected = std::iter::repeat_n(Rule::AddHalf, x.max(0) as usize)
        .chain(std::iter::repeat_n(Rule::AddLine, y.max(0) as usize))
        .chain(std::iter::once(Rule::ExcGood { b: z }));
    for (i, rule) in expected.enumerate() {
        if node.rule != rule {
            return Err(format!("recipe step {i} is {} but should be {rule}", node.rule));
        }
        match node.children.first() {
            Some(next) => node = next,
            None => return Err(format!("recipe step {i} has no child")),
        }
    }
    Ok(())
}

/// Replays a certificate from scratch. Stored checks are ignored; every
/// hypothesis and every child instance is recomputed from the node's instance
/// and rule parameters.
pub fn verify_certificate(cert: &Certificate) -> Result<(), VerifyError> {
    let mut stack: Vec<(&Certificate, Vec<usize>)> = vec![(cert, Vec::new())];
    while let Some((node, path)) = stack.pop() {
        let fail = |reason: String| VerifyError {
            path: path.clone(),
            instance: node.instance,
            reason,
        };
        node.instance
            .validate()
            .map_err(|e| fail(format!("invalid instance: {e}")))?;
        if !params_in_range(&node.rule) {
            return Err(fail(format!("rule parameters out of range: {}", node.rule)));
        }
        if node.claim != node.rule.claim() {
            return Err(fail(format!(
                "rule {} establishes {} claims, node claims {}",
                node.rule.name(),
                node.rule.claim(),
                node.claim
            )));
        }
        let step = node
            .rule
            .apply(&node.instance)
            .map_err(|rej| fail(format!("hypothesis failed: {}", rej.check)))?;
        if step.children.len() != node.children.len() {
            return Err(fail(format!(
                "rule {} needs {} children, found {}",
                node.rule.name(),
                step.children.len(),
                node.children.len()
            )));
        }
        for (i, ((claim, inst), child)) in step.children.iter().zip(&node.children).enumerate() {
            if *claim != child.claim || *inst != child.instance {
                return Err(fail(format!(
                    "child {i} should be {claim} {inst}, found {} {}",
                    child.claim, child.instance
                )));
            }
        }
        if let Rule::LemmaWh { x, y, z } = node.rule {
            check_recipe_shape(&node.children[0], x, y, z).map_err(fail)?;
        }
        for (i, child) in node.children.iter().enumerate().rev() {
            let mut child_path = path.clone();
            child_path.push(i);
            stack.push((child, child_path));
        }
    }
    Ok(())
}
