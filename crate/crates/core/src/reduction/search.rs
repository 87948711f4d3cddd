use std::collections::HashMap;

use num_integer::Integer;

use crate::numerics::{
    base_excellent, half_step, main_1_slack, main_1s_condition, rho, Instance,
};

use super::rules::{wh_parameters, GlueSplit};
use super::{Certificate, Claim, Cmp, GlueReading, Rejection, Rule, RuleCheck};

pub const DEFAULT_DEPTH_LIMIT: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum nesting of recursive sub-decisions.
    pub depth_limit: usize,
    pub glue_reading: GlueReading,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            depth_limit: DEFAULT_DEPTH_LIMIT,
            glue_reading: GlueReading::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecideError {
    #[error("r = {r} is out of scope: decisions are only made for r >= 5")]
    OutOfScope { r: i64 },
    #[error("{0}")]
    Domain(String),
    #[error("not established: {0}")]
    Rejected(Rejection),
    #[error("search depth limit {limit} exceeded")]
    DepthExceeded { limit: usize },
}

fn check_domain(inst: &Instance) -> Result<(), DecideError> {
    if inst.n > inst.d {
        return Err(DecideError::Domain(format!("n = {} exceeds d = {}", inst.n, inst.d)));
    }
    if inst.rho() < 0 {
        return Err(DecideError::Domain(format!("rho{} = {} is negative", inst, inst.rho())));
    }
    Ok(())
}

fn excellent_pred(d: i64, g: i64, r: i64, n: i64) -> bool {
    base_excellent(d, g, r, n) || (r >= 5 && n == 0 && rho(d, g, r) >= 0 && main_1_slack(d, g, r) >= 0)
}

/// An excellence leaf, or the base criterion's first failed check.
fn excellent_leaf(inst: &Instance) -> Result<Certificate, Rejection> {
    match Certificate::derive(Rule::BaseExcellent, *inst, Vec::new()) {
        Ok(leaf) => Ok(leaf),
        Err(base) if inst.r >= 5 => {
            Certificate::derive(Rule::ThmMain1Excellent, *inst, Vec::new()).map_err(|_| base)
        }
        Err(base) => Err(base),
    }
}

/// Certifies excellence by one of the two base cases. Sound but incomplete.
pub fn decide_excellent(inst: &Instance) -> Result<Certificate, DecideError> {
    check_domain(inst)?;
    excellent_leaf(inst).map_err(|rej| {
        let twist_would_apply = inst.n == 0 && main_1_slack(inst.d, inst.g, inst.r) >= 0;
        if inst.r < 5 && twist_would_apply {
            DecideError::OutOfScope { r: inst.r }
        } else {
            DecideError::Rejected(rej)
        }
    })
}

/// `x` AddHalf steps, `y` AddLine steps, ExcGood(`b`), and an excellence leaf.
fn chain(inst: &Instance, x: i64, y: i64, b: i64) -> Result<Certificate, Rejection> {
    let mut rules = Vec::with_capacity((x + y + 1) as usize);
    rules.extend(std::iter::repeat_n(Rule::AddHalf, x as usize));
    rules.extend(std::iter::repeat_n(Rule::AddLine, y as usize));
    rules.push(Rule::ExcGood { b });

    let mut path = Vec::with_capacity(rules.len());
    let mut current = *inst;
    for rule in rules {
        let step = rule.apply(&current)?;
        path.push((rule, current));
        current = step.children[0].1;
    }
    let mut cert = excellent_leaf(&current)?;
    for (rule, at) in path.into_iter().rev() {
        cert = Certificate::derive(rule, at, vec![cert])?;
    }
    Ok(cert)
}

/// The fixed reduction recipe: with `a = ceil((r - 2)/2)`, apply AddHalf
/// `x = min(floor(g/(a+1)), floor(n/a))` times, AddLine
/// `y = min(g - (a+1)x, n - ax)` times, then ExcGood with
/// `b = z = min(g - (a+1)x - y, d - n, 10)`, and certify the result excellent.
///
/// Requires the hyperplane-section hypothesis and the recipe's small-genus
/// hypotheses; the root node records them together with both enabling
/// inequalities.
pub fn lemma_wh_reduction(inst: &Instance) -> Result<Certificate, Rejection> {
    let p = wh_parameters(inst);
    let rule = Rule::LemmaWh { x: p.x, y: p.y, z: p.z };
    rule.apply(inst)?;
    let expanded = chain(inst, p.x, p.y, p.z)?;
    Certificate::derive(rule, *inst, vec![expanded])
}

/// Smallest `d` with `n <= d`, `rho(d, g, r) >= 0` and the hyperplane-section
/// hypothesis, for `r >= 5`.
pub fn minimal_degree(g: i64, r: i64, n: i64) -> i64 {
    let for_rho = Integer::div_ceil(&(r * g + r * (r + 1)), &(r + 1));
    let for_slack = Integer::div_ceil(&((r - 2) * (r - 2) * (g - n) + 2 * r * r - 3 * r + 9), &(2 * r - 3)) - 1;
    n.max(for_rho).max(for_slack)
}

/// How a good instance was established; certificates are built from these
/// once the search succeeds.
#[derive(Debug, Clone, Copy)]
enum Plan {
    Excellent,
    Recipe,
    Chain { x: i64, y: i64, b: i64 },
    /// A rule whose good children all have plans of their own.
    Step(Rule),
}

/// A goodness search that remembers every instance it has settled, so
/// repeated decisions over related tuples share work.
///
/// Each instance's outcome depends only on the instance, since every
/// recursive step lowers `d`. The one exception is the depth limit: an
/// instance settled earlier is not re-explored, so a shared search may
/// succeed where a fresh one would exceed its limit.
#[derive(Debug)]
pub struct GoodSearch {
    opts: SearchOptions,
    plans: HashMap<Instance, Option<Plan>>,
}

impl GoodSearch {
    pub fn new(opts: SearchOptions) -> Self {
        GoodSearch {
            opts,
            plans: HashMap::new(),
        }
    }

    /// Searches for a goodness certificate. Strategies, in order: an
    /// excellence leaf; the fixed reduction recipe; AddCan; degree descent to
    /// the minimal degree meeting the hypotheses; any AddHalf/AddLine/ExcGood
    /// chain; a single AddHalf or AddLine step followed by a recursive search;
    /// gluing.
    ///
    /// Sound but incomplete: a rejection is not a disproof.
    pub fn decide(&mut self, inst: &Instance) -> Result<Certificate, DecideError> {
        if inst.r < 5 {
            return Err(DecideError::OutOfScope { r: inst.r });
        }
        check_domain(inst)?;
        if self.opts.depth_limit == 0 {
            return Err(DecideError::Domain("depth limit must be positive".into()));
        }
        if self.good(inst, 0)? {
            return Ok(self.build(inst));
        }
        Err(DecideError::Rejected(match lemma_wh_reduction(inst) {
            Err(rej) => rej,
            Ok(_) => Rejection {
                instance: *inst,
                rule: "search",
                check: RuleCheck::new("certificate found", 0, Cmp::Eq, 1),
            },
        }))
    }

    fn good(&mut self, inst: &Instance, depth: usize) -> Result<bool, DecideError> {
        if depth > self.opts.depth_limit {
            return Err(DecideError::DepthExceeded {
                limit: self.opts.depth_limit,
            });
        }
        if let Some(known) = self.plans.get(inst) {
            return Ok(known.is_some());
        }
        let plan = self.search(inst, depth)?;
        self.plans.insert(*inst, plan);
        Ok(plan.is_some())
    }

    fn search(&mut self, inst: &Instance, depth: usize) -> Result<Option<Plan>, DecideError> {
        if !inst.in_domain() {
            return Ok(None);
        }
        if excellent_pred(inst.d, inst.g, inst.r, inst.n) {
            return Ok(Some(Plan::Excellent));
        }
        if lemma_wh_reduction(inst).is_ok() {
            return Ok(Some(Plan::Recipe));
        }
        if self.single_child(Rule::AddCan, inst, depth)? {
            return Ok(Some(Plan::Step(Rule::AddCan)));
        }
        if main_1s_condition(inst.d, inst.g, inst.r, inst.n) {
            let target = minimal_degree(inst.g, inst.r, inst.n);
            if target < inst.d {
                let rule = Rule::DescendDegree { steps: inst.d - target };
                if self.single_child(rule, inst, depth)? {
                    return Ok(Some(Plan::Step(rule)));
                }
            }
        }
        if let Some((x, y, b)) = chain_search(inst) {
            return Ok(Some(Plan::Chain { x, y, b }));
        }
        for rule in [Rule::AddHalf, Rule::AddLine] {
            if self.single_child(rule, inst, depth)? {
                return Ok(Some(Plan::Step(rule)));
            }
        }
        self.glue_search(inst, depth)
    }

    fn single_child(&mut self, rule: Rule, inst: &Instance, depth: usize) -> Result<bool, DecideError> {
        match rule.apply(inst) {
            Ok(step) => self.good(&step.children[0].1, depth + 1),
            Err(_) => Ok(false),
        }
    }

    /// Splits `inst` into a good piece and an excellent piece, deciding the
    /// good piece recursively. The excellent piece has degree at least `r`,
    /// so the recursion terminates.
    fn glue_search(&mut self, inst: &Instance, depth: usize) -> Result<Option<Plan>, DecideError> {
        let Instance { d, g, r, n } = *inst;
        for d2 in r..=(d - r) {
            let d1 = d - d2;
            for g2 in 0..=g {
                if rho(d2, g2, r) < 0 {
                    break;
                }
                for n2 in 0..=n.min(d2) {
                    let n1 = n - n2;
                    if n1 > d1 || !excellent_pred(d2, g2, r, n2) {
                        continue;
                    }
                    for k in 1..=(g - g2 + 1) {
                        let split = GlueSplit {
                            d1,
                            g1: g - g2 - k + 1,
                            n1,
                            d2,
                            g2,
                            n2,
                            k,
                            reading: self.opts.glue_reading,
                        };
                        if !glue_numerics_hold(r, &split) {
                            continue;
                        }
                        let piece = Instance { d: d1, g: split.g1, r, n: n1 };
                        if self.good(&piece, depth + 1)? && Rule::Glue(split).apply(inst).is_ok() {
                            return Ok(Some(Plan::Step(Rule::Glue(split))));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// Expands the stored plans below a settled instance into a certificate.
    fn build(&self, inst: &Instance) -> Certificate {
        let plan = self.plans[inst].expect("only settled instances are built");
        let built = match plan {
            Plan::Excellent => excellent_leaf(inst)
                .and_then(|leaf| Certificate::derive(Rule::ExcellentImpliesGood, *inst, vec![leaf])),
            Plan::Recipe => lemma_wh_reduction(inst),
            Plan::Chain { x, y, b } => chain(inst, x, y, b),
            Plan::Step(rule) => rule.apply(inst).and_then(|step| {
                let children = step
                    .children
                    .iter()
                    .map(|(claim, child)| match claim {
                        Claim::Good => Ok(self.build(child)),
                        Claim::Excellent => excellent_leaf(child),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Certificate::derive(rule, *inst, children)
            }),
        };
        built.expect("plans replay by construction")
    }
}

fn glue_numerics_hold(r: i64, s: &GlueSplit) -> bool {
    s.g1 >= 0
        && rho(s.d1, s.g1, r) >= 0
        && (r + 1) * s.d1 - r * s.g1 + r >= r * s.k
        && 2 * s.d2 - (r - 3) * (s.g2 - 1) >= (r - 1) * (s.k - s.pinned_n())
}

/// The first AddHalf^x AddLine^y ExcGood(b) chain ending in an excellent
/// tuple, trying the largest `x`, then `y`, then `b` first.
fn chain_search(inst: &Instance) -> Option<(i64, i64, i64)> {
    let Instance { d, g, r, n } = *inst;
    if r < 5 {
        return None;
    }
    let a = half_step(r);
    let x_max = (g / (a + 1)).min(n / a);
    for x in (0..=x_max).rev() {
        let (d1, g1, n1) = (d - a * x, g - (a + 1) * x, n - a * x);
        let rho1 = rho(d1, g1, r);
        let y_max = g1.min(n1).min(rho1);
        for y in (0..=y_max).rev() {
            let (d2, g2, n2) = (d1 - y, g1 - y, n1 - y);
            let b_max = (d2 - n2)
                .min(g2)
                .min(rho1 - y)
                .min(Integer::div_floor(&(2 * d2 + (r - 1) * n2 - (r - 3) * g2 - 2), &4));
            for b in (0..=b_max).rev() {
                if excellent_pred(d2 - b, g2 - b, r, n2) && chain(inst, x, y, b).is_ok() {
                    return Some((x, y, b));
                }
            }
        }
    }
    None
}

/// Searches for a goodness certificate with a fresh [`GoodSearch`].
pub fn decide_good(inst: &Instance, opts: &SearchOptions) -> Result<Certificate, DecideError> {
    GoodSearch::new(*opts).decide(inst)
}
