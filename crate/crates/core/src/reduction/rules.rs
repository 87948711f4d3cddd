use crate::numerics::{half_step, main_1_slack, rho, Instance, BASE_EXCLUDED};

use super::{Claim, Cmp, GlueReading, Rejection, Rule, RuleCheck};

/// Result of applying a rule: every hypothesis it checked, and the sub-claims
/// it reduces to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub checks: Vec<RuleCheck>,
    pub children: Vec<(Claim, Instance)>,
}

/// Auxiliary integers of the gluing rule: a good piece `(d1, g1, n1)` and an
/// excellent piece `(d2, g2, n2)` meeting in `k` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GlueSplit {
    pub d1: i64,
    pub g1: i64,
    pub n1: i64,
    pub d2: i64,
    pub g2: i64,
    pub n2: i64,
    pub k: i64,
    pub reading: GlueReading,
}

impl GlueSplit {
    /// The `n` in the second gluing hypothesis under this split's reading.
    pub fn pinned_n(&self) -> i64 {
        match self.reading {
            GlueReading::SecondSummand => self.n2,
            GlueReading::Combined => self.n1 + self.n2,
        }
    }
}

struct Checker {
    rule: &'static str,
    inst: Instance,
    checks: Vec<RuleCheck>,
}

impl Checker {
    fn new(rule: &Rule, inst: Instance) -> Self {
        Checker {
            rule: rule.name(),
            inst,
            checks: Vec::with_capacity(8),
        }
    }

    fn push(&mut self, check: RuleCheck) -> Result<(), Rejection> {
        if !check.ok {
            return Err(Rejection {
                instance: self.inst,
                rule: self.rule,
                check,
            });
        }
        self.checks.push(check);
        Ok(())
    }

    fn cmp(&mut self, name: &'static str, lhs: i64, cmp: Cmp, rhs: i64) -> Result<(), Rejection> {
        self.push(RuleCheck::new(name, lhs, cmp, rhs))
    }

    /// `n <= d`, `rho >= 0`, `r >= 5`: the standing assumptions for goodness reductions.
    fn standing(&mut self) -> Result<(), Rejection> {
        let Instance { d, r, n, .. } = self.inst;
        self.cmp("r >= 5", r, Cmp::Ge, 5)?;
        self.cmp("n <= d", n, Cmp::Le, d)?;
        self.cmp("rho >= 0", self.inst.rho(), Cmp::Ge, 0)
    }

    fn done(self, children: Vec<(Claim, Instance)>) -> Step {
        Step {
            checks: self.checks,
            children,
        }
    }
}

/// The step counts of the fixed AddHalf/AddLine/ExcGood recipe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WhParameters {
    pub a: i64,
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

pub fn wh_parameters(inst: &Instance) -> WhParameters {
    let Instance { d, g, r, n } = *inst;
    // Meaningless below r = 5, where the rule rejects anyway.
    let a = half_step(r).max(1);
    let x = (g / (a + 1)).min(n / a);
    let y = (g - (a + 1) * x).min(n - a * x);
    let z = (g - (a + 1) * x - y).min(d - n).min(10);
    WhParameters { a, x, y, z }
}

/// Right-hand side of the small-genus hypothesis of the recipe, before dividing by `r - 1`.
pub(crate) fn wh_genus_threshold(r: i64, n: i64, constant: i64) -> i64 {
    let a = half_step(r).max(1);
    (5 * r - 7) * n - (2 * r * r - 9 * r + 9) * (n / a) - 4 * r * r + 94 * r - constant
}

impl Rule {
    /// Evaluates this rule's hypotheses on `inst` in order. On success returns
    /// all checks and the child claims; otherwise the first failed check.
    pub fn apply(&self, inst: &Instance) -> Result<Step, Rejection> {
        let mut c = Checker::new(self, *inst);
        let Instance { d, g, r, n } = *inst;
        let rho_here = inst.rho();
        match *self {
            Rule::BaseExcellent => {
                c.cmp("n <= d", n, Cmp::Le, d)?;
                c.cmp("rho >= 0", rho_here, Cmp::Ge, 0)?;
                c.cmp("d >= g + r", d, Cmp::Ge, g + r)?;
                c.push(RuleCheck::not_in("(d, g, r) not in base exclusions", &(d, g, r), &BASE_EXCLUDED))?;
                c.cmp("2d + (r-1)n >= (2r-4)g - r + 3", 2 * d + (r - 1) * n, Cmp::Ge, (2 * r - 4) * g - r + 3)?;
                Ok(c.done(Vec::new()))
            }
            Rule::ThmMain1Excellent => {
                c.cmp("r >= 5", r, Cmp::Ge, 5)?;
                c.cmp("n = 0", n, Cmp::Eq, 0)?;
                c.cmp("rho >= 0", rho_here, Cmp::Ge, 0)?;
                c.cmp("(2r-3)d - (r-2)^2 g - 2r^2 + 3r - 9 >= 0", main_1_slack(d, g, r), Cmp::Ge, 0)?;
                Ok(c.done(Vec::new()))
            }
            Rule::ExcellentImpliesGood => {
                c.cmp("n <= d", n, Cmp::Le, d)?;
                c.cmp("rho >= 0", rho_here, Cmp::Ge, 0)?;
                Ok(c.done(vec![(Claim::Excellent, *inst)]))
            }
            Rule::AddCan => {
                c.standing()?;
                c.cmp("n <= d - 4", n, Cmp::Le, d - 4)?;
                if r == 5 {
                    c.cmp("g > 2r (r = 5)", g, Cmp::Gt, 2 * r)?;
                } else {
                    c.cmp("g >= 2r", g, Cmp::Ge, 2 * r)?;
                }
                c.cmp("n >= 2r - 6", n, Cmp::Ge, 2 * r - 6)?;
                let g_child = if r == 5 { g - 11 } else { g - 2 * r };
                let child = Instance {
                    d: d - 2 * r + 2,
                    g: g_child,
                    r,
                    n: n - 2 * r + 6,
                };
                Ok(c.done(vec![(Claim::Good, child)]))
            }
            Rule::AddHalf => {
                c.standing()?;
                let a = half_step(r);
                c.cmp("g >= a + 1", g, Cmp::Ge, a + 1)?;
                c.cmp("n >= a", n, Cmp::Ge, a)?;
                let child = Instance {
                    d: d - a,
                    g: g - a - 1,
                    r,
                    n: n - a,
                };
                Ok(c.done(vec![(Claim::Good, child)]))
            }
            Rule::AddLine => {
                c.standing()?;
                c.cmp("g >= 1", g, Cmp::Ge, 1)?;
                c.cmp("n >= 1", n, Cmp::Ge, 1)?;
                c.cmp("rho >= 1", rho_here, Cmp::Ge, 1)?;
                let child = Instance {
                    d: d - 1,
                    g: g - 1,
                    r,
                    n: n - 1,
                };
                Ok(c.done(vec![(Claim::Good, child)]))
            }
            Rule::DescendDegree { steps } => {
                c.standing()?;
                c.cmp("steps >= 1", steps, Cmp::Ge, 1)?;
                c.cmp("n <= d - steps", n, Cmp::Le, d - steps)?;
                c.cmp("rho(d - steps, g, r) >= 0", rho(d - steps, g, r), Cmp::Ge, 0)?;
                let child = Instance { d: d - steps, ..*inst };
                Ok(c.done(vec![(Claim::Good, child)]))
            }
            Rule::ExcGood { b } => {
                c.standing()?;
                c.cmp("b >= 0", b, Cmp::Ge, 0)?;
                c.cmp("b <= d - n", b, Cmp::Le, d - n)?;
                c.cmp("b <= g", b, Cmp::Le, g)?;
                c.cmp("rho >= b", rho_here, Cmp::Ge, b)?;
                c.cmp(
                    "2d + (r-1)n - (r-3)g - 4b - 2 >= 0",
                    2 * d + (r - 1) * n - (r - 3) * g - 4 * b - 2,
                    Cmp::Ge,
                    0,
                )?;
                let child = Instance {
                    d: d - b,
                    g: g - b,
                    ..*inst
                };
                Ok(c.done(vec![(Claim::Excellent, child)]))
            }
            Rule::Glue(s) => {
                c.standing()?;
                c.cmp("k >= 1", s.k, Cmp::Ge, 1)?;
                c.cmp("d = d1 + d2", d, Cmp::Eq, s.d1 + s.d2)?;
                c.cmp("g = g1 + g2 + k - 1", g, Cmp::Eq, s.g1 + s.g2 + s.k - 1)?;
                c.cmp("n = n1 + n2", n, Cmp::Eq, s.n1 + s.n2)?;
                c.cmp("g1 >= 0", s.g1, Cmp::Ge, 0)?;
                c.cmp("n1 >= 0", s.n1, Cmp::Ge, 0)?;
                c.cmp("n1 <= d1", s.n1, Cmp::Le, s.d1)?;
                c.cmp("rho(d1, g1, r) >= 0", rho(s.d1, s.g1, r), Cmp::Ge, 0)?;
                c.cmp("g2 >= 0", s.g2, Cmp::Ge, 0)?;
                c.cmp("n2 >= 0", s.n2, Cmp::Ge, 0)?;
                c.cmp("n2 <= d2", s.n2, Cmp::Le, s.d2)?;
                c.cmp("rho(d2, g2, r) >= 0", rho(s.d2, s.g2, r), Cmp::Ge, 0)?;
                c.cmp("(r+1)d1 - r g1 + r >= rk", (r + 1) * s.d1 - r * s.g1 + r, Cmp::Ge, r * s.k)?;
                let name = match s.reading {
                    GlueReading::SecondSummand => "2d2 - (r-3)(g2-1) >= (r-1)(k - n2)",
                    GlueReading::Combined => "2d2 - (r-3)(g2-1) >= (r-1)(k - n1 - n2)",
                };
                c.cmp(name, 2 * s.d2 - (r - 3) * (s.g2 - 1), Cmp::Ge, (r - 1) * (s.k - s.pinned_n()))?;
                let good = Instance {
                    d: s.d1,
                    g: s.g1,
                    r,
                    n: s.n1,
                };
                let excellent = Instance {
                    d: s.d2,
                    g: s.g2,
                    r,
                    n: s.n2,
                };
                Ok(c.done(vec![(Claim::Good, good), (Claim::Excellent, excellent)]))
            }
            Rule::LemmaWh { x, y, z } => {
                c.standing()?;
                c.cmp("hyperplane hypothesis slack >= 0", inst.main_1s_slack(), Cmp::Ge, 0)?;
                let strict = r >= 6;
                let genus_small = if strict { g < 2 * r } else { g <= 2 * r };
                if genus_small {
                    let cmp = if strict { Cmp::Lt } else { Cmp::Le };
                    c.cmp("g <= 2r (strict for r >= 6) or n <= 2r - 7", g, cmp, 2 * r)?;
                } else {
                    c.cmp("g <= 2r (strict for r >= 6) or n <= 2r - 7", n, Cmp::Le, 2 * r - 7)?;
                }
                if r <= 39 {
                    c.cmp(
                        "(r-1)g >= (5r-7)n - (2r^2-9r+9)floor(n/a) - 4r^2 + 94r - 150",
                        (r - 1) * g,
                        Cmp::Ge,
                        wh_genus_threshold(r, n, 150),
                    )?;
                } else {
                    c.cmp("r > 39", r, Cmp::Gt, 39)?;
                }
                let p = wh_parameters(inst);
                let a = p.a;
                c.cmp("x = min(floor(g/(a+1)), floor(n/a))", x, Cmp::Eq, p.x)?;
                c.cmp("y = min(g - (a+1)x, n - ax)", y, Cmp::Eq, p.y)?;
                c.cmp("z = min(g - (a+1)x - y, d - n, 10)", z, Cmp::Eq, p.z)?;
                c.cmp(
                    "rho(d - ax, g - (a+1)x, r) >= y + z",
                    rho(d - a * x, g - (a + 1) * x, r),
                    Cmp::Ge,
                    y + z,
                )?;
                c.cmp(
                    "2(d-ax-y) + (r-1)(n-ax-y) - (r-3)(g-(a+1)x-y) - 4z - 2 >= 0",
                    2 * (d - a * x - y) + (r - 1) * (n - a * x - y) - (r - 3) * (g - (a + 1) * x - y) - 4 * z - 2,
                    Cmp::Ge,
                    0,
                )?;
                Ok(c.done(vec![(Claim::Good, *inst)]))
            }
        }
    }
}

fn single_child(rule: Rule, inst: &Instance) -> Result<Instance, Rejection> {
    let step = rule.apply(inst)?;
    Ok(step.children[0].1)
}

/// Reduces a goodness claim by attaching a canonical curve.
pub fn rule_add_can(inst: &Instance) -> Result<Instance, Rejection> {
    single_child(Rule::AddCan, inst)
}

pub fn rule_add_half(inst: &Instance) -> Result<Instance, Rejection> {
    single_child(Rule::AddHalf, inst)
}

pub fn rule_add_line(inst: &Instance) -> Result<Instance, Rejection> {
    single_child(Rule::AddLine, inst)
}

/// One step of degree descent: `(d, g, r, n)` is good if `(d - 1, g, r, n)` is.
pub fn rule_descend_degree(inst: &Instance) -> Result<Instance, Rejection> {
    single_child(Rule::DescendDegree { steps: 1 }, inst)
}

/// The excellent instance that makes `inst` good through a degree-`b` rational curve.
pub fn rule_exc_good(inst: &Instance, b: i64) -> Result<Instance, Rejection> {
    single_child(Rule::ExcGood { b }, inst)
}

/// Returns the good and the excellent piece of a gluing.
pub fn rule_glue(inst: &Instance, split: GlueSplit) -> Result<(Instance, Instance), Rejection> {
    let step = Rule::Glue(split).apply(inst)?;
    Ok((step.children[0].1, step.children[1].1))
}
