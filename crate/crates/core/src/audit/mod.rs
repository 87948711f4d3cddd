//! Exhaustive sweeps over finite parameter ranges. Each sweep reports every
//! tuple where a claimed check fails; an empty violation list means success.

mod appendix;
mod coverage;
mod needformain;
mod oracle;
mod t_choice;

use std::time::Duration;

use serde::Serialize;

use crate::json::dec;
use crate::numerics::{Instance, MAX_PARAM};
use crate::reduction::{Rejection, RuleCheck, SearchOptions};

pub use appendix::{appendix_genus_bound, appendix_tuples, audit_appendix};
pub use coverage::{audit_coverage, coverage_tuples};
pub use needformain::{audit_cor_needformain, needformain_checks, Triple};
pub use oracle::brute_force_guarantee;
pub use t_choice::{audit_t_choice, closed_form_t, t_choice_checks, t_choice_hypothesis};

/// Bounds of a sweep. Audits that enumerate their own degrees or genera use
/// `d_max` and `g_max` as filters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepRange {
    #[serde(with = "dec")]
    pub r_min: i64,
    #[serde(with = "dec")]
    pub r_max: i64,
    #[serde(with = "dec")]
    pub d_max: i64,
    #[serde(with = "dec")]
    pub g_max: i64,
    #[serde(with = "dec::option", skip_serializing_if = "Option::is_none")]
    pub n_max: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RangeError {
    #[error("r_min = {0} is below 5")]
    RMinTooSmall(i64),
    #[error("{name} = {max} is below its minimum {min}")]
    Empty { name: &'static str, min: i64, max: i64 },
    #[error("{name} = {value} exceeds {MAX_PARAM}")]
    TooLarge { name: &'static str, value: i64 },
}

impl SweepRange {
    pub fn appendix() -> Self {
        SweepRange {
            r_min: 5,
            r_max: 39,
            d_max: MAX_PARAM,
            g_max: MAX_PARAM,
            n_max: None,
        }
    }

    pub fn t_choice() -> Self {
        SweepRange {
            r_min: 5,
            r_max: 39,
            d_max: 1000,
            g_max: 1000,
            n_max: None,
        }
    }

    pub fn needformain() -> Self {
        SweepRange {
            r_min: 5,
            r_max: 39,
            d_max: 10_000,
            g_max: 12_000,
            n_max: None,
        }
    }

    pub fn validate(&self) -> Result<(), RangeError> {
        if self.r_min < 5 {
            return Err(RangeError::RMinTooSmall(self.r_min));
        }
        let mut bounds = vec![("r_max", self.r_min, self.r_max), ("d_max", 0, self.d_max), ("g_max", 0, self.g_max)];
        if let Some(n) = self.n_max {
            bounds.push(("n_max", 0, n));
        }
        for (name, min, max) in bounds {
            if max < min {
                return Err(RangeError::Empty { name, min, max });
            }
            if max > MAX_PARAM {
                return Err(RangeError::TooLarge { name, value: max });
            }
        }
        Ok(())
    }
}

/// What went wrong at a violating tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Detail {
    Rejection(Rejection),
    Check(RuleCheck),
    Message(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub instance: Instance,
    pub stage: &'static str,
    pub detail: Detail,
}

impl Violation {
    fn sort_key(&self) -> (i64, i64, i64, i64, &'static str) {
        let Instance { d, g, r, n } = self.instance;
        (r, g, n, d, self.stage)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub range: SweepRange,
    #[serde(serialize_with = "count")]
    pub tuples_checked: u64,
    pub violations: Vec<Violation>,
    /// Tuples the needformain bookkeeping sets aside for separate treatment.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub excluded_cases: Option<Vec<Triple>>,
    #[serde(skip)]
    pub elapsed: Duration,
}

fn count<S: serde::Serializer>(value: &u64, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

impl SweepReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        crate::json::to_canonical(self)
    }

    /// One line of summary, e.g. `checked 42484 tuples, 0 violations`.
    pub fn summary(&self) -> String {
        format!(
            "checked {} tuples, {} violations",
            self.tuples_checked,
            self.violations.len()
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AuditOptions {
    /// Worker threads; 0 means one per available core, 1 runs serially.
    pub jobs: usize,
    pub search: SearchOptions,
}

/// Per-chunk result, merged after the scan.
#[derive(Debug, Default)]
struct Tally {
    checked: u64,
    violations: Vec<Violation>,
}

impl Tally {
    fn fail(&mut self, instance: Instance, stage: &'static str, detail: Detail) {
        self.violations.push(Violation { instance, stage, detail });
    }

    fn merge(tallies: impl IntoIterator<Item = Tally>) -> Tally {
        let mut all = Tally::default();
        for t in tallies {
            all.checked += t.checked;
            all.violations.extend(t.violations);
        }
        all.violations.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        all
    }

    fn report(self, range: SweepRange, elapsed: Duration) -> SweepReport {
        SweepReport {
            range,
            tuples_checked: self.checked,
            violations: self.violations,
            excluded_cases: None,
            elapsed,
        }
    }
}

/// Maps `f` over independent chunks, in parallel unless `jobs == 1`. Output
/// order matches `chunks`.
fn map_chunks<C, R, F>(chunks: &[C], jobs: usize, f: F) -> Vec<R>
where
    C: Sync,
    R: Send,
    F: Fn(&C) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if jobs != 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        return pool.install(|| chunks.par_iter().map(&f).collect());
    }
    let _ = jobs;
    chunks.iter().map(f).collect()
}
