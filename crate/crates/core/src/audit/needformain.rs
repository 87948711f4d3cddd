use std::time::Instant;

use serde::Serialize;

use crate::json::dec;
use crate::numerics::{rho, Instance};
use crate::reduction::{Cmp, RuleCheck};

use super::{map_chunks, AuditOptions, Detail, SweepRange, SweepReport, Tally};

/// A `(d, g, r)` triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Triple {
    #[serde(with = "dec")]
    pub d: i64,
    #[serde(with = "dec")]
    pub g: i64,
    #[serde(with = "dec")]
    pub r: i64,
}

/// The bookkeeping of the reducible-curve degeneration at `(d, g, r)` with
/// `s = g + r - d` and `t = floor(s/2)`, where `deg F = 4t + 2 - s`.
pub fn needformain_checks(d: i64, g: i64, r: i64) -> Vec<RuleCheck> {
    let s = g + r - d;
    let t = s.div_euclid(2);
    let deg_f = 4 * t + 2 - s;
    // (r+1)d - (r-3)(g-1) - 2r, the numerator of the point count before flooring.
    let total = (r + 1) * d - (r - 3) * (g - 1) - 2 * r;
    let budget = num_integer::Integer::div_floor(&total, &(r - 1));
    let e_num = 4 * d - (4 * r - 8) * t + r * r - 6 * r + 1;
    let unfloored = total - (r - 1) * deg_f <= e_num;
    vec![
        RuleCheck::new("s - 1 <= 2t", s - 1, Cmp::Le, 2 * t),
        RuleCheck::new("2t <= r + s + 1", 2 * t, Cmp::Le, r + s + 1),
        RuleCheck::new(
            "r((r-2)t + r - 1) - (r-4)((r-2)t - 1) = (r-2)(r + 2 + 4t)",
            r * ((r - 2) * t + r - 1) - (r - 4) * ((r - 2) * t - 1),
            Cmp::Eq,
            (r - 2) * (r + 2 + 4 * t),
        ),
        RuleCheck::new("deg F + s + r <= r + 2 + 4t", deg_f + s + r, Cmp::Le, r + 2 + 4 * t),
        RuleCheck::new("deg F - s - r <= r", deg_f - s - r, Cmp::Le, r),
        RuleCheck::new(
            "(r+1)(d - (r-2)t - r + 1) - (r-3)(d - (r-2)t - 2r) = 4d - (4r-8)t + r^2 - 6r + 1",
            (r + 1) * (d - (r - 2) * t - r + 1) - (r - 3) * (d - (r - 2) * t - 2 * r),
            Cmp::Eq,
            e_num,
        ),
        RuleCheck::new(
            "(r-1)(floor(point count) - deg F) <= 4d - (4r-8)t + r^2 - 6r + 1",
            (r - 1) * (budget - deg_f),
            Cmp::Le,
            e_num,
        ),
        RuleCheck::new(
            "unfloored bound holds iff 2t >= s - 1",
            i64::from(unfloored),
            Cmp::Eq,
            i64::from(2 * t >= s - 1),
        ),
        RuleCheck::new(
            "genus of C: g + 1 - (r-2)t - s - r = d - (r-2)t - 2r + 1",
            g + 1 - (r - 2) * t - s - r,
            Cmp::Eq,
            d - (r - 2) * t - 2 * r + 1,
        ),
    ]
}

/// Whether `(d, g, r)` falls in the case the degeneration leaves out:
/// `r = 5` with the residual component of genus 2.
fn excluded(d: i64, g: i64, r: i64) -> bool {
    let s = g + r - d;
    r == 5 && d - (r - 2) * s.div_euclid(2) - 2 * r + 1 == 2
}

/// Replays the degeneration bookkeeping over every `(d, g, r)` with
/// `rho >= 0` and `d < g + r`, and collects the left-out case.
pub fn audit_cor_needformain(range: &SweepRange, opts: &AuditOptions) -> SweepReport {
    let start = Instant::now();
    let chunks: Vec<(i64, i64)> = (range.r_min..=range.r_max)
        .flat_map(|r| (0..=range.d_max).map(move |d| (r, d)))
        .collect();
    let results = map_chunks(&chunks, opts.jobs, |&(r, d)| {
        let mut tally = Tally::default();
        let mut left_out = Vec::new();
        let g_lo = (d - r + 1).max(0);
        for g in g_lo..=range.g_max {
            if rho(d, g, r) < 0 {
                break;
            }
            tally.checked += 1;
            for check in needformain_checks(d, g, r) {
                if !check.ok {
                    tally.fail(Instance { d, g, r, n: 0 }, "needformain", Detail::Check(check));
                }
            }
            if excluded(d, g, r) {
                left_out.push(Triple { d, g, r });
            }
        }
        (tally, left_out)
    });
    let mut left_out = Vec::new();
    let tally = Tally::merge(results.into_iter().map(|(t, l)| {
        left_out.extend(l);
        t
    }));
    left_out.sort();
    let mut report = tally.report(*range, start.elapsed());
    let expected = Triple { d: 11, g: 7, r: 5 };
    for extra in left_out.iter().filter(|&&t| t != expected) {
        report.violations.push(super::Violation {
            instance: Instance { d: extra.d, g: extra.g, r: extra.r, n: 0 },
            stage: "excluded case",
            detail: Detail::Message("left out by the degeneration beyond (11, 7, 5)".into()),
        });
    }
    report.violations.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    report.excluded_cases = Some(left_out);
    report
}
