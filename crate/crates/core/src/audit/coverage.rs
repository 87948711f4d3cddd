use std::time::Instant;

use crate::numerics::{main_1s_condition, rho, Instance};
use crate::reduction::GoodSearch;

use super::appendix::check_good;
use super::{map_chunks, AuditOptions, SweepRange, SweepReport, Tally};

/// Every `(d, g, r, n)` in range with `n <= d`, `rho >= 0` and the
/// hyperplane-section hypothesis, for one `(r, g)`.
fn tuples_at(r: i64, g: i64, range: &SweepRange, mut visit: impl FnMut(Instance)) {
    for d in 0..=range.d_max {
        if rho(d, g, r) < 0 {
            continue;
        }
        for n in 0..=d.min(range.n_max.unwrap_or(i64::MAX)) {
            if main_1s_condition(d, g, r, n) {
                visit(Instance { d, g, r, n });
            }
        }
    }
}

/// Largest genus with `rho >= 0` at degree `d_max`.
fn genus_cap(r: i64, range: &SweepRange) -> i64 {
    let d = range.d_max;
    (((r + 1) * d - r * (r + 1)).div_euclid(r)).min(range.g_max)
}

pub fn coverage_tuples(range: &SweepRange) -> Vec<Instance> {
    let mut out = Vec::new();
    for r in range.r_min..=range.r_max {
        for g in 0..=genus_cap(r, range) {
            tuples_at(r, g, range, |t| out.push(t));
        }
    }
    out
}

/// Decides goodness at every tuple in range meeting the standing hypotheses,
/// and replays each certificate.
pub fn audit_coverage(range: &SweepRange, opts: &AuditOptions) -> SweepReport {
    let start = Instant::now();
    // One chunk per genus: every degree above the minimal one descends to it,
    // so the chunk's shared search settles each family once.
    let chunks: Vec<(i64, i64)> = (range.r_min..=range.r_max)
        .flat_map(|r| (0..=genus_cap(r, range)).map(move |g| (r, g)))
        .collect();
    let tallies = map_chunks(&chunks, opts.jobs, |&(r, g)| {
        let mut tally = Tally::default();
        let mut search = GoodSearch::new(opts.search);
        tuples_at(r, g, range, |inst| check_good(&inst, &mut search, &mut tally));
        tally
    });
    Tally::merge(tallies).report(*range, start.elapsed())
}
