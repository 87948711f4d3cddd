use std::time::Instant;

use num_integer::Integer;

use crate::numerics::{half_step, Instance};
use crate::reduction::{minimal_degree, verify_certificate, DecideError, GoodSearch};

use super::{map_chunks, AuditOptions, Detail, SweepRange, SweepReport, Tally};

/// Largest genus left over by the small-genus hypothesis of the reduction
/// recipe at `(r, n)`, or a negative number when none is.
pub fn appendix_genus_bound(r: i64, n: i64) -> i64 {
    let a = half_step(r);
    let num = (5 * r - 7) * n - (2 * r * r - 9 * r + 9) * (n / a) - 4 * r * r + 94 * r - 151;
    Integer::div_floor(&num, &(r - 1))
}

/// The finite residue: for each `r`, each `n <= 2r - 7`, each `g` up to the
/// genus bound, the smallest admissible degree.
pub fn appendix_tuples(range: &SweepRange) -> Vec<Instance> {
    let mut out = Vec::new();
    for r in range.r_min..=range.r_max {
        let n_top = (2 * r - 7).min(range.n_max.unwrap_or(i64::MAX));
        for n in 0..=n_top {
            let g_top = appendix_genus_bound(r, n).min(range.g_max);
            for g in 0..=g_top {
                let d = minimal_degree(g, r, n);
                if d <= range.d_max {
                    out.push(Instance { d, g, r, n });
                }
            }
        }
    }
    out
}

pub(super) fn check_good(inst: &Instance, search: &mut GoodSearch, tally: &mut Tally) {
    tally.checked += 1;
    match search.decide(inst) {
        Ok(cert) => {
            if let Err(e) = verify_certificate(&cert) {
                tally.fail(*inst, "verify_certificate", Detail::Message(e.to_string()));
            }
        }
        Err(DecideError::Rejected(rej)) => tally.fail(*inst, "decide_good", Detail::Rejection(rej)),
        Err(e) => tally.fail(*inst, "decide_good", Detail::Message(e.to_string())),
    }
}

/// Decides goodness at every residual tuple and replays each certificate.
pub fn audit_appendix(range: &SweepRange, opts: &AuditOptions) -> SweepReport {
    let start = Instant::now();
    let tuples = appendix_tuples(range);
    let chunks: Vec<&[Instance]> = tuples.chunks(64).collect();
    let tallies = map_chunks(&chunks, opts.jobs, |chunk| {
        let mut tally = Tally::default();
        let mut search = GoodSearch::new(opts.search);
        for inst in chunk.iter() {
            check_good(inst, &mut search, &mut tally);
        }
        tally
    });
    Tally::merge(tallies).report(*range, start.elapsed())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_bound_examples() {
        // (18*3 - 14*1 - 100 + 470 - 151) / 4 = 259 / 4.
        assert_eq!(appendix_genus_bound(5, 3), 64);
        let tuples = appendix_tuples(&SweepRange {
            r_min: 5,
            r_max: 5,
            n_max: None,
            ..SweepRange::appendix()
        });
        let gs: Vec<i64> = tuples.iter().filter(|t| t.n == 3).map(|t| t.g).collect();
        assert_eq!(gs, (0..=64).collect::<Vec<_>>());
        assert_eq!(tuples[0], Instance { d: 6, g: 0, r: 5, n: 0 });
    }

    #[test]
    fn filters_apply() {
        let small = SweepRange {
            r_min: 5,
            r_max: 6,
            d_max: 20,
            g_max: 10,
            n_max: Some(1),
        };
        let tuples = appendix_tuples(&small);
        assert!(!tuples.is_empty());
        assert!(tuples.iter().all(|t| t.d <= 20 && t.g <= 10 && t.n <= 1));
    }
}
