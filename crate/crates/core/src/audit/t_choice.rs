use std::time::Instant;

use num_integer::Integer;

use crate::numerics::{main_1_condition, Instance};
use crate::reduction::RuleCheck;

use super::{map_chunks, AuditOptions, Detail, SweepRange, SweepReport, Tally};

const SMALL_T_EXCLUDED: [(i64, i64); 2] = [(5, 2), (6, 2)];
const RESIDUAL_EXCLUDED: [(i64, i64, i64); 1] = [(8, 1, 5)];

/// The twist hypothesis, plus the two conditions under which the base
/// criterion does not already settle `(d, g, r)`.
pub fn t_choice_hypothesis(d: i64, g: i64, r: i64) -> bool {
    let g_min = if r == 5 || r == 6 { 5 } else { 4 };
    r >= 5 && main_1_condition(d, g, r) && 2 * d <= (2 * r - 4) * g - r + 2 && g >= g_min
}

/// `(s, t)` with `s = ceil(((2r-4)g - 2d + r + 1)/(2r-2))` and `t = s`, bumped
/// by one when `(r, s)` is `(5, 2)` or `(6, 2)`.
pub fn closed_form_t(d: i64, g: i64, r: i64) -> (i64, i64) {
    let s = Integer::div_ceil(&((2 * r - 4) * g - 2 * d + r + 1), &(2 * r - 2));
    let t = if SMALL_T_EXCLUDED.contains(&(r, s)) { s + 1 } else { s };
    (s, t)
}

/// The conditions a degeneration parameter `t` must meet, in order.
pub fn t_choice_checks(d: i64, g: i64, r: i64, t: i64) -> Vec<RuleCheck> {
    use crate::reduction::Cmp::*;
    vec![
        RuleCheck::new("t >= 2", t, Ge, 2),
        RuleCheck::not_in("(r, t) not in {(5, 2), (6, 2)}", &(r, t), &SMALL_T_EXCLUDED),
        RuleCheck::new("g >= 2t - 1", g, Ge, 2 * t - 1),
        RuleCheck::new("d >= g + r + 2 + (r-5)t", d, Ge, g + r + 2 + (r - 5) * t),
        RuleCheck::not_in(
            "(d - (r-3)t, g - 2t, r) != (8, 1, 5)",
            &(d - (r - 3) * t, g - 2 * t, r),
            &RESIDUAL_EXCLUDED,
        ),
        RuleCheck::new("2d - (2r-4)g + (2r-2)t >= r + 1", 2 * d - (2 * r - 4) * g + (2 * r - 2) * t, Ge, r + 1),
        RuleCheck::new("d >= (r-2)t + 1", d, Ge, (r - 2) * t + 1),
    ]
}

/// Allocation-free form of [`t_choice_checks`].
#[allow(clippy::int_plus_one)] // keeps the displayed inequalities
fn t_valid(d: i64, g: i64, r: i64, t: i64) -> bool {
    t >= 2
        && !SMALL_T_EXCLUDED.contains(&(r, t))
        && g >= 2 * t - 1
        && d >= g + r + 2 + (r - 5) * t
        && (d - (r - 3) * t, g - 2 * t, r) != RESIDUAL_EXCLUDED[0]
        && 2 * d - (2 * r - 4) * g + (2 * r - 2) * t >= r + 1
        && d >= (r - 2) * t + 1
}

/// Checks the closed-form `t` at every hypothesis tuple, and independently
/// searches `[0, d]` for any valid `t`.
pub fn audit_t_choice(range: &SweepRange, opts: &AuditOptions) -> SweepReport {
    let start = Instant::now();
    let chunks: Vec<(i64, i64)> = (range.r_min..=range.r_max)
        .flat_map(|r| (0..=range.d_max).map(move |d| (r, d)))
        .collect();
    let tallies = map_chunks(&chunks, opts.jobs, |&(r, d)| {
        let mut tally = Tally::default();
        for g in 0..=range.g_max.min(d) {
            if !t_choice_hypothesis(d, g, r) {
                continue;
            }
            tally.checked += 1;
            let inst = Instance { d, g, r, n: 0 };
            let (_, t) = closed_form_t(d, g, r);
            if !t_valid(d, g, r, t) {
                let failed = t_choice_checks(d, g, r, t).into_iter().find(|c| !c.ok);
                let detail = failed.map_or_else(|| Detail::Message(format!("t = {t} fails")), Detail::Check);
                tally.fail(inst, "closed-form t", detail);
            }
            if !(0..=d).any(|u| t_valid(d, g, r, u)) {
                tally.fail(inst, "brute-force t", Detail::Message(format!("no t in [0, {d}] is valid")));
            }
        }
        tally
    });
    Tally::merge(tallies).report(*range, start.elapsed())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exceptional_small_s() {
        assert!(t_choice_hypothesis(13, 5, 5));
        assert_eq!(closed_form_t(13, 5, 5), (2, 3));
        assert!(t_choice_checks(13, 5, 5, 3).iter().all(|c| c.ok));
        assert!(!t_valid(13, 5, 5, 2));
        // One below the threshold degree the twist hypothesis allows.
        assert!(!t_choice_hypothesis(12, 5, 5));
    }

    #[test]
    fn six_four_is_settled_by_the_base_criterion() {
        // The twist hypothesis needs d >= 15 at (r, g) = (6, 4), but then
        // 2d > (2r-4)g - r + 2 = 26, so the base criterion applies.
        assert!(main_1_condition(15, 4, 6));
        assert!(!main_1_condition(14, 4, 6));
        assert!(!t_choice_hypothesis(15, 4, 6));
        assert!(crate::numerics::base_excellent(15, 4, 6, 0));
    }

    #[test]
    fn fast_and_recorded_checks_agree() {
        for r in 5..=9 {
            for d in 0..60 {
                for g in 0..40 {
                    for t in 0..12 {
                        let recorded = t_choice_checks(d, g, r, t).iter().all(|c| c.ok);
                        assert_eq!(recorded, t_valid(d, g, r, t), "({d}, {g}, {r}) t={t}");
                    }
                }
            }
        }
    }
}
