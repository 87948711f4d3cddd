//! Closed-form counts and predicates for Brill-Noether curves in projective space.
//!
//! Every function here is exact integer (or exact rational) arithmetic. Inputs are
//! bounded by [`MAX_PARAM`], which keeps every intermediate below `2^62`, so plain
//! `i64` arithmetic cannot overflow.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::json::dec;

/// Largest accepted value for any of `d`, `g`, `r`, `n`.
pub const MAX_PARAM: i64 = 1 << 20;

/// Triples `(d, g, r)` for which the base excellence criterion is known to fail.
pub const BASE_EXCLUDED: [(i64, i64, i64); 3] = [(5, 2, 3), (6, 2, 4), (7, 2, 5)];

/// A tuple `(d, g, r, n)`: degree, genus, ambient dimension, and the number of
/// hyperplane-section points that are *not* required to be general.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Instance {
    #[serde(with = "dec")]
    pub d: i64,
    #[serde(with = "dec")]
    pub g: i64,
    #[serde(with = "dec")]
    pub r: i64,
    #[serde(with = "dec")]
    pub n: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("{name} = {value} is negative")]
    Negative { name: &'static str, value: i64 },
    #[error("r = {0} must be at least 2")]
    DimensionTooSmall(i64),
    #[error("{name} = {value} exceeds the supported maximum {MAX_PARAM}")]
    TooLarge { name: &'static str, value: i64 },
}

impl Instance {
    pub fn new(d: i64, g: i64, r: i64, n: i64) -> Result<Self, InstanceError> {
        let inst = Instance { d, g, r, n };
        inst.validate()?;
        Ok(inst)
    }

    /// Checks the construction invariants: nonnegative fields, `r >= 2`, and the
    /// size cap. Context-dependent constraints (`n <= d`, `rho >= 0`) are left to
    /// the operations that need them.
    pub fn validate(&self) -> Result<(), InstanceError> {
        for (name, value) in [("d", self.d), ("g", self.g), ("r", self.r), ("n", self.n)] {
            if value < 0 {
                return Err(InstanceError::Negative { name, value });
            }
            if value > MAX_PARAM {
                return Err(InstanceError::TooLarge { name, value });
            }
        }
        if self.r < 2 {
            return Err(InstanceError::DimensionTooSmall(self.r));
        }
        Ok(())
    }

    pub fn rho(&self) -> i64 {
        rho(self.d, self.g, self.r)
    }

    /// Slack of the hyperplane-section hypothesis; nonnegative means it holds.
    pub fn main_1s_slack(&self) -> i64 {
        main_1s_slack(self.d, self.g, self.r, self.n)
    }

    /// `n <= d` and `rho >= 0`: the standing hypotheses on a tuple.
    pub fn in_domain(&self) -> bool {
        self.n <= self.d && self.rho() >= 0
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.d, self.g, self.r, self.n)
    }
}

/// Which bundle's interpolation property a capacity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BundleKind {
    /// The normal bundle `N_f`.
    Normal,
    /// The twist `N_f(-1)`.
    NormalTwist,
}

/// Brill-Noether number `(r + 1)d - rg - r(r + 1)`.
pub fn rho(d: i64, g: i64, r: i64) -> i64 {
    (r + 1) * d - r * g - r * (r + 1)
}

/// Dimension of the main component of the space of `n`-pointed stable maps.
pub fn moduli_dim(d: i64, g: i64, r: i64, n: i64) -> i64 {
    (r + 1) * d - (r - 3) * (g - 1) + n
}

fn require_r(r: i64, min: i64) {
    assert!(r >= min, "r = {r} is below the minimum {min} for this formula");
}

/// Dimension-count bound on the number of general points in `P^r`.
pub fn naive_point_bound(d: i64, g: i64, r: i64) -> i64 {
    require_r(r, 2);
    Integer::div_floor(&((r + 1) * d - (r - 3) * (g - 1)), &(r - 1))
}

/// Largest `n` with `(r - 1)n <= (r + 1)d - (r - 3)(g - 1) - 2r`. May be negative.
pub fn main_guarantee_raw(d: i64, g: i64, r: i64) -> i64 {
    require_r(r, 2);
    Integer::div_floor(&((r + 1) * d - (r - 3) * (g - 1) - 2 * r), &(r - 1))
}

/// Number of general points a BN-curve is guaranteed to pass through, clamped at 0.
pub fn main_guarantee(d: i64, g: i64, r: i64) -> i64 {
    main_guarantee_raw(d, g, r).max(0)
}

/// Whether the general-points theorem covers `(d, g, r, n)`.
pub fn main_applies(d: i64, g: i64, r: i64, n: i64) -> bool {
    rho(d, g, r) >= 0 && n <= main_guarantee_raw(d, g, r)
}

/// `chi(E) / rk(E)` for the normal bundle or its twist, as an exact fraction.
pub fn interpolation_capacity(kind: BundleKind, d: i64, g: i64, r: i64) -> Ratio<i64> {
    require_r(r, 2);
    let chi = match kind {
        BundleKind::Normal => (r + 1) * d - (r - 3) * (g - 1),
        BundleKind::NormalTwist => 2 * d - (r - 3) * (g - 1),
    };
    Ratio::new(chi, r - 1)
}

/// `min(d, floor(((r + 1)d - (r - 3)g - 4) / (r - 1)))`. May be negative.
pub fn hyperplane_naive_bound(d: i64, g: i64, r: i64) -> i64 {
    require_r(r, 2);
    d.min(Integer::div_floor(&((r + 1) * d - (r - 3) * g - 4), &(r - 1)))
}

/// `(2r - 3)d - (r - 2)^2 g - 2r^2 + 3r - 9`.
pub fn main_1_slack(d: i64, g: i64, r: i64) -> i64 {
    (2 * r - 3) * d - (r - 2) * (r - 2) * g - 2 * r * r + 3 * r - 9
}

/// Hypothesis under which the twisted normal bundle satisfies interpolation.
pub fn main_1_condition(d: i64, g: i64, r: i64) -> bool {
    require_r(r, 2);
    main_1_slack(d, g, r) >= 0
}

/// `(2r - 3)(d + 1) - (r - 2)^2 (g - n) - 2r^2 + 3r - 9`.
pub fn main_1s_slack(d: i64, g: i64, r: i64, n: i64) -> i64 {
    (2 * r - 3) * (d + 1) - (r - 2) * (r - 2) * (g - n) - 2 * r * r + 3 * r - 9
}

/// Hypothesis under which the hyperplane section contains `d - n` general points.
/// Does not check `n <= d`.
pub fn main_1s_condition(d: i64, g: i64, r: i64, n: i64) -> bool {
    require_r(r, 2);
    main_1s_slack(d, g, r, n) >= 0
}

/// `min(d, floor(((r-1)^2 d - (r-2)^2 g - (2r^2 - 5r + 12)) / (r-2)^2))`, unclamped.
pub fn main_1s_guarantee_raw(d: i64, g: i64, r: i64) -> i64 {
    require_r(r, 3);
    let sq = (r - 2) * (r - 2);
    let num = (r - 1) * (r - 1) * d - sq * g - (2 * r * r - 5 * r + 12);
    d.min(Integer::div_floor(&num, &sq))
}

/// Guaranteed number of general points in a hyperplane section, clamped at 0.
pub fn main_1s_guarantee(d: i64, g: i64, r: i64) -> i64 {
    main_1s_guarantee_raw(d, g, r).max(0)
}

/// Base excellence criterion: `n <= d`, `rho >= 0`, `d >= g + r`, `(d, g, r)` not
/// one of [`BASE_EXCLUDED`], and `2d + (r - 1)n >= (2r - 4)g - r + 3`.
pub fn base_excellent(d: i64, g: i64, r: i64, n: i64) -> bool {
    n <= d
        && rho(d, g, r) >= 0
        && d >= g + r
        && !BASE_EXCLUDED.contains(&(d, g, r))
        && 2 * d + (r - 1) * n >= (2 * r - 4) * g - r + 3
}

/// `chi(N_f(-D))` for a curve of degree `d - b`, genus `g - b`, twisted down by
/// `d - b - n` points of a hyperplane section.
pub fn chi_normal_minus_points(d: i64, g: i64, r: i64, n: i64, b: i64) -> i64 {
    (r + 1) * (d - b) - (r - 3) * (g - b - 1) - (r - 1) * (d - b - n)
}

/// Whether that Euler characteristic leaves room for `b + 1` further general points.
pub fn extracts_points(d: i64, g: i64, r: i64, n: i64, b: i64) -> bool {
    chi_normal_minus_points(d, g, r, n, b) >= (r - 1) * (b + 1)
}

/// `ceil((r - 2) / 2)`, the degree of the rational tail attached in the
/// half-canonical reduction.
pub fn half_step(r: i64) -> i64 {
    Integer::div_ceil(&(r - 2), &2)
}

/// All closed-form counts for one `(d, g, r)`, guarantees clamped at 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bounds {
    #[serde(with = "dec")]
    pub rho: i64,
    #[serde(with = "dec")]
    pub moduli_dim: i64,
    #[serde(with = "dec")]
    pub naive_points: i64,
    #[serde(with = "dec")]
    pub main_guarantee: i64,
    #[serde(with = "dec")]
    pub hyperplane_naive: i64,
    /// `None` for `r = 2`, where the formula divides by zero.
    #[serde(with = "dec::option")]
    pub main_1s_guarantee: Option<i64>,
    #[serde(with = "dec::ratio")]
    pub capacity_normal: Ratio<i64>,
    #[serde(with = "dec::ratio")]
    pub capacity_twist: Ratio<i64>,
}

impl Bounds {
    pub fn compute(d: i64, g: i64, r: i64) -> Self {
        require_r(r, 2);
        Bounds {
            rho: rho(d, g, r),
            moduli_dim: moduli_dim(d, g, r, 0),
            naive_points: naive_point_bound(d, g, r).max(0),
            main_guarantee: main_guarantee(d, g, r),
            hyperplane_naive: hyperplane_naive_bound(d, g, r).max(0),
            main_1s_guarantee: (r >= 3).then(|| main_1s_guarantee(d, g, r)),
            capacity_normal: interpolation_capacity(BundleKind::Normal, d, g, r),
            capacity_twist: interpolation_capacity(BundleKind::NormalTwist, d, g, r),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_examples() {
        assert_eq!(rho(6, 4, 3), 0);
        assert_eq!(rho(11, 7, 5), 1);
        for r in 1..30 {
            assert_eq!(rho(r, 0, r), 0);
        }
    }

    #[test]
    fn moduli_dim_examples() {
        assert_eq!(moduli_dim(6, 4, 3, 0), 24);
        assert_eq!(moduli_dim(5, 0, 5, 0), 32);
        for r in 2..10 {
            for d in 0..20 {
                assert_eq!(moduli_dim(d, 1, r, 0), (r + 1) * d);
            }
        }
    }

    #[test]
    fn point_bounds() {
        assert_eq!(naive_point_bound(6, 4, 3), 12);
        assert_eq!(naive_point_bound(5, 0, 5), 8);
        assert_eq!(naive_point_bound(11, 7, 5), 13);

        assert_eq!(main_guarantee(6, 4, 3), 9);
        assert_eq!(main_guarantee(11, 7, 5), 11);
        assert_eq!(main_guarantee(5, 0, 5), 5);
    }

    #[test]
    fn floor_division_rounds_toward_negative_infinity() {
        // (0 - 2 * 19 - 10) / 4 = -12 exactly.
        assert_eq!(main_guarantee_raw(0, 20, 5), -12);
        // -50 / 4 = -12.5 floors to -13, not -12.
        assert_eq!(main_guarantee_raw(0, 21, 5), -13);
        assert_eq!(main_guarantee(0, 21, 5), 0);
        // -10 / 4 = -2.5 floors to -3.
        assert_eq!(hyperplane_naive_bound(0, 3, 5), -3);
    }

    #[test]
    fn capacities() {
        assert_eq!(interpolation_capacity(BundleKind::Normal, 3, 0, 3), Ratio::from_integer(6));
        assert_eq!(interpolation_capacity(BundleKind::NormalTwist, 7, 0, 5), Ratio::from_integer(4));
        assert_eq!(interpolation_capacity(BundleKind::Normal, 6, 4, 3), Ratio::from_integer(12));
        assert_eq!(interpolation_capacity(BundleKind::Normal, 11, 7, 5), Ratio::new(27, 2));
    }

    #[test]
    fn hyperplane_bound() {
        assert_eq!(hyperplane_naive_bound(6, 4, 3), 6);
        assert_eq!(hyperplane_naive_bound(5, 0, 5), 5);
        // min(20, floor(56 / 4))
        assert_eq!(hyperplane_naive_bound(20, 30, 5), 14);
    }

    #[test]
    fn twist_conditions() {
        assert!(main_1_condition(7, 0, 5));
        assert!(!main_1_condition(6, 0, 5));
        assert!(main_1_condition(72, 51, 5));
        assert_eq!(main_1_slack(72, 51, 5), 1);

        assert!(main_1s_condition(10, 0, 5, 0));
        assert!(main_1s_condition(85, 65, 5, 3));
        assert_eq!(main_1s_slack(85, 65, 5, 3), 0);
        assert!(!main_1s_condition(84, 65, 5, 3));
        assert_eq!(main_1s_slack(84, 65, 5, 3), -7);
    }

    #[test]
    fn hyperplane_guarantee() {
        assert_eq!(main_1s_guarantee(6, 4, 3), 5);
        assert_eq!(main_1s_guarantee(10, 0, 5), 10);
        assert_eq!(main_1s_guarantee_raw(5, 50, 5), Integer::div_floor(&(16 * 5 - 450 - 37_i64), &9));
        assert_eq!(main_1s_guarantee(5, 50, 5), 0);
    }

    #[test]
    fn base_excellence() {
        for n in 0..=5 {
            assert!(!base_excellent(5, 2, 3, n));
        }
        assert!(!base_excellent(7, 2, 5, 0));
        assert!(base_excellent(11, 0, 5, 0));
        for r in 2..12 {
            for d in r..40 {
                if rho(d, 0, r) >= 0 {
                    assert!(base_excellent(d, 0, r, 0), "({d}, 0, {r}, 0)");
                }
            }
        }
    }

    #[test]
    fn euler_characteristic() {
        assert_eq!(chi_normal_minus_points(20, 10, 5, 3, 6), 34);
        assert!(extracts_points(20, 10, 5, 3, 6)); // 34 >= 4 * 7
        assert!(extracts_points(20, 10, 5, 3, 7)); // independent of b when r = 5
        assert!(!extracts_points(20, 10, 5, 3, 8)); // 34 < 36
        for (d, g, r, n) in [(9, 3, 5, 2), (30, 12, 6, 0), (4, 0, 4, 4)] {
            let expected = (r + 1) * d - (r - 3) * (g - 1) - (r - 1) * (d - n);
            assert_eq!(chi_normal_minus_points(d, g, r, n, 0), expected);
        }
    }

    #[test]
    fn half_step_values() {
        assert_eq!(half_step(5), 2);
        assert_eq!(half_step(6), 2);
        assert_eq!(half_step(7), 3);
        assert_eq!(half_step(39), 19);
    }

    #[test]
    fn canonical_space_curve_bounds() {
        let b = Bounds::compute(6, 4, 3);
        assert_eq!(b.rho, 0);
        assert_eq!(b.naive_points, 12);
        assert_eq!(b.main_guarantee, 9);
        assert_eq!(b.hyperplane_naive, 6);
        assert_eq!(b.main_1s_guarantee, Some(5));
        assert_eq!(Bounds::compute(10, 3, 2).main_1s_guarantee, None);
    }

    #[test]
    fn instance_validation() {
        assert!(Instance::new(6, 4, 3, 0).is_ok());
        assert_eq!(Instance::new(6, 4, 1, 0), Err(InstanceError::DimensionTooSmall(1)));
        assert!(matches!(Instance::new(-1, 0, 3, 0), Err(InstanceError::Negative { name: "d", .. })));
        assert!(matches!(
            Instance::new(MAX_PARAM + 1, 0, 3, 0),
            Err(InstanceError::TooLarge { .. })
        ));
    }
}
