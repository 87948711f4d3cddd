use crate::numerics::main_1s_condition;

/// Largest `d - n` over `0 <= n <= d` meeting the hyperplane-section
/// hypothesis, by scanning every `n`. `None` when no `n` qualifies.
pub fn brute_force_guarantee(d: i64, g: i64, r: i64) -> Option<i64> {
    assert!(r >= 3, "r = {r} must be at least 3");
    (0..=d).filter(|&n| main_1s_condition(d, g, r, n)).map(|n| d - n).max()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(brute_force_guarantee(6, 4, 3), Some(5));
        assert_eq!(brute_force_guarantee(10, 0, 5), Some(10));
        assert_eq!(brute_force_guarantee(5, 50, 5), None);
    }
}
