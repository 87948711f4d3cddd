use bncert::numerics::Instance;
use bncert::reduction::{
    decide_excellent, decide_good, lemma_wh_reduction, rule_add_can, rule_add_half, rule_add_line,
    rule_descend_degree, rule_exc_good, rule_glue, verify_certificate, Claim, DecideError, GlueReading, GlueSplit,
    Rejection, Rule, SearchOptions,
};

fn q(d: i64, g: i64, r: i64, n: i64) -> Instance {
    Instance { d, g, r, n }
}

fn failed(res: Result<Instance, Rejection>) -> String {
    res.expect_err("rule should reject").check.name.into_owned()
}

#[test]
fn add_can() {
    assert_eq!(rule_add_can(&q(30, 12, 6, 6)), Ok(q(20, 0, 6, 0)));
    // r = 5 drops the genus by 11 rather than 2r.
    assert_eq!(rule_add_can(&q(26, 11, 5, 4)), Ok(q(18, 0, 5, 0)));
    assert_eq!(failed(rule_add_can(&q(26, 10, 5, 4))), "g > 2r (r = 5)");
}

#[test]
fn add_half() {
    assert_eq!(rule_add_half(&q(10, 3, 5, 2)), Ok(q(8, 0, 5, 0)));
    assert_eq!(rule_add_half(&q(9, 3, 6, 2)), Ok(q(7, 0, 6, 0)));
    assert_eq!(failed(rule_add_half(&q(10, 2, 5, 2))), "g >= a + 1");
}

#[test]
fn add_line() {
    assert_eq!(rule_add_line(&q(8, 1, 5, 1)), Ok(q(7, 0, 5, 0)));
    assert_eq!(failed(rule_add_line(&q(10, 6, 5, 1))), "rho >= 1");
    assert_eq!(failed(rule_add_line(&q(12, 0, 5, 1))), "g >= 1");
}

#[test]
fn descend_degree() {
    assert_eq!(rule_descend_degree(&q(12, 0, 5, 3)), Ok(q(11, 0, 5, 3)));
    assert_eq!(failed(rule_descend_degree(&q(12, 0, 5, 12))), "n <= d - steps");
    assert_eq!(failed(rule_descend_degree(&q(6, 1, 5, 0))), "rho(d - steps, g, r) >= 0");
}

#[test]
fn exc_good() {
    assert_eq!(rule_exc_good(&q(20, 0, 5, 6), 0), Ok(q(20, 0, 5, 6)));
    assert_eq!(rule_exc_good(&q(82, 61, 5, 0), 10), Ok(q(72, 51, 5, 0)));
    assert_eq!(failed(rule_exc_good(&q(10, 5, 5, 2), 6)), "b <= g");
}

fn split(k: i64) -> GlueSplit {
    GlueSplit {
        d1: 6,
        g1: 0,
        n1: 2,
        d2: 6,
        g2: 0,
        n2: 2,
        k,
        reading: GlueReading::SecondSummand,
    }
}

#[test]
fn glue() {
    let (good, excellent) = rule_glue(&q(12, 1, 5, 4), split(2)).unwrap();
    assert_eq!((good, excellent), (q(6, 0, 5, 2), q(6, 0, 5, 2)));

    // (r+1)d1 - r g1 + r = 41 < 5k once k = 9; g = k - 1 keeps the genus balanced.
    let rej = rule_glue(&q(12, 8, 5, 4), split(9)).unwrap_err();
    assert_eq!(rej.check.name, "(r+1)d1 - r g1 + r >= rk");
    assert_eq!((rej.check.lhs, rej.check.rhs), (41, 45));
}

#[test]
fn glue_reading_only_moves_the_pinned_count() {
    // 2d2 - (r-3)(g2-1) = 12 against (r-1)(k - n): 16 with n = n2 = 0, 12 with n = n1 + n2 = 1.
    let s = GlueSplit {
        d1: 10,
        g1: 0,
        n1: 1,
        d2: 5,
        g2: 0,
        n2: 0,
        k: 4,
        reading: GlueReading::SecondSummand,
    };
    let inst = q(15, 3, 5, 1);
    let rej = rule_glue(&inst, s).unwrap_err();
    assert_eq!((rej.check.lhs, rej.check.rhs), (12, 16));
    let combined = GlueSplit {
        reading: GlueReading::Combined,
        ..s
    };
    assert!(rule_glue(&inst, combined).is_ok());
}

#[test]
fn recipe_worked_example() {
    let cert = lemma_wh_reduction(&q(85, 65, 5, 3)).unwrap();
    assert_eq!(cert.rule, Rule::LemmaWh { x: 1, y: 1, z: 10 });
    assert!(verify_certificate(&cert).is_ok());
    let leaf = cert.nodes().into_iter().last().unwrap();
    assert_eq!((leaf.instance, leaf.rule), (q(72, 51, 5, 0), Rule::ThmMain1Excellent));
}

#[test]
fn recipe_small_genus_bound() {
    // (r - 1)g >= 260 needs g >= 65 at r = 5, n = 3.
    let rej = lemma_wh_reduction(&q(20, 10, 5, 3)).unwrap_err();
    assert_eq!((rej.check.lhs, rej.check.rhs), (40, 260));
}

#[test]
fn recipe_at_zero_genus() {
    // Below r = 40 the small-genus hypothesis still binds at g = 0.
    let rej = lemma_wh_reduction(&q(20, 0, 5, 6)).unwrap_err();
    assert!(rej.check.name.starts_with("(r-1)g >="));
    let cert = lemma_wh_reduction(&q(1700, 0, 40, 30)).unwrap();
    assert_eq!(cert.rule, Rule::LemmaWh { x: 0, y: 0, z: 0 });
    assert!(verify_certificate(&cert).is_ok());
}

#[test]
fn excellent_leaves() {
    assert_eq!(decide_excellent(&q(11, 0, 5, 0)).unwrap().rule, Rule::BaseExcellent);
    let cert = decide_excellent(&q(72, 51, 5, 0)).unwrap();
    assert_eq!(cert.rule, Rule::ThmMain1Excellent);
    // 2r^2 - 3r + 9 = 44 against (2r-3)d - (r-2)^2 g = 317 - 272.
    assert_eq!(cert.checks.last().unwrap().lhs, 1);
    match decide_excellent(&q(7, 2, 5, 0)) {
        Err(DecideError::Rejected(rej)) => assert_eq!(rej.rule, "base-excellent"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn good_examples() {
    let opts = SearchOptions::default();
    let cert = decide_good(&q(85, 65, 5, 3), &opts).unwrap();
    assert_eq!(cert.rule.name(), "lemma-wh");

    let cert = decide_good(&q(30, 12, 6, 6), &opts).unwrap();
    assert_eq!(cert.spine(), ["add-can", "excellent-implies-good", "base-excellent"]);
    assert_eq!(cert.children[0].instance, q(20, 0, 6, 0));

    let cert = decide_good(&q(20, 0, 5, 6), &opts).unwrap();
    assert_eq!(cert.spine(), ["excellent-implies-good", "base-excellent"]);
    assert_eq!(cert.claim, Claim::Good);
}

#[test]
fn out_of_scope_and_domain() {
    let opts = SearchOptions::default();
    assert_eq!(decide_good(&q(30, 20, 4, 0), &opts), Err(DecideError::OutOfScope { r: 4 }));
    assert!(matches!(decide_good(&q(5, 0, 5, 6), &opts), Err(DecideError::Domain(_))));
    assert!(matches!(decide_good(&q(10, 20, 5, 0), &opts), Err(DecideError::Domain(_))));
}
