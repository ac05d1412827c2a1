//! Engine behavior tests: isotopy identities, nilHecke relations in the
//! diagrammatic calculus, curls, bubbles, and confluence.

use super::engine::*;
use super::lambda::HPoly;
use super::term::{BasisDiagram, Morphism, Word};
use crate::scalars::K;

fn raw(p: u32, bottom: &str, lambda: i64, slices: Vec<Slice>) -> RawDiagram {
    RawDiagram {
        p,
        bottom: word(bottom),
        lambda,
        slices,
    }
}

fn identity_m(p: u32, w: &str, lambda: i64) -> Morphism {
    Morphism::identity(p, word(w), lambda)
}

#[test]
fn empty_stack_is_identity() {
    let m = reduce(&raw(3, "EF", 2, vec![])).unwrap();
    assert_eq!(m, identity_m(3, "EF", 2));
}

#[test]
fn zigzag_identities_reduce_to_strands() {
    for lambda in -3..=3 {
        // (cap_cw x 1_E) after (1_E x cup_ccw): E -> EFE -> E
        let z1 = reduce(&raw(
            3,
            "E",
            lambda,
            vec![Slice::CupCcw { pos: 1 }, Slice::CapCw { pos: 0 }],
        ))
        .unwrap();
        assert_eq!(z1, identity_m(3, "E", lambda), "zigzag 1 at {}", lambda);
        // (1_E x cap_ccw) after (cup_cw x 1_E)
        let z2 = reduce(&raw(
            3,
            "E",
            lambda,
            vec![Slice::CupCw { pos: 0 }, Slice::CapCcw { pos: 1 }],
        ))
        .unwrap();
        assert_eq!(z2, identity_m(3, "E", lambda), "zigzag 2 at {}", lambda);
        // F-strand zigzags
        let z3 = reduce(&raw(
            3,
            "F",
            lambda,
            vec![Slice::CupCw { pos: 1 }, Slice::CapCcw { pos: 0 }],
        ))
        .unwrap();
        assert_eq!(z3, identity_m(3, "F", lambda), "zigzag 3 at {}", lambda);
        let z4 = reduce(&raw(
            3,
            "F",
            lambda,
            vec![Slice::CupCcw { pos: 0 }, Slice::CapCw { pos: 1 }],
        ))
        .unwrap();
        assert_eq!(z4, identity_m(3, "F", lambda), "zigzag 4 at {}", lambda);
    }
}

#[test]
fn double_crossing_up_up_vanishes() {
    let m = reduce(&raw(
        3,
        "EE",
        0,
        vec![Slice::CrossUu { pos: 0 }, Slice::CrossUu { pos: 0 }],
    ))
    .unwrap();
    assert!(m.is_zero(), "sigma^2 must vanish, got {:?}", m);
    let md = reduce(&raw(
        3,
        "FF",
        0,
        vec![Slice::CrossDd { pos: 0 }, Slice::CrossDd { pos: 0 }],
    ))
    .unwrap();
    assert!(md.is_zero());
}

#[test]
fn braid_relation_holds() {
    let lhs = reduce(&raw(
        5,
        "EEE",
        0,
        vec![
            Slice::CrossUu { pos: 0 },
            Slice::CrossUu { pos: 1 },
            Slice::CrossUu { pos: 0 },
        ],
    ))
    .unwrap();
    let rhs = reduce(&raw(
        5,
        "EEE",
        0,
        vec![
            Slice::CrossUu { pos: 1 },
            Slice::CrossUu { pos: 0 },
            Slice::CrossUu { pos: 1 },
        ],
    ))
    .unwrap();
    assert_eq!(lhs, rhs);
    assert!(!lhs.is_zero());
}

#[test]
fn dot_forcing_matches_nilhecke() {
    // dot below crossing vs above: del x1 = x2 del + 1
    let p = 5;
    let lhs = reduce(&raw(
        p,
        "EE",
        0,
        vec![Slice::Dot { pos: 0 }, Slice::CrossUu { pos: 0 }],
    ))
    .unwrap();
    let rhs1 = reduce(&raw(
        p,
        "EE",
        0,
        vec![Slice::CrossUu { pos: 0 }, Slice::Dot { pos: 1 }],
    ))
    .unwrap();
    let idm = identity_m(p, "EE", 0);
    assert_eq!(lhs, rhs1.add(&idm), "del x1 = x2 del + 1");
    // del x2 = x1 del - 1
    let lhs2 = reduce(&raw(
        p,
        "EE",
        0,
        vec![Slice::Dot { pos: 1 }, Slice::CrossUu { pos: 0 }],
    ))
    .unwrap();
    let rhs2 = reduce(&raw(
        p,
        "EE",
        0,
        vec![Slice::CrossUu { pos: 0 }, Slice::Dot { pos: 0 }],
    ))
    .unwrap();
    assert_eq!(lhs2, rhs2.sub(&idm), "del x2 = x1 del - 1");
}

#[test]
fn circle_becomes_bubble() {
    // cw circle with no dots in region lambda: value h_{1-lambda}
    for lambda in -2..=2i64 {
        let m = reduce(&raw(
            3,
            "",
            lambda,
            vec![Slice::CupCw { pos: 0 }, Slice::CapCw { pos: 0 }],
        ))
        .unwrap();
        let expect_h = HPoly::h(3, 1 - lambda);
        let mut expect = Morphism::zero(3, Word::default(), Word::default(), lambda);
        expect.add_poly_term(BasisDiagram::new(vec![]), &expect_h, K::one(3));
        assert_eq!(m, expect, "cw circle at lambda={}", lambda);
        // ccw circle: value (-1)^k e_k with k = 1 + lambda
        let mc = reduce(&raw(
            3,
            "",
            lambda,
            vec![Slice::CupCcw { pos: 0 }, Slice::CapCcw { pos: 0 }],
        ))
        .unwrap();
        let expect2_h = HPoly::ccw(3, 1 + lambda);
        let mut expect2 = Morphism::zero(3, Word::default(), Word::default(), lambda);
        expect2.add_poly_term(BasisDiagram::new(vec![]), &expect2_h, K::one(3));
        assert_eq!(mc, expect2, "ccw circle at lambda={}", lambda);
    }
}

#[test]
fn dotted_circle_is_shifted_bubble() {
    // cw circle with m dots at lambda: h_{m+1-lambda}
    let lambda = 0i64;
    for dots in 0..4u32 {
        let mut slices = vec![Slice::CupCw { pos: 0 }];
        for _ in 0..dots {
            slices.push(Slice::Dot { pos: 0 });
        }
        slices.push(Slice::CapCw { pos: 0 });
        let m = reduce(&raw(3, "", lambda, slices)).unwrap();
        let expect_h = HPoly::h(3, dots as i64 + 1 - lambda);
        let mut expect = Morphism::zero(3, Word::default(), Word::default(), lambda);
        expect.add_poly_term(BasisDiagram::new(vec![]), &expect_h, K::one(3));
        assert_eq!(m, expect, "dots={}", dots);
    }
}

#[test]
fn right_curl_reduces() {
    // right curl with no dots at lambda=0: -(strand) * cw_0 = -(strand)
    // realized as: cup_cw right of the strand, cross up-up, cap_ccw left pair
    let m = reduce(&raw(
        3,
        "E",
        0,
        vec![
            Slice::CupCw { pos: 1 },
            Slice::CrossUu { pos: 0 },
            Slice::CapCw { pos: 1 },
        ],
    ))
    .unwrap();
    let expect = identity_m(3, "E", 0).scale(-K::one(3));
    assert_eq!(m, expect, "right curl at 0, got {:?}", m);
}

#[test]
fn right_curl_vanishes_at_positive_weight() {
    // at lambda > 0 the right curl is 0 (the sum over a+b=-lambda is empty)
    for lambda in 1..=2 {
        let m = reduce(&raw(
            3,
            "E",
            lambda,
            vec![
                Slice::CupCw { pos: 1 },
                Slice::CrossUu { pos: 0 },
                Slice::CapCw { pos: 1 },
            ],
        ))
        .unwrap();
        assert!(m.is_zero(), "right curl at lambda={} got {:?}", lambda, m);
    }
}

#[test]
fn left_curl_reduces() {
    // Left curl: cup_ccw on the left, cross, cap_ccw. Its degree is
    // 2(lambda+2), so the sum is indexed by the weight of the region the
    // loop pokes into: identity exactly at lambda = -2, zero below.
    let curl = |lambda: i64| {
        reduce(&raw(
            3,
            "E",
            lambda,
            vec![
                Slice::CupCcw { pos: 0 },
                Slice::CrossUu { pos: 1 },
                Slice::CapCcw { pos: 0 },
            ],
        ))
        .unwrap()
    };
    assert_eq!(curl(-2), identity_m(3, "E", -2), "left curl at -2");
    assert!(curl(-3).is_zero(), "left curl at -3");
    // At lambda = 0 the value is ccw_2 slid across the strand:
    // (h1^2 - h2) + dot * h1.
    let got = curl(0);
    let mut expect = Morphism::zero(3, word("E"), word("E"), 0);
    let strand = BasisDiagram::identity(&word("E"));
    let h2val = HPoly::h(3, 1).mul(&HPoly::h(3, 1)).sub(&HPoly::h(3, 2));
    expect.add_poly_term(strand.clone(), &h2val, K::one(3));
    let dotted = {
        let mut d = strand.clone();
        d.dots[0] = 1;
        d
    };
    expect.add_poly_term(dotted, &HPoly::h(3, 1), K::one(3));
    assert_eq!(got, expect, "left curl at 0, got {:?}", got);
}

#[test]
fn sideways_double_crossing_ef() {
    // S then T on FE at lambda >= 0: T o S = -1_(FE) (identity decomposition
    // with an empty middle sum).
    let p = 3;
    for lambda in 0..=2 {
        let s = vec![
            // S: FE -> EF
            Slice::CupCw { pos: 2 },
            Slice::CrossUu { pos: 1 },
            Slice::CapCcw { pos: 0 },
            // T: EF -> FE
            Slice::CupCcw { pos: 2 },
            Slice::CrossDd { pos: 1 },
            Slice::CapCw { pos: 0 },
        ];
        let m = reduce(&raw(p, "FE", lambda, s)).unwrap();
        let expect = identity_m(p, "FE", lambda).scale(-K::one(p));
        assert_eq!(m, expect, "T o S at lambda={} got {:?}", lambda, m);
    }
}

#[test]
fn sideways_double_crossing_fe_side() {
    // S o T on EF at lambda <= 0 gives -1_(EF); at lambda = 1 it picks up
    // the identity-decomposition correction with one bubble-free middle term.
    let p = 3;
    for lambda in -2..=0 {
        let s = vec![
            // T: EF -> FE
            Slice::CupCcw { pos: 2 },
            Slice::CrossDd { pos: 1 },
            Slice::CapCw { pos: 0 },
            // S: FE -> EF
            Slice::CupCw { pos: 2 },
            Slice::CrossUu { pos: 1 },
            Slice::CapCcw { pos: 0 },
        ];
        let m = reduce(&raw(p, "EF", lambda, s)).unwrap();
        let expect = identity_m(p, "EF", lambda).scale(-K::one(p));
        assert_eq!(m, expect, "S o T at lambda={} got {:?}", lambda, m);
    }
}

#[test]
fn confluence_on_small_corpus() {
    // linear fold vs split fold agree
    let cases: Vec<RawDiagram> = vec![
        raw(
            3,
            "EE",
            1,
            vec![
                Slice::Dot { pos: 0 },
                Slice::CrossUu { pos: 0 },
                Slice::Dot { pos: 1 },
                Slice::CrossUu { pos: 0 },
            ],
        ),
        raw(
            3,
            "EF",
            2,
            vec![
                Slice::CupCcw { pos: 2 },
                Slice::CrossDd { pos: 1 },
                Slice::CapCw { pos: 0 },
                Slice::CupCw { pos: 2 },
                Slice::CrossUu { pos: 1 },
                Slice::CapCcw { pos: 0 },
            ],
        ),
        raw(
            5,
            "E",
            0,
            vec![
                Slice::CupCw { pos: 1 },
                Slice::Dot { pos: 1 },
                Slice::Dot { pos: 1 },
                Slice::CrossUu { pos: 0 },
                Slice::CapCw { pos: 1 },
            ],
        ),
    ];
    for (i, c) in cases.iter().enumerate() {
        let a = reduce(c).unwrap();
        let b = reduce_split(c).unwrap();
        assert_eq!(a, b, "case {}", i);
    }
}

#[test]
fn compose_v_matches_fold() {
    let p = 3;
    let f = reduce(&raw(p, "EE", 0, vec![Slice::Dot { pos: 0 }])).unwrap();
    let g = reduce(&raw(p, "EE", 0, vec![Slice::CrossUu { pos: 0 }])).unwrap();
    let gf = compose_v(&g, &f);
    let direct = reduce(&raw(
        p,
        "EE",
        0,
        vec![Slice::Dot { pos: 0 }, Slice::CrossUu { pos: 0 }],
    ))
    .unwrap();
    assert_eq!(gf, direct);
}

#[test]
fn degree_additive() {
    let p = 3;
    let m = reduce(&raw(
        p,
        "EE",
        1,
        vec![Slice::Dot { pos: 0 }, Slice::CrossUu { pos: 0 }],
    ))
    .unwrap();
    assert_eq!(degree(&m), Some(0));
    let zig = reduce(&raw(
        p,
        "E",
        1,
        vec![Slice::CupCcw { pos: 1 }, Slice::CapCw { pos: 0 }],
    ))
    .unwrap();
    assert_eq!(degree(&zig), Some(0));
}
