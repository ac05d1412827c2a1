//! Differential-layer tests: relation soundness of the engine, preservation
//! under the distinguished differentials, nilpotence, and the bubble action.

use super::checks::*;
use super::dif::{apply_dif, apply_dif_iter};
use super::engine::{reduce, word, RawDiagram, Slice};
use super::lambda::HPoly;
use super::params::DifParams;
use super::term::{BasisDiagram, Morphism, Word};
use crate::scalars::K;

#[test]
fn engine_satisfies_all_relations_p3() {
    let suite = check_relations_hold(3, (-3, 3));
    let failures: Vec<_> = suite.cases.iter().filter(|c| !c.pass).collect();
    assert!(failures.is_empty(), "{:#?}", failures);
}

#[test]
fn engine_satisfies_all_relations_p5() {
    let suite = check_relations_hold(5, (-2, 2));
    let failures: Vec<_> = suite.cases.iter().filter(|c| !c.pass).collect();
    assert!(failures.is_empty(), "{:#?}", failures);
}

#[test]
fn d1_preserves_relations_p3() {
    let params = DifParams::d1(3, (-5, 5));
    let suite = check_relation_preservation(&params);
    let failures: Vec<_> = suite.cases.iter().filter(|c| !c.pass).collect();
    assert!(failures.is_empty(), "{:#?}", failures);
}

#[test]
fn dm1_preserves_relations_p3() {
    let params = DifParams::dm1(3, (-5, 5));
    let suite = check_relation_preservation(&params);
    let failures: Vec<_> = suite.cases.iter().filter(|c| !c.pass).collect();
    assert!(failures.is_empty(), "{:#?}", failures);
}

#[test]
fn violated_constraints_fail_some_relation() {
    // perturb ybar at one weight: the degree-0 bubble check must fail
    let p = 3;
    let mut params = DifParams::d1(p, (-4, 4));
    params.ybar.insert(0, K::from_int(p, 1));
    params.probe = true;
    let suite = check_relation_preservation(&params);
    assert!(
        suite.cases.iter().any(|c| !c.pass),
        "a violated constraint must break some relation"
    );
}

#[test]
fn bubble_differential_matches_symmetric_functions() {
    // d of a real clockwise bubble agrees with the bubble-algebra formula.
    let p = 3;
    let params = DifParams::d1(p, (-6, 6));
    for lambda in -2..=2i64 {
        for m in 0..=2i64 {
            let k = m + 1 - lambda;
            let circle = reduce(&RawDiagram {
                p,
                bottom: Word::default(),
                lambda,
                slices: {
                    let mut s = vec![Slice::CupCw { pos: 0 }];
                    for _ in 0..m {
                        s.push(Slice::Dot { pos: 0 });
                    }
                    s.push(Slice::CapCw { pos: 0 });
                    s
                },
            })
            .unwrap();
            // sanity: the circle reduces to h_k
            let mut expect_val = Morphism::zero(p, Word::default(), Word::default(), lambda);
            expect_val.add_poly_term(BasisDiagram::new(vec![]), &HPoly::h(p, k), K::one(p));
            assert_eq!(circle, expect_val);
            let got = apply_dif(&circle, &params);
            let mut expect = Morphism::zero(p, Word::default(), Word::default(), lambda);
            expect.add_poly_term(BasisDiagram::new(vec![]), &HPoly::h(p, k).dif(), K::one(p));
            assert_eq!(got, expect, "lambda={} m={}", lambda, m);
        }
    }
}

#[test]
fn d1_crossing_formula() {
    // d1 of the up-up crossing: identity - 2 (dot at top-left after crossing)
    let p = 5;
    let params = DifParams::d1(p, (-4, 4));
    let x = reduce(&RawDiagram {
        p,
        bottom: word("EE"),
        lambda: 0,
        slices: vec![Slice::CrossUu { pos: 0 }],
    })
    .unwrap();
    let got = apply_dif(&x, &params);
    let idm = Morphism::identity(p, word("EE"), 0);
    let dotted = reduce(&RawDiagram {
        p,
        bottom: word("EE"),
        lambda: 0,
        slices: vec![Slice::CrossUu { pos: 0 }, Slice::Dot { pos: 0 }],
    })
    .unwrap();
    let expect = idm.add(&dotted.scale(K::from_int(p, -2)));
    assert_eq!(got, expect);
}

#[test]
fn d1_cap_formulas() {
    // d1(cap_cw @ l) = dotted cap - cap * bubble; d1(cap_ccw @ l) = (l+1) dotted cap
    let p = 5;
    let params = DifParams::d1(p, (-4, 4));
    for lambda in -2..=2i64 {
        let cap = reduce(&RawDiagram {
            p,
            bottom: word("EF"),
            lambda,
            slices: vec![Slice::CapCw { pos: 0 }],
        })
        .unwrap();
        let got = apply_dif(&cap, &params);
        let dotted = reduce(&RawDiagram {
            p,
            bottom: word("EF"),
            lambda,
            slices: vec![Slice::Dot { pos: 0 }, Slice::CapCw { pos: 0 }],
        })
        .unwrap();
        let expect = dotted.add(&cap.scale_bubbles(&HPoly::h(p, 1)).scale(-K::one(p)));
        assert_eq!(got, expect, "cap_cw at {}", lambda);

        let capc = reduce(&RawDiagram {
            p,
            bottom: word("FE"),
            lambda,
            slices: vec![Slice::CapCcw { pos: 0 }],
        })
        .unwrap();
        let gotc = apply_dif(&capc, &params);
        let dottedc = reduce(&RawDiagram {
            p,
            bottom: word("FE"),
            lambda,
            slices: vec![Slice::Dot { pos: 0 }, Slice::CapCcw { pos: 0 }],
        })
        .unwrap();
        let expectc = dottedc.scale(K::from_int(p, lambda + 1));
        assert_eq!(gotc, expectc, "cap_ccw at {}", lambda);
    }
}

#[test]
fn nilpotence_of_presets() {
    for p in [2u32, 3] {
        for preset in ["d1", "dm1"] {
            let margin = 2 + p as i64 + 1;
            let params = DifParams::preset(preset, p, (-margin - 1, margin + 1)).unwrap();
            let suite = check_p_nilpotence(&params);
            let failures: Vec<_> = suite.cases.iter().filter(|c| !c.pass).collect();
            assert!(failures.is_empty(), "{} p={}: {:#?}", preset, p, failures);
        }
    }
}

#[test]
fn probe_parameters_fail_at_iteration_p() {
    // x carrying an eps part: the cap iteration coefficient at step p is
    // a nonzero eps multiple.
    let p = 3;
    let mut params = DifParams::d1(p, (-6, 6));
    for l in -6..=6 {
        params.x.insert(l, K::new(p, 1, 1));
        params.xbar.insert(l, K::new(p, -l - 1, -1));
    }
    params.probe = true;
    let (got, expect) = cap_iteration_coefficient(&params, 0, p);
    assert_eq!(got, expect, "product formula");
    assert!(!got.is_zero(), "probe cap iteration must survive at step p");
    assert!(got.re.is_zero() && !got.eps.is_zero(), "failure is infinitesimal");
    // and the honest d1 coefficient vanishes at step p
    let honest = DifParams::d1(p, (-6, 6));
    let (g2, e2) = cap_iteration_coefficient(&honest, 0, p);
    assert_eq!(g2, e2);
    assert!(g2.is_zero());
}

#[test]
fn cap_product_formula_small_steps() {
    let p = 5;
    let params = DifParams::d1(p, (-6, 6));
    for lambda in -2..=2 {
        for k in 1..=3u32 {
            let (got, expect) = cap_iteration_coefficient(&params, lambda, k);
            assert_eq!(got, expect, "lambda={} k={}", lambda, k);
        }
    }
}

#[test]
fn dif_is_a_derivation_on_composites() {
    // d(g o f) = d(g) o f + g o d(f) on a sample of composable pairs
    use super::engine::compose_v;
    let p = 3;
    let params = DifParams::d1(p, (-6, 6));
    let f = reduce(&RawDiagram {
        p,
        bottom: word("EE"),
        lambda: 1,
        slices: vec![Slice::Dot { pos: 0 }],
    })
    .unwrap();
    let g = reduce(&RawDiagram {
        p,
        bottom: word("EE"),
        lambda: 1,
        slices: vec![Slice::CrossUu { pos: 0 }],
    })
    .unwrap();
    let lhs = apply_dif(&compose_v(&g, &f), &params);
    let rhs = compose_v(&apply_dif(&g, &params), &f).add(&compose_v(&g, &apply_dif(&f, &params)));
    assert_eq!(lhs, rhs);

    // with caps and cups
    let f2 = reduce(&RawDiagram {
        p,
        bottom: word("EF"),
        lambda: 2,
        slices: vec![Slice::CapCw { pos: 0 }],
    })
    .unwrap();
    let g2 = reduce(&RawDiagram {
        p,
        bottom: Word::default(),
        lambda: 2,
        slices: vec![Slice::CupCcw { pos: 0 }],
    })
    .unwrap();
    let lhs2 = apply_dif(&compose_v(&g2, &f2), &params);
    let rhs2 =
        compose_v(&apply_dif(&g2, &params), &f2).add(&compose_v(&g2, &apply_dif(&f2, &params)));
    assert_eq!(lhs2, rhs2);
}

#[test]
fn d_squared_is_multiple_of_nothing_small() {
    // d^p = 0 on a composite morphism, not just on generators
    let p = 3;
    let params = DifParams::d1(p, (-8, 8));
    let m = reduce(&RawDiagram {
        p,
        bottom: word("EF"),
        lambda: 1,
        slices: vec![Slice::CapCw { pos: 0 }, Slice::CupCw { pos: 0 }],
    })
    .unwrap();
    let it = apply_dif_iter(&m, &params, p);
    assert!(it.is_zero(), "d^p on cap-cup composite: {:?}", it);
}
