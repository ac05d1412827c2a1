//! The mechanized relation library: every defining relation of the
//! 2-category as reducible slice stacks, differential-preservation checks
//! over a weight window, and p-nilpotence verification.

use super::dif::{apply_dif, apply_dif_iter, apply_dif_raw};
use super::engine::{reduce, word, RawDiagram, Slice};
use super::lambda::HPoly;
use super::params::DifParams;
use super::term::{BasisDiagram, Morphism, Word};
use crate::report::Suite;
use crate::scalars::K;

/// One side of a relation: an integer-linear combination of slice stacks
/// with constant bubble factors.
pub type Side = Vec<(i64, Vec<Slice>, HPoly)>;

pub struct Relation {
    pub id: String,
    pub lambda: i64,
    pub bottom: Word,
    pub lhs: Side,
    pub rhs: Side,
}

fn stack(slices: &[Slice]) -> Vec<Slice> {
    slices.to_vec()
}

fn dots(pos: usize, n: i64) -> Vec<Slice> {
    (0..n).map(|_| Slice::Dot { pos }).collect()
}

/// Evaluate a side to a normal form.
pub fn eval_side(p: u32, bottom: &Word, lambda: i64, side: &Side) -> Morphism {
    let mut out: Option<Morphism> = None;
    for (coeff, slices, hpoly) in side {
        let raw = RawDiagram {
            p,
            bottom: bottom.clone(),
            lambda,
            slices: slices.clone(),
        };
        let m = reduce(&raw)
            .expect("relation side fails to typecheck")
            .scale(K::from_int(p, *coeff))
            .scale_bubbles(hpoly);
        out = Some(match out {
            None => m,
            Some(acc) => acc.add(&m),
        });
    }
    out.expect("empty side")
}

/// Differential of a side by Leibniz (diagram part and bubble factor).
pub fn dif_side(p: u32, bottom: &Word, lambda: i64, side: &Side, params: &DifParams) -> Morphism {
    let mut out: Option<Morphism> = None;
    for (coeff, slices, hpoly) in side {
        let dd = apply_dif_raw(p, bottom, lambda, slices, params)
            .scale(K::from_int(p, *coeff))
            .scale_bubbles(hpoly);
        let raw = RawDiagram {
            p,
            bottom: bottom.clone(),
            lambda,
            slices: slices.clone(),
        };
        let base = reduce(&raw)
            .unwrap()
            .scale(K::from_int(p, *coeff))
            .scale_bubbles(&hpoly.dif());
        let total = dd.add(&base);
        out = Some(match out {
            None => total,
            Some(acc) => acc.add(&total),
        });
    }
    out.expect("empty side")
}

/// The S-type sideways crossing (FE -> EF) as slices, two realizations.
pub fn sideways_s(version: u8) -> Vec<Slice> {
    match version {
        0 => stack(&[
            Slice::CupCw { pos: 2 },
            Slice::CrossUu { pos: 1 },
            Slice::CapCcw { pos: 0 },
        ]),
        _ => stack(&[
            Slice::CupCw { pos: 0 },
            Slice::CrossDd { pos: 1 },
            Slice::CapCcw { pos: 2 },
        ]),
    }
}

/// The T-type sideways crossing (EF -> FE), two realizations.
pub fn sideways_t(version: u8) -> Vec<Slice> {
    match version {
        0 => stack(&[
            Slice::CupCcw { pos: 2 },
            Slice::CrossDd { pos: 1 },
            Slice::CapCw { pos: 0 },
        ]),
        _ => stack(&[
            Slice::CupCcw { pos: 0 },
            Slice::CrossUu { pos: 1 },
            Slice::CapCw { pos: 2 },
        ]),
    }
}

/// cw circle with `m` dots as slices (on the empty word).
fn cw_circle(m: i64) -> Vec<Slice> {
    let mut s = vec![Slice::CupCw { pos: 0 }];
    s.extend(dots(0, m));
    s.push(Slice::CapCw { pos: 0 });
    s
}

fn ccw_circle(m: i64) -> Vec<Slice> {
    let mut s = vec![Slice::CupCcw { pos: 0 }];
    s.extend(dots(0, m));
    s.push(Slice::CapCcw { pos: 0 });
    s
}

/// Build the relation library over a weight window.
pub fn relation_library(p: u32, window: (i64, i64)) -> Vec<Relation> {
    let mut rels = Vec::new();
    let one = HPoly::one(p);
    let unit = |s: Vec<Slice>| vec![(1i64, s, one.clone())];
    for l in window.0..=window.1 {
        // (4.4a) zigzags
        rels.push(Relation {
            id: "4.4a-zig-e1".into(),
            lambda: l,
            bottom: word("E"),
            lhs: unit(stack(&[Slice::CupCcw { pos: 1 }, Slice::CapCw { pos: 0 }])),
            rhs: unit(vec![]),
        });
        rels.push(Relation {
            id: "4.4a-zig-e2".into(),
            lambda: l,
            bottom: word("E"),
            lhs: unit(stack(&[Slice::CupCw { pos: 0 }, Slice::CapCcw { pos: 1 }])),
            rhs: unit(vec![]),
        });
        rels.push(Relation {
            id: "4.4a-zig-f1".into(),
            lambda: l,
            bottom: word("F"),
            lhs: unit(stack(&[Slice::CupCw { pos: 1 }, Slice::CapCcw { pos: 0 }])),
            rhs: unit(vec![]),
        });
        rels.push(Relation {
            id: "4.4a-zig-f2".into(),
            lambda: l,
            bottom: word("F"),
            lhs: unit(stack(&[Slice::CupCcw { pos: 0 }, Slice::CapCw { pos: 1 }])),
            rhs: unit(vec![]),
        });
        // (4.4b) dots slide across caps and cups
        rels.push(Relation {
            id: "4.4b-cap-cw".into(),
            lambda: l,
            bottom: word("EF"),
            lhs: unit(stack(&[Slice::Dot { pos: 0 }, Slice::CapCw { pos: 0 }])),
            rhs: unit(stack(&[Slice::Dot { pos: 1 }, Slice::CapCw { pos: 0 }])),
        });
        rels.push(Relation {
            id: "4.4b-cap-ccw".into(),
            lambda: l,
            bottom: word("FE"),
            lhs: unit(stack(&[Slice::Dot { pos: 0 }, Slice::CapCcw { pos: 0 }])),
            rhs: unit(stack(&[Slice::Dot { pos: 1 }, Slice::CapCcw { pos: 0 }])),
        });
        rels.push(Relation {
            id: "4.4b-cup-cw".into(),
            lambda: l,
            bottom: Word::default(),
            lhs: unit(stack(&[Slice::CupCw { pos: 0 }, Slice::Dot { pos: 0 }])),
            rhs: unit(stack(&[Slice::CupCw { pos: 0 }, Slice::Dot { pos: 1 }])),
        });
        rels.push(Relation {
            id: "4.4b-cup-ccw".into(),
            lambda: l,
            bottom: Word::default(),
            lhs: unit(stack(&[Slice::CupCcw { pos: 0 }, Slice::Dot { pos: 0 }])),
            rhs: unit(stack(&[Slice::CupCcw { pos: 0 }, Slice::Dot { pos: 1 }])),
        });
        // (4.4c) the two sideways-crossing realizations agree
        rels.push(Relation {
            id: "4.4c-sideways-s".into(),
            lambda: l,
            bottom: word("FE"),
            lhs: unit(sideways_s(0)),
            rhs: unit(sideways_s(1)),
        });
        rels.push(Relation {
            id: "4.4c-sideways-t".into(),
            lambda: l,
            bottom: word("EF"),
            lhs: unit(sideways_t(0)),
            rhs: unit(sideways_t(1)),
        });
        // (4.5) positivity and normalization on real bubbles
        if l >= 2 {
            rels.push(Relation {
                id: "4.5-cw-negative".into(),
                lambda: l,
                bottom: Word::default(),
                lhs: unit(cw_circle(l - 2)),
                rhs: vec![(0, vec![], one.clone())],
            });
        }
        if l >= 1 {
            rels.push(Relation {
                id: "4.5-cw-zero".into(),
                lambda: l,
                bottom: Word::default(),
                lhs: unit(cw_circle(l - 1)),
                rhs: unit(vec![]),
            });
        }
        if l <= -2 {
            rels.push(Relation {
                id: "4.5-ccw-negative".into(),
                lambda: l,
                bottom: Word::default(),
                lhs: unit(ccw_circle(-l - 2)),
                rhs: vec![(0, vec![], one.clone())],
            });
        }
        if l <= -1 {
            rels.push(Relation {
                id: "4.5-ccw-zero".into(),
                lambda: l,
                bottom: Word::default(),
                lhs: unit(ccw_circle(-l - 1)),
                rhs: unit(vec![]),
            });
        }
        // (4.6) infinite Grassmannian, degrees 1..4: the sum of products of
        // opposite bubbles vanishes; real bubbles enter as closed diagrams,
        // fake ones as their resolved values.
        for m in 1..=4i64 {
            let mut lhs: Side = Vec::new();
            for a in 0..=m {
                let b = m - a;
                let cw_dots = a - 1 + l;
                let ccw_dots = b - 1 - l;
                match (cw_dots >= 0, ccw_dots >= 0) {
                    (true, true) => {
                        let mut s = cw_circle(cw_dots);
                        s.extend(ccw_circle(ccw_dots));
                        lhs.push((1, s, one.clone()));
                    }
                    (true, false) => {
                        lhs.push((1, cw_circle(cw_dots), HPoly::ccw(p, b)));
                    }
                    (false, true) => {
                        lhs.push((1, ccw_circle(ccw_dots), HPoly::h(p, a)));
                    }
                    (false, false) => {
                        lhs.push((1, vec![], HPoly::h(p, a).mul(&HPoly::ccw(p, b))));
                    }
                }
            }
            rels.push(Relation {
                id: format!("4.6-grass-m{}", m),
                lambda: l,
                bottom: Word::default(),
                lhs,
                rhs: vec![(0, vec![], one.clone())],
            });
        }
        // (4.7) nilHecke relations, both orientations
        rels.push(Relation {
            id: "4.7a-uu".into(),
            lambda: l,
            bottom: word("EE"),
            lhs: unit(stack(&[Slice::CrossUu { pos: 0 }, Slice::CrossUu { pos: 0 }])),
            rhs: vec![(0, vec![], one.clone())],
        });
        rels.push(Relation {
            id: "4.7a-dd".into(),
            lambda: l,
            bottom: word("FF"),
            lhs: unit(stack(&[Slice::CrossDd { pos: 0 }, Slice::CrossDd { pos: 0 }])),
            rhs: vec![(0, vec![], one.clone())],
        });
        rels.push(Relation {
            id: "4.7b-uu".into(),
            lambda: l,
            bottom: word("EEE"),
            lhs: unit(stack(&[
                Slice::CrossUu { pos: 0 },
                Slice::CrossUu { pos: 1 },
                Slice::CrossUu { pos: 0 },
            ])),
            rhs: unit(stack(&[
                Slice::CrossUu { pos: 1 },
                Slice::CrossUu { pos: 0 },
                Slice::CrossUu { pos: 1 },
            ])),
        });
        rels.push(Relation {
            id: "4.7b-dd".into(),
            lambda: l,
            bottom: word("FFF"),
            lhs: unit(stack(&[
                Slice::CrossDd { pos: 0 },
                Slice::CrossDd { pos: 1 },
                Slice::CrossDd { pos: 0 },
            ])),
            rhs: unit(stack(&[
                Slice::CrossDd { pos: 1 },
                Slice::CrossDd { pos: 0 },
                Slice::CrossDd { pos: 1 },
            ])),
        });
        rels.push(Relation {
            id: "4.7c-uu".into(),
            lambda: l,
            bottom: word("EE"),
            lhs: vec![
                (1, stack(&[Slice::Dot { pos: 0 }, Slice::CrossUu { pos: 0 }]), one.clone()),
                (-1, stack(&[Slice::CrossUu { pos: 0 }, Slice::Dot { pos: 1 }]), one.clone()),
            ],
            rhs: unit(vec![]),
        });
        rels.push(Relation {
            id: "4.7c-uu2".into(),
            lambda: l,
            bottom: word("EE"),
            lhs: vec![
                (1, stack(&[Slice::CrossUu { pos: 0 }, Slice::Dot { pos: 0 }]), one.clone()),
                (-1, stack(&[Slice::Dot { pos: 1 }, Slice::CrossUu { pos: 0 }]), one.clone()),
            ],
            rhs: unit(vec![]),
        });
        rels.push(Relation {
            id: "4.7c-dd".into(),
            lambda: l,
            bottom: word("FF"),
            lhs: vec![
                (1, stack(&[Slice::Dot { pos: 1 }, Slice::CrossDd { pos: 0 }]), one.clone()),
                (-1, stack(&[Slice::CrossDd { pos: 0 }, Slice::Dot { pos: 0 }]), one.clone()),
            ],
            rhs: unit(vec![]),
        });
        // (4.8) curls in the four orientation/side combinations
        {
            // right curl on an up strand: -sum_{a+b=-l} dots^b h_a
            let mut rhs: Side = Vec::new();
            for a in 0..=(-l).max(-1) {
                let b = -l - a;
                if b < 0 {
                    continue;
                }
                rhs.push((-1, dots(0, b), HPoly::h(p, a)));
            }
            if rhs.is_empty() {
                rhs.push((0, vec![], one.clone()));
            }
            rels.push(Relation {
                id: "4.8a-up-right".into(),
                lambda: l,
                bottom: word("E"),
                lhs: unit(stack(&[
                    Slice::CupCw { pos: 1 },
                    Slice::CrossUu { pos: 0 },
                    Slice::CapCw { pos: 1 },
                ])),
                rhs,
            });
        }
        {
            // left curl on an up strand: +sum_{a+b=l+2} ccw_a (left) dots^b;
            // the bubble slides across the strand into the right region
            let k = l + 2;
            let mut rhs: Side = Vec::new();
            for a in 0..=k.max(-1) {
                let b = k - a;
                if b < 0 {
                    continue;
                }
                for (extra, h2) in super::lambda::slide_across(&HPoly::ccw(p, a), true) {
                    rhs.push((1, dots(0, b + extra as i64), h2));
                }
            }
            if rhs.is_empty() {
                rhs.push((0, vec![], one.clone()));
            }
            rels.push(Relation {
                id: "4.8b-up-left".into(),
                lambda: l,
                bottom: word("E"),
                lhs: unit(stack(&[
                    Slice::CupCcw { pos: 0 },
                    Slice::CrossUu { pos: 1 },
                    Slice::CapCcw { pos: 0 },
                ])),
                rhs,
            });
        }
        {
            // right curl on a down strand: +sum_{a+b=l} dots^b ccw_a
            let mut rhs: Side = Vec::new();
            for a in 0..=l.max(-1) {
                let b = l - a;
                if b < 0 {
                    continue;
                }
                rhs.push((1, dots(0, b), HPoly::ccw(p, a)));
            }
            if rhs.is_empty() {
                rhs.push((0, vec![], one.clone()));
            }
            rels.push(Relation {
                id: "4.8-down-right".into(),
                lambda: l,
                bottom: word("F"),
                lhs: unit(stack(&[
                    Slice::CupCcw { pos: 1 },
                    Slice::CrossDd { pos: 0 },
                    Slice::CapCcw { pos: 1 },
                ])),
                rhs,
            });
        }
        {
            // left curl on a down strand: -sum_{a+b=2-l} h_a (left) dots^b,
            // slid across the downward strand
            let k = 2 - l;
            let mut rhs: Side = Vec::new();
            for a in 0..=k.max(-1) {
                let b = k - a;
                if b < 0 {
                    continue;
                }
                for (extra, h2) in super::lambda::slide_across(&HPoly::h(p, a), false) {
                    rhs.push((-1, dots(0, b + extra as i64), h2));
                }
            }
            if rhs.is_empty() {
                rhs.push((0, vec![], one.clone()));
            }
            rels.push(Relation {
                id: "4.8-down-left".into(),
                lambda: l,
                bottom: word("F"),
                lhs: unit(stack(&[
                    Slice::CupCw { pos: 0 },
                    Slice::CrossDd { pos: 1 },
                    Slice::CapCw { pos: 0 },
                ])),
                rhs,
            });
        }
        // (4.9) identity decomposition
        {
            // EF: identity = -(S o T) + sum_{a+b+c=l-1} cup h_b cap with dots
            let mut rhs: Side = Vec::new();
            let mut st = sideways_t(0);
            st.extend(sideways_s(0));
            rhs.push((-1, st, one.clone()));
            if l >= 1 {
                for a in 0..=l - 1 {
                    for b in 0..=l - 1 - a {
                        let c = l - 1 - a - b;
                        let mut s = dots(0, a);
                        s.push(Slice::CapCw { pos: 0 });
                        s.push(Slice::CupCw { pos: 0 });
                        s.extend(dots(0, c));
                        rhs.push((1, s, HPoly::h(p, b)));
                    }
                }
            }
            rels.push(Relation {
                id: "4.9a-ef".into(),
                lambda: l,
                bottom: word("EF"),
                lhs: unit(vec![]),
                rhs,
            });
        }
        {
            // FE: identity = -(T o S) + sum_{a+b+c=-l-1} ccw inserts
            let mut rhs: Side = Vec::new();
            let mut ts = sideways_s(0);
            ts.extend(sideways_t(0));
            rhs.push((-1, ts, one.clone()));
            if -l >= 1 {
                for a in 0..=-l - 1 {
                    for b in 0..=-l - 1 - a {
                        let c = -l - 1 - a - b;
                        let mut s = dots(0, a);
                        s.push(Slice::CapCcw { pos: 0 });
                        s.push(Slice::CupCcw { pos: 0 });
                        s.extend(dots(0, c));
                        rhs.push((1, s, HPoly::ccw(p, b)));
                    }
                }
            }
            rels.push(Relation {
                id: "4.9b-fe".into(),
                lambda: l,
                bottom: word("FE"),
                lhs: unit(vec![]),
                rhs,
            });
        }
    }
    rels
}

/// Check that the engine itself satisfies every relation (reduction
/// soundness) at every weight.
pub fn check_relations_hold(p: u32, window: (i64, i64)) -> Suite {
    let mut suite = Suite::new(&format!("relations_hold p={} window={:?}", p, window));
    for r in relation_library(p, window) {
        let lhs = eval_side(p, &r.bottom, r.lambda, &r.lhs);
        let rhs = eval_side(p, &r.bottom, r.lambda, &r.rhs);
        let pass = lhs == rhs;
        suite.case(
            format!("{}@{}", r.id, r.lambda),
            pass,
            if pass {
                String::new()
            } else {
                format!("lhs={:?} rhs={:?}", lhs, rhs)
            },
        );
    }
    suite
}

/// Check that a differential preserves every relation at every weight.
pub fn check_relation_preservation(params: &DifParams) -> Suite {
    let p = params.p;
    // the differential of a cap/cup at l consults parameters at l-2, so shrink
    // the checked window accordingly
    let window = (params.window.0 + 2, params.window.1 - 2);
    let mut suite = Suite::new(&format!(
        "derivation p={} window={:?}",
        p, window
    ));
    for r in relation_library(p, window) {
        let dl = dif_side(p, &r.bottom, r.lambda, &r.lhs, params);
        let dr = dif_side(p, &r.bottom, r.lambda, &r.rhs, params);
        let pass = dl == dr;
        suite.case(
            format!("{}@{}", r.id, r.lambda),
            pass,
            if pass {
                String::new()
            } else {
                format!("d(lhs)={:?} d(rhs)={:?}", dl, dr)
            },
        );
    }
    suite
}

/// Generator morphisms at a given weight.
pub fn generator_morphisms(p: u32, lambda: i64) -> Vec<(String, Morphism)> {
    let mk = |bottom: &str, slices: &[Slice]| -> Morphism {
        reduce(&RawDiagram {
            p,
            bottom: word(bottom),
            lambda,
            slices: slices.to_vec(),
        })
        .unwrap()
    };
    vec![
        ("dot-up".into(), mk("E", &[Slice::Dot { pos: 0 }])),
        ("dot-down".into(), mk("F", &[Slice::Dot { pos: 0 }])),
        ("cross-uu".into(), mk("EE", &[Slice::CrossUu { pos: 0 }])),
        ("cross-dd".into(), mk("FF", &[Slice::CrossDd { pos: 0 }])),
        ("cup-cw".into(), mk("", &[Slice::CupCw { pos: 0 }])),
        ("cup-ccw".into(), mk("", &[Slice::CupCcw { pos: 0 }])),
        ("cap-cw".into(), mk("EF", &[Slice::CapCw { pos: 0 }])),
        ("cap-ccw".into(), mk("FE", &[Slice::CapCcw { pos: 0 }])),
    ]
}

/// d^p vanishes on every generator at every weight of the (shrunk) window.
pub fn check_p_nilpotence(params: &DifParams) -> Suite {
    let p = params.p;
    // iterating d^p consults parameters within p steps of the weight
    let margin = 2 + p as i64;
    let window = (params.window.0 + margin, params.window.1 - margin);
    let mut suite = Suite::new(&format!("nilpotence p={} window={:?}", p, window));
    for l in window.0..=window.1 {
        for (name, g) in generator_morphisms(p, l) {
            let it = apply_dif_iter(&g, params, p);
            suite.case(
                format!("{}@{}", name, l),
                it.is_zero(),
                if it.is_zero() {
                    String::new()
                } else {
                    format!("d^{} = {:?}", p, it)
                },
            );
        }
    }
    suite
}

/// The coefficient of the k-dotted cap inside d^k(cap_cw) is the product
/// `x(l-2) (x(l-2)+1) ... (x(l-2)+k-1)`.
pub fn cap_iteration_coefficient(params: &DifParams, lambda: i64, k: u32) -> (K, K) {
    let p = params.p;
    let cap = reduce(&RawDiagram {
        p,
        bottom: word("EF"),
        lambda,
        slices: vec![Slice::CapCw { pos: 0 }],
    })
    .unwrap();
    let it = apply_dif_iter(&cap, params, k);
    // the k-dotted cap with trivial bubble
    let mut keyd = BasisDiagram::identity(&word("EF"));
    keyd = {
        let mut pairs = Vec::new();
        for (arc, _) in keyd.arcs.iter().zip(&keyd.dots) {
            let _ = arc;
        }
        pairs.clear();
        // build the cap diagram directly
        use super::term::{Arc, End};
        pairs.push((
            Arc {
                src: End::Bot(0),
                dst: End::Bot(1),
            },
            k,
        ));
        BasisDiagram::new(pairs)
    };
    let got = it
        .terms
        .get(&(keyd, vec![]))
        .copied()
        .unwrap_or_else(|| K::zero(p));
    let mut expect = K::one(p);
    for j in 0..k {
        expect = expect * (params.x(lambda - 2) + K::from_int(p, j as i64));
    }
    (got, expect)
}
