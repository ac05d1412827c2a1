//! The 2-categorical differential: Leibniz over generator slices, with
//! bubble terms transported to the rightmost region.

use super::engine::{absorb, render_term, slice_output, Slice};
use super::lambda::{slide_across, HPoly};
use super::params::DifParams;
use super::term::{Dir, Morphism, Word};
use crate::scalars::K;

/// Transport a bubble polynomial across the letters of a word suffix,
/// converting dot deposits into dot slices at the given positions.
fn transport_over(
    p: u32,
    h: HPoly,
    letters: &[(usize, Dir)],
) -> Vec<(Vec<Slice>, HPoly)> {
    let mut states: Vec<(Vec<Slice>, HPoly)> = vec![(Vec::new(), h)];
    for (pos, dir) in letters {
        let up = *dir == Dir::E;
        let mut next = Vec::new();
        for (slices, hh) in states {
            for (dots, h2) in slide_across(&hh, up) {
                let mut s2 = slices.clone();
                for _ in 0..dots {
                    s2.push(Slice::Dot { pos: *pos });
                }
                next.push((s2, h2));
            }
        }
        states = next;
    }
    let _ = p;
    states
}

/// Differential of one generator slice over an interface word: a list of
/// slice-replacements with bubble coefficients.
pub fn d_of_slice(
    word: &Word,
    lambda: i64,
    slice: &Slice,
    params: &DifParams,
) -> Vec<(K, Vec<Slice>, HPoly)> {
    let p = params.p;
    let one = HPoly::one(p);
    match *slice {
        Slice::Dot { pos } => {
            vec![(
                K::one(p),
                vec![Slice::Dot { pos }, Slice::Dot { pos }],
                one,
            )]
        }
        Slice::CrossUu { pos } => {
            let mu = word.weight_right_of(pos + 1, lambda);
            vec![
                (params.a(mu), vec![], one.clone()),
                (
                    -K::one(p) - params.a(mu),
                    vec![Slice::CrossUu { pos }, Slice::Dot { pos }],
                    one.clone(),
                ),
                (
                    -K::one(p) + params.a(mu),
                    vec![Slice::CrossUu { pos }, Slice::Dot { pos: pos + 1 }],
                    one,
                ),
            ]
        }
        Slice::CrossDd { pos } => {
            let mu = word.weight_right_of(pos + 1, lambda);
            vec![
                (params.abar(mu), vec![], one.clone()),
                (
                    -K::one(p) - params.abar(mu),
                    vec![Slice::CrossDd { pos }, Slice::Dot { pos }],
                    one.clone(),
                ),
                (
                    -K::one(p) + params.abar(mu),
                    vec![Slice::CrossDd { pos }, Slice::Dot { pos: pos + 1 }],
                    one,
                ),
            ]
        }
        Slice::CupCw { pos } | Slice::CupCcw { pos } => {
            let cw = matches!(slice, Slice::CupCw { .. });
            let mu = word.weight_left_of(pos, lambda);
            let (cd, cb) = if cw {
                (params.xbar(mu - 2), params.ybar(mu - 2))
            } else {
                (
                    -(params.x(mu) + params.y(mu) + params.y(mu)),
                    -params.y(mu),
                )
            };
            let mut out = Vec::new();
            if !cd.is_zero() {
                out.push((cd, vec![*slice, Slice::Dot { pos }], one.clone()));
            }
            if !cb.is_zero() {
                // bubble immediately right of the cup, in region mu; the
                // letters right of it after the slice are the old letters at
                // >= pos, shifted right by two
                let letters: Vec<(usize, Dir)> = word.0[pos..]
                    .iter()
                    .enumerate()
                    .map(|(k, d)| (pos + 2 + k, *d))
                    .collect();
                for (dots, h2) in transport_over(p, HPoly::h(p, 1), &letters) {
                    let mut slices = vec![*slice];
                    slices.extend(dots);
                    out.push((cb, slices, h2));
                }
            }
            out
        }
        Slice::CapCw { pos } | Slice::CapCcw { pos } => {
            let cw = matches!(slice, Slice::CapCw { .. });
            let mu = word.weight_right_of(pos + 1, lambda);
            let (cd, cb) = if cw {
                (params.x(mu - 2), params.y(mu - 2))
            } else {
                (
                    -(params.xbar(mu) + params.ybar(mu) + params.ybar(mu)),
                    -params.ybar(mu),
                )
            };
            let mut out = Vec::new();
            if !cd.is_zero() {
                out.push((cd, vec![Slice::Dot { pos }, *slice], one.clone()));
            }
            if !cb.is_zero() {
                // bubble right of the cap: the letters right of it after the
                // slice are the old letters at >= pos+2, shifted left by two
                let letters: Vec<(usize, Dir)> = word.0[pos + 2..]
                    .iter()
                    .enumerate()
                    .map(|(k, d)| (pos + k, *d))
                    .collect();
                for (dots, h2) in transport_over(p, HPoly::h(p, 1), &letters) {
                    let mut slices = vec![*slice];
                    slices.extend(dots);
                    out.push((cb, slices, h2));
                }
            }
            out
        }
    }
}

/// Apply the differential to a raw slice stack by the Leibniz rule,
/// reducing each summand.
pub fn apply_dif_raw(
    p: u32,
    bottom: &Word,
    lambda: i64,
    slices: &[Slice],
    params: &DifParams,
) -> Morphism {
    // interface words before each slice
    let mut words = vec![bottom.clone()];
    for s in slices {
        let w = slice_output(words.last().unwrap(), s).expect("invalid slice stack");
        words.push(w);
    }
    let top = words.last().unwrap().clone();
    let mut out = Morphism::zero(p, bottom.clone(), top, lambda);
    for i in 0..slices.len() {
        for (coeff, replacement, hpoly) in d_of_slice(&words[i], lambda, &slices[i], params) {
            if coeff.is_zero() {
                continue;
            }
            let mut m = Morphism::identity(p, bottom.clone(), lambda);
            for s in &slices[..i] {
                m = absorb(&m, s);
            }
            for s in &replacement {
                m = absorb(&m, s);
            }
            for s in &slices[i + 1..] {
                m = absorb(&m, s);
            }
            out = out.add(&m.scale(coeff).scale_bubbles(&hpoly));
        }
    }
    out
}

/// Apply the differential to a morphism in normal form.
pub fn apply_dif(m: &Morphism, params: &DifParams) -> Morphism {
    let p = m.p;
    let mut out = Morphism::zero(p, m.bottom.clone(), m.top.clone(), m.lambda);
    for ((d, hm), c) in &m.terms {
        let slices = render_term(&m.bottom, &m.top, d);
        // Leibniz over the diagram part
        let dd = apply_dif_raw(p, &m.bottom, m.lambda, &slices, params);
        let mut hp = HPoly::zero(p);
        hp.add_term(hm.clone(), *c);
        out = out.add(&dd.scale_bubbles(&hp));
        // Leibniz over the bubble part
        let dh = hp.dif();
        if !dh.is_zero() {
            let mut base = Morphism::zero(p, m.bottom.clone(), m.top.clone(), m.lambda);
            base.add_term(d.clone(), vec![], K::one(p));
            out = out.add(&base.scale_bubbles(&dh));
        }
    }
    out
}

/// Iterate the differential `n` times.
pub fn apply_dif_iter(m: &Morphism, params: &DifParams, n: u32) -> Morphism {
    let mut cur = m.clone();
    for _ in 0..n {
        cur = apply_dif(&cur, params);
        if cur.is_zero() {
            break;
        }
    }
    cur
}
