//! Slice-level interface to the rewrite engine: raw diagrams are vertical
//! stacks of generator slices; `reduce` folds them into normal form, and
//! normal forms render back to slices for composition and differentials.

use super::geom::{Path, PathPos, Point, Rat};
use super::lambda::{slide_across, HMono, HPoly};
use super::proto::{normalize, Proto, ProtoArc};
use super::term::{canonical_paths, Arc, ArcKind, BasisDiagram, Dir, End, Morphism, Word};
use crate::scalars::K;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Slice {
    Dot { pos: usize },
    CrossUu { pos: usize },
    CrossDd { pos: usize },
    /// creates [E, F]
    CupCw { pos: usize },
    /// creates [F, E]
    CupCcw { pos: usize },
    /// consumes [E, F]
    CapCw { pos: usize },
    /// consumes [F, E]
    CapCcw { pos: usize },
}

#[derive(Debug, thiserror::Error)]
pub enum DiagramError {
    #[error("slice {index} ({slice:?}) does not fit the word {word}: {reason}")]
    BadSlice {
        index: usize,
        slice: Slice,
        word: String,
        reason: String,
    },
    #[error("word length {0} exceeds the engine bound {1}")]
    Capacity(usize, usize),
}

/// A vertical stack of generator slices over a bottom word.
#[derive(Clone, Debug)]
pub struct RawDiagram {
    pub p: u32,
    pub bottom: Word,
    pub lambda: i64,
    pub slices: Vec<Slice>,
}

/// Apply a slice to an interface word, checking orientations.
pub fn slice_output(word: &Word, slice: &Slice) -> Result<Word, String> {
    let mut w = word.0.clone();
    let need = |pos: usize, want: &[Dir], w: &Vec<Dir>| -> Result<(), String> {
        if pos + want.len() > w.len() {
            return Err(format!("position {} out of range", pos));
        }
        for (k, d) in want.iter().enumerate() {
            if w[pos + k] != *d {
                return Err(format!(
                    "expected {:?} at position {}, found {:?}",
                    d,
                    pos + k,
                    w[pos + k]
                ));
            }
        }
        Ok(())
    };
    match *slice {
        Slice::Dot { pos } => {
            if pos >= w.len() {
                return Err(format!("dot position {} out of range", pos));
            }
        }
        Slice::CrossUu { pos } => {
            need(pos, &[Dir::E, Dir::E], &w)?;
            // word unchanged
        }
        Slice::CrossDd { pos } => {
            need(pos, &[Dir::F, Dir::F], &w)?;
        }
        Slice::CupCw { pos } => {
            if pos > w.len() {
                return Err(format!("cup position {} out of range", pos));
            }
            w.insert(pos, Dir::F);
            w.insert(pos, Dir::E);
        }
        Slice::CupCcw { pos } => {
            if pos > w.len() {
                return Err(format!("cup position {} out of range", pos));
            }
            w.insert(pos, Dir::E);
            w.insert(pos, Dir::F);
        }
        Slice::CapCw { pos } => {
            need(pos, &[Dir::E, Dir::F], &w)?;
            w.remove(pos);
            w.remove(pos);
        }
        Slice::CapCcw { pos } => {
            need(pos, &[Dir::F, Dir::E], &w)?;
            w.remove(pos);
            w.remove(pos);
        }
    }
    Ok(Word(w))
}

/// Degree of a slice over an interface word (caps and cups depend on the
/// weight of the region right of them).
pub fn slice_degree(word: &Word, lambda: i64, slice: &Slice) -> i64 {
    match *slice {
        Slice::Dot { .. } => 2,
        Slice::CrossUu { .. } | Slice::CrossDd { .. } => -2,
        Slice::CupCw { pos } => {
            let mu = word.weight_left_of(pos, lambda);
            1 - mu
        }
        Slice::CupCcw { pos } => {
            let mu = word.weight_left_of(pos, lambda);
            1 + mu
        }
        Slice::CapCw { pos } => {
            let mu = word.weight_right_of(pos + 1, lambda);
            1 - mu
        }
        Slice::CapCcw { pos } => {
            let mu = word.weight_right_of(pos + 1, lambda);
            1 + mu
        }
    }
}

impl RawDiagram {
    /// Validate the stack; returns the top word and the total degree.
    pub fn validate(&self) -> Result<(Word, i64), DiagramError> {
        let mut w = self.bottom.clone();
        let mut deg = 0i64;
        for (i, s) in self.slices.iter().enumerate() {
            deg += slice_degree(&w, self.lambda, s);
            w = slice_output(&w, s).map_err(|reason| DiagramError::BadSlice {
                index: i,
                slice: *s,
                word: w.render(),
                reason,
            })?;
        }
        Ok((w, deg))
    }
}

const SQUEEZE_NUM: i128 = 4;
const SQUEEZE_DEN: i128 = 5;

fn squeeze(y: Rat) -> Rat {
    y * Rat::new(SQUEEZE_NUM, SQUEEZE_DEN)
}

fn squeeze_path(path: &Path) -> Path {
    Path {
        pts: path
            .pts
            .iter()
            .map(|p| Point::new(p.x.clone(), squeeze(p.y.clone())))
            .collect(),
    }
}

fn top_x(i: usize) -> Rat {
    Rat::int(i as i64) + Rat::new(37, 1_000_000) * Rat::int(i as i64 + 1)
}

/// Build a proto realization of one basis term, squeezed into y in [0, 4/5].
fn term_to_proto(p: u32, bottom: &Word, top: &Word, lambda: i64, d: &BasisDiagram, coeff: K) -> Proto {
    let paths = canonical_paths(d, bottom.len(), top.len(), 37);
    let mut arcs = Vec::new();
    for (idx, arc) in d.arcs.iter().enumerate() {
        let path = squeeze_path(&paths[idx]);
        let nsegs = path.pts.len() - 1;
        // station dot position: adjacent to the station end
        let at_start = {
            let a = Arc {
                src: arc.src,
                dst: arc.dst,
            };
            a.station() == arc.src
        };
        let dots = if d.dots[idx] > 0 {
            let pos = if at_start {
                PathPos {
                    seg: 0,
                    t: Rat::new(1, 1000),
                }
            } else {
                PathPos {
                    seg: nsegs - 1,
                    t: Rat::new(999, 1000),
                }
            };
            vec![(pos, d.dots[idx])]
        } else {
            vec![]
        };
        arcs.push(ProtoArc {
            ends: Some((arc.src, arc.dst)),
            path,
            dots,
        });
    }
    Proto {
        p,
        bottom: bottom.clone(),
        top: top.clone(),
        lambda,
        arcs,
        coeff,
        bubble: HPoly::one(p),
    }
}

/// Extend a proto (whose arcs stop at the squeeze line) through one slice,
/// producing the glued proto with the new top word.
fn glue_slice(mut proto: Proto, slice: &Slice) -> Proto {
    let old_top = proto.top.clone();
    let new_top = slice_output(&old_top, slice).expect("absorb on invalid slice");
    let yline = Rat::new(SQUEEZE_NUM, SQUEEZE_DEN);
    let ytop = Rat::one();
    let ymid = Rat::new(9, 10);

    // Cap slices consume two interface positions; handle the merge before
    // renumbering so leg labels cannot collide with shifted survivors.
    if let Slice::CapCw { pos } | Slice::CapCcw { pos } = *slice {
        let cw = matches!(slice, Slice::CapCw { .. });
        // E leg flows into the cap, F leg flows out of it
        let (e_pos, f_pos) = if cw { (pos, pos + 1) } else { (pos + 1, pos) };
        let apex = Point::new(
            (top_x(pos) + top_x(pos + 1)) * Rat::new(1, 2),
            ymid.clone(),
        );
        let ia = proto
            .arcs
            .iter()
            .position(|a| a.ends.map_or(false, |(_, d)| d == End::Top(e_pos)))
            .expect("cap E leg strand");
        let ib = proto
            .arcs
            .iter()
            .position(|a| a.ends.map_or(false, |(s, _)| s == End::Top(f_pos)))
            .expect("cap F leg strand");
        if ia == ib {
            // closing a cup into a loop
            let arc = proto.arcs.remove(ia);
            let (s, d) = arc.ends.unwrap();
            assert_eq!(s, End::Top(f_pos));
            assert_eq!(d, End::Top(e_pos));
            // path runs F end -> E end at the squeeze line; close over the apex
            let mut closed = arc.path.pts.clone();
            closed.push(apex);
            closed.push(closed[0].clone());
            proto.arcs.push(ProtoArc {
                ends: None,
                path: Path { pts: closed },
                dots: arc.dots.clone(),
            });
        } else {
            let (lo, hi) = (ia.min(ib), ia.max(ib));
            let second = proto.arcs.remove(hi);
            let first = proto.arcs.remove(lo);
            let (earc, farc) = if lo == ia { (first, second) } else { (second, first) };
            let (es, ed) = earc.ends.unwrap();
            let (fs, fd) = farc.ends.unwrap();
            assert_eq!(ed, End::Top(e_pos), "E leg must flow into the cap");
            assert_eq!(fs, End::Top(f_pos), "F leg must flow out of the cap");
            let mut pts = earc.path.pts.clone();
            pts.push(apex);
            let joint_seg_base = pts.len() - 1;
            pts.extend(farc.path.pts.iter().cloned());
            let mut dots = earc.dots.clone();
            for (p, m) in &farc.dots {
                dots.push((
                    PathPos {
                        seg: p.seg + joint_seg_base + 1,
                        t: p.t.clone(),
                    },
                    *m,
                ));
            }
            proto.arcs.push(ProtoArc {
                ends: Some((es, fd)),
                path: Path { pts },
                dots,
            });
        }
    }

    // index map: old position -> new position for pass-through strands
    let shift: Box<dyn Fn(usize) -> usize> = match *slice {
        Slice::CupCw { pos } | Slice::CupCcw { pos } => {
            Box::new(move |i| if i >= pos { i + 2 } else { i })
        }
        Slice::CapCw { pos } | Slice::CapCcw { pos } => Box::new(move |i| {
            assert!(
                !(i == pos || i == pos + 1),
                "cap legs must be consumed before renumbering"
            );
            if i > pos + 1 {
                i - 2
            } else {
                i
            }
        }),
        Slice::CrossUu { pos } | Slice::CrossDd { pos } => Box::new(move |i| {
            if i == pos {
                pos + 1
            } else if i == pos + 1 {
                pos
            } else {
                i
            }
        }),
        _ => Box::new(|i| i),
    };

    // extend every remaining top-ended arc to the new boundary
    for arc in proto.arcs.iter_mut() {
        let ends = match arc.ends {
            Some(e) => e,
            None => continue,
        };
        let (src, dst) = ends;
        let mut front_inserted = false;
        let nsrc = match src {
            End::Top(i) => {
                let ni = shift(i);
                arc.path.pts.insert(0, Point::new(top_x(ni), ytop.clone()));
                front_inserted = true;
                End::Top(ni)
            }
            b => b,
        };
        let ndst = match dst {
            End::Top(i) => {
                let ni = shift(i);
                arc.path.pts.push(Point::new(top_x(ni), ytop.clone()));
                End::Top(ni)
            }
            b => b,
        };
        if front_inserted {
            for d in arc.dots.iter_mut() {
                d.0.seg += 1;
            }
        }
        arc.ends = Some((nsrc, ndst));
    }
    let _ = yline;

    match *slice {
        Slice::Dot { pos } => {
            // add a dot on the extension segment of the strand at `pos`
            let target = proto
                .arcs
                .iter()
                .position(|a| {
                    let (s, d) = a.ends.unwrap();
                    s == End::Top(pos) || d == End::Top(pos)
                })
                .expect("dot target strand");
            let arc = &mut proto.arcs[target];
            let (s, _) = arc.ends.unwrap();
            let pos_on = if s == End::Top(pos) {
                PathPos {
                    seg: 0,
                    t: Rat::new(1, 2),
                }
            } else {
                PathPos {
                    seg: arc.path.pts.len() - 2,
                    t: Rat::new(1, 2),
                }
            };
            super::proto::merge_dot_pub(arc, pos_on, 1);
        }
        Slice::CupCw { pos } | Slice::CupCcw { pos } => {
            let cw = matches!(slice, Slice::CupCw { .. });
            // legs at new positions pos (left) and pos+1 (right)
            let (e_pos, f_pos) = if cw { (pos, pos + 1) } else { (pos + 1, pos) };
            let apex = Point::new(
                (top_x(pos) + top_x(pos + 1)) * Rat::new(1, 2),
                ymid.clone(),
            );
            // flow: in at the F end, out at the E end
            let path = Path {
                pts: vec![
                    Point::new(top_x(f_pos), ytop.clone()),
                    apex,
                    Point::new(top_x(e_pos), ytop.clone()),
                ],
            };
            proto.arcs.push(ProtoArc {
                ends: Some((End::Top(f_pos), End::Top(e_pos))),
                path,
                dots: vec![],
            });
        }
        _ => {}
    }

    proto.top = new_top;
    proto
}

/// Absorb one slice into a morphism.
pub fn absorb(m: &Morphism, slice: &Slice) -> Morphism {
    let new_top = slice_output(&m.top, slice).expect("absorb on invalid slice");
    let mut out = Morphism::zero(m.p, m.bottom.clone(), new_top, m.lambda);
    for ((d, hm), c) in &m.terms {
        let proto = term_to_proto(m.p, &m.bottom, &m.top, m.lambda, d, *c);
        let glued = glue_slice(proto, slice);
        let normalized = normalize(glued);
        // multiply the carried bubble monomial back in
        let mut hp = HPoly::zero(m.p);
        hp.add_term(hm.clone(), K::one(m.p));
        let part = normalized.scale_bubbles(&hp);
        out = out.add(&part);
    }
    out
}

/// Reduce a raw diagram to normal form.
pub fn reduce(raw: &RawDiagram) -> Result<Morphism, DiagramError> {
    raw.validate()?;
    let mut m = Morphism::identity(raw.p, raw.bottom.clone(), raw.lambda);
    for s in &raw.slices {
        m = absorb(&m, s);
    }
    Ok(m)
}

/// Reduce with an alternate association order (used by confluence tests):
/// the slice list is split recursively and the halves composed.
pub fn reduce_split(raw: &RawDiagram) -> Result<Morphism, DiagramError> {
    raw.validate()?;
    fn rec(p: u32, bottom: &Word, lambda: i64, slices: &[Slice]) -> Morphism {
        if slices.len() <= 2 {
            let mut m = Morphism::identity(p, bottom.clone(), lambda);
            for s in slices {
                m = absorb(&m, s);
            }
            return m;
        }
        let mid = slices.len() / 2;
        let lower = rec(p, bottom, lambda, &slices[..mid]);
        let upper = rec(p, &lower.top, lambda, &slices[mid..]);
        compose_v(&upper, &lower)
    }
    Ok(rec(raw.p, &raw.bottom, raw.lambda, &raw.slices))
}

/// Render a basis term to slices, bottom to top; returns the slice list.
pub fn render_term(bottom: &Word, top: &Word, d: &BasisDiagram) -> Vec<Slice> {
    let paths = canonical_paths(d, bottom.len(), top.len(), 37);
    // events: crossings and cap/cup apexes ordered by height
    #[derive(Debug)]
    enum Ev {
        Cross(usize, usize, Point),
        CapApex(usize, Rat),
        CupApex(usize, Rat),
    }
    let mut events: Vec<(Rat, Ev)> = Vec::new();
    for i in 0..paths.len() {
        for j in i + 1..paths.len() {
            for (pt, _, _) in paths[i].intersections(&paths[j]) {
                events.push((pt.y.clone(), Ev::Cross(i, j, pt)));
            }
        }
    }
    for (i, arc) in d.arcs.iter().enumerate() {
        match arc.kind() {
            ArcKind::Cap => {
                let apex = paths[i].pts[1].clone();
                events.push((apex.y.clone(), Ev::CapApex(i, apex.x)));
            }
            ArcKind::Cup => {
                let apex = paths[i].pts[1].clone();
                events.push((apex.y.clone(), Ev::CupApex(i, apex.x)));
            }
            _ => {}
        }
    }
    events.sort_by(|a, b| a.0.cmp(&b.0));
    for w in events.windows(2) {
        assert!(w[0].0 < w[1].0, "coincident event heights in rendering");
    }

    let mut slices: Vec<Slice> = Vec::new();

    // station dots on bottom-anchored arcs come first
    for (i, arc) in d.arcs.iter().enumerate() {
        if d.dots[i] == 0 {
            continue;
        }
        let station = arc.station();
        if let End::Bot(pos) = station {
            for _ in 0..d.dots[i] {
                slices.push(Slice::Dot { pos });
            }
        }
    }

    // sweep: occupancy of the horizontal line just below each event
    let occupancy = |y: &Rat| -> Vec<(usize, i32, Rat)> {
        // (arc, flow, x) sorted by x
        let mut hits = Vec::new();
        for (i, path) in paths.iter().enumerate() {
            for (_, a, b) in path.segments() {
                let (ylo, yhi) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
                if y < ylo || y >= yhi {
                    continue;
                }
                let dy = b.y.clone() - a.y.clone();
                if dy.is_zero() {
                    continue;
                }
                let t = (y.clone() - a.y.clone()) / dy.clone();
                let x = a.x.clone() + t * (b.x.clone() - a.x.clone());
                hits.push((i, dy.sign(), x));
            }
        }
        hits.sort_by(|l, r| l.2.cmp(&r.2));
        hits
    };

    let mut prev_y = Rat::zero();
    for (ey, ev) in &events {
        let y_before = (prev_y.clone() + ey.clone()) * Rat::new(1, 2);
        let occ = occupancy(&y_before);
        match ev {
            Ev::Cross(i, j, _pt) => {
                let pi = occ.iter().position(|(a, _, _)| a == i).unwrap();
                let pj = occ.iter().position(|(a, _, _)| a == j).unwrap();
                let (lo, hi) = if pi < pj { (pi, pj) } else { (pj, pi) };
                assert_eq!(hi, lo + 1, "crossing strands are not adjacent");
                let fl = occ[lo].1;
                let fr = occ[hi].1;
                match (fl > 0, fr > 0) {
                    (true, true) => slices.push(Slice::CrossUu { pos: lo }),
                    (false, false) => slices.push(Slice::CrossDd { pos: lo }),
                    (false, true) => {
                        // [F,E] -> [E,F]
                        slices.push(Slice::CupCw { pos: lo + 2 });
                        slices.push(Slice::CrossUu { pos: lo + 1 });
                        slices.push(Slice::CapCcw { pos: lo });
                    }
                    (true, false) => {
                        // [E,F] -> [F,E]
                        slices.push(Slice::CupCcw { pos: lo + 2 });
                        slices.push(Slice::CrossDd { pos: lo + 1 });
                        slices.push(Slice::CapCw { pos: lo });
                    }
                }
            }
            Ev::CapApex(i, _) => {
                let positions: Vec<usize> = occ
                    .iter()
                    .enumerate()
                    .filter(|(_, (a, _, _))| a == i)
                    .map(|(k, _)| k)
                    .collect();
                assert_eq!(positions.len(), 2, "cap legs not found");
                assert_eq!(positions[1], positions[0] + 1, "cap legs not adjacent");
                let lo = positions[0];
                // identify the left leg's flow: up = E = cw cap
                let left_flow = occ[lo].1;
                if left_flow > 0 {
                    slices.push(Slice::CapCw { pos: lo });
                } else {
                    slices.push(Slice::CapCcw { pos: lo });
                }
            }
            Ev::CupApex(i, ax) => {
                // insertion position: strands left of the apex x
                let pos = occ.iter().filter(|(_, _, x)| x < ax).count();
                // flow orientation of the new legs: which end is E
                let arc = &d.arcs[*i];
                let (s, dst) = (arc.src, arc.dst);
                let (si, di) = match (s, dst) {
                    (End::Top(a), End::Top(b)) => (a, b),
                    _ => unreachable!(),
                };
                // dst is the E end (flow exits upward)
                if di < si {
                    slices.push(Slice::CupCw { pos });
                } else {
                    slices.push(Slice::CupCcw { pos });
                }
            }
        }
        prev_y = ey.clone();
    }

    // station dots on top-anchored arcs (cups) come last
    for (i, arc) in d.arcs.iter().enumerate() {
        if d.dots[i] == 0 {
            continue;
        }
        if let End::Top(pos) = arc.station() {
            for _ in 0..d.dots[i] {
                slices.push(Slice::Dot { pos });
            }
        }
    }

    // sanity: the slice stack must reproduce the top word
    let mut w = bottom.clone();
    for s in &slices {
        w = slice_output(&w, s).unwrap_or_else(|e| {
            panic!("rendered slices invalid: {:?} on {} ({})", s, w.render(), e)
        });
    }
    assert_eq!(&w, top, "rendered slices do not reach the top word");
    slices
}

/// Vertical composition `g` after `f` (f: A -> B, g: B -> C).
pub fn compose_v(g: &Morphism, f: &Morphism) -> Morphism {
    assert_eq!(f.top, g.bottom, "boundary mismatch in vertical composition");
    assert_eq!(f.lambda, g.lambda);
    let mut out = Morphism::zero(f.p, f.bottom.clone(), g.top.clone(), f.lambda);
    for ((d, hm), c) in &g.terms {
        let slices = render_term(&g.bottom, &g.top, d);
        let mut acc = f.clone();
        for s in &slices {
            acc = absorb(&acc, s);
        }
        let mut hp = HPoly::zero(f.p);
        hp.add_term(hm.clone(), *c);
        out = out.add(&acc.scale_bubbles(&hp));
    }
    out
}

/// Horizontal composition: `f` to the left of `g`. Requires
/// `f.lambda == g.lambda + weight shift of g's word`.
pub fn compose_h(f: &Morphism, g: &Morphism) -> Morphism {
    assert_eq!(
        f.lambda,
        g.lambda + g.bottom.weight_shift(),
        "weights do not match in horizontal composition"
    );
    let p = f.p;
    let mut bottom = f.bottom.0.clone();
    bottom.extend(g.bottom.0.iter().cloned());
    let mut top = f.top.0.clone();
    top.extend(g.top.0.iter().cloned());
    let bottom = Word(bottom);
    let top = Word(top);
    let mut out = Morphism::zero(p, bottom.clone(), top.clone(), g.lambda);

    let shift_end = |e: End| -> End {
        match e {
            End::Bot(i) => End::Bot(i + f.bottom.len()),
            End::Top(i) => End::Top(i + f.top.len()),
        }
    };

    for ((df, hf), cf) in &f.terms {
        for ((dg, hg), cg) in &g.terms {
            // combined diagram
            let mut pairs = Vec::new();
            for (a, m) in df.arcs.iter().zip(&df.dots) {
                pairs.push((*a, *m));
            }
            for (a, m) in dg.arcs.iter().zip(&dg.dots) {
                pairs.push((
                    Arc {
                        src: shift_end(a.src),
                        dst: shift_end(a.dst),
                    },
                    *m,
                ));
            }
            let combined = BasisDiagram::new(pairs);
            // f's bubbles slide across g's top word to the far right
            let mut hpoly_f = HPoly::zero(p);
            hpoly_f.add_term(hf.clone(), *cf * *cg);
            let mut states: Vec<(HPoly, Vec<(usize, u32)>)> = vec![(hpoly_f, Vec::new())];
            for (j, dir) in g.top.0.iter().enumerate() {
                let up = *dir == Dir::E;
                let mut next = Vec::new();
                for (h, deps) in states {
                    for (dots, h2) in slide_across(&h, up) {
                        let mut deps2 = deps.clone();
                        if dots > 0 {
                            deps2.push((f.top.len() + j, dots));
                        }
                        next.push((h2, deps2));
                    }
                }
                states = next;
            }
            for (h2, deps) in states {
                if deps.is_empty() {
                    let mut m1 = Morphism::zero(p, bottom.clone(), top.clone(), g.lambda);
                    m1.add_term(combined.clone(), vec![], K::one(p));
                    let mut hh = h2.clone();
                    let mut hg_poly = HPoly::zero(p);
                    hg_poly.add_term(hg.clone(), K::one(p));
                    hh = hh.mul(&hg_poly);
                    out = out.add(&m1.scale_bubbles(&hh));
                } else {
                    // deposit dots near the tops of the crossed strands and
                    // normalize through the proto engine
                    let mut proto =
                        term_to_proto(p, &bottom, &top, g.lambda, &combined, K::one(p));
                    for (pos, dcount) in &deps {
                        let target = proto
                            .arcs
                            .iter()
                            .position(|a| {
                                let (s, d2) = a.ends.unwrap();
                                s == End::Top(*pos) || d2 == End::Top(*pos)
                            })
                            .expect("slide deposit strand");
                        let arc = &mut proto.arcs[target];
                        let (s, _) = arc.ends.unwrap();
                        let pp = if s == End::Top(*pos) {
                            PathPos {
                                seg: 0,
                                t: Rat::new(1, 500),
                            }
                        } else {
                            PathPos {
                                seg: arc.path.pts.len() - 2,
                                t: Rat::new(499, 500),
                            }
                        };
                        super::proto::merge_dot_pub(arc, pp, *dcount);
                    }
                    let normalized = normalize(proto);
                    let mut hh = h2.clone();
                    let mut hg_poly = HPoly::zero(p);
                    hg_poly.add_term(hg.clone(), K::one(p));
                    hh = hh.mul(&hg_poly);
                    out = out.add(&normalized.scale_bubbles(&hh));
                }
            }
        }
    }
    out
}

/// Degree of a morphism (asserting homogeneity across terms).
pub fn degree(m: &Morphism) -> Option<i64> {
    let mut deg = None;
    for ((d, hm), _) in &m.terms {
        let slices = render_term(&m.bottom, &m.top, d);
        let mut w = m.bottom.clone();
        let mut total = 0i64;
        for s in &slices {
            total += slice_degree(&w, m.lambda, s);
            w = slice_output(&w, s).unwrap();
        }
        total += super::lambda::hmono_degree(hm);
        match deg {
            None => deg = Some(total),
            Some(existing) => assert_eq!(existing, total, "inhomogeneous morphism"),
        }
    }
    deg
}

/// Identity on a word with explicit letters, convenience for tests.
pub fn word(s: &str) -> Word {
    Word(
        s.chars()
            .map(|c| match c {
                'E' | 'e' => Dir::E,
                'F' | 'f' => Dir::F,
                _ => panic!("bad word letter {}", c),
            })
            .collect(),
    )
}
