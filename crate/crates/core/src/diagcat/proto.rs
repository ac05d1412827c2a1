//! The normalization engine: a working 2-morphism term is a collection of
//! oriented polyline strands with dot packets and an accumulated bubble
//! coefficient. Normalization resolves, in order: dots away from their
//! stations, double crossings (coherent pairs vanish, incoherent pairs
//! rewrite through the identity decomposition), self-crossings (curls), and
//! closed loops (bubbles), until the term is a basis diagram.

use super::geom::{Path, PathPos, Point, Rat};
use super::lambda::{slide_across, HPoly};
use super::term::{Arc, BasisDiagram, End, Morphism, Word};
use crate::scalars::K;

#[derive(Clone, Debug)]
pub struct ProtoArc {
    /// `None` for a closed loop; otherwise flow source and target.
    pub ends: Option<(End, End)>,
    /// Flow-oriented polyline (closed loops: first point = last point).
    pub path: Path,
    /// Dot packets at positions along the path.
    pub dots: Vec<(PathPos, u32)>,
}

#[derive(Clone, Debug)]
pub struct Proto {
    pub p: u32,
    pub bottom: Word,
    pub top: Word,
    pub lambda: i64,
    pub arcs: Vec<ProtoArc>,
    pub coeff: K,
    pub bubble: HPoly,
}

#[derive(Clone, Debug)]
struct Crossing {
    a: usize,
    b: usize,
    pt: Point,
    pa: PathPos,
    pb: PathPos,
}

impl Proto {
    fn crossings(&self) -> Vec<Crossing> {
        let mut out = Vec::new();
        for i in 0..self.arcs.len() {
            for j in i + 1..self.arcs.len() {
                for (pt, pa, pb) in self.arcs[i].path.intersections(&self.arcs[j].path) {
                    out.push(Crossing { a: i, b: j, pt, pa, pb });
                }
            }
        }
        out
    }

    fn self_crossings(&self, i: usize) -> Vec<(Point, PathPos, PathPos)> {
        self.arcs[i].path.self_intersections()
    }

    /// Weight of the region containing `pt`, by a rightward ray cast.
    fn weight_at(&self, pt: &Point) -> i64 {
        let mut w = self.lambda;
        for arc in self.arcs.iter() {
            for (_, flow) in arc.path.ray_hits(pt) {
                w += 2 * flow as i64;
            }
        }
        w
    }

    /// Arcs hit by a rightward ray from `pt`, ordered by x, with vertical
    /// flow sign and hit position.
    fn ray_order(&self, pt: &Point) -> Vec<(usize, i32, PathPos)> {
        let mut hits: Vec<(usize, i32, PathPos, Rat)> = Vec::new();
        for (i, arc) in self.arcs.iter().enumerate() {
            for (seg, a, b) in arc.path.segments() {
                let (ylo, yhi) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
                if pt.y < *ylo || pt.y >= *yhi {
                    continue;
                }
                let dy = b.y.clone() - a.y.clone();
                if dy.is_zero() {
                    continue;
                }
                let t = (pt.y.clone() - a.y.clone()) / dy.clone();
                let x = a.x.clone() + t.clone() * (b.x.clone() - a.x.clone());
                if x > pt.x {
                    hits.push((i, dy.sign(), PathPos { seg, t }, x));
                }
            }
        }
        hits.sort_by(|l, r| l.3.cmp(&r.3));
        hits.into_iter().map(|(i, f, p, _)| (i, f, p)).collect()
    }
}

/// The station end of an arc: dots are canonical when no crossing separates
/// them from this end.
fn station_is_start(arc: &ProtoArc) -> bool {
    let (src, dst) = arc.ends.expect("closed loops have no station");
    let a = Arc { src, dst };
    a.station() == src
}

/// Crossing positions on arc `i` (pair crossings and both passes of
/// self-crossings), sorted.
fn crossing_positions_on(proto: &Proto, i: usize, crossings: &[Crossing]) -> Vec<PathPos> {
    let mut ps = Vec::new();
    for c in crossings {
        if c.a == i {
            ps.push(c.pa.clone());
        }
        if c.b == i {
            ps.push(c.pb.clone());
        }
    }
    for (_, p1, p2) in proto.self_crossings(i) {
        ps.push(p1);
        ps.push(p2);
    }
    ps.sort();
    ps
}

/// Normalize a proto term into a morphism (a sum of basis terms).
pub fn normalize(proto: Proto) -> Morphism {
    let mut out = Morphism::zero(
        proto.p,
        proto.bottom.clone(),
        proto.top.clone(),
        proto.lambda,
    );
    let mut stack = vec![proto];
    let mut fuel = 400_000usize;
    while let Some(t) = stack.pop() {
        fuel = fuel
            .checked_sub(1)
            .expect("diagram normalization exceeded its step budget");
        if t.coeff.is_zero() || t.bubble.is_zero() {
            continue;
        }
        step(t, &mut stack, &mut out);
    }
    out
}

fn step(t: Proto, stack: &mut Vec<Proto>, out: &mut Morphism) {
    let crossings = t.crossings();

    // 1. dots away from station
    for i in 0..t.arcs.len() {
        if t.arcs[i].ends.is_none() {
            continue; // loop dots handled at extraction
        }
        let on_arc = crossing_positions_on(&t, i, &crossings);
        if on_arc.is_empty() {
            continue;
        }
        let toward_start = station_is_start(&t.arcs[i]);
        for (k, (pos, _)) in t.arcs[i].dots.iter().enumerate() {
            let blocked = if toward_start {
                on_arc.iter().any(|c| c < pos)
            } else {
                on_arc.iter().any(|c| c > pos)
            };
            if blocked {
                push_dot(&t, i, k, toward_start, &crossings, stack);
                return;
            }
        }
    }

    // 2. double crossings between a pair
    for i in 0..t.arcs.len() {
        for j in i + 1..t.arcs.len() {
            let mut cs: Vec<&Crossing> = crossings
                .iter()
                .filter(|c| c.a == i && c.b == j)
                .collect();
            if cs.len() >= 2 {
                cs.sort_by(|l, r| l.pa.cmp(&r.pa));
                resolve_double(&t, cs[0], cs[1], &crossings, stack);
                return;
            }
        }
    }

    // 3. self-crossings (curls)
    for i in 0..t.arcs.len() {
        let selfs = t.self_crossings(i);
        if !selfs.is_empty() {
            resolve_curl(&t, i, &selfs[0], &crossings, stack);
            return;
        }
    }

    // 4. closed loops
    for i in 0..t.arcs.len() {
        if t.arcs[i].ends.is_none() {
            extract_loop(&t, i, stack);
            return;
        }
    }

    // 5. canonical: extract key
    let mut pairs = Vec::new();
    for arc in &t.arcs {
        let (src, dst) = arc.ends.unwrap();
        let dots: u32 = arc.dots.iter().map(|(_, m)| m).sum();
        pairs.push((Arc { src, dst }, dots));
    }
    let d = BasisDiagram::new(pairs);
    debug_assert_eq!(
        d.crossing_number(t.bottom.len(), t.top.len()),
        crossings.len(),
        "canonical term has non-minimal crossings"
    );
    out.add_poly_term(d, &t.bubble, t.coeff);
}

/// Position strictly between `pos` and the next feature in the walk
/// direction (`forward` = increasing position), staying on the same segment.
fn midpoint_toward(pos: &PathPos, features: &[PathPos], forward: bool) -> PathPos {
    let half = Rat::new(1, 2);
    if forward {
        let next = features.iter().filter(|f| *f > pos).min();
        match next {
            Some(f) if f.seg == pos.seg => PathPos {
                seg: pos.seg,
                t: (pos.t.clone() + f.t.clone()) * half,
            },
            _ => PathPos {
                seg: pos.seg,
                t: (pos.t.clone() + Rat::one()) * half,
            },
        }
    } else {
        let prev = features.iter().filter(|f| *f < pos).max();
        match prev {
            Some(f) if f.seg == pos.seg => PathPos {
                seg: pos.seg,
                t: (pos.t.clone() + f.t.clone()) * half,
            },
            _ => PathPos {
                seg: pos.seg,
                t: pos.t.clone() * half,
            },
        }
    }
}

/// All features (crossings and dots) on arc `i`.
fn features_on(t: &Proto, i: usize, crossings: &[Crossing]) -> Vec<PathPos> {
    let mut f = crossing_positions_on(t, i, crossings);
    f.extend(t.arcs[i].dots.iter().map(|(p, _)| p.clone()));
    f.sort();
    f
}

/// Move one dot of packet `k` on arc `i` across the nearest crossing toward
/// the station, emitting the main term and the splice correction.
fn push_dot(
    t: &Proto,
    i: usize,
    k: usize,
    toward_start: bool,
    crossings: &[Crossing],
    stack: &mut Vec<Proto>,
) {
    let pos = t.arcs[i].dots[k].0.clone();
    let on_arc = crossing_positions_on(t, i, crossings);
    // nearest crossing in the walk direction
    let target = if toward_start {
        on_arc.iter().filter(|c| **c < pos).max().cloned()
    } else {
        on_arc.iter().filter(|c| **c > pos).min().cloned()
    };
    let cpos = target.expect("push_dot called with no blocking crossing");
    let rec = crossings
        .iter()
        .find(|c| (c.a == i && c.pa == cpos) || (c.b == i && c.pb == cpos));

    // landing just past the crossing in the walk direction
    let feats = features_on(t, i, crossings);
    let landing = midpoint_toward(&cpos, &feats, !toward_start);

    // main term: one dot moved past the crossing
    let mut main = t.clone();
    {
        let arc = &mut main.arcs[i];
        arc.dots[k].1 -= 1;
        if arc.dots[k].1 == 0 {
            arc.dots.remove(k);
        }
        merge_dot(arc, landing, 1);
    }
    stack.push(main);

    // correction: crossing deleted and the moving dot consumed, as in the
    // dot-force relation
    match rec {
        Some(c) => {
            let (other, my_pos, other_pos) = if c.a == i {
                (c.b, &c.pa, &c.pb)
            } else {
                (c.a, &c.pb, &c.pa)
            };
            // movement direction along arc i at the crossing
            let dir_i = t.arcs[i].path.dir_at(my_pos);
            let m = if toward_start {
                (-dir_i.0, -dir_i.1)
            } else {
                dir_i
            };
            let dir_o = t.arcs[other].path.dir_at(other_pos);
            let det = dir_o.0 * m.1 - dir_o.1 * m.0;
            let sign = -det.sign();
            assert!(sign != 0, "degenerate crossing in dot push");
            let mut corr = splice(t, c, crossings);
            corr.coeff = corr.coeff * K::from_int(t.p, sign as i64);
            remove_one_dot_at(&mut corr, t, i, k);
            stack.push(corr);
        }
        None => {
            // the blocking crossing is a self-crossing; resolve that curl
            let sc = t
                .self_crossings(i)
                .into_iter()
                .find(|(_, p1, p2)| *p1 == cpos || *p2 == cpos)
                .expect("self crossing not found");
            resolve_curl(t, i, &sc, crossings, stack);
        }
    }
}

fn merge_dot(arc: &mut ProtoArc, pos: PathPos, mult: u32) {
    if mult == 0 {
        return;
    }
    for d in arc.dots.iter_mut() {
        if d.0 == pos {
            d.1 += mult;
            return;
        }
    }
    arc.dots.push((pos, mult));
    arc.dots.sort_by(|a, b| a.0.cmp(&b.0));
}

/// Public wrapper used by the slice engine to add dot packets.
pub fn merge_dot_pub(arc: &mut ProtoArc, pos: PathPos, mult: u32) {
    merge_dot(arc, pos, mult);
}

/// After a splice replacing arcs, subtract one dot from what was packet `k`
/// of old arc `i` (packets were carried over by geometric position).
fn remove_one_dot_at(corr: &mut Proto, old: &Proto, i: usize, k: usize) {
    let pt = old.arcs[i].path.point_at(&old.arcs[i].dots[k].0);
    for arc in corr.arcs.iter_mut() {
        for di in 0..arc.dots.len() {
            let (p, m) = arc.dots[di].clone();
            if arc.path.point_at(&p) == pt {
                if m == 1 {
                    arc.dots.remove(di);
                } else {
                    arc.dots[di].1 = m - 1;
                }
                return;
            }
        }
    }
    panic!("dot packet not found after splice");
}

/// Splice two arcs at a crossing: flow-consistent reconnection with a small
/// kiss offset. Dots are carried over by position.
fn splice(t: &Proto, c: &Crossing, crossings: &[Crossing]) -> Proto {
    let (i, j) = (c.a, c.b);
    let feats_i = features_on(t, i, crossings);
    let feats_j = features_on(t, j, crossings);
    let before_i = midpoint_toward(&c.pa, &feats_i, false);
    let after_i = midpoint_toward(&c.pa, &feats_i, true);
    let before_j = midpoint_toward(&c.pb, &feats_j, false);
    let after_j = midpoint_toward(&c.pb, &feats_j, true);

    // new arc 1: i-prefix + j-suffix; new arc 2: j-prefix + i-suffix
    let (p1, d1) = split_with_dots(&t.arcs[i], &before_i, true);
    let (s1, e1) = split_with_dots(&t.arcs[j], &after_j, false);
    let (p2, d2) = split_with_dots(&t.arcs[j], &before_j, true);
    let (s2, e2) = split_with_dots(&t.arcs[i], &after_i, false);

    let ends1 = match (t.arcs[i].ends, t.arcs[j].ends) {
        (Some((si, _)), Some((_, dj))) => Some((si, dj)),
        _ => panic!("splice of closed arcs is not supported"),
    };
    let ends2 = match (t.arcs[j].ends, t.arcs[i].ends) {
        (Some((sj, _)), Some((_, di))) => Some((sj, di)),
        _ => unreachable!(),
    };
    let arc1 = ProtoArc {
        ends: ends1,
        path: p1.join(&s1),
        dots: join_dots(&p1, d1, e1),
    };
    let arc2 = ProtoArc {
        ends: ends2,
        path: p2.join(&s2),
        dots: join_dots(&p2, d2, e2),
    };
    let mut arcs = Vec::new();
    for (k, a) in t.arcs.iter().enumerate() {
        if k != i && k != j {
            arcs.push(a.clone());
        }
    }
    arcs.push(arc1);
    arcs.push(arc2);
    Proto {
        p: t.p,
        bottom: t.bottom.clone(),
        top: t.top.clone(),
        lambda: t.lambda,
        arcs,
        coeff: t.coeff,
        bubble: t.bubble.clone(),
    }
}

/// Split an arc at a position, returning either the prefix (with its dots)
/// or the suffix (with dots re-indexed to the new path).
fn split_with_dots(arc: &ProtoArc, pos: &PathPos, prefix: bool) -> (Path, Vec<(PathPos, u32)>) {
    if prefix {
        let path = arc.path.prefix(pos);
        let dots = arc
            .dots
            .iter()
            .filter(|(p, _)| p < pos)
            .cloned()
            .collect();
        (path, dots)
    } else {
        let path = arc.path.suffix(pos);
        let dots = arc
            .dots
            .iter()
            .filter(|(p, _)| p > pos)
            .map(|(p, m)| {
                let np = if p.seg == pos.seg {
                    PathPos {
                        seg: 0,
                        t: (p.t.clone() - pos.t.clone()) / (Rat::one() - pos.t.clone()),
                    }
                } else {
                    PathPos {
                        seg: p.seg - pos.seg,
                        t: p.t.clone(),
                    }
                };
                (np, *m)
            })
            .collect();
        (path, dots)
    }
}

fn join_dots(
    prefix_path: &Path,
    mut prefix_dots: Vec<(PathPos, u32)>,
    suffix_dots: Vec<(PathPos, u32)>,
) -> Vec<(PathPos, u32)> {
    // Path::join concatenates the point lists, so the suffix's point k sits
    // at index prefix.len + k and its segment k becomes prefix.len + k.
    let off = prefix_path.pts.len();
    for (p, m) in suffix_dots {
        prefix_dots.push((
            PathPos {
                seg: p.seg + off,
                t: p.t,
            },
            m,
        ));
    }
    prefix_dots.sort_by(|a, b| a.0.cmp(&b.0));
    prefix_dots
}

/// Resolve a double crossing between two arcs.
fn resolve_double(
    t: &Proto,
    c1: &Crossing,
    c2: &Crossing,
    crossings: &[Crossing],
    stack: &mut Vec<Proto>,
) {
    let i = c1.a;
    let j = c1.b;
    assert_eq!((c2.a, c2.b), (i, j));
    // order along each arc (c1 comes first along i by construction)
    let (lo_i, hi_i) = if c1.pa < c2.pa { (c1, c2) } else { (c2, c1) };
    let same_order = (lo_i.pb < hi_i.pb) == (lo_i.pa < hi_i.pa);
    if same_order {
        // coherent bigon: the double crossing vanishes
        return;
    }
    let lens_clean = lens_is_clean(t, i, j, lo_i, hi_i, crossings);
    assert!(
        lens_clean,
        "double-crossing lens is not clean; freeing moves are not implemented"
    );

    // -1 times the uncrossed term
    let mut un = uncross(t, i, j, lo_i, hi_i, crossings);
    un.coeff = -un.coeff;
    stack.push(un);

    // + cap-bubble-cup insertions
    let feats_i = features_on(t, i, crossings);
    let feats_j = features_on(t, j, crossings);
    let bi = midpoint_toward(&lo_i.pa, &feats_i, false);
    let aj = midpoint_toward(&lo_i.pb, &feats_j, true);
    let bj = midpoint_toward(&hi_i.pb, &feats_j, false);
    let ai = midpoint_toward(&hi_i.pa, &feats_i, true);

    let (cap_pref, cap_pref_dots) = split_with_dots(&t.arcs[i], &bi, true);
    let (cap_suf, cap_suf_dots) = split_with_dots(&t.arcs[j], &aj, false);
    let (cup_pref, cup_pref_dots) = split_with_dots(&t.arcs[j], &bj, true);
    let (cup_suf, cup_suf_dots) = split_with_dots(&t.arcs[i], &ai, false);

    let cap_ends = Some((t.arcs[i].ends.unwrap().0, t.arcs[j].ends.unwrap().1));
    let cup_ends = Some((t.arcs[j].ends.unwrap().0, t.arcs[i].ends.unwrap().1));
    let cap_dot_pos = PathPos {
        seg: cap_pref.pts.len() - 1,
        t: Rat::new(1, 2),
    };
    let cup_dot_pos = PathPos {
        seg: cup_pref.pts.len() - 1,
        t: Rat::new(1, 2),
    };
    let cap_arc = ProtoArc {
        ends: cap_ends,
        path: cap_pref.join(&cap_suf),
        dots: join_dots(&cap_pref, cap_pref_dots, cap_suf_dots),
    };
    let cup_arc = ProtoArc {
        ends: cup_ends,
        path: cup_pref.join(&cup_suf),
        dots: join_dots(&cup_pref, cup_pref_dots, cup_suf_dots),
    };

    let mut rest: Vec<ProtoArc> = Vec::new();
    for (k, a) in t.arcs.iter().enumerate() {
        if k != i && k != j {
            rest.push(a.clone());
        }
    }

    // Frame-free classification: traverse the lens boundary along the two
    // flows (they are consistently oriented exactly because the bigon is
    // incoherent). A clockwise lens rewrites through clockwise bubbles with
    // bound (corridor weight - 1); a counterclockwise one through
    // counterclockwise bubbles with bound (-corridor - 1).
    let i_sub = {
        let pre = t.arcs[i].path.prefix(&hi_i.pa);
        pre.suffix(&lo_i.pa)
    };
    let j_sub = {
        let (jlo, jhi) = if lo_i.pb < hi_i.pb {
            (&lo_i.pb, &hi_i.pb)
        } else {
            (&hi_i.pb, &lo_i.pb)
        };
        let pre = t.arcs[j].path.prefix(jhi);
        pre.suffix(jlo)
    };
    let mut poly: Vec<Point> = i_sub.pts.clone();
    poly.extend(j_sub.pts.iter().cloned());
    let mut area2 = Rat::zero();
    for w in poly.windows(2) {
        area2 = area2 + (w[0].x.clone() * w[1].y.clone() - w[1].x.clone() * w[0].y.clone());
    }
    area2 = area2
        + (poly.last().unwrap().x.clone() * poly[0].y.clone()
            - poly[0].x.clone() * poly.last().unwrap().y.clone());
    assert!(area2.sign() != 0, "degenerate lens");
    let form_a = area2.sign() > 0; // the EF-side lens is counterclockwise

    // probe point just inside the lens at the lower corner, along the
    // bisector of the two inward directions
    let corner = &lo_i.pt;
    let d_in_i = t.arcs[i].path.dir_at(&lo_i.pa);
    let d_in_j_raw = t.arcs[j].path.dir_at(&lo_i.pb);
    // arc j's flow leaves the lens at the lower corner, so its inward
    // direction is reversed when the corner is its exit
    let j_into = if lo_i.pb < hi_i.pb {
        d_in_j_raw
    } else {
        (-d_in_j_raw.0, -d_in_j_raw.1)
    };
    let norm = |v: &(Rat, Rat)| -> (Rat, Rat) {
        let m = {
            let a = v.0.abs();
            let b = v.1.abs();
            if a > b {
                a
            } else {
                b
            }
        };
        (v.0.clone() / m.clone(), v.1.clone() / m)
    };
    let u = norm(&d_in_i);
    let v = norm(&j_into);
    let eps = Rat::new(1, 4096);
    let probe_pt = Point::new(
        corner.x.clone() + eps.clone() * (u.0 + v.0) * Rat::new(1, 2),
        corner.y.clone() + eps * (u.1 + v.1) * Rat::new(1, 2),
    );

    // region weight of the corridor in the post-insert picture
    let probe = {
        let mut tmp_arcs = rest.clone();
        tmp_arcs.push(cap_arc.clone());
        tmp_arcs.push(cup_arc.clone());
        let tmp = Proto {
            p: t.p,
            bottom: t.bottom.clone(),
            top: t.top.clone(),
            lambda: t.lambda,
            arcs: tmp_arcs,
            coeff: t.coeff,
            bubble: t.bubble.clone(),
        };
        tmp.weight_at(&probe_pt)
    };
    let mid = probe_pt;
    let bound = if form_a { probe - 1 } else { -probe - 1 };
    if std::env::var("PDGCAT_DEBUG_LENS").is_ok() {
        eprintln!(
            "lens probe weight={} bound={} form_a={} area_sign={} poly_len={}",
            probe,
            bound,
            form_a,
            area2.sign(),
            poly.len()
        );
    }
    if bound < 0 {
        return;
    }
    for a_dots in 0..=bound {
        for b_half in 0..=bound - a_dots {
            let c_dots = bound - a_dots - b_half;
            let bub = if form_a {
                HPoly::h(t.p, b_half)
            } else {
                HPoly::ccw(t.p, b_half)
            };
            if bub.is_zero() {
                continue;
            }
            let mut cap2 = cap_arc.clone();
            merge_dot(&mut cap2, cap_dot_pos.clone(), a_dots as u32);
            let mut cup2 = cup_arc.clone();
            merge_dot(&mut cup2, cup_dot_pos.clone(), c_dots as u32);
            let mut arcs2 = rest.clone();
            arcs2.push(cap2);
            arcs2.push(cup2);
            let ins = Proto {
                p: t.p,
                bottom: t.bottom.clone(),
                top: t.top.clone(),
                lambda: t.lambda,
                arcs: arcs2,
                coeff: t.coeff,
                bubble: t.bubble.clone(),
            };
            stack.extend(transport_bubble(&ins, bub, &mid));
        }
    }
}

/// x-coordinate of an arc's portion between two positions at height y.
fn lens_x_at(path: &Path, p1: &PathPos, p2: &PathPos, y: &Rat) -> Rat {
    let (lo, hi) = if p1 < p2 { (p1, p2) } else { (p2, p1) };
    let sub = path.prefix(hi).suffix(lo);
    for (_, a, b) in sub.segments() {
        let (ylo, yhi) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
        if y >= ylo && y <= yhi {
            let dy = b.y.clone() - a.y.clone();
            if !dy.is_zero() {
                let t = (y.clone() - a.y.clone()) / dy;
                return a.x.clone() + t * (b.x.clone() - a.x.clone());
            }
        }
    }
    sub.pts[sub.pts.len() / 2].x.clone()
}

/// Check that the open lens between two crossings carries no foreign
/// crossings or dots on either side.
fn lens_is_clean(
    t: &Proto,
    i: usize,
    j: usize,
    lo: &Crossing,
    hi: &Crossing,
    crossings: &[Crossing],
) -> bool {
    let in_lens_i = |p: &PathPos| *p > lo.pa && *p < hi.pa;
    let (ja, jb) = if lo.pb < hi.pb {
        (&lo.pb, &hi.pb)
    } else {
        (&hi.pb, &lo.pb)
    };
    let in_lens_j = |p: &PathPos| p > ja && p < jb;
    for c in crossings {
        if (c.a == lo.a && c.pa == lo.pa) || (c.a == hi.a && c.pa == hi.pa) {
            continue;
        }
        if (c.a == i && in_lens_i(&c.pa)) || (c.b == i && in_lens_i(&c.pb)) {
            return false;
        }
        if (c.a == j && in_lens_j(&c.pa)) || (c.b == j && in_lens_j(&c.pb)) {
            return false;
        }
    }
    for (p, _) in &t.arcs[i].dots {
        if in_lens_i(p) {
            return false;
        }
    }
    for (p, _) in &t.arcs[j].dots {
        if in_lens_j(p) {
            return false;
        }
    }
    true
}

/// The uncrossed term of an incoherent double crossing: arc `i` is re-routed
/// alongside arc `j`'s lens portion toward its own entry side.
fn uncross(
    t: &Proto,
    i: usize,
    j: usize,
    lo: &Crossing,
    hi: &Crossing,
    crossings: &[Crossing],
) -> Proto {
    let feats_i = features_on(t, i, crossings);
    let bi = midpoint_toward(&lo.pa, &feats_i, false);
    let ai = midpoint_toward(&hi.pa, &feats_i, true);
    let (pre, pre_dots) = split_with_dots(&t.arcs[i], &bi, true);
    let (suf, suf_dots) = split_with_dots(&t.arcs[i], &ai, false);

    let (jlo, jhi) = if lo.pb < hi.pb {
        (&lo.pb, &hi.pb)
    } else {
        (&hi.pb, &lo.pb)
    };
    let jsub = t.arcs[j].path.prefix(jhi).suffix(jlo);
    // side of j on which i approaches (before lo)
    let dir_j = t.arcs[j].path.dir_at(&lo.pb);
    let entry = t.arcs[i].path.point_at(&bi);
    let w = (
        entry.x.clone() - lo.pt.x.clone(),
        entry.y.clone() - lo.pt.y.clone(),
    );
    let side = (dir_j.0.clone() * w.1 - dir_j.1.clone() * w.0).sign();
    assert!(side != 0, "degenerate approach in uncross");
    let eps = Rat::new(side as i128, 64);
    // orient jsub so it runs in i's flow direction (from lo to hi)
    let jsub_pts: Vec<Point> = if lo.pb < hi.pb {
        jsub.pts.clone()
    } else {
        let mut v = jsub.pts.clone();
        v.reverse();
        v
    };
    // hug: offset each segment of the (oriented) j subpath to i's side
    let mut hug_pts = Vec::new();
    for w2 in jsub_pts.windows(2) {
        let d = (
            w2[1].x.clone() - w2[0].x.clone(),
            w2[1].y.clone() - w2[0].y.clone(),
        );
        // perpendicular to the left of the traversal; flip by eps sign
        let perp = (-d.1.clone(), d.0.clone());
        let scale = eps.clone() / biggest(&perp);
        // the j subpath was possibly reversed relative to j's own flow; the
        // side test used j's flow at lo, so re-express relative to the
        // oriented traversal
        let flip = if lo.pb < hi.pb { Rat::one() } else { -Rat::one() };
        let s = scale * flip;
        hug_pts.push(Point::new(
            w2[0].x.clone() + perp.0.clone() * s.clone(),
            w2[0].y.clone() + perp.1.clone() * s.clone(),
        ));
        hug_pts.push(Point::new(
            w2[1].x.clone() + perp.0 * s.clone(),
            w2[1].y.clone() + perp.1 * s,
        ));
    }
    let mut pts = pre.pts.clone();
    pts.extend(hug_pts);
    let suffix_base = pts.len();
    pts.extend(suf.pts.iter().cloned());
    let dots = {
        let mut dots = pre_dots;
        for (p, m) in suf_dots {
            dots.push((
                PathPos {
                    seg: p.seg + suffix_base,
                    t: p.t,
                },
                m,
            ));
        }
        dots
    };
    let arc_i = ProtoArc {
        ends: t.arcs[i].ends,
        path: Path { pts },
        dots,
    };
    assert!(
        arc_i.path.intersections(&t.arcs[j].path).is_empty(),
        "uncross hug failed to separate the strands"
    );
    let mut arcs = Vec::new();
    for (k, a) in t.arcs.iter().enumerate() {
        if k == i {
            arcs.push(arc_i.clone());
        } else {
            arcs.push(a.clone());
        }
    }
    Proto {
        p: t.p,
        bottom: t.bottom.clone(),
        top: t.top.clone(),
        lambda: t.lambda,
        arcs,
        coeff: t.coeff,
        bubble: t.bubble.clone(),
    }
}

fn biggest(v: &(Rat, Rat)) -> Rat {
    let a = v.0.abs();
    let b = v.1.abs();
    let m = if a > b { a } else { b };
    assert!(m.sign() > 0);
    m
}

/// Resolve a self-crossing (curl) on arc `x`.
fn resolve_curl(
    t: &Proto,
    x: usize,
    sc: &(Point, PathPos, PathPos),
    crossings: &[Crossing],
    stack: &mut Vec<Proto>,
) {
    let (cpt, q1, q2) = sc;
    let (q1, q2) = if q1 < q2 { (q1, q2) } else { (q2, q1) };
    for c in crossings {
        let on_loop = |p: &PathPos| p > q1 && p < q2;
        if (c.a == x && on_loop(&c.pa)) || (c.b == x && on_loop(&c.pb)) {
            panic!("curl loop carries foreign crossings");
        }
    }
    let mut r = 0u32;
    for (p, m) in &t.arcs[x].dots {
        if p > q1 && p < q2 {
            r += m;
        }
    }
    // straightened arc: drop the loop with a kiss offset
    let feats = features_on(t, x, crossings);
    let b1 = midpoint_toward(q1, &feats, false);
    let a2 = midpoint_toward(q2, &feats, true);
    let (pre, pre_dots) = split_with_dots(&t.arcs[x], &b1, true);
    let (suf, suf_dots) = split_with_dots(&t.arcs[x], &a2, false);
    let spath = pre.join(&suf);
    let sdots = join_dots(&pre, pre_dots, suf_dots);

    // Frame-free classification: the loop's winding sense. Clockwise loops
    // reduce through clockwise bubbles with label r - l, counterclockwise
    // ones through counterclockwise bubbles with label r + l, where l is the
    // weight of the region the loop encloses.
    let loop_sub = t.arcs[x].path.prefix(q2).suffix(q1);
    let mut area2 = Rat::zero();
    for w in loop_sub.pts.windows(2) {
        area2 = area2 + (w[0].x.clone() * w[1].y.clone() - w[1].x.clone() * w[0].y.clone());
    }
    area2 = area2
        + (loop_sub.pts.last().unwrap().x.clone() * loop_sub.pts[0].y.clone()
            - loop_sub.pts[0].x.clone() * loop_sub.pts.last().unwrap().y.clone());
    let loop_ccw = area2.sign() > 0;
    assert!(area2.sign() != 0, "degenerate curl loop");
    let centroid = {
        let mut sx = Rat::zero();
        let mut sy = Rat::zero();
        let n = loop_sub.pts.len() as i64;
        for p in &loop_sub.pts {
            sx = sx + p.x.clone();
            sy = sy + p.y.clone();
        }
        Point::new(sx / Rat::int(n), sy / Rat::int(n))
    };

    let mut base_arcs: Vec<ProtoArc> = Vec::new();
    for (k, a) in t.arcs.iter().enumerate() {
        if k == x {
            base_arcs.push(ProtoArc {
                ends: a.ends,
                path: spath.clone(),
                dots: sdots.clone(),
            });
        } else {
            base_arcs.push(a.clone());
        }
    }
    let base = Proto {
        p: t.p,
        bottom: t.bottom.clone(),
        top: t.top.clone(),
        lambda: t.lambda,
        arcs: base_arcs,
        coeff: t.coeff,
        bubble: t.bubble.clone(),
    };
    // weight of the region the loop merges into, after removal
    let ell = base.weight_at(&centroid);

    let (kmax, overall_sign) = if loop_ccw {
        (r as i64 + ell, 1i64)
    } else {
        (r as i64 - ell, -1i64)
    };
    if kmax < 0 {
        return;
    }
    let dot_pos = PathPos {
        seg: pre.pts.len() - 1,
        t: Rat::new(1, 2),
    };
    for a_half in 0..=kmax {
        let b_dots = (kmax - a_half) as u32;
        let bub = if loop_ccw {
            HPoly::ccw(t.p, a_half)
        } else {
            HPoly::h(t.p, a_half)
        };
        if bub.is_zero() {
            continue;
        }
        let mut tt = base.clone();
        tt.coeff = tt.coeff * K::from_int(t.p, overall_sign);
        merge_dot(&mut tt.arcs[x], dot_pos.clone(), b_dots);
        stack.extend(transport_bubble(&tt, bub, &centroid));
    }
}

/// Extract a clean closed loop as a bubble value.
fn extract_loop(t: &Proto, i: usize, stack: &mut Vec<Proto>) {
    let arc = &t.arcs[i];
    // winding: signed area
    let mut area2 = Rat::zero();
    for w in arc.path.pts.windows(2) {
        area2 = area2 + (w[0].x.clone() * w[1].y.clone() - w[1].x.clone() * w[0].y.clone());
    }
    let ccw = area2.sign() > 0;
    let r: u32 = arc.dots.iter().map(|(_, m)| m).sum();
    let right = arc
        .path
        .pts
        .iter()
        .cloned()
        .max_by(|a, b| a.x.cmp(&b.x))
        .unwrap();
    let probe = Point::new(right.x + Rat::new(1, 1000), right.y);
    let rest = Proto {
        p: t.p,
        bottom: t.bottom.clone(),
        top: t.top.clone(),
        lambda: t.lambda,
        arcs: t
            .arcs
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, a)| a.clone())
            .collect(),
        coeff: t.coeff,
        bubble: t.bubble.clone(),
    };
    let mu = rest.weight_at(&probe);
    let val = if ccw {
        HPoly::ccw(t.p, r as i64 + 1 + mu)
    } else {
        HPoly::h(t.p, r as i64 + 1 - mu)
    };
    if val.is_zero() {
        return;
    }
    stack.extend(transport_bubble(&rest, val, &probe));
}

/// Slide a bubble value from the region at `from` to the rightmost region,
/// depositing dots on every strand the rightward ray crosses. Returns the
/// branched terms.
fn transport_bubble(t: &Proto, val: HPoly, from: &Point) -> Vec<Proto> {
    let hits = t.ray_order(from);
    let mut states: Vec<(HPoly, Vec<(usize, PathPos, u32)>)> = vec![(val, Vec::new())];
    for (arc_idx, flow, pos) in hits {
        let up = flow > 0;
        let mut next = Vec::new();
        for (h, deps) in states {
            for (dcount, h2) in slide_across(&h, up) {
                let mut deps2 = deps.clone();
                if dcount > 0 {
                    deps2.push((arc_idx, pos.clone(), dcount));
                }
                next.push((h2, deps2));
            }
        }
        states = next;
    }
    let mut expanded = Vec::new();
    for (h, deps) in states {
        if h.is_zero() {
            continue;
        }
        let mut tt = t.clone();
        tt.bubble = tt.bubble.mul(&h);
        for (ai, pos, m) in deps {
            merge_dot(&mut tt.arcs[ai], pos, m);
        }
        expanded.push(tt);
    }
    expanded
}
