//! Words, boundary matchings, and normal-form 2-morphisms.
//!
//! A basis term is a planar matching of the boundary points of a rectangle
//! (bottom word to top word) with a dot count per arc at a canonical station,
//! tensored with a bubble polynomial in the rightmost region. Crossings are
//! implicit: two arcs cross exactly once when their endpoints interleave.

use super::geom::{Path, Point, Rat};
use super::lambda::{hmono_degree, HMono, HPoly};
use crate::scalars::K;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Dir {
    E,
    F,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::E => Dir::F,
            Dir::F => Dir::E,
        }
    }
}

/// A word in the generating 1-morphisms, stored left to right in the plane.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Default)]
pub struct Word(pub Vec<Dir>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Weight change from right to left: each E adds 2, each F subtracts 2.
    pub fn weight_shift(&self) -> i64 {
        self.0
            .iter()
            .map(|d| match d {
                Dir::E => 2,
                Dir::F => -2,
            })
            .sum()
    }

    /// Weight of the region immediately left of position `i` (between
    /// letters `i-1` and `i`), with rightmost weight `lambda`.
    pub fn weight_left_of(&self, i: usize, lambda: i64) -> i64 {
        let mut w = lambda;
        for j in (i..self.0.len()).rev() {
            w += match self.0[j] {
                Dir::E => 2,
                Dir::F => -2,
            };
        }
        w
    }

    /// Weight of the region right of position `i`.
    pub fn weight_right_of(&self, i: usize, lambda: i64) -> i64 {
        self.weight_left_of(i + 1, lambda)
    }

    pub fn render(&self) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|d| match d {
                Dir::E => 'E',
                Dir::F => 'F',
            })
            .collect()
    }
}

/// A boundary point of the rectangle.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum End {
    Bot(usize),
    Top(usize),
}

/// Cyclic position of an end around the rectangle boundary: bottom
/// left-to-right, then top right-to-left.
fn cyclic_key(e: End, nbot: usize, ntop: usize) -> usize {
    match e {
        End::Bot(i) => i,
        End::Top(j) => nbot + (ntop - 1 - j),
    }
}

/// Whether arcs (a1,a2) and (b1,b2) interleave around the boundary circle.
pub fn interleaves(a: (End, End), b: (End, End), nbot: usize, ntop: usize) -> bool {
    let (x1, x2) = (cyclic_key(a.0, nbot, ntop), cyclic_key(a.1, nbot, ntop));
    let (lo, hi) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
    let mut count = 0;
    for e in [b.0, b.1] {
        let k = cyclic_key(e, nbot, ntop);
        if k > lo && k < hi {
            count += 1;
        }
    }
    count == 1
}

/// One arc of a matching, oriented by flow: the path runs source -> target.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Arc {
    /// flow source (E bottom end / F top end)
    pub src: End,
    /// flow target
    pub dst: End,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ArcKind {
    /// upward through-strand (E)
    ThroughUp,
    /// downward through-strand (F)
    ThroughDown,
    /// both ends at the bottom
    Cap,
    /// both ends at the top
    Cup,
}

impl Arc {
    pub fn kind(&self) -> ArcKind {
        match (self.src, self.dst) {
            (End::Bot(_), End::Top(_)) => ArcKind::ThroughUp,
            (End::Top(_), End::Bot(_)) => ArcKind::ThroughDown,
            (End::Bot(_), End::Bot(_)) => ArcKind::Cap,
            (End::Top(_), End::Top(_)) => ArcKind::Cup,
        }
    }

    /// The canonical dot station end: bottom end for through-strands, the
    /// left end for caps and cups.
    pub fn station(&self) -> End {
        match self.kind() {
            ArcKind::ThroughUp => self.src,
            ArcKind::ThroughDown => self.dst,
            ArcKind::Cap | ArcKind::Cup => {
                let (i, j) = match (self.src, self.dst) {
                    (End::Bot(i), End::Bot(j)) => (i, j),
                    (End::Top(i), End::Top(j)) => (i, j),
                    _ => unreachable!(),
                };
                if i < j {
                    self.src
                } else {
                    self.dst
                }
            }
        }
    }

    fn sort_key(&self) -> (End, End) {
        let a = self.src.min(self.dst);
        let b = self.src.max(self.dst);
        (a, b)
    }
}

/// A dotted matching: the combinatorial part of a basis 2-morphism.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct BasisDiagram {
    /// sorted by `sort_key`
    pub arcs: Vec<Arc>,
    /// dots at each arc's station, parallel to `arcs`
    pub dots: Vec<u32>,
}

impl BasisDiagram {
    pub fn new(mut pairs: Vec<(Arc, u32)>) -> BasisDiagram {
        pairs.sort_by_key(|(a, _)| a.sort_key());
        BasisDiagram {
            arcs: pairs.iter().map(|(a, _)| *a).collect(),
            dots: pairs.iter().map(|(_, d)| *d).collect(),
        }
    }

    pub fn identity(word: &Word) -> BasisDiagram {
        let pairs = word
            .0
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let arc = match d {
                    Dir::E => Arc {
                        src: End::Bot(i),
                        dst: End::Top(i),
                    },
                    Dir::F => Arc {
                        src: End::Top(i),
                        dst: End::Bot(i),
                    },
                };
                (arc, 0)
            })
            .collect();
        BasisDiagram::new(pairs)
    }

    pub fn crossing_number(&self, nbot: usize, ntop: usize) -> usize {
        let mut n = 0;
        for i in 0..self.arcs.len() {
            for j in i + 1..self.arcs.len() {
                let a = (self.arcs[i].src, self.arcs[i].dst);
                let b = (self.arcs[j].src, self.arcs[j].dst);
                if interleaves(a, b, nbot, ntop) {
                    n += 1;
                }
            }
        }
        n
    }

    /// Degree of the underlying diagram relative to boundary words: dots are
    /// handled separately so this computes crossings and cap/cup degrees.
    pub fn degree(&self, bottom: &Word, top: &Word, lambda: i64) -> i64 {
        let mut deg = 0i64;
        for (arc, dots) in self.arcs.iter().zip(&self.dots) {
            deg += 2 * *dots as i64;
            match arc.kind() {
                ArcKind::Cap => {
                    // cap over bottom positions (i, j), i < j; region right
                    // of the right leg. Type cw (E left) has degree 1 - mu,
                    // ccw (F left) degree 1 + mu.
                    let (i, j) = match (arc.src, arc.dst) {
                        (End::Bot(i), End::Bot(j)) => (i.min(j), i.max(j)),
                        _ => unreachable!(),
                    };
                    let mu = bottom.weight_right_of(j, lambda);
                    let left_letter = bottom.0[i];
                    deg += match left_letter {
                        Dir::E => 1 - mu,
                        Dir::F => 1 + mu,
                    };
                }
                ArcKind::Cup => {
                    let (i, j) = match (arc.src, arc.dst) {
                        (End::Top(i), End::Top(j)) => (i.min(j), i.max(j)),
                        _ => unreachable!(),
                    };
                    let mu = top.weight_right_of(j, lambda);
                    let left_letter = top.0[i];
                    deg += match left_letter {
                        Dir::E => 1 - mu,
                        Dir::F => 1 + mu,
                    };
                }
                _ => {}
            }
        }
        // each crossing contributes -2 when same-orientation, 0 when mixed
        let paths = canonical_paths(self, bottom.len(), top.len(), 37);
        for i in 0..self.arcs.len() {
            for j in i + 1..self.arcs.len() {
                for (_, pa, pb) in paths[i].intersections(&paths[j]) {
                    let da = paths[i].dir_at(&pa).1.sign();
                    let db = paths[j].dir_at(&pb).1.sign();
                    if da == db {
                        deg -= 2;
                    }
                }
            }
        }
        deg
    }
}

/// A 2-morphism in normal form: an `F_p[eps]`-linear combination of
/// (dotted matching, bubble monomial) pairs.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    pub p: u32,
    pub bottom: Word,
    pub top: Word,
    pub lambda: i64,
    pub terms: BTreeMap<(BasisDiagram, HMono), K>,
}

impl Morphism {
    pub fn zero(p: u32, bottom: Word, top: Word, lambda: i64) -> Morphism {
        Morphism {
            p,
            bottom,
            top,
            lambda,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(p: u32, word: Word, lambda: i64) -> Morphism {
        let d = BasisDiagram::identity(&word);
        let mut m = Morphism::zero(p, word.clone(), word, lambda);
        m.add_term(d, vec![], K::one(p));
        m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, d: BasisDiagram, h: HMono, c: K) {
        if c.is_zero() {
            return;
        }
        let key = (d, h);
        let e = self.terms.entry(key.clone()).or_insert_with(|| K::zero(self.p));
        *e = *e + c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_poly_term(&mut self, d: BasisDiagram, h: &HPoly, c: K) {
        for (m, v) in &h.coeffs {
            self.add_term(d.clone(), m.clone(), *v * c);
        }
    }

    pub fn add(&self, rhs: &Morphism) -> Morphism {
        assert_eq!(self.bottom, rhs.bottom);
        assert_eq!(self.top, rhs.top);
        assert_eq!(self.lambda, rhs.lambda);
        let mut out = self.clone();
        for ((d, h), c) in &rhs.terms {
            out.add_term(d.clone(), h.clone(), *c);
        }
        out
    }

    pub fn sub(&self, rhs: &Morphism) -> Morphism {
        self.add(&rhs.scale(-K::one(self.p)))
    }

    pub fn scale(&self, c: K) -> Morphism {
        let mut out = Morphism::zero(self.p, self.bottom.clone(), self.top.clone(), self.lambda);
        for ((d, h), v) in &self.terms {
            out.add_term(d.clone(), h.clone(), *v * c);
        }
        out
    }

    pub fn scale_bubbles(&self, h: &HPoly) -> Morphism {
        let mut out = Morphism::zero(self.p, self.bottom.clone(), self.top.clone(), self.lambda);
        for ((d, hm), v) in &self.terms {
            let mut base = HPoly::zero(self.p);
            base.add_term(hm.clone(), *v);
            out.add_poly_term(d.clone(), &base.mul(h), K::one(self.p));
        }
        out
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((d, h), c)| {
                let mut s = format!("{:?}", c);
                s.push(' ');
                s.push_str(&format!("{:?}", d));
                if !h.is_empty() {
                    s.push_str(&format!(" * h{:?}", h));
                }
                s
            })
            .collect();
        parts.join("  +  ")
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} => {} @ {}: {}",
            self.bottom.render(),
            self.top.render(),
            self.lambda,
            self.render()
        )
    }
}

/// Bubble degree helper for homogeneity checks.
pub fn bubble_degree(h: &HMono) -> i64 {
    hmono_degree(h)
}

/// Canonical geometric drawing of a matching: bottom point `i` at x = i,
/// top point `j` at `j + shear*(j+1)`, caps and cups as shallow wedges near
/// their boundary.
pub fn canonical_paths(d: &BasisDiagram, nbot: usize, ntop: usize, shear_num: i64) -> Vec<Path> {
    let shear = Rat::new(shear_num as i128, 1_000_000);
    let botx = |i: usize| Rat::int(i as i64);
    let topx = |j: usize| Rat::int(j as i64) + shear.clone() * Rat::int(j as i64 + 1);
    let _ = ntop;
    let mut out = Vec::new();
    for (idx, arc) in d.arcs.iter().enumerate() {
        let path = match (arc.src, arc.dst) {
            (End::Bot(i), End::Top(j)) => Path {
                pts: vec![
                    Point::new(botx(i), Rat::zero()),
                    Point::new(topx(j), Rat::one()),
                ],
            },
            (End::Top(j), End::Bot(i)) => Path {
                pts: vec![
                    Point::new(topx(j), Rat::one()),
                    Point::new(botx(i), Rat::zero()),
                ],
            },
            (End::Bot(i), End::Bot(j)) => {
                let (l, r) = (i.min(j), i.max(j));
                let apex_y = Rat::new(1, 5)
                    + Rat::new((r - l) as i128, 500)
                    + Rat::new(l as i128, 50_000)
                    + Rat::new(idx as i128, 5_000_000);
                let apex = Point::new((botx(l) + botx(r)) * Rat::new(1, 2), apex_y);
                // flow src -> apex -> dst
                Path {
                    pts: vec![
                        Point::new(botx(src_index(arc.src)), Rat::zero()),
                        apex,
                        Point::new(botx(src_index(arc.dst)), Rat::zero()),
                    ],
                }
            }
            (End::Top(i), End::Top(j)) => {
                let (l, r) = (i.min(j), i.max(j));
                let apex_y = Rat::one()
                    - (Rat::new(1, 5)
                        + Rat::new((r - l) as i128, 500)
                        + Rat::new(l as i128, 50_000)
                        + Rat::new(idx as i128, 5_000_000));
                let apex = Point::new((topx(l) + topx(r)) * Rat::new(1, 2), apex_y);
                Path {
                    pts: vec![
                        Point::new(topx(src_index(arc.src)), Rat::one()),
                        apex,
                        Point::new(topx(src_index(arc.dst)), Rat::one()),
                    ],
                }
            }
        };
        out.push(path);
    }
    out
}

fn src_index(e: End) -> usize {
    match e {
        End::Bot(i) => i,
        End::Top(i) => i,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_weights() {
        // EF1_lambda: rightmost lambda, leftmost lambda again
        let w = Word(vec![Dir::E, Dir::F]);
        assert_eq!(w.weight_left_of(0, 3), 3);
        assert_eq!(w.weight_left_of(1, 3), 1);
        assert_eq!(w.weight_left_of(2, 3), 3);
        assert_eq!(w.weight_shift(), 0);
        let we = Word(vec![Dir::E]);
        assert_eq!(we.weight_left_of(0, 0), 2);
    }

    #[test]
    fn interleave_counts() {
        // crossed through-strands
        let a = (End::Bot(0), End::Top(1));
        let b = (End::Bot(1), End::Top(0));
        assert!(interleaves(a, b, 2, 2));
        // nested cup over cap: no interleave
        let cap = (End::Bot(0), End::Bot(1));
        let cup = (End::Top(0), End::Top(1));
        assert!(!interleaves(cap, cup, 2, 2));
        // adjacent cup ends never interleave with anything
        let cup2 = (End::Top(1), End::Top(2));
        let thr = (End::Bot(0), End::Top(0));
        assert!(!interleaves(cup2, thr, 1, 3));
    }

    #[test]
    fn identity_diagram() {
        let w = Word(vec![Dir::E, Dir::F]);
        let d = BasisDiagram::identity(&w);
        assert_eq!(d.arcs.len(), 2);
        assert_eq!(d.crossing_number(2, 2), 0);
        assert_eq!(d.arcs[0].kind(), ArcKind::ThroughUp);
        assert_eq!(d.arcs[1].kind(), ArcKind::ThroughDown);
    }

    #[test]
    fn canonical_drawing_matches_interleave() {
        // crossed pair draws with exactly one intersection
        let d = BasisDiagram::new(vec![
            (
                Arc {
                    src: End::Bot(0),
                    dst: End::Top(1),
                },
                0,
            ),
            (
                Arc {
                    src: End::Bot(1),
                    dst: End::Top(0),
                },
                0,
            ),
        ]);
        let paths = canonical_paths(&d, 2, 2, 37);
        let hits = paths[0].intersections(&paths[1]);
        assert_eq!(hits.len(), 1);
    }
}
