//! Exact rational planar geometry for diagram realizations: polylines,
//! segment intersections, traversal parameters, and ray casts. Coordinates
//! are arbitrary-precision rationals; event cascades square denominators, so
//! fixed-width integers overflow quickly.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Exact rational number.
#[derive(Clone, PartialEq, Eq)]
pub struct Rat {
    n: BigInt,
    d: BigInt, // > 0
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let t = &a % &b;
        a = b;
        b = t;
    }
    if a.is_zero() {
        BigInt::from(1)
    } else {
        a
    }
}

impl Rat {
    pub fn new(n: i128, d: i128) -> Rat {
        Rat::from_big(BigInt::from(n), BigInt::from(d))
    }

    pub fn from_big(n: BigInt, d: BigInt) -> Rat {
        assert!(!d.is_zero());
        let (n, d) = if d.is_negative() { (-n, -d) } else { (n, d) };
        let g = gcd(&n, &d);
        Rat { n: n / &g, d: d / g }
    }

    pub fn int(n: i64) -> Rat {
        Rat {
            n: BigInt::from(n),
            d: BigInt::from(1),
        }
    }

    pub fn zero() -> Rat {
        Rat::int(0)
    }

    pub fn one() -> Rat {
        Rat::int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.n.is_zero()
    }

    pub fn sign(&self) -> i32 {
        if self.n.is_zero() {
            0
        } else if self.n.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn abs(&self) -> Rat {
        Rat {
            n: self.n.abs(),
            d: self.d.clone(),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == BigInt::from(1) {
            write!(f, "{}", self.n)
        } else {
            write!(f, "{}/{}", self.n, self.d)
        }
    }
}

impl Add for Rat {
    type Output = Rat;
    fn add(self, r: Rat) -> Rat {
        Rat::from_big(&self.n * &r.d + &r.n * &self.d, self.d * r.d)
    }
}

impl Sub for Rat {
    type Output = Rat;
    fn sub(self, r: Rat) -> Rat {
        Rat::from_big(&self.n * &r.d - &r.n * &self.d, self.d * r.d)
    }
}

impl Mul for Rat {
    type Output = Rat;
    fn mul(self, r: Rat) -> Rat {
        Rat::from_big(self.n * r.n, self.d * r.d)
    }
}

impl Div for Rat {
    type Output = Rat;
    fn div(self, r: Rat) -> Rat {
        assert!(!r.n.is_zero(), "rational division by zero");
        Rat::from_big(self.n * r.d, self.d * r.n)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat {
            n: -self.n,
            d: self.d,
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> Ordering {
        (&self.n * &other.d).cmp(&(&other.n * &self.d))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Point {
        Point { x, y }
    }
}

fn cross2(ax: &Rat, ay: &Rat, bx: &Rat, by: &Rat) -> Rat {
    ax.clone() * by.clone() - ay.clone() * bx.clone()
}

/// Proper intersection of open segments (a1,a2) and (b1,b2); endpoints
/// touching do not count. Returns the point and the parameters along each.
pub fn segment_intersection(
    a1: &Point,
    a2: &Point,
    b1: &Point,
    b2: &Point,
) -> Option<(Point, Rat, Rat)> {
    let r = (a2.x.clone() - a1.x.clone(), a2.y.clone() - a1.y.clone());
    let s = (b2.x.clone() - b1.x.clone(), b2.y.clone() - b1.y.clone());
    let denom = cross2(&r.0, &r.1, &s.0, &s.1);
    if denom.is_zero() {
        return None; // parallel or collinear: treated as non-crossing
    }
    let qp = (b1.x.clone() - a1.x.clone(), b1.y.clone() - a1.y.clone());
    let t = cross2(&qp.0, &qp.1, &s.0, &s.1) / denom.clone();
    let u = cross2(&qp.0, &qp.1, &r.0, &r.1) / denom;
    let zero = Rat::zero();
    let one = Rat::one();
    if t > zero && t < one && u > zero && u < one {
        let pt = Point::new(
            a1.x.clone() + t.clone() * r.0,
            a1.y.clone() + t.clone() * r.1,
        );
        Some((pt, t, u))
    } else {
        None
    }
}

/// A polyline path with a traversal direction (from `pts[0]` onward).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub pts: Vec<Point>,
}

/// A position along a path: segment index plus parameter in (0,1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathPos {
    pub seg: usize,
    pub t: Rat,
}

impl PartialOrd for PathPos {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PathPos {
    fn cmp(&self, other: &Self) -> Ordering {
        self.seg.cmp(&other.seg).then_with(|| self.t.cmp(&other.t))
    }
}

impl Path {
    pub fn segments(&self) -> impl Iterator<Item = (usize, &Point, &Point)> + '_ {
        self.pts.windows(2).enumerate().map(|(i, w)| (i, &w[0], &w[1]))
    }

    pub fn point_at(&self, pos: &PathPos) -> Point {
        let a = &self.pts[pos.seg];
        let b = &self.pts[pos.seg + 1];
        Point::new(
            a.x.clone() + pos.t.clone() * (b.x.clone() - a.x.clone()),
            a.y.clone() + pos.t.clone() * (b.y.clone() - a.y.clone()),
        )
    }

    /// Direction vector of the segment at a position (along the traversal).
    pub fn dir_at(&self, pos: &PathPos) -> (Rat, Rat) {
        let a = &self.pts[pos.seg];
        let b = &self.pts[pos.seg + 1];
        (b.x.clone() - a.x.clone(), b.y.clone() - a.y.clone())
    }

    pub fn reverse(&self) -> Path {
        let mut pts = self.pts.clone();
        pts.reverse();
        Path { pts }
    }

    /// Concatenate point lists.
    pub fn join(&self, other: &Path) -> Path {
        let mut pts = self.pts.clone();
        pts.extend(other.pts.iter().cloned());
        Path { pts }
    }

    /// The sub-path strictly before `pos`, ending at the position's point.
    pub fn prefix(&self, pos: &PathPos) -> Path {
        let mut pts: Vec<Point> = self.pts[..=pos.seg].to_vec();
        pts.push(self.point_at(pos));
        Path { pts }
    }

    /// The sub-path from `pos` to the end.
    pub fn suffix(&self, pos: &PathPos) -> Path {
        let mut pts = vec![self.point_at(pos)];
        pts.extend(self.pts[pos.seg + 1..].iter().cloned());
        Path { pts }
    }

    /// All proper intersections with another path.
    pub fn intersections(&self, other: &Path) -> Vec<(Point, PathPos, PathPos)> {
        let mut out = Vec::new();
        for (i, a1, a2) in self.segments() {
            for (j, b1, b2) in other.segments() {
                if let Some((pt, t, u)) = segment_intersection(a1, a2, b1, b2) {
                    out.push((pt, PathPos { seg: i, t }, PathPos { seg: j, t: u }));
                }
            }
        }
        out
    }

    /// Self-intersections (pairs of distinct segments).
    pub fn self_intersections(&self) -> Vec<(Point, PathPos, PathPos)> {
        let mut out = Vec::new();
        let segs: Vec<(usize, &Point, &Point)> = self.segments().collect();
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                let (si, a1, a2) = segs[i];
                let (sj, b1, b2) = segs[j];
                if let Some((pt, t, u)) = segment_intersection(a1, a2, b1, b2) {
                    out.push((pt, PathPos { seg: si, t }, PathPos { seg: sj, t: u }));
                }
            }
        }
        out
    }

    /// Crossings of a horizontal rightward ray from `pt` with this path;
    /// returns the hit x and the vertical flow sign (+1 up, -1 down).
    pub fn ray_hits(&self, pt: &Point) -> Vec<(Rat, i32)> {
        let mut out = Vec::new();
        for (_, a, b) in self.segments() {
            let (ylo, yhi) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
            // half-open rule to avoid double counting at shared vertices
            if pt.y < *ylo || pt.y >= *yhi {
                continue;
            }
            let dy = b.y.clone() - a.y.clone();
            if dy.is_zero() {
                continue;
            }
            let t = (pt.y.clone() - a.y.clone()) / dy.clone();
            let x = a.x.clone() + t * (b.x.clone() - a.x.clone());
            if x > pt.x {
                out.push((x, dy.sign()));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> Point {
        Point::new(Rat::int(x), Rat::int(y))
    }

    #[test]
    fn rational_basics() {
        assert_eq!(Rat::new(2, 4), Rat::new(1, 2));
        assert_eq!(Rat::new(1, 2) + Rat::new(1, 3), Rat::new(5, 6));
        assert!(Rat::new(-1, 2) < Rat::zero());
        assert_eq!(Rat::new(3, -6), Rat::new(-1, 2));
    }

    #[test]
    fn segment_crossing() {
        let r = segment_intersection(&pt(0, 0), &pt(2, 2), &pt(0, 2), &pt(2, 0));
        let (p, t, u) = r.unwrap();
        assert_eq!(p, pt(1, 1));
        assert_eq!(t, Rat::new(1, 2));
        assert_eq!(u, Rat::new(1, 2));
        // endpoint touch does not count
        assert!(segment_intersection(&pt(0, 0), &pt(1, 1), &pt(1, 1), &pt(2, 0)).is_none());
        // parallel
        assert!(segment_intersection(&pt(0, 0), &pt(1, 0), &pt(0, 1), &pt(1, 1)).is_none());
    }

    #[test]
    fn path_ray_casting() {
        let path = Path {
            pts: vec![pt(2, -1), pt(2, 1)],
        };
        let hits = path.ray_hits(&pt(0, 0));
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].1, 1);
        let down = path.reverse();
        assert_eq!(down.ray_hits(&pt(0, 0))[0].1, -1);
        assert!(path.ray_hits(&pt(3, 0)).is_empty());
    }

    #[test]
    fn path_splitting() {
        let path = Path {
            pts: vec![pt(0, 0), pt(2, 2), pt(4, 0)],
        };
        let pos = PathPos {
            seg: 0,
            t: Rat::new(1, 2),
        };
        let pre = path.prefix(&pos);
        assert_eq!(pre.pts.last().unwrap().x, Rat::int(1));
        let suf = path.suffix(&pos);
        assert_eq!(suf.pts[0].y, Rat::int(1));
        assert_eq!(suf.pts.last().unwrap(), &pt(4, 0));
    }
}
