//! The nilHecke algebra `NH_n` in the straightened basis `{x^a del_w}`,
//! its p-differentials (local family and the non-local `NH_3` example),
//! the faithful polynomial representation, and divided-power complexes.

use crate::pcomplex::{GradedSpace, PComplex};
use crate::report::Suite;
use crate::scalars::{quantum_factorial, reduce_op, Fp, K};
use crate::symfun::MultiPoly;
use std::collections::BTreeMap;
use std::fmt;

/// One-line permutation: `perm[i]` is the image of position `i`.
pub type Perm = Vec<u8>;

pub fn identity_perm(n: usize) -> Perm {
    (0..n as u8).collect()
}

pub fn perm_len(w: &Perm) -> usize {
    let mut l = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                l += 1;
            }
        }
    }
    l
}

pub fn compose(u: &Perm, v: &Perm) -> Perm {
    // (u v)(x) = u(v(x))
    v.iter().map(|&x| u[x as usize]).collect()
}

pub fn transposition(n: usize, i: usize) -> Perm {
    let mut w = identity_perm(n);
    w.swap(i, i + 1);
    w
}

/// A reduced word for `w` as a sequence of adjacent transposition indices,
/// with `w = s_{i_1} s_{i_2} ... s_{i_k}` and `del_w = del_{i_1} ... del_{i_k}`.
pub fn reduced_word(w: &Perm) -> Vec<usize> {
    let mut w = w.clone();
    let mut out = Vec::new();
    loop {
        // find a left descent: position of value i after position of value i+1
        let mut found = None;
        for i in 0..w.len() as u8 - 1 {
            let pi = w.iter().position(|&x| x == i).unwrap();
            let pi1 = w.iter().position(|&x| x == i + 1).unwrap();
            if pi > pi1 {
                found = Some(i as usize);
                break;
            }
        }
        match found {
            Some(i) => {
                out.push(i);
                // w = s_i * w_rest  =>  w_rest = s_i w
                for x in w.iter_mut() {
                    if *x == i as u8 {
                        *x = i as u8 + 1;
                    } else if *x == i as u8 + 1 {
                        *x = i as u8;
                    }
                }
            }
            None => break,
        }
    }
    out
}

/// Monomial in `x_1..x_n`.
pub type XMono = Vec<u32>;

/// An element of `NH_n` with coefficients in `F_p[eps]/(eps^2)`.
#[derive(Clone, PartialEq, Eq)]
pub struct NHElem {
    pub p: u32,
    pub n: usize,
    pub terms: BTreeMap<(XMono, Perm), K>,
}

impl NHElem {
    pub fn zero(p: u32, n: usize) -> NHElem {
        NHElem {
            p,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(p: u32, n: usize) -> NHElem {
        let mut e = NHElem::zero(p, n);
        e.add_term(vec![0; n], identity_perm(n), K::one(p));
        e
    }

    pub fn x(p: u32, n: usize, i: usize) -> NHElem {
        let mut m = vec![0; n];
        m[i] = 1;
        let mut e = NHElem::zero(p, n);
        e.add_term(m, identity_perm(n), K::one(p));
        e
    }

    pub fn del(p: u32, n: usize, i: usize) -> NHElem {
        let mut e = NHElem::zero(p, n);
        e.add_term(vec![0; n], transposition(n, i), K::one(p));
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: XMono, w: Perm, c: K) {
        if c.is_zero() {
            return;
        }
        let key = (m, w);
        let e = self.terms.entry(key.clone()).or_insert_with(|| K::zero(self.p));
        *e = *e + c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, rhs: &NHElem) -> NHElem {
        let mut out = self.clone();
        for ((m, w), c) in &rhs.terms {
            out.add_term(m.clone(), w.clone(), *c);
        }
        out
    }

    pub fn sub(&self, rhs: &NHElem) -> NHElem {
        self.add(&rhs.scale(-K::one(self.p)))
    }

    pub fn scale(&self, c: K) -> NHElem {
        let mut out = NHElem::zero(self.p, self.n);
        for ((m, w), v) in &self.terms {
            out.add_term(m.clone(), w.clone(), *v * c);
        }
        out
    }

    /// Degree with `deg x = 2`, `deg del = -2`.
    pub fn degrees(&self) -> Vec<i64> {
        let mut ds: Vec<i64> = self
            .terms
            .keys()
            .map(|(m, w)| 2 * m.iter().sum::<u32>() as i64 - 2 * perm_len(w) as i64)
            .collect();
        ds.sort();
        ds.dedup();
        ds
    }

    /// Straightened product.
    pub fn mul(&self, rhs: &NHElem) -> NHElem {
        assert_eq!(self.n, rhs.n, "strand counts differ");
        let mut out = NHElem::zero(self.p, self.n);
        for ((ma, u), ca) in &self.terms {
            for ((mb, v), cb) in &rhs.terms {
                // (x^ma del_u)(x^mb del_v) = x^ma * (del_u x^mb) * del_v
                let mid = straighten_word_mono(self.p, self.n, u, mb);
                for ((mc, w), cc) in mid.terms {
                    // del_w * del_v by the nilCoxeter rule
                    let wv = compose(&w, v);
                    if perm_len(&wv) != perm_len(&w) + perm_len(v) {
                        continue;
                    }
                    let m: XMono = ma.iter().zip(&mc).map(|(a, b)| a + b).collect();
                    out.add_term(m, wv, *ca * *cb * cc);
                }
            }
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
            .map(|((m, w), c)| {
                let mut s = String::new();
                if !(c.re.value() == 1 && c.eps.is_zero()) {
                    s.push_str(&format!("{:?} ", c));
                }
                for (i, &e) in m.iter().enumerate() {
                    if e == 1 {
                        s.push_str(&format!("x{} ", i + 1));
                    } else if e > 1 {
                        s.push_str(&format!("x{}^{} ", i + 1, e));
                    }
                }
                let rw = reduced_word(w);
                if rw.is_empty() {
                    if s.trim().is_empty() {
                        s.push('1');
                    }
                } else {
                    for i in rw {
                        s.push_str(&format!("d{} ", i + 1));
                    }
                }
                s.trim().to_string()
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Debug for NHElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Divided difference of a monomial: `(x^m - s_i x^m)/(x_i - x_{i+1})`,
/// a signed sum of monomials.
fn mono_divided_difference(m: &XMono, i: usize) -> Vec<(XMono, i64)> {
    let a = m[i];
    let b = m[i + 1];
    if a == b {
        return vec![];
    }
    let mut out = Vec::new();
    if a > b {
        for k in 0..(a - b) {
            let mut t = m.clone();
            t[i] = a - 1 - k;
            t[i + 1] = b + k;
            out.push((t, 1));
        }
    } else {
        for k in 0..(b - a) {
            let mut t = m.clone();
            t[i] = a + k;
            t[i + 1] = b - 1 - k;
            out.push((t, -1));
        }
    }
    out
}

/// Straightened form of `del_w * x^m` via `del_i f = (s_i f) del_i + del_i(f)`.
fn straighten_word_mono(p: u32, n: usize, w: &Perm, m: &XMono) -> NHElem {
    let word = reduced_word(w);
    let mut acc = NHElem::zero(p, n);
    acc.add_term(m.clone(), identity_perm(n), K::one(p));
    // apply generators right-to-left: del_w = del_{i1} ... del_{ik}
    for &i in word.iter().rev() {
        let mut next = NHElem::zero(p, n);
        for ((mm, ww), c) in &acc.terms {
            // del_i * (x^mm del_ww)
            // = (s_i x^mm) del_i del_ww + (del_i x^mm) del_ww
            let mut swapped = mm.clone();
            swapped.swap(i, i + 1);
            let si_ww = compose(&transposition(n, i), ww);
            if perm_len(&si_ww) == perm_len(ww) + 1 {
                next.add_term(swapped, si_ww, *c);
            }
            for (t, sign) in mono_divided_difference(mm, i) {
                next.add_term(t, ww.clone(), *c * K::from_int(p, sign));
            }
        }
        acc = next;
    }
    acc
}

/// A p-differential on `NH_n`.
#[derive(Clone, Debug)]
pub enum NHDif {
    /// `d(x_i) = x_i^2`, `d(del_i) = a + (-1-a) x_i del_i + (-1+a) x_{i+1} del_i`.
    Local { a: K },
    /// The non-local differential on `NH_3` in characteristic 3:
    /// `d(del_1) = 1 + x_1 del_1`, `d(del_2) = -1 + x_3 del_2`.
    NonlocalNh3,
}

impl NHDif {
    fn of_del(&self, p: u32, n: usize, i: usize) -> NHElem {
        match self {
            NHDif::Local { a } => {
                let mut e = NHElem::zero(p, n);
                e.add_term(vec![0; n], identity_perm(n), *a);
                let mut mi = vec![0; n];
                mi[i] = 1;
                e.add_term(mi, transposition(n, i), -K::one(p) - *a);
                let mut mi1 = vec![0; n];
                mi1[i + 1] = 1;
                e.add_term(mi1, transposition(n, i), -K::one(p) + *a);
                e
            }
            NHDif::NonlocalNh3 => {
                assert_eq!(p, 3, "the non-local differential lives in characteristic 3");
                assert_eq!(n, 3);
                let mut e = NHElem::zero(p, n);
                if i == 0 {
                    e.add_term(vec![0; 3], identity_perm(3), K::one(3));
                    e.add_term(vec![1, 0, 0], transposition(3, 0), K::one(3));
                } else {
                    e.add_term(vec![0; 3], identity_perm(3), -K::one(3));
                    e.add_term(vec![0, 0, 1], transposition(3, 1), K::one(3));
                }
                e
            }
        }
    }
}

/// Leibniz differential of an element.
pub fn apply_dif(e: &NHElem, dif: &NHDif) -> NHElem {
    let p = e.p;
    let n = e.n;
    let mut out = NHElem::zero(p, n);
    for ((m, w), c) in &e.terms {
        // d(x^m) del_w
        for i in 0..n {
            if m[i] == 0 {
                continue;
            }
            let mut t = m.clone();
            t[i] += 1;
            out.add_term(t, w.clone(), *c * K::from_int(p, m[i] as i64));
        }
        // x^m d(del_w), Leibniz over one reduced word
        let word = reduced_word(w);
        for j in 0..word.len() {
            let mut piece = NHElem::one(p, n);
            for (k, &i) in word.iter().enumerate() {
                let factor = if k == j {
                    dif.of_del(p, n, i)
                } else {
                    NHElem::del(p, n, i)
                };
                piece = piece.mul(&factor);
            }
            let mut xm = NHElem::zero(p, n);
            xm.add_term(m.clone(), identity_perm(n), *c);
            out = out.add(&xm.mul(&piece));
        }
    }
    out
}

/// Action of an element on a polynomial through divided differences.
pub fn poly_action(e: &NHElem, f: &MultiPoly) -> MultiPoly {
    assert_eq!(f.n, e.n);
    let p = e.p;
    let mut out = MultiPoly::zero(p, e.n);
    for ((m, w), c) in &e.terms {
        assert!(c.eps.is_zero(), "polynomial action over the base field only");
        let mut g = f.clone();
        for &i in reduced_word(w).iter().rev() {
            g = g.divided_difference(i);
        }
        let mut xm = MultiPoly::zero(p, e.n);
        xm.add_term(m.clone(), Fp::one(p));
        out = out.add(&xm.mul(&g).scale(c.re));
    }
    out
}

/// Equality oracle through the polynomial representation: compares the action
/// on all monomials of degree up to the faithfulness bound.
pub fn poly_action_eq(a: &NHElem, b: &NHElem, bound_hint: i64) -> bool {
    let n = a.n;
    let p = a.p;
    let bound = bound_hint.max(2 * n as i64 * n as i64);
    let monos = monomials_of_bounded_total(n, (bound / 2) as u32);
    for m in monos {
        let mut f = MultiPoly::zero(p, n);
        f.add_term(m, Fp::one(p));
        if poly_action(a, &f) != poly_action(b, &f) {
            return false;
        }
    }
    true
}

fn monomials_of_bounded_total(n: usize, total: u32) -> Vec<XMono> {
    let mut out = Vec::new();
    fn rec(n: usize, left: u32, cur: &mut XMono, out: &mut Vec<XMono>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(n, left - c, cur, out);
            cur.pop();
        }
    }
    rec(n, total, &mut Vec::new(), &mut out);
    out
}

/// The divided-power complex `U_n^+`: basis `{x^a v_+ : 0 <= a_i <= n-i}`,
/// `deg v_+ = n(1-n)/2`, `d(v_+) = -sum_i (n-i) x_i v_+`.
pub fn divided_power_complex(n: usize, p: u32) -> PComplex {
    let caps: Vec<u32> = (1..=n).map(|i| (n - i) as u32).collect();
    let mut basis_exps: Vec<XMono> = Vec::new();
    fn rec(caps: &[u32], idx: usize, cur: &mut XMono, out: &mut Vec<XMono>) {
        if idx == caps.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..=caps[idx] {
            cur.push(c);
            rec(caps, idx + 1, cur, out);
            cur.pop();
        }
    }
    rec(&caps, 0, &mut Vec::new(), &mut basis_exps);

    basis_exps.sort();
    let v_deg = (n as i64) * (1 - n as i64) / 2;
    let index: BTreeMap<XMono, usize> = basis_exps
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let deg = |m: &XMono| -> i64 { v_deg + 2 * m.iter().sum::<u32>() as i64 };
    let basis = basis_exps
        .iter()
        .map(|m| (format!("x{:?}v+", m), deg(m)))
        .collect();
    let mut cols = Vec::new();
    for m in &basis_exps {
        // d(x^m v) = sum_i m_i x^{m+e_i} v - sum_i (n-i) x^{m+e_i} v
        let mut col: BTreeMap<usize, Fp> = BTreeMap::new();
        for i in 0..n {
            // d(v_+) contributes -(n-k) on x_k for 1-indexed k = i+1
            let coeff = Fp::new(p, m[i] as i64) - Fp::new(p, (n - 1 - i) as i64);
            if coeff.is_zero() {
                continue;
            }
            let mut t = m.clone();
            t[i] += 1;
            match index.get(&t) {
                Some(&j) => {
                    let e = col.entry(j).or_insert_with(|| Fp::zero(p));
                    *e = *e + coeff;
                }
                None => panic!(
                    "U_n^+ is not d-stable: {:?} escapes the basis (n={}, p={})",
                    t, n, p
                ),
            }
        }
        cols.push(col.into_iter().collect());
    }
    PComplex::new(GradedSpace { p, basis }, cols).expect("U_n^+ complex")
}

/// Symbol check: `[U_n^+] = [n]!` in `O_p`, and contractibility for n >= p.
pub fn divided_power_report(n: usize, p: u32) -> Suite {
    let mut suite = Suite::new(&format!("divided_power n={} p={}", n, p));
    let c = divided_power_complex(n, p);
    let sym = c.symbol();
    let expect = reduce_op(&quantum_factorial(n as u32), p);
    suite.case(
        "symbol_equals_quantum_factorial",
        sym == expect,
        format!("[U_{}^+] = {:?}, [n]! = {:?}", n, sym, expect),
    );
    if n as u32 >= p {
        suite.case(
            "contractible_for_large_n",
            c.is_contractible(),
            format!("U_{}^+ contractible at p={}", n, p),
        );
    }
    suite
}

/// Graded dimension of `NH_n` in each degree down to `-2 len(w0)` and up to
/// `bound`, computed from the straightened basis.
pub fn nh_graded_dims(n: usize, bound: i64) -> BTreeMap<i64, usize> {
    let mut len_counts: BTreeMap<usize, usize> = BTreeMap::new();
    // enumerate permutations of n elements
    let mut perms: Vec<Perm> = vec![vec![0u8]];
    for i in 1..n {
        let mut next = Vec::new();
        for p in perms {
            for pos in 0..=i {
                let mut q = p.clone();
                q.insert(pos, i as u8);
                next.push(q);
            }
        }
        perms = next;
    }
    for w in &perms {
        *len_counts.entry(perm_len(w)).or_insert(0) += 1;
    }
    let mut out = BTreeMap::new();
    let max_total = ((bound + 2 * (n * (n - 1) / 2) as i64) / 2).max(0) as u32;
    for m in monomials_of_bounded_total(n, max_total) {
        let md = 2 * m.iter().sum::<u32>() as i64;
        for (&l, &cnt) in &len_counts {
            let d = md - 2 * l as i64;
            if d <= bound {
                *out.entry(d).or_insert(0) += cnt;
            }
        }
    }
    out
}

/// Graded dimension of `Sym_n (x) U_n^+ (x) (U_n^+)^*` up to `bound`.
pub fn nh_factored_dims(n: usize, p: u32, bound: i64) -> BTreeMap<i64, usize> {
    let u = divided_power_complex(n, p);
    let u_dims = u.space.graded_dims();
    let mut dual_dims: BTreeMap<i64, usize> = BTreeMap::new();
    for (&d, &m) in &u_dims {
        *dual_dims.entry(-d).or_insert(0) += m;
    }
    // Sym_n graded dims
    let mut sym_dims: BTreeMap<i64, usize> = BTreeMap::new();
    for m in crate::symfun::monomials_up_to(Some(n as u32), bound + 2 * (n * n) as i64) {
        let d: i64 = m
            .iter()
            .enumerate()
            .map(|(i, &c)| 2 * (i as i64 + 1) * c as i64)
            .sum();
        *sym_dims.entry(d).or_insert(0) += 1;
    }
    let mut out: BTreeMap<i64, usize> = BTreeMap::new();
    for (&d1, &m1) in &sym_dims {
        for (&d2, &m2) in &u_dims {
            for (&d3, &m3) in &dual_dims {
                let d = d1 + d2 + d3;
                if d <= bound {
                    *out.entry(d).or_insert(0) += m1 * m2 * m3;
                }
            }
        }
    }
    out
}

/// Checks the graded-dimension identity of the regular-representation
/// factorization and its symbol consequences.
pub fn nh_regular_filtration_check(n: usize, p: u32, bound: i64) -> Suite {
    let mut suite = Suite::new(&format!("nh_regular_filtration n={} p={} D={}", n, p, bound));
    let lhs = nh_graded_dims(n, bound);
    let rhs = nh_factored_dims(n, p, bound);
    let min_deg = -2 * (n * (n - 1) / 2) as i64;
    let mut ok = true;
    let mut first_fail = String::new();
    for d in min_deg..=bound {
        let a = lhs.get(&d).copied().unwrap_or(0);
        let b = rhs.get(&d).copied().unwrap_or(0);
        if a != b {
            ok = false;
            first_fail = format!("degree {}: NH gives {}, factored gives {}", d, a, b);
            break;
        }
    }
    suite.case("graded_dims_match", ok, first_fail);
    let u = divided_power_complex(n, p);
    let expect = reduce_op(&quantum_factorial(n as u32), p);
    suite.case(
        "symbol_un_plus",
        u.symbol() == expect,
        format!("[U_n^+]={:?} vs [n]!={:?}", u.symbol(), expect),
    );
    if n as u32 >= p {
        suite.case(
            "both_sides_zero",
            expect.is_zero() && u.is_contractible(),
            "n >= p: [n]! = 0 and U_n^+ contractible",
        );
    }
    suite
}

/// The non-local `NH_3` verification in characteristic 3: the basis-cell
/// filtration has contractible subquotients except the polynomial cell, so
/// the Grothendieck group collapses to a single generator.
pub fn nonlocal_nh3_check(bound: i64) -> Suite {
    let p = 3u32;
    let n = 3usize;
    let dif = NHDif::NonlocalNh3;
    let mut suite = Suite::new(&format!("nonlocal_nh3 D={}", bound));

    // d~ of the identity vanishes.
    let one = NHElem::one(p, n);
    suite.case("dif_of_identity", apply_dif(&one, &dif).is_zero(), "d~(1) = 0");

    // d~^3 = 0 on generators and all basis words.
    let mut nilpotent = true;
    let mut gens = vec![NHElem::del(p, n, 0), NHElem::del(p, n, 1)];
    for i in 0..3 {
        gens.push(NHElem::x(p, n, i));
    }
    let braid = NHElem::del(p, n, 0)
        .mul(&NHElem::del(p, n, 1))
        .mul(&NHElem::del(p, n, 0));
    gens.push(braid.clone());
    for g in &gens {
        let mut it = g.clone();
        for _ in 0..3 {
            it = apply_dif(&it, &dif);
        }
        if !it.is_zero() {
            nilpotent = false;
        }
    }
    suite.case("dif_cubed_zero", nilpotent, "d~^3 = 0 on generators and the braid");

    // Well-definedness across the braid relation.
    let braid2 = NHElem::del(p, n, 1)
        .mul(&NHElem::del(p, n, 0))
        .mul(&NHElem::del(p, n, 1));
    suite.case(
        "braid_well_defined",
        braid == braid2 && apply_dif(&braid, &dif) == apply_dif(&braid2, &dif),
        "d~ agrees on both reduced words of the long element",
    );

    // Cell filtration: d~(del_w) lies in Pol_3 del_w + lower-length cells,
    // with the diagonal part given by a linear twist.
    let words: Vec<(Perm, Vec<usize>)> = {
        let mut ws = vec![
            identity_perm(3),
            transposition(3, 0),
            transposition(3, 1),
            compose(&transposition(3, 0), &transposition(3, 1)),
            compose(&transposition(3, 1), &transposition(3, 0)),
            compose(
                &transposition(3, 0),
                &compose(&transposition(3, 1), &transposition(3, 0)),
            ),
        ];
        ws.sort_by_key(perm_len);
        ws.into_iter().map(|w| {
            let rw = reduced_word(&w);
            (w, rw)
        }).collect()
    };
    let mut filtration_ok = true;
    let mut twists: BTreeMap<Perm, Vec<u32>> = BTreeMap::new();
    for (w, _rw) in &words {
        let mut e = NHElem::zero(p, n);
        e.add_term(vec![0; 3], w.clone(), K::one(p));
        let de = apply_dif(&e, &dif);
        let lw = perm_len(w);
        let mut twist = vec![0u32; 3];
        for ((m, v), c) in &de.terms {
            if v == w {
                // diagonal part: must be linear
                let total: u32 = m.iter().sum();
                if total != 1 {
                    filtration_ok = false;
                } else {
                    let i = m.iter().position(|&e| e == 1).unwrap();
                    twist[i] = (twist[i] + c.re.value()) % p;
                }
            } else if perm_len(v) >= lw {
                filtration_ok = false;
            }
        }
        twists.insert(w.clone(), twist);
    }
    suite.case(
        "cell_filtration",
        filtration_ok,
        "d~(del_w) = (linear twist) del_w + lower cells",
    );

    // Frozen lower-order terms from the defining relations:
    // d~(del_1 del_2) = (x1+x3) del_1 del_2 + del_2 - del_1, and symmetrically.
    let d12 = compose(&transposition(3, 0), &transposition(3, 1));
    let d21 = compose(&transposition(3, 1), &transposition(3, 0));
    let check_lower = |w: &Perm, expect: Vec<(Perm, i64)>| -> bool {
        let mut e = NHElem::zero(p, n);
        e.add_term(vec![0; 3], w.clone(), K::one(p));
        let de = apply_dif(&e, &dif);
        let mut lower = NHElem::zero(p, n);
        for ((m, v), c) in &de.terms {
            if v != w {
                lower.add_term(m.clone(), v.clone(), *c);
            }
        }
        let mut want = NHElem::zero(p, n);
        for (v, coef) in expect {
            want.add_term(vec![0; 3], v, K::from_int(p, coef));
        }
        lower == want
    };
    suite.case(
        "lower_terms_d12",
        check_lower(&d12, vec![(transposition(3, 1), 1), (transposition(3, 0), -1)]),
        "d~(del_1 del_2) lower part is del_2 - del_1",
    );
    suite.case(
        "lower_terms_d21",
        check_lower(&d21, vec![(transposition(3, 1), 1), (transposition(3, 0), -1)]),
        "d~(del_2 del_1) lower part is del_2 - del_1",
    );
    let w0 = compose(&transposition(3, 0), &d21);
    suite.case(
        "lower_terms_w0",
        check_lower(&w0, vec![(d12.clone(), 1), (d21.clone(), -1)]),
        "d~(del_1 del_2 del_1) lower part is del_1 del_2 - del_2 del_1",
    );

    // Subquotient contractibility: the twisted polynomial cell for each
    // non-identity w is contractible in the trusted window; the identity cell
    // contributes exactly one unit block.
    let window = bound - 2 * p as i64;
    let mut cells_ok = true;
    let mut unit_ok = false;
    for (w, _) in &words {
        let twist = &twists[w];
        let c = twisted_pol3_complex(twist, bound);
        let dec = c.decompose().restrict_to_window(window).non_contractible();
        if perm_len(w) == 0 {
            unit_ok = dec.blocks.len() == 1 && dec.blocks.get(&(0, 0)) == Some(&1);
        } else if !dec.blocks.is_empty() {
            cells_ok = false;
        }
    }
    suite.case(
        "cells_contractible",
        cells_ok,
        "all del_w cells (w != e) contractible in window",
    );
    suite.case(
        "identity_cell_unit",
        unit_ok,
        "the Pol_3 cell carries exactly the unit block",
    );
    suite
}

/// `Pol_3` with the twisted differential `d(f) = dif(f) + (sum t_i x_i) f`,
/// truncated at the degree bound.
fn twisted_pol3_complex(twist: &[u32], bound: i64) -> PComplex {
    let p = 3u32;
    let n = 3usize;
    let total = (bound / 2).max(0) as u32;
    let monos = monomials_of_bounded_total(n, total);
    let index: BTreeMap<XMono, usize> = monos
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let basis = monos
        .iter()
        .map(|m| (format!("x{:?}", m), 2 * m.iter().sum::<u32>() as i64))
        .collect();
    let mut cols = Vec::new();
    for m in &monos {
        let mut col: BTreeMap<usize, Fp> = BTreeMap::new();
        for i in 0..n {
            // dif part
            if m[i] > 0 {
                let mut t = m.clone();
                t[i] += 1;
                if let Some(&j) = index.get(&t) {
                    let e = col.entry(j).or_insert_with(|| Fp::zero(p));
                    *e = *e + Fp::new(p, m[i] as i64);
                }
            }
            // twist part
            if twist[i] != 0 {
                let mut t = m.clone();
                t[i] += 1;
                if let Some(&j) = index.get(&t) {
                    let e = col.entry(j).or_insert_with(|| Fp::zero(p));
                    *e = *e + Fp::new(p, twist[i] as i64);
                }
            }
        }
        cols.push(col.into_iter().filter(|(_, c)| !c.is_zero()).collect());
    }
    PComplex::new(GradedSpace { p, basis }, cols).expect("twisted Pol_3 complex")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Op;

    fn del(p: u32, n: usize, i: usize) -> NHElem {
        NHElem::del(p, n, i)
    }

    #[test]
    fn nilhecke_relations() {
        let p = 5;
        let n = 3;
        // del_i^2 = 0
        assert!(del(p, n, 0).mul(&del(p, n, 0)).is_zero());
        // braid
        let lhs = del(p, n, 0).mul(&del(p, n, 1)).mul(&del(p, n, 0));
        let rhs = del(p, n, 1).mul(&del(p, n, 0)).mul(&del(p, n, 1));
        assert_eq!(lhs, rhs);
        // dot forcing: del_1 x_1 = x_2 del_1 + 1
        let lhs = del(p, 2, 0).mul(&NHElem::x(p, 2, 0));
        let mut rhs = NHElem::zero(p, 2);
        rhs.add_term(vec![0, 1], transposition(2, 0), K::one(p));
        rhs.add_term(vec![0, 0], identity_perm(2), K::one(p));
        assert_eq!(lhs, rhs);
        // del_1 x_2 = x_1 del_1 - 1
        let lhs = del(p, 2, 0).mul(&NHElem::x(p, 2, 1));
        let mut rhs = NHElem::zero(p, 2);
        rhs.add_term(vec![1, 0], transposition(2, 0), K::one(p));
        rhs.add_term(vec![0, 0], identity_perm(2), -K::one(p));
        assert_eq!(lhs, rhs);
        // distant commute
        let lhs = del(p, 4, 0).mul(&del(p, 4, 2));
        let rhs = del(p, 4, 2).mul(&del(p, 4, 0));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn local_dif_examples() {
        // d_1 (a=1) of del_1 in NH_2: 1 - 2 x_1 del_1 after straightening.
        let p = 5;
        let dif = NHDif::Local { a: K::one(p) };
        let d = apply_dif(&del(p, 2, 0), &dif);
        let mut expect = NHElem::zero(p, 2);
        expect.add_term(vec![0, 0], identity_perm(2), K::one(p));
        expect.add_term(vec![1, 0], transposition(2, 0), K::from_int(p, -2));
        assert_eq!(d, expect);
        // d(x_1) = x_1^2
        let dx = apply_dif(&NHElem::x(p, 2, 0), &dif);
        let mut expect2 = NHElem::zero(p, 2);
        expect2.add_term(vec![2, 0], identity_perm(2), K::one(p));
        assert_eq!(dx, expect2);
    }

    #[test]
    fn local_dif_p_nilpotent() {
        for p in [2u32, 3, 5] {
            for a in [1i64, -1] {
                let dif = NHDif::Local {
                    a: K::from_int(p, a),
                };
                for n in 2..=3usize {
                    for i in 0..n - 1 {
                        let mut e = del(p, n, i);
                        for _ in 0..p {
                            e = apply_dif(&e, &dif);
                        }
                        assert!(e.is_zero(), "p={} a={} n={} i={}", p, a, n, i);
                    }
                }
            }
        }
    }

    #[test]
    fn leibniz_on_random_pairs() {
        let p = 3;
        let n = 3;
        let dif = NHDif::Local { a: K::one(p) };
        let elems = [
            del(p, n, 0),
            del(p, n, 1).mul(&NHElem::x(p, n, 2)),
            NHElem::x(p, n, 0).mul(&del(p, n, 0)).add(&NHElem::one(p, n)),
            del(p, n, 0).mul(&del(p, n, 1)),
        ];
        for a in &elems {
            for b in &elems {
                let lhs = apply_dif(&a.mul(b), &dif);
                let rhs = apply_dif(a, &dif).mul(b).add(&a.mul(&apply_dif(b, &dif)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn probe_parameters_break_nilpotence() {
        // With a carrying an eps component, d^p fails to vanish.
        for p in [3u32, 5] {
            let dif = NHDif::Local {
                a: K::new(p, 1, 1),
            };
            let mut e = del(p, 2, 0);
            for _ in 0..p {
                e = apply_dif(&e, &dif);
            }
            assert!(!e.is_zero(), "probe differential must fail at iteration p={}", p);
        }
    }

    #[test]
    fn poly_action_examples() {
        let p = 5;
        let x1 = MultiPoly::var(p, 2, 0);
        let x2 = MultiPoly::var(p, 2, 1);
        assert_eq!(poly_action(&del(p, 2, 0), &x1), MultiPoly::one(p, 2));
        assert_eq!(
            poly_action(&del(p, 2, 0), &x2),
            MultiPoly::one(p, 2).scale(-Fp::one(p))
        );
        let sym = x1.mul(&x2);
        assert!(poly_action(&del(p, 2, 0), &sym).is_zero());
    }

    #[test]
    fn poly_action_agrees_with_straightening() {
        // action(a.mul(b)) == action(a) after action(b) on a sample of products
        let p = 3;
        let n = 3;
        let elems = [
            del(p, n, 0),
            del(p, n, 1),
            NHElem::x(p, n, 1),
            del(p, n, 0).mul(&del(p, n, 1)),
            NHElem::x(p, n, 0).mul(&del(p, n, 0)),
        ];
        let f = MultiPoly::var(p, n, 0)
            .mul(&MultiPoly::var(p, n, 0))
            .add(&MultiPoly::var(p, n, 2));
        for a in &elems {
            for b in &elems {
                let lhs = poly_action(&a.mul(b), &f);
                let rhs = poly_action(a, &poly_action(b, &f));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn divided_power_small() {
        // n=2: basis {v, x_1 v}, deg v = -1, symbol = [2].
        let c = divided_power_complex(2, 3);
        assert_eq!(c.space.dim(), 2);
        let dims = c.space.graded_dims();
        assert_eq!(dims.get(&-1), Some(&1));
        assert_eq!(dims.get(&1), Some(&1));
        let sym = c.symbol();
        assert_eq!(sym, reduce_op(&crate::scalars::quantum_int(2), 3));
        // n=1: symbol 1
        let c1 = divided_power_complex(1, 3);
        assert_eq!(c1.symbol(), Op::one(3));
        // n=p=3: contractible, symbol 0
        let c3 = divided_power_complex(3, 3);
        assert!(c3.is_contractible());
        assert!(c3.symbol().is_zero());
    }

    #[test]
    fn regular_filtration_dims() {
        let s = nh_regular_filtration_check(2, 3, 24);
        assert!(s.all_pass(), "{}", s.to_markdown());
        let s1 = nh_regular_filtration_check(1, 3, 24);
        assert!(s1.all_pass());
        let s3 = nh_regular_filtration_check(3, 3, 20);
        assert!(s3.all_pass(), "{}", s3.to_markdown());
    }

    #[test]
    fn nonlocal_nh3_suite_passes() {
        let s = nonlocal_nh3_check(20);
        assert!(s.all_pass(), "{}", s.to_markdown());
    }

    #[test]
    fn straightened_equality_matches_poly_action() {
        let p = 3;
        let n = 3;
        let a = del(p, n, 0).mul(&del(p, n, 1)).mul(&NHElem::x(p, n, 0));
        let b = a.clone();
        assert!(poly_action_eq(&a, &b, 12));
        let c = a.add(&NHElem::one(p, n));
        assert!(!poly_action_eq(&a, &c, 12));
    }
}
