//! Exact scalar arithmetic: Laurent polynomials in `q` over the integers,
//! the cyclotomic quotient ring `O_p = Z[q]/(1 + q^2 + ... + q^(2(p-1)))`,
//! quantum integers and factorials, the prime field `F_p`, and the probe
//! ring `F_p[eps]/(eps^2)`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Deterministic primality test, adequate for moduli below 2^32.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    for d in [2u32, 3, 5, 7] {
        if n == d {
            return true;
        }
        if n % d == 0 {
            return false;
        }
    }
    // Deterministic Miller-Rabin bases for n < 3,215,031,751.
    let bases = [2u64, 3, 5, 7];
    let n64 = n as u64;
    let mut d = n64 - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &bases {
        let mut x = modpow(a % n64, d, n64);
        if x == 1 || x == n64 - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = (x as u128 * x as u128 % n64 as u128) as u64;
            if x == n64 - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn modpow(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut bb = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % m as u128;
        }
        bb = bb * bb % m as u128;
        e >>= 1;
    }
    acc as u64
}

/// An element of the prime field `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fp {
    p: u32,
    v: u32,
}

impl Fp {
    pub fn new(p: u32, v: i64) -> Fp {
        assert!(is_prime(p), "modulus {} is not prime", p);
        Fp {
            p,
            v: v.rem_euclid(p as i64) as u32,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn value(&self) -> u32 {
        self.v
    }

    pub fn zero(p: u32) -> Fp {
        Fp::new(p, 0)
    }

    pub fn one(p: u32) -> Fp {
        Fp::new(p, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.v == 0
    }

    pub fn inv(&self) -> Fp {
        assert!(self.v != 0, "division by zero in F_{}", self.p);
        // Fermat.
        let mut acc = Fp::one(self.p);
        let mut e = self.p - 2;
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b;
            }
            b = b * b;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        assert_eq!(self.p, rhs.p);
        Fp {
            p: self.p,
            v: (self.v + rhs.v) % self.p,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        assert_eq!(self.p, rhs.p);
        Fp {
            p: self.p,
            v: (self.v + self.p - rhs.v) % self.p,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        assert_eq!(self.p, rhs.p);
        Fp {
            p: self.p,
            v: ((self.v as u64 * rhs.v as u64) % self.p as u64) as u32,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            p: self.p,
            v: (self.p - self.v) % self.p,
        }
    }
}

/// An element `a + b*eps` of `F_p[eps]/(eps^2)`.
///
/// Ordinary field values carry `b = 0`; probe mode perturbs parameters by an
/// infinitesimal to witness failures of p-nilpotence outside `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct K {
    pub re: Fp,
    pub eps: Fp,
}

impl K {
    pub fn new(p: u32, re: i64, eps: i64) -> K {
        K {
            re: Fp::new(p, re),
            eps: Fp::new(p, eps),
        }
    }

    pub fn from_fp(re: Fp) -> K {
        K {
            re,
            eps: Fp::zero(re.p),
        }
    }

    pub fn from_int(p: u32, n: i64) -> K {
        K::new(p, n, 0)
    }

    pub fn zero(p: u32) -> K {
        K::new(p, 0, 0)
    }

    pub fn one(p: u32) -> K {
        K::new(p, 1, 0)
    }

    pub fn p(&self) -> u32 {
        self.re.p()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }

    pub fn inv(&self) -> K {
        // (a + b eps)^-1 = a^-1 - a^-2 b eps
        let ai = self.re.inv();
        K {
            re: ai,
            eps: -(ai * ai * self.eps),
        }
    }
}

impl fmt::Debug for K {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.eps.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}+{}e", self.re, self.eps)
        }
    }
}

impl Add for K {
    type Output = K;
    fn add(self, rhs: K) -> K {
        K {
            re: self.re + rhs.re,
            eps: self.eps + rhs.eps,
        }
    }
}

impl Sub for K {
    type Output = K;
    fn sub(self, rhs: K) -> K {
        K {
            re: self.re - rhs.re,
            eps: self.eps - rhs.eps,
        }
    }
}

impl Mul for K {
    type Output = K;
    fn mul(self, rhs: K) -> K {
        K {
            re: self.re * rhs.re,
            eps: self.re * rhs.eps + self.eps * rhs.re,
        }
    }
}

impl Neg for K {
    type Output = K;
    fn neg(self) -> K {
        K {
            re: -self.re,
            eps: -self.eps,
        }
    }
}

/// An exact Laurent polynomial in `q` with integer coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentInt {
    // exponent -> nonzero coefficient
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentInt {
    pub fn zero() -> LaurentInt {
        LaurentInt::default()
    }

    pub fn one() -> LaurentInt {
        LaurentInt::monomial(0, 1)
    }

    pub fn monomial(exp: i64, coeff: i64) -> LaurentInt {
        let mut m = BTreeMap::new();
        if coeff != 0 {
            m.insert(exp, BigInt::from(coeff));
        }
        LaurentInt { coeffs: m }
    }

    pub fn q(exp: i64) -> LaurentInt {
        LaurentInt::monomial(exp, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    /// The bar involution `q -> q^{-1}`.
    pub fn bar(&self) -> LaurentInt {
        let mut out = LaurentInt::zero();
        for (e, c) in &self.coeffs {
            out.add_term(-e, c.clone());
        }
        out
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Exact division; panics if `self` is not divisible by `rhs`.
    pub fn div_exact(&self, rhs: &LaurentInt) -> LaurentInt {
        self.try_div_exact(rhs)
            .expect("Laurent division was not exact")
    }

    pub fn try_div_exact(&self, rhs: &LaurentInt) -> Option<LaurentInt> {
        assert!(!rhs.is_zero(), "division by zero Laurent polynomial");
        let mut rem = self.clone();
        let mut quot = LaurentInt::zero();
        let (lead_exp, lead_coeff) = {
            let e = *rhs.coeffs.keys().next_back().unwrap();
            (e, rhs.coeffs[&e].clone())
        };
        while !rem.is_zero() {
            let re = rem.max_exp().unwrap();
            let rc = rem.coeff(re);
            if (&rc % &lead_coeff) != BigInt::zero() {
                return None;
            }
            let qc = &rc / &lead_coeff;
            let qe = re - lead_exp;
            quot.add_term(qe, qc.clone());
            let mut piece = LaurentInt::zero();
            piece.add_term(qe, qc);
            rem = rem.clone() - piece * rhs.clone();
        }
        Some(quot)
    }

    /// Renders as e.g. `q^2 + 1 + q^-2` (descending exponents).
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let unit_coeff = mag.is_one();
            match (*e, unit_coeff) {
                (0, _) => out.push_str(&mag.to_string()),
                (1, true) => out.push('q'),
                (1, false) => out.push_str(&format!("{}*q", mag)),
                (_, true) => out.push_str(&format!("q^{}", e)),
                (_, false) => out.push_str(&format!("{}*q^{}", mag, e)),
            }
        }
        out
    }
}

impl fmt::Debug for LaurentInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl Add for LaurentInt {
    type Output = LaurentInt;
    fn add(self, rhs: LaurentInt) -> LaurentInt {
        let mut out = self;
        for (e, c) in rhs.coeffs {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for LaurentInt {
    type Output = LaurentInt;
    fn sub(self, rhs: LaurentInt) -> LaurentInt {
        let mut out = self;
        for (e, c) in rhs.coeffs {
            out.add_term(e, -c);
        }
        out
    }
}

impl Mul for LaurentInt {
    type Output = LaurentInt;
    fn mul(self, rhs: LaurentInt) -> LaurentInt {
        let mut out = LaurentInt::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for LaurentInt {
    type Output = LaurentInt;
    fn neg(self) -> LaurentInt {
        LaurentInt::zero() - self
    }
}

/// The quantum integer `[n] = (q^n - q^-n)/(q - q^-1)`, with `[-n] = -[n]`.
pub fn quantum_int(n: i64) -> LaurentInt {
    if n < 0 {
        return -quantum_int(-n);
    }
    let mut out = LaurentInt::zero();
    for i in 0..n {
        out.add_term(n - 1 - 2 * i, BigInt::one());
    }
    out
}

/// `[n]! = [1][2]...[n]`, with `[0]! = 1`.
pub fn quantum_factorial(n: u32) -> LaurentInt {
    let mut out = LaurentInt::one();
    for k in 1..=n {
        out = out * quantum_int(k as i64);
    }
    out
}

/// The balanced quantum binomial `[n choose k]`, computed by exact division.
pub fn quantum_binomial(n: u32, k: u32) -> LaurentInt {
    if k > n {
        return LaurentInt::zero();
    }
    let num = quantum_factorial(n);
    let den = quantum_factorial(k) * quantum_factorial(n - k);
    num.div_exact(&den)
}

/// The defining polynomial `1 + q^2 + ... + q^(2(p-1))` of `O_p`.
pub fn defining_poly(p: u32) -> LaurentInt {
    let mut out = LaurentInt::zero();
    for i in 0..p {
        out.add_term(2 * i as i64, BigInt::one());
    }
    out
}

/// An element of `O_p = Z[q]/(1 + q^2 + ... + q^(2(p-1)))` in the canonical
/// residue with exponents in `[0, 2p-3]`.
#[derive(Clone, PartialEq, Eq)]
pub struct Op {
    p: u32,
    rep: LaurentInt,
}

impl Op {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rep(&self) -> &LaurentInt {
        &self.rep
    }

    pub fn zero(p: u32) -> Op {
        reduce_op(&LaurentInt::zero(), p)
    }

    pub fn one(p: u32) -> Op {
        reduce_op(&LaurentInt::one(), p)
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn bar(&self) -> Op {
        reduce_op(&self.rep.bar(), self.p)
    }

    pub fn render(&self) -> String {
        self.rep.render()
    }
}

impl fmt::Debug for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod O_{})", self.rep.render(), self.p)
    }
}

impl Add for Op {
    type Output = Op;
    fn add(self, rhs: Op) -> Op {
        assert_eq!(self.p, rhs.p);
        reduce_op(&(self.rep + rhs.rep), self.p)
    }
}

impl Sub for Op {
    type Output = Op;
    fn sub(self, rhs: Op) -> Op {
        assert_eq!(self.p, rhs.p);
        reduce_op(&(self.rep - rhs.rep), self.p)
    }
}

impl Mul for Op {
    type Output = Op;
    fn mul(self, rhs: Op) -> Op {
        assert_eq!(self.p, rhs.p);
        reduce_op(&(self.rep * rhs.rep), self.p)
    }
}

impl Neg for Op {
    type Output = Op;
    fn neg(self) -> Op {
        reduce_op(&(-self.rep), self.p)
    }
}

/// Reduce an integral Laurent polynomial into `O_p`.
///
/// Uses `q^(2p) = 1` to clear negative exponents, then divides by the
/// defining polynomial so that the representative has exponents in
/// `[0, 2p-3]`.
pub fn reduce_op(x: &LaurentInt, p: u32) -> Op {
    assert!(is_prime(p), "O_p modulus {} is not prime", p);
    let period = 2 * p as i64;
    let mut folded = LaurentInt::zero();
    for (e, c) in x.terms() {
        folded.add_term(e.rem_euclid(period), c.clone());
    }
    // Now exponents are in [0, 2p-1]; eliminate exponents >= 2p-2 via the
    // defining relation q^(2p-2) = -(1 + q^2 + ... + q^(2p-4)).
    let def = defining_poly(p);
    let top = 2 * (p as i64) - 2;
    loop {
        let me = match folded.max_exp() {
            Some(e) if e >= top => e,
            _ => break,
        };
        let c = folded.coeff(me);
        let mut shift = LaurentInt::zero();
        shift.add_term(me - top, c);
        folded = folded - shift * def.clone();
    }
    Op { p, rep: folded }
}
