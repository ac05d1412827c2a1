//! The multiparameter family of 2-categorical differentials: a tuple
//! `(a, abar, x, xbar, y, ybar)` per weight, subject to the coupling
//! constraints, plus the two distinguished specializations.

use crate::scalars::K;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct DifParams {
    pub p: u32,
    /// weight window (inclusive); accessors panic outside it
    pub window: (i64, i64),
    pub a: BTreeMap<i64, K>,
    pub abar: BTreeMap<i64, K>,
    pub x: BTreeMap<i64, K>,
    pub xbar: BTreeMap<i64, K>,
    pub y: BTreeMap<i64, K>,
    pub ybar: BTreeMap<i64, K>,
    /// probe mode admits constraint violations and eps-valued parameters
    pub probe: bool,
}

impl DifParams {
    pub fn from_fns(
        p: u32,
        window: (i64, i64),
        a: impl Fn(i64) -> K,
        abar: impl Fn(i64) -> K,
        x: impl Fn(i64) -> K,
        xbar: impl Fn(i64) -> K,
        y: impl Fn(i64) -> K,
        ybar: impl Fn(i64) -> K,
    ) -> DifParams {
        let mut out = DifParams {
            p,
            window,
            a: BTreeMap::new(),
            abar: BTreeMap::new(),
            x: BTreeMap::new(),
            xbar: BTreeMap::new(),
            y: BTreeMap::new(),
            ybar: BTreeMap::new(),
            probe: false,
        };
        for l in window.0..=window.1 {
            out.a.insert(l, a(l));
            out.abar.insert(l, abar(l));
            out.x.insert(l, x(l));
            out.xbar.insert(l, xbar(l));
            out.y.insert(l, y(l));
            out.ybar.insert(l, ybar(l));
        }
        out
    }

    /// The specialization with fantastic filtrations for the original
    /// factorization: `a = 1, abar = -1, x = 1, xbar = -l-1, y = -1, ybar = 0`.
    pub fn d1(p: u32, window: (i64, i64)) -> DifParams {
        DifParams::from_fns(
            p,
            window,
            |_| K::from_int(p, 1),
            |_| K::from_int(p, -1),
            |_| K::from_int(p, 1),
            |l| K::from_int(p, -l - 1),
            |_| K::from_int(p, -1),
            |_| K::from_int(p, 0),
        )
    }

    /// The dual specialization: `a = -1, abar = 1, x = -l-1, xbar = 1,
    /// y = 0, ybar = -1`.
    pub fn dm1(p: u32, window: (i64, i64)) -> DifParams {
        DifParams::from_fns(
            p,
            window,
            |_| K::from_int(p, -1),
            |_| K::from_int(p, 1),
            |l| K::from_int(p, -l - 1),
            |_| K::from_int(p, 1),
            |_| K::from_int(p, 0),
            |_| K::from_int(p, -1),
        )
    }

    pub fn preset(name: &str, p: u32, window: (i64, i64)) -> Option<DifParams> {
        match name {
            "d1" => Some(DifParams::d1(p, window)),
            "dm1" | "d-1" => Some(DifParams::dm1(p, window)),
            _ => None,
        }
    }

    fn get(map: &BTreeMap<i64, K>, l: i64, what: &str) -> K {
        *map.get(&l)
            .unwrap_or_else(|| panic!("parameter {} not defined at weight {}", what, l))
    }

    pub fn a(&self, l: i64) -> K {
        Self::get(&self.a, l, "a")
    }
    pub fn abar(&self, l: i64) -> K {
        Self::get(&self.abar, l, "abar")
    }
    pub fn x(&self, l: i64) -> K {
        Self::get(&self.x, l, "x")
    }
    pub fn xbar(&self, l: i64) -> K {
        Self::get(&self.xbar, l, "xbar")
    }
    pub fn y(&self, l: i64) -> K {
        Self::get(&self.y, l, "y")
    }
    pub fn ybar(&self, l: i64) -> K {
        Self::get(&self.ybar, l, "ybar")
    }

    /// Check the coupling constraints on the window interior:
    /// `a_l - abar_l = x_{l+2} - x_l - 2 y_l`, `x_l + xbar_l = -l`,
    /// `y_l + ybar_l = -1`. Returns the list of violations.
    pub fn constraint_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for l in self.window.0..=self.window.1 {
            let x_sum = self.x(l) + self.xbar(l);
            if x_sum != K::from_int(self.p, -l) {
                out.push(format!("x({l}) + xbar({l}) != -({l})"));
            }
            let y_sum = self.y(l) + self.ybar(l);
            if y_sum != K::from_int(self.p, -1) {
                out.push(format!("y({l}) + ybar({l}) != -1"));
            }
            if l + 2 <= self.window.1 {
                let lhs = self.a(l) - self.abar(l);
                let rhs = self.x(l + 2) - self.x(l) - self.y(l) - self.y(l);
                if lhs != rhs {
                    out.push(format!("a({l}) - abar({l}) != x({}) - x({l}) - 2y({l})", l + 2));
                }
            }
        }
        out
    }

    /// Every parameter has a vanishing eps part.
    pub fn is_base_field(&self) -> bool {
        let maps = [&self.a, &self.abar, &self.x, &self.xbar, &self.y, &self.ybar];
        maps.iter()
            .all(|m| m.values().all(|v| v.eps.is_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_satisfy_constraints() {
        for p in [2u32, 3, 5] {
            for preset in ["d1", "dm1"] {
                let params = DifParams::preset(preset, p, (-6, 6)).unwrap();
                let v = params.constraint_violations();
                assert!(v.is_empty(), "{} at p={}: {:?}", preset, p, v);
                assert!(params.is_base_field());
            }
        }
    }

    #[test]
    fn violations_are_reported() {
        let p = 3;
        let mut params = DifParams::d1(p, (-2, 2));
        params.ybar.insert(0, K::from_int(p, 1));
        let v = params.constraint_violations();
        assert!(v.iter().any(|s| s.contains("y(0)")), "{:?}", v);
    }
}
