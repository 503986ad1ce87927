#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use moncurve::semigroup::gcd_of;
use moncurve::{CurveSpec, Monomial, MonomialIdeal};
use rand::Rng;

/// Random valid curve of degree `2..=max_d` with up to `max_mid` interior
/// exponents.
pub fn random_curve(rng: &mut impl Rng, max_d: u32, max_mid: usize) -> CurveSpec {
    loop {
        let d = rng.gen_range(2..=max_d);
        let mid = rng.gen_range(0..=max_mid.min(d as usize - 1));
        let mut g: BTreeSet<u32> = [0, d].into();
        while g.len() < mid + 2 {
            g.insert(rng.gen_range(1..d));
        }
        if gcd_of(g.iter().copied()) != 1 {
            continue;
        }
        let g: Vec<i64> = g.into_iter().map(i64::from).collect();
        return CurveSpec::new(d as i64, &g, false).unwrap();
    }
}

/// Random curve containing `1` and `d - 1`.
pub fn random_smooth_curve(rng: &mut impl Rng, max_d: u32) -> CurveSpec {
    let d = rng.gen_range(1..=max_d);
    let mut g: BTreeSet<u32> = [0, d].into();
    if d >= 2 {
        g.insert(1);
        g.insert(d - 1);
    }
    for _ in 0..rng.gen_range(0..4) {
        if d >= 2 {
            g.insert(rng.gen_range(1..d));
        }
    }
    let g: Vec<i64> = g.into_iter().map(i64::from).collect();
    CurveSpec::new(d as i64, &g, false).unwrap()
}

/// Random ring monomial of degree `deg`.
pub fn random_ring_monomial(rng: &mut impl Rng, curve: &CurveSpec, deg: u32) -> Monomial {
    let piece = curve.graded_piece(deg);
    piece[rng.gen_range(0..piece.len())]
}

/// Random ideal with 1 to 3 generators of degree `1..=max_deg`.
pub fn random_ideal(rng: &mut impl Rng, curve: &CurveSpec, max_deg: u32) -> MonomialIdeal {
    let count = rng.gen_range(1..=3);
    let gens: Vec<Monomial> = (0..count)
        .map(|_| {
            let deg = rng.gen_range(1..=max_deg);
            random_ring_monomial(rng, curve, deg)
        })
        .collect();
    MonomialIdeal::new(curve, gens).unwrap()
}

/// `nG` by enumerating all multisets of size `n`.
pub fn naive_sumset(g: &[u32], n: u32) -> BTreeSet<u32> {
    fn go(g: &[u32], start: usize, left: u32, acc: u32, out: &mut BTreeSet<u32>) {
        if left == 0 {
            out.insert(acc);
            return;
        }
        for i in start..g.len() {
            go(g, i, left - 1, acc + g[i], out);
        }
    }
    let mut out = BTreeSet::new();
    go(g, 0, n, 0, &mut out);
    out
}

/// Ring membership by memoized search over one generator at a time.
pub struct NaiveRing {
    d: u32,
    g: Vec<u32>,
    memo: HashMap<(u32, u32), bool>,
}

impl NaiveRing {
    pub fn new(curve: &CurveSpec) -> Self {
        Self {
            d: curve.degree(),
            g: curve.exponents().to_vec(),
            memo: HashMap::new(),
        }
    }

    fn in_level(&mut self, n: u32, a: u32) -> bool {
        if n == 0 {
            return a == 0;
        }
        if a > n * self.d {
            return false;
        }
        if let Some(&x) = self.memo.get(&(n, a)) {
            return x;
        }
        let g = self.g.clone();
        let x = g.iter().any(|&x| x <= a && self.in_level(n - 1, a - x));
        self.memo.insert((n, a), x);
        x
    }

    pub fn contains(&mut self, m: &Monomial) -> bool {
        let total = m.s + m.t;
        total.is_multiple_of(self.d) && self.in_level(total / self.d, m.t)
    }

    pub fn piece(&mut self, n: u32) -> Vec<Monomial> {
        let top = n * self.d;
        (0..=top)
            .filter(|&a| self.in_level(n, a))
            .map(|a| Monomial::new(top - a, a))
            .collect()
    }

    pub fn ideal_contains(&mut self, gens: &[Monomial], m: &Monomial) -> bool {
        gens.iter().any(|v| match m.checked_div(v) {
            Some(q) => self.contains(&q),
            None => false,
        })
    }

    /// Degreewise members `0..=bound` of a set given by a predicate.
    pub fn members(
        &mut self,
        bound: u32,
        mut pred: impl FnMut(&mut Self, &Monomial) -> bool,
    ) -> Vec<HashSet<u32>> {
        (0..=bound)
            .map(|e| {
                self.piece(e)
                    .into_iter()
                    .filter(|m| pred(self, m))
                    .map(|m| m.t)
                    .collect()
            })
            .collect()
    }
}

/// Degreewise members of an ideal computed by the library.
pub fn fast_members(ideal: &MonomialIdeal, bound: u32) -> Vec<HashSet<u32>> {
    (0..=bound)
        .map(|e| {
            ideal
                .members_in_degree(e)
                .unwrap()
                .iter()
                .map(|x| x as u32)
                .collect()
        })
        .collect()
}
