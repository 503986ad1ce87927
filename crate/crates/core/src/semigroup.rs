//! Exponent-set model of the coordinate ring `K[M]` of a projective monomial
//! curve.
//!
//! A curve of degree `d` is given by its exponent set `G` (the `a` with
//! `s^(d-a) t^a` among the generators). The degree-`n` piece of the ring is
//! spanned by `s^(nd-a) t^a` for `a` in the `n`-fold sumset `nG`, so every
//! question about monomials reduces to sumset membership.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Serialize, Serializer};

use crate::bitset::Bitset;
use crate::error::{Error, Result};

/// A monomial `s^s t^t` of `K[s, t]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    pub s: u32,
    pub t: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { s: 0, t: 0 };

    pub const fn new(s: u32, t: u32) -> Self {
        Self { s, t }
    }

    pub fn total(&self) -> u64 {
        self.s as u64 + self.t as u64
    }

    /// Degree under a grading where every generator has total exponent `d`.
    pub fn degree(&self, d: u32) -> Option<u32> {
        let total = self.total();
        total
            .is_multiple_of(d as u64)
            .then(|| (total / d as u64) as u32)
    }

    /// `self / other` when `other` divides `self` in `K[s, t]`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        Some(Monomial::new(
            self.s.checked_sub(other.s)?,
            self.t.checked_sub(other.t)?,
        ))
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial::new(self.s * k, self.t * k)
    }
}

impl Mul for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial::new(self.s + rhs.s, self.t + rhs.t)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.s, self.t)
    }
}

impl FromStr for Monomial {
    type Err = Error;

    /// Parses the `A,B` encoding of `s^A t^B`.
    fn from_str(text: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Parse {
            token: text.to_string(),
            reason: reason.to_string(),
        };
        let (a, b) = text.split_once(',').ok_or_else(|| bad("expected `A,B`"))?;
        let s = a.parse().map_err(|_| bad("bad s-exponent"))?;
        let t = b.parse().map_err(|_| bad("bad t-exponent"))?;
        Ok(Monomial::new(s, t))
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [self.s, self.t].serialize(serializer)
    }
}

/// Memoized sumsets `nG`, grown on demand.
///
/// Level `n` is stored as a bitset over `0..=n*d`. Concurrent readers share
/// levels; a writer only ever appends the next level, so racing fills produce
/// identical tables.
#[derive(Debug)]
pub struct SumsetTable {
    degree: u32,
    gens: Vec<u32>,
    levels: RwLock<Vec<Arc<Bitset>>>,
    stable_from: OnceLock<u32>,
}

impl SumsetTable {
    fn new(degree: u32, gens: Vec<u32>) -> Self {
        let level0 = Arc::new(Bitset::from_indices(1, [0]));
        Self {
            degree,
            gens,
            levels: RwLock::new(vec![level0]),
            stable_from: OnceLock::new(),
        }
    }

    pub fn level(&self, n: u32) -> Arc<Bitset> {
        let n = n as usize;
        if let Some(l) = self.levels.read().unwrap().get(n) {
            return Arc::clone(l);
        }
        let mut levels = self.levels.write().unwrap();
        while levels.len() <= n {
            let prev = levels.last().unwrap();
            let len = levels.len() * self.degree as usize + 1;
            let mut next = Bitset::new(len);
            for &g in &self.gens {
                next.or_shifted(prev, g as usize);
            }
            levels.push(Arc::new(next));
        }
        Arc::clone(&levels[n])
    }

    /// Least `r` with `(r+1)G = rG ∪ (rG + d)`. The equality then holds at
    /// every later degree, because adding `G` to both sides preserves it.
    pub fn stable_from(&self) -> u32 {
        *self.stable_from.get_or_init(|| {
            let d = self.degree as usize;
            (0..)
                .find(|&r| {
                    let (w, next) = (self.level(r), self.level(r + 1));
                    let mut generated = w.resized(next.len());
                    generated.or_shifted(&w, d);
                    generated == *next
                })
                .unwrap()
        })
    }

    /// `a` lies in `nG`. Above the stable degree `r` this uses
    /// `nG = ∪_{i <= n-r} (rG + i d)` instead of materializing level `n`.
    pub fn contains(&self, n: u32, a: u32) -> bool {
        let d = self.degree as u64;
        let (n64, a64) = (n as u64, a as u64);
        if a64 > n64 * d {
            return false;
        }
        if (n as usize) < self.built_levels() {
            return self.level(n).contains(a as usize);
        }
        let r = self.stable_from();
        if n <= r + 1 {
            return self.level(n).contains(a as usize);
        }
        let base = self.level(r);
        let r64 = r as u64;
        // a - i d must land in [0, r d] with 0 <= i <= n - r
        let lo = a64.saturating_sub(r64 * d).div_ceil(d);
        let hi = (n64 - r64).min(a64 / d);
        (lo..=hi).any(|i| base.contains((a64 - i * d) as usize))
    }

    pub fn built_levels(&self) -> usize {
        self.levels.read().unwrap().len()
    }
}

#[derive(Debug)]
struct CurveData {
    degree: u32,
    exponents: Vec<u32>,
    table: SumsetTable,
}

/// A validated projective monomial curve: degree `d` and exponent set `G`
/// with `0, d` in `G` and `gcd(G \ {0}) = 1`.
///
/// Cloning is cheap; clones share the sumset memo.
#[derive(Clone, Debug)]
pub struct CurveSpec(Arc<CurveData>);

impl PartialEq for CurveSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.degree() == other.degree() && self.exponents() == other.exponents())
    }
}

impl Eq for CurveSpec {}

impl CurveSpec {
    /// Validates raw input. With `insert_endpoints` set, `0` and `d` are added
    /// when missing; otherwise their absence is an error.
    pub fn new(d: i64, exponents: &[i64], insert_endpoints: bool) -> Result<Self> {
        if d < 1 || d > u32::MAX as i64 {
            return Err(Error::DegenerateDegree(d));
        }
        let degree = d as u32;
        let mut g = Vec::with_capacity(exponents.len() + 2);
        for &e in exponents {
            if e < 0 || e > d {
                return Err(Error::OutOfRange {
                    exponent: e,
                    degree,
                });
            }
            g.push(e as u32);
        }
        if insert_endpoints {
            g.push(0);
            g.push(degree);
        }
        g.sort_unstable();
        g.dedup();
        for end in [0, degree] {
            if g.binary_search(&end).is_err() {
                return Err(Error::MissingEndpoint(end));
            }
        }
        let common = gcd_of(g.iter().copied().filter(|&x| x != 0));
        if common != 1 {
            return Err(Error::NonCoprime(common));
        }
        Ok(Self(Arc::new(CurveData {
            degree,
            table: SumsetTable::new(degree, g.clone()),
            exponents: g,
        })))
    }

    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    /// The exponent set `G`, strictly increasing.
    pub fn exponents(&self) -> &[u32] {
        &self.0.exponents
    }

    /// Number of intermediate exponents, `|G| - 2`.
    pub fn mid_count(&self) -> u32 {
        self.0.exponents.len() as u32 - 2
    }

    /// Upper bound `d - mid_count` on the regularity of the ring.
    pub fn regularity_bound(&self) -> u32 {
        self.degree() - self.mid_count()
    }

    /// `1` and `d - 1` both occur in `G`.
    pub fn is_smooth(&self) -> bool {
        let d = self.degree();
        self.contains_exponent(1) && self.contains_exponent(d - 1)
    }

    fn contains_exponent(&self, a: u32) -> bool {
        self.0.exponents.binary_search(&a).is_ok()
    }

    /// The degree-one generators `s^(d-a) t^a`, ordered by `a`.
    pub fn generators(&self) -> Vec<Monomial> {
        let d = self.degree();
        self.exponents()
            .iter()
            .map(|&a| Monomial::new(d - a, a))
            .collect()
    }

    pub fn table(&self) -> &SumsetTable {
        &self.0.table
    }

    /// The sumset `nG` as a bitset over `0..=n*d`.
    pub fn sumset_level(&self, n: u32) -> Arc<Bitset> {
        self.0.table.level(n)
    }

    /// `a` lies in `nG`.
    pub fn in_level(&self, n: u32, a: u32) -> bool {
        self.0.table.contains(n, a)
    }

    /// The monomial basis of the degree-`n` piece, ordered by t-exponent.
    pub fn graded_piece(&self, n: u32) -> Vec<Monomial> {
        let top = n * self.degree();
        self.sumset_level(n)
            .iter()
            .map(|a| Monomial::new(top - a as u32, a as u32))
            .collect()
    }

    /// Degree of `m`, or `NotGraded`.
    pub fn degree_of(&self, m: &Monomial) -> Result<u32> {
        m.degree(self.degree()).ok_or(Error::NotGraded {
            s: m.s,
            t: m.t,
            degree: self.degree(),
        })
    }

    pub fn is_in_ring(&self, m: &Monomial) -> Result<bool> {
        let n = self.degree_of(m)?;
        Ok(self.in_level(n, m.t))
    }

    /// Membership together with one decomposition of `m` into degree-one
    /// generators, given by their t-exponents.
    ///
    /// The witness prefers the smallest usable exponent at every step. That
    /// choice is not part of the contract and may change.
    pub fn ring_witness(&self, m: &Monomial) -> Result<Option<Vec<u32>>> {
        let n = self.degree_of(m)?;
        if !self.in_level(n, m.t) {
            return Ok(None);
        }
        let mut rest = m.t;
        let mut parts = Vec::with_capacity(n as usize);
        for level in (0..n).rev() {
            let below = self.sumset_level(level);
            let g = self
                .exponents()
                .iter()
                .copied()
                .find(|&g| g <= rest && below.contains((rest - g) as usize))
                .expect("sumset levels are closed under back-pointers");
            parts.push(g);
            rest -= g;
        }
        debug_assert_eq!(rest, 0);
        Ok(Some(parts))
    }

    /// Text form `d:g1,g2,...`.
    pub fn to_text(&self) -> String {
        format!("{}:{}", self.degree(), join(self.exponents(), ","))
    }

    /// t-side coordinate semigroup `<G \ {0}>`.
    pub fn t_semigroup(&self, bound: u64) -> AffineSemigroup {
        AffineSemigroup::new(self.exponents().iter().copied().filter(|&g| g != 0), bound)
    }

    /// s-side coordinate semigroup `<d - g : g in G, g != d>`.
    pub fn s_semigroup(&self, bound: u64) -> AffineSemigroup {
        let d = self.degree();
        AffineSemigroup::new(
            self.exponents()
                .iter()
                .copied()
                .filter(|&g| g != d)
                .map(|g| d - g),
            bound,
        )
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for CurveSpec {
    type Err = Error;

    /// Parses `d:g1,g2,...`; the list must contain both `0` and `d`.
    fn from_str(text: &str) -> Result<Self> {
        let (d, gs) = text.split_once(':').ok_or_else(|| Error::Parse {
            token: text.to_string(),
            reason: "expected `d:g1,g2,...`".into(),
        })?;
        let d = parse_int(d)?;
        let gs = gs.split(',').map(parse_int).collect::<Result<Vec<_>>>()?;
        CurveSpec::new(d, &gs, false)
    }
}

/// Validating constructor; see [`CurveSpec::new`].
pub fn make_curve(d: i64, exponents: &[i64], insert_endpoints: bool) -> Result<CurveSpec> {
    CurveSpec::new(d, exponents, insert_endpoints)
}

fn parse_int(token: &str) -> Result<i64> {
    token.parse().map_err(|_| Error::Parse {
        token: token.to_string(),
        reason: "not a base-10 integer".into(),
    })
}

pub(crate) fn join<T: fmt::Display>(xs: &[T], sep: &str) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// gcd of a list, `0` for an empty one.
pub fn gcd_of(xs: impl IntoIterator<Item = u32>) -> u32 {
    xs.into_iter().fold(0, gcd)
}

/// A numerical semigroup with membership tabulated on `0..=bound`.
#[derive(Clone, Debug)]
pub struct AffineSemigroup {
    generators: Vec<u32>,
    members: Bitset,
}

impl AffineSemigroup {
    pub fn new(generators: impl IntoIterator<Item = u32>, bound: u64) -> Self {
        let mut generators: Vec<u32> = generators.into_iter().filter(|&g| g > 0).collect();
        generators.sort_unstable();
        generators.dedup();
        let len = bound as usize + 1;
        let mut members = Bitset::new(len);
        members.insert(0);
        // coin-problem DP, ascending so every generator can repeat
        for x in 1..len {
            if generators
                .iter()
                .any(|&g| g as usize <= x && members.contains(x - g as usize))
            {
                members.insert(x);
            }
        }
        Self {
            generators,
            members,
        }
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn bound(&self) -> u64 {
        self.members.len() as u64 - 1
    }

    /// Same generators, tabulated up to `bound`.
    pub fn with_bound(&self, bound: u64) -> AffineSemigroup {
        AffineSemigroup::new(self.generators.iter().copied(), bound)
    }

    pub fn contains(&self, x: u64) -> Result<bool> {
        if x > self.bound() {
            return Err(Error::BoundExceeded {
                value: x,
                bound: self.bound(),
            });
        }
        Ok(self.members.contains(x as usize))
    }
}

pub fn sumset_level(curve: &CurveSpec, n: u32) -> Arc<Bitset> {
    curve.sumset_level(n)
}

pub fn graded_piece(curve: &CurveSpec, n: u32) -> Vec<Monomial> {
    curve.graded_piece(n)
}

pub fn is_in_ring(curve: &CurveSpec, m: &Monomial) -> Result<bool> {
    curve.is_in_ring(m)
}

pub fn semigroup_member(sg: &AffineSemigroup, x: u64) -> Result<bool> {
    sg.contains(x)
}
