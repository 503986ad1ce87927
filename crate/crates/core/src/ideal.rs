//! Monomial ideals of `K[M]` and their arithmetic.
//!
//! Membership is exact. Everything that produces a new ideal (colon,
//! saturation, intersection) or a verdict (equality, primariness) scans ring
//! monomials degree by degree up to an explicit bound, and the result carries
//! that bound.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::semigroup::{join, CurveSpec, Monomial};

/// An ideal of `K[M]` generated by finitely many monomials of the ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    curve: CurveSpec,
    gens: Vec<Monomial>,
    normalized: bool,
    bound: Option<u32>,
}

/// Default degree bound for ideal computations on `curve`:
/// `max(8, d - mid_count + 3)`.
pub fn default_degree_bound(curve: &CurveSpec) -> u32 {
    (curve.regularity_bound() + 3).max(8)
}

impl MonomialIdeal {
    /// Checks that every generator lies in the ring. The generator list is
    /// kept as given.
    pub fn new(curve: &CurveSpec, gens: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let gens: Vec<Monomial> = gens.into_iter().collect();
        for g in &gens {
            if !curve.is_in_ring(g)? {
                return Err(Error::NotInRing { s: g.s, t: g.t });
            }
        }
        Ok(Self {
            curve: curve.clone(),
            gens,
            normalized: false,
            bound: None,
        })
    }

    /// The principal ideal of `m`.
    pub fn principal(curve: &CurveSpec, m: Monomial) -> Result<Self> {
        Self::new(curve, [m])?.normalize()
    }

    pub fn curve(&self) -> &CurveSpec {
        &self.curve
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Degree bound the generator list is complete up to, for computed ideals.
    pub fn bound(&self) -> Option<u32> {
        self.bound
    }

    pub fn max_generator_degree(&self) -> u32 {
        let d = self.curve.degree();
        self.gens
            .iter()
            .map(|g| g.degree(d).unwrap())
            .max()
            .unwrap_or(0)
    }

    /// Drops duplicate and redundant generators and sorts the rest by
    /// (degree, t-exponent).
    pub fn normalize(mut self) -> Result<Self> {
        let d = self.curve.degree();
        self.gens.sort_by_key(|g| (g.degree(d).unwrap(), g.t));
        self.gens.dedup();
        let mut kept: Vec<Monomial> = Vec::with_capacity(self.gens.len());
        // a generator can only be divided by one of no larger degree, and
        // equal-degree division means equality
        for g in &self.gens {
            if !divides_any(&self.curve, &kept, g)? {
                kept.push(*g);
            }
        }
        self.gens = kept;
        self.normalized = true;
        Ok(self)
    }

    /// Exact membership: some generator divides `m` with quotient in the ring.
    pub fn contains(&self, m: &Monomial) -> Result<bool> {
        self.curve.degree_of(m)?;
        divides_any(&self.curve, &self.gens, m)
    }

    /// Members of degree `e`, as t-exponents.
    pub fn members_in_degree(&self, e: u32) -> Result<Bitset> {
        let top = e * self.curve.degree();
        let level = self.curve.sumset_level(e);
        let mut out = Bitset::new(level.len());
        for a in level.iter() {
            if self.contains(&Monomial::new(top - a as u32, a as u32))? {
                out.insert(a);
            }
        }
        Ok(out)
    }

    fn members_up_to(&self, bound: u32) -> Result<Vec<Bitset>> {
        (0..=bound).map(|e| self.members_in_degree(e)).collect()
    }

    /// The ideal generated by `members[e]` (t-exponents in degree `e`),
    /// keeping only minimal generators.
    pub fn from_members(curve: &CurveSpec, members: &[Bitset]) -> Self {
        let gens = minimal_generators(curve, members);
        Self {
            curve: curve.clone(),
            gens,
            normalized: true,
            bound: Some(members.len().saturating_sub(1) as u32),
        }
    }

    fn require_bound(&self, bound: u32) -> Result<()> {
        let required = self.max_generator_degree();
        if bound < required {
            return Err(Error::BoundTooSmall { bound, required });
        }
        Ok(())
    }

    fn require_same_curve(&self, other: &MonomialIdeal) -> Result<()> {
        if self.curve != other.curve {
            return Err(Error::CurveMismatch);
        }
        Ok(())
    }

    fn require_ring_element(&self, f: &Monomial) -> Result<u32> {
        let deg = self.curve.degree_of(f)?;
        if !self.curve.in_level(deg, f.t) {
            return Err(Error::NotInRing { s: f.s, t: f.t });
        }
        Ok(deg)
    }

    pub fn to_text(&self) -> String {
        format!("{}|{}", self.curve.to_text(), join(&self.gens, ";"))
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for MonomialIdeal {
    type Err = Error;

    /// Parses `d:g1,...,gk|A1,B1;A2,B2;...`.
    fn from_str(text: &str) -> Result<Self> {
        let (curve, gens) = text.split_once('|').ok_or_else(|| Error::Parse {
            token: text.to_string(),
            reason: "expected `curve|gen;gen;...`".into(),
        })?;
        let curve: CurveSpec = curve.parse()?;
        let gens = gens
            .split(';')
            .filter(|g| !g.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Monomial>>>()?;
        MonomialIdeal::new(&curve, gens)
    }
}

fn divides_any(curve: &CurveSpec, gens: &[Monomial], m: &Monomial) -> Result<bool> {
    let d = curve.degree();
    let deg = curve.degree_of(m)?;
    for v in gens {
        let Some(q) = m.checked_div(v) else { continue };
        let vdeg = v.degree(d).unwrap();
        if vdeg <= deg && curve.in_level(deg - vdeg, q.t) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Minimal generators of the ideal whose degree-`e` members are
/// `members[e]`, ordered by (degree, t-exponent).
///
/// A member is redundant iff dropping one degree-one factor leaves a member.
fn minimal_generators(curve: &CurveSpec, members: &[Bitset]) -> Vec<Monomial> {
    let d = curve.degree();
    let mut gens = Vec::new();
    for (e, set) in members.iter().enumerate() {
        let top = e as u32 * d;
        for a in set.iter() {
            let redundant = e > 0
                && curve
                    .exponents()
                    .iter()
                    .any(|&g| a >= g as usize && members[e - 1].contains(a - g as usize));
            if !redundant {
                gens.push(Monomial::new(top - a as u32, a as u32));
            }
        }
    }
    gens
}

/// Outcome of a check that was exhaustive only up to `bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundedVerdict {
    pub status: Status,
    pub bound: u32,
    pub counterexample: Option<Counterexample>,
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Counterexample {
    /// A monomial in exactly one of two ideals.
    Separating { monomial: Monomial, in_left: bool },
    /// `f * g` in the ideal, `f` not, and no power of `g` found.
    Pair { f: Monomial, g: Monomial },
}

impl BoundedVerdict {
    fn holds(bound: u32) -> Self {
        Self {
            status: Status::Holds,
            bound,
            counterexample: None,
            note: None,
        }
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::Holds
    }
}

impl fmt::Display for BoundedVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.status {
            Status::Holds => write!(f, "holds up to degree {}", self.bound)?,
            Status::Fails => write!(f, "fails (checked up to degree {})", self.bound)?,
        }
        match &self.counterexample {
            Some(Counterexample::Separating { monomial, in_left }) => write!(
                f,
                ": {monomial} lies only in the {} ideal",
                if *in_left { "first" } else { "second" }
            )?,
            Some(Counterexample::Pair { f: x, g }) => write!(f, ": pair ({x}) ({g})")?,
            None => {}
        }
        if let Some(note) = &self.note {
            write!(f, " [{note}]")?;
        }
        Ok(())
    }
}

pub fn ideal_member(ideal: &MonomialIdeal, m: &Monomial) -> Result<bool> {
    ideal.contains(m)
}

/// `(I : f)` up to `degree_bound`.
pub fn colon(ideal: &MonomialIdeal, f: &Monomial, degree_bound: u32) -> Result<MonomialIdeal> {
    ideal.require_bound(degree_bound)?;
    ideal.require_ring_element(f)?;
    let members = colon_members(ideal, f, 1, degree_bound)?;
    Ok(MonomialIdeal::from_members(ideal.curve(), &members))
}

/// Members of `(I : f^j)` in degrees `0..=bound`.
fn colon_members(ideal: &MonomialIdeal, f: &Monomial, j: u32, bound: u32) -> Result<Vec<Bitset>> {
    let fj = f.pow(j);
    let d = ideal.curve.degree();
    (0..=bound)
        .map(|e| {
            let level = ideal.curve.sumset_level(e);
            let mut out = Bitset::new(level.len());
            for a in level.iter() {
                let u = Monomial::new(e * d - a as u32, a as u32);
                if ideal.contains(&(u * fj))? {
                    out.insert(a);
                }
            }
            Ok(out)
        })
        .collect()
}

/// `(I : f^inf)` up to `degree_bound`.
///
/// Let `r` be the degree from which `(n+1)G = nG ∪ (nG + d)`. Once
/// `u f^j / v` has degree at least `r` and both exponents at least `r d` (or
/// constant in `j`), its membership in the ring depends only on `j` modulo
/// `d`. The chain `(I : f^j)` is increasing, so it is constant from that `j`
/// on, and a single colon by `f^j` is exact.
pub fn saturate(ideal: &MonomialIdeal, f: &Monomial, degree_bound: u32) -> Result<MonomialIdeal> {
    ideal.require_bound(degree_bound)?;
    ideal.require_ring_element(f)?;
    let curve = ideal.curve();
    let j = saturation_exponent(ideal, f)?;
    let members = colon_members(ideal, f, j, degree_bound)?;
    Ok(MonomialIdeal::from_members(curve, &members))
}

/// An exponent `j` with `(I : f^j) = (I : f^inf)`.
fn saturation_exponent(ideal: &MonomialIdeal, f: &Monomial) -> Result<u32> {
    let curve = ideal.curve();
    let d = curve.degree() as u64;
    let fdeg = curve.degree_of(f)? as u64;
    if fdeg == 0 {
        return Ok(1);
    }
    let r = curve.table().stable_from() as u64;
    let need = |target: u64, step: u32| -> u64 {
        if step == 0 {
            0
        } else {
            target.div_ceil(step as u64)
        }
    };
    let mut j = 1u64;
    for v in ideal.generators() {
        let vdeg = (v.s as u64 + v.t as u64) / d;
        j = j
            .max((r + vdeg).div_ceil(fdeg))
            .max(need(r * d + v.t as u64, f.t))
            .max(need(r * d + v.s as u64, f.s));
    }
    let cap = u32::MAX as u64 / (fdeg * d).max(1) / 4;
    if j > cap {
        return Err(Error::SaturationNotStabilized(cap as u32));
    }
    Ok(j as u32)
}

/// `I ∩ J` up to `degree_bound`.
pub fn intersect(
    left: &MonomialIdeal,
    right: &MonomialIdeal,
    degree_bound: u32,
) -> Result<MonomialIdeal> {
    left.require_same_curve(right)?;
    left.require_bound(degree_bound)?;
    right.require_bound(degree_bound)?;
    let mut members = left.members_up_to(degree_bound)?;
    for (e, set) in members.iter_mut().enumerate() {
        let other = right.members_in_degree(e as u32)?;
        let mut drop = set.clone();
        drop.difference_with(&other);
        set.difference_with(&drop);
    }
    Ok(MonomialIdeal::from_members(left.curve(), &members))
}

/// Compares membership degree by degree up to `degree_bound`; a failure
/// names the first separating monomial in (degree, t-exponent) order.
pub fn ideal_equal(
    left: &MonomialIdeal,
    right: &MonomialIdeal,
    degree_bound: u32,
) -> Result<BoundedVerdict> {
    left.require_same_curve(right)?;
    let d = left.curve.degree();
    for e in 0..=degree_bound {
        let a = left.members_in_degree(e)?;
        let b = right.members_in_degree(e)?;
        if a == b {
            continue;
        }
        let first = a
            .iter()
            .find(|x| !b.contains(*x))
            .map(|x| (x, true))
            .into_iter()
            .chain(b.iter().find(|x| !a.contains(*x)).map(|x| (x, false)))
            .min()
            .unwrap();
        let monomial = Monomial::new(e * d - first.0 as u32, first.0 as u32);
        return Ok(BoundedVerdict {
            status: Status::Fails,
            bound: degree_bound,
            counterexample: Some(Counterexample::Separating {
                monomial,
                in_left: first.1,
            }),
            note: None,
        });
    }
    Ok(BoundedVerdict::holds(degree_bound))
}

/// Bounded primariness test: for every pair of ring monomials `(f, g)` with
/// `deg f + deg g <= degree_bound`, `f g` in `I` and `f` not in `I` must put
/// some `g^k`, `k <= degree_bound * d`, into `I`.
///
/// A failing pair is reported with a note: the power search is itself
/// bounded, so "no power found" is the strongest available claim.
pub fn is_primary(ideal: &MonomialIdeal, degree_bound: u32) -> Result<BoundedVerdict> {
    let curve = ideal.curve();
    let d = curve.degree();
    let members = ideal.members_up_to(degree_bound)?;
    let cap = degree_bound * d;
    let mut power_cache: HashMap<Monomial, bool> = HashMap::new();
    for fdeg in 0..=degree_bound {
        for a in curve.sumset_level(fdeg).iter() {
            if members[fdeg as usize].contains(a) {
                continue;
            }
            let f = Monomial::new(fdeg * d - a as u32, a as u32);
            for gdeg in 0..=degree_bound - fdeg {
                let product_level = &members[(fdeg + gdeg) as usize];
                for b in curve.sumset_level(gdeg).iter() {
                    if !product_level.contains(a + b) {
                        continue;
                    }
                    let g = Monomial::new(gdeg * d - b as u32, b as u32);
                    let has_power = match power_cache.get(&g) {
                        Some(&p) => p,
                        None => {
                            let p = has_power_in(ideal, &g, cap)?;
                            power_cache.insert(g, p);
                            p
                        }
                    };
                    if !has_power {
                        return Ok(BoundedVerdict {
                            status: Status::Fails,
                            bound: degree_bound,
                            counterexample: Some(Counterexample::Pair { f, g }),
                            note: Some(format!("no power g^k in the ideal for k <= {cap}")),
                        });
                    }
                }
            }
        }
    }
    Ok(BoundedVerdict::holds(degree_bound))
}

fn has_power_in(ideal: &MonomialIdeal, g: &Monomial, cap: u32) -> Result<bool> {
    for k in 1..=cap {
        if ideal.contains(&g.pow(k))? {
            return Ok(true);
        }
    }
    Ok(false)
}
