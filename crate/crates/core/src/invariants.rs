//! Macaulayfication, Hartshorne-Rao module, Buchsbaum level, reduction
//! numbers and regularity.
//!
//! The Macaulayfication `R~` of a monomial curve is again a monomial algebra.
//! Its degree-`n` piece is spanned by the `s^(nd-a) t^a` whose t-exponent lies
//! in the t-side semigroup and whose s-exponent lies in the s-side semigroup.
//! `T(n)` below always denotes the t-exponents of `R~_n` missing from `R_n`,
//! so `R~/R` (the Rao module) has Hilbert function `n -> |T(n)|`.

use std::fmt;

use serde::Serialize;

use crate::bitset::Bitset;
use crate::error::{Error, Result};
use crate::ideal::{saturate, MonomialIdeal};
use crate::semigroup::{CurveSpec, Monomial};

/// `R~` described by the exponents it adds to `R`, degree by degree.
#[derive(Clone, Debug)]
pub struct Macaulayfication {
    curve: CurveSpec,
    bound: u32,
    extra: Vec<Bitset>,
    new_gens: Vec<Monomial>,
    l: Option<u32>,
    a_invariant: Option<u32>,
}

impl PartialEq for Macaulayfication {
    fn eq(&self, other: &Self) -> bool {
        self.curve == other.curve
            && self.bound == other.bound
            && self.extra == other.extra
            && self.new_gens == other.new_gens
            && self.l == other.l
    }
}

impl Macaulayfication {
    pub fn curve(&self) -> &CurveSpec {
        &self.curve
    }

    /// Degrees `0..=bound` were computed; above that `R~_n = R_n`.
    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// `T(n)`; empty above the bound.
    pub fn extra(&self, n: u32) -> Bitset {
        match self.extra.get(n as usize) {
            Some(t) => t.clone(),
            None => Bitset::new(n as usize * self.curve.degree() as usize + 1),
        }
    }

    /// t-exponents of `R~_n`, i.e. `nG ∪ T(n)`.
    pub fn rtilde_level(&self, n: u32) -> Bitset {
        let mut level = (*self.curve.sumset_level(n)).clone();
        if let Some(t) = self.extra.get(n as usize) {
            level.union_with(t);
        }
        level
    }

    /// Minimal algebra generators of `R~` over `R`, by (degree, t-exponent).
    pub fn new_generators(&self) -> &[Monomial] {
        &self.new_gens
    }

    /// t-exponents of the new generators.
    pub fn new_generator_exponents(&self) -> Vec<u32> {
        self.new_gens.iter().map(|m| m.t).collect()
    }

    /// Common degree of the new generators, when there are some and they
    /// agree.
    pub fn l(&self) -> Option<u32> {
        self.l
    }

    /// `R~ = R`.
    pub fn is_trivial(&self) -> bool {
        self.new_gens.is_empty()
    }

    /// Top degree of `R~/R`; `None` stands for `-inf`.
    pub fn a_invariant(&self) -> Option<u32> {
        self.a_invariant
    }

    /// `G_{R~} = lG ∪ H`, with `H` the new-generator exponents.
    pub fn g_tilde(&self) -> Option<Bitset> {
        let l = self.l?;
        let mut g = (*self.curve.sumset_level(l)).clone();
        for h in self.new_generator_exponents() {
            g.insert(h as usize);
        }
        Some(g)
    }

    fn from_extra(curve: &CurveSpec, bound: u32, extra: Vec<Bitset>) -> Result<Self> {
        let limit = curve.regularity_bound();
        for (n, t) in extra.iter().enumerate() {
            let n = n as u32;
            if !t.is_empty() && n >= limit {
                return Err(Error::StabilizationViolated { degree: n, limit });
            }
            let mut overlap = t.clone();
            overlap.difference_with(&curve.sumset_level(n));
            if overlap != *t {
                return Err(Error::InvariantViolation(format!("T({n}) meets {n}G")));
            }
        }
        let new_gens = minimal_algebra_generators(curve, &extra);
        let d = curve.degree();
        let mut degrees = new_gens.iter().map(|m| m.degree(d).unwrap());
        let l = match degrees.next() {
            Some(first) if degrees.all(|x| x == first) => Some(first),
            _ => None,
        };
        let a_invariant = extra.iter().rposition(|t| !t.is_empty()).map(|n| n as u32);
        Ok(Self {
            curve: curve.clone(),
            bound,
            extra,
            new_gens,
            l,
            a_invariant,
        })
    }
}

/// Greedy degree-by-degree extraction. An element of `T(n)` is decomposable
/// iff it is a degree-one generator of `R` times an element of `R~_{n-1}`, or
/// a product of two elements of `R~ \ R` of lower degrees.
fn minimal_algebra_generators(curve: &CurveSpec, extra: &[Bitset]) -> Vec<Monomial> {
    let d = curve.degree();
    let mut gens = Vec::new();
    for n in 1..extra.len() {
        if extra[n].is_empty() {
            continue;
        }
        let mut below = (*curve.sumset_level(n as u32 - 1)).clone();
        below.union_with(&extra[n - 1]);
        for c in extra[n].iter() {
            let via_r = curve
                .exponents()
                .iter()
                .any(|&g| c >= g as usize && below.contains(c - g as usize));
            let via_pair = || {
                (1..n).any(|i| {
                    extra[i]
                        .iter()
                        .any(|c1| c >= c1 && extra[n - i].contains(c - c1))
                })
            };
            if !via_r && !via_pair() {
                gens.push(Monomial::new(n as u32 * d - c as u32, c as u32));
            }
        }
    }
    gens
}

fn require_bound(curve: &CurveSpec, bound: u32) -> Result<()> {
    let required = curve.regularity_bound();
    if bound < required {
        return Err(Error::BoundTooSmall { bound, required });
    }
    Ok(())
}

/// `R~` read off the two affine charts: `a` is a t-exponent of `R~_n` iff
/// `a` lies in the t-side semigroup and `nd - a` in the s-side semigroup.
pub fn macaulayfication_sections(curve: &CurveSpec, bound: u32) -> Result<Macaulayfication> {
    require_bound(curve, bound)?;
    let d = curve.degree();
    let chart_bound = (bound as u64 + 1) * d as u64;
    let gamma_t = curve.t_semigroup(chart_bound);
    let gamma_s = curve.s_semigroup(chart_bound);
    let mut extra = Vec::with_capacity(bound as usize + 1);
    for n in 0..=bound {
        let top = n as u64 * d as u64;
        let level = curve.sumset_level(n);
        let mut t = Bitset::new(top as usize + 1);
        for a in 0..=top {
            if gamma_t.contains(a)? && gamma_s.contains(top - a)? && !level.contains(a as usize) {
                t.insert(a as usize);
            }
        }
        extra.push(t);
    }
    Macaulayfication::from_extra(curve, bound, extra)
}

/// `R~ = x^-1 C(x)` for `x = s^(pd)`, where `C(x) = ((x) : (t^d)^inf)` comes
/// from the ideal arithmetic. `p` grows until the quotient stops changing.
pub fn macaulayfication_colon(curve: &CurveSpec, bound: u32) -> Result<Macaulayfication> {
    require_bound(curve, bound)?;
    let d = curve.degree();
    let t_d = Monomial::new(0, d);
    let quotient = |p: u32| -> Result<Vec<Bitset>> {
        let x = MonomialIdeal::principal(curve, Monomial::new(p * d, 0))?;
        let closure = saturate(&x, &t_d, bound + p)?;
        (0..=bound)
            .map(|n| {
                // members of degree n + p divisible by s^(pd): t-exponent <= nd
                let members = closure.members_in_degree(n + p)?;
                let mut t = members.resized(n as usize * d as usize + 1);
                t.difference_with(&curve.sumset_level(n));
                Ok(t)
            })
            .collect()
    };
    let cap = bound + 1;
    let mut prev = quotient(1)?;
    for p in 2..=cap + 1 {
        let next = quotient(p)?;
        if next == prev {
            return Macaulayfication::from_extra(curve, bound, prev);
        }
        prev = next;
    }
    Err(Error::NotStabilized(cap))
}

/// `A + B` for exponent sets, truncated to `len`.
fn sumset(a: &Bitset, b: &Bitset, len: usize) -> Bitset {
    let (small, large) = if a.count() <= b.count() {
        (a, b)
    } else {
        (b, a)
    };
    let mut out = Bitset::new(len);
    for x in small.iter() {
        out.or_shifted(large, x);
    }
    out
}

/// `kG + T(n) ⊆ (n+k)G` for every `n`, i.e. `M^k` kills `R~/R`.
fn kills_rao_module(mac: &Macaulayfication, k: u32) -> bool {
    let curve = &mac.curve;
    let d = curve.degree() as usize;
    let kg = curve.sumset_level(k);
    mac.extra.iter().enumerate().all(|(n, t)| {
        if t.is_empty() {
            return true;
        }
        let target = curve.sumset_level(n as u32 + k);
        sumset(&kg, t, (n + k as usize) * d + 1).is_subset(&target)
    })
}

/// Least `k` with `M^k (R~/R) = 0`.
pub fn buchsbaum_level(curve: &CurveSpec, mac: &Macaulayfication) -> Result<u32> {
    if mac.curve != *curve {
        return Err(Error::CurveMismatch);
    }
    let cap = mac.a_invariant.map_or(0, |a| a + 1);
    for k in 0..=cap {
        if kills_rao_module(mac, k) {
            if !kills_rao_module(mac, k + 1) {
                return Err(Error::InvariantViolation(format!(
                    "M^{k} kills R~/R but M^{} does not",
                    k + 1
                )));
            }
            return Ok(k);
        }
    }
    Err(Error::InvariantViolation(format!(
        "Buchsbaum level exceeds a(R~/R) + 1 = {cap}"
    )))
}

/// Outcome of the numerical `kG + G~ ⊆ (k+l)G` test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub holds: bool,
    /// Smallest element of `kG + G~` outside `(k+l)G`.
    pub witness: Option<u32>,
}

/// `l` for the numerical criteria; `R~ = R` counts as generated in degree 1.
fn effective_l(mac: &Macaulayfication) -> Result<u32> {
    match mac.l {
        Some(l) => Ok(l),
        None if mac.is_trivial() => Ok(1),
        None => Err(Error::LUndefined),
    }
}

/// `H + H ⊆ 2lG` or `H + H ⊆ lG + H`, each tested as a whole.
pub fn check_level_hypothesis(curve: &CurveSpec, mac: &Macaulayfication) -> Result<bool> {
    if mac.is_trivial() {
        return Ok(true);
    }
    let l = effective_l(mac)?;
    let d = curve.degree() as usize;
    let len = 2 * l as usize * d + 1;
    let h = Bitset::from_indices(
        l as usize * d + 1,
        mac.new_generator_exponents()
            .into_iter()
            .map(|x| x as usize),
    );
    let hh = sumset(&h, &h, len);
    if hh.is_subset(&curve.sumset_level(2 * l)) {
        return Ok(true);
    }
    Ok(hh.is_subset(&sumset(&curve.sumset_level(l), &h, len)))
}

/// Tests `kG + G~ ⊆ (k+l)G`; the reverse inclusion always holds and is
/// asserted.
pub fn check_strict_k_criterion(
    curve: &CurveSpec,
    mac: &Macaulayfication,
    k: u32,
) -> Result<CriterionOutcome> {
    let l = effective_l(mac)?;
    if !check_level_hypothesis(curve, mac)? {
        return Err(Error::HypothesisNotVerified);
    }
    let d = curve.degree() as usize;
    let len = (k + l) as usize * d + 1;
    let g_tilde = if mac.is_trivial() {
        (*curve.sumset_level(l)).clone()
    } else {
        mac.g_tilde().expect("l is defined")
    };
    let lhs = sumset(&curve.sumset_level(k), &g_tilde, len);
    let target = curve.sumset_level(k + l);
    if !target.is_subset(&lhs) {
        return Err(Error::InvariantViolation(format!(
            "({}){}G not contained in {k}G + G~",
            k + l,
            ""
        )));
    }
    let witness = lhs.iter().find(|&x| !target.contains(x)).map(|x| x as u32);
    Ok(CriterionOutcome {
        holds: witness.is_none(),
        witness,
    })
}

/// Hilbert function of `R~/R` over degrees `0..=bound`, plus its top degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaoModule {
    pub dims: Vec<usize>,
    pub a_invariant: Option<u32>,
}

pub fn rao_module(mac: &Macaulayfication) -> RaoModule {
    RaoModule {
        dims: mac.extra.iter().map(Bitset::count).collect(),
        a_invariant: mac.a_invariant,
    }
}

/// Least `n` with `W_{n+1} = W_n ∪ (W_n + d)`, searched for `n <= limit`.
///
/// The equality is also checked at the two following degrees.
pub fn reduction_number(mut levels: impl FnMut(u32) -> Bitset, d: u32, limit: u32) -> Result<u32> {
    let step = |w: &Bitset, next: &Bitset| -> bool {
        let mut generated = w.resized(next.len());
        generated.or_shifted(w, d as usize);
        generated == *next
    };
    let mut cache: Vec<Bitset> = vec![levels(0)];
    let mut level = |n: u32, cache: &mut Vec<Bitset>| -> Bitset {
        while cache.len() <= n as usize {
            cache.push(levels(cache.len() as u32));
        }
        cache[n as usize].clone()
    };
    for n in 0..=limit {
        let (w, next) = (level(n, &mut cache), level(n + 1, &mut cache));
        if step(&w, &next) {
            for m in n + 1..=n + 2 {
                let (w, next) = (level(m, &mut cache), level(m + 1, &mut cache));
                if !step(&w, &next) {
                    return Err(Error::InvariantViolation(format!(
                        "reduction equality holds at {n} but fails at {m}"
                    )));
                }
            }
            return Ok(n);
        }
    }
    Err(Error::NotStabilized(limit))
}

pub fn reduction_number_ring(curve: &CurveSpec, limit: u32) -> Result<u32> {
    reduction_number(|n| (*curve.sumset_level(n)).clone(), curve.degree(), limit)
}

pub fn reduction_number_extension(mac: &Macaulayfication, limit: u32) -> Result<u32> {
    reduction_number(|n| mac.rtilde_level(n), mac.curve.degree(), limit)
}

/// Which regularity formula produced the value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaBranch {
    /// `R~ = R`: `reg = r_Q(R~)`.
    CohenMacaulay,
    /// `reg = max(k + l, r_Q(R~))`, valid under the level hypothesis.
    KPlusL,
    /// `reg = max(a(R~/R) + 1, r_Q(R~))`, used when `l` is undefined or the
    /// hypothesis fails.
    AInvariant,
}

impl fmt::Display for FormulaBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormulaBranch::CohenMacaulay => "cohen_macaulay",
            FormulaBranch::KPlusL => "k_plus_l",
            FormulaBranch::AInvariant => "a_invariant",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Regularity {
    pub value: u32,
    pub branch: FormulaBranch,
    pub r_q_extension: u32,
}

/// Castelnuovo-Mumford regularity of `R` from `k`, `l` and `r_Q(R~)`.
/// `force_k_plus_l` demands the `k + l` form and errors when its hypothesis
/// is not met.
pub fn regularity(
    curve: &CurveSpec,
    mac: &Macaulayfication,
    k: u32,
    force_k_plus_l: bool,
) -> Result<Regularity> {
    let r_q_extension = reduction_number_extension(mac, mac.bound.max(curve.regularity_bound()))?;
    let hypothesis = match mac.l {
        Some(_) => check_level_hypothesis(curve, mac)?,
        None => false,
    };
    if force_k_plus_l && (mac.is_trivial() || !hypothesis || k == 0) {
        return Err(Error::HypothesisNotVerified);
    }
    let (value, branch) = match (mac.a_invariant, mac.l) {
        (None, _) => (r_q_extension, FormulaBranch::CohenMacaulay),
        (Some(_), Some(l)) if hypothesis && k >= 1 => {
            ((k + l).max(r_q_extension), FormulaBranch::KPlusL)
        }
        (Some(a), _) => ((a + 1).max(r_q_extension), FormulaBranch::AInvariant),
    };
    Ok(Regularity {
        value,
        branch,
        r_q_extension,
    })
}

/// Everything [`classify`] learns about a curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub curve: String,
    pub d: u32,
    #[serde(rename = "G")]
    pub g: Vec<u32>,
    pub k: u32,
    pub l: Option<u32>,
    /// `None` encodes `-inf` (Cohen-Macaulay).
    pub a_invariant: Option<u32>,
    /// `|T(n)|` for `n = 0..=a_invariant`; empty when Cohen-Macaulay.
    pub rao_hilbert: Vec<usize>,
    #[serde(rename = "r_Q_R")]
    pub r_q_ring: u32,
    #[serde(rename = "r_Q_Rtilde")]
    pub r_q_extension: u32,
    pub reg: u32,
    #[serde(rename = "is_CM")]
    pub is_cm: bool,
    pub new_generators: Vec<Monomial>,
    pub formula_branch: FormulaBranch,
    pub hypothesis_holds: Option<bool>,
    pub criterion_checked: Option<bool>,
}

impl InvariantReport {
    /// `reg - (k + 2)` for non-CM curves.
    pub fn question_residual(&self) -> Option<i64> {
        (self.k >= 1).then(|| self.reg as i64 - (self.k as i64 + 2))
    }

    /// Cross-checks that disagreed; an empty list means a clean report.
    pub fn mismatches(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.criterion_checked == Some(false) {
            out.push("numerical criterion disagrees with the Buchsbaum level".into());
        }
        out
    }
}

/// Full analysis with the default degree bound `N = d`.
pub fn classify(curve: &CurveSpec) -> Result<InvariantReport> {
    classify_with_bound(curve, curve.degree())
}

pub fn classify_with_bound(curve: &CurveSpec, bound: u32) -> Result<InvariantReport> {
    let mac = macaulayfication_sections(curve, bound)?;
    let k = buchsbaum_level(curve, &mac)?;
    let rao = rao_module(&mac);
    let limit = bound.max(curve.regularity_bound());
    let r_q_ring = reduction_number_ring(curve, limit)?;
    let reg = regularity(curve, &mac, k, false)?;

    let hypothesis_holds = if mac.l.is_some() || mac.is_trivial() {
        Some(check_level_hypothesis(curve, &mac)?)
    } else {
        None
    };
    let criterion_checked = match hypothesis_holds {
        Some(true) => {
            let at_k = check_strict_k_criterion(curve, &mac, k)?.holds;
            let below = k >= 1 && check_strict_k_criterion(curve, &mac, k - 1)?.holds;
            Some(at_k && !below)
        }
        _ => None,
    };

    let violation = |msg: String| Err(Error::InvariantViolation(msg));
    if !(reg.r_q_extension <= r_q_ring && r_q_ring <= reg.value) {
        return violation(format!(
            "r_Q(R~) = {} <= r_Q(R) = {} <= reg = {} fails",
            reg.r_q_extension, r_q_ring, reg.value
        ));
    }
    if reg.value > curve.regularity_bound() {
        return violation(format!(
            "reg = {} exceeds d - mid_count = {}",
            reg.value,
            curve.regularity_bound()
        ));
    }
    if let (Some(true), Some(l), Some(a)) = (hypothesis_holds, mac.l, mac.a_invariant) {
        if k >= 1 && a != k + l - 1 {
            return violation(format!("a(R~/R) = {a} but k + l - 1 = {}", k + l - 1));
        }
    }
    if curve.is_smooth() && curve.degree() >= 2 && reg.value != k + 1 {
        return violation(format!("smooth curve with reg = {} and k = {k}", reg.value));
    }

    let top = rao.a_invariant.map_or(0, |a| a as usize + 1);
    Ok(InvariantReport {
        curve: curve.to_text(),
        d: curve.degree(),
        g: curve.exponents().to_vec(),
        k,
        l: mac.l,
        a_invariant: mac.a_invariant,
        rao_hilbert: rao.dims[..top].to_vec(),
        r_q_ring,
        r_q_extension: reg.r_q_extension,
        reg: reg.value,
        is_cm: mac.is_trivial(),
        new_generators: mac.new_gens.clone(),
        formula_branch: reg.branch,
        hypothesis_holds,
        criterion_checked,
    })
}
