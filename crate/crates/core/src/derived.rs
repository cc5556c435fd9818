//! Shifts derived from a group shift: primary parts, socles `G[p]`,
//! multiples `p^r G` and quotients `G/pG`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::control::{weak_controllability_check, Density, Derived};
use crate::group::{FiniteAbelianGroup, GroupElement, PrimaryComponent, PrimaryFactor};
use crate::horizon::Horizons;
use crate::ring::HowellForm;
use crate::shift::GroupShift;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivedError {
    /// `p` is not a prime dividing `exp(H)`.
    NotDividing(u64),
    /// `p^r` is not below the exponent of the `p`-part.
    Exponent { p: u64, r: u32 },
    /// Finite `p`-torsion members fall short of `G[p]` on this window.
    SocleNotDense { p: u64, window: (i64, i64) },
}

impl fmt::Display for DerivedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivedError::NotDividing(p) => write!(f, "{p} is not a prime dividing the exponent of the alphabet"),
            DerivedError::Exponent { p, r } => write!(f, "{p}^{r} is not below the exponent of the {p}-part"),
            DerivedError::SocleNotDense { p, window: (a, b) } => {
                write!(f, "finite {p}-torsion members do not fill G[{p}] on [{a}, {b}]")
            }
        }
    }
}

impl core::error::Error for DerivedError {}

/// Coordinate ranges of a window `[a, b]` in position-major vectors.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Frame {
    pub a: i64,
    pub b: i64,
    pub rank: usize,
}

impl Frame {
    pub fn new(a: i64, b: i64, rank: usize) -> Self {
        Frame { a, b, rank }
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.a, self.b)
    }

    pub fn range(&self, s: i64, t: i64) -> core::ops::Range<usize> {
        let lo = (s - self.a) as usize * self.rank;
        lo..lo + (t - s + 1).max(0) as usize * self.rank
    }

    /// Coordinates of `v` outside `[s, t]`.
    pub fn outside(&self, v: &[u64], s: i64, t: i64) -> Vec<u64> {
        let r = self.range(s, t);
        v[..r.start].iter().chain(&v[r.end..]).copied().collect()
    }
}

pub(crate) fn scaled(v: &[u64], k: u64, modulus: u64) -> Vec<u64> {
    v.iter().map(|&x| (x as u128 * k as u128 % modulus as u128) as u64).collect()
}

/// The `p`-part of `G` as a shift over the `p`-primary component of `H`.
pub fn primary_shift(g: &GroupShift, p: u64) -> Result<(PrimaryComponent, GroupShift), DerivedError> {
    let comp = g.alphabet().primary_component(p).map_err(|_| DerivedError::NotDividing(p))?;
    if comp.indices().is_empty() {
        return Err(DerivedError::NotDividing(p));
    }
    let shift = g.map_generators(comp.group.clone(), |s| comp.project(s));
    Ok((comp, shift))
}

/// `{ k·y|[0, len-1] : y certified member supported in [-pad, len-1+pad],
/// k·y = 0 outside [0, len-1] }`, optionally restricted to `q·k·y = 0`.
pub(crate) fn scaled_members(
    g: &GroupShift,
    k: u64,
    torsion: Option<u64>,
    len: usize,
    pad: usize,
    margin: usize,
) -> HowellForm {
    let n = g.modulus();
    let (len, pad, m) = (len as i64, pad as i64, margin as i64);
    let frame = Frame::new(-pad - m, len - 1 + pad + m, g.rank());
    let support = frame.range(-pad, len - 1 + pad);
    let core = frame.range(0, len - 1);
    let form = g.restricted_submodule(frame.bounds(), (0, len - 1), |v| {
        let mut out = frame.outside(v, -pad, len - 1 + pad);
        let kv = scaled(&v[support.clone()], k, n);
        let inner = (core.start - support.start)..(core.end - support.start);
        out.extend(kv[..inner.start].iter().chain(&kv[inner.end..]));
        if let Some(q) = torsion {
            out.extend(scaled(&kv[inner], q, n));
        }
        out
    });
    let rows: Vec<Vec<u64>> = form.rows().iter().map(|r| scaled(r, k, n)).collect();
    HowellForm::span(n, form.cols(), &rows).expect("modulus in range")
}

/// Finite words of `(p^r G)[p]` supported in `[0, len-1]`.
pub(crate) fn level_words(g: &GroupShift, p: u64, r: u32, len: usize, pad: usize, margin: usize) -> HowellForm {
    scaled_members(g, p.pow(r) % g.modulus(), Some(p), len, pad, margin)
}

/// Upper bound for the symbols at 0 of words of `(p^r G)[p]` vanishing on
/// the left of 0, computed on `[-margin, reach]`.
pub(crate) fn lead_bound(g: &GroupShift, p: u64, r: u32, reach: usize, margin: usize) -> HowellForm {
    let n = g.modulus();
    let k = p.pow(r) % n;
    let frame = Frame::new(-(margin as i64), reach as i64, g.rank());
    let left = frame.range(frame.a, -1);
    let form = g.restricted_submodule(frame.bounds(), (0, 0), |v| {
        let mut out = scaled(&v[left.clone()], k, n);
        out.extend(scaled(v, k * p % n, n));
        out
    });
    let rows: Vec<Vec<u64>> = form.rows().iter().map(|r| scaled(r, k, n)).collect();
    HowellForm::span(n, g.rank(), &rows).expect("modulus in range")
}

/// Greedy selection of level-`r` words by support length: a word starting
/// at 0 is kept when its symbol at 0 is independent of the symbols already
/// kept. Stops once `span` covers `bound` or the length cap is reached.
#[allow(clippy::too_many_arguments)]
pub(crate) fn select_level(
    g: &GroupShift,
    p: u64,
    r: u32,
    span: &mut HowellForm,
    bound: &HowellForm,
    max_len: usize,
    pad: usize,
    margin: usize,
) -> Vec<Word> {
    let rank = g.rank();
    let mut chosen = Vec::new();
    for len in 1..=max_len.max(1) {
        if span.contains_module(bound) {
            break;
        }
        let words = level_words(g, p, r, len, pad, margin);
        for row in words.rows() {
            let lead = &row[..rank];
            if lead.iter().all(|&x| x == 0) || span.contains(lead) {
                continue;
            }
            *span = span.join(&HowellForm::span(g.modulus(), rank, &[lead]).expect("modulus in range"));
            chosen.push(Word::from_window_vector(g.alphabet(), 0, row));
        }
    }
    chosen
}

/// Presentation of `G[p]` by finite `p`-torsion words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocleShift {
    pub prime: u64,
    pub shift: GroupShift,
    pub density: Density,
}

/// `G[p]`, generated by a minimal-support family of finite `p`-torsion words.
pub fn socle_shift(g: &GroupShift, p: u64, hz: &Horizons) -> Result<SocleShift, DerivedError> {
    let (comp, gp) = primary_shift(g, p)?;
    let pad = hz.margin;
    let bound = lead_bound(&gp, p, 0, hz.support_cap + hz.margin, hz.margin);
    let mut span = HowellForm::zero(gp.modulus(), gp.rank());
    let words = select_level(&gp, p, 0, &mut span, &bound, hz.support_cap, pad, hz.margin);
    let gens = words.iter().map(|w| w.map(|s| comp.embed(s))).collect();
    let shift = GroupShift::new(g.alphabet().clone(), gens).expect("symbols embed into the alphabet");
    let density = weak_controllability_check(g, Derived::Socle(p), hz.verify, hz.support_cap.max(hz.margin), hz.margin);
    if let Some(window) = density.failure {
        return Err(DerivedError::SocleNotDense { p, window });
    }
    Ok(SocleShift { prime: p, shift, density })
}

/// `p^r G`, presented by the scaled generators.
pub fn multiple_shift(g: &GroupShift, p: u64, r: u32) -> Result<GroupShift, DerivedError> {
    let (comp, _) = primary_shift(g, p)?;
    if p.pow(r) >= comp.group.exponent().max(1) && r > 0 {
        return Err(DerivedError::Exponent { p, r });
    }
    let h = g.alphabet().clone();
    let k = p.pow(r) as i64;
    Ok(g.map_generators(h.clone(), |s| h.scale(k, s)))
}

/// Comparison of `(p^r G)_f` with `p^r G_f` on windows `[0, len-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMultiples {
    pub prime: u64,
    pub r: u32,
    pub lengths: usize,
    pub holds: bool,
    pub failure: Option<usize>,
}

/// Checks that the certified finite members of `p^r G` supported in
/// `[0, len-1]` are exactly the `p^r`-multiples of finite members of `G`,
/// for every `len ≤ horizon`; preimages may reach `pad` past the window.
pub fn finite_multiples_check(g: &GroupShift, p: u64, r: u32, horizon: usize, pad: usize, margin: usize) -> Result<FiniteMultiples, DerivedError> {
    let (_, gp) = primary_shift(g, p)?;
    let multiple = multiple_shift(&gp, p, r)?;
    let k = p.pow(r) % gp.modulus();
    for len in 1..=horizon.max(1) {
        let frame = Frame::new(-(margin as i64), (len + margin) as i64 - 1, gp.rank());
        let direct = multiple.restricted_submodule(frame.bounds(), (0, len as i64 - 1), |v| frame.outside(v, 0, len as i64 - 1));
        let lifted = scaled_members(&gp, k, None, len, pad, margin);
        if direct != lifted {
            return Ok(FiniteMultiples { prime: p, r, lengths: len, holds: false, failure: Some(len) });
        }
    }
    Ok(FiniteMultiples { prime: p, r, lengths: horizon.max(1), holds: true, failure: None })
}

/// Reduction `H → H/pH` on the `p`-primary coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMap {
    pub prime: u64,
    pub source: FiniteAbelianGroup,
    pub target: FiniteAbelianGroup,
    indices: Vec<usize>,
}

impl QuotientMap {
    pub fn new(source: &FiniteAbelianGroup, p: u64) -> Result<Self, DerivedError> {
        let indices: Vec<usize> = (0..source.rank()).filter(|&i| source.factors()[i].prime == p).collect();
        if indices.is_empty() {
            return Err(DerivedError::NotDividing(p));
        }
        let target = FiniteAbelianGroup::from_factors(vec![PrimaryFactor { prime: p, exponent: 1 }; indices.len()])
            .expect("prime factors");
        Ok(QuotientMap { prime: p, source: source.clone(), target, indices })
    }

    pub fn apply(&self, s: &GroupElement) -> GroupElement {
        GroupElement(self.indices.iter().map(|&i| s.0[i] % self.prime).collect())
    }

    pub fn apply_word(&self, w: &Word) -> Word {
        w.map(|s| self.apply(s))
    }
}

/// `G/pG` as a shift over `H/pH`, with the quotient map.
pub fn quotient_shift(g: &GroupShift, p: u64) -> Result<(GroupShift, QuotientMap), DerivedError> {
    let q = QuotientMap::new(g.alphabet(), p)?;
    let shift = g.map_generators(q.target.clone(), |s| q.apply(s));
    Ok((shift, q))
}
