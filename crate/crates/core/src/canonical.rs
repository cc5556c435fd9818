//! Canonical generating sets `{x_j = p^{h_j} y_j}` of a `p`-part and the
//! decomposition of finite members over the generators of `pG`.
//!
//! Levels are processed from the top height down. At level `r` the finite
//! words of `(p^r G)[p]` are scanned by support length and a word starting
//! at 0 is kept when its symbol at 0 is independent of the symbols kept so
//! far; every kept word therefore has height exactly `r`.

use alloc::vec::Vec;
use core::fmt;

use crate::control::least_index;
use crate::derived::{lead_bound, primary_shift, scaled, select_level, DerivedError, Frame};
use crate::encoder::{Encoder, Tap};
use crate::horizon::Horizons;
use crate::ring::{express, kernel_submodule, HowellForm};
use crate::shift::GroupShift;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CanonicalError {
    Derived(DerivedError),
    /// No order-controllability index up to the cap.
    NotOrderControllable { cap: usize },
    /// The symbols at 0 of level-`level` words could not be completed with
    /// finite words of length at most `cap`.
    Incomplete { level: u32, cap: usize },
    /// No finite `y` with `p^h y = x` inside the padded window.
    Lift { index: usize, height: u32 },
}

impl fmt::Display for CanonicalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalError::Derived(e) => e.fmt(f),
            CanonicalError::NotOrderControllable { cap } => {
                write!(f, "no order-controllability index up to {cap}")
            }
            CanonicalError::Incomplete { level, cap } => {
                write!(f, "level {level} symbols at 0 not covered by finite words of length <= {cap}")
            }
            CanonicalError::Lift { index, height } => write!(f, "generator {index} has no finite preimage under p^{height}"),
        }
    }
}

impl core::error::Error for CanonicalError {}

impl From<DerivedError> for CanonicalError {
    fn from(e: DerivedError) -> Self {
        CanonicalError::Derived(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalEntry {
    /// `x_j`, a finite `p`-torsion word starting at 0.
    pub socle: Word,
    pub height: u32,
    /// `y_j` with `p^{h_j} y_j = x_j`.
    pub tap: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalGeneratorSet {
    pub prime: u64,
    pub entries: Vec<CanonicalEntry>,
    /// Order-controllability index of the `p`-part.
    pub order_index: usize,
    /// How far preimages may reach past the support they explain.
    pub pad: usize,
    pub margin: usize,
}

impl CanonicalGeneratorSet {
    pub fn heights(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.height).collect()
    }

    pub fn heights_sorted(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].height >= w[1].height)
    }

    pub fn taps(&self) -> Vec<Tap> {
        self.entries.iter().map(|e| Tap { prime: self.prime, height: e.height, word: e.tap.clone() }).collect()
    }

    /// The encoder whose taps are the `y_j`.
    pub fn encoder(&self, g: &GroupShift) -> Encoder {
        Encoder::new(g.alphabet().clone(), self.taps()).expect("taps are members of the alphabet")
    }
}

/// Finite `y` with `p^h y = x`, certified on a `margin`-padded window and
/// supported at most `pad` beyond the support of `x`. The shortest reach is
/// tried first and the solution is reduced modulo `p^h`-torsion members.
pub fn lift_height(g: &GroupShift, x: &Word, p: u64, h: u32, pad: usize, margin: usize) -> Option<Word> {
    let (Some(f), Some(l)) = (x.first(), x.last()) else {
        return Some(Word::zero());
    };
    let n = g.modulus();
    let k = p.pow(h) % n;
    let m = margin as i64;
    for q in 0..=pad as i64 {
        let frame = Frame::new(f - q - m, l + q + m, g.rank());
        let inner = frame.range(f - q, l + q);
        let constraint = |v: &[u64]| {
            let mut out = frame.outside(v, f - q, l + q);
            out.extend(scaled(&v[inner.clone()], k, n));
            out
        };
        let mut target = alloc::vec![0; frame.outside(&alloc::vec![0; g.cols(frame.a, frame.b)], f - q, l + q).len()];
        target.extend(x.window_vector(g.alphabet(), f - q, l + q));
        let Some(v) = g.solve_member(frame.bounds(), constraint, &target) else { continue };
        let rows = g.contributions(frame.a, frame.b);
        let kernel = kernel_submodule(n, v.len(), &rows, |w| {
            let mut out = frame.outside(w, f - q, l + q);
            out.extend(scaled(&w[inner.clone()], k, n));
            out
        });
        let reduced = HowellForm::span(n, v.len(), &kernel).expect("modulus in range").reduce(&v);
        return Some(Word::from_window_vector(g.alphabet(), frame.a, &reduced));
    }
    None
}

/// Canonical generating set of the `p`-part of `G`.
pub fn canonical_generators(g: &GroupShift, p: u64, hz: &Horizons) -> Result<CanonicalGeneratorSet, CanonicalError> {
    let (comp, gp) = primary_shift(g, p)?;
    let order_index =
        least_index(&gp, hz.past, hz.index_cap, true).ok_or(CanonicalError::NotOrderControllable { cap: hz.index_cap })?;
    let pad = order_index + gp.max_span();
    let margin = hz.margin;
    let mut span = HowellForm::zero(gp.modulus(), gp.rank());
    let mut entries = Vec::new();
    for r in (0..gp.p_exponent(p)).rev() {
        let bound = lead_bound(&gp, p, r, hz.support_cap + margin, margin);
        let words = select_level(&gp, p, r, &mut span, &bound, hz.support_cap, pad, margin);
        if !span.contains_module(&bound) {
            return Err(CanonicalError::Incomplete { level: r, cap: hz.support_cap });
        }
        for x in words {
            let index = entries.len();
            let y = lift_height(&gp, &x, p, r, pad, margin).ok_or(CanonicalError::Lift { index, height: r })?;
            entries.push(CanonicalEntry { socle: x, height: r, tap: y });
        }
    }
    let embed = |w: &Word| w.map(|s| comp.embed(s));
    let entries = entries
        .iter()
        .map(|e| CanonicalEntry { socle: embed(&e.socle), height: e.height, tap: embed(&e.tap) })
        .collect();
    Ok(CanonicalGeneratorSet { prime: p, entries, order_index, pad, margin })
}

/// `u = v + w` with `p·v = 0` and `w = Σ λ_{i,n} ρ^n(y_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseDecomposition {
    pub v: Word,
    pub w: Word,
    /// `(i, n, λ_{i,n})` for the nonzero coefficients.
    pub coefficients: Vec<(usize, i64, u64)>,
}

/// Generators `t_i` of `pG` together with lifts `y_i ∈ G_f`, `p·y_i = t_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultipleBasis {
    pub prime: u64,
    pub generators: Vec<Word>,
    pub lifts: Vec<Word>,
    pub pad: usize,
}

impl MultipleBasis {
    /// Builds the canonical generators of `pG` and lifts them to `G`.
    pub fn new(g: &GroupShift, p: u64, hz: &Horizons) -> Result<Self, CanonicalError> {
        let pg = crate::derived::multiple_shift(g, p, 1)?;
        let set = canonical_generators(&pg, p, hz)?;
        let mut generators = Vec::new();
        let mut lifts = Vec::new();
        for (index, e) in set.entries.iter().enumerate() {
            let y = lift_height(g, &e.tap, p, 1, set.pad, set.margin).ok_or(CanonicalError::Lift { index, height: 1 })?;
            generators.push(e.tap.clone());
            lifts.push(y);
        }
        Ok(MultipleBasis { prime: p, generators, lifts, pad: set.pad })
    }
}

/// Splits a finite member `u` as a `p`-torsion word plus a finite
/// combination of translates of the lifts; `None` when `p·u` has no finite
/// expression over the generators of `pG` within the pad.
pub fn base_decompose(g: &GroupShift, u: &Word, basis: &MultipleBasis) -> Option<BaseDecomposition> {
    let h = g.alphabet();
    let n = g.modulus();
    let pu = u.scale(h, basis.prime as i64);
    let (Some(f), Some(l)) = (pu.first(), pu.last()) else {
        return Some(BaseDecomposition { v: u.clone(), w: Word::zero(), coefficients: Vec::new() });
    };
    let lo = basis.generators.iter().filter_map(Word::first).min().unwrap_or(0);
    let hi = basis.generators.iter().filter_map(Word::last).max().unwrap_or(0);
    let pad = basis.pad as i64;
    let (n0, n1) = (f - hi - pad, l - lo + pad);
    let (a, b) = (n0 + lo, n1 + hi);
    let mut index = Vec::new();
    let mut rows = Vec::new();
    for (i, t) in basis.generators.iter().enumerate() {
        for k in n0..=n1 {
            index.push((i, k));
            rows.push(t.shift(-k).window_vector(h, a, b));
        }
    }
    let coeffs = express(n, &rows, &pu.window_vector(h, a, b))?;
    let mut w = Word::zero();
    let mut coefficients = Vec::new();
    for (&(i, k), &c) in index.iter().zip(&coeffs) {
        if c % n != 0 {
            w = w.add(h, &basis.lifts[i].scale(h, c as i64).shift(-k));
            coefficients.push((i, k, c));
        }
    }
    Some(BaseDecomposition { v: u.sub(h, &w), w, coefficients })
}
