//! Sliding encoders `Φ : A^Z → H^Z` from a full shift over
//! `A = ∏ Z/p_j^{h_j+1}` and their window-scale certificates.

use alloc::vec::Vec;
use core::fmt;

use crate::arith::{factorize, valuation};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::ring::{combination_kernel, express, HowellForm};
use crate::shift::GroupShift;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EncoderError {
    /// Message symbol outside `Z/p^{h_j+1}`.
    SymbolRange { index: i64, coordinate: usize, value: u64, order: u64 },
    /// Message symbol with the wrong number of coordinates.
    Arity { index: i64, expected: usize, found: usize },
    /// Tap symbol outside the output alphabet.
    BadTap { tap: usize },
    /// Tap order is not a prime power.
    MixedOrder { tap: usize, order: u64 },
}

impl fmt::Display for EncoderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncoderError::SymbolRange { index, coordinate, value, order } => {
                write!(f, "message symbol at {index}: coordinate {coordinate} is {value}, outside Z{order}")
            }
            EncoderError::Arity { index, expected, found } => {
                write!(f, "message symbol at {index} has {found} coordinates, expected {expected}")
            }
            EncoderError::BadTap { tap } => write!(f, "tap {tap} has a symbol outside the alphabet"),
            EncoderError::MixedOrder { tap, order } => write!(f, "tap {tap} has order {order}, not a prime power"),
        }
    }
}

impl core::error::Error for EncoderError {}

/// One encoder tap `y_j` with source factor `Z/p^{h+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tap {
    pub prime: u64,
    pub height: u32,
    pub word: Word,
}

impl Tap {
    pub fn order(&self) -> u64 {
        self.prime.pow(self.height + 1)
    }
}

/// `Φ(λ) = Σ_{n,j} λ_{j,n} ρ^n(y_j)`, where `ρ^n` moves a word `n` steps right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoder {
    alphabet: FiniteAbelianGroup,
    source: FiniteAbelianGroup,
    taps: Vec<Tap>,
}

/// Outcome of the finite-block independence search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Injectivity {
    /// Least block `[0, N]` on which the socle translates are independent.
    pub block: Option<usize>,
    /// A vanishing combination `(tap, position, coefficient)` on the last block tried.
    pub witness: Vec<(usize, i64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surjectivity {
    pub horizon: usize,
    /// First window `[0, len-1]` where image and shift differ.
    pub failure: Option<(i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Noncatastrophic {
    pub horizon: usize,
    pub pad: usize,
    /// A finite member with no finite preimage.
    pub witness: Option<Word>,
    /// Message agreeing with the witness on the solver window only.
    pub partial_preimage: Option<Word>,
}

/// Exact checks that hold for every well-formed encoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Structure {
    pub homomorphism: bool,
    pub equivariance: bool,
    pub order_bound: bool,
}

impl Encoder {
    pub fn new(alphabet: FiniteAbelianGroup, taps: Vec<Tap>) -> Result<Self, EncoderError> {
        for (j, t) in taps.iter().enumerate() {
            let ok = t.word.symbols().iter().all(|s| {
                s.coords().len() == alphabet.rank()
                    && s.coords().iter().zip(alphabet.factors()).all(|(&x, f)| x < f.order())
            });
            if !ok {
                return Err(EncoderError::BadTap { tap: j });
            }
        }
        let orders: Vec<u64> = taps.iter().map(Tap::order).collect();
        let source = FiniteAbelianGroup::from_cyclic_orders(&orders).expect("prime power orders");
        Ok(Encoder { alphabet, source, taps })
    }

    /// Encoder whose taps are the given words, each split into its primary parts
    /// with source factor equal to the part's order.
    pub fn from_words(alphabet: FiniteAbelianGroup, words: &[Word]) -> Result<Self, EncoderError> {
        let mut taps = Vec::new();
        for (j, w) in words.iter().enumerate() {
            let ok = w.symbols().iter().all(|s| {
                s.coords().len() == alphabet.rank()
                    && s.coords().iter().zip(alphabet.factors()).all(|(&x, f)| x < f.order())
            });
            if !ok {
                return Err(EncoderError::BadTap { tap: j });
            }
            let order = w.order(&alphabet);
            if order == 1 {
                return Err(EncoderError::MixedOrder { tap: j, order });
            }
            for (p, e) in factorize(order) {
                let q = p.pow(e);
                // The idempotent of Z/order projecting onto the p-part.
                let rest = order / q;
                let idem = (0..order).find(|&k| k % q == 1 % q && k % rest == 0).expect("CRT idempotent");
                taps.push(Tap { prime: p, height: e - 1, word: w.scale(&alphabet, idem as i64) });
            }
        }
        Encoder::new(alphabet, taps)
    }

    pub fn alphabet(&self) -> &FiniteAbelianGroup {
        &self.alphabet
    }

    /// `A = ∏ Z/p_j^{h_j+1}`, one factor per tap in tap order.
    pub fn source(&self) -> &FiniteAbelianGroup {
        &self.source
    }

    pub fn taps(&self) -> &[Tap] {
        &self.taps
    }

    /// Longest tap support.
    pub fn memory(&self) -> usize {
        self.taps.iter().map(|t| t.word.support_len()).max().unwrap_or(0)
    }

    fn modulus(&self) -> u64 {
        self.alphabet.exponent().max(2)
    }

    /// Message from per-position coordinates, validated against `A`.
    pub fn message(&self, first: i64, symbols: &[Vec<u64>]) -> Result<Word, EncoderError> {
        let orders = self.source.declared_orders();
        let mut out = Vec::with_capacity(symbols.len());
        for (k, c) in symbols.iter().enumerate() {
            let index = first + k as i64;
            if c.len() != orders.len() {
                return Err(EncoderError::Arity { index, expected: orders.len(), found: c.len() });
            }
            for (coordinate, (&value, &order)) in c.iter().zip(orders).enumerate() {
                if value >= order {
                    return Err(EncoderError::SymbolRange { index, coordinate, value, order });
                }
            }
            out.push(GroupElement(c.clone()));
        }
        Ok(Word::new(first, out))
    }

    /// Unit impulse on coordinate `j` at position `at`.
    pub fn impulse(&self, j: usize, at: i64) -> Word {
        let mut c = alloc::vec![0; self.taps.len()];
        c[j] = 1;
        Word::impulse(GroupElement(c), at)
    }

    /// `Φ(message)`, an exact finite word.
    pub fn encode(&self, message: &Word) -> Word {
        let h = &self.alphabet;
        let mut out = Word::zero();
        let Some(first) = message.first() else {
            return out;
        };
        for (k, s) in message.symbols().iter().enumerate() {
            let n = first + k as i64;
            for (tap, &c) in self.taps.iter().zip(s.coords()) {
                if c != 0 {
                    out = out.add(h, &tap.word.scale(h, c as i64).shift(-n));
                }
            }
        }
        out
    }

    /// `Φ(message)|[a, b]`, using only the taps that meet the window.
    pub fn encode_window(&self, message: &Word, a: i64, b: i64) -> Word {
        let (lo, hi) = self.tap_extent();
        // ρ^n y_j meets [a, b] only if n ∈ [a - hi, b - lo].
        self.encode(&message.restrict(a - hi, b - lo)).restrict(a, b)
    }

    /// Union of tap supports.
    fn tap_extent(&self) -> (i64, i64) {
        let lo = self.taps.iter().filter_map(|t| t.word.first()).min().unwrap_or(0);
        let hi = self.taps.iter().filter_map(|t| t.word.last()).max().unwrap_or(0);
        (lo, hi)
    }

    /// Translates `ρ^n y_j` meeting `[a, b]`, as `(tap, n, vector on [a, b])`.
    fn translates(&self, words: &[Word], a: i64, b: i64) -> Vec<(usize, i64, Vec<u64>)> {
        let mut out = Vec::new();
        for (j, w) in words.iter().enumerate() {
            let (Some(f), Some(l)) = (w.first(), w.last()) else { continue };
            for n in (a - l)..=(b - f) {
                out.push((j, n, w.shift(-n).window_vector(&self.alphabet, a, b)));
            }
        }
        out
    }

    /// `Φ(A^Z)|[a, b]`.
    pub fn image_window(&self, a: i64, b: i64) -> HowellForm {
        let words: Vec<Word> = self.taps.iter().map(|t| t.word.clone()).collect();
        let rows: Vec<Vec<u64>> = self.translates(&words, a, b).into_iter().map(|(_, _, v)| v).collect();
        HowellForm::span(self.modulus(), self.alphabet.rank() * (b - a + 1) as usize, &rows).expect("modulus in range")
    }

    /// Finite message `λ` with `Φ(λ) = x` exactly, with message positions at
    /// most `pad` beyond those that can touch the support of `x`.
    pub fn preimage(&self, x: &Word, pad: usize) -> Option<Word> {
        let (Some(f), Some(l)) = (x.first(), x.last()) else {
            return Some(Word::zero());
        };
        let (lo, hi) = self.tap_extent();
        let pad = pad as i64;
        let (n0, n1) = (f - hi - pad, l - lo + pad);
        let (a, b) = (n0 + lo, n1 + hi);
        let words: Vec<Word> = self.taps.iter().map(|t| t.word.clone()).collect();
        let rows: Vec<(usize, i64, Vec<u64>)> =
            self.translates(&words, a, b).into_iter().filter(|(_, n, _)| (n0..=n1).contains(n)).collect();
        let vectors: Vec<&Vec<u64>> = rows.iter().map(|(_, _, v)| v).collect();
        let coeffs = express(self.modulus(), &vectors, &x.window_vector(&self.alphabet, a, b))?;
        Some(self.assemble(&rows, &coeffs))
    }

    fn assemble(&self, rows: &[(usize, i64, Vec<u64>)], coeffs: &[u64]) -> Word {
        let Some(n0) = rows.iter().map(|r| r.1).min() else {
            return Word::zero();
        };
        let n1 = rows.iter().map(|r| r.1).max().unwrap();
        let mut symbols = alloc::vec![alloc::vec![0u64; self.taps.len()]; (n1 - n0 + 1) as usize];
        for ((j, n, _), &c) in rows.iter().zip(coeffs) {
            let slot = &mut symbols[(n - n0) as usize][*j];
            *slot = (*slot + c) % self.taps[*j].order();
        }
        Word::new(n0, symbols.into_iter().map(GroupElement).collect())
    }

    /// Message supported in `[a, b]` whose image agrees with `x` on `[a, b]`.
    pub fn window_preimage(&self, x: &Word, a: i64, b: i64) -> Option<Word> {
        let words: Vec<Word> = self.taps.iter().map(|t| t.word.clone()).collect();
        let rows: Vec<(usize, i64, Vec<u64>)> =
            self.translates(&words, a, b).into_iter().filter(|(_, n, _)| (a..=b).contains(n)).collect();
        let vectors: Vec<&Vec<u64>> = rows.iter().map(|(_, _, v)| v).collect();
        let coeffs = express(self.modulus(), &vectors, &x.window_vector(&self.alphabet, a, b))?;
        Some(self.assemble(&rows, &coeffs))
    }

    /// `x_j = p^{h_j} y_j`, the socle word of each tap.
    pub fn socle_words(&self) -> Vec<Word> {
        self.taps.iter().map(|t| t.word.scale(&self.alphabet, (t.order() / t.prime) as i64)).collect()
    }

    /// Least `N ≤ cap` such that, for every prime, the nonzero restrictions to
    /// `[0, N]` of the translates of its socle words are independent over `F_p`.
    pub fn injectivity(&self, cap: usize) -> Injectivity {
        let socle = self.socle_words();
        let start = self.memory().saturating_sub(1);
        let mut witness = Vec::new();
        for n in start..=cap.max(start) {
            witness = self.block_dependence(&socle, n);
            if witness.is_empty() {
                return Injectivity { block: Some(n), witness };
            }
        }
        Injectivity { block: None, witness }
    }

    fn block_dependence(&self, socle: &[Word], n: usize) -> Vec<(usize, i64, u64)> {
        let m = self.modulus();
        let mut primes: Vec<u64> = self.taps.iter().map(|t| t.prime).collect();
        primes.sort_unstable();
        primes.dedup();
        for p in primes {
            let words: Vec<Word> =
                socle.iter().zip(&self.taps).map(|(w, t)| if t.prime == p { w.clone() } else { Word::zero() }).collect();
            for (j, w) in words.iter().enumerate() {
                if self.taps[j].prime == p && w.is_zero() {
                    return alloc::vec![(j, 0, 1)];
                }
            }
            // p-torsion residues are multiples of m / p; rescale into F_p.
            let unit = m / p;
            let rows: Vec<(usize, i64, Vec<u64>)> = self
                .translates(&words, 0, n as i64)
                .into_iter()
                .filter(|(_, _, v)| v.iter().any(|&x| x != 0))
                .map(|(j, k, v)| (j, k, v.iter().map(|&x| x / unit % p).collect()))
                .collect();
            let vectors: Vec<&Vec<u64>> = rows.iter().map(|r| &r.2).collect();
            let cols = self.alphabet.rank() * (n + 1);
            if let Some(l) = combination_kernel(p, cols, &vectors).into_iter().find(|l| l.iter().any(|&c| c % p != 0)) {
                return rows.iter().zip(&l).filter(|(_, &c)| c % p != 0).map(|((j, k, _), &c)| (*j, *k, c)).collect();
            }
        }
        Vec::new()
    }

    /// Compares `Φ(A^Z)|[0, len-1]` with `G|[0, len-1]` for `len ≤ horizon`.
    pub fn surjectivity(&self, g: &GroupShift, horizon: usize) -> Surjectivity {
        for len in 1..=horizon.max(1) as i64 {
            let target = g.window(0, len - 1).expect("nonempty window");
            if self.image_window(0, len - 1) != *target.form() {
                return Surjectivity { horizon, failure: Some((0, len - 1)) };
            }
        }
        Surjectivity { horizon, failure: None }
    }

    /// Every certified finite member of `G` supported in `[0, len-1]`,
    /// `len ≤ horizon`, has a finite preimage.
    pub fn noncatastrophic(&self, g: &GroupShift, horizon: usize, pad: usize, margin: usize) -> Noncatastrophic {
        for len in 1..=horizon.max(1) as i64 {
            for x in g.finite_members(0, len - 1, margin) {
                if self.preimage(&x, pad).is_none() {
                    let (f, l) = (x.first().unwrap(), x.last().unwrap());
                    let partial = self.window_preimage(&x, f - pad as i64, l + pad as i64);
                    return Noncatastrophic { horizon, pad, witness: Some(x), partial_preimage: partial };
                }
            }
        }
        Noncatastrophic { horizon, pad, witness: None, partial_preimage: None }
    }

    /// Homomorphism and shift equivariance on pairs of scaled impulses, and
    /// `order(Φ(e_j)) | p_j^{h_j+1}`.
    pub fn structure(&self) -> Structure {
        let h = &self.alphabet;
        let span = self.memory() as i64 + 1;
        let mut basis = Vec::new();
        for (j, t) in self.taps.iter().enumerate() {
            for at in 0..span {
                for c in [1, t.order() - 1] {
                    let m = self.impulse(j, at);
                    basis.push(m.map(|s| GroupElement(s.coords().iter().map(|&x| x * c).collect())));
                }
            }
        }
        let src = &self.source;
        let mut homomorphism = true;
        let mut equivariance = true;
        for a in &basis {
            let ea = self.encode(a);
            equivariance &= self.encode(&a.shift(1)) == ea.shift(1) && self.encode(&a.shift(-3)) == ea.shift(-3);
            for b in &basis {
                homomorphism &= self.encode(&a.add(src, b)) == ea.add(h, &self.encode(b));
            }
        }
        let order_bound = self.taps.iter().all(|t| t.order() % t.word.order(h) == 0);
        Structure { homomorphism, equivariance, order_bound }
    }

    /// Height of each tap's source exponent, `h_j = log_p(order) - 1`.
    pub fn heights(&self) -> Vec<u32> {
        self.taps.iter().map(|t| valuation(t.order(), t.prime).unwrap_or(1) - 1).collect()
    }
}
