//! Group shifts presented by finitely supported generator words.
//!
//! A [`GroupShift`] is the closed shift-invariant subgroup of `H^Z` generated
//! by all shifts of its generator words. Every question about it is answered
//! on finite windows: the projection of `G` onto `[a, b]` is the module
//! spanned by the restrictions of the shifted generators that meet the
//! window, which is exact because the projection of the closure equals the
//! projection of the span.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::ring::{combine, express, kernel_submodule, HowellForm};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShiftError {
    /// A generator symbol does not belong to the alphabet.
    BadSymbol { generator: usize },
    EmptyInterval { a: i64, b: i64 },
    ZeroCap,
    /// Splice inputs disagree on the splice block.
    Disagreement { at: i64 },
    /// No splice exists inside the solver window.
    NoSplice { k: i64, memory: usize },
}

impl fmt::Display for ShiftError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftError::BadSymbol { generator } => write!(f, "generator {generator} has a symbol outside the alphabet"),
            ShiftError::EmptyInterval { a, b } => write!(f, "empty interval [{a}, {b}]"),
            ShiftError::ZeroCap => f.write_str("search cap must be at least 1"),
            ShiftError::Disagreement { at } => write!(f, "words disagree at index {at} inside the splice block"),
            ShiftError::NoSplice { k, memory } => {
                write!(f, "no splice at k = {k} with block length {memory} inside the solver window")
            }
        }
    }
}

impl core::error::Error for ShiftError {}

/// Closed shift-invariant subgroup of `H^Z` generated by finite words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupShift {
    alphabet: FiniteAbelianGroup,
    generators: Vec<Word>,
    declared_memory: Option<usize>,
}

impl GroupShift {
    /// Zero generators are dropped.
    pub fn new(alphabet: FiniteAbelianGroup, generators: Vec<Word>) -> Result<Self, ShiftError> {
        for (i, g) in generators.iter().enumerate() {
            let ok = g.symbols().iter().all(|s| {
                s.coords().len() == alphabet.rank()
                    && s.coords().iter().zip(alphabet.factors()).all(|(&x, f)| x < f.order())
            });
            if !ok {
                return Err(ShiftError::BadSymbol { generator: i });
            }
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(GroupShift { alphabet, generators, declared_memory: None })
    }

    /// The full shift `H^Z`, generated by the unit impulses of each factor.
    pub fn full(alphabet: FiniteAbelianGroup) -> Self {
        let generators = (0..alphabet.rank())
            .map(|i| {
                let mut c = vec![0; alphabet.rank()];
                c[i] = 1;
                Word::impulse(GroupElement(c), 0)
            })
            .collect();
        GroupShift { alphabet, generators, declared_memory: None }
    }

    pub fn with_memory(mut self, memory: usize) -> Self {
        self.declared_memory = Some(memory);
        self
    }

    pub fn alphabet(&self) -> &FiniteAbelianGroup {
        &self.alphabet
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn declared_memory(&self) -> Option<usize> {
        self.declared_memory
    }

    /// Longest generator support (at least 1).
    pub fn max_span(&self) -> usize {
        self.generators.iter().map(Word::support_len).max().unwrap_or(1).max(1)
    }

    /// Sum of generator support lengths (at least 1).
    pub fn total_span(&self) -> usize {
        self.generators.iter().map(Word::support_len).sum::<usize>().max(1)
    }

    /// Modulus of the residue embedding, `max(exp(H), 2)`.
    pub fn modulus(&self) -> u64 {
        self.alphabet.exponent().max(2)
    }

    /// Coordinates per position in window vectors.
    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }

    /// Least `e` with `p^e · G = 0`.
    pub fn p_exponent(&self, p: u64) -> u32 {
        let mut e = 0;
        let mut scale = 1i64;
        while self.generators.iter().any(|g| !g.scale(&self.alphabet, scale).is_zero()) {
            e += 1;
            scale *= p as i64;
        }
        e
    }

    /// Shift with every generator mapped symbolwise into `alphabet`.
    pub fn map_generators(&self, alphabet: FiniteAbelianGroup, f: impl Fn(&GroupElement) -> GroupElement) -> GroupShift {
        let generators = self.generators.iter().map(|g| g.map(&f)).filter(|g| !g.is_zero()).collect();
        GroupShift { alphabet, generators, declared_memory: None }
    }

    /// Restrictions to `[a, b]` of every shifted generator meeting the window.
    pub fn contributions(&self, a: i64, b: i64) -> Vec<Vec<u64>> {
        let mut rows = Vec::new();
        for g in &self.generators {
            let (f, l) = (g.first().unwrap(), g.last().unwrap());
            // shift(g, n) is supported on [f - n, l - n].
            for n in (f - b)..=(l - a) {
                rows.push(g.shift(n).window_vector(&self.alphabet, a, b));
            }
        }
        rows
    }

    /// Window length in coordinates.
    pub fn cols(&self, a: i64, b: i64) -> usize {
        self.rank() * (b - a + 1) as usize
    }

    /// The projection `G|[a, b]`.
    pub fn window(&self, a: i64, b: i64) -> Result<WindowModule, ShiftError> {
        if a > b {
            return Err(ShiftError::EmptyInterval { a, b });
        }
        let generators = self.contributions(a, b);
        let form = HowellForm::span(self.modulus(), self.cols(a, b), &generators).expect("modulus in range");
        Ok(WindowModule { start: a, end: b, alphabet: self.alphabet.clone(), generators, form })
    }

    /// Window-scale membership of `w` on `[i_f(w) - margin, i_l(w) + margin]`.
    pub fn member(&self, w: &Word, margin: usize) -> Membership {
        let Some((f, l)) = w.first().zip(w.last()) else {
            return Membership { inside: true, window: (0, 0) };
        };
        let (a, b) = (f - margin as i64, l + margin as i64);
        let module = self.window(a, b).expect("nonempty window");
        Membership { inside: module.contains(w), window: (a, b) }
    }

    /// Generators of the window-certified finite members supported in `[s, t]`:
    /// words `v` with `v|[s-margin, t+margin] ∈ G|[s-margin, t+margin]` and `v = 0`
    /// outside `[s, t]`. `extra` adds linear constraints on the inside block.
    pub(crate) fn finite_members_with(
        &self,
        s: i64,
        t: i64,
        margin: usize,
        extra: impl Fn(&[u64]) -> Vec<u64>,
    ) -> Vec<Word> {
        let m = margin as i64;
        let (a, b) = (s - m, t + m);
        let r = self.rank();
        let rows = self.contributions(a, b);
        let lo = (m as usize) * r;
        let hi = lo + (t - s + 1) as usize * r;
        let cols = self.cols(a, b);
        let sub = kernel_submodule(self.modulus(), cols, &rows, |v| {
            let mut out: Vec<u64> = v[..lo].iter().chain(&v[hi..]).copied().collect();
            out.extend(extra(&v[lo..hi]));
            out
        });
        let inner: Vec<Vec<u64>> = sub.iter().map(|v| v[lo..hi].to_vec()).collect();
        let form = HowellForm::span(self.modulus(), hi - lo, &inner).expect("modulus in range");
        form.rows().iter().map(|v| Word::from_window_vector(&self.alphabet, s, v)).collect()
    }

    /// `{ v|[s, t] : v ∈ G|[a, b], c(v) = 0 }` for a linear constraint `c`
    /// on full window vectors; `[s, t]` must lie inside `[a, b]`.
    pub fn restricted_submodule(
        &self,
        (a, b): (i64, i64),
        (s, t): (i64, i64),
        constraint: impl Fn(&[u64]) -> Vec<u64>,
    ) -> HowellForm {
        let r = self.rank();
        let rows = self.contributions(a, b);
        let cols = self.cols(a, b);
        let sub = kernel_submodule(self.modulus(), cols, &rows, constraint);
        let lo = (s - a) as usize * r;
        let hi = lo + (t - s + 1) as usize * r;
        let inner: Vec<Vec<u64>> = sub.iter().map(|v| v[lo..hi].to_vec()).collect();
        HowellForm::span(self.modulus(), hi - lo, &inner).expect("modulus in range")
    }

    /// Some `v ∈ G|[a, b]` with `c(v) = target` for a linear map `c`.
    pub fn solve_member(&self, (a, b): (i64, i64), constraint: impl Fn(&[u64]) -> Vec<u64>, target: &[u64]) -> Option<Vec<u64>> {
        let rows = self.contributions(a, b);
        let images: Vec<Vec<u64>> = rows.iter().map(|r| constraint(r)).collect();
        let coeffs = express(self.modulus(), &images, target)?;
        Some(combine(self.modulus(), self.cols(a, b), &rows, &coeffs))
    }

    /// Generators of the certified finite members supported in `[s, t]`.
    pub fn finite_members(&self, s: i64, t: i64, margin: usize) -> Vec<Word> {
        self.finite_members_with(s, t, margin, |_| Vec::new())
    }

    /// Certified finite members in `[s, t]` killed by `k`.
    pub fn finite_torsion_members(&self, s: i64, t: i64, margin: usize, k: u64) -> Vec<Word> {
        let n = self.modulus();
        self.finite_members_with(s, t, margin, |v| v.iter().map(|&x| x * k % n).collect())
    }

    /// Least `N ≤ cap` for which the window-scale splice property holds on
    /// every window `[-S, N + S]` with `1 ≤ S ≤ horizon`.
    pub fn finite_type_memory(&self, cap: usize, horizon: usize) -> Result<Option<usize>, ShiftError> {
        if cap == 0 {
            return Err(ShiftError::ZeroCap);
        }
        Ok((1..=cap).find(|&n| (1..=horizon.max(1)).all(|s| self.splice_holds(n, s))))
    }

    /// Every `d ∈ G|[-s, n+s]` vanishing on `[0, n]` has its past `d|[-s, -1]`
    /// (extended by zero) in the same window module.
    fn splice_holds(&self, n: usize, s: usize) -> bool {
        let (a, b) = (-(s as i64), (n + s) as i64);
        let r = self.rank();
        let rows = self.contributions(a, b);
        let cols = self.cols(a, b);
        let form = HowellForm::span(self.modulus(), cols, &rows).expect("modulus in range");
        let (lo, hi) = (s * r, (s + n + 1) * r);
        let vanishing = kernel_submodule(self.modulus(), cols, &rows, |v| v[lo..hi].to_vec());
        vanishing.iter().all(|d| {
            let mut past = d.clone();
            past[lo..].iter_mut().for_each(|x| *x = 0);
            form.contains(&past)
        })
    }

    /// Splices `x1` (left of `k + memory`) onto `x2` (right of `k`).
    pub fn splice(&self, x1: &Word, x2: &Word, k: i64, memory: usize) -> Result<Word, ShiftError> {
        let h = &self.alphabet;
        for i in k..=k + memory as i64 {
            if x1.at(h, i) != x2.at(h, i) {
                return Err(ShiftError::Disagreement { at: i });
            }
        }
        let diff = x1.sub(h, x2);
        let Some(first) = diff.first() else { return Ok(x2.clone()) };
        let past = diff.restrict(first, k - 1);
        let span = (self.max_span() + memory) as i64;
        let (a, b) = (first.min(k) - span, k + memory as i64 + span);
        if !self.window(a, b)?.contains(&past) {
            return Err(ShiftError::NoSplice { k, memory });
        }
        Ok(x2.add(h, &past))
    }
}

/// Window-scale membership certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Membership {
    /// True iff the restriction lies in the window module.
    pub inside: bool,
    pub window: (i64, i64),
}

/// The projection `G|[a, b]` as a module over `Z/exp(H)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowModule {
    start: i64,
    end: i64,
    alphabet: FiniteAbelianGroup,
    generators: Vec<Vec<u64>>,
    form: HowellForm,
}

impl WindowModule {
    pub fn interval(&self) -> (i64, i64) {
        (self.start, self.end)
    }

    pub fn len(&self) -> usize {
        (self.end - self.start + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Restrictions of the contributing shifted generators.
    pub fn generators(&self) -> &[Vec<u64>] {
        &self.generators
    }

    pub fn form(&self) -> &HowellForm {
        &self.form
    }

    /// Number of elements.
    pub fn order(&self) -> u128 {
        self.form.order()
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        self.form.invariant_factors()
    }

    /// Whether the restriction of `w` to the window belongs to the module.
    pub fn contains(&self, w: &Word) -> bool {
        self.form.contains(&w.window_vector(&self.alphabet, self.start, self.end))
    }

    /// The Howell rows as words.
    pub fn basis_words(&self) -> Vec<Word> {
        self.form.rows().iter().map(|v| Word::from_window_vector(&self.alphabet, self.start, v)).collect()
    }

    /// Same module up to translation of the window.
    pub fn same_as_translate(&self, other: &WindowModule) -> bool {
        self.len() == other.len() && self.form == other.form
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_window;

    fn word(h: &FiniteAbelianGroup, first: i64, xs: &[&[u64]]) -> Word {
        Word::new(first, xs.iter().map(|c| h.element(c).unwrap()).collect())
    }

    fn z(n: u64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(n).unwrap()
    }

    fn pair_code() -> GroupShift {
        let h = z(2);
        GroupShift::new(h.clone(), vec![word(&h, 0, &[&[1], &[1]])]).unwrap()
    }

    #[test]
    fn full_shift_window_is_everything() {
        let g = GroupShift::full(FiniteAbelianGroup::from_cyclic_orders(&[4, 3]).unwrap());
        assert_eq!(g.window(0, 0).unwrap().order(), 12);
    }

    #[test]
    fn window_of_pair_code() {
        let g = pair_code();
        let w = g.window(5, 6).unwrap();
        assert_eq!(w.generators().len(), 3);
        let brute = enumerate_window(&g, 5, 6, 1 << 20).unwrap();
        assert_eq!(w.order(), brute.len() as u128);
        assert!(w.order() <= 4);
    }

    #[test]
    fn empty_presentation() {
        let g = GroupShift::new(z(3), vec![]).unwrap();
        assert!(g.window(0, 3).unwrap().form().is_zero());
        assert!(matches!(g.window(2, 1), Err(ShiftError::EmptyInterval { .. })));
    }

    #[test]
    fn membership() {
        let g = pair_code();
        assert!(g.member(&Word::zero(), 3).inside);
        assert!(g.member(&g.generators()[0], 0).inside);
        // The closure of the even-weight words is the full shift, so an
        // impulse is a member on every window.
        let h = z(2);
        let delta = word(&h, 0, &[&[1]]);
        for m in 0..4 {
            assert!(g.member(&delta, m).inside);
        }
        // A genuine constraint: symbols confined to the diagonal of Z2 x Z2.
        let h2 = FiniteAbelianGroup::from_cyclic_orders(&[2, 2]).unwrap();
        let diag = GroupShift::new(h2.clone(), vec![word(&h2, 0, &[&[1, 1]])]).unwrap();
        assert!(!diag.member(&word(&h2, 0, &[&[1, 0]]), 2).inside);
    }

    #[test]
    fn window_equivariance() {
        let h = z(4);
        let g = GroupShift::new(h.clone(), vec![word(&h, 0, &[&[2], &[1]])]).unwrap();
        for a in -3..3 {
            assert!(g.window(a, a + 2).unwrap().same_as_translate(&g.window(a + 1, a + 3).unwrap()));
        }
    }

    #[test]
    fn finite_type_memory_examples() {
        let full = GroupShift::full(z(3));
        assert_eq!(full.finite_type_memory(4, 4).unwrap(), Some(1));
        assert_eq!(pair_code().finite_type_memory(4, 6).unwrap(), Some(1));
        assert_eq!(full.finite_type_memory(0, 4), Err(ShiftError::ZeroCap));
    }

    #[test]
    fn splice_examples() {
        let h2 = FiniteAbelianGroup::from_cyclic_orders(&[2, 2]).unwrap();
        // Rate-1/2 code with taps (1+D, 1): y = [(1,1), (1,0)].
        let g = GroupShift::new(h2.clone(), vec![word(&h2, 0, &[&[1, 1], &[1, 0]])]).unwrap();
        let y = g.generators()[0].clone();
        assert_eq!(g.splice(&y, &y, 0, 1).unwrap(), y);
        // x1 zero on [5, 6]: past of x1 then zero.
        let x1 = y.add(&h2, &y.shift(-8));
        let w = g.splice(&x1, &Word::zero(), 4, 1).unwrap();
        assert_eq!(w, y);
        assert!(matches!(g.splice(&y, &Word::zero(), 0, 1), Err(ShiftError::Disagreement { at: 0 })));
    }

    #[test]
    fn finite_members_of_pair_code() {
        // Over Z2 the closure is the full shift; every finite word is a member.
        let g = pair_code();
        let f = g.finite_members(0, 0, 3);
        assert_eq!(f, vec![word(&z(2), 0, &[&[1]])]);
    }
}
