//! Finitely supported bi-infinite words over a finite abelian group.

use alloc::vec;
use alloc::vec::Vec;

use crate::group::{FiniteAbelianGroup, GroupElement};

/// An element of `H^(Z)`: symbols on `[first, first + len)`, zero elsewhere.
///
/// Stored trimmed, so the first and last stored symbols are nonzero. The
/// zero word has no symbols and `first = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    first: i64,
    symbols: Vec<GroupElement>,
}

impl Word {
    pub fn new(first: i64, mut symbols: Vec<GroupElement>) -> Word {
        while symbols.last().is_some_and(GroupElement::is_zero) {
            symbols.pop();
        }
        let lead = symbols.iter().take_while(|s| s.is_zero()).count();
        if lead == symbols.len() {
            return Word::zero();
        }
        symbols.drain(..lead);
        Word { first: first + lead as i64, symbols }
    }

    pub fn zero() -> Word {
        Word { first: 0, symbols: Vec::new() }
    }

    pub fn impulse(symbol: GroupElement, at: i64) -> Word {
        Word::new(at, vec![symbol])
    }

    pub fn is_zero(&self) -> bool {
        self.symbols.is_empty()
    }

    /// `i_f`, the first index of the support.
    pub fn first(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.first)
    }

    /// `i_l`, the last index of the support.
    pub fn last(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.first + self.symbols.len() as i64 - 1)
    }

    /// `i_l - i_f + 1`, or 0 for the zero word.
    pub fn support_len(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[GroupElement] {
        &self.symbols
    }

    pub fn get(&self, i: i64) -> Option<&GroupElement> {
        let k = i.checked_sub(self.first)?;
        usize::try_from(k).ok().and_then(|k| self.symbols.get(k))
    }

    pub fn at(&self, group: &FiniteAbelianGroup, i: i64) -> GroupElement {
        self.get(i).cloned().unwrap_or_else(|| group.zero())
    }

    /// `shift(w, n)(i) = w(i + n)`: the support moves by `-n`.
    pub fn shift(&self, n: i64) -> Word {
        if self.is_zero() {
            return Word::zero();
        }
        Word { first: self.first - n, symbols: self.symbols.clone() }
    }

    /// Start and end of the union of two supports, if either is nonzero.
    fn hull(&self, other: &Word) -> Option<(i64, i64)> {
        match (self.first(), other.first()) {
            (None, None) => None,
            (Some(_), None) => Some((self.first, self.last().unwrap())),
            (None, Some(_)) => Some((other.first, other.last().unwrap())),
            (Some(a), Some(b)) => Some((a.min(b), self.last().unwrap().max(other.last().unwrap()))),
        }
    }

    pub fn add(&self, group: &FiniteAbelianGroup, other: &Word) -> Word {
        let Some((a, b)) = self.hull(other) else { return Word::zero() };
        Word::new(a, (a..=b).map(|i| group.add(&self.at(group, i), &other.at(group, i))).collect())
    }

    pub fn sub(&self, group: &FiniteAbelianGroup, other: &Word) -> Word {
        self.add(group, &other.scale(group, -1))
    }

    pub fn scale(&self, group: &FiniteAbelianGroup, k: i64) -> Word {
        Word::new(self.first, self.symbols.iter().map(|s| group.scale(k, s)).collect())
    }

    /// Symbolwise image under a map that sends zero to zero.
    pub fn map(&self, f: impl Fn(&GroupElement) -> GroupElement) -> Word {
        Word::new(self.first, self.symbols.iter().map(f).collect())
    }

    /// The word agreeing with `self` on `[a, b]` and zero elsewhere.
    pub fn restrict(&self, a: i64, b: i64) -> Word {
        let Some((f, l)) = self.first().zip(self.last()) else { return Word::zero() };
        let (lo, hi) = (a.max(f), b.min(l));
        if lo > hi {
            return Word::zero();
        }
        Word::new(lo, self.symbols[(lo - f) as usize..=(hi - f) as usize].to_vec())
    }

    /// Additive order of the word.
    pub fn order(&self, group: &FiniteAbelianGroup) -> u64 {
        self.symbols.iter().fold(1, |acc, s| crate::arith::lcm(acc, group.element_order(s)))
    }

    /// Residue vector of the restriction to `[a, b]`, position-major.
    pub fn window_vector(&self, group: &FiniteAbelianGroup, a: i64, b: i64) -> Vec<u64> {
        let mut v = Vec::with_capacity(group.rank() * (b - a + 1).max(0) as usize);
        for i in a..=b {
            match self.get(i) {
                Some(s) => v.extend(group.to_residues(s)),
                None => v.extend(core::iter::repeat_n(0, group.rank())),
            }
        }
        v
    }

    /// Inverse of [`Word::window_vector`] for a window starting at `a`.
    pub fn from_window_vector(group: &FiniteAbelianGroup, a: i64, v: &[u64]) -> Word {
        let r = group.rank();
        if r == 0 {
            return Word::zero();
        }
        Word::new(a, v.chunks(r).map(|c| group.from_residues(c)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(2).unwrap()
    }

    fn w(group: &FiniteAbelianGroup, first: i64, xs: &[u64]) -> Word {
        Word::new(first, xs.iter().map(|&x| group.element(&[x]).unwrap()).collect())
    }

    #[test]
    fn trimming_and_support() {
        let g = z2();
        let x = w(&g, -2, &[0, 1, 0, 1, 0]);
        assert_eq!(x.first(), Some(-1));
        assert_eq!(x.last(), Some(1));
        assert_eq!(x.support_len(), 3);
        assert!(w(&g, 5, &[0, 0]).is_zero());
        assert_eq!(Word::zero().support_len(), 0);
    }

    #[test]
    fn shifting() {
        let g = z2();
        assert_eq!(Word::zero().shift(7), Word::zero());
        let x = w(&g, 0, &[1, 1, 1]);
        assert_eq!(x.shift(0), x);
        let s = x.shift(3);
        assert_eq!((s.first(), s.last()), (Some(-3), Some(-1)));
        assert_eq!(s.shift(-3), x);
        for i in -5..5 {
            assert_eq!(s.at(&g, i), x.at(&g, i + 3));
        }
    }

    #[test]
    fn arithmetic_and_restriction() {
        let g = FiniteAbelianGroup::cyclic(4).unwrap();
        let a = w(&g, 0, &[1, 2]);
        let b = w(&g, 1, &[2, 3]);
        assert_eq!(a.add(&g, &b), w(&g, 0, &[1, 0, 3]));
        assert_eq!(a.sub(&g, &a), Word::zero());
        assert_eq!(a.scale(&g, 2), w(&g, 0, &[2]));
        assert_eq!(a.order(&g), 4);
        assert_eq!(a.restrict(1, 5), w(&g, 1, &[2]));
        let v = a.window_vector(&g, -1, 2);
        assert_eq!(v, vec![0, 1, 2, 0]);
        assert_eq!(Word::from_window_vector(&g, -1, &v), a);
    }
}
