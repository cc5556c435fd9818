//! Brute-force window-code enumeration.
//!
//! Lists every element of `G|[a, b]` explicitly, closing the set of
//! contributing generator restrictions under addition coset by coset. Shares
//! no code with the Howell-form path, so it serves as an independent
//! cross-check on tiny instances.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::shift::GroupShift;
use crate::word::Word;

/// A window word: one symbol per position.
pub type Block = Vec<GroupElement>;

/// Largest `|H|^{b-a+1}` the bitset representation accepts.
pub const MAX_UNIVERSE: u64 = 1 << 28;

/// Every element of a window code, stored as a bitset over mixed-radix codes.
#[derive(Debug, Clone)]
pub struct WindowCode {
    group: FiniteAbelianGroup,
    a: i64,
    b: i64,
    radices: Vec<u64>,
    present: Vec<u64>,
    count: u64,
}

impl WindowCode {
    /// `G|[a, b]`, or `None` when it has more than `cap` elements or the
    /// block space exceeds [`MAX_UNIVERSE`].
    pub fn enumerate(g: &GroupShift, a: i64, b: i64, cap: u64) -> Option<Self> {
        let h = g.alphabet();
        let mut gens = Vec::new();
        for w in g.generators() {
            let (f, l) = (w.first().unwrap(), w.last().unwrap());
            for n in (f - b)..=(l - a) {
                let s = w.shift(n);
                gens.push((a..=b).map(|i| s.at(h, i)).collect::<Block>());
            }
        }
        Self::span(h, a, b, &gens, cap)
    }

    /// Subgroup of `H^[a,b]` generated by `gens`.
    pub fn span(h: &FiniteAbelianGroup, a: i64, b: i64, gens: &[Block], cap: u64) -> Option<Self> {
        let len = (b - a + 1).max(0) as usize;
        let radices: Vec<u64> = (0..len).flat_map(|_| h.factors().iter().map(|f| f.order())).collect();
        let universe = radices.iter().try_fold(1u64, |acc, &r| acc.checked_mul(r).filter(|&x| x <= MAX_UNIVERSE))?;
        let mut code = WindowCode {
            group: h.clone(),
            a,
            b,
            radices,
            present: vec![0; universe.div_ceil(64) as usize],
            count: 0,
        };
        code.insert(0);
        for gen in gens {
            let digits: Vec<u64> = gen.iter().flat_map(|s| s.coords().iter().copied()).collect();
            let snapshot: Vec<u64> = code.codes().collect();
            let mut step = vec![0u64; digits.len()];
            loop {
                code.add_digits(&mut step, &digits);
                let t = code.encode(&step);
                if code.has(t) {
                    break;
                }
                for &s in &snapshot {
                    let sum = code.add_codes(s, &step);
                    code.insert(sum);
                }
                if code.count > cap {
                    return None;
                }
            }
        }
        Some(code)
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn interval(&self) -> (i64, i64) {
        (self.a, self.b)
    }

    pub fn contains(&self, block: &[GroupElement]) -> bool {
        let digits: Vec<u64> = block.iter().flat_map(|s| s.coords().iter().copied()).collect();
        digits.len() == self.radices.len() && self.has(self.encode(&digits))
    }

    /// Whether the restriction of `w` to the window is a code element.
    pub fn contains_word(&self, w: &Word) -> bool {
        let block: Block = (self.a..=self.b).map(|i| w.at(&self.group, i)).collect();
        self.contains(&block)
    }

    /// Elements in increasing code order.
    pub fn blocks(&self) -> impl Iterator<Item = Block> + '_ {
        let rank = self.group.rank();
        self.codes().map(move |c| {
            let d = self.decode(c);
            d.chunks(rank.max(1)).take(self.radices.len() / rank.max(1)).map(|s| GroupElement(s.to_vec())).collect()
        })
    }

    fn codes(&self) -> impl Iterator<Item = u64> + '_ {
        self.present.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter(move |&k| w >> k & 1 == 1).map(move |k| i as u64 * 64 + k)
        })
    }

    fn has(&self, c: u64) -> bool {
        self.present[(c / 64) as usize] >> (c % 64) & 1 == 1
    }

    fn insert(&mut self, c: u64) {
        let (i, k) = ((c / 64) as usize, c % 64);
        if self.present[i] >> k & 1 == 0 {
            self.present[i] |= 1 << k;
            self.count += 1;
        }
    }

    fn encode(&self, digits: &[u64]) -> u64 {
        digits.iter().zip(&self.radices).rev().fold(0, |acc, (&d, &r)| acc * r + d)
    }

    fn decode(&self, mut c: u64) -> Vec<u64> {
        self.radices
            .iter()
            .map(|&r| {
                let d = c % r;
                c /= r;
                d
            })
            .collect()
    }

    fn add_digits(&self, acc: &mut [u64], d: &[u64]) {
        for ((x, &y), &r) in acc.iter_mut().zip(d).zip(&self.radices) {
            *x = (*x + y) % r;
        }
    }

    fn add_codes(&self, c: u64, d: &[u64]) -> u64 {
        let mut digits = self.decode(c);
        self.add_digits(&mut digits, d);
        self.encode(&digits)
    }
}

/// All elements of `G|[a, b]`, or `None` once more than `cap` are found.
pub fn enumerate_window(g: &GroupShift, a: i64, b: i64, cap: usize) -> Option<BTreeSet<Block>> {
    WindowCode::enumerate(g, a, b, cap as u64).map(|c| c.blocks().collect())
}

/// Subgroup of `H^[a,b]` generated by `gens`.
pub fn enumerate_span(h: &FiniteAbelianGroup, a: i64, b: i64, gens: &[Block], cap: usize) -> Option<BTreeSet<Block>> {
    WindowCode::span(h, a, b, gens, cap as u64).map(|c| c.blocks().collect())
}

/// Restriction of a word to `[a, b]` as a block.
pub fn block_of(g: &GroupShift, w: &Word, a: i64, b: i64) -> Block {
    (a..=b).map(|i| w.at(g.alphabet(), i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_code_windows() {
        let h = FiniteAbelianGroup::cyclic(2).unwrap();
        let y = Word::new(0, vec![h.element(&[1]).unwrap(), h.element(&[1]).unwrap()]);
        let g = GroupShift::new(h.clone(), vec![y]).unwrap();
        let c = WindowCode::enumerate(&g, 0, 3, 1 << 10).unwrap();
        assert_eq!(c.len(), 16);
        let z4 = FiniteAbelianGroup::cyclic(4).unwrap();
        let two = GroupShift::new(z4.clone(), vec![Word::impulse(z4.element(&[2]).unwrap(), 0)]).unwrap();
        let c = WindowCode::enumerate(&two, 0, 2, 1 << 10).unwrap();
        assert_eq!(c.len(), 8);
        assert!(c.contains(&[z4.element(&[2]).unwrap(), z4.zero(), z4.element(&[2]).unwrap()]));
        assert!(!c.contains(&[z4.element(&[1]).unwrap(), z4.zero(), z4.zero()]));
        assert_eq!(c.blocks().count(), 8);
    }

    #[test]
    fn cap_and_trivial_group() {
        let h = FiniteAbelianGroup::cyclic(3).unwrap();
        let g = GroupShift::full(h);
        assert!(WindowCode::enumerate(&g, 0, 3, 10).is_none());
        let t = GroupShift::new(FiniteAbelianGroup::cyclic(5).unwrap(), vec![]).unwrap();
        assert_eq!(WindowCode::enumerate(&t, 0, 3, 10).unwrap().len(), 1);
    }
}
