#![allow(dead_code)]

use groupshift::{FiniteAbelianGroup, GroupShift, Word};
use rand::Rng;

/// Alphabets with at most 8 elements.
pub const ALPHABETS: [&[u64]; 10] = [&[2], &[3], &[4], &[5], &[6], &[7], &[8], &[2, 2], &[2, 4], &[2, 2, 2]];

/// One or two generators of support length at most 3 with uniform symbols.
pub fn random_shift(rng: &mut impl Rng, orders: &[u64]) -> GroupShift {
    let h = FiniteAbelianGroup::from_cyclic_orders(orders).unwrap();
    let k = rng.gen_range(1..=2);
    let gens = (0..k)
        .map(|_| {
            let len = rng.gen_range(1..=3);
            let syms = (0..len)
                .map(|_| {
                    let c: Vec<u64> = orders.iter().map(|&o| rng.gen_range(0..o)).collect();
                    h.from_declared(&c).unwrap()
                })
                .collect();
            Word::new(rng.gen_range(-2..=2), syms)
        })
        .collect();
    GroupShift::new(h, gens).unwrap()
}

/// Random combination of the given words with coefficients below `modulus`.
pub fn random_combination(rng: &mut impl Rng, g: &GroupShift, basis: &[Word]) -> Word {
    let h = g.alphabet();
    basis.iter().fold(Word::zero(), |acc, w| acc.add(h, &w.scale(h, rng.gen_range(0..g.modulus() as i64))))
}

/// Random finite message over the encoder source, of length `len`.
pub fn random_message(rng: &mut impl Rng, orders: &[u64], len: usize) -> Vec<Vec<u64>> {
    (0..len).map(|_| orders.iter().map(|&o| rng.gen_range(0..o)).collect()).collect()
}
