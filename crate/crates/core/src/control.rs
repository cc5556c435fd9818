//! Controllability notions decided on finite windows.
//!
//! For a candidate index `n` and past horizon `L` the window is
//! `[-L, n + L]`, split into past `[-L, 0]`, steering block `[1, n]` and
//! future `[n + 1, n + L]`. Every condition is linear in the element being
//! steered, so it is enough to test the generators of the window module; the
//! order condition becomes linear once the order of the steering block is
//! fixed, and is checked separately for every divisor `d` of `exp(H)`.

use alloc::vec::Vec;

use crate::arith::divisors;
use crate::horizon::Horizons;
use crate::ring::{kernel_submodule, HowellForm};
use crate::shift::GroupShift;
use crate::word::Word;

/// Outcome of one candidate index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexTrial {
    pub n: usize,
    pub past: usize,
    pub holds: bool,
    /// Window element that cannot be steered, when `holds` is false.
    pub counterexample: Option<Word>,
}

/// Every candidate `n ≤ cap`, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSearch {
    pub index: Option<usize>,
    pub cap: usize,
    pub trials: Vec<IndexTrial>,
}

impl IndexSearch {
    /// Once the condition holds it keeps holding for every larger candidate.
    pub fn is_monotone(&self) -> bool {
        self.trials.windows(2).all(|w| !w[0].holds || w[1].holds)
    }

    /// Counterexample at the largest failing candidate below the index.
    pub fn last_failure(&self) -> Option<&IndexTrial> {
        self.trials.iter().rev().find(|t| !t.holds)
    }
}

struct Blocks {
    past: core::ops::Range<usize>,
    mid: core::ops::Range<usize>,
    fut: core::ops::Range<usize>,
}

fn blocks(rank: usize, n: usize, past: usize) -> Blocks {
    let p = (past + 1) * rank;
    let m = p + n * rank;
    Blocks { past: 0..p, mid: p..m, fut: m..m + past * rank }
}

/// Checks the steering condition at `n` with past horizon `past`.
///
/// Without `order`: every `g ∈ G|[-L, n+L]` has a `g1` in the same window
/// module with `g1 = g` on the past and `g1 = 0` on the future. With `order`,
/// additionally `order(g1|[1,n])` divides `order(g|[1,n])`.
pub fn steering_holds(g: &GroupShift, n: usize, past: usize, order: bool) -> Result<(), Word> {
    let (a, b) = (-(past as i64), (n + past) as i64);
    let modulus = g.modulus();
    let cols = g.cols(a, b);
    let rows = g.contributions(a, b);
    let bl = blocks(g.rank(), n, past);
    let witness = |v: &[u64]| Word::from_window_vector(g.alphabet(), a, v);

    let orders: Vec<u64> = if order && n > 0 { divisors(g.alphabet().exponent().max(1)) } else { Vec::from([0]) };
    for d in orders {
        // d = 0 encodes "no order constraint".
        let project = |v: &[u64]| -> Vec<u64> {
            let mut out: Vec<u64> = v[bl.past.clone()].to_vec();
            out.extend_from_slice(&v[bl.fut.clone()]);
            if d != 0 {
                out.extend(v[bl.mid.clone()].iter().map(|&x| x * d % modulus));
            }
            out
        };
        let width = bl.past.len() + bl.fut.len() + if d == 0 { 0 } else { bl.mid.len() };
        let projected: Vec<Vec<u64>> = rows.iter().map(|r| project(r)).collect();
        let reachable = HowellForm::span(modulus, width, &projected).expect("modulus in range");
        let steered: Vec<Vec<u64>> = if d == 0 {
            HowellForm::span(modulus, cols, &rows).expect("modulus in range").rows().to_vec()
        } else {
            kernel_submodule(modulus, cols, &rows, |v| v[bl.mid.clone()].iter().map(|&x| x * d % modulus).collect())
        };
        for s in &steered {
            let mut target = s[bl.past.clone()].to_vec();
            target.resize(reachable.cols(), 0);
            if !reachable.contains(&target) {
                return Err(witness(s));
            }
        }
    }
    Ok(())
}

fn search(g: &GroupShift, past: Option<usize>, cap: usize, order: bool) -> IndexSearch {
    let hz = Horizons { past, ..Horizons::for_shift(g) };
    let trials: Vec<IndexTrial> = (0..=cap)
        .map(|n| {
            let l = hz.past_for(g, n);
            let r = steering_holds(g, n, l, order);
            IndexTrial { n, past: l, holds: r.is_ok(), counterexample: r.err() }
        })
        .collect();
    let index = trials.iter().find(|t| t.holds).map(|t| t.n);
    IndexSearch { index, cap, trials }
}

/// Least `n ≤ cap` satisfying the controllability condition at window scale.
pub fn controllability_index(g: &GroupShift, past: Option<usize>, cap: usize) -> IndexSearch {
    search(g, past, cap, false)
}

/// Least `n ≤ cap` satisfying the order-controllability condition at window scale.
pub fn order_controllability_index(g: &GroupShift, past: Option<usize>, cap: usize) -> IndexSearch {
    search(g, past, cap, true)
}

/// Least `n ≤ cap` for either condition, stopping at the first success.
pub fn least_index(g: &GroupShift, past: Option<usize>, cap: usize, order: bool) -> Option<usize> {
    let hz = Horizons { past, ..Horizons::for_shift(g) };
    (0..=cap).find(|&n| steering_holds(g, n, hz.past_for(g, n), order).is_ok())
}

/// Which shift the density check runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derived {
    Itself,
    /// `G[p]`, the `p`-torsion subgroup.
    Socle(u64),
}

/// Window-scale density of the finite members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Density {
    pub derived: Derived,
    pub holds: bool,
    /// Windows `[0, len - 1]` on which the check ran.
    pub windows: Vec<(i64, i64)>,
    /// First window where finite members fall short.
    pub failure: Option<(i64, i64)>,
}

/// Compares, on windows `[0, ℓ-1]` for `ℓ ≤ horizon`, the projection of the
/// (derived) shift with the projection of its certified finite members
/// supported within `reach` of the window.
pub fn weak_controllability_check(g: &GroupShift, derived: Derived, horizon: usize, reach: usize, margin: usize) -> Density {
    let modulus = g.modulus();
    let torsion = match derived {
        Derived::Itself => 0,
        Derived::Socle(p) => p,
    };
    let scale = |v: &[u64]| -> Vec<u64> {
        if torsion == 0 {
            Vec::new()
        } else {
            v.iter().map(|&x| x * torsion % modulus).collect()
        }
    };
    let (r, m) = (reach as i64, margin as i64);
    let rank = g.rank();
    let mut windows = Vec::new();
    for len in 1..=horizon.max(1) as i64 {
        let inner = (0, len - 1);
        let target = g.restricted_submodule((-r, len - 1 + r), inner, scale);
        let (a, b) = (-r - m, len - 1 + r + m);
        let lo = m as usize * rank;
        let hi = lo + (len as usize + 2 * reach) * rank;
        let finite = g.restricted_submodule((a, b), inner, |v| {
            let mut out: Vec<u64> = v[..lo].iter().chain(&v[hi..]).copied().collect();
            out.extend(scale(&v[lo..hi]));
            out
        });
        windows.push(inner);
        if finite != target {
            return Density { derived, holds: false, windows, failure: Some(inner) };
        }
    }
    Density { derived, holds: true, windows, failure: None }
}

/// Combined controllability summary for one shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControllabilityReport {
    pub density: Vec<Density>,
    pub controllability: IndexSearch,
    pub order_controllability: IndexSearch,
    /// The explicit past horizon, if one was fixed.
    pub past: Option<usize>,
}

impl ControllabilityReport {
    /// Density of `G_f` in `G` itself; the socle checks are reported separately.
    pub fn weakly_controllable(&self) -> bool {
        self.density.iter().filter(|d| d.derived == Derived::Itself).all(|d| d.holds)
    }

    pub fn n_c(&self) -> Option<usize> {
        self.controllability.index
    }

    pub fn n_o(&self) -> Option<usize> {
        self.order_controllability.index
    }

    /// `n_c ≤ n_o` whenever both exist.
    pub fn indices_consistent(&self) -> bool {
        match (self.n_c(), self.n_o()) {
            (Some(c), Some(o)) => c <= o,
            _ => true,
        }
    }
}

/// Runs the density checks (for `G` and each `G[p]`) and both index searches.
pub fn analyze(g: &GroupShift, hz: &Horizons) -> ControllabilityReport {
    let mut density = alloc::vec![weak_controllability_check(g, Derived::Itself, hz.verify, hz.margin, hz.margin)];
    for p in g.alphabet().primes() {
        density.push(weak_controllability_check(g, Derived::Socle(p), hz.verify, hz.support_cap.max(hz.margin), hz.margin));
    }
    ControllabilityReport {
        density,
        controllability: controllability_index(g, hz.past, hz.index_cap),
        order_controllability: order_controllability_index(g, hz.past, hz.index_cap),
        past: hz.past,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteAbelianGroup;
    use crate::oracle::{enumerate_window, Block};
    use std::collections::BTreeSet;

    fn word(h: &FiniteAbelianGroup, first: i64, xs: &[&[u64]]) -> Word {
        Word::new(first, xs.iter().map(|c| h.element(c).unwrap()).collect())
    }

    fn shift(orders: &[u64], gens: &[(i64, &[&[u64]])]) -> GroupShift {
        let h = FiniteAbelianGroup::from_cyclic_orders(orders).unwrap();
        let gens = gens.iter().map(|(f, xs)| word(&h, *f, xs)).collect();
        GroupShift::new(h, gens).unwrap()
    }

    /// Brute force: enumerate the window code and search g1 for every g.
    fn brute_holds(g: &GroupShift, n: usize, past: usize, order: bool) -> bool {
        let h = g.alphabet();
        let (a, b) = (-(past as i64), (n + past) as i64);
        let code: BTreeSet<Block> = enumerate_window(g, a, b, 1 << 20).unwrap();
        let p_end = past + 1;
        let block_order = |x: &Block| x[p_end..p_end + n].iter().fold(1, |acc, s| crate::arith::lcm(acc, h.element_order(s)));
        // Mid-block orders reachable from each past with a zero future.
        let mut steerable: std::collections::BTreeMap<&[crate::group::GroupElement], BTreeSet<u64>> = Default::default();
        for y in code.iter().filter(|y| y[p_end + n..].iter().all(|s| s.is_zero())) {
            steerable.entry(&y[..p_end]).or_default().insert(block_order(y));
        }
        code.iter().all(|x| {
            let o = block_order(x);
            steerable.get(&x[..p_end]).is_some_and(|os| os.iter().any(|&q| !order || o % q == 0))
        })
    }

    fn brute_index(g: &GroupShift, past: usize, cap: usize, order: bool) -> Option<usize> {
        (0..=cap).find(|&n| brute_holds(g, n, past, order))
    }

    #[test]
    fn mixed_code_without_order_index() {
        let g = shift(&[2, 4], &[(0, &[&[1, 1], &[0, 1]])]);
        for n in 0..=3 {
            assert_eq!(brute_holds(&g, n, 2, true), steering_holds(&g, n, 2, true).is_ok(), "n = {n}");
            assert_eq!(brute_holds(&g, n, 2, false), steering_holds(&g, n, 2, false).is_ok(), "n = {n}");
        }
        assert_eq!(controllability_index(&g, None, 6).index, Some(1));
        assert_eq!(order_controllability_index(&g, None, 6).index, None);
        // G[2] holds words with an all-ones Z2 coordinate; no finite member approaches them.
        let report = analyze(&g, &Horizons { index_cap: 3, ..Horizons::for_shift(&g) });
        assert!(report.weakly_controllable());
        assert!(!report.density.iter().find(|d| d.derived == Derived::Socle(2)).unwrap().holds);
    }

    #[test]
    fn long_delay_is_dense_but_not_controllable_at_cap() {
        let mut syms = vec![&[0u64, 0][..]; 21];
        syms[0] = &[1, 0];
        syms[20] = &[0, 1];
        let g = shift(&[2, 2], &[(0, &syms)]);
        let report = analyze(&g, &Horizons { index_cap: 4, ..Horizons::for_shift(&g) });
        assert!(report.density.iter().all(|d| d.holds));
        assert_eq!(report.n_c(), None);
    }

    #[test]
    fn full_shift_indices_are_zero() {
        for orders in [&[2u64][..], &[4], &[2, 3]] {
            let g = GroupShift::full(FiniteAbelianGroup::from_cyclic_orders(orders).unwrap());
            assert_eq!(controllability_index(&g, None, 4).index, Some(0));
            assert_eq!(order_controllability_index(&g, None, 4).index, Some(0));
        }
    }

    #[test]
    fn pair_code_over_z2() {
        // The closure of the shifts of (1,1) is the full shift, so n_c = 0.
        let g = shift(&[2], &[(0, &[&[1], &[1]])]);
        assert_eq!(brute_index(&g, 4, 4, false), Some(0));
        assert_eq!(controllability_index(&g, Some(4), 4).index, Some(0));
    }

    #[test]
    fn scaled_impulse_over_z4() {
        let g = shift(&[4], &[(0, &[&[2]])]);
        assert_eq!(brute_index(&g, 4, 3, false), Some(0));
        assert_eq!(controllability_index(&g, Some(4), 3).index, Some(0));
    }

    #[test]
    fn z4_generator_one_two() {
        let g = shift(&[4], &[(0, &[&[1], &[2]])]);
        let nc = brute_index(&g, 3, 3, false);
        let no = brute_index(&g, 3, 3, true);
        assert_eq!(controllability_index(&g, Some(3), 3).index, nc);
        assert_eq!(order_controllability_index(&g, Some(3), 3).index, no);
    }

    #[test]
    fn exponent_p_indices_coincide() {
        let g = shift(&[2, 2], &[(0, &[&[1, 1], &[1, 0]]), (0, &[&[0, 1], &[0, 0], &[1, 1]])]);
        let c = controllability_index(&g, None, 6);
        let o = order_controllability_index(&g, None, 6);
        assert_eq!(c.index, o.index);
        assert!(c.is_monotone() && o.is_monotone());
    }

    #[test]
    fn delayed_copy_needs_the_delay() {
        // y = e1 at 0, e2 at 3: the second coordinate repeats the first three steps later.
        let g = shift(&[2, 2], &[(0, &[&[1, 0], &[0, 0], &[0, 0], &[0, 1]])]);
        let c = controllability_index(&g, None, 5);
        assert_eq!(c.index, Some(3));
        assert!(c.trials[2].counterexample.is_some());
        assert_eq!(brute_index(&g, 3, 4, false), Some(3));
        assert!(c.is_monotone());
    }

    type Case<'a> = (&'a [u64], &'a [(i64, &'a [&'a [u64]])]);

    #[test]
    fn mixed_order_code_brute_force_agreement() {
        let cases: &[Case] = &[
            (&[4, 2], &[(0, &[&[2, 1], &[1, 0]])]),
            (&[4, 2], &[(0, &[&[1, 1], &[2, 0]])]),
            (&[8], &[(0, &[&[1], &[2]])]),
            (&[4, 2], &[(0, &[&[1, 0], &[0, 1], &[2, 0]])]),
        ];
        for (orders, gens) in cases {
            let g = shift(orders, gens);
            for order in [false, true] {
                let past = 2;
                let brute = brute_index(&g, past, 2, order);
                let fast = search(&g, Some(past), 2, order).index;
                assert_eq!(fast, brute, "{orders:?} order={order}");
            }
        }
    }

    #[test]
    fn density_of_presented_shift_holds() {
        let g = shift(&[4, 2], &[(0, &[&[2, 1], &[1, 0]])]);
        assert!(weak_controllability_check(&g, Derived::Itself, 4, 4, 4).holds);
        let full = GroupShift::full(FiniteAbelianGroup::cyclic(4).unwrap());
        assert!(weak_controllability_check(&full, Derived::Socle(2), 4, 4, 4).holds);
        let pair = shift(&[4], &[(0, &[&[1], &[1]])]);
        assert!(weak_controllability_check(&pair, Derived::Socle(2), 6, 6, 4).holds);
    }
}
