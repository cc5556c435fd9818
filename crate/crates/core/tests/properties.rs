mod common;

use common::ALPHABETS;
use groupshift::certify::conjugacy_certificate;
use groupshift::control::{controllability_index, order_controllability_index};
use groupshift::horizon::Horizons;
use groupshift::oracle::WindowCode;
use groupshift::{FiniteAbelianGroup, GroupShift, Word};
use proptest::prelude::*;

fn shift_strategy() -> impl Strategy<Value = GroupShift> {
    (0..ALPHABETS.len(), prop::collection::vec((-2i64..=2, prop::collection::vec(any::<u64>(), 1..=9)), 1..=2)).prop_map(
        |(i, gens)| {
            let orders = ALPHABETS[i];
            let h = FiniteAbelianGroup::from_cyclic_orders(orders).unwrap();
            let gens = gens
                .into_iter()
                .map(|(first, raw)| {
                    let syms = raw
                        .chunks(orders.len())
                        .filter(|c| c.len() == orders.len())
                        .take(3)
                        .map(|c| {
                            let c: Vec<u64> = c.iter().zip(orders).map(|(x, o)| x % o).collect();
                            h.from_declared(&c).unwrap()
                        })
                        .collect();
                    Word::new(first, syms)
                })
                .collect();
            GroupShift::new(h, gens).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn window_module_matches_enumeration(g in shift_strategy(), a in -3i64..=3, len in 1i64..=4) {
        let oracle = WindowCode::enumerate(&g, a, a + len - 1, u64::MAX).unwrap();
        let w = g.window(a, a + len - 1).unwrap();
        prop_assert_eq!(w.order(), oracle.len() as u128);
        for b in oracle.blocks() {
            prop_assert!(w.contains(&Word::new(a, b)));
        }
    }

    #[test]
    fn order_index_bounds_plain_index(g in shift_strategy()) {
        let nc = controllability_index(&g, None, 4);
        let no = order_controllability_index(&g, None, 4);
        prop_assert!(nc.is_monotone());
        prop_assert!(no.is_monotone());
        if let Some(b) = no.index {
            prop_assert!(nc.index.is_some_and(|a| a <= b));
        }
    }

    #[test]
    fn certified_encoders_are_homomorphic(g in shift_strategy(), m in prop::collection::vec(any::<u64>(), 0..24), k in -4i64..=4) {
        let c = conjugacy_certificate(&g, &Horizons::for_shift(&g));
        if let Some(e) = c.encoder {
            let orders = e.source().declared_orders().to_vec();
            let r = orders.len().max(1);
            let syms: Vec<Vec<u64>> = m.chunks(r).filter(|c| c.len() == r && !orders.is_empty())
                .map(|c| c.iter().zip(&orders).map(|(x, o)| x % o).collect()).collect();
            let a = e.message(k, &syms).unwrap();
            let b = a.shift(3);
            let (h, src) = (g.alphabet(), e.source());
            prop_assert_eq!(e.encode(&a.add(src, &b)), e.encode(&a).add(h, &e.encode(&b)));
            prop_assert_eq!(e.encode(&a.shift(k)), e.encode(&a).shift(k));
        }
    }
}
