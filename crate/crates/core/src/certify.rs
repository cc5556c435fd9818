//! Window-scale conjugacy certificates: one canonical generating set per
//! prime, assembled into a product encoder and checked against `G`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::canonical::{canonical_generators, CanonicalGeneratorSet};
use crate::encoder::{Encoder, Injectivity, Noncatastrophic, Structure, Surjectivity, Tap};
use crate::horizon::Horizons;
use crate::shift::GroupShift;

/// Pipeline stage named by a failing certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    OrderControllability,
    Generators,
    Lifting,
    Structure,
    Injectivity,
    Surjectivity,
    Noncatastrophic,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::OrderControllability => "order-controllability",
            Stage::Generators => "generators",
            Stage::Lifting => "lifting",
            Stage::Structure => "structure",
            Stage::Injectivity => "injectivity",
            Stage::Surjectivity => "surjectivity",
            Stage::Noncatastrophic => "noncatastrophic",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub stage: Stage,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimaryCertificate {
    pub prime: u64,
    pub generators: Option<CanonicalGeneratorSet>,
    pub failure: Option<Failure>,
}

/// Outcomes of the encoder checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checks {
    pub structure: Structure,
    pub injectivity: Injectivity,
    pub surjectivity: Surjectivity,
    pub noncatastrophic: Noncatastrophic,
}

impl Checks {
    pub fn passed(&self) -> bool {
        self.first_failure().is_none()
    }

    pub fn first_failure(&self) -> Option<Stage> {
        let s = self.structure;
        if !(s.homomorphism && s.equivariance && s.order_bound) {
            Some(Stage::Structure)
        } else if self.injectivity.block.is_none() {
            Some(Stage::Injectivity)
        } else if self.surjectivity.failure.is_some() {
            Some(Stage::Surjectivity)
        } else if self.noncatastrophic.witness.is_some() {
            Some(Stage::Noncatastrophic)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyCertificate {
    pub horizons: Horizons,
    pub primary: Vec<PrimaryCertificate>,
    pub encoder: Option<Encoder>,
    pub checks: Option<Checks>,
    pub failure: Option<Failure>,
}

impl ConjugacyCertificate {
    pub fn complete(&self) -> bool {
        self.failure.is_none() && self.checks.as_ref().is_some_and(Checks::passed)
    }
}

/// Runs every encoder check against `G`; preimages may reach `pad` past
/// the support they explain.
pub fn check_encoder(g: &GroupShift, e: &Encoder, hz: &Horizons, pad: usize) -> Checks {
    Checks {
        structure: e.structure(),
        injectivity: e.injectivity(hz.block_cap),
        surjectivity: e.surjectivity(g, hz.verify),
        noncatastrophic: e.noncatastrophic(g, hz.verify, pad, hz.margin),
    }
}

fn checks_failure(checks: &Checks) -> Option<Failure> {
    checks.first_failure().map(|stage| {
        let detail = match stage {
            Stage::Injectivity => "translates of the socle words stay dependent up to the block cap".to_string(),
            Stage::Surjectivity => {
                let (a, b) = checks.surjectivity.failure.unwrap();
                alloc::format!("encoder image differs from the shift on [{a}, {b}]")
            }
            Stage::Noncatastrophic => "a finite member has no finite preimage".to_string(),
            _ => "structural check failed".to_string(),
        };
        Failure { stage, detail }
    })
}

/// Certificate for an explicitly given encoder.
pub fn certify_encoder(g: &GroupShift, e: &Encoder, hz: &Horizons) -> ConjugacyCertificate {
    let pad = hz.margin + e.memory();
    let checks = check_encoder(g, e, hz, pad);
    let failure = checks_failure(&checks);
    ConjugacyCertificate { horizons: *hz, primary: Vec::new(), encoder: Some(e.clone()), checks: Some(checks), failure }
}

/// Full pipeline: primary decomposition, canonical generators per prime,
/// product encoder, checks.
pub fn conjugacy_certificate(g: &GroupShift, hz: &Horizons) -> ConjugacyCertificate {
    use crate::canonical::CanonicalError as E;
    let mut primary = Vec::new();
    let mut taps: Vec<Tap> = Vec::new();
    let mut failure = None;
    let mut pad = hz.margin;
    for p in g.alphabet().primes() {
        match canonical_generators(g, p, hz) {
            Ok(set) => {
                taps.extend(set.taps());
                pad = pad.max(set.pad);
                primary.push(PrimaryCertificate { prime: p, generators: Some(set), failure: None });
            }
            Err(e) => {
                let stage = match e {
                    E::NotOrderControllable { .. } => Stage::OrderControllability,
                    E::Lift { .. } => Stage::Lifting,
                    _ => Stage::Generators,
                };
                let f = Failure { stage, detail: alloc::format!("p = {p}: {e}") };
                failure.get_or_insert(f.clone());
                primary.push(PrimaryCertificate { prime: p, generators: None, failure: Some(f) });
            }
        }
    }
    if failure.is_some() {
        return ConjugacyCertificate { horizons: *hz, primary, encoder: None, checks: None, failure };
    }
    let e = Encoder::new(g.alphabet().clone(), taps).expect("canonical taps lie in the alphabet");
    let checks = check_encoder(g, &e, hz, pad);
    let failure = checks_failure(&checks);
    ConjugacyCertificate { horizons: *hz, primary, encoder: Some(e), checks: Some(checks), failure }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteAbelianGroup;
    use crate::word::Word;

    #[test]
    fn full_shifts_certify_with_identity_encoders() {
        for orders in [&[2u64][..], &[3], &[4], &[8], &[2, 4], &[6]] {
            let h = FiniteAbelianGroup::from_cyclic_orders(orders).unwrap();
            let g = GroupShift::full(h.clone());
            let c = conjugacy_certificate(&g, &Horizons::for_shift(&g));
            assert!(c.complete(), "{orders:?}: {:?}", c.failure);
            let e = c.encoder.unwrap();
            assert_eq!(e.taps().len(), h.rank());
            for t in e.taps() {
                assert_eq!(t.word.support_len(), 1);
                assert_eq!(t.order(), t.word.order(&h));
            }
        }
    }

    #[test]
    fn z6_has_two_primary_parts() {
        let g = GroupShift::full(FiniteAbelianGroup::cyclic(6).unwrap());
        let c = conjugacy_certificate(&g, &Horizons::for_shift(&g));
        let primes: Vec<u64> = c.primary.iter().map(|p| p.prime).collect();
        assert_eq!(primes, vec![2, 3]);
    }

    #[test]
    fn difference_encoder_fails_at_noncatastrophic_stage() {
        let h = FiniteAbelianGroup::cyclic(2).unwrap();
        let y = Word::new(0, vec![h.element(&[1]).unwrap(), h.element(&[1]).unwrap()]);
        let g = GroupShift::new(h.clone(), vec![y.clone()]).unwrap();
        let e = Encoder::from_words(h, &[y]).unwrap();
        let c = certify_encoder(&g, &e, &Horizons::for_shift(&g));
        assert!(!c.complete());
        // Injectivity fails first: the constant word is in the kernel.
        assert_eq!(c.failure.unwrap().stage, Stage::Injectivity);
        assert!(c.checks.unwrap().noncatastrophic.witness.is_some());
    }
}
