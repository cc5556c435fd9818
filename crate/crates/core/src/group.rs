//! Finite abelian groups stored as direct sums of cyclic prime-power factors.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{factorize, is_prime, lcm, valuation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    ZeroOrder,
    NotPrime(u64),
    Arity { expected: usize, found: usize },
    OutsideComponent(u64),
}

impl fmt::Display for GroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupError::ZeroOrder => f.write_str("cyclic factor of order 0"),
            GroupError::NotPrime(p) => write!(f, "{p} is not prime"),
            GroupError::Arity { expected, found } => {
                write!(f, "expected {expected} coordinates, found {found}")
            }
            GroupError::OutsideComponent(p) => {
                write!(f, "element has nonzero coordinates outside the {p}-primary component")
            }
        }
    }
}

impl core::error::Error for GroupError {}

/// One cyclic factor `Z/p^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimaryFactor {
    pub prime: u64,
    pub exponent: u32,
}

impl PrimaryFactor {
    pub fn order(&self) -> u64 {
        self.prime.pow(self.exponent)
    }
}

/// Coordinates of an element, one residue per primary factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub Vec<u64>);

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

/// Height of an element: `Infinite` is reserved for zero and sorts above every finite height.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Height {
    Finite(u32),
    Infinite,
}

/// `H ≅ ⊕ Z/p_i^{e_i}`.
///
/// The group remembers the cyclic orders it was declared with (e.g. `Z12`)
/// so that symbols can be read and printed in the user's coordinates, while
/// all arithmetic runs on the primary factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    factors: Vec<PrimaryFactor>,
    declared: Vec<u64>,
}

impl FiniteAbelianGroup {
    /// Direct sum of cyclic groups of the given orders, each split into its
    /// primary parts in ascending prime order.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self, GroupError> {
        let mut factors = Vec::new();
        for &n in orders {
            if n == 0 {
                return Err(GroupError::ZeroOrder);
            }
            factors.extend(factorize(n).into_iter().map(|(prime, exponent)| PrimaryFactor { prime, exponent }));
        }
        Ok(FiniteAbelianGroup { factors, declared: orders.to_vec() })
    }

    pub fn from_factors(factors: Vec<PrimaryFactor>) -> Result<Self, GroupError> {
        for f in &factors {
            if !is_prime(f.prime) {
                return Err(GroupError::NotPrime(f.prime));
            }
            if f.exponent == 0 {
                return Err(GroupError::ZeroOrder);
            }
        }
        let declared = factors.iter().map(PrimaryFactor::order).collect();
        Ok(FiniteAbelianGroup { factors, declared })
    }

    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        Self::from_cyclic_orders(&[n])
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { factors: Vec::new(), declared: Vec::new() }
    }

    pub fn factors(&self) -> &[PrimaryFactor] {
        &self.factors
    }

    pub fn declared_orders(&self) -> &[u64] {
        &self.declared
    }

    /// Number of primary cyclic factors.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().map(PrimaryFactor::order).product()
    }

    /// `exp(H)`, the lcm of the factor orders.
    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1, |acc, f| lcm(acc, f.order()))
    }

    /// Distinct primes dividing `|H|`, ascending.
    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.factors.iter().map(|f| f.prime).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        self.factors.iter().all(|f| f.prime == p)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.factors.len()])
    }

    pub fn element(&self, coords: &[u64]) -> Result<GroupElement, GroupError> {
        if coords.len() != self.factors.len() {
            return Err(GroupError::Arity { expected: self.factors.len(), found: coords.len() });
        }
        Ok(GroupElement(coords.iter().zip(&self.factors).map(|(&x, f)| x % f.order()).collect()))
    }

    /// Element from coordinates in the declared cyclic factors.
    pub fn from_declared(&self, coords: &[u64]) -> Result<GroupElement, GroupError> {
        if coords.len() != self.declared.len() {
            return Err(GroupError::Arity { expected: self.declared.len(), found: coords.len() });
        }
        let mut out = Vec::with_capacity(self.factors.len());
        for (&x, &n) in coords.iter().zip(&self.declared) {
            for (p, e) in factorize(n) {
                out.push(x % p.pow(e));
            }
        }
        Ok(GroupElement(out))
    }

    /// Coordinates in the declared cyclic factors (inverse of [`Self::from_declared`]).
    pub fn to_declared(&self, g: &GroupElement) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.declared.len());
        let mut idx = 0;
        for &n in &self.declared {
            let parts = factorize(n);
            // CRT recombination of the primary residues.
            let mut x = 0u64;
            let mut m = 1u64;
            for (p, e) in parts {
                let q = p.pow(e);
                let r = g.0[idx];
                idx += 1;
                while x % q != r {
                    x += m;
                }
                m *= q;
            }
            out.push(x);
        }
        out
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter().zip(&b.0).zip(&self.factors).map(|((&x, &y), f)| (x + y) % f.order()).collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement(a.0.iter().zip(&self.factors).map(|(&x, f)| (f.order() - x) % f.order()).collect())
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    /// `k · a` for an integer `k`.
    pub fn scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.factors)
                .map(|(&x, f)| {
                    let q = f.order() as i128;
                    ((k as i128).rem_euclid(q) * x as i128 % q) as u64
                })
                .collect(),
        )
    }

    /// Least `n ≥ 1` with `n · g = 0`.
    pub fn element_order(&self, g: &GroupElement) -> u64 {
        g.0.iter().zip(&self.factors).fold(1, |acc, (&x, f)| {
            let ord = match valuation(x, f.prime) {
                None => 1,
                Some(v) => f.prime.pow(f.exponent - v),
            };
            lcm(acc, ord)
        })
    }

    /// Largest `h` with `g ∈ p^h H`, for `g` in the `p`-primary component.
    pub fn height(&self, g: &GroupElement, p: u64) -> Result<Height, GroupError> {
        if !is_prime(p) {
            return Err(GroupError::NotPrime(p));
        }
        let mut h: Option<u32> = None;
        for (&x, f) in g.0.iter().zip(&self.factors) {
            if x == 0 {
                continue;
            }
            if f.prime != p {
                return Err(GroupError::OutsideComponent(p));
            }
            let v = valuation(x, p).expect("nonzero");
            h = Some(h.map_or(v, |h| h.min(v)));
        }
        Ok(h.map_or(Height::Infinite, Height::Finite))
    }

    /// The `p`-primary component together with its embedding into `H`.
    pub fn primary_component(&self, p: u64) -> Result<PrimaryComponent, GroupError> {
        if !is_prime(p) {
            return Err(GroupError::NotPrime(p));
        }
        let indices: Vec<usize> = (0..self.factors.len()).filter(|&i| self.factors[i].prime == p).collect();
        let group = FiniteAbelianGroup::from_factors(indices.iter().map(|&i| self.factors[i]).collect())?;
        Ok(PrimaryComponent { prime: p, group, indices, parent_rank: self.factors.len() })
    }

    /// Every element, in lexicographic coordinate order. Only sensible for tiny groups.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut out = vec![self.zero()];
        for (i, f) in self.factors.iter().enumerate() {
            out = out
                .into_iter()
                .flat_map(|g| {
                    (0..f.order()).map(move |x| {
                        let mut c = g.0.clone();
                        c[i] = x;
                        GroupElement(c)
                    })
                })
                .collect();
        }
        out.sort();
        out
    }

    /// Multiplier embedding factor `i` into `Z/exp(H)`.
    pub(crate) fn embedding_coefficients(&self) -> Vec<u64> {
        let n = self.exponent();
        self.factors.iter().map(|f| n / f.order()).collect()
    }

    /// Injective homomorphism `H → (Z/exp(H))^rank`.
    pub fn to_residues(&self, g: &GroupElement) -> Vec<u64> {
        g.0.iter().zip(self.embedding_coefficients()).map(|(&x, c)| x * c).collect()
    }

    /// Inverse of [`Self::to_residues`] on its image.
    pub fn from_residues(&self, r: &[u64]) -> GroupElement {
        GroupElement(r.iter().zip(self.embedding_coefficients()).map(|(&x, c)| x / c).collect())
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.declared.is_empty() {
            return f.write_str("Z1");
        }
        for (i, n) in self.declared.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "Z{n}")?;
        }
        Ok(())
    }
}

/// The `p`-part of a group with its embedding and projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimaryComponent {
    pub prime: u64,
    pub group: FiniteAbelianGroup,
    indices: Vec<usize>,
    parent_rank: usize,
}

impl PrimaryComponent {
    /// Positions of this component's factors in the parent group.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn embed(&self, g: &GroupElement) -> GroupElement {
        let mut out = vec![0; self.parent_rank];
        for (&i, &x) in self.indices.iter().zip(&g.0) {
            out[i] = x;
        }
        GroupElement(out)
    }

    pub fn project(&self, g: &GroupElement) -> GroupElement {
        GroupElement(self.indices.iter().map(|&i| g.0[i]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(orders: &[u64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::from_cyclic_orders(orders).unwrap()
    }

    #[test]
    fn orders() {
        let h = z(&[4, 2]);
        assert_eq!(h.element_order(&h.zero()), 1);
        assert_eq!(h.element_order(&h.element(&[2, 1]).unwrap()), 2);
        let z8 = z(&[8]);
        for g in z8.elements() {
            // Oracle: repeated addition.
            let mut acc = g.clone();
            let mut n = 1;
            while !acc.is_zero() {
                acc = z8.add(&acc, &g);
                n += 1;
            }
            assert_eq!(z8.element_order(&g), n);
            if let Height::Finite(h) = z8.height(&g, 2).unwrap() {
                assert_eq!(n, 8 / 2u64.pow(h));
            }
        }
    }

    #[test]
    fn decomposition_and_components() {
        let h = z(&[12]);
        assert_eq!(h.factors(), &[PrimaryFactor { prime: 2, exponent: 2 }, PrimaryFactor { prime: 3, exponent: 1 }]);
        assert_eq!(h.primary_component(2).unwrap().group.order(), 4);
        assert_eq!(h.primary_component(5).unwrap().group.order(), 1);
        assert_eq!(h.primary_component(4), Err(GroupError::NotPrime(4)));

        let h = z(&[4, 9, 2]);
        let c = h.primary_component(2).unwrap();
        assert_eq!(c.group.order(), 8);
        // Oracle: count elements of H killed by a power of 2.
        let two_torsion = h.elements().iter().filter(|g| h.scale(4, g).is_zero()).count();
        assert_eq!(two_torsion, 8);
        let product: u64 = h.primes().iter().map(|&p| h.primary_component(p).unwrap().group.order()).product();
        assert_eq!(product, h.order());
    }

    #[test]
    fn components_reassemble() {
        let h = z(&[12, 10]);
        for g in h.elements() {
            let mut acc = h.zero();
            for p in h.primes() {
                let c = h.primary_component(p).unwrap();
                acc = h.add(&acc, &c.embed(&c.project(&g)));
            }
            assert_eq!(acc, g);
        }
    }

    #[test]
    fn heights() {
        let z8 = z(&[8]);
        assert_eq!(z8.height(&z8.element(&[4]).unwrap(), 2).unwrap(), Height::Finite(2));
        assert_eq!(z8.height(&z8.zero(), 2).unwrap(), Height::Infinite);
        let h = z(&[4, 2]);
        let g = h.element(&[2, 0]).unwrap();
        assert_eq!(h.height(&g, 2).unwrap(), Height::Finite(1));
        // Oracle: 2x = (2,0) is solvable, 4x = (2,0) is not.
        assert!(h.elements().iter().any(|x| h.scale(2, x) == g));
        let z6 = z(&[6]);
        assert_eq!(z6.height(&z6.from_declared(&[3]).unwrap(), 3), Err(GroupError::OutsideComponent(3)));
    }

    #[test]
    fn declared_coordinates_round_trip() {
        let h = z(&[12, 2]);
        for a in 0..12 {
            for b in 0..2 {
                let g = h.from_declared(&[a, b]).unwrap();
                assert_eq!(h.to_declared(&g), vec![a, b]);
            }
        }
    }

    #[test]
    fn invariant_properties() {
        let h = z(&[4, 2, 9]);
        for g in h.elements() {
            let n = h.element_order(&g);
            assert!(h.scale(n as i64, &g).is_zero());
            for (q, _) in factorize(n) {
                assert!(!h.scale((n / q) as i64, &g).is_zero());
            }
        }
        let c = h.primary_component(2).unwrap();
        for g in c.group.elements() {
            let pg = c.group.scale(2, &g);
            if let (Height::Finite(a), Height::Finite(b)) = (c.group.height(&g, 2).unwrap(), c.group.height(&pg, 2).unwrap()) {
                assert_eq!(b, a + 1);
            }
        }
    }

    #[test]
    fn residue_embedding_is_injective() {
        let h = z(&[4, 2, 3]);
        let mut seen = std::collections::BTreeSet::new();
        for g in h.elements() {
            let r = h.to_residues(&g);
            assert_eq!(h.from_residues(&r), g);
            assert!(seen.insert(r));
        }
    }
}
