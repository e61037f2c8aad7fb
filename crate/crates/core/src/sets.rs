//! Subsets of a finite carrier `Ω = {0, …, n-1}` under intersection.
//!
//! The distance of `S` from `f_a` is `|S ∖ f_a|` and the increment is
//! `S ∪ f_a`; Γ acts by permuting points.

use std::fmt;

use fixedbitset::FixedBitSet;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::engine::{Ambient, Closed};
use crate::error::{Error, Result};
use crate::perm::Perm;

pub const MAX_CARRIER: usize = 4096;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteSubset {
    members: FixedBitSet,
}

impl FiniteSubset {
    pub fn empty(carrier_size: usize) -> Self {
        FiniteSubset {
            members: FixedBitSet::with_capacity(carrier_size),
        }
    }

    pub fn full(carrier_size: usize) -> Self {
        let mut members = FixedBitSet::with_capacity(carrier_size);
        members.insert_range(..);
        FiniteSubset { members }
    }

    pub fn from_members(carrier_size: usize, members: &[usize]) -> Result<Self> {
        let mut bits = FixedBitSet::with_capacity(carrier_size);
        for &m in members {
            if m >= carrier_size {
                return Err(Error::Invalid(format!(
                    "point {m} outside carrier of size {carrier_size}"
                )));
            }
            bits.insert(m);
        }
        Ok(FiniteSubset { members: bits })
    }

    pub fn carrier_size(&self) -> usize {
        self.members.len()
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    /// Members in increasing order.
    pub fn to_vec(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    pub fn intersection(&self, other: &FiniteSubset) -> FiniteSubset {
        let mut members = self.members.clone();
        members.intersect_with(&other.members);
        FiniteSubset { members }
    }

    pub fn union(&self, other: &FiniteSubset) -> FiniteSubset {
        let mut members = self.members.clone();
        members.union_with(&other.members);
        FiniteSubset { members }
    }

    pub fn difference_count(&self, other: &FiniteSubset) -> usize {
        self.members.difference(&other.members).count()
    }

    pub fn is_subset(&self, other: &FiniteSubset) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn image(&self, g: &Perm) -> FiniteSubset {
        let mut members = FixedBitSet::with_capacity(self.carrier_size());
        for x in self.members.ones() {
            members.insert(g.apply(x));
        }
        FiniteSubset { members }
    }
}

impl fmt::Debug for FiniteSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.ones()).finish()
    }
}

/// `(|S ∖ T|, |T ∖ S|)`.
pub fn measure_set(s: &FiniteSubset, t: &FiniteSubset) -> Result<(u64, u64)> {
    if s.carrier_size() != t.carrier_size() {
        return Err(Error::Shape(format!(
            "carriers of size {} and {} differ",
            s.carrier_size(),
            t.carrier_size()
        )));
    }
    Ok((s.difference_count(t) as u64, t.difference_count(s) as u64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SetLattice {
    pub carrier_size: usize,
}

impl Ambient for SetLattice {
    type Elem = FiniteSubset;
    type Action = Perm;

    fn meet(&self, x: &FiniteSubset, y: &FiniteSubset) -> FiniteSubset {
        x.intersection(y)
    }

    fn join(&self, x: &FiniteSubset, y: &FiniteSubset) -> FiniteSubset {
        x.union(y)
    }

    fn measure(&self, x: &FiniteSubset, y: &FiniteSubset) -> u64 {
        x.difference_count(y) as u64
    }

    fn increment(&self, s: &FiniteSubset, f: &FiniteSubset) -> FiniteSubset {
        s.union(f)
    }

    fn act(&self, g: &Perm, x: &FiniteSubset) -> FiniteSubset {
        x.image(g)
    }

    fn level_cap(&self) -> u64 {
        self.carrier_size as u64
    }

    fn random_sub_element(&self, x: &FiniteSubset, rng: &mut ChaCha8Rng) -> FiniteSubset {
        let mut members = FixedBitSet::with_capacity(self.carrier_size);
        for p in x.members.ones() {
            if rng.gen_bool(0.5) {
                members.insert(p);
            }
        }
        FiniteSubset { members }
    }
}

/// Seeds and Γ generators for the set case.
#[derive(Clone, Debug)]
pub struct SetInstance {
    pub carrier_size: usize,
    pub seeds: Vec<FiniteSubset>,
    pub gamma: Vec<Perm>,
}

impl SetInstance {
    pub fn new(carrier_size: usize, seeds: Vec<FiniteSubset>, gamma: Vec<Perm>) -> Result<Self> {
        if carrier_size > MAX_CARRIER {
            return Err(Error::ElementCapExceeded { cap: MAX_CARRIER });
        }
        if seeds.is_empty() {
            return Err(Error::Empty("set instance needs at least one seed"));
        }
        if let Some(s) = seeds.iter().find(|s| s.carrier_size() != carrier_size) {
            return Err(Error::Shape(format!(
                "seed {s:?} is not over a carrier of size {carrier_size}"
            )));
        }
        if let Some(g) = gamma.iter().find(|g| g.degree() != carrier_size) {
            return Err(Error::InvalidAction(format!(
                "permutation {g:?} does not act on a carrier of size {carrier_size}"
            )));
        }
        Ok(SetInstance {
            carrier_size,
            seeds,
            gamma,
        })
    }

    pub fn close(&self, max_orbit: usize) -> Result<Closed<SetLattice>> {
        Closed::new(
            SetLattice {
                carrier_size: self.carrier_size,
            },
            &self.seeds,
            self.gamma.clone(),
            max_orbit,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::CloseKnitInstance;
    use proptest::prelude::*;

    fn set(n: usize, xs: &[usize]) -> FiniteSubset {
        FiniteSubset::from_members(n, xs).unwrap()
    }

    #[test]
    fn measure_examples() {
        let s = set(6, &[0, 1, 2]);
        assert_eq!(measure_set(&s, &s).unwrap(), (0, 0));
        assert_eq!(measure_set(&s, &set(6, &[1, 2, 3])).unwrap(), (1, 1));
        assert_eq!(measure_set(&set(6, &[]), &set(6, &[0])).unwrap(), (0, 1));
        assert!(measure_set(&set(3, &[]), &set(4, &[])).is_err());
    }

    #[test]
    fn delta_and_increment_examples() {
        let inst = SetInstance::new(4, vec![set(4, &[1, 2])], vec![])
            .unwrap()
            .close(10)
            .unwrap();
        assert_eq!(inst.delta(&set(4, &[0, 2]), 0).to_string(), "(1)");
        assert!(inst.delta(&set(4, &[2]), 0).is_zero());
        assert_eq!(inst.increment(&set(4, &[]), 0), set(4, &[1, 2]));
        assert_eq!(inst.increment(&set(4, &[1, 2, 3]), 0), set(4, &[1, 2, 3]));

        let empty = SetInstance::new(3, vec![set(3, &[])], vec![])
            .unwrap()
            .close(10)
            .unwrap();
        assert_eq!(empty.delta(&FiniteSubset::full(3), 0).to_string(), "(3)");

        let inst = SetInstance::new(6, vec![set(6, &[0, 1, 2])], vec![])
            .unwrap()
            .close(10)
            .unwrap();
        assert_eq!(inst.increment(&set(6, &[1, 2]), 0), set(6, &[0, 1, 2]));
    }

    #[test]
    fn instance_validation() {
        assert!(SetInstance::new(3, vec![], vec![]).is_err());
        assert!(SetInstance::new(3, vec![set(4, &[])], vec![]).is_err());
        assert!(matches!(
            SetInstance::new(3, vec![set(3, &[])], vec![Perm::identity(4)]),
            Err(Error::InvalidAction(_))
        ));
        assert!(matches!(
            SetInstance::new(5000, vec![set(5000, &[])], vec![]),
            Err(Error::ElementCapExceeded { .. })
        ));
    }

    // Condition (3) and monotonicity hold for every pair of subsets of a 5-point carrier.
    #[test]
    fn close_knit_conditions_exhaustive() {
        let n = 5;
        let all: Vec<FiniteSubset> = (0u32..1 << n)
            .map(|mask| set(n, &(0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>()))
            .collect();
        let lattice = SetLattice { carrier_size: n };
        for f in &all {
            for s in &all {
                for t in all.iter().filter(|t| t.is_subset(s)) {
                    let (dt, ds) = (lattice.measure(t, f), lattice.measure(s, f));
                    assert!(dt <= ds);
                    assert!(s.is_subset(&lattice.increment(s, f)));
                    if dt == ds {
                        assert_eq!(lattice.increment(t, f), lattice.increment(s, f));
                    }
                }
            }
        }
    }

    fn subset(n: usize) -> impl Strategy<Value = FiniteSubset> {
        prop::collection::vec(any::<bool>(), n).prop_map(move |bits| {
            let xs: Vec<usize> = bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect();
            FiniteSubset::from_members(n, &xs).unwrap()
        })
    }

    proptest! {
        #[test]
        fn difference_is_size_minus_overlap(s in subset(12), t in subset(12)) {
            let (fwd, _) = measure_set(&s, &t).unwrap();
            prop_assert_eq!(fwd as usize, s.len() - s.intersection(&t).len());
        }

        #[test]
        fn permutations_are_lattice_automorphisms(
            s in subset(8), t in subset(8),
            images in Just((0u32..8).collect::<Vec<_>>()).prop_shuffle(),
        ) {
            let g = Perm::new(images).unwrap();
            prop_assert_eq!(s.intersection(&t).image(&g), s.image(&g).intersection(&t.image(&g)));
            prop_assert_eq!(measure_set(&s.image(&g), &t.image(&g)).unwrap(), measure_set(&s, &t).unwrap());
        }
    }
}
