//! Finite permutation groups and their subgroup lattice.
//!
//! A [`PermGroup`] enumerates its elements once (identity at index 0) and
//! subgroups are bitsets over that element table. The distance of `S` from
//! `F` is the index `[S : S ∩ F]`; the increment is
//! `S^F = ⋂_{s ∈ S} (SF)^s` with `X^s = s⁻¹ X s`. Γ acts by conjugation with
//! permutations that normalize the ambient group.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::seq::IteratorRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::engine::{Ambient, Closed};
use crate::error::{Error, Result};
use crate::perm::Perm;

pub const DEFAULT_MAX_ELEMENTS: usize = 100_000;

// Groups up to this order get a full multiplication table.
const TABLE_LIMIT: usize = 1024;

#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    table: Option<Vec<u32>>,
    inverse: Vec<usize>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for PermGroup {}

impl PermGroup {
    /// Enumerates the group generated by `generators` acting on `0..degree`.
    pub fn generate(degree: usize, generators: Vec<Perm>, max_elements: usize) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::Invalid(format!("generator {g:?} does not have degree {degree}")));
        }
        let mut elements = vec![Perm::identity(degree)];
        let mut index = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let mut next = 0;
        while next < elements.len() {
            for g in &generators {
                let y = elements[next].compose(g);
                if !index.contains_key(&y) {
                    if elements.len() >= max_elements {
                        return Err(Error::ElementCapExceeded { cap: max_elements });
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
            next += 1;
        }
        let inverse = elements.iter().map(|e| index[&e.inverse()]).collect();
        let order = elements.len();
        let table = (order <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(order * order);
            for a in &elements {
                for b in &elements {
                    t.push(index[&a.compose(b)] as u32);
                }
            }
            t
        });
        Ok(PermGroup {
            degree,
            generators,
            elements,
            index,
            table,
            inverse,
        })
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Perm::from_cycles(n, &[&[0, 1]]).unwrap());
            let cycle: Vec<u32> = (0..n as u32).collect();
            gens.push(Perm::from_cycles(n, &[&cycle]).unwrap());
        }
        PermGroup::generate(n, gens, usize::MAX).unwrap()
    }

    pub fn alternating(n: usize) -> Self {
        let gens = (2..n)
            .map(|k| Perm::from_cycles(n, &[&[0, 1, k as u32]]).unwrap())
            .collect();
        PermGroup::generate(n, gens, usize::MAX).unwrap()
    }

    pub fn cyclic(n: usize) -> Self {
        let cycle: Vec<u32> = (0..n as u32).collect();
        PermGroup::generate(n, vec![Perm::from_cycles(n, &[&cycle]).unwrap()], usize::MAX).unwrap()
    }

    /// Symmetries of a regular `n`-gon on its vertices.
    pub fn dihedral(n: usize) -> Self {
        let rotation = Perm::from_usize(&(0..n).map(|i| (i + 1) % n).collect::<Vec<_>>()).unwrap();
        let reflection = Perm::from_usize(&(0..n).map(|i| (n - i) % n).collect::<Vec<_>>()).unwrap();
        PermGroup::generate(n, vec![rotation, reflection], usize::MAX).unwrap()
    }

    /// The Klein four-group acting regularly on four points.
    pub fn klein_four() -> Self {
        let a = Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap();
        let b = Perm::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap();
        PermGroup::generate(4, vec![a, b], usize::MAX).unwrap()
    }

    /// The quaternion group acting regularly on eight points.
    pub fn quaternion() -> Self {
        // Points 0..8 encode ±1, ±i, ±j, ±k; generators are left multiplication by i and j.
        let i = Perm::from_cycles(8, &[&[0, 2, 1, 3], &[4, 6, 5, 7]]).unwrap();
        let j = Perm::from_cycles(8, &[&[0, 4, 1, 5], &[2, 7, 3, 6]]).unwrap();
        PermGroup::generate(8, vec![i, j], usize::MAX).unwrap()
    }

    /// Direct product acting on the disjoint union of the point sets.
    pub fn direct_product(a: &PermGroup, b: &PermGroup) -> Self {
        let n = a.degree + b.degree;
        let lift_left = |p: &Perm| {
            let mut v: Vec<u32> = p.images().to_vec();
            v.extend(a.degree as u32..n as u32);
            Perm::new(v).unwrap()
        };
        let lift_right = |p: &Perm| {
            let mut v: Vec<u32> = (0..a.degree as u32).collect();
            v.extend(p.images().iter().map(|&x| x + a.degree as u32));
            Perm::new(v).unwrap()
        };
        let gens = a
            .generators
            .iter()
            .map(lift_left)
            .chain(b.generators.iter().map(lift_right))
            .collect();
        PermGroup::generate(n, gens, usize::MAX).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn index_of_element(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.index[&self.elements[a].compose(&self.elements[b])],
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.order());
        members.insert(0);
        Subgroup { members }
    }

    pub fn whole(&self) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.order());
        members.insert_range(..);
        Subgroup { members }
    }

    /// Smallest subgroup containing the elements `gens`.
    pub fn closure(&self, gens: &[usize]) -> Result<Subgroup> {
        if let Some(&g) = gens.iter().find(|&&g| g >= self.order()) {
            return Err(Error::Invalid(format!(
                "element index {g} outside group of order {}",
                self.order()
            )));
        }
        let mut members = FixedBitSet::with_capacity(self.order());
        members.insert(0);
        let mut list = vec![0usize];
        let mut next = 0;
        while next < list.len() {
            let x = list[next];
            next += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !members.put(y) {
                    list.push(y);
                }
            }
        }
        Ok(Subgroup { members })
    }

    /// Subgroup generated by permutations, which must lie in the group.
    pub fn subgroup_from_perms(&self, gens: &[Perm]) -> Result<Subgroup> {
        let idx = gens
            .iter()
            .map(|p| {
                self.index_of_element(p)
                    .ok_or_else(|| Error::Invalid(format!("{p:?} is not an element of the ambient group")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.closure(&idx)
    }

    /// Builds a subgroup from an explicit member list, checking closure.
    pub fn subgroup_from_members(&self, members: &[usize]) -> Result<Subgroup> {
        let mut bits = FixedBitSet::with_capacity(self.order());
        for &m in members {
            if m >= self.order() {
                return Err(Error::Invalid(format!("element index {m} out of range")));
            }
            bits.insert(m);
        }
        if !self.is_subgroup(&bits) {
            return Err(Error::Invalid("member set is not a subgroup".into()));
        }
        Ok(Subgroup { members: bits })
    }

    pub fn is_subgroup(&self, bits: &FixedBitSet) -> bool {
        bits.contains(0) && bits.ones().all(|a| bits.ones().all(|b| bits.contains(self.mul(a, b))))
    }

    pub fn meet(&self, s: &Subgroup, t: &Subgroup) -> Subgroup {
        let mut members = s.members.clone();
        members.intersect_with(&t.members);
        Subgroup { members }
    }

    /// The subgroup generated by `s ∪ t`.
    pub fn join(&self, s: &Subgroup, t: &Subgroup) -> Subgroup {
        let gens: Vec<usize> = s.members.union(&t.members).collect();
        self.closure(&gens).expect("indices are in range")
    }

    /// `[S : S ∩ T]`, counted as left cosets `s(S ∩ T)`.
    pub fn index_of(&self, s: &Subgroup, t: &Subgroup) -> u64 {
        let common: Vec<usize> = s.members.intersection(&t.members).collect();
        let mut seen = FixedBitSet::with_capacity(self.order());
        let mut cosets = 0;
        for x in s.members.ones() {
            if seen.contains(x) {
                continue;
            }
            cosets += 1;
            for &h in &common {
                seen.insert(self.mul(x, h));
            }
        }
        cosets
    }

    /// `SF = { s·f }` as an element set.
    pub fn product_set(&self, s: &Subgroup, f: &Subgroup) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.order());
        for a in s.members.ones() {
            for b in f.members.ones() {
                out.insert(self.mul(a, b));
            }
        }
        out
    }

    /// `S^F = ⋂ (SF)^s` over representatives `s` of the right cosets `(S ∩ F)s`.
    ///
    /// `(SF)^s = s⁻¹SFs = SFs`, and `SFhs = SFs` for `h ∈ S ∩ F`, so one
    /// representative per right coset suffices.
    pub fn increment(&self, s: &Subgroup, f: &Subgroup) -> Result<Subgroup> {
        let sf: Vec<usize> = self.product_set(s, f).ones().collect();
        let common: Vec<usize> = s.members.intersection(&f.members).collect();
        let mut seen = FixedBitSet::with_capacity(self.order());
        let mut acc: Option<FixedBitSet> = None;
        for rep in s.members.ones() {
            if seen.contains(rep) {
                continue;
            }
            for &h in &common {
                seen.insert(self.mul(h, rep));
            }
            let mut shifted = FixedBitSet::with_capacity(self.order());
            for &x in &sf {
                shifted.insert(self.mul(x, rep));
            }
            acc = Some(match acc {
                None => shifted,
                Some(mut a) => {
                    a.intersect_with(&shifted);
                    a
                }
            });
        }
        let members = acc.expect("a subgroup contains the identity");
        if !self.is_subgroup(&members) || !s.members.is_subset(&members) {
            return Err(Error::Internal("group increment is not a supergroup of S".into()));
        }
        Ok(Subgroup { members })
    }

    /// `⋂_{s ∈ S} s⁻¹(SF)s` evaluated literally, without coset representatives.
    pub fn increment_full(&self, s: &Subgroup, f: &Subgroup) -> FixedBitSet {
        let sf: Vec<usize> = self.product_set(s, f).ones().collect();
        let mut acc = FixedBitSet::with_capacity(self.order());
        acc.insert_range(..);
        for x in s.members.ones() {
            let xi = self.inv(x);
            let mut conj = FixedBitSet::with_capacity(self.order());
            for &y in &sf {
                conj.insert(self.mul(self.mul(xi, y), x));
            }
            acc.intersect_with(&conj);
        }
        acc
    }

    /// True when `gamma` conjugates the group onto itself.
    pub fn normalized_by(&self, gamma: &Perm) -> bool {
        gamma.degree() == self.degree
            && self
                .generators
                .iter()
                .all(|g| self.index.contains_key(&gamma.conjugate(g)))
    }

    /// `γSγ⁻¹`.
    pub fn conjugate_action(&self, gamma: &Perm, s: &Subgroup) -> Result<Subgroup> {
        if !self.normalized_by(gamma) {
            return Err(Error::InvalidAction(format!(
                "{gamma:?} does not normalize the ambient group"
            )));
        }
        Ok(self.conjugate_unchecked(gamma, s))
    }

    fn conjugate_unchecked(&self, gamma: &Perm, s: &Subgroup) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.order());
        for x in s.members.ones() {
            members.insert(self.index[&gamma.conjugate(&self.elements[x])]);
        }
        Subgroup { members }
    }

    pub fn is_normal(&self, s: &Subgroup) -> bool {
        self.generators.iter().all(|g| self.conjugate_unchecked(g, s) == *s)
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generators_of(&self, s: &Subgroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = self.trivial_subgroup();
        for x in s.members.ones() {
            if !current.contains(x) {
                gens.push(x);
                current = self.closure(&gens).expect("indices are in range");
            }
        }
        gens
    }
}

/// A subgroup of an ambient [`PermGroup`], as a bitset over its element table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: FixedBitSet,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn members(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.ones()).finish()
    }
}

#[derive(Clone, Debug)]
pub struct GroupLattice {
    pub group: Arc<PermGroup>,
}

impl Ambient for GroupLattice {
    type Elem = Subgroup;
    type Action = Perm;

    fn meet(&self, x: &Subgroup, y: &Subgroup) -> Subgroup {
        self.group.meet(x, y)
    }

    fn join(&self, x: &Subgroup, y: &Subgroup) -> Subgroup {
        self.group.join(x, y)
    }

    fn measure(&self, x: &Subgroup, y: &Subgroup) -> u64 {
        self.group.index_of(x, y)
    }

    fn increment(&self, s: &Subgroup, f: &Subgroup) -> Subgroup {
        self.group
            .increment(s, f)
            .expect("increment of subgroups is a subgroup")
    }

    fn act(&self, g: &Perm, x: &Subgroup) -> Subgroup {
        self.group.conjugate_unchecked(g, x)
    }

    fn level_cap(&self) -> u64 {
        self.group.order() as u64
    }

    fn random_sub_element(&self, x: &Subgroup, rng: &mut ChaCha8Rng) -> Subgroup {
        let count = rng.gen_range(0..=2);
        let gens: Vec<usize> = x.members.ones().choose_multiple(rng, count);
        self.group.closure(&gens).expect("indices are in range")
    }
}

/// Seeds and Γ generators for the group case.
#[derive(Clone, Debug)]
pub struct GroupInstance {
    pub group: Arc<PermGroup>,
    pub seeds: Vec<Subgroup>,
    pub gamma: Vec<Perm>,
}

impl GroupInstance {
    pub fn new(group: Arc<PermGroup>, seeds: Vec<Subgroup>, gamma: Vec<Perm>) -> Result<Self> {
        if seeds.is_empty() {
            return Err(Error::Empty("group instance needs at least one seed"));
        }
        if let Some(s) = seeds.iter().find(|s| s.members.len() != group.order()) {
            return Err(Error::Shape(format!("seed {s:?} belongs to a different ambient group")));
        }
        if let Some(g) = gamma.iter().find(|g| !group.normalized_by(g)) {
            return Err(Error::InvalidAction(format!(
                "{g:?} does not normalize the ambient group"
            )));
        }
        Ok(GroupInstance { group, seeds, gamma })
    }

    /// Γ generated by conjugation with the ambient group's own generators.
    pub fn inner(group: Arc<PermGroup>, seeds: Vec<Subgroup>) -> Result<Self> {
        let gamma = group.generators().to_vec();
        GroupInstance::new(group, seeds, gamma)
    }

    pub fn close(&self, max_orbit: usize) -> Result<Closed<GroupLattice>> {
        Closed::new(
            GroupLattice {
                group: self.group.clone(),
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

    fn t(n: usize, a: u32, b: u32) -> Perm {
        Perm::from_cycles(n, &[&[a, b]]).unwrap()
    }

    fn sub(g: &PermGroup, gens: &[Perm]) -> Subgroup {
        g.subgroup_from_perms(gens).unwrap()
    }

    fn perms(g: &PermGroup, s: &FixedBitSet) -> Vec<Perm> {
        let mut v: Vec<Perm> = s.ones().map(|i| g.element(i).clone()).collect();
        v.sort();
        v
    }

    #[test]
    fn named_group_orders() {
        assert_eq!(PermGroup::symmetric(3).order(), 6);
        assert_eq!(PermGroup::symmetric(4).order(), 24);
        assert_eq!(PermGroup::alternating(4).order(), 12);
        assert_eq!(PermGroup::dihedral(4).order(), 8);
        assert_eq!(PermGroup::dihedral(6).order(), 12);
        assert_eq!(PermGroup::klein_four().order(), 4);
        assert_eq!(PermGroup::quaternion().order(), 8);
        assert_eq!(PermGroup::cyclic(5).order(), 5);
        let v = PermGroup::klein_four();
        assert_eq!(PermGroup::direct_product(&v, &PermGroup::cyclic(2)).order(), 8);
        assert_eq!(PermGroup::symmetric(1).order(), 1);
    }

    #[test]
    fn identity_is_element_zero() {
        let g = PermGroup::symmetric(4);
        assert!(g.element(0).is_identity());
        for a in 0..g.order() {
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
    }

    #[test]
    fn element_cap_is_enforced() {
        let gens = PermGroup::symmetric(5).generators().to_vec();
        assert_eq!(
            PermGroup::generate(5, gens, 100),
            Err(Error::ElementCapExceeded { cap: 100 })
        );
    }

    #[test]
    fn closure_examples() {
        let g = PermGroup::symmetric(3);
        assert_eq!(g.closure(&[]).unwrap(), g.trivial_subgroup());
        assert_eq!(sub(&g, &[t(3, 0, 1)]).order(), 2);
        assert_eq!(sub(&g, &[t(3, 0, 1), t(3, 0, 2)]), g.whole());
        assert!(g.closure(&[99]).is_err());
    }

    #[test]
    fn index_examples() {
        let g = PermGroup::symmetric(3);
        let h = sub(&g, &[t(3, 0, 1)]);
        assert_eq!(g.index_of(&h, &g.whole()), 1);
        assert_eq!(g.index_of(&g.whole(), &h), 3);
        assert_eq!(g.index_of(&h, &g.trivial_subgroup()), 2);
    }

    #[test]
    fn product_set_examples() {
        let g = PermGroup::symmetric(3);
        let s = sub(&g, &[t(3, 0, 1)]);
        let f = sub(&g, &[t(3, 0, 2)]);
        let expected = vec![
            Perm::identity(3),
            t(3, 0, 2),
            t(3, 0, 1),
            Perm::from_cycles(3, &[&[0, 2, 1]]).unwrap(),
        ];
        let mut expected = expected;
        expected.sort();
        assert_eq!(perms(&g, &g.product_set(&s, &f)), expected);
        assert_eq!(g.product_set(&g.trivial_subgroup(), &f), f.members);
        assert_eq!(g.product_set(&s, &g.trivial_subgroup()), s.members);
    }

    #[test]
    fn increment_examples() {
        let g = PermGroup::symmetric(3);
        let s = sub(&g, &[t(3, 0, 1)]);
        let f = sub(&g, &[t(3, 0, 2)]);
        assert_eq!(g.increment(&s, &f).unwrap(), s);
        assert_eq!(g.increment(&f, &f).unwrap(), f);
        assert_eq!(g.increment(&g.trivial_subgroup(), &f).unwrap(), f);
        // (SF)^{(12)} = {e, (23), (12), (123)}
        let conj: FixedBitSet = {
            let x = g.index_of_element(&t(3, 0, 1)).unwrap();
            let mut out = FixedBitSet::with_capacity(6);
            for y in g.product_set(&s, &f).ones() {
                out.insert(g.mul(g.mul(g.inv(x), y), x));
            }
            out
        };
        let mut expected = vec![
            Perm::identity(3),
            t(3, 1, 2),
            t(3, 0, 1),
            Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap(),
        ];
        expected.sort();
        assert_eq!(perms(&g, &conj), expected);
    }

    #[test]
    fn increment_of_subgroup_of_f_is_f() {
        for g in [PermGroup::symmetric(3), PermGroup::symmetric(4)] {
            let subs = crate::oracle::all_subgroups(&g, 96).unwrap();
            for f in &subs {
                for s in subs.iter().filter(|s| s.is_subgroup_of(f)) {
                    assert_eq!(&g.increment(s, f).unwrap(), f);
                }
            }
        }
    }

    #[test]
    fn increment_matches_literal_intersection() {
        for g in [PermGroup::symmetric(4), PermGroup::dihedral(6), PermGroup::quaternion()] {
            let subs = crate::oracle::all_subgroups(&g, 96).unwrap();
            for s in &subs {
                for f in &subs {
                    let fast = g.increment(s, f).unwrap();
                    assert_eq!(fast.members, g.increment_full(s, f));
                    // The increment is {x : xS ⊆ SF}.
                    let sf = g.product_set(s, f);
                    for x in 0..g.order() {
                        let inside = s.members.ones().all(|y| sf.contains(g.mul(x, y)));
                        assert_eq!(inside, fast.contains(x));
                    }
                }
            }
        }
    }

    #[test]
    fn lagrange_consistency() {
        let g = PermGroup::symmetric(4);
        let subs = crate::oracle::all_subgroups(&g, 96).unwrap();
        for s in &subs {
            for u in &subs {
                assert_eq!(g.index_of(s, u) as usize * g.meet(s, u).order(), s.order());
            }
        }
    }

    #[test]
    fn conjugation_examples() {
        let g = PermGroup::symmetric(3);
        let s = sub(&g, &[t(3, 0, 1)]);
        assert_eq!(g.conjugate_action(&Perm::identity(3), &s).unwrap(), s);
        let c = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        assert_eq!(g.conjugate_action(&c, &s).unwrap(), sub(&g, &[t(3, 1, 2)]));

        // The central element of D4 fixes every subgroup.
        let d4 = PermGroup::dihedral(4);
        let z = Perm::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap();
        for h in crate::oracle::all_subgroups(&d4, 96).unwrap() {
            assert_eq!(d4.conjugate_action(&z, &h).unwrap(), h);
        }

        // A transposition normalizes A4 but not the rotation group of the square.
        let a4 = PermGroup::alternating(4);
        assert!(a4.normalized_by(&t(4, 0, 1)));
        let c4 = PermGroup::cyclic(4);
        assert!(matches!(
            c4.conjugate_action(&t(4, 0, 1), &c4.trivial_subgroup()),
            Err(Error::InvalidAction(_))
        ));
        assert!(c4.normalized_by(&t(4, 1, 3)));
    }

    #[test]
    fn normality() {
        let g = PermGroup::symmetric(3);
        let a3 = sub(&g, &[Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap()]);
        assert!(g.is_normal(&a3));
        assert!(!g.is_normal(&sub(&g, &[t(3, 0, 1)])));
    }

    #[test]
    fn generating_sets_regenerate() {
        let g = PermGroup::symmetric(4);
        for s in crate::oracle::all_subgroups(&g, 96).unwrap() {
            let gens = g.generators_of(&s);
            assert_eq!(g.closure(&gens).unwrap(), s);
            assert!(gens.len() <= 3);
        }
    }

    #[test]
    fn orbit_of_transposition_under_rotation() {
        let g = Arc::new(PermGroup::symmetric(3));
        let seed = sub(&g, &[t(3, 0, 1)]);
        let c = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let inst = GroupInstance::new(g.clone(), vec![seed], vec![c])
            .unwrap()
            .close(100)
            .unwrap();
        let mut got: Vec<Subgroup> = inst.family().to_vec();
        got.sort();
        let mut expected: Vec<Subgroup> = crate::oracle::all_subgroups(&g, 96)
            .unwrap()
            .into_iter()
            .filter(|h| h.order() == 2)
            .collect();
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn gamma_must_normalize() {
        let g = Arc::new(PermGroup::cyclic(4));
        let seed = g.trivial_subgroup();
        assert!(matches!(
            GroupInstance::new(g, vec![seed], vec![t(4, 0, 1)]),
            Err(Error::InvalidAction(_))
        ));
    }
}
