//! Brute-force enumerators used to certify engine outputs.
//!
//! Every enumerator refuses inputs above its cap instead of truncating.

use std::collections::{HashSet, VecDeque};

use crate::abstract_lattice::AbstractLattice;
use crate::engine::{is_gamma_fixed, CloseKnitInstance, Closed};
use crate::error::{Error, Result};
use crate::groups::{GroupLattice, PermGroup, Subgroup};
use crate::perm::{orbits, Perm};
use crate::sets::{FiniteSubset, SetLattice};
use crate::vect::{SubspaceBasis, VectLattice};

pub const MAX_POINTS: usize = 24;
pub const MAX_ORBITS: usize = 20;
pub const MAX_GROUP_ORDER: usize = 96;
pub const MAX_VECTORS: usize = 1024;
pub const MAX_SUBSPACES: usize = 200_000;

/// All Γ-invariant subsets of `0..carrier`, i.e. all unions of Γ-orbits.
pub fn invariant_subsets(carrier: usize, gamma: &[Perm]) -> Result<Vec<FiniteSubset>> {
    if let Some(g) = gamma.iter().find(|g| g.degree() != carrier) {
        return Err(Error::InvalidAction(format!("{g:?} does not act on {carrier} points")));
    }
    let orbs = orbits(carrier, gamma);
    if carrier > MAX_POINTS && orbs.len() > MAX_ORBITS {
        return Err(Error::EnumerationCapExceeded(format!(
            "{} orbits on {carrier} points",
            orbs.len()
        )));
    }
    if orbs.len() > MAX_POINTS {
        return Err(Error::EnumerationCapExceeded(format!("{} orbits", orbs.len())));
    }
    Ok((0u64..1 << orbs.len())
        .map(|mask| {
            let pts: Vec<usize> = orbs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .flat_map(|(_, o)| o.iter().copied())
                .collect();
            FiniteSubset::from_members(carrier, &pts).expect("orbit points are in range")
        })
        .collect())
}

/// Every subgroup of `g`: cyclic subgroups, then repeated joins with cyclic subgroups.
pub fn all_subgroups(g: &PermGroup, cap: usize) -> Result<Vec<Subgroup>> {
    if g.order() > cap.min(MAX_GROUP_ORDER) {
        return Err(Error::EnumerationCapExceeded(format!(
            "group of order {} exceeds the subgroup-enumeration cap",
            g.order()
        )));
    }
    let mut cyclic: Vec<Subgroup> = Vec::new();
    let mut seen = HashSet::new();
    for x in 0..g.order() {
        let c = g.closure(&[x])?;
        if seen.insert(c.clone()) {
            cyclic.push(c);
        }
    }
    let mut all = cyclic.clone();
    let mut queue: VecDeque<Subgroup> = cyclic.iter().cloned().collect();
    while let Some(s) = queue.pop_front() {
        for c in &cyclic {
            if c.is_subgroup_of(&s) {
                continue;
            }
            let j = g.join(&s, c);
            if seen.insert(j.clone()) {
                all.push(j.clone());
                queue.push_back(j);
            }
        }
    }
    all.sort_by_key(|s| (s.order(), s.members()));
    Ok(all)
}

/// Every subspace of `F_p^dim`, when there are at most `MAX_VECTORS` vectors.
pub fn all_subspaces(p: u32, dim: usize) -> Result<Vec<SubspaceBasis>> {
    let vectors = SubspaceBasis::full(p, dim).vectors(MAX_VECTORS)?;
    let zero = SubspaceBasis::zero(p, dim);
    let mut seen = HashSet::from([zero.clone()]);
    let mut out = vec![zero.clone()];
    let mut queue = VecDeque::from([zero]);
    while let Some(s) = queue.pop_front() {
        for v in vectors.iter().filter(|v| !s.contains(v)) {
            let t = s.sum(&SubspaceBasis::new(p, dim, vec![v.clone()])?)?;
            if seen.insert(t.clone()) {
                if out.len() >= MAX_SUBSPACES {
                    return Err(Error::EnumerationCapExceeded(format!(
                        "more than {MAX_SUBSPACES} subspaces of F_{p}^{dim}"
                    )));
                }
                out.push(t.clone());
                queue.push_back(t);
            }
        }
    }
    out.sort_by_key(|s| (s.rank(), s.clone()));
    Ok(out)
}

/// Candidates fixed by Γ whose measure against every family member, both ways, is at most `bound`.
pub fn feasible<I: CloseKnitInstance>(inst: &I, candidates: Vec<I::Elem>, bound: u64) -> Vec<I::Elem> {
    candidates
        .into_iter()
        .filter(|e| {
            is_gamma_fixed(inst, e)
                && inst
                    .family()
                    .iter()
                    .all(|f| inst.measure(e, f) <= bound && inst.measure(f, e) <= bound)
        })
        .collect()
}

pub fn feasible_sets(inst: &Closed<SetLattice>, bound: u64) -> Result<Vec<FiniteSubset>> {
    let candidates = invariant_subsets(inst.ambient().carrier_size, inst.gamma())?;
    Ok(feasible(inst, candidates, bound))
}

pub fn feasible_subgroups(inst: &Closed<GroupLattice>, bound: u64) -> Result<Vec<Subgroup>> {
    let candidates = all_subgroups(&inst.ambient().group, MAX_GROUP_ORDER)?;
    Ok(feasible(inst, candidates, bound))
}

pub fn feasible_subspaces(inst: &Closed<VectLattice>, bound: u64) -> Result<Vec<SubspaceBasis>> {
    let VectLattice { p, dim } = *inst.ambient();
    Ok(feasible(inst, all_subspaces(p, dim)?, bound))
}

pub fn feasible_abstract(inst: &AbstractLattice, bound: u64) -> Vec<usize> {
    feasible(inst, (0..inst.size()).collect(), bound)
}
