//! The Galois-group side of the fixed-field construction.
//!
//! Inputs are subgroups `H_F` of a finite group standing for the absolute
//! Galois group, and automorphisms Γ normalizing it. The group engine returns a
//! Γ-invariant subgroup `H` commensurable with every `H_F`; the invariant field
//! is then `Fix(H)`, reported only through subgroup indices.

use std::fmt;
use std::sync::Arc;

use crate::engine::{solve, Certificate, CloseKnitInstance, SolveOptions};
use crate::error::Result;
use crate::groups::{GroupInstance, PermGroup, Subgroup};
use crate::perm::Perm;

#[derive(Clone, Debug)]
pub struct GaloisInstance {
    pub group: Arc<PermGroup>,
    pub seeds: Vec<Subgroup>,
    pub gamma: Vec<Perm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberIndices {
    /// `[H_F : H_F ∩ H]`.
    pub member_side: u64,
    /// `[H : H_F ∩ H]`.
    pub invariant_side: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedFieldDescriptor {
    /// `[G : H]`, the degree of `Fix(H)` over the fixed field of `G`.
    pub index_in_group: u64,
    pub members: Vec<MemberIndices>,
    pub normal_in_group: bool,
    pub note: &'static str,
}

pub const CLOSEDNESS_NOTE: &str =
    "N = Fix(H); H is closed automatically since every subgroup of a finite group is closed";

impl fmt::Display for FixedFieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[G:H] = {}", self.index_in_group)?;
        for (i, m) in self.members.iter().enumerate() {
            write!(
                f,
                "; F{i}: [H_F:H_F∩H] = {}, [H:H_F∩H] = {}",
                m.member_side, m.invariant_side
            )?;
        }
        write!(f, "; {}", self.note)
    }
}

#[derive(Clone, Debug)]
pub struct GaloisSolution {
    pub subgroup: Subgroup,
    pub descriptor: FixedFieldDescriptor,
    pub certificate: Certificate<Subgroup>,
}

impl GaloisInstance {
    pub fn new(group: Arc<PermGroup>, seeds: Vec<Subgroup>, gamma: Vec<Perm>) -> Self {
        GaloisInstance { group, seeds, gamma }
    }

    /// Γ = conjugation by the generators of the group.
    pub fn inner(group: Arc<PermGroup>, seeds: Vec<Subgroup>) -> Self {
        let gamma = group.generators().to_vec();
        GaloisInstance { group, seeds, gamma }
    }
}

pub fn solve_galois(inst: &GaloisInstance, max_orbit: usize, opts: &SolveOptions) -> Result<GaloisSolution> {
    let closed = GroupInstance::new(inst.group.clone(), inst.seeds.clone(), inst.gamma.clone())?.close(max_orbit)?;
    let certificate = solve(&closed, opts)?;
    let h = certificate.invariant_element.clone();
    let g = &inst.group;
    let members = closed
        .family()
        .iter()
        .map(|hf| MemberIndices {
            member_side: g.index_of(hf, &h),
            invariant_side: g.index_of(&h, hf),
        })
        .collect();
    let descriptor = FixedFieldDescriptor {
        index_in_group: g.index_of(&g.whole(), &h),
        members,
        normal_in_group: g.is_normal(&h),
        note: CLOSEDNESS_NOTE,
    };
    Ok(GaloisSolution {
        subgroup: h,
        descriptor,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::oracle::{all_subgroups, feasible_subgroups};

    fn cyc(n: usize, c: &[u32]) -> Perm {
        Perm::from_cycles(n, &[c]).unwrap()
    }

    fn sylow_seed(g: &PermGroup) -> Subgroup {
        g.subgroup_from_perms(&[cyc(4, &[0, 1, 2, 3]), cyc(4, &[0, 2])])
            .unwrap()
    }

    #[test]
    fn s3_order_two_seed_gives_trivial_subgroup() {
        let g = Arc::new(PermGroup::symmetric(3));
        let h = g.subgroup_from_perms(&[cyc(3, &[0, 1])]).unwrap();
        let sol = solve_galois(
            &GaloisInstance::inner(g.clone(), vec![h]),
            100,
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(sol.subgroup, g.trivial_subgroup());
        assert!(sol.descriptor.normal_in_group);
        assert_eq!(sol.descriptor.index_in_group, 6);
        assert_eq!(sol.descriptor.members.len(), 3);
        assert!(sol
            .descriptor
            .members
            .iter()
            .all(|m| m.member_side == 2 && m.invariant_side == 1));
    }

    #[test]
    fn trivial_gamma_returns_the_seed() {
        let g = Arc::new(PermGroup::symmetric(4));
        let h = g.subgroup_from_perms(&[cyc(4, &[0, 1, 2])]).unwrap();
        let sol = solve_galois(
            &GaloisInstance::new(g, vec![h.clone()], vec![]),
            100,
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(sol.subgroup, h);
    }

    #[test]
    fn s4_sylow_two_gives_klein_four() {
        let g = Arc::new(PermGroup::symmetric(4));
        let sylow = sylow_seed(&g);
        assert_eq!(sylow.order(), 8);
        let sol = solve_galois(
            &GaloisInstance::inner(g.clone(), vec![sylow]),
            100,
            &SolveOptions::default(),
        )
        .unwrap();
        let v4 = g
            .subgroup_from_perms(&[
                Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap(),
                Perm::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap(),
            ])
            .unwrap();
        assert_eq!(sol.subgroup, v4);
        assert!(sol.descriptor.normal_in_group);
        assert_eq!(sol.descriptor.index_in_group, 6);
        assert_eq!(sol.descriptor.members.len(), 3);
        for m in &sol.descriptor.members {
            assert_eq!((m.member_side, m.invariant_side), (2, 1));
        }
        let inst = GroupInstance::inner(g.clone(), vec![sylow_seed(&g)])
            .unwrap()
            .close(10)
            .unwrap();
        let feasible = feasible_subgroups(&inst, sol.certificate.bound).unwrap();
        assert_eq!(sol.certificate.bound, 2);
        assert!(feasible.contains(&v4));
        assert_eq!(
            all_subgroups(&g, 96).unwrap().iter().filter(|s| g.is_normal(s)).count(),
            4
        );
    }

    #[test]
    fn non_normalizing_gamma_is_rejected() {
        let g = Arc::new(PermGroup::cyclic(4));
        let h = g.trivial_subgroup();
        let bad = Perm::from_cycles(4, &[&[0, 1]]).unwrap();
        let err = solve_galois(
            &GaloisInstance::new(g, vec![h], vec![bad]),
            100,
            &SolveOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidAction(_)));
    }
}
