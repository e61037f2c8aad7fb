use std::sync::Arc;

use closeknit::groups::{GroupInstance, PermGroup};
use closeknit::oracle::{feasible_sets, feasible_subspaces};
use closeknit::sets::{FiniteSubset, SetInstance};
use closeknit::vect::{Matrix, SubspaceBasis, VectInstance};
use closeknit::{solve, verify_certificate, Perm, SolveOptions};

#[test]
fn set_instance_end_to_end() {
    let seed = FiniteSubset::from_members(6, &[0, 1, 2]).unwrap();
    let swap = Perm::from_cycles(6, &[&[0, 3]]).unwrap();
    let inst = SetInstance::new(6, vec![seed], vec![swap]).unwrap().close(100).unwrap();
    let cert = solve(&inst, &SolveOptions::default()).unwrap();
    assert_eq!(cert.invariant_element.to_vec(), vec![1, 2]);
    assert_eq!(cert.mode_agreement, Some(true));
    assert!(verify_certificate(&inst, &cert));
    assert!(feasible_sets(&inst, 1).unwrap().contains(&cert.invariant_element));
}

#[test]
fn normal_seed_is_its_own_answer() {
    let g = Arc::new(PermGroup::symmetric(4));
    let a4 = g
        .subgroup_from_perms(&[
            Perm::from_cycles(4, &[&[0, 1, 2]]).unwrap(),
            Perm::from_cycles(4, &[&[1, 2, 3]]).unwrap(),
        ])
        .unwrap();
    let inst = GroupInstance::inner(g, vec![a4.clone()]).unwrap().close(100).unwrap();
    let cert = solve(&inst, &SolveOptions::default()).unwrap();
    assert_eq!(cert.invariant_element, a4);
    // Group measures are indices, so equality gives 1.
    assert_eq!(cert.bound, 1);
}

#[test]
fn cyclic_planes_meet_in_zero() {
    let plane = SubspaceBasis::new(2, 3, vec![vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
    let shift = Matrix::invertible(2, vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
    let inst = VectInstance::new(2, 3, vec![plane], vec![shift])
        .unwrap()
        .close(100)
        .unwrap();
    let cert = solve(&inst, &SolveOptions::default()).unwrap();
    assert!(cert.invariant_element.rows().is_empty());
    assert_eq!(cert.orbit_size, 3);
    assert!(feasible_subspaces(&inst, cert.bound)
        .unwrap()
        .contains(&cert.invariant_element));
}
