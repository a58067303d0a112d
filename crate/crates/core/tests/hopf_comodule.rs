use std::sync::Arc;

use kitaev::comodule::{
    ground_bicomodule, klein_sign_cocycle, opposite_bicomodule, regular_bicomodule, twisted_subgroup_algebra,
    validate_bicomodule, Bicomodule, ComoduleError,
};
use kitaev::hopf::{
    basis_vector, dual_hopf, group_algebra, haar_integral, op_cop, trivial_hopf, validate_hopf, GroupTable, Hopf,
};
use kitaev::linalg::{q, qi, SparseMatrix, Q};

fn groups() -> Vec<(&'static str, GroupTable)> {
    vec![
        ("Z1", GroupTable::cyclic(1)),
        ("Z2", GroupTable::cyclic(2)),
        ("Z3", GroupTable::cyclic(3)),
        ("Z4", GroupTable::cyclic(4)),
        ("Z2xZ2", GroupTable::klein()),
        ("S3", GroupTable::symmetric3()),
    ]
}

fn twisted_klein() -> Bicomodule {
    twisted_subgroup_algebra(&GroupTable::klein(), &[0, 1, 2, 3], klein_sign_cocycle).unwrap()
}

#[test]
fn group_table_rejects_non_groups() {
    let labels = vec!["a".to_string(), "b".to_string()];
    let err = GroupTable::new(labels, vec![vec![0, 0], vec![0, 0]]).unwrap_err();
    assert!(err.to_string().contains("not a group"));
}

#[test]
fn every_builder_satisfies_the_hopf_axioms() {
    for (name, g) in groups() {
        let h = group_algebra(&g);
        for (variant, x) in [("kG", h.clone()), ("dual", dual_hopf(&h)), ("opcop", op_cop(&h))] {
            let r = validate_hopf(&x);
            assert!(r.all_passed(), "{name} {variant}: {:?}", r.failures().collect::<Vec<_>>());
        }
    }
}

#[test]
fn z2_squares_to_the_unit() {
    let h = group_algebra(&GroupTable::cyclic(2));
    assert_eq!(h.dim(), 2);
    assert_eq!(h.algebra().mul_basis(1, 1), &[(0, qi(1))]);
    assert_eq!(group_algebra(&GroupTable::cyclic(1)), trivial_hopf());
}

#[test]
fn s3_is_noncommutative_and_op_cop_differs() {
    let h = group_algebra(&GroupTable::symmetric3());
    assert_eq!(h.dim(), 6);
    let noncommuting = (0..6).any(|i| (0..6).any(|j| h.algebra().mul_basis(i, j) != h.algebra().mul_basis(j, i)));
    assert!(noncommuting);
    assert_ne!(op_cop(&h).algebra(), h.algebra());
    assert_eq!(op_cop(&op_cop(&h)), h);
    let z2 = group_algebra(&GroupTable::cyclic(2));
    assert_eq!(op_cop(&z2), z2);
}

#[test]
fn dual_of_z2_is_the_function_algebra() {
    let d = dual_hopf(&group_algebra(&GroupTable::cyclic(2)));
    for x in 0..2 {
        for y in 0..2 {
            let expect: Vec<(usize, Q)> = if x == y { vec![(x, qi(1))] } else { vec![] };
            assert_eq!(d.algebra().mul_basis(x, y), expect.as_slice());
        }
    }
    assert_eq!(d.unit(), &[qi(1), qi(1)]);
}

#[test]
fn double_dual_is_the_identity() {
    for (_, g) in groups() {
        let h = group_algebra(&g);
        assert_eq!(dual_hopf(&dual_hopf(&h)), h);
    }
}

#[test]
fn haar_integrals_of_group_algebras_and_duals() {
    for (name, g) in groups() {
        let n = g.order() as i64;
        let h = group_algebra(&g);
        let ell = haar_integral(&h).unwrap();
        assert_eq!(ell.element, vec![q(1, n); g.order()], "{name}");
        let dual = haar_integral(&dual_hopf(&h)).unwrap();
        assert_eq!(dual.element, basis_vector(g.order(), g.identity()), "{name}");
    }
}

#[test]
fn corrupted_antipode_is_reported_at_g() {
    let h = group_algebra(&GroupTable::cyclic(2));
    let bad = Hopf::from_parts(
        h.algebra().clone(),
        (0..2).map(|i| h.comult_basis(i).to_vec()).collect(),
        h.counit().to_vec(),
        SparseMatrix::zeros(2, 2),
    )
    .unwrap();
    let r = validate_hopf(&bad);
    let failure = r.find("antipode (left)").unwrap();
    assert!(!failure.passed);
    assert!(failure.detail.as_deref().unwrap().ends_with("e, g"), "{:?}", failure.detail);
    assert!(haar_integral(&bad).is_ok());
}

#[test]
fn regular_z2_coaction_is_diagonal() {
    let h = Arc::new(group_algebra(&GroupTable::cyclic(2)));
    let k = regular_bicomodule(&h);
    assert_eq!(k.coaction_basis(1), &[(1, 1, 1, qi(1))]);
    assert_eq!(regular_bicomodule(&Arc::new(trivial_hopf())), ground_bicomodule());
}

#[test]
fn regular_and_twisted_bicomodules_validate() {
    for n in [3, 4] {
        let h = Arc::new(group_algebra(&GroupTable::cyclic(n)));
        assert!(validate_bicomodule(&regular_bicomodule(&h)).all_passed());
    }
    let r = validate_bicomodule(&twisted_klein());
    assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
    assert!(validate_bicomodule(&opposite_bicomodule(&twisted_klein())).all_passed());
}

#[test]
fn trivially_twisted_z2_is_regular() {
    let g = GroupTable::cyclic(2);
    let k = twisted_subgroup_algebra(&g, &[0, 1], |_, _| 1).unwrap();
    assert_eq!(k, regular_bicomodule(&Arc::new(group_algebra(&g))));
}

#[test]
fn twisted_klein_is_a_matrix_algebra() {
    let k = twisted_klein();
    assert_eq!(k.dim(), 4);
    assert_eq!(k.algebra().center_dimension(), 1);
    assert!(k.algebra().characters().unwrap().is_empty());
}

#[test]
fn trivial_subgroup_gives_the_ground_field() {
    let k = twisted_subgroup_algebra(&GroupTable::klein(), &[0], klein_sign_cocycle).unwrap();
    assert_eq!(k.dim(), 1);
    assert_eq!(k.coaction_basis(0), &[(0, 0, 0, qi(1))]);
}

#[test]
fn twisted_builder_rejects_bad_input() {
    let g = GroupTable::klein();
    assert!(matches!(twisted_subgroup_algebra(&g, &[0, 1, 2], |_, _| 1), Err(ComoduleError::NotSubgroup(_))));
    // A symmetric non-cocycle on Z2 x Z2.
    let bad = |a: usize, b: usize| if (a, b) == (1, 1) || (a, b) == (3, 2) { -1 } else { 1 };
    assert!(matches!(twisted_subgroup_algebra(&g, &[0, 1, 2, 3], bad), Err(ComoduleError::NotCocycle { .. })));
    let unnormalized = |a: usize, _: usize| if a == 0 { -1 } else { 1 };
    assert!(twisted_subgroup_algebra(&g, &[0, 1, 2, 3], unnormalized).is_err());
}

#[test]
fn opposite_is_an_involution() {
    let k = twisted_klein();
    let op = opposite_bicomodule(&k);
    assert_ne!(op.algebra(), k.algebra());
    assert_eq!(opposite_bicomodule(&op), k);
    let h = Arc::new(group_algebra(&GroupTable::cyclic(2)));
    assert_eq!(opposite_bicomodule(&regular_bicomodule(&h)), regular_bicomodule(&h));
}

#[test]
fn zero_coaction_fails_the_unit_axiom() {
    let k = twisted_klein();
    let zero = Bicomodule::from_parts(
        k.algebra().clone(),
        k.left_hopf().clone(),
        k.right_hopf().clone(),
        vec![Vec::new(); 4],
    )
    .unwrap();
    let r = validate_bicomodule(&zero);
    assert!(!r.find("coaction unital").unwrap().passed);
}
