use std::sync::Arc;

use kitaev::comodule::{
    klein_sign_cocycle, opposite_bicomodule, regular_bicomodule, signed_bicomodule, trivial_bicomodule,
    twisted_subgroup_algebra, Bicomodule,
};
use kitaev::crossed::{
    check_idempotents_commute, check_straightening, crossed_product, drinfeld_double, ideal_module,
    regular_module, unit_idempotent, unit_module, vacuum_module, validate_left_comodule, validate_module_algebra,
    validate_vertex_module, BalancingAlgebra, CrossedError, EdgeFactor, LeftComodule, ModuleAlgebra, SiteSpec,
    VertexAlgebra,
};
use kitaev::hopf::{group_algebra, signed, GroupTable, Hopf};


fn kg(g: &GroupTable) -> Arc<Hopf> {
    Arc::new(group_algebra(g))
}

/// Vertex with half-edges `h_0, …, h_{n-1}` in counterclockwise order, all
/// plaquettes labeled `h` and all edges labeled `k`; `eps[i] = +1` for outgoing.
fn star(h: &Arc<Hopf>, k: &Bicomodule, eps: &[i8]) -> VertexAlgebra {
    let n = eps.len();
    let sites = (0..n)
        .map(|i| SiteSpec { hopf: h.clone(), eps_left: eps[(i + 1) % n], eps_right: eps[i] })
        .collect();
    let edges = (0..n)
        .map(|i| EdgeFactor {
            label: signed_bicomodule(k, eps[i]),
            left_site: Some(i),
            right_site: Some((i + n - 1) % n),
        })
        .collect();
    VertexAlgebra::new(sites, edges).unwrap()
}

fn twisted_klein() -> Bicomodule {
    twisted_subgroup_algebra(&GroupTable::klein(), &[0, 1, 2, 3], klein_sign_cocycle).unwrap()
}

fn commutative(a: &kitaev::hopf::Algebra) -> bool {
    (0..a.dim()).all(|i| (0..a.dim()).all(|j| a.mul_basis(i, j) == a.mul_basis(j, i)))
}

#[test]
fn drinfeld_doubles() {
    let z2 = drinfeld_double(&kg(&GroupTable::cyclic(2))).unwrap();
    assert_eq!(z2.dim(), 4);
    assert!(commutative(z2.algebra()));
    let s3 = drinfeld_double(&kg(&GroupTable::symmetric3())).unwrap();
    assert_eq!(s3.dim(), 36);
    assert!(!commutative(s3.algebra()));
    assert_eq!(s3.algebra().center_dimension(), 8);
    let z3 = drinfeld_double(&kg(&GroupTable::cyclic(3))).unwrap();
    assert_eq!(z3.algebra().associativity_failure(), None);
    assert_eq!(z3.algebra().center_dimension(), 9);
}

#[test]
fn balancing_algebras_are_module_algebras() {
    let h = kg(&GroupTable::symmetric3());
    for el in [1, -1] {
        for er in [1, -1] {
            let b = BalancingAlgebra::new(h.clone(), el, er).unwrap();
            let r = validate_module_algebra(b.as_module_algebra());
            assert!(r.all_passed(), "({el}, {er}): {:?}", r.failures().collect::<Vec<_>>());
        }
    }
}

#[test]
fn comodules_from_bicomodules_validate() {
    let h = kg(&GroupTable::symmetric3());
    for k in [regular_bicomodule(&h), opposite_bicomodule(&regular_bicomodule(&h)), twisted_klein()] {
        let r = validate_left_comodule(&LeftComodule::from_bicomodule(&k).unwrap());
        assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}

/// A bicomodule over `(H^ε, H^{ε'})`, as needed by the balancing algebra of `(ε', ε)`.
fn matching_bicomodule(h: &Arc<Hopf>, el: i8, er: i8) -> Bicomodule {
    match (el, er) {
        (1, 1) => regular_bicomodule(h),
        (-1, -1) => opposite_bicomodule(&regular_bicomodule(h)),
        _ => trivial_bicomodule(&Arc::new(signed(h, er)), &Arc::new(signed(h, el))),
    }
}

#[test]
fn straightening_for_all_sign_pairs() {
    for g in [GroupTable::cyclic(2), GroupTable::cyclic(3), GroupTable::symmetric3()] {
        let h = kg(&g);
        let cp = drinfeld_double(&h).unwrap();
        let bal = BalancingAlgebra::new(h.clone(), 1, 1).unwrap();
        assert!(check_straightening(&bal, &regular_bicomodule(&h), &cp).all_passed());
        for el in [1, -1] {
            for er in [1, -1] {
                let bal = BalancingAlgebra::new(h.clone(), el, er).unwrap();
                let k = matching_bicomodule(&h, el, er);
                let cp = crossed_product(bal.as_module_algebra(), &LeftComodule::from_bicomodule(&k).unwrap()).unwrap();
                let r = check_straightening(&bal, &k, &cp);
                assert!(r.all_passed(), "({el}, {er}): {:?}", r.failures().collect::<Vec<_>>());
            }
        }
    }
    // Z2 is commutative and cocommutative, so the regular bicomodule fits every pair.
    let h = kg(&GroupTable::cyclic(2));
    for el in [1, -1] {
        for er in [1, -1] {
            let bal = BalancingAlgebra::new(h.clone(), el, er).unwrap();
            let k = regular_bicomodule(&h);
            let cp = crossed_product(bal.as_module_algebra(), &LeftComodule::from_bicomodule(&k).unwrap()).unwrap();
            assert!(check_straightening(&bal, &k, &cp).all_passed());
        }
    }
}

#[test]
fn mismatched_hopf_algebras_are_rejected() {
    let bal = BalancingAlgebra::new(kg(&GroupTable::cyclic(2)), 1, 1).unwrap();
    let k = LeftComodule::from_bicomodule(&regular_bicomodule(&kg(&GroupTable::cyclic(3)))).unwrap();
    assert!(matches!(crossed_product(bal.as_module_algebra(), &k), Err(CrossedError::HopfMismatch(_))));
}

#[test]
fn separability_idempotents_commute() {
    let z2 = kg(&GroupTable::cyclic(2));
    assert!(check_idempotents_commute(&drinfeld_double(&z2).unwrap()).all_passed());
    let s3 = kg(&GroupTable::symmetric3());
    assert!(check_idempotents_commute(&drinfeld_double(&s3).unwrap()).all_passed());

    let k = twisted_klein();
    let comod = LeftComodule::from_bicomodule(&k).unwrap();
    let trivial = ModuleAlgebra::trivial(comod.hopf().clone());
    let cp = crossed_product(&trivial, &comod).unwrap();
    assert!(check_idempotents_commute(&cp).all_passed());

    let bal = BalancingAlgebra::new(kg(&GroupTable::klein()), 1, 1).unwrap();
    let cp = crossed_product(bal.as_module_algebra(), &comod).unwrap();
    let r = check_idempotents_commute(&cp);
    assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
}

#[test]
fn valence_one_vertex_is_the_double() {
    for g in [GroupTable::cyclic(2), GroupTable::cyclic(3), GroupTable::symmetric3()] {
        let h = kg(&g);
        let cv = star(&h, &regular_bicomodule(&h), &[1]);
        assert_eq!(cv.materialize().unwrap(), drinfeld_double(&h).unwrap().algebra().clone());
    }
}

#[test]
fn lazy_product_is_associative() {
    let h = kg(&GroupTable::cyclic(2));
    let cv = star(&h, &regular_bicomodule(&h), &[1, -1, 1]);
    let a = cv.materialize().unwrap();
    assert_eq!(a.dim(), 64);
    assert_eq!(a.associativity_failure(), None);
    assert_eq!(a.unit_failure(), None);
}

#[test]
fn vertex_signs_must_match_the_labels() {
    let h = kg(&GroupTable::symmetric3());
    let k = regular_bicomodule(&h);
    let sites = vec![SiteSpec { hopf: h.clone(), eps_left: 1, eps_right: 1 }];
    let wrong = vec![EdgeFactor { label: opposite_bicomodule(&k), left_site: Some(0), right_site: Some(0) }];
    assert!(matches!(VertexAlgebra::new(sites.clone(), wrong), Err(CrossedError::HopfMismatch(_))));
    let external = vec![EdgeFactor { label: k.clone(), left_site: Some(0), right_site: None }];
    assert!(matches!(VertexAlgebra::new(sites, external), Err(CrossedError::Malformed(_))));
}

#[test]
fn regular_modules_validate() {
    let h = kg(&GroupTable::cyclic(2));
    for eps in [vec![1], vec![-1], vec![1, -1], vec![1, 1]] {
        let cv = star(&h, &regular_bicomodule(&h), &eps);
        let m = regular_module(&cv).unwrap();
        let r = validate_vertex_module(&cv, &m);
        assert!(r.all_passed(), "{eps:?}: {:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn vacuum_exists_only_at_valence_one() {
    for g in [GroupTable::cyclic(2), GroupTable::symmetric3()] {
        let h = kg(&g);
        let k = regular_bicomodule(&h);
        for eps in [vec![1], vec![-1]] {
            let cv = star(&h, &k, &eps);
            let m = vacuum_module(&cv).unwrap();
            assert_eq!(m.dim(), 1);
            assert!(validate_vertex_module(&cv, &m).all_passed());
        }
        for eps in [vec![1, -1], vec![1, 1], vec![1, -1, 1]] {
            assert_eq!(vacuum_module(&star(&h, &k, &eps)), Err(CrossedError::NoCharacter), "{eps:?}");
        }
    }
    let klein = kg(&GroupTable::klein());
    let cv = star(&klein, &twisted_klein(), &[1]);
    assert_eq!(vacuum_module(&cv), Err(CrossedError::NoCharacter));
}

#[test]
fn unit_modules_have_the_expected_dimension() {
    let cases: Vec<(GroupTable, Vec<i8>, usize)> = vec![
        (GroupTable::cyclic(2), vec![1], 1),
        (GroupTable::cyclic(2), vec![-1], 1),
        (GroupTable::cyclic(2), vec![1, -1], 2),
        (GroupTable::cyclic(2), vec![1, 1, -1], 4),
        (GroupTable::cyclic(3), vec![1, -1], 3),
        (GroupTable::cyclic(3), vec![1, 1, -1], 9),
        (GroupTable::symmetric3(), vec![1], 1),
        (GroupTable::symmetric3(), vec![1, -1], 6),
    ];
    for (g, eps, expect) in cases {
        let h = kg(&g);
        let cv = star(&h, &regular_bicomodule(&h), &eps);
        let m = unit_module(&cv).unwrap();
        assert_eq!(m.dim(), expect, "{eps:?}");
        let r = validate_vertex_module(&cv, &m);
        assert!(r.all_passed(), "{eps:?}: {:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn unit_idempotent_at_valence_one_is_the_vacuum_projector() {
    let h = kg(&GroupTable::cyclic(3));
    let cv = star(&h, &regular_bicomodule(&h), &[1]);
    let e = unit_idempotent(&cv).unwrap();
    // δ_e ⊗ (1 + g + g²)/3
    let expect: Vec<(usize, _)> = (0..3).map(|k| (k, kitaev::linalg::q(1, 3))).collect();
    assert_eq!(e.into_iter().collect::<Vec<_>>(), expect);
    let vac = vacuum_module(&cv).unwrap();
    let unit = unit_module(&cv).unwrap();
    assert_eq!(unit, vac);
}

#[test]
fn twisted_edge_unit_module() {
    let klein = kg(&GroupTable::klein());
    let cv = star(&klein, &twisted_klein(), &[1]);
    let m = unit_module(&cv).unwrap();
    assert!(validate_vertex_module(&cv, &m).all_passed());
    assert_eq!(m.dim(), 2);
    let (ideal, basis) = ideal_module(&cv, &cv.unit()).unwrap();
    assert_eq!(ideal.dim(), cv.dim());
    assert_eq!(basis.dim(), 16);
}
