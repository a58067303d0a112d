use std::sync::Arc;

use kitaev::comodule::{
    ground_bicomodule, klein_sign_cocycle, opposite_bicomodule, regular_bicomodule, trivial_bicomodule,
    twisted_subgroup_algebra, Bicomodule,
};
use kitaev::hopf::{check_haar, dual_hopf, group_algebra, haar_integral, op_cop, Algebra, GroupTable, Hopf};
use kitaev::linalg::{q, qi, Tensor};
use kitaev::separability::{
    check_center_projection, check_coinvariance, check_enveloping_idempotence, check_haar_reduction,
    check_separability_identities, constraint_nullity, symmetric_separability_idempotent, tensor_idempotent,
    SeparabilityError, SeparabilityIdempotent, Side,
};

fn hopf_instances() -> Vec<(String, Hopf)> {
    let mut out = Vec::new();
    for (name, g) in [
        ("Z1", GroupTable::cyclic(1)),
        ("Z2", GroupTable::cyclic(2)),
        ("Z3", GroupTable::cyclic(3)),
        ("Z4", GroupTable::cyclic(4)),
        ("Z2xZ2", GroupTable::klein()),
        ("S3", GroupTable::symmetric3()),
    ] {
        let h = group_algebra(&g);
        out.push((format!("k{name}"), h.clone()));
        out.push((format!("k{name}*"), dual_hopf(&h)));
        out.push((format!("k{name} opcop"), op_cop(&h)));
    }
    out
}

fn twisted_klein() -> Bicomodule {
    twisted_subgroup_algebra(&GroupTable::klein(), &[0, 1, 2, 3], klein_sign_cocycle).unwrap()
}

fn bicomodule_instances() -> Vec<(String, Bicomodule)> {
    let mut out = vec![("ground".to_string(), ground_bicomodule())];
    for (name, g) in [
        ("Z2", GroupTable::cyclic(2)),
        ("Z3", GroupTable::cyclic(3)),
        ("S3", GroupTable::symmetric3()),
    ] {
        let h = Arc::new(group_algebra(&g));
        out.push((format!("regular k{name}"), regular_bicomodule(&h)));
        out.push((format!("regular k{name}*"), regular_bicomodule(&Arc::new(dual_hopf(&h)))));
        out.push((format!("trivial over k{name}"), trivial_bicomodule(&h, &h)));
    }
    let k = twisted_klein();
    out.push(("opposite twisted".to_string(), opposite_bicomodule(&k)));
    out.push(("twisted".to_string(), k));
    out
}

#[test]
fn z2_idempotent_value() {
    let p = symmetric_separability_idempotent(group_algebra(&GroupTable::cyclic(2)).algebra()).unwrap();
    let mut expect = Tensor::new(vec![2, 2]);
    expect.set(&[0, 0], q(1, 2));
    expect.set(&[1, 1], q(1, 2));
    assert_eq!(p.element(), &expect);
}

#[test]
fn ground_field_idempotent_is_one_tensor_one() {
    let p = symmetric_separability_idempotent(&Algebra::ground()).unwrap();
    assert_eq!(p.terms(), vec![(0, 0, qi(1))]);
}

#[test]
fn matrix_algebra_idempotent_satisfies_the_identities() {
    let k = twisted_klein();
    let p = symmetric_separability_idempotent(k.algebra()).unwrap();
    assert!(check_separability_identities(k.algebra(), &p).all_passed());
    // In the basis b_u with b_u² = ±1, p = (1/4) Σ_u b_u ⊗ b_u⁻¹.
    for (i, j, c) in p.terms() {
        assert_eq!(i, j);
        let sq = &k.algebra().mul_basis(i, i)[0].1;
        assert_eq!(c, q(1, 4) * sq);
    }
}

#[test]
fn degenerate_trace_form_is_rejected() {
    // Dual numbers k[x]/x²: basis 1, x.
    let a = Algebra::from_table(
        vec!["1".into(), "x".into()],
        vec![vec![(0, qi(1))], vec![(1, qi(1))], vec![(1, qi(1))], vec![]],
        vec![qi(1), qi(0)],
    );
    assert_eq!(symmetric_separability_idempotent(&a), Err(SeparabilityError::DegenerateTraceForm));
}

#[test]
fn identities_hold_for_every_semisimple_instance() {
    for (name, h) in hopf_instances() {
        let p = symmetric_separability_idempotent(h.algebra()).unwrap();
        for report in [
            check_separability_identities(h.algebra(), &p),
            check_enveloping_idempotence(h.algebra(), &p),
        ] {
            assert!(report.all_passed(), "{name}: {:?}", report.failures().collect::<Vec<_>>());
        }
    }
}

#[test]
fn haar_reduction_for_every_hopf_instance() {
    for (name, h) in hopf_instances() {
        let r = check_haar_reduction(&h);
        assert!(r.all_passed(), "{name}: {:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn coinvariance_on_both_sides() {
    for (name, k) in bicomodule_instances() {
        for side in [Side::Left, Side::Right] {
            let r = check_coinvariance(&k, side);
            assert!(r.all_passed(), "{name} {side:?}: {:?}", r.failures().collect::<Vec<_>>());
        }
    }
}

#[test]
fn regular_cyclic_identity_is_haar_cocommutativity() {
    let h = group_algebra(&GroupTable::cyclic(2));
    let ell = haar_integral(&h).unwrap();
    assert!(check_haar(&h, &ell).find("cocommutativity").unwrap().passed);
    let k = regular_bicomodule(&Arc::new(h));
    assert!(check_coinvariance(&k, Side::Right).find("cyclic identity").unwrap().passed);
}

#[test]
fn coinvariance_detects_a_wrong_coaction() {
    // kZ2 with b_g ↦ 0 is not a comodule; p is not coinvariant for it.
    let k = regular_bicomodule(&Arc::new(group_algebra(&GroupTable::cyclic(2))));
    let bad = Bicomodule::from_parts(
        k.algebra().clone(),
        k.left_hopf().clone(),
        k.right_hopf().clone(),
        vec![vec![(0, 0, 0, qi(1))], vec![]],
    )
    .unwrap();
    assert!(!check_coinvariance(&bad, Side::Left).all_passed());
    assert!(!check_coinvariance(&bad, Side::Right).all_passed());
}

#[test]
fn tensor_idempotents_match_direct_computation() {
    let z2 = group_algebra(&GroupTable::cyclic(2));
    let p = symmetric_separability_idempotent(z2.algebra()).unwrap();
    let pp = tensor_idempotent(&p, &p);
    let mut expect = Tensor::new(vec![4, 4]);
    for i in 0..4 {
        expect.set(&[i, i], q(1, 4));
    }
    assert_eq!(pp.element(), &expect);

    let k = twisted_klein();
    let pk = symmetric_separability_idempotent(k.algebra()).unwrap();
    let direct = symmetric_separability_idempotent(&z2.algebra().tensor(k.algebra())).unwrap();
    assert_eq!(tensor_idempotent(&p, &pk), direct);

    let unit = symmetric_separability_idempotent(&Algebra::ground()).unwrap();
    assert_eq!(tensor_idempotent(&unit, &pk), pk);
}

#[test]
fn idempotent_is_unique() {
    let mut algebras = vec![twisted_klein().algebra().clone()];
    algebras.extend(hopf_instances().into_iter().map(|(_, h)| h.algebra().clone()).filter(|a| a.dim() <= 6));
    for a in algebras {
        assert_eq!(constraint_nullity(&a), 0);
    }
}

#[test]
fn perturbed_idempotents_fail() {
    let a = group_algebra(&GroupTable::cyclic(3)).algebra().clone();
    let p = symmetric_separability_idempotent(&a).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let mut t = p.element().clone();
            t.add(&[i, j], &q(1, 7));
            t.add(&[j, i], &q(1, 7));
            let r = check_separability_identities(&a, &SeparabilityIdempotent::from_tensor(t));
            assert!(!r.all_passed(), "perturbation at ({i}, {j}) went unnoticed");
        }
    }
}

#[test]
fn center_projection() {
    let mut algebras: Vec<Algebra> = hopf_instances()
        .into_iter()
        .map(|(_, h)| h.algebra().clone())
        .filter(|a| a.dim() <= 8)
        .collect();
    algebras.push(twisted_klein().algebra().clone());
    algebras.push(group_algebra(&GroupTable::cyclic(2)).algebra().tensor(twisted_klein().algebra()));
    for a in algebras {
        let p = symmetric_separability_idempotent(&a).unwrap();
        let r = check_center_projection(&a, &p);
        assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}
