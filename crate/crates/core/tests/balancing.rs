use std::sync::Arc;

use kitaev::balancing_equiv::{
    balancing_family, balancing_from_module, check_balancing, check_round_trips, module_from_balancing, test_family,
    verify_gluing_equivalence, BalancingError, BalancingFamily, CrossedModule, HModule,
};
use kitaev::comodule::{regular_bicomodule, signed_bicomodule, trivial_bicomodule, Bicomodule};
use kitaev::crossed::{regular_module, BalancingAlgebra, VertexModule};
use kitaev::hopf::{group_algebra, signed, GroupTable, Hopf};
use kitaev::linalg::{q, qi, SparseMatrix};
use kitaev::surface::{digon_sphere, valence_one_sphere, vertex_algebra, LabeledSurface, VertexLabel};

fn kg(g: &GroupTable) -> Arc<Hopf> {
    Arc::new(group_algebra(g))
}

fn trivial_over(h: &Arc<Hopf>, el: i8, er: i8) -> Bicomodule {
    trivial_bicomodule(&Arc::new(signed(h, er)), &Arc::new(signed(h, el)))
}

fn assert_clean(r: &kitaev::Report) {
    let bad: Vec<_> = r.failures().collect();
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn triangle_and_hexagon_for_the_double_of_z2() {
    let h = kg(&GroupTable::cyclic(2));
    let bal = BalancingAlgebra::new(h.clone(), 1, 1).unwrap();
    let m = CrossedModule::regular(&bal, &regular_bicomodule(&h)).unwrap();
    assert_eq!(m.dim, 4);
    let triv = balancing_from_module(&m, &HModule::trivial(&h)).unwrap();
    assert_eq!(triv, SparseMatrix::identity(4));
    let reg = HModule::regular(&h);
    let b = balancing_from_module(&m, &reg).unwrap();
    assert_eq!((b.rows(), b.cols()), (8, 8));
    assert_eq!(b.rank(), 8);
    let fam = balancing_family(&m).unwrap();
    assert_clean(&check_balancing(&fam, &test_family(&h)));
}

#[test]
fn round_trips_for_regular_and_trivial_labels() {
    for g in [GroupTable::cyclic(2), GroupTable::cyclic(3)] {
        let h = kg(&g);
        let bal = BalancingAlgebra::new(h.clone(), 1, 1).unwrap();
        for k in [regular_bicomodule(&h), trivial_over(&h, 1, 1)] {
            let m = CrossedModule::regular(&bal, &k).unwrap();
            assert_clean(&check_round_trips(&m).unwrap());
        }
    }
}

#[test]
fn round_trips_for_every_sign_pair() {
    let z2 = kg(&GroupTable::cyclic(2));
    let z3 = kg(&GroupTable::cyclic(3));
    for el in [1, -1] {
        for er in [1, -1] {
            let bal = BalancingAlgebra::new(z2.clone(), el, er).unwrap();
            for k in [regular_bicomodule(&z2), trivial_over(&z2, el, er)] {
                let r = check_round_trips(&CrossedModule::regular(&bal, &k).unwrap()).unwrap();
                assert_clean(&r);
            }
            let bal = BalancingAlgebra::new(z3.clone(), el, er).unwrap();
            let r = check_round_trips(&CrossedModule::regular(&bal, &trivial_over(&z3, el, er)).unwrap()).unwrap();
            assert_clean(&r);
        }
    }
    let bal = BalancingAlgebra::new(z3.clone(), -1, -1).unwrap();
    let k = signed_bicomodule(&regular_bicomodule(&z3), -1);
    assert_clean(&check_round_trips(&CrossedModule::regular(&bal, &k).unwrap()).unwrap());
}

/// A Z2-graded space `M = M_0 ⊕ M_1` balanced by `x ⊗ m ↦ Σ_g m_g ⊗ g.x`.
fn graded_family(h: &Arc<Hopf>, grades: &[usize]) -> BalancingFamily {
    let bal = BalancingAlgebra::new(h.clone(), 1, 1).unwrap();
    let dm = grades.len();
    let grades = grades.to_vec();
    BalancingFamily {
        site: bal,
        comodule: trivial_over(h, 1, 1),
        dim: dm,
        k_action: vec![SparseMatrix::identity(dm)],
        beta: Arc::new(move |x: &HModule| {
            let mut entries = Vec::new();
            for (m, &g) in grades.iter().enumerate() {
                for (xo, xi, w) in x.action[g].entries() {
                    entries.push((m * x.dim + xo, xi * dm + m, w.clone()));
                }
            }
            SparseMatrix::from_triplets(dm * x.dim, x.dim * dm, entries)
        }),
    }
}

#[test]
fn graded_spaces_are_modules_over_the_dual() {
    let h = kg(&GroupTable::cyclic(2));
    let fam = graded_family(&h, &[0, 1, 1]);
    assert_clean(&check_balancing(&fam, &test_family(&h)));
    let m = module_from_balancing(&fam).unwrap();
    let proj = |g: usize| SparseMatrix::from_triplets(3, 3, [0, 1, 1].iter().enumerate().filter(|(_, &x)| x == g).map(|(i, _)| (i, i, qi(1))));
    assert_eq!(m.dual_action, vec![proj(0), proj(1)]);
    let back = balancing_family(&m).unwrap();
    for x in test_family(&h) {
        assert_eq!(back.beta(&x), fam.beta(&x));
    }
}

#[test]
fn a_scaled_swap_is_not_a_balancing() {
    let h = kg(&GroupTable::cyclic(2));
    let mut fam = graded_family(&h, &[0, 0]);
    let inner = fam.beta.clone();
    fam.beta = Arc::new(move |x: &HModule| inner(x).scale(&q(2, 1)));
    assert!(!check_balancing(&fam, &test_family(&h)).find("triangle").unwrap().passed);
    assert!(matches!(module_from_balancing(&fam), Err(BalancingError::NotAModule(_))));
}

#[test]
fn corrupted_modules_are_rejected() {
    let h = kg(&GroupTable::cyclic(3));
    let bal = BalancingAlgebra::new(h.clone(), 1, 1).unwrap();
    let mut m = CrossedModule::regular(&bal, &regular_bicomodule(&h)).unwrap();
    m.k_action[1] = m.k_action[2].clone();
    assert!(matches!(balancing_from_module(&m, &HModule::regular(&h)), Err(BalancingError::ModuleInvalid(_))));
}

#[test]
fn gluing_at_a_valence_one_vertex() {
    let h = kg(&GroupTable::cyclic(2));
    let s = LabeledSurface::uniform(valence_one_sphere(), &h, &regular_bicomodule(&h), VertexLabel::Regular);
    let cv = vertex_algebra(&s, 0).unwrap();
    let z = regular_module(&cv).unwrap();
    assert_clean(&verify_gluing_equivalence(&cv, &z));
}

fn corrupt(cv: &kitaev::crossed::VertexAlgebra, z: &VertexModule, site: usize) -> VertexModule {
    let sites = (0..cv.n_sites())
        .map(|s| {
            (0..cv.site(s).dim())
                .map(|f| if s == site && f == 0 { z.site_action(s, 1).clone() } else { z.site_action(s, f).clone() })
                .collect()
        })
        .collect();
    let edges = (0..cv.n_edges()).map(|i| (0..cv.edge(i).label.dim()).map(|k| z.edge_action(i, k).clone()).collect()).collect();
    VertexModule::from_generators(cv, z.dim(), sites, edges).unwrap()
}

#[test]
fn gluing_at_a_valence_two_vertex_with_a_trivial_edge() {
    let h = kg(&GroupTable::cyclic(2));
    let mut s = LabeledSurface::uniform(digon_sphere(), &h, &regular_bicomodule(&h), VertexLabel::Regular);
    s.edge_labels[1] = trivial_bicomodule(&h, &h);
    let cv = vertex_algebra(&s, 0).unwrap();
    let z = regular_module(&cv).unwrap();
    let r = verify_gluing_equivalence(&cv, &z);
    assert_eq!(r.checks.len(), 2);
    assert_clean(&r);
    let bad = verify_gluing_equivalence(&cv, &corrupt(&cv, &z, 1));
    assert!(bad.find("site 0").unwrap().passed);
    assert!(!bad.find("site 1").unwrap().passed);
}
