//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Every identity is compared exactly over the rationals.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use kitaev::balancing_equiv::{check_round_trips, CrossedModule};
use kitaev::comodule::{
    ground_bicomodule, klein_sign_cocycle, opposite_bicomodule, regular_bicomodule, trivial_bicomodule,
    twisted_subgroup_algebra, Bicomodule,
};
use kitaev::crossed::{
    check_idempotents_commute, check_straightening, crossed_product, drinfeld_double, BalancingAlgebra, LeftComodule,
    ModuleAlgebra,
};
use kitaev::hopf::{
    basis_vector, check_haar, dual_hopf, group_algebra, haar_integral, op_cop, signed, validate_hopf, GroupTable, Hopf,
};
use kitaev::lattice::{
    check_operators, check_site_independence, check_straightening_representation, ground_space_dimension,
    CheckOptions, EdgeConvention, GroundMethod, StateSpace,
};
use kitaev::linalg::{q, SparseMatrix};
use kitaev::separability::{
    check_coinvariance, check_haar_reduction, check_separability_identities, symmetric_separability_idempotent, Side,
};
use kitaev::surface::{
    digon_sphere, grid_torus, tetrahedron, two_vertex_torus, valence_one_sphere, vertex_algebra, CellDecomposition,
    LabeledSurface, VertexLabel,
};
use kitaev::Report;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

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

fn kg(g: &GroupTable) -> Arc<Hopf> {
    Arc::new(group_algebra(g))
}

fn hopf_instances() -> Vec<(String, Hopf)> {
    let mut out = Vec::new();
    for (name, g) in groups() {
        let h = group_algebra(&g);
        out.push((format!("k{name}"), h.clone()));
        out.push((format!("k{name}*"), dual_hopf(&h)));
        out.push((format!("k{name} op/cop"), op_cop(&h)));
    }
    out
}

fn twisted_klein() -> Bicomodule {
    twisted_subgroup_algebra(&GroupTable::klein(), &[0, 1, 2, 3], klein_sign_cocycle).expect("Klein sign cocycle")
}

fn bicomodule_instances() -> Vec<(String, Bicomodule)> {
    let mut out = vec![("ground".to_string(), ground_bicomodule())];
    for (name, g) in [("Z2", GroupTable::cyclic(2)), ("Z3", GroupTable::cyclic(3)), ("S3", GroupTable::symmetric3())] {
        let h = kg(&g);
        out.push((format!("regular k{name}"), regular_bicomodule(&h)));
        out.push((format!("regular k{name}*"), regular_bicomodule(&Arc::new(dual_hopf(&h)))));
        out.push((format!("trivial over k{name}"), trivial_bicomodule(&h, &h)));
    }
    let k = twisted_klein();
    out.push(("opposite twisted k(Z2xZ2)".to_string(), opposite_bicomodule(&k)));
    out.push(("twisted k(Z2xZ2)".to_string(), k));
    out
}

fn clean(what: &str, r: &Report) -> Result<(), String> {
    match r.failures().next() {
        None => Ok(()),
        Some(c) => Err(format!("{what}: {} ({})", c.name, c.detail.as_deref().unwrap_or(""))),
    }
}

fn within(label: &str, t: Instant, limit: Duration) -> Result<Duration, String> {
    let d = t.elapsed();
    if d < limit {
        Ok(d)
    } else {
        Err(format!("{label} took {d:.1?}, limit {limit:?}"))
    }
}

fn uniform(cells: CellDecomposition, g: &GroupTable, z: VertexLabel) -> LabeledSurface {
    let h = kg(g);
    LabeledSurface::uniform(cells, &h, &regular_bicomodule(&h), z)
}

fn defect_torus(z: VertexLabel) -> LabeledSurface {
    let h = kg(&GroupTable::cyclic(2));
    let mut s = LabeledSurface::uniform(grid_torus(2, 2), &h, &regular_bicomodule(&h), z);
    // the vertical edges at x = 0 form a non-contractible loop
    for e in [1, 5] {
        s.edge_labels[e] = trivial_bicomodule(&h, &h);
    }
    s
}

/// Idempotence, commutation, site independence and straightening, all exhaustive.
fn lattice_suite(space: &StateSpace) -> Result<(), String> {
    let opts = CheckOptions { full_limit: 1 << 16, ..CheckOptions::default() };
    let reports = [
        check_operators(space, &opts).map_err(|e| e.to_string())?,
        check_site_independence(space, &opts).map_err(|e| e.to_string())?,
        check_straightening_representation(space, &opts).map_err(|e| e.to_string())?,
    ];
    for r in &reports {
        clean("lattice", r)?;
        if let Some(w) = r.warnings.iter().find(|w| w.contains("sampled")) {
            return Err(format!("not exhaustive: {w}"));
        }
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let instances = hopf_instances();
    for (name, h) in &instances {
        clean(name, &validate_hopf(h))?;
    }
    let d = within("Hopf axiom suite", t, Duration::from_secs(10))?;
    Ok(format!("{} Hopf algebras pass every axiom in {d:.1?}", instances.len()))
}

fn criterion_2() -> Outcome {
    for (name, g) in groups() {
        let n = g.order();
        let h = group_algebra(&g);
        let ell = haar_integral(&h).map_err(|e| format!("k{name}: {e}"))?;
        if ell.element != vec![q(1, n as i64); n] {
            return Err(format!("k{name}: Haar integral is not the group average"));
        }
        let r = check_haar(&h, &ell);
        clean(&format!("k{name}"), &r)?;
        if !r.find("cocommutativity").is_some_and(|c| c.passed) {
            return Err(format!("k{name}: cocommutativity not checked"));
        }
        let dual = dual_hopf(&h);
        let ell = haar_integral(&dual).map_err(|e| format!("k{name}*: {e}"))?;
        if ell.element != basis_vector(n, g.identity()) {
            return Err(format!("k{name}*: Haar integral is not the identity delta"));
        }
        clean(&format!("k{name}*"), &check_haar(&dual, &ell))?;
    }
    Ok("group averages, identity deltas and cocommutativity exact for all six groups".into())
}

fn criterion_3() -> Outcome {
    let mut algebras: Vec<(String, kitaev::hopf::Algebra)> =
        hopf_instances().into_iter().map(|(n, h)| (n, h.algebra().clone())).collect();
    algebras.push(("twisted k(Z2xZ2)".into(), twisted_klein().algebra().clone()));
    for (name, a) in &algebras {
        let p = symmetric_separability_idempotent(a).map_err(|e| format!("{name}: {e}"))?;
        clean(name, &check_separability_identities(a, &p))?;
    }
    for (name, h) in hopf_instances() {
        clean(&format!("{name} Haar reduction"), &check_haar_reduction(&h))?;
    }
    let bicomodules = bicomodule_instances();
    for (name, k) in &bicomodules {
        for side in [Side::Left, Side::Right] {
            clean(&format!("{name} {side:?} coinvariance"), &check_coinvariance(k, side))?;
        }
    }
    let z2 = kg(&GroupTable::cyclic(2));
    let cyclic = check_coinvariance(&regular_bicomodule(&z2), Side::Right);
    if !cyclic.find("cyclic identity").is_some_and(|c| c.passed) {
        return Err("regular kZ2: cyclic identity missing".into());
    }
    Ok(format!(
        "{} algebras separable, Haar reduction for {} Hopf algebras, coinvariance for {} bicomodule algebras",
        algebras.len(),
        hopf_instances().len(),
        bicomodules.len()
    ))
}

fn criterion_4() -> Outcome {
    let mut pairs = 0;
    for (name, g) in [("Z2", GroupTable::cyclic(2)), ("Z3", GroupTable::cyclic(3)), ("S3", GroupTable::symmetric3())] {
        let h = kg(&g);
        let double = drinfeld_double(&h).map_err(|e| e.to_string())?;
        let bal = BalancingAlgebra::new(h.clone(), 1, 1).map_err(|e| e.to_string())?;
        clean(&format!("D(k{name}) straightening"), &check_straightening(&bal, &regular_bicomodule(&h), &double))?;
        clean(&format!("D(k{name}) idempotents"), &check_idempotents_commute(&double))?;
        pairs += 1;
        let one = LabeledSurface::uniform(valence_one_sphere(), &h, &regular_bicomodule(&h), VertexLabel::Unit);
        let cv = vertex_algebra(&one, 0).map_err(|e| e.to_string())?.materialize().map_err(|e| e.to_string())?;
        if cv != *double.algebra() {
            return Err(format!("k{name}: C_v of one half-edge differs from the double"));
        }
    }
    let z2 = kg(&GroupTable::cyclic(2));
    for el in [1, -1] {
        for er in [1, -1] {
            let bal = BalancingAlgebra::new(z2.clone(), el, er).map_err(|e| e.to_string())?;
            for k in [regular_bicomodule(&z2), trivial_bicomodule(&Arc::new(signed(&z2, er)), &Arc::new(signed(&z2, el)))] {
                let comod = LeftComodule::from_bicomodule(&k).map_err(|e| e.to_string())?;
                let cp = crossed_product(bal.as_module_algebra(), &comod).map_err(|e| e.to_string())?;
                clean(&format!("kZ2 ({el}, {er}) straightening"), &check_straightening(&bal, &k, &cp))?;
                clean(&format!("kZ2 ({el}, {er}) idempotents"), &check_idempotents_commute(&cp))?;
                pairs += 1;
            }
        }
    }
    let comod = LeftComodule::from_bicomodule(&twisted_klein()).map_err(|e| e.to_string())?;
    let trivial = ModuleAlgebra::trivial(comod.hopf().clone());
    let cp = crossed_product(&trivial, &comod).map_err(|e| e.to_string())?;
    clean("twisted k(Z2xZ2) idempotents", &check_idempotents_commute(&cp))?;
    Ok(format!("{} crossed products straighten exactly; C_v of one half-edge equals D(H) for kZ2, kZ3, kS3", pairs + 1))
}

fn criterion_5() -> Outcome {
    let mut literal = Vec::new();
    for (name, cells) in [("2x2 torus", grid_torus(2, 2)), ("tetrahedron", tetrahedron())] {
        if let Err(e) = StateSpace::build(&uniform(cells, &GroupTable::cyclic(2), VertexLabel::Vacuum)) {
            literal.push(format!("{name}: {e}"));
        }
    }
    let t = Instant::now();
    let space = StateSpace::build(&uniform(tetrahedron(), &GroupTable::cyclic(2), VertexLabel::Unit)).map_err(|e| e.to_string())?;
    let analog = lattice_suite(&space).map(|_| {
        format!("unit-module tetrahedron ({}-dim) passes every identity exhaustively in {:.1?}", space.total_dim(), t.elapsed())
    });
    match (literal.is_empty(), analog) {
        (true, Ok(a)) => Ok(a),
        (true, Err(e)) => Err(e),
        (false, a) => Err(format!(
            "vacuum labels admit no module: {}; {}",
            literal.join("; "),
            a.unwrap_or_else(|e| format!("unit-module analog also fails: {e}"))
        )),
    }
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let z2 = GroupTable::cyclic(2);
    let cases = [
        ("digon sphere kZ2", uniform(digon_sphere(), &z2, VertexLabel::Unit), GroundMethod::Both, 1),
        ("tetrahedron kZ2", uniform(tetrahedron(), &z2, VertexLabel::Unit), GroundMethod::Trace, 1),
        ("torus kZ2", uniform(two_vertex_torus(), &z2, VertexLabel::Unit), GroundMethod::Both, 4),
        ("torus kZ3", uniform(two_vertex_torus(), &GroupTable::cyclic(3), VertexLabel::Unit), GroundMethod::Trace, 9),
    ];
    let mut found = Vec::new();
    for (name, s, method, expected) in cases {
        let space = StateSpace::build(&s).map_err(|e| format!("{name}: {e}"))?;
        let g = ground_space_dimension(&space, method, 4096).map_err(|e| format!("{name}: {e}"))?;
        if g.dimension != expected {
            return Err(format!("{name}: ground dimension {} by {}, expected {expected}", g.dimension, g.method.name()));
        }
        found.push(format!("{name} {} ({})", g.dimension, g.method.name()));
    }
    let d = within("ground dimensions", t, Duration::from_secs(600))?;
    Ok(format!("{} in {d:.1?}; unit vertex modules, two-vertex torus", found.join(", ")))
}

fn criterion_7() -> Outcome {
    let literal = StateSpace::build(&defect_torus(VertexLabel::Vacuum)).err().map(|e| e.to_string());
    let t = Instant::now();
    let space = StateSpace::build(&defect_torus(VertexLabel::Unit)).map_err(|e| e.to_string())?;
    let analog = lattice_suite(&space).and_then(|_| {
        let g = ground_space_dimension(&space, GroundMethod::Trace, 0).map_err(|e| e.to_string())?;
        Ok(format!(
            "unit-module defect torus ({}-dim) passes every identity, ground dimension {} by trace, in {:.1?}",
            space.total_dim(),
            g.dimension,
            t.elapsed()
        ))
    });
    match (literal, analog) {
        (None, a) => a,
        (Some(e), a) => Err(format!(
            "vacuum labels admit no module: {e}; {}",
            a.unwrap_or_else(|e| format!("unit-module analog also fails: {e}"))
        )),
    }
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let mut count = 0;
    for (name, g) in [("Z2", GroupTable::cyclic(2)), ("Z3", GroupTable::cyclic(3))] {
        let h = kg(&g);
        let bal = BalancingAlgebra::new(h.clone(), 1, 1).map_err(|e| e.to_string())?;
        for (kname, k) in [("regular", regular_bicomodule(&h)), ("ground field", trivial_bicomodule(&h, &h))] {
            let m = CrossedModule::regular(&bal, &k).map_err(|e| e.to_string())?;
            let r = check_round_trips(&m).map_err(|e| e.to_string())?;
            clean(&format!("k{name} {kname}"), &r)?;
            for needed in ["module round trip", "balancing round trip", "balancing: triangle", "balancing: hexagon", "balancing: naturality"] {
                if r.find(needed).is_none() {
                    return Err(format!("k{name} {kname}: {needed} not checked"));
                }
            }
            count += 1;
        }
    }
    let d = within("round trips", t, Duration::from_secs(30))?;
    Ok(format!("{count} round trips with triangle, hexagon and naturality exact in {d:.1?}"))
}

fn criterion_9() -> Outcome {
    let z2 = group_algebra(&GroupTable::cyclic(2));
    let corrupted = Hopf::from_parts(
        z2.algebra().clone(),
        (0..2).map(|i| z2.comult_basis(i).to_vec()).collect(),
        z2.counit().to_vec(),
        SparseMatrix::zeros(2, 2),
    )
    .map_err(|e| e.to_string())?;
    let antipode = validate_hopf(&corrupted).failures().map(|c| c.name.clone()).collect::<Vec<_>>();
    if !antipode.iter().any(|n| n.starts_with("antipode")) {
        return Err("corrupted antipode passes validation".into());
    }

    let s3 = uniform(digon_sphere(), &GroupTable::symmetric3(), VertexLabel::Unit);
    let flipped = StateSpace::build_with(&s3, EdgeConvention::Flipped).map_err(|e| e.to_string())?;
    let straight = check_straightening_representation(&flipped, &CheckOptions::default()).map_err(|e| e.to_string())?;
    let mismatches = straight.failures().count();
    if mismatches == 0 {
        return Err("flipped orientation convention passes straightening".into());
    }
    let standard = StateSpace::build(&s3).map_err(|e| e.to_string())?;
    clean("standard convention", &check_straightening_representation(&standard, &CheckOptions::default()).map_err(|e| e.to_string())?)?;

    let one = StateSpace::build(&uniform(grid_torus(1, 1), &GroupTable::cyclic(2), VertexLabel::Unit)).map_err(|e| e.to_string())?;
    let ops = check_operators(&one, &CheckOptions::default()).map_err(|e| e.to_string())?;
    if !ops.warnings.iter().any(|w| w.starts_with("commutation not checked")) || ops.checks.iter().any(|c| c.name.ends_with("commute")) {
        return Err("1x1 torus commutation suite was not skipped".into());
    }
    Ok(format!(
        "corrupted antipode fails {}; flipped convention gives {mismatches} straightening mismatches over kS3; 1x1 torus skips commutation with a warning",
        antipode.join(", ")
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Hopf axiom suite", criterion_1),
        ("Haar integrals", criterion_2),
        ("separability", criterion_3),
        ("crossed products", criterion_4),
        ("lattice identities with vacuum labels", criterion_5),
        ("ground-state degeneracy", criterion_6),
        ("defect loop with vacuum labels", criterion_7),
        ("balancing round trips", criterion_8),
        ("negative controls", criterion_9),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("criterion {} ({title}): PASS: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({title}): FAIL: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
