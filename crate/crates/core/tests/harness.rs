use std::collections::BTreeMap;

use vcosmos::cosmos::{ChainComplex, ChainCosmos, ChainMap, CosmosObject};
use vcosmos::enriched::examples::dual_numbers;
use vcosmos::enriched::{FiniteCategory, VCategory};
use vcosmos::harness::change_of_base::{change_of_base, cotensor_comparison, sphere_comparison, underlying_check};
use vcosmos::harness::checks::{filtered_exactness_probe, homomorphism_theorem_check, kernel_cokernel, left_exactness_check};
use vcosmos::harness::gp::{functor_fully_faithful, nerve_hom_matrix};
use vcosmos::harness::instances::{dual_numbers_instance, quiver_instance, simple_module_instance, ProbeConfig};
use vcosmos::harness::{change_of_base_checks, gabriel_popescu_verify, CobProbes, FiniteWeightFamily};
use vcosmos::kan::{IdentityOperator, NerveRealization, TensorWith};
use vcosmos::limits::PresheafFunctor;
use vcosmos::linalg::enumerate_vectors;
use vcosmos::presheaf::{FunctorCat, FunctorMorphism, PresheafCat};
use vcosmos::{Error, Fp, FpMatrix};

fn f2() -> Fp {
    Fp::new(2).unwrap()
}

fn small() -> ProbeConfig {
    ProbeConfig {
        random_morphisms: 10,
        ..ProbeConfig::default()
    }
}

#[test]
fn dual_numbers_instance_passes_and_is_an_equivalence() {
    let inst = dual_numbers_instance(f2(), &small()).unwrap();
    let report = gabriel_popescu_verify(&inst);
    assert!(report.passed(), "{}", report.to_text(true));
    assert!(report.reverify());
    let nr = &inst.realization;
    for p in &inst.source_probes {
        assert!(nr.unit(p).unwrap().inverse().is_some());
    }
    for q in &inst.target_probes {
        assert!(nr.counit(q).unwrap().inverse().is_some());
    }
}

#[test]
fn quiver_instance_nerve_is_fully_faithful_by_direct_hom_computation() {
    let inst = quiver_instance(f2(), &small()).unwrap();
    let report = gabriel_popescu_verify(&inst);
    assert!(report.passed(), "{}", report.to_text(true));
    assert!(functor_fully_faithful(&inst).unwrap());
    let nr = &inst.realization;
    for q in &inst.target_probes {
        for q2 in &inst.target_probes {
            let direct = nr.target().functor_hom(q, q2).unwrap().dim();
            let (tq, tq2) = (nr.nerve(q).unwrap(), nr.nerve(q2).unwrap());
            assert_eq!(direct, nr.source().functor_hom(&tq, &tq2).unwrap().dim());
            assert!(nerve_hom_matrix(nr, q, q2).unwrap().is_isomorphism().is_some());
        }
    }
}

#[test]
fn simple_module_is_flagged_as_not_generating() {
    let inst = simple_module_instance(f2(), &small()).unwrap();
    let report = gabriel_popescu_verify(&inst);
    assert!(!report.passed());
    let iii = report.check("iii").unwrap();
    assert!(!iii.verdict.is_pass());
    // pair 0 is (id, 1 + x) on R, which differ only on the free part
    assert!(iii.detail.contains("[0"), "{}", iii.detail);
    assert!(!report.check("generators-conservative").unwrap().verdict.is_pass());
    assert!(!report.check("T-fully-faithful").unwrap().verdict.is_pass());
    for id in ["adjunction", "i", "ii", "iv", "v"] {
        assert!(report.check(id).unwrap().verdict.is_pass(), "{id}");
    }
    assert!(report.reverify());
}

#[test]
fn faithful_and_conservative_verdicts_agree() {
    for build in [dual_numbers_instance, quiver_instance, simple_module_instance] {
        let report = gabriel_popescu_verify(&build(f2(), &small()).unwrap());
        let faithful = report.check("iii").unwrap().verdict;
        let conservative = report.check("generators-conservative").unwrap().verdict;
        assert_eq!(faithful, conservative, "{}", report.title);
    }
}

#[test]
fn report_json_lists_every_check_with_digests() {
    let report = gabriel_popescu_verify(&dual_numbers_instance(f2(), &small()).unwrap());
    let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    let checks = v["checks"].as_array().unwrap();
    let ids: Vec<&str> = checks.iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(
        ids,
        ["T-fully-faithful", "S-left-exact", "adjunction", "i", "ii", "iii", "generators-conservative", "iv", "v"]
    );
    for c in checks {
        for cert in c["certificates"].as_array().unwrap() {
            assert_eq!(cert["digest"].as_str().unwrap().len(), 64);
        }
    }
    assert_eq!(v["probes"]["seed"], 0);
    assert_eq!(v["checks"][8]["scope"], "finite-filtered probes only");
}

#[test]
fn tampered_certificate_fails_reverification() {
    let mut report = gabriel_popescu_verify(&dual_numbers_instance(f2(), &small()).unwrap());
    let entry = &mut report.checks[0].certificates[0];
    if let vcosmos::harness::Certificate::Inverse { inverse, .. } = &mut entry.certificate {
        let v = inverse.get(0, 0);
        inverse.set(0, 0, (v + 1) % 2);
    }
    assert!(!report.reverify());
}

fn constant(cat: &FunctorCat, d: usize) -> vcosmos::presheaf::Presheaf {
    cat.functor(vec![d], |_, _| Ok(FpMatrix::identity(cat.fp(), d))).unwrap()
}

#[test]
fn kernel_cokernel_examples() {
    let fp = f2();
    let cat = FunctorCat::new(VCategory::unit(vcosmos::cosmos::FinVect::new(fp)).unwrap());
    let p = constant(&cat, 2);

    let kc = kernel_cokernel(&cat, &p, &p, &cat.identity(&p)).unwrap();
    assert_eq!(kc.kernel.total_dim(), 0);
    assert_eq!(kc.cokernel.total_dim(), 0);
    assert_eq!(kc.canonical.component(0).rows(), 2);

    let diag = FunctorMorphism {
        components: vec![FpMatrix::from_rows(fp, &[vec![1, 0], vec![0, 0]]).unwrap()],
    };
    let kc = kernel_cokernel(&cat, &p, &p, &diag).unwrap();
    assert_eq!(kc.coimage.total_dim(), 1);
    assert_eq!(kc.image.total_dim(), 1);
    assert!(kc.canonical.inverse().is_some());

    let kc = kernel_cokernel(&cat, &p, &p, &cat.zero(&p, &p)).unwrap();
    assert_eq!(kc.kernel.total_dim(), 2);
    assert_eq!(kc.canonical.component(0).rows(), 0);

    let check = homomorphism_theorem_check(&cat, &[(p.clone(), p.clone(), diag), (p.clone(), p.clone(), cat.zero(&p, &p))]);
    assert!(check.verdict.is_pass());
}

#[test]
fn left_exactness_controls() {
    let fp = f2();
    let a = PresheafCat::new(dual_numbers(fp)).unwrap();
    let y = PresheafFunctor::yoneda(&a).unwrap();
    let r = y.image(0).clone();
    let mx = y.map_basis(0, 0, 1).clone();
    let (k, j) = a.image(&r, &mx).unwrap();
    let family = FiniteWeightFamily {
        kernels: vec![(k.clone(), r.clone(), j.clone()), (r.clone(), r.clone(), mx.clone())],
        products: vec![(r.clone(), k.clone())],
        cotensors: vec![(2, r.clone()), (0, k.clone())],
    };
    assert!(left_exactness_check(&IdentityOperator(a.clone()), &family).verdict.is_pass());
    let tensor = TensorWith { cat: a.clone(), dim: 3 };
    assert!(left_exactness_check(&tensor, &family).verdict.is_pass());

    // - ⊗_R k : right R-modules to vector spaces, realized along R → V, * ↦ k.
    let v = PresheafCat::new(VCategory::unit(vcosmos::cosmos::FinVect::new(fp)).unwrap()).unwrap();
    let kv = constant(&v, 1);
    let augmentation = PresheafFunctor::new(dual_numbers(fp), v.clone(), vec![kv.clone()], |_, _| {
        Ok(vec![v.identity(&kv), v.zero(&kv, &kv)])
    })
    .unwrap();
    let s = NerveRealization::new(augmentation).unwrap();
    let only_j = FiniteWeightFamily {
        kernels: vec![(k.clone(), r.clone(), j)],
        ..FiniteWeightFamily::default()
    };
    let check = left_exactness_check(&s, &only_j);
    assert!(!check.verdict.is_pass());
    assert!(check.reverify());
}

#[test]
fn filtered_probe_controls() {
    let poset = FiniteCategory::poset(&["0", "1"], &[(0, 1)]).unwrap();
    assert_eq!(poset.terminal_object(), Some(1));
    assert!(filtered_exactness_probe(&poset, &[]).unwrap().verdict.is_pass());
    match filtered_exactness_probe(&FiniteCategory::parallel_pair(), &[]) {
        Err(Error::NotFiltered(why)) => assert!(!why.is_empty()),
        other => panic!("parallel pair accepted: {other:?}"),
    }
    assert!(matches!(
        filtered_exactness_probe(&FiniteCategory::discrete(&["p", "q"]), &[]),
        Err(Error::NotFiltered(_))
    ));
}

fn chain(fp: Fp) -> ChainCosmos {
    ChainCosmos::new(fp)
}

/// Every family of matrices `f^n : A^n → B^n` commuting with `d`, over `F_2`.
fn brute_force_chain_maps(a: &ChainComplex, b: &ChainComplex) -> usize {
    let fp = a.fp();
    let lo = a.lo().min(b.lo());
    let hi = a.hi().max(b.hi());
    let sizes: Vec<(i32, usize, usize)> = (lo..=hi).map(|n| (n, b.dim(n), a.dim(n))).collect();
    let total: usize = sizes.iter().map(|&(_, r, c)| r * c).sum();
    let mut count = 0;
    for v in enumerate_vectors(fp, total, usize::MAX).unwrap() {
        let mut comps = BTreeMap::new();
        let mut off = 0;
        for &(n, r, c) in &sizes {
            comps.insert(n, FpMatrix::new(fp, r, c, v[off..off + r * c].to_vec()).unwrap());
            off += r * c;
        }
        if ChainMap::new(a.clone(), b.clone(), comps).is_ok() {
            count += 1;
        }
    }
    count
}

#[test]
fn change_of_base_of_the_unit_is_the_unit() {
    let fp = f2();
    let b = VCategory::unit(chain(fp)).unwrap();
    let g = change_of_base(&b).unwrap();
    assert_eq!(g.hom(0, 0).dim, 1);
    assert_eq!(*g.ident(0), FpMatrix::identity(fp, 1));
    assert_eq!(*g.comp(0, 0, 0), FpMatrix::identity(fp, 1));
}

#[test]
fn change_of_base_homs_count_chain_maps() {
    let fp = f2();
    let c = chain(fp);
    let disk = c.disk(CosmosObject::new(1));
    let two = ChainComplex::new(fp, -1, vec![1, 2], vec![FpMatrix::from_rows(fp, &[vec![1], vec![0]]).unwrap()]).unwrap();
    let objects = vec![disk, two, c.sphere(CosmosObject::new(1)).shift(1)];
    let b = VCategory::full_sub_cosmos(c, vec!["D".into(), "T".into(), "S".into()], objects.clone()).unwrap();
    let g = change_of_base(&b).unwrap();
    assert!(g.check_axioms().is_valid());
    for (i, x) in objects.iter().enumerate() {
        for (j, y) in objects.iter().enumerate() {
            assert_eq!(1usize << g.hom(i, j).dim, brute_force_chain_maps(x, y), "({i}, {j})");
        }
    }
    let check = underlying_check(&b, &g, 8).unwrap();
    assert!(check.verdict.is_pass(), "{}", check.detail);
    assert!(check.reverify());
}

#[test]
fn transport_comparisons_invert() {
    let fp = f2();
    let c = chain(fp);
    let disk = c.disk(CosmosObject::new(1));
    // X = I: both sides are Z⁰ Hom(D, C)
    let m = cotensor_comparison(&c, 1, &disk, &disk).unwrap();
    assert_eq!(m, FpMatrix::identity(fp, m.rows()));
    let m = cotensor_comparison(&c, 2, &c.sphere(CosmosObject::new(1)), &disk).unwrap();
    assert!(m.is_isomorphism().is_some());
    let m = sphere_comparison(&c, 2, &disk).unwrap();
    assert!(m.is_isomorphism().is_some());

    let objects = vec![disk.clone(), c.sphere(CosmosObject::new(2))];
    let b = VCategory::full_sub_cosmos(c, vec!["D".into(), "S".into()], objects.clone()).unwrap();
    let probes = CobProbes {
        dims: vec![0, 1, 2],
        complexes: objects,
    };
    for check in change_of_base_checks(&b, &probes, 8) {
        assert!(check.verdict.is_pass(), "{}: {}", check.id, check.detail);
        assert!(check.reverify());
    }
}

#[test]
fn zero_category_checks_pass_vacuously() {
    let c = chain(f2());
    let b = VCategory::new(c, vec![], |_, _| unreachable!(), |_, _, _| unreachable!(), |_| unreachable!()).unwrap();
    let g = change_of_base(&b).unwrap();
    assert!(g.is_empty());
    for check in change_of_base_checks(&b, &CobProbes::default(), 8) {
        assert!(check.verdict.is_pass(), "{}", check.id);
    }
}
