use vcosmos::cosmos::{ChainCosmos, Cosmos, CosmosObject, FinVect};
use vcosmos::enriched::examples::{dual_numbers, quiver_a_to_b, unit};
use vcosmos::enriched::{FiniteCategory, VCategory, VFunctor, VNatTransformation, DEFAULT_ENUMERATION_DIM};
use vcosmos::{Fp, FpMatrix};

fn f2() -> Fp {
    Fp::new(2).unwrap()
}

#[test]
fn bundled_categories_are_valid() {
    for p in [2, 3] {
        let fp = Fp::new(p).unwrap();
        assert!(unit(fp).check_axioms().is_valid());
        assert!(dual_numbers(fp).check_axioms().is_valid());
        assert!(quiver_a_to_b(fp).check_axioms().is_valid());
    }
}

#[test]
fn corrupted_composition_names_the_triple() {
    let fp = f2();
    let mut r = dual_numbers(fp);
    // 1·x = 0 and x·x = 1, so (x·x)·x ≠ x·(x·x)
    let bad = FpMatrix::from_rows(fp, &[vec![1, 0, 0, 1], vec![0, 0, 1, 0]]).unwrap();
    r.set_comp(0, 0, 0, bad).unwrap();
    let report = r.check_axioms();
    assert!(!report.is_valid());
    assert!(report.failures.iter().any(|f| f.diagram == "associativity (R, R, R, R)"));
}

#[test]
fn opposites() {
    let fp = Fp::new(3).unwrap();
    for c in [unit(fp), dual_numbers(fp), quiver_a_to_b(fp)] {
        let op = c.opposite().unwrap();
        assert!(op.check_axioms().is_valid());
        assert_eq!(op.opposite().unwrap(), c);
    }
    assert_eq!(unit(fp).opposite().unwrap(), unit(fp));
    // commutative algebra
    assert_eq!(dual_numbers(fp).opposite().unwrap(), dual_numbers(fp));
    let q = quiver_a_to_b(fp).opposite().unwrap();
    assert_eq!(q.hom(1, 0).dim, 1);
    assert_eq!(q.hom(0, 1).dim, 0);
}

#[test]
fn tensor_of_v_categories() {
    let fp = Fp::new(3).unwrap();
    let q = quiver_a_to_b(fp);
    let qq = q.tensor_vcat(&q).unwrap();
    assert_eq!(qq.len(), 4);
    assert!(qq.check_axioms().is_valid());
    let iq = unit(fp).tensor_vcat(&q).unwrap();
    for a in 0..2 {
        for b in 0..2 {
            assert_eq!(iq.hom(a, b), q.hom(a, b));
            for c in 0..2 {
                assert_eq!(iq.comp(a, b, c), q.comp(a, b, c));
            }
        }
    }
    let r = dual_numbers(fp);
    let rop_r = r.opposite().unwrap().tensor_vcat(&r).unwrap();
    assert!(rop_r.check_axioms().is_valid());
    assert_eq!(rop_r.hom(0, 0).dim, 4);
}

#[test]
fn underlying_categories() {
    let fp = f2();
    let u = unit(fp).underlying(DEFAULT_ENUMERATION_DIM).unwrap();
    assert_eq!(u.category.arrows().len(), 2);
    let r = dual_numbers(fp).underlying(DEFAULT_ENUMERATION_DIM).unwrap();
    assert_eq!(r.category.hom(0, 0).len(), 4);
    let q = quiver_a_to_b(fp);
    let uq = q.underlying(DEFAULT_ENUMERATION_DIM).unwrap();
    let uq_op = q.opposite().unwrap().underlying(DEFAULT_ENUMERATION_DIM).unwrap();
    let op_uq = uq.category.opposite();
    // match arrows by endpoints and cosmos element, then compare composition
    let n = op_uq.arrows().len();
    assert_eq!(uq_op.category.arrows().len(), n);
    let matching: Vec<usize> = (0..n)
        .map(|i| {
            let a = op_uq.arrow(i);
            (0..n)
                .find(|&j| {
                    let b = uq_op.category.arrow(j);
                    (a.src, a.dst) == (b.src, b.dst) && uq.elements[i] == uq_op.elements[j]
                })
                .unwrap()
        })
        .collect();
    for g in 0..n {
        for f in 0..n {
            assert_eq!(
                op_uq.compose(g, f).map(|h| matching[h]),
                uq_op.category.compose(matching[g], matching[f])
            );
        }
    }
}

#[test]
fn enumeration_cap_is_enforced() {
    let fp = f2();
    let v = FinVect::new(fp);
    let big = VCategory::full_sub_cosmos(v, vec!["X".into()], vec![v.obj(3)]).unwrap();
    assert!(big.underlying(6).is_err());
    assert!(big.underlying(9).is_ok());
}

#[test]
fn free_v_categories() {
    let fp = f2();
    let v = FinVect::new(fp);
    assert_eq!(VCategory::free(v, &FiniteCategory::terminal()).unwrap(), unit(fp));
    let q = quiver_a_to_b(fp);
    assert_eq!(
        (q.hom(0, 0).dim, q.hom(1, 1).dim, q.hom(0, 1).dim, q.hom(1, 0).dim),
        (1, 1, 1, 0)
    );
    let sq = FiniteCategory::poset(&["0", "x", "y", "1"], &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
    assert!(VCategory::free(v, &sq).unwrap().check_axioms().is_valid());
    // underlying(free L) recovers L's hom-set sizes plus linear combinations
    let u = VCategory::free(v, &sq).unwrap().underlying(DEFAULT_ENUMERATION_DIM).unwrap();
    assert_eq!(u.category.hom(0, 3).len(), 2);
}

#[test]
fn functors_out_of_free_categories_match_ordinary_functors() {
    let fp = Fp::new(3).unwrap();
    let v = FinVect::new(fp);
    let l = FiniteCategory::free_on_quiver(&["a", "b", "c"], &[("f", 0, 1), ("g", 1, 2)]).unwrap();
    let free = VCategory::free(v, &l).unwrap();
    let target = VCategory::full_sub_cosmos(v, vec!["X".into(), "Y".into()], vec![v.obj(2), v.obj(1)]).unwrap();
    // a ↦ X, b ↦ X, c ↦ Y; f ↦ [[1,1],[0,1]], g ↦ [1,2]
    let f = FpMatrix::from_rows(fp, &[vec![1, 1], vec![0, 1]]).unwrap();
    let g = FpMatrix::from_rows(fp, &[vec![1, 2]]).unwrap();
    let objects = vec![0, 0, 1];
    let name = |m: &FpMatrix| v.name_of(m);
    let mut images = Vec::new();
    for arrow in l.arrows() {
        let m = match arrow.name.as_str() {
            "f" => f.clone(),
            "g" => g.clone(),
            "g∘f" => g.mul(&f).unwrap(),
            _ => FpMatrix::identity(fp, if arrow.src == 2 { 1 } else { 2 }),
        };
        images.push(name(&m));
    }
    let functor = VFunctor::from_ordinary(free.clone(), &l, target.clone(), objects, &images).unwrap();
    assert!(functor.check_axioms().is_valid());
    // the underlying functor sends each arrow of L to its chosen image
    let us = free.underlying(DEFAULT_ENUMERATION_DIM).unwrap();
    let ut = target.underlying(DEFAULT_ENUMERATION_DIM).unwrap();
    let map = functor.underlying_arrow_map(&us, &ut).unwrap();
    for g in 0..us.category.arrows().len() {
        for f in 0..us.category.arrows().len() {
            if let Some(h) = us.category.compose(g, f) {
                assert_eq!(ut.category.compose(map[g], map[f]), Some(map[h]));
            }
        }
    }
    // a bad choice (not functorial) is caught
    let mut bad = images.clone();
    let gf = l.arrows().iter().position(|a| a.name == "g∘f").unwrap();
    bad[gf] = name(&FpMatrix::zeros(fp, 1, 2));
    let functor = VFunctor::from_ordinary(free, &l, target, vec![0, 0, 1], &bad).unwrap();
    assert!(!functor.check_axioms().is_valid());
}

#[test]
fn natural_transformations() {
    let fp = Fp::new(3).unwrap();
    let r = dual_numbers(fp);
    let id = VFunctor::identity(&r).unwrap();
    // components are central elements; the algebra is commutative, so any works
    let alpha = VNatTransformation::new(id.clone(), id.clone(), vec![FpMatrix::column(fp, &[2, 1])]).unwrap();
    assert!(alpha.check_axioms().is_valid());

    let q = quiver_a_to_b(fp);
    let idq = VFunctor::identity(&q).unwrap();
    let good = VNatTransformation::new(
        idq.clone(),
        idq.clone(),
        vec![FpMatrix::column(fp, &[2]), FpMatrix::column(fp, &[2])],
    )
    .unwrap();
    assert!(good.check_axioms().is_valid());
    let bad = VNatTransformation::new(idq.clone(), idq, vec![FpMatrix::column(fp, &[1]), FpMatrix::column(fp, &[2])]).unwrap();
    let report = bad.check_axioms();
    assert_eq!(report.failures.len(), 1);
    assert_eq!(report.failures[0].diagram, "naturality (a, b)");
}

#[test]
fn chain_enriched_full_subcategory() {
    let c = ChainCosmos::new(Fp::new(3).unwrap());
    let objs = vec![c.disk(CosmosObject::new(1)), c.sphere(CosmosObject::new(1)).shift(1), c.unit()];
    let cat = VCategory::full_sub_cosmos(c, vec!["D".into(), "S1".into(), "I".into()], objs).unwrap();
    let report = cat.check_axioms();
    assert!(report.is_valid(), "{:?}", report.failures.first());
    assert!(cat.opposite().unwrap().check_axioms().is_valid());
    let u = cat.underlying(DEFAULT_ENUMERATION_DIM).unwrap();
    // End(S(I)) = F_3
    assert_eq!(u.category.hom(2, 2).len(), 3);
    let _ = c.field();
}
