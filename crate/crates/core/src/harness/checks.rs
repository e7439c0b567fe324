use crate::enriched::FiniteCategory;
use crate::error::{Error, Result};
use crate::kan::PresheafOperator;
use crate::limits::{conical_colimit, weighted_colimit_map_diagram, PresheafFunctor};
use crate::linalg::FpMatrix;
use crate::presheaf::{factor_through_epi, factor_through_mono, FunctorCat, FunctorMorphism, Presheaf, PresheafCat};

use super::report::{block_diag, Certificate, CheckResult, Verdict, FILTERED_SCOPE};

/// Two parallel morphisms between probe objects.
#[derive(Clone, Debug)]
pub struct ParallelPair {
    pub src: usize,
    pub dst: usize,
    pub g1: FunctorMorphism,
    pub g2: FunctorMorphism,
}

#[derive(Clone, Debug)]
pub struct ProbeMorphism {
    pub src: usize,
    pub dst: usize,
    pub f: FunctorMorphism,
}

/// A candidate generating set with the probes it is tested against.
#[derive(Clone, Debug)]
pub struct GeneratorProbe {
    pub cat: PresheafCat,
    pub generators: Vec<Presheaf>,
    pub objects: Vec<Presheaf>,
    pub pairs: Vec<ParallelPair>,
    pub morphisms: Vec<ProbeMorphism>,
}

impl GeneratorProbe {
    /// Checks that every probe is a presheaf and every morphism natural.
    pub fn new(
        cat: PresheafCat,
        generators: Vec<Presheaf>,
        objects: Vec<Presheaf>,
        pairs: Vec<ParallelPair>,
        morphisms: Vec<ProbeMorphism>,
    ) -> Result<Self> {
        for p in generators.iter().chain(&objects) {
            cat.check(p).into_result("probe object")?;
        }
        let lookup = |i: usize| {
            objects
                .get(i)
                .ok_or_else(|| Error::UnknownObject(format!("probe object {i}")))
        };
        for pair in &pairs {
            let (x, y) = (lookup(pair.src)?, lookup(pair.dst)?);
            cat.check_natural(x, y, &pair.g1)?;
            cat.check_natural(x, y, &pair.g2)?;
        }
        for m in &morphisms {
            cat.check_natural(lookup(m.src)?, lookup(m.dst)?, &m.f)?;
        }
        Ok(Self {
            cat,
            generators,
            objects,
            pairs,
            morphisms,
        })
    }
}

fn capped_hom(cat: &FunctorCat, s: &Presheaf, x: &Presheaf, max_dim: usize) -> Result<crate::presheaf::HomObject> {
    let hom = cat.functor_hom(s, x)?;
    if hom.dim() > max_dim {
        return Err(Error::EnumerationCap(format!(
            "hom-set of dimension {} exceeds the cap {max_dim}",
            hom.dim()
        )));
    }
    Ok(hom)
}

/// For each probe pair `g₁ ≠ g₂ : X → Y`, looks for a generator `s` and
/// `f : s → X` with `g₁ f ≠ g₂ f`. By linearity it suffices to try a basis
/// of each hom-set.
pub fn check_jointly_faithful(probe: &GeneratorProbe, max_dim: usize) -> Result<CheckResult> {
    let cat = &probe.cat;
    let mut certs = Vec::new();
    let mut failing = Vec::new();
    for (i, pair) in probe.pairs.iter().enumerate() {
        if pair.g1 == pair.g2 {
            continue;
        }
        let x = &probe.objects[pair.src];
        let mut witness = None;
        let mut all_lhs = Vec::new();
        let mut all_rhs = Vec::new();
        'search: for (si, s) in probe.generators.iter().enumerate() {
            for f in capped_hom(cat, s, x, max_dim)?.basis()? {
                let (l, r) = (pair.g1.after(&f)?, pair.g2.after(&f)?);
                if l != r {
                    witness = Some((si, l, r));
                    break 'search;
                }
                all_lhs.push(block_diag(&l));
                all_rhs.push(block_diag(&r));
            }
        }
        match witness {
            Some((si, l, r)) => certs.push(Certificate::Distinct {
                label: format!("pair {i} separated by a map out of generator {si}"),
                lhs: block_diag(&l),
                rhs: block_diag(&r),
            }),
            None => {
                failing.push(i);
                let fp = cat.fp();
                let stack = |ms: &[FpMatrix]| FpMatrix::block_diag(fp, ms);
                certs.push(Certificate::Equal {
                    label: format!("pair {i}: g1 f = g2 f for every basis map f out of every generator"),
                    lhs: stack(&all_lhs),
                    rhs: stack(&all_rhs),
                });
                certs.push(Certificate::Distinct {
                    label: format!("pair {i}: g1 and g2 differ"),
                    lhs: block_diag(&pair.g1),
                    rhs: block_diag(&pair.g2),
                });
            }
        }
    }
    let detail = if failing.is_empty() {
        format!("{} probe pairs separated", probe.pairs.len())
    } else {
        format!("no separating map for probe pairs {failing:?}")
    };
    Ok(CheckResult::new(
        "generators-faithful",
        "Hom(s, -) over the generating set is jointly faithful",
        Verdict::from_bool(failing.is_empty()),
        detail,
        certs,
    ))
}

/// `Hom(s, f) : Hom(s, X) → Hom(s, Y)` in hom-object coordinates.
pub fn hom_action(cat: &FunctorCat, s: &Presheaf, x: &Presheaf, y: &Presheaf, f: &FunctorMorphism, max_dim: usize) -> Result<FpMatrix> {
    let hx = capped_hom(cat, s, x, max_dim)?;
    let hy = capped_hom(cat, s, y, max_dim)?;
    let mut m = FpMatrix::zeros(cat.fp(), hy.dim(), hx.dim());
    for (k, g) in hx.basis()?.iter().enumerate() {
        m.paste(0, k, &FpMatrix::column(cat.fp(), &hy.coords(&f.after(g)?)?));
    }
    Ok(m)
}

/// For each probe morphism: if every `Hom(s, f)` is invertible then `f` must be.
pub fn check_jointly_conservative(probe: &GeneratorProbe, max_dim: usize) -> Result<CheckResult> {
    let cat = &probe.cat;
    let mut certs = Vec::new();
    let mut failing = Vec::new();
    for (i, m) in probe.morphisms.iter().enumerate() {
        let (x, y) = (&probe.objects[m.src], &probe.objects[m.dst]);
        let mut all_iso = true;
        let mut local = Vec::new();
        for (si, s) in probe.generators.iter().enumerate() {
            let c = Certificate::for_matrix(format!("morphism {i}: Hom(s{si}, f)"), hom_action(cat, s, x, y, &m.f, max_dim)?);
            all_iso &= c.is_inverse();
            let stop = !c.is_inverse();
            local.push(c);
            if stop {
                break;
            }
        }
        if all_iso {
            let c = Certificate::for_morphism(format!("morphism {i}: f"), &m.f);
            if !c.is_inverse() {
                failing.push(i);
            }
            local.push(c);
        }
        certs.extend(local);
    }
    let detail = if failing.is_empty() {
        format!("{} probe morphisms", probe.morphisms.len())
    } else {
        format!("morphisms {failing:?} are inverted by every Hom(s, -) but are not invertible")
    };
    Ok(CheckResult::new(
        "generators-conservative",
        "Hom(s, -) over the generating set is jointly conservative",
        Verdict::from_bool(failing.is_empty()),
        detail,
        certs,
    ))
}

/// Kernel, cokernel, coimage, image and the canonical comparison of `f`.
#[derive(Clone, Debug)]
pub struct KernelCokernel {
    pub kernel: Presheaf,
    pub kernel_inclusion: FunctorMorphism,
    pub cokernel: Presheaf,
    pub cokernel_projection: FunctorMorphism,
    pub coimage: Presheaf,
    pub coimage_projection: FunctorMorphism,
    pub image: Presheaf,
    pub image_inclusion: FunctorMorphism,
    /// `Coker(Ker f → P) → Ker(Q → Coker f)`
    pub canonical: FunctorMorphism,
}

pub fn kernel_cokernel(cat: &FunctorCat, p: &Presheaf, q: &Presheaf, f: &FunctorMorphism) -> Result<KernelCokernel> {
    cat.check_natural(p, q, f)?;
    let (kernel, kernel_inclusion) = cat.kernel(p, f)?;
    let (cokernel, cokernel_projection) = cat.cokernel(q, f)?;
    let (coimage, coimage_projection) = cat.cokernel(p, &kernel_inclusion)?;
    let (image, image_inclusion) = cat.kernel(q, &cokernel_projection)?;
    let through_coimage = factor_through_epi(&coimage_projection, f)?;
    let canonical = factor_through_mono(&image_inclusion, &through_coimage)?;
    Ok(KernelCokernel {
        kernel,
        kernel_inclusion,
        cokernel,
        cokernel_projection,
        coimage,
        coimage_projection,
        image,
        image_inclusion,
        canonical,
    })
}

/// The canonical map `Coker(Ker f) → Ker(Coker f)` is invertible for every probe.
pub fn homomorphism_theorem_check(cat: &FunctorCat, probes: &[(Presheaf, Presheaf, FunctorMorphism)]) -> CheckResult {
    const ID: &str = "iv";
    const STATEMENT: &str = "homomorphism theorem: Coker(Ker f) -> Ker(Coker f) is invertible";
    let mut certs = Vec::new();
    let mut failing = Vec::new();
    for (i, (p, q, f)) in probes.iter().enumerate() {
        let kc = match kernel_cokernel(cat, p, q, f) {
            Ok(kc) => kc,
            Err(e) => return CheckResult::errored(ID, STATEMENT, &e),
        };
        let c = Certificate::for_morphism(format!("probe {i}: canonical comparison"), &kc.canonical);
        if !c.is_inverse() {
            failing.push(i);
        }
        certs.push(c);
        let factored = kc
            .image_inclusion
            .after(&kc.canonical)
            .and_then(|m| m.after(&kc.coimage_projection));
        match factored {
            Ok(m) => certs.push(Certificate::Equal {
                label: format!("probe {i}: image inclusion . comparison . coimage projection = f"),
                lhs: block_diag(&m),
                rhs: block_diag(f),
            }),
            Err(e) => return CheckResult::errored(ID, STATEMENT, &e),
        }
    }
    let detail = if failing.is_empty() {
        format!("{} probe morphisms", probes.len())
    } else {
        format!("comparison not invertible for probes {failing:?}")
    };
    CheckResult::new(ID, STATEMENT, Verdict::from_bool(failing.is_empty()), detail, certs)
}

/// Finite weights to test left exactness against: kernels of the listed
/// morphisms, binary products, and cotensors with `F_p^n`.
#[derive(Clone, Debug, Default)]
pub struct FiniteWeightFamily {
    pub kernels: Vec<(Presheaf, Presheaf, FunctorMorphism)>,
    pub products: Vec<(Presheaf, Presheaf)>,
    pub cotensors: Vec<(usize, Presheaf)>,
}

/// `S(Ker f) → Ker(S f)`.
pub fn kernel_comparison(s: &dyn PresheafOperator, p: &Presheaf, q: &Presheaf, f: &FunctorMorphism) -> Result<FunctorMorphism> {
    let (k, inc) = s.source().kernel(p, f)?;
    let sp = s.apply(p)?;
    let sf = s.apply_mor(p, q, f)?;
    let sinc = s.apply_mor(&k, p, &inc)?;
    let (_, iota) = s.target().kernel(&sp, &sf)?;
    factor_through_mono(&iota, &sinc)
}

/// `S(P ⊕ Q) → S P ⊕ S Q` with components `(S π₁, S π₂)`.
pub fn product_comparison(s: &dyn PresheafOperator, p: &Presheaf, q: &Presheaf) -> Result<FunctorMorphism> {
    let (sum, _, projections) = s.source().direct_sum(&[p.clone(), q.clone()])?;
    let a = s.apply_mor(&sum, p, &projections[0])?;
    let b = s.apply_mor(&sum, q, &projections[1])?;
    Ok(FunctorMorphism {
        components: a
            .components
            .iter()
            .zip(&b.components)
            .map(|(x, y)| x.vstack(y))
            .collect::<Result<_>>()?,
    })
}

/// `S(X ⋔ P) → X ⋔ S P`, assembled from the images of the evaluations.
pub fn cotensor_comparison(s: &dyn PresheafOperator, x: usize, p: &Presheaf) -> Result<FunctorMorphism> {
    let src = s.source();
    let xp = src.cotensor(x, p)?;
    let evals = (0..x)
        .map(|k| s.apply_mor(&xp, p, &src.cotensor_evaluation(x, p, k)))
        .collect::<Result<Vec<_>>>()?;
    let sxp = s.apply(&xp)?;
    let sp = s.apply(p)?;
    let fp = src.fp();
    let components = (0..s.target().n())
        .map(|b| FpMatrix::from_fn(fp, sp.value(b) * x, sxp.value(b), |row, col| evals[row % x].component(b).get(row / x, col)))
        .collect();
    Ok(FunctorMorphism { components })
}

/// Builds each comparison for the family and tests it for invertibility.
pub fn left_exactness_check(s: &dyn PresheafOperator, family: &FiniteWeightFamily) -> CheckResult {
    const ID: &str = "S-left-exact";
    let statement = format!("{} preserves kernels, binary products and finite cotensors", s.name());
    let mut certs = Vec::new();
    let mut failing = Vec::new();
    let mut record = |label: String, c: Result<FunctorMorphism>| -> Result<()> {
        let c = Certificate::for_morphism(label.clone(), &c?);
        if !c.is_inverse() {
            failing.push(label);
        }
        certs.push(c);
        Ok(())
    };
    let run = (|| -> Result<()> {
        for (i, (p, q, f)) in family.kernels.iter().enumerate() {
            record(format!("kernel probe {i}"), kernel_comparison(s, p, q, f))?;
        }
        for (i, (p, q)) in family.products.iter().enumerate() {
            record(format!("product probe {i}"), product_comparison(s, p, q))?;
        }
        for (i, (x, p)) in family.cotensors.iter().enumerate() {
            record(format!("cotensor probe {i} with F_p^{x}"), cotensor_comparison(s, *x, p))?;
        }
        Ok(())
    })();
    if let Err(e) = run {
        return CheckResult::errored(ID, statement, &e);
    }
    let detail = if failing.is_empty() {
        format!(
            "{} kernel, {} product and {} cotensor comparisons inverted",
            family.kernels.len(),
            family.products.len(),
            family.cotensors.len()
        )
    } else {
        format!("not invertible: {}", failing.join(", "))
    };
    CheckResult::new(ID, statement, Verdict::from_bool(failing.is_empty()), detail, certs)
}

/// A natural transformation `α : F ⇒ G` between diagrams out of the same
/// free V-category.
#[derive(Clone, Debug)]
pub struct FilteredDiagram {
    pub source: PresheafFunctor,
    pub target: PresheafFunctor,
    pub alpha: Vec<FunctorMorphism>,
}

impl FilteredDiagram {
    pub fn new(source: PresheafFunctor, target: PresheafFunctor, alpha: Vec<FunctorMorphism>) -> Result<Self> {
        let j = source.source();
        let ps = source.target();
        for a in 0..j.len() {
            ps.check_natural(source.image(a), target.image(a), &alpha[a])?;
            for b in 0..j.len() {
                for e in 0..j.hom(a, b).dim {
                    let lhs = alpha[b].after(source.map_basis(a, b, e))?;
                    let rhs = target.map_basis(a, b, e).after(&alpha[a])?;
                    if lhs != rhs {
                        return Err(Error::Verification(format!(
                            "transformation is not natural at ({}, {})",
                            j.label(a),
                            j.label(b)
                        )));
                    }
                }
            }
        }
        Ok(Self { source, target, alpha })
    }
}

/// The diagram `j ↦ Ker α_j` with its inclusion.
pub fn kernel_diagram(d: &FilteredDiagram) -> Result<(PresheafFunctor, Vec<FunctorMorphism>)> {
    let f = &d.source;
    let ps = f.target();
    let kernels = (0..f.source().len())
        .map(|a| ps.kernel(f.image(a), &d.alpha[a]))
        .collect::<Result<Vec<_>>>()?;
    let incs: Vec<FunctorMorphism> = kernels.iter().map(|k| k.1.clone()).collect();
    let k = PresheafFunctor::new(
        f.source().clone(),
        ps.clone(),
        kernels.into_iter().map(|k| k.0).collect(),
        |a, b| {
            (0..f.source().hom(a, b).dim)
                .map(|e| factor_through_mono(&incs[b], &f.map_basis(a, b, e).after(&incs[a])?))
                .collect()
        },
    )?;
    Ok((k, incs))
}

/// The diagram `j ↦ F j ⊕ G j` with its two projections.
pub fn sum_diagram(f: &PresheafFunctor, g: &PresheafFunctor) -> Result<(PresheafFunctor, Vec<FunctorMorphism>, Vec<FunctorMorphism>)> {
    let ps = f.target();
    let n = f.source().len();
    let sums = (0..n)
        .map(|a| ps.direct_sum(&[f.image(a).clone(), g.image(a).clone()]))
        .collect::<Result<Vec<_>>>()?;
    let d = PresheafFunctor::new(f.source().clone(), ps.clone(), sums.iter().map(|s| s.0.clone()).collect(), |a, b| {
        (0..f.source().hom(a, b).dim)
            .map(|e| {
                let (ia, ib) = (&sums[a], &sums[b]);
                let x = ib.1[0].after(f.map_basis(a, b, e))?.after(&ia.2[0])?;
                let y = ib.1[1].after(g.map_basis(a, b, e))?.after(&ia.2[1])?;
                x.add(&y)
            })
            .collect()
    })?;
    let p1 = sums.iter().map(|s| s.2[0].clone()).collect();
    let p2 = sums.iter().map(|s| s.2[1].clone()).collect();
    Ok((d, p1, p2))
}

/// Conical colimits over a finite filtered category commute with kernels
/// and binary products of the supplied diagrams. A category failing one of
/// the filteredness conditions is rejected with that condition named.
pub fn filtered_exactness_probe(j: &FiniteCategory, diagrams: &[FilteredDiagram]) -> Result<CheckResult> {
    j.check_filtered()?;
    let mut certs = Vec::new();
    let mut failing = Vec::new();
    for (i, d) in diagrams.iter().enumerate() {
        let ps = d.source.target();
        let col_f = conical_colimit(&d.source)?;
        let col_g = conical_colimit(&d.target)?;
        let col_alpha = weighted_colimit_map_diagram(&col_f, &col_g, &d.alpha, &d.source)?;

        let (k, incs) = kernel_diagram(d)?;
        let col_k = conical_colimit(&k)?;
        let col_inc = weighted_colimit_map_diagram(&col_k, &col_f, &incs, &k)?;
        let (_, iota) = ps.kernel(&col_f.object, &col_alpha)?;
        let c = Certificate::for_morphism(format!("diagram {i}: colim Ker -> Ker colim"), &factor_through_mono(&iota, &col_inc)?);
        if !c.is_inverse() {
            failing.push(format!("kernel {i}"));
        }
        certs.push(c);

        let (s, p1, p2) = sum_diagram(&d.source, &d.target)?;
        let col_s = conical_colimit(&s)?;
        let a = weighted_colimit_map_diagram(&col_s, &col_f, &p1, &s)?;
        let b = weighted_colimit_map_diagram(&col_s, &col_g, &p2, &s)?;
        let cmp = FunctorMorphism {
            components: a
                .components
                .iter()
                .zip(&b.components)
                .map(|(x, y)| x.vstack(y))
                .collect::<Result<_>>()?,
        };
        let c = Certificate::for_morphism(format!("diagram {i}: colim (F + G) -> colim F + colim G"), &cmp);
        if !c.is_inverse() {
            failing.push(format!("product {i}"));
        }
        certs.push(c);
    }
    let detail = if failing.is_empty() {
        format!("{} diagrams over a filtered category with {} objects", diagrams.len(), j.objects().len())
    } else {
        format!("not invertible: {}", failing.join(", "))
    };
    Ok(CheckResult::new(
        "v",
        "conical filtered colimits are left exact",
        Verdict::from_bool(failing.is_empty()),
        detail,
        certs,
    )
    .with_scope(FILTERED_SCOPE))
}
