//! Ready-made Gabriel–Popescu instances over the bundled categories.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::enriched::{examples, FiniteCategory, VCategory};
use crate::cosmos::FinVect;
use crate::error::Result;
use crate::kan::NerveRealization;
use crate::limits::PresheafFunctor;
use crate::linalg::Fp;
use crate::presheaf::{FunctorMorphism, Presheaf, PresheafCat};

use super::checks::{FilteredDiagram, FiniteWeightFamily, GeneratorProbe, ParallelPair, ProbeMorphism};
use super::gp::GpInstance;
use super::report::{PresheafRecord, ProbeInventory};

/// Sizes of the random probe families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeConfig {
    pub seed: u64,
    pub random_objects: usize,
    pub random_morphisms: usize,
    pub max_dim: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            random_objects: 2,
            random_morphisms: 50,
            max_dim: 8,
        }
    }
}

/// Hand-picked probes that go in front of the random ones.
#[derive(Clone, Debug, Default)]
pub struct SpecialProbes {
    pub objects: Vec<(String, Presheaf)>,
    /// Parallel pairs between `objects`, by index.
    pub pairs: Vec<(usize, usize, FunctorMorphism, FunctorMorphism)>,
    pub morphisms: Vec<(usize, usize, FunctorMorphism)>,
}

/// `{1, e}` with `e·e = e`: filtered, with no terminal object.
pub fn idempotent_monoid() -> FiniteCategory {
    FiniteCategory::monoid(&["1", "e"], |a, b| if a == 0 && b == 0 { 0 } else { 1 }).expect("idempotent monoid")
}

fn split_idempotent_diagram(a: &PresheafCat, p: &Presheaf, q: &Presheaf) -> Result<(PresheafFunctor, Vec<FunctorMorphism>, Vec<FunctorMorphism>)> {
    let l = idempotent_monoid();
    let (sum, inj, pr) = a.direct_sum(&[p.clone(), q.clone()])?;
    let e = inj[0].after(&pr[0])?;
    let d = PresheafFunctor::from_ordinary(a, &l, vec![sum.clone()], &[a.identity(&sum), e])?;
    Ok((d, inj, pr))
}

/// Diagrams over `{1, e}` and over `0 ≤ 1` with natural maps between them.
pub fn filtered_probes<R: Rng>(
    a: &PresheafCat,
    objects: &[Presheaf],
    rng: &mut R,
) -> Result<Vec<(FiniteCategory, Vec<FilteredDiagram>)>> {
    let pick = |rng: &mut R| objects[rng.gen_range(0..objects.len())].clone();
    let mut monoid = Vec::new();
    for _ in 0..2 {
        let (p, p2, q, q2) = (pick(rng), pick(rng), pick(rng), pick(rng));
        let (src, _, pr) = split_idempotent_diagram(a, &p, &p2)?;
        let (dst, inj, _) = split_idempotent_diagram(a, &q, &q2)?;
        let phi = a.random_morphism(rng, &p, &q)?;
        let psi = a.random_morphism(rng, &p2, &q2)?;
        let alpha = inj[0].after(&phi)?.after(&pr[0])?.add(&inj[1].after(&psi)?.after(&pr[1])?)?;
        monoid.push(FilteredDiagram::new(src, dst, vec![alpha])?);
    }
    let l = FiniteCategory::poset(&["0", "1"], &[(0, 1)])?;
    let mut chain = Vec::new();
    for _ in 0..2 {
        let (p, q) = (pick(rng), pick(rng));
        let f = a.random_morphism(rng, &p, &q)?;
        let arrows_of = |first: &Presheaf, second: &Presheaf, m: &FunctorMorphism| -> Vec<FunctorMorphism> {
            l.arrows()
                .iter()
                .map(|arr| match (arr.src, arr.dst) {
                    (0, 0) => a.identity(first),
                    (1, 1) => a.identity(second),
                    _ => m.clone(),
                })
                .collect()
        };
        let src = PresheafFunctor::from_ordinary(a, &l, vec![p.clone(), q.clone()], &arrows_of(&p, &q, &f))?;
        let id_q = a.identity(&q);
        let dst = PresheafFunctor::from_ordinary(a, &l, vec![q.clone(), q.clone()], &arrows_of(&q, &q, &id_q))?;
        chain.push(FilteredDiagram::new(src, dst, vec![f, id_q])?);
    }
    Ok(vec![(idempotent_monoid(), monoid), (l, chain)])
}

/// Builds an instance for the full subcategory of `[B^op, V]` on
/// `c_objects`, with `F` the inclusion, or the Yoneda embedding when
/// `c_objects` is `None`.
pub fn build_instance(
    title: &str,
    base: VCategory<FinVect>,
    c_objects: Option<Vec<(String, Presheaf)>>,
    generators: Vec<Presheaf>,
    special: SpecialProbes,
    cfg: &ProbeConfig,
) -> Result<GpInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let a = PresheafCat::new(base)?;
    let f = match c_objects {
        None => PresheafFunctor::yoneda(&a)?,
        Some(objs) => {
            let (labels, objects) = objs.into_iter().unzip();
            PresheafFunctor::inclusion(&a, labels, objects)?
        }
    };
    let realization = NerveRealization::new(f)?;
    let c = realization.source().clone();

    let mut named: Vec<(String, Presheaf)> = special.objects.clone();
    for i in 0..cfg.random_objects {
        named.push((format!("random-{i}"), a.random_functor(&mut rng, 2, 1)?));
    }
    let objects: Vec<Presheaf> = named.iter().map(|(_, p)| p.clone()).collect();

    let mut source_probes: Vec<Presheaf> = (0..c.base().len()).map(|x| c.yoneda_object(x)).collect::<Result<_>>()?;
    for _ in 0..cfg.random_objects {
        source_probes.push(c.random_functor(&mut rng, 2, 1)?);
    }

    let mut morphisms: Vec<(Presheaf, Presheaf, FunctorMorphism)> = special
        .morphisms
        .iter()
        .map(|(s, t, m)| (objects[*s].clone(), objects[*t].clone(), m.clone()))
        .collect();
    let mut probe_morphisms: Vec<ProbeMorphism> = special
        .morphisms
        .iter()
        .map(|(s, t, m)| ProbeMorphism { src: *s, dst: *t, f: m.clone() })
        .collect();
    let mut pairs: Vec<ParallelPair> = special
        .pairs
        .iter()
        .map(|(s, t, g1, g2)| ParallelPair {
            src: *s,
            dst: *t,
            g1: g1.clone(),
            g2: g2.clone(),
        })
        .collect();
    for k in 0..cfg.random_morphisms {
        let (s, t) = (rng.gen_range(0..objects.len()), rng.gen_range(0..objects.len()));
        let m = a.random_morphism(&mut rng, &objects[s], &objects[t])?;
        if k % 5 == 0 {
            let m2 = a.random_morphism(&mut rng, &objects[s], &objects[t])?;
            pairs.push(ParallelPair {
                src: s,
                dst: t,
                g1: m.clone(),
                g2: m2,
            });
            probe_morphisms.push(ProbeMorphism { src: s, dst: t, f: m.clone() });
        }
        morphisms.push((objects[s].clone(), objects[t].clone(), m));
    }
    let gens = GeneratorProbe::new(a.clone(), generators, objects.clone(), pairs, probe_morphisms)?;

    let mut family = FiniteWeightFamily::default();
    for k in 0..2 {
        let (p, q) = (&source_probes[k % source_probes.len()], &source_probes[(k + 1) % source_probes.len()]);
        family.kernels.push((p.clone(), q.clone(), c.random_morphism(&mut rng, p, q)?));
        family.products.push((p.clone(), q.clone()));
    }
    family.cotensors.push((2, source_probes[0].clone()));

    let filtered = filtered_probes(&a, &objects, &mut rng)?;
    let inventory = ProbeInventory {
        seed: Some(cfg.seed),
        notes: vec![
            format!("{} objects of A, {} presheaves on C", objects.len(), source_probes.len()),
            format!("{} probe morphisms", morphisms.len()),
        ],
        presheaves: named.iter().map(|(l, p)| PresheafRecord::new(l.clone(), p)).collect(),
    };
    Ok(GpInstance {
        title: title.to_string(),
        realization,
        generators: gens,
        source_probes,
        target_probes: objects,
        exactness_family: family,
        morphisms,
        cotensor_dims: vec![0, 2],
        filtered,
        rejected: vec![FiniteCategory::parallel_pair(), FiniteCategory::discrete(&["p", "q"])],
        max_dim: cfg.max_dim,
        inventory,
    })
}

/// `R = F_p[x]/(x²)`, the simple module `k = xR ⊂ R`, the pair
/// `id, 1 + x` on `R` and the inclusion `k → R`.
pub fn dual_number_probes(a: &PresheafCat) -> Result<(Presheaf, Presheaf, SpecialProbes)> {
    let y = PresheafFunctor::yoneda(a)?;
    let r = y.image(0).clone();
    let mx = y.map_basis(0, 0, 1).clone();
    let (k, j) = a.image(&r, &mx)?;
    let id = a.identity(&r);
    let special = SpecialProbes {
        objects: vec![("R".into(), r.clone()), ("k".into(), k.clone())],
        pairs: vec![(0, 0, id.clone(), id.add(&mx)?)],
        morphisms: vec![(1, 0, j), (0, 0, mx)],
    };
    Ok((r, k, special))
}

/// Right modules over the dual numbers, with `C` the algebra itself.
pub fn dual_numbers_instance(fp: Fp, cfg: &ProbeConfig) -> Result<GpInstance> {
    let base = examples::dual_numbers(fp);
    let a = PresheafCat::new(base.clone())?;
    let (r, _, special) = dual_number_probes(&a)?;
    build_instance("Gabriel-Popescu: modules over the dual numbers", base, None, vec![r], special, cfg)
}

/// Modules over the dual numbers with `C` the one-object category on the
/// simple module. `k` is not a generator, so the generator checks fail.
pub fn simple_module_instance(fp: Fp, cfg: &ProbeConfig) -> Result<GpInstance> {
    let base = examples::dual_numbers(fp);
    let a = PresheafCat::new(base.clone())?;
    let (_, k, special) = dual_number_probes(&a)?;
    build_instance(
        "Gabriel-Popescu: the simple module over the dual numbers",
        base,
        Some(vec![("k".into(), k.clone())]),
        vec![k],
        special,
        cfg,
    )
}

/// Representations of `a → b`, with `C` the endomorphism category of
/// `y(a) ⊕ y(b)`.
pub fn quiver_instance(fp: Fp, cfg: &ProbeConfig) -> Result<GpInstance> {
    let base = examples::quiver_a_to_b(fp);
    let a = PresheafCat::new(base.clone())?;
    let (ya, yb) = (a.yoneda_object(0)?, a.yoneda_object(1)?);
    let (g, _, _) = a.direct_sum(&[ya.clone(), yb.clone()])?;
    let special = SpecialProbes {
        objects: vec![("y(a)".into(), ya), ("y(b)".into(), yb), ("G".into(), g.clone())],
        pairs: vec![],
        morphisms: vec![],
    };
    build_instance(
        "Gabriel-Popescu: representations of a -> b",
        base,
        Some(vec![("G".into(), g.clone())]),
        vec![g],
        special,
        cfg,
    )
}
