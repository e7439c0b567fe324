//! Left Kan extensions, the nerve-realization adjunction, and operators
//! between presheaf categories.

use crate::cosmos::FinVect;
use crate::enriched::{VCategory, VFunctor};
use crate::error::{shape, Error, Result};
use crate::limits::{nerve, nerve_map, weighted_colimit, weighted_colimit_map, PresheafFunctor, WeightedColimit};
use crate::linalg::FpMatrix;
use serde::Serialize;

use crate::presheaf::{FunctorMorphism, Presheaf, PresheafCat};

fn column_into(m: &mut FpMatrix, col: usize, v: &[u32]) {
    for (r, &x) in v.iter().enumerate() {
        m.set(r, col, x);
    }
}

/// The weight `D(K−, d)`, a presheaf on `C`.
fn kan_weight(k: &VFunctor<FinVect>, d: usize) -> Result<Presheaf> {
    let c = k.source();
    let dcat = k.target();
    let ps = PresheafCat::new(c.clone())?;
    let fp = ps.fp();
    let values = (0..c.len()).map(|a| dcat.hom(k.object(a), d).dim).collect();
    ps.functor(values, |a, b| {
        // u ∈ C(b, a) acts by h ↦ h ∘ K(u)
        let (ka, kb) = (k.object(a), k.object(b));
        let mut m = FpMatrix::zeros(fp, dcat.hom(kb, d).dim, 0);
        for u in 0..c.hom(b, a).dim {
            let ku = FpMatrix::column(fp, &k.map(b, a).col(u));
            let block = dcat
                .comp(kb, ka, d)
                .mul(&FpMatrix::identity(fp, dcat.hom(ka, d).dim).kron(&ku)?)?;
            m = m.hstack(&block)?;
        }
        Ok(m)
    })
}

/// `(Lan_K F)(d) = D(K−, d) ⋆ F` for `K : C → D` and `F : C → [B^op, V]`.
pub fn lan_pointwise(k: &VFunctor<FinVect>, f: &PresheafFunctor) -> Result<PresheafFunctor> {
    if k.source() != f.source() {
        return Err(Error::InvalidFunctor("K and F have different sources".into()));
    }
    let dcat = k.target().clone();
    let fp = f.target().fp();
    let weights = (0..dcat.len()).map(|d| kan_weight(k, d)).collect::<Result<Vec<_>>>()?;
    let colimits = weights
        .iter()
        .map(|w| weighted_colimit(w, f))
        .collect::<Result<Vec<_>>>()?;
    let images = colimits.iter().map(|c| c.object.clone()).collect();
    let c = k.source();
    PresheafFunctor::new(dcat.clone(), f.target().clone(), images, |d, d2| {
        (0..dcat.hom(d, d2).dim)
            .map(|e| {
                let ecol = FpMatrix::from_fn(fp, dcat.hom(d, d2).dim, 1, |r, _| u32::from(r == e));
                let psi = FunctorMorphism {
                    components: (0..c.len())
                        .map(|a| {
                            let ka = k.object(a);
                            dcat.comp(ka, d, d2)
                                .mul(&ecol.kron(&FpMatrix::identity(fp, dcat.hom(ka, d).dim))?)
                        })
                        .collect::<Result<_>>()?,
                };
                weighted_colimit_map(&colimits[d], &colimits[d2], &psi, f)
            })
            .collect()
    })
}

/// Whether each `F_{ab} : C(a,b) → [B^op,V](F a, F b)` is invertible.
pub fn is_fully_faithful(f: &PresheafFunctor) -> Result<Vec<((usize, usize), bool)>> {
    let c = f.source();
    let ps = f.target();
    let mut out = Vec::new();
    for a in 0..c.len() {
        for b in 0..c.len() {
            let hom = ps.functor_hom(f.image(a), f.image(b))?;
            let h = c.hom(a, b).dim;
            let mut m = FpMatrix::zeros(ps.fp(), hom.dim(), h);
            for e in 0..h {
                column_into(&mut m, e, &hom.coords(f.map_basis(a, b, e))?);
            }
            out.push(((a, b), m.is_isomorphism().is_some()));
        }
    }
    Ok(out)
}

/// `S ⊣ T` with `S = Lan_y F` and `T = [B^op,V](F−, ?)`.
#[derive(Clone, Debug)]
pub struct NerveRealization {
    f: PresheafFunctor,
    yoneda: PresheafFunctor,
    source: PresheafCat,
}

impl NerveRealization {
    pub fn new(f: PresheafFunctor) -> Result<Self> {
        let source = PresheafCat::new(f.source().clone())?;
        let yoneda = PresheafFunctor::yoneda(&source)?;
        Ok(Self { f, yoneda, source })
    }

    pub fn functor(&self) -> &PresheafFunctor {
        &self.f
    }

    /// Presheaves on `C`.
    pub fn source(&self) -> &PresheafCat {
        &self.source
    }

    /// Presheaves on `B`.
    pub fn target(&self) -> &PresheafCat {
        self.f.target()
    }

    pub fn realize(&self, p: &Presheaf) -> Result<WeightedColimit> {
        weighted_colimit(&nerve(&self.yoneda, p)?, &self.f)
    }

    pub fn realize_map(&self, p: &Presheaf, q: &Presheaf, k: &FunctorMorphism) -> Result<FunctorMorphism> {
        let w = nerve_map(&self.yoneda, p, q, k)?;
        weighted_colimit_map(&self.realize(p)?, &self.realize(q)?, &w, &self.f)
    }

    pub fn nerve(&self, q: &Presheaf) -> Result<Presheaf> {
        nerve(&self.f, q)
    }

    pub fn nerve_map(&self, q: &Presheaf, q2: &Presheaf, h: &FunctorMorphism) -> Result<FunctorMorphism> {
        nerve_map(&self.f, q, q2, h)
    }

    /// `ψ(φ)_c(x) = φ ∘ q ∘ (ν_x ⊗ −)` for `φ : S P → Q`.
    pub fn psi(&self, p: &Presheaf, sp: &WeightedColimit, q: &Presheaf, phi: &FunctorMorphism) -> Result<FunctorMorphism> {
        let base = self.source.base();
        let ps = self.target();
        let components = (0..base.len())
            .map(|c| {
                let yc = self.source.yoneda_object(c)?;
                let nu_hom = self.source.functor_hom(&yc, p)?;
                let tq = ps.functor_hom(self.f.image(c), q)?;
                let mut m = FpMatrix::zeros(ps.fp(), tq.dim(), p.value(c));
                for x in 0..p.value(c) {
                    let nu = self.source.yoneda_element(p, c, x, &nu_hom)?;
                    let leg = sp.leg(c, &nu)?;
                    column_into(&mut m, x, &tq.coords(&phi.after(&leg)?)?);
                }
                Ok(m)
            })
            .collect::<Result<_>>()?;
        Ok(FunctorMorphism { components })
    }

    /// `ψ : [B^op,V](S P, Q) → [C^op,V](P, T Q)` in hom-object coordinates.
    pub fn hom_iso(&self, p: &Presheaf, q: &Presheaf) -> Result<FpMatrix> {
        let sp = self.realize(p)?;
        let tq = self.nerve(q)?;
        let src = self.target().functor_hom(&sp.object, q)?;
        let dst = self.source.functor_hom(p, &tq)?;
        let mut m = FpMatrix::zeros(self.source.fp(), dst.dim(), src.dim());
        for (k, phi) in src.basis()?.iter().enumerate() {
            column_into(&mut m, k, &dst.coords(&self.psi(p, &sp, q, phi)?)?);
        }
        Ok(m)
    }

    /// `η_P = ψ(1_{S P}) : P → T S P`.
    pub fn unit(&self, p: &Presheaf) -> Result<FunctorMorphism> {
        let sp = self.realize(p)?;
        self.psi(p, &sp, &sp.object, &self.target().identity(&sp.object))
    }

    /// `ε_Q = ψ⁻¹(1_{T Q}) : S T Q → Q`.
    pub fn counit(&self, q: &Presheaf) -> Result<FunctorMorphism> {
        let tq = self.nerve(q)?;
        let stq = self.realize(&tq)?;
        let iso = self
            .hom_iso(&tq, q)?
            .is_isomorphism()
            .ok_or_else(|| Error::Verification("hom isomorphism is not invertible".into()))?;
        let id = self.source.functor_hom(&tq, &tq)?.coords(&self.source.identity(&tq))?;
        let src = self.target().functor_hom(&stq.object, q)?;
        src.morphism(&iso.apply(&id)?)
    }
}

/// A stored hom isomorphism `ψ_{P,Q}` with its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomIsoCertificate {
    pub p: usize,
    pub q: usize,
    pub matrix: FpMatrix,
    pub inverse: FpMatrix,
}

impl HomIsoCertificate {
    pub fn reverify(&self) -> bool {
        let fp = self.matrix.fp();
        let ok = |m: Result<FpMatrix>| m.map(|m| m == FpMatrix::identity(fp, m.rows())).unwrap_or(false);
        ok(self.matrix.mul(&self.inverse)) && ok(self.inverse.mul(&self.matrix))
    }
}

/// Everything checked about `S ⊣ T` on a probe family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionWitness {
    pub hom_isos: Vec<HomIsoCertificate>,
    pub naturality_squares: usize,
    pub triangles: usize,
}

impl NerveRealization {
    /// Checks every `ψ_{P,Q}` on the probes for invertibility, naturality in
    /// both variables over hom-object bases, and both triangle identities.
    pub fn witness(&self, ps: &[Presheaf], qs: &[Presheaf]) -> Result<AdjunctionWitness> {
        let src = &self.source;
        let tgt = self.target();
        let fail = |what: String| Error::Verification(what);
        let mut hom_isos = Vec::new();
        for (i, p) in ps.iter().enumerate() {
            for (j, q) in qs.iter().enumerate() {
                let matrix = self.hom_iso(p, q)?;
                let inverse = matrix
                    .is_isomorphism()
                    .ok_or_else(|| fail(format!("hom isomorphism at probe pair ({i}, {j}) is not invertible")))?;
                hom_isos.push(HomIsoCertificate { p: i, q: j, matrix, inverse });
            }
        }
        let mut naturality_squares = 0;
        let sps = ps.iter().map(|p| self.realize(p)).collect::<Result<Vec<_>>>()?;
        let tqs = qs.iter().map(|q| self.nerve(q)).collect::<Result<Vec<_>>>()?;
        for (a, qa) in qs.iter().enumerate() {
            for (b, qb) in qs.iter().enumerate() {
                for h in tgt.functor_hom(qa, qb)?.basis()? {
                    let th = nerve_map(&self.f, qa, qb, &h)?;
                    for (i, p) in ps.iter().enumerate() {
                        for phi in tgt.functor_hom(&sps[i].object, qa)?.basis()? {
                            let lhs = self.psi(p, &sps[i], qb, &h.after(&phi)?)?;
                            let rhs = th.after(&self.psi(p, &sps[i], qa, &phi)?)?;
                            if lhs != rhs {
                                return Err(fail(format!("naturality in the second variable fails at probe pair ({i}, {a}) → ({i}, {b})")));
                            }
                            naturality_squares += 1;
                        }
                    }
                }
            }
        }
        for (a, pa) in ps.iter().enumerate() {
            for (b, pb) in ps.iter().enumerate() {
                for k in src.functor_hom(pa, pb)?.basis()? {
                    let sk = self.realize_map(pa, pb, &k)?;
                    for (j, q) in qs.iter().enumerate() {
                        for phi in tgt.functor_hom(&sps[b].object, q)?.basis()? {
                            let lhs = self.psi(pa, &sps[a], q, &phi.after(&sk)?)?;
                            let rhs = self.psi(pb, &sps[b], q, &phi)?.after(&k)?;
                            if lhs != rhs {
                                return Err(fail(format!("naturality in the first variable fails at probe pair ({b}, {j}) → ({a}, {j})")));
                            }
                            naturality_squares += 1;
                        }
                    }
                }
            }
        }
        let mut triangles = 0;
        for (i, p) in ps.iter().enumerate() {
            let sp = &sps[i].object;
            let eta = self.unit(p)?;
            let tsp = self.nerve(sp)?;
            let lhs = self.counit(sp)?.after(&self.realize_map(p, &tsp, &eta)?)?;
            if lhs != tgt.identity(sp) {
                return Err(fail(format!("first triangle identity fails at probe {i}")));
            }
            triangles += 1;
        }
        for (j, q) in qs.iter().enumerate() {
            let tq = &tqs[j];
            let stq = self.realize(tq)?.object;
            let lhs = nerve_map(&self.f, &stq, q, &self.counit(q)?)?.after(&self.unit(tq)?)?;
            if lhs != src.identity(tq) {
                return Err(fail(format!("second triangle identity fails at probe {j}")));
            }
            triangles += 1;
        }
        Ok(AdjunctionWitness {
            hom_isos,
            naturality_squares,
            triangles,
        })
    }
}

/// A V-functor between presheaf categories, given by its action on objects
/// and morphisms.
pub trait PresheafOperator {
    fn name(&self) -> String;
    fn source(&self) -> &PresheafCat;
    fn target(&self) -> &PresheafCat;
    fn apply(&self, p: &Presheaf) -> Result<Presheaf>;
    fn apply_mor(&self, p: &Presheaf, q: &Presheaf, f: &FunctorMorphism) -> Result<FunctorMorphism>;
}

#[derive(Clone, Debug)]
pub struct IdentityOperator(pub PresheafCat);

impl PresheafOperator for IdentityOperator {
    fn name(&self) -> String {
        "identity".into()
    }

    fn source(&self) -> &PresheafCat {
        &self.0
    }

    fn target(&self) -> &PresheafCat {
        &self.0
    }

    fn apply(&self, p: &Presheaf) -> Result<Presheaf> {
        Ok(p.clone())
    }

    fn apply_mor(&self, _: &Presheaf, _: &Presheaf, f: &FunctorMorphism) -> Result<FunctorMorphism> {
        Ok(f.clone())
    }
}

impl PresheafOperator for NerveRealization {
    fn name(&self) -> String {
        "realization".into()
    }

    fn source(&self) -> &PresheafCat {
        &self.source
    }

    fn target(&self) -> &PresheafCat {
        self.f.target()
    }

    fn apply(&self, p: &Presheaf) -> Result<Presheaf> {
        Ok(self.realize(p)?.object)
    }

    fn apply_mor(&self, p: &Presheaf, q: &Presheaf, f: &FunctorMorphism) -> Result<FunctorMorphism> {
        self.realize_map(p, q, f)
    }
}

/// `P ↦ X ⊗ P` for `X` of the given dimension.
#[derive(Clone, Debug)]
pub struct TensorWith {
    pub cat: PresheafCat,
    pub dim: usize,
}

impl PresheafOperator for TensorWith {
    fn name(&self) -> String {
        format!("tensor with F^{}", self.dim)
    }

    fn source(&self) -> &PresheafCat {
        &self.cat
    }

    fn target(&self) -> &PresheafCat {
        &self.cat
    }

    fn apply(&self, p: &Presheaf) -> Result<Presheaf> {
        self.cat.tensor(self.dim, p)
    }

    fn apply_mor(&self, _: &Presheaf, _: &Presheaf, f: &FunctorMorphism) -> Result<FunctorMorphism> {
        self.cat.tensor_mor(self.dim, f)
    }
}

/// `P ↦ P(c) ⊗ X`, landing in presheaves on the unit V-category.
#[derive(Clone, Debug)]
pub struct EvalTensor {
    pub cat: PresheafCat,
    pub vspace: PresheafCat,
    pub object: usize,
    pub dim: usize,
}

impl EvalTensor {
    pub fn new(cat: PresheafCat, object: usize, dim: usize) -> Result<Self> {
        let vspace = PresheafCat::new(VCategory::unit(FinVect::new(cat.fp()))?)?;
        Ok(Self {
            cat,
            vspace,
            object,
            dim,
        })
    }
}

impl PresheafOperator for EvalTensor {
    fn name(&self) -> String {
        format!("evaluate at {} then tensor with F^{}", self.cat.base().label(self.object), self.dim)
    }

    fn source(&self) -> &PresheafCat {
        &self.cat
    }

    fn target(&self) -> &PresheafCat {
        &self.vspace
    }

    fn apply(&self, p: &Presheaf) -> Result<Presheaf> {
        let d = p.value(self.object) * self.dim;
        self.vspace.functor(vec![d], |_, _| Ok(FpMatrix::identity(self.cat.fp(), d)))
    }

    fn apply_mor(&self, _: &Presheaf, _: &Presheaf, f: &FunctorMorphism) -> Result<FunctorMorphism> {
        Ok(FunctorMorphism {
            components: vec![f
                .component(self.object)
                .kron(&FpMatrix::identity(self.cat.fp(), self.dim))?],
        })
    }
}

/// `S ∘ y : C → [B^op, V]` for an operator `S` out of presheaves on `C`.
pub fn restrict_to_representables(s: &dyn PresheafOperator) -> Result<PresheafFunctor> {
    let src = s.source();
    let y = PresheafFunctor::yoneda(src)?;
    let c = src.base();
    let images = (0..c.len())
        .map(|a| s.apply(y.image(a)))
        .collect::<Result<Vec<_>>>()?;
    PresheafFunctor::new(c.clone(), s.target().clone(), images, |a, b| {
        (0..c.hom(a, b).dim)
            .map(|e| s.apply_mor(y.image(a), y.image(b), y.map_basis(a, b, e)))
            .collect()
    })
}

/// The right adjoint `T(A) = [B^op,V](S(y−), A)` of a cocontinuous `S`,
/// packaged with the realization it is adjoint to.
pub fn right_adjoint_from_cocontinuous(s: &dyn PresheafOperator) -> Result<NerveRealization> {
    NerveRealization::new(restrict_to_representables(s)?)
}

/// A natural isomorphism `S P ≅ Lan_y(S y) P`, comparing an operator with
/// the realization of its restriction to representables.
pub fn compare_with_realization(s: &dyn PresheafOperator, nr: &NerveRealization, p: &Presheaf) -> Result<bool> {
    let a = s.apply(p)?;
    let b = nr.realize(p)?.object;
    if a.values() != b.values() {
        return Ok(false);
    }
    // an isomorphism exists iff the hom object contains an invertible element;
    // search the basis and small combinations
    let hom = s.target().functor_hom(&b, &a)?;
    if hom.dim() == 0 {
        return Ok(a.total_dim() == 0);
    }
    let fp = s.target().fp();
    for v in crate::linalg::enumerate_vectors(fp, hom.dim(), 1 << 12)? {
        if hom.morphism(&v)?.inverse().is_some() {
            return Ok(true);
        }
    }
    Err(shape("realization comparison", "hom object too large to search"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enriched::examples::{dual_numbers, quiver_a_to_b, unit};
    use crate::linalg::Fp;

    #[test]
    fn lan_along_identity_and_yoneda_realization() {
        let fp = Fp::new(2).unwrap();
        for c in [unit(fp), dual_numbers(fp), quiver_a_to_b(fp)] {
            let ps = PresheafCat::new(c.clone()).unwrap();
            let y = PresheafFunctor::yoneda(&ps).unwrap();
            let id = VFunctor::identity(&c).unwrap();
            let lan = lan_pointwise(&id, &y).unwrap();
            for a in 0..c.len() {
                assert_eq!(lan.image(a).values(), y.image(a).values());
            }
            assert!(is_fully_faithful(&y).unwrap().iter().all(|(_, ok)| *ok));
            let nr = NerveRealization::new(y).unwrap();
            let p = ps.direct_sum(&[ps.yoneda_object(0).unwrap(), ps.yoneda_object(c.len() - 1).unwrap()]).unwrap().0;
            assert!(nr.hom_iso(&p, &p).unwrap().is_isomorphism().is_some());
            assert!(nr.unit(&p).unwrap().inverse().is_some());
            assert!(nr.counit(&p).unwrap().inverse().is_some());
            let w = nr.witness(&[p.clone()], &[p]).unwrap();
            assert!(w.hom_isos.iter().all(HomIsoCertificate::reverify));
        }
    }
}
