//! Ends, coends, and weighted limits and colimits of presheaf-valued
//! diagrams over `FinVect`.

use crate::cosmos::FinVect;
use crate::enriched::{AxiomReport, FiniteCategory, VCategory};
use crate::error::{shape, Error, Result};
use crate::linalg::{Fp, FpMatrix};
use crate::presheaf::{FunctorCat, FunctorMorphism, Presheaf, PresheafCat, VValuedFunctor};

/// `C^op ⊗ C` as a functor category; object `(c, d)` has index `c·n + d`.
pub fn twisted_domain(c: &VCategory<FinVect>) -> Result<FunctorCat> {
    Ok(FunctorCat::new(c.opposite()?.tensor_vcat(c)?))
}

fn unit_vector(fp: Fp, len: usize, k: usize) -> FpMatrix {
    FpMatrix::from_fn(fp, len, 1, |r, _| u32::from(r == k))
}

/// `∫_c G(c,c)` as a subspace of `∏_c G(c,c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct End {
    pub offsets: Vec<usize>,
    pub inclusion: FpMatrix,
    /// The parallel pair `∏_c G(c,c) ⇉ ∏_{c,d} [C(c,d), G(c,d)]`.
    pub pair: (FpMatrix, FpMatrix),
}

impl End {
    pub fn dim(&self) -> usize {
        self.inclusion.cols()
    }
}

/// `∫^c G(c,c)` as a quotient of `⊕_c G(c,c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coend {
    pub offsets: Vec<usize>,
    pub projection: FpMatrix,
    /// The parallel pair `⊕_{c,d} G(d,c)⊗C(c,d) ⇉ ⊕_c G(c,c)`.
    pub pair: (FpMatrix, FpMatrix),
}

impl Coend {
    pub fn dim(&self) -> usize {
        self.projection.rows()
    }
}

fn diagonal_offsets(n: usize, g: &VValuedFunctor) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(n);
    let mut total = 0;
    for c in 0..n {
        offsets.push(total);
        total += g.value(c * n + c);
    }
    (offsets, total)
}

/// The end of `G : C^op ⊗ C → V`: families `x_c ∈ G(c,c)` with
/// `G(1⊗f) x_c = G(f⊗1) x_d` for every `f ∈ C(c,d)`.
pub fn end_of(c: &VCategory<FinVect>, g: &VValuedFunctor) -> Result<End> {
    let dom = twisted_domain(c)?;
    let fp = dom.fp();
    let n = c.len();
    if g.values().len() != n * n {
        return Err(shape("end", "functor is not on C^op ⊗ C"));
    }
    let (offsets, total) = diagonal_offsets(n, g);
    let mut rows = 0;
    for a in 0..n {
        for b in 0..n {
            rows += c.hom(a, b).dim * g.value(a * n + b);
        }
    }
    let mut lam = FpMatrix::zeros(fp, rows, total);
    let mut rho = FpMatrix::zeros(fp, rows, total);
    let mut base = 0;
    for a in 0..n {
        for b in 0..n {
            let h = c.hom(a, b).dim;
            let gab = g.value(a * n + b);
            let (ja, jb) = (c.ident(a), c.ident(b));
            for f in 0..h {
                let ef = unit_vector(fp, h, f);
                // (a,a) → (a,b) along j_a ⊗ f, and (b,b) → (a,b) along f ⊗ j_b
                let left = dom.act(g, a * n + a, a * n + b, &ja.kron(&ef)?.col(0))?;
                let right = dom.act(g, b * n + b, a * n + b, &ef.kron(jb)?.col(0))?;
                for r in 0..gab {
                    let row = base + r * h + f;
                    for x in 0..left.cols() {
                        lam.set(row, offsets[a] + x, left.get(r, x));
                    }
                    for x in 0..right.cols() {
                        rho.set(row, offsets[b] + x, right.get(r, x));
                    }
                }
            }
            base += h * gab;
        }
    }
    let (_, inclusion) = FinVect::new(fp).equalizer(&lam, &rho)?;
    Ok(End {
        offsets,
        inclusion,
        pair: (lam, rho),
    })
}

/// The coend of `G : C^op ⊗ C → V`: `⊕_c G(c,c)` modulo
/// `G(f⊗1) z ~ G(1⊗f) z` for `z ∈ G(d,c)` and `f ∈ C(c,d)`.
pub fn coend_of(c: &VCategory<FinVect>, g: &VValuedFunctor) -> Result<Coend> {
    let dom = twisted_domain(c)?;
    let fp = dom.fp();
    let n = c.len();
    if g.values().len() != n * n {
        return Err(shape("coend", "functor is not on C^op ⊗ C"));
    }
    let (offsets, total) = diagonal_offsets(n, g);
    let mut cols = 0;
    for a in 0..n {
        for b in 0..n {
            cols += g.value(b * n + a) * c.hom(a, b).dim;
        }
    }
    let mut lam = FpMatrix::zeros(fp, total, cols);
    let mut rho = FpMatrix::zeros(fp, total, cols);
    let mut base = 0;
    for a in 0..n {
        for b in 0..n {
            let h = c.hom(a, b).dim;
            let gba = g.value(b * n + a);
            let (ja, jb) = (c.ident(a), c.ident(b));
            for f in 0..h {
                let ef = unit_vector(fp, h, f);
                // (b,a) → (a,a) along f ⊗ j_a, and (b,a) → (b,b) along j_b ⊗ f
                let left = dom.act(g, b * n + a, a * n + a, &ef.kron(ja)?.col(0))?;
                let right = dom.act(g, b * n + a, b * n + b, &jb.kron(&ef)?.col(0))?;
                for z in 0..gba {
                    let col = base + z * h + f;
                    for r in 0..left.rows() {
                        lam.set(offsets[a] + r, col, left.get(r, z));
                    }
                    for r in 0..right.rows() {
                        rho.set(offsets[b] + r, col, right.get(r, z));
                    }
                }
            }
            base += gba * h;
        }
    }
    let (_, projection) = FinVect::new(fp).coequalizer(&lam, &rho)?;
    Ok(Coend {
        offsets,
        projection,
        pair: (lam, rho),
    })
}

/// `(c, d) ↦ [F c, G d]` on `C^op ⊗ C` for functors `F, G : C → V`.
pub fn hom_bifunctor(c: &VCategory<FinVect>, f: &VValuedFunctor, g: &VValuedFunctor) -> Result<VValuedFunctor> {
    let base = FunctorCat::new(c.clone());
    let op = FunctorCat::new(c.opposite()?);
    let dom = twisted_domain(c)?;
    let n = c.len();
    let values = (0..n * n).map(|o| f.value(o / n) * g.value(o % n)).collect();
    dom.functor(values, |s, t| {
        let (a, b, a2, b2) = (s / n, s % n, t / n, t % n);
        let (hu, hv) = (op.domain().hom(a, a2).dim, c.hom(b, b2).dim);
        let rows = f.value(a2) * g.value(b2);
        let mut m = FpMatrix::zeros(base.fp(), rows, 0);
        for u in 0..hu {
            // u ∈ C(a2, a) acts by precomposition with F(u)
            let fu = base.act_basis(f, a2, a, u);
            for v in 0..hv {
                m = m.hstack(&base.act_basis(g, b, b2, v).kron(&fu.transpose())?)?;
            }
        }
        Ok(m)
    })
}

/// A V-functor `J → [B^op, V]`, stored as the images of basis vectors of each
/// `J(j, j')` in the ambient `∏_b [F j (b), F j' (b)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PresheafFunctor {
    source: VCategory<FinVect>,
    target: PresheafCat,
    images: Vec<Presheaf>,
    maps: Vec<Vec<FunctorMorphism>>,
}

impl PresheafFunctor {
    /// `map(j, j')` lists the images of the basis of `J(j, j')`.
    pub fn new(
        source: VCategory<FinVect>,
        target: PresheafCat,
        images: Vec<Presheaf>,
        mut map: impl FnMut(usize, usize) -> Result<Vec<FunctorMorphism>>,
    ) -> Result<Self> {
        let n = source.len();
        if images.len() != n {
            return Err(shape("presheaf functor", "one image per object"));
        }
        let mut maps = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                let m = map(j, k)?;
                if m.len() != source.hom(j, k).dim {
                    return Err(shape("presheaf functor", format!("images at ({}, {})", source.label(j), source.label(k))));
                }
                maps.push(m);
            }
        }
        let f = Self {
            source,
            target,
            images,
            maps,
        };
        f.check_axioms().into_result("presheaf functor axioms")?;
        Ok(f)
    }

    pub fn source(&self) -> &VCategory<FinVect> {
        &self.source
    }

    pub fn target(&self) -> &PresheafCat {
        &self.target
    }

    pub fn image(&self, j: usize) -> &Presheaf {
        &self.images[j]
    }

    pub fn images(&self) -> &[Presheaf] {
        &self.images
    }

    /// `F(e_k)` for the `k`-th basis vector of `J(j, j')`.
    pub fn map_basis(&self, j: usize, k: usize, e: usize) -> &FunctorMorphism {
        &self.maps[j * self.source.len() + k][e]
    }

    /// `F(u)` for `u ∈ J(j, j')` in coordinates.
    pub fn map(&self, j: usize, k: usize, u: &[u32]) -> Result<FunctorMorphism> {
        let mut acc = self.target.zero(&self.images[j], &self.images[k]);
        for (e, &c) in u.iter().enumerate() {
            if c != 0 {
                acc = acc.add(&self.map_basis(j, k, e).scale(c))?;
            }
        }
        Ok(acc)
    }

    /// Naturality of every image, compatibility with composition, identities.
    pub fn check_axioms(&self) -> AxiomReport {
        let n = self.source.len();
        let t = &self.target;
        let l = self.source.labels();
        let mut report = AxiomReport::default();
        for j in 0..n {
            for k in 0..n {
                for (e, m) in self.maps[j * n + k].iter().enumerate() {
                    report.compare(
                        format!("naturality of image ({}, {}, {e})", l[j], l[k]),
                        t.is_natural(&self.images[j], &self.images[k], m),
                        Ok(true),
                    );
                }
            }
        }
        if !report.is_valid() {
            return report;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (hab, hbc) = (self.source.hom(a, b).dim, self.source.hom(b, c).dim);
                    let comp = self.source.comp(a, b, c);
                    for v in 0..hbc {
                        for u in 0..hab {
                            let lhs = self.map(a, c, &comp.col(v * hab + u));
                            let rhs = self.map_basis(b, c, v).after(self.map_basis(a, b, u));
                            report.compare(format!("functor composition ({}, {}, {})", l[a], l[b], l[c]), lhs, rhs);
                        }
                    }
                }
            }
            report.compare(
                format!("functor identity ({})", l[a]),
                self.map(a, a, &self.source.ident(a).col(0)),
                Ok(t.identity(&self.images[a])),
            );
        }
        report
    }

    /// `j ↦ F(j)(b)`, a V-valued functor on `J`.
    pub fn evaluate(&self, b: usize) -> Result<VValuedFunctor> {
        let fj = FunctorCat::new(self.source.clone());
        let n = self.source.len();
        let fp = fj.fp();
        let values = self.images.iter().map(|p| p.value(b)).collect();
        fj.functor(values, |j, k| {
            let rows = self.images[k].value(b);
            let mut m = FpMatrix::zeros(fp, rows, 0);
            for e in 0..self.source.hom(j, k).dim {
                m = m.hstack(self.maps[j * n + k][e].component(b))?;
            }
            Ok(m)
        })
    }

    /// The Yoneda embedding `C → [C^op, V]`.
    pub fn yoneda(ps: &PresheafCat) -> Result<Self> {
        let c = ps.base().clone();
        let n = c.len();
        let fp = ps.fp();
        let images = (0..n).map(|a| ps.yoneda_object(a)).collect::<Result<Vec<_>>>()?;
        PresheafFunctor::new(c.clone(), ps.clone(), images, |a, b| {
            (0..c.hom(a, b).dim)
                .map(|e| {
                    let ef = unit_vector(fp, c.hom(a, b).dim, e);
                    let components = (0..n)
                        .map(|x| c.comp(x, a, b).mul(&ef.kron(&FpMatrix::identity(fp, c.hom(x, a).dim))?))
                        .collect::<Result<_>>()?;
                    Ok(FunctorMorphism { components })
                })
                .collect()
        })
    }

    /// The inclusion of the full subcategory of `[B^op, V]` on `objects`.
    pub fn inclusion(ps: &PresheafCat, labels: Vec<String>, objects: Vec<Presheaf>) -> Result<Self> {
        let source = ps.full_subcategory(labels, &objects)?;
        let homs = objects
            .iter()
            .flat_map(|a| objects.iter().map(move |b| (a, b)))
            .map(|(a, b)| ps.functor_hom(a, b))
            .collect::<Result<Vec<_>>>()?;
        let k = objects.len();
        PresheafFunctor::new(source, ps.clone(), objects, |a, b| homs[a * k + b].basis())
    }

    /// The composite `J → [B^op, V]` of an ordinary functor out of `L`
    /// through the free V-category, given by the image of each arrow.
    pub fn from_ordinary(ps: &PresheafCat, l: &FiniteCategory, images: Vec<Presheaf>, arrows: &[FunctorMorphism]) -> Result<Self> {
        let source = VCategory::free(FinVect::new(ps.fp()), l)?;
        PresheafFunctor::new(source, ps.clone(), images, |a, b| Ok(l.hom(a, b).iter().map(|&f| arrows[f].clone()).collect()))
    }
}

/// `W ⋆ F` together with the presentation it was computed from.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedColimit {
    pub object: Presheaf,
    /// `⊕_j W(j) ⊗ F(j)`
    pub cover: Presheaf,
    pub projection: FunctorMorphism,
    /// Per `j`, the offset of `W(j) ⊗ F(j)(b)` inside the cover at each `b`.
    offsets: Vec<Vec<usize>>,
    weight_dims: Vec<usize>,
    image_dims: Vec<Vec<usize>>,
}

impl WeightedColimit {
    /// The cocone leg `F(j) → W ⋆ F` at `w ∈ W(j)`: `z ↦ q(w ⊗ z)`.
    pub fn leg(&self, j: usize, w: &[u32]) -> Result<FunctorMorphism> {
        let fp = self.object.action(0, 0).fp();
        let nb = self.object.values().len();
        let components = (0..nb)
            .map(|b| {
                let fjb = self.image_dims[j][b];
                let mut m = FpMatrix::zeros(fp, self.cover.value(b), fjb);
                for (wi, &c) in w.iter().enumerate() {
                    for z in 0..fjb {
                        m.add_at(self.offsets[j][b] + wi * fjb + z, z, c);
                    }
                }
                self.projection.component(b).mul(&m)
            })
            .collect::<Result<_>>()?;
        Ok(FunctorMorphism { components })
    }

    pub fn weight_dim(&self, j: usize) -> usize {
        self.weight_dims[j]
    }
}

/// `W ⋆ F` for `W : J^op → V` and `F : J → [B^op, V]`, computed objectwise
/// as the coend of `W(−) ⊗ F(−)(b)`.
pub fn weighted_colimit(w: &VValuedFunctor, f: &PresheafFunctor) -> Result<WeightedColimit> {
    let j = f.source();
    let ps = f.target();
    let nj = j.len();
    let nb = ps.n();
    if w.values().len() != nj {
        return Err(shape("weighted colimit", "weight is not on J^op"));
    }
    let jop = FunctorCat::new(j.opposite()?);
    let jcat = FunctorCat::new(j.clone());
    let summands = (0..nj)
        .map(|c| ps.tensor(w.value(c), f.image(c)))
        .collect::<Result<Vec<_>>>()?;
    let (cover, _, _) = ps.direct_sum(&summands)?;
    let mut projections = Vec::with_capacity(nb);
    let mut offsets = vec![Vec::with_capacity(nb); nj];
    for b in 0..nb {
        let (_, g) = jop.external_tensor(&jcat, w, &f.evaluate(b)?)?;
        let coend = coend_of(j, &g)?;
        for (c, o) in offsets.iter_mut().enumerate() {
            o.push(coend.offsets[c]);
        }
        projections.push(coend.projection);
    }
    let object = ps.descend(&cover, &projections)?;
    Ok(WeightedColimit {
        object,
        cover,
        projection: FunctorMorphism { components: projections },
        offsets,
        weight_dims: w.values().to_vec(),
        image_dims: f.images().iter().map(|p| p.values().to_vec()).collect(),
    })
}

/// The map `W ⋆ F → W' ⋆ F` induced by `ψ : W → W'`.
pub fn weighted_colimit_map(
    src: &WeightedColimit,
    dst: &WeightedColimit,
    psi: &FunctorMorphism,
    f: &PresheafFunctor,
) -> Result<FunctorMorphism> {
    let nb = f.target().n();
    let nj = f.source().len();
    let fp = f.target().fp();
    let components = (0..nb)
        .map(|b| {
            let mut m = FpMatrix::zeros(fp, dst.cover.value(b), src.cover.value(b));
            for j in 0..nj {
                let block = psi.component(j).kron(&FpMatrix::identity(fp, f.image(j).value(b)))?;
                m.paste(dst.offsets[j][b], src.offsets[j][b], &block);
            }
            let section = src
                .projection
                .component(b)
                .right_inverse()
                .ok_or_else(|| Error::Verification("coend projection is not surjective".into()))?;
            dst.projection.component(b).mul(&m)?.mul(&section)
        })
        .collect::<Result<_>>()?;
    Ok(FunctorMorphism { components })
}

/// The map `W ⋆ F → W ⋆ F'` induced by a family `α_j : F j → F' j`.
pub fn weighted_colimit_map_diagram(
    src: &WeightedColimit,
    dst: &WeightedColimit,
    alpha: &[FunctorMorphism],
    f: &PresheafFunctor,
) -> Result<FunctorMorphism> {
    let nb = f.target().n();
    let fp = f.target().fp();
    let components = (0..nb)
        .map(|b| {
            let mut m = FpMatrix::zeros(fp, dst.cover.value(b), src.cover.value(b));
            for (j, a) in alpha.iter().enumerate() {
                let block = FpMatrix::identity(fp, src.weight_dims[j]).kron(a.component(b))?;
                m.paste(dst.offsets[j][b], src.offsets[j][b], &block);
            }
            let section = src
                .projection
                .component(b)
                .right_inverse()
                .ok_or_else(|| Error::Verification("coend projection is not surjective".into()))?;
            dst.projection.component(b).mul(&m)?.mul(&section)
        })
        .collect::<Result<_>>()?;
    Ok(FunctorMorphism { components })
}

/// `{W, F}` together with its inclusion into `∏_j [W j, F j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedLimit {
    pub object: Presheaf,
    pub ambient: Presheaf,
    pub inclusion: FunctorMorphism,
}

/// `{W, F}` for `W : J → V` and `F : J → [B^op, V]`:
/// `{W, F}(b) = [J, V](W, F(−)(b))`.
pub fn weighted_limit(w: &VValuedFunctor, f: &PresheafFunctor) -> Result<WeightedLimit> {
    let j = f.source();
    let ps = f.target();
    if w.values().len() != j.len() {
        return Err(shape("weighted limit", "weight is not on J"));
    }
    let jcat = FunctorCat::new(j.clone());
    let factors = (0..j.len())
        .map(|c| ps.cotensor(w.value(c), f.image(c)))
        .collect::<Result<Vec<_>>>()?;
    let (ambient, _, _) = ps.direct_sum(&factors)?;
    let inclusions = (0..ps.n())
        .map(|b| Ok(jcat.functor_hom(w, &f.evaluate(b)?)?.inclusion().clone()))
        .collect::<Result<Vec<_>>>()?;
    let object = ps.restrict(&ambient, &inclusions)?;
    Ok(WeightedLimit {
        object,
        ambient,
        inclusion: FunctorMorphism { components: inclusions },
    })
}

/// The constant weight `I` on a free V-category, giving conical (co)limits.
pub fn constant_weight(cat: &FunctorCat) -> Result<VValuedFunctor> {
    let fp = cat.fp();
    cat.functor(vec![1; cat.n()], |x, y| {
        Ok(FpMatrix::from_fn(fp, 1, cat.domain().hom(x, y).dim, |_, _| 1))
    })
}

/// The conical colimit of a diagram out of a free V-category.
pub fn conical_colimit(f: &PresheafFunctor) -> Result<WeightedColimit> {
    let w = constant_weight(&FunctorCat::new(f.source().opposite()?))?;
    weighted_colimit(&w, f)
}

/// The conical limit of a diagram out of a free V-category.
pub fn conical_limit(f: &PresheafFunctor) -> Result<WeightedLimit> {
    let w = constant_weight(&FunctorCat::new(f.source().clone()))?;
    weighted_limit(&w, f)
}

/// `T(Q) = [B^op, V](F −, Q)`, a presheaf on `J`.
pub fn nerve(f: &PresheafFunctor, q: &Presheaf) -> Result<Presheaf> {
    let j = f.source();
    let ps = f.target();
    let jps = PresheafCat::new(j.clone())?;
    let homs = f
        .images()
        .iter()
        .map(|fj| ps.functor_hom(fj, q))
        .collect::<Result<Vec<_>>>()?;
    let values = homs.iter().map(|h| h.dim()).collect();
    jps.functor(values, |a, b| {
        // J^op(a, b) = J(b, a): u acts by φ ↦ φ ∘ F(u)
        let mut m = FpMatrix::zeros(ps.fp(), homs[b].dim(), 0);
        for u in 0..j.hom(b, a).dim {
            let fu = f.map_basis(b, a, u);
            let mut block = FpMatrix::zeros(ps.fp(), homs[b].dim(), homs[a].dim());
            for (k, phi) in homs[a].basis()?.iter().enumerate() {
                for (r, x) in homs[b].coords(&phi.after(fu)?)?.into_iter().enumerate() {
                    block.set(r, k, x);
                }
            }
            m = m.hstack(&block)?;
        }
        Ok(m)
    })
}

/// `T(h) : T(Q) → T(Q')` by postcomposition.
pub fn nerve_map(f: &PresheafFunctor, q: &Presheaf, q2: &Presheaf, h: &FunctorMorphism) -> Result<FunctorMorphism> {
    let ps = f.target();
    let components = f
        .images()
        .iter()
        .map(|fj| {
            let (src, dst) = (ps.functor_hom(fj, q)?, ps.functor_hom(fj, q2)?);
            let mut m = FpMatrix::zeros(ps.fp(), dst.dim(), src.dim());
            for (k, phi) in src.basis()?.iter().enumerate() {
                for (r, x) in dst.coords(&h.after(phi)?)?.into_iter().enumerate() {
                    m.set(r, k, x);
                }
            }
            Ok(m)
        })
        .collect::<Result<_>>()?;
    Ok(FunctorMorphism { components })
}

/// `H(j) = [B^op, V](Q, F j)`, a V-valued functor on `J`.
pub fn corepresented(f: &PresheafFunctor, q: &Presheaf) -> Result<VValuedFunctor> {
    let j = f.source();
    let ps = f.target();
    let jcat = FunctorCat::new(j.clone());
    let homs = f
        .images()
        .iter()
        .map(|fj| ps.functor_hom(q, fj))
        .collect::<Result<Vec<_>>>()?;
    let values = homs.iter().map(|h| h.dim()).collect();
    jcat.functor(values, |a, b| {
        let mut m = FpMatrix::zeros(ps.fp(), homs[b].dim(), 0);
        for u in 0..j.hom(a, b).dim {
            let fu = f.map_basis(a, b, u);
            let mut block = FpMatrix::zeros(ps.fp(), homs[b].dim(), homs[a].dim());
            for (k, phi) in homs[a].basis()?.iter().enumerate() {
                block.paste(0, k, &FpMatrix::column(ps.fp(), &homs[b].coords(&fu.after(phi)?)?));
            }
            m = m.hstack(&block)?;
        }
        Ok(m)
    })
}

/// The defining map `[B^op,V](W ⋆ F, Q) → [J^op,V](W, [B^op,V](F−, Q))`,
/// `φ ↦ (w ↦ φ ∘ leg_w)`, in hom-object coordinates.
pub fn colimit_universal_map(col: &WeightedColimit, w: &VValuedFunctor, f: &PresheafFunctor, q: &Presheaf) -> Result<FpMatrix> {
    let ps = f.target();
    let fp = ps.fp();
    let jop = FunctorCat::new(f.source().opposite()?);
    let tq = nerve(f, q)?;
    let src = ps.functor_hom(&col.object, q)?;
    let dst = jop.functor_hom(w, &tq)?;
    let legs = (0..f.source().len())
        .map(|j| {
            let homj = ps.functor_hom(f.image(j), q)?;
            let ls = (0..w.value(j))
                .map(|k| col.leg(j, &unit_vector(fp, w.value(j), k).col(0)))
                .collect::<Result<Vec<_>>>()?;
            Ok((homj, ls))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut m = FpMatrix::zeros(fp, dst.dim(), src.dim());
    for (k, phi) in src.basis()?.iter().enumerate() {
        let components = legs
            .iter()
            .enumerate()
            .map(|(j, (homj, ls))| {
                let mut c = FpMatrix::zeros(fp, tq.value(j), w.value(j));
                for (x, leg) in ls.iter().enumerate() {
                    c.paste(0, x, &FpMatrix::column(fp, &homj.coords(&phi.after(leg)?)?));
                }
                Ok(c)
            })
            .collect::<Result<_>>()?;
        m.paste(0, k, &FpMatrix::column(fp, &dst.coords(&FunctorMorphism { components })?));
    }
    Ok(m)
}

/// The defining map `[B^op,V](Q, {W, F}) → [J,V](W, [B^op,V](Q, F−))`,
/// `φ ↦ (w ↦ ev_w ∘ φ)`, in hom-object coordinates.
pub fn limit_universal_map(lim: &WeightedLimit, w: &VValuedFunctor, f: &PresheafFunctor, q: &Presheaf) -> Result<FpMatrix> {
    let ps = f.target();
    let fp = ps.fp();
    let nj = f.source().len();
    let jcat = FunctorCat::new(f.source().clone());
    let h = corepresented(f, q)?;
    let src = ps.functor_hom(q, &lim.object)?;
    let dst = jcat.functor_hom(w, &h)?;
    let homs = f
        .images()
        .iter()
        .map(|fj| ps.functor_hom(q, fj))
        .collect::<Result<Vec<_>>>()?;
    let mut m = FpMatrix::zeros(fp, dst.dim(), src.dim());
    for (k, phi) in src.basis()?.iter().enumerate() {
        let into_ambient = lim.inclusion.after(phi)?;
        let components = (0..nj)
            .map(|j| {
                let mut c = FpMatrix::zeros(fp, h.value(j), w.value(j));
                for x in 0..w.value(j) {
                    let ev = FunctorMorphism {
                        components: (0..ps.n())
                            .map(|b| {
                                let off: usize = (0..j).map(|i| f.image(i).value(b) * w.value(i)).sum();
                                let fjb = f.image(j).value(b);
                                let e = FpMatrix::from_fn(fp, fjb, lim.ambient.value(b), |r, col| {
                                    u32::from(col == off + r * w.value(j) + x)
                                });
                                e.mul(into_ambient.component(b))
                            })
                            .collect::<Result<_>>()?,
                    };
                    c.paste(0, x, &FpMatrix::column(fp, &homs[j].coords(&ev)?));
                }
                Ok(c)
            })
            .collect::<Result<_>>()?;
        m.paste(0, k, &FpMatrix::column(fp, &dst.coords(&FunctorMorphism { components })?));
    }
    Ok(m)
}

/// `dim [A,V](F, G)` computed as an end, for cross-checking `functor_hom`.
pub fn hom_via_end(c: &VCategory<FinVect>, f: &VValuedFunctor, g: &VValuedFunctor) -> Result<End> {
    end_of(c, &hom_bifunctor(c, f, g)?)
}
