use super::ordinary::FiniteCategory;
use super::vcategory::{AxiomReport, Underlying, VCategory};
use crate::cosmos::{compose_chain, Cosmos};
use crate::error::{shape, Error, Result};

/// A V-functor: an object map and hom components `F_{ab} : C(a,b) → D(Fa,Fb)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VFunctor<C: Cosmos> {
    source: VCategory<C>,
    target: VCategory<C>,
    objects: Vec<usize>,
    maps: Vec<C::Morphism>,
}

impl<C: Cosmos> VFunctor<C> {
    /// Shapes are checked here, the functor laws by [`VFunctor::check_axioms`].
    pub fn new(
        source: VCategory<C>,
        target: VCategory<C>,
        objects: Vec<usize>,
        mut map: impl FnMut(usize, usize) -> Result<C::Morphism>,
    ) -> Result<Self> {
        let n = source.len();
        if objects.len() != n || objects.iter().any(|&o| o >= target.len()) {
            return Err(Error::InvalidFunctor("object map does not fit the categories".into()));
        }
        let c = source.cosmos().clone();
        let mut maps = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let f = map(a, b)?;
                if c.source(&f) != *source.hom(a, b) || c.target(&f) != *target.hom(objects[a], objects[b]) {
                    return Err(shape("functor", format!("component at ({}, {})", source.label(a), source.label(b))));
                }
                maps.push(f);
            }
        }
        Ok(Self {
            source,
            target,
            objects,
            maps,
        })
    }

    pub fn identity(c: &VCategory<C>) -> Result<Self> {
        let cosmos = c.cosmos().clone();
        Self::new(c.clone(), c.clone(), (0..c.len()).collect(), |a, b| Ok(cosmos.identity(c.hom(a, b))))
    }

    pub fn source(&self) -> &VCategory<C> {
        &self.source
    }

    pub fn target(&self) -> &VCategory<C> {
        &self.target
    }

    pub fn object(&self, a: usize) -> usize {
        self.objects[a]
    }

    pub fn map(&self, a: usize, b: usize) -> &C::Morphism {
        &self.maps[a * self.source.len() + b]
    }

    /// `G ∘ F`
    pub fn then(&self, g: &VFunctor<C>) -> Result<Self> {
        if self.target != g.source {
            return Err(Error::InvalidFunctor("functors are not composable".into()));
        }
        let c = self.source.cosmos().clone();
        Self::new(
            self.source.clone(),
            g.target.clone(),
            self.objects.iter().map(|&o| g.objects[o]).collect(),
            |a, b| c.compose(g.map(self.objects[a], self.objects[b]), self.map(a, b)),
        )
    }

    /// Compatibility with composition for every triple and with identities
    /// for every object.
    pub fn check_axioms(&self) -> AxiomReport {
        let c = self.source.cosmos();
        let n = self.source.len();
        let (s, t) = (&self.source, &self.target);
        let mut report = AxiomReport::default();
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    let (fa, fb, fd) = (self.objects[a], self.objects[b], self.objects[d]);
                    let lhs = c.compose(self.map(a, d), s.comp(a, b, d));
                    let rhs = (|| {
                        let ff = c.tensor_mor(self.map(b, d), self.map(a, b))?;
                        c.compose(t.comp(fa, fb, fd), &ff)
                    })();
                    report.compare(
                        format!("functor composition ({}, {}, {})", s.label(a), s.label(b), s.label(d)),
                        lhs,
                        rhs,
                    );
                }
            }
            report.compare(
                format!("functor identity ({})", s.label(a)),
                c.compose(self.map(a, a), s.ident(a)),
                Ok(t.ident(self.objects[a]).clone()),
            );
        }
        report
    }

    /// Whether each hom component is invertible, per pair of objects.
    pub fn fully_faithful_verdicts(&self) -> Vec<((usize, usize), bool)> {
        let c = self.source.cosmos();
        let n = self.source.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                out.push(((a, b), c.inverse(self.map(a, b)).is_some()));
            }
        }
        out
    }

    /// The underlying functor on enumerated hom-sets: `f ↦ F_{ab} ∘ f`.
    pub fn underlying_arrow_map(&self, src: &Underlying<C>, dst: &Underlying<C>) -> Result<Vec<usize>> {
        let c = self.source.cosmos();
        src.category
            .arrows()
            .iter()
            .zip(&src.elements)
            .map(|(arrow, e)| {
                let (fa, fb) = (self.objects[arrow.src], self.objects[arrow.dst]);
                let image = c.compose(self.map(arrow.src, arrow.dst), e)?;
                dst.arrow_of(c, self.target.hom(fa, fb), fa, fb, &image)
            })
            .collect()
    }

    /// The V-functor `L_V → D` corresponding to an ordinary functor
    /// `L → D_0`, given by the images of the objects and the global elements
    /// picked out by each arrow of `L`.
    pub fn from_ordinary(
        free: VCategory<C>,
        l: &FiniteCategory,
        target: VCategory<C>,
        objects: Vec<usize>,
        arrow_images: &[C::Morphism],
    ) -> Result<Self> {
        let c = free.cosmos().clone();
        let t = target.clone();
        let objs = objects.clone();
        Self::new(free, target, objects, |a, b| {
            let elems: Vec<C::Morphism> = l.hom(a, b).iter().map(|&f| arrow_images[f].clone()).collect();
            c.from_global_elements(t.hom(objs[a], objs[b]), &elems)
        })
    }
}

/// Components `α_a : I → D(Fa, Ga)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VNatTransformation<C: Cosmos> {
    source: VFunctor<C>,
    target: VFunctor<C>,
    components: Vec<C::Morphism>,
}

impl<C: Cosmos> VNatTransformation<C> {
    pub fn new(source: VFunctor<C>, target: VFunctor<C>, components: Vec<C::Morphism>) -> Result<Self> {
        if source.source != target.source || source.target != target.target {
            return Err(Error::InvalidFunctor("transformation between non-parallel functors".into()));
        }
        let c = source.source.cosmos().clone();
        let d = &source.target;
        if components.len() != source.source.len() {
            return Err(shape("transformation", "one component per object"));
        }
        for (a, alpha) in components.iter().enumerate() {
            if c.source(alpha) != c.unit() || c.target(alpha) != *d.hom(source.objects[a], target.objects[a]) {
                return Err(shape("transformation", format!("component at {}", source.source.label(a))));
            }
        }
        Ok(Self {
            source,
            target,
            components,
        })
    }

    pub fn component(&self, a: usize) -> &C::Morphism {
        &self.components[a]
    }

    /// The naturality square for every pair:
    /// `m ∘ (α_b ⊗ F_{ab}) ∘ l⁻¹ = m ∘ (G_{ab} ⊗ α_a) ∘ r⁻¹`.
    pub fn check_axioms(&self) -> AxiomReport {
        let (f, g) = (&self.source, &self.target);
        let c = f.source.cosmos();
        let d = &f.target;
        let n = f.source.len();
        let mut report = AxiomReport::default();
        for a in 0..n {
            for b in 0..n {
                let ab = f.source.hom(a, b);
                let (fa, fb, ga, gb) = (f.objects[a], f.objects[b], g.objects[a], g.objects[b]);
                let lhs = (|| {
                    let l_inv = c.inverse_or_err(&c.left_unitor(ab)?, "l")?;
                    let step = c.tensor_mor(&self.components[b], f.map(a, b))?;
                    compose_chain(c, &[l_inv, step, d.comp(fa, fb, gb).clone()])
                })();
                let rhs = (|| {
                    let r_inv = c.inverse_or_err(&c.right_unitor(ab)?, "r")?;
                    let step = c.tensor_mor(g.map(a, b), &self.components[a])?;
                    compose_chain(c, &[r_inv, step, d.comp(fa, ga, gb).clone()])
                })();
                report.compare(
                    format!("naturality ({}, {})", f.source.label(a), f.source.label(b)),
                    lhs,
                    rhs,
                );
            }
        }
        report
    }
}
