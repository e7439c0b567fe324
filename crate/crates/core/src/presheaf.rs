//! V-valued functors on a finite V-category over `FinVect`, stored
//! extensionally: a value per object and an action matrix per pair.
//!
//! A presheaf on `C` is a V-valued functor on `C^op`; [`PresheafCat`] fixes
//! that convention.

use std::ops::Deref;

use rand::Rng;

use crate::cosmos::{Cosmos, FinVect};
use crate::enriched::{AxiomReport, VCategory, VFunctor};
use crate::error::{shape, Error, Result};
use crate::linalg::{Fp, FpMatrix};

/// `F : A → V` with `act_{xy} : A(x,y)⊗F(x) → F(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VValuedFunctor {
    values: Vec<usize>,
    actions: Vec<FpMatrix>,
}

pub type Presheaf = VValuedFunctor;

impl VValuedFunctor {
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn value(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn action(&self, x: usize, y: usize) -> &FpMatrix {
        &self.actions[x * self.values.len() + y]
    }

    pub fn total_dim(&self) -> usize {
        self.values.iter().sum()
    }
}

/// A family of components `φ_x : F(x) → G(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorMorphism {
    pub components: Vec<FpMatrix>,
}

impl FunctorMorphism {
    pub fn component(&self, x: usize) -> &FpMatrix {
        &self.components[x]
    }

    /// `self ∘ f`
    pub fn after(&self, f: &FunctorMorphism) -> Result<FunctorMorphism> {
        Ok(FunctorMorphism {
            components: self
                .components
                .iter()
                .zip(&f.components)
                .map(|(g, f)| g.mul(f))
                .collect::<Result<_>>()?,
        })
    }

    pub fn add(&self, other: &FunctorMorphism) -> Result<FunctorMorphism> {
        Ok(FunctorMorphism {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect::<Result<_>>()?,
        })
    }

    pub fn scale(&self, c: u32) -> FunctorMorphism {
        FunctorMorphism {
            components: self.components.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn sub(&self, other: &FunctorMorphism) -> Result<FunctorMorphism> {
        self.add(&other.scale(other.components.first().map_or(1, |m| m.fp().neg(1))))
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(FpMatrix::is_zero)
    }

    /// The componentwise inverse, if every component is invertible.
    pub fn inverse(&self) -> Option<FunctorMorphism> {
        Some(FunctorMorphism {
            components: self
                .components
                .iter()
                .map(FpMatrix::is_isomorphism)
                .collect::<Option<_>>()?,
        })
    }
}

/// The hom object `[A,V](F,G)` as a subspace of `∏_x [F x, G x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomObject {
    src: Vec<usize>,
    dst: Vec<usize>,
    offsets: Vec<usize>,
    inclusion: FpMatrix,
}

impl HomObject {
    pub fn dim(&self) -> usize {
        self.inclusion.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.inclusion.rows()
    }

    /// Columns: a basis of natural families inside `∏_x [F x, G x]`.
    pub fn inclusion(&self) -> &FpMatrix {
        &self.inclusion
    }

    pub fn offset(&self, x: usize) -> usize {
        self.offsets[x]
    }

    /// The components of a vector of the ambient product.
    pub fn split(&self, ambient: &[u32]) -> Result<FunctorMorphism> {
        let fp = self.inclusion.fp();
        let components = (0..self.src.len())
            .map(|x| {
                let len = self.src[x] * self.dst[x];
                FpMatrix::new(fp, self.dst[x], self.src[x], ambient[self.offsets[x]..self.offsets[x] + len].to_vec())
            })
            .collect::<Result<_>>()?;
        Ok(FunctorMorphism { components })
    }

    pub fn ambient_of(&self, f: &FunctorMorphism) -> Result<Vec<u32>> {
        if f.components.len() != self.src.len() {
            return Err(shape("hom object", "wrong number of components"));
        }
        let mut v = Vec::with_capacity(self.ambient_dim());
        for (x, m) in f.components.iter().enumerate() {
            if m.rows() != self.dst[x] || m.cols() != self.src[x] {
                return Err(shape("hom object", format!("component {x} is {}x{}", m.rows(), m.cols())));
            }
            v.extend_from_slice(m.entries());
        }
        Ok(v)
    }

    /// The morphism with the given coordinates in the hom-object basis.
    pub fn morphism(&self, coords: &[u32]) -> Result<FunctorMorphism> {
        self.split(&self.inclusion.apply(coords)?)
    }

    /// Coordinates of a natural family; an error if it is not natural.
    pub fn coords(&self, f: &FunctorMorphism) -> Result<Vec<u32>> {
        let v = self.ambient_of(f)?;
        let fp = self.inclusion.fp();
        let sol = self
            .inclusion
            .solve(&FpMatrix::column(fp, &v))?
            .ok_or_else(|| Error::Verification("family is not natural".into()))?;
        Ok(sol.col(0))
    }

    pub fn basis(&self) -> Result<Vec<FunctorMorphism>> {
        (0..self.dim()).map(|k| self.split(&self.inclusion.col(k))).collect()
    }
}

/// The V-valued functors on a fixed finite V-category.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctorCat {
    domain: VCategory<FinVect>,
}

impl FunctorCat {
    pub fn new(domain: VCategory<FinVect>) -> Self {
        Self { domain }
    }

    pub fn domain(&self) -> &VCategory<FinVect> {
        &self.domain
    }

    pub fn fp(&self) -> Fp {
        self.domain.cosmos().field()
    }

    pub fn n(&self) -> usize {
        self.domain.len()
    }

    fn h(&self, x: usize, y: usize) -> usize {
        self.domain.hom(x, y).dim
    }

    /// Builds and validates a functor.
    pub fn functor(&self, values: Vec<usize>, mut action: impl FnMut(usize, usize) -> Result<FpMatrix>) -> Result<VValuedFunctor> {
        let n = self.n();
        if values.len() != n {
            return Err(shape("functor", "one value per object"));
        }
        let mut actions = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                actions.push(action(x, y)?);
            }
        }
        let f = VValuedFunctor { values, actions };
        self.check(&f).into_result("functor axioms")?;
        Ok(f)
    }

    /// Shapes, compatibility with composition, and unit laws.
    pub fn check(&self, f: &VValuedFunctor) -> AxiomReport {
        let n = self.n();
        let fp = self.fp();
        let mut report = AxiomReport::default();
        if f.values.len() != n || f.actions.len() != n * n {
            report.compare::<usize>("functor shape", Ok(f.values.len()), Ok(n));
            return report;
        }
        for x in 0..n {
            for y in 0..n {
                let a = f.action(x, y);
                if a.rows() != f.values[y] || a.cols() != self.h(x, y) * f.values[x] || a.fp() != fp {
                    report.compare::<(usize, usize)>(
                        format!("action shape ({x}, {y})"),
                        Ok((a.rows(), a.cols())),
                        Ok((f.values[y], self.h(x, y) * f.values[x])),
                    );
                }
            }
        }
        if !report.is_valid() {
            return report;
        }
        let l = self.domain.labels();
        for x in 0..n {
            let idx = FpMatrix::identity(fp, f.values[x]);
            for y in 0..n {
                for z in 0..n {
                    let lhs = self
                        .domain
                        .comp(x, y, z)
                        .kron(&idx)
                        .and_then(|m| f.action(x, z).mul(&m));
                    let rhs = FpMatrix::identity(fp, self.h(y, z))
                        .kron(f.action(x, y))
                        .and_then(|m| f.action(y, z).mul(&m));
                    report.compare(format!("action composition ({}, {}, {})", l[x], l[y], l[z]), lhs, rhs);
                }
            }
            let unit = self.domain.ident(x).kron(&idx).and_then(|m| f.action(x, x).mul(&m));
            report.compare(format!("action unit ({})", l[x]), unit, Ok(idx));
        }
        report
    }

    /// `F(g) : F x → F y` for `g ∈ A(x,y)` given by coordinates.
    pub fn act(&self, f: &VValuedFunctor, x: usize, y: usize, g: &[u32]) -> Result<FpMatrix> {
        let col = FpMatrix::column(self.fp(), g);
        f.action(x, y).mul(&col.kron(&FpMatrix::identity(self.fp(), f.values[x]))?)
    }

    /// `F(e_k)` for the `k`-th basis vector of `A(x,y)`.
    pub fn act_basis(&self, f: &VValuedFunctor, x: usize, y: usize, k: usize) -> FpMatrix {
        let fx = f.values[x];
        f.action(x, y).submatrix(0, f.values[y], k * fx, fx)
    }

    /// The transpose of `act`, as a V-functor into the full sub-V-category of
    /// `V` on the values.
    pub fn to_vfunctor(&self, f: &VValuedFunctor) -> Result<VFunctor<FinVect>> {
        let v = *self.domain.cosmos();
        let labels = (0..self.n()).map(|x| format!("F({})", self.domain.label(x))).collect();
        let target = VCategory::full_sub_cosmos(v, labels, f.values.iter().map(|&d| v.obj(d)).collect())?;
        VFunctor::new(self.domain.clone(), target, (0..self.n()).collect(), |x, y| {
            v.curry(self.domain.hom(x, y), &v.obj(f.values[x]), f.action(x, y))
        })
    }

    /// The covariant representable `A(a, −)`.
    pub fn representable(&self, a: usize) -> Result<VValuedFunctor> {
        let values = (0..self.n()).map(|y| self.h(a, y)).collect();
        self.functor(values, |y, z| Ok(self.domain.comp(a, y, z).clone()))
    }

    pub fn zero_functor(&self) -> VValuedFunctor {
        let n = self.n();
        let fp = self.fp();
        VValuedFunctor {
            values: vec![0; n],
            actions: (0..n * n).map(|_| FpMatrix::zeros(fp, 0, 0)).collect(),
        }
    }

    pub fn identity(&self, f: &VValuedFunctor) -> FunctorMorphism {
        FunctorMorphism {
            components: f.values.iter().map(|&d| FpMatrix::identity(self.fp(), d)).collect(),
        }
    }

    pub fn zero(&self, f: &VValuedFunctor, g: &VValuedFunctor) -> FunctorMorphism {
        FunctorMorphism {
            components: (0..self.n())
                .map(|x| FpMatrix::zeros(self.fp(), g.values[x], f.values[x]))
                .collect(),
        }
    }

    /// Every naturality square `G(g) φ_x = φ_y F(g)` over basis vectors `g`.
    pub fn is_natural(&self, f: &VValuedFunctor, g: &VValuedFunctor, phi: &FunctorMorphism) -> Result<bool> {
        let n = self.n();
        if phi.components.len() != n {
            return Ok(false);
        }
        for x in 0..n {
            let c = &phi.components[x];
            if c.rows() != g.values[x] || c.cols() != f.values[x] {
                return Ok(false);
            }
        }
        for x in 0..n {
            for y in 0..n {
                for k in 0..self.h(x, y) {
                    let lhs = self.act_basis(g, x, y, k).mul(&phi.components[x])?;
                    let rhs = phi.components[y].mul(&self.act_basis(f, x, y, k))?;
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    pub fn check_natural(&self, f: &VValuedFunctor, g: &VValuedFunctor, phi: &FunctorMorphism) -> Result<()> {
        if self.is_natural(f, g, phi)? {
            Ok(())
        } else {
            Err(Error::Verification("family is not natural".into()))
        }
    }

    fn ambient_layout(&self, f: &VValuedFunctor, g: &VValuedFunctor) -> (Vec<usize>, usize) {
        let mut offsets = Vec::with_capacity(self.n());
        let mut total = 0;
        for x in 0..self.n() {
            offsets.push(total);
            total += f.values[x] * g.values[x];
        }
        (offsets, total)
    }

    /// The two maps `∏_x [F x, G x] ⇉ ∏_{x,y} [A(x,y), [F x, G y]]`:
    /// `τ` sends `φ` to `g ↦ φ_y ∘ F(g)` and `ξ` to `g ↦ G(g) ∘ φ_x`.
    pub fn tau_xi(&self, f: &VValuedFunctor, g: &VValuedFunctor) -> Result<(FpMatrix, FpMatrix)> {
        let n = self.n();
        let fp = self.fp();
        let (offsets, total) = self.ambient_layout(f, g);
        let mut rows = 0;
        for x in 0..n {
            for y in 0..n {
                rows += self.h(x, y) * f.values[x] * g.values[y];
            }
        }
        let mut tau = FpMatrix::zeros(fp, rows, total);
        let mut xi = FpMatrix::zeros(fp, rows, total);
        let mut base = 0;
        for x in 0..n {
            for y in 0..n {
                let h = self.h(x, y);
                let (fx, fy, gx, gy) = (f.values[x], f.values[y], g.values[x], g.values[y]);
                for k in 0..h {
                    let fg = self.act_basis(f, x, y, k);
                    let gg = self.act_basis(g, x, y, k);
                    for r in 0..gy {
                        for c in 0..fx {
                            let row = base + (r * fx + c) * h + k;
                            // (φ_y F(g))[r,c] = Σ_m φ_y[r,m] F(g)[m,c]
                            for m in 0..fy {
                                tau.add_at(row, offsets[y] + r * fy + m, fg.get(m, c));
                            }
                            // (G(g) φ_x)[r,c] = Σ_m G(g)[r,m] φ_x[m,c]
                            for m in 0..gx {
                                xi.add_at(row, offsets[x] + m * fx + c, gg.get(r, m));
                            }
                        }
                    }
                }
                base += h * fx * gy;
            }
        }
        Ok((tau, xi))
    }

    /// `[A,V](F,G)`, the equalizer of `τ` and `ξ`.
    pub fn functor_hom(&self, f: &VValuedFunctor, g: &VValuedFunctor) -> Result<HomObject> {
        let (tau, xi) = self.tau_xi(f, g)?;
        let (_, inclusion) = FinVect::new(self.fp()).equalizer(&tau, &xi)?;
        let (offsets, _) = self.ambient_layout(f, g);
        Ok(HomObject {
            src: f.values.clone(),
            dst: g.values.clone(),
            offsets,
            inclusion,
        })
    }

    /// `M : [G,H]⊗[F,G] → [F,H]` in hom-object coordinates.
    pub fn compose_matrix(&self, fg: &HomObject, gh: &HomObject, fh: &HomObject) -> Result<FpMatrix> {
        let fp = self.fp();
        let (bfg, bgh) = (fg.basis()?, gh.basis()?);
        let mut m = FpMatrix::zeros(fp, fh.dim(), bgh.len() * bfg.len());
        for (i, u) in bgh.iter().enumerate() {
            for (j, v) in bfg.iter().enumerate() {
                let c = fh.coords(&u.after(v)?)?;
                for (r, x) in c.into_iter().enumerate() {
                    m.set(r, i * bfg.len() + j, x);
                }
            }
        }
        Ok(m)
    }

    /// The full sub-V-category of the functor category on a list of functors.
    pub fn full_subcategory(&self, labels: Vec<String>, objects: &[VValuedFunctor]) -> Result<VCategory<FinVect>> {
        let k = objects.len();
        let mut homs = Vec::with_capacity(k * k);
        for a in objects {
            for b in objects {
                homs.push(self.functor_hom(a, b)?);
            }
        }
        let v = *self.domain.cosmos();
        VCategory::new(
            v,
            labels,
            |a, b| Ok(v.obj(homs[a * k + b].dim())),
            |a, b, c| self.compose_matrix(&homs[a * k + b], &homs[b * k + c], &homs[a * k + c]),
            |a| {
                let c = homs[a * k + a].coords(&self.identity(&objects[a]))?;
                Ok(FpMatrix::column(self.fp(), &c))
            },
        )
    }

    /// The sub-functor spanned objectwise by the columns of `inclusions`,
    /// with the action found by solving against the inclusions.
    pub fn restrict(&self, f: &VValuedFunctor, inclusions: &[FpMatrix]) -> Result<VValuedFunctor> {
        let fp = self.fp();
        let values: Vec<usize> = inclusions.iter().map(FpMatrix::cols).collect();
        self.functor(values, |x, y| {
            let lifted = f
                .action(x, y)
                .mul(&FpMatrix::identity(fp, self.h(x, y)).kron(&inclusions[x])?)?;
            inclusions[y]
                .solve(&lifted)?
                .filter(|s| inclusions[y].mul(s).ok().as_ref() == Some(&lifted))
                .ok_or_else(|| Error::Verification(format!("subspace at {} is not stable", self.domain.label(y))))
        })
    }

    /// The quotient functor along objectwise surjections, with the action
    /// descended through a section and checked to be well defined.
    pub fn descend(&self, f: &VValuedFunctor, projections: &[FpMatrix]) -> Result<VValuedFunctor> {
        let fp = self.fp();
        let values: Vec<usize> = projections.iter().map(FpMatrix::rows).collect();
        self.functor(values, |x, y| {
            let h = FpMatrix::identity(fp, self.h(x, y));
            let section = projections[x]
                .right_inverse()
                .ok_or_else(|| Error::Verification("projection is not surjective".into()))?;
            let down = projections[y].mul(&f.action(x, y).mul(&h.kron(&section)?)?)?;
            let check = down.mul(&h.kron(&projections[x])?)?;
            if check != projections[y].mul(f.action(x, y))? {
                return Err(Error::Verification(format!(
                    "kernel at {} is not stable",
                    self.domain.label(x)
                )));
            }
            Ok(down)
        })
    }

    pub fn kernel(&self, f: &VValuedFunctor, phi: &FunctorMorphism) -> Result<(VValuedFunctor, FunctorMorphism)> {
        let inc: Vec<FpMatrix> = phi.components.iter().map(FpMatrix::kernel_basis).collect();
        let k = self.restrict(f, &inc)?;
        Ok((k, FunctorMorphism { components: inc }))
    }

    pub fn cokernel(&self, g: &VValuedFunctor, phi: &FunctorMorphism) -> Result<(VValuedFunctor, FunctorMorphism)> {
        let proj: Vec<FpMatrix> = phi.components.iter().map(FpMatrix::cokernel_projection).collect();
        let q = self.descend(g, &proj)?;
        Ok((q, FunctorMorphism { components: proj }))
    }

    /// The image of `φ : F → G` as a sub-functor of `G`.
    pub fn image(&self, g: &VValuedFunctor, phi: &FunctorMorphism) -> Result<(VValuedFunctor, FunctorMorphism)> {
        let inc: Vec<FpMatrix> = phi.components.iter().map(FpMatrix::image_basis).collect();
        let im = self.restrict(g, &inc)?;
        Ok((im, FunctorMorphism { components: inc }))
    }

    /// Biproduct with injections and projections.
    pub fn direct_sum(&self, fs: &[VValuedFunctor]) -> Result<(VValuedFunctor, Vec<FunctorMorphism>, Vec<FunctorMorphism>)> {
        let n = self.n();
        let fp = self.fp();
        let v = FinVect::new(fp);
        let bips: Vec<_> = (0..n)
            .map(|x| v.biproduct(&fs.iter().map(|f| v.obj(f.values[x])).collect::<Vec<_>>()))
            .collect();
        let values = bips.iter().map(|b| b.object.dim).collect();
        let sum = self.functor(values, |x, y| {
            let mut m = FpMatrix::zeros(fp, bips[y].object.dim, self.h(x, y) * bips[x].object.dim);
            for (i, f) in fs.iter().enumerate() {
                let h = FpMatrix::identity(fp, self.h(x, y));
                let block = bips[y].injections[i]
                    .mul(f.action(x, y))?
                    .mul(&h.kron(&bips[x].projections[i])?)?;
                m = m.add(&block)?;
            }
            Ok(m)
        })?;
        let inj = (0..fs.len())
            .map(|i| FunctorMorphism {
                components: bips.iter().map(|b| b.injections[i].clone()).collect(),
            })
            .collect();
        let proj = (0..fs.len())
            .map(|i| FunctorMorphism {
                components: bips.iter().map(|b| b.projections[i].clone()).collect(),
            })
            .collect();
        Ok((sum, inj, proj))
    }

    /// `X ⋔ F = [X, F(−)]`, each value in the row-major basis of `[X, F x]`.
    pub fn cotensor(&self, x_dim: usize, f: &VValuedFunctor) -> Result<VValuedFunctor> {
        let fp = self.fp();
        let values = f.values.iter().map(|&d| d * x_dim).collect();
        self.functor(values, |x, y| {
            let blocks: Vec<FpMatrix> = (0..self.h(x, y))
                .map(|k| self.act_basis(f, x, y, k).kron(&FpMatrix::identity(fp, x_dim)))
                .collect::<Result<_>>()?;
            hstack_all(fp, f.values[y] * x_dim, &blocks)
        })
    }

    /// `X ⊗ F`, each value in the Kronecker basis of `X ⊗ F x`.
    pub fn tensor(&self, x_dim: usize, f: &VValuedFunctor) -> Result<VValuedFunctor> {
        let fp = self.fp();
        let values = f.values.iter().map(|&d| d * x_dim).collect();
        self.functor(values, |x, y| {
            let blocks: Vec<FpMatrix> = (0..self.h(x, y))
                .map(|k| FpMatrix::identity(fp, x_dim).kron(&self.act_basis(f, x, y, k)))
                .collect::<Result<_>>()?;
            hstack_all(fp, f.values[y] * x_dim, &blocks)
        })
    }

    /// `[X, φ]` and `X ⊗ φ` on morphisms.
    pub fn cotensor_mor(&self, x_dim: usize, phi: &FunctorMorphism) -> Result<FunctorMorphism> {
        let id = FpMatrix::identity(self.fp(), x_dim);
        Ok(FunctorMorphism {
            components: phi.components.iter().map(|c| c.kron(&id)).collect::<Result<_>>()?,
        })
    }

    pub fn tensor_mor(&self, x_dim: usize, phi: &FunctorMorphism) -> Result<FunctorMorphism> {
        let id = FpMatrix::identity(self.fp(), x_dim);
        Ok(FunctorMorphism {
            components: phi.components.iter().map(|c| id.kron(c)).collect::<Result<_>>()?,
        })
    }

    /// `e_k : X ⋔ F → F`, evaluation at the `k`-th basis vector of `X`.
    pub fn cotensor_evaluation(&self, x_dim: usize, f: &VValuedFunctor, k: usize) -> FunctorMorphism {
        let fp = self.fp();
        FunctorMorphism {
            components: f
                .values
                .iter()
                .map(|&d| FpMatrix::from_fn(fp, d, d * x_dim, |r, c| u32::from(c == r * x_dim + k)))
                .collect(),
        }
    }

    /// `F ⊠ G` on `A ⊗ A'` (objects indexed `a·|A'| + a'`), acting by
    /// `(u⊗v)⊗(w⊗z) ↦ F(u)w ⊗ G(v)z`.
    pub fn external_tensor(&self, other: &FunctorCat, f: &VValuedFunctor, g: &VValuedFunctor) -> Result<(FunctorCat, VValuedFunctor)> {
        let fp = self.fp();
        let prod = FunctorCat::new(self.domain.tensor_vcat(&other.domain)?);
        let m = other.n();
        let values = (0..self.n() * m).map(|o| f.values[o / m] * g.values[o % m]).collect();
        let functor = prod.functor(values, |s, t| {
            let (a, b, a2, b2) = (s / m, s % m, t / m, t % m);
            let (ha, hb) = (self.h(a, a2), other.h(b, b2));
            let mut blocks = Vec::with_capacity(ha * hb);
            for u in 0..ha {
                let fu = self.act_basis(f, a, a2, u);
                for w in 0..hb {
                    blocks.push(fu.kron(&other.act_basis(g, b, b2, w))?);
                }
            }
            hstack_all(fp, f.values[a2] * g.values[b2], &blocks)
        })?;
        Ok((prod, functor))
    }

    /// A uniformly random natural transformation `F → G`.
    pub fn random_morphism<R: Rng>(&self, rng: &mut R, f: &VValuedFunctor, g: &VValuedFunctor) -> Result<FunctorMorphism> {
        let hom = self.functor_hom(f, g)?;
        let p = self.fp().p();
        let coords: Vec<u32> = (0..hom.dim()).map(|_| rng.gen_range(0..p)).collect();
        hom.morphism(&coords)
    }

    /// A random finitely presented functor: the cokernel of a random map
    /// between sums of representables.
    pub fn random_functor<R: Rng>(&self, rng: &mut R, max_generators: usize, max_relations: usize) -> Result<VValuedFunctor> {
        let n = self.n();
        let gens: Vec<VValuedFunctor> = (0..rng.gen_range(1..=max_generators.max(1)))
            .map(|_| self.representable(rng.gen_range(0..n)))
            .collect::<Result<_>>()?;
        let rels: Vec<VValuedFunctor> = (0..rng.gen_range(0..=max_relations))
            .map(|_| self.representable(rng.gen_range(0..n)))
            .collect::<Result<_>>()?;
        let (g, _, _) = self.direct_sum(&gens)?;
        let (r, _, _) = self.direct_sum(&rels)?;
        let phi = self.random_morphism(rng, &r, &g)?;
        Ok(self.cokernel(&g, &phi)?.0)
    }
}

/// `X` with `mono ∘ X = h`, componentwise; an error if `h` does not factor.
pub fn factor_through_mono(mono: &FunctorMorphism, h: &FunctorMorphism) -> Result<FunctorMorphism> {
    let v = FinVect::new(match mono.components.first() {
        Some(m) => m.fp(),
        None => return Ok(FunctorMorphism { components: vec![] }),
    });
    let components = mono
        .components
        .iter()
        .zip(&h.components)
        .map(|(m, h)| {
            v.factor_through_mono(m, h)?
                .ok_or_else(|| Error::Verification("morphism does not factor through the monomorphism".into()))
        })
        .collect::<Result<_>>()?;
    Ok(FunctorMorphism { components })
}

/// `X` with `X ∘ epi = h`, componentwise; an error if `h` does not factor.
pub fn factor_through_epi(epi: &FunctorMorphism, h: &FunctorMorphism) -> Result<FunctorMorphism> {
    let v = FinVect::new(match epi.components.first() {
        Some(m) => m.fp(),
        None => return Ok(FunctorMorphism { components: vec![] }),
    });
    let components = epi
        .components
        .iter()
        .zip(&h.components)
        .map(|(e, h)| {
            v.factor_through_epi(e, h)?
                .ok_or_else(|| Error::Verification("morphism does not factor through the epimorphism".into()))
        })
        .collect::<Result<_>>()?;
    Ok(FunctorMorphism { components })
}

fn hstack_all(fp: Fp, rows: usize, blocks: &[FpMatrix]) -> Result<FpMatrix> {
    blocks.iter().try_fold(FpMatrix::zeros(fp, rows, 0), |acc, b| acc.hstack(b))
}

/// Both directions of the Yoneda isomorphism at one object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YonedaIso {
    pub forward: FpMatrix,
    pub backward: FpMatrix,
}

impl YonedaIso {
    pub fn verify(&self) -> Result<()> {
        let fp = self.forward.fp();
        let fb = self.forward.mul(&self.backward)?;
        let bf = self.backward.mul(&self.forward)?;
        if fb == FpMatrix::identity(fp, fb.rows()) && bf == FpMatrix::identity(fp, bf.rows()) {
            Ok(())
        } else {
            Err(Error::Verification("Yoneda round trip is not the identity".into()))
        }
    }
}

/// Presheaves on `C`: V-valued functors on `C^op`.
#[derive(Clone, Debug, PartialEq)]
pub struct PresheafCat {
    base: VCategory<FinVect>,
    functors: FunctorCat,
}

impl PresheafCat {
    pub fn new(base: VCategory<FinVect>) -> Result<Self> {
        let op = base.opposite()?;
        Ok(Self {
            base,
            functors: FunctorCat::new(op),
        })
    }

    /// The category whose presheaves these are.
    pub fn base(&self) -> &VCategory<FinVect> {
        &self.base
    }

    pub fn functors(&self) -> &FunctorCat {
        &self.functors
    }

    /// `y(c) = C(−, c)`.
    pub fn yoneda_object(&self, c: usize) -> Result<Presheaf> {
        self.functors.representable(c)
    }

    /// `ν_x ∈ [C^op,V](y c, P)` with `ν_x(g) = P(g) x`, in the given hom object's coordinates.
    pub fn yoneda_element(&self, p: &Presheaf, c: usize, x: usize, hom: &HomObject) -> Result<Vec<u32>> {
        let components = (0..self.n())
            .map(|d| {
                let h = self.base.hom(d, c).dim;
                let mut m = FpMatrix::zeros(self.fp(), p.value(d), h);
                for g in 0..h {
                    for (r, v) in self.act_basis(p, c, d, g).col(x).into_iter().enumerate() {
                        m.set(r, g, v);
                    }
                }
                Ok(m)
            })
            .collect::<Result<_>>()?;
        hom.coords(&FunctorMorphism { components })
    }

    /// `[C^op,V](y c, P) ≅ P(c)`: evaluation at the identity and its inverse
    /// `x ↦ ν_x`, with both round trips checked.
    pub fn yoneda_iso(&self, p: &Presheaf, c: usize) -> Result<YonedaIso> {
        let yc = self.yoneda_object(c)?;
        let hom = self.functor_hom(&yc, p)?;
        let fp = self.fp();
        let mut forward = FpMatrix::zeros(fp, p.value(c), hom.dim());
        for (k, phi) in hom.basis()?.iter().enumerate() {
            let v = phi.component(c).mul(self.base.ident(c))?;
            forward.paste(0, k, &v);
        }
        let mut backward = FpMatrix::zeros(fp, hom.dim(), p.value(c));
        for x in 0..p.value(c) {
            let v = self.yoneda_element(p, c, x, &hom)?;
            backward.paste(0, x, &FpMatrix::column(fp, &v));
        }
        let iso = YonedaIso { forward, backward };
        iso.verify()?;
        Ok(iso)
    }

    /// `P(g) : P(c) → P(d)` for `g ∈ C(d, c)`.
    pub fn restrict_along(&self, p: &Presheaf, c: usize, d: usize, g: &[u32]) -> Result<FpMatrix> {
        self.functors.act(p, c, d, g)
    }
}

impl Deref for PresheafCat {
    type Target = FunctorCat;

    fn deref(&self) -> &FunctorCat {
        &self.functors
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enriched::examples::{dual_numbers, quiver_a_to_b, unit};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn representables_are_functors_and_vfunctors() {
        let fp = Fp::new(3).unwrap();
        for c in [unit(fp), dual_numbers(fp), quiver_a_to_b(fp)] {
            let ps = PresheafCat::new(c.clone()).unwrap();
            for a in 0..c.len() {
                let y = ps.yoneda_object(a).unwrap();
                assert!(ps.to_vfunctor(&y).unwrap().check_axioms().is_valid());
            }
        }
    }

    #[test]
    fn functor_hom_examples() {
        let fp = Fp::new(2).unwrap();
        let u = PresheafCat::new(unit(fp)).unwrap();
        let f = u.tensor(2, &u.yoneda_object(0).unwrap()).unwrap();
        let g = u.tensor(3, &u.yoneda_object(0).unwrap()).unwrap();
        assert_eq!(u.functor_hom(&f, &g).unwrap().dim(), 6);

        let r = PresheafCat::new(dual_numbers(fp)).unwrap();
        let y = r.yoneda_object(0).unwrap();
        assert_eq!(r.functor_hom(&y, &y).unwrap().dim(), 2);
    }

    #[test]
    fn corrupted_naturality_data_shrinks_hom() {
        let fp = Fp::new(2).unwrap();
        let r = PresheafCat::new(dual_numbers(fp)).unwrap();
        let y = r.yoneda_object(0).unwrap();
        let (tau, xi) = r.tau_xi(&y, &y).unwrap();
        let honest = tau.sub(&xi).unwrap().kernel_basis().cols();
        let mut bad = xi.clone();
        bad.add_at(0, 0, 1);
        let corrupted = tau.sub(&bad).unwrap().kernel_basis().cols();
        assert!(corrupted < honest);
    }

    #[test]
    fn kernels_cokernels_sums_random() {
        let fp = Fp::new(3).unwrap();
        let q = PresheafCat::new(quiver_a_to_b(fp)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let p = q.random_functor(&mut rng, 2, 2).unwrap();
            let r = q.random_functor(&mut rng, 2, 1).unwrap();
            let phi = q.random_morphism(&mut rng, &p, &r).unwrap();
            assert!(q.is_natural(&p, &r, &phi).unwrap());
            let (k, inc) = q.kernel(&p, &phi).unwrap();
            assert!(q.is_natural(&k, &p, &inc).unwrap());
            let (c, proj) = q.cokernel(&r, &phi).unwrap();
            assert!(q.is_natural(&r, &c, &proj).unwrap());
            let (s, inj, pr) = q.direct_sum(&[p.clone(), r.clone()]).unwrap();
            assert!(q.is_natural(&p, &s, &inj[0]).unwrap());
            assert!(q.is_natural(&s, &r, &pr[1]).unwrap());
            let x = q.cotensor(2, &p).unwrap();
            assert!(q.is_natural(&x, &p, &q.cotensor_evaluation(2, &p, 1)).unwrap());
            q.tensor(2, &p).unwrap();
        }
    }
}
