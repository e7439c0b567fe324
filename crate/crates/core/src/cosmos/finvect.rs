//! Finite-dimensional vector spaces over `F_p`.
//!
//! An object is `F_p^dim` with its canonical basis. Tensor products use the
//! Kronecker basis order (`e_i ⊗ f_j` sits at `i·dim(Y) + j`) and internal
//! homs use the row-major matrix-unit order (`E_{r,c}` sits at
//! `r·dim(X) + c`).

use serde::{Deserialize, Serialize};

use super::{Cosmos, DualPairWitness};
use crate::error::{shape, Error, Result};
use crate::linalg::{Fp, FpMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosmosObject {
    pub dim: usize,
}

impl CosmosObject {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }
}

/// Morphisms `X → Y` are `dim(Y) × dim(X)` matrices.
pub type CosmosMorphism = FpMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinVect {
    fp: Fp,
}

/// A finite biproduct with its injections and projections.
#[derive(Clone, Debug, PartialEq)]
pub struct Biproduct {
    pub object: CosmosObject,
    pub injections: Vec<FpMatrix>,
    pub projections: Vec<FpMatrix>,
}

impl FinVect {
    pub fn new(fp: Fp) -> Self {
        Self { fp }
    }

    pub fn obj(&self, dim: usize) -> CosmosObject {
        CosmosObject { dim }
    }

    /// `[f, g] : [X,Y] → [X',Y']` for `f : X' → X`, `g : Y → Y'`, i.e.
    /// `h ↦ g∘h∘f`.
    pub fn hom_mor(&self, f: &FpMatrix, g: &FpMatrix) -> Result<FpMatrix> {
        g.kron(&f.transpose())
    }

    /// Flatten a matrix into its coordinates in `[X,Y]`.
    pub fn name_of(&self, h: &FpMatrix) -> FpMatrix {
        FpMatrix::column(self.fp, h.entries())
    }

    /// The matrix `X → Y` named by a vector of `[X,Y]`.
    pub fn unname(&self, x: usize, y: usize, v: &[u32]) -> Result<FpMatrix> {
        FpMatrix::new(self.fp, y, x, v.to_vec())
    }

    fn check_parallel(f: &FpMatrix, g: &FpMatrix) -> Result<()> {
        if f.rows() != g.rows() || f.cols() != g.cols() {
            return Err(shape(
                "parallel pair",
                format!("{}x{} vs {}x{}", f.rows(), f.cols(), g.rows(), g.cols()),
            ));
        }
        Ok(())
    }

    /// Equalizer of `f, g : X ⇉ Y` as the kernel of `f − g`.
    pub fn equalizer(&self, f: &FpMatrix, g: &FpMatrix) -> Result<(CosmosObject, FpMatrix)> {
        Self::check_parallel(f, g)?;
        let k = f.sub(g)?.kernel_basis();
        Ok((self.obj(k.cols()), k))
    }

    /// Coequalizer of `f, g : X ⇉ Y` as the cokernel of `f − g`.
    pub fn coequalizer(&self, f: &FpMatrix, g: &FpMatrix) -> Result<(CosmosObject, FpMatrix)> {
        Self::check_parallel(f, g)?;
        let q = f.sub(g)?.cokernel_projection();
        Ok((self.obj(q.rows()), q))
    }

    /// The unique `u` with `inclusion · u = h`, if `h` lands in the image.
    pub fn factor_through_mono(&self, inclusion: &FpMatrix, h: &FpMatrix) -> Result<Option<FpMatrix>> {
        let Some(u) = inclusion.solve(h)? else {
            return Ok(None);
        };
        Ok((inclusion.mul(&u)? == *h).then_some(u))
    }

    /// The unique `u` with `u · projection = h`, if `h` kills the kernel.
    pub fn factor_through_epi(&self, projection: &FpMatrix, h: &FpMatrix) -> Result<Option<FpMatrix>> {
        let Some(s) = projection.right_inverse() else {
            return Err(Error::Verification("projection is not surjective".into()));
        };
        let u = h.mul(&s)?;
        Ok((u.mul(projection)? == *h).then_some(u))
    }

    pub fn biproduct(&self, objects: &[CosmosObject]) -> Biproduct {
        let total: usize = objects.iter().map(|o| o.dim).sum();
        let mut injections = Vec::with_capacity(objects.len());
        let mut projections = Vec::with_capacity(objects.len());
        let mut offset = 0;
        for o in objects {
            let inj = FpMatrix::from_fn(self.fp, total, o.dim, |r, c| u32::from(r == offset + c));
            projections.push(inj.transpose());
            injections.push(inj);
            offset += o.dim;
        }
        Biproduct {
            object: self.obj(total),
            injections,
            projections,
        }
    }

    /// The dual pair `(X, [X,I])` with the evaluation/coevaluation maps.
    pub fn dual_pair(&self, x: CosmosObject) -> Result<DualPairWitness<FinVect>> {
        let n = x.dim;
        let y = self.internal_hom(&x, &self.unit())?;
        // η(1) = Σ_c e*_c ⊗ e_c ; ε(e_i ⊗ e*_c) = δ_ic
        let eta = FpMatrix::from_fn(self.fp, n * n, 1, |r, _| u32::from(r / n.max(1) == r % n.max(1)));
        let epsilon = FpMatrix::from_fn(self.fp, 1, n * n, |_, c| u32::from(c / n.max(1) == c % n.max(1)));
        let w = DualPairWitness { x, y, eta, epsilon };
        w.verify(self)
            .map_err(|e| Error::Verification(format!("internal dual pair check on dim {n}: {e}")))?;
        Ok(w)
    }
}

impl Cosmos for FinVect {
    type Object = CosmosObject;
    type Morphism = FpMatrix;

    fn matrix(&self, f: &FpMatrix) -> FpMatrix {
        f.clone()
    }

    fn field(&self) -> Fp {
        self.fp
    }

    fn name(&self) -> String {
        format!("FinVect({})", self.fp)
    }

    fn unit(&self) -> CosmosObject {
        self.obj(1)
    }

    fn source(&self, f: &FpMatrix) -> CosmosObject {
        self.obj(f.cols())
    }

    fn target(&self, f: &FpMatrix) -> CosmosObject {
        self.obj(f.rows())
    }

    fn identity(&self, x: &CosmosObject) -> FpMatrix {
        FpMatrix::identity(self.fp, x.dim)
    }

    fn zero(&self, x: &CosmosObject, y: &CosmosObject) -> FpMatrix {
        FpMatrix::zeros(self.fp, y.dim, x.dim)
    }

    fn compose(&self, g: &FpMatrix, f: &FpMatrix) -> Result<FpMatrix> {
        g.mul(f)
    }

    fn add(&self, f: &FpMatrix, g: &FpMatrix) -> Result<FpMatrix> {
        f.add(g)
    }

    fn scale(&self, c: u32, f: &FpMatrix) -> FpMatrix {
        f.scale(c)
    }

    fn inverse(&self, f: &FpMatrix) -> Option<FpMatrix> {
        f.is_isomorphism()
    }

    fn tensor(&self, x: &CosmosObject, y: &CosmosObject) -> Result<CosmosObject> {
        Ok(self.obj(x.dim * y.dim))
    }

    fn tensor_mor(&self, f: &FpMatrix, g: &FpMatrix) -> Result<FpMatrix> {
        f.kron(g)
    }

    fn internal_hom(&self, x: &CosmosObject, y: &CosmosObject) -> Result<CosmosObject> {
        Ok(self.obj(x.dim * y.dim))
    }

    fn associator(&self, x: &CosmosObject, y: &CosmosObject, z: &CosmosObject) -> Result<FpMatrix> {
        // (i·dy + j)·dz + k = i·(dy·dz) + (j·dz + k): the Kronecker order is
        // already associative, so the permutation is trivial.
        let n = x.dim * y.dim * z.dim;
        let perm: Vec<(usize, u32)> = (0..n).map(|i| (i, 1)).collect();
        Ok(FpMatrix::signed_permutation(self.fp, &perm))
    }

    fn left_unitor(&self, x: &CosmosObject) -> Result<FpMatrix> {
        Ok(FpMatrix::identity(self.fp, x.dim))
    }

    fn right_unitor(&self, x: &CosmosObject) -> Result<FpMatrix> {
        Ok(FpMatrix::identity(self.fp, x.dim))
    }

    fn symmetry(&self, x: &CosmosObject, y: &CosmosObject) -> Result<FpMatrix> {
        let (dx, dy) = (x.dim, y.dim);
        let perm: Vec<(usize, u32)> = (0..dx * dy)
            .map(|idx| {
                let (i, j) = (idx / dy, idx % dy);
                (j * dx + i, 1)
            })
            .collect();
        Ok(FpMatrix::signed_permutation(self.fp, &perm))
    }

    fn curry(&self, x: &CosmosObject, y: &CosmosObject, f: &FpMatrix) -> Result<FpMatrix> {
        let (dx, dy, dz) = (x.dim, y.dim, f.rows());
        if f.cols() != dx * dy {
            return Err(shape("curry", format!("{} columns for {dx}⊗{dy}", f.cols())));
        }
        Ok(FpMatrix::from_fn(self.fp, dz * dy, dx, |r, i| {
            let (z, j) = (r / dy, r % dy);
            f.get(z, i * dy + j)
        }))
    }

    fn uncurry(&self, y: &CosmosObject, z: &CosmosObject, g: &FpMatrix) -> Result<FpMatrix> {
        let (dx, dy, dz) = (g.cols(), y.dim, z.dim);
        if g.rows() != dz * dy {
            return Err(shape("uncurry", format!("{} rows for [{dy},{dz}]", g.rows())));
        }
        Ok(FpMatrix::from_fn(self.fp, dz, dx * dy, |zz, c| {
            let (i, j) = (c / dy, c % dy);
            g.get(zz * dy + j, i)
        }))
    }

    fn global_elements(&self, x: &CosmosObject) -> Result<Vec<FpMatrix>> {
        Ok((0..x.dim)
            .map(|i| FpMatrix::from_fn(self.fp, x.dim, 1, |r, _| u32::from(r == i)))
            .collect())
    }

    fn global_coordinates(&self, x: &CosmosObject, f: &FpMatrix) -> Result<Vec<u32>> {
        if f.rows() != x.dim || f.cols() != 1 {
            return Err(shape("global element", format!("{}x{} into dim {}", f.rows(), f.cols(), x.dim)));
        }
        Ok(f.col(0))
    }

    fn discrete(&self, n: usize) -> CosmosObject {
        self.obj(n)
    }

    fn discrete_mor(&self, m: &FpMatrix) -> Result<FpMatrix> {
        Ok(m.clone())
    }

    fn from_global_elements(&self, x: &CosmosObject, elems: &[FpMatrix]) -> Result<FpMatrix> {
        let cols: Vec<Vec<u32>> = elems
            .iter()
            .map(|e| self.global_coordinates(x, e))
            .collect::<Result<_>>()?;
        Ok(FpMatrix::from_columns(self.fp, x.dim, &cols))
    }

    fn internal_compose(&self, x: &CosmosObject, y: &CosmosObject, z: &CosmosObject) -> Result<FpMatrix> {
        // E_{z,y} ⊗ E_{y',x} ↦ δ_{y,y'} E_{z,x}
        let (dx, dy, dz) = (x.dim, y.dim, z.dim);
        let mut m = FpMatrix::zeros(self.fp, dz * dx, dz * dy * dy * dx);
        for zz in 0..dz {
            for yy in 0..dy {
                for xx in 0..dx {
                    let col = (zz * dy + yy) * (dy * dx) + (yy * dx + xx);
                    m.set(zz * dx + xx, col, 1);
                }
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosmos::coherence;

    fn v(p: u32) -> FinVect {
        FinVect::new(Fp::new(p).unwrap())
    }

    #[test]
    fn tensor_dims_and_unit_law() {
        let c = v(2);
        assert_eq!(c.tensor(&c.obj(2), &c.obj(3)).unwrap().dim, 6);
        let x = c.obj(3);
        let l = c.left_unitor(&x).unwrap();
        assert_eq!(l, FpMatrix::identity(c.field(), 3));
        assert_eq!(c.tensor(&c.unit(), &x).unwrap(), x);
    }

    #[test]
    fn tensor_mor_functoriality_spot_value() {
        let c = v(2);
        let fp = c.field();
        let a = FpMatrix::from_rows(fp, &[vec![1, 1], vec![0, 1]]).unwrap();
        let a2 = FpMatrix::from_rows(fp, &[vec![0, 1], vec![1, 1]]).unwrap();
        let b = FpMatrix::from_rows(fp, &[vec![1, 0, 1]]).unwrap();
        let b2 = FpMatrix::from_rows(fp, &[vec![1], vec![1], vec![0]]).unwrap();
        let lhs = c.tensor_mor(&a.mul(&a2).unwrap(), &b.mul(&b2).unwrap()).unwrap();
        let rhs = c
            .tensor_mor(&a, &b)
            .unwrap()
            .mul(&c.tensor_mor(&a2, &b2).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn internal_hom_examples() {
        let c = v(3);
        let y = c.obj(4);
        assert_eq!(c.internal_hom(&c.unit(), &y).unwrap(), y);
        assert_eq!(c.internal_hom(&c.obj(5), &c.unit()).unwrap().dim, 5);
    }

    #[test]
    fn hom_mor_acts_on_matrix_units() {
        let c = v(3);
        let fp = c.field();
        let f = FpMatrix::from_rows(fp, &[vec![1, 2], vec![0, 1], vec![2, 2]]).unwrap(); // X'=2 → X=3
        let g = FpMatrix::from_rows(fp, &[vec![1, 0], vec![2, 1]]).unwrap(); // Y=2 → Y'=2
        let hm = c.hom_mor(&f, &g).unwrap();
        for idx in 0..6 {
            let unit = FpMatrix::from_fn(fp, 2, 3, |r, col| u32::from(r * 3 + col == idx));
            let expect = g.mul(&unit).unwrap().mul(&f).unwrap();
            let got = hm.apply(&c.name_of(&unit).col(0)).unwrap();
            assert_eq!(got, expect.entries().to_vec());
        }
    }

    #[test]
    fn curry_examples() {
        let c = v(3);
        let (y, z) = (c.obj(2), c.obj(3));
        let yz = c.internal_hom(&y, &z).unwrap();
        // evaluation is the uncurried identity; currying it back gives the identity
        let ev = c.evaluation(&y, &z).unwrap();
        assert_eq!(c.curry(&yz, &y, &ev).unwrap(), c.identity(&yz));
        // curry(l_Y) names the identity of Y
        let named = c.internal_identity(&y).unwrap();
        assert_eq!(named.col(0), FpMatrix::identity(c.field(), 2).entries().to_vec());
        // round trip on a fixed matrix over F_3, dims (2,2,2)
        let f = FpMatrix::from_rows(c.field(), &[vec![1, 2, 0, 1], vec![2, 2, 1, 0]]).unwrap();
        let x = c.obj(2);
        assert!(coherence::curry_round_trip(&c, &x, &y, &f).unwrap());
    }

    #[test]
    fn direct_composition_matches_generic_composite() {
        let c = v(3);
        for (dx, dy, dz) in [(1, 2, 2), (2, 1, 3), (2, 2, 2), (0, 2, 1)] {
            let (x, y, z) = (c.obj(dx), c.obj(dy), c.obj(dz));
            let yz = c.internal_hom(&y, &z).unwrap();
            let xy = c.internal_hom(&x, &y).unwrap();
            let a = c.associator(&yz, &xy, &x).unwrap();
            let inner = c.tensor_mor(&c.identity(&yz), &c.evaluation(&x, &y).unwrap()).unwrap();
            let outer = c.evaluation(&y, &z).unwrap();
            let f = outer.mul(&inner.mul(&a).unwrap()).unwrap();
            let generic = c.curry(&c.tensor(&yz, &xy).unwrap(), &x, &f).unwrap();
            assert_eq!(generic, c.internal_compose(&x, &y, &z).unwrap(), "dims {dx} {dy} {dz}");
        }
    }

    #[test]
    fn equalizer_examples() {
        let c = v(2);
        let fp = c.field();
        let f = FpMatrix::from_rows(fp, &[vec![1, 1], vec![0, 1]]).unwrap();
        let (e, inc) = c.equalizer(&f, &f).unwrap();
        assert_eq!(e.dim, 2);
        assert_eq!(inc, FpMatrix::identity(fp, 2));

        let (e, _) = c
            .equalizer(&FpMatrix::identity(fp, 2), &FpMatrix::zeros(fp, 2, 2))
            .unwrap();
        assert_eq!(e.dim, 0);

        let f = FpMatrix::from_rows(fp, &[vec![1, 0], vec![0, 0]]).unwrap();
        let (e, inc) = c.equalizer(&f, &FpMatrix::zeros(fp, 2, 2)).unwrap();
        assert_eq!(e.dim, 1);
        assert_eq!(inc, FpMatrix::column(fp, &[0, 1]));

        assert!(c.equalizer(&f, &FpMatrix::zeros(fp, 1, 2)).is_err());
    }

    #[test]
    fn equalizer_universal_property() {
        let c = v(3);
        let fp = c.field();
        let f = FpMatrix::from_rows(fp, &[vec![1, 2, 0], vec![0, 1, 1]]).unwrap();
        let g = FpMatrix::from_rows(fp, &[vec![1, 0, 0], vec![0, 1, 2]]).unwrap();
        let (_, inc) = c.equalizer(&f, &g).unwrap();
        // h := inc · t equalizes, and factors uniquely back to t
        let t = FpMatrix::from_rows(fp, &[vec![2, 1]]).unwrap();
        let h = inc.mul(&t).unwrap();
        assert_eq!(f.mul(&h).unwrap(), g.mul(&h).unwrap());
        assert_eq!(c.factor_through_mono(&inc, &h).unwrap(), Some(t));
        // something that does not equalize does not factor
        let bad = FpMatrix::column(fp, &[0, 1, 0]);
        assert_eq!(c.factor_through_mono(&inc, &bad).unwrap(), None);

        let (e, _) = c.coequalizer(&f, &g).unwrap();
        assert_eq!(e.dim, 0);
        let f = FpMatrix::from_rows(fp, &[vec![1, 2, 0], vec![2, 1, 0]]).unwrap();
        let g = FpMatrix::zeros(fp, 2, 3);
        let (e, q) = c.coequalizer(&f, &g).unwrap();
        assert_eq!(e.dim, 1);
        assert_eq!(q.mul(&f).unwrap(), q.mul(&g).unwrap());
        let not_coequalizing = FpMatrix::from_rows(fp, &[vec![1, 0]]).unwrap();
        assert_eq!(c.factor_through_epi(&q, &not_coequalizing).unwrap(), None);
        let u = FpMatrix::from_rows(fp, &[vec![2]]).unwrap();
        let h = u.mul(&q).unwrap();
        assert_eq!(c.factor_through_epi(&q, &h).unwrap(), Some(u));
    }

    #[test]
    fn biproduct_identities() {
        let c = v(2);
        let b = c.biproduct(&[c.obj(2), c.obj(0), c.obj(3)]);
        assert_eq!(b.object.dim, 5);
        for (i, p) in b.projections.iter().enumerate() {
            for (j, inj) in b.injections.iter().enumerate() {
                let pi = p.mul(inj).unwrap();
                if i == j {
                    assert_eq!(pi, FpMatrix::identity(c.field(), inj.cols()));
                } else {
                    assert!(pi.is_zero());
                }
            }
        }
    }

    #[test]
    fn dual_pair_examples() {
        let c = v(2);
        let w = c.dual_pair(c.unit()).unwrap();
        assert_eq!(w.eta, FpMatrix::identity(c.field(), 1));
        assert_eq!(w.epsilon, FpMatrix::identity(c.field(), 1));

        let w = c.dual_pair(c.obj(2)).unwrap();
        assert_eq!(w.first_zigzag(&c).unwrap(), FpMatrix::identity(c.field(), 2));
        assert_eq!(w.second_zigzag(&c).unwrap(), FpMatrix::identity(c.field(), 2));

        let w = c.dual_pair(c.obj(0)).unwrap();
        assert_eq!(w.eta.rows(), 0);
    }
}
