//! Bases of enrichment.
//!
//! A [`Cosmos`] is a symmetric monoidal closed category whose structural
//! isomorphisms are explicit morphisms rather than identities, so that the
//! coherence laws can be checked instead of assumed. Two cosmoi are provided:
//! [`FinVect`] (finite-dimensional `F_p`-spaces) and [`ChainCosmos`]
//! (bounded cochain complexes of those).

pub mod chain;
pub mod finvect;

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Fp, FpMatrix};

pub use chain::{ChainComplex, ChainCosmos, ChainMap};
pub use finvect::{CosmosMorphism, CosmosObject, FinVect};

pub trait Cosmos: Clone + Debug + PartialEq {
    type Object: Clone + Debug + PartialEq;
    type Morphism: Clone + Debug + PartialEq;

    fn field(&self) -> Fp;
    fn name(&self) -> String;

    fn unit(&self) -> Self::Object;
    fn source(&self, f: &Self::Morphism) -> Self::Object;
    fn target(&self, f: &Self::Morphism) -> Self::Object;

    fn identity(&self, x: &Self::Object) -> Self::Morphism;
    fn zero(&self, x: &Self::Object, y: &Self::Object) -> Self::Morphism;
    /// `g ∘ f`
    fn compose(&self, g: &Self::Morphism, f: &Self::Morphism) -> Result<Self::Morphism>;
    fn add(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<Self::Morphism>;
    fn scale(&self, c: u32, f: &Self::Morphism) -> Self::Morphism;
    fn inverse(&self, f: &Self::Morphism) -> Option<Self::Morphism>;

    fn tensor(&self, x: &Self::Object, y: &Self::Object) -> Result<Self::Object>;
    fn tensor_mor(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<Self::Morphism>;
    fn internal_hom(&self, x: &Self::Object, y: &Self::Object) -> Result<Self::Object>;

    /// `a : (X⊗Y)⊗Z → X⊗(Y⊗Z)`
    fn associator(&self, x: &Self::Object, y: &Self::Object, z: &Self::Object) -> Result<Self::Morphism>;
    /// `l : I⊗X → X`
    fn left_unitor(&self, x: &Self::Object) -> Result<Self::Morphism>;
    /// `r : X⊗I → X`
    fn right_unitor(&self, x: &Self::Object) -> Result<Self::Morphism>;
    /// `c : X⊗Y → Y⊗X`
    fn symmetry(&self, x: &Self::Object, y: &Self::Object) -> Result<Self::Morphism>;

    /// `f : X⊗Y → Z` to its transpose `X → [Y,Z]`
    fn curry(&self, x: &Self::Object, y: &Self::Object, f: &Self::Morphism) -> Result<Self::Morphism>;
    /// `g : X → [Y,Z]` to its transpose `X⊗Y → Z`
    fn uncurry(&self, y: &Self::Object, z: &Self::Object, g: &Self::Morphism) -> Result<Self::Morphism>;

    /// A basis of the `F_p`-space `Hom(I, X)`.
    fn global_elements(&self, x: &Self::Object) -> Result<Vec<Self::Morphism>>;

    /// Coordinates of `f : I → X` in the basis [`Cosmos::global_elements`].
    fn global_coordinates(&self, x: &Self::Object, f: &Self::Morphism) -> Result<Vec<u32>>;

    /// The coproduct `I^{⊕n}`. Tensor products of these are again of this
    /// form, with the Kronecker ordering of summands.
    fn discrete(&self, n: usize) -> Self::Object;

    /// The map `I^{⊕cols} → I^{⊕rows}` with the given matrix.
    fn discrete_mor(&self, m: &FpMatrix) -> Result<Self::Morphism>;

    /// The map `I^{⊕n} → X` whose `k`-th component is `elems[k]`.
    fn from_global_elements(&self, x: &Self::Object, elems: &[Self::Morphism]) -> Result<Self::Morphism>;

    /// All the data of a morphism as one matrix, so that two morphisms
    /// with the same source and target are equal iff their matrices are.
    fn matrix(&self, f: &Self::Morphism) -> FpMatrix;

    /// `ev : [Y,Z]⊗Y → Z`
    fn evaluation(&self, y: &Self::Object, z: &Self::Object) -> Result<Self::Morphism> {
        let h = self.internal_hom(y, z)?;
        self.uncurry(y, z, &self.identity(&h))
    }

    /// `M : [Y,Z]⊗[X,Y] → [X,Z]`, the transpose of
    /// `([Y,Z]⊗[X,Y])⊗X → [Y,Z]⊗([X,Y]⊗X) → [Y,Z]⊗Y → Z`.
    fn internal_compose(&self, x: &Self::Object, y: &Self::Object, z: &Self::Object) -> Result<Self::Morphism> {
        let yz = self.internal_hom(y, z)?;
        let xy = self.internal_hom(x, y)?;
        let a = self.associator(&yz, &xy, x)?;
        let inner = self.tensor_mor(&self.identity(&yz), &self.evaluation(x, y)?)?;
        let outer = self.evaluation(y, z)?;
        let f = self.compose(&outer, &self.compose(&inner, &a)?)?;
        self.curry(&self.tensor(&yz, &xy)?, x, &f)
    }

    /// `I → [X,X]`, the transpose of `l_X`
    fn internal_identity(&self, x: &Self::Object) -> Result<Self::Morphism> {
        self.curry(&self.unit(), x, &self.left_unitor(x)?)
    }

    fn inverse_or_err(&self, f: &Self::Morphism, what: &str) -> Result<Self::Morphism> {
        self.inverse(f)
            .ok_or_else(|| Error::Verification(format!("{what} is not invertible")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsoKind {
    Associator,
    LeftUnit,
    RightUnit,
    Symmetry,
}

/// A named structural isomorphism together with its explicit inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuralIso<C: Cosmos> {
    pub kind: IsoKind,
    pub morphism: C::Morphism,
    pub inverse: C::Morphism,
}

impl<C: Cosmos> StructuralIso<C> {
    pub fn new(cosmos: &C, kind: IsoKind, morphism: C::Morphism) -> Result<Self> {
        let inverse = cosmos.inverse_or_err(&morphism, &format!("{kind:?}"))?;
        Ok(Self {
            kind,
            morphism,
            inverse,
        })
    }
}

/// A dual pair `(X, Y)` with unit `η : I → Y⊗X` and counit `ε : X⊗Y → I`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPairWitness<C: Cosmos> {
    pub x: C::Object,
    pub y: C::Object,
    pub eta: C::Morphism,
    pub epsilon: C::Morphism,
}

impl<C: Cosmos> DualPairWitness<C> {
    /// `X → X⊗I → X⊗(Y⊗X) → (X⊗Y)⊗X → I⊗X → X`
    pub fn first_zigzag(&self, cosmos: &C) -> Result<C::Morphism> {
        let (x, y) = (&self.x, &self.y);
        let r_inv = cosmos.inverse_or_err(&cosmos.right_unitor(x)?, "r")?;
        let step1 = cosmos.tensor_mor(&cosmos.identity(x), &self.eta)?;
        let a_inv = cosmos.inverse_or_err(&cosmos.associator(x, y, x)?, "a")?;
        let step3 = cosmos.tensor_mor(&self.epsilon, &cosmos.identity(x))?;
        let l = cosmos.left_unitor(x)?;
        compose_chain(cosmos, &[r_inv, step1, a_inv, step3, l])
    }

    /// `Y → I⊗Y → (Y⊗X)⊗Y → Y⊗(X⊗Y) → Y⊗I → Y`
    pub fn second_zigzag(&self, cosmos: &C) -> Result<C::Morphism> {
        let (x, y) = (&self.x, &self.y);
        let l_inv = cosmos.inverse_or_err(&cosmos.left_unitor(y)?, "l")?;
        let step1 = cosmos.tensor_mor(&self.eta, &cosmos.identity(y))?;
        let a = cosmos.associator(y, x, y)?;
        let step3 = cosmos.tensor_mor(&cosmos.identity(y), &self.epsilon)?;
        let r = cosmos.right_unitor(y)?;
        compose_chain(cosmos, &[l_inv, step1, a, step3, r])
    }

    /// Both triangle identities, exactly.
    pub fn verify(&self, cosmos: &C) -> Result<()> {
        if self.first_zigzag(cosmos)? != cosmos.identity(&self.x) {
            return Err(Error::Verification("first zig-zag identity fails".into()));
        }
        if self.second_zigzag(cosmos)? != cosmos.identity(&self.y) {
            return Err(Error::Verification("second zig-zag identity fails".into()));
        }
        Ok(())
    }
}

/// Compose morphisms listed in the order they are applied.
pub fn compose_chain<C: Cosmos>(cosmos: &C, steps: &[C::Morphism]) -> Result<C::Morphism> {
    let (first, rest) = steps
        .split_first()
        .ok_or_else(|| crate::error::shape("compose_chain", "empty composite"))?;
    rest.iter()
        .try_fold(first.clone(), |acc, g| cosmos.compose(g, &acc))
}

/// Coherence diagrams of the symmetric monoidal structure. Each function
/// returns both sides of its diagram.
pub mod coherence {
    use super::*;

    /// `((W⊗X)⊗Y)⊗Z → W⊗(X⊗(Y⊗Z))`
    pub fn pentagon<C: Cosmos>(
        c: &C,
        w: &C::Object,
        x: &C::Object,
        y: &C::Object,
        z: &C::Object,
    ) -> Result<(C::Morphism, C::Morphism)> {
        let wx = c.tensor(w, x)?;
        let yz = c.tensor(y, z)?;
        let xy = c.tensor(x, y)?;
        let lhs = c.compose(&c.associator(w, x, &yz)?, &c.associator(&wx, y, z)?)?;
        let rhs = compose_chain(
            c,
            &[
                c.tensor_mor(&c.associator(w, x, y)?, &c.identity(z))?,
                c.associator(w, &xy, z)?,
                c.tensor_mor(&c.identity(w), &c.associator(x, y, z)?)?,
            ],
        )?;
        Ok((lhs, rhs))
    }

    /// `(X⊗I)⊗Y → X⊗Y`
    pub fn triangle<C: Cosmos>(c: &C, x: &C::Object, y: &C::Object) -> Result<(C::Morphism, C::Morphism)> {
        let i = c.unit();
        let lhs = c.compose(
            &c.tensor_mor(&c.identity(x), &c.left_unitor(y)?)?,
            &c.associator(x, &i, y)?,
        )?;
        let rhs = c.tensor_mor(&c.right_unitor(x)?, &c.identity(y))?;
        Ok((lhs, rhs))
    }

    /// `(X⊗Y)⊗Z → Y⊗(Z⊗X)`
    pub fn hexagon<C: Cosmos>(
        c: &C,
        x: &C::Object,
        y: &C::Object,
        z: &C::Object,
    ) -> Result<(C::Morphism, C::Morphism)> {
        let yz = c.tensor(y, z)?;
        let lhs = compose_chain(
            c,
            &[
                c.associator(x, y, z)?,
                c.symmetry(x, &yz)?,
                c.associator(y, z, x)?,
            ],
        )?;
        let rhs = compose_chain(
            c,
            &[
                c.tensor_mor(&c.symmetry(x, y)?, &c.identity(z))?,
                c.associator(y, x, z)?,
                c.tensor_mor(&c.identity(y), &c.symmetry(x, z)?)?,
            ],
        )?;
        Ok((lhs, rhs))
    }

    /// `c_{Y,X} ∘ c_{X,Y}` against the identity
    pub fn symmetry_involution<C: Cosmos>(c: &C, x: &C::Object, y: &C::Object) -> Result<(C::Morphism, C::Morphism)> {
        let xy = c.tensor(x, y)?;
        Ok((c.compose(&c.symmetry(y, x)?, &c.symmetry(x, y)?)?, c.identity(&xy)))
    }

    /// Unit laws of `l` and `r` against the unit object's own unitors:
    /// `l_I = r_I`.
    pub fn unit_coincidence<C: Cosmos>(c: &C) -> Result<(C::Morphism, C::Morphism)> {
        let i = c.unit();
        Ok((c.left_unitor(&i)?, c.right_unitor(&i)?))
    }

    /// Both round trips of the tensor-hom bijection on `f : X⊗Y → Z`.
    pub fn curry_round_trip<C: Cosmos>(
        c: &C,
        x: &C::Object,
        y: &C::Object,
        f: &C::Morphism,
    ) -> Result<bool> {
        let z = c.target(f);
        let g = c.curry(x, y, f)?;
        let back = c.uncurry(y, &z, &g)?;
        let again = c.curry(x, y, &back)?;
        Ok(&back == f && again == g)
    }
}
