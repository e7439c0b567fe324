//! Exact enriched category theory over finite-field cosmoi.

pub mod cosmos;
pub mod enriched;
pub mod error;
pub mod harness;
pub mod kan;
pub mod limits;
pub mod linalg;
pub mod presheaf;

pub use cosmos::{
    ChainComplex, ChainCosmos, ChainMap, Cosmos, CosmosMorphism, CosmosObject, DualPairWitness, FinVect,
    IsoKind, StructuralIso,
};
pub use enriched::{AxiomReport, FiniteCategory, VCategory, VFunctor, VNatTransformation};
pub use error::{Error, Result};
pub use harness::{Certificate, CheckResult, HarnessReport, Verdict};
pub use kan::{NerveRealization, PresheafOperator};
pub use limits::{PresheafFunctor, WeightedColimit, WeightedLimit};
pub use linalg::{Fp, FpMatrix};
pub use presheaf::{FunctorCat, FunctorMorphism, Presheaf, PresheafCat, VValuedFunctor};
