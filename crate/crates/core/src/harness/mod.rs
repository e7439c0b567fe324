//! Certified checks: each verdict carries matrices that can be re-verified
//! without rerunning the computation that produced them.

pub mod change_of_base;
pub mod checks;
pub mod gp;
pub mod instances;
pub mod laws;
pub mod report;

pub use change_of_base::{change_of_base, change_of_base_checks, CobProbes};
pub use checks::{FilteredDiagram, FiniteWeightFamily, GeneratorProbe, ParallelPair, ProbeMorphism};
pub use gp::{gabriel_popescu_verify, GpInstance};
pub use report::{Certificate, CheckResult, HarnessReport, ProbeInventory, Verdict};
