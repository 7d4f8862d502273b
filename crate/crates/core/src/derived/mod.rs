//! Objects of the derived category of ℤ-modules described by their
//! cohomology, with the functors needed for truncations.

pub mod cech;
pub mod elementary;
pub mod functors;
pub mod object;
pub mod prop47;
pub mod truncation;
pub mod witness;

pub use cech::{engine_report, CechOracle, OracleDegree, OracleReport};
pub use elementary::{Atom, ElementaryModule, PruferProfile};
pub use functors::{gamma_and_r1, q_part, quotient_by_gamma, rgamma, rq};
pub use object::{ExtensionCertificate, FormalObject};
pub use prop47::{prop47_crosscheck, Prop47Report};
pub use truncation::{
    generator_witness, in_aisle, in_coaisle, orthogonality_check, residue_module, tau_filtration, tau_single,
    HomKind, OrthogonalityWitness, TruncationResult,
};
pub use witness::{first_violation_witness, theorem55_witness, Theorem55Report};
