//! Exact and numeric tools for rank-2 bundles on non-Kähler elliptic
//! surfaces.
//!
//! The crate decides stability of rank-2 holomorphic bundles over minimal
//! non-Kähler elliptic surfaces `X -> B` (quasi-bundles with and without
//! multiple fibres) from three pieces of data: a spectral cover in the
//! relative Jacobian, extension data along the destabilising filtration, and
//! a record of fibre jumps.  On top of the per-bundle verdicts it assembles
//! verified reports on the moduli spaces `M_{delta,c2}`.
//!
//! Module map:
//!
//! * [`surface`]   - surface models, Gauduchon-style degrees, Poisson types
//! * [`nslattice`] - Neron-Severi lattice, exact `m(2,c1)` minimisation
//! * [`jacobian`]  - torus points, sections, Weierstrass p, ruled quotient
//! * [`bundles`]   - bundle descriptors, jumps, allowable modifications
//! * [`stability`] - dual-route stability decisions
//! * [`moduli`]    - moduli-space reports, graph image, fibre descriptions
//!
//! Degrees mix an exact rational part with a real transcendental part; all
//! congruence tests are exact on the rational component and tolerance-based
//! (default [`DEFAULT_EPSILON`]) on the real component.

mod error;
pub mod bundles;
pub mod jacobian;
pub mod moduli;
pub mod nslattice;
pub mod rational;
pub mod report;
pub mod stability;
pub mod surface;

pub use error::{Error, Result};
pub use rational::{rat, rat_int, Rational};

/// Default tolerance on real (non-rational) components of degrees and on
/// torus-point comparisons.
pub const DEFAULT_EPSILON: f64 = 1e-9;

pub use bundles::{
    allowable_modification, consistency_check, delta_from_extension, discriminant, nu_invariant,
    psi_fibre_classify, remove_all_jumps, remove_jump, BundleDescriptor, ExtensionData, Finding,
    JumpDescriptor, PsiFibre, Splitting,
};
pub use jacobian::{
    bisection_genus, eta_fibre_lift, eta_project, graph_pullback, involution_apply,
    numerical_class_check, riemann_hurwitz_check, section_intersections, torus_reduce, Bisection,
    GraphDivisor, Intersections, Involution, Pullback, RuledSection, Section, SpectralCover,
    TorusPoint, VerticalFibre, Weierstrass, P1,
};
pub use moduli::{
    fibre_describe, graph_image_membership, integrable_audit, jump_fibre_describe, moduli_report,
    poisson_report, AuditRecord, FibreDescription, GammaCondition, GraphImage, GraphQuery,
    JumpTower, ModuliContext, ModuliReport, PoissonReport, PrymCopies, Regularity,
};
pub use nslattice::{
    c2_admissible_range, discriminant_numeric, filtrable_exists, m_two, select_delta_class,
    ChernData, NSLattice,
};
pub use stability::{
    corollary_unstable, degree_congruent_mod_z, destabilising_degrees, is_stable_unfiltrable,
    stability_check, CaseTag, Route, StabilityVerdict, Witness,
};
pub use surface::{
    poisson_exists, relative_dualising_degree, Degree, EllipticCurve, LineBundleModel,
    MultipleFibre, PoissonStructure, SurfaceModel,
};
