//! Relative Jacobian of the elliptic fibration, its sections, the
//! Weierstrass chart on the fibres, and the ruled quotient by the spectral
//! involution.

pub mod ruled;
pub mod section;
pub mod torus;
pub mod weierstrass;

pub use ruled::{
    eta_fibre_lift, eta_project, graph_pullback, numerical_class_check, GraphDivisor, Pullback,
    RuledSection,
};
pub use section::{
    bisection_genus, involution_apply, riemann_hurwitz_check, section_intersections, Bisection,
    Intersections, Involution, Section, SpectralCover, VerticalFibre,
};
pub use torus::{torus_reduce, TorusPoint};
pub use weierstrass::{Weierstrass, P1};
