//! Reports on the moduli spaces `M_{delta,c2}`: emptiness, expected
//! dimension, smoothness, image of the graph map, generic and jump fibres,
//! and the Poisson / integrable-system bookkeeping.

use num_complex::Complex64;

use crate::bundles::JumpDescriptor;
use crate::jacobian::ruled::{graph_pullback, numerical_class_check, GraphDivisor, Pullback};
use crate::jacobian::section::Involution;
use crate::jacobian::weierstrass::P1;
use crate::jacobian::{RuledSection, Section};
use crate::nslattice::{m_two, select_delta_class, NSLattice};
use crate::rational::{rat, rat_int, Rational};
use crate::stability::degree_congruent_mod_z;
use crate::surface::{poisson_exists, Degree, PoissonStructure, SurfaceModel};
use crate::{Error, PsiFibre, Result, DEFAULT_EPSILON};

/// Everything a moduli-space query needs: the surface, the lattice, the
/// Chern data, and the distinguished determinant representative.
#[derive(Debug, Clone)]
pub struct ModuliContext {
    pub surface: SurfaceModel,
    pub ns: NSLattice,
    pub c1: Vec<i64>,
    pub delta_class: Vec<i64>,
    pub delta_degree: Degree,
    pub delta_section: Section,
    pub c2: i64,
}

impl ModuliContext {
    /// Builds a context, choosing the canonical determinant representative
    /// for `c1`.
    pub fn new(
        surface: SurfaceModel,
        ns: NSLattice,
        c1: Vec<i64>,
        c2: i64,
        delta_degree: Degree,
        delta_section: Section,
    ) -> Result<Self> {
        let delta_class = select_delta_class(&ns, &c1)?;
        delta_section.validate(&surface)?;
        Ok(ModuliContext {
            surface,
            ns,
            c1,
            delta_class,
            delta_degree,
            delta_section,
            c2,
        })
    }

    /// Same, but with a caller-chosen representative; it must lie in
    /// `c1 + 2 NS` and attain `m(2, c1)`.
    pub fn with_delta_class(
        surface: SurfaceModel,
        ns: NSLattice,
        c1: Vec<i64>,
        delta_class: Vec<i64>,
        c2: i64,
        delta_degree: Degree,
        delta_section: Section,
    ) -> Result<Self> {
        if delta_class.len() != c1.len() {
            return Err(Error::model("delta_class and c1 have different lengths"));
        }
        if c1
            .iter()
            .zip(&delta_class)
            .any(|(a, d)| (a - d).rem_euclid(2) != 0)
        {
            return Err(Error::model("delta_class is not congruent to c1 mod 2 NS"));
        }
        let m = m_two(&ns, &c1)?;
        let q_delta = ns.q_int(&delta_class)?;
        if rat(-q_delta, 8) != m {
            return Err(Error::model(format!(
                "delta_class does not attain m(2, c1) = {m}",
            )));
        }
        delta_section.validate(&surface)?;
        Ok(ModuliContext {
            surface,
            ns,
            c1,
            delta_class,
            delta_degree,
            delta_section,
            c2,
        })
    }

    /// `m(2, c1) = -q(delta/2)/2`, exact.
    pub fn m(&self) -> Rational {
        let q = self
            .ns
            .q_int(&self.delta_class)
            .expect("delta_class validated at construction");
        rat(-q, 8)
    }

    /// `Delta = m + c2/2`, exact.
    pub fn discriminant(&self) -> Rational {
        self.m() + rat(self.c2 as i128, 2)
    }

    pub fn involution(&self) -> Involution {
        Involution::new(self.delta_section.clone())
    }

    fn q_c1(&self) -> i128 {
        self.ns
            .q_int(&self.c1)
            .expect("c1 validated at construction")
    }
}

/// Caller-supplied gamma test `c2 - q(c1)/2 > g - 1 + gamma/4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaCondition {
    pub gamma: Rational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModuliReport {
    pub empty: bool,
    pub reason: Option<String>,
    /// `8 Delta`; the actual dimension wherever smoothness is reported.
    pub expected_dim: Rational,
    pub smooth_everywhere: bool,
    pub regular_locus_smooth: bool,
    pub gamma_condition: Option<GammaCondition>,
    pub poisson: PoissonReport,
    pub integrable_audit: Option<AuditRecord>,
}

/// Moduli-space report.  `gamma` feeds the optional sufficient-smoothness
/// test; pass `None` to skip it.
pub fn moduli_report(ctx: &ModuliContext, gamma: Option<Rational>) -> ModuliReport {
    let m = ctx.m();
    let c2 = rat_int(ctx.c2 as i128);
    let expected_dim = rat_int(8) * ctx.discriminant();
    let (empty, reason) = if c2 < rat_int(-2) * m {
        (
            true,
            Some(format!(
                "c2 = {} lies below the admissible bound -2m = {}",
                ctx.c2,
                rat_int(-2) * m
            )),
        )
    } else if m == rat_int(0) && ctx.c2 == 0 {
        (
            true,
            Some("m = 0 and c2 = 0 admit no bundles".to_string()),
        )
    } else {
        (false, None)
    };
    let g = ctx.surface.base_genus;
    let r = ctx.surface.multiple_fibre_count();
    let smooth_everywhere = g <= 1 && r == 0;
    let reg_lhs = c2 - rat(ctx.q_c1(), 2);
    let regular_locus_smooth = reg_lhs > rat_int(g as i128 - 1);
    let gamma_condition = gamma.map(|gamma| GammaCondition {
        gamma,
        holds: reg_lhs > rat_int(g as i128 - 1) + gamma / rat_int(4),
    });
    let poisson = poisson_report(ctx, true, None);
    let integrable_audit = integrable_audit(ctx).ok();
    ModuliReport {
        empty,
        reason,
        expected_dim,
        smooth_everywhere,
        regular_locus_smooth,
        gamma_condition,
        poisson,
        integrable_audit,
    }
}

/// A point of the graph space plus the excluded-set data the image
/// propositions need.  `excluded_constants` is the set I (constants over
/// the base); `component_degree` is the degree of the line bundle attached
/// to a reducible pullback component (the set-J congruence datum and the
/// regularity flag both read it).
#[derive(Debug, Clone)]
pub struct GraphQuery {
    pub graph: GraphDivisor,
    pub excluded_constants: Option<Vec<P1>>,
    pub component_degree: Option<Degree>,
}

impl GraphQuery {
    pub fn plain(graph: GraphDivisor) -> Self {
        GraphQuery {
            graph,
            excluded_constants: None,
            component_degree: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphImage {
    InImage,
    NotInImage { reason: String },
    NeedsData { what: String },
}

/// Constant value of a degree-0 horizontal section, if it is one.
fn constant_value(s: &RuledSection) -> Option<P1> {
    if s.degree() != 0 {
        return None;
    }
    match s {
        RuledSection::Rational { .. } => s.eval_rational(Complex64::new(0.0, 0.0)).ok(),
        RuledSection::Sampled { samples, .. } => samples.first().map(|(_, w)| *w),
    }
}

/// Membership of a graph divisor in the image of the graph map, for
/// surfaces without multiple fibres.  Dispatches on `(m(2,c1), c2)`.
pub fn graph_image_membership(ctx: &ModuliContext, q: &GraphQuery) -> Result<GraphImage> {
    if ctx.surface.multiple_fibre_count() > 0 {
        return Ok(GraphImage::NeedsData {
            what: "multiple-fibre analogues of the image propositions are stated but not \
                   implemented; supply a surface without multiple fibres"
                .to_string(),
        });
    }
    if !numerical_class_check(&q.graph, ctx.c2) {
        return Err(Error::model(format!(
            "graph class (vertical weight {} + degree {}) does not match c2 = {}",
            q.graph.vertical_weight(),
            q.graph.section.degree(),
            ctx.c2
        )));
    }
    let m = ctx.m();
    let c2 = ctx.c2;
    if rat_int(c2 as i128) < rat_int(-2) * m {
        return Ok(GraphImage::NotInImage {
            reason: "moduli empty".to_string(),
        });
    }
    if m == rat_int(0) {
        return Ok(match c2 {
            0 => GraphImage::NotInImage {
                reason: "moduli empty".to_string(),
            },
            1 => one_jump_membership(ctx, q),
            _ => GraphImage::InImage,
        });
    }
    // m > 0 from here on
    if c2 < 0 {
        return Ok(GraphImage::InImage);
    }
    if c2 == 0 && m == rat(1, 4) {
        return excluded_j_membership(ctx, q);
    }
    Ok(GraphImage::InImage)
}

/// The `c2 = 1` case: the complement of the image is `B x I`, the graphs
/// made of one vertical fibre and a constant section with constant in `I`.
fn one_jump_membership(ctx: &ModuliContext, q: &GraphQuery) -> GraphImage {
    let vertical_simple =
        q.graph.vertical.len() == 1 && q.graph.vertical[0].multiplicity == 1;
    let constant = constant_value(&q.graph.section);
    match (vertical_simple, constant) {
        (true, Some(w)) => {
            let Some(excluded) = &q.excluded_constants else {
                return GraphImage::NeedsData {
                    what: "excluded constant set I (projection of the coincidence locus)"
                        .to_string(),
                };
            };
            let _ = ctx;
            if excluded.iter().any(|e| e.approx_eq(&w, DEFAULT_EPSILON)) {
                GraphImage::NotInImage {
                    reason: "graph lies in B x I".to_string(),
                }
            } else {
                GraphImage::InImage
            }
        }
        // a horizontal degree-1 graph is never excluded
        _ => GraphImage::InImage,
    }
}

/// The `c2 = 0, m = 1/4` case: the complement is the set J of constant
/// graphs whose pullback splits into sections of degree congruent to
/// `deg delta / 2` mod Z.
fn excluded_j_membership(ctx: &ModuliContext, q: &GraphQuery) -> Result<GraphImage> {
    let pullback = graph_pullback(&q.graph.section, &ctx.involution(), ctx.surface.fibre)?;
    Ok(match pullback {
        Pullback::Irreducible(_) => GraphImage::InImage,
        Pullback::Unknown => GraphImage::NeedsData {
            what: "pullback irreducibility undetermined; densify the sample loop".to_string(),
        },
        Pullback::Reducible(_, _) => {
            let Some(k_degree) = &q.component_degree else {
                return Ok(GraphImage::NeedsData {
                    what: "degree of the line bundle attached to the reducible pullback \
                           component (the set-J congruence datum)"
                        .to_string(),
                });
            };
            if degree_congruent_mod_z(k_degree, &ctx.delta_degree.half(), DEFAULT_EPSILON) {
                GraphImage::NotInImage {
                    reason: "graph lies in J".to_string(),
                }
            } else {
                GraphImage::InImage
            }
        }
    })
}

/// How many copies of the Prym variety make up a generic fibre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrymCopies {
    One,
    /// Multiple fibres present: the count is finite but not pinned down.
    FiniteUnresolved,
}

impl std::fmt::Display for PrymCopies {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PrymCopies::One => write!(f, "1"),
            PrymCopies::FiniteUnresolved => write!(f, "finite (unresolved count)"),
        }
    }
}

/// Regularity demanded of the extension-component line bundles over the
/// coincidence fibres of the two pullback sections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularity {
    AtLeastOneCoincidenceFibre,
    AtLeastTwoCoincidenceFibres,
}

impl std::fmt::Display for Regularity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regularity::AtLeastOneCoincidenceFibre => {
                write!(f, "regular on at least one coincidence fibre")
            }
            Regularity::AtLeastTwoCoincidenceFibres => {
                write!(f, "regular on at least two coincidence fibres")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FibreDescription {
    Prym {
        /// `4 Delta + g - 1`.
        dim: Rational,
        copies: PrymCopies,
    },
    /// Components parametrised by destabilising line bundles of the given
    /// degree that pass the stability check.
    ExtensionComponents {
        component_degree: Degree,
        regularity: Regularity,
    },
    Indeterminate {
        what: String,
    },
}

/// Generic fibre of the graph map over the given graph (no vertical
/// components; those route to [`jump_fibre_describe`]).
pub fn fibre_describe(ctx: &ModuliContext, q: &GraphQuery) -> Result<FibreDescription> {
    if !q.graph.vertical.is_empty() {
        return Err(Error::domain(
            "graph has vertical components; describe those with jump_fibre_describe",
        ));
    }
    if !numerical_class_check(&q.graph, ctx.c2) {
        return Err(Error::model(format!(
            "graph class does not match c2 = {}",
            ctx.c2
        )));
    }
    let pullback = graph_pullback(&q.graph.section, &ctx.involution(), ctx.surface.fibre)?;
    Ok(match pullback {
        Pullback::Irreducible(_) => {
            let g = ctx.surface.base_genus as i128;
            let dim = rat_int(4) * ctx.discriminant() + rat_int(g - 1);
            let copies = if ctx.surface.multiple_fibre_count() == 0 {
                PrymCopies::One
            } else {
                PrymCopies::FiniteUnresolved
            };
            FibreDescription::Prym { dim, copies }
        }
        Pullback::Reducible(_, _) => {
            let Some(component_degree) = q.component_degree.clone() else {
                return Ok(FibreDescription::Indeterminate {
                    what: "degree of the destabilising line bundle attached to the pullback \
                           components"
                        .to_string(),
                });
            };
            let regularity = if degree_congruent_mod_z(
                &component_degree,
                &ctx.delta_degree.half(),
                DEFAULT_EPSILON,
            ) {
                Regularity::AtLeastTwoCoincidenceFibres
            } else {
                Regularity::AtLeastOneCoincidenceFibre
            };
            FibreDescription::ExtensionComponents {
                component_degree,
                regularity,
            }
        }
        Pullback::Unknown => FibreDescription::Indeterminate {
            what: "monodromy sampling could not certify the pullback as reducible or \
                   irreducible"
                .to_string(),
        },
    })
}

/// Jump-fibration tower over one vertical component: the fibre type of
/// each modification step, top height first.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpTower {
    pub base_point: Complex64,
    pub steps: Vec<PsiFibre>,
}

/// Fibre chains of the jump fibration.  Each vertical component of the
/// graph needs a jumping plan with matching total multiplicity; every
/// tower is reported against the ambient `c2` of the context.
pub fn jump_fibre_describe(
    ctx: &ModuliContext,
    graph: &GraphDivisor,
    plans: &[JumpDescriptor],
) -> Result<Vec<JumpTower>> {
    let same = |a: Complex64, b: Complex64| (a - b).norm() <= DEFAULT_EPSILON;
    for plan in plans {
        if !graph
            .vertical
            .iter()
            .any(|v| same(v.base_point, plan.base_point))
        {
            return Err(Error::domain(format!(
                "jumping plan at {} matches no vertical component",
                plan.base_point
            )));
        }
    }
    let mut towers = Vec::new();
    for v in &graph.vertical {
        let Some(plan) = plans.iter().find(|p| same(p.base_point, v.base_point)) else {
            return Err(Error::domain(format!(
                "vertical component at {} has no jumping plan",
                v.base_point
            )));
        };
        if plan.multiplicity() != v.multiplicity as u64 {
            return Err(Error::domain(format!(
                "jumping sequence at {} sums to {}, vertical multiplicity is {}",
                v.base_point,
                plan.multiplicity(),
                v.multiplicity
            )));
        }
        let seq = &plan.jumping_sequence;
        let mut c2 = ctx.c2;
        let mut steps = Vec::with_capacity(seq.len());
        for (k, &h) in seq.iter().enumerate() {
            let remaining = (seq.len() - k - 1) as i64;
            let next = seq.get(k + 1).map(|&h| h as i64);
            steps.push(crate::bundles::psi_fibre_classify(
                c2, h as i64, next, remaining,
            )?);
            c2 -= h as i64;
        }
        towers.push(JumpTower {
            base_point: v.base_point,
            steps,
        });
    }
    Ok(towers)
}

#[derive(Debug, Clone, PartialEq)]
pub enum PoissonReport {
    NoPoissonStructure {
        reason: String,
    },
    /// Genus-1 base: the structure is symplectic, rank = dim everywhere.
    Symplectic {
        rank: Rational,
    },
    /// Genus-0 base: degenerate structure.  `stated_rank` and
    /// `generic_rank` reproduce the source formulas verbatim;
    /// `rank_formula_discrepancy` flags that they exceed the dimension
    /// bound rank <= dim (no corrected formula is substituted).
    Degenerate {
        stated_rank: Option<Rational>,
        generic_rank: Rational,
        rank_formula_discrepancy: bool,
        drop_locus: String,
    },
}

/// Poisson data of the moduli space.  `h0_ad_e_on_d` is the caller's
/// `dim H^0(D, ad(E|_D))` for the stated rank formula; `regular_over_d`
/// marks whether the bundle is regular over the anticanonical divisor.
pub fn poisson_report(
    ctx: &ModuliContext,
    regular_over_d: bool,
    h0_ad_e_on_d: Option<i64>,
) -> PoissonReport {
    let dim = rat_int(8) * ctx.discriminant();
    match poisson_exists(&ctx.surface) {
        PoissonStructure::None => PoissonReport::NoPoissonStructure {
            reason: "the surface has multiple fibres, so the anticanonical bundle has no \
                     section"
                .to_string(),
        },
        PoissonStructure::Symplectic => PoissonReport::Symplectic { rank: dim },
        PoissonStructure::DegeneratePoisson => {
            let stated_rank = h0_ad_e_on_d.map(|h0| rat_int(4) * dim - rat_int(h0 as i128));
            let generic_rank = rat_int(4) * dim - rat_int(2);
            let positive_dim = dim > rat_int(0);
            let rank_formula_discrepancy = positive_dim
                && (generic_rank > dim || stated_rank.as_ref().map_or(false, |r| *r > dim));
            let drop_locus = if regular_over_d {
                "rank drops only on bundles that are not regular over the two anticanonical \
                 fibres"
                    .to_string()
            } else {
                "bundle not regular over the anticanonical fibres: the generic rank does not \
                 apply here"
                    .to_string()
            };
            PoissonReport::Degenerate {
                stated_rank,
                generic_rank,
                rank_formula_discrepancy,
                drop_locus,
            }
        }
    }
}

/// Dimension bookkeeping of the integrable system.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditRecord {
    pub dim_m: Rational,
    pub fibre_dim: Rational,
    pub base_dim: Rational,
    /// For genus-1 bases: whether the fibres are middle-dimensional.
    pub lagrangian_balance: Option<bool>,
}

/// `dim M = 8 Delta`, fibre `4 Delta + g - 1`, base the difference; on a
/// genus-1 base the fibres must be middle-dimensional.
pub fn integrable_audit(ctx: &ModuliContext) -> Result<AuditRecord> {
    let g = ctx.surface.base_genus;
    if ctx.surface.multiple_fibre_count() > 0 {
        return Err(Error::domain(
            "integrable-system audit applies to surfaces without multiple fibres",
        ));
    }
    if g > 1 {
        return Err(Error::domain("audit applies to base genus 0 or 1"));
    }
    let dim_m = rat_int(8) * ctx.discriminant();
    let fibre_dim = rat_int(4) * ctx.discriminant() + rat_int(g as i128 - 1);
    let base_dim = dim_m - fibre_dim;
    let lagrangian_balance = (g == 1).then(|| fibre_dim == dim_m / rat_int(2));
    Ok(AuditRecord {
        dim_m,
        fibre_dim,
        base_dim,
        lagrangian_balance,
    })
}
