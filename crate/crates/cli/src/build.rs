//! Conversion from the config schema to core types.

use num_complex::Complex64;
use smod_core::rational::{rat_from_str, rat_to_f64};
use smod_core::{
    eta_project, surface, Bisection, BundleDescriptor, ChernData, Degree, EllipticCurve, Error,
    ExtensionData, GraphDivisor, GraphQuery, Involution, JumpDescriptor, LineBundleModel,
    ModuliContext, MultipleFibre, NSLattice, Result, RuledSection, Section, SpectralCover,
    Splitting, SurfaceModel, TorusPoint, VerticalFibre, P1,
};

use crate::config::{
    BundleConfig, ComplexConfig, DegreeConfig, ExtensionConfig, GraphConfig, HorizontalConfig,
    JumpConfig, LatticePointConfig, LineBundleConfig, P1Config, ProblemConfig, SectionConfig,
    SplittingConfig, SurfaceConfig, VerticalConfig,
};

/// Fully converted problem instance.
pub struct World {
    pub surface: SurfaceModel,
    pub ns: NSLattice,
    pub chern: ChernData,
    pub delta_degree: Degree,
    pub delta_section: Section,
    pub bundle: Option<BundleDescriptor>,
    pub graph: Option<GraphQuery>,
}

fn cx(c: ComplexConfig) -> Complex64 {
    Complex64::new(c.re, c.im)
}

pub fn build_surface(cfg: &SurfaceConfig) -> Result<SurfaceModel> {
    let fibre = EllipticCurve::new(cx(cfg.fibre_tau))?;
    let base = match (cfg.base_genus, cfg.base_tau) {
        (1, Some(t)) => Some(EllipticCurve::new(cx(t))?),
        (1, None) => {
            return Err(Error::model(
                "surface.base_tau is required when base_genus is 1",
            ))
        }
        (_, Some(_)) => {
            return Err(Error::model(
                "surface.base_tau is only meaningful when base_genus is 1",
            ))
        }
        _ => None,
    };
    let fibres = cfg
        .multiple_fibres
        .iter()
        .map(|f| MultipleFibre {
            multiplicity: f.multiplicity,
            base_point: cx(f.base_point),
        })
        .collect();
    SurfaceModel::new(
        cfg.base_genus,
        base,
        fibre,
        cfg.theta_degree,
        cx(cfg.tau),
        fibres,
    )
}

fn torus_point(x: &SurfaceModel, p: &LatticePointConfig) -> Result<TorusPoint> {
    let s = rat_to_f64(rat_from_str(&p.s)?);
    let t = rat_to_f64(rat_from_str(&p.t)?);
    Ok(TorusPoint::from_coords(x.fibre, s, t))
}

fn section(x: &SurfaceModel, cfg: &SectionConfig) -> Result<Section> {
    let s = match cfg {
        SectionConfig::Constant { point } => Section::Constant(torus_point(x, point)?),
        SectionConfig::Affine { u, offset } => Section::Affine {
            u: cx(*u),
            c: torus_point(x, offset)?,
        },
    };
    s.validate(x)?;
    Ok(s)
}

fn line_bundle(x: &SurfaceModel, cfg: &LineBundleConfig) -> Result<LineBundleModel> {
    let coeffs = if cfg.fibre_coeffs.is_empty() {
        vec![0; x.multiple_fibre_count()]
    } else {
        cfg.fibre_coeffs.clone()
    };
    if coeffs.len() != x.multiple_fibre_count() {
        return Err(Error::model(format!(
            "{} fibre_coeffs for a surface with {} multiple fibres",
            coeffs.len(),
            x.multiple_fibre_count()
        )));
    }
    Ok(LineBundleModel::new(
        cfg.base_chern,
        cx(cfg.alpha),
        coeffs,
        section(x, &cfg.section)?,
    ))
}

fn p1(cfg: &P1Config) -> P1 {
    match cfg {
        P1Config::Finite { value } => P1::Finite(cx(*value)),
        P1Config::Infinity => P1::Infinity,
    }
}

fn vertical(cfgs: &[VerticalConfig]) -> Vec<VerticalFibre> {
    cfgs.iter()
        .map(|v| VerticalFibre {
            base_point: cx(v.base_point),
            multiplicity: v.multiplicity,
        })
        .collect()
}

fn ruled_section(cfg: &HorizontalConfig) -> Result<RuledSection> {
    match cfg {
        HorizontalConfig::Rational {
            numerator,
            denominator,
        } => Ok(RuledSection::Rational {
            numerator: numerator.iter().map(|c| cx(*c)).collect(),
            denominator: denominator.iter().map(|c| cx(*c)).collect(),
        }),
        HorizontalConfig::Sampled { samples, degree } => Ok(RuledSection::Sampled {
            samples: samples
                .iter()
                .map(|s| (cx(s.base_point), p1(&s.value)))
                .collect(),
            degree: *degree,
        }),
        HorizontalConfig::FromSections => Err(Error::model(
            "horizontal data of type from_sections needs extension sections and is \
             only valid inside a bundle cover",
        )),
    }
}

fn bisection(
    x: &SurfaceModel,
    cfg: &HorizontalConfig,
    ext: Option<&ExtensionConfig>,
) -> Result<Bisection> {
    match cfg {
        HorizontalConfig::FromSections => {
            let e = ext.ok_or_else(|| {
                Error::model("cover.horizontal of type from_sections requires bundle.extension")
            })?;
            Ok(Bisection::Reducible {
                s1: section(x, &e.destab_section)?,
                s2: section(x, &e.other_section)?,
            })
        }
        other => Ok(Bisection::Irreducible(ruled_section(other)?)),
    }
}

fn splitting(cfg: SplittingConfig) -> Splitting {
    match cfg {
        SplittingConfig::SplitsEverywhere => Splitting::SplitsEverywhere,
        SplittingConfig::SplitsOnFinitely { n } => Splitting::SplitsOnFinitely { n },
        SplittingConfig::NontrivialOnFinitely { n } => Splitting::NontrivialOnFinitely { n },
    }
}

fn extension(x: &SurfaceModel, cfg: &ExtensionConfig) -> Result<ExtensionData> {
    Ok(ExtensionData {
        destab_section: section(x, &cfg.destab_section)?,
        destab_bundle: line_bundle(x, &cfg.destab_bundle)?,
        other_section: section(x, &cfg.other_section)?,
        splitting: splitting(cfg.splitting),
    })
}

fn jump(cfg: &JumpConfig) -> Result<JumpDescriptor> {
    JumpDescriptor::new(
        cx(cfg.base_point),
        cfg.over_multiple_fibre,
        cfg.jumping_sequence.clone(),
    )
}

fn degree_datum(cfg: &DegreeConfig) -> Result<Degree> {
    Ok(Degree::new(rat_from_str(&cfg.rational)?, cfg.real))
}

pub fn build_bundle(
    x: &SurfaceModel,
    chern: &ChernData,
    cfg: &BundleConfig,
) -> Result<BundleDescriptor> {
    let det = line_bundle(x, &cfg.determinant)?;
    let cover = SpectralCover {
        vertical: vertical(&cfg.cover.vertical),
        horizontal: bisection(x, &cfg.cover.horizontal, cfg.extension.as_ref())?,
    };
    let ext = cfg
        .extension
        .as_ref()
        .map(|e| extension(x, e))
        .transpose()?;
    let jumps = cfg.jumps.iter().map(jump).collect::<Result<Vec<_>>>()?;
    BundleDescriptor::new(det, chern.c1.clone(), chern.c2, cover, ext, jumps)
}

pub fn build_graph_query(
    x: &SurfaceModel,
    cfg: &GraphConfig,
    delta_section: &Section,
) -> Result<GraphQuery> {
    let graph = GraphDivisor {
        vertical: vertical(&cfg.vertical),
        section: ruled_section(&cfg.section)?,
    };
    let mut excluded = cfg
        .excluded_constants
        .as_ref()
        .map(|v| v.iter().map(p1).collect::<Vec<_>>());
    if let Some(candidates) = &cfg.candidate_constants {
        // Project candidate torus points into the quotient chart so the
        // membership test can compare them against a constant graph.
        let inv = Involution::new(delta_section.clone());
        let list = excluded.get_or_insert_with(Vec::new);
        for c in candidates {
            let pt = torus_point(x, c)?;
            list.push(eta_project(&inv, Complex64::new(0.0, 0.0), &pt));
        }
    }
    let component_degree = cfg
        .component_degree
        .as_ref()
        .map(degree_datum)
        .transpose()?;
    Ok(GraphQuery {
        graph,
        excluded_constants: excluded,
        component_degree,
    })
}

impl World {
    pub fn from_config(cfg: &ProblemConfig) -> Result<World> {
        let x = build_surface(&cfg.surface)?;
        let ns = NSLattice::new(cfg.ns.gram.clone())?;
        let chern = ChernData {
            c1: cfg.chern.c1.clone(),
            c2: cfg.chern.c2,
        };
        // Without a bundle the determinant is taken to be trivial: zero
        // degree, zero constant section.
        let (delta_degree, delta_section) = match &cfg.bundle {
            Some(b) => {
                let det = line_bundle(&x, &b.determinant)?;
                (surface::degree(&det, &x)?, det.section)
            }
            None => (Degree::zero(), Section::constant_zero(x.fibre)),
        };
        let bundle = cfg
            .bundle
            .as_ref()
            .map(|b| build_bundle(&x, &chern, b))
            .transpose()?;
        let graph = cfg
            .graph
            .as_ref()
            .map(|g| build_graph_query(&x, g, &delta_section))
            .transpose()?;
        Ok(World {
            surface: x,
            ns,
            chern,
            delta_degree,
            delta_section,
            bundle,
            graph,
        })
    }

    pub fn context(&self) -> Result<ModuliContext> {
        ModuliContext::new(
            self.surface.clone(),
            self.ns.clone(),
            self.chern.c1.clone(),
            self.chern.c2,
            self.delta_degree,
            self.delta_section.clone(),
        )
    }
}
