//! Stable JSON views of the report types.
//!
//! Formatting contract: rationals are `"p/q"` strings, reals are strings
//! with 12 significant digits, complex numbers are `{"im", "re"}` objects.
//! serde_json's map is ordered, so serialization is byte-deterministic.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::bundles::Finding;
use crate::moduli::{
    AuditRecord, FibreDescription, GraphImage, JumpTower, ModuliReport, PoissonReport,
};
use crate::rational::{rat_to_string, Rational};
use crate::stability::{Route, StabilityVerdict};
use crate::surface::{
    poisson_exists, relative_dualising_degree, Degree, PoissonStructure, SurfaceModel,
};
use crate::PsiFibre;

pub fn rational_value(r: Rational) -> Value {
    Value::String(rat_to_string(r))
}

/// 12 significant digits, scientific; `-0.0` is normalized first.
pub fn real_value(x: f64) -> Value {
    let x = if x == 0.0 { 0.0 } else { x };
    Value::String(format!("{x:.11e}"))
}

pub fn complex_value(z: Complex64) -> Value {
    json!({ "im": real_value(z.im), "re": real_value(z.re) })
}

pub fn degree_value(d: &Degree) -> Value {
    json!({
        "rational": rational_value(d.rational_part),
        "real": real_value(d.real_part),
    })
}

pub fn poisson_kind(p: PoissonStructure) -> &'static str {
    match p {
        PoissonStructure::None => "none",
        PoissonStructure::Symplectic => "symplectic",
        PoissonStructure::DegeneratePoisson => "degenerate",
    }
}

pub fn surface_info_value(x: &SurfaceModel) -> Value {
    let fibres: Vec<Value> = x
        .multiple_fibres
        .iter()
        .map(|f| {
            json!({
                "base_point": complex_value(f.base_point),
                "multiplicity": f.multiplicity,
            })
        })
        .collect();
    json!({
        "base_genus": x.base_genus,
        "multiple_fibres": fibres,
        "poisson": poisson_kind(poisson_exists(x)),
        "relative_dualising_degree": degree_value(&relative_dualising_degree(x)),
        "tau_abs": real_value(x.tau.norm()),
        "theta_degree": x.theta_degree,
    })
}

fn route_str(r: Route) -> &'static str {
    match r {
        Route::DegreesRoute => "degrees",
        Route::ClosedFormRoute => "closed-form",
        Route::UnfiltrableRoute => "unfiltrable",
    }
}

pub fn verdict_value(v: &StabilityVerdict) -> Value {
    json!({
        "case": v.detail.map(|t| t.to_string()),
        "route": route_str(v.route),
        "stable": v.stable,
        "warnings": v.warnings,
        "witness": v.witness.as_ref().map(|w| json!({
            "degree": degree_value(&w.degree),
            "threshold": degree_value(&w.threshold),
        })),
    })
}

pub fn findings_value(findings: &[Finding]) -> Value {
    Value::Array(
        findings
            .iter()
            .map(|f| json!({ "message": f.message, "rule": f.rule }))
            .collect(),
    )
}

pub fn psi_value(p: &PsiFibre) -> Value {
    Value::String(p.to_string())
}

pub fn towers_value(towers: &[JumpTower]) -> Value {
    Value::Array(
        towers
            .iter()
            .map(|t| {
                json!({
                    "base_point": complex_value(t.base_point),
                    "steps": t.steps.iter().map(psi_value).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

pub fn graph_image_value(g: &GraphImage) -> Value {
    match g {
        GraphImage::InImage => json!({ "result": "InImage" }),
        GraphImage::NotInImage { reason } => {
            json!({ "reason": reason, "result": "NotInImage" })
        }
        GraphImage::NeedsData { what } => json!({ "result": "NeedsData", "what": what }),
    }
}

pub fn fibre_value(d: &FibreDescription) -> Value {
    match d {
        FibreDescription::Prym { dim, copies } => json!({
            "copies": copies.to_string(),
            "dim": rational_value(*dim),
            "type": "Prym",
        }),
        FibreDescription::ExtensionComponents {
            component_degree,
            regularity,
        } => json!({
            "component_degree": degree_value(component_degree),
            "parametrised_by": "destabilising line bundles passing the stability check",
            "regularity": regularity.to_string(),
            "type": "ExtensionComponents",
        }),
        FibreDescription::Indeterminate { what } => json!({
            "type": "Indeterminate",
            "what": what,
        }),
    }
}

pub fn poisson_value(p: &PoissonReport) -> Value {
    match p {
        PoissonReport::NoPoissonStructure { reason } => json!({
            "reason": reason,
            "structure": "none",
        }),
        PoissonReport::Symplectic { rank } => json!({
            "rank": rational_value(*rank),
            "structure": "symplectic",
        }),
        PoissonReport::Degenerate {
            stated_rank,
            generic_rank,
            rank_formula_discrepancy,
            drop_locus,
        } => json!({
            "drop_locus": drop_locus,
            "generic_rank": rational_value(*generic_rank),
            "rank_formula_discrepancy": rank_formula_discrepancy,
            "stated_rank": stated_rank.map(rational_value),
            "structure": "degenerate",
        }),
    }
}

pub fn audit_value(a: &AuditRecord) -> Value {
    json!({
        "base_dim": rational_value(a.base_dim),
        "dim_m": rational_value(a.dim_m),
        "fibre_dim": rational_value(a.fibre_dim),
        "lagrangian_balance": a.lagrangian_balance,
    })
}

/// Full moduli report; `graph_image` and `fibre` slots are filled by the
/// caller when a graph query was supplied.
pub fn moduli_value(
    r: &ModuliReport,
    graph_image: Option<Value>,
    fibre: Option<Value>,
) -> Value {
    json!({
        "audit": r.integrable_audit.as_ref().map(audit_value),
        "empty": r.empty,
        "expected_dim": rational_value(r.expected_dim),
        "fibre": fibre,
        "graph_image": graph_image,
        "poisson": poisson_value(&r.poisson),
        "reason": r.reason,
        "smoothness": json!({
            "everywhere": r.smooth_everywhere,
            "gamma": r.gamma_condition.as_ref().map(|g| json!({
                "gamma": rational_value(g.gamma),
                "holds": g.holds,
            })),
            "regular_locus": r.regular_locus_smooth,
        }),
    })
}
