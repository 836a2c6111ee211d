//! Subcommand handlers.  Each returns an exit code plus both renderings of
//! the result; the caller picks JSON or text.
//!
//! Exit codes: 0 success (stable verdicts, completed reports), 1 an
//! unstable verdict, 2 invalid input or model errors, 3 a decision that
//! needs more data than the config supplies.

use std::fmt::Write as _;

use serde_json::{json, Value};
use smod_core::rational::{rat_from_str, rat_to_string};
use smod_core::report::{
    fibre_value, findings_value, graph_image_value, moduli_value, poisson_kind, psi_value,
    surface_info_value, towers_value, verdict_value,
};
use smod_core::{
    consistency_check, fibre_describe, graph_image_membership, jump_fibre_describe, moduli_report,
    psi_fibre_classify, select_delta_class, stability_check, surface, Degree, Error,
    FibreDescription, GraphImage, ModuliContext, PsiFibre, Result, StabilityVerdict, SurfaceModel,
};

use crate::build::{self, World};
use crate::config::ProblemConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    SurfaceInfo,
    Stability,
    Moduli,
    GraphImage,
    Fibre,
    M2,
    Psi,
}

pub struct Outcome {
    pub exit: i32,
    pub json: Value,
    pub text: String,
}

pub fn run_command(kind: CommandKind, cfg: &ProblemConfig) -> Outcome {
    match execute(kind, cfg) {
        Ok(outcome) => outcome,
        Err(e) => error_outcome(&e),
    }
}

pub fn error_outcome(e: &Error) -> Outcome {
    let exit = match e {
        Error::NeedsData(_) => 3,
        _ => 2,
    };
    Outcome {
        exit,
        json: json!({ "error": e.to_string() }),
        text: format!("error: {e}\n"),
    }
}

fn execute(kind: CommandKind, cfg: &ProblemConfig) -> Result<Outcome> {
    match kind {
        CommandKind::SurfaceInfo => surface_info(cfg),
        CommandKind::Stability => stability(cfg),
        CommandKind::Moduli => moduli(cfg),
        CommandKind::GraphImage => graph_image(cfg),
        CommandKind::Fibre => fibre(cfg),
        CommandKind::M2 => m2(cfg),
        CommandKind::Psi => psi(cfg),
    }
}

fn degree_text(d: &Degree) -> String {
    if d.real_part == 0.0 {
        rat_to_string(d.rational_part)
    } else {
        format!("{} + {:.6e}", rat_to_string(d.rational_part), d.real_part)
    }
}

fn surface_info(cfg: &ProblemConfig) -> Result<Outcome> {
    let x = build::build_surface(&cfg.surface)?;
    let json = surface_info_value(&x);
    let mut t = String::new();
    let _ = writeln!(t, "Base genus: {}", x.base_genus);
    let _ = writeln!(t, "Theta degree: {}", x.theta_degree);
    let _ = writeln!(t, "|tau|: {}", x.tau.norm());
    if x.multiple_fibres.is_empty() {
        let _ = writeln!(t, "Multiple fibres: none");
    } else {
        let ms: Vec<String> = x
            .multiple_fibres
            .iter()
            .map(|f| f.multiplicity.to_string())
            .collect();
        let _ = writeln!(t, "Multiple fibres: {}", ms.join(", "));
    }
    let _ = writeln!(
        t,
        "Relative dualising degree: {}",
        degree_text(&surface::relative_dualising_degree(&x))
    );
    let _ = writeln!(t, "Poisson: {}", poisson_kind(surface::poisson_exists(&x)));
    Ok(Outcome {
        exit: 0,
        json,
        text: t,
    })
}

fn verdict_text(v: &StabilityVerdict) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "{}", if v.stable { "stable" } else { "unstable" });
    if let Some(tag) = v.detail {
        let _ = writeln!(t, "case: {tag}");
    }
    if let Some(w) = &v.witness {
        let _ = writeln!(
            t,
            "witness degree {} against threshold {}",
            degree_text(&w.degree),
            degree_text(&w.threshold)
        );
    }
    for w in &v.warnings {
        let _ = writeln!(t, "warning: {w}");
    }
    t
}

fn stability(cfg: &ProblemConfig) -> Result<Outcome> {
    let w = World::from_config(cfg)?;
    let e = w
        .bundle
        .as_ref()
        .ok_or_else(|| Error::model("the stability command needs a bundle in the config"))?;
    let findings = consistency_check(e, &w.ns, &w.surface);
    if !findings.is_empty() {
        let mut t = String::from("descriptor failed consistency checks\n");
        for f in &findings {
            let _ = writeln!(t, "  [{}] {}", f.rule, f.message);
        }
        return Ok(Outcome {
            exit: 2,
            json: json!({
                "error": "descriptor failed consistency checks",
                "findings": findings_value(&findings),
            }),
            text: t,
        });
    }
    let v = stability_check(e, &w.surface)?;
    Ok(Outcome {
        exit: if v.stable { 0 } else { 1 },
        json: verdict_value(&v),
        text: verdict_text(&v),
    })
}

fn m2(cfg: &ProblemConfig) -> Result<Outcome> {
    let w = World::from_config(cfg)?;
    let m = smod_core::m_two(&w.ns, &w.chern.c1)?;
    let delta = select_delta_class(&w.ns, &w.chern.c1)?;
    let (c2_min, band) = smod_core::c2_admissible_range(&w.ns, &w.chern.c1)?;
    let json = json!({
        "band": band.map(|(lo, hi)| json!({
            "lower": rat_to_string(lo),
            "upper": rat_to_string(hi),
        })),
        "c2_min": rat_to_string(c2_min),
        "delta_class": delta,
        "m": rat_to_string(m),
    });
    let mut t = String::new();
    let _ = writeln!(t, "m = {}", rat_to_string(m));
    let _ = writeln!(t, "delta class: {delta:?}");
    let _ = writeln!(t, "admissible c2 >= {}", rat_to_string(c2_min));
    match band {
        Some((lo, hi)) => {
            let _ = writeln!(
                t,
                "unfiltrable band: [{}, {})",
                rat_to_string(lo),
                rat_to_string(hi)
            );
        }
        None => {
            let _ = writeln!(t, "unfiltrable band: empty");
        }
    }
    Ok(Outcome {
        exit: 0,
        json,
        text: t,
    })
}

fn psi_tower(c2_start: i64, seq: &[u32]) -> Result<Vec<PsiFibre>> {
    let mut c2 = c2_start;
    let mut steps = Vec::with_capacity(seq.len());
    for (k, &h) in seq.iter().enumerate() {
        let remaining = (seq.len() - k - 1) as i64;
        let next = seq.get(k + 1).map(|&h| h as i64);
        steps.push(psi_fibre_classify(c2, h as i64, next, remaining)?);
        c2 -= h as i64;
    }
    Ok(steps)
}

fn psi(cfg: &ProblemConfig) -> Result<Outcome> {
    let w = World::from_config(cfg)?;
    let b = w
        .bundle
        .as_ref()
        .ok_or_else(|| Error::model("the psi command needs a bundle with jump data"))?;
    let j = b
        .jumps
        .first()
        .ok_or_else(|| Error::domain("the psi command needs at least one jump descriptor"))?;
    let steps = psi_tower(w.chern.c2, &j.jumping_sequence)?;
    let json = json!({
        "fibre": psi_value(&steps[0]),
        "tower": steps.iter().map(psi_value).collect::<Vec<_>>(),
    });
    let mut t = String::new();
    let _ = writeln!(t, "Fibre: {}", steps[0]);
    for (k, s) in steps.iter().enumerate() {
        let _ = writeln!(t, "  step {k}: {s}");
    }
    Ok(Outcome {
        exit: 0,
        json,
        text: t,
    })
}

fn graph_image_text(g: &GraphImage) -> String {
    match g {
        GraphImage::InImage => "in image\n".to_string(),
        GraphImage::NotInImage { reason } => format!("not in image: {reason}\n"),
        GraphImage::NeedsData { what } => format!("needs data: {what}\n"),
    }
}

fn graph_image(cfg: &ProblemConfig) -> Result<Outcome> {
    let w = World::from_config(cfg)?;
    let ctx = w.context()?;
    let q = w
        .graph
        .as_ref()
        .ok_or_else(|| Error::model("the graph-image command needs a graph in the config"))?;
    let g = graph_image_membership(&ctx, q)?;
    let exit = match g {
        GraphImage::NeedsData { .. } => 3,
        _ => 0,
    };
    Ok(Outcome {
        exit,
        json: graph_image_value(&g),
        text: graph_image_text(&g),
    })
}

fn fibre_text(d: &FibreDescription) -> String {
    match d {
        FibreDescription::Prym { dim, copies } => {
            format!("Prym variety of dimension {}, {copies}\n", rat_to_string(*dim))
        }
        FibreDescription::ExtensionComponents { regularity, .. } => {
            format!("extension components, {regularity}\n")
        }
        FibreDescription::Indeterminate { what } => {
            format!("indeterminate: {what}\n")
        }
    }
}

/// Towers rendered for the jump-locus fibres of the graph map.
fn towers_outcome(
    ctx: &ModuliContext,
    w: &World,
    q: &smod_core::GraphQuery,
) -> Result<(Value, String)> {
    let plans = w.bundle.as_ref().map(|b| b.jumps.clone()).unwrap_or_default();
    let towers = jump_fibre_describe(ctx, &q.graph, &plans)?;
    let mut t = String::new();
    for tower in &towers {
        let _ = writeln!(t, "tower over {}:", tower.base_point);
        for (k, s) in tower.steps.iter().enumerate() {
            let _ = writeln!(t, "  step {k}: {s}");
        }
    }
    Ok((json!({ "towers": towers_value(&towers) }), t))
}

fn fibre(cfg: &ProblemConfig) -> Result<Outcome> {
    let w = World::from_config(cfg)?;
    let ctx = w.context()?;
    let q = w
        .graph
        .as_ref()
        .ok_or_else(|| Error::model("the fibre command needs a graph in the config"))?;
    if !q.graph.vertical.is_empty() {
        let (json, text) = towers_outcome(&ctx, &w, q)?;
        return Ok(Outcome {
            exit: 0,
            json,
            text,
        });
    }
    let d = fibre_describe(&ctx, q)?;
    let exit = match d {
        FibreDescription::Indeterminate { .. } => 3,
        _ => 0,
    };
    Ok(Outcome {
        exit,
        json: fibre_value(&d),
        text: fibre_text(&d),
    })
}

fn moduli_text(x: &SurfaceModel, r: &smod_core::ModuliReport) -> String {
    let mut t = String::new();
    if r.empty {
        let _ = writeln!(
            t,
            "moduli space empty: {}",
            r.reason.as_deref().unwrap_or("")
        );
        return t;
    }
    let _ = writeln!(t, "expected dimension: {}", rat_to_string(r.expected_dim));
    let _ = writeln!(t, "smooth everywhere: {}", r.smooth_everywhere);
    let _ = writeln!(t, "regular locus smooth: {}", r.regular_locus_smooth);
    if let Some(g) = &r.gamma_condition {
        let _ = writeln!(
            t,
            "gamma condition at {}: {}",
            rat_to_string(g.gamma),
            if g.holds { "holds" } else { "fails" }
        );
    }
    let _ = writeln!(t, "Poisson: {}", poisson_kind(surface::poisson_exists(x)));
    t
}

fn moduli(cfg: &ProblemConfig) -> Result<Outcome> {
    let w = World::from_config(cfg)?;
    let ctx = w.context()?;
    let gamma = cfg
        .options
        .gamma
        .as_deref()
        .map(rat_from_str)
        .transpose()?;
    let r = moduli_report(&ctx, gamma);
    let mut exit = 0;
    let mut text = moduli_text(&w.surface, &r);
    let (gi, fv) = match &w.graph {
        Some(q) => {
            let g = graph_image_membership(&ctx, q)?;
            if matches!(g, GraphImage::NeedsData { .. }) {
                exit = 3;
            }
            text.push_str(&graph_image_text(&g));
            let f = if q.graph.vertical.is_empty() {
                let d = fibre_describe(&ctx, q)?;
                if matches!(d, FibreDescription::Indeterminate { .. }) {
                    exit = 3;
                }
                text.push_str(&fibre_text(&d));
                fibre_value(&d)
            } else {
                let (v, t) = towers_outcome(&ctx, &w, q)?;
                text.push_str(&t);
                v
            };
            (Some(graph_image_value(&g)), Some(f))
        }
        None => (None, None),
    };
    Ok(Outcome {
        exit,
        json: moduli_value(&r, gi, fv),
        text,
    })
}
