//! Stability decisions for bundle descriptors.
//!
//! Two independent routes are evaluated and cross-checked on every call:
//! the destabilising-degree comparison (both candidate degrees strictly
//! below `deg delta / 2`) and the closed-form case criteria.  Disagreement
//! is an internal error, never a verdict.

use std::cmp::Ordering;

use crate::bundles::{
    consistency_check, discriminant, nu_invariant, remove_all_jumps, BundleDescriptor, Splitting,
};
use crate::jacobian::Bisection;
use crate::nslattice::NSLattice;
use crate::rational::{rat_int, Rational};
use crate::surface::{degree, relative_dualising_degree, Degree, SurfaceModel};
use crate::{Error, Result, DEFAULT_EPSILON};

pub use crate::surface::degree_congruent_mod_z;

/// Which decision path produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    DegreesRoute,
    ClosedFormRoute,
    UnfiltrableRoute,
}

/// Case of the filtrable criterion: (i) coincident sections with a globally
/// split extension, (ii) coincident sections splitting on finitely many
/// fibres, (iii) distinct sections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    I,
    II,
    III,
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CaseTag::I => write!(f, "(i)"),
            CaseTag::II => write!(f, "(ii)"),
            CaseTag::III => write!(f, "(iii)"),
        }
    }
}

/// Destabilising evidence: a candidate degree at or above the slope
/// threshold `deg delta / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub degree: Degree,
    pub threshold: Degree,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub route: Route,
    /// Present exactly when unstable; `witness.degree >= threshold` up to
    /// the epsilon band.
    pub witness: Option<Witness>,
    pub detail: Option<CaseTag>,
    pub warnings: Vec<String>,
}

/// Stability through the spectral cover alone: an irreducible bisection
/// leaves no room for a destabilising filtration.
pub fn is_stable_unfiltrable(e: &BundleDescriptor) -> Result<StabilityVerdict> {
    match &e.cover.horizontal {
        Bisection::Irreducible(_) => Ok(StabilityVerdict {
            stable: true,
            route: Route::UnfiltrableRoute,
            witness: None,
            detail: None,
            warnings: Vec::new(),
        }),
        Bisection::Reducible { .. } => Err(Error::domain(
            "the unfiltrable criterion needs an irreducible bisection; this cover is \
             reducible",
        )),
    }
}

fn int_deg(n: i64) -> Degree {
    Degree::from_rational(rat_int(n as i128))
}

/// Case dispatch shared by the degree formulas and the closed-form
/// criteria.  Returns the case tag, the coincidence-fibre count `n`, and
/// whether the two sections coincide.
fn dispatch(e: &BundleDescriptor) -> Result<(CaseTag, i64, bool)> {
    let ext = e
        .extension
        .as_ref()
        .ok_or_else(|| Error::domain("descriptor carries no extension data (unfiltrable)"))?;
    let equal = ext.sections_equal(DEFAULT_EPSILON);
    match (equal, ext.splitting) {
        (true, Splitting::SplitsEverywhere) => Ok((CaseTag::I, 0, true)),
        (true, Splitting::SplitsOnFinitely { n }) => Ok((CaseTag::II, n as i64, true)),
        (true, Splitting::NontrivialOnFinitely { .. }) => Err(Error::model(
            "coincident sections cannot be nontrivial on finitely many fibres",
        )),
        (false, Splitting::SplitsEverywhere) => Ok((CaseTag::III, 0, false)),
        (false, Splitting::NontrivialOnFinitely { n }) => Ok((CaseTag::III, n as i64, false)),
        (false, Splitting::SplitsOnFinitely { .. }) => Err(Error::model(
            "splitting on finitely many fibres presumes coincident sections",
        )),
    }
}

/// Degrees of the two destabilising candidates.
///
/// Jumps are normalized away first; the formulas run on the jump-free
/// determinant degree `deg delta - nu`.  In the coincident-section cases
/// the degree is pinned by the case equation; a declared destabilising
/// bundle contradicting the pin is rejected, and the pinned value is
/// returned so downstream threshold comparisons stay exact.
pub fn destabilising_degrees(e: &BundleDescriptor, x: &SurfaceModel) -> Result<(Degree, Degree)> {
    let (tag, n, _) = dispatch(e)?;
    let ext = e.extension.as_ref().expect("dispatch checked extension");
    let free = remove_all_jumps(e, x)?;
    let deg_free = degree(&free.determinant, x)?;
    let deg_delta = degree(&e.determinant, x)?;
    let nu = nu_invariant(e);
    if !deg_free.matches_exactly(&(deg_delta - Degree::from_rational(nu)), 0.0) {
        return Err(Error::internal(
            "jump-free determinant degree does not equal deg delta - nu",
        ));
    }
    let omega = relative_dualising_degree(x);
    let declared = degree(&ext.destab_bundle, x)?;
    match tag {
        CaseTag::I | CaseTag::II => {
            let pin = (deg_free + int_deg(n) + omega).half();
            if !declared.approx_eq(&pin, DEFAULT_EPSILON) {
                return Err(Error::model(format!(
                    "declared destabilising degree {declared} contradicts the value {pin} \
                     pinned by the coincident-section case",
                )));
            }
            Ok((pin, pin))
        }
        CaseTag::III => {
            let k2 = deg_free + int_deg(-n) + omega - declared;
            Ok((declared, k2))
        }
    }
}

fn strictly_below(a: &Degree, b: &Degree, eps: f64) -> (bool, bool) {
    let (ord, near) = a.cmp_eps(b, eps);
    (ord == Ordering::Less, near)
}

/// Full stability decision.  Irreducible covers go through the unfiltrable
/// route; filtrable descriptors are decided by the closed-form case
/// criterion, cross-checked against the degree comparison.
pub fn stability_check(e: &BundleDescriptor, x: &SurfaceModel) -> Result<StabilityVerdict> {
    if matches!(e.cover.horizontal, Bisection::Irreducible(_)) {
        return is_stable_unfiltrable(e);
    }
    e.validate_structure()?;
    let eps = DEFAULT_EPSILON;
    let (tag, n, _) = dispatch(e)?;
    let (k1, k2) = destabilising_degrees(e, x)?;
    let threshold = degree(&e.determinant, x)?.half();
    let (below1, near1) = strictly_below(&k1, &threshold, eps);
    let (below2, near2) = strictly_below(&k2, &threshold, eps);
    let degrees_stable = below1 && below2;

    let nu = Degree::from_rational(nu_invariant(e));
    let omega = relative_dualising_degree(x);
    let (closed_form_stable, near_cf) = match tag {
        CaseTag::I | CaseTag::II => {
            let (ord, near) = nu.cmp_eps(&(omega + int_deg(n)), eps);
            (ord == Ordering::Greater, near)
        }
        CaseTag::III => {
            let lower = threshold - nu + int_deg(-n) + omega;
            let (above_lo, near_lo) = strictly_below(&lower, &k1, eps);
            let (below_hi, near_hi) = strictly_below(&k1, &threshold, eps);
            (above_lo && below_hi, near_lo || near_hi)
        }
    };
    if closed_form_stable != degrees_stable {
        return Err(Error::internal(format!(
            "stability routes disagree (closed form {closed_form_stable}, degrees \
             {degrees_stable}) for case {tag}",
        )));
    }

    let mut warnings = Vec::new();
    if near1 || near2 || near_cf {
        warnings.push(format!(
            "destabilising degree within {eps:.0e} of the threshold {threshold}; the strict \
             comparison resolved the boundary as unstable",
        ));
    }
    let witness = if closed_form_stable {
        None
    } else {
        let w = if k1.total() >= k2.total() { k1 } else { k2 };
        Some(Witness {
            degree: w,
            threshold,
        })
    };
    Ok(StabilityVerdict {
        stable: closed_form_stable,
        route: Route::ClosedFormRoute,
        witness,
        detail: Some(tag),
        warnings,
    })
}

/// A filtrable descriptor with no jumps and trivial discriminant is always
/// unstable.  Returns `true` after verifying the full check agrees; the
/// preconditions (including descriptor consistency) are enforced as domain
/// errors.
pub fn corollary_unstable(
    e: &BundleDescriptor,
    ns: &NSLattice,
    x: &SurfaceModel,
) -> Result<bool> {
    if !e.is_filtrable() {
        return Err(Error::domain("corollary applies to filtrable bundles"));
    }
    if !e.jumps.is_empty() {
        return Err(Error::domain("corollary applies to jump-free bundles"));
    }
    let delta = discriminant(e, ns)?;
    if delta != rat_int(0) {
        return Err(Error::domain(format!(
            "corollary applies to trivial discriminant, found {delta}",
        )));
    }
    let findings = consistency_check(e, ns, x);
    if !findings.is_empty() {
        return Err(Error::domain(format!(
            "descriptor fails consistency checks: {}",
            findings
                .iter()
                .map(|f| f.rule.as_str())
                .collect::<Vec<_>>()
                .join(", "),
        )));
    }
    let verdict = stability_check(e, x)?;
    if verdict.stable {
        return Err(Error::internal(
            "trivial-discriminant corollary contradicted by the stability check",
        ));
    }
    Ok(true)
}

/// Convenience wrapper exposing the raw degree comparison as a verdict
/// (used by moduli fibre descriptions that enumerate candidate line
/// bundles rather than full descriptors).
pub fn verdict_from_degrees(k1: Degree, k2: Degree, threshold: Degree) -> StabilityVerdict {
    let eps = DEFAULT_EPSILON;
    let (below1, near1) = strictly_below(&k1, &threshold, eps);
    let (below2, near2) = strictly_below(&k2, &threshold, eps);
    let stable = below1 && below2;
    let mut warnings = Vec::new();
    if near1 || near2 {
        warnings.push(format!(
            "destabilising degree within {eps:.0e} of the threshold {threshold}",
        ));
    }
    let witness = if stable {
        None
    } else {
        let w = if k1.total() >= k2.total() { k1 } else { k2 };
        Some(Witness {
            degree: w,
            threshold,
        })
    };
    StabilityVerdict {
        stable,
        route: Route::DegreesRoute,
        witness,
        detail: None,
        warnings,
    }
}

/// Convenience: discriminant of the descriptor as a rational, for callers
/// that already hold the lattice.
pub fn descriptor_discriminant(e: &BundleDescriptor, ns: &NSLattice) -> Result<Rational> {
    discriminant(e, ns)
}
