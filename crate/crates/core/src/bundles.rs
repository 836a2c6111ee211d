//! Finite descriptors of rank-2 bundles and the bookkeeping operations on
//! them: discriminants, the nu invariant of the jump locus, allowable
//! elementary modifications, and the fibre classification of the jump
//! fibration.

use num_complex::Complex64;

use crate::jacobian::section::{section_intersections, Bisection, Intersections, SpectralCover};
use crate::nslattice::NSLattice;
use crate::rational::{rat, rat_int, Rational};
use crate::surface::{degree, Degree, LineBundleModel, SurfaceModel};
use crate::{Error, Result, DEFAULT_EPSILON};

/// Jump of the restriction type over one fibre.  The heights `h_i >= 1`
/// never increase along the sequence: an allowable modification cannot
/// raise the height of what remains.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpDescriptor {
    pub base_point: Complex64,
    /// Multiplicity of the underlying fibre; `None` over a smooth fibre.
    pub over_multiple_fibre: Option<u32>,
    pub jumping_sequence: Vec<u32>,
}

impl JumpDescriptor {
    pub fn new(
        base_point: Complex64,
        over_multiple_fibre: Option<u32>,
        jumping_sequence: Vec<u32>,
    ) -> Result<Self> {
        if jumping_sequence.is_empty() {
            return Err(Error::model("jumping sequence must have length >= 1"));
        }
        if jumping_sequence.iter().any(|&h| h < 1) {
            return Err(Error::model("jump heights must be >= 1"));
        }
        if jumping_sequence.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::model(
                "jumping sequence must be non-increasing: a modification cannot raise \
                 the height",
            ));
        }
        if let Some(m) = over_multiple_fibre {
            if m < 2 {
                return Err(Error::model("multiple fibres have multiplicity >= 2"));
            }
        }
        Ok(JumpDescriptor {
            base_point,
            over_multiple_fibre,
            jumping_sequence,
        })
    }

    pub fn length(&self) -> usize {
        self.jumping_sequence.len()
    }

    /// `mu = h_0 + ... + h_{l-1}` (total vertical multiplicity).
    pub fn multiplicity(&self) -> u64 {
        self.jumping_sequence.iter().map(|&h| h as u64).sum()
    }
}

/// How the extension behaves along the coincidence locus of the two
/// spectral sections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitting {
    SplitsEverywhere,
    SplitsOnFinitely { n: u32 },
    NontrivialOnFinitely { n: u32 },
}

/// Extension data of a filtrable bundle: the destabilising candidate line
/// bundle, the two spectral sections, and the splitting mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionData {
    pub destab_section: crate::jacobian::Section,
    pub destab_bundle: LineBundleModel,
    pub other_section: crate::jacobian::Section,
    pub splitting: Splitting,
}

impl ExtensionData {
    pub fn sections_equal(&self, eps: f64) -> bool {
        self.destab_section.approx_eq(&self.other_section, eps)
    }
}

/// Finite description of a rank-2 bundle: determinant, second Chern class,
/// spectral cover, optional extension data (absent = unfiltrable) and the
/// jump locus.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleDescriptor {
    pub determinant: LineBundleModel,
    /// `c1(delta)` in the chosen basis of `NS(X)`.
    pub determinant_class: Vec<i64>,
    pub c2: i64,
    pub cover: SpectralCover,
    pub extension: Option<ExtensionData>,
    pub jumps: Vec<JumpDescriptor>,
}

fn same_point(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= DEFAULT_EPSILON
}

impl BundleDescriptor {
    pub fn new(
        determinant: LineBundleModel,
        determinant_class: Vec<i64>,
        c2: i64,
        cover: SpectralCover,
        extension: Option<ExtensionData>,
        jumps: Vec<JumpDescriptor>,
    ) -> Result<Self> {
        let e = BundleDescriptor {
            determinant,
            determinant_class,
            c2,
            cover,
            extension,
            jumps,
        };
        e.validate_structure()?;
        Ok(e)
    }

    /// Structural invariants: distinct jump points, vertical cover matching
    /// the jumps, and no extension data on unfiltrable descriptors.
    pub fn validate_structure(&self) -> Result<()> {
        for (i, j) in self.jumps.iter().enumerate() {
            for k in &self.jumps[..i] {
                if same_point(j.base_point, k.base_point) {
                    return Err(Error::model("two jumps over the same base point"));
                }
            }
        }
        for f in &self.cover.vertical {
            if f.multiplicity < 1 {
                return Err(Error::model("vertical cover component of multiplicity 0"));
            }
        }
        for j in &self.jumps {
            let vert = self
                .cover
                .vertical
                .iter()
                .find(|f| same_point(f.base_point, j.base_point));
            match vert {
                None => {
                    return Err(Error::model(format!(
                        "jump at {} has no vertical spectral component",
                        j.base_point
                    )))
                }
                Some(f) if f.multiplicity as u64 != j.multiplicity() => {
                    return Err(Error::model(format!(
                        "vertical multiplicity {} at {} does not match the jump \
                         multiplicity {}",
                        f.multiplicity,
                        j.base_point,
                        j.multiplicity()
                    )))
                }
                _ => {}
            }
        }
        for f in &self.cover.vertical {
            if !self
                .jumps
                .iter()
                .any(|j| same_point(j.base_point, f.base_point))
            {
                return Err(Error::model(format!(
                    "vertical spectral component at {} without a matching jump",
                    f.base_point
                )));
            }
        }
        if self.extension.is_none() && !matches!(self.cover.horizontal, Bisection::Irreducible(_))
        {
            return Err(Error::model(
                "unfiltrable descriptor (no extension data) requires an irreducible \
                 horizontal bisection",
            ));
        }
        Ok(())
    }

    pub fn is_filtrable(&self) -> bool {
        self.extension.is_some()
    }

    pub fn jump_at(&self, at: Complex64) -> Option<usize> {
        self.jumps.iter().position(|j| same_point(j.base_point, at))
    }

    /// Total jump multiplicity `sum mu_i`.
    pub fn total_jump_multiplicity(&self) -> u64 {
        self.jumps.iter().map(|j| j.multiplicity()).sum()
    }
}

/// `Delta(E) = (1/2)(c2 - q(c1(delta))/4)`.
pub fn discriminant(e: &BundleDescriptor, ns: &NSLattice) -> Result<Rational> {
    let q = ns.q_int(&e.determinant_class)?;
    Ok((rat_int(e.c2 as i128) - rat(q, 4)) / rat_int(2))
}

/// Discriminant from extension classes: `-(1/8) q(c1(delta) - 2 c1(D))`.
pub fn delta_from_extension(
    delta_class: &[i64],
    d_class: &[i64],
    ns: &NSLattice,
) -> Result<Rational> {
    if delta_class.len() != d_class.len() {
        return Err(Error::model("class length mismatch"));
    }
    let diff: Vec<i64> = delta_class
        .iter()
        .zip(d_class)
        .map(|(a, b)| a - 2 * b)
        .collect();
    Ok(rat(-ns.q_int(&diff)?, 8))
}

/// `nu = sum l/m0 over jumps at multiple fibres + sum l over smooth ones`.
pub fn nu_invariant(e: &BundleDescriptor) -> Rational {
    e.jumps
        .iter()
        .map(|j| match j.over_multiple_fibre {
            Some(m0) => rat(j.length() as i128, m0 as i128),
            None => rat_int(j.length() as i128),
        })
        .sum()
}

/// One allowable elementary modification at the given jump: drops the top
/// height `h0`, lowers `c2` by `h0`, and twists the determinant by minus
/// one fibre there.  The surface is consulted to map a multiple-fibre twist
/// to the right coefficient slot.
pub fn allowable_modification(
    e: &BundleDescriptor,
    at: Complex64,
    x: &SurfaceModel,
) -> Result<BundleDescriptor> {
    let Some(ji) = e.jump_at(at) else {
        return Err(Error::domain(format!("no jump at base point {at}")));
    };
    let jump = &e.jumps[ji];
    let h0 = jump.jumping_sequence[0] as i64;
    let mut det = e.determinant.clone();
    match jump.over_multiple_fibre {
        None => {
            if x.multiple_fibre_at(at).is_some() {
                return Err(Error::model(
                    "jump marked smooth sits over a multiple fibre of the surface",
                ));
            }
            det.base_chern -= 1;
        }
        Some(m0) => {
            let Some(idx) = x.multiple_fibre_at(at) else {
                return Err(Error::model(
                    "jump marked multiple has no multiple fibre there",
                ));
            };
            if x.multiple_fibres[idx].multiplicity != m0 {
                return Err(Error::model(format!(
                    "jump declares multiplicity {m0}, surface has {}",
                    x.multiple_fibres[idx].multiplicity
                )));
            }
            det.fibre_coeffs[idx] -= 1;
        }
    }
    // fibre classes sit in the radical of the intersection form on these
    // surfaces, so the NS coordinates of the determinant do not move
    let mut jumps = e.jumps.clone();
    if jumps[ji].jumping_sequence.len() == 1 {
        jumps.remove(ji);
    } else {
        jumps[ji].jumping_sequence.remove(0);
    }
    let mut cover = e.cover.clone();
    if let Some(vi) = cover
        .vertical
        .iter()
        .position(|f| same_point(f.base_point, at))
    {
        let f = &mut cover.vertical[vi];
        if (f.multiplicity as i64) < h0 {
            return Err(Error::model(
                "vertical spectral multiplicity smaller than the jump height",
            ));
        }
        f.multiplicity -= h0 as u32;
        if f.multiplicity == 0 {
            cover.vertical.remove(vi);
        }
    }
    let out = BundleDescriptor {
        determinant: det,
        determinant_class: e.determinant_class.clone(),
        c2: e.c2 - h0,
        cover,
        extension: e.extension.clone(),
        jumps,
    };
    out.validate_structure()?;
    // degree bookkeeping: one fibre twist drops the degree by 1 (smooth)
    // or 1/m0 (multiple), exactly on the rational part
    let before = degree(&e.determinant, x)?;
    let after = degree(&out.determinant, x)?;
    let expected = match jump.over_multiple_fibre {
        None => rat_int(1),
        Some(m0) => rat(1, m0 as i128),
    };
    let drop = before - after;
    if !drop.matches_exactly(&Degree::from_rational(expected), 0.0) {
        return Err(Error::internal(
            "determinant degree did not drop by the fibre degree",
        ));
    }
    Ok(out)
}

/// Remove a jump entirely by iterating allowable modifications; drops `c2`
/// by the jump multiplicity `mu` and the determinant degree by `l/m0`
/// (or `l` over a smooth fibre).
pub fn remove_jump(
    e: &BundleDescriptor,
    at: Complex64,
    x: &SurfaceModel,
) -> Result<BundleDescriptor> {
    if e.jump_at(at).is_none() {
        return Err(Error::domain(format!("no jump at base point {at}")));
    }
    let mut cur = e.clone();
    while cur.jump_at(at).is_some() {
        cur = allowable_modification(&cur, at, x)?;
    }
    Ok(cur)
}

/// Remove every jump; the stability routines evaluate degrees on the
/// resulting jump-free bundle.
pub fn remove_all_jumps(e: &BundleDescriptor, x: &SurfaceModel) -> Result<BundleDescriptor> {
    let mut cur = e.clone();
    while let Some(j) = cur.jumps.first() {
        let at = j.base_point;
        cur = remove_jump(&cur, at, x)?;
    }
    Ok(cur)
}

/// Fibre of the jump fibration at one modification step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiFibre {
    AutSL2,
    PicTimesAut { h: i64 },
    PicOnly { degree: i64 },
}

impl std::fmt::Display for PsiFibre {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PsiFibre::AutSL2 => write!(f, "Aut_SL2"),
            PsiFibre::PicTimesAut { h } => write!(f, "Pic^{{{}}}(T) x Aut", -h),
            PsiFibre::PicOnly { degree } => write!(f, "Pic^{{{}}}(T)", degree),
        }
    }
}

/// Classify the fibre of the jump fibration from the current `c2`, the top
/// two heights, and the number `l` of steps remaining after this one.
/// `h1` must be present exactly when `l > 0`.
pub fn psi_fibre_classify(c2: i64, h0: i64, h1: Option<i64>, l: i64) -> Result<PsiFibre> {
    if h0 < 1 {
        return Err(Error::domain("jump heights are >= 1"));
    }
    if l < 0 {
        return Err(Error::domain("remaining length cannot be negative"));
    }
    if (l > 0) != h1.is_some() {
        return Err(Error::domain(
            "next height h1 must be supplied exactly when steps remain (l > 0)",
        ));
    }
    if let Some(h1) = h1 {
        if h1 > h0 {
            return Err(Error::domain(
                "increasing jumping sequence: h1 > h0 matches no fibre case",
            ));
        }
        if h1 < 1 {
            return Err(Error::domain("jump heights are >= 1"));
        }
    }
    if c2 < h0 {
        return Err(Error::domain(format!(
            "c2 = {c2} < h0 = {h0}: the fibre cases cover only c2 >= h0"
        )));
    }
    if c2 == h0 || l == 0 {
        return Ok(PsiFibre::PicOnly { degree: -c2 });
    }
    let h1 = h1.expect("l > 0 checked above");
    if h0 == h1 {
        Ok(PsiFibre::AutSL2)
    } else {
        Ok(PsiFibre::PicTimesAut { h: h0 })
    }
}

/// One violated consistency rule; `rule` is a stable short code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub rule: String,
    pub message: String,
}

impl Finding {
    fn new(rule: &str, message: impl Into<String>) -> Self {
        Finding {
            rule: rule.to_string(),
            message: message.into(),
        }
    }
}

/// Cross-checks between the extension data, the discriminant, and the
/// spectral cover.  Returns the list of violations (empty = consistent).
///
/// The discriminant used for the section lemmas is the one of the
/// jump-free reduction (`c2` minus the total jump multiplicity): the
/// sections only see the bundle away from the jump locus.
pub fn consistency_check(
    e: &BundleDescriptor,
    ns: &NSLattice,
    x: &SurfaceModel,
) -> Vec<Finding> {
    let mut findings = Vec::new();
    if let Err(err) = e.validate_structure() {
        findings.push(Finding::new("structure", err.to_string()));
    }
    let delta0 = {
        let c2_free = e.c2 - e.total_jump_multiplicity() as i64;
        match ns.q_int(&e.determinant_class) {
            Ok(q) => Some((rat_int(c2_free as i128) - rat(q, 4)) / rat_int(2)),
            Err(err) => {
                findings.push(Finding::new("classes", err.to_string()));
                None
            }
        }
    };
    let Some(ext) = &e.extension else {
        return findings;
    };
    let Some(delta0) = delta0 else {
        return findings;
    };
    let equal = ext.sections_equal(DEFAULT_EPSILON);
    if equal {
        // a multiple section forces a trivial discriminant
        if delta0 != rat_int(0) {
            findings.push(Finding::new(
                "multiple-section",
                format!(
                    "coincident spectral sections require Delta = 0, found {}",
                    delta0
                ),
            ));
        }
        if matches!(ext.splitting, Splitting::NontrivialOnFinitely { .. }) {
            findings.push(Finding::new(
                "splitting-mode",
                "coincident sections cannot be nontrivial on finitely many fibres",
            ));
        }
    } else {
        match section_intersections(&ext.destab_section, &ext.other_section, x) {
            Ok(Intersections::Finite(n)) => {
                if rat_int(n as i128) != rat_int(4) * delta0 {
                    findings.push(Finding::new(
                        "intersection-count",
                        format!(
                            "sections meet in {n} points but 4*Delta = {}",
                            rat_int(4) * delta0
                        ),
                    ));
                }
            }
            Ok(Intersections::Coincident) => findings.push(Finding::new(
                "intersection-count",
                "sections compare equal under intersection but not under approx_eq",
            )),
            Err(err) => findings.push(Finding::new("intersection-count", err.to_string())),
        }
        if delta0 == rat_int(0) && ext.splitting != Splitting::SplitsEverywhere {
            findings.push(Finding::new(
                "global-splitting",
                "distinct sections with Delta = 0 split the extension everywhere",
            ));
        }
    }
    if matches!(ext.splitting, Splitting::SplitsOnFinitely { .. }) && !equal {
        findings.push(Finding::new(
            "splitting-mode",
            "splitting on finitely many fibres presumes coincident sections",
        ));
    }
    findings
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobian::section::{Bisection, Section, VerticalFibre};
    use crate::jacobian::torus::TorusPoint;
    use crate::jacobian::RuledSection;
    use crate::surface::EllipticCurve;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn hopf() -> SurfaceModel {
        SurfaceModel::hopf(1, cx(2.0, 0.0), vec![]).unwrap()
    }

    fn hopf_m(mults: &[(u32, f64)]) -> SurfaceModel {
        let fibres = mults
            .iter()
            .map(|&(m, b)| crate::surface::MultipleFibre {
                multiplicity: m,
                base_point: cx(b, 0.0),
            })
            .collect();
        SurfaceModel::hopf(1, cx(2.0, 0.0), fibres).unwrap()
    }

    fn const_section(x: &SurfaceModel, s: f64, t: f64) -> Section {
        Section::Constant(TorusPoint::from_coords(x.fibre, s, t))
    }

    /// Reducible cover from two constant sections plus vertical parts.
    fn cover_of(s1: &Section, s2: &Section, vertical: Vec<VerticalFibre>) -> SpectralCover {
        SpectralCover {
            vertical,
            horizontal: Bisection::Reducible {
                s1: s1.clone(),
                s2: s2.clone(),
            },
        }
    }

    fn simple_bundle(
        x: &SurfaceModel,
        c2: i64,
        jumps: Vec<JumpDescriptor>,
        splitting: Splitting,
        s1: Section,
        s2: Section,
    ) -> BundleDescriptor {
        let vertical: Vec<VerticalFibre> = jumps
            .iter()
            .map(|j| VerticalFibre {
                base_point: j.base_point,
                multiplicity: j.multiplicity() as u32,
            })
            .collect();
        let det = LineBundleModel::new(0, cx(1.0, 0.0), vec![0; x.multiple_fibre_count()], s1.clone());
        BundleDescriptor::new(
            det.clone(),
            vec![0],
            c2,
            cover_of(&s1, &s2, vertical),
            Some(ExtensionData {
                destab_section: s1,
                destab_bundle: det,
                other_section: s2,
                splitting,
            }),
            jumps,
        )
        .unwrap()
    }

    #[test]
    fn jump_descriptor_invariants() {
        assert!(JumpDescriptor::new(cx(0.0, 0.0), None, vec![]).is_err());
        assert!(JumpDescriptor::new(cx(0.0, 0.0), None, vec![1, 2]).is_err());
        assert!(JumpDescriptor::new(cx(0.0, 0.0), None, vec![0]).is_err());
        assert!(JumpDescriptor::new(cx(0.0, 0.0), Some(1), vec![1]).is_err());
        let j = JumpDescriptor::new(cx(0.0, 0.0), Some(2), vec![2, 2, 1]).unwrap();
        assert_eq!(j.length(), 3);
        assert_eq!(j.multiplicity(), 5);
    }

    #[test]
    fn discriminant_examples() {
        let l0 = NSLattice::new(vec![vec![0]]).unwrap();
        let x = hopf();
        let s = const_section(&x, 0.0, 0.0);
        let e1 = simple_bundle(&x, 1, vec![], Splitting::SplitsEverywhere, s.clone(), const_section(&x, 0.3, 0.0));
        assert_eq!(discriminant(&e1, &l0).unwrap(), rat(1, 2));
        let e0 = simple_bundle(&x, 0, vec![], Splitting::SplitsEverywhere, s.clone(), s.clone());
        assert_eq!(discriminant(&e0, &l0).unwrap(), rat_int(0));
        // q(c1) = -1 via the rank-1 form of discriminant -1
        let l1 = NSLattice::new(vec![vec![-1]]).unwrap();
        let mut e = e0;
        e.determinant_class = vec![1];
        assert_eq!(discriminant(&e, &l1).unwrap(), rat(1, 8));
    }

    #[test]
    fn delta_from_extension_examples() {
        let l = NSLattice::new(vec![vec![-2]]).unwrap();
        assert_eq!(delta_from_extension(&[2], &[1], &l).unwrap(), rat_int(0));
        assert_eq!(delta_from_extension(&[1], &[0], &l).unwrap(), rat(1, 4));
        assert_eq!(delta_from_extension(&[1], &[1], &l).unwrap(), rat(1, 4));
    }

    #[test]
    fn nu_examples() {
        let x = hopf_m(&[(2, 0.25)]);
        let s = const_section(&x, 0.0, 0.0);
        let t = const_section(&x, 0.2, 0.4);
        let none = simple_bundle(&x, 0, vec![], Splitting::SplitsEverywhere, s.clone(), t.clone());
        assert_eq!(nu_invariant(&none), rat_int(0));
        let smooth2 = simple_bundle(
            &x,
            2,
            vec![JumpDescriptor::new(cx(0.7, 0.0), None, vec![1, 1]).unwrap()],
            Splitting::SplitsEverywhere,
            s.clone(),
            t.clone(),
        );
        assert_eq!(nu_invariant(&smooth2), rat_int(2));
        let mixed = simple_bundle(
            &x,
            3,
            vec![
                JumpDescriptor::new(cx(0.25, 0.0), Some(2), vec![1, 1]).unwrap(),
                JumpDescriptor::new(cx(0.7, 0.0), None, vec![1]).unwrap(),
            ],
            Splitting::SplitsEverywhere,
            s,
            t,
        );
        assert_eq!(nu_invariant(&mixed), rat_int(2));
    }

    #[test]
    fn single_step_modification() {
        let x = hopf();
        let s = const_section(&x, 0.0, 0.0);
        let t = const_section(&x, 0.2, 0.4);
        let e = simple_bundle(
            &x,
            1,
            vec![JumpDescriptor::new(cx(0.5, 0.0), None, vec![1]).unwrap()],
            Splitting::SplitsEverywhere,
            s,
            t,
        );
        let e1 = allowable_modification(&e, cx(0.5, 0.0), &x).unwrap();
        assert!(e1.jumps.is_empty());
        assert_eq!(e1.c2, 0);
        assert_eq!(e1.determinant.base_chern, e.determinant.base_chern - 1);
        assert!(e1.cover.vertical.is_empty());
        // no jump left: further modification is a domain error
        assert!(allowable_modification(&e1, cx(0.5, 0.0), &x).is_err());
    }

    #[test]
    fn two_step_jump_drops_top_height() {
        let x = hopf();
        let s = const_section(&x, 0.0, 0.0);
        let t = const_section(&x, 0.2, 0.4);
        let e = simple_bundle(
            &x,
            3,
            vec![JumpDescriptor::new(cx(0.5, 0.0), None, vec![2, 1]).unwrap()],
            Splitting::SplitsEverywhere,
            s,
            t,
        );
        let e1 = allowable_modification(&e, cx(0.5, 0.0), &x).unwrap();
        assert_eq!(e1.jumps[0].jumping_sequence, vec![1]);
        assert_eq!(e1.c2, 1);
        assert_eq!(e1.cover.vertical[0].multiplicity, 1);
        let e2 = remove_jump(&e, cx(0.5, 0.0), &x).unwrap();
        assert!(e2.jumps.is_empty());
        assert_eq!(e2.c2, 0);
        assert_eq!(e2.determinant.base_chern, -2);
        // total c2 drop equals mu
        assert_eq!((e.c2 - e2.c2) as u64, e.jumps[0].multiplicity());
    }

    #[test]
    fn multiple_fibre_jump_degree_drop() {
        let x = hopf_m(&[(3, 0.25)]);
        let s = const_section(&x, 0.0, 0.0);
        let t = const_section(&x, 0.2, 0.4);
        let e = simple_bundle(
            &x,
            2,
            vec![JumpDescriptor::new(cx(0.25, 0.0), Some(3), vec![1, 1]).unwrap()],
            Splitting::SplitsEverywhere,
            s,
            t,
        );
        let before = degree(&e.determinant, &x).unwrap();
        let e2 = remove_jump(&e, cx(0.25, 0.0), &x).unwrap();
        let after = degree(&e2.determinant, &x).unwrap();
        assert_eq!(e2.determinant.fibre_coeffs[0], -2);
        let drop = before - after;
        assert!(drop.matches_exactly(&Degree::from_rational(rat(2, 3)), 0.0));
    }

    #[test]
    fn declared_multiplicity_must_match_surface() {
        let x = hopf_m(&[(3, 0.25)]);
        let s = const_section(&x, 0.0, 0.0);
        let t = const_section(&x, 0.2, 0.4);
        let e = simple_bundle(
            &x,
            1,
            vec![JumpDescriptor::new(cx(0.25, 0.0), Some(2), vec![1]).unwrap()],
            Splitting::SplitsEverywhere,
            s.clone(),
            t.clone(),
        );
        assert!(allowable_modification(&e, cx(0.25, 0.0), &x).is_err());
        // smooth-marked jump over a multiple fibre is also rejected
        let e2 = simple_bundle(
            &x,
            1,
            vec![JumpDescriptor::new(cx(0.25, 0.0), None, vec![1]).unwrap()],
            Splitting::SplitsEverywhere,
            s,
            t,
        );
        assert!(allowable_modification(&e2, cx(0.25, 0.0), &x).is_err());
    }

    #[test]
    fn psi_examples_and_tower() {
        assert_eq!(
            psi_fibre_classify(3, 2, Some(2), 2).unwrap(),
            PsiFibre::AutSL2
        );
        assert_eq!(
            psi_fibre_classify(3, 2, Some(1), 2).unwrap(),
            PsiFibre::PicTimesAut { h: 2 }
        );
        assert_eq!(
            psi_fibre_classify(2, 2, None, 0).unwrap(),
            PsiFibre::PicOnly { degree: -2 }
        );
        assert!(psi_fibre_classify(1, 2, None, 0).is_err());
        assert!(psi_fibre_classify(3, 2, Some(3), 1).is_err());
        assert!(psi_fibre_classify(3, 2, None, 1).is_err());
        assert!(psi_fibre_classify(3, 2, Some(1), 0).is_err());
        // tower mu=3, sequence [2,1], c2=3: PicTimesAut{2} then PicOnly{-1}
        assert_eq!(
            psi_fibre_classify(3, 2, Some(1), 1).unwrap(),
            PsiFibre::PicTimesAut { h: 2 }
        );
        assert_eq!(
            psi_fibre_classify(1, 1, None, 0).unwrap(),
            PsiFibre::PicOnly { degree: -1 }
        );
        assert_eq!(PsiFibre::PicTimesAut { h: 2 }.to_string(), "Pic^{-2}(T) x Aut");
        assert_eq!(PsiFibre::AutSL2.to_string(), "Aut_SL2");
        assert_eq!(PsiFibre::PicOnly { degree: -3 }.to_string(), "Pic^{-3}(T)");
    }

    #[test]
    fn psi_cases_partition_the_valid_inputs() {
        // exhaustive scan c2, h0, h1 <= 6: the three case predicates are
        // mutually exclusive and cover every valid tuple
        for c2 in 1..=6i64 {
            for h0 in 1..=6i64 {
                for l in 0..=3i64 {
                    let h1s: Vec<Option<i64>> = if l > 0 {
                        (1..=h0).map(Some).collect()
                    } else {
                        vec![None]
                    };
                    for h1 in h1s {
                        let res = psi_fibre_classify(c2, h0, h1, l);
                        if c2 < h0 {
                            assert!(res.is_err());
                            continue;
                        }
                        let case_iii = c2 == h0 || l == 0;
                        let case_i = !case_iii && h1 == Some(h0);
                        let case_ii = !case_iii && h1.map_or(false, |h| h < h0);
                        assert_eq!(
                            [case_i, case_ii, case_iii].iter().filter(|&&b| b).count(),
                            1,
                            "cases overlap at c2={c2} h0={h0} h1={h1:?} l={l}"
                        );
                        let got = res.unwrap();
                        match got {
                            PsiFibre::AutSL2 => assert!(case_i),
                            PsiFibre::PicTimesAut { .. } => assert!(case_ii),
                            PsiFibre::PicOnly { .. } => assert!(case_iii),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn consistency_flags_multiple_section_with_positive_delta() {
        let x = hopf();
        let s = const_section(&x, 0.1, 0.1);
        // same section twice but Delta = 1/2 from c2 = 1
        let e = simple_bundle(&x, 1, vec![], Splitting::SplitsOnFinitely { n: 0 }, s.clone(), s);
        let findings = consistency_check(&e, &NSLattice::new(vec![vec![0]]).unwrap(), &x);
        assert!(findings.iter().any(|f| f.rule == "multiple-section"));
    }

    #[test]
    fn consistency_accepts_matching_affine_sections() {
        // genus-1 base, sections differing by u = 2: 4 intersections = 4*Delta
        let base = EllipticCurve::new(cx(0.0, 1.0)).unwrap();
        let x = SurfaceModel::new(1, Some(base), EllipticCurve::square(), 1, cx(2.0, 0.0), vec![])
            .unwrap();
        let s1 = Section::Affine {
            u: cx(2.0, 0.0),
            c: TorusPoint::from_coords(x.fibre, 0.3, 0.0),
        };
        let s2 = Section::Constant(TorusPoint::from_coords(x.fibre, 0.1, 0.2));
        let det = LineBundleModel::new(0, cx(1.0, 0.0), vec![], s1.clone());
        let e = BundleDescriptor::new(
            det.clone(),
            vec![0],
            2, // Delta = 1
            cover_of(&s1, &s2, vec![]),
            Some(ExtensionData {
                destab_section: s1,
                destab_bundle: det,
                other_section: s2,
                splitting: Splitting::NontrivialOnFinitely { n: 1 },
            }),
            vec![],
        )
        .unwrap();
        let findings = consistency_check(&e, &NSLattice::new(vec![vec![0]]).unwrap(), &x);
        assert!(findings.is_empty(), "unexpected findings: {findings:?}");
    }

    #[test]
    fn consistency_forces_global_splitting_at_delta_zero() {
        let x = hopf();
        let s1 = const_section(&x, 0.1, 0.1);
        let s2 = const_section(&x, 0.6, 0.3);
        let e = simple_bundle(&x, 0, vec![], Splitting::NontrivialOnFinitely { n: 1 }, s1, s2);
        let findings = consistency_check(&e, &NSLattice::new(vec![vec![0]]).unwrap(), &x);
        assert!(findings.iter().any(|f| f.rule == "global-splitting"));
    }

    #[test]
    fn structure_rules() {
        let x = hopf();
        let s = const_section(&x, 0.1, 0.1);
        let det = LineBundleModel::new(0, cx(1.0, 0.0), vec![], s.clone());
        // unfiltrable with a reducible cover is rejected
        let bad = BundleDescriptor::new(
            det.clone(),
            vec![0],
            1,
            cover_of(&s, &s, vec![]),
            None,
            vec![],
        );
        assert!(bad.is_err());
        // unfiltrable with an irreducible cover is fine
        let a = RuledSection::Rational {
            numerator: vec![cx(0.0, 0.0), cx(1.0, 0.0)],
            denominator: vec![cx(1.0, 0.0)],
        };
        let ok = BundleDescriptor::new(
            det.clone(),
            vec![0],
            1,
            SpectralCover {
                vertical: vec![],
                horizontal: Bisection::Irreducible(a),
            },
            None,
            vec![],
        );
        assert!(ok.is_ok());
        // vertical component without a jump is rejected
        let bad2 = BundleDescriptor::new(
            det.clone(),
            vec![0],
            1,
            cover_of(
                &s,
                &s,
                vec![VerticalFibre {
                    base_point: cx(0.4, 0.0),
                    multiplicity: 1,
                }],
            ),
            Some(ExtensionData {
                destab_section: s.clone(),
                destab_bundle: det,
                other_section: s.clone(),
                splitting: Splitting::SplitsOnFinitely { n: 0 },
            }),
            vec![],
        );
        assert!(bad2.is_err());
    }
}
