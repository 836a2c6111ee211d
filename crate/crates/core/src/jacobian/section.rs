//! Sections of the relative Jacobian `J(X) = B x T^*` and their pairwise
//! intersection counts.
//!
//! Over a genus-0 base all sections are constant.  Over a genus-1 base a
//! section is affine, `b -> u*b + c`, subject to the lattice compatibility
//! `u * Lambda_B <= Lambda_T*`; two distinct affine sections meet in a
//! finite group-theoretic count, the index of `(u1-u2) * Lambda_B` in
//! `Lambda_T*`.

use num_complex::Complex64;

use crate::jacobian::torus::{lattice_coords, TorusPoint};
use crate::rational::Rational;
use crate::surface::SurfaceModel;
use crate::{Error, Result, DEFAULT_EPSILON};

/// Section of the relative Jacobian.
#[derive(Debug, Clone, PartialEq)]
pub enum Section {
    /// `b -> lambda`, the only kind over a genus-0 base.
    Constant(TorusPoint),
    /// `b -> u*b + c` over a genus-1 base; `u` must carry the base lattice
    /// into the fibre lattice.
    Affine { u: Complex64, c: TorusPoint },
}

impl Section {
    pub fn constant_zero(curve: crate::surface::EllipticCurve) -> Section {
        Section::Constant(TorusPoint::zero(curve))
    }

    /// Linear coefficient; zero for constants.
    pub fn u(&self) -> Complex64 {
        match self {
            Section::Constant(_) => Complex64::new(0.0, 0.0),
            Section::Affine { u, .. } => *u,
        }
    }

    pub fn offset(&self) -> TorusPoint {
        match self {
            Section::Constant(c) => *c,
            Section::Affine { c, .. } => *c,
        }
    }

    /// Check the section against the ambient surface: constants only over
    /// genus 0, affine data lattice-compatible over genus 1.
    pub fn validate(&self, x: &SurfaceModel) -> Result<()> {
        match self {
            Section::Constant(_) => Ok(()),
            Section::Affine { u, .. } => {
                let base = x
                    .base_curve
                    .ok_or_else(|| Error::model("affine sections require a genus-1 base"))?;
                if u.norm() <= DEFAULT_EPSILON {
                    return Ok(()); // degenerate affine: a constant in disguise
                }
                for gen in [Complex64::new(1.0, 0.0), base.lattice_tau] {
                    if !is_fibre_lattice_vector(x, *u * gen, DEFAULT_EPSILON).0 {
                        return Err(Error::model(format!(
                            "affine section incompatible with lattices: u*{gen} \
                             is not a fibre lattice vector"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Value at a base point, reduced to the fundamental domain.
    pub fn eval(&self, b: Complex64) -> TorusPoint {
        TorusPoint::new(self.offset().curve, self.eval_unreduced(b)).reduced()
    }

    /// Value at a base point without reduction; continuous in `b`, used for
    /// path tracking.
    pub fn eval_unreduced(&self, b: Complex64) -> Complex64 {
        match self {
            Section::Constant(c) => c.z,
            Section::Affine { u, c } => u * b + c.z,
        }
    }

    /// Equality as sections (same `u` numerically, offsets equal mod lattice).
    pub fn approx_eq(&self, other: &Section, eps: f64) -> bool {
        (self.u() - other.u()).norm() <= eps && self.offset().eq_mod_lattice(&other.offset(), eps)
    }

    /// Pointwise sum in the Jacobian (sections form a group).
    pub fn combine(&self, other: &Section, x: &SurfaceModel) -> Result<Section> {
        self.validate(x)?;
        other.validate(x)?;
        let u = self.u() + other.u();
        let c = self.offset().add(&other.offset());
        Ok(if u.norm() <= DEFAULT_EPSILON {
            Section::Constant(c)
        } else {
            Section::Affine { u, c }
        })
    }
}

/// Coordinates of `w` in the fibre lattice basis `(1, tau_T)`; the flag
/// reports whether they are integral within `eps`.
fn is_fibre_lattice_vector(x: &SurfaceModel, w: Complex64, eps: f64) -> (bool, i64, i64) {
    let (s, t) = lattice_coords(x.fibre.lattice_tau, w);
    let si = s.round();
    let ti = t.round();
    let ok = (s - si).abs() <= eps && (t - ti).abs() <= eps;
    (ok, si as i64, ti as i64)
}

/// Fibrewise involution `lambda -> delta_b - lambda` defined by the
/// spectral section of a determinant line bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct Involution {
    pub delta_section: Section,
}

impl Involution {
    pub fn new(delta_section: Section) -> Self {
        Involution { delta_section }
    }

    /// Image of a section under the involution: `delta - sigma`.
    pub fn apply_section(&self, sigma: &Section, x: &SurfaceModel) -> Result<Section> {
        let neg = match sigma {
            Section::Constant(c) => Section::Constant(c.neg()),
            Section::Affine { u, c } => Section::Affine { u: -u, c: c.neg() },
        };
        self.delta_section.combine(&neg, x)
    }
}

/// Apply the involution over base point `b`: `lambda -> sigma_delta(b) - lambda`.
pub fn involution_apply(inv: &Involution, b: Complex64, lambda: &TorusPoint) -> TorusPoint {
    let sigma = inv.delta_section.eval(b);
    sigma.sub(lambda)
}

/// Result of intersecting two sections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Intersections {
    Coincident,
    Finite(u64),
}

/// Count intersection points of two sections of `J(X)`.
///
/// Genus 0: distinct constants never meet.  Genus 1: for `u1 != u2` the
/// count is the index `[Lambda_T* : (u1-u2) Lambda_B]`, the absolute
/// determinant of the integer matrix expressing the image of the base
/// lattice basis in the fibre lattice basis.
pub fn section_intersections(
    s1: &Section,
    s2: &Section,
    x: &SurfaceModel,
) -> Result<Intersections> {
    s1.validate(x)?;
    s2.validate(x)?;
    let w = s1.u() - s2.u();
    if w.norm() <= DEFAULT_EPSILON {
        return Ok(
            if s1.offset().eq_mod_lattice(&s2.offset(), DEFAULT_EPSILON) {
                Intersections::Coincident
            } else {
                Intersections::Finite(0)
            },
        );
    }
    let base = x
        .base_curve
        .ok_or_else(|| Error::model("non-constant sections require a genus-1 base"))?;
    let (ok1, a, b) = is_fibre_lattice_vector(x, w, DEFAULT_EPSILON);
    let (ok2, c, d) = is_fibre_lattice_vector(x, w * base.lattice_tau, DEFAULT_EPSILON);
    if !ok1 || !ok2 {
        return Err(Error::model(
            "section difference does not map the base lattice into the fibre lattice",
        ));
    }
    let det = (a * d - b * c).unsigned_abs();
    if det == 0 {
        return Err(Error::model(
            "degenerate section difference: lattice image has rank < 2",
        ));
    }
    Ok(Intersections::Finite(det))
}

/// Vertical component of a spectral cover or graph divisor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerticalFibre {
    pub base_point: Complex64,
    pub multiplicity: u32,
}

/// Horizontal part of a spectral cover.
#[derive(Debug, Clone, PartialEq)]
pub enum Bisection {
    Reducible { s1: Section, s2: Section },
    Irreducible(crate::jacobian::ruled::RuledSection),
}

/// Spectral cover: vertical fibres plus a horizontal bisection.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCover {
    pub vertical: Vec<VerticalFibre>,
    pub horizontal: Bisection,
}

/// Genus of a smooth irreducible bisection with discriminant `delta` over a
/// genus-`g` base: `4*delta + 2g - 1`.
pub fn bisection_genus(delta: Rational, g: u32) -> Result<i64> {
    let val = crate::rational::rat_int(4) * delta + crate::rational::rat_int(2 * g as i128 - 1);
    if !crate::rational::rat_is_integer(val) {
        return Err(Error::domain(format!(
            "bisection genus 4*{delta} + {} is not an integer",
            2 * g as i64 - 1
        )));
    }
    let n = val.to_integer();
    if n < 0 {
        return Err(Error::domain(format!("bisection genus {n} is negative")));
    }
    Ok(n as i64)
}

/// Double-cover genus via Riemann-Hurwitz: `2g - 1 + branch/2` for an even
/// number of branch points over a genus-`g` base.
pub fn riemann_hurwitz_check(g: u32, branch_count: u64) -> Result<i64> {
    if branch_count % 2 != 0 {
        return Err(Error::domain(format!(
            "a double cover has an even number of branch points, got {branch_count}"
        )));
    }
    Ok(2 * g as i64 - 1 + (branch_count / 2) as i64)
}
