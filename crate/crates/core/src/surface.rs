//! Surface models and degrees of line bundles.
//!
//! A surface here is a minimal non-Kähler elliptic surface `pi: X -> B`
//! obtained as a quotient `Theta^* / <tau>` of the complement of the zero
//! section in a line bundle `Theta` of degree `d >= 1` over `B`, with `tau`
//! acting by fibrewise multiplication, `|tau| > 1`.  Multiple fibres
//! `m_i T_i` sit over marked base points.  Line bundles are recorded by
//! their pullback part, twisting constant `alpha`, and multiple-fibre
//! coefficients; their degree (with respect to the natural Gauduchon metric)
//! splits into an exact rational part and a real part
//! `-(d / ln|tau|) * ln|alpha|`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::jacobian::Section;
use crate::rational::{rat, rat_int, rat_is_integer, rat_to_f64, rat_to_string, Rational};
use crate::{Error, Result, DEFAULT_EPSILON};

/// Complex torus `C / (Z + Z*lattice_tau)`, `Im(lattice_tau) > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticCurve {
    pub lattice_tau: Complex64,
}

impl EllipticCurve {
    pub fn new(lattice_tau: Complex64) -> Result<Self> {
        if !(lattice_tau.im > 0.0) || !lattice_tau.is_finite() {
            return Err(Error::model(format!(
                "elliptic curve requires Im(lattice_tau) > 0, got {lattice_tau}"
            )));
        }
        Ok(EllipticCurve { lattice_tau })
    }

    /// Square lattice `Z + Zi`.
    pub fn square() -> Self {
        EllipticCurve {
            lattice_tau: Complex64::new(0.0, 1.0),
        }
    }
}

/// A multiple fibre `m * T` over a marked base point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultipleFibre {
    pub multiplicity: u32,
    pub base_point: Complex64,
}

/// Minimal non-Kähler elliptic surface `X = Theta^* / <tau> -> B`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceModel {
    pub base_genus: u32,
    /// Lattice of the base curve; present exactly when `base_genus == 1`.
    pub base_curve: Option<EllipticCurve>,
    /// Generic fibre `T` (all smooth fibres are isomorphic to it).
    pub fibre: EllipticCurve,
    /// Degree `d >= 1` of the bundle `Theta` defining the quotient.
    pub theta_degree: u32,
    /// Contraction factor, `|tau| > 1`.
    pub tau: Complex64,
    pub multiple_fibres: Vec<MultipleFibre>,
}

impl SurfaceModel {
    pub fn new(
        base_genus: u32,
        base_curve: Option<EllipticCurve>,
        fibre: EllipticCurve,
        theta_degree: u32,
        tau: Complex64,
        multiple_fibres: Vec<MultipleFibre>,
    ) -> Result<Self> {
        if tau.norm() <= 1.0 || !tau.is_finite() {
            return Err(Error::model(format!("|tau| must exceed 1, got {tau}")));
        }
        if theta_degree == 0 {
            return Err(Error::model("theta_degree must be >= 1"));
        }
        match (base_genus, &base_curve) {
            (1, None) => return Err(Error::model("genus-1 base requires base_curve")),
            (g, Some(_)) if g != 1 => {
                return Err(Error::model("base_curve is only meaningful for genus 1"))
            }
            _ => {}
        }
        for f in &multiple_fibres {
            if f.multiplicity < 2 {
                return Err(Error::model("multiple fibre multiplicity must be >= 2"));
            }
        }
        for (i, a) in multiple_fibres.iter().enumerate() {
            for b in &multiple_fibres[i + 1..] {
                if (a.base_point - b.base_point).norm() <= DEFAULT_EPSILON {
                    return Err(Error::model("multiple fibre base points must be distinct"));
                }
            }
        }
        Ok(SurfaceModel {
            base_genus,
            base_curve,
            fibre,
            theta_degree,
            tau,
            multiple_fibres,
        })
    }

    /// Hopf-type surface: genus-0 base, no multiple fibres unless supplied.
    pub fn hopf(theta_degree: u32, tau: Complex64, multiple_fibres: Vec<MultipleFibre>) -> Result<Self> {
        SurfaceModel::new(0, None, EllipticCurve::square(), theta_degree, tau, multiple_fibres)
    }

    pub fn multiple_fibre_count(&self) -> usize {
        self.multiple_fibres.len()
    }

    /// Index of the multiple fibre sitting over `b`, if any.
    pub fn multiple_fibre_at(&self, b: Complex64) -> Option<usize> {
        self.multiple_fibres
            .iter()
            .position(|f| (f.base_point - b).norm() <= DEFAULT_EPSILON)
    }
}

/// Degree value `rational_part + real_part`.
///
/// The rational part is exact (pullback and multiple-fibre contributions);
/// the real part carries the transcendental `ln|alpha|` term.  Comparisons
/// are exact whenever the real parts are bitwise equal (in particular when
/// both vanish) and otherwise tolerate `eps` on the total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Degree {
    pub rational_part: Rational,
    pub real_part: f64,
}

impl Degree {
    pub fn new(rational_part: Rational, real_part: f64) -> Self {
        Degree {
            rational_part,
            real_part,
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        Degree::new(r, 0.0)
    }

    pub fn zero() -> Self {
        Degree::new(rat_int(0), 0.0)
    }

    pub fn total(&self) -> f64 {
        rat_to_f64(self.rational_part) + self.real_part
    }

    pub fn half(&self) -> Self {
        Degree::new(self.rational_part / rat_int(2), self.real_part / 2.0)
    }

    /// Three-way comparison with tolerance `eps` on the real component.
    ///
    /// When the real parts cancel exactly the rational parts are compared
    /// exactly, so purely rational degrees never suffer float fuzz.  The
    /// second value reports whether the comparison was decided inside the
    /// eps band (a margin warning for callers that care about boundaries).
    pub fn cmp_eps(&self, other: &Degree, eps: f64) -> (Ordering, bool) {
        let drat = self.rational_part - other.rational_part;
        let dreal = self.real_part - other.real_part;
        if dreal == 0.0 {
            return (drat.cmp(&rat_int(0)), false);
        }
        let total = rat_to_f64(drat) + dreal;
        if total.abs() <= eps {
            (Ordering::Equal, true)
        } else if total < 0.0 {
            (Ordering::Less, total.abs() <= 2.0 * eps)
        } else {
            (Ordering::Greater, total.abs() <= 2.0 * eps)
        }
    }

    pub fn lt_eps(&self, other: &Degree, eps: f64) -> bool {
        self.cmp_eps(other, eps).0 == Ordering::Less
    }

    pub fn approx_eq(&self, other: &Degree, eps: f64) -> bool {
        self.cmp_eps(other, eps).0 == Ordering::Equal
    }

    /// Exact equality on the rational part, `eps` on the real part.
    /// Stricter than `approx_eq`: rational mismatch is never forgiven.
    pub fn matches_exactly(&self, other: &Degree, eps: f64) -> bool {
        self.rational_part == other.rational_part && (self.real_part - other.real_part).abs() <= eps
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        Degree::new(
            self.rational_part + rhs.rational_part,
            self.real_part + rhs.real_part,
        )
    }
}

impl Sub for Degree {
    type Output = Degree;
    fn sub(self, rhs: Degree) -> Degree {
        Degree::new(
            self.rational_part - rhs.rational_part,
            self.real_part - rhs.real_part,
        )
    }
}

impl Neg for Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree::new(-self.rational_part, -self.real_part)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.real_part == 0.0 {
            write!(f, "{}", rat_to_string(self.rational_part))
        } else {
            write!(
                f,
                "{} + {:.6e}",
                rat_to_string(self.rational_part),
                self.real_part
            )
        }
    }
}

/// Line bundle `pi^*(H) (x) L_alpha (x) O_X(sum a_i T_i)`.
///
/// `section` is the spectral section the bundle induces in the relative
/// Jacobian; it is caller-supplied data (the identification between
/// twisting constants and torus points is not canonical).
#[derive(Debug, Clone, PartialEq)]
pub struct LineBundleModel {
    /// `c1(H)` of the pullback part.
    pub base_chern: i64,
    /// Twisting constant, nonzero.
    pub alpha: Complex64,
    /// Coefficients `a_i` of the multiple fibres, parallel to
    /// `SurfaceModel::multiple_fibres`.
    pub fibre_coeffs: Vec<i64>,
    pub section: Section,
}

impl LineBundleModel {
    pub fn new(base_chern: i64, alpha: Complex64, fibre_coeffs: Vec<i64>, section: Section) -> Self {
        LineBundleModel {
            base_chern,
            alpha,
            fibre_coeffs,
            section,
        }
    }

    /// Structure sheaf with the zero constant section.
    pub fn trivial(surface: &SurfaceModel) -> Self {
        LineBundleModel {
            base_chern: 0,
            alpha: Complex64::new(1.0, 0.0),
            fibre_coeffs: vec![0; surface.multiple_fibre_count()],
            section: Section::constant_zero(surface.fibre),
        }
    }

    /// Tensor product; sections combine additively in the Jacobian.
    pub fn tensor(&self, other: &LineBundleModel, surface: &SurfaceModel) -> Result<LineBundleModel> {
        if self.fibre_coeffs.len() != other.fibre_coeffs.len() {
            return Err(Error::model("tensor: fibre coefficient lists differ in length"));
        }
        Ok(LineBundleModel {
            base_chern: self.base_chern + other.base_chern,
            alpha: self.alpha * other.alpha,
            fibre_coeffs: self
                .fibre_coeffs
                .iter()
                .zip(&other.fibre_coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            section: self.section.combine(&other.section, surface)?,
        })
    }
}

/// Degree of `L` on `X`.
///
/// `deg L = c1(H) + sum a_i / m_i - (d / ln|tau|) * ln|alpha|`, split into
/// the exact rational part and the real part.
pub fn degree(l: &LineBundleModel, x: &SurfaceModel) -> Result<Degree> {
    if l.alpha.norm() == 0.0 || !l.alpha.is_finite() {
        return Err(Error::domain("degree: alpha must be a nonzero complex number"));
    }
    if l.fibre_coeffs.len() != x.multiple_fibres.len() {
        return Err(Error::model(format!(
            "degree: {} fibre coefficients for {} multiple fibres",
            l.fibre_coeffs.len(),
            x.multiple_fibres.len()
        )));
    }
    let mut rational = rat_int(l.base_chern as i128);
    for (a, f) in l.fibre_coeffs.iter().zip(&x.multiple_fibres) {
        rational += rat(*a as i128, f.multiplicity as i128);
    }
    let log_abs_alpha = l.alpha.norm().ln();
    let real = if log_abs_alpha == 0.0 {
        // keeps purely rational degrees exactly rational
        0.0
    } else {
        -(x.theta_degree as f64 / x.tau.norm().ln()) * log_abs_alpha
    };
    Ok(Degree::new(rational, real))
}

/// Degree of the relative dualising sheaf: `r - sum 1/m_i`, always >= 0 on
/// these surfaces.
pub fn relative_dualising_degree(x: &SurfaceModel) -> Degree {
    let mut d = rat_int(x.multiple_fibres.len() as i128);
    for f in &x.multiple_fibres {
        d -= rat(1, f.multiplicity as i128);
    }
    Degree::from_rational(d)
}

/// Existence and type of a holomorphic Poisson structure on `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoissonStructure {
    /// Genus-1 base, no multiple fibres: nowhere-degenerate (symplectic).
    Symplectic,
    /// Genus-0 base, no multiple fibres: degenerate along two fibres.
    DegeneratePoisson,
    None,
}

/// A Poisson structure exists iff the base has genus <= 1 and there are no
/// multiple fibres; its type is decided by the genus.
pub fn poisson_exists(x: &SurfaceModel) -> PoissonStructure {
    if !x.multiple_fibres.is_empty() || x.base_genus > 1 {
        return PoissonStructure::None;
    }
    match x.base_genus {
        0 => PoissonStructure::DegeneratePoisson,
        1 => PoissonStructure::Symplectic,
        _ => PoissonStructure::None,
    }
}

/// Degree congruence `deg a = deg b (mod Z)`: exact on rational parts,
/// `eps` on real parts.
pub fn degree_congruent_mod_z(a: &Degree, b: &Degree, eps: f64) -> bool {
    rat_is_integer(a.rational_part - b.rational_part) && (a.real_part - b.real_part).abs() <= eps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hopf_plain() -> SurfaceModel {
        SurfaceModel::hopf(1, Complex64::new(2.0, 0.0), vec![]).unwrap()
    }

    fn hopf_fibres(ms: &[u32]) -> SurfaceModel {
        let fibres = ms
            .iter()
            .enumerate()
            .map(|(i, &m)| MultipleFibre {
                multiplicity: m,
                base_point: Complex64::new(i as f64 + 1.0, 0.0),
            })
            .collect();
        SurfaceModel::hopf(1, Complex64::new(2.0, 0.0), fibres).unwrap()
    }

    fn zero_section(x: &SurfaceModel) -> Section {
        Section::constant_zero(x.fibre)
    }

    #[test]
    fn degree_of_pullback_is_base_chern() {
        let x = hopf_plain();
        let l = LineBundleModel::new(3, Complex64::new(1.0, 0.0), vec![], zero_section(&x));
        let d = degree(&l, &x).unwrap();
        assert_eq!(d.rational_part, rat_int(3));
        assert_eq!(d.real_part, 0.0);
    }

    #[test]
    fn degree_of_half_fibre() {
        // O_X(T_0) with m_0 = 2 has degree 1/2.
        let x = hopf_fibres(&[2]);
        let l = LineBundleModel::new(0, Complex64::new(1.0, 0.0), vec![1], zero_section(&x));
        let d = degree(&l, &x).unwrap();
        assert_eq!(d.rational_part, rat(1, 2));
        assert_eq!(d.real_part, 0.0);
    }

    #[test]
    fn degree_real_part_from_alpha() {
        // d = 2, |tau| = e^2, |alpha| = e  =>  real part -(2/2)*1 = -1.
        let x = SurfaceModel::hopf(2, Complex64::new((2.0f64).exp(), 0.0), vec![]).unwrap();
        let l = LineBundleModel::new(
            0,
            Complex64::new(1.0f64.exp(), 0.0),
            vec![],
            zero_section(&x),
        );
        let d = degree(&l, &x).unwrap();
        assert_eq!(d.rational_part, rat_int(0));
        assert!((d.real_part + 1.0).abs() < 1e-12);
    }

    #[test]
    fn degree_rejects_zero_alpha_and_bad_tau() {
        let x = hopf_plain();
        let l = LineBundleModel::new(0, Complex64::new(0.0, 0.0), vec![], zero_section(&x));
        assert!(matches!(degree(&l, &x), Err(Error::Domain(_))));
        assert!(SurfaceModel::hopf(1, Complex64::new(0.5, 0.0), vec![]).is_err());
        assert!(SurfaceModel::hopf(0, Complex64::new(2.0, 0.0), vec![]).is_err());
    }

    #[test]
    fn degree_of_trivial_bundle_is_zero() {
        let x = hopf_fibres(&[2, 3]);
        let d = degree(&LineBundleModel::trivial(&x), &x).unwrap();
        assert_eq!(d.rational_part, rat_int(0));
        assert_eq!(d.real_part, 0.0);
    }

    #[test]
    fn mth_power_of_multiple_fibre_is_whole_fibre() {
        // a_0 = m_0 gives degree 1, the degree of a whole fibre pullback.
        let x = hopf_fibres(&[3]);
        let l = LineBundleModel::new(0, Complex64::new(1.0, 0.0), vec![3], zero_section(&x));
        assert_eq!(degree(&l, &x).unwrap().rational_part, rat_int(1));
    }

    #[test]
    fn degree_is_additive_under_tensor() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let x = hopf_fibres(&[2, 5]);
        for _ in 0..100 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                LineBundleModel::new(
                    rng.gen_range(-4..=4),
                    Complex64::new(rng.gen_range(0.2..2.0), rng.gen_range(-1.0..1.0)),
                    vec![rng.gen_range(-3..=3), rng.gen_range(-3..=3)],
                    zero_section(&x),
                )
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let ab = a.tensor(&b, &x).unwrap();
            let da = degree(&a, &x).unwrap();
            let db = degree(&b, &x).unwrap();
            let dab = degree(&ab, &x).unwrap();
            assert_eq!(dab.rational_part, (da + db).rational_part);
            assert!((dab.real_part - (da.real_part + db.real_part)).abs() <= 1e-9);
        }
    }

    #[test]
    fn relative_dualising_examples() {
        assert_eq!(
            relative_dualising_degree(&hopf_fibres(&[2, 3])).rational_part,
            rat(7, 6)
        );
        assert_eq!(
            relative_dualising_degree(&hopf_plain()).rational_part,
            rat_int(0)
        );
        assert_eq!(
            relative_dualising_degree(&hopf_fibres(&[2, 2])).rational_part,
            rat_int(1)
        );
    }

    #[test]
    fn poisson_cases() {
        assert_eq!(poisson_exists(&hopf_plain()), PoissonStructure::DegeneratePoisson);
        let kodaira = SurfaceModel::new(
            1,
            Some(EllipticCurve::square()),
            EllipticCurve::square(),
            1,
            Complex64::new(3.0, 0.0),
            vec![],
        )
        .unwrap();
        assert_eq!(poisson_exists(&kodaira), PoissonStructure::Symplectic);
        assert_eq!(poisson_exists(&hopf_fibres(&[2])), PoissonStructure::None);
        let genus2 = SurfaceModel::new(
            2,
            None,
            EllipticCurve::square(),
            1,
            Complex64::new(2.0, 0.0),
            vec![],
        )
        .unwrap();
        assert_eq!(poisson_exists(&genus2), PoissonStructure::None);
    }

    #[test]
    fn degree_comparison_exact_on_rational_parts() {
        let a = Degree::from_rational(rat(1, 3));
        let b = Degree::from_rational(rat(1, 3) + rat(1, 1_000_000_000_000));
        // far below eps as floats, but rationally distinct: exact compare wins
        assert_eq!(a.cmp_eps(&b, 1e-9).0, Ordering::Less);
        let c = Degree::new(rat(1, 2), 1e-12);
        let d = Degree::new(rat(1, 2), 0.0);
        assert_eq!(c.cmp_eps(&d, 1e-9).0, Ordering::Equal);
        assert!(c.cmp_eps(&d, 1e-9).1, "eps-band decision is flagged");
    }

    #[test]
    fn duplicate_fibre_points_rejected() {
        let p = Complex64::new(1.0, 0.0);
        let fibres = vec![
            MultipleFibre { multiplicity: 2, base_point: p },
            MultipleFibre { multiplicity: 3, base_point: p },
        ];
        assert!(SurfaceModel::hopf(1, Complex64::new(2.0, 0.0), fibres).is_err());
    }

    #[test]
    fn congruence_mod_z() {
        let a = Degree::from_rational(rat(7, 2));
        let b = Degree::from_rational(rat(1, 2));
        assert!(degree_congruent_mod_z(&a, &b, 1e-9));
        let c = Degree::from_rational(rat(1, 3));
        assert!(!degree_congruent_mod_z(&a, &c, 1e-9));
        let d = Degree::new(rat(1, 2), 1e-12);
        assert!(degree_congruent_mod_z(&b, &d, 1e-9));
    }
}
