//! The ruled quotient of the relative Jacobian by the fibrewise involution
//! `lambda -> delta_b - lambda`.
//!
//! In the chart used here the quotient map is `eta(b, lambda) =
//! p(lambda - sigma_delta(b)/2)` with `p` the Weierstrass function of the
//! fibre lattice, so horizontal curves in the quotient are graphs of maps
//! `B -> P1` and pulling one back produces a bisection of `J(X)`, either a
//! pair of sections or an irreducible double cover.

use num_complex::Complex64;

use crate::jacobian::section::{Involution, Section, VerticalFibre};
use crate::jacobian::torus::TorusPoint;
use crate::jacobian::weierstrass::{Weierstrass, P1};
use crate::surface::EllipticCurve;
use crate::{Error, Result};

/// Horizontal curve in the ruled quotient, i.e. the graph of a map
/// `B -> P1`.  Over a rational base the map is an honest rational function;
/// over an elliptic base it is given by samples along a closed loop together
/// with its declared mapping degree.
#[derive(Debug, Clone, PartialEq)]
pub enum RuledSection {
    /// Coefficient arrays, constant term first.
    Rational {
        numerator: Vec<Complex64>,
        denominator: Vec<Complex64>,
    },
    Sampled {
        samples: Vec<(Complex64, P1)>,
        degree: u32,
    },
}

// Trailing coefficients below this relative size are treated as zero when
// trimming polynomial degree.
const POLY_TRIM_REL: f64 = 1e-12;

fn poly_scale(c: &[Complex64]) -> f64 {
    c.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

fn poly_trimmed_len(c: &[Complex64]) -> usize {
    let scale = poly_scale(c);
    if scale == 0.0 {
        return 0;
    }
    let mut n = c.len();
    while n > 0 && c[n - 1].norm() <= POLY_TRIM_REL * scale {
        n -= 1;
    }
    n
}

/// Degree after trimming; `None` for the zero polynomial.
fn poly_degree(c: &[Complex64]) -> Option<usize> {
    match poly_trimmed_len(c) {
        0 => None,
        n => Some(n - 1),
    }
}

fn poly_eval(c: &[Complex64], b: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for coeff in c.iter().rev() {
        acc = acc * b + coeff;
    }
    acc
}

/// Euclidean remainder of `a` by `b` (leading coefficient of `b` nonzero).
fn poly_rem(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut r: Vec<Complex64> = a.to_vec();
    let nb = poly_trimmed_len(b);
    let lead = b[nb - 1];
    while poly_trimmed_len(&r) >= nb && poly_trimmed_len(&r) > 0 {
        let nr = poly_trimmed_len(&r);
        let q = r[nr - 1] / lead;
        let shift = nr - nb;
        for i in 0..nb {
            r[shift + i] -= q * b[i];
        }
        r.truncate(nr - 1);
    }
    r
}

/// Numerical coprimality test via the Euclidean algorithm; a remainder that
/// collapses to zero while the divisor still has positive degree exposes a
/// common factor.
fn polys_coprime(num: &[Complex64], den: &[Complex64]) -> bool {
    let mut a = num.to_vec();
    let mut b = den.to_vec();
    loop {
        let (da, db) = (poly_degree(&a), poly_degree(&b));
        match (da, db) {
            (None, Some(d)) | (Some(d), None) => return d == 0,
            (None, None) => return false,
            (Some(da), Some(db)) => {
                if da.min(db) == 0 {
                    return true;
                }
                if da < db {
                    std::mem::swap(&mut a, &mut b);
                    continue;
                }
                // normalise to keep the zero threshold meaningful
                let s = poly_scale(&b);
                for c in b.iter_mut() {
                    *c /= s;
                }
                let r = poly_rem(&a, &b);
                a = std::mem::replace(&mut b, r);
            }
        }
    }
}

impl RuledSection {
    pub fn validate(&self) -> Result<()> {
        match self {
            RuledSection::Rational {
                numerator,
                denominator,
            } => {
                if poly_degree(denominator).is_none() && poly_degree(numerator).is_none() {
                    return Err(Error::model("ruled section 0/0 is not a map"));
                }
                if poly_degree(denominator).is_none() {
                    return Err(Error::model(
                        "ruled section with zero denominator; use a constant-at-infinity \
                         numerator/denominator pair instead",
                    ));
                }
                let dn = poly_degree(numerator);
                let dd = poly_degree(denominator).unwrap();
                if dn.map_or(false, |d| d > 0) || dd > 0 {
                    if !polys_coprime(numerator, denominator) {
                        return Err(Error::model(
                            "ruled section polynomials share a common factor",
                        ));
                    }
                }
                Ok(())
            }
            RuledSection::Sampled { samples, .. } => {
                if samples.len() < 8 {
                    return Err(Error::model(
                        "sampled ruled section needs at least 8 loop samples",
                    ));
                }
                for w in samples.windows(2) {
                    if (w[0].0 - w[1].0).norm() < 1e-14 {
                        return Err(Error::model(
                            "sampled ruled section has coincident consecutive base points",
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    /// Mapping degree of `B -> P1`.
    pub fn degree(&self) -> u32 {
        match self {
            RuledSection::Rational {
                numerator,
                denominator,
            } => poly_degree(numerator)
                .unwrap_or(0)
                .max(poly_degree(denominator).unwrap_or(0)) as u32,
            RuledSection::Sampled { degree, .. } => *degree,
        }
    }

    /// Evaluate a rational ruled section at a base point.
    pub fn eval_rational(&self, b: Complex64) -> Result<P1> {
        match self {
            RuledSection::Rational {
                numerator,
                denominator,
            } => {
                let n = poly_eval(numerator, b);
                let d = poly_eval(denominator, b);
                if d.norm() <= 1e-12 * (1.0 + n.norm()) {
                    Ok(P1::Infinity)
                } else {
                    Ok(P1::Finite(n / d))
                }
            }
            RuledSection::Sampled { .. } => Err(Error::model(
                "pointwise evaluation is only defined for rational ruled sections",
            )),
        }
    }
}

/// Effective divisor on the ruled quotient: vertical fibres plus a
/// horizontal section.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphDivisor {
    pub vertical: Vec<VerticalFibre>,
    pub section: RuledSection,
}

impl GraphDivisor {
    pub fn vertical_weight(&self) -> u64 {
        self.vertical.iter().map(|f| f.multiplicity as u64).sum()
    }
}

/// Numerical class of a graph divisor: vertical weight plus the horizontal
/// mapping degree must match `c2`.
pub fn numerical_class_check(g: &GraphDivisor, c2: i64) -> bool {
    g.vertical_weight() as i64 + g.section.degree() as i64 == c2
}

/// Quotient chart value `p(lambda - sigma_delta(b)/2)`.
pub fn eta_project(i: &Involution, b: Complex64, lambda: &TorusPoint) -> P1 {
    let wp = Weierstrass::shared(lambda.curve);
    let sigma = i.delta_section.eval_unreduced(b);
    wp.p_value(lambda.z - sigma / 2.0)
}

/// The two preimages `{lambda, sigma_delta(b) - lambda}` of a chart value.
pub fn eta_fibre_lift(i: &Involution, b: Complex64, w: P1) -> Result<(TorusPoint, TorusPoint)> {
    let curve = i.delta_section.offset().curve;
    let wp = Weierstrass::shared(curve);
    let sigma = i.delta_section.eval_unreduced(b);
    let z = wp.invert(w)?;
    let l1 = TorusPoint::new(curve, sigma / 2.0 + z).reduced();
    let l2 = TorusPoint::new(curve, sigma / 2.0 - z).reduced();
    Ok((l1, l2))
}

/// Pullback of a horizontal curve along the quotient map.
#[derive(Debug, Clone, PartialEq)]
pub enum Pullback {
    /// Splits into two sections (possibly equal: the multiple-section case).
    Reducible(Section, Section),
    /// Certified or forced irreducible bisection, returned with its graph.
    Irreducible(RuledSection),
    /// Monodromy sampling was inconclusive.
    Unknown,
}

impl Pullback {
    /// Forget the inconclusive case.
    pub fn into_bisection(self) -> Option<crate::jacobian::section::Bisection> {
        match self {
            Pullback::Reducible(s1, s2) => {
                Some(crate::jacobian::section::Bisection::Reducible { s1, s2 })
            }
            Pullback::Irreducible(a) => {
                Some(crate::jacobian::section::Bisection::Irreducible(a))
            }
            Pullback::Unknown => None,
        }
    }
}

enum TrackOutcome {
    /// Loop closed on the starting sheet; carries the continuous lift.
    Closed(Vec<Complex64>),
    Swapped,
}

/// Follow one preimage of `w` continuously along a closed loop of samples
/// and report whether it returns to itself or to the conjugate sheet.
fn track_loop(
    samples: &[(Complex64, P1)],
    i: &Involution,
    wp: &Weierstrass,
) -> Result<TrackOutcome> {
    let curve = i.delta_section.offset().curve;
    let guidance = |b: Complex64| {
        Error::no_convergence(format!(
            "monodromy tracking lost the sheet near base point {b}; the loop passes too \
             close to a branch point of the bisection. Densify the samples there or move \
             the loop away from the branch locus."
        ))
    };
    let w0 = samples[0].1;
    let mut z = wp
        .invert(w0)
        .map_err(|_| guidance(samples[0].0))?;
    let z0 = z;
    // maximum credible step between consecutive samples, relative to the
    // lattice scale; larger jumps mean the tracker skipped past a branch
    let max_step = 0.45 * wp.half_periods()[0].norm().min(wp.half_periods()[1].norm());
    for k in 1..=samples.len() {
        let (b, w) = samples[k % samples.len()];
        let next = wp.invert_near(w, z).map_err(|_| guidance(b))?;
        if (next - z).norm() > max_step {
            return Err(guidance(b));
        }
        z = next;
    }
    let end = TorusPoint::new(curve, z);
    let start = TorusPoint::new(curve, z0);
    if end.eq_mod_lattice(&start, 1e-6) {
        // re-run to collect the continuous lift for reconstruction
        let mut lift = Vec::with_capacity(samples.len());
        let mut zz = z0;
        lift.push(zz);
        for &(_, w) in &samples[1..] {
            zz = wp.invert_near(w, zz).map_err(|_| guidance(samples[0].0))?;
            lift.push(zz);
        }
        Ok(TrackOutcome::Closed(lift))
    } else if end.eq_mod_lattice(&start.neg(), 1e-6) {
        Ok(TrackOutcome::Swapped)
    } else {
        Err(Error::no_convergence(
            "monodromy tracking drifted off both sheets over the loop; increase the \
             sample count or the lattice summation box",
        ))
    }
}

/// Rebuild the two component sections from a closed continuous lift, or
/// give up with `Unknown` when no constant or affine section fits.
fn reconstruct_sections(
    samples: &[(Complex64, P1)],
    lift: &[Complex64],
    i: &Involution,
) -> Result<Pullback> {
    let curve = i.delta_section.offset().curve;
    // continuous values of the candidate section lambda = sigma/2 + z
    let lambda: Vec<Complex64> = samples
        .iter()
        .zip(lift)
        .map(|(&(b, _), &z)| i.delta_section.eval_unreduced(b) / 2.0 + z)
        .collect();
    let mut u_sum = Complex64::new(0.0, 0.0);
    let mut u_all = Vec::with_capacity(lambda.len() - 1);
    for k in 0..lambda.len() - 1 {
        let db = samples[k + 1].0 - samples[k].0;
        let u = (lambda[k + 1] - lambda[k]) / db;
        u_sum += u;
        u_all.push(u);
    }
    let u = u_sum / u_all.len() as f64;
    if u_all.iter().any(|uk| (uk - u).norm() > 1e-5 * (1.0 + u.norm())) {
        return Ok(Pullback::Unknown); // not affine in this chart
    }
    let c0 = lambda
        .iter()
        .zip(samples)
        .map(|(l, &(b, _))| l - u * b)
        .sum::<Complex64>()
        / lambda.len() as f64;
    let s1 = if u.norm() <= 1e-7 {
        Section::Constant(TorusPoint::new(curve, c0).reduced())
    } else {
        Section::Affine {
            u,
            c: TorusPoint::new(curve, c0).reduced(),
        }
    };
    // the partner section is the involution image sigma - s1
    let u2 = i.delta_section.u() - u;
    let c2 = i.delta_section.offset().z - c0;
    let s2 = if u2.norm() <= 1e-7 {
        Section::Constant(TorusPoint::new(curve, c2).reduced())
    } else {
        Section::Affine {
            u: u2,
            c: TorusPoint::new(curve, c2).reduced(),
        }
    };
    // verify the fit reproduces the sampled chart values
    for &(b, w) in samples {
        let back = eta_project(i, b, &TorusPoint::new(curve, s1.eval_unreduced(b)));
        if !back.approx_eq(&w, 1e-5) {
            return Ok(Pullback::Unknown);
        }
    }
    Ok(Pullback::Reducible(s1, s2))
}

/// Decide whether the pullback of a horizontal curve splits into two
/// sections of `J(X)` or stays an irreducible bisection.
pub fn graph_pullback(a: &RuledSection, i: &Involution, t: EllipticCurve) -> Result<Pullback> {
    a.validate()?;
    let wp = Weierstrass::shared(t);
    match a {
        RuledSection::Rational { .. } => {
            if matches!(i.delta_section, Section::Affine { .. }) {
                return Err(Error::model(
                    "rational ruled sections live over a genus-0 base, where the \
                     spectral section must be constant",
                ));
            }
            if a.degree() == 0 {
                // constant chart value: lifts to two constant sections
                let b0 = Complex64::new(0.0, 0.0);
                let w = a.eval_rational(b0)?;
                let (l1, l2) = eta_fibre_lift(i, b0, w)?;
                return Ok(Pullback::Reducible(
                    Section::Constant(l1),
                    Section::Constant(l2),
                ));
            }
            // A splitting component over a rational base would be the graph
            // of a holomorphic map P1 -> T*, hence constant, forcing the
            // chart value to be constant too.  Degree >= 1 rules that out.
            // Run the monodromy sampler anyway: a detected swap doubles as a
            // numerical certificate, and a tracking failure changes nothing.
            let loop_samples: Vec<(Complex64, P1)> = (0..256)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / 256.0;
                    let b = Complex64::new(t.cos(), t.sin());
                    Ok((b, a.eval_rational(b)?))
                })
                .collect::<Result<_>>()?;
            if loop_samples.iter().all(|(_, w)| !w.is_infinity()) {
                let _ = track_loop(&loop_samples, i, &wp);
            }
            Ok(Pullback::Irreducible(a.clone()))
        }
        RuledSection::Sampled { samples, .. } => {
            if samples.iter().any(|(_, w)| w.is_infinity()) {
                return Err(Error::no_convergence(
                    "sample loop passes through the section at infinity; move the loop \
                     off the pole locus",
                ));
            }
            match track_loop(samples, i, &wp)? {
                TrackOutcome::Swapped => Ok(Pullback::Irreducible(a.clone())),
                TrackOutcome::Closed(lift) => reconstruct_sections(samples, &lift, i),
            }
        }
    }
}
