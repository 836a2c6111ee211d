//! Points on a complex torus and reduction to the fundamental domain.

use num_complex::Complex64;

use crate::surface::EllipticCurve;
use crate::{Error, Result};

/// Point of `C / (Z + Z*tau)` carried by a representative `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    pub z: Complex64,
    pub curve: EllipticCurve,
}

/// Real coordinates `(s, t)` of `z = s + t*tau` in the basis `(1, tau)`.
pub fn lattice_coords(tau: Complex64, z: Complex64) -> (f64, f64) {
    let t = z.im / tau.im;
    let s = z.re - t * tau.re;
    (s, t)
}

fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    // guard against 1.0 - 1e-17 rounding up to exactly 1.0
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

impl TorusPoint {
    pub fn new(curve: EllipticCurve, z: Complex64) -> Self {
        TorusPoint { z, curve }
    }

    pub fn zero(curve: EllipticCurve) -> Self {
        TorusPoint::new(curve, Complex64::new(0.0, 0.0))
    }

    /// Build from fundamental-domain coordinates `(s, t)`.
    pub fn from_coords(curve: EllipticCurve, s: f64, t: f64) -> Self {
        TorusPoint::new(curve, Complex64::new(s, 0.0) + curve.lattice_tau * t)
    }

    /// Representative with `s, t` in `[0, 1)`.
    pub fn reduced(&self) -> TorusPoint {
        let (s, t) = lattice_coords(self.curve.lattice_tau, self.z);
        TorusPoint::from_coords(self.curve, frac(s), frac(t))
    }

    /// Coordinates of the reduced representative, each in `[0, 1)`.
    pub fn coords(&self) -> (f64, f64) {
        let (s, t) = lattice_coords(self.curve.lattice_tau, self.z);
        (frac(s), frac(t))
    }

    /// Distance to the nearest lattice translate of `other`.
    pub fn dist_mod_lattice(&self, other: &TorusPoint) -> f64 {
        dist_to_lattice(self.curve, self.z - other.z)
    }

    /// Equality modulo the lattice, tolerance `eps` in the plane metric.
    pub fn eq_mod_lattice(&self, other: &TorusPoint, eps: f64) -> bool {
        self.dist_mod_lattice(other) <= eps
    }

    pub fn add(&self, other: &TorusPoint) -> TorusPoint {
        TorusPoint::new(self.curve, self.z + other.z).reduced()
    }

    pub fn sub(&self, other: &TorusPoint) -> TorusPoint {
        TorusPoint::new(self.curve, self.z - other.z).reduced()
    }

    pub fn neg(&self) -> TorusPoint {
        TorusPoint::new(self.curve, -self.z).reduced()
    }

    /// One of the four halves of the point: the half of the reduced
    /// representative.  A deterministic chart choice, not a group map.
    pub fn half(&self) -> TorusPoint {
        TorusPoint::new(self.curve, self.reduced().z / 2.0)
    }

    /// True when the point is a 2-torsion point (fixed by negation).
    pub fn is_two_torsion(&self, eps: f64) -> bool {
        self.eq_mod_lattice(&self.neg(), eps)
    }
}

/// Distance from `z` to the nearest point of `Z + Z*tau` (reduction to the
/// centered cell, then one ring of neighbours to be safe on skew lattices).
pub fn dist_to_lattice(curve: EllipticCurve, z: Complex64) -> f64 {
    let tau = curve.lattice_tau;
    let (s, t) = lattice_coords(tau, z);
    let s0 = s - s.round();
    let t0 = t - t.round();
    let mut best = f64::INFINITY;
    for ds in -1..=1 {
        for dt in -1..=1 {
            let w = Complex64::new(s0 + ds as f64, 0.0) + tau * (t0 + dt as f64);
            best = best.min(w.norm());
        }
    }
    best
}

/// Reduce a representative into the fundamental domain `{s + t*tau : s, t in [0,1)}`.
pub fn torus_reduce(z: Complex64, curve: EllipticCurve) -> Result<TorusPoint> {
    if !z.is_finite() {
        return Err(Error::domain("torus_reduce: non-finite representative"));
    }
    Ok(TorusPoint::new(curve, z).reduced())
}
