//! Exact rational scalars used throughout the crate.
//!
//! `i128` numerators/denominators give ample headroom for the desk-scale
//! lattice arithmetic done here (Gram entries and Chern numbers are small;
//! the exact CVP elimination multiplies a handful of them together).

use num_rational::Ratio;
use num_traits::Signed;

use crate::{Error, Result};

pub type Rational = Ratio<i128>;

/// `p/q` as an exact rational. Panics on `q == 0`.
pub fn rat(p: i128, q: i128) -> Rational {
    Ratio::new(p, q)
}

/// Integer as an exact rational.
pub fn rat_int(n: i128) -> Rational {
    Ratio::from_integer(n)
}

pub fn rat_to_f64(r: Rational) -> f64 {
    // plain quotient; numerators and denominators stay desk-scale here
    *r.numer() as f64 / *r.denom() as f64
}

/// Canonical `"p/q"` rendering, reduced, denominator always positive and
/// always printed (`0` renders as `"0/1"`).
pub fn rat_to_string(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `"p/q"`, `"p"`, or a plain integer string into a rational.
pub fn rat_from_str(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<i128> {
        t.trim()
            .parse::<i128>()
            .map_err(|_| Error::model(format!("invalid rational component {t:?}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let p = parse_int(p)?;
            let q = parse_int(q)?;
            if q == 0 {
                return Err(Error::model("rational with zero denominator"));
            }
            Ok(Ratio::new(p, q))
        }
        None => Ok(Ratio::from_integer(parse_int(s)?)),
    }
}

/// Nearest integer to a rational; exact halves round toward +infinity,
/// deterministically.
pub fn rat_round(r: Rational) -> i128 {
    (r + rat(1, 2)).floor().to_integer()
}

/// True when `r` is an integer.
pub fn rat_is_integer(r: Rational) -> bool {
    *r.denom() == 1
}

pub fn rat_abs(r: Rational) -> Rational {
    r.abs()
}
