//! The p-norm family on R^n, including the sup norm.
//!
//! `PNorm` is a validated exponent: either a finite p >= 1 or the sup norm.
//! The sup norm is its own tag rather than a large finite p, so no threshold
//! juggling is involved.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::vector::Vector;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PNorm(Repr);

#[derive(Clone, Copy, Debug, PartialEq)]
enum Repr {
    Finite(f64),
    Inf,
}

impl PNorm {
    pub const INF: PNorm = PNorm(Repr::Inf);

    /// A finite exponent; rejects p < 1, NaN, and infinity.
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(PNorm(Repr::Finite(p)))
        } else {
            Err(Error::InvalidPNormExponent(p))
        }
    }

    pub const fn euclidean() -> Self {
        PNorm(Repr::Finite(2.0))
    }

    pub fn is_inf(&self) -> bool {
        matches!(self.0, Repr::Inf)
    }

    /// The exponent, or `None` for the sup norm.
    pub fn exponent(&self) -> Option<f64> {
        match self.0 {
            Repr::Finite(p) => Some(p),
            Repr::Inf => None,
        }
    }

    pub fn eval(&self, x: &Vector) -> f64 {
        match self.0 {
            Repr::Inf => x.iter().fold(0.0, |m, c| m.max(c.abs())),
            Repr::Finite(p) => {
                if p == 1.0 {
                    x.iter().map(|c| c.abs()).sum()
                } else if p == 2.0 {
                    x.norm()
                } else {
                    x.iter().map(|c| c.abs().powf(p)).sum::<f64>().powf(1.0 / p)
                }
            }
        }
    }
}

/// Value of the norm `param` at `x`.
pub fn norm_eval(param: PNorm, x: &Vector) -> f64 {
    param.eval(x)
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Repr::Finite(p) => write!(f, "{p}"),
            Repr::Inf => write!(f, "inf"),
        }
    }
}

impl FromStr for PNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("inf") {
            return Ok(PNorm::INF);
        }
        let p: f64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("invalid p-norm exponent: {s:?}")))?;
        PNorm::finite(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(matches!(
            PNorm::finite(0.5),
            Err(Error::InvalidPNormExponent(_))
        ));
        assert!(matches!(
            PNorm::finite(f64::NAN),
            Err(Error::InvalidPNormExponent(_))
        ));
        assert!(matches!(
            PNorm::finite(f64::INFINITY),
            Err(Error::InvalidPNormExponent(_))
        ));
        assert!(PNorm::finite(1.0).is_ok());
    }

    #[test]
    fn known_values() {
        let x = v(&[3.0, -4.0]);
        assert_eq!(norm_eval(PNorm::finite(1.0).unwrap(), &x), 7.0);
        assert_eq!(norm_eval(PNorm::euclidean(), &x), 5.0);
        assert_eq!(norm_eval(PNorm::INF, &x), 4.0);
        let p3 = PNorm::finite(3.0).unwrap();
        assert_relative_eq!(
            norm_eval(p3, &x),
            (27.0f64 + 64.0).powf(1.0 / 3.0),
            max_relative = 1e-15
        );
    }

    #[test]
    fn zero_only_at_origin() {
        let z = Vector::zeros(5);
        for p in [
            PNorm::finite(1.0).unwrap(),
            PNorm::finite(2.5).unwrap(),
            PNorm::INF,
        ] {
            assert_eq!(p.eval(&z), 0.0);
        }
        assert!(PNorm::INF.eval(&v(&[0.0, 1e-300, 0.0])) > 0.0);
    }

    #[test]
    fn parse_round_trip() {
        let p: PNorm = "1.5".parse().unwrap();
        assert_eq!(p.exponent(), Some(1.5));
        assert_eq!(p.to_string(), "1.5");
        let inf: PNorm = "inf".parse().unwrap();
        assert!(inf.is_inf());
        assert_eq!(inf.to_string(), "inf");
        assert!("0.5".parse::<PNorm>().is_err());
        assert!("two".parse::<PNorm>().is_err());
    }
}
