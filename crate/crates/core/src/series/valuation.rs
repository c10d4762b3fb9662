use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{is_prime, padic_valuation, Scalar};

/// The absolute value placed on the rationals: `p`-adic or trivial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    PAdic(u64),
    Trivial,
}

impl Valuation {
    pub fn padic(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Valuation::PAdic(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// `None` is `+∞`, the valuation of zero.
    pub fn of(&self, q: &Scalar) -> Option<i64> {
        match self {
            Valuation::PAdic(p) => padic_valuation(q, *p),
            Valuation::Trivial => (!q.is_zero()).then_some(0),
        }
    }

    /// `log |q|` in valuation units, `None` for `−∞`.
    pub fn log_abs(&self, q: &Scalar) -> Option<Scalar> {
        self.of(q).map(|v| Scalar::from_integer((-v).into()))
    }

    /// Natural logarithm of the unit in which log-radii are measured.
    pub fn ln_unit(&self) -> f64 {
        match self {
            Valuation::PAdic(p) => (*p as f64).ln(),
            Valuation::Trivial => 1.0,
        }
    }

    pub fn prime(&self) -> Option<u64> {
        match self {
            Valuation::PAdic(p) => Some(*p),
            Valuation::Trivial => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::PAdic(p) => write!(f, "{p}-adic"),
            Valuation::Trivial => write!(f, "trivial"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn trivial_is_zero_on_units() {
        assert_eq!(Valuation::Trivial.of(&ratio(7, 9)), Some(0));
        assert_eq!(Valuation::Trivial.of(&int(0)), None);
    }

    #[test]
    fn rejects_composite() {
        assert_eq!(Valuation::padic(4), Err(Error::NotPrime(4)));
        assert!(Valuation::padic(7).is_ok());
    }
}
