//! Quantum-number bookkeeping.
//!
//! Ladder labels are exact rationals: the Coulomb hierarchy steps by halves
//! (n, ℓ) → (n±1/2, ℓ±1/2), so floating-point labels would accumulate drift
//! along longer walks and break exact lattice membership tests. All label
//! arithmetic therefore runs over [`Q`] = `Ratio<i64>` and is converted to
//! `f64` only at the boundary where operator coefficients are evaluated.

use crate::error::{LadderError, Result};
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

/// Exact rational quantum number.
pub type Q = Rational64;

/// Shorthand for an integer label.
#[must_use]
pub fn qint(n: i64) -> Q {
    Q::from_integer(n)
}

/// Shorthand for the rational `num/den`.
///
/// # Panics
/// Panics if `den == 0`.
#[must_use]
pub fn qr(num: i64, den: i64) -> Q {
    Q::new(num, den)
}

/// Exact-to-float conversion used when labels enter operator coefficients.
#[must_use]
pub fn qf(v: Q) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

/// Canonical display form: integers print bare (`2`), halves as `3/2`.
#[must_use]
pub fn fmt_q(v: Q) -> String {
    v.to_string()
}

/// Parse a label given as an integer (`2`, `-1`) or a fraction (`3/2`).
pub fn parse_q(s: &str) -> Result<Q> {
    Q::from_str(s.trim())
        .map_err(|_| LadderError::Domain(format!("cannot parse quantum number {s:?}")))
}

/// True when the label is an integer.
#[must_use]
pub fn is_integer(v: Q) -> bool {
    v.denom().is_one()
}

/// True when the label is an odd multiple of 1/2.
#[must_use]
pub fn is_half_integer(v: Q) -> bool {
    *v.denom() == 2
}

/// A point on the (n, ℓ) label lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuantumNumbers {
    /// Principal label n (ties to the energy).
    pub n: Q,
    /// Angular/shape label ℓ (ties to the potential channel).
    pub l: Q,
}

impl QuantumNumbers {
    /// Bundle two labels into a lattice point.
    #[must_use]
    pub fn new(n: Q, l: Q) -> Self {
        QuantumNumbers { n, l }
    }

    /// Integer-labelled point.
    #[must_use]
    pub fn ints(n: i64, l: i64) -> Self {
        QuantumNumbers::new(qint(n), qint(l))
    }

    /// True when both labels are integers.
    #[must_use]
    pub fn is_integral(&self) -> bool {
        is_integer(self.n) && is_integer(self.l)
    }
}

impl fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, l={})", fmt_q(self.n), fmt_q(self.l))
    }
}

/// Identifies one of the three hierarchies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelId {
    Oscillator,
    Morse,
    Coulomb,
}

impl ModelId {
    /// All models, in the canonical reporting order.
    pub const ALL: [ModelId; 3] = [ModelId::Oscillator, ModelId::Morse, ModelId::Coulomb];

    /// Lower-case name used in report JSON, check ids and the CLI.
    #[must_use]
    pub fn name(&self) -> &'static str {
        match self {
            ModelId::Oscillator => "oscillator",
            ModelId::Morse => "morse",
            ModelId::Coulomb => "coulomb",
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelId {
    type Err = LadderError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "oscillator" | "osc" => Ok(ModelId::Oscillator),
            "morse" => Ok(ModelId::Morse),
            "coulomb" => Ok(ModelId::Coulomb),
            other => Err(LadderError::Config(format!(
                "unknown model {other:?} (expected oscillator, morse or coulomb)"
            ))),
        }
    }
}

/// Validate an operator-pair index (the hierarchies carry exactly two
/// intertwining pairs, indexed 1 and 2).
pub fn check_pair(i: u8) -> Result<()> {
    if i == 1 || i == 2 {
        Ok(())
    } else {
        Err(LadderError::Domain(format!(
            "pair index must be 1 or 2, got {i}"
        )))
    }
}

/// Sign helper (-1)^i for the commutator bookkeeping tables.
#[must_use]
pub fn pair_sign(i: u8) -> Q {
    if i % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Absolute value for rationals (used when channels are reflected, ℓ → |ℓ|).
#[must_use]
pub fn qabs(v: Q) -> Q {
    v.abs()
}

/// Zero test that tolerates the exact rational representation.
#[must_use]
pub fn qzero(v: Q) -> bool {
    v.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_display_matches_convention() {
        assert_eq!(fmt_q(qint(2)), "2");
        assert_eq!(fmt_q(qr(3, 2)), "3/2");
        assert_eq!(fmt_q(qr(-1, 2)), "-1/2");
        assert_eq!(QuantumNumbers::new(qr(3, 2), qr(1, 2)).to_string(), "(n=3/2, l=1/2)");
    }

    #[test]
    fn rational_parse_round_trips() {
        for s in ["2", "-1", "3/2", "-5/2", "0"] {
            let v = parse_q(s).unwrap();
            assert_eq!(fmt_q(v), s);
        }
        assert!(parse_q("x").is_err());
        assert!(parse_q("1/0").is_err());
    }

    #[test]
    fn half_integer_predicates() {
        assert!(is_integer(qint(3)));
        assert!(!is_integer(qr(3, 2)));
        assert!(is_half_integer(qr(3, 2)));
        assert!(!is_half_integer(qint(3)));
    }

    #[test]
    fn model_names_parse() {
        assert_eq!("oscillator".parse::<ModelId>().unwrap(), ModelId::Oscillator);
        assert_eq!("osc".parse::<ModelId>().unwrap(), ModelId::Oscillator);
        assert_eq!("Morse".parse::<ModelId>().unwrap(), ModelId::Morse);
        assert_eq!("coulomb".parse::<ModelId>().unwrap(), ModelId::Coulomb);
        assert!("hydrogen".parse::<ModelId>().is_err());
    }

    #[test]
    fn pair_index_validation() {
        assert!(check_pair(1).is_ok());
        assert!(check_pair(2).is_ok());
        assert!(check_pair(0).is_err());
        assert!(check_pair(3).is_err());
    }
}
