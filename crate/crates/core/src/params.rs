//! Model parameters: dimension, singularity exponent, derived exponents.

use crate::error::{Error, Result};

/// Sign of the nonlinear term: focusing is a source, absorbing a sink.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Sign {
    Focusing,
    Absorbing,
}

/// Dimension d ≥ 3, singularity exponent γ ∈ [0, 2), and nonlinearity sign.
///
/// The critical exponents are recomputed from (d, γ) on demand and never
/// stored, so they cannot drift out of sync.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelParams {
    pub d: u32,
    pub gamma: f64,
    pub sign: Sign,
}

/// Critical nonlinearity power 2(d − γ)/(d − 2); always > 2 on the valid range.
pub fn critical_exponent(d: u32, gamma: f64) -> Result<f64> {
    if d < 3 {
        return Err(Error::Domain("dimension must satisfy d >= 3"));
    }
    if !(0.0..2.0).contains(&gamma) {
        return Err(Error::Domain("singularity exponent must satisfy 0 <= gamma < 2"));
    }
    Ok(2.0 * (d as f64 - gamma) / (d as f64 - 2.0))
}

impl ModelParams {
    pub fn new(d: u32, gamma: f64, sign: Sign) -> Result<Self> {
        critical_exponent(d, gamma)?;
        Ok(Self { d, gamma, sign })
    }

    /// Nonlinearity power p = 2(d − γ)/(d − 2).
    pub fn critical_power(&self) -> f64 {
        2.0 * (self.d as f64 - self.gamma) / (self.d as f64 - 2.0)
    }

    /// Critical Lebesgue exponent q_c = 2d/(d − 2).
    pub fn critical_lebesgue(&self) -> f64 {
        2.0 * self.d as f64 / (self.d as f64 - 2.0)
    }

    pub fn is_focusing(&self) -> bool {
        self.sign == Sign::Focusing
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_exponent_examples() {
        assert_eq!(critical_exponent(3, 1.0).unwrap(), 4.0);
        assert_eq!(critical_exponent(3, 0.0).unwrap(), 6.0);
        assert_eq!(critical_exponent(4, 0.0).unwrap(), 4.0);
    }

    #[test]
    fn critical_exponent_rejects_bad_domain() {
        assert!(critical_exponent(2, 0.5).is_err());
        assert!(critical_exponent(3, 2.0).is_err());
        assert!(critical_exponent(3, -0.1).is_err());
    }

    #[test]
    fn exponent_exceeds_two_and_matches_lebesgue_at_zero_gamma() {
        for d in 3..8 {
            for k in 0..20 {
                let gamma = 0.1 * k as f64;
                if gamma >= 2.0 {
                    break;
                }
                let p = critical_exponent(d, gamma).unwrap();
                assert!(p > 2.0, "p = {p} at d={d}, gamma={gamma}");
            }
            let params = ModelParams::new(d, 0.0, Sign::Focusing).unwrap();
            assert_eq!(params.critical_power(), params.critical_lebesgue());
        }
    }
}
