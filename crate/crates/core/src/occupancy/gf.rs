//! Coefficient extraction from the level generating function
//! `((1 − y^{s+1}) / (1 − y))^N`, by exact truncated polynomial arithmetic.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{BigInt, BigRat};

/// Polynomial in `y` with big-integer coefficients, truncated above a fixed
/// degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncPoly {
    coeffs: Vec<BigInt>,
}

impl TruncPoly {
    pub fn one(max_degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); max_degree + 1];
        coeffs[0] = BigInt::one();
        Self { coeffs }
    }

    /// `1 + y + … + y^k`, truncated.
    pub fn geometric(k: usize, max_degree: usize) -> Self {
        let coeffs = (0..=max_degree)
            .map(|d| if d <= k { BigInt::one() } else { BigInt::zero() })
            .collect();
        Self { coeffs }
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, degree: usize) -> BigInt {
        self.coeffs.get(degree).cloned().unwrap_or_default()
    }

    pub fn mul(&self, other: &TruncPoly) -> TruncPoly {
        let cap = self.max_degree().min(other.max_degree());
        let mut out = vec![BigInt::zero(); cap + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(cap + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(cap + 1 - i) {
                out[i + j] += a * b;
            }
        }
        TruncPoly { coeffs: out }
    }

    pub fn pow(&self, mut exp: u64) -> TruncPoly {
        let mut base = self.clone();
        let mut acc = TruncPoly::one(self.max_degree());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

fn level_gf_power(power: u64, s: u64) -> TruncPoly {
    TruncPoly::geometric(s as usize, s as usize).pow(power)
}

/// `[y^s] ((1 − y^{s+1})/(1 − y))^N`.
pub fn gf_total_configurations(n: u64, s: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::ParticleCount { n, min: 1 });
    }
    Ok(level_gf_power(n, s).coeff(s as usize))
}

/// `[y^s] (N / C_I) · y^κ · ((1 − y^{s+1})/(1 − y))^{N−1}`.
pub fn gf_mean_occupancy(n: u64, s: u64, kappa: u64) -> Result<BigRat> {
    if n == 0 {
        return Err(Error::ParticleCount { n, min: 1 });
    }
    if kappa > s {
        return Err(Error::LevelOutOfRange { level: kappa, s });
    }
    let total = gf_total_configurations(n, s)?;
    let weight = level_gf_power(n - 1, s).coeff((s - kappa) as usize);
    Ok(BigRat::new(BigInt::from(n) * weight, total))
}
