//! Complex log-gamma and gamma-factor products `∏ Γ(λ_j s + μ_j) · π^{-c s}`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::Complex64;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k - 1)) for k = 1..10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// `log Γ(z)` on some branch (exponentiating gives `Γ(z)` exactly up to
/// rounding). Fails at the poles `z ∈ {0, -1, -2, …}`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return Err(Error::GammaPole);
    }
    if z.re < -5.0 {
        // Reflection: Γ(z)Γ(1-z) = π / sin(πz).
        let s = (Complex64::new(PI, 0.0) * z).sin();
        return Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z)?);
    }
    // Shift until |z| is large enough for the asymptotic series.
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 16.0 || w.re < 8.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - shift)
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(ln_gamma(z)?.exp())
}

/// `γ_0(s) = ∏_j Γ(λ_j s + μ_j) · π^{-c s}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaFactor {
    pub factors: Vec<(f64, f64)>,
    pub pi_exponent: f64,
}

impl GammaFactor {
    /// `(Γ(s/2) Γ((s+1)/2))^h · π^{-h s}`.
    pub fn pairs(h: usize) -> Self {
        let mut factors = Vec::with_capacity(2 * h);
        for _ in 0..h {
            factors.push((0.5, 0.0));
            factors.push((0.5, 0.5));
        }
        GammaFactor {
            factors,
            pi_exponent: h as f64,
        }
    }

    /// A single `Γ(s)`.
    pub fn single() -> Self {
        GammaFactor {
            factors: vec![(1.0, 0.0)],
            pi_exponent: 0.0,
        }
    }

    pub fn ln_value(&self, s: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0) - s * (self.pi_exponent * PI.ln());
        for &(l, mu) in &self.factors {
            acc += ln_gamma(s * l + mu)?;
        }
        Ok(acc)
    }

    pub fn value(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.ln_value(s)?.exp())
    }

    /// Real part of the rightmost pole.
    pub fn rightmost_pole(&self) -> f64 {
        self.factors
            .iter()
            .map(|&(l, mu)| -mu / l)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Sum of `λ_j`, which governs the vertical decay `exp(-π/2 Σλ |t|)`.
    pub fn total_lambda(&self) -> f64 {
        self.factors.iter().map(|f| f.0).sum()
    }
}
