//! Dense polynomials over `Q(ζ_m)`.

use alloc::vec::Vec;

use crate::cyclotomic::CycloElem;
use crate::error::{Error, Result};

/// Coefficients in ascending order, trailing zeros stripped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloPoly {
    m: u32,
    coeffs: Vec<CycloElem>,
}

impl CycloPoly {
    pub fn new(m: u32, mut coeffs: Vec<CycloElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        CycloPoly { m, coeffs }
    }

    pub fn index(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[CycloElem] {
        &self.coeffs
    }

    /// Degree; the zero polynomial has degree `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&CycloElem> {
        self.coeffs.last()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| &CycloElem::from_int(self.m, i as i64) * a)
            .collect();
        CycloPoly::new(self.m, c)
    }

    pub fn eval(&self, x: &CycloElem) -> CycloElem {
        let mut acc = CycloElem::zero(self.m);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Remainder of division by a nonzero polynomial.
    pub fn rem(&self, d: &CycloPoly) -> Result<CycloPoly> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.leading().unwrap().inv()?;
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let factor = &r[k] * &lead_inv;
            if !factor.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let idx = k - dd + j;
                    r[idx] = &r[idx] - &(&factor * dc);
                }
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Ok(CycloPoly::new(self.m, r))
    }

    /// Discriminant `(-1)^{n(n-1)/2} Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> Result<CycloElem> {
        let n = self.degree().ok_or(Error::Singular)?;
        if n == 0 {
            return Err(Error::Singular);
        }
        let res = resultant(self, &self.derivative())?;
        let mut d = res.div(self.leading().unwrap())?;
        if (n * (n - 1) / 2) % 2 == 1 {
            d = -&d;
        }
        Ok(d)
    }
}

/// Resultant over the field by the Euclidean algorithm.
pub fn resultant(a: &CycloPoly, b: &CycloPoly) -> Result<CycloElem> {
    let m = a.m;
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return Ok(CycloElem::zero(m));
    };
    if db == 0 {
        let mut acc = CycloElem::one(m);
        for _ in 0..da {
            acc = &acc * b.leading().unwrap();
        }
        return Ok(acc);
    }
    if da < db {
        let r = resultant(b, a)?;
        return Ok(if (da * db) % 2 == 1 { -&r } else { r });
    }
    // Res(a, b) = (-1)^{da db} lc(b)^{da - dr} Res(b, a mod b)
    let r = a.rem(b)?;
    let Some(dr) = r.degree() else {
        return Ok(CycloElem::zero(m));
    };
    let mut acc = resultant(b, &r)?;
    for _ in 0..(da - dr) {
        acc = &acc * b.leading().unwrap();
    }
    if (da * db) % 2 == 1 {
        acc = -&acc;
    }
    Ok(acc)
}
