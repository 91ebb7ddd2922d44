//! Character projection of twisted traces, Newton's identities, local
//! factors, and the full-curve zeta numerator used as an oracle.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclotomic::{CycloElem, PrimeIdealData};
use crate::error::{Error, Result};
use crate::finitefield::{build_extension, class_by_exponent};
use crate::twistcount::{good_prime_test, trace_table, SuperellipticCurve, TraceTable, TwistConvention};

/// The character `τ_k(α) = ζ_m^k`; `k = 0` is trivial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CharacterTau {
    pub m: u32,
    pub k: u32,
}

impl CharacterTau {
    pub fn new(m: u32, k: i64) -> Self {
        CharacterTau {
            m,
            k: k.rem_euclid(m as i64) as u32,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.k == 0
    }

    pub fn conj(&self) -> Self {
        CharacterTau::new(self.m, -(self.k as i64))
    }

    /// `τ_{ks}` for `s` coprime to `m`.
    pub fn galois(&self, s: i64) -> Self {
        CharacterTau::new(self.m, self.k as i64 * s)
    }

    pub fn orbit(&self) -> Vec<CharacterTau> {
        let mut out: Vec<CharacterTau> = Vec::new();
        for s in 1..self.m as i64 {
            if num_integer::gcd(s, self.m as i64) == 1 {
                let t = self.galois(s);
                if !out.contains(&t) {
                    out.push(t);
                }
            }
        }
        out
    }
}

/// Where a local factor came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorSource {
    Computed,
    UserSupplied,
    Default,
}

/// `L_P(C^τ, T) = Σ c_j T^j` over `Z[ζ_m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFactor {
    pub ideal: PrimeIdealData,
    pub k: u32,
    /// `c_0, …, c_{known}`.
    pub coeffs: Vec<CycloElem>,
    /// Highest degree whose coefficient is known (equal to the full degree
    /// when the whole polynomial was computed).
    pub known_degree: usize,
    pub full_degree: usize,
    pub source: FactorSource,
}

impl LocalFactor {
    pub fn is_complete(&self) -> bool {
        self.known_degree >= self.full_degree
    }

    /// `ζ ↦ ζ^s` applied coefficientwise.
    pub fn galois(&self, s: i64) -> LocalFactor {
        LocalFactor {
            ideal: self.ideal.clone(),
            k: CharacterTau::new(self.ideal.m, self.k as i64 * s).k,
            coeffs: self.coeffs.iter().map(|c| c.galois(s)).collect(),
            known_degree: self.known_degree,
            full_degree: self.full_degree,
            source: self.source,
        }
    }
}

/// `t_i^{(τ)} = (1/m) Σ_ℓ ζ^{-kℓ} t[ℓ][i]` (exponent `-kℓi` under the
/// operator-power convention); fails unless every value is integral.
pub fn piece_power_sums(table: &TraceTable, tau: CharacterTau) -> Result<Vec<CycloElem>> {
    let m = tau.m;
    let inv_m = BigRational::new(BigInt::one(), BigInt::from(m));
    let mut out = Vec::with_capacity(table.depth());
    for i in 1..=table.depth() {
        let mut acc = CycloElem::zero(m);
        for l in 0..m {
            let e = table.convention.exponent(l, i, m);
            let w = CycloElem::zeta_pow(m, -(tau.k as i64 * e as i64));
            acc = &acc + &w.scale(&BigRational::from_integer(table.get(l, i).into()));
        }
        let v = acc.scale(&inv_m);
        if !v.is_integral() {
            return Err(Error::NonIntegral);
        }
        out.push(v);
    }
    Ok(out)
}

/// Coefficients `c_0..c_d` of `∏(1 - λ_j T)` from power sums `t_i = Σ λ_j^i`.
pub fn newton_to_poly(power_sums: &[CycloElem], d: usize, m: u32) -> Vec<CycloElem> {
    let d = d.min(power_sums.len());
    let mut e = vec![CycloElem::one(m)];
    for j in 1..=d {
        let mut acc = CycloElem::zero(m);
        for r in 1..=j {
            let term = &e[j - r] * &power_sums[r - 1];
            acc = if r % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        let inv = BigRational::new(BigInt::one(), BigInt::from(j));
        e.push(acc.scale(&inv));
    }
    e.into_iter()
        .enumerate()
        .map(|(j, c)| if j % 2 == 1 { -&c } else { c })
        .collect()
}

/// Newton's identities over `Z`.
pub fn newton_to_poly_int(power_sums: &[BigInt], d: usize) -> Vec<BigInt> {
    let d = d.min(power_sums.len());
    let mut e: Vec<BigRational> = vec![BigRational::one()];
    for j in 1..=d {
        let mut acc = BigRational::zero();
        for r in 1..=j {
            let term = &e[j - r] * BigRational::from_integer(power_sums[r - 1].clone());
            if r % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / BigRational::from_integer(BigInt::from(j)));
    }
    e.into_iter()
        .enumerate()
        .map(|(j, c)| {
            let c = if j % 2 == 1 { -c } else { c };
            debug_assert!(c.is_integer());
            c.to_integer()
        })
        .collect()
}

/// Local factor to degree `min(depth, n - 1)` from a filled trace table.
pub fn factor_from_table(table: &TraceTable, tau: CharacterTau, n: usize) -> Result<LocalFactor> {
    let m = tau.m;
    if tau.is_trivial() {
        return Ok(LocalFactor {
            ideal: table.ideal.clone(),
            k: 0,
            coeffs: vec![CycloElem::one(m)],
            known_degree: 0,
            full_degree: 0,
            source: FactorSource::Computed,
        });
    }
    let full = n - 1;
    let ps = piece_power_sums(table, tau)?;
    let d = ps.len().min(full);
    let coeffs = newton_to_poly(&ps[..d], d, m);
    Ok(LocalFactor {
        ideal: table.ideal.clone(),
        k: tau.k,
        coeffs,
        known_degree: d,
        full_degree: full,
        source: FactorSource::Computed,
    })
}

/// Local factors for every character at once, sharing one trace table.
pub fn local_factors_all(
    c: &SuperellipticCurve,
    ideal: &PrimeIdealData,
    truncation: usize,
    seed: u64,
) -> Result<Vec<LocalFactor>> {
    let depth = truncation.min(c.piece_dimension());
    let table = trace_table(c, ideal, depth, TwistConvention::PerExtension, seed)?;
    (0..c.m())
        .map(|k| factor_from_table(&table, CharacterTau::new(c.m(), k as i64), c.degree()))
        .collect()
}

/// `L_P(C^{τ}, T)` up to degree `truncation`.
pub fn local_factor(
    c: &SuperellipticCurve,
    ideal: &PrimeIdealData,
    tau: CharacterTau,
    truncation: usize,
    seed: u64,
) -> Result<LocalFactor> {
    if !good_prime_test(c, ideal) {
        return Err(Error::BadPrime { p: ideal.p });
    }
    if tau.is_trivial() {
        let table = trace_table(c, ideal, 0, TwistConvention::PerExtension, seed)?;
        return factor_from_table(&table, tau, c.degree());
    }
    let depth = truncation.min(c.piece_dimension());
    let table = trace_table(c, ideal, depth, TwistConvention::PerExtension, seed)?;
    factor_from_table(&table, tau, c.degree())
}

/// Upper bound on `q` for [`full_curve_numerator`].
pub const ORACLE_MAX_Q: u64 = 100;

/// Zeta numerator of `C mod P` from untwisted counts over `F_{q^i}`,
/// `i ≤ g`, completed by `c_{2g-j} = q^{g-j} c_j`.
///
/// Point counts use Horner evaluation and exponentiation, independently of
/// the class-table machinery.
pub fn full_curve_numerator(c: &SuperellipticCurve, ideal: &PrimeIdealData, seed: u64) -> Result<Vec<BigInt>> {
    if ideal.q > ORACLE_MAX_Q {
        return Err(Error::OracleGuard { q: ideal.q });
    }
    if !good_prime_test(c, ideal) {
        return Err(Error::BadPrime { p: ideal.p });
    }
    let g = c.genus();
    let m = c.m();
    let mut sums = Vec::with_capacity(g);
    for i in 1..=g {
        let ext = build_extension(ideal, i, seed ^ 0x5eed)?;
        let fld = &ext.field;
        let coeffs: Vec<_> = c
            .poly()
            .coeffs()
            .iter()
            .map(|a| Ok(ext.embed_coords(a.reduce_coords(ideal.p)?)))
            .collect::<Result<_>>()?;
        let size = fld.size();
        let mut count: u128 = 1;
        for j in 0..size {
            let v = fld.eval_poly(&coeffs, fld.element_at(j));
            count += match class_by_exponent(fld, m, ext.zeta, v) {
                crate::finitefield::ZERO_CLASS => 1,
                0 => m as u128,
                _ => 0,
            };
        }
        sums.push(BigInt::from(1 + size as i128 - count as i128));
    }
    let low = newton_to_poly_int(&sums, g);
    let q = BigInt::from(ideal.q);
    let mut out = vec![BigInt::zero(); 2 * g + 1];
    for j in 0..=g {
        out[j] = low[j].clone();
        out[2 * g - j] = &low[j] * num_traits::pow(q.clone(), g - j);
    }
    Ok(out)
}

/// Product of polynomials over `Q(ζ_m)` given by ascending coefficients.
pub fn poly_mul(a: &[CycloElem], b: &[CycloElem], m: u32) -> Vec<CycloElem> {
    let mut out = vec![CycloElem::zero(m); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// Both sides of `∏_k L_P(C^{τ_k}, T) = P_C(T)` at a good ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationCheck {
    pub product: Vec<CycloElem>,
    pub numerator: Vec<CycloElem>,
}

impl FactorizationCheck {
    pub fn holds(&self) -> bool {
        self.product == self.numerator
    }
}

pub fn factorization_check(c: &SuperellipticCurve, ideal: &PrimeIdealData, seed: u64) -> Result<FactorizationCheck> {
    let m = c.m();
    let numerator = full_curve_numerator(c, ideal, seed)?
        .into_iter()
        .map(|x| CycloElem::from_rational(m, BigRational::from_integer(x)))
        .collect();
    let mut product = vec![CycloElem::one(m)];
    for f in local_factors_all(c, ideal, c.piece_dimension(), seed)? {
        product = poly_mul(&product, &f.coeffs, m);
    }
    Ok(FactorizationCheck { product, numerator })
}
