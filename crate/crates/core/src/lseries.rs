//! Dirichlet series of a piece `Res_{K/Q} C^τ`, its completed gamma factor,
//! and evaluation through the approximate functional equation.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::ToPrimitive;

#[allow(unused_imports)]
use num_traits::Float;

use crate::cyclotomic::{is_prime, phi, prime_factors, split_prime, ComplexEmbedding, CycloElem, CycloInt};
use crate::error::{Error, Result};
use crate::euler::{factor_from_table, CharacterTau, FactorSource, LocalFactor};
use crate::gamma::GammaFactor;
use crate::twistcount::{good_prime_test, special_fibre_table, trace_table, SuperellipticCurve, TwistConvention};
use crate::Complex64;

/// `N_{K/Q}(𝒩) · |Δ_K|^{mult}`.
pub fn conductor_over_q(norm: u128, m: u32, mult: u32) -> u128 {
    let disc: u128 = match m {
        3 => 3,
        4 => 4,
        _ => 1,
    };
    norm * disc.pow(mult)
}

/// Number of `Γ(s/2)Γ((s+1)/2)` pairs, `(n-1)·φ(m)/2`.
pub fn gamma_pairs(m: u32, n: usize) -> usize {
    (n - 1) * phi(m) / 2
}

/// Rational primes at which some prime ideal fails the good-reduction test.
pub fn bad_primes(c: &SuperellipticCurve) -> Vec<u64> {
    let mut out: Vec<u64> = prime_factors(c.m() as u64);
    let mut add = |x: &CycloElem| {
        let nr = x.norm();
        for part in [nr.numer(), nr.denom()] {
            if let Some(v) = part.to_u64() {
                out.extend(prime_factors(v));
            }
        }
        for r in x.coeffs() {
            if let Some(v) = r.denom().to_u64() {
                out.extend(prime_factors(v));
            }
        }
    };
    add(c.discriminant());
    add(c.poly().leading().unwrap());
    for a in c.poly().coeffs() {
        for r in a.coeffs() {
            if let Some(v) = r.denom().to_u64() {
                out.extend(prime_factors(v));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Local factor used at a bad rational prime, in `T = p^{-s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BadFactor {
    /// Constant `1`.
    Trivial,
    /// Factor for the bad ideals above `p`, ascending coefficients.
    Polynomial(Vec<CycloElem>),
    /// Twisted point counts on the singular reduction.
    SpecialFibre,
}

/// `∏_{P | p} L_P(C^τ, T^{f_P})` truncated at `T^{e_max}`.
#[derive(Clone, Debug)]
pub struct PrimeLevelFactor {
    pub p: u64,
    pub coeffs: Vec<CycloInt>,
    pub source: FactorSource,
    pub ideal_factors: Vec<LocalFactor>,
}

fn to_int(a: &CycloElem) -> Result<CycloInt> {
    CycloInt::from_elem(a).ok_or(Error::NonIntegral)
}

fn max_exponent(q: u64, n: u64) -> usize {
    let mut e = 0;
    let mut x = 1u128;
    while x * q as u128 <= n as u128 {
        x *= q as u128;
        e += 1;
    }
    e
}

fn poly_mul_int(a: &[CycloInt], b: &[CycloInt], m: u32, len: usize) -> Vec<CycloInt> {
    let mut out = vec![CycloInt::ZERO; (a.len() + b.len() - 1).min(len)];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < out.len() {
                out[i + j] = out[i + j].add(x.mul(*y, m));
            }
        }
    }
    out
}

/// Coefficients of `1 / P(T)` up to `T^{len-1}`; `P(0) = 1`.
pub fn inverse_series(p: &[CycloInt], len: usize, m: u32) -> Vec<CycloInt> {
    let mut out = vec![CycloInt::ZERO; len];
    if len == 0 {
        return out;
    }
    out[0] = CycloInt::ONE;
    for e in 1..len {
        let mut acc = CycloInt::ZERO;
        for j in 1..=e.min(p.len().saturating_sub(1)) {
            acc = acc.add(p[j].mul(out[e - j], m));
        }
        out[e] = CycloInt::ZERO.sub(acc);
    }
    out
}

/// Local factor at the rational prime `p`, known up to `T^{e}` with `p^e ≤ n_max`.
pub fn prime_level_factor(
    c: &SuperellipticCurve,
    tau: CharacterTau,
    p: u64,
    n_max: u64,
    bad: &BTreeMap<u64, BadFactor>,
    seed: u64,
) -> Result<PrimeLevelFactor> {
    let m = c.m();
    let e_max = max_exponent(p, n_max);
    let ideals = split_prime(p, m)?;
    let mut poly = vec![CycloInt::ONE];
    let mut source = FactorSource::Computed;
    let mut ideal_factors = Vec::new();
    let mut bad_ideals = Vec::new();
    let n = c.degree();
    for id in &ideals {
        if !good_prime_test(c, id) {
            bad_ideals.push(id.clone());
            continue;
        }
        let depth = max_exponent(id.q, n_max).min(n - 1);
        let lf = if tau.is_trivial() {
            factor_from_table(&trace_table(c, id, 0, TwistConvention::PerExtension, seed)?, tau, n)?
        } else {
            factor_from_table(&trace_table(c, id, depth, TwistConvention::PerExtension, seed)?, tau, n)?
        };
        poly = mul_substituted(&poly, &lf.coeffs, id.f as usize, m, e_max + 1)?;
        ideal_factors.push(lf);
    }
    if !bad_ideals.is_empty() {
        match bad.get(&p) {
            None => return Err(Error::MissingBadFactor { p }),
            Some(BadFactor::Trivial) => source = FactorSource::Default,
            Some(BadFactor::Polynomial(cs)) => {
                source = FactorSource::UserSupplied;
                let ints = cs.iter().map(to_int).collect::<Result<Vec<_>>>()?;
                if ints.first() != Some(&CycloInt::ONE) {
                    return Err(Error::InvalidParams("bad factor must have constant term 1".into()));
                }
                poly = poly_mul_int(&poly, &ints, m, e_max + 1);
            }
            Some(BadFactor::SpecialFibre) => {
                source = FactorSource::Computed;
                for id in &bad_ideals {
                    let depth = max_exponent(id.q, n_max).min(n - 1);
                    let d = if tau.is_trivial() { 0 } else { depth };
                    let mut lf = factor_from_table(&special_fibre_table(c, id, d, seed)?, tau, n)?;
                    while lf.coeffs.len() > 1 && lf.coeffs.last().is_some_and(|x| x.is_zero()) {
                        lf.coeffs.pop();
                    }
                    poly = mul_substituted(&poly, &lf.coeffs, id.f as usize, m, e_max + 1)?;
                    ideal_factors.push(lf);
                }
            }
        }
    }
    poly.resize(e_max + 1, CycloInt::ZERO);
    Ok(PrimeLevelFactor {
        p,
        coeffs: poly,
        source,
        ideal_factors,
    })
}

fn mul_substituted(acc: &[CycloInt], f: &[CycloElem], step: usize, m: u32, len: usize) -> Result<Vec<CycloInt>> {
    let mut sub = vec![CycloInt::ZERO; ((f.len() - 1) * step + 1).min(len.max(1))];
    for (j, a) in f.iter().enumerate() {
        if j * step < sub.len() {
            sub[j * step] = to_int(a)?;
        }
    }
    Ok(poly_mul_int(acc, &sub, m, len))
}

/// Dirichlet series of one piece with its conductor and gamma factor.
#[derive(Clone, Debug)]
pub struct PieceLSeries {
    pub m: u32,
    pub k: u32,
    /// `exact[n]` for `1 ≤ n ≤ N`; index 0 is unused.
    pub exact: Vec<CycloInt>,
    /// Embedded coefficients, same indexing.
    pub a: Vec<Complex64>,
    pub conductor: u128,
    pub gamma: GammaFactor,
    pub sign: Option<Complex64>,
    pub bad_factors: BTreeMap<u64, BadFactor>,
    pub sources: BTreeMap<u64, FactorSource>,
}

impl PieceLSeries {
    /// Series from prime-level factors for every prime `≤ n_max`.
    pub fn from_prime_factors(
        m: u32,
        k: u32,
        n_max: usize,
        factors: &[PrimeLevelFactor],
        conductor: u128,
        gamma: GammaFactor,
    ) -> Result<Self> {
        let mut pp: BTreeMap<u64, Vec<CycloInt>> = BTreeMap::new();
        let mut sources = BTreeMap::new();
        for f in factors {
            let e = max_exponent(f.p, n_max as u64);
            pp.insert(f.p, inverse_series(&f.coeffs, e + 1, m));
            if f.source != FactorSource::Computed {
                sources.insert(f.p, f.source);
            }
        }
        let mut spf = vec![0u32; n_max + 1];
        for i in 2..=n_max {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n_max {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        let mut exact = vec![CycloInt::ZERO; n_max + 1];
        if n_max >= 1 {
            exact[1] = CycloInt::ONE;
        }
        for n in 2..=n_max {
            let p = spf[n] as usize;
            let mut rest = n;
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            let local = pp
                .get(&(p as u64))
                .ok_or(Error::InvalidParams(alloc::format!("no factor at {p}")))?;
            exact[n] = exact[rest].mul(local[e], m);
        }
        let emb = ComplexEmbedding::canonical(m);
        let a = exact.iter().map(|x| x.embed(&emb)).collect();
        Ok(PieceLSeries {
            m,
            k,
            exact,
            a,
            conductor,
            gamma,
            sign: None,
            bad_factors: BTreeMap::new(),
            sources,
        })
    }

    /// Series with the given embedded coefficients (`a[0]` unused).
    pub fn from_embedded(a: Vec<Complex64>, conductor: u128, gamma: GammaFactor) -> Self {
        PieceLSeries {
            m: 1,
            k: 0,
            exact: Vec::new(),
            a,
            conductor,
            gamma,
            sign: None,
            bad_factors: BTreeMap::new(),
            sources: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.a.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The same series with every coefficient conjugated (the piece `τ_{-k}`).
    pub fn conjugate(&self) -> Self {
        let mut out = self.clone();
        out.k = CharacterTau::new(self.m.max(1), -(self.k as i64)).k;
        out.a = self.a.iter().map(|x| x.conj()).collect();
        if self.m > 2 {
            out.exact = self.exact.iter().map(|x| CycloInt::from_elem(&x.to_elem(self.m).conj()).unwrap()).collect();
        }
        out.sign = self.sign.map(|w| w.conj());
        out
    }

    fn scale(&self) -> f64 {
        (self.conductor as f64).sqrt()
    }

    /// `L_∞(s) = (N/π^{2h})^{s/2} (Γ(s/2)Γ((s+1)/2))^h`.
    pub fn gamma_complete(&self, s: Complex64) -> Result<Complex64> {
        Ok((self.gamma.ln_value(s)? + s * self.scale().ln()).exp())
    }

    /// `Λ_T(s) = A + w B` for the split point `T`.
    fn lambda_parts(&self, s: Complex64, t_split: f64, params: &EvalParams) -> Result<(Complex64, Complex64)> {
        let sc = self.scale();
        let one = Complex64::new(2.0, 0.0) - s;
        let ks = Kernel::new(&self.gamma, s, params)?;
        let kd = Kernel::new(&self.gamma, one, params)?;
        let mut a_part = Complex64::new(0.0, 0.0);
        let mut b_part = Complex64::new(0.0, 0.0);
        let nn = self.len();
        let (mut a_done, mut b_done) = (false, false);
        for n in 1..=nn {
            let ln_n = (n as f64).ln();
            let an = self.a[n];
            if !a_done {
                let g = ks.eval(n as f64 / (sc * t_split));
                if g.norm() < ks.negligible && n as f64 > sc * t_split {
                    a_done = true;
                } else if an.norm() != 0.0 {
                    a_part += an * g * (-s * ln_n).exp();
                }
            }
            if !b_done {
                let g = kd.eval(n as f64 * t_split / sc);
                if g.norm() < kd.negligible && n as f64 * t_split > sc {
                    b_done = true;
                } else if an.norm() != 0.0 {
                    b_part += an.conj() * g * (-one * ln_n).exp();
                }
            }
            if a_done && b_done {
                break;
            }
        }
        let sa = (s * sc.ln()).exp();
        let sb = (one * sc.ln()).exp();
        Ok((a_part * sa, b_part * sb))
    }

    fn sign_or_solve(&self, params: &EvalParams) -> Result<Complex64> {
        match self.sign {
            Some(w) => Ok(w),
            None => solve_sign(self, params),
        }
    }
}

/// Evaluation settings for the Mellin kernel and the series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalParams {
    pub digits: u32,
    /// Abscissa `c` of the right contour.
    pub abscissa: f64,
    pub step: f64,
    /// Step on the left contour used for small arguments.
    pub left_step: f64,
    /// Kernel nodes stop once `|γ(s+z)/z|` falls below this fraction of its peak.
    pub height_cutoff: f64,
    /// Second split point for the residual.
    pub t_split: f64,
    /// Exponent `e` in the coefficient size `|a_n| ≤ n^e` assumed by the
    /// length guard of the evaluators.
    pub coeff_growth: f64,
}

impl Default for EvalParams {
    fn default() -> Self {
        EvalParams {
            digits: 10,
            abscissa: 1.5,
            step: 0.2,
            left_step: 0.04,
            height_cutoff: 1e-24,
            t_split: 1.4,
            coeff_growth: 0.5,
        }
    }
}

impl EvalParams {
    pub fn with_digits(digits: u32) -> Self {
        EvalParams {
            digits,
            ..Default::default()
        }
    }
}

struct Nodes {
    c: f64,
    step: f64,
    /// Weights for `y = 0, ±step, ±2 step, …` as `(w_k, w_{-k})`.
    w: Vec<(Complex64, Complex64)>,
}

impl Nodes {
    fn build(gamma: &GammaFactor, s: Complex64, c: f64, step: f64, cutoff: f64) -> Result<Nodes> {
        let f = |y: f64| -> Result<Complex64> {
            let z = Complex64::new(c, y);
            Ok((gamma.ln_value(s + z)?).exp() / z * (step / (2.0 * PI)))
        };
        let w0 = f(0.0)?;
        let peak = w0.norm();
        let mut w = vec![(w0, Complex64::new(0.0, 0.0))];
        let mut k = 1;
        loop {
            let y = k as f64 * step;
            let (p, m) = (f(y)?, f(-y)?);
            w.push((p, m));
            if p.norm().max(m.norm()) < cutoff * peak || k > 200_000 {
                break;
            }
            k += 1;
        }
        Ok(Nodes { c, step, w })
    }

    fn eval(&self, x: f64) -> Complex64 {
        let lx = x.ln();
        let rot = Complex64::new(0.0, -self.step * lx).exp();
        let mut cur = Complex64::new(1.0, 0.0);
        let mut acc = self.w[0].0;
        for &(p, m) in &self.w[1..] {
            cur *= rot;
            acc += p * cur + m * cur.conj();
        }
        acc * (-self.c * lx).exp()
    }
}

/// `G_s(x) = (1/2πi) ∫ γ_0(s+z) x^{-z} dz/z` on vertical lines.
pub struct Kernel {
    right: Nodes,
    left: Option<Nodes>,
    residue: Complex64,
    negligible: f64,
}

impl Kernel {
    pub fn new(gamma: &GammaFactor, s: Complex64, params: &EvalParams) -> Result<Kernel> {
        let pole = gamma.rightmost_pole();
        if params.abscissa + s.re <= pole || params.abscissa <= 0.0 {
            return Err(Error::InvalidParams("contour not right of the gamma poles".into()));
        }
        let right = Nodes::build(gamma, s, params.abscissa, params.step, params.height_cutoff)?;
        let gap = s.re - pole;
        let left = if gap > 0.05 {
            Some(Nodes::build(gamma, s, -gap / 2.0, params.left_step, params.height_cutoff)?)
        } else {
            None
        };
        let residue = gamma.value(s)?;
        let negligible = 1e-8 * 10f64.powi(-(params.digits as i32)) * residue.norm().max(1e-300);
        Ok(Kernel {
            right,
            left,
            residue,
            negligible,
        })
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        match &self.left {
            Some(l) if x < 1.0 => self.residue + l.eval(x),
            _ => self.right.eval(x),
        }
    }
}

/// `G_s(x)` for a single argument.
pub fn mellin_kernel(gamma: &GammaFactor, s: Complex64, x: f64, params: &EvalParams) -> Result<Complex64> {
    if x <= 0.0 {
        return Err(Error::InvalidParams("kernel argument must be positive".into()));
    }
    Ok(Kernel::new(gamma, s, params)?.eval(x))
}

fn check_length(series: &PieceLSeries, params: &EvalParams) -> Result<()> {
    check_length_at(series, 1.0, params)
}

/// The first sum at split point `T` runs over `n / (√N_Q T)`.
fn check_length_at(series: &PieceLSeries, t_split: f64, params: &EvalParams) -> Result<()> {
    let sc = series.scale() * t_split.max(1.0);
    let need = lcf_at_scale(sc, params.digits, params.coeff_growth - 1.0, 2, &series.gamma, params)?;
    if series.len() < need {
        return Err(Error::InsufficientCoefficients {
            have: series.len(),
            need,
        });
    }
    Ok(())
}

/// `Λ(s)` at split point `T = 1`.
pub fn evaluate_lambda(series: &PieceLSeries, s: Complex64, params: &EvalParams) -> Result<Complex64> {
    check_length(series, params)?;
    let w = series.sign_or_solve(params)?;
    let (a, b) = series.lambda_parts(s, 1.0, params)?;
    Ok(a + w * b)
}

/// `L(s) = Λ(s) / L_∞(s)`.
pub fn evaluate_l(series: &PieceLSeries, s: Complex64, params: &EvalParams) -> Result<Complex64> {
    Ok(evaluate_lambda(series, s, params)? / series.gamma_complete(s)?)
}

const SIGN_POINT: f64 = 1.3;
const RESIDUAL_POINTS: [f64; 4] = [0.8, 1.0, 1.2, 1.5];

/// `w` from `Λ_{T=1}(s_0) = Λ_{T_2}(s_0)` at `s_0 = 1.3`, without normalization.
pub fn solve_sign_raw(series: &PieceLSeries, params: &EvalParams) -> Result<Complex64> {
    check_length_at(series, params.t_split, params)?;
    sign_unchecked(series, params)
}

fn sign_unchecked(series: &PieceLSeries, params: &EvalParams) -> Result<Complex64> {
    let s0 = Complex64::new(SIGN_POINT, 0.0);
    let (a1, b1) = series.lambda_parts(s0, 1.0, params)?;
    let (a2, b2) = series.lambda_parts(s0, params.t_split, params)?;
    let den = b1 - b2;
    if den.norm() == 0.0 {
        return Err(Error::NumericallySingular("sign equation degenerate".into()));
    }
    Ok((a2 - a1) / den)
}

/// Root number; fails if it is not unitary to within `1e-2`.
pub fn solve_sign(series: &PieceLSeries, params: &EvalParams) -> Result<Complex64> {
    let w = solve_sign_raw(series, params)?;
    if (w.norm() - 1.0).abs() > 1e-2 {
        return Err(Error::SignNotUnitary { modulus: w.norm() });
    }
    Ok(w)
}

/// `max_s |Λ_{T=1}(s) - Λ_{T_2}(s)| / max(1, |Λ(s)|)` with the solved (raw) sign,
/// or `||w| - 1|` if that is larger.
pub fn fe_residual(series: &PieceLSeries, params: &EvalParams) -> Result<(f64, Complex64)> {
    check_length_at(series, params.t_split, params)?;
    residual_unchecked(series, params)
}

fn residual_unchecked(series: &PieceLSeries, params: &EvalParams) -> Result<(f64, Complex64)> {
    let w = match series.sign {
        Some(w) => w,
        None => sign_unchecked(series, params)?,
    };
    let mut worst = 0.0f64;
    for s in RESIDUAL_POINTS {
        let s = Complex64::new(s, 0.0);
        let (a1, b1) = series.lambda_parts(s, 1.0, params)?;
        let (a2, b2) = series.lambda_parts(s, params.t_split, params)?;
        let l1 = a1 + w * b1;
        let l2 = a2 + w * b2;
        worst = worst.max((l1 - l2).norm() / l1.norm().max(1.0));
    }
    Ok((worst.max((w.norm() - 1.0).abs()), w))
}

/// Smallest `N` with `Σ_{n>N} |G_1(n/√N_Q)| n^h < 10^{-digits}`.
pub fn lcf_required(conductor: u128, digits: u32, gamma: &GammaFactor, params: &EvalParams) -> Result<usize> {
    let h = gamma.total_lambda();
    lcf_at_scale((conductor as f64).sqrt(), digits, h, 1, gamma, params)
}

/// `|G_s(x)| ≤ x^{-c} (1/2π) ∫ |γ_0(s+c+iy)| / |c+iy| dy` for every `c > 0`;
/// keeps the integral for a ladder of abscissae and takes the best one. Used
/// where the quadrature of the kernel is down at its rounding floor.
struct MellinBound {
    /// `(c, log of the integral)`.
    ladder: Vec<(f64, f64)>,
}

impl MellinBound {
    fn new(gamma: &GammaFactor, s: Complex64) -> Result<MellinBound> {
        let mut ladder = Vec::new();
        let mut c = 1.5;
        while c < 1500.0 {
            let f = |y: f64| -> Result<f64> {
                let z = Complex64::new(c, y);
                Ok(gamma.ln_value(s + z)?.re - z.norm().ln())
            };
            let peak = f(0.0)?;
            let step = 0.1 * (1.0 + c / 10.0).sqrt();
            let mut acc = 1.0;
            let mut k = 1;
            loop {
                let y = k as f64 * step;
                let v = (f(y)? - peak).exp() + (f(-y)? - peak).exp();
                acc += v;
                if v < 1e-20 {
                    break;
                }
                k += 1;
            }
            ladder.push((c, peak + (acc * step / (2.0 * PI)).ln()));
            c *= 1.5;
        }
        Ok(MellinBound { ladder })
    }

    fn eval(&self, x: f64) -> f64 {
        let lx = x.ln();
        self.ladder
            .iter()
            .map(|&(c, lf)| lf - c * lx)
            .fold(f64::INFINITY, f64::min)
            .exp()
    }
}

/// Smallest `N` with `(Σ_{n>N} (|G_1(n/sc)| n^h)^p)^{1/p} < 10^{-digits}`.
fn lcf_at_scale(sc: f64, digits: u32, h: f64, p: i32, gamma: &GammaFactor, params: &EvalParams) -> Result<usize> {
    let s1 = Complex64::new(1.0, 0.0);
    let k = Kernel::new(gamma, s1, params)?;
    let bound = MellinBound::new(gamma, s1)?;
    let target = 10f64.powi(-(digits as i32)).powi(p);
    let ratio = 1.02f64;
    let tail = |n0: f64| -> f64 {
        let mut t = n0;
        let mut acc = 0.0;
        loop {
            let x = t / sc;
            let v = (k.eval(x).norm().min(bound.eval(x)) * t.powf(h)).powi(p);
            acc += v * t * (ratio - 1.0);
            if v * t < 1e-3 * target && t > sc {
                break;
            }
            t *= ratio;
            if t > 1e15 {
                break;
            }
        }
        acc
    };
    let mut hi = 1.0f64;
    while tail(hi) >= target {
        hi *= 2.0;
        if hi > 1e14 {
            return Err(Error::InvalidParams("tail bound does not converge".into()));
        }
    }
    let mut lo = (hi / 2.0).max(1.0);
    if tail(lo) < target {
        return Ok(lo as usize);
    }
    while hi - lo > 1.0 && hi / lo > 1.001 {
        let mid = (lo + hi) / 2.0;
        if tail(mid) < target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi.ceil() as usize)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConductorTrial {
    pub conductor: u128,
    pub residual: f64,
    pub sign: Complex64,
    /// Fewer coefficients than the length guard asks for at this conductor.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConductorSearch {
    pub trials: Vec<ConductorTrial>,
    pub best: usize,
    /// Residual of the runner-up divided by the best residual.
    pub gap: f64,
    pub below_threshold: bool,
}

/// Residual for each candidate conductor; the minimizer is reported.
/// Candidates beyond the reach of the coefficients are still tried and
/// marked `truncated`; a truncated winner never counts as below threshold.
pub fn conductor_search(
    template: &PieceLSeries,
    candidates: &[u128],
    params: &EvalParams,
    threshold: f64,
) -> Result<ConductorSearch> {
    if candidates.is_empty() {
        return Err(Error::InvalidParams("no conductor candidates".into()));
    }
    let mut trials = Vec::with_capacity(candidates.len());
    for &cand in candidates {
        let mut s = template.clone();
        s.conductor = cand;
        s.sign = None;
        let truncated = match check_length_at(&s, params.t_split, params) {
            Ok(()) => false,
            Err(Error::InsufficientCoefficients { .. }) => true,
            Err(e) => return Err(e),
        };
        let (residual, sign) = match residual_unchecked(&s, params) {
            Ok(r) => r,
            Err(Error::NumericallySingular(_)) => (f64::INFINITY, Complex64::new(f64::NAN, f64::NAN)),
            Err(e) => return Err(e),
        };
        trials.push(ConductorTrial {
            conductor: cand,
            residual,
            sign,
            truncated,
        });
    }
    let mut order: Vec<usize> = (0..trials.len()).collect();
    order.sort_by(|&a, &b| trials[a].residual.total_cmp(&trials[b].residual));
    let best = order[0];
    let gap = if order.len() > 1 {
        trials[order[1]].residual / trials[best].residual
    } else {
        f64::INFINITY
    };
    Ok(ConductorSearch {
        below_threshold: trials[best].residual < threshold && !trials[best].truncated,
        trials,
        best,
        gap,
    })
}

/// Full pipeline: local factors at every prime `≤ n_coeffs`, then the sieve.
pub fn assemble_coeffs(
    c: &SuperellipticCurve,
    tau: CharacterTau,
    n_coeffs: usize,
    bad: &BTreeMap<u64, BadFactor>,
    conductor: u128,
    seed: u64,
) -> Result<PieceLSeries> {
    let mut factors = Vec::new();
    for p in 2..=n_coeffs as u64 {
        if is_prime(p) {
            factors.push(prime_level_factor(c, tau, p, n_coeffs as u64, bad, seed)?);
        }
    }
    let h = gamma_pairs(c.m(), c.degree());
    let mut s = PieceLSeries::from_prime_factors(c.m(), tau.k, n_coeffs, &factors, conductor, GammaFactor::pairs(h))?;
    s.bad_factors = bad.clone();
    Ok(s)
}
