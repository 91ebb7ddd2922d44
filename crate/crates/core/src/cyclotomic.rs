//! Exact arithmetic in `Q(ζ_m)`, `1 ≤ m ≤ 4`, splitting of rational primes,
//! reduction to residue fields and complex embeddings.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Complex64;

/// Euler's totient for the supported indices.
pub fn phi(m: u32) -> usize {
    match m {
        1 | 2 => 1,
        3 | 4 => 2,
        _ => 0,
    }
}

fn check_index(m: u32) -> Result<()> {
    if (1..=4).contains(&m) {
        Ok(())
    } else {
        Err(Error::UnsupportedIndex(m))
    }
}

/// Exact element of `Q(ζ_m)` in the power basis `1, ζ, …, ζ^{φ(m)-1}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycloElem {
    m: u32,
    coeffs: Vec<BigRational>,
}

/// Field operation selector for [`cyclo_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic; fails on mismatched index or division by zero.
pub fn cyclo_arith(a: &CycloElem, b: &CycloElem, op: ArithOp) -> Result<CycloElem> {
    if a.m != b.m {
        return Err(Error::MismatchedIndex {
            left: a.m,
            right: b.m,
        });
    }
    Ok(match op {
        ArithOp::Add => a.add_same(b),
        ArithOp::Sub => a.sub_same(b),
        ArithOp::Mul => a.mul_same(b),
        ArithOp::Div => a.mul_same(&b.inv()?),
    })
}

impl CycloElem {
    /// Builds an element from power-basis coordinates; missing trailing
    /// coordinates are zero. Panics if `m` is unsupported or too many
    /// coordinates are given.
    pub fn new(m: u32, coeffs: Vec<BigRational>) -> Self {
        let d = phi(m);
        assert!(d > 0, "unsupported cyclotomy index {m}");
        assert!(coeffs.len() <= d, "too many coordinates for m = {m}");
        let mut c = coeffs;
        c.resize(d, BigRational::zero());
        CycloElem { m, coeffs: c }
    }

    pub fn try_new(m: u32, coeffs: Vec<BigRational>) -> Result<Self> {
        check_index(m)?;
        if coeffs.len() > phi(m) {
            return Err(Error::Parse("too many coordinates".to_string()));
        }
        Ok(Self::new(m, coeffs))
    }

    pub fn from_ints(m: u32, coeffs: &[i64]) -> Self {
        Self::new(
            m,
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn from_int(m: u32, c: i64) -> Self {
        Self::from_ints(m, &[c])
    }

    pub fn from_rational(m: u32, r: BigRational) -> Self {
        Self::new(m, vec![r])
    }

    pub fn zero(m: u32) -> Self {
        Self::new(m, Vec::new())
    }

    pub fn one(m: u32) -> Self {
        Self::from_int(m, 1)
    }

    /// The generator `ζ_m` (for `m ≤ 2` this is the rational `±1`).
    pub fn zeta(m: u32) -> Self {
        match m {
            1 => Self::from_int(1, 1),
            2 => Self::from_int(2, -1),
            _ => Self::from_ints(m, &[0, 1]),
        }
    }

    /// `ζ_m^e` for any integer exponent.
    pub fn zeta_pow(m: u32, e: i64) -> Self {
        let r = e.rem_euclid(m as i64);
        let z = Self::zeta(m);
        let mut acc = Self::one(m);
        for _ in 0..r {
            acc = acc.mul_same(&z);
        }
        acc
    }

    pub fn index(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coordinate `j` in the power basis, zero beyond `φ(m)`.
    pub fn coeff(&self, j: usize) -> BigRational {
        self.coeffs.get(j).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// True when every coordinate is an integer, i.e. the element is in `Z[ζ_m]`.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Integer coordinates, if integral and small enough.
    pub fn to_i64_coords(&self) -> Option<[i64; 2]> {
        let mut out = [0i64; 2];
        for (o, c) in out.iter_mut().zip(&self.coeffs) {
            if !c.is_integer() {
                return None;
            }
            *o = c.to_integer().to_i64()?;
        }
        Some(out)
    }

    fn add_same(&self, o: &Self) -> Self {
        CycloElem {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn sub_same(&self, o: &Self) -> Self {
        CycloElem {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    fn mul_same(&self, o: &Self) -> Self {
        if phi(self.m) == 1 {
            return CycloElem {
                m: self.m,
                coeffs: vec![&self.coeffs[0] * &o.coeffs[0]],
            };
        }
        let (a, b) = (&self.coeffs[0], &self.coeffs[1]);
        let (c, d) = (&o.coeffs[0], &o.coeffs[1]);
        let ac = a * c;
        let bd = b * d;
        let cross = a * d + b * c;
        let coeffs = if self.m == 3 {
            // z^2 = -1 - z
            vec![&ac - &bd, cross - bd]
        } else {
            // z^2 = -1
            vec![ac - bd, cross]
        };
        CycloElem { m: self.m, coeffs }
    }

    /// Field norm to `Q`.
    pub fn norm(&self) -> BigRational {
        match phi(self.m) {
            1 => self.coeffs[0].clone(),
            _ => {
                let (a, b) = (&self.coeffs[0], &self.coeffs[1]);
                if self.m == 3 {
                    a * a - a * b + b * b
                } else {
                    a * a + b * b
                }
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        if phi(self.m) == 1 {
            return Ok(CycloElem {
                m: self.m,
                coeffs: vec![n.recip()],
            });
        }
        // The inverse is the product of the non-trivial conjugate and 1/N.
        let c = self.conj();
        Ok(CycloElem {
            m: self.m,
            coeffs: c.coeffs.iter().map(|x| x / &n).collect(),
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        cyclo_arith(self, o, ArithOp::Div)
    }

    /// Galois action `ζ ↦ ζ^s`, `s` coprime to `m`.
    pub fn galois(&self, s: i64) -> Self {
        let s = s.rem_euclid(self.m as i64);
        if phi(self.m) == 1 || s == 1 {
            return self.clone();
        }
        let (a, b) = (&self.coeffs[0], &self.coeffs[1]);
        let coeffs = if self.m == 3 {
            // ζ^2 = -1 - ζ
            vec![a - b, -b]
        } else {
            // ζ^3 = -ζ
            vec![a.clone(), -b]
        };
        CycloElem { m: self.m, coeffs }
    }

    /// Complex conjugation, i.e. `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycloElem {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Coordinates reduced mod `p`.
    pub fn reduce_coords(&self, p: u64) -> Result<[u64; 2]> {
        let mut out = [0u64; 2];
        for (o, c) in out.iter_mut().zip(&self.coeffs) {
            *o = reduce_rational(c, p)?;
        }
        Ok(out)
    }

    /// Parses the `"a/b + c/d*z"` encoding.
    pub fn parse(m: u32, s: &str) -> Result<Self> {
        check_index(m)?;
        parse_elem(m, s)
    }

    /// Evaluation under a complex embedding.
    pub fn embed(&self, e: &ComplexEmbedding) -> Complex64 {
        embed(self, e)
    }
}

fn reduce_rational(c: &BigRational, p: u64) -> Result<u64> {
    let pb = BigInt::from(p);
    let den = c.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(Error::DenominatorNotCoprime { p });
    }
    let num = c.numer().mod_floor(&pb).to_u64().unwrap();
    let den = den.to_u64().unwrap();
    Ok(mulmod(num, inv_mod(den, p), p))
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let (g, x, _) = egcd(a as i128, p as i128);
    debug_assert_eq!(g, 1);
    x.rem_euclid(p as i128) as u64
}

fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

impl Add for &CycloElem {
    type Output = CycloElem;
    fn add(self, o: &CycloElem) -> CycloElem {
        assert_eq!(self.m, o.m, "cyclotomy index mismatch");
        self.add_same(o)
    }
}

impl Sub for &CycloElem {
    type Output = CycloElem;
    fn sub(self, o: &CycloElem) -> CycloElem {
        assert_eq!(self.m, o.m, "cyclotomy index mismatch");
        self.sub_same(o)
    }
}

impl Mul for &CycloElem {
    type Output = CycloElem;
    fn mul(self, o: &CycloElem) -> CycloElem {
        assert_eq!(self.m, o.m, "cyclotomy index mismatch");
        self.mul_same(o)
    }
}

impl Neg for &CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        CycloElem {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.coeffs[0];
        let b = self.coeffs.get(1).cloned().unwrap_or_else(BigRational::zero);
        if b.is_zero() {
            return f.write_str(&fmt_rational(a));
        }
        let bz = |neg: bool| {
            let mag = if neg { -b.clone() } else { b.clone() };
            if mag.is_one() {
                String::from("z")
            } else {
                alloc::format!("{}*z", fmt_rational(&mag))
            }
        };
        if a.is_zero() {
            if b.is_negative() {
                write!(f, "-{}", bz(true))
            } else {
                f.write_str(&bz(false))
            }
        } else if b.is_negative() {
            write!(f, "{} - {}", fmt_rational(a), bz(true))
        } else {
            write!(f, "{} + {}", fmt_rational(a), bz(false))
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(alloc::format!("bad rational '{s}'"));
    let mut parts = s.splitn(2, '/');
    let num: BigInt = parts.next().unwrap().trim().parse().map_err(|_| bad())?;
    let den: BigInt = match parts.next() {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

fn parse_elem(m: u32, s: &str) -> Result<CycloElem> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty element".to_string()));
    }
    // Split into signed terms.
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (idx, ch) in compact.chars().enumerate() {
        if (ch == '+' || ch == '-') && idx > 0 && !cur.ends_with('^') {
            terms.push((neg, core::mem::take(&mut cur)));
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && idx == 0 {
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    terms.push((neg, cur));

    let mut acc = CycloElem::zero(m);
    for (neg, t) in terms {
        if t.is_empty() {
            return Err(Error::Parse(alloc::format!("dangling sign in '{s}'")));
        }
        let (coef, power) = match t.find('z') {
            None => (parse_rational(&t)?, 0i64),
            Some(pos) => {
                let head = &t[..pos];
                let tail = &t[pos + 1..];
                let coef = if head.is_empty() {
                    BigRational::one()
                } else if let Some(h) = head.strip_suffix('*') {
                    parse_rational(h)?
                } else {
                    return Err(Error::Parse(alloc::format!("bad term '{t}'")));
                };
                let power = if tail.is_empty() {
                    1
                } else if let Some(e) = tail.strip_prefix('^') {
                    e.parse::<i64>()
                        .map_err(|_| Error::Parse(alloc::format!("bad exponent in '{t}'")))?
                } else {
                    return Err(Error::Parse(alloc::format!("bad term '{t}'")));
                };
                (coef, power)
            }
        };
        let coef = if neg { -coef } else { coef };
        acc = acc.add_same(&CycloElem::zeta_pow(m, power).scale(&coef));
    }
    Ok(acc)
}

/// A prime ideal of `Z[ζ_m]` together with its residue field data.
///
/// For `f = 1` the residue field is `F_p` and `zeta_image = [r, 0]`.
/// For `f = 2` it is `F_p[t]/Φ_m(t)` and `zeta_image = [0, 1]`, i.e. `ζ ↦ t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdealData {
    pub m: u32,
    pub p: u64,
    pub f: u32,
    pub e: u32,
    pub q: u64,
    pub zeta_image: [u64; 2],
    pub ramified: bool,
}

/// Element of a residue field `F_q`, `q = p^f`, `f ≤ 2`, as coordinates in
/// the basis `1, t`.
pub type ResidueElem = [u64; 2];

impl PrimeIdealData {
    /// Short label of the zeta image used in tables and cache keys.
    pub fn zeta_label(&self) -> String {
        if self.f == 2 {
            String::from("t")
        } else {
            self.zeta_image[0].to_string()
        }
    }

    /// Multiplication in the residue field.
    pub fn residue_mul(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        let p = self.p;
        if self.f == 1 {
            return [mulmod(a[0], b[0], p), 0];
        }
        let ac = mulmod(a[0], b[0], p);
        let bd = mulmod(a[1], b[1], p);
        let cross = (mulmod(a[0], b[1], p) + mulmod(a[1], b[0], p)) % p;
        if self.m == 3 {
            [(ac + p - bd) % p, (cross + p - bd) % p]
        } else {
            [(ac + p - bd) % p, cross]
        }
    }

    pub fn residue_add(&self, a: ResidueElem, b: ResidueElem) -> ResidueElem {
        [(a[0] + b[0]) % self.p, (a[1] + b[1]) % self.p]
    }
}

/// The prime ideals of `Z[ζ_m]` above `p`, ordered by zeta image.
pub fn split_prime(p: u64, m: u32) -> Result<Vec<PrimeIdealData>> {
    check_index(m)?;
    if p < 2 || !is_prime(p) {
        return Err(Error::InvalidParams(alloc::format!("{p} is not prime")));
    }
    let ideal = |f: u32, e: u32, z: [u64; 2], ramified: bool| PrimeIdealData {
        m,
        p,
        f,
        e,
        q: p.pow(f),
        zeta_image: z,
        ramified,
    };
    Ok(match m {
        1 => vec![ideal(1, 1, [1 % p, 0], false)],
        2 => vec![ideal(1, 1, [p - 1, 0], false)],
        _ => {
            let ram = (m == 3 && p == 3) || (m == 4 && p == 2);
            if ram {
                vec![ideal(1, 2, [1, 0], true)]
            } else if p % m as u64 == 1 {
                // Roots of Φ_m mod p: elements of exact order m.
                let mut out = Vec::new();
                for r in 2..p {
                    let is_root = if m == 3 {
                        (mulmod(r, r, p) + r + 1) % p == 0
                    } else {
                        (mulmod(r, r, p) + 1) % p == 0
                    };
                    if is_root {
                        out.push(ideal(1, 1, [r, 0], false));
                        if out.len() == 2 {
                            break;
                        }
                    }
                }
                out
            } else {
                vec![ideal(2, 1, [0, 1], false)]
            }
        }
    })
}

/// Reduction `Z[ζ_m]_(P) → F_q` under `ζ ↦ zeta_image`.
pub fn reduce_mod(a: &CycloElem, ideal: &PrimeIdealData) -> Result<ResidueElem> {
    if a.m != ideal.m {
        return Err(Error::MismatchedIndex {
            left: a.m,
            right: ideal.m,
        });
    }
    let c = a.reduce_coords(ideal.p)?;
    if phi(a.m) == 1 {
        // For m ≤ 2 the stored coordinate is already the rational value.
        return Ok([c[0], 0]);
    }
    let bz = ideal.residue_mul([c[1], 0], ideal.zeta_image);
    Ok(ideal.residue_add([c[0], 0], bz))
}

/// Deterministic primality test for `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `n`.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An embedding `Q(ζ_m) ↪ C`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexEmbedding {
    pub m: u32,
    pub zeta_value: Complex64,
    pub conjugate: bool,
}

impl ComplexEmbedding {
    /// `ζ_m ↦ exp(2πi/m)`.
    pub fn canonical(m: u32) -> Self {
        let zeta_value = match m {
            1 => Complex64::new(1.0, 0.0),
            2 => Complex64::new(-1.0, 0.0),
            3 => Complex64::new(-0.5, 0.866_025_403_784_438_6),
            4 => Complex64::new(0.0, 1.0),
            _ => panic!("unsupported cyclotomy index {m}"),
        };
        ComplexEmbedding {
            m,
            zeta_value,
            conjugate: false,
        }
    }

    pub fn conjugated(&self) -> Self {
        ComplexEmbedding {
            m: self.m,
            zeta_value: self.zeta_value.conj(),
            conjugate: !self.conjugate,
        }
    }
}

/// Evaluation of `a` at the embedded `ζ`.
pub fn embed(a: &CycloElem, e: &ComplexEmbedding) -> Complex64 {
    assert_eq!(a.m, e.m, "cyclotomy index mismatch");
    let a0 = a.coeffs[0].to_f64().unwrap_or(f64::NAN);
    if phi(a.m) == 1 {
        return Complex64::new(a0, 0.0);
    }
    let a1 = a.coeffs[1].to_f64().unwrap_or(f64::NAN);
    Complex64::new(a0 + a1 * e.zeta_value.re, a1 * e.zeta_value.im)
}

/// Compact exact element of `Z[ζ_m]` used in coefficient sieves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct CycloInt {
    pub c: [i128; 2],
}

impl CycloInt {
    pub const ZERO: CycloInt = CycloInt { c: [0, 0] };
    pub const ONE: CycloInt = CycloInt { c: [1, 0] };

    pub fn from_elem(a: &CycloElem) -> Option<Self> {
        let c = a.to_i64_coords()?;
        Some(CycloInt {
            c: [c[0] as i128, c[1] as i128],
        })
    }

    pub fn to_elem(self, m: u32) -> CycloElem {
        let d = phi(m);
        CycloElem::new(
            m,
            self.c[..d]
                .iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        )
    }

    pub fn add(self, o: Self) -> Self {
        CycloInt {
            c: [self.c[0] + o.c[0], self.c[1] + o.c[1]],
        }
    }

    pub fn sub(self, o: Self) -> Self {
        CycloInt {
            c: [self.c[0] - o.c[0], self.c[1] - o.c[1]],
        }
    }

    pub fn mul(self, o: Self, m: u32) -> Self {
        let (a, b, c, d) = (self.c[0], self.c[1], o.c[0], o.c[1]);
        let ac = a * c;
        let bd = b * d;
        let cross = a * d + b * c;
        if m == 3 {
            CycloInt {
                c: [ac - bd, cross - bd],
            }
        } else {
            CycloInt { c: [ac - bd, cross] }
        }
    }

    pub fn embed(self, e: &ComplexEmbedding) -> Complex64 {
        let a0 = self.c[0] as f64;
        let a1 = self.c[1] as f64;
        Complex64::new(a0 + a1 * e.zeta_value.re, a1 * e.zeta_value.im)
    }
}
