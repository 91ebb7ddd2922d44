//! Finite fields `F_{p^e}`, `e ≤ 8`, and `m`-th power residue classes.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::cyclotomic::{inv_mod, mulmod, prime_factors, PrimeIdealData};
use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 8;

/// Coordinates in the basis `1, t, …, t^{e-1}` of `F_p[t]/(g)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct FqElem {
    pub c: [u64; MAX_DEGREE],
}

impl FqElem {
    pub const ZERO: FqElem = FqElem {
        c: [0; MAX_DEGREE],
    };

    pub fn base(a: u64) -> Self {
        let mut c = [0; MAX_DEGREE];
        c[0] = a;
        FqElem { c }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
}

/// `F_{p^e}` as `F_p[t]/(g)` with a monic irreducible `g`.
#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u64,
    e: usize,
    /// `g = t^e + Σ modulus[j] t^j`, only the low coefficients are stored.
    modulus: [u64; MAX_DEGREE],
    /// Nonzero positions of the low part of `g`.
    sparse: Vec<usize>,
    /// `frob[k][j]` is the image of `t^j` under `x ↦ x^{p^k}`.
    frob: Vec<[FqElem; MAX_DEGREE]>,
}

/// Deterministic per-field RNG.
pub fn field_rng(seed: u64, p: u64, e: usize, salt: u64) -> ChaCha8Rng {
    let mut s = [0u8; 32];
    s[..8].copy_from_slice(&seed.to_le_bytes());
    s[8..16].copy_from_slice(&p.to_le_bytes());
    s[16..24].copy_from_slice(&(e as u64).to_le_bytes());
    s[24..].copy_from_slice(&salt.to_le_bytes());
    ChaCha8Rng::from_seed(s)
}

fn rand_below(rng: &mut ChaCha8Rng, n: u64) -> u64 {
    // Rejection-free reduction is fine here; the bias is irrelevant.
    rng.next_u64() % n
}

// Polynomial helpers over F_p, ascending coefficients.

fn ptrim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn pmulmod(a: &[u64], b: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + mulmod(x, y, p)) % p;
        }
    }
    prem(r, g, p)
}

fn prem(mut r: Vec<u64>, g: &[u64], p: u64) -> Vec<u64> {
    let dg = g.len() - 1;
    let inv_lead = inv_mod(g[dg], p);
    r = ptrim(r);
    while r.len() > dg {
        let k = r.len() - 1;
        let f = mulmod(r[k], inv_lead, p);
        for (j, &gc) in g.iter().enumerate() {
            let idx = k - dg + j;
            r[idx] = (r[idx] + p - mulmod(f, gc, p)) % p;
        }
        r = ptrim(r);
    }
    r
}

fn pgcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    a = ptrim(a);
    b = ptrim(b);
    while !b.is_empty() {
        let r = prem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^{p^k} mod g`.
fn x_pow_pk(g: &[u64], p: u64, k: usize) -> Vec<u64> {
    let mut cur = prem(vec![0, 1], g, p);
    for _ in 0..k {
        // cur ← cur^p
        let mut base = cur.clone();
        let mut acc = vec![1u64];
        let mut ex = p;
        while ex > 0 {
            if ex & 1 == 1 {
                acc = pmulmod(&acc, &base, g, p);
            }
            base = pmulmod(&base, &base, g, p);
            ex >>= 1;
        }
        cur = acc;
    }
    cur
}

/// Rabin's irreducibility test for monic `g` of degree `e`.
pub fn is_irreducible(g: &[u64], p: u64) -> bool {
    let e = g.len() - 1;
    if e == 1 {
        return true;
    }
    let sub = |a: Vec<u64>| {
        let mut a = a;
        if a.len() < 2 {
            a.resize(2, 0);
        }
        a[1] = (a[1] + p - 1) % p;
        ptrim(a)
    };
    if !sub(x_pow_pk(g, p, e)).is_empty() {
        return false;
    }
    for r in prime_factors(e as u64) {
        let h = sub(x_pow_pk(g, p, e / r as usize));
        if pgcd(g.to_vec(), h, p).len() != 1 {
            return false;
        }
    }
    true
}

impl FiniteField {
    /// Builds `F_{p^e}`, preferring sparse moduli; deterministic in `seed`.
    pub fn new(p: u64, e: usize, seed: u64) -> Result<Self> {
        if e == 0 || e > MAX_DEGREE {
            return Err(Error::ExtensionTooLarge(e));
        }
        if p >= 1 << 32 || (e > 1 && p >= 1 << 26) {
            return Err(Error::InvalidParams(alloc::format!(
                "characteristic {p} too large for degree {e}"
            )));
        }
        let g = if e == 1 {
            vec![0, 1]
        } else {
            Self::find_modulus(p, e, seed)?
        };
        let mut modulus = [0u64; MAX_DEGREE];
        modulus[..e].copy_from_slice(&g[..e]);
        let sparse = (0..e).filter(|&j| modulus[j] != 0).collect();
        let mut field = FiniteField {
            p,
            e,
            modulus,
            sparse,
            frob: Vec::new(),
        };
        field.build_frobenius();
        Ok(field)
    }

    fn find_modulus(p: u64, e: usize, seed: u64) -> Result<Vec<u64>> {
        let mut rng = field_rng(seed, p, e, 0x6d6f64);
        let mut g = vec![0u64; e + 1];
        g[e] = 1;
        // Binomials t^e - c.
        for c in 1..p.min(64) {
            g[0] = p - c;
            if is_irreducible(&g, p) {
                return Ok(g);
            }
        }
        // Trinomials t^e + a t + b.
        for _ in 0..4000 {
            g.iter_mut().take(e).for_each(|x| *x = 0);
            g[0] = 1 + rand_below(&mut rng, p - 1);
            g[1] = rand_below(&mut rng, p);
            if is_irreducible(&g, p) {
                return Ok(g);
            }
        }
        for _ in 0..100_000 {
            for x in g.iter_mut().take(e) {
                *x = rand_below(&mut rng, p);
            }
            if g[0] != 0 && is_irreducible(&g, p) {
                return Ok(g);
            }
        }
        Err(Error::InvalidParams(alloc::format!(
            "no irreducible of degree {e} over F_{p}"
        )))
    }

    fn build_frobenius(&mut self) {
        let e = self.e;
        let mut id = [FqElem::ZERO; MAX_DEGREE];
        for (j, v) in id.iter_mut().enumerate().take(e) {
            v.c[j] = 1;
        }
        let mut mats = vec![id];
        if e > 1 {
            let mut t = FqElem::ZERO;
            t.c[1] = 1;
            let tp = self.pow(t, self.p as u128);
            let mut m1 = [FqElem::ZERO; MAX_DEGREE];
            let mut acc = FqElem::base(1);
            for v in m1.iter_mut().take(e) {
                *v = acc;
                acc = self.mul(acc, tp);
            }
            mats.push(m1);
            for k in 2..e {
                let prev = mats[k - 1];
                let mut mk = [FqElem::ZERO; MAX_DEGREE];
                for j in 0..e {
                    mk[j] = self.apply_matrix(&m1, prev[j]);
                }
                mats.push(mk);
            }
        }
        self.frob = mats;
    }

    fn apply_matrix(&self, mat: &[FqElem; MAX_DEGREE], a: FqElem) -> FqElem {
        let e = self.e;
        let p = self.p;
        let mut acc = [0u64; MAX_DEGREE];
        for j in 0..e {
            let aj = a.c[j];
            if aj == 0 {
                continue;
            }
            for (k, slot) in acc.iter_mut().enumerate().take(e) {
                *slot += aj * mat[j].c[k];
            }
            if p > 1 << 20 {
                for slot in acc.iter_mut().take(e) {
                    *slot %= p;
                }
            }
        }
        let mut out = FqElem::ZERO;
        for k in 0..e {
            out.c[k] = acc[k] % p;
        }
        out
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.e
    }

    /// Field size `p^e`.
    pub fn size(&self) -> u128 {
        (self.p as u128).pow(self.e as u32)
    }

    /// Low coefficients of the monic modulus.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus[..self.e]
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let mut out = FqElem::ZERO;
        for k in 0..self.e {
            let s = a.c[k] + b.c[k];
            out.c[k] = if s >= self.p { s - self.p } else { s };
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        let mut out = FqElem::ZERO;
        for k in 0..self.e {
            out.c[k] = if a.c[k] >= b.c[k] {
                a.c[k] - b.c[k]
            } else {
                a.c[k] + self.p - b.c[k]
            };
        }
        out
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        self.sub(FqElem::ZERO, a)
    }

    pub fn from_u64(&self, a: u64) -> FqElem {
        FqElem::base(a % self.p)
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let e = self.e;
        let p = self.p;
        if e == 1 {
            return FqElem::base(mulmod(a.c[0], b.c[0], p));
        }
        let mut acc = [0u64; 2 * MAX_DEGREE];
        if p < 1 << 26 {
            // p^2 < 2^52, at most eight terms per slot.
            for i in 0..e {
                let ai = a.c[i];
                if ai == 0 {
                    continue;
                }
                for j in 0..e {
                    acc[i + j] += ai * b.c[j];
                }
            }
            for slot in acc.iter_mut().take(2 * e - 1) {
                *slot %= p;
            }
        } else {
            for i in 0..e {
                for j in 0..e {
                    acc[i + j] = (acc[i + j] + mulmod(a.c[i], b.c[j], p)) % p;
                }
            }
        }
        // t^e = -Σ modulus[j] t^j
        for k in (e..2 * e - 1).rev() {
            let top = acc[k];
            if top == 0 {
                continue;
            }
            acc[k] = 0;
            for &j in &self.sparse {
                let idx = k - e + j;
                let sub = top * self.modulus[j] % p;
                acc[idx] = if acc[idx] >= sub {
                    acc[idx] - sub
                } else {
                    acc[idx] + p - sub
                };
            }
        }
        let mut out = FqElem::ZERO;
        out.c[..e].copy_from_slice(&acc[..e]);
        out
    }

    pub fn pow(&self, a: FqElem, mut ex: u128) -> FqElem {
        let mut base = a;
        let mut acc = FqElem::base(1);
        while ex > 0 {
            if ex & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            ex >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.size() - 2))
    }

    /// `x ↦ x^{p^k}`.
    #[inline]
    pub fn frobenius(&self, a: FqElem, k: usize) -> FqElem {
        let k = k % self.e;
        if k == 0 {
            return a;
        }
        self.apply_matrix(&self.frob[k], a)
    }

    /// Norm to the subfield `F_{p^d}`, `d | e`: `∏_{j < e/d} a^{p^{dj}}`.
    pub fn norm_to_subfield(&self, a: FqElem, d: usize) -> FqElem {
        let r = self.e / d;
        if r == 1 {
            return a;
        }
        // P_k = ∏_{j<k} φ^{dj}(a); P_{2k} = P_k φ^{dk}(P_k), P_{k+1} = a φ^d(P_k).
        let bits = usize::BITS - r.leading_zeros();
        let mut res = a;
        let mut k = 1usize;
        for b in (0..bits - 1).rev() {
            res = self.mul(res, self.frobenius(res, d * k));
            k *= 2;
            if (r >> b) & 1 == 1 {
                res = self.mul(a, self.frobenius(res, d));
                k += 1;
            }
        }
        debug_assert_eq!(k, r);
        res
    }

    /// A uniformly random element.
    pub fn random(&self, rng: &mut ChaCha8Rng) -> FqElem {
        let mut out = FqElem::ZERO;
        for k in 0..self.e {
            out.c[k] = rand_below(rng, self.p);
        }
        out
    }

    /// Element of exact multiplicative order `n` (which must divide `p^e - 1`).
    pub fn element_of_order(&self, n: u128, rng: &mut ChaCha8Rng) -> Result<FqElem> {
        let size = self.size();
        if n == 0 || (size - 1) % n != 0 {
            return Err(Error::InvalidParams(alloc::format!(
                "{n} does not divide the group order"
            )));
        }
        if n == 1 {
            return Ok(FqElem::base(1));
        }
        let primes = factor_u128(n);
        let cof = (size - 1) / n;
        for _ in 0..10_000 {
            let a = self.random(rng);
            if a.is_zero() {
                continue;
            }
            let g = self.pow(a, cof);
            if primes
                .iter()
                .all(|&r| self.pow(g, n / r) != FqElem::base(1))
            {
                return Ok(g);
            }
        }
        Err(Error::InvalidParams("no element of requested order".into()))
    }

    /// Horner evaluation of a polynomial with coefficients in this field.
    pub fn eval_poly(&self, coeffs: &[FqElem], x: FqElem) -> FqElem {
        let mut acc = FqElem::ZERO;
        for &c in coeffs.iter().rev() {
            acc = self.add(self.mul(acc, x), c);
        }
        acc
    }

    /// Elements in lexicographic coordinate order, coordinate 0 fastest.
    pub fn element_at(&self, mut idx: u128) -> FqElem {
        let mut out = FqElem::ZERO;
        for k in 0..self.e {
            out.c[k] = (idx % self.p as u128) as u64;
            idx /= self.p as u128;
        }
        out
    }
}

/// Distinct prime factors of a `u128` by trial division.
pub fn factor_u128(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d: u128 = 2;
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

/// `F_{q^i}` together with the images of the residue field generators.
#[derive(Clone, Debug)]
pub struct ExtensionField {
    pub field: FiniteField,
    /// Image of `ζ_m` (a primitive `m`-th root of unity).
    pub zeta: FqElem,
    /// Residue field size `q` of the base.
    pub q: u64,
    /// Extension degree over the base residue field.
    pub i: usize,
}

impl ExtensionField {
    /// Embeds an element of the residue field `F_q` (coordinates in `1, t`
    /// with `t = ζ` when `f = 2`).
    pub fn embed_residue(&self, a: [u64; 2], f: u32) -> FqElem {
        let fld = &self.field;
        if f == 1 {
            return fld.from_u64(a[0]);
        }
        fld.add(fld.from_u64(a[0]), fld.mul(fld.from_u64(a[1]), self.zeta))
    }

    /// Image of `c0 + c1 ζ` with coordinates already reduced mod `p`.
    pub fn embed_coords(&self, c: [u64; 2]) -> FqElem {
        let fld = &self.field;
        fld.add(fld.from_u64(c[0]), fld.mul(fld.from_u64(c[1]), self.zeta))
    }
}

/// Builds `F_{q^i}` over the residue field of `ideal`, `1 ≤ f·i ≤ 8`.
///
/// For `f = 1` the image of `ζ` is the stored residue; for `f = 2` any
/// root of `Φ_m` in the extension is used, which fixes the embedding of
/// `F_q = F_p[t]/Φ_m` via `t ↦ ζ`.
pub fn build_extension(ideal: &PrimeIdealData, i: usize, seed: u64) -> Result<ExtensionField> {
    let e = ideal.f as usize * i;
    if i == 0 || e > MAX_DEGREE {
        return Err(Error::ExtensionTooLarge(e));
    }
    let field = FiniteField::new(ideal.p, e, seed)?;
    let zeta = if ideal.f == 1 {
        field.from_u64(ideal.zeta_image[0])
    } else {
        let mut rng = field_rng(seed, ideal.p, e, 0x7a657461);
        field.element_of_order(ideal.m as u128, &mut rng)?
    };
    Ok(ExtensionField {
        field,
        zeta,
        q: ideal.q,
        i,
    })
}

/// Residue classes in `F^×/(F^×)^m`, indexed so that `a^{(Q-1)/m} = ζ^{class(a)}`.
///
/// Classes are read off the norm to the smallest subfield `F_{p^d}` that
/// contains `μ_m`, from a table over that subfield filled by walking powers
/// of a generator.
#[derive(Clone, Debug)]
pub struct PowerClassTable {
    pub m: u32,
    pub q: u128,
    /// Degree of the tabulated subfield.
    pub d: usize,
    p: u64,
    pivot: usize,
    table: Vec<u8>,
}

pub const ZERO_CLASS: u8 = u8::MAX;

impl PowerClassTable {
    /// Builds the table for `field` relative to the root of unity `zeta`.
    pub fn new(field: &FiniteField, m: u32, zeta: FqElem, seed: u64) -> Result<Self> {
        let p = field.characteristic();
        let size = field.size();
        if m == 0 || (size - 1) % m as u128 != 0 {
            return Err(Error::InvalidParams(alloc::format!(
                "{m} does not divide q - 1"
            )));
        }
        let e = field.degree();
        let d = (1..=e)
            .find(|&d| e % d == 0 && ((p as u128).pow(d as u32) - 1) % m as u128 == 0)
            .unwrap();
        let sub = (p as u128).pow(d as u32);
        let mut rng = field_rng(seed, p, e, 0x636c61);
        // γ generates F_{p^d}^× inside the big field.
        let gamma = field.element_of_order(sub - 1, &mut rng)?;
        let pivot = if d == 1 {
            0
        } else {
            (1..e).find(|&j| gamma.c[j] != 0).unwrap()
        };
        let zpow = field.pow(gamma, (sub - 1) / m as u128);
        let mut zk = FqElem::base(1);
        let mut r = None;
        for k in 0..m {
            if zk == zpow {
                r = Some(k);
                break;
            }
            zk = field.mul(zk, zeta);
        }
        let r = r.ok_or_else(|| Error::InvalidParams("zeta has wrong order".into()))? as u64;
        let mut table = vec![ZERO_CLASS; sub as usize];
        let mut x = FqElem::base(1);
        let mut cls = 0u64;
        for _ in 0..(sub - 1) {
            let idx = Self::index_of(p, d, pivot, &x);
            table[idx] = cls as u8;
            x = field.mul(x, gamma);
            cls = (cls + r) % m as u64;
        }
        Ok(PowerClassTable {
            m,
            q: size,
            d,
            p,
            pivot,
            table,
        })
    }

    #[inline]
    fn index_of(p: u64, d: usize, pivot: usize, x: &FqElem) -> usize {
        if d == 1 {
            x.c[0] as usize
        } else {
            (x.c[0] + p * x.c[pivot]) as usize
        }
    }

    /// Class of an element of the tabulated subfield.
    #[inline]
    pub fn class_of_subfield(&self, x: &FqElem) -> u8 {
        self.table[Self::index_of(self.p, self.d, self.pivot, x)]
    }

    /// Class of any element; [`ZERO_CLASS`] for zero.
    #[inline]
    pub fn class_of(&self, field: &FiniteField, a: FqElem) -> u8 {
        if a.is_zero() {
            return ZERO_CLASS;
        }
        self.class_of_subfield(&field.norm_to_subfield(a, self.d))
    }

    /// Direct lookup for prime fields.
    #[inline]
    pub fn class_of_base(&self, a: u64) -> u8 {
        self.table[a as usize]
    }

    /// Number of `y` with `y^m = a`.
    pub fn solution_count_mth_root(&self, field: &FiniteField, a: FqElem) -> u64 {
        match self.class_of(field, a) {
            ZERO_CLASS => 1,
            0 => self.m as u64,
            _ => 0,
        }
    }
}

/// Number of `y ∈ F` with `y^m = a`, via the class table.
pub fn solution_count_mth_root(
    field: &FiniteField,
    a: FqElem,
    m: u32,
    tbl: &PowerClassTable,
) -> Result<u64> {
    if tbl.m != m || (field.size() - 1) % m as u128 != 0 {
        return Err(Error::InvalidParams(alloc::format!(
            "{m} does not divide q - 1"
        )));
    }
    Ok(tbl.solution_count_mth_root(field, a))
}

/// Power class computed by exponentiation; slow, used as an independent check.
pub fn class_by_exponent(field: &FiniteField, m: u32, zeta: FqElem, a: FqElem) -> u8 {
    if a.is_zero() {
        return ZERO_CLASS;
    }
    let z = field.pow(a, (field.size() - 1) / m as u128);
    let mut zk = FqElem::base(1);
    for k in 0..m {
        if zk == z {
            return k as u8;
        }
        zk = field.mul(zk, zeta);
    }
    unreachable!("a^((q-1)/m) is an m-th root of unity")
}
