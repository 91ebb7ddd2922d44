//! Recognition of `z ≈ (a + bω)/c` with `ω ∈ {i, ζ_3}` by exhaustive search,
//! and exact certification of `|z - (a + bω)/c| < c^{-4}`.

use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[allow(unused_imports)]
use num_traits::Float;

use crate::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaType {
    I,
    Zeta3,
    /// Rational recognition, `b = 0`.
    None,
}

impl OmegaType {
    pub fn for_index(m: u32) -> Self {
        match m {
            3 => OmegaType::Zeta3,
            4 => OmegaType::I,
            _ => OmegaType::None,
        }
    }

    pub fn value(self) -> Complex64 {
        match self {
            OmegaType::I => Complex64::new(0.0, 1.0),
            OmegaType::Zeta3 => Complex64::new(-0.5, 0.866_025_403_784_438_6),
            OmegaType::None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            OmegaType::I => "i",
            OmegaType::Zeta3 => "zeta3",
            OmegaType::None => "",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecognitionResult {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub omega: OmegaType,
    pub error: f64,
    pub certified: bool,
}

impl RecognitionResult {
    pub fn value(&self) -> Complex64 {
        (Complex64::new(self.a as f64, 0.0) + self.omega.value() * self.b as f64) / self.c as f64
    }

    /// `1/c^4`.
    pub fn bound(&self) -> f64 {
        (self.c as f64).powi(-4)
    }

    /// The recognized value with `ζ ↦ conj ζ`, expressed again as `(a' + b'ω)/c`.
    pub fn conjugate(&self) -> RecognitionResult {
        let (a, b) = match self.omega {
            // conj ζ_3 = -1 - ζ_3
            OmegaType::Zeta3 => (self.a - self.b, -self.b),
            _ => (self.a, -self.b),
        };
        RecognitionResult {
            a,
            b,
            ..self.clone()
        }
    }
}

impl fmt::Display for RecognitionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.omega {
            OmegaType::None => write!(f, "{}/{}", self.a, self.c),
            w if self.b < 0 => write!(f, "({} - {}*{})/{}", self.a, -self.b, w.symbol(), self.c),
            w => write!(f, "({} + {}*{})/{}", self.a, self.b, w.symbol(), self.c),
        }
    }
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    num_integer::gcd(num_integer::gcd(a, b), c)
}

/// Global minimizer of `|z - (a + bω)/c|` over primitive triples with
/// `|a|, |b| ≤ bound_a` and `1 ≤ c ≤ bound_c`; ties go to the smallest `c`,
/// then the lexicographically smallest `(a, b)`.
pub fn recognize(z: Complex64, omega: OmegaType, bound_a: i64, bound_c: i64) -> RecognitionResult {
    let w = omega.value();
    let b_range = if omega == OmegaType::None { 0 } else { bound_a };
    let mut best = (f64::INFINITY, 0i64, 0i64, 1i64);
    for c in 1..=bound_c.max(1) {
        let cf = c as f64;
        for a in -bound_a..=bound_a {
            for b in -b_range..=b_range {
                if gcd3(a, b, c) != 1 {
                    continue;
                }
                let cand = (Complex64::new(a as f64, 0.0) + w * b as f64) / cf;
                let err = (z - cand).norm();
                if err < best.0 {
                    best = (err, a, b, c);
                }
            }
        }
    }
    let (error, a, b, c) = best;
    RecognitionResult {
        a,
        b,
        c,
        omega,
        error,
        certified: certify(z, omega, a, b, c),
    }
}

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Exact check of `|z - (a + bω)/c| < c^{-4}` with `z` taken as the stored
/// pair of doubles.
pub fn certify(z: Complex64, omega: OmegaType, a: i64, b: i64, c: i64) -> bool {
    if c < 1 || !z.re.is_finite() || !z.im.is_finite() {
        return false;
    }
    let (x, y) = (rat(z.re), rat(z.im));
    let cc = int(c);
    let c8 = {
        let c2 = &cc * &cc;
        let c4 = &c2 * &c2;
        &c4 * &c4
    };
    let bound2 = BigRational::new(BigInt::from(1), c8.to_integer());
    match omega {
        OmegaType::I | OmegaType::None => {
            let u = &x - int(a) / &cc;
            let v = &y - int(b) / &cc;
            &u * &u + &v * &v < bound2
        }
        OmegaType::Zeta3 => {
            // Re = (2a - b)/(2c), Im = b√3/(2c).
            let two_c = &cc * int(2);
            let u = &x - int(2 * a - b) / &two_c;
            let beta = int(b) / &two_c;
            // u² + (y - β√3)² = R - 2yβ√3
            let r = &u * &u + &y * &y + int(3) * &beta * &beta;
            let l = r - &bound2;
            let k = int(2) * &y * &beta;
            // l < k√3
            if !k.is_negative() {
                l.is_negative() || &l * &l < int(3) * &k * &k
            } else {
                l.is_negative() && &l * &l > int(3) * &k * &k
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let r = recognize(
            Complex64::new(-0.018_518_518_518_5, 0.010_691_671_651_7),
            OmegaType::Zeta3,
            16,
            160,
        );
        assert_eq!((r.a, r.b, r.c), (-1, 1, 81));
        assert!(r.certified);
        let z = Complex64::new(3.0 / 160.0 + 1e-12, -1.0 / 160.0);
        let r = recognize(z, OmegaType::I, 16, 160);
        assert_eq!((r.a, r.b, r.c), (3, -1, 160));
        assert!(r.certified);
        let r = recognize(Complex64::new(0.0, 0.0), OmegaType::I, 16, 160);
        assert_eq!((r.a, r.b, r.c), (0, 0, 1));
        assert!(r.certified);
    }

    #[test]
    fn uncertified_when_far() {
        let r = recognize(Complex64::new(0.123_456_789, 0.314_159), OmegaType::I, 16, 160);
        assert!(!r.certified);
        assert!(r.error > r.bound());
    }

    #[test]
    fn conjugation() {
        let r = RecognitionResult {
            a: -1,
            b: 1,
            c: 81,
            omega: OmegaType::Zeta3,
            error: 0.0,
            certified: true,
        };
        let v = r.conjugate().value();
        assert!((v - r.value().conj()).norm() < 1e-15);
    }

    #[test]
    fn certification_is_exact_at_the_edge() {
        // z exactly 1/c^4 away must not certify; slightly inside must.
        let c = 3i64;
        let edge = (c as f64).powi(-4);
        assert!(!certify(Complex64::new(1.0 / 3.0 + edge * 1.000_001, 0.0), OmegaType::I, 1, 0, c));
        assert!(certify(Complex64::new(1.0 / 3.0 + edge * 0.999, 0.0), OmegaType::I, 1, 0, c));
        let z3 = OmegaType::Zeta3.value();
        assert!(certify(z3 / 5.0 + Complex64::new(0.0, 1e-4), OmegaType::Zeta3, 0, 1, 5));
        assert!(!certify(z3 / 5.0 + Complex64::new(0.0, 2e-3), OmegaType::Zeta3, 0, 1, 5));
        assert!(!certify(z3 / 5.0 - Complex64::new(0.0, 2e-3), OmegaType::Zeta3, 0, 1, 5));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn round_trip(a in -16i64..=16, b in -16i64..=16, c in 1i64..=160,
                      zeta in any::<bool>(), nr in -1.0f64..1.0, ni in -1.0f64..1.0) {
            let om = if zeta { OmegaType::Zeta3 } else { OmegaType::I };
            let g = gcd3(a, b, c);
            let (a, b, c) = (a / g, b / g, c / g);
            let exact = (Complex64::new(a as f64, 0.0) + om.value() * b as f64) / c as f64;
            let z = exact + Complex64::new(nr, ni) * 1e-9;
            let r = recognize(z, om, 16, 160);
            prop_assert_eq!((r.a, r.b, r.c), (a, b, c));
            prop_assert!(r.certified);
        }
    }
}
