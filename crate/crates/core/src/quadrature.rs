//! Double-exponential (tanh–sinh) quadrature on `[-1, 1]`.

use core::f64::consts::FRAC_PI_2;

#[allow(unused_imports)]
use num_traits::Float;

use crate::Complex64;

/// Abscissa handed to the integrand. `one_minus` and `one_plus` are `1 - u`
/// and `1 + u` computed without cancellation, so integrands with algebraic
/// endpoint singularities can be evaluated accurately near `±1`.
#[derive(Clone, Copy, Debug)]
pub struct Node {
    pub u: f64,
    pub one_minus: f64,
    pub one_plus: f64,
}

impl Node {
    pub fn one_minus_sq(&self) -> f64 {
        self.one_minus * self.one_plus
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TanhSinh {
    pub tol: f64,
    pub max_level: u32,
    pub t_max: f64,
}

impl Default for TanhSinh {
    fn default() -> Self {
        TanhSinh {
            tol: 1e-14,
            max_level: 9,
            t_max: 6.0,
        }
    }
}

fn node(t: f64) -> (Node, f64) {
    let v = FRAC_PI_2 * t.sinh();
    // With e = e^{-2|v|}: 1 - tanh|v| = 2e / (1 + e), 1 + tanh|v| = 2 / (1 + e).
    let en = (-2.0 * v.abs()).exp();
    let small = 2.0 * en / (1.0 + en);
    let large = 2.0 / (1.0 + en);
    let (one_minus, one_plus) = if v < 0.0 { (large, small) } else { (small, large) };
    let u = v.tanh();
    let w = FRAC_PI_2 * t.cosh() * one_minus * one_plus;
    (
        Node {
            u,
            one_minus,
            one_plus,
        },
        w,
    )
}

impl TanhSinh {
    /// Returns the integral and the difference between the last two levels.
    pub fn integrate<F>(&self, mut f: F) -> (Complex64, f64)
    where
        F: FnMut(Node) -> Complex64,
    {
        let mut h = 0.5;
        let mut sum = Complex64::new(0.0, 0.0);
        let (n0, w0) = node(0.0);
        sum += f(n0) * w0;
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            if t > self.t_max {
                break;
            }
            sum += self.pair(&mut f, t);
            k += 1;
        }
        let mut estimate = sum * h;
        let mut err = f64::INFINITY;
        for _ in 0..self.max_level {
            h /= 2.0;
            let mut k = 1;
            loop {
                let t = k as f64 * h;
                if t > self.t_max {
                    break;
                }
                sum += self.pair(&mut f, t);
                k += 2;
            }
            let next = sum * h;
            err = (next - estimate).norm();
            estimate = next;
            if err <= self.tol * estimate.norm().max(1e-300) {
                break;
            }
        }
        (estimate, err)
    }

    fn pair<F>(&self, f: &mut F, t: f64) -> Complex64
    where
        F: FnMut(Node) -> Complex64,
    {
        let (np, w) = node(t);
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let nm = Node {
            u: -np.u,
            one_minus: np.one_plus,
            one_plus: np.one_minus,
        };
        let a = f(np);
        let b = f(nm);
        let mut s = Complex64::new(0.0, 0.0);
        if a.is_finite() {
            s += a * w;
        }
        if b.is_finite() {
            s += b * w;
        }
        s
    }
}
