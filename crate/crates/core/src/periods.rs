//! Branch points, elementary cycle integrals and Deligne periods of
//! superelliptic curves with `gcd(m, n) = 1`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::cyclotomic::ComplexEmbedding;
use crate::error::{Error, Result};
use crate::quadrature::{Node, TanhSinh};
use crate::twistcount::SuperellipticCurve;
use crate::Complex64;

const ROOT_SEPARATION: f64 = 1e-8;
const MIN_EDGE_QUALITY: f64 = 1e-6;

/// Roots of `Σ c_j x^j` (ascending coefficients). Trailing zero coefficients
/// are ignored; the constant term may vanish.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if c.is_empty() {
        return Err(Error::InvalidParams("zero polynomial".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let bound = 1.0
        + monic[..n]
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max);
    let eval = |z: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in monic.iter().rev() {
            acc = acc * z + a;
        }
        acc
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| seed.powu(k as u32) * (0.5 * bound))
        .collect();
    // Durand–Kerner.
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-300, 0.0);
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm() / z[i].norm().max(1.0));
        }
        if delta < 1e-15 {
            break;
        }
    }
    // Newton polish.
    let deriv: Vec<Complex64> = (1..=n).map(|k| monic[k] * k as f64).collect();
    for r in z.iter_mut() {
        for _ in 0..3 {
            let mut d = Complex64::new(0.0, 0.0);
            for a in deriv.iter().rev() {
                d = d * *r + a;
            }
            if d.norm() == 0.0 {
                break;
            }
            let step = eval(*r) / d;
            if !step.is_finite() || step.norm() > 1e-6 * r.norm().max(1.0) {
                break;
            }
            *r -= step;
        }
    }
    Ok(z)
}

/// Branch points of `f` at the embedding, sorted by real then imaginary part.
pub fn find_roots(curve: &SuperellipticCurve, emb: &ComplexEmbedding) -> Result<Vec<Complex64>> {
    let cs: Vec<Complex64> = curve.poly().coeffs().iter().map(|a| a.embed(emb)).collect();
    let mut roots = polynomial_roots(&cs)?;
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let scale: f64 = cs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    for r in &roots {
        let mut v = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        for c in cs.iter().rev() {
            v = v * r + c;
            mag = mag * r.norm() + c.norm();
        }
        if v.norm() > 1e-10 * mag.max(scale) {
            return Err(Error::NumericallySingular(format!("root residual {:e}", v.norm())));
        }
    }
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let d = (roots[i] - roots[j]).norm();
            if d < ROOT_SEPARATION * roots[i].norm().max(1.0) {
                return Err(Error::NumericallySingular(format!("roots {i} and {j} coincide")));
            }
        }
    }
    Ok(roots)
}

/// `r(e) = min_{c ≠ a, b} |2c - a - b| / |b - a|`.
pub fn edge_quality(roots: &[Complex64], a: usize, b: usize) -> f64 {
    let (ra, rb) = (roots[a], roots[b]);
    let len = (rb - ra).norm();
    roots
        .iter()
        .enumerate()
        .filter(|&(c, _)| c != a && c != b)
        .map(|(_, rc)| (rc * 2.0 - ra - rb).norm() / len)
        .fold(f64::INFINITY, f64::min)
}

/// Maximum spanning tree on `r(e)` (Kruskal); edges are `(a, b)` with `a < b`.
pub fn spanning_tree(roots: &[Complex64]) -> Vec<(usize, usize)> {
    let n = roots.len();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            edges.push((edge_quality(roots, a, b), a, b));
        }
    }
    edges.sort_by(|x, y| y.0.total_cmp(&x.0).then((x.1, x.2).cmp(&(y.1, y.2))));
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    for (_, a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            tree.push((a, b));
        }
    }
    tree
}

/// `ω_{i,j} = x^{i-1} dx / y^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DifferentialIndex {
    pub i: u32,
    pub j: u32,
}

/// Basis of holomorphic differentials for `y^m = f(x)`, `deg f = n`.
pub fn holomorphic_differentials(m: u32, n: u32) -> Vec<DifferentialIndex> {
    let delta = num_integer::gcd(m, n) as i64;
    let mut out = Vec::new();
    for i in 1..n {
        for j in 1..m {
            if -(m as i64) * i as i64 + j as i64 * n as i64 - delta >= 0 {
                out.push(DifferentialIndex { i, j });
            }
        }
    }
    out
}

pub fn zeta(m: u32) -> Complex64 {
    let t = 2.0 * PI / m as f64;
    Complex64::new(t.cos(), t.sin())
}

/// `c_{j,ℓ} = ζ^{-jℓ}(1 - ζ^{-j})`, so `∫_{γ_e^{(ℓ)}} ω_{i,j} = c_{j,ℓ} I_e(ω_{i,j})`.
pub fn cycle_coefficient(j: u32, l: u32, m: u32) -> Complex64 {
    let z = zeta(m).conj();
    z.powu(j * l) * (Complex64::new(1.0, 0.0) - z.powu(j))
}

#[derive(Clone, Debug)]
pub struct BranchData {
    pub embedding: ComplexEmbedding,
    pub m: u32,
    pub lc: Complex64,
    pub roots: Vec<Complex64>,
    pub edges: Vec<(usize, usize)>,
}

impl BranchData {
    pub fn new(curve: &SuperellipticCurve, emb: &ComplexEmbedding) -> Result<Self> {
        let roots = find_roots(curve, emb)?;
        let edges = spanning_tree(&roots);
        let lc = curve.poly().leading().unwrap().embed(emb);
        Ok(BranchData {
            embedding: *emb,
            m: curve.m(),
            lc,
            roots,
            edges,
        })
    }

    /// `log y_{a,b}(x(u)) - log(1 - u^2)/m`, i.e. the log of the smooth part
    /// `(H(0) ∏_c (1 - u/u_c))^{1/m}` with principal roots.
    fn segment_setup(&self, a: usize, b: usize) -> Result<Segment> {
        if edge_quality(&self.roots, a, b) < MIN_EDGE_QUALITY {
            return Err(Error::NumericallySingular(format!(
                "branch point on segment ({a}, {b})"
            )));
        }
        let (ra, rb) = (self.roots[a], self.roots[b]);
        let mid = (ra + rb) * 0.5;
        let half = (rb - ra) * 0.5;
        let uc: Vec<Complex64> = self
            .roots
            .iter()
            .enumerate()
            .filter(|&(c, _)| c != a && c != b)
            .map(|(_, rc)| (rc - mid) / half)
            .collect();
        // f(mid) = H(0)
        let mut h0 = self.lc;
        for r in &self.roots {
            h0 *= mid - r;
        }
        Ok(Segment {
            mid,
            half,
            uc,
            log_h0: h0.ln(),
        })
    }

    /// `I_e(ω_{i,j}) = ∫_a^b x^{i-1} y_{a,b}(x)^{-j} dx` and the quadrature
    /// error estimate.
    pub fn elementary_integral(
        &self,
        edge: (usize, usize),
        idx: DifferentialIndex,
        quad: &TanhSinh,
    ) -> Result<(Complex64, f64)> {
        let seg = self.segment_setup(edge.0, edge.1)?;
        let m = self.m as f64;
        let j = idx.j as f64;
        let (v, err) = quad.integrate(|nd: Node| {
            let x = seg.mid + seg.half * nd.u;
            let mut lg = seg.log_h0;
            for c in &seg.uc {
                lg += (Complex64::new(1.0, 0.0) - nd.u / c).ln();
            }
            let smooth = (lg * (-j / m)).exp();
            let sing = nd.one_minus_sq().powf(-j / m);
            x.powu(idx.i - 1) * smooth * sing
        });
        Ok((v * seg.half, err * seg.half.norm()))
    }
}

struct Segment {
    mid: Complex64,
    half: Complex64,
    uc: Vec<Complex64>,
    log_h0: Complex64,
}

/// Elementary integrals and derived period matrices for one embedding.
#[derive(Clone, Debug)]
pub struct PeriodAssembly {
    pub m: u32,
    pub n: u32,
    pub branch: BranchData,
    pub differentials: Vec<DifferentialIndex>,
    /// `integrals[e][d]` for edge `e` and differential `differentials[d]`.
    pub integrals: Vec<Vec<Complex64>>,
    pub max_error: f64,
}

impl PeriodAssembly {
    pub fn new(curve: &SuperellipticCurve, emb: &ComplexEmbedding, quad: &TanhSinh) -> Result<Self> {
        let (m, n) = (curve.m(), curve.degree() as u32);
        if num_integer::gcd(m, n) != 1 {
            return Err(Error::DeltaNotOne { m, n: n as usize });
        }
        let branch = BranchData::new(curve, emb)?;
        let differentials = holomorphic_differentials(m, n);
        let mut integrals = Vec::with_capacity(branch.edges.len());
        let mut max_error = 0.0f64;
        for &e in &branch.edges {
            let mut row = Vec::with_capacity(differentials.len());
            for &d in &differentials {
                let (v, err) = branch.elementary_integral(e, d, quad)?;
                max_error = max_error.max(err / v.norm().max(1e-300));
                row.push(v);
            }
            integrals.push(row);
        }
        Ok(PeriodAssembly {
            m,
            n,
            branch,
            differentials,
            integrals,
            max_error,
        })
    }

    pub fn genus(&self) -> usize {
        self.differentials.len()
    }

    fn loop_integral(&self, e: usize, d: usize, l: u32) -> Complex64 {
        cycle_coefficient(self.differentials[d].j, l, self.m) * self.integrals[e][d]
    }

    /// `(P_{σ,τ} ; conj P_{σ̄,τ})` for `τ(α) = ζ^k`, columns `γ_e^{(0)}`.
    pub fn piece_matrix(&self, k: u32) -> Result<Vec<Vec<Complex64>>> {
        let m = self.m;
        let k = k % m;
        if k == 0 {
            return Err(Error::InvalidParams("trivial character has no period".into()));
        }
        let cols = self.branch.edges.len();
        // Rows follow the order of `differentials`, so that the matrix for
        // `m - k` is the entrywise conjugate of the one for `k` (2k ≠ m).
        let mut rows = Vec::new();
        let row = |d: usize, conj: bool| -> Vec<Complex64> {
            (0..cols)
                .map(|e| {
                    let v = self.loop_integral(e, d, 0);
                    if conj {
                        v.conj()
                    } else {
                        v
                    }
                })
                .collect()
        };
        for (d, w) in self.differentials.iter().enumerate() {
            if 2 * k == m {
                continue;
            }
            if (w.j + k) % m == 0 {
                rows.push(row(d, false));
            } else if w.j % m == k {
                rows.push(row(d, true));
            }
        }
        if 2 * k == m {
            for (d, w) in self.differentials.iter().enumerate() {
                if w.j % m == k {
                    rows.push(row(d, false));
                }
            }
            for (d, w) in self.differentials.iter().enumerate() {
                if w.j % m == k {
                    rows.push(row(d, true));
                }
            }
        }
        if rows.len() != cols {
            return Err(Error::NonSquare {
                rows: rows.len(),
                cols,
            });
        }
        Ok(rows)
    }

    /// Deligne period of the piece `τ_k`. For `m = 2` (base field `Q`) this is
    /// the real period, available in genus one.
    pub fn deligne_period(&self, k: u32) -> Result<Complex64> {
        if self.m == 2 {
            return self.real_period().map(|x| Complex64::new(x, 0.0));
        }
        determinant(&self.piece_matrix(k)?)
    }

    /// `2g × 2g` matrix with rows `ω`, `conj ω` and columns `γ_e^{(ℓ)}`, `ℓ < m - 1`.
    pub fn big_period_matrix(&self) -> Vec<Vec<Complex64>> {
        let g = self.genus();
        let mut rows = Vec::with_capacity(2 * g);
        let cols: Vec<(usize, u32)> = (0..self.m - 1)
            .flat_map(|l| (0..self.branch.edges.len()).map(move |e| (e, l)))
            .collect();
        for d in 0..g {
            rows.push(cols.iter().map(|&(e, l)| self.loop_integral(e, d, l)).collect());
        }
        for d in 0..g {
            rows.push(cols.iter().map(|&(e, l)| self.loop_integral(e, d, l).conj()).collect());
        }
        rows
    }

    /// Lower bound for `σ_min / σ_max` of the big period matrix.
    pub fn conditioning(&self) -> Result<f64> {
        let a = self.big_period_matrix();
        let inv = inverse(&a)?;
        Ok(1.0 / (frobenius(&a) * frobenius(&inv)))
    }

    /// Smallest positive real element of the period lattice (genus one, `m = 2`).
    pub fn real_period(&self) -> Result<f64> {
        if self.m != 2 || self.genus() != 1 {
            return Err(Error::InvalidParams("real period needs an elliptic curve".into()));
        }
        let w1 = self.loop_integral(0, 0, 0);
        let w2 = self.loop_integral(1, 0, 0);
        let mut best = f64::INFINITY;
        for a in -6i32..=6 {
            for b in -6i32..=6 {
                let z = w1 * a as f64 + w2 * b as f64;
                if z.norm() > 1e-12 && z.im.abs() < 1e-9 * z.norm() {
                    best = best.min(z.norm());
                }
            }
        }
        if best.is_finite() {
            Ok(best)
        } else {
            Err(Error::NumericallySingular("no real period found".into()))
        }
    }
}

/// Arithmetic–geometric mean of positive reals.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        let (na, nb) = ((a + b) / 2.0, (a * b).sqrt());
        a = na;
        b = nb;
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
    }
    a
}

fn lu(a: &[Vec<Complex64>]) -> Result<(Vec<Vec<Complex64>>, Vec<usize>, f64)> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::NonSquare {
            rows: n,
            cols: a.first().map_or(0, |r| r.len()),
        });
    }
    let mut m = a.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm()))
            .unwrap();
        if m[piv][col].norm() == 0.0 {
            return Err(Error::Singular);
        }
        if piv != col {
            m.swap(piv, col);
            perm.swap(piv, col);
            sign = -sign;
        }
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            m[r][col] = f;
            for c in col + 1..n {
                let t = m[col][c];
                m[r][c] -= f * t;
            }
        }
    }
    Ok((m, perm, sign))
}

pub fn determinant(a: &[Vec<Complex64>]) -> Result<Complex64> {
    if a.is_empty() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let (m, _, sign) = match lu(a) {
        Ok(x) => x,
        Err(Error::Singular) => return Ok(Complex64::new(0.0, 0.0)),
        Err(e) => return Err(e),
    };
    let mut d = Complex64::new(sign, 0.0);
    for (i, row) in m.iter().enumerate() {
        d *= row[i];
    }
    Ok(d)
}

pub fn inverse(a: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
    let n = a.len();
    let (m, perm, _) = lu(a)?;
    let mut inv = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for col in 0..n {
        let mut x: Vec<Complex64> = (0..n)
            .map(|r| Complex64::new(if perm[r] == col { 1.0 } else { 0.0 }, 0.0))
            .collect();
        for r in 0..n {
            for c in 0..r {
                let t = m[r][c] * x[c];
                x[r] -= t;
            }
        }
        for r in (0..n).rev() {
            for c in r + 1..n {
                let t = m[r][c] * x[c];
                x[r] -= t;
            }
            x[r] /= m[r][r];
        }
        for r in 0..n {
            inv[r][col] = x[r];
        }
    }
    Ok(inv)
}

fn frobenius(a: &[Vec<Complex64>]) -> f64 {
    a.iter().flatten().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(super) fn curve(m: u32, f: &[&str]) -> SuperellipticCurve {
        SuperellipticCurve::parse(m, f).unwrap()
    }

    fn quad() -> TanhSinh {
        TanhSinh::default()
    }

    #[test]
    fn roots_examples() {
        let e = curve(2, &["0", "-1", "0", "1"]);
        let r = find_roots(&e, &ComplexEmbedding::canonical(2)).unwrap();
        for (x, want) in r.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((x - c(want, 0.0)).norm() < 1e-14);
        }
        let r = polynomial_roots(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        for x in r {
            assert!((x.norm() - 1.0).abs() < 1e-14);
            let ang = x.arg() / (PI / 4.0);
            assert!((ang - ang.round()).abs() < 1e-12 && (ang.round() as i64).rem_euclid(2) == 1);
        }
        let p = curve(3, &["z - 2", "0", "z", "1", "1"]);
        assert_eq!(find_roots(&p, &ComplexEmbedding::canonical(3)).unwrap().len(), 4);
    }

    #[test]
    fn double_root_converges() {
        let bad = polynomial_roots(&[c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((bad[0] - bad[1]).norm() < 1e-6);
    }

    #[test]
    fn tree_examples() {
        assert_eq!(spanning_tree(&[c(0.0, 0.0), c(1.0, 1.0)]), vec![(0, 1)]);
        let mut t = spanning_tree(&[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        t.sort();
        assert_eq!(t, vec![(0, 1), (1, 2)]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]
            #[test]
            fn tree_is_spanning(pts in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 4)) {
                let roots: Vec<Complex64> = pts.iter().map(|&(a, b)| c(a, b)).collect();
                let t = spanning_tree(&roots);
                prop_assert_eq!(t.len(), 3);
                let mut parent: Vec<usize> = (0..4).collect();
                fn find(p: &mut Vec<usize>, x: usize) -> usize {
                    if p[x] == x { x } else { let r = find(p, p[x]); p[x] = r; r }
                }
                for (a, b) in t {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    prop_assert_ne!(ra, rb);
                    parent[ra] = rb;
                }
            }
        }
    }

    #[test]
    fn differential_counts() {
        for (m, n) in [(2u32, 3u32), (2, 5), (2, 7), (3, 4), (3, 5), (3, 7), (4, 3), (4, 5), (4, 7)] {
            let w = holomorphic_differentials(m, n);
            assert_eq!(w.len() as u32, (m - 1) * (n - 1) / 2, "m={m} n={n}");
        }
        assert_eq!(
            holomorphic_differentials(3, 4),
            vec![
                DifferentialIndex { i: 1, j: 1 },
                DifferentialIndex { i: 1, j: 2 },
                DifferentialIndex { i: 2, j: 2 }
            ]
        );
    }

    #[test]
    fn cycle_coefficients() {
        assert!((cycle_coefficient(1, 0, 2) - c(2.0, 0.0)).norm() < 1e-15);
        for m in 2..=4 {
            for j in 1..m {
                let s: Complex64 = (0..m).map(|l| cycle_coefficient(j, l, m)).sum();
                assert!(s.norm() < 1e-14);
            }
        }
    }

    #[test]
    fn elliptic_period_matches_agm() {
        // y^2 = x^3 - x has ∫_1^∞ dx/y = π / AGM(√2, 1); the loop around a
        // segment picks up the cycle coefficient 1 - ζ_2^{-1} = 2.
        let want = 2.0 * PI / agm(2f64.sqrt(), 1.0);
        let e = curve(2, &["0", "-1", "0", "1"]);
        let pa = PeriodAssembly::new(&e, &ComplexEmbedding::canonical(2), &quad()).unwrap();
        let omega = pa.real_period().unwrap();
        assert!((omega - want).abs() < 1e-10 * want);
        // Loop over (0, 1) on sheet 0 is purely imaginary with the same modulus.
        let w = pa.loop_integral(1, 0, 0);
        assert!((w.norm() - omega).abs() < 1e-10 * omega && w.re.abs() < 1e-10);
    }

    #[test]
    fn quadrature_converged() {
        let p = curve(3, &["z - 2", "0", "z", "1", "1"]);
        let emb = ComplexEmbedding::canonical(3);
        let a = PeriodAssembly::new(&p, &emb, &quad()).unwrap();
        let fine = TanhSinh {
            tol: 1e-16,
            max_level: 11,
            t_max: 6.5,
        };
        let b = PeriodAssembly::new(&p, &emb, &fine).unwrap();
        for (ra, rb) in a.integrals.iter().zip(&b.integrals) {
            for (x, y) in ra.iter().zip(rb) {
                assert!((x - y).norm() < 1e-11 * y.norm());
            }
        }
    }

    #[test]
    fn polynomial_weight_linearity() {
        // I(x ω_{1,j}) equals I(ω_{2,j}); integrate (x - mid) separately.
        let p = curve(3, &["z - 2", "0", "z", "1", "1"]);
        let bd = BranchData::new(&p, &ComplexEmbedding::canonical(3)).unwrap();
        let e = bd.edges[0];
        let w2 = bd.elementary_integral(e, DifferentialIndex { i: 2, j: 2 }, &quad()).unwrap().0;
        let w1 = bd.elementary_integral(e, DifferentialIndex { i: 1, j: 2 }, &quad()).unwrap().0;
        let seg = bd.segment_setup(e.0, e.1).unwrap();
        let (t, _) = quad().integrate(|nd| {
            let mut lg = seg.log_h0;
            for cc in &seg.uc {
                lg += (c(1.0, 0.0) - nd.u / cc).ln();
            }
            (lg * (-2.0 / 3.0)).exp() * nd.one_minus_sq().powf(-2.0 / 3.0) * nd.u
        });
        let via_shift = seg.mid * w1 + seg.half * seg.half * t;
        assert!((via_shift - w2).norm() < 1e-12 * w2.norm());
    }

    fn table_curves() -> Vec<SuperellipticCurve> {
        vec![
            curve(3, &["z - 2", "0", "z", "1", "1"]),
            curve(3, &["0", "1 + z", "0", "-3", "1"]),
            curve(4, &["0", "z", "0", "1"]),
            curve(4, &["0", "-1 + z", "z", "1"]),
        ]
    }

    #[test]
    fn conjugate_pieces_have_conjugate_periods() {
        for cv in table_curves() {
            let m = cv.m();
            let pa = PeriodAssembly::new(&cv, &ComplexEmbedding::canonical(m), &quad()).unwrap();
            for k in (1..m).filter(|&k| 2 * k != m) {
                let a = pa.deligne_period(k).unwrap();
                let b = pa.deligne_period(m - k).unwrap();
                assert!((a - b.conj()).norm() < 1e-9 * a.norm());
            }
        }
    }

    #[test]
    fn big_matrix_nonsingular() {
        for cv in table_curves() {
            let m = cv.m();
            let pa = PeriodAssembly::new(&cv, &ComplexEmbedding::canonical(m), &quad()).unwrap();
            assert!(pa.conditioning().unwrap() > 1e-8);
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let a = vec![vec![c(1.0, 1.0), c(2.0, 0.0)], vec![c(0.0, -1.0), c(3.0, 0.5)]];
        let d = determinant(&a).unwrap();
        assert!((d - (c(1.0, 1.0) * c(3.0, 0.5) - c(2.0, 0.0) * c(0.0, -1.0))).norm() < 1e-14);
        let inv = inverse(&a).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let s: Complex64 = (0..2).map(|k| a[i][k] * inv[k][j]).sum();
                assert!((s - c(if i == j { 1.0 } else { 0.0 }, 0.0)).norm() < 1e-14);
            }
        }
    }
}
