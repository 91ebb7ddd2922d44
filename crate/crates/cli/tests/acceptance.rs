//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! `cargo test --release -p piecel --test acceptance -- --nocapture` shows the
//! report.

use std::path::PathBuf;
use std::time::Instant;

use piecel::commands::{self, OracleStatus, Session};
use piecel::CurveConfig;
use piecel_core::cyclotomic::{is_prime, split_prime, CycloInt};
use piecel_core::euler::{local_factors_all, newton_to_poly, piece_power_sums, CharacterTau};
use piecel_core::gamma::GammaFactor;
use piecel_core::lseries::{mellin_kernel, EvalParams};
use piecel_core::periods::{polynomial_roots, PeriodAssembly};
use piecel_core::quadrature::TanhSinh;
use piecel_core::recognize::{recognize, OmegaType};
use piecel_core::twistcount::{good_prime_test, trace_table, ReducedCurve, TwistConvention};
use piecel_core::{Complex64, ComplexEmbedding, CycloElem, PrimeIdealData, SuperellipticCurve};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(name: &str) -> CurveConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(format!("{name}.json"));
    CurveConfig::load(&path).unwrap()
}

fn session(name: &str) -> Session {
    Session::new(config(name), None, None).unwrap()
}

/// Good prime ideals of norm at most `q_max`.
fn good_ideals(c: &SuperellipticCurve, q_max: u64) -> Vec<PrimeIdealData> {
    let mut out = Vec::new();
    for p in (2..=q_max).filter(|&p| is_prime(p)) {
        for id in split_prime(p, c.m()).unwrap() {
            if id.q <= q_max && good_prime_test(c, &id) {
                out.push(id);
            }
        }
    }
    out
}

const ORACLE_CURVES: [&str; 3] = ["elliptic32", "picard_a", "quartic_a"];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn zeta(m: u32) -> Complex64 {
    ComplexEmbedding::canonical(m).zeta_value
}

/// `z` and `target` agree up to complex conjugation and a root of unity of `Q(ζ_m)`.
fn equivalent(z: Complex64, target: Complex64, m: u32) -> bool {
    let order = if m == 3 { 6 } else { 4 };
    let u = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / order as f64);
    (0..order).any(|j| {
        let w = u.powi(j);
        (z - w * target).norm() < 1e-12 || (z - w * target.conj()).norm() < 1e-12
    })
}

fn c1_oracle() -> Outcome {
    let t0 = Instant::now();
    let mut detail = Vec::new();
    let mut ok = true;
    for name in ORACLE_CURVES {
        let s = session(name);
        let r = commands::oracle(&s, 100).unwrap();
        let fails = r.rows.iter().filter(|x| x.status == OracleStatus::Fail).count();
        let expected = good_ideals(&s.curve, 100).len();
        let passed = r.rows.iter().filter(|x| x.status == OracleStatus::Pass).count();
        ok &= fails == 0 && passed == expected;
        detail.push(format!("{name}: {passed}/{expected}"));
    }
    let secs = t0.elapsed().as_secs_f64();
    outcome(ok && secs < 60.0, format!("{}  ({secs:.1} s)", detail.join(", ")))
}

fn c2_truncation() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for name in ORACLE_CURVES {
        let c = session(name).curve;
        let n = c.degree();
        for id in good_ideals(&c, 100) {
            let tt = trace_table(&c, &id, n, TwistConvention::PerExtension, 0).unwrap();
            for k in 1..c.m() {
                let ps = piece_power_sums(&tt, CharacterTau::new(c.m(), k as i64)).unwrap();
                let poly = newton_to_poly(&ps, n, c.m());
                checked += 1;
                if !poly[n].is_zero() {
                    bad.push(format!("{name} q={} k={k}", id.q));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} factors, degree-n coefficient nonzero: {bad:?}"))
}

fn c3_purity() -> Outcome {
    let mut worst = 0.0f64;
    let mut roots_seen = 0;
    for name in ORACLE_CURVES {
        let c = session(name).curve;
        let embs = [ComplexEmbedding::canonical(c.m()), ComplexEmbedding::canonical(c.m()).conjugated()];
        for id in good_ideals(&c, 100) {
            let q = id.q as f64;
            for f in local_factors_all(&c, &id, c.piece_dimension(), 0).unwrap() {
                if f.coeffs.len() < 2 {
                    continue;
                }
                assert!(f.is_complete());
                for e in &embs {
                    let cs: Vec<Complex64> = f.coeffs.iter().map(|x| x.embed(e)).collect();
                    for r in polynomial_roots(&cs).unwrap() {
                        worst = worst.max((r.norm() - q.powf(-0.5)).abs());
                        roots_seen += 1;
                    }
                }
            }
        }
    }
    outcome(worst < 1e-6, format!("{roots_seen} roots, max ||r| - q^-1/2| = {worst:.2e}"))
}

fn c4_galois() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for name in ORACLE_CURVES {
        let c = session(name).curve;
        let m = c.m();
        for id in good_ideals(&c, 100) {
            let fs = local_factors_all(&c, &id, c.piece_dimension(), 0).unwrap();
            for s in (1..m as i64).filter(|&s| num_integer::gcd(s, m as i64) == 1) {
                for k in 0..m as usize {
                    checked += 1;
                    if fs[k].galois(s).coeffs != fs[(k * s as usize) % m as usize].coeffs {
                        bad.push(format!("{name} q={} k={k} s={s}", id.q));
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} maps checked, mismatches: {bad:?}"))
}

const PICARD_A_CONTROL: u128 = 177147 * 637;
const PICARD_A_L: Complex64 = Complex64::new(1.8460900297, -1.5447030118);

fn c5_to_c7() -> [Outcome; 3] {
    let t0 = Instant::now();
    let s = session("picard_a");
    let series = s.configured_series().unwrap();
    let fe = commands::fe_report(&s, &series).unwrap();
    let mut control = series.clone();
    control.conductor = PICARD_A_CONTROL;
    let fe_c = commands::fe_report(&s, &control).unwrap();
    let c5 = outcome(
        fe.residual < 1e-6 && fe_c.residual > 1e-2 && series.len() <= 30000,
        format!(
            "N_Q = {}: residual {:.2e} ({} coefficients, D = {}); control N_Q = {}: {:.2e}  ({:.1} s)",
            fe.conductor,
            fe.residual,
            series.len(),
            fe.digits,
            PICARD_A_CONTROL,
            fe_c.residual,
            t0.elapsed().as_secs_f64()
        ),
    );

    let pa = s.periods().unwrap();
    let d = commands::deligne_of(&s, &series, &pa).unwrap();
    let l = d.l.value;
    let err = (l - PICARD_A_L).norm().min((l - PICARD_A_L.conj()).norm());
    let c6 = outcome(err < 1e-5, format!("L(1) = {l:.10}, distance to the reference or its conjugate {err:.2e}"));

    let r = &d.recognition;
    let target = (zeta(3) - 1.0) / 81.0;
    let ok = r.certified && r.c == 81 && r.error < 81f64.powi(-4) && equivalent(r.value(), target, 3);
    let c7 = outcome(
        ok,
        format!(
            "(a, b, c) = ({}, {}, {}) = {r}, error {:.2e}, certified {}; reference (-1, 1, 81)",
            r.a, r.b, r.c, r.error, r.certified
        ),
    );
    [c5, c6, c7]
}

fn c8_search() -> Outcome {
    let t0 = Instant::now();
    let s = session("picard_b");
    let cands = s.config.conductor_candidates().unwrap();
    let largest = *cands.last().unwrap();
    let mut series = s.series(largest, s.coefficient_count(largest).unwrap()).unwrap();
    let report = commands::search_with(&s, &series, &cands).unwrap();
    let e3 = report.exponents[&3];
    series.conductor = report.best();
    let d = commands::deligne_of(&s, &series, &s.periods().unwrap()).unwrap();
    let r = &d.recognition;
    let target = zeta(3) / 81.0;
    let ok = e3 == 18
        && report.search.below_threshold
        && report.threshold <= 1e-5
        && r.certified
        && r.c == 81
        && equivalent(r.value(), target, 3);
    outcome(
        ok,
        format!(
            "selected 3^{e3} (residual {:.2e}, gap {:.1e}); (a, b, c) = ({}, {}, {}) = {r}, certified {}; reference (0, 1, 81)  ({:.1} s)",
            report.search.trials[report.search.best].residual,
            report.search.gap,
            r.a,
            r.b,
            r.c,
            r.certified,
            t0.elapsed().as_secs_f64()
        ),
    )
}

fn c9_table() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, want) in [("quartic_a", (1i64, -2i64)), ("quartic_b", (3, -1))] {
        let t0 = Instant::now();
        let s = session(name);
        let d = commands::deligne(&s).unwrap();
        let r = &d.recognition;
        let z = d.quotient * 160.0;
        let got = d.scaled();
        let hit = got.is_some_and(|g| g == want || g == (want.0, -want.1));
        let err = (z - Complex64::new(want.0 as f64, want.1 as f64))
            .norm()
            .min((z - Complex64::new(want.0 as f64, -want.1 as f64)).norm());
        ok &= hit && r.certified && err < 1e-5;
        detail.push(format!(
            "{name}: 160*L/Omega = {z:.8} recognized {got:?} certified {}, reference {} {:+}i  ({:.1} s)",
            r.certified,
            want.0,
            want.1,
            t0.elapsed().as_secs_f64()
        ));
    }
    outcome(ok, detail.join("; "))
}

fn agm_oracle(mut a: f64, mut b: f64) -> f64 {
    while (a - b).abs() > 1e-16 * a {
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    a
}

/// Distance from `z` to the nearest root of unity in `Q(ζ_m)`.
fn unit_distance(z: Complex64, m: u32) -> f64 {
    let order = if m == 3 { 6 } else { 4 };
    let u = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / order as f64);
    (0..order).map(|j| (z - u.powi(j)).norm()).fold(f64::INFINITY, f64::min)
}

fn c10_periods() -> Outcome {
    let s = session("elliptic32");
    let omega = s.periods().unwrap().real_period().unwrap();
    // Least real period = 2 * pi / agm(sqrt 2, 1).
    let oracle = 2.0 * std::f64::consts::PI / agm_oracle(2f64.sqrt(), 1.0);
    let rel = (omega - oracle).abs() / oracle;
    let mut ok = rel < 1e-10;
    let mut detail = vec![format!("real period {omega:.15} vs AGM {oracle:.15} (rel {rel:.1e})")];
    for name in ["picard_a", "picard_b", "quartic_a"] {
        let s = session(name);
        let m = s.curve.m();
        let pa = s.periods().unwrap();
        let r = commands::period_report(&s, &pa).unwrap();
        // Same pieces from an independent quadrature on the conjugate curve,
        // whose cycle basis may differ by a root of unity.
        let pb = PeriodAssembly::new(&s.curve, &ComplexEmbedding::canonical(m).conjugated(), &TanhSinh::default())
            .unwrap();
        let oa = pb.deligne_period(r.k).unwrap();
        let ob = pb.deligne_period(m - r.k).unwrap();
        let cross = unit_distance(oa / r.omega.conj(), m).max(unit_distance(ob / r.omega_dual.conj(), m));
        let e = r.conjugation_error().max(cross);
        ok &= e < 1e-9;
        detail.push(format!("{name}: conjugation {:.1e}, conjugate curve {cross:.1e}", r.conjugation_error()));
    }
    outcome(ok, detail.join("; "))
}

// ---------------------------------------------------------------- properties

const INSTANCES: usize = 60;

fn random_curve(rng: &mut ChaCha8Rng) -> SuperellipticCurve {
    loop {
        let (m, n) = [(3u32, 4usize), (4, 3), (2, 3), (2, 5), (3, 5)][rng.gen_range(0..5)];
        let d = if m == 2 { 1 } else { 2 };
        let mut cs: Vec<CycloElem> = (0..n)
            .map(|_| {
                let v: Vec<i64> = (0..d).map(|_| rng.gen_range(-3..=3)).collect();
                CycloElem::from_ints(m, &v)
            })
            .collect();
        cs.push(CycloElem::one(m));
        if let Ok(c) = SuperellipticCurve::new(m, cs) {
            return c;
        }
    }
}

/// Points on `u·y^m = f(x)` by exponentiation: `#{y : y^m = a}` is `m` when
/// `a^{(Q-1)/m} = 1`, one point at infinity.
fn brute_count(rc: &ReducedCurve, u: piecel_core::finitefield::FqElem) -> u64 {
    let fld = rc.field();
    let size = fld.size();
    let e = (size - 1) / rc.m as u128;
    let ui = fld.inv(u).unwrap();
    let one = fld.from_u64(1);
    let mut n = 1u64;
    for j in 0..size {
        let a = fld.mul(fld.eval_poly(&rc.coeffs, fld.element_at(j)), ui);
        n += if a.is_zero() {
            1
        } else if fld.pow(a, e) == one {
            rc.m as u64
        } else {
            0
        };
    }
    n
}

fn random_good_ideal(c: &SuperellipticCurve, rng: &mut ChaCha8Rng, q_max: u64) -> Option<PrimeIdealData> {
    for _ in 0..20 {
        let p = rng.gen_range(2..q_max);
        if !is_prime(p) {
            continue;
        }
        let ids: Vec<_> = split_prime(p, c.m())
            .unwrap()
            .into_iter()
            .filter(|id| id.q <= q_max && good_prime_test(c, id))
            .collect();
        if !ids.is_empty() {
            let i = rng.gen_range(0..ids.len());
            return Some(ids[i].clone());
        }
    }
    None
}

fn p_twist_independence(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut n = 0;
    while n < INSTANCES {
        let c = random_curve(rng);
        let Some(id) = random_good_ideal(&c, rng, 60) else { continue };
        let i = if id.q * id.q <= 2000 { rng.gen_range(1..=2) } else { 1 };
        let rc = ReducedCurve::new(&c, &id, i, rng.gen()).unwrap();
        let l = rng.gen_range(0..c.m());
        let u1 = rc.unit_for_exponent(l, rng.gen());
        let u2 = rc.unit_for_exponent(l, rng.gen());
        let (a, b) = (rc.twist(u1).unwrap().count_points(), rc.twist(u2).unwrap().count_points());
        let want = brute_count(&rc, u2);
        if a != b || a != want {
            return Err(format!("q={} i={i} l={l}: {a} {b} {want}", id.q));
        }
        n += 1;
    }
    Ok(n)
}

fn p_trivial_vanishing(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut n = 0;
    while n < INSTANCES {
        let c = random_curve(rng);
        let Some(id) = random_good_ideal(&c, rng, 100) else { continue };
        let depth = if id.q <= 20 { 2 } else { 1 };
        let tt = trace_table(&c, &id, depth, TwistConvention::PerExtension, rng.gen()).unwrap();
        for i in 1..=depth {
            let s: i64 = (0..c.m()).map(|l| tt.get(l, i)).sum();
            if s != 0 {
                return Err(format!("q={} i={i}: sum {s}", id.q));
            }
        }
        n += 1;
    }
    Ok(n)
}

fn p_multiplicativity(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut checked = 0;
    for name in ["picard_a", "quartic_b", "elliptic32"] {
        let s = session(name);
        let len = 2000;
        let series = s.series(s.config.conductor().unwrap(), len).unwrap();
        let mut n = 0;
        while n < INSTANCES {
            let a = rng.gen_range(2..=len / 2);
            let b = rng.gen_range(2..=len / a);
            if num_integer::gcd(a, b) != 1 {
                continue;
            }
            let prod: CycloInt = series.exact[a].mul(series.exact[b], series.m);
            if prod != series.exact[a * b] {
                return Err(format!("{name}: a_{a} a_{b} != a_{}", a * b));
            }
            n += 1;
        }
        checked += n;
    }
    Ok(checked)
}

fn p_kernel(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let g = GammaFactor::single();
    let params = EvalParams::default();
    for _ in 0..INSTANCES {
        let s = rng.gen_range(1..9) as f64 / 2.0;
        let x = rng.gen_range(0.1..30.0);
        let v = mellin_kernel(&g, Complex64::new(s, 0.0), x, &params).map_err(|e| e.to_string())?;
        let want = statrs::function::gamma::gamma_ui(s, x);
        let scale = statrs::function::gamma::gamma(s);
        if (v.re - want).abs() > 1e-10 * scale || v.im.abs() > 1e-10 * scale {
            return Err(format!("s={s} x={x}: {v} vs {want}"));
        }
    }
    Ok(INSTANCES)
}

fn p_recognition(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for _ in 0..INSTANCES {
        let om = if rng.gen() { OmegaType::Zeta3 } else { OmegaType::I };
        let (a, b, c): (i64, i64, i64) = (rng.gen_range(-16..=16), rng.gen_range(-16..=16), rng.gen_range(1..=160));
        let g = num_integer::gcd(num_integer::gcd(a, b), c);
        let (a, b, c) = (a / g, b / g, c / g);
        let exact = (Complex64::new(a as f64, 0.0) + om.value() * b as f64) / c as f64;
        let noise = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * 1e-9;
        let r = recognize(exact + noise, om, 16, 160);
        if (r.a, r.b, r.c) != (a, b, c) || !r.certified {
            return Err(format!("({a}, {b}, {c}) came back as {r}"));
        }
    }
    Ok(INSTANCES)
}

fn c11_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let suites: [(&str, fn(&mut ChaCha8Rng) -> Result<usize, String>); 5] = [
        ("twist choice", p_twist_independence),
        ("trivial character", p_trivial_vanishing),
        ("multiplicativity", p_multiplicativity),
        ("kernel", p_kernel),
        ("recognition", p_recognition),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, f) in suites {
        match f(&mut rng) {
            Ok(n) => detail.push(format!("{name} {n}")),
            Err(e) => {
                ok = false;
                detail.push(format!("{name} FAILED: {e}"));
            }
        }
    }
    outcome(ok, detail.join(", "))
}

#[test]
fn acceptance() {
    let mut results: Vec<Outcome> = vec![c1_oracle(), c2_truncation(), c3_purity(), c4_galois()];
    results.extend(c5_to_c7());
    results.push(c8_search());
    results.push(c9_table());
    results.push(c10_periods());
    results.push(c11_properties());
    let mut failed = Vec::new();
    for (i, r) in results.iter().enumerate() {
        println!("criterion {:>2}: {}  {}", i + 1, if r.pass { "PASS" } else { "FAIL" }, r.detail);
        if !r.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
