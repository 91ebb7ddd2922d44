//! The pipeline commands. Each returns a report whose `Display` is what the
//! binary prints.

use std::collections::BTreeMap;
use std::fmt;

use anyhow::{Context, Result};
use piecel_core::cyclotomic::{is_prime, split_prime};
use piecel_core::euler::{factor_from_table, factorization_check, local_factor, FactorSource, ORACLE_MAX_Q};
use piecel_core::gamma::GammaFactor;
use piecel_core::lseries::{
    self, conductor_search, evaluate_l, fe_residual, gamma_pairs, lcf_required, prime_level_factor, BadFactor,
    ConductorSearch,
};
use piecel_core::periods::PeriodAssembly;
use piecel_core::quadrature::TanhSinh;
use piecel_core::recognize::{recognize, OmegaType, RecognitionResult};
use piecel_core::twistcount::{good_prime_test, special_fibre_table};
use piecel_core::{Complex64, ComplexEmbedding, CycloElem, PieceLSeries, SuperellipticCurve};
use rayon::prelude::*;

use crate::cache::{self, FactorCache};
use crate::config::CurveConfig;
use crate::core_err;

/// Search box for `L/Ω ≈ (a + bω)/c`.
pub const RECOGNITION_A: i64 = 16;
pub const RECOGNITION_C: i64 = 160;

/// Settings shared by every command; flags override the config.
#[derive(Clone, Debug)]
pub struct Session {
    pub config: CurveConfig,
    pub curve: SuperellipticCurve,
    pub seed: u64,
}

impl Session {
    pub fn new(mut config: CurveConfig, digits: Option<u32>, seed: Option<u64>) -> Result<Self> {
        if let Some(d) = digits {
            config.digits = d;
        }
        let curve = config.curve()?;
        let seed = seed.unwrap_or(config.seed);
        Ok(Session { config, curve, seed })
    }

    /// Identifies the curve in cache headers.
    pub fn curve_id(&self) -> String {
        serde_json::json!({"m": self.config.m, "f": self.config.f}).to_string()
    }

    pub fn open_cache(&self, path: Option<&std::path::Path>) -> Result<FactorCache> {
        match path {
            Some(p) => FactorCache::open(p, self.config.m, &self.curve_id()),
            None => Ok(FactorCache::in_memory(self.config.m, &self.curve_id())),
        }
    }

    fn gamma(&self) -> GammaFactor {
        GammaFactor::pairs(gamma_pairs(self.curve.m(), self.curve.degree()))
    }

    /// Configured coefficient count, else the length estimate for `conductor`.
    pub fn coefficient_count(&self, conductor: u128) -> Result<usize> {
        match self.config.coeffs {
            Some(n) => Ok(n),
            None => lcf_required(conductor, self.config.digits, &self.gamma(), &self.config.params())
                .map_err(core_err("lseries")),
        }
    }

    /// Dirichlet coefficients `a_1..a_n`, one local factor per prime in parallel.
    pub fn series(&self, conductor: u128, n: usize) -> Result<PieceLSeries> {
        let bad = self.config.bad_factors()?;
        let tau = self.config.tau();
        let primes: Vec<u64> = (2..=n as u64).filter(|&p| is_prime(p)).collect();
        let factors = primes
            .par_iter()
            .map(|&p| prime_level_factor(&self.curve, tau, p, n as u64, &bad, self.seed))
            .collect::<piecel_core::Result<Vec<_>>>()
            .map_err(core_err("lseries"))?;
        let mut s = PieceLSeries::from_prime_factors(self.curve.m(), tau.k, n, &factors, conductor, self.gamma())
            .map_err(core_err("lseries"))?;
        s.bad_factors = bad;
        Ok(s)
    }

    pub fn configured_series(&self) -> Result<PieceLSeries> {
        let n_q = self.config.conductor()?;
        self.series(n_q, self.coefficient_count(n_q)?)
    }

    pub fn periods(&self) -> Result<PeriodAssembly> {
        PeriodAssembly::new(&self.curve, &ComplexEmbedding::canonical(self.curve.m()), &TanhSinh::default())
            .map_err(core_err("periods"))
    }
}

fn poly_text(cs: &[CycloElem]) -> String {
    cs.iter().map(|c| format!("({c})")).collect::<Vec<_>>().join(" ")
}

fn cplx(z: Complex64) -> String {
    if z.im < 0.0 {
        format!("{:.15} - {:.15}i", z.re, -z.im)
    } else {
        format!("{:.15} + {:.15}i", z.re, z.im)
    }
}

// ---------------------------------------------------------------- factor

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Computed,
    Cached,
    /// Bad ideal, factor 1 by default.
    Default,
    /// Bad ideal, polynomial taken from the config.
    UserSupplied,
    /// Bad ideal, counted on the singular reduction at the config's request.
    SpecialFibre,
    /// Bad ideal with no override in the config.
    Missing,
}

impl RowStatus {
    fn label(self) -> &'static str {
        match self {
            RowStatus::Computed => "computed",
            RowStatus::Cached => "cached",
            RowStatus::Default => "default",
            RowStatus::UserSupplied => "user-supplied",
            RowStatus::SpecialFibre => "user-supplied: special fibre",
            RowStatus::Missing => "missing",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorRow {
    pub p: u64,
    pub f: u32,
    pub z: String,
    pub k: u32,
    pub status: RowStatus,
    pub coeffs: Vec<CycloElem>,
}

#[derive(Clone, Debug)]
pub struct FactorTable {
    pub rows: Vec<FactorRow>,
}

impl fmt::Display for FactorTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>5} {:>2} {:>3} {:>2}  {:<28} factor", "p", "f", "z", "k", "status")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>5} {:>2} {:>3} {:>2}  {:<28} {}",
                r.p,
                r.f,
                r.z,
                r.k,
                r.status.label(),
                poly_text(&r.coeffs)
            )?;
        }
        Ok(())
    }
}

/// Local factor of every prime ideal of norm-prime `p ≤ bound`.
pub fn factor(s: &Session, bound: u64, cache: &mut FactorCache) -> Result<FactorTable> {
    let c = &s.curve;
    let tau = s.config.tau();
    let bad = s.config.bad_factors()?;
    let mut ideals = Vec::new();
    for p in (2..=bound).filter(|&p| is_prime(p)) {
        ideals.extend(split_prime(p, c.m()).map_err(core_err("cyclotomic"))?);
    }
    let todo: Vec<_> = ideals
        .iter()
        .filter(|id| good_prime_test(c, id) && cache.get(&cache::key(id, tau.k)).is_none())
        .collect();
    let computed = todo
        .par_iter()
        .map(|id| local_factor(c, id, tau, c.piece_dimension(), s.seed).map(|lf| (cache::key(id, tau.k), lf.coeffs)))
        .collect::<piecel_core::Result<Vec<_>>>()
        .map_err(core_err("euler"))?;
    let fresh: BTreeMap<_, _> = computed.into_iter().collect();
    for (k, v) in &fresh {
        cache.insert(k.clone(), v.clone());
    }
    cache.flush().context("writing cache")?;
    let mut rows = Vec::with_capacity(ideals.len());
    for id in &ideals {
        let key = cache::key(id, tau.k);
        let (status, coeffs) = if good_prime_test(c, id) {
            let st = if fresh.contains_key(&key) { RowStatus::Computed } else { RowStatus::Cached };
            (st, cache.get(&key).cloned().unwrap_or_default())
        } else {
            match bad.get(&id.p) {
                None => (RowStatus::Missing, Vec::new()),
                Some(BadFactor::Trivial) => (RowStatus::Default, vec![CycloElem::one(c.m())]),
                Some(BadFactor::Polynomial(cs)) => (RowStatus::UserSupplied, cs.clone()),
                Some(BadFactor::SpecialFibre) => {
                    let t = special_fibre_table(c, id, c.piece_dimension(), s.seed).map_err(core_err("twistcount"))?;
                    let mut lf = factor_from_table(&t, tau, c.degree()).map_err(core_err("euler"))?;
                    while lf.coeffs.len() > 1 && lf.coeffs.last().is_some_and(CycloElem::is_zero) {
                        lf.coeffs.pop();
                    }
                    (RowStatus::SpecialFibre, lf.coeffs)
                }
            }
        };
        rows.push(FactorRow {
            p: id.p,
            f: id.f,
            z: id.zeta_label(),
            k: tau.k,
            status,
            coeffs,
        });
    }
    Ok(FactorTable { rows })
}

// ---------------------------------------------------------------- coeffs

#[derive(Clone, Debug)]
pub struct CoefficientReport {
    pub series: PieceLSeries,
    pub shown: usize,
}

impl fmt::Display for CoefficientReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.series;
        writeln!(f, "coefficients: {}  conductor: {}", s.len(), s.conductor)?;
        for (p, src) in &s.sources {
            let what = match src {
                FactorSource::Default => "default factor 1",
                FactorSource::UserSupplied => "user-supplied factor",
                FactorSource::Computed => "computed",
            };
            writeln!(f, "bad prime {p}: {what}")?;
        }
        for n in 1..=self.shown.min(s.len()) {
            writeln!(f, "a_{n} = {}", s.exact[n].to_elem(s.m))?;
        }
        Ok(())
    }
}

pub fn coeffs(s: &Session, shown: usize) -> Result<CoefficientReport> {
    Ok(CoefficientReport {
        series: s.configured_series()?,
        shown,
    })
}

// ---------------------------------------------------------------- checkfe

#[derive(Clone, Debug)]
pub struct FeReport {
    pub conductor: u128,
    pub coefficients: usize,
    pub digits: u32,
    pub t_split: f64,
    pub residual: f64,
    pub sign: Complex64,
    pub threshold: f64,
}

impl FeReport {
    pub fn passed(&self) -> bool {
        self.residual < self.threshold
    }
}

impl fmt::Display for FeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "conductor: {}", self.conductor)?;
        writeln!(f, "coefficients: {}  digits: {}  split: {}", self.coefficients, self.digits, self.t_split)?;
        writeln!(f, "root number: {}  |w| = {:.12}", cplx(self.sign), self.sign.norm())?;
        writeln!(f, "residual: {:.3e}  threshold: {:.1e}", self.residual, self.threshold)?;
        writeln!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Residual threshold for `D` digits: `10^{2-D}`.
pub fn residual_threshold(digits: u32) -> f64 {
    10f64.powi(2 - digits as i32)
}

pub fn fe_report(s: &Session, series: &PieceLSeries) -> Result<FeReport> {
    let params = s.config.params();
    let (residual, sign) = fe_residual(series, &params).map_err(core_err("lseries"))?;
    Ok(FeReport {
        conductor: series.conductor,
        coefficients: series.len(),
        digits: params.digits,
        t_split: params.t_split,
        residual,
        sign,
        threshold: residual_threshold(params.digits),
    })
}

pub fn checkfe(s: &Session) -> Result<FeReport> {
    fe_report(s, &s.configured_series()?)
}

// ---------------------------------------------------------------- lvalue

#[derive(Clone, Debug)]
pub struct LValueReport {
    pub fe: FeReport,
    pub value: Complex64,
}

impl fmt::Display for LValueReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fe)?;
        writeln!(f, "L(1) = {}", cplx(self.value))
    }
}

pub fn l_value_of(s: &Session, series: &PieceLSeries) -> Result<LValueReport> {
    let params = s.config.params();
    let fe = fe_report(s, series)?;
    let w = lseries::solve_sign(series, &params).map_err(core_err("lseries"))?;
    let mut t = series.clone();
    t.sign = Some(w);
    let value = evaluate_l(&t, Complex64::new(1.0, 0.0), &params).map_err(core_err("lseries"))?;
    Ok(LValueReport { fe, value })
}

pub fn lvalue(s: &Session) -> Result<LValueReport> {
    l_value_of(s, &s.configured_series()?)
}

// ---------------------------------------------------------------- periods

#[derive(Clone, Debug)]
pub struct PeriodReport {
    pub m: u32,
    pub k: u32,
    /// `Ω(τ_k)` and `Ω(τ_{m-k})`; equal and real for `m = 2`.
    pub omega: Complex64,
    pub omega_dual: Complex64,
    pub quadrature_error: f64,
    pub conditioning: f64,
    pub edges: Vec<(usize, usize)>,
}

impl PeriodReport {
    /// `|Ω(τ_{m-k}) - conj Ω(τ_k)| / |Ω(τ_k)|`.
    pub fn conjugation_error(&self) -> f64 {
        (self.omega_dual - self.omega.conj()).norm() / self.omega.norm()
    }
}

impl fmt::Display for PeriodReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "spanning tree: {:?}", self.edges)?;
        if self.m == 2 {
            writeln!(f, "real period = {:.15}", self.omega.re)?;
        } else {
            writeln!(f, "Omega(tau_{}) = {}", self.k, cplx(self.omega))?;
            writeln!(f, "Omega(tau_{}) = {}", self.m - self.k, cplx(self.omega_dual))?;
            writeln!(f, "conjugation error: {:.2e}", self.conjugation_error())?;
        }
        writeln!(f, "quadrature error: {:.2e}", self.quadrature_error)?;
        writeln!(f, "conditioning: {:.2e}", self.conditioning)
    }
}

pub fn period_report(s: &Session, pa: &PeriodAssembly) -> Result<PeriodReport> {
    let m = s.curve.m();
    let k = s.config.tau().k;
    let omega = pa.deligne_period(k).map_err(core_err("periods"))?;
    let omega_dual = pa.deligne_period(m - k).map_err(core_err("periods"))?;
    Ok(PeriodReport {
        m,
        k,
        omega,
        omega_dual,
        quadrature_error: pa.max_error,
        conditioning: pa.conditioning().map_err(core_err("periods"))?,
        edges: pa.branch.edges.clone(),
    })
}

pub fn periods(s: &Session) -> Result<PeriodReport> {
    period_report(s, &s.periods()?)
}

// ---------------------------------------------------------------- deligne

#[derive(Clone, Debug)]
pub struct DeligneReport {
    pub l: LValueReport,
    pub periods: PeriodReport,
    /// `L(τ_k, 1) / Ω(τ_{m-k})`.
    pub quotient: Complex64,
    pub recognition: RecognitionResult,
}

impl DeligneReport {
    /// `160 · (a + bω)/c` in the basis `1, ω` when `c | 160`.
    pub fn scaled(&self) -> Option<(i64, i64)> {
        let r = &self.recognition;
        (RECOGNITION_C % r.c == 0).then(|| (r.a * (RECOGNITION_C / r.c), r.b * (RECOGNITION_C / r.c)))
    }
}

impl fmt::Display for DeligneReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.recognition;
        write!(f, "{}", self.l)?;
        write!(f, "{}", self.periods)?;
        writeln!(
            f,
            "z = L(tau_{}, 1) / Omega(tau_{}) = {}",
            self.periods.k,
            (self.periods.m - self.periods.k) % self.periods.m.max(1),
            cplx(self.quotient)
        )?;
        writeln!(f, "search: |a|, |b| <= {RECOGNITION_A}, 1 <= c <= {RECOGNITION_C}")?;
        writeln!(f, "recognized: {r}  (a, b, c) = ({}, {}, {})", r.a, r.b, r.c)?;
        writeln!(f, "error: {:.3e}  bound 1/c^4: {:.3e}", r.error, r.bound())?;
        if let (Some((a, b)), OmegaType::I) = (self.scaled(), r.omega) {
            let sign = if b < 0 { '-' } else { '+' };
            writeln!(f, "{RECOGNITION_C}*L/Omega ~ {a} {sign} {}i", b.abs())?;
        }
        writeln!(f, "{}", if r.certified { "CERTIFIED" } else { "NOT CERTIFIED" })
    }
}

pub fn deligne_of(s: &Session, series: &PieceLSeries, pa: &PeriodAssembly) -> Result<DeligneReport> {
    let l = l_value_of(s, series)?;
    let periods = period_report(s, pa)?;
    let quotient = l.value / periods.omega_dual;
    let recognition = recognize(quotient, OmegaType::for_index(s.curve.m()), RECOGNITION_A, RECOGNITION_C);
    Ok(DeligneReport {
        l,
        periods,
        quotient,
        recognition,
    })
}

pub fn deligne(s: &Session) -> Result<DeligneReport> {
    deligne_of(s, &s.configured_series()?, &s.periods()?)
}

// ---------------------------------------------------------------- oracle

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleStatus {
    Pass,
    Fail,
    Bad,
    TooLarge,
}

#[derive(Clone, Debug)]
pub struct OracleRow {
    pub p: u64,
    pub f: u32,
    pub z: String,
    pub status: OracleStatus,
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub rows: Vec<OracleRow>,
}

impl OracleReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.status != OracleStatus::Fail)
    }

    pub fn checked(&self) -> usize {
        self.rows.iter().filter(|r| matches!(r.status, OracleStatus::Pass | OracleStatus::Fail)).count()
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let st = match r.status {
                OracleStatus::Pass => "PASS",
                OracleStatus::Fail => "FAIL",
                OracleStatus::Bad => "skip (bad)",
                OracleStatus::TooLarge => "skip (norm above oracle limit)",
            };
            writeln!(f, "{:>5} {:>2} {:>3}  {st}", r.p, r.f, r.z)?;
        }
        writeln!(f, "{} ideals checked, {}", self.checked(), if self.all_pass() { "all PASS" } else { "FAILURES" })
    }
}

/// `∏_k L_P(C^{τ_k}, T)` against the zeta numerator for every ideal above `p ≤ bound`.
pub fn oracle(s: &Session, bound: u64) -> Result<OracleReport> {
    let c = &s.curve;
    let mut ideals = Vec::new();
    for p in (2..=bound).filter(|&p| is_prime(p)) {
        ideals.extend(split_prime(p, c.m()).map_err(core_err("cyclotomic"))?);
    }
    let rows = ideals
        .par_iter()
        .map(|id| {
            let status = if !good_prime_test(c, id) {
                OracleStatus::Bad
            } else if id.q > ORACLE_MAX_Q {
                OracleStatus::TooLarge
            } else if factorization_check(c, id, s.seed)?.holds() {
                OracleStatus::Pass
            } else {
                OracleStatus::Fail
            };
            Ok(OracleRow {
                p: id.p,
                f: id.f,
                z: id.zeta_label(),
                status,
            })
        })
        .collect::<piecel_core::Result<Vec<_>>>()
        .map_err(core_err("euler"))?;
    Ok(OracleReport { rows })
}

// ---------------------------------------------------------------- condsearch

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub search: ConductorSearch,
    pub coefficients: usize,
    pub threshold: f64,
    /// Exponents of the winner at each prime of the config's ranges.
    pub exponents: BTreeMap<u64, u32>,
}

impl SearchReport {
    pub fn best(&self) -> u128 {
        self.search.trials[self.search.best].conductor
    }
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "coefficients: {}", self.coefficients)?;
        for (i, t) in self.search.trials.iter().enumerate() {
            writeln!(
                f,
                "{} {:>16}  residual {:.3e}  |w| {:.9}{}",
                if i == self.search.best { "*" } else { " " },
                t.conductor,
                t.residual,
                t.sign.norm(),
                if t.truncated { "  (truncated)" } else { "" }
            )?;
        }
        writeln!(f, "best: {}  exponents: {:?}", self.best(), self.exponents)?;
        writeln!(f, "gap to runner-up: {:.2e}", self.search.gap)?;
        writeln!(
            f,
            "{}",
            if self.search.below_threshold {
                format!("below threshold {:.1e}", self.threshold)
            } else {
                format!("NOT below threshold {:.1e}", self.threshold)
            }
        )
    }
}

pub fn condsearch(s: &Session) -> Result<SearchReport> {
    let cands = s.config.conductor_candidates()?;
    let largest = *cands.last().expect("candidates are nonempty");
    let n = s.coefficient_count(largest)?;
    let series = s.series(largest, n)?;
    search_with(s, &series, &cands)
}

pub fn search_with(s: &Session, series: &PieceLSeries, cands: &[u128]) -> Result<SearchReport> {
    let params = s.config.params();
    let threshold = residual_threshold(params.digits);
    let search = conductor_search(series, cands, &params, threshold).map_err(core_err("lseries"))?;
    let mut exponents = BTreeMap::new();
    if let Some(spec) = &s.config.conductor {
        let mut rest = search.trials[search.best].conductor;
        for &p in spec.ranges()?.keys() {
            let mut e = 0;
            while rest % p as u128 == 0 {
                rest /= p as u128;
                e += 1;
            }
            exponents.insert(p, e);
        }
    }
    Ok(SearchReport {
        search,
        coefficients: series.len(),
        threshold,
        exponents,
    })
}
