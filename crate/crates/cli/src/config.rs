//! JSON curve configurations.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use piecel_core::lseries::BadFactor;
use piecel_core::{CharacterTau, CycloElem, EvalParams, SuperellipticCurve};
use serde::{Deserialize, Serialize};

use crate::core_err;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BadMode {
    Trivial,
    SpecialFibre,
}

/// Override at a bad rational prime: a mode name or ascending coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BadPrimeSpec {
    Mode(BadMode),
    Polynomial(Vec<String>),
}

/// `N_Q` itself, or an inclusive exponent range per prime (keys are the
/// primes in decimal).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConductorSpec {
    Exact(u64),
    Ranges(BTreeMap<String, [u32; 2]>),
}

impl ConductorSpec {
    pub fn ranges(&self) -> Result<BTreeMap<u64, [u32; 2]>> {
        match self {
            ConductorSpec::Exact(_) => Ok(BTreeMap::new()),
            ConductorSpec::Ranges(r) => r
                .iter()
                .map(|(p, &e)| {
                    let q: u64 = p.parse().with_context(|| format!("config: conductor prime '{p}'"))?;
                    if e[0] > e[1] {
                        bail!("config: empty exponent range at {q}");
                    }
                    Ok((q, e))
                })
                .collect(),
        }
    }
}

fn default_k() -> i64 {
    1
}

fn default_digits() -> u32 {
    8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub m: u32,
    /// Coefficients of `f`, constant term first.
    pub f: Vec<String>,
    #[serde(default = "default_k")]
    pub k: i64,
    #[serde(default)]
    pub bad_primes: BTreeMap<u64, BadPrimeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductor: Option<ConductorSpec>,
    #[serde(default = "default_digits")]
    pub digits: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_split: Option<f64>,
}

impl CurveConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: CurveConfig = serde_json::from_str(text).context("config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("loading {}", path.display()))
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    fn validate(&self) -> Result<()> {
        self.curve()?;
        self.bad_factors()?;
        if let Some(c) = &self.conductor {
            c.ranges()?;
        }
        Ok(())
    }

    pub fn curve(&self) -> Result<SuperellipticCurve> {
        let f: Vec<&str> = self.f.iter().map(String::as_str).collect();
        SuperellipticCurve::parse(self.m, &f).map_err(core_err("twistcount"))
    }

    pub fn tau(&self) -> CharacterTau {
        CharacterTau::new(self.m, self.k)
    }

    pub fn bad_factors(&self) -> Result<BTreeMap<u64, BadFactor>> {
        let mut out = BTreeMap::new();
        for (&p, spec) in &self.bad_primes {
            let b = match spec {
                BadPrimeSpec::Mode(BadMode::Trivial) => BadFactor::Trivial,
                BadPrimeSpec::Mode(BadMode::SpecialFibre) => BadFactor::SpecialFibre,
                BadPrimeSpec::Polynomial(cs) => BadFactor::Polynomial(
                    cs.iter()
                        .map(|s| CycloElem::parse(self.m, s))
                        .collect::<piecel_core::Result<_>>()
                        .map_err(core_err("cyclotomic"))?,
                ),
            };
            out.insert(p, b);
        }
        Ok(out)
    }

    /// Every conductor allowed by the config, ascending.
    pub fn conductor_candidates(&self) -> Result<Vec<u128>> {
        match &self.conductor {
            None => bail!("config: no conductor given"),
            Some(ConductorSpec::Exact(n)) => Ok(vec![*n as u128]),
            Some(spec @ ConductorSpec::Ranges(_)) => {
                let mut out = vec![1u128];
                for (p, [lo, hi]) in spec.ranges()? {
                    let mut next = Vec::new();
                    for c in &out {
                        for e in lo..=hi {
                            next.push(c * (p as u128).pow(e));
                        }
                    }
                    out = next;
                }
                out.sort_unstable();
                Ok(out)
            }
        }
    }

    pub fn conductor(&self) -> Result<u128> {
        let c = self.conductor_candidates()?;
        if c.len() != 1 {
            bail!("config: conductor is a range of {} candidates; run condsearch", c.len());
        }
        Ok(c[0])
    }

    pub fn params(&self) -> EvalParams {
        let mut p = EvalParams::with_digits(self.digits);
        if let Some(t) = self.t_split {
            p.t_split = t;
        }
        p
    }
}
