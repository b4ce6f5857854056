//! Randomized and exact checkers for mean properties.
//!
//! Each property has a judge that decides one [`Case`] (a few named sets
//! and scalars). A check first judges the fixed anchor cases for the mean,
//! then `trials` random cases drawn from seeded per-trial streams. Values
//! are compared exactly when both sides are exact; otherwise two values
//! differ only when their enclosures are more than `2^-40` apart.
//!
//! Predicates (`K` is the mean):
//!
//! | property | checked statement |
//! |---|---|
//! | internal | `inf H ≤ K(H) ≤ sup H` |
//! | strict-internal | `inf H′ ≤ K(H) ≤ sup H′` when `H′ ≠ ∅` |
//! | monotone | `sup H₁ ≤ inf H₂ ⇒ K(H₁) ≤ K(H₁∪H₂) ≤ K(H₂)` |
//! | disjoint-monotone | as monotone, for disjoint `H₁, H₂` ordered by `K` |
//! | union-monotone | `B∩C = ∅, K(A) ≤ K(A∪B), K(A) ≤ K(A∪C) ⇒ K(A) ≤ K(A∪B∪C)`, and with `≥` |
//! | mean-monotone | `sup K₁ ≤ K(H) ≤ inf K₂ ⇒ K(H∪K₁) ≤ K(H) ≤ K(H∪K₂)` |
//! | equi-monotone | `H₁∩H₂ = ∅, K(H₁∪H₂) = K(H₁) ⇒ K(H₁) = K(H₂)` |
//! | slice-continuous | `K(H^{y−})`, `K(H^{y+})` at `y = x − η, x, x + η` agree within `2^-20` |
//! | point-continuous | `|K(H − S(x,η)) − K(H)| ≤ 2^-20` |
//! | cantor-continuous | `K(H_j) → K(⋂H_j)` along decreasing chains |
//! | cantor-continuous-compact | the same for compact chains |
//! | u-cantor-continuous | `K(⋃_{i≤n} H_i) → K(⋃H_i)` for disjoint pieces |
//! | u-bounded | `|K(H)−K(H∪H₁∪H₂)| ≤ |K(H)−K(H∪H₁)| + |K(H)−K(H∪H₂)|`, `H₁∩H₂ = ∅` |
//! | u-bounded-overlap | the same inequality without disjointness |
//! | u-bounded-n-fold | the `n`-set version, `n ≤ 6` |
//! | u-bounded-infinite | the series version with 64 explicit pieces |
//! | hausdorff-continuous | `K(H_m) → K(H)` for compact `H_m → H` |
//! | finite-independent | `K(H − V) = K(H) = K(H ∪ V)` for finite `V` |
//! | closed | `K(cl H) = K(H)` |
//! | accumulated | `K(H′) = K(H)` |
//! | self-accumulated | `K(H^{'K}) = K(H)` |
//! | convex | `K(H) ∈ I`, `L ⊆ I` (closed interval) `⇒ K(H∪L) ∈ I` |
//! | translation-invariant | `K(H + t) = K(H) + t` |
//! | reflection-invariant | `K(2s − H) = 2s − K(H)` |
//! | homogeneous | `K(αH) = αK(H)`, `α > 0` |
//!
//! Here `η = 2^-40`. The limit checks (Cantor, u-Cantor, Hausdorff) report
//! a counterexample only when the gap at the far index exceeds a threshold
//! and has not shrunk to less than half of the gap at the near index.

mod anchors;
mod cases;
pub mod generate;

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

pub use cases::{judge, Case, Outcome};
pub use generate::{
    generators, Class, DisjointSequence, GeneratorConfig, HausdorffFamily, NestedChain, Sampler,
};

use crate::error::{Error, Result};
use crate::json;
use crate::means::{Mean, MeanValue};
use crate::par::Execution;

macro_rules! properties {
    ($($variant:ident => $id:literal, $reconstructed:literal;)*) => {
        /// A named mean property.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum PropertyId {
            $($variant,)*
        }

        impl PropertyId {
            pub const ALL: &'static [PropertyId] = &[$(PropertyId::$variant,)*];

            pub fn id(self) -> &'static str {
                match self {
                    $(PropertyId::$variant => $id,)*
                }
            }

            /// Whether the predicate is rebuilt from how the property is used
            /// rather than from an explicit definition.
            pub fn reconstructed(self) -> bool {
                match self {
                    $(PropertyId::$variant => $reconstructed,)*
                }
            }
        }
    };
}

properties! {
    Internal => "internal", false;
    StrictInternal => "strict-internal", true;
    Monotone => "monotone", true;
    DisjointMonotone => "disjoint-monotone", true;
    UnionMonotone => "union-monotone", true;
    MeanMonotone => "mean-monotone", true;
    EquiMonotone => "equi-monotone", false;
    SliceContinuous => "slice-continuous", true;
    PointContinuous => "point-continuous", true;
    CantorContinuous => "cantor-continuous", true;
    CantorContinuousCompact => "cantor-continuous-compact", true;
    UCantorContinuous => "u-cantor-continuous", false;
    UBounded => "u-bounded", false;
    UBoundedOverlap => "u-bounded-overlap", false;
    UBoundedNFold => "u-bounded-n-fold", false;
    UBoundedInfinite => "u-bounded-infinite", false;
    HausdorffContinuous => "hausdorff-continuous", false;
    FiniteIndependent => "finite-independent", true;
    Closed => "closed", true;
    Accumulated => "accumulated", true;
    SelfAccumulated => "self-accumulated", false;
    Convex => "convex", true;
    TranslationInvariant => "translation-invariant", false;
    ReflectionInvariant => "reflection-invariant", false;
    Homogeneous => "homogeneous", false;
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for PropertyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<PropertyId> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        PropertyId::ALL
            .iter()
            .copied()
            .find(|p| p.id() == norm)
            .ok_or_else(|| Error::BadParameters(format!("unknown property {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    HoldsOnSample,
    Counterexample,
    NotApplicable,
}

impl Verdict {
    pub fn id(self) -> &'static str {
        match self {
            Verdict::HoldsOnSample => "holds_on_sample",
            Verdict::Counterexample => "counterexample",
            Verdict::NotApplicable => "not_applicable",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Anchor,
    Random,
}

/// A failing case with the values that decide it.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    /// Trial index for random cases.
    pub trial: Option<u64>,
    pub source: Source,
    pub case: Case,
    pub values: Vec<(String, MeanValue)>,
    pub detail: String,
}

impl Witness {
    pub fn value(&self, name: &str) -> Option<&MeanValue> {
        self.values.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport {
    pub property: PropertyId,
    pub mean: String,
    pub verdict: Verdict,
    pub trials: u64,
    pub seed: u64,
    pub reconstructed: bool,
    /// Cases (anchors and trials) where the premise held and so did the claim.
    pub holds: u64,
    /// Cases where the premise failed or a value was undefined.
    pub vacuous: u64,
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

impl PropertyReport {
    pub fn to_json(&self) -> Value {
        let witness = self.witness.as_ref().map(|w| {
            json!({
                "source": match w.source { Source::Anchor => "anchor", Source::Random => "random" },
                "trial": w.trial,
                "sets": w.case.sets.iter().map(|(n, h)| json!({"name": n, "set": h.to_string()})).collect::<Vec<_>>(),
                "scalars": w.case.scalars.iter().map(|(n, x)| json!({"name": n, "value": json::rational(x)})).collect::<Vec<_>>(),
                "values": w.values.iter().map(|(n, v)| json!({"name": n, "value": json::mean_value(v)})).collect::<Vec<_>>(),
                "detail": w.detail,
            })
        });
        json!({
            "property": self.property.id(),
            "mean": self.mean,
            "verdict": self.verdict.id(),
            "trials": self.trials,
            "seed": self.seed,
            "reconstructed": self.reconstructed,
            "holds": self.holds,
            "vacuous": self.vacuous,
            "witness": witness,
            "note": self.note,
        })
    }

    /// Re-judges the witness case and confirms the stored values.
    pub fn replay(&self, k: &Mean) -> Result<bool> {
        let Some(w) = &self.witness else {
            return Ok(true);
        };
        match judge(self.property, k, &w.case)? {
            Outcome::Fails { values, .. } => Ok(values == w.values),
            _ => Ok(false),
        }
    }
}

/// Why a property cannot be checked for `k`, if it cannot.
pub fn not_applicable(prop: PropertyId, k: &Mean) -> Option<String> {
    use PropertyId::*;
    let class = Class::of(k);
    let base = base_mean(k);
    match prop {
        CantorContinuous | CantorContinuousCompact | UCantorContinuous | UBoundedInfinite if class == Class::Finite => {
            Some(format!("{k} is defined on finite sets only, which admit no infinite chains"))
        }
        HausdorffContinuous if matches!(class, Class::Finite | Class::Isolated | Class::Accumulating) => {
            Some(format!("{k} is not defined on compact sets of positive measure"))
        }
        SelfAccumulated if !matches!(base, Mean::Avg1 | Mean::Amean | Mean::MAcc) || base != k => {
            Some(format!("accumulation points by a mean are computed exactly only for avg1, amean and macc, not {k}"))
        }
        _ => None,
    }
}

fn base_mean(k: &Mean) -> &Mean {
    match k {
        Mean::Transform(inner, _) => base_mean(inner),
        other => other,
    }
}

fn sample_and_judge(
    prop: PropertyId,
    k: &Mean,
    cfg: &GeneratorConfig,
    seed: u64,
    trial: u64,
) -> (Case, Result<Outcome>) {
    let sampler = match Sampler::new(cfg, seed, trial) {
        Ok(s) => s.for_mean(k),
        Err(e) => return (Case::default(), Err(e)),
    };
    let mut sampler = sampler;
    match cases::sample(prop, k, &mut sampler) {
        Ok(case) => {
            let outcome = judge(prop, k, &case);
            (case, outcome)
        }
        Err(e) => (Case::default(), Err(e)),
    }
}

/// Checks `prop` for `k` on the anchor cases and `trials` random cases.
pub fn check(
    prop: PropertyId,
    k: &Mean,
    cfg: &GeneratorConfig,
    trials: u64,
    seed: u64,
) -> Result<PropertyReport> {
    check_with(prop, k, cfg, trials, seed, Execution::default())
}

pub fn check_with(
    prop: PropertyId,
    k: &Mean,
    cfg: &GeneratorConfig,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<PropertyReport> {
    cfg.validate()?;
    if trials == 0 {
        return Err(Error::BadParameters(
            "at least one trial is required".into(),
        ));
    }
    let mut report = PropertyReport {
        property: prop,
        mean: k.id(),
        verdict: Verdict::HoldsOnSample,
        trials,
        seed,
        reconstructed: prop.reconstructed(),
        holds: 0,
        vacuous: 0,
        witness: None,
        note: None,
    };
    if let Some(why) = not_applicable(prop, k) {
        report.verdict = Verdict::NotApplicable;
        report.note = Some(why);
        return Ok(report);
    }
    let tally = |report: &mut PropertyReport,
                 case: Case,
                 outcome: Result<Outcome>,
                 trial: Option<u64>| match outcome {
        Ok(Outcome::Holds) => report.holds += 1,
        Ok(Outcome::Vacuous) | Err(_) => report.vacuous += 1,
        Ok(Outcome::Fails { values, detail }) => {
            if report.witness.is_none() {
                let source = if trial.is_some() {
                    Source::Random
                } else {
                    Source::Anchor
                };
                report.witness = Some(Witness {
                    trial,
                    source,
                    case,
                    values,
                    detail,
                });
            }
        }
    };
    for case in anchors::cases(prop, k) {
        let outcome = judge(prop, k, &case);
        tally(&mut report, case, outcome, None);
    }
    let results = exec.map_range(0..trials, |t| sample_and_judge(prop, k, cfg, seed, t));
    for (t, (case, outcome)) in results.into_iter().enumerate() {
        tally(&mut report, case, outcome, Some(t as u64));
    }
    if let Some(w) = &report.witness {
        match judge(prop, k, &w.case)? {
            Outcome::Fails { values, .. } if values == w.values => {
                report.verdict = Verdict::Counterexample
            }
            _ => {
                return Err(Error::UnrepresentableResult(
                    "counterexample did not replay".into(),
                ))
            }
        }
    } else if report.holds == 0 {
        report.note = Some("no sampled case satisfied the premise".into());
    }
    Ok(report)
}

/// Runs every property for `k`.
pub fn check_all(
    k: &Mean,
    cfg: &GeneratorConfig,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<Vec<PropertyReport>> {
    PropertyId::ALL
        .iter()
        .map(|&p| check_with(p, k, cfg, trials, seed, exec))
        .collect()
}

#[cfg(test)]
mod tests;
