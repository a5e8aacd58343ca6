use serde_json::{json, Map, Value};

use super::witness::{ContractionRole, ContractionWitness, RiccatiCertificate};

/// The interference regimes this crate can certify. They are not mutually
/// exclusive; a report carries one verdict per regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    VeryStrongZ,
    VeryStrong,
    AlignedStrongZ,
    AlignedStrong,
    NoisyZ,
    NoisyTwoSided,
    MixedAligned,
}

impl Regime {
    pub const ALL: [Regime; 7] = [
        Regime::VeryStrongZ,
        Regime::VeryStrong,
        Regime::AlignedStrongZ,
        Regime::AlignedStrong,
        Regime::NoisyZ,
        Regime::NoisyTwoSided,
        Regime::MixedAligned,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Regime::VeryStrongZ => "very-strong-z",
            Regime::VeryStrong => "very-strong",
            Regime::AlignedStrongZ => "aligned-strong-z",
            Regime::AlignedStrong => "aligned-strong",
            Regime::NoisyZ => "noisy-z",
            Regime::NoisyTwoSided => "noisy-two-sided",
            Regime::MixedAligned => "mixed-aligned",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Satisfaction {
    Satisfied,
    SatisfiedWithinTolerance,
    NotSatisfied,
    NotApplicable,
}

impl Satisfaction {
    pub fn is_satisfied(&self) -> bool {
        matches!(
            self,
            Satisfaction::Satisfied | Satisfaction::SatisfiedWithinTolerance
        )
    }

    pub fn label(&self) -> &'static str {
        match self {
            Satisfaction::Satisfied => "satisfied",
            Satisfaction::SatisfiedWithinTolerance => "satisfied-within-tolerance",
            Satisfaction::NotSatisfied => "not-satisfied",
            Satisfaction::NotApplicable => "not-applicable",
        }
    }
}

/// Witness payload attached to a satisfied verdict; sufficient to re-verify
/// the regime condition independently of the check that produced it.
#[derive(Debug, Clone)]
pub enum RegimeWitness {
    Contractions(Vec<(ContractionRole, ContractionWitness)>),
    Riccati(Box<RiccatiCertificate>),
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub satisfaction: Satisfaction,
    /// Signed slack of the governing inequality; negative means violated.
    pub margin: Option<f64>,
    /// Named intermediate quantities (rate margins, radii, sigma_max ...).
    pub metrics: Vec<(String, f64)>,
    pub note: Option<String>,
    pub witness: Option<RegimeWitness>,
}

impl Verdict {
    pub fn not_applicable(reason: &str) -> Verdict {
        Verdict {
            satisfaction: Satisfaction::NotApplicable,
            margin: None,
            metrics: Vec::new(),
            note: Some(reason.to_string()),
            witness: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RegimeReport {
    pub verdicts: Vec<(Regime, Verdict)>,
}

impl RegimeReport {
    pub fn verdict(&self, regime: Regime) -> Option<&Verdict> {
        self.verdicts
            .iter()
            .find(|(r, _)| *r == regime)
            .map(|(_, v)| v)
    }

    pub fn is_satisfied(&self, regime: Regime) -> bool {
        self.verdict(regime)
            .map(|v| v.satisfaction.is_satisfied())
            .unwrap_or(false)
    }

    pub fn satisfied_regimes(&self) -> Vec<Regime> {
        self.verdicts
            .iter()
            .filter(|(_, v)| v.satisfaction.is_satisfied())
            .map(|(r, _)| *r)
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let mut verdicts = Vec::new();
        for (regime, v) in &self.verdicts {
            let mut m = Map::new();
            m.insert("regime".into(), json!(regime.name()));
            m.insert("verdict".into(), json!(v.satisfaction.label()));
            m.insert(
                "margin".into(),
                v.margin.map(|x| json!(x)).unwrap_or(Value::Null),
            );
            if !v.metrics.is_empty() {
                let mut metrics = Map::new();
                for (k, val) in &v.metrics {
                    metrics.insert(k.clone(), json!(val));
                }
                m.insert("metrics".into(), Value::Object(metrics));
            }
            if let Some(n) = &v.note {
                m.insert("note".into(), json!(n));
            }
            if let Some(w) = &v.witness {
                m.insert("witness".into(), witness_to_json(w));
            }
            verdicts.push(Value::Object(m));
        }
        json!({ "verdicts": verdicts })
    }
}

fn witness_to_json(w: &RegimeWitness) -> Value {
    match w {
        RegimeWitness::Contractions(list) => {
            let items: Vec<Value> = list
                .iter()
                .map(|(role, cw)| {
                    let mut m = Map::new();
                    m.insert("condition".into(), json!(role.name()));
                    for (k, v) in cw.to_json_fields() {
                        m.insert(k, v);
                    }
                    Value::Object(m)
                })
                .collect();
            json!({ "contractions": items })
        }
        RegimeWitness::Riccati(cert) => cert.to_json(),
    }
}
