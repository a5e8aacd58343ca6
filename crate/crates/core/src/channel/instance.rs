use serde_json::{Map, Value};

use super::doc::{matrix_from_value, matrix_to_value, object_get};
use super::error::ChannelError;
use crate::matlib::{eigh, CMatrix, ToleranceConfig};

/// A two-user MIMO interference channel instance: direct links H1 (user 1)
/// and H4 (user 2), cross links H2 (into receiver 1) and H3 (into receiver
/// 2), and the input covariance constraints S1, S2.
#[derive(Debug, Clone)]
pub struct ChannelInstance {
    pub h1: CMatrix,
    pub h2: CMatrix,
    pub h3: CMatrix,
    pub h4: CMatrix,
    pub s1: CMatrix,
    pub s2: CMatrix,
    pub label: Option<String>,
}

impl ChannelInstance {
    pub fn new(
        h1: CMatrix,
        h2: CMatrix,
        h3: CMatrix,
        h4: CMatrix,
        s1: CMatrix,
        s2: CMatrix,
        tol: &ToleranceConfig,
    ) -> Result<Self, ChannelError> {
        let inst = ChannelInstance {
            h1,
            h2,
            h3,
            h4,
            s1,
            s2,
            label: None,
        };
        inst.validate(tol)?;
        Ok(inst)
    }

    /// Transmit antennas of user 1.
    pub fn t1(&self) -> usize {
        self.h1.cols()
    }

    pub fn t2(&self) -> usize {
        self.h4.cols()
    }

    /// Receive antennas at receiver 1.
    pub fn r1(&self) -> usize {
        self.h1.rows()
    }

    pub fn r2(&self) -> usize {
        self.h4.rows()
    }

    pub fn validate(&self, tol: &ToleranceConfig) -> Result<(), ChannelError> {
        for (name, m) in [
            ("H1", &self.h1),
            ("H2", &self.h2),
            ("H3", &self.h3),
            ("H4", &self.h4),
            ("S1", &self.s1),
            ("S2", &self.s2),
        ] {
            if !m.all_finite() {
                return Err(ChannelError::Constraint(format!(
                    "{name}: non-finite entry"
                )));
            }
        }
        let (t1, t2, r1, r2) = (self.t1(), self.t2(), self.r1(), self.r2());
        let dims = [
            ("H2", &self.h2, r1, t2),
            ("H3", &self.h3, r2, t1),
            ("S1", &self.s1, t1, t1),
            ("S2", &self.s2, t2, t2),
        ];
        for (name, m, want_r, want_c) in dims {
            if m.rows() != want_r || m.cols() != want_c {
                return Err(ChannelError::Dimension(format!(
                    "{name} is {}x{}, expected {}x{} (t1={}, t2={}, r1={}, r2={})",
                    m.rows(),
                    m.cols(),
                    want_r,
                    want_c,
                    t1,
                    t2,
                    r1,
                    r2
                )));
            }
        }
        for (name, s) in [("S1", &self.s1), ("S2", &self.s2)] {
            let dev = s.hermitian_deviation();
            let allowed = tol.eq_tol * (1.0 + s.frobenius_norm());
            if dev > allowed {
                return Err(ChannelError::Constraint(format!(
                    "{name} is not Hermitian (deviation {dev:.3e})"
                )));
            }
            let (w, _) = eigh(s)?;
            let floor = -tol.eig_floor * (1.0 + s.frobenius_norm());
            if w[0] < floor {
                return Err(ChannelError::Constraint(format!(
                    "{name} is not PSD (lambda_min {:.3e})",
                    w[0]
                )));
            }
        }
        Ok(())
    }

    /// True iff the cross link into receiver 2 is structurally absent
    /// (entries identically zero after parse, not tolerance-based).
    pub fn is_zic(&self) -> bool {
        self.h3.is_zero()
    }

    /// True iff the cross link into receiver 1 is structurally absent.
    pub fn is_mirror_zic(&self) -> bool {
        self.h2.is_zero()
    }

    /// The instance with user roles exchanged: y1 <-> y2, x1 <-> x2.
    pub fn swap_users(&self) -> ChannelInstance {
        ChannelInstance {
            h1: self.h4.clone(),
            h2: self.h3.clone(),
            h3: self.h2.clone(),
            h4: self.h1.clone(),
            s1: self.s2.clone(),
            s2: self.s1.clone(),
            label: self.label.clone(),
        }
    }
}

/// Parse and validate an instance document.
pub fn load_instance(text: &str, tol: &ToleranceConfig) -> Result<ChannelInstance, ChannelError> {
    let v: Value = serde_json::from_str(text).map_err(|e| ChannelError::Parse(e.to_string()))?;
    let map = v
        .as_object()
        .ok_or_else(|| ChannelError::Parse("document must be a JSON object".into()))?;
    let mut inst = ChannelInstance {
        h1: matrix_from_value(object_get(map, "H1")?, "H1")?,
        h2: matrix_from_value(object_get(map, "H2")?, "H2")?,
        h3: matrix_from_value(object_get(map, "H3")?, "H3")?,
        h4: matrix_from_value(object_get(map, "H4")?, "H4")?,
        s1: matrix_from_value(object_get(map, "S1")?, "S1")?,
        s2: matrix_from_value(object_get(map, "S2")?, "S2")?,
        label: None,
    };
    if let Some(l) = map.get("label") {
        inst.label = Some(
            l.as_str()
                .ok_or_else(|| ChannelError::Parse("label must be a string".into()))?
                .to_string(),
        );
    }
    inst.validate(tol)?;
    Ok(inst)
}

/// Canonical serialization; `load_instance` of the output reproduces the
/// instance bit-exactly.
pub fn serialize_instance(inst: &ChannelInstance) -> String {
    let mut map = Map::new();
    if let Some(l) = &inst.label {
        map.insert("label".into(), Value::String(l.clone()));
    }
    map.insert("H1".into(), matrix_to_value(&inst.h1));
    map.insert("H2".into(), matrix_to_value(&inst.h2));
    map.insert("H3".into(), matrix_to_value(&inst.h3));
    map.insert("H4".into(), matrix_to_value(&inst.h4));
    map.insert("S1".into(), matrix_to_value(&inst.s1));
    map.insert("S2".into(), matrix_to_value(&inst.s2));
    serde_json::to_string_pretty(&Value::Object(map)).expect("serialization cannot fail")
}

/// A channel + power-budget document for power-constraint scenarios:
/// fields "H1".."H4", "P1", "P2", optional "label". Covariances are not part
/// of this form; they come out of an allocation step.
#[derive(Debug, Clone)]
pub struct PowerDocument {
    pub h1: CMatrix,
    pub h2: CMatrix,
    pub h3: CMatrix,
    pub h4: CMatrix,
    pub p1: f64,
    pub p2: f64,
    pub label: Option<String>,
}

pub fn load_power_document(text: &str) -> Result<PowerDocument, ChannelError> {
    let v: Value = serde_json::from_str(text).map_err(|e| ChannelError::Parse(e.to_string()))?;
    let map = v
        .as_object()
        .ok_or_else(|| ChannelError::Parse("document must be a JSON object".into()))?;
    let p1 = object_get(map, "P1")?
        .as_f64()
        .ok_or_else(|| ChannelError::Parse("P1 must be a number".into()))?;
    let p2 = object_get(map, "P2")?
        .as_f64()
        .ok_or_else(|| ChannelError::Parse("P2 must be a number".into()))?;
    if !(p1 >= 0.0 && p2 >= 0.0) {
        return Err(ChannelError::Constraint(
            "power budgets must be >= 0".into(),
        ));
    }
    Ok(PowerDocument {
        h1: matrix_from_value(object_get(map, "H1")?, "H1")?,
        h2: matrix_from_value(object_get(map, "H2")?, "H2")?,
        h3: matrix_from_value(object_get(map, "H3")?, "H3")?,
        h4: matrix_from_value(object_get(map, "H4")?, "H4")?,
        p1,
        p2,
        label: map
            .get("label")
            .and_then(|l| l.as_str())
            .map(|s| s.to_string()),
    })
}
