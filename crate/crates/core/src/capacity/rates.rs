//! Closed-form rate expressions: single-user log-det rates, rates with
//! interference treated as noise, the regime capacity regions and sum-rate
//! capacities. All rates are in nats (natural logarithm).

use serde_json::{json, Value};

use super::region::RateRegion;
use crate::channel::ChannelInstance;
use crate::matlib::{logdet_hpd, CMatrix, MatError, ToleranceConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaId {
    /// One-sided noisy-interference sum rate: TIN at receiver 1 plus a clean
    /// single-user term.
    ZicNoisySum,
    /// Two-sided noisy-interference sum rate: both receivers treat
    /// interference as noise.
    NoisyTwoSidedSum,
    /// Mixed aligned interference: min of the multiple-access sum bound and
    /// the TIN-plus-clean bound.
    MixedSum,
    SingleUser,
}

impl FormulaId {
    pub fn name(&self) -> &'static str {
        match self {
            FormulaId::ZicNoisySum => "zic-noisy-sum",
            FormulaId::NoisyTwoSidedSum => "noisy-two-sided-sum",
            FormulaId::MixedSum => "mixed-sum",
            FormulaId::SingleUser => "single-user",
        }
    }
}

/// A computed rate value with its identifying formula and named components;
/// the value always equals the sum of the components.
#[derive(Debug, Clone)]
pub struct CapacityResult {
    pub value: f64,
    pub formula: FormulaId,
    pub components: Vec<(String, f64)>,
    /// Inactive alternatives (for min-type formulas), reported but not part
    /// of the component sum.
    pub alternatives: Vec<(String, f64)>,
}

impl CapacityResult {
    pub fn to_json(&self) -> Value {
        let comps: Vec<Value> = self
            .components
            .iter()
            .map(|(k, v)| json!({ "name": k, "value_nats": v }))
            .collect();
        let alts: Vec<Value> = self
            .alternatives
            .iter()
            .map(|(k, v)| json!({ "name": k, "value_nats": v }))
            .collect();
        json!({
            "value_nats": self.value,
            "formula": self.formula.name(),
            "components": comps,
            "alternatives": alts,
        })
    }
}

fn gram(h: &CMatrix, s: &CMatrix) -> CMatrix {
    (&(h * s) * &h.adjoint()).hermitian_part()
}

fn check_pair(h: &CMatrix, s: &CMatrix) -> Result<(), MatError> {
    if h.cols() != s.rows() || !s.is_square() {
        return Err(MatError::ShapeMismatch {
            left_rows: h.rows(),
            left_cols: h.cols(),
            right_rows: s.rows(),
            right_cols: s.cols(),
        });
    }
    Ok(())
}

/// log det(I + H S H†) in nats.
pub fn single_user_rate(h: &CMatrix, s: &CMatrix, tol: &ToleranceConfig) -> Result<f64, MatError> {
    check_pair(h, s)?;
    let m = &CMatrix::identity(h.rows()) + &gram(h, s);
    logdet_hpd(&m.hermitian_part(), tol)
}

/// log det(I + Hd Sd Hd† (I + Hi Si Hi†)^{-1}), evaluated as a determinant
/// quotient of Hermitian PD matrices so no explicit inverse is formed.
pub fn tin_rate(
    hd: &CMatrix,
    sd: &CMatrix,
    hi: &CMatrix,
    si: &CMatrix,
    tol: &ToleranceConfig,
) -> Result<f64, MatError> {
    check_pair(hd, sd)?;
    check_pair(hi, si)?;
    if hd.rows() != hi.rows() {
        return Err(MatError::ShapeMismatch {
            left_rows: hd.rows(),
            left_cols: hd.cols(),
            right_rows: hi.rows(),
            right_cols: hi.cols(),
        });
    }
    let noise = &CMatrix::identity(hi.rows()) + &gram(hi, si);
    let full = &noise + &gram(hd, sd);
    Ok(logdet_hpd(&full.hermitian_part(), tol)? - logdet_hpd(&noise.hermitian_part(), tol)?)
}

/// The interference-free rectangle (capacity region under very strong
/// interference).
pub fn very_strong_region(
    inst: &ChannelInstance,
    tol: &ToleranceConfig,
) -> Result<RateRegion, MatError> {
    let a = single_user_rate(&inst.h1, &inst.s1, tol)?;
    let b = single_user_rate(&inst.h4, &inst.s2, tol)?;
    Ok(RateRegion::rectangle(a, b))
}

/// The compound multiple-access pentagon (capacity region under aligned
/// strong interference). A one-sided instance contributes a single sum
/// bound; a two-sided instance the minimum of the two.
pub fn aligned_strong_region(
    inst: &ChannelInstance,
    tol: &ToleranceConfig,
) -> Result<RateRegion, MatError> {
    let a = single_user_rate(&inst.h1, &inst.s1, tol)?;
    let b = single_user_rate(&inst.h4, &inst.s2, tol)?;
    let sum1 = || -> Result<f64, MatError> {
        let m = &(&CMatrix::identity(inst.r1()) + &gram(&inst.h1, &inst.s1))
            + &gram(&inst.h2, &inst.s2);
        logdet_hpd(&m.hermitian_part(), tol)
    };
    let sum2 = || -> Result<f64, MatError> {
        let m = &(&CMatrix::identity(inst.r2()) + &gram(&inst.h4, &inst.s2))
            + &gram(&inst.h3, &inst.s1);
        logdet_hpd(&m.hermitian_part(), tol)
    };
    let c = if inst.is_zic() {
        sum1()?
    } else if inst.is_mirror_zic() {
        sum2()?
    } else {
        sum1()?.min(sum2()?)
    };
    Ok(RateRegion::pentagon(a, b, c))
}

/// Noisy-interference sum-rate capacity: the sum of the two TIN rates. For
/// a one-sided instance the interference-free side is a clean single-user
/// term.
pub fn noisy_sum_capacity(
    inst: &ChannelInstance,
    tol: &ToleranceConfig,
) -> Result<CapacityResult, MatError> {
    let r1 = tin_rate(&inst.h1, &inst.s1, &inst.h2, &inst.s2, tol)?;
    if inst.is_zic() {
        let r2 = single_user_rate(&inst.h4, &inst.s2, tol)?;
        Ok(CapacityResult {
            value: r1 + r2,
            formula: FormulaId::ZicNoisySum,
            components: vec![
                ("tin-rate-user1".into(), r1),
                ("single-user-rate-user2".into(), r2),
            ],
            alternatives: Vec::new(),
        })
    } else {
        let r2 = tin_rate(&inst.h4, &inst.s2, &inst.h3, &inst.s1, tol)?;
        Ok(CapacityResult {
            value: r1 + r2,
            formula: FormulaId::NoisyTwoSidedSum,
            components: vec![("tin-rate-user1".into(), r1), ("tin-rate-user2".into(), r2)],
            alternatives: Vec::new(),
        })
    }
}

/// Mixed-aligned-interference sum-rate capacity: the minimum of the
/// receiver-2 multiple-access bound and the TIN-plus-clean bound, reporting
/// which branch is active.
pub fn mixed_sum_capacity(
    inst: &ChannelInstance,
    tol: &ToleranceConfig,
) -> Result<CapacityResult, MatError> {
    let ma = {
        let m = &(&CMatrix::identity(inst.r2()) + &gram(&inst.h3, &inst.s1))
            + &gram(&inst.h4, &inst.s2);
        logdet_hpd(&m.hermitian_part(), tol)?
    };
    let tin1 = tin_rate(&inst.h1, &inst.s1, &inst.h2, &inst.s2, tol)?;
    let su2 = single_user_rate(&inst.h4, &inst.s2, tol)?;
    let tin_branch = tin1 + su2;
    if ma <= tin_branch {
        Ok(CapacityResult {
            value: ma,
            formula: FormulaId::MixedSum,
            components: vec![("multiple-access-sum-bound".into(), ma)],
            alternatives: vec![("tin-plus-clean-bound".into(), tin_branch)],
        })
    } else {
        Ok(CapacityResult {
            value: tin_branch,
            formula: FormulaId::MixedSum,
            components: vec![
                ("tin-rate-user1".into(), tin1),
                ("single-user-rate-user2".into(), su2),
            ],
            alternatives: vec![("multiple-access-sum-bound".into(), ma)],
        })
    }
}
