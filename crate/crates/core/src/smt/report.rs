use serde::Serialize;

use super::{bound_coefficients, Theorem};
use crate::cli::Scenario;
use crate::error::{Error, Result};
use crate::pl::PlFun;
use crate::position::{alpha, certify_m, t_sequence, MultiplicityRecord, MultiplicityStatus, PositionProfile};
use crate::projective::NevanlinnaContext;
use crate::scalar::{int, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerificationStatus {
    #[serde(rename = "verified")]
    Verified,
    #[serde(rename = "conditionally verified")]
    Conditional,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub theorem: Theorem,
    #[serde(with = "crate::scalar::as_string")]
    pub coefficient: Scalar,
    pub applicable: bool,
    /// Least `C ≥ 0` with `lhs ≤ coefficient·T + C` on the domain.
    #[serde(with = "crate::scalar::as_string")]
    pub c_min: Scalar,
    /// Independent recheck of the inequality with `c_min`.
    pub holds: bool,
    /// Right-end slope of the left side does not exceed the bound's.
    pub slope_consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypersurfaceData {
    pub name: String,
    pub degree: u32,
    pub proximity: PlFun,
    pub counting: PlFun,
    #[serde(with = "crate::scalar::as_string")]
    pub fmt_constant: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityReport {
    #[serde(rename = "M")]
    pub m: u32,
    pub status: String,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub scenario: Option<String>,
    pub valuation: String,
    pub domain: [String; 2],
    pub status: VerificationStatus,
    pub assumptions: Vec<String>,
    pub q: usize,
    pub n: usize,
    pub t_seq: Vec<i64>,
    pub general_position: bool,
    pub multiplicity: MultiplicityReport,
    #[serde(with = "crate::scalar::as_string")]
    pub alpha: Scalar,
    pub characteristic: PlFun,
    pub lhs: PlFun,
    pub hypersurfaces: Vec<HypersurfaceData>,
    pub bounds: Vec<BoundCheck>,
    /// Right-end slope of `Σ m/deg` over that of `T`.
    #[serde(with = "crate::scalar::as_opt_string")]
    pub sharpness_ratio: Option<Scalar>,
    /// Constants are minimal on the finite window only.
    pub constants: &'static str,
    pub normalized_proximity: bool,
    #[serde(skip)]
    pub profile: PositionProfile,
    #[serde(skip)]
    pub multiplicity_record: MultiplicityRecord,
}

impl VerificationReport {
    pub fn bound(&self, theorem: Theorem) -> &BoundCheck {
        self.bounds.iter().find(|b| b.theorem == theorem).unwrap()
    }

    /// An applicable bound failed its own recheck; always a bug.
    pub fn violated(&self) -> bool {
        self.bounds.iter().any(|b| b.applicable && !b.holds)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization") + "\n"
    }
}

/// Invariants and multiplicity for a scenario.
pub(crate) fn invariants(s: &Scenario) -> Result<(PositionProfile, MultiplicityRecord, Scalar)> {
    let caps = &s.options.caps;
    let profile = t_sequence(&s.space, &s.hypersurfaces, caps)?;
    let m = certify_m(&s.space, &s.hypersurfaces, &profile, s.options.assumed_m, caps)?;
    let a = alpha(&profile, m.m, &s.degrees());
    Ok((profile, m, a))
}

pub(crate) fn assumptions(s: &Scenario, m: &MultiplicityRecord) -> Vec<String> {
    let mut out = vec![];
    if m.status == MultiplicityStatus::Assumed {
        out.push(format!("M = {} is assumed, not certified", m.m));
    }
    for (i, c) in s.coords.iter().enumerate() {
        if c.declared_tail() {
            out.push(format!("coordinate f_{i} relies on a declared tail bound"));
        }
    }
    if s.map.reducedness_assumed() {
        out.push("the coordinates of f are assumed to have no common zeros".into());
    }
    out
}

/// Evaluates every bound on the scenario's domain.
pub fn verify(s: &Scenario) -> Result<VerificationReport> {
    if s.map.is_constant() {
        return Err(Error::InvalidMap("f is constant".into()));
    }
    let (profile, mrec, a) = invariants(s)?;
    let specs = bound_coefficients(&profile, &mrec, &s.degrees());

    let mut ctx = NevanlinnaContext::new(&s.map, s.options.t_min.clone(), s.options.t_max.clone())?;
    ctx.order_cap = s.options.order_cap;
    let t = ctx.characteristic.clone();
    let mut lhs = PlFun::constant(&s.options.t_min, &s.options.t_max, &int(0))?;
    let mut hs = vec![];
    for h in &s.hypersurfaces {
        let pair = ctx.pair(h, s.options.normalize_coeffs)?;
        lhs = lhs.add(&pair.proximity.scale(&(Scalar::from_integer(1.into()) / int(h.degree() as i64))))?;
        hs.push(HypersurfaceData {
            name: h.name.clone(),
            degree: h.degree(),
            proximity: pair.proximity,
            counting: pair.counting,
            fmt_constant: pair.fmt_constant,
        });
    }

    let mut bounds = vec![];
    for b in specs {
        let rhs = t.scale(&b.coefficient);
        let c_min = PlFun::min_constant_dominating(&lhs, &rhs)?;
        let holds = rhs.add_constant(&c_min).sub(&lhs)?.min_value() >= int(0);
        let slope_consistent = lhs.right_slope() <= &b.coefficient * t.right_slope();
        bounds.push(BoundCheck {
            theorem: b.theorem,
            coefficient: b.coefficient,
            applicable: b.applicable,
            c_min,
            holds,
            slope_consistent,
        });
    }
    let t_slope = t.right_slope();
    let sharpness_ratio = (t_slope != int(0)).then(|| lhs.right_slope() / t_slope);
    let assumptions = assumptions(s, &mrec);
    Ok(VerificationReport {
        scenario: s.name.clone(),
        valuation: s.valuation.to_string(),
        domain: [s.options.t_min.to_string(), s.options.t_max.to_string()],
        status: if assumptions.is_empty() { VerificationStatus::Verified } else { VerificationStatus::Conditional },
        assumptions,
        q: profile.q,
        n: profile.n,
        t_seq: profile.t_seq.clone(),
        general_position: profile.general_position,
        multiplicity: MultiplicityReport { m: mrec.m, status: mrec.status.to_string(), witness: mrec.witness.clone() },
        alpha: a,
        characteristic: t,
        lhs,
        hypersurfaces: hs,
        bounds,
        sharpness_ratio,
        constants: "domain-relative",
        normalized_proximity: s.options.normalize_coeffs,
        profile,
        multiplicity_record: mrec,
    })
}
