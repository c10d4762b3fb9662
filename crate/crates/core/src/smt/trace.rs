use num_traits::Zero;
use serde::Serialize;

use super::report::invariants;
use super::weight;
use crate::cli::Scenario;
use crate::error::{Error, Result};
use crate::pl::PlFun;
use crate::poly::Poly;
use crate::position::{
    nullstellensatz_certificate, projective_rational_points, select_separating_hyperplanes, Ideal,
};
use crate::projective::{Hypersurface, NevanlinnaContext};
use crate::scalar::{int, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceEntry {
    /// Position in the scenario's hypersurface list.
    pub index: usize,
    pub name: String,
    pub degree: u32,
    #[serde(with = "crate::scalar::as_string")]
    pub m_over_deg: Scalar,
}

/// Indices past `t_{-1}`: each `m/deg` is capped by a constant from a
/// Nullstellensatz certificate on the first `t_{-1}+1` sorted forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LastPieceCheck {
    pub exponents: Vec<u32>,
    /// `log C_1`: largest coefficient size among the cofactors.
    #[serde(with = "crate::scalar::as_string")]
    pub log_c1: Scalar,
    /// `min_k m_k` over the first `t_{-1}+1` sorted forms; at most `log C_1`.
    #[serde(with = "crate::scalar::as_string")]
    pub min_head_proximity: Scalar,
    #[serde(with = "crate::scalar::as_string")]
    pub cap: Scalar,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum HyperplaneCheck {
    Skipped {
        reason: String,
    },
    Checked {
        points: Vec<Vec<String>>,
        hyperplanes: Vec<String>,
        #[serde(with = "crate::scalar::as_string")]
        sum_proximity: Scalar,
        #[serde(with = "crate::scalar::as_string")]
        characteristic: Scalar,
        /// `Σ m(H_i) − T` at `t`.
        #[serde(with = "crate::scalar::as_string")]
        excess: Scalar,
        slope_consistent: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MiddleCheck {
    pub name: String,
    #[serde(with = "crate::scalar::as_string")]
    pub weight: Scalar,
    #[serde(with = "crate::scalar::as_string")]
    pub weighted_characteristic: Scalar,
    /// `m/deg − min(M/deg, 1)·T` at `t`.
    #[serde(with = "crate::scalar::as_string")]
    pub excess: Scalar,
    pub slope_consistent: bool,
    pub hyperplanes: HyperplaneCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofTrace {
    #[serde(with = "crate::scalar::as_string")]
    pub t: Scalar,
    #[serde(with = "crate::scalar::as_string")]
    pub characteristic: Scalar,
    pub t0: i64,
    pub t_minus1: i64,
    #[serde(rename = "M")]
    pub m: u32,
    pub sorted: Vec<PieceEntry>,
    pub first: Vec<PieceEntry>,
    pub middle: Vec<PieceEntry>,
    pub last: Vec<PieceEntry>,
    #[serde(with = "crate::scalar::as_string")]
    pub first_sum: Scalar,
    #[serde(with = "crate::scalar::as_string")]
    pub middle_sum: Scalar,
    #[serde(with = "crate::scalar::as_string")]
    pub last_sum: Scalar,
    #[serde(with = "crate::scalar::as_string")]
    pub lhs: Scalar,
    pub last_piece: Option<LastPieceCheck>,
    pub middle_checks: Vec<MiddleCheck>,
    pub notices: Vec<String>,
}

impl ProofTrace {
    pub fn pieces_sum_to_lhs(&self) -> bool {
        &self.first_sum + &self.middle_sum + &self.last_sum == self.lhs
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serialization") + "\n"
    }
}

fn sum(entries: &[PieceEntry]) -> Scalar {
    entries.iter().fold(Scalar::zero(), |a, e| a + &e.m_over_deg)
}

/// Replays the proof's bookkeeping at `t` with exact values.
pub fn proof_trace(s: &Scenario, t: &Scalar) -> Result<ProofTrace> {
    let (t_min, t_max) = (&s.options.t_min, &s.options.t_max);
    if t < t_min || t > t_max {
        return Err(Error::OutOfDomain(t.to_string(), format!("{t_min}, {t_max}")));
    }
    let caps = &s.options.caps;
    let (profile, mrec, _) = invariants(s)?;
    let mut ctx = NevanlinnaContext::new(&s.map, t_min.clone(), t_max.clone())?;
    ctx.order_cap = s.options.order_cap;
    let big_t = ctx.characteristic.eval(t)?;
    let t_slope = ctx.characteristic.slope_right_of(t);

    // unnormalized proximities, as in the proof
    let mut prox: Vec<PlFun> = vec![];
    for h in &s.hypersurfaces {
        prox.push(ctx.pair(h, false)?.proximity);
    }
    let per_deg = |i: usize| -> Result<Scalar> {
        Ok(prox[i].eval(t)? / int(s.hypersurfaces[i].degree() as i64))
    };
    let mut order: Vec<usize> = (0..s.q()).collect();
    let vals: Vec<Scalar> = order.iter().map(|&i| per_deg(i)).collect::<Result<_>>()?;
    order.sort_by(|&a, &b| vals[b].cmp(&vals[a]));
    let sorted: Vec<PieceEntry> = order
        .iter()
        .map(|&i| PieceEntry {
            index: i,
            name: s.hypersurfaces[i].name.clone(),
            degree: s.hypersurfaces[i].degree(),
            m_over_deg: vals[i].clone(),
        })
        .collect();
    let (t0, tm1) = (profile.t0() as usize, profile.t_minus1() as usize);
    let first = sorted[..t0.min(s.q())].to_vec();
    let middle = sorted[t0.min(s.q())..tm1.min(s.q())].to_vec();
    let last = sorted[tm1.min(s.q())..].to_vec();
    let lhs = sum(&sorted);
    let mut notices = vec![];
    if !s.space.is_full_space() {
        notices.push("X is a proper subvariety; its equations are added to every ideal".into());
    }

    let nv = s.space.num_vars();
    let x_gens: Vec<Poly> = s.space.x_ideal.iter().map(|f| f.poly().clone()).collect();
    let ideal_of = |idx: &[usize]| -> Ideal {
        let mut g = x_gens.clone();
        g.extend(idx.iter().map(|&i| s.hypersurfaces[i].form.poly().clone()));
        Ideal::new(nv, g)
    };

    let last_piece = if last.is_empty() {
        notices.push("t_{-1} = q: the last piece is empty".into());
        None
    } else {
        let head: Vec<usize> = order[..=tm1].to_vec();
        let ideal = ideal_of(&head);
        let cert = nullstellensatz_certificate(&ideal, None, caps)?;
        let nx = x_gens.len();
        let log_c1 = cert
            .cofactors
            .iter()
            .flat_map(|row| row[nx..].iter())
            .flat_map(|a| a.terms().iter().map(|(_, c)| s.valuation.log_abs(c).unwrap()))
            .max()
            .unwrap_or_else(Scalar::zero);
        let (k_star, min_head) = head
            .iter()
            .map(|&i| (i, prox[i].eval(t).unwrap()))
            .min_by(|a, b| a.1.cmp(&b.1))
            .unwrap();
        let cap = &log_c1 / int(s.hypersurfaces[k_star].degree() as i64);
        let holds = min_head <= log_c1 && last.iter().all(|e| e.m_over_deg <= cap);
        Some(LastPieceCheck { exponents: cert.exponents, log_c1, min_head_proximity: min_head, cap, holds })
    };

    let mut middle_checks = vec![];
    for e in &middle {
        let w = weight(mrec.m, e.degree);
        let weighted = &w * &big_t;
        let slope = prox[e.index].slope_right_of(t) / int(e.degree as i64);
        let mut idx: Vec<usize> = order[..t0].to_vec();
        idx.push(e.index);
        let hyperplanes = hyperplane_check(s, &ctx, &ideal_of(&idx), t, &big_t, &t_slope)?;
        middle_checks.push(MiddleCheck {
            name: e.name.clone(),
            excess: &e.m_over_deg - &weighted,
            slope_consistent: slope <= &w * &t_slope,
            weight: w,
            weighted_characteristic: weighted,
            hyperplanes,
        });
    }

    Ok(ProofTrace {
        t: t.clone(),
        characteristic: big_t,
        t0: profile.t0(),
        t_minus1: profile.t_minus1(),
        m: mrec.m,
        first_sum: sum(&first),
        middle_sum: sum(&middle),
        last_sum: sum(&last),
        sorted,
        first,
        middle,
        last,
        lhs,
        last_piece,
        middle_checks,
        notices,
    })
}

fn hyperplane_check(
    s: &Scenario,
    ctx: &NevanlinnaContext,
    ideal: &Ideal,
    t: &Scalar,
    big_t: &Scalar,
    t_slope: &Scalar,
) -> Result<HyperplaneCheck> {
    let caps = &s.options.caps;
    let skipped = |r: &str| Ok(HyperplaneCheck::Skipped { reason: r.to_string() });
    match ideal.projective_dimension(caps)? {
        -1 => return skipped("the intersection is empty"),
        0 => {}
        _ => return skipped("the intersection is not a finite point set"),
    }
    let points = match projective_rational_points(ideal, caps) {
        Ok(Some(p)) => p,
        Ok(None) => return skipped("some intersection points are not rational"),
        Err(Error::Unsupported(m)) => return skipped(&m),
        Err(e) => return Err(e),
    };
    let system = match select_separating_hyperplanes(&points, Some(&s.map), caps) {
        Ok(sys) => sys,
        Err(Error::LatticeExhausted(p)) => return skipped(&format!("no separating hyperplane for {p} in the lattice")),
        Err(e) => return Err(e),
    };
    let mut total = Scalar::zero();
    let mut slope = Scalar::zero();
    for (k, l) in system.hyperplanes.iter().enumerate() {
        let m = ctx.pair(&Hypersurface::new(format!("H{}", k + 1), l.clone()), false)?.proximity;
        total += m.eval(t)?;
        slope += m.slope_right_of(t);
    }
    Ok(HyperplaneCheck::Checked {
        points: system.points.iter().map(|p| p.iter().map(|c| c.to_string()).collect()).collect(),
        hyperplanes: system.hyperplanes.iter().map(|l| l.to_string()).collect(),
        excess: &total - big_t,
        sum_proximity: total,
        characteristic: big_t.clone(),
        slope_consistent: slope <= *t_slope,
    })
}
