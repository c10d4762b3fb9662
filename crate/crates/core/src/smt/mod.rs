//! Second Main Theorem bounds (Quang, Levin and the `t_0 + α` bound),
//! their verification on scenarios as exact piecewise-linear inequalities,
//! and a trace of the three-piece proof decomposition.

mod report;
mod trace;

pub(crate) use report::invariants as report_invariants;
pub use report::{verify, BoundCheck, HypersurfaceData, VerificationReport, VerificationStatus};
pub use trace::{proof_trace, HyperplaneCheck, LastPieceCheck, MiddleCheck, PieceEntry, ProofTrace};

use num_traits::One;
use serde::Serialize;

use crate::position::{alpha, MultiplicityRecord, PositionProfile};
use crate::scalar::{int, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    /// Coefficient `t_{-1}`.
    Quang,
    /// Coefficient `n − 1 + max_j M/deg D_j`; general position only.
    Levin,
    /// Coefficient `t_0 + α`.
    New,
}

impl std::fmt::Display for Theorem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Theorem::Quang => "quang",
            Theorem::Levin => "levin",
            Theorem::New => "new",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSpec {
    pub theorem: Theorem,
    pub coefficient: Scalar,
    pub applicable: bool,
}

/// `n − 1 + max_j M/deg D_j`.
pub fn levin_coefficient(n: usize, m: u32, degrees: &[u32]) -> Scalar {
    let best = degrees
        .iter()
        .map(|&d| int(m as i64) / int(d as i64))
        .max()
        .unwrap_or_else(|| Scalar::from_integer(0.into()));
    int(n as i64 - 1) + best
}

pub fn bound_coefficients(profile: &PositionProfile, m: &MultiplicityRecord, degrees: &[u32]) -> Vec<BoundSpec> {
    let a = alpha(profile, m.m, degrees);
    vec![
        BoundSpec { theorem: Theorem::Quang, coefficient: int(profile.t_minus1()), applicable: true },
        BoundSpec {
            theorem: Theorem::Levin,
            coefficient: levin_coefficient(profile.n, m.m, degrees),
            applicable: profile.general_position,
        },
        BoundSpec { theorem: Theorem::New, coefficient: int(profile.t0()) + a, applicable: true },
    ]
}

/// `min(M/deg, 1)`.
pub fn weight(m: u32, degree: u32) -> Scalar {
    (int(m as i64) / int(degree as i64)).min(Scalar::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::position::MultiplicityStatus;
    use crate::scalar::ratio;
    use proptest::prelude::*;

    fn rec(m: u32) -> MultiplicityRecord {
        MultiplicityRecord { m, status: MultiplicityStatus::Certified, witness: None }
    }

    fn profile(q: usize, n: usize, t_seq: Vec<i64>) -> PositionProfile {
        let general_position = t_seq.iter().enumerate().all(|(k, &t)| t == (n as i64 - k as i64).min(q as i64));
        PositionProfile { q, n, t_seq, general_position, subset_dims: vec![] }
    }

    #[test]
    fn three_conics_coefficients() {
        let b = bound_coefficients(&profile(3, 2, vec![3, 1, 0]), &rec(1), &[2, 2, 2]);
        assert_eq!(b[0].coefficient, int(3));
        assert!(!b[1].applicable);
        assert_eq!(b[2].coefficient, int(2));
    }

    #[test]
    fn general_position_recovers_levin() {
        let b = bound_coefficients(&profile(3, 2, vec![2, 1, 0]), &rec(1), &[2, 2, 2]);
        assert!(b[1].applicable);
        assert_eq!(b[1].coefficient, ratio(3, 2));
        assert_eq!(b[2].coefficient, ratio(3, 2));
    }

    #[test]
    fn hyperplanes_give_quang() {
        let p = profile(4, 2, vec![3, 1, 0]);
        let b = bound_coefficients(&p, &rec(1), &[1, 1, 1, 1]);
        assert_eq!(b[2].coefficient, b[0].coefficient);
    }

    proptest! {
        #[test]
        fn new_never_exceeds_quang(t0 in 0i64..5, gap in 0i64..5, m in 1u32..4, degs in proptest::collection::vec(1u32..5, 10)) {
            let q = (t0 + gap) as usize + 1;
            let p = profile(q, 3, vec![t0 + gap, t0, 0, 0]);
            let b = bound_coefficients(&p, &rec(m), &degs[..q]);
            prop_assert!(b[2].coefficient <= b[0].coefficient);
            if degs[..q].iter().all(|&d| d == 1) {
                prop_assert_eq!(&b[2].coefficient, &b[0].coefficient);
            }
        }
    }

    mod scenarios {
        use super::super::*;
        use crate::cli::{builtin, parse_scenario};
        use crate::pl::PlFun;
        use crate::scalar::{int, ratio};

        fn lin(s: i64) -> PlFun {
            PlFun::affine(&int(0), &int(10), &int(s), &int(0)).unwrap()
        }

        #[test]
        fn example_five() {
            let text = crate::cli::builtins::builtin_text("three_conics").unwrap();
            for p in [2, 5, 7] {
                let s = parse_scenario(&text.replace("\"p\": 5", &format!("\"p\": {p}"))).unwrap();
                let r = verify(&s).unwrap();
                assert_eq!(r.characteristic, lin(1));
                let ms: Vec<_> = r.hypersurfaces.iter().map(|h| h.proximity.clone()).collect();
                assert_eq!(ms, vec![lin(1), lin(2), lin(1)]);
                assert_eq!(r.lhs, lin(2));
                assert_eq!((r.t_seq[0], r.t_seq[1]), (3, 1));
                assert_eq!(r.alpha, int(1));
                assert_eq!(r.multiplicity.m, 1);
                assert_eq!(r.status, VerificationStatus::Verified);
                let new = r.bound(Theorem::New);
                assert_eq!((new.coefficient.clone(), new.c_min.clone()), (int(2), int(0)));
                assert_eq!(r.bound(Theorem::Quang).coefficient, int(3));
                assert_eq!(r.sharpness_ratio, Some(int(2)));
                assert!(!r.violated());
            }
        }

        #[test]
        fn trivial_valuation_ratio() {
            let r = verify(&builtin("trivial_valuation_remark").unwrap()).unwrap();
            assert_eq!(r.sharpness_ratio, Some(ratio(149, 50)));
            assert_eq!(r.bound(Theorem::Quang).coefficient, int(3));
            assert_eq!(r.bound(Theorem::New).coefficient, int(3));
        }

        #[test]
        fn transcendental_is_conditional() {
            let r = verify(&builtin("quang_sharp_transcendental").unwrap()).unwrap();
            assert_eq!(r.status, VerificationStatus::Conditional);
            assert_eq!(r.characteristic.eval(&int(10)).unwrap(), int(156));
            // last segment of T has slope 60; m(H2), m(H3) lose slope 5 each
            assert_eq!(r.sharpness_ratio, Some(ratio(3 * 60 - 10, 60)));
            assert!(!r.violated());
        }

        #[test]
        fn tangent_line() {
            let r = verify(&builtin("tangent_line_M2").unwrap()).unwrap();
            assert_eq!((r.multiplicity.m, r.multiplicity.status.as_str()), (2, "certified"));
            assert_eq!(r.status, VerificationStatus::Verified);
        }

        #[test]
        fn example_five_trace() {
            let s = builtin("three_conics").unwrap();
            let tr = proof_trace(&s, &int(5)).unwrap();
            let vals: Vec<_> = tr.sorted.iter().map(|e| e.m_over_deg.clone()).collect();
            assert_eq!(vals, vec![int(5), ratio(5, 2), ratio(5, 2)]);
            assert_eq!(tr.sorted[0].name, "D2");
            assert_eq!((tr.first_sum.clone(), tr.middle_sum.clone()), (int(5), int(5)));
            assert!(tr.last.is_empty() && tr.last_piece.is_none());
            assert_eq!(tr.lhs, int(10));
            assert!(tr.pieces_sum_to_lhs());
            assert!(tr.middle_checks.iter().all(|c| matches!(c.hyperplanes, HyperplaneCheck::Skipped { .. })));
            assert!(tr.middle_checks.iter().all(|c| c.slope_consistent));
        }

        #[test]
        fn last_piece_is_bounded() {
            // four lines, three through (0:0:1); t_{-1} = 3 < q = 4
            let text = r#"{
                "valuation": {"kind": "p-adic", "p": 3},
                "space": {"N": 2},
                "map": {"coords": ["1", "z", "z^3 + 9"]},
                "hypersurfaces": [
                    {"name": "A", "form": "X0"},
                    {"name": "B", "form": "X1"},
                    {"name": "C", "form": "X0 + X1"},
                    {"name": "E", "form": "X2 - 1/3*X0"}
                ],
                "options": {"t_domain": ["-3", "9"]}
            }"#;
            let s = parse_scenario(text).unwrap();
            let mut lasts = vec![];
            for t in [2, 4, 8] {
                let tr = proof_trace(&s, &int(t)).unwrap();
                assert!(tr.pieces_sum_to_lhs());
                assert_eq!(tr.t_minus1, 3);
                let lp = tr.last_piece.clone().unwrap();
                assert!(lp.holds, "{lp:?}");
                lasts.push(tr.last_sum.clone());
            }
            assert!(lasts.windows(2).all(|w| w[0] == w[1]));
            // the middle piece has rational points, so hyperplanes are built
            let tr = proof_trace(&s, &int(4)).unwrap();
            assert!(tr
                .middle_checks
                .iter()
                .any(|c| matches!(c.hyperplanes, HyperplaneCheck::Checked { .. })));
            assert!(proof_trace(&s, &int(10)).is_err());
        }
    }
}
