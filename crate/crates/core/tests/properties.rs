use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use valdist_core::cli::{builtin, parse_scenario, serialize_scenario, Grid};
use valdist_core::cli::commands::evaluate_csv;
use valdist_core::poly::{Monomial, MonomialOrder, Poly};
use valdist_core::position::{projective_dimension, Caps, Ideal};
use valdist_core::projective::{characteristic, restrict_form_to_map, AnalyticMap, HomogeneousForm};
use valdist_core::scalar::{fmt_scalar, int, ratio, Scalar};
use valdist_core::series::{newton_polygon, Series, Valuation, DEFAULT_ORDER_CAP};
use valdist_core::smt::{proof_trace, verify, Theorem};

fn scalar_from(unit: i64, p: u64, e: i32) -> Scalar {
    int(unit) * Scalar::from_integer(BigInt::from(p)).pow(e)
}

fn arb_upoly(p: u64, max_deg: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec((-5i64..=5, -2i32..=3), 1..=max_deg + 1).prop_map(move |cs| {
        let mut v: Vec<Scalar> = cs.into_iter().map(|(u, e)| scalar_from(u, p, e)).collect();
        if v.iter().all(Zero::is_zero) {
            v[0] = Scalar::one();
        }
        v
    })
}

fn arb_t() -> impl Strategy<Value = Scalar> {
    (-40i64..=40, 4i64..=7).prop_map(|(n, d)| ratio(n, d))
}

/// JSON for a polynomial scenario in `P^n` with coordinate-free hyperplanes.
fn poly_scenario(p: u64, coords: &[String], forms: &[String]) -> String {
    let hs: Vec<String> =
        forms.iter().enumerate().map(|(i, f)| format!(r#"{{"name":"D{}","form":"{f}"}}"#, i + 1)).collect();
    let cs: Vec<String> = coords.iter().map(|c| format!("\"{c}\"")).collect();
    format!(
        r#"{{"valuation":{{"kind":"p-adic","p":{p}}},"space":{{"N":{}}},"map":{{"coords":[{}]}},"hypersurfaces":[{}],"options":{{"t_domain":["0","6"]}}}}"#,
        coords.len() - 1,
        cs.join(","),
        hs.join(",")
    )
}

fn arb_scenario() -> impl Strategy<Value = String> {
    (prop::sample::select(vec![2u64, 3, 5]), 1usize..=2).prop_flat_map(|(p, n)| {
        let coord = prop::collection::vec((0i64..=4, 0u32..=3), 1..=3).prop_map(move |terms| {
            terms
                .iter()
                .map(|(c, e)| format!("{}*z^{e}", c * p as i64 + 1))
                .collect::<Vec<_>>()
                .join(" + ")
        });
        let form = prop::collection::vec(-2i64..=2, n + 1).prop_map(|cs| {
            cs.iter().enumerate().map(|(i, c)| format!("({c})*X{i}")).collect::<Vec<_>>().join(" + ")
        });
        (Just(p), prop::collection::vec(coord, n + 1), prop::collection::vec(form, 1..=4))
            .prop_map(|(p, coords, forms)| poly_scenario(p, &coords, &forms))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ultrametric_inequality(f in arb_upoly(3, 5), g in arb_upoly(3, 5), ts in prop::collection::vec(arb_t(), 50)) {
        let v = Valuation::PAdic(3);
        let (sf, sg) = (Series::polynomial(f, v), Series::polynomial(g, v));
        let sum = sf.add(&sg).unwrap();
        prop_assume!(!sum.is_zero());
        let (a, b) = (int(-10), int(10));
        let (nf, ng, ns) = (sf.gauss_norm(&a, &b).unwrap().norm, sg.gauss_norm(&a, &b).unwrap().norm, sum.gauss_norm(&a, &b).unwrap().norm);
        for t in &ts {
            let (x, y, z) = (nf.eval(t).unwrap(), ng.eval(t).unwrap(), ns.eval(t).unwrap());
            prop_assert!(z <= x.clone().max(y.clone()));
            if x != y {
                prop_assert_eq!(z, x.max(y));
            }
        }
    }

    #[test]
    fn newton_polygon_counts_degree(f in arb_upoly(5, 7)) {
        let s = Series::polynomial(f, Valuation::PAdic(5));
        let polygon = newton_polygon(&s).unwrap();
        prop_assert_eq!(polygon.total_zeros() as usize, s.degree().unwrap());
    }

    #[test]
    fn characteristic_slope_is_degree(cs in prop::collection::vec(arb_upoly(2, 4), 2..=4)) {
        let v = Valuation::PAdic(2);
        let Ok(map) = AnalyticMap::new(cs.iter().map(|c| Series::polynomial(c.clone(), v)).collect()) else {
            return Ok(());
        };
        let t = characteristic(&map, &int(-10), &int(10)).unwrap();
        let deg = map.coords().iter().filter_map(Series::degree).max().unwrap();
        prop_assert_eq!(t.right_slope(), int(deg as i64));
    }

    #[test]
    fn restriction_is_linear(cs in prop::collection::vec(arb_upoly(3, 3), 3), a in prop::collection::vec(-3i64..=3, 3), b in prop::collection::vec(-3i64..=3, 3), k in -4i64..=4) {
        let v = Valuation::PAdic(3);
        let Ok(map) = AnalyticMap::new(cs.iter().map(|c| Series::polynomial(c.clone(), v)).collect()) else {
            return Ok(());
        };
        let lin = |c: &[i64]| Poly::from_terms(3, MonomialOrder::Grevlex, c.iter().enumerate().map(|(i, &x)| (Monomial::var(3, i, 1), int(x))).collect());
        let (q1, q2) = (lin(&a), lin(&b));
        let combo = q1.add(&q2.scale(&int(k)));
        prop_assume!(!q1.is_zero() && !q2.is_zero() && !combo.is_zero());
        let r = |q: &Poly| restrict_form_to_map(&HomogeneousForm::new(q.clone()).unwrap(), &map, DEFAULT_ORDER_CAP);
        // a restriction that vanishes identically makes linearity trivial
        if let (Ok(r1), Ok(r2), Ok(rc)) = (r(&q1), r(&q2), r(&combo)) {
            let expected = r1.add(&r2.scale(&int(k))).unwrap();
            prop_assert_eq!(rc.coeffs(), expected.coeffs());
        }
    }

    #[test]
    fn dimension_ignores_order_and_redundancy(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let caps = Caps::default();
        let gens: Vec<Poly> = (0..3).map(|_| {
            let terms: Vec<(Monomial, Scalar)> = (0..4).map(|_| {
                let i = rand::Rng::gen_range(&mut rng, 0..4usize);
                let j = rand::Rng::gen_range(&mut rng, 0..4usize);
                let mut e = vec![0u32; 4];
                e[i] += 1;
                e[j] += 1;
                (Monomial(e), int(rand::Rng::gen_range(&mut rng, -2..=2)))
            }).collect();
            Poly::from_terms(4, MonomialOrder::Grevlex, terms)
        }).filter(|p| !p.is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let d = projective_dimension(&gens, 4, MonomialOrder::Grevlex, &caps).unwrap();
        let mut shuffled = gens.clone();
        shuffled.shuffle(&mut rng);
        prop_assert_eq!(projective_dimension(&shuffled, 4, MonomialOrder::Grevlex, &caps).unwrap(), d);
        let x = Poly::var(4, MonomialOrder::Grevlex, 1);
        let redundant = gens[0].mul(&x).add(&gens[gens.len() - 1].scale(&int(3)).mul(&x));
        prop_assert!(Ideal::new(4, gens.clone()).contains(&redundant, &caps).unwrap());
        shuffled.push(redundant);
        prop_assert_eq!(projective_dimension(&shuffled, 4, MonomialOrder::Grevlex, &caps).unwrap(), d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_scenarios_respect_the_bounds(json in arb_scenario()) {
        // zero forms and maps with a common zero are rejected at parse time
        let Ok(s) = parse_scenario(&json) else { return Ok(()) };
        let again = parse_scenario(&serialize_scenario(&s)).unwrap();
        prop_assert_eq!(&again, &s);
        let r = match verify(&s) {
            Ok(r) => r,
            // degenerate draws: map inside a hyperplane, repeated forms, common zeros
            Err(_) => return Ok(()),
        };
        let new = r.bound(Theorem::New);
        let quang = r.bound(Theorem::Quang);
        prop_assert!(new.coefficient <= quang.coefficient);
        prop_assert!(quang.holds && new.holds);
        if r.general_position && r.q > r.n {
            prop_assert_eq!(&new.coefficient, &r.bound(Theorem::Levin).coefficient);
        }
        if let Some(x) = &r.sharpness_ratio {
            prop_assert!(x <= &new.coefficient);
        }
        for h in &r.hypersurfaces {
            prop_assert!(h.proximity.add(&h.counting).unwrap().sub(&r.characteristic.scale(&int(h.degree as i64))).unwrap().is_constant());
        }
        for k in 0..=6 {
            let tr = proof_trace(&s, &int(k)).unwrap();
            prop_assert!(tr.pieces_sum_to_lhs());
        }

        // five random CSV rows against exact evaluation
        let csv = evaluate_csv(&s, &Grid::parse("0:6:13").unwrap()).unwrap();
        let mut reader = csv::Reader::from_reader(csv.as_bytes());
        let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
        prop_assert_eq!(rows.len(), 13);
        let mut rng = ChaCha8Rng::seed_from_u64(csv.len() as u64);
        for row in rows.choose_multiple(&mut rng, 5) {
            let t: Scalar = valdist_core::scalar::parse_scalar(&row[0]).unwrap();
            prop_assert_eq!(&row[1], fmt_scalar(&r.characteristic.eval(&t).unwrap()));
            let q = r.q;
            for (j, h) in r.hypersurfaces.iter().enumerate() {
                prop_assert_eq!(&row[2 + j], fmt_scalar(&h.proximity.eval(&t).unwrap()));
                prop_assert_eq!(&row[2 + q + j], fmt_scalar(&h.counting.eval(&t).unwrap()));
            }
        }
    }
}

#[test]
fn builtin_scenarios_round_trip() {
    for name in valdist_core::cli::builtin_names() {
        let s = builtin(name).unwrap();
        assert_eq!(parse_scenario(&serialize_scenario(&s)).unwrap(), s, "{name}");
    }
}

#[test]
fn certified_reports_never_carry_assumed_m() {
    for name in valdist_core::cli::builtin_names() {
        let r = verify(&builtin(name).unwrap()).unwrap();
        if r.status == valdist_core::smt::VerificationStatus::Verified {
            assert_eq!(r.multiplicity.status, "certified", "{name}");
        }
    }
}
