use num_traits::{One, Zero};

use super::{normalize_point, zero_dim_radical, Caps, GroebnerBasis, Ideal};
use crate::error::{Error, Result};
use crate::poly::{MonomialOrder, Poly};
use crate::projective::{restrict_form_to_map, AnalyticMap, HomogeneousForm};
use crate::scalar::{fmt_scalar, int, Scalar};
use crate::series::DEFAULT_ORDER_CAP;
use crate::upoly;

/// Points `P_i` with hyperplanes `L_i` through `P_i` and avoiding the others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatingSystem {
    pub points: Vec<Vec<Scalar>>,
    pub hyperplanes: Vec<HomogeneousForm>,
}

pub(crate) fn fmt_point(p: &[Scalar]) -> String {
    let cs: Vec<String> = p.iter().map(fmt_scalar).collect();
    format!("({})", cs.join(" : "))
}

/// Rational solutions of an affine system, or `None` if the solution set is
/// not finite.
fn affine_rational_solutions(gens: &[Poly], nvars: usize, caps: &Caps) -> Result<Option<Vec<Vec<Scalar>>>> {
    if nvars == 0 {
        let consistent = gens.iter().all(|g| g.is_zero());
        return Ok(Some(if consistent { vec![vec![]] } else { vec![] }));
    }
    let lex: Vec<Poly> = gens.iter().map(|g| g.with_order(MonomialOrder::Lex)).collect();
    let gb = GroebnerBasis::compute(&lex, nvars, MonomialOrder::Lex, caps)?;
    if gb.is_unit() {
        return Ok(Some(vec![]));
    }
    let Some(elim) = gb.last_variable_eliminant() else {
        return Ok(None);
    };
    let Some(roots) = upoly::rational_roots(&elim) else {
        return Ok(None);
    };
    let last = nvars - 1;
    let mut out = vec![];
    for r in roots {
        let sub: Vec<Poly> = gb.basis().iter().map(|g| g.specialize(last, &r)).collect();
        match affine_rational_solutions(&sub, nvars - 1, caps)? {
            Some(sols) => out.extend(sols.into_iter().map(|mut s| {
                s.push(r.clone());
                s
            })),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// All points of a zero-dimensional projective locus when every one of them
/// is rational; `Ok(None)` if some point needs an extension field.
pub fn projective_rational_points(ideal: &Ideal, caps: &Caps) -> Result<Option<Vec<Vec<Scalar>>>> {
    let nv = ideal.nvars();
    if ideal.projective_dimension(caps)? > 0 {
        return Err(Error::Unsupported("the locus is not a finite point set".into()));
    }
    let mut points = vec![];
    for chart in 0..nv {
        // points with X_0 = … = X_{chart-1} = 0 and X_chart = 1
        let mut gens: Vec<Poly> = ideal.generators().to_vec();
        gens.extend((0..chart).map(|i| Poly::var(nv, MonomialOrder::Grevlex, i)));
        let affine: Vec<Poly> = gens.iter().map(|g| g.dehomogenize(chart)).collect();
        let rad = zero_dim_radical(&affine, nv - 1, caps)?;
        if rad.is_unit() {
            continue;
        }
        let count = rad
            .quotient_dimension(100_000)
            .ok_or_else(|| Error::Unsupported("too many points".into()))?;
        let Some(sols) = affine_rational_solutions(rad.basis(), nv - 1, caps)? else {
            return Ok(None);
        };
        if sols.len() < count {
            return Ok(None);
        }
        for s in sols {
            let mut p = s;
            p.insert(chart, Scalar::one());
            points.push(normalize_point(&p));
        }
    }
    Ok(Some(points))
}

fn lattice(nv: usize, bound: i64) -> Vec<Vec<i64>> {
    let side = (2 * bound + 1) as usize;
    let total = side.pow(nv as u32);
    let decode = |k: usize| -> i64 {
        // 0, 1, -1, 2, -2, …
        let k = k as i64;
        if k % 2 == 1 {
            (k + 1) / 2
        } else {
            -(k / 2)
        }
    };
    let mut out: Vec<Vec<i64>> = (1..total)
        .map(|mut idx| {
            let mut v = vec![0; nv];
            for slot in v.iter_mut().rev() {
                *slot = decode(idx % side);
                idx /= side;
            }
            v
        })
        .collect();
    let rank = |c: &i64| if *c > 0 { 2 * c - 1 } else { -2 * c };
    out.sort_by_key(|v| {
        let nnz = v.iter().filter(|c| **c != 0).count();
        let max = v.iter().map(|c| c.abs()).max().unwrap();
        let support: Vec<usize> = (0..v.len()).filter(|&i| v[i] != 0).collect();
        (nnz, max, support, v.iter().map(rank).collect::<Vec<_>>())
    });
    out
}

/// Deterministic lattice search for separating hyperplanes. Candidates are
/// ordered by support size, height, then coefficient pattern.
pub fn select_separating_hyperplanes(
    points: &[Vec<Scalar>],
    f: Option<&AnalyticMap>,
    caps: &Caps,
) -> Result<SeparatingSystem> {
    let Some(nv) = points.first().map(|p| p.len()) else {
        return Ok(SeparatingSystem { points: vec![], hyperplanes: vec![] });
    };
    let normalized: Vec<Vec<Scalar>> = points.iter().map(|p| normalize_point(p)).collect();
    for (i, p) in normalized.iter().enumerate() {
        if p.len() != nv {
            return Err(Error::VariableCount { expected: nv, got: p.len() });
        }
        if p.iter().all(|c| c.is_zero()) {
            return Err(Error::Schema("the zero vector is not a projective point".into()));
        }
        if normalized[..i].contains(p) {
            return Err(Error::DuplicatePoint(fmt_point(p)));
        }
    }
    let cands = lattice(nv, caps.lattice_bound);
    let eval = |c: &[i64], p: &[Scalar]| -> Scalar { c.iter().zip(p).map(|(a, x)| int(*a) * x).sum() };
    let mut hyperplanes = vec![];
    for (i, p) in normalized.iter().enumerate() {
        let found = cands.iter().find_map(|c| {
            if !eval(c, p).is_zero() {
                return None;
            }
            if normalized.iter().enumerate().any(|(j, q)| j != i && eval(c, q).is_zero()) {
                return None;
            }
            let form = HomogeneousForm::linear(&c.iter().map(|&a| int(a)).collect::<Vec<_>>()).ok()?;
            if let Some(f) = f {
                restrict_form_to_map(&form, f, DEFAULT_ORDER_CAP).ok()?;
            }
            Some(form)
        });
        hyperplanes.push(found.ok_or_else(|| Error::LatticeExhausted(fmt_point(p)))?);
    }
    Ok(SeparatingSystem { points: normalized, hyperplanes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use crate::series::{Series, Valuation};

    fn pt(c: &[i64]) -> Vec<Scalar> {
        c.iter().map(|&x| int(x)).collect()
    }

    fn p(terms: &[(&[u32], i64)]) -> Poly {
        Poly::from_terms(
            3,
            MonomialOrder::Grevlex,
            terms.iter().map(|(e, c)| (Monomial(e.to_vec()), int(*c))).collect(),
        )
    }

    #[test]
    fn coordinate_points() {
        let s = select_separating_hyperplanes(&[pt(&[1, 0, 0]), pt(&[0, 1, 0])], None, &Caps::default()).unwrap();
        assert_eq!(s.hyperplanes[0].to_string(), "X1");
        assert_eq!(s.hyperplanes[1].to_string(), "X0");
    }

    #[test]
    fn map_image_is_avoided() {
        let v = Valuation::PAdic(3);
        let f = AnalyticMap::new(vec![
            Series::polynomial(vec![int(0), int(1)], v),
            Series::polynomial(vec![int(1)], v),
            Series::polynomial(vec![], v),
        ])
        .unwrap();
        let s = select_separating_hyperplanes(&[pt(&[1, 1, 1])], Some(&f), &Caps::default()).unwrap();
        let l = &s.hyperplanes[0];
        assert_eq!(l.eval(&pt(&[1, 1, 1])), int(0));
        assert_eq!(l.to_string(), "X0 - X1");
        assert!(restrict_form_to_map(l, &f, 100).is_ok());
    }

    #[test]
    fn duplicates_are_rejected() {
        let e = select_separating_hyperplanes(&[pt(&[1, 2, 0]), pt(&[2, 4, 0])], None, &Caps::default());
        assert!(matches!(e, Err(Error::DuplicatePoint(_))));
    }

    #[test]
    fn lattice_exhaustion() {
        let caps = Caps { lattice_bound: 1, ..Caps::default() };
        // three collinear points: no line through one avoids the others
        let e = select_separating_hyperplanes(&[pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[1, 1, 0])], None, &caps)
            .unwrap();
        assert_eq!(e.hyperplanes.len(), 3);
        let e = select_separating_hyperplanes(&[pt(&[1, 0]), pt(&[0, 1]), pt(&[1, 1]), pt(&[1, 2])], None, &caps);
        assert!(matches!(e, Err(Error::LatticeExhausted(_))));
    }

    #[test]
    fn rational_points_of_conics() {
        let q1 = p(&[(&[1, 1, 0], 1), (&[0, 0, 2], -1)]);
        let q2 = p(&[(&[1, 0, 1], 1), (&[0, 2, 0], -1)]);
        // two rational points and a conjugate pair: not all rational
        assert_eq!(projective_rational_points(&Ideal::new(3, vec![q1.clone(), q2]), &Caps::default()).unwrap(), None);
        // conic and tangent line: the single point (1:0:0)
        let l = p(&[(&[0, 1, 0], 1)]);
        let pts = projective_rational_points(&Ideal::new(3, vec![q1.clone(), l]), &Caps::default()).unwrap().unwrap();
        assert_eq!(pts, vec![pt(&[1, 0, 0])]);
        // conic and X0 - X1: X0^2 = X2^2 gives (1:1:1) and (1:1:-1)
        let l = p(&[(&[1, 0, 0], 1), (&[0, 1, 0], -1)]);
        let mut pts = projective_rational_points(&Ideal::new(3, vec![q1, l]), &Caps::default()).unwrap().unwrap();
        pts.sort();
        assert_eq!(pts, vec![pt(&[1, 1, -1]), pt(&[1, 1, 1])]);
    }
}
