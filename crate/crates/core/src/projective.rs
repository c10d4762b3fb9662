//! Homogeneous forms, analytic maps into projective space and the
//! Nevanlinna functions `T_f`, `m_f`, `N_f` as exact piecewise-linear
//! functions of `t`.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::pl::PlFun;
use crate::poly::{MonomialOrder, Poly};
use crate::position::{projective_dimension, Caps};
use crate::scalar::{int, Scalar};
use crate::series::{zero_counting, Series, Valuation, DEFAULT_ORDER_CAP};
use crate::upoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousForm {
    poly: Poly,
    degree: u32,
}

impl HomogeneousForm {
    pub fn new(poly: Poly) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::Inhomogeneous("the zero form defines no hypersurface".into()));
        }
        if !poly.is_homogeneous() {
            return Err(Error::Inhomogeneous(poly.to_string()));
        }
        let poly = poly.with_order(MonomialOrder::Grevlex);
        let degree = poly.total_degree().unwrap();
        if degree == 0 {
            return Err(Error::Inhomogeneous("constant forms define no hypersurface".into()));
        }
        Ok(HomogeneousForm { poly, degree })
    }

    /// `Σ c_i X_i`.
    pub fn linear(coeffs: &[Scalar]) -> Result<Self> {
        let n = coeffs.len();
        let mut p = Poly::zero(n, MonomialOrder::Grevlex);
        for (i, c) in coeffs.iter().enumerate() {
            p = p.add(&Poly::var(n, MonomialOrder::Grevlex, i).scale(c));
        }
        Self::new(p)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn num_vars(&self) -> usize {
        self.poly.nvars()
    }

    /// `max_I log|c_I|` in valuation units.
    pub fn max_log_coefficient(&self, valuation: Valuation) -> Scalar {
        self.poly
            .terms()
            .iter()
            .filter_map(|(_, c)| valuation.log_abs(c))
            .max()
            .unwrap()
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        self.poly.eval(point)
    }
}

impl std::fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.poly.fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypersurface {
    pub name: String,
    pub form: HomogeneousForm,
}

impl Hypersurface {
    pub fn new(name: impl Into<String>, form: HomogeneousForm) -> Self {
        Hypersurface { name: name.into(), form }
    }

    pub fn degree(&self) -> u32 {
        self.form.degree
    }
}

/// `X ⊆ P^N`, cut out by `x_ideal` (empty for `X = P^N`), of dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceSpec {
    pub ambient_dim: usize,
    pub x_ideal: Vec<HomogeneousForm>,
    pub dim: usize,
}

impl SpaceSpec {
    pub fn projective_space(n: usize) -> Self {
        SpaceSpec { ambient_dim: n, x_ideal: vec![], dim: n }
    }

    pub fn variety(ambient_dim: usize, x_ideal: Vec<HomogeneousForm>, caps: &Caps) -> Result<Self> {
        for g in &x_ideal {
            if g.num_vars() != ambient_dim + 1 {
                return Err(Error::VariableCount { expected: ambient_dim + 1, got: g.num_vars() });
            }
        }
        if x_ideal.is_empty() {
            return Ok(Self::projective_space(ambient_dim));
        }
        let gens: Vec<Poly> = x_ideal.iter().map(|f| f.poly.clone()).collect();
        let d = projective_dimension(&gens, ambient_dim + 1, MonomialOrder::Grevlex, caps)?;
        if d < 0 {
            return Err(Error::Schema("X is empty".into()));
        }
        Ok(SpaceSpec { ambient_dim, x_ideal, dim: d as usize })
    }

    pub fn is_full_space(&self) -> bool {
        self.x_ideal.is_empty()
    }

    pub fn num_vars(&self) -> usize {
        self.ambient_dim + 1
    }
}

/// `f = (f_0, …, f_N)`, a reduced representative of an analytic map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyticMap {
    coords: Vec<Series>,
    valuation: Valuation,
    /// True when some coordinate is transcendental and the absence of
    /// common zeros is taken on trust.
    reducedness_assumed: bool,
}

impl AnalyticMap {
    pub fn new(coords: Vec<Series>) -> Result<Self> {
        let Some(first) = coords.first() else {
            return Err(Error::InvalidMap("a map needs at least one coordinate".into()));
        };
        let valuation = first.valuation();
        if coords.iter().any(|c| c.valuation() != valuation) {
            return Err(Error::InvalidMap("coordinates use different valuations".into()));
        }
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidMap("all coordinates vanish identically".into()));
        }
        // a nonzero constant coordinate rules out common zeros
        let has_unit = coords.iter().any(|c| c.degree() == Some(0));
        let reducedness_assumed = coords.iter().any(|c| !c.is_polynomial()) && !has_unit;
        if coords.iter().all(|c| c.is_polynomial()) {
            let g = coords
                .iter()
                .fold(vec![], |acc: Vec<Scalar>, c| upoly::gcd(&acc, c.coeffs()));
            if upoly::degree(&g).unwrap_or(0) > 0 {
                return Err(Error::InvalidMap("coordinates have a common zero (nonconstant gcd)".into()));
            }
        }
        Ok(AnalyticMap { coords, valuation, reducedness_assumed })
    }

    pub fn coords(&self) -> &[Series] {
        &self.coords
    }

    pub fn valuation(&self) -> Valuation {
        self.valuation
    }

    pub fn reducedness_assumed(&self) -> bool {
        self.reducedness_assumed
    }

    pub fn is_polynomial(&self) -> bool {
        self.coords.iter().all(|c| c.is_polynomial())
    }

    /// Nonconstant as a map to projective space: for polynomial maps, some
    /// coordinate ratio is nonconstant.
    pub fn is_constant(&self) -> bool {
        if !self.is_polynomial() {
            return false;
        }
        self.coords.iter().all(|c| c.degree().unwrap_or(0) == 0)
    }

    pub fn num_coords(&self) -> usize {
        self.coords.len()
    }
}

/// `Q(f_0, …, f_N)` as a series; exact for polynomial maps.
pub fn restrict_form_to_map(q: &HomogeneousForm, f: &AnalyticMap, order_cap: usize) -> Result<Series> {
    if q.num_vars() != f.num_coords() {
        return Err(Error::VariableCount { expected: f.num_coords(), got: q.num_vars() });
    }
    let mut powers: HashMap<(usize, u32), Series> = HashMap::new();
    let mut total = Series::zero(f.valuation);
    for (m, c) in q.poly.terms() {
        let mut term = Series::constant(c.clone(), f.valuation);
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let p = match powers.get(&(i, e)) {
                Some(p) => p.clone(),
                None => {
                    let p = f.coords[i].pow(e, order_cap)?;
                    powers.insert((i, e), p.clone());
                    p
                }
            };
            term = term.mul(&p)?;
        }
        total = total.add(&term)?;
        if total.order() > order_cap {
            return Err(Error::OrderCap { requested: total.order(), cap: order_cap });
        }
    }
    if total.is_zero() {
        return Err(Error::ContainedInHypersurface(q.to_string()));
    }
    if total.head_vanishes() {
        return Err(Error::ContainmentUndetermined(q.to_string()));
    }
    Ok(total)
}

fn rename(err: Error, name: &str) -> Error {
    match err {
        Error::ContainedInHypersurface(_) => Error::ContainedInHypersurface(name.to_string()),
        Error::ContainmentUndetermined(_) => Error::ContainmentUndetermined(name.to_string()),
        other => other,
    }
}

fn certified_norm(s: &Series, t_min: &Scalar, t_max: &Scalar, what: &str) -> Result<PlFun> {
    let g = s.gauss_norm(t_min, t_max)?;
    if !g.certified {
        return Err(Error::Uncertified(format!("Gauss norm of {what} on [{t_min}, {t_max}]")));
    }
    Ok(g.norm)
}

/// `T_f(t) = max_i log|f_i|_r`.
pub fn characteristic(f: &AnalyticMap, t_min: &Scalar, t_max: &Scalar) -> Result<PlFun> {
    let mut out: Option<PlFun> = None;
    for (i, c) in f.coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if c.head_vanishes() {
            return Err(Error::Uncertified(format!("coordinate f_{i} has an undetermined head")));
        }
        let g = certified_norm(c, t_min, t_max, &format!("f_{i}"))?;
        out = Some(match out {
            Some(o) => o.max(&g)?,
            None => g,
        });
    }
    out.ok_or_else(|| Error::InvalidMap("all coordinates vanish identically".into()))
}

/// All single-hypersurface Nevanlinna data for one `(f, D)` pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairFunctions {
    pub restricted: Series,
    pub log_norm: PlFun,
    pub proximity: PlFun,
    pub counting: PlFun,
    /// `m + N − deg(D)·T`, constant by the First Main Theorem.
    pub fmt_constant: Scalar,
}

pub struct NevanlinnaContext<'a> {
    pub map: &'a AnalyticMap,
    pub t_min: Scalar,
    pub t_max: Scalar,
    pub characteristic: PlFun,
    pub order_cap: usize,
}

impl<'a> NevanlinnaContext<'a> {
    pub fn new(map: &'a AnalyticMap, t_min: Scalar, t_max: Scalar) -> Result<Self> {
        let characteristic = characteristic(map, &t_min, &t_max)?;
        Ok(NevanlinnaContext { map, t_min, t_max, characteristic, order_cap: DEFAULT_ORDER_CAP })
    }

    pub fn pair(&self, d: &Hypersurface, normalize_coeffs: bool) -> Result<PairFunctions> {
        let restricted = restrict_form_to_map(&d.form, self.map, self.order_cap).map_err(|e| rename(e, &d.name))?;
        let log_norm = certified_norm(&restricted, &self.t_min, &self.t_max, &format!("{}∘f", d.name))?;
        let deg = int(d.degree() as i64);
        let mut proximity = self.characteristic.scale(&deg).sub(&log_norm)?;
        if normalize_coeffs {
            proximity = proximity.add_constant(&d.form.max_log_coefficient(self.map.valuation));
        }
        let counting = zero_counting(&restricted, &self.t_min, &self.t_max)?.counting;
        let defect = proximity.add(&counting)?.sub(&self.characteristic.scale(&deg))?;
        if !defect.is_constant() {
            return Err(Error::FmtNotConstant(d.name.clone()));
        }
        let fmt_constant = defect.values()[0].clone();
        Ok(PairFunctions { restricted, log_norm, proximity, counting, fmt_constant })
    }
}

pub fn proximity(
    f: &AnalyticMap,
    d: &Hypersurface,
    t_min: &Scalar,
    t_max: &Scalar,
    normalize_coeffs: bool,
) -> Result<PlFun> {
    Ok(NevanlinnaContext::new(f, t_min.clone(), t_max.clone())?
        .pair(d, normalize_coeffs)?
        .proximity)
}

pub fn counting(f: &AnalyticMap, d: &Hypersurface, t_min: &Scalar, t_max: &Scalar) -> Result<PlFun> {
    let restricted = restrict_form_to_map(&d.form, f, DEFAULT_ORDER_CAP).map_err(|e| rename(e, &d.name))?;
    Ok(zero_counting(&restricted, t_min, t_max)?.counting)
}

/// `(m + N − deg(D)·T, its constant value)`.
pub fn fmt_defect(f: &AnalyticMap, d: &Hypersurface, t_min: &Scalar, t_max: &Scalar) -> Result<(PlFun, Scalar)> {
    let pair = NevanlinnaContext::new(f, t_min.clone(), t_max.clone())?.pair(d, false)?;
    let c = pair.fmt_constant.clone();
    Ok((PlFun::constant(t_min, t_max, &c)?, c))
}

/// Convenience: variable `X_i` as a linear form in `n` variables.
pub fn coordinate_form(n: usize, i: usize) -> HomogeneousForm {
    let mut c = vec![Scalar::zero(); n];
    c[i] = Scalar::one();
    HomogeneousForm::linear(&c).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    fn form(n: usize, terms: &[(&[u32], i64)]) -> HomogeneousForm {
        HomogeneousForm::new(Poly::from_terms(
            n,
            MonomialOrder::Grevlex,
            terms.iter().map(|(e, c)| (Monomial(e.to_vec()), int(*c))).collect(),
        ))
        .unwrap()
    }

    fn q1() -> HomogeneousForm {
        form(3, &[(&[1, 1, 0], 1), (&[0, 0, 2], -1)])
    }

    fn q2() -> HomogeneousForm {
        form(3, &[(&[1, 0, 1], 1), (&[0, 2, 0], -1)])
    }

    fn q3() -> HomogeneousForm {
        HomogeneousForm::new(q1().poly().add(&q2().poly().scale(&int(3)))).unwrap()
    }

    fn poly(cs: &[i64], v: Valuation) -> Series {
        Series::polynomial(cs.iter().map(|&c| int(c)).collect(), v)
    }

    fn conic_map(p: u64) -> AnalyticMap {
        let v = Valuation::PAdic(p);
        AnalyticMap::new(vec![poly(&[0, 1], v), poly(&[1], v), poly(&[0], v)]).unwrap()
    }

    fn lin(s: i64) -> PlFun {
        PlFun::affine(&int(0), &int(10), &int(s), &int(0)).unwrap()
    }

    #[test]
    fn restriction_of_conics() {
        let f = conic_map(5);
        let v = f.valuation();
        assert_eq!(restrict_form_to_map(&q2(), &f, 100).unwrap(), poly(&[-1], v));
        assert_eq!(restrict_form_to_map(&q1(), &f, 100).unwrap(), poly(&[0, 1], v));
        // linear in Q: Q1 + 3 Q2 restricts to z - 3
        let r3 = restrict_form_to_map(&q3(), &f, 100).unwrap();
        let sum = restrict_form_to_map(&q1(), &f, 100)
            .unwrap()
            .add(&restrict_form_to_map(&q2(), &f, 100).unwrap().scale(&int(3)))
            .unwrap();
        assert_eq!(r3, sum);
        assert_eq!(r3, poly(&[-3, 1], v));
    }

    #[test]
    fn contained_map_is_reported() {
        let v = Valuation::PAdic(2);
        let f = AnalyticMap::new(vec![poly(&[0], v), poly(&[1], v), poly(&[0, 1], v)]).unwrap();
        assert!(matches!(
            restrict_form_to_map(&coordinate_form(3, 0), &f, 100),
            Err(Error::ContainedInHypersurface(_))
        ));
    }

    #[test]
    fn characteristic_examples() {
        assert_eq!(characteristic(&conic_map(2), &int(0), &int(10)).unwrap(), lin(1));
        let t = Valuation::Trivial;
        let f = AnalyticMap::new(vec![poly(&[1], t), poly(&[0, 1], t), poly(&[0, 0, 0, 0, 1], t)]).unwrap();
        assert_eq!(characteristic(&f, &int(0), &int(10)).unwrap(), lin(4));
        let c = AnalyticMap::new(vec![poly(&[1], t), poly(&[1], t), poly(&[0], t)]).unwrap();
        assert_eq!(characteristic(&c, &int(0), &int(10)).unwrap(), lin(0));
        assert!(c.is_constant());
    }

    #[test]
    fn conic_proximities_and_counting() {
        for p in [2, 3, 5, 7] {
            let f = conic_map(p);
            let ctx = NevanlinnaContext::new(&f, int(0), int(10)).unwrap();
            let d1 = ctx.pair(&Hypersurface::new("D1", q1()), false).unwrap();
            let d2 = ctx.pair(&Hypersurface::new("D2", q2()), false).unwrap();
            let d3 = ctx.pair(&Hypersurface::new("D3", q3()), false).unwrap();
            assert_eq!(d1.proximity, lin(1));
            assert_eq!(d2.proximity, lin(2));
            assert_eq!(d3.proximity, lin(1));
            assert_eq!(d1.counting, lin(1));
            assert_eq!(d2.counting, lin(0));
            assert_eq!(d3.counting, lin(1));
            assert_eq!(d1.fmt_constant, int(0));
            assert_eq!(d2.fmt_constant, int(0));
        }
    }

    #[test]
    fn normalized_proximity_is_nonnegative() {
        // D = X1/3 - X0 restricts to 1/3 - z
        let f = conic_map(3);
        let d = Hypersurface::new(
            "D",
            HomogeneousForm::linear(&[int(-1), crate::scalar::ratio(1, 3), int(0)]).unwrap(),
        );
        let m = proximity(&f, &d, &int(-4), &int(4), true).unwrap();
        assert!(m.min_value() >= int(0));
        let raw = proximity(&f, &d, &int(-4), &int(4), false).unwrap();
        assert_eq!(raw.min_value(), int(-1));
    }

    #[test]
    fn common_zero_is_rejected() {
        let v = Valuation::PAdic(2);
        let e = AnalyticMap::new(vec![poly(&[0, 1], v), poly(&[0, 0, 1], v)]);
        assert!(matches!(e, Err(Error::InvalidMap(_))));
    }
}
