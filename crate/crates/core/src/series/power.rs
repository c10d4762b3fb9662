use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Valuation;
use crate::error::{Error, Result};
use crate::pl::PlFun;
use crate::scalar::{int, pow, ratio, rational_power_bounds, reduce_mod_prime_power, Scalar};

pub const DEFAULT_ORDER_CAP: usize = 4096;

const ROOT_SCALE_BITS: u32 = 48;

/// Lower bound `v(a_n) ≥ c·n^e + offset` for every index `n` past the
/// truncation order, with `c > 0` and `e > 1`. The superlinear growth makes
/// the radius of convergence infinite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerLawTail {
    coefficient: Scalar,
    exponent: Scalar,
    offset: Scalar,
}

impl PowerLawTail {
    pub fn new(coefficient: Scalar, exponent: Scalar, offset: Scalar) -> Result<Self> {
        if !coefficient.is_positive() {
            return Err(Error::InvalidTail("coefficient must be positive".into()));
        }
        if exponent <= Scalar::one() {
            return Err(Error::InvalidTail("growth exponent must exceed 1".into()));
        }
        if exponent.denom() > &BigInt::from(64) || exponent > int(64) {
            return Err(Error::InvalidTail("growth exponent too large".into()));
        }
        Ok(PowerLawTail { coefficient, exponent, offset })
    }

    pub fn coefficient(&self) -> &Scalar {
        &self.coefficient
    }

    pub fn exponent(&self) -> &Scalar {
        &self.exponent
    }

    pub fn offset(&self) -> &Scalar {
        &self.offset
    }

    fn bounds(&self, n: u64) -> Result<(Scalar, Scalar)> {
        let (lo, hi) = rational_power_bounds(n.max(1), &self.exponent, ROOT_SCALE_BITS)?;
        Ok((&self.coefficient * lo + &self.offset, &self.coefficient * hi + &self.offset))
    }

    /// Rational lower bound for the declared bound at index `n`.
    pub fn lower_at(&self, n: u64) -> Result<Scalar> {
        Ok(self.bounds(n)?.0)
    }

    pub fn upper_at(&self, n: u64) -> Result<Scalar> {
        Ok(self.bounds(n)?.1)
    }

    /// True when `n·t − (c·n^e + offset)` is nonincreasing in `n ≥ start` for
    /// every `t ≤ t_max`, i.e. `c·e·start^(e−1) ≥ t_max`.
    pub fn decays_beyond(&self, start: u64, t_max: &Scalar) -> bool {
        if !t_max.is_positive() {
            return true;
        }
        let delta = &self.exponent - Scalar::one();
        let (a, b) = (delta.numer().to_usize().unwrap(), delta.denom().to_usize().unwrap());
        let lhs = Scalar::from_integer(num_traits::pow(BigInt::from(start), a));
        let ratio = t_max / (&self.coefficient * &self.exponent);
        lhs >= num_traits::pow(ratio, b)
    }

    fn shifted(&self, dv: &Scalar) -> Self {
        PowerLawTail { offset: &self.offset + dv, ..self.clone() }
    }

    /// A bound implied by both `self` and `other` (valid for `n ≥ 1`).
    fn meet(&self, other: &Self) -> Self {
        PowerLawTail {
            coefficient: std::cmp::min(&self.coefficient, &other.coefficient).clone(),
            exponent: std::cmp::min(&self.exponent, &other.exponent).clone(),
            offset: std::cmp::min(&self.offset, &other.offset).clone(),
        }
    }
}

/// What is known about the coefficients beyond the stored head.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tail {
    /// All further coefficients vanish: the series is a polynomial.
    Zero,
    PowerLaw(PowerLawTail),
    Unknown,
}

/// A power series known through its head `a_0..a_order`, optionally only up
/// to an absolute `p`-adic precision, together with a declared bound on its
/// tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Scalar>,
    /// Stored coefficients agree with the true ones modulo `p^precision`.
    precision: Option<i64>,
    tail: Tail,
    valuation: Valuation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussNorm {
    /// `t ↦ log |f|_r` with `t = log r`.
    pub norm: PlFun,
    /// The head maximum strictly dominates every undetermined contribution
    /// on the whole domain.
    pub certified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Coeff {
    Zero,
    Val(i64),
    Unknown,
}

impl Series {
    pub fn polynomial(coeffs: Vec<Scalar>, valuation: Valuation) -> Self {
        let mut coeffs = crate::upoly::trim(coeffs);
        if coeffs.is_empty() {
            coeffs.push(Scalar::zero());
        }
        Series { coeffs, precision: None, tail: Tail::Zero, valuation }
    }

    pub fn constant(c: Scalar, valuation: Valuation) -> Self {
        Self::polynomial(vec![c], valuation)
    }

    pub fn zero(valuation: Valuation) -> Self {
        Self::constant(Scalar::zero(), valuation)
    }

    pub fn monomial(c: Scalar, degree: usize, valuation: Valuation) -> Self {
        let mut coeffs = vec![Scalar::zero(); degree + 1];
        coeffs[degree] = c;
        Self::polynomial(coeffs, valuation)
    }

    /// A truncated series with explicit certification data.
    pub fn truncated(coeffs: Vec<Scalar>, precision: Option<i64>, tail: Tail, valuation: Valuation) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidTail("a series needs at least one head coefficient".into()));
        }
        if valuation == Valuation::Trivial && (precision.is_some() || tail != Tail::Zero) {
            return Err(Error::InvalidTail(
                "under the trivial valuation only polynomials are entire".into(),
            ));
        }
        if tail == Tail::Zero && precision.is_none() {
            return Ok(Self::polynomial(coeffs, valuation));
        }
        Ok(Series { coeffs, precision, tail, valuation })
    }

    /// Replaces the tail information with a caller-supplied bound.
    pub fn declare_tail(mut self, tail: PowerLawTail) -> Result<Self> {
        if self.valuation == Valuation::Trivial {
            return Err(Error::InvalidTail("tail bounds need a p-adic valuation".into()));
        }
        self.tail = Tail::PowerLaw(tail);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn precision(&self) -> Option<i64> {
        self.precision
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn valuation(&self) -> Valuation {
        self.valuation
    }

    pub fn is_polynomial(&self) -> bool {
        self.tail == Tail::Zero && self.precision.is_none()
    }

    /// Degree for polynomials, `None` for the zero polynomial or for series.
    pub fn degree(&self) -> Option<usize> {
        if self.is_polynomial() {
            crate::upoly::degree(&self.coeffs)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.is_polynomial() && self.coeffs.iter().all(|c| c.is_zero())
    }

    fn exact_constant(&self) -> Option<&Scalar> {
        (self.is_polynomial() && self.coeffs.len() == 1).then(|| &self.coeffs[0])
    }

    fn coeff_status(&self, c: &Scalar) -> Coeff {
        match (self.valuation.of(c), self.precision) {
            (Some(v), Some(p)) if v >= p => Coeff::Unknown,
            (None, Some(_)) => Coeff::Unknown,
            (Some(v), _) => Coeff::Val(v),
            (None, None) => Coeff::Zero,
        }
    }

    /// True when every stored coefficient is zero or undetermined, so that
    /// nothing certifies the series is nonzero.
    pub fn head_vanishes(&self) -> bool {
        self.coeffs.iter().all(|c| !matches!(self.coeff_status(c), Coeff::Val(_)))
    }

    /// `−v(a_n)`; `None` stands for `−∞` (a zero coefficient).
    pub fn coefficient_log_norm(&self, n: usize) -> Result<Option<Scalar>> {
        match self.coeffs.get(n) {
            Some(c) => match self.coeff_status(c) {
                Coeff::Zero => Ok(None),
                Coeff::Val(v) => Ok(Some(int(-v))),
                Coeff::Unknown => Err(Error::Uncertified(format!(
                    "coefficient {n} lies below the head precision"
                ))),
            },
            None if self.tail == Tail::Zero => Ok(None),
            None => Err(Error::BeyondTruncation { index: n, order: self.order() }),
        }
    }

    /// Index-wise valuations `(index, v)` of the head coefficients that are
    /// determined and nonzero.
    pub fn known_points(&self) -> Vec<(usize, i64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(k, c)| match self.coeff_status(c) {
                Coeff::Val(v) => Some((k, v)),
                _ => None,
            })
            .collect()
    }

    /// `log |f|_r = max_n (n·t − v(a_n))` over the head, certified when the
    /// undetermined part (coefficients below precision, and the tail) stays
    /// strictly below it on the whole domain.
    pub fn gauss_norm(&self, t_min: &Scalar, t_max: &Scalar) -> Result<GaussNorm> {
        let known = self.known_points();
        let unknown: Vec<usize> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| self.coeff_status(c) == Coeff::Unknown)
            .map(|(k, _)| k)
            .collect();
        if known.is_empty() {
            return Err(if unknown.is_empty() && self.tail == Tail::Zero {
                Error::ZeroSeries
            } else {
                Error::UndefinedNorm
            });
        }
        let line = |k: usize, w: &Scalar| PlFun::affine(t_min, t_max, &int(k as i64), w);
        let mut norm = line(known[0].0, &int(-known[0].1))?;
        for &(k, v) in &known[1..] {
            norm = norm.max(&line(k, &int(-v))?)?;
        }

        let mut certified = true;
        let mut undetermined: Option<PlFun> = None;
        let mut include = |f: PlFun| -> Result<()> {
            undetermined = Some(match undetermined.take() {
                Some(u) => u.max(&f)?,
                None => f,
            });
            Ok(())
        };
        if let (Some(&lo), Some(&hi), Some(prec)) = (unknown.first(), unknown.last(), self.precision) {
            include(line(lo, &int(-prec))?.max(&line(hi, &int(-prec))?)?)?;
        }
        match &self.tail {
            Tail::Zero => {}
            Tail::Unknown => certified = false,
            Tail::PowerLaw(tail) => {
                let start = self.order() as u64 + 1;
                if tail.decays_beyond(start, t_max) {
                    include(line(start as usize, &-tail.lower_at(start)?)?)?;
                } else {
                    certified = false;
                }
            }
        }
        if let Some(u) = undetermined {
            certified &= norm.sub(&u)?.min_value().is_positive();
        }
        Ok(GaussNorm { norm, certified })
    }

    fn check_valuation(&self, other: &Series) -> Result<()> {
        if self.valuation == other.valuation {
            Ok(())
        } else {
            Err(Error::InvalidMap(format!(
                "mixed valuations {} and {}",
                self.valuation, other.valuation
            )))
        }
    }

    /// Smallest true valuation among the head coefficients, accounting for
    /// precision. `None` when all are exactly zero.
    fn min_head_valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .filter_map(|c| match (self.valuation.of(c), self.precision) {
                (Some(v), Some(p)) => Some(v.min(p)),
                (None, Some(p)) => Some(p),
                (Some(v), None) => Some(v),
                (None, None) => None,
            })
            .min()
    }

    /// Drops head coefficients past `order`, folding them into the tail bound.
    pub fn truncate(&self, order: usize) -> Result<Series> {
        if order >= self.order() {
            return Ok(self.clone());
        }
        let coeffs = self.coeffs[..=order].to_vec();
        let tail = match &self.tail {
            Tail::Zero | Tail::Unknown => Tail::Unknown,
            Tail::PowerLaw(t) => {
                let mut offset = t.offset.clone();
                for (k, c) in self.coeffs.iter().enumerate().skip(order + 1) {
                    let v = match (self.valuation.of(c), self.precision) {
                        (Some(v), Some(p)) => v.min(p),
                        (None, Some(p)) => p,
                        (Some(v), None) => v,
                        (None, None) => continue,
                    };
                    let need = int(v) - (t.upper_at(k as u64)? - &t.offset);
                    if need < offset {
                        offset = need;
                    }
                }
                Tail::PowerLaw(PowerLawTail { offset, ..t.clone() })
            }
        };
        Ok(Series { coeffs, precision: self.precision, tail, valuation: self.valuation })
    }

    pub fn scale(&self, c: &Scalar) -> Series {
        let Some(v) = self.valuation.of(c) else {
            return Series::zero(self.valuation);
        };
        let tail = match &self.tail {
            Tail::PowerLaw(t) => Tail::PowerLaw(t.shifted(&int(v))),
            other => other.clone(),
        };
        Series {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            precision: self.precision.map(|p| p + v),
            tail,
            valuation: self.valuation,
        }
    }

    pub fn neg(&self) -> Series {
        self.scale(&-Scalar::one())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_valuation(other)?;
        let bounded = |s: &Series| s.tail != Tail::Zero;
        let order = match (bounded(self), bounded(other)) {
            (false, false) => self.order().max(other.order()),
            (true, false) => self.order(),
            (false, true) => other.order(),
            (true, true) => self.order().min(other.order()),
        };
        let a = self.truncate(order)?;
        let b = other.truncate(order)?;
        let zero = Scalar::zero();
        let coeffs: Vec<Scalar> = (0..=order)
            .map(|i| a.coeffs.get(i).unwrap_or(&zero) + b.coeffs.get(i).unwrap_or(&zero))
            .collect();
        let precision = match (a.precision, b.precision) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        let tail = match (&a.tail, &b.tail) {
            (Tail::Zero, Tail::Zero) => Tail::Zero,
            (Tail::Zero, t) if a.order() <= order => t.clone(),
            (t, Tail::Zero) if b.order() <= order => t.clone(),
            (Tail::PowerLaw(x), Tail::PowerLaw(y)) => Tail::PowerLaw(x.meet(y)),
            _ => Tail::Unknown,
        };
        Series::truncated(coeffs, precision, tail, self.valuation)
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_valuation(other)?;
        if let Some(c) = self.exact_constant() {
            return Ok(other.scale(c));
        }
        if let Some(c) = other.exact_constant() {
            return Ok(self.scale(c));
        }
        let both_finite = self.tail == Tail::Zero && other.tail == Tail::Zero;
        let order = if both_finite {
            self.order() + other.order()
        } else {
            [self, other]
                .iter()
                .filter(|s| s.tail != Tail::Zero)
                .map(|s| s.order())
                .min()
                .unwrap()
        };
        let mut coeffs = vec![Scalar::zero(); order + 1];
        for (i, x) in self.coeffs.iter().enumerate().take(order + 1) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !y.is_zero() {
                    coeffs[i + j] += x * y;
                }
            }
        }
        let precision = match (self.precision, other.precision) {
            (None, None) => None,
            (pa, pb) => {
                let va = self.min_head_valuation();
                let vb = other.min_head_valuation();
                [
                    pa.zip(vb).map(|(p, v)| p + v),
                    pb.zip(va).map(|(p, v)| p + v),
                    pa.zip(pb).map(|(p, q)| p + q),
                ]
                .into_iter()
                .flatten()
                .min()
                .or(pa.or(pb))
            }
        };
        let tail = if both_finite { Tail::Zero } else { Tail::Unknown };
        Series::truncated(coeffs, precision, tail, self.valuation)
    }

    pub fn pow(&self, e: u32, cap: usize) -> Result<Series> {
        let mut acc = Series::constant(Scalar::one(), self.valuation);
        for _ in 0..e {
            acc = acc.mul(self)?;
            if acc.order() > cap {
                return Err(Error::OrderCap { requested: acc.order(), cap });
            }
        }
        Ok(acc)
    }

    /// `outer(inner(z))` through `z^target_order`.
    ///
    /// Exact polynomial compositions within the target come back as
    /// polynomials; everything else is a truncated head whose tail is left
    /// undetermined for the caller to certify.
    pub fn compose(outer: &Series, inner: &Series, target_order: usize, cap: usize) -> Result<Series> {
        outer.check_valuation(inner)?;
        if target_order > cap {
            return Err(Error::OrderCap { requested: target_order, cap });
        }
        if outer.is_polynomial() {
            let deg = outer.degree().unwrap_or(0);
            let full = inner.is_polynomial() && deg * inner.order() <= target_order;
            let mut acc = Series::constant(outer.coeffs[deg].clone(), outer.valuation);
            for m in (0..deg).rev() {
                acc = acc.mul(inner)?.add(&Series::constant(outer.coeffs[m].clone(), outer.valuation))?;
                if !full {
                    acc = acc.truncate(target_order)?;
                }
            }
            return Ok(acc);
        }
        let constant_free = inner.precision.is_none() && inner.coeffs[0].is_zero();
        if !constant_free {
            return Err(Error::InvalidComposition);
        }
        let order = if outer.tail == Tail::Zero { target_order } else { target_order.min(outer.order()) };
        let zero = Scalar::zero();
        let exact_outer: Vec<Scalar> = (0..=order).map(|m| outer.coeffs.get(m).unwrap_or(&zero).clone()).collect();
        let mut acc = Series::constant(exact_outer[order].clone(), outer.valuation);
        for m in (0..order).rev() {
            acc = acc
                .mul(inner)?
                .add(&Series::constant(exact_outer[m].clone(), outer.valuation))?
                .truncate(order)?;
        }
        acc.tail = Tail::Unknown;
        if let Some(p) = outer.precision {
            let vmin = inner.min_head_valuation().unwrap_or(0);
            let worst = if vmin < 0 { vmin * order as i64 } else { 0 };
            acc.precision = Some(acc.precision.map_or(p + worst, |q| q.min(p + worst)));
        }
        if acc.precision.is_none() && acc.tail == Tail::Zero {
            return Ok(Series::polynomial(acc.coeffs, acc.valuation));
        }
        Ok(acc)
    }

    /// Truncated composition of two `p`-integral polynomials with every
    /// coefficient reduced modulo `p^precision` after each step. The result
    /// carries that absolute precision and an undetermined tail.
    pub fn compose_mod(outer: &Series, inner: &Series, target_order: usize, precision: u32) -> Result<Series> {
        let p = outer
            .valuation
            .prime()
            .ok_or_else(|| Error::Unsupported("modular composition needs a p-adic valuation".into()))?;
        if !outer.is_polynomial() || !inner.is_polynomial() {
            return Err(Error::InvalidComposition);
        }
        let reduce = |c: &Scalar| {
            reduce_mod_prime_power(c, p, precision)
                .ok_or_else(|| Error::Unsupported("coefficients must be p-integral".into()))
        };
        let modulus = num_traits::pow(BigInt::from(p), precision as usize);
        let inner_m: Vec<BigInt> = inner.coeffs.iter().take(target_order + 1).map(reduce).collect::<Result<_>>()?;
        let outer_m: Vec<BigInt> = outer.coeffs.iter().map(reduce).collect::<Result<_>>()?;
        let mut acc: Vec<BigInt> = vec![outer_m.last().unwrap().clone()];
        for c in outer_m.iter().rev().skip(1) {
            let len = (acc.len() + inner_m.len() - 1).min(target_order + 1);
            let mut next = vec![BigInt::zero(); len];
            for (i, x) in acc.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, y) in inner_m.iter().enumerate().take(len - i) {
                    next[i + j] += x * y;
                }
            }
            next[0] += c;
            for x in next.iter_mut() {
                *x %= &modulus;
            }
            acc = next;
        }
        acc.resize(target_order + 1, BigInt::zero());
        Series::truncated(
            acc.into_iter().map(Scalar::from_integer).collect(),
            Some(precision as i64),
            Tail::Unknown,
            outer.valuation,
        )
    }

    /// Evaluates a polynomial with rational coefficients.
    pub fn eval_polynomial(&self, z: &Scalar) -> Option<Scalar> {
        self.is_polynomial().then(|| crate::upoly::eval(&self.coeffs, z))
    }
}

/// `g(z) = Σ (a^n z)^n = Σ a^(n²) z^n` through `z^order`, with tail bound
/// `v(a)·n²`. Requires `v(a) > 0`.
pub fn iterated_power_series(a: &Scalar, order: usize, valuation: Valuation) -> Result<Series> {
    let va = valuation
        .of(a)
        .filter(|&v| v > 0)
        .ok_or_else(|| Error::InvalidTail("g needs 0 < |a| < 1 (positive valuation)".into()))?;
    let coeffs: Vec<Scalar> = (0..=order).map(|n| pow(a, (n * n) as u32)).collect();
    let tail = PowerLawTail::new(int(va), int(2), Scalar::zero())?;
    Series::truncated(coeffs, None, Tail::PowerLaw(tail), valuation)
}

/// `g(g(z))` through `z^order`. The outer series is cut after
/// `outer_order` terms, which fixes every head coefficient modulo
/// `p^((outer_order+1)²·v(a))`. Beyond the head,
/// `v(b_k) ≥ v(a)·min_m (m² + k²/m) = 3·2^(-2/3)·v(a)·k^(4/3)`, declared
/// with the slightly smaller constant `47/25`.
pub fn iterated_composition(a: &Scalar, order: usize, outer_order: usize, valuation: Valuation) -> Result<Series> {
    let va = valuation
        .of(a)
        .filter(|&v| v > 0)
        .ok_or_else(|| Error::InvalidTail("g needs 0 < |a| < 1 (positive valuation)".into()))?;
    let outer = Series::polynomial((0..=outer_order).map(|n| pow(a, (n * n) as u32)).collect(), valuation);
    let inner = Series::polynomial((0..=order).map(|n| pow(a, (n * n) as u32)).collect(), valuation);
    let precision = ((outer_order + 1) * (outer_order + 1)) as u32 * va as u32;
    let head = Series::compose_mod(&outer, &inner, order, precision)?;
    head.declare_tail(PowerLawTail::new(ratio(47, 25) * int(va), ratio(4, 3), Scalar::zero())?)
}
