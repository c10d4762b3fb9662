//! Exact piecewise-linear functions of the log-radius `t`.
//!
//! Every norm, height, proximity and counting quantity in the crate is a
//! [`PlFun`]: continuous, affine between consecutive breakpoints, and kept
//! in canonical form (no breakpoint where the slope does not change), so
//! structural equality coincides with functional equality.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{fmt_scalar, parse_scalar, Scalar};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlFun {
    breaks: Vec<Scalar>,
    values: Vec<Scalar>,
}

impl PlFun {
    pub fn new(breaks: Vec<Scalar>, values: Vec<Scalar>) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != values.len() {
            return Err(Error::InvalidPl(format!(
                "{} breakpoints with {} values",
                breaks.len(),
                values.len()
            )));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPl("breakpoints must be strictly increasing".into()));
        }
        let mut f = PlFun { breaks, values };
        f.canonicalize();
        Ok(f)
    }

    /// `t ↦ slope·t + intercept` on `[t_min, t_max]`.
    pub fn affine(t_min: &Scalar, t_max: &Scalar, slope: &Scalar, intercept: &Scalar) -> Result<Self> {
        if t_min > t_max {
            return Err(Error::InvalidPl(format!("empty domain [{t_min}, {t_max}]")));
        }
        let at = |t: &Scalar| slope * t + intercept;
        if t_min == t_max {
            return Ok(PlFun { breaks: vec![t_min.clone()], values: vec![at(t_min)] });
        }
        Ok(PlFun {
            breaks: vec![t_min.clone(), t_max.clone()],
            values: vec![at(t_min), at(t_max)],
        })
    }

    pub fn constant(t_min: &Scalar, t_max: &Scalar, c: &Scalar) -> Result<Self> {
        Self::affine(t_min, t_max, &Scalar::zero(), c)
    }

    pub fn t_min(&self) -> &Scalar {
        &self.breaks[0]
    }

    pub fn t_max(&self) -> &Scalar {
        self.breaks.last().unwrap()
    }

    pub fn breakpoints(&self) -> &[Scalar] {
        &self.breaks
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn same_domain(&self, other: &PlFun) -> bool {
        self.t_min() == other.t_min() && self.t_max() == other.t_max()
    }

    fn check_domain(&self, other: &PlFun) -> Result<()> {
        if self.same_domain(other) {
            Ok(())
        } else {
            Err(Error::DomainMismatch(self.domain_string(), other.domain_string()))
        }
    }

    fn domain_string(&self) -> String {
        format!("{}, {}", self.t_min(), self.t_max())
    }

    pub fn contains(&self, t: &Scalar) -> bool {
        t >= self.t_min() && t <= self.t_max()
    }

    pub fn eval(&self, t: &Scalar) -> Result<Scalar> {
        if !self.contains(t) {
            return Err(Error::OutOfDomain(t.to_string(), self.domain_string()));
        }
        Ok(self.eval_unchecked(t))
    }

    fn eval_unchecked(&self, t: &Scalar) -> Scalar {
        match self.breaks.binary_search(t) {
            Ok(i) => self.values[i].clone(),
            Err(i) => {
                let (t0, t1) = (&self.breaks[i - 1], &self.breaks[i]);
                let (v0, v1) = (&self.values[i - 1], &self.values[i]);
                v0 + (v1 - v0) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// Segments as `(left, right, slope)`.
    pub fn segments(&self) -> impl Iterator<Item = (&Scalar, &Scalar, Scalar)> + '_ {
        self.breaks.windows(2).zip(self.values.windows(2)).map(|(t, v)| {
            let slope = (&v[1] - &v[0]) / (&t[1] - &t[0]);
            (&t[0], &t[1], slope)
        })
    }

    pub fn slopes(&self) -> Vec<Scalar> {
        self.segments().map(|(_, _, s)| s).collect()
    }

    /// Slope of the final segment (zero on a degenerate domain).
    pub fn right_slope(&self) -> Scalar {
        self.segments().last().map(|(_, _, s)| s).unwrap_or_else(Scalar::zero)
    }

    /// Right derivative at `t` (the last slope at the right endpoint).
    pub fn slope_right_of(&self, t: &Scalar) -> Scalar {
        let mut last = Scalar::zero();
        for (a, b, s) in self.segments() {
            if t >= a && t < b {
                return s;
            }
            last = s;
        }
        last
    }

    pub fn is_constant(&self) -> bool {
        self.breaks.len() <= 2 && self.values.iter().all(|v| v == &self.values[0])
    }

    pub fn is_convex(&self) -> bool {
        self.slopes().windows(2).all(|w| w[0] <= w[1])
    }

    pub fn max_value(&self) -> Scalar {
        self.values.iter().max().unwrap().clone()
    }

    pub fn min_value(&self) -> Scalar {
        self.values.iter().min().unwrap().clone()
    }

    fn canonicalize(&mut self) {
        if self.breaks.len() <= 2 {
            return;
        }
        let mut breaks = vec![self.breaks[0].clone()];
        let mut values = vec![self.values[0].clone()];
        for i in 1..self.breaks.len() - 1 {
            let (tp, vp) = (breaks.last().unwrap(), values.last().unwrap());
            let left = (&self.values[i] - vp) / (&self.breaks[i] - tp);
            let right = (&self.values[i + 1] - &self.values[i]) / (&self.breaks[i + 1] - &self.breaks[i]);
            if left != right {
                breaks.push(self.breaks[i].clone());
                values.push(self.values[i].clone());
            }
        }
        breaks.push(self.breaks.last().unwrap().clone());
        values.push(self.values.last().unwrap().clone());
        self.breaks = breaks;
        self.values = values;
    }

    fn merged_breaks(&self, other: &PlFun) -> Vec<Scalar> {
        let mut out: Vec<Scalar> = Vec::with_capacity(self.breaks.len() + other.breaks.len());
        let (mut i, mut j) = (0, 0);
        while i < self.breaks.len() || j < other.breaks.len() {
            let next = match (self.breaks.get(i), other.breaks.get(j)) {
                (Some(a), Some(b)) => match a.cmp(b) {
                    Ordering::Less => {
                        i += 1;
                        a
                    }
                    Ordering::Greater => {
                        j += 1;
                        b
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        a
                    }
                },
                (Some(a), None) => {
                    i += 1;
                    a
                }
                (None, Some(b)) => {
                    j += 1;
                    b
                }
                (None, None) => unreachable!(),
            };
            out.push(next.clone());
        }
        out
    }

    fn pointwise(&self, other: &PlFun, op: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<PlFun> {
        self.check_domain(other)?;
        let breaks = self.merged_breaks(other);
        let values = breaks
            .iter()
            .map(|t| op(&self.eval_unchecked(t), &other.eval_unchecked(t)))
            .collect();
        let mut f = PlFun { breaks, values };
        f.canonicalize();
        Ok(f)
    }

    pub fn add(&self, other: &PlFun) -> Result<PlFun> {
        self.pointwise(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PlFun) -> Result<PlFun> {
        self.pointwise(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> PlFun {
        let mut f = PlFun {
            breaks: self.breaks.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        };
        f.canonicalize();
        f
    }

    pub fn add_constant(&self, c: &Scalar) -> PlFun {
        PlFun {
            breaks: self.breaks.clone(),
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    /// Pointwise maximum. Crossing points strictly inside a common segment
    /// become new breakpoints.
    pub fn max(&self, other: &PlFun) -> Result<PlFun> {
        self.check_domain(other)?;
        let merged = self.merged_breaks(other);
        let mut breaks = Vec::with_capacity(merged.len() * 2);
        let mut values = Vec::with_capacity(merged.len() * 2);
        let mut prev: Option<(Scalar, Scalar)> = None;
        for t in merged {
            let d = self.eval_unchecked(&t) - other.eval_unchecked(&t);
            if let Some((tp, dp)) = &prev {
                if (dp.is_positive() && d.is_negative()) || (dp.is_negative() && d.is_positive()) {
                    let cross = tp + (&t - tp) * dp / (dp - &d);
                    let v = self.eval_unchecked(&cross);
                    breaks.push(cross);
                    values.push(v);
                }
            }
            let v = std::cmp::max(self.eval_unchecked(&t), other.eval_unchecked(&t));
            breaks.push(t.clone());
            values.push(v);
            prev = Some((t, d));
        }
        let mut f = PlFun { breaks, values };
        f.canonicalize();
        Ok(f)
    }

    pub fn min(&self, other: &PlFun) -> Result<PlFun> {
        let neg = |f: &PlFun| f.scale(&-Scalar::from_integer(1.into()));
        Ok(neg(&neg(self).max(&neg(other))?))
    }

    /// Least nonnegative constant `C` with `lhs ≤ rhs + C` on the shared
    /// domain. Exact: the difference is piecewise linear, so its maximum sits
    /// at a breakpoint.
    pub fn min_constant_dominating(lhs: &PlFun, rhs: &PlFun) -> Result<Scalar> {
        let gap = lhs.sub(rhs)?.max_value();
        Ok(if gap.is_positive() { gap } else { Scalar::zero() })
    }

    /// `max |self − other|` over the domain.
    pub fn sup_distance(&self, other: &PlFun) -> Result<Scalar> {
        let d = self.sub(other)?;
        Ok(d.values.iter().map(|v| v.abs()).max().unwrap())
    }

    pub fn restrict(&self, t_min: &Scalar, t_max: &Scalar) -> Result<PlFun> {
        if t_min > t_max || !self.contains(t_min) || !self.contains(t_max) {
            return Err(Error::OutOfDomain(format!("[{t_min}, {t_max}]"), self.domain_string()));
        }
        let mut breaks = vec![t_min.clone()];
        breaks.extend(self.breaks.iter().filter(|t| *t > t_min && *t < t_max).cloned());
        if t_max > t_min {
            breaks.push(t_max.clone());
        }
        let values = breaks.iter().map(|t| self.eval_unchecked(t)).collect();
        PlFun::new(breaks, values)
    }
}

impl fmt::Display for PlFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self
            .breaks
            .iter()
            .zip(&self.values)
            .map(|(t, v)| format!("({t}, {v})"))
            .collect();
        write!(f, "PL[{}]", pts.join(" "))
    }
}

/// Wire form: parallel arrays of `"num/den"` strings.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PlFunRecord {
    pub breakpoints: Vec<String>,
    pub values: Vec<String>,
}

impl From<&PlFun> for PlFunRecord {
    fn from(f: &PlFun) -> Self {
        PlFunRecord {
            breakpoints: f.breaks.iter().map(fmt_scalar).collect(),
            values: f.values.iter().map(fmt_scalar).collect(),
        }
    }
}

impl TryFrom<&PlFunRecord> for PlFun {
    type Error = Error;

    fn try_from(r: &PlFunRecord) -> Result<Self> {
        let breaks = r.breakpoints.iter().map(|s| parse_scalar(s)).collect::<Result<_>>()?;
        let values = r.values.iter().map(|s| parse_scalar(s)).collect::<Result<_>>()?;
        PlFun::new(breaks, values)
    }
}

impl Serialize for PlFun {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PlFunRecord::from(self).serialize(serializer)
    }
}
