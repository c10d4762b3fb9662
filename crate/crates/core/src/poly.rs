//! Sparse multivariate polynomials over the rationals with a selectable
//! monomial order. Terms are kept sorted in strictly decreasing order.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::scalar::{int, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic.
    Grevlex,
    Lex,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize, e: u32) -> Self {
        let mut m = vec![0; nvars];
        m[i] = e;
        Monomial(m)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of variables that occur.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i)
    }

    pub fn cmp_by(&self, other: &Monomial, order: MonomialOrder) -> Ordering {
        match order {
            MonomialOrder::Lex => self.0.cmp(&other.0),
            MonomialOrder::Grevlex => self.degree().cmp(&other.degree()).then_with(|| {
                for (a, b) in self.0.iter().zip(&other.0).rev() {
                    if a != b {
                        return b.cmp(a);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    order: MonomialOrder,
    terms: Vec<(Monomial, Scalar)>,
}

impl Poly {
    pub fn zero(nvars: usize, order: MonomialOrder) -> Self {
        Poly { nvars, order, terms: vec![] }
    }

    pub fn constant(nvars: usize, order: MonomialOrder, c: Scalar) -> Self {
        Self::from_terms(nvars, order, vec![(Monomial::one(nvars), c)])
    }

    pub fn var(nvars: usize, order: MonomialOrder, i: usize) -> Self {
        Self::from_terms(nvars, order, vec![(Monomial::var(nvars, i, 1), Scalar::one())])
    }

    pub fn monomial(order: MonomialOrder, m: Monomial, c: Scalar) -> Self {
        Self::from_terms(m.nvars(), order, vec![(m, c)])
    }

    /// Sorts, merges like terms and drops zeros.
    pub fn from_terms(nvars: usize, order: MonomialOrder, mut terms: Vec<(Monomial, Scalar)>) -> Self {
        debug_assert!(terms.iter().all(|(m, _)| m.nvars() == nvars));
        terms.sort_by(|a, b| b.0.cmp_by(&a.0, order));
        let mut out: Vec<(Monomial, Scalar)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { nvars, order, terms: out }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.degree() == 0)
    }

    pub fn leading(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &Scalar {
        &self.terms[0].1
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => {
                let d = m.degree();
                self.terms.iter().all(|(m, _)| m.degree() == d)
            }
        }
    }

    pub fn with_order(&self, order: MonomialOrder) -> Poly {
        Poly::from_terms(self.nvars, order, self.terms.clone())
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Scalar::zero)
    }

    fn merge(&self, other: &Poly, sign: &Scalar) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match a.0.cmp_by(&b.0, self.order) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.0.clone(), &b.1 * sign));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a.1 + &b.1 * sign;
                    if !c.is_zero() {
                        out.push((a.0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), c * sign)));
        Poly { nvars: self.nvars, order: self.order, terms: out }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, &Scalar::one())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, &-Scalar::one())
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars, self.order);
        }
        Poly {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiplication by a single term preserves the term order.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars, self.order);
        }
        Poly {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                terms.push((m.mul(n), a * b));
            }
        }
        Poly::from_terms(self.nvars, self.order, terms)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(self.nvars, self.order, Scalar::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => self.scale(&(Scalar::one() / c)),
        }
    }

    /// Homogeneous component of the given degree.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect(),
        }
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (e, x)| acc * crate::scalar::pow(x, *e))
            })
            .sum()
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[i] > 0)
            .map(|(m, c)| {
                let mut e = m.0.clone();
                let k = e[i];
                e[i] -= 1;
                (Monomial(e), c * int(k as i64))
            })
            .collect();
        Poly::from_terms(self.nvars, self.order, terms)
    }

    /// Sets variable `i` to one and removes it.
    pub fn dehomogenize(&self, i: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e.remove(i);
                (Monomial(e), c.clone())
            })
            .collect();
        Poly::from_terms(self.nvars - 1, self.order, terms)
    }

    /// Substitutes `x_i = value` and removes the variable.
    pub fn specialize(&self, i: usize, value: &Scalar) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                let k = e.remove(i);
                (Monomial(e), c * crate::scalar::pow(value, k))
            })
            .collect();
        Poly::from_terms(self.nvars - 1, self.order, terms)
    }

    /// Reorders variables: variable `i` of `self` becomes variable `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; self.nvars];
                for (i, &k) in m.0.iter().enumerate() {
                    e[perm[i]] = k;
                }
                (Monomial(e), c.clone())
            })
            .collect();
        Poly::from_terms(self.nvars, self.order, terms)
    }

    /// Appends fresh variables (exponent zero) at the end.
    pub fn extend_vars(&self, extra: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e.extend(std::iter::repeat_n(0, extra));
                (Monomial(e), c.clone())
            })
            .collect();
        Poly::from_terms(self.nvars + extra, self.order, terms)
    }

    /// Coefficients of a polynomial involving only variable `i`, dense in
    /// increasing degree. `None` if another variable occurs.
    pub fn as_univariate(&self, i: usize) -> Option<Vec<Scalar>> {
        let mut out: Vec<Scalar> = vec![];
        for (m, c) in &self.terms {
            if m.support().any(|j| j != i) {
                return None;
            }
            let k = m.0[i] as usize;
            if out.len() <= k {
                out.resize(k + 1, Scalar::zero());
            }
            out[k] += c;
        }
        Some(out)
    }

    pub fn from_univariate(nvars: usize, order: MonomialOrder, i: usize, coeffs: &[Scalar]) -> Poly {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (Monomial::var(nvars, i, k as u32), c.clone()))
            .collect();
        Poly::from_terms(nvars, order, terms)
    }

    /// Renders with variable names `X0, X1, …` (or a custom prefix).
    pub fn display_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| if *e == 1 { names(i) } else { format!("{}^{e}", names(i)) })
                .collect();
            if factors.is_empty() {
                s.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    s.push_str(&abs.to_string());
                    s.push('*');
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&|i| format!("X{i}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    const G: MonomialOrder = MonomialOrder::Grevlex;

    fn m(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    #[test]
    fn grevlex_order() {
        // x0 x2 < x1^2 in grevlex
        assert_eq!(m(&[1, 0, 1]).cmp_by(&m(&[0, 2, 0]), G), Ordering::Less);
        assert_eq!(m(&[1, 0, 1]).cmp_by(&m(&[0, 2, 0]), MonomialOrder::Lex), Ordering::Greater);
        assert_eq!(m(&[0, 0, 2]).cmp_by(&m(&[2, 0, 0]), G), Ordering::Less);
    }

    #[test]
    fn arithmetic() {
        let x = Poly::var(3, G, 0);
        let y = Poly::var(3, G, 1);
        let s = x.add(&y);
        let p = s.mul(&s);
        assert_eq!(p.terms().len(), 3);
        assert_eq!(p.coefficient(&m(&[1, 1, 0])), int(2));
        assert!(p.sub(&p).is_zero());
        assert!(p.is_homogeneous());
        assert_eq!(p.to_string(), "X0^2 + 2*X0*X1 + X1^2");
        let q = p.scale(&ratio(-1, 2));
        assert_eq!(q.to_string(), "-1/2*X0^2 - X0*X1 - 1/2*X1^2");
    }

    #[test]
    fn derivative_and_specialize() {
        let q = Poly::from_terms(3, G, vec![(m(&[1, 1, 0]), int(1)), (m(&[0, 0, 2]), int(-1))]);
        assert_eq!(q.derivative(2).to_string(), "-2*X2");
        let d = q.dehomogenize(0);
        assert_eq!(d.nvars(), 2);
        assert_eq!(d.eval(&[int(4), int(2)]), int(0));
        assert_eq!(q.specialize(1, &int(3)).to_string(), "-X1^2 + 3*X0");
    }
}
