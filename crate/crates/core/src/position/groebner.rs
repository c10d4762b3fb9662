//! Buchberger's algorithm over the rationals with the product and chain
//! criteria. Optionally tracks, for every basis element, its expression in
//! terms of the input generators.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Poly};
use crate::scalar::Scalar;

/// Resource limits for the algebra engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_generators: usize,
    pub max_degree: u32,
    /// Bound on S-pairs processed by one Buchberger run.
    pub max_pairs: usize,
    /// Largest hypersurface count for exhaustive subset scans.
    pub max_subset_q: usize,
    pub max_nullstellensatz_power: u32,
    /// Coefficient bound for the separating-hyperplane lattice search.
    pub lattice_bound: i64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_generators: 64,
            max_degree: 32,
            max_pairs: 20_000,
            max_subset_q: 12,
            max_nullstellensatz_power: 24,
            lattice_bound: 3,
        }
    }
}

#[derive(Clone, Debug)]
struct Elem {
    poly: Poly,
    /// `poly = Σ cof[i] · gens[i]`.
    cof: Option<Vec<Poly>>,
}

/// A reduced Gröbner basis, sorted by increasing leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    nvars: usize,
    order: MonomialOrder,
    basis: Vec<Poly>,
    /// `cofactors[k][i]`: coefficient of input generator `i` in `basis[k]`.
    cofactors: Option<Vec<Vec<Poly>>>,
    num_gens: usize,
}

fn zeros(nvars: usize, order: MonomialOrder, k: usize) -> Vec<Poly> {
    vec![Poly::zero(nvars, order); k]
}

fn axpy(acc: &mut [Poly], xs: &[Poly], m: &Monomial, c: &Scalar) {
    for (a, x) in acc.iter_mut().zip(xs) {
        if !x.is_zero() {
            *a = a.add(&x.mul_term(m, c));
        }
    }
}

/// Full reduction of `f` by `basis`. Returns the remainder and, when the
/// basis carries cofactors, `q` with `f = r + Σ q_i gens_i`.
fn reduce(f: &Poly, basis: &[Elem], num_gens: usize) -> (Poly, Option<Vec<Poly>>) {
    let (n, order) = (f.nvars(), f.order());
    let tracked = basis.first().is_some_and(|e| e.cof.is_some());
    let mut quot = tracked.then(|| zeros(n, order, num_gens));
    let mut p = f.clone();
    let mut rem: Vec<(Monomial, Scalar)> = vec![];
    while let Some((m, c)) = p.leading().cloned() {
        match basis.iter().find(|g| g.poly.lm().divides(&m)) {
            Some(g) => {
                let q = g.poly.lm().quotient_of(&m);
                let coef = &c / g.poly.lc();
                p = p.sub(&g.poly.mul_term(&q, &coef));
                if let (Some(acc), Some(cof)) = (quot.as_mut(), g.cof.as_ref()) {
                    axpy(acc, cof, &q, &coef);
                }
            }
            None => {
                p = p.sub(&Poly::monomial(order, m.clone(), c.clone()));
                rem.push((m, c));
            }
        }
    }
    (Poly::from_terms(n, order, rem), quot)
}

fn make_monic(e: Elem) -> Elem {
    let inv = Scalar::one() / e.poly.lc();
    Elem {
        cof: e.cof.map(|cs| cs.iter().map(|c| c.scale(&inv)).collect()),
        poly: e.poly.scale(&inv),
    }
}

impl GroebnerBasis {
    pub fn compute(gens: &[Poly], nvars: usize, order: MonomialOrder, caps: &Caps) -> Result<Self> {
        Self::run(gens, nvars, order, caps, false)
    }

    /// As [`compute`](Self::compute), also recording cofactors.
    pub fn compute_tracked(gens: &[Poly], nvars: usize, order: MonomialOrder, caps: &Caps) -> Result<Self> {
        Self::run(gens, nvars, order, caps, true)
    }

    fn run(gens: &[Poly], nvars: usize, order: MonomialOrder, caps: &Caps, track: bool) -> Result<Self> {
        if gens.len() > caps.max_generators {
            return Err(Error::CapExceeded(format!(
                "{} generators exceed the cap of {}",
                gens.len(),
                caps.max_generators
            )));
        }
        let k = gens.len();
        let mut g: Vec<Elem> = vec![];
        for (i, p) in gens.iter().enumerate() {
            if p.nvars() != nvars {
                return Err(Error::VariableCount { expected: nvars, got: p.nvars() });
            }
            if p.total_degree().unwrap_or(0) > caps.max_degree {
                return Err(Error::CapExceeded(format!("generator degree exceeds {}", caps.max_degree)));
            }
            if p.is_zero() {
                continue;
            }
            let cof = track.then(|| {
                let mut c = zeros(nvars, order, k);
                c[i] = Poly::constant(nvars, order, Scalar::one());
                c
            });
            g.push(make_monic(Elem { poly: p.with_order(order), cof }));
        }

        let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
        for j in 0..g.len() {
            for i in 0..j {
                pending.insert((i, j));
            }
        }
        let mut processed = 0usize;
        while let Some(&(i, j)) = pending
            .iter()
            .min_by(|a, b| {
                let la = g[a.0].poly.lm().lcm(g[a.1].poly.lm());
                let lb = g[b.0].poly.lm().lcm(g[b.1].poly.lm());
                la.cmp_by(&lb, order).then(a.cmp(b))
            })
        {
            pending.remove(&(i, j));
            let (li, lj) = (g[i].poly.lm().clone(), g[j].poly.lm().clone());
            if li.coprime(&lj) {
                continue;
            }
            let lcm = li.lcm(&lj);
            let chain = (0..g.len()).any(|k| {
                k != i
                    && k != j
                    && g[k].poly.lm().divides(&lcm)
                    && !pending.contains(&(i.min(k), i.max(k)))
                    && !pending.contains(&(j.min(k), j.max(k)))
            });
            if chain {
                continue;
            }
            processed += 1;
            if processed > caps.max_pairs {
                return Err(Error::CapExceeded(format!("more than {} S-pairs", caps.max_pairs)));
            }
            let (mi, mj) = (li.quotient_of(&lcm), lj.quotient_of(&lcm));
            let one = Scalar::one();
            let s = g[i].poly.mul_term(&mi, &one).sub(&g[j].poly.mul_term(&mj, &one));
            let s_cof = match (&g[i].cof, &g[j].cof) {
                (Some(a), Some(b)) => Some(
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| x.mul_term(&mi, &one).sub(&y.mul_term(&mj, &one)))
                        .collect::<Vec<_>>(),
                ),
                _ => None,
            };
            let (r, q) = reduce(&s, &g, k);
            if r.is_zero() {
                continue;
            }
            if r.total_degree().unwrap_or(0) > caps.max_degree {
                return Err(Error::CapExceeded(format!("basis degree exceeds {}", caps.max_degree)));
            }
            let cof = s_cof.map(|sc| sc.iter().zip(q.unwrap()).map(|(a, b)| a.sub(&b)).collect());
            let new = g.len();
            g.push(make_monic(Elem { poly: r, cof }));
            for a in 0..new {
                pending.insert((a, new));
            }
            if g.len() > 4 * caps.max_generators + 256 {
                return Err(Error::CapExceeded("Gröbner basis grew too large".into()));
            }
        }

        // minimize then interreduce
        let mut keep: Vec<Elem> = vec![];
        for (a, e) in g.iter().enumerate() {
            let redundant = g.iter().enumerate().any(|(b, h)| {
                b != a
                    && h.poly.lm().divides(e.poly.lm())
                    && (h.poly.lm() != e.poly.lm() || b < a)
            });
            if !redundant {
                keep.push(e.clone());
            }
        }
        let mut reduced: Vec<Elem> = vec![];
        for a in 0..keep.len() {
            let others: Vec<Elem> = keep
                .iter()
                .enumerate()
                .filter(|(b, _)| *b != a)
                .map(|(_, e)| e.clone())
                .collect();
            let e = &keep[a];
            let (r, q) = reduce(&e.poly, &others, k);
            let cof = match (&e.cof, q) {
                (Some(c), Some(q)) => Some(c.iter().zip(q).map(|(x, y)| x.sub(&y)).collect()),
                (Some(c), None) => Some(c.clone()),
                _ => None,
            };
            reduced.push(make_monic(Elem { poly: r, cof }));
        }
        reduced.sort_by(|a, b| a.poly.lm().cmp_by(b.poly.lm(), order));
        let cofactors = track.then(|| reduced.iter().map(|e| e.cof.clone().unwrap()).collect());
        Ok(GroebnerBasis {
            nvars,
            order,
            basis: reduced.into_iter().map(|e| e.poly).collect(),
            cofactors,
            num_gens: k,
        })
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn cofactors(&self) -> Option<&[Vec<Poly>]> {
        self.cofactors.as_deref()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn is_unit(&self) -> bool {
        self.basis.iter().any(|p| p.is_constant())
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis.iter().map(|p| p.lm().clone()).collect()
    }

    fn elems(&self) -> Vec<Elem> {
        self.basis
            .iter()
            .enumerate()
            .map(|(i, p)| Elem { poly: p.clone(), cof: self.cofactors.as_ref().map(|c| c[i].clone()) })
            .collect()
    }

    pub fn normal_form(&self, f: &Poly) -> Poly {
        reduce(&f.with_order(self.order), &self.elems(), self.num_gens).0
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.normal_form(f).is_zero()
    }

    /// For `f` in the ideal and a tracked basis: `a` with `f = Σ a_i gens_i`.
    pub fn representation(&self, f: &Poly) -> Option<Vec<Poly>> {
        self.cofactors.as_ref()?;
        let (r, q) = reduce(&f.with_order(self.order), &self.elems(), self.num_gens);
        if r.is_zero() {
            q
        } else {
            None
        }
    }

    /// Krull dimension of the affine variety: largest set of variables
    /// independent modulo the leading-term ideal, or -1 when empty.
    pub fn affine_dimension(&self) -> i64 {
        if self.is_unit() {
            return -1;
        }
        let lms = self.leading_monomials();
        let n = self.nvars;
        let mut best = 0i64;
        for mask in 0u64..(1u64 << n) {
            let size = mask.count_ones() as i64;
            if size <= best {
                continue;
            }
            let free = lms.iter().all(|m| m.support().any(|v| mask & (1 << v) == 0));
            if free {
                best = size;
            }
        }
        best
    }

    /// Monic univariate element in the last variable, present in a lex basis
    /// of a zero-dimensional ideal.
    pub fn last_variable_eliminant(&self) -> Option<Vec<Scalar>> {
        debug_assert_eq!(self.order, MonomialOrder::Lex);
        let last = self.nvars - 1;
        self.basis.iter().find_map(|p| p.as_univariate(last))
    }

    /// Number of standard monomials; `None` if the quotient is infinite or
    /// exceeds `limit`.
    pub fn quotient_dimension(&self, limit: usize) -> Option<usize> {
        if self.is_unit() {
            return Some(0);
        }
        let lms = self.leading_monomials();
        let n = self.nvars;
        let mut count = 0usize;
        let mut layer: BTreeSet<Vec<u32>> = BTreeSet::from([vec![0; n]]);
        while !layer.is_empty() {
            count += layer.len();
            if count > limit {
                return None;
            }
            let mut next = BTreeSet::new();
            for m in &layer {
                for v in 0..n {
                    let mut e = m.clone();
                    e[v] += 1;
                    let mono = Monomial(e.clone());
                    if !lms.iter().any(|l| l.divides(&mono)) {
                        next.insert(e);
                    }
                }
            }
            layer = next;
        }
        Some(count)
    }
}

/// Removes constant multiples so that the first nonzero coordinate is one.
pub fn normalize_point(p: &[Scalar]) -> Vec<Scalar> {
    let lead = p.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(Scalar::one);
    p.iter().map(|c| c / &lead).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn p(n: usize, order: MonomialOrder, terms: &[(&[u32], i64)]) -> Poly {
        Poly::from_terms(n, order, terms.iter().map(|(e, c)| (Monomial(e.to_vec()), int(*c))).collect())
    }

    #[test]
    fn twisted_cubic_basis() {
        // x^2 - y, x^3 - z in lex
        let o = MonomialOrder::Lex;
        let gens = [p(3, o, &[(&[2, 0, 0], 1), (&[0, 1, 0], -1)]), p(3, o, &[(&[3, 0, 0], 1), (&[0, 0, 1], -1)])];
        let gb = GroebnerBasis::compute(&gens, 3, o, &Caps::default()).unwrap();
        // y^3 - z^2 must be in the ideal
        assert!(gb.contains(&p(3, o, &[(&[0, 3, 0], 1), (&[0, 0, 2], -1)])));
        assert!(!gb.contains(&p(3, o, &[(&[0, 1, 0], 1)])));
        assert_eq!(gb.affine_dimension(), 1);
        let elim = gb.last_variable_eliminant();
        assert!(elim.is_none());
    }

    #[test]
    fn tracked_cofactors_reproduce_basis() {
        let o = MonomialOrder::Grevlex;
        let gens = [
            p(3, o, &[(&[1, 1, 0], 1), (&[0, 0, 2], -1)]),
            p(3, o, &[(&[1, 0, 1], 1), (&[0, 2, 0], -1)]),
            p(3, o, &[(&[0, 1, 1], 1), (&[2, 0, 0], -3)]),
        ];
        let gb = GroebnerBasis::compute_tracked(&gens, 3, o, &Caps::default()).unwrap();
        for (b, cof) in gb.basis().iter().zip(gb.cofactors().unwrap()) {
            let mut s = Poly::zero(3, o);
            for (c, g) in cof.iter().zip(&gens) {
                s = s.add(&c.mul(g));
            }
            assert_eq!(&s, b);
        }
    }

    #[test]
    fn unit_ideal_and_quotient_dimension() {
        let o = MonomialOrder::Grevlex;
        let gens = [p(2, o, &[(&[1, 0], 1), (&[0, 0], -1)]), p(2, o, &[(&[1, 0], 1)])];
        let gb = GroebnerBasis::compute(&gens, 2, o, &Caps::default()).unwrap();
        assert!(gb.is_unit());
        assert_eq!(gb.affine_dimension(), -1);
        // x^2 - 1, y^2 - y: four points
        let gens = [p(2, o, &[(&[2, 0], 1), (&[0, 0], -1)]), p(2, o, &[(&[0, 2], 1), (&[0, 1], -1)])];
        let gb = GroebnerBasis::compute(&gens, 2, o, &Caps::default()).unwrap();
        assert_eq!(gb.affine_dimension(), 0);
        assert_eq!(gb.quotient_dimension(100), Some(4));
    }

    #[test]
    fn pair_cap_is_enforced() {
        let o = MonomialOrder::Grevlex;
        let gens = [
            p(3, o, &[(&[1, 1, 0], 1), (&[0, 0, 2], -1)]),
            p(3, o, &[(&[1, 0, 1], 1), (&[0, 2, 0], -1)]),
            p(3, o, &[(&[0, 1, 1], 1), (&[2, 0, 0], -3)]),
        ];
        let caps = Caps { max_pairs: 0, ..Caps::default() };
        assert!(matches!(GroebnerBasis::compute(&gens, 3, o, &caps), Err(Error::CapExceeded(_))));
    }
}
