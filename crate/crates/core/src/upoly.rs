//! Dense univariate polynomials over the rationals, coefficient `i` of
//! `x^i`. Small helpers used for map reducedness, eliminants and rational
//! root extraction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Scalar;

pub type UPoly = Vec<Scalar>;

pub fn trim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Degree, `None` for the zero polynomial.
pub fn degree(p: &[Scalar]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn is_zero(p: &[Scalar]) -> bool {
    degree(p).is_none()
}

pub fn mul(a: &[Scalar], b: &[Scalar]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> UPoly {
    let n = a.len().max(b.len());
    let zero = Scalar::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)).collect())
}

pub fn divrem(a: &[Scalar], b: &[Scalar]) -> (UPoly, UPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let mut r = trim(a.to_vec());
    let Some(da) = degree(&r) else {
        return (vec![], vec![]);
    };
    if da < db {
        return (vec![], r);
    }
    let mut q = vec![Scalar::zero(); da - db + 1];
    let lead = &b[db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / lead;
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            r[dr - db + j] -= &c * bj;
        }
        q[dr - db] = c;
        r = trim(r);
    }
    (trim(q), r)
}

pub fn monic(p: &[Scalar]) -> UPoly {
    match degree(p) {
        None => vec![],
        Some(d) => {
            let lead = p[d].clone();
            p[..=d].iter().map(|c| c / &lead).collect()
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &[Scalar], b: &[Scalar]) -> UPoly {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !is_zero(&y) {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

pub fn derivative(p: &[Scalar]) -> UPoly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Scalar::from_integer(BigInt::from(i)))
            .collect(),
    )
}

/// `p / gcd(p, p')`, monic.
pub fn squarefree_part(p: &[Scalar]) -> UPoly {
    let g = gcd(p, &derivative(p));
    monic(&divrem(p, &g).0)
}

pub fn eval(p: &[Scalar], x: &Scalar) -> Scalar {
    p.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
}

fn divisors(n: &BigInt, cap: u64) -> Option<Vec<BigInt>> {
    let n = n.abs();
    let n64 = n.to_u64()?;
    if n64 > cap {
        return None;
    }
    let mut out = vec![];
    let mut d = 1u64;
    while d * d <= n64 {
        if n64 % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n64 {
                out.push(BigInt::from(n64 / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Distinct rational roots by the rational root test. Returns `None` when
/// the integer coefficients are too large to enumerate divisors.
pub fn rational_roots(p: &[Scalar]) -> Option<Vec<Scalar>> {
    let p = trim(p.to_vec());
    degree(&p)?;
    let mut roots = vec![];
    // strip the root at zero
    let shift = p.iter().position(|c| !c.is_zero()).unwrap();
    if shift > 0 {
        roots.push(Scalar::zero());
    }
    let p: UPoly = p[shift..].to_vec();
    if degree(&p) == Some(0) {
        return Some(roots);
    }
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Scalar::from_integer(lcm.clone())).to_integer()).collect();
    let cap = 1_000_000_000_000u64;
    let nums = divisors(&ints[0], cap)?;
    let dens = divisors(ints.last().unwrap(), cap)?;
    let mut cands: Vec<Scalar> = vec![];
    for n in &nums {
        for d in &dens {
            for s in [1, -1] {
                let c = Scalar::new(n * s, d.clone());
                if !cands.contains(&c) {
                    cands.push(c);
                }
            }
        }
    }
    cands.sort();
    roots.extend(cands.into_iter().filter(|c| eval(&p, c).is_zero()));
    roots.sort();
    Some(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn p(cs: &[i64]) -> UPoly {
        cs.iter().map(|&c| int(c)).collect()
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (x-1)(x+2) and (x-1)(x-3)
        assert_eq!(gcd(&p(&[-2, 1, 1]), &p(&[3, -4, 1])), p(&[-1, 1]));
        assert_eq!(gcd(&p(&[1]), &p(&[0, 1])), p(&[1]));
    }

    #[test]
    fn squarefree() {
        // (x-1)^2 (x+1)
        let f = mul(&mul(&p(&[-1, 1]), &p(&[-1, 1])), &p(&[1, 1]));
        assert_eq!(squarefree_part(&f), p(&[-1, 0, 1]));
    }

    #[test]
    fn roots() {
        // (2x-1)(x+3) x
        let f = mul(&mul(&p(&[-1, 2]), &p(&[3, 1])), &p(&[0, 1]));
        assert_eq!(rational_roots(&f).unwrap(), vec![int(-3), int(0), ratio(1, 2)]);
        assert_eq!(rational_roots(&p(&[1, 1, 1])).unwrap(), vec![]);
    }
}
