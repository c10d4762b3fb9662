use super::{Caps, GroebnerBasis, Ideal};
use crate::error::{Error, Result};
use crate::poly::{MonomialOrder, Poly};

/// `targets[j]^exponents[j] = Σ_i cofactors[j][i] · generators[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullstellensatzCertificate {
    pub generators: Vec<Poly>,
    pub targets: Vec<Poly>,
    pub exponents: Vec<u32>,
    pub cofactors: Vec<Vec<Poly>>,
}

impl NullstellensatzCertificate {
    /// Expands every identity and checks that it vanishes.
    pub fn verify(&self) -> bool {
        self.targets.iter().zip(&self.exponents).zip(&self.cofactors).all(|((t, &e), cof)| {
            let mut lhs = t.pow(e);
            for (a, q) in cof.iter().zip(&self.generators) {
                lhs = lhs.sub(&a.mul(q));
            }
            lhs.is_zero()
        })
    }
}

/// For each target, the least power lying in the ideal, with cofactors.
/// With no targets given the coordinate variables are used, which requires
/// an empty projective locus.
pub fn nullstellensatz_certificate(
    ideal: &Ideal,
    targets: Option<&[Poly]>,
    caps: &Caps,
) -> Result<NullstellensatzCertificate> {
    let nv = ideal.nvars();
    let o = MonomialOrder::Grevlex;
    let targets: Vec<Poly> = match targets {
        Some(t) => t.iter().map(|p| p.with_order(o)).collect(),
        None => {
            if ideal.projective_dimension(caps)? != -1 {
                return Err(Error::NonemptyLocus);
            }
            (0..nv).map(|i| Poly::var(nv, o, i)).collect()
        }
    };
    let gb = GroebnerBasis::compute_tracked(ideal.generators(), nv, o, caps)?;
    let mut exponents = vec![];
    let mut cofactors = vec![];
    for t in &targets {
        let mut power = t.clone();
        let mut found = None;
        for e in 1..=caps.max_nullstellensatz_power {
            if let Some(rep) = gb.representation(&power) {
                found = Some((e, rep));
                break;
            }
            power = power.mul(t);
        }
        let (e, rep) = found.ok_or_else(|| {
            Error::CapExceeded(format!("no power of {t} up to {} lies in the ideal", caps.max_nullstellensatz_power))
        })?;
        // keep only the homogeneous components that can contribute
        let deg = power.total_degree().unwrap_or(0);
        let rep: Vec<Poly> = if t.is_homogeneous() && ideal.generators().iter().all(|g| g.is_homogeneous()) {
            rep.iter()
                .zip(ideal.generators())
                .map(|(a, g)| {
                    let dg = g.total_degree().unwrap_or(0);
                    if dg > deg {
                        Poly::zero(nv, o)
                    } else {
                        a.homogeneous_part(deg - dg)
                    }
                })
                .collect()
        } else {
            rep
        };
        exponents.push(e);
        cofactors.push(rep);
    }
    let cert = NullstellensatzCertificate {
        generators: ideal.generators().to_vec(),
        targets,
        exponents,
        cofactors,
    };
    if !cert.verify() {
        return Err(Error::Unsupported("certificate failed re-expansion".into()));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use crate::scalar::int;

    fn p(terms: &[(&[u32], i64)]) -> Poly {
        Poly::from_terms(
            3,
            MonomialOrder::Grevlex,
            terms.iter().map(|(e, c)| (Monomial(e.to_vec()), int(*c))).collect(),
        )
    }

    #[test]
    fn coordinate_ideal_in_p1() {
        let o = MonomialOrder::Grevlex;
        let ideal = Ideal::new(2, vec![Poly::var(2, o, 0), Poly::var(2, o, 1)]);
        let c = nullstellensatz_certificate(&ideal, None, &Caps::default()).unwrap();
        assert_eq!(c.exponents, vec![1, 1]);
        assert!(c.verify());
    }

    #[test]
    fn conic_and_two_lines() {
        let ideal = Ideal::new(
            3,
            vec![p(&[(&[1, 1, 0], 1), (&[0, 0, 2], -1)]), p(&[(&[1, 0, 0], 1)]), p(&[(&[0, 1, 0], 1)])],
        );
        let c = nullstellensatz_certificate(&ideal, None, &Caps::default()).unwrap();
        assert_eq!(c.exponents, vec![1, 1, 2]);
        assert!(c.verify());
    }

    #[test]
    fn conics_and_a_missing_line() {
        // X0 + X1 + 2 X2 misses all four intersection points of the conics
        let ideal = Ideal::new(
            3,
            vec![
                p(&[(&[1, 1, 0], 1), (&[0, 0, 2], -1)]),
                p(&[(&[1, 0, 1], 1), (&[0, 2, 0], -1)]),
                p(&[(&[1, 0, 0], 1), (&[0, 1, 0], 1), (&[0, 0, 1], 2)]),
            ],
        );
        let c = nullstellensatz_certificate(&ideal, None, &Caps::default()).unwrap();
        assert!(c.verify());
        assert!(c.exponents.iter().all(|&e| e >= 1));
    }

    #[test]
    fn nonempty_locus_is_rejected() {
        let ideal = Ideal::new(3, vec![p(&[(&[1, 1, 0], 1), (&[0, 0, 2], -1)])]);
        assert_eq!(nullstellensatz_certificate(&ideal, None, &Caps::default()), Err(Error::NonemptyLocus));
    }

    #[test]
    fn tampered_certificate_fails() {
        let o = MonomialOrder::Grevlex;
        let ideal = Ideal::new(2, vec![Poly::var(2, o, 0), Poly::var(2, o, 1)]);
        let mut c = nullstellensatz_certificate(&ideal, None, &Caps::default()).unwrap();
        c.exponents[0] = 2;
        assert!(!c.verify());
    }
}
