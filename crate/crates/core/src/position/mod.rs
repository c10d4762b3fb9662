//! Exact commutative algebra for the position invariants of a family of
//! hypersurfaces: dimensions of intersections, the `t_m` sequence, the
//! multiplicity `M`, Nullstellensatz certificates and separating hyperplanes.

mod groebner;
mod multiplicity;
mod nullstellensatz;
mod points;
mod profile;

pub use groebner::{normalize_point, Caps, GroebnerBasis};
pub use multiplicity::{
    certify_m, radical_power_contained, transversality_certificate, zero_dim_radical, MultiplicityRecord,
    MultiplicityStatus,
};
pub use nullstellensatz::{nullstellensatz_certificate, NullstellensatzCertificate};
pub use points::{projective_rational_points, select_separating_hyperplanes, SeparatingSystem};
pub use profile::{alpha, t_sequence, PositionProfile};

use num_traits::One;

use crate::error::Result;
use crate::poly::{MonomialOrder, Poly};
use crate::projective::HomogeneousForm;
use crate::scalar::Scalar;

/// A homogeneous ideal in `nvars` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    nvars: usize,
    generators: Vec<Poly>,
}

impl Ideal {
    pub fn new(nvars: usize, generators: Vec<Poly>) -> Self {
        let generators = generators
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.with_order(MonomialOrder::Grevlex))
            .collect();
        Ideal { nvars, generators }
    }

    pub fn from_forms<'a>(nvars: usize, forms: impl IntoIterator<Item = &'a HomogeneousForm>) -> Self {
        Self::new(nvars, forms.into_iter().map(|f| f.poly().clone()).collect())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn groebner(&self, caps: &Caps) -> Result<GroebnerBasis> {
        GroebnerBasis::compute(&self.generators, self.nvars, MonomialOrder::Grevlex, caps)
    }

    pub fn projective_dimension(&self, caps: &Caps) -> Result<i64> {
        projective_dimension(&self.generators, self.nvars, MonomialOrder::Grevlex, caps)
    }

    pub fn contains(&self, f: &Poly, caps: &Caps) -> Result<bool> {
        Ok(self.groebner(caps)?.contains(f))
    }

    /// Whether `f` vanishes on the locus, by the Rabinowitsch trick.
    pub fn radical_contains(&self, f: &Poly, caps: &Caps) -> Result<bool> {
        let n = self.nvars;
        let mut gens: Vec<Poly> = self.generators.iter().map(|g| g.extend_vars(1)).collect();
        let y = Poly::var(n + 1, MonomialOrder::Grevlex, n);
        let one = Poly::constant(n + 1, MonomialOrder::Grevlex, Scalar::one());
        gens.push(one.sub(&y.mul(&f.with_order(MonomialOrder::Grevlex).extend_vars(1))));
        Ok(GroebnerBasis::compute(&gens, n + 1, MonomialOrder::Grevlex, caps)?.is_unit())
    }
}

/// Dimension of the projective locus of a homogeneous ideal, `-1` if empty.
pub fn projective_dimension(gens: &[Poly], nvars: usize, order: MonomialOrder, caps: &Caps) -> Result<i64> {
    let gb = GroebnerBasis::compute(gens, nvars, order, caps)?;
    let d = gb.affine_dimension();
    Ok(if d <= 0 { -1 } else { d - 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use crate::scalar::int;

    pub(crate) fn form(n: usize, terms: &[(&[u32], i64)]) -> Poly {
        Poly::from_terms(
            n,
            MonomialOrder::Grevlex,
            terms.iter().map(|(e, c)| (Monomial(e.to_vec()), int(*c))).collect(),
        )
    }

    fn conics() -> (Poly, Poly) {
        (
            form(3, &[(&[1, 1, 0], 1), (&[0, 0, 2], -1)]),
            form(3, &[(&[1, 0, 1], 1), (&[0, 2, 0], -1)]),
        )
    }

    #[test]
    fn dimension_examples() {
        let caps = Caps::default();
        let x = |i| Poly::var(3, MonomialOrder::Grevlex, i);
        assert_eq!(projective_dimension(&[x(0), x(1), x(2)], 3, MonomialOrder::Grevlex, &caps).unwrap(), -1);
        assert_eq!(projective_dimension(&[x(0)], 3, MonomialOrder::Grevlex, &caps).unwrap(), 1);
        let (q1, q2) = conics();
        assert_eq!(projective_dimension(&[q1.clone(), q2.clone()], 3, MonomialOrder::Grevlex, &caps).unwrap(), 0);
        // lex agrees
        assert_eq!(projective_dimension(&[q1.clone(), q2.clone()], 3, MonomialOrder::Lex, &caps).unwrap(), 0);
        assert_eq!(projective_dimension(&[], 3, MonomialOrder::Grevlex, &caps).unwrap(), 2);
        assert_eq!(projective_dimension(&[q1.clone(), q1.clone()], 3, MonomialOrder::Grevlex, &caps).unwrap(), 1);
    }

    #[test]
    fn frozen_conic_basis() {
        // Leading terms frozen from an external computer-algebra run.
        let (q1, q2) = conics();
        let gb = Ideal::new(3, vec![q1, q2]).groebner(&Caps::default()).unwrap();
        let lms: Vec<Vec<u32>> = gb.leading_monomials().into_iter().map(|m| m.0).collect();
        assert_eq!(lms, vec![vec![0, 2, 0], vec![1, 1, 0], vec![2, 0, 1]]);
        assert_eq!(gb.affine_dimension(), 1);
    }

    #[test]
    fn duplicates_collapse() {
        let (q1, _) = conics();
        let gb = Ideal::new(3, vec![q1.clone(), q1.scale(&int(2))]).groebner(&Caps::default()).unwrap();
        assert_eq!(gb.basis(), &[q1.monic()]);
    }

    #[test]
    fn radical_membership() {
        let q = form(3, &[(&[1, 1, 0], 1), (&[0, 0, 2], -1)]);
        let l = Poly::var(3, MonomialOrder::Grevlex, 1);
        let ideal = Ideal::new(3, vec![q, l]);
        let x2 = Poly::var(3, MonomialOrder::Grevlex, 2);
        assert!(!ideal.contains(&x2, &Caps::default()).unwrap());
        assert!(ideal.radical_contains(&x2, &Caps::default()).unwrap());
        let x0 = Poly::var(3, MonomialOrder::Grevlex, 0);
        assert!(!ideal.radical_contains(&x0, &Caps::default()).unwrap());
    }
}
