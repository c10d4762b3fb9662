use super::{Caps, GroebnerBasis, Ideal, PositionProfile};
use crate::error::{Error, Result};
use crate::poly::{MonomialOrder, Poly};
use crate::projective::{Hypersurface, SpaceSpec};
use crate::upoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultiplicityStatus {
    Certified,
    Assumed,
}

impl std::fmt::Display for MultiplicityStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MultiplicityStatus::Certified => "certified",
            MultiplicityStatus::Assumed => "assumed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityRecord {
    pub m: u32,
    pub status: MultiplicityStatus,
    pub witness: Option<String>,
}

fn k_minors(rows: &[Vec<Poly>], cols: &[usize]) -> Poly {
    // Laplace expansion along the first row.
    if rows.len() == 1 {
        return rows[0][cols[0]].clone();
    }
    let mut acc = Poly::zero(rows[0][0].nvars(), MonomialOrder::Grevlex);
    for (k, &c) in cols.iter().enumerate() {
        let entry = &rows[0][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = entry.mul(&k_minors(&rows[1..], &rest));
        acc = if k % 2 == 0 { acc.add(&minor) } else { acc.sub(&minor) };
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out.sort();
    out
}

/// True iff the forms meet transversely: together with all maximal minors
/// of their gradient matrix they have no common projective zero. Forms
/// whose intersection has excess dimension are never transverse.
pub fn transversality_certificate(
    forms: &[&Hypersurface],
    space: &SpaceSpec,
    caps: &Caps,
) -> Result<bool> {
    if !space.is_full_space() {
        return Err(Error::Unsupported("transversality on a subvariety X".into()));
    }
    let nv = space.num_vars();
    let k = forms.len();
    let polys: Vec<Poly> = forms.iter().map(|d| d.form.poly().clone()).collect();
    let expected = space.ambient_dim as i64 - k as i64;
    if Ideal::new(nv, polys.clone()).projective_dimension(caps)? != expected.max(-1) {
        return Ok(false);
    }
    if expected < 0 {
        return Ok(true);
    }
    let grads: Vec<Vec<Poly>> = polys.iter().map(|p| (0..nv).map(|i| p.derivative(i)).collect()).collect();
    let mut gens = polys;
    for cols in combinations(nv, k) {
        gens.push(k_minors(&grads, &cols));
    }
    Ok(Ideal::new(nv, gens).projective_dimension(caps)? == -1)
}

fn lex_eliminant(gens: &[Poly], nvars: usize, var: usize, caps: &Caps) -> Result<Option<Vec<crate::scalar::Scalar>>> {
    // swap `var` with the last variable so lex eliminates towards it
    let mut perm: Vec<usize> = (0..nvars).collect();
    perm.swap(var, nvars - 1);
    let lex: Vec<Poly> = gens.iter().map(|g| g.with_order(MonomialOrder::Lex).permute(&perm)).collect();
    let gb = GroebnerBasis::compute(&lex, nvars, MonomialOrder::Lex, caps)?;
    if gb.is_unit() {
        return Ok(Some(vec![crate::scalar::int(1)]));
    }
    Ok(gb.last_variable_eliminant())
}

/// Radical of a zero-dimensional affine ideal: adjoin the squarefree parts
/// of the per-variable eliminants.
pub fn zero_dim_radical(gens: &[Poly], nvars: usize, caps: &Caps) -> Result<GroebnerBasis> {
    let gb = GroebnerBasis::compute(gens, nvars, MonomialOrder::Grevlex, caps)?;
    if gb.is_unit() || nvars == 0 {
        return Ok(gb);
    }
    if gb.affine_dimension() != 0 {
        return Err(Error::Unsupported("radical of a positive-dimensional ideal".into()));
    }
    let mut out: Vec<Poly> = gb.basis().to_vec();
    for v in 0..nvars {
        let e = lex_eliminant(gb.basis(), nvars, v, caps)?
            .ok_or_else(|| Error::Unsupported("missing eliminant in a zero-dimensional ideal".into()))?;
        let sqf = upoly::squarefree_part(&e);
        out.push(Poly::from_univariate(nvars, MonomialOrder::Grevlex, v, &sqf));
    }
    GroebnerBasis::compute(&out, nvars, MonomialOrder::Grevlex, caps)
}

fn products(basis: &[Poly], m: u32) -> Vec<Poly> {
    // all products of m basis elements, as multisets
    fn rec(basis: &[Poly], start: usize, left: u32, acc: Poly, out: &mut Vec<Poly>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..basis.len() {
            rec(basis, i, left - 1, acc.mul(&basis[i]), out);
        }
    }
    let mut out = vec![];
    if let Some(b) = basis.first() {
        rec(basis, 0, m, Poly::constant(b.nvars(), b.order(), crate::scalar::int(1)), &mut out);
    }
    out
}

/// `rad(I)^M ⊆ I` for a homogeneous ideal with finite projective locus,
/// checked chart by chart.
pub fn radical_power_contained(ideal: &Ideal, m: u32, caps: &Caps) -> Result<bool> {
    let nv = ideal.nvars();
    for chart in 0..nv {
        let affine: Vec<Poly> = ideal.generators().iter().map(|g| g.dehomogenize(chart)).collect();
        let gb = GroebnerBasis::compute(&affine, nv - 1, MonomialOrder::Grevlex, caps)?;
        if gb.is_unit() {
            continue;
        }
        let rad = zero_dim_radical(&affine, nv - 1, caps)?;
        if products(rad.basis(), m).iter().any(|p| !gb.contains(p)) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn subset_names(hs: &[Hypersurface], idx: &[usize]) -> String {
    let names: Vec<&str> = idx.iter().map(|&i| hs[i].name.as_str()).collect();
    format!("{{{}}}", names.join(", "))
}

/// Reducedness of one zero-dimensional subset intersection via a transverse
/// complete intersection generating it.
fn reduced_by_transversality(
    space: &SpaceSpec,
    hs: &[Hypersurface],
    subset: &[usize],
    caps: &Caps,
) -> Result<Option<Vec<usize>>> {
    let nv = space.num_vars();
    let k = space.ambient_dim;
    if subset.len() < k {
        return Ok(None);
    }
    for pick in combinations(subset.len(), k) {
        let chosen: Vec<usize> = pick.iter().map(|&i| subset[i]).collect();
        let refs: Vec<&Hypersurface> = chosen.iter().map(|&i| &hs[i]).collect();
        if !transversality_certificate(&refs, space, caps)? {
            continue;
        }
        let gb = Ideal::from_forms(nv, refs.iter().map(|d| &d.form)).groebner(caps)?;
        if subset
            .iter()
            .filter(|i| !chosen.contains(i))
            .all(|&i| gb.contains(hs[i].form.poly()))
        {
            return Ok(Some(chosen));
        }
    }
    Ok(None)
}

/// Certifies the multiplicity `M`, trying transversality first, then the
/// radical-power test up to `candidate`, then falling back to `candidate`
/// as an assumption.
pub fn certify_m(
    space: &SpaceSpec,
    hs: &[Hypersurface],
    profile: &PositionProfile,
    candidate: Option<u32>,
    caps: &Caps,
) -> Result<MultiplicityRecord> {
    let s = (profile.t0() + 1) as usize;
    let subsets: Vec<Vec<usize>> = (0..profile.subset_dims.len())
        .filter(|&mask| mask.count_ones() as usize == s && profile.subset_dims[mask] == 0)
        .map(|mask| (0..hs.len()).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    if subsets.is_empty() {
        return Ok(MultiplicityRecord {
            m: 1,
            status: MultiplicityStatus::Certified,
            witness: Some(format!("no subset of size {s} meets X in a nonempty finite set")),
        });
    }
    let assumed = |why: &str| match candidate {
        Some(m) => Ok(MultiplicityRecord { m, status: MultiplicityStatus::Assumed, witness: Some(why.to_string()) }),
        None => Err(Error::MultiplicityUnavailable),
    };
    if !space.is_full_space() {
        return assumed("certification is unavailable on a proper subvariety X");
    }

    let mut witnesses = vec![];
    for sub in &subsets {
        match reduced_by_transversality(space, hs, sub, caps)? {
            Some(ci) => witnesses.push(format!(
                "{} is generated by the transverse intersection {}",
                subset_names(hs, sub),
                subset_names(hs, &ci)
            )),
            None => break,
        }
    }
    if witnesses.len() == subsets.len() {
        return Ok(MultiplicityRecord {
            m: 1,
            status: MultiplicityStatus::Certified,
            witness: Some(witnesses.join("; ")),
        });
    }

    if let Some(cand) = candidate {
        let nv = space.num_vars();
        for m in 1..=cand {
            let mut ok = true;
            for sub in &subsets {
                let ideal = Ideal::from_forms(nv, sub.iter().map(|&i| &hs[i].form));
                if !radical_power_contained(&ideal, m, caps)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(MultiplicityRecord {
                    m,
                    status: MultiplicityStatus::Certified,
                    witness: Some(format!(
                        "rad(I)^{m} ⊆ I for every zero-dimensional subset of size {s} (Seidenberg radical, per affine chart)"
                    )),
                });
            }
        }
        return assumed(&format!("rad(I)^{cand} ⊄ I for some subset; value taken as declared"));
    }
    assumed("no certification path succeeded")
}
