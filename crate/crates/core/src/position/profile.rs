use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{Caps, Ideal};
use crate::error::{Error, Result};
use crate::projective::{Hypersurface, SpaceSpec};
use crate::scalar::{int, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionProfile {
    pub q: usize,
    pub n: usize,
    /// `t_{-1}, t_0, …, t_{n-1}`.
    pub t_seq: Vec<i64>,
    pub general_position: bool,
    /// Projective dimension of `X ∩ ⋂_{i∈I} D_i`, indexed by the subset mask.
    pub subset_dims: Vec<i64>,
}

impl PositionProfile {
    pub fn t(&self, m: i64) -> i64 {
        self.t_seq[(m + 1) as usize]
    }

    pub fn t_minus1(&self) -> i64 {
        self.t_seq[0]
    }

    pub fn t0(&self) -> i64 {
        self.t_seq[1]
    }

    /// Builds the sequence from a table of subset dimensions.
    pub fn from_subset_dims(q: usize, n: usize, subset_dims: Vec<i64>) -> Self {
        let t_seq: Vec<i64> = (-1..n as i64)
            .map(|m| {
                (0..q)
                    .find(|&c| {
                        subset_dims
                            .iter()
                            .enumerate()
                            .filter(|(mask, _)| mask.count_ones() as usize == c + 1)
                            .all(|(_, &d)| d <= m)
                    })
                    .unwrap_or(q) as i64
            })
            .collect();
        let general_position = t_seq
            .iter()
            .enumerate()
            .all(|(k, &t)| t == (n as i64 - k as i64).min(q as i64));
        PositionProfile { q, n, t_seq, general_position, subset_dims }
    }
}

/// The `t_m` invariants of `D_1, …, D_q` relative to `X`.
pub fn t_sequence(space: &SpaceSpec, hypersurfaces: &[Hypersurface], caps: &Caps) -> Result<PositionProfile> {
    let q = hypersurfaces.len();
    if q > caps.max_subset_q {
        return Err(Error::CapExceeded(format!(
            "{q} hypersurfaces exceed the subset-scan cap of {}",
            caps.max_subset_q
        )));
    }
    if space.dim == 0 {
        return Err(Error::Unsupported("X must have positive dimension".into()));
    }
    let nv = space.num_vars();
    for d in hypersurfaces {
        if d.form.num_vars() != nv {
            return Err(Error::VariableCount { expected: nv, got: d.form.num_vars() });
        }
    }
    let x = Ideal::from_forms(nv, &space.x_ideal);
    if !space.is_full_space() {
        for d in hypersurfaces {
            if x.radical_contains(d.form.poly(), caps)? {
                return Err(Error::VarietyInHypersurface(d.name.clone()));
            }
        }
    }
    let dims: Vec<i64> = (0..1usize << q)
        .into_par_iter()
        .map(|mask| {
            let mut gens = x.generators().to_vec();
            gens.extend((0..q).filter(|i| mask & (1 << i) != 0).map(|i| hypersurfaces[i].form.poly().clone()));
            Ideal::new(nv, gens).projective_dimension(caps)
        })
        .collect::<Result<_>>()?;
    Ok(PositionProfile::from_subset_dims(q, space.dim, dims))
}

/// `max_{|I| = t_{-1} - t_0} Σ_{i∈I} min(M/deg D_i, 1)`.
pub fn alpha(profile: &PositionProfile, m: u32, degrees: &[u32]) -> Scalar {
    let k = (profile.t_minus1() - profile.t0()).max(0) as usize;
    let mut w: Vec<Scalar> = degrees
        .iter()
        .map(|&d| (int(m as i64) / int(d as i64)).min(Scalar::one()))
        .collect();
    w.sort_by(|a, b| b.cmp(a));
    w.iter().take(k).fold(Scalar::zero(), |acc, x| acc + x)
}
