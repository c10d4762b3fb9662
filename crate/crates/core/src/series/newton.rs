use num_traits::Zero;

use super::Series;
use crate::error::{Error, Result};
use crate::pl::PlFun;
use crate::scalar::{int, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    /// Equal to the common log-radius `log_p |ρ|` of the zeros it accounts for.
    pub slope: Scalar,
    pub length: u64,
}

/// Lower convex hull of `{(n, v(a_n))}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub ord_at_zero: u64,
    pub segments: Vec<Segment>,
    /// False when built from a truncated head: the trailing segments may not
    /// belong to the true polygon.
    pub complete: bool,
}

impl NewtonPolygon {
    /// Zeros (with multiplicity, the zero at the origin included) of
    /// log-radius at most `t`.
    pub fn zeros_up_to(&self, t: &Scalar) -> u64 {
        self.ord_at_zero
            + self
                .segments
                .iter()
                .filter(|s| &s.slope <= t)
                .map(|s| s.length)
                .sum::<u64>()
    }

    pub fn total_zeros(&self) -> u64 {
        self.ord_at_zero + self.segments.iter().map(|s| s.length).sum::<u64>()
    }
}

pub fn newton_polygon(series: &Series) -> Result<NewtonPolygon> {
    let pts = series.known_points();
    if pts.is_empty() {
        return Err(if series.is_zero() { Error::ZeroSeries } else { Error::UndefinedNorm });
    }
    let cross = |o: (usize, i64), a: (usize, i64), b: (usize, i64)| -> i128 {
        (a.0 as i128 - o.0 as i128) * (b.1 as i128 - o.1 as i128)
            - (a.1 as i128 - o.1 as i128) * (b.0 as i128 - o.0 as i128)
    };
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let segments = hull
        .windows(2)
        .map(|w| Segment {
            slope: Scalar::new((w[1].1 - w[0].1).into(), (w[1].0 as i64 - w[0].0 as i64).into()),
            length: (w[1].0 - w[0].0) as u64,
        })
        .collect();
    Ok(NewtonPolygon {
        ord_at_zero: pts[0].0 as u64,
        segments,
        complete: series.is_polynomial(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroCounting {
    pub polygon: NewtonPolygon,
    /// Zeros in the domain: `(log-radius, multiplicity)`, increasing.
    pub jumps: Vec<(Scalar, u64)>,
    /// Zeros of log-radius at most `t_min`, the origin included.
    pub count_at_start: u64,
    /// `N(t) = ∫_{t_min}^t n(s) ds`, so `N(t_min) = 0`.
    pub counting: PlFun,
}

impl ZeroCounting {
    pub fn count_at(&self, t: &Scalar) -> u64 {
        self.count_at_start + self.jumps.iter().filter(|(r, _)| r <= t).map(|(_, m)| m).sum::<u64>()
    }
}

/// Counting data for the zeros of a series whose Gauss norm is certified on
/// `[t_min, t_max]`.
pub fn zero_counting(series: &Series, t_min: &Scalar, t_max: &Scalar) -> Result<ZeroCounting> {
    if !series.gauss_norm(t_min, t_max)?.certified {
        return Err(Error::Uncertified("Gauss norm not certified on the domain".into()));
    }
    let polygon = newton_polygon(series)?;
    let count_at_start = polygon.zeros_up_to(t_min);
    let jumps: Vec<(Scalar, u64)> = polygon
        .segments
        .iter()
        .filter(|s| &s.slope > t_min && &s.slope <= t_max)
        .map(|s| (s.slope.clone(), s.length))
        .collect();
    let mut breaks = vec![t_min.clone()];
    let mut values = vec![Scalar::zero()];
    let mut slope = int(count_at_start as i64);
    for (r, m) in &jumps {
        if r == t_max {
            break;
        }
        let v = values.last().unwrap() + &slope * (r - breaks.last().unwrap());
        breaks.push(r.clone());
        values.push(v);
        slope += int(*m as i64);
    }
    if t_max > t_min {
        let v = values.last().unwrap() + &slope * (t_max - breaks.last().unwrap());
        breaks.push(t_max.clone());
        values.push(v);
    }
    let counting = PlFun::new(breaks, values)?;
    Ok(ZeroCounting { polygon, jumps, count_at_start, counting })
}

/// `max_t |log|f|_r − log|f|_{r_0} − N(t)|`; the identity makes this zero.
pub fn jensen_check(series: &Series, t_min: &Scalar, t_max: &Scalar) -> Result<Scalar> {
    let g = series.gauss_norm(t_min, t_max)?;
    if !g.certified {
        return Err(Error::Uncertified("Gauss norm not certified on the domain".into()));
    }
    let zc = zero_counting(series, t_min, t_max)?;
    let base = g.norm.eval(t_min)?;
    g.norm.add_constant(&-base).sup_distance(&zc.counting)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{power::iterated_power_series, Valuation};

    fn poly(cs: &[i64], p: u64) -> Series {
        Series::polynomial(cs.iter().map(|&c| int(c)).collect(), Valuation::PAdic(p))
    }

    #[test]
    fn polygon_of_p2_plus_z2() {
        // both roots of p^2 + z^2 have valuation 1
        for p in [2u64, 3, 5] {
            let np = newton_polygon(&poly(&[(p * p) as i64, 0, 1], p)).unwrap();
            assert_eq!(np.ord_at_zero, 0);
            assert_eq!(np.segments, vec![Segment { slope: int(-1), length: 2 }]);
            assert_eq!(np.total_zeros(), 2);
        }
    }

    #[test]
    fn polygon_simple_cases() {
        let np = newton_polygon(&poly(&[0, 1], 2)).unwrap();
        assert_eq!((np.ord_at_zero, np.segments.len()), (1, 0));
        let np = newton_polygon(&poly(&[-3, 1], 5)).unwrap();
        assert_eq!(np.segments, vec![Segment { slope: int(0), length: 1 }]);
        assert!(matches!(newton_polygon(&Series::zero(Valuation::PAdic(2))), Err(Error::ZeroSeries)));
    }

    #[test]
    fn counting_p2_plus_z2() {
        let zc = zero_counting(&poly(&[25, 0, 1], 5), &int(-2), &int(0)).unwrap();
        assert_eq!(zc.count_at(&int(-2)), 0);
        assert_eq!(zc.count_at(&int(-1)), 2);
        assert_eq!(zc.counting.eval(&int(0)).unwrap(), int(2));
        assert_eq!(jensen_check(&poly(&[25, 0, 1], 5), &int(-2), &int(0)).unwrap(), int(0));
    }

    #[test]
    fn counting_trivial_cases() {
        let zc = zero_counting(&poly(&[0, 1], 2), &int(0), &int(10)).unwrap();
        assert_eq!(zc.counting, PlFun::affine(&int(0), &int(10), &int(1), &int(0)).unwrap());
        let zc = zero_counting(&poly(&[1], 2), &int(0), &int(10)).unwrap();
        assert_eq!(zc.count_at(&int(5)), 0);
        assert!(zc.counting.is_constant());
        assert_eq!(jensen_check(&poly(&[0, 1], 2), &int(0), &int(10)).unwrap(), int(0));
    }

    #[test]
    fn root_at_three_counts_from_base() {
        for p in [2, 3, 5] {
            let zc = zero_counting(&poly(&[-3, 1], p), &int(0), &int(10)).unwrap();
            assert_eq!(zc.counting, PlFun::affine(&int(0), &int(10), &int(1), &int(0)).unwrap());
        }
    }

    #[test]
    fn jensen_on_certified_series() {
        let g = iterated_power_series(&int(2), 12, Valuation::PAdic(2)).unwrap();
        assert_eq!(jensen_check(&g, &int(-3), &int(8)).unwrap(), int(0));
    }
}
