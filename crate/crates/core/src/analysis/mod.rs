//! Certified geometric quantities of an attractor: its diameter, subarc
//! diameters and the bounded-turning constant.

mod subarc;
mod turning;

pub use subarc::{parameter_interval, subarc_cover, subarc_diameter, Attractor, CoverCase, SubarcCover};
pub use turning::{bounded_turning_constant, turning_for, Certification, TurningOptions, TurningReport};

use serde::Serialize;

use crate::config::Config;
use crate::error::Result;
use crate::geometry::diameter;
use crate::zipper::Zipper;

/// A closed interval `[lo, hi]` known to contain a quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalEstimate {
    pub lo: f64,
    pub hi: f64,
}

impl IntervalEstimate {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        IntervalEstimate { lo, hi }
    }

    pub fn exact(value: f64) -> Self {
        IntervalEstimate { lo: value, hi: value }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn scale(&self, factor: f64) -> Self {
        IntervalEstimate { lo: self.lo * factor, hi: self.hi * factor }
    }
}

/// A priori bound `|γ| ≤ spread·(1 + p)/(1 − p)`, where `spread` is the
/// vertex diameter and `p` the largest ratio.
///
/// Every point `S_i(y)` lies within `p·(r + spread)` of a vertex when `y` lies
/// within `r` of one, so all points lie within `p·spread/(1 − p)` of the
/// vertex set.
pub fn crude_diameter_bound(zipper: &Zipper) -> f64 {
    let p = zipper.max_ratio();
    zipper.vertex_spread() * (1.0 + p) / (1.0 - p)
}

/// Exact for segments. Otherwise `lo` is the diameter of the depth-`depth`
/// polyline and `hi` the smallest of `lo_e + 2·p_max^e·hi₀` over `e ≤ depth`,
/// so both ends are monotone in depth.
pub fn attractor_diameter(zipper: &Zipper, depth: usize, config: &Config) -> Result<IntervalEstimate> {
    config.check_nodes(zipper.m(), depth)?;
    if is_segment(zipper) {
        return Ok(IntervalEstimate::exact(zipper.first_vertex().distance(zipper.last_vertex())));
    }
    let hi0 = crude_diameter_bound(zipper);
    let p = zipper.max_ratio();
    let mut hi = hi0;
    let mut lo = 0.0;
    let mut scale = 1.0;
    for e in 0..=depth {
        lo = diameter(&zipper.polyline(e, config)?);
        hi = hi.min(lo + 2.0 * scale * hi0);
        scale *= p;
    }
    Ok(IntervalEstimate::new(lo, hi.max(lo)))
}

/// Collinear vertices in strictly monotone order along the chord: the
/// attractor is the chord itself.
pub(crate) fn is_segment(zipper: &Zipper) -> bool {
    let (a, b) = (zipper.first_vertex(), zipper.last_vertex());
    let chord = b.as_vector() - a.as_vector();
    let len2 = chord.norm_squared();
    if len2 == 0.0 {
        return false;
    }
    let len = len2.sqrt();
    let mut prev = f64::NEG_INFINITY;
    for v in zipper.vertices() {
        let w = v.as_vector() - a.as_vector();
        let s = w.dot(&chord) / len2;
        let off = (w - &chord * s).norm();
        if off > 1e-12 * len || !(s > prev) {
            return false;
        }
        prev = s;
    }
    true
}

/// Upper bound on `sup_{x∈γ} ‖x − (z_0 + z_m)/2‖`, given `|γ| ≤ diameter_hi`.
pub fn chord_radius(zipper: &Zipper, depth: usize, diameter_hi: f64, config: &Config) -> Result<f64> {
    config.check_nodes(zipper.m(), depth)?;
    let mid = zipper.first_vertex().midpoint(zipper.last_vertex());
    let p = zipper.max_ratio();
    let mut best = f64::INFINITY;
    let mut scale = 1.0;
    for e in 0..=depth {
        let far = zipper.polyline(e, config)?.iter().map(|v| v.distance(&mid)).fold(0.0, f64::max);
        // Each point lies in a depth-e cylinder of diameter ≤ p^e·|γ| that
        // contains a polyline vertex.
        best = best.min(far + scale * diameter_hi);
        scale *= p;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::geometry::brute_force_diameter;

    #[test]
    fn linear_diameter_converges_to_one() {
        let cfg = Config::default();
        let mut prev = f64::INFINITY;
        for depth in [4, 8, 12, 16] {
            let d = attractor_diameter(&corpus::linear_half(), depth, &cfg).unwrap();
            assert_eq!(d.lo, 1.0);
            assert!(d.hi >= 1.0 && d.hi <= 1.0 + 2.0 * 0.5f64.powi(depth as i32) * 3.0);
            assert!(d.hi <= prev);
            prev = d.hi;
        }
    }

    #[test]
    fn koch_diameter_depth_eight() {
        let cfg = Config::default();
        let koch = corpus::koch();
        let d = attractor_diameter(&koch, 8, &cfg).unwrap();
        let line = koch.polyline(6, &cfg).unwrap();
        assert!((brute_force_diameter(&line) - 1.0).abs() < 1e-12);
        assert!((d.lo - 1.0).abs() < 1e-12);
        assert!(d.hi - d.lo < 2.0 * (1.0f64 / 3.0).powi(8) * crude_diameter_bound(&koch));
    }

    #[test]
    fn diameter_is_monotone_and_sandwiches_koch() {
        let cfg = Config::default();
        let koch = corpus::koch();
        let mut prev = IntervalEstimate::new(0.0, f64::INFINITY);
        for depth in 0..=7 {
            let d = attractor_diameter(&koch, depth, &cfg).unwrap();
            assert!(d.lo >= prev.lo && d.hi <= prev.hi);
            if depth >= 1 {
                assert!(d.contains(1.0));
            }
            prev = d;
        }
    }

    #[test]
    fn cesaro_diameter_at_least_chord() {
        let d = attractor_diameter(&corpus::cesaro(0.5, 0.3), 10, &Config::default()).unwrap();
        assert!(d.lo >= 1.0);
    }

    #[test]
    fn chord_radius_bounds_polyline() {
        let cfg = Config::default();
        for (_, z) in corpus::all() {
            let d = attractor_diameter(&z, 6, &cfg).unwrap();
            let r = chord_radius(&z, 6, d.hi, &cfg).unwrap();
            let mid = z.first_vertex().midpoint(z.last_vertex());
            for v in z.polyline(8, &cfg).unwrap() {
                assert!(v.distance(&mid) <= r);
            }
        }
    }
}
