//! Subarc covers and subarc diameters.
//!
//! For parameters `t1 < t2` the subarc `γ_xy` between `x = g(t1)` and
//! `y = g(t2)` is located in the parameter tree. Either it lies in one cylinder
//! and contains a child of it, or it straddles the common endpoint of two
//! cylinders.

use serde::Serialize;

use crate::address::{Address, DEPTH_CAP};
use crate::analysis::{attractor_diameter, IntervalEstimate};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::geometry::ArcIndex;
use crate::parametrization::Parametrization;
use crate::similarity::Point;
use crate::zipper::{LinearZipper, Zipper};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverCase {
    /// `γ_{i·c} ⊆ γ_xy ⊆ γ_i` for some child `c`.
    OneCylinder,
    /// `γ_xy ⊆ γ_i ∪ γ_j`, where `γ_i ∩ γ_j` is one endpoint.
    TwoCylinders,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubarcCover {
    pub case: CoverCase,
    pub primary: Address,
    pub secondary: Option<Address>,
    /// Cylinders whose parameter intervals lie inside `[t1, t2]`.
    pub inner: Vec<Address>,
}

impl SubarcCover {
    /// Addresses whose union covers the subarc.
    pub fn covering(&self) -> impl Iterator<Item = &Address> {
        std::iter::once(&self.primary).chain(self.secondary.iter())
    }
}

#[derive(Debug, Clone)]
struct Cell {
    address: Address,
    lo: f64,
    hi: f64,
}

fn cell(linear: &LinearZipper, address: Address) -> Cell {
    let a = linear.forward_address(&address, 0.0);
    let b = linear.forward_address(&address, 1.0);
    Cell { address, lo: a.min(b), hi: a.max(b) }
}

/// Children in parameter order.
fn kids(linear: &LinearZipper, parent: &Cell) -> Vec<Cell> {
    let mut out: Vec<Cell> = (0..linear.m()).map(|l| cell(linear, parent.address.child(l as u8))).collect();
    out.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    out
}

/// Parameter interval `T_j([0, 1])` of an address.
pub fn parameter_interval(linear: &LinearZipper, address: &Address) -> (f64, f64) {
    let c = cell(linear, address.clone());
    (c.lo, c.hi)
}

fn check_pair(t1: f64, t2: f64) -> Result<()> {
    for t in [t1, t2] {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::ParameterOutOfRange(t));
        }
    }
    if !(t1 < t2) {
        return Err(Error::DegenerateInterval(t1, t2));
    }
    Ok(())
}

/// Locates `[t1, t2]` in the parameter tree, descending at most `depth` letters.
pub fn subarc_cover(linear: &LinearZipper, t1: f64, t2: f64, depth: usize) -> Result<SubarcCover> {
    check_pair(t1, t2)?;
    let depth = depth.min(DEPTH_CAP);
    let inside = |c: &Cell| c.lo >= t1 && c.hi <= t2;
    let mut current = cell(linear, Address::root());
    loop {
        let children = kids(linear, &current);
        let i1 = children.iter().position(|c| t1 < c.hi).unwrap_or(children.len() - 1);
        let i2 = children.iter().position(|c| t2 <= c.hi).unwrap_or(children.len() - 1);
        if i1 == i2 {
            if current.address.len() + 1 >= depth {
                return Ok(SubarcCover {
                    case: CoverCase::OneCylinder,
                    primary: children[i1].address.clone(),
                    secondary: None,
                    inner: Vec::new(),
                });
            }
            current = children[i1].clone();
            continue;
        }
        if i2 > i1 + 1 {
            return Ok(SubarcCover {
                case: CoverCase::OneCylinder,
                inner: children.iter().filter(|c| inside(c)).map(|c| c.address.clone()).collect(),
                primary: current.address,
                secondary: None,
            });
        }
        // Adjacent children: shrink each side towards the shared knot.
        let mut left = children[i1].clone();
        while left.address.len() < depth {
            let last = kids(linear, &left).pop().expect("m ≥ 2");
            if last.lo > t1 {
                break;
            }
            left = last;
        }
        let mut right = children[i2].clone();
        while right.address.len() < depth {
            let first = kids(linear, &right).swap_remove(0);
            if first.hi < t2 {
                break;
            }
            right = first;
        }
        let mut inner = Vec::new();
        for side in [&left, &right] {
            if inside(side) {
                inner.push(side.address.clone());
            } else if side.address.len() < DEPTH_CAP {
                inner.extend(kids(linear, side).into_iter().filter(|c| inside(c)).map(|c| c.address));
            }
        }
        return Ok(SubarcCover {
            case: CoverCase::TwoCylinders,
            primary: left.address,
            secondary: Some(right.address),
            inner,
        });
    }
}

/// Everything needed to bound subarc diameters of one attractor: the
/// parametrization, the attractor diameter and a hull index over the
/// depth-`depth` polyline.
#[derive(Debug, Clone)]
pub struct Attractor {
    zipper: Zipper,
    param: Parametrization,
    depth: usize,
    diameter: IntervalEstimate,
    index: ArcIndex,
    params: Vec<f64>,
    /// Every point of a depth-`depth` cylinder lies within `rho` of its vertices.
    rho: f64,
}

impl Attractor {
    pub fn new(zipper: &Zipper, linear: &LinearZipper, depth: usize, config: &Config) -> Result<Self> {
        if linear.signature() != zipper.signature() {
            return Err(Error::Prerequisite("parameter space and zipper must share a signature".into()));
        }
        let diameter = attractor_diameter(zipper, depth, config)?;
        let vertices = zipper.polyline(depth, config)?;
        let params = linear.vertex_params(depth, config)?;
        let index = ArcIndex::new(vertices, zipper.m(), depth);
        let rho = zipper.max_ratio().powi(depth as i32) * diameter.hi;
        Ok(Attractor {
            param: Parametrization::from_parts(zipper, linear.clone(), diameter.hi, config.depth_cap),
            zipper: zipper.clone(),
            depth,
            diameter,
            index,
            params,
            rho,
        })
    }

    pub fn zipper(&self) -> &Zipper {
        &self.zipper
    }

    pub fn linear(&self) -> &LinearZipper {
        self.param.linear()
    }

    pub fn parametrization(&self) -> &Parametrization {
        &self.param
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn diameter(&self) -> IntervalEstimate {
        self.diameter
    }

    pub fn index(&self) -> &ArcIndex {
        &self.index
    }

    /// Parameters of the polyline vertices, increasing.
    pub fn vertex_params(&self) -> &[f64] {
        &self.params
    }

    pub fn evaluate(&self, t: f64, tol: f64) -> Result<Point> {
        self.param.evaluate(t, tol)
    }

    /// Product of the ratios along an address.
    pub fn ratio_of(&self, address: &Address) -> f64 {
        address.indices().iter().map(|&l| self.zipper.map(l as usize).ratio()).product()
    }

    pub fn cover(&self, t1: f64, t2: f64) -> Result<SubarcCover> {
        subarc_cover(self.linear(), t1, t2, DEPTH_CAP)
    }

    /// Diameter bounds of the depth-`depth` polyline vertices `first..=last`,
    /// widened on top by `2ρ` to cover the cylinders between them.
    pub(crate) fn range_bounds(&self, first: usize, last: usize) -> IntervalEstimate {
        let (lo, hi) = self.index.range_diameter(first, last);
        IntervalEstimate::new(lo, hi + 2.0 * self.rho)
    }

    pub fn subarc_diameter(&self, t1: f64, t2: f64) -> Result<IntervalEstimate> {
        let cover = self.cover(t1, t2)?;
        let (d_lo, d_hi) = (self.diameter.lo, self.diameter.hi);
        let mut lo = cover.inner.iter().map(|a| self.ratio_of(a)).fold(0.0, f64::max) * d_lo;
        let mut hi = cover.covering().map(|a| self.ratio_of(a)).sum::<f64>() * d_hi;

        let p = &self.params;
        let first_in = p.partition_point(|&s| s < t1);
        let past_in = p.partition_point(|&s| s <= t2);
        if past_in > first_in + 1 {
            lo = lo.max(self.index.range_diameter(first_in, past_in - 1).0);
        }
        let first_out = p.partition_point(|&s| s <= t1).saturating_sub(1);
        let last_out = p.partition_point(|&s| s < t2).min(p.len() - 1);
        hi = hi.min(self.range_bounds(first_out, last_out).hi);
        Ok(IntervalEstimate::new(lo, hi.max(lo)))
    }
}

/// Bounds on `|γ_xy|` for `x = g(t1)`, `y = g(t2)`, using a depth-`depth` index.
pub fn subarc_diameter(
    zipper: &Zipper,
    linear: &LinearZipper,
    t1: f64,
    t2: f64,
    depth: usize,
    config: &Config,
) -> Result<IntervalEstimate> {
    Attractor::new(zipper, linear, depth, config)?.subarc_diameter(t1, t2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::zipper::Signature;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn half() -> LinearZipper {
        LinearZipper::new(vec![0.0, 0.5, 1.0], Signature::zeros(2)).unwrap()
    }

    #[test]
    fn close_parameters_straddle_a_deep_knot() {
        let c = subarc_cover(&half(), 0.1, 0.2, 64).unwrap();
        assert_eq!(c.case, CoverCase::TwoCylinders);
        assert_eq!(c.primary.to_string(), "11122");
        assert_eq!(c.secondary.unwrap().to_string(), "112");
        assert!(c.primary.to_string().starts_with('1'));
    }

    #[test]
    fn parameters_across_the_middle_knot() {
        let c = subarc_cover(&half(), 0.4, 0.6, 64).unwrap();
        assert_eq!(c.case, CoverCase::TwoCylinders);
        assert!(c.primary.to_string().starts_with('1'));
        assert!(c.secondary.as_ref().unwrap().to_string().starts_with('2'));
        let (_, a) = parameter_interval(&half(), &c.primary);
        let (b, _) = parameter_interval(&half(), c.secondary.as_ref().unwrap());
        assert_eq!((a, b), (0.5, 0.5));
    }

    #[test]
    fn whole_interval() {
        let c = subarc_cover(&half(), 0.0, 1.0, 64).unwrap();
        assert_eq!(c.case, CoverCase::TwoCylinders);
        assert_eq!(c.primary.to_string(), "1");
        assert_eq!(c.secondary.unwrap().to_string(), "2");
        let quarters = LinearZipper::uniform(Signature::zeros(4)).unwrap();
        let c = subarc_cover(&quarters, 0.0, 1.0, 64).unwrap();
        assert_eq!(c.case, CoverCase::OneCylinder);
        assert!(c.primary.is_empty());
        assert_eq!(c.inner.len(), 4);
    }

    #[test]
    fn degenerate_interval_is_an_error() {
        assert!(matches!(subarc_cover(&half(), 0.3, 0.3, 8), Err(Error::DegenerateInterval(..))));
        assert!(subarc_cover(&half(), -0.1, 0.3, 8).is_err());
    }

    #[test]
    fn subarc_diameter_examples() {
        let cfg = Config::default();
        let lin = corpus::linear_half();
        let d = subarc_diameter(&lin, &half(), 0.25, 0.75, 10, &cfg).unwrap();
        assert!(d.contains(0.5));
        let koch = corpus::koch();
        let lk = LinearZipper::for_zipper(&koch);
        let a = Attractor::new(&koch, &lk, 6, &cfg).unwrap();
        let whole = a.subarc_diameter(0.0, 1.0).unwrap();
        assert!(whole.contains(1.0));
        let first = a.subarc_diameter(0.0, 0.25).unwrap();
        assert!(first.contains(1.0 / 3.0), "{first:?}");
    }

    #[test]
    fn subarc_lower_bound_is_monotone_in_depth() {
        let cfg = Config::default();
        let koch = corpus::koch();
        let lk = LinearZipper::for_zipper(&koch);
        let mut prev = 0.0;
        for depth in 2..=6 {
            let d = subarc_diameter(&koch, &lk, 0.137, 0.52, depth, &cfg).unwrap();
            assert!(d.lo >= prev);
            prev = d.lo;
        }
    }

    fn koch_fixture() -> &'static (Attractor, Vec<Point>, Vec<f64>) {
        static FIXTURE: OnceLock<(Attractor, Vec<Point>, Vec<f64>)> = OnceLock::new();
        FIXTURE.get_or_init(|| {
            let cfg = Config::default();
            let koch = corpus::koch();
            let lk = LinearZipper::for_zipper(&koch);
            let attractor = Attractor::new(&koch, &lk, 5, &cfg).unwrap();
            (attractor, koch.polyline(7, &cfg).unwrap(), lk.vertex_params(7, &cfg).unwrap())
        })
    }

    proptest! {
        #[test]
        fn cover_contains_interval(a in 0.0f64..1.0, b in 0.0f64..1.0) {
            prop_assume!(a != b);
            let (t1, t2) = (a.min(b), a.max(b));
            let lin = LinearZipper::new(vec![0.0, 0.2, 0.7, 1.0], Signature::new(vec![false, true, false])).unwrap();
            let c = subarc_cover(&lin, t1, t2, 64).unwrap();
            let spans: Vec<(f64, f64)> = c.covering().map(|w| parameter_interval(&lin, w)).collect();
            let lo = spans.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
            let hi = spans.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(lo <= t1 + 1e-15 && hi >= t2 - 1e-15);
            if spans.len() == 2 {
                prop_assert!((spans[0].1 - spans[1].0).abs() < 1e-15);
            }
            for w in &c.inner {
                let (s, e) = parameter_interval(&lin, w);
                prop_assert!(s >= t1 && e <= t2);
            }
            prop_assert!(c.case == CoverCase::TwoCylinders || !c.inner.is_empty());
        }

        #[test]
        fn koch_subarc_brackets_sampled_diameter(a in 0.0f64..1.0, b in 0.0f64..1.0) {
            prop_assume!((a - b).abs() > 1e-3);
            let (t1, t2) = (a.min(b), a.max(b));
            let (attractor, line, params) = koch_fixture();
            let d = attractor.subarc_diameter(t1, t2).unwrap();
            // Oracle: vertices of a finer polyline inside [t1, t2].
            let inside: Vec<Point> = line
                .iter()
                .zip(params)
                .filter(|(_, s)| **s >= t1 && **s <= t2)
                .map(|(p, _)| p.clone())
                .collect();
            let sampled = crate::geometry::diameter(&inside);
            prop_assert!(d.hi >= sampled - 1e-12, "{d:?} vs {sampled}");
            prop_assert!(d.lo <= d.hi);
        }
    }
}
