//! The canonical homeomorphism `f` between two same-signature attractors.
//!
//! `f` is never computed directly. With structural parametrizations `g`, `g'`
//! over one shared parameter space, `f(g(t)) = g'(t)`, so pairs `(x, f(x))`
//! come from evaluating both at the same `t`.

mod scan;

pub use scan::{
    distortion_scan, sharpness_witness, DirectionScan, DistortionRecord, DistortionScan, KnotRule, ScanOptions,
    WitnessRecord, WitnessSeries,
};

use serde::Serialize;

use crate::analysis::{attractor_diameter, bounded_turning_constant, IntervalEstimate, TurningOptions, TurningReport};
use crate::config::{Config, RATIO_EQ_TOL};
use crate::error::{Error, Result};
use crate::parametrization::{jordan_check, JordanCertificate, Parametrization};
use crate::similarity::Point;
use crate::zipper::{LinearZipper, Zipper};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IsomorphismCheck {
    SameSignature,
    /// One-based index of the first differing bit.
    SignatureMismatch {
        index: usize,
    },
}

/// Compares signatures; different map counts leave no candidate isomorphism.
pub fn check_isomorphic(left: &Zipper, right: &Zipper) -> Result<IsomorphismCheck> {
    if left.m() != right.m() {
        return Err(Error::MapCountMismatch { left: left.m(), right: right.m() });
    }
    Ok(match (0..left.m()).find(|&i| left.signature().reverses(i) != right.signature().reverses(i)) {
        Some(i) => IsomorphismCheck::SignatureMismatch { index: i + 1 },
        None => IsomorphismCheck::SameSignature,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// `log p_i / log q_i`.
    #[serde(rename = "p/q")]
    POverQ,
    /// `log q_i / log p_i`.
    #[serde(rename = "q/p")]
    QOverP,
}

/// `α = min_i min(log p_i/log q_i, log q_i/log p_i)` and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolderReport {
    pub alpha: f64,
    /// One-based.
    pub argmin_index: usize,
    pub direction: Direction,
}

fn check_ratios(name: &str, r: &[f64]) -> Result<()> {
    match r.iter().position(|&x| !(x > 0.0 && x < 1.0)) {
        Some(i) => Err(Error::InvalidRatios(format!("{name}[{}] = {} is not in (0, 1)", i + 1, r[i]))),
        None => Ok(()),
    }
}

/// Ties keep the lowest index, and `p/q` before `q/p`.
pub fn holder_exponent(p: &[f64], q: &[f64]) -> Result<HolderReport> {
    if p.len() != q.len() || p.is_empty() {
        return Err(Error::InvalidRatios(format!("lengths {} and {} differ", p.len(), q.len())));
    }
    check_ratios("p", p)?;
    check_ratios("q", q)?;
    let mut best = HolderReport { alpha: f64::INFINITY, argmin_index: 1, direction: Direction::POverQ };
    for (i, (&a, &b)) in p.iter().zip(q).enumerate() {
        // Two divisions, so swapping p and q permutes the candidates exactly.
        let candidates = [(a.ln() / b.ln(), Direction::POverQ), (b.ln() / a.ln(), Direction::QOverP)];
        for (value, direction) in candidates {
            if value < best.alpha {
                best = HolderReport { alpha: value, argmin_index: i + 1, direction };
            }
        }
    }
    // Equal ratios give exactly 1, never 1 ± ulp.
    if p.iter().zip(q).all(|(a, b)| a == b) {
        best.alpha = 1.0;
    }
    Ok(best)
}

/// `x ↦ f(x)` realized through a shared parameter space.
#[derive(Debug, Clone)]
pub struct CanonicalMap {
    left: Parametrization,
    right: Parametrization,
}

impl CanonicalMap {
    /// Shares knots proportional to the left zipper's ratios.
    pub fn new(left: &Zipper, right: &Zipper) -> Result<Self> {
        CanonicalMap::with_linear(left, right, LinearZipper::for_zipper(left))
    }

    pub fn with_linear(left: &Zipper, right: &Zipper, linear: LinearZipper) -> Result<Self> {
        match check_isomorphic(left, right)? {
            IsomorphismCheck::SameSignature => {}
            IsomorphismCheck::SignatureMismatch { index } => return Err(Error::SignatureMismatch(index)),
        }
        Ok(CanonicalMap {
            left: Parametrization::with_linear(left, linear.clone())?,
            right: Parametrization::with_linear(right, linear)?,
        })
    }

    pub fn linear(&self) -> &LinearZipper {
        self.left.linear()
    }

    /// `(g(t), g'(t))`, each within `tol`.
    pub fn pair(&self, t: f64, tol: f64) -> Result<(Point, Point)> {
        Ok((self.left.evaluate(t, tol)?, self.right.evaluate(t, tol)?))
    }
}

/// `(x, f(x))` at parameter `t` with knots proportional to the left ratios.
pub fn canonical_pair(left: &Zipper, right: &Zipper, t: f64, tol: f64) -> Result<(Point, Point)> {
    CanonicalMap::new(left, right)?.pair(t, tol)
}

/// The certified inputs one attractor contributes to a comparison.
#[derive(Debug, Clone, Serialize)]
pub struct Profile {
    #[serde(skip)]
    pub zipper: Zipper,
    pub jordan: JordanCertificate,
    pub turning: TurningReport,
    pub diameter: IntervalEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileOptions {
    pub jordan_depth: usize,
    pub turning: TurningOptions,
}

impl ProfileOptions {
    /// Depths sized for roughly `4^6` cylinders in the Jordan scan and `4^8`
    /// polyline vertices in the turning scan.
    pub fn for_zipper(zipper: &Zipper) -> Self {
        let m = zipper.m();
        let depth_for = |budget: u64| {
            let mut d = 0;
            while (m as u64).pow(d as u32 + 1) <= budget {
                d += 1;
            }
            d
        };
        ProfileOptions {
            jordan_depth: depth_for(4096),
            turning: TurningOptions::new(depth_for(65_536), 1000).certified(),
        }
    }
}

impl Profile {
    pub fn analyze(zipper: &Zipper, options: &ProfileOptions, config: &Config) -> Result<Self> {
        let jordan = jordan_check(zipper, options.jordan_depth, 0.0, config)?;
        let linear = LinearZipper::for_zipper(zipper);
        let turning = bounded_turning_constant(zipper, &linear, &options.turning, config)?;
        let diameter = attractor_diameter(zipper, options.turning.depth, config)?;
        Ok(Profile { zipper: zipper.clone(), jordan, turning, diameter })
    }

    /// Certified `M` when available, else the lower bound.
    pub fn turning_constant(&self) -> (f64, BoundStatus) {
        match self.turning.m_certified_upper {
            Some(m) => (m, BoundStatus::Certified),
            None => (self.turning.m_lower, BoundStatus::LowerBound),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundStatus {
    Certified,
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypothesisStatus {
    Certified,
    Assumed,
    Refuted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Decision {
    BiLipschitz,
    BiHolder { alpha: f64 },
    NotIsomorphic { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionRecord {
    pub decision: Decision,
    pub jordan: [HypothesisStatus; 2],
    pub bounded_turning: [HypothesisStatus; 2],
    pub equal_ratios: bool,
    pub alpha: Option<f64>,
}

fn jordan_status(p: &Profile) -> HypothesisStatus {
    if p.jordan.is_verified() {
        HypothesisStatus::Certified
    } else if p.jordan.is_violation() {
        HypothesisStatus::Refuted
    } else {
        HypothesisStatus::Assumed
    }
}

fn turning_status(p: &Profile) -> HypothesisStatus {
    if p.turning.m_certified_upper.is_some() {
        HypothesisStatus::Certified
    } else {
        HypothesisStatus::Assumed
    }
}

/// Bi-Lipschitz when signatures and ratios agree and one attractor has
/// certified bounded turning; bi-Hölder otherwise. When neither attractor
/// certifies bounded turning, the equal-ratio case is still reported as
/// bi-Lipschitz with the hypothesis marked assumed.
pub fn bilipschitz_decision(left: &Profile, right: &Profile) -> DecisionRecord {
    let jordan = [jordan_status(left), jordan_status(right)];
    let bounded_turning = [turning_status(left), turning_status(right)];
    let mut record =
        DecisionRecord { decision: Decision::BiLipschitz, jordan, bounded_turning, equal_ratios: false, alpha: None };
    let reason = match check_isomorphic(&left.zipper, &right.zipper) {
        Err(_) => Some(format!("map counts differ ({} vs {})", left.zipper.m(), right.zipper.m())),
        Ok(IsomorphismCheck::SignatureMismatch { index }) => Some(format!("signatures differ at map {index}")),
        Ok(IsomorphismCheck::SameSignature) if jordan.contains(&HypothesisStatus::Refuted) => {
            Some("an attractor is not a Jordan arc".to_string())
        }
        Ok(IsomorphismCheck::SameSignature) => None,
    };
    if let Some(reason) = reason {
        record.decision = Decision::NotIsomorphic { reason };
        return record;
    }
    let (p, q) = (left.zipper.ratios(), right.zipper.ratios());
    record.equal_ratios = p.iter().zip(&q).all(|(a, b)| (a - b).abs() <= RATIO_EQ_TOL * a.max(*b));
    let alpha = holder_exponent(&p, &q).map(|h| h.alpha).unwrap_or(f64::NAN);
    record.alpha = Some(if record.equal_ratios { 1.0 } else { alpha });
    if !record.equal_ratios {
        record.decision = Decision::BiHolder { alpha };
    }
    record
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::zipper::Signature;
    use proptest::prelude::*;

    #[test]
    fn signature_comparisons() {
        let lin4 = corpus::linear_quarters();
        assert_eq!(check_isomorphic(&corpus::koch(), &lin4).unwrap(), IsomorphismCheck::SameSignature);
        let a = LinearZipper::uniform(Signature::zeros(2)).unwrap().to_zipper();
        let b = LinearZipper::uniform(Signature::new(vec![false, true])).unwrap().to_zipper();
        assert_eq!(check_isomorphic(&a, &b).unwrap(), IsomorphismCheck::SignatureMismatch { index: 2 });
        assert!(matches!(check_isomorphic(&a, &corpus::mixed()), Err(Error::MapCountMismatch { .. })));
    }

    #[test]
    fn exponent_examples() {
        let h = holder_exponent(&[1.0 / 3.0; 4], &[1.0 / 3.0; 4]).unwrap();
        assert_eq!(h.alpha, 1.0);
        let h = holder_exponent(&[0.5, 0.5], &[1.0 / 3.0, 2.0 / 3.0]).unwrap();
        assert!((h.alpha - (2.0f64 / 3.0).ln() / 0.5f64.ln()).abs() < 1e-12);
        assert!((h.alpha - 0.584963).abs() < 1e-6);
        assert_eq!((h.argmin_index, h.direction), (2, Direction::QOverP));
        assert!(holder_exponent(&[0.5], &[0.5, 0.5]).is_err());
        assert!(holder_exponent(&[1.5, 0.5], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn canonical_pair_examples() {
        let (half, third) = (corpus::linear_half(), corpus::linear_third());
        let (x, y) = canonical_pair(&half, &third, 0.0, 1e-10).unwrap();
        assert_eq!((x[0], y[0]), (0.0, 0.0));
        let (x, y) = canonical_pair(&half, &third, 0.75, 1e-10).unwrap();
        assert!((x[0] - 0.75).abs() <= 1e-10);
        assert!((y[0] - 5.0 / 9.0).abs() <= 1e-10);
        let koch = corpus::koch();
        let map = CanonicalMap::new(&koch, &corpus::koch_mirrored()).unwrap();
        for (i, &t) in map.linear().knots().to_vec().iter().enumerate() {
            let (x, y) = map.pair(t, 1e-9).unwrap();
            assert!(x.distance(&koch.vertices()[i]) <= 1e-9);
            assert!(y.distance(&corpus::koch_mirrored().vertices()[i]) <= 1e-9);
        }
    }

    #[test]
    fn decisions() {
        let cfg = Config::default();
        let profile = |z: &Zipper| Profile::analyze(z, &ProfileOptions::for_zipper(z), &cfg).unwrap();
        let koch = profile(&corpus::koch());
        let mirrored = profile(&corpus::koch_mirrored());
        assert_eq!(bilipschitz_decision(&koch, &mirrored).decision, Decision::BiLipschitz);
        let half = profile(&corpus::linear_half());
        let third = profile(&corpus::linear_third());
        let Decision::BiHolder { alpha } = bilipschitz_decision(&half, &third).decision else {
            panic!("expected bi-Hölder")
        };
        assert!((alpha - 0.584963).abs() < 1e-6);
        let flipped = LinearZipper::new(vec![0.0, 0.5, 1.0], Signature::new(vec![false, true])).unwrap().to_zipper();
        let flipped = profile(&flipped);
        assert!(matches!(bilipschitz_decision(&half, &flipped).decision, Decision::NotIsomorphic { .. }));
    }

    fn ratio_vec() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (2usize..6).prop_flat_map(|m| {
            (proptest::collection::vec(0.01f64..0.99, m), proptest::collection::vec(0.01f64..0.99, m))
        })
    }

    proptest! {
        #[test]
        fn exponent_is_swap_symmetric((p, q) in ratio_vec()) {
            let a = holder_exponent(&p, &q).unwrap().alpha;
            let b = holder_exponent(&q, &p).unwrap().alpha;
            prop_assert_eq!(a, b);
            prop_assert!(a > 0.0 && a <= 1.0);
            prop_assert_eq!(holder_exponent(&p, &p).unwrap().alpha, 1.0);
        }

        #[test]
        fn exponent_decreases_when_a_log_ratio_shrinks((p, q) in ratio_vec(), i in 0usize..6, s in 0.05f64..0.95) {
            let i = i % p.len();
            let base = holder_exponent(&p, &q).unwrap().alpha;
            let mut q2 = q.clone();
            // Smaller q_i lowers log p_i / log q_i.
            q2[i] = q[i] * s;
            prop_assume!(q2[i] > 0.0);
            let lowered = holder_exponent(&p, &q2).unwrap().alpha;
            prop_assert!(lowered <= base.max((p[i].ln() / q2[i].ln()).min(q2[i].ln() / p[i].ln())) + 1e-15);
        }
    }
}
