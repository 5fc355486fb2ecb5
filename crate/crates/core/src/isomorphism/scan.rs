//! Sampled checks of the Hölder bound and its sharpness.
//!
//! For `f : γ → γ'` the bound is
//!
//! ```text
//! ‖f(x) − f(y)‖ ≤ C·‖x − y‖^α,   C = 2·M^α·|γ'| / (p_min^α·|γ|^α)
//! ```
//!
//! with `M` the turning constant of `γ` and `p_min` its smallest ratio. The
//! constant is made conservative with `|γ'|_hi` and `|γ|_lo`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{holder_exponent, BoundStatus, Profile};
use crate::config::{Config, HOLDER_SLACK};
use crate::error::{Error, Result};
use crate::fit::{fit_line, LineFit};
use crate::parametrization::{transfer_parameter, Parametrization};
use crate::similarity::{Point, Similarity};
use crate::zipper::{LinearZipper, Zipper};

/// How the shared parameter space is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KnotRule {
    /// Knots proportional to the domain's ratios.
    #[default]
    Proportional,
    /// Uniform knots. Sampled parameters are drawn in the proportional space
    /// and transferred, so both rules sample the same point pairs.
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanOptions {
    /// Total pairs per direction: half seeded random parameters, half
    /// random pairs of cylinder endpoints.
    pub pairs: usize,
    /// Depth of the cylinder endpoints.
    pub depth: usize,
    pub seed: u64,
    pub tol: f64,
    pub knots: KnotRule,
}

impl ScanOptions {
    pub fn new(pairs: usize, depth: usize, seed: u64) -> Self {
        ScanOptions { pairs, depth, seed, tol: Config::default().eval_tol, knots: KnotRule::Proportional }
    }

    pub fn with_knots(mut self, knots: KnotRule) -> Self {
        self.knots = knots;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistortionRecord {
    pub t1: f64,
    pub t2: f64,
    pub d: f64,
    pub d_image: f64,
    /// `d_image / d^α`.
    pub holder_ratio: f64,
}

/// One direction of the scan, `f` or `f⁻¹`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionScan {
    pub constant: f64,
    pub m_used: f64,
    pub m_status: BoundStatus,
    /// `|γ|_lo` of the domain and `|γ'|_hi` of the image.
    pub diameters_used: (f64, f64),
    pub p_min: f64,
    pub max_holder_ratio: f64,
    /// Sampled pairs whose domain points coincide; they carry no ratio.
    pub coincident: usize,
    /// Indices into `records` breaking the bound, ascending.
    pub violations: Vec<usize>,
    pub records: Vec<DistortionRecord>,
}

impl DirectionScan {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionScan {
    pub alpha: f64,
    pub forward: DirectionScan,
    pub backward: DirectionScan,
}

impl DistortionScan {
    pub fn passed(&self) -> bool {
        self.forward.passed() && self.backward.passed()
    }

    /// True when both constants rest on certified turning constants.
    pub fn certified(&self) -> bool {
        self.forward.m_status == BoundStatus::Certified && self.backward.m_status == BoundStatus::Certified
    }
}

fn sample_pairs(linear: &LinearZipper, options: &ScanOptions, config: &Config) -> Result<Vec<(f64, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let vertices = linear.vertex_params(options.depth, config)?;
    let random = options.pairs - options.pairs / 2;
    let mut pairs = Vec::with_capacity(options.pairs);
    while pairs.len() < random {
        let (a, b): (f64, f64) = (rng.gen(), rng.gen());
        if a != b {
            pairs.push((a.min(b), a.max(b)));
        }
    }
    while pairs.len() < options.pairs {
        let a = rng.gen_range(0..vertices.len());
        let b = rng.gen_range(0..vertices.len());
        if a != b {
            pairs.push((vertices[a.min(b)], vertices[a.max(b)]));
        }
    }
    Ok(pairs)
}

fn direction(
    domain: &Profile,
    image: &Profile,
    alpha: f64,
    options: &ScanOptions,
    config: &Config,
) -> Result<DirectionScan> {
    let (m_used, m_status) = domain.turning_constant();
    let p_min = domain.zipper.min_ratio();
    let (d_lo, d_hi) = (domain.diameter.lo, image.diameter.hi);
    let constant = 2.0 * m_used.powf(alpha) * d_hi / (p_min.powf(alpha) * d_lo.powf(alpha));

    let proportional = LinearZipper::for_zipper(&domain.zipper);
    let pairs = sample_pairs(&proportional, options, config)?;
    let shared = match options.knots {
        KnotRule::Proportional => proportional.clone(),
        KnotRule::Uniform => LinearZipper::uniform(domain.zipper.signature().clone())?,
    };
    let g = Parametrization::with_linear(&domain.zipper, shared.clone())?;
    let h = Parametrization::with_linear(&image.zipper, shared)?;
    let to_shared = |t: f64| match options.knots {
        KnotRule::Proportional => Ok(t),
        KnotRule::Uniform => transfer_parameter(&proportional, g.linear(), t),
    };
    let tol = options.tol;
    let evaluated: Vec<Result<Option<DistortionRecord>>> = pairs
        .par_iter()
        .map(|&(t1, t2)| {
            let (s1, s2) = (to_shared(t1)?, to_shared(t2)?);
            let d = g.evaluate(s1, tol)?.distance(&g.evaluate(s2, tol)?);
            if d == 0.0 {
                return Ok(None);
            }
            let d_image = h.evaluate(s1, tol)?.distance(&h.evaluate(s2, tol)?);
            Ok(Some(DistortionRecord { t1, t2, d, d_image, holder_ratio: d_image / d.powf(alpha) }))
        })
        .collect();

    let mut records = Vec::with_capacity(pairs.len());
    let mut coincident = 0;
    for r in evaluated {
        match r? {
            Some(rec) => records.push(rec),
            None => coincident += 1,
        }
    }
    let violations = records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.d_image > constant * r.d.powf(alpha) * (1.0 + HOLDER_SLACK))
        .map(|(i, _)| i)
        .collect();
    Ok(DirectionScan {
        constant,
        m_used,
        m_status,
        diameters_used: (d_lo, d_hi),
        p_min,
        max_holder_ratio: records.iter().map(|r| r.holder_ratio).fold(0.0, f64::max),
        coincident,
        violations,
        records,
    })
}

/// Scans `f` and `f⁻¹` on sampled pairs. Both attractors must have passed the
/// Jordan check. The reverse direction samples with knots proportional to the
/// image's ratios.
pub fn distortion_scan(
    left: &Profile,
    right: &Profile,
    options: &ScanOptions,
    config: &Config,
) -> Result<DistortionScan> {
    if left.zipper.m() != right.zipper.m() {
        return Err(Error::MapCountMismatch { left: left.zipper.m(), right: right.zipper.m() });
    }
    if let Some(i) =
        (0..left.zipper.m()).find(|&i| left.zipper.signature().reverses(i) != right.zipper.signature().reverses(i))
    {
        return Err(Error::SignatureMismatch(i + 1));
    }
    for (name, p) in [("first", left), ("second", right)] {
        if !p.jordan.is_verified() {
            return Err(Error::Prerequisite(format!("the {name} attractor has no verified Jordan certificate")));
        }
    }
    let alpha = holder_exponent(&left.zipper.ratios(), &right.zipper.ratios())?.alpha;
    let run = || -> Result<DistortionScan> {
        Ok(DistortionScan {
            alpha,
            forward: direction(left, right, alpha, options, config)?,
            backward: direction(right, left, alpha, options, config)?,
        })
    };
    match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Prerequisite(e.to_string()))?
            .install(run),
        None => run(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessRecord {
    pub i: usize,
    pub k: usize,
    pub x: Point,
    pub y: Point,
    pub x_image: Point,
    pub y_image: Point,
    pub d: f64,
    pub d_image: f64,
    /// `d_image / d^α`.
    pub m0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessSeries {
    pub alpha: f64,
    pub records: Vec<WitnessRecord>,
    /// `(max − min)/max` of `m0` over the records.
    pub m0_spread: f64,
    /// Slope of `log d_image` against `log d`; `None` with fewer than two records.
    pub fit: Option<LineFit>,
}

/// Pairs `S_i^k(z_0), S_i^k(z_m)` and their images for `k = 0..=k_max`,
/// stopping once `p_i^k·‖z_m − z_0‖ ≤ 1e-12`. `i` is one-based and must
/// attain `α` as `log q_i / log p_i`.
pub fn sharpness_witness(left: &Zipper, right: &Zipper, i: usize, k_max: usize) -> Result<WitnessSeries> {
    if left.m() != right.m() {
        return Err(Error::MapCountMismatch { left: left.m(), right: right.m() });
    }
    if left.signature() != right.signature() {
        let first = (0..left.m()).find(|&j| left.signature().reverses(j) != right.signature().reverses(j));
        return Err(Error::SignatureMismatch(first.map_or(0, |j| j + 1)));
    }
    if i == 0 || i > left.m() {
        return Err(Error::InvalidAddress { letter: i, m: left.m() });
    }
    let (p, q) = (left.ratios(), right.ratios());
    let alpha = holder_exponent(&p, &q)?.alpha;
    let own = q[i - 1].ln() / p[i - 1].ln();
    if (own - alpha).abs() > 1e-12 * alpha {
        return Err(Error::NotWitnessIndex { index: i });
    }

    let (s, s_image) = (left.map(i - 1), right.map(i - 1));
    let chord = left.last_vertex().as_vector() - left.first_vertex().as_vector();
    let chord_image = right.last_vertex().as_vector() - right.first_vertex().as_vector();
    let m0_def = chord_image.norm() / chord.norm().powf(alpha);

    let mut records = Vec::new();
    let mut power: Option<(Similarity, Similarity)> = None;
    for k in 0..=k_max {
        let record = match &power {
            None => WitnessRecord {
                i,
                k,
                x: left.first_vertex().clone(),
                y: left.last_vertex().clone(),
                x_image: right.first_vertex().clone(),
                y_image: right.last_vertex().clone(),
                d: chord.norm(),
                d_image: chord_image.norm(),
                m0: m0_def,
            },
            Some((a, b)) => {
                // Distances from the linear part avoid cancellation in x − y.
                let d = a.apply_linear(&chord).norm();
                let d_image = b.apply_linear(&chord_image).norm();
                WitnessRecord {
                    i,
                    k,
                    x: a.apply_unchecked(left.first_vertex()),
                    y: a.apply_unchecked(left.last_vertex()),
                    x_image: b.apply_unchecked(right.first_vertex()),
                    y_image: b.apply_unchecked(right.last_vertex()),
                    d,
                    d_image,
                    m0: d_image / d.powf(alpha),
                }
            }
        };
        if k > 0 && record.d <= 1e-12 {
            break;
        }
        records.push(record);
        power = Some(match power {
            None => (s.clone(), s_image.clone()),
            Some((a, b)) => (a.compose(s)?, b.compose(s_image)?),
        });
    }

    let max = records.iter().map(|r| r.m0).fold(f64::NEG_INFINITY, f64::max);
    let min = records.iter().map(|r| r.m0).fold(f64::INFINITY, f64::min);
    let xs: Vec<f64> = records.iter().map(|r| r.d.ln()).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.d_image.ln()).collect();
    Ok(WitnessSeries { alpha, m0_spread: (max - min) / max, fit: fit_line(&xs, &ys), records })
}
