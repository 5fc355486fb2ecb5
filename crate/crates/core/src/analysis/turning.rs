//! The bounded-turning constant `M = sup |γ_xy| / ‖x − y‖`.
//!
//! The lower bound comes from vertex pairs of a polyline (exact attractor
//! points, hull-exact subarc diameters) and from seeded random parameter
//! pairs. The optional upper bound is a best-first branch and bound over pairs
//! of cylinders `(X, Y)`, `X` before `Y`:
//!
//! ```text
//! sup_{x∈X, y∈Y} |γ_xy|/‖x−y‖ ≤ |γ from start(X) to end(Y)| / dist(X, Y)
//! ```
//!
//! Pairs inside one top-level cylinder are similar copies of pairs one level
//! up, so only pairs in different top-level cylinders are searched. For two
//! consecutive top-level cylinders `A`, `B` touching at `w`, if the similarity
//! `T = S_{A_k}∘S_A⁻¹` equals `S_{B_l}∘S_B⁻¹`, where `A_k` and `B_l` are the
//! children at `w`, then `A_k × B_l = T(A × B)` carries the same ratios and
//! the search drops it; otherwise no finite bound is possible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{chord_radius, is_segment, Attractor};
use crate::config::{Config, TURNING_GAP};
use crate::error::{Error, Result};
use crate::parametrization::diameter_depth;
use crate::similarity::Point;
use crate::zipper::{Cylinder, LinearZipper, Zipper};

#[derive(Debug, Clone, PartialEq)]
pub struct TurningOptions {
    /// Depth of the polyline index used for subarc diameters.
    pub depth: usize,
    /// Random parameter pairs on top of the vertex pairs.
    pub samples: usize,
    /// Run the branch and bound for a certified upper bound.
    pub certify: bool,
    /// Index depth for the branch and bound; defaults to the deepest with at
    /// most `2^18` cylinders.
    pub certify_depth: Option<usize>,
}

impl TurningOptions {
    pub fn new(depth: usize, samples: usize) -> Self {
        TurningOptions { depth, samples, certify: false, certify_depth: None }
    }

    pub fn certified(mut self) -> Self {
        self.certify = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Certification {
    NotRequested,
    /// Collinear vertices in monotone order: the attractor is a segment.
    Segment,
    Certified {
        items: u64,
    },
    BudgetExhausted {
        items: u64,
    },
    /// Two consecutive top-level cylinders meet without a similarity relating
    /// them to their touching children.
    UnboundedTouching {
        first: usize,
        second: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TurningReport {
    /// Largest certified lower bound on `|γ_xy| / ‖x − y‖` seen; at least 1.
    pub m_lower: f64,
    pub m_certified_upper: Option<f64>,
    pub depth: usize,
    /// Depth of the polyline whose vertex pairs were all scanned.
    pub vertex_depth: usize,
    /// Parameters realizing `m_lower`.
    pub argmax_pair: (f64, f64),
    pub pairs_evaluated: u64,
    /// Distinct vertex parameters mapped to the same point.
    pub coincident_pairs: u64,
    pub certification: Certification,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Best {
    ratio: f64,
    t1: f64,
    t2: f64,
}

impl Best {
    const NONE: Best = Best { ratio: f64::NEG_INFINITY, t1: 0.0, t2: 1.0 };

    /// Larger ratio wins; ties go to the lexicographically smaller pair.
    fn max(self, other: Best) -> Best {
        match self.ratio.total_cmp(&other.ratio) {
            Ordering::Greater => self,
            Ordering::Less => other,
            Ordering::Equal => {
                if (other.t1, other.t2) < (self.t1, self.t2) {
                    other
                } else {
                    self
                }
            }
        }
    }
}

fn run_parallel<T: Send>(config: &Config, job: impl FnOnce() -> T + Send) -> T {
    match config.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(job),
            Err(_) => job(),
        },
        None => job(),
    }
}

/// Deepest `d ≤ cap` with all `C(m^d + 1, 2)` vertex pairs within budget.
fn vertex_depth(m: usize, cap: usize, budget: u64) -> usize {
    let mut d = 0;
    while d < cap {
        let n = (m as u128).pow(d as u32 + 1) + 1;
        if n * (n - 1) / 2 > budget as u128 {
            break;
        }
        d += 1;
    }
    d
}

/// Bounded-turning report for `γ` with parameter space `linear`.
pub fn bounded_turning_constant(
    zipper: &Zipper,
    linear: &LinearZipper,
    options: &TurningOptions,
    config: &Config,
) -> Result<TurningReport> {
    let attractor = Attractor::new(zipper, linear, options.depth, config)?;
    turning_for(&attractor, options, config)
}

/// As [`bounded_turning_constant`], reusing a prepared attractor.
pub fn turning_for(attractor: &Attractor, options: &TurningOptions, config: &Config) -> Result<TurningReport> {
    if options.samples == 0 {
        return Err(Error::Spec { field: "samples".into(), message: "must be at least 1".into() });
    }
    let zipper = attractor.zipper();
    let m = zipper.m();
    let depth = attractor.depth();
    let index = attractor.index();
    let params = attractor.vertex_params();

    let dv = vertex_depth(m, depth, config.pair_budget);
    let stride = m.pow((depth - dv) as u32);
    let n_cells = m.pow(dv as u32);
    let rows: Vec<(Best, u64, u64)> = run_parallel(config, || {
        (0..n_cells)
            .into_par_iter()
            .map(|i| {
                let mut best = Best::NONE;
                let mut coincident = 0u64;
                let vi = &index.vertices()[i * stride];
                for (k, (lo, _)) in index.prefix_diameters(dv, i).into_iter().enumerate() {
                    let j = (i + k + 1) * stride;
                    let d = vi.distance(&index.vertices()[j]);
                    if d == 0.0 {
                        coincident += 1;
                        continue;
                    }
                    best = best.max(Best { ratio: lo / d, t1: params[i * stride], t2: params[j] });
                }
                (best, (n_cells - i) as u64, coincident)
            })
            .collect()
    });
    let mut best = Best { ratio: 1.0, t1: 0.0, t2: 1.0 };
    let mut pairs = 0u64;
    let mut coincident_pairs = 0u64;
    for (b, n, c) in rows {
        best = best.max(b);
        pairs += n;
        coincident_pairs += c;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut sample_pairs = Vec::with_capacity(options.samples);
    while sample_pairs.len() < options.samples {
        let (a, b): (f64, f64) = (rng.gen(), rng.gen());
        if a != b {
            sample_pairs.push((a.min(b), a.max(b)));
        }
    }
    let tol = config.eval_tol;
    let sampled: Vec<Result<Best>> = run_parallel(config, || {
        sample_pairs
            .par_iter()
            .map(|&(t1, t2)| {
                let x = attractor.evaluate(t1, tol)?;
                let y = attractor.evaluate(t2, tol)?;
                let lo = attractor.subarc_diameter(t1, t2)?.lo;
                Ok(Best { ratio: lo / (x.distance(&y) + 2.0 * tol), t1, t2 })
            })
            .collect()
    });
    for b in sampled {
        best = best.max(b?);
        pairs += 1;
    }

    let mut report = TurningReport {
        m_lower: best.ratio.max(1.0),
        m_certified_upper: None,
        depth,
        vertex_depth: dv,
        argmax_pair: (best.t1, best.t2),
        pairs_evaluated: pairs,
        coincident_pairs,
        certification: Certification::NotRequested,
    };
    if is_segment(zipper) {
        report.m_lower = 1.0;
        report.m_certified_upper = Some(1.0);
        report.certification = Certification::Segment;
        return Ok(report);
    }
    if options.certify {
        let cdepth = options.certify_depth.unwrap_or_else(|| diameter_depth(m, 1 << 18));
        let fine = if cdepth == depth {
            attractor.clone()
        } else {
            Attractor::new(zipper, attractor.linear(), cdepth, config)?
        };
        let (upper, lower, certification) = certify(&fine, report.m_lower, config)?;
        report.m_certified_upper = upper;
        report.m_lower = report.m_lower.max(lower);
        report.certification = certification;
    }
    Ok(report)
}

struct Item {
    upper: f64,
    seq: u64,
    x: Cylinder,
    y: Cylinder,
}

impl PartialEq for Item {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Item {}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper.total_cmp(&other.upper).then(other.seq.cmp(&self.seq))
    }
}

struct Bounds<'a> {
    attractor: &'a Attractor,
    radius: f64,
}

impl Bounds<'_> {
    /// Vertex span of the cylinder, or of its ancestor at the index depth.
    fn span(&self, c: &Cylinder) -> (usize, usize) {
        let index = self.attractor.index();
        let d = c.depth();
        if d <= index.depth() {
            index.cylinder_span(d, c.position)
        } else {
            let up = index.m().pow((d - index.depth()) as u32);
            index.cylinder_span(index.depth(), c.position / up)
        }
    }

    /// `(upper, lower)` bounds on the ratio over `X × Y`.
    fn evaluate(&self, x: &Cylinder, y: &Cylinder) -> (f64, f64) {
        let (first, _) = self.span(x);
        let (_, last) = self.span(y);
        let range = self.attractor.range_bounds(first, last);
        let gap = x.center().distance(&y.center()) - (x.ratio + y.ratio) * self.radius;
        let upper = if gap > 0.0 { range.hi / gap } else { f64::INFINITY };
        let fine = self.attractor.index().depth();
        let lower = if x.depth() <= fine && y.depth() <= fine {
            let d = x.start.distance(&y.end);
            if d > 0.0 {
                range.lo / d
            } else {
                0.0
            }
        } else {
            0.0
        };
        (upper, lower)
    }
}

/// `T(p) = S_child(S_parent⁻¹(p))` on the frame `{w, w + s·e_k}`.
fn frame_images(zipper: &Zipper, parent: &Cylinder, child: &Cylinder, frame: &[Point]) -> Option<Vec<Point>> {
    let sp = zipper.compose_address(&parent.address).ok()?;
    let sc = zipper.compose_address(&child.address).ok()?;
    let crate::zipper::AddressMap::Map(sp) = sp else { return None };
    let crate::zipper::AddressMap::Map(sc) = sc else { return None };
    frame.iter().map(|p| sp.apply_inverse(p).ok().map(|q| sc.apply_unchecked(&q))).collect()
}

fn zoom_matches(zipper: &Zipper, a: &Cylinder, b: &Cylinder, scale: f64) -> bool {
    let ka = zipper.children(a).pop().expect("m ≥ 2");
    let kb = zipper.children(b).swap_remove(0);
    let w = a.end.clone();
    let mut frame = vec![w.clone()];
    for k in 0..zipper.dim() {
        let mut c = w.coords().to_vec();
        c[k] += scale;
        frame.push(Point::new(c));
    }
    match (frame_images(zipper, a, &ka, &frame), frame_images(zipper, b, &kb, &frame)) {
        (Some(p), Some(q)) => p.iter().zip(&q).all(|(u, v)| u.max_abs_diff(v) <= 1e-9 * scale),
        _ => false,
    }
}

/// Returns `(certified upper, improved lower, status)`.
fn certify(attractor: &Attractor, lower: f64, config: &Config) -> Result<(Option<f64>, f64, Certification)> {
    let zipper = attractor.zipper();
    let fine = attractor.index().depth();
    let radius = chord_radius(zipper, fine.min(diameter_depth(zipper.m(), 4096)), attractor.diameter().hi, config)?;
    let bounds = Bounds { attractor, radius };
    let scale = attractor.diameter().hi;
    let top = zipper.children(&zipper.root_cylinder());

    let mut start: Vec<(Cylinder, Cylinder)> = Vec::new();
    for a in 0..top.len() {
        for b in a + 1..top.len() {
            if b > a + 1 {
                start.push((top[a].clone(), top[b].clone()));
                continue;
            }
            if !zoom_matches(zipper, &top[a], &top[b], scale) {
                return Ok((None, lower, Certification::UnboundedTouching { first: a + 1, second: b + 1 }));
            }
            let ka = zipper.children(&top[a]);
            let kb = zipper.children(&top[b]);
            for x in &ka[..ka.len() - 1] {
                start.push((x.clone(), top[b].clone()));
            }
            for y in &kb[1..] {
                start.push((ka[ka.len() - 1].clone(), y.clone()));
            }
        }
    }

    let mut best = lower;
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let mut push = |heap: &mut BinaryHeap<Item>, best: &mut f64, x: Cylinder, y: Cylinder| {
        let (upper, lo) = bounds.evaluate(&x, &y);
        *best = best.max(lo);
        heap.push(Item { upper, seq, x, y });
        seq += 1;
    };
    for (x, y) in start {
        push(&mut heap, &mut best, x, y);
    }
    let mut items = 0u64;
    while let Some(item) = heap.pop() {
        let threshold = best * (1.0 + TURNING_GAP);
        if item.upper <= threshold {
            return Ok((Some(item.upper.max(best)), best, Certification::Certified { items }));
        }
        items += 1;
        if items > config.certify_budget {
            return Ok((None, best, Certification::BudgetExhausted { items }));
        }
        if item.x.ratio >= item.y.ratio {
            for c in zipper.children(&item.x) {
                push(&mut heap, &mut best, c, item.y.clone());
            }
        } else {
            for c in zipper.children(&item.y) {
                push(&mut heap, &mut best, item.x.clone(), c);
            }
        }
    }
    Ok((Some(best), best, Certification::Certified { items }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn segment_has_constant_one() {
        let z = corpus::linear_half();
        let lin = LinearZipper::for_zipper(&z);
        let r =
            bounded_turning_constant(&z, &lin, &TurningOptions::new(8, 50).certified(), &Config::default()).unwrap();
        assert_eq!(r.m_lower, 1.0);
        assert!(r.m_certified_upper.unwrap() <= 1.0 + 1e-9);
        assert_eq!(r.certification, Certification::Segment);
    }

    #[test]
    fn koch_lower_bound_in_range() {
        let z = corpus::koch();
        let lin = LinearZipper::for_zipper(&z);
        let r = bounded_turning_constant(&z, &lin, &TurningOptions::new(6, 200), &Config::default()).unwrap();
        assert!(r.m_lower > 1.0 && r.m_lower < 3.0, "{r:?}");
        assert!(r.argmax_pair.0 < r.argmax_pair.1);
    }

    #[test]
    fn zero_samples_rejected() {
        let z = corpus::koch();
        let lin = LinearZipper::for_zipper(&z);
        assert!(bounded_turning_constant(&z, &lin, &TurningOptions::new(3, 0), &Config::default()).is_err());
    }

    #[test]
    fn vertex_depth_respects_budget() {
        assert_eq!(vertex_depth(4, 8, 1_000_000), 5);
        assert_eq!(vertex_depth(2, 3, 1_000_000), 3);
        assert_eq!(vertex_depth(4, 8, 10), 1);
    }
}
