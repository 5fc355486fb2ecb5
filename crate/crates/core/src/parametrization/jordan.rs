//! Finite-depth certification that an attractor is a Jordan arc.
//!
//! Every cylinder `γ_j` is covered by the ball of radius `p_j·R` around
//! `S_j(c)`, where `c` is the chord midpoint and `R` bounds the distance
//! from `c` to the attractor. Two cylinders are disjoint once some pair of
//! their sub-covers separates.
//!
//! A pair inside one top-level cylinder `γ_i` is the `S_i`-image of a pair one
//! level up, and a non-adjacent pair separates iff all its descendant pairs
//! do. Hence checking the pairs whose addresses start with different letters
//! at depth `k` certifies all non-adjacent pairs at depth `k`.

use rayon::prelude::*;
use serde::Serialize;

use crate::address::Address;
use crate::analysis::{attractor_diameter, chord_radius};
use crate::config::{Config, SEPARATION_RESOLUTION, SHARED_ENDPOINT_TOL};
use crate::error::Result;
use crate::parametrization::diameter_depth;
use crate::similarity::{Point, Similarity};
use crate::zipper::Zipper;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum JordanVerdict {
    VerifiedToDepth { depth: usize },
    ViolationAt { first: Address, second: Address },
    Inconclusive { depth: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JordanCertificate {
    pub verdict: JordanVerdict,
    pub depth: usize,
    /// Smallest certified separation among the scanned non-adjacent pairs.
    pub margin: Option<f64>,
    /// Largest gap between the end of one cylinder and the start of the next.
    pub endpoint_gap: f64,
    pub pairs_scanned: u64,
    pub pairs_inconclusive: u64,
    pub diameter_hi: f64,
    pub cover_radius: f64,
}

impl JordanCertificate {
    pub fn is_verified(&self) -> bool {
        matches!(self.verdict, JordanVerdict::VerifiedToDepth { .. })
    }

    pub fn is_violation(&self) -> bool {
        matches!(self.verdict, JordanVerdict::ViolationAt { .. })
    }
}

/// Cylinders of one depth, indexed lexicographically by address.
struct Level {
    maps: Vec<Similarity>,
    centers: Vec<Point>,
    positions: Vec<usize>,
}

struct Scan<'a> {
    zipper: &'a Zipper,
    levels: Vec<Level>,
    radius: f64,
    mid: Point,
    margin: f64,
    budget: u64,
}

#[derive(Debug, Default, Clone, Copy)]
struct RowOutcome {
    min_sep: f64,
    violation: Option<usize>,
    scanned: u64,
    inconclusive: u64,
}

enum PairResult {
    Separated(f64),
    Violation,
    Inconclusive(f64),
}

fn separation(c1: &Point, r1: f64, c2: &Point, r2: f64) -> f64 {
    c1.distance(c2) - r1 - r2
}

impl<'a> Scan<'a> {
    fn build(zipper: &'a Zipper, depth: usize, radius: f64, margin: f64, budget: u64) -> Scan<'a> {
        let m = zipper.m();
        let mid = zipper.first_vertex().midpoint(zipper.last_vertex());
        let dim = zipper.dim();
        let identity = Similarity::homothety(0.5, Point::origin(dim)).expect("valid ratio");
        let mut levels = vec![Level { maps: vec![identity], centers: vec![mid.clone()], positions: vec![0] }];
        // The root map is a placeholder; only depths ≥ 1 are read.
        let mut reversed = vec![false];
        for d in 1..=depth {
            let prev = &levels[d - 1];
            let n = prev.positions.len() * m;
            let mut maps = Vec::with_capacity(n);
            let mut positions = Vec::with_capacity(n);
            let mut rev = Vec::with_capacity(n);
            for (idx, pos) in prev.positions.iter().enumerate() {
                for l in 0..m {
                    let map = if d == 1 {
                        zipper.map(l).clone()
                    } else {
                        prev.maps[idx].compose(zipper.map(l)).expect("same dimension")
                    };
                    maps.push(map);
                    let rank = if reversed[idx] { m - 1 - l } else { l };
                    positions.push(pos * m + rank);
                    rev.push(reversed[idx] ^ zipper.signature().reverses(l));
                }
            }
            let centers = maps.iter().map(|s| s.apply_unchecked(&mid)).collect();
            levels.push(Level { maps, centers, positions });
            reversed = rev;
        }
        Scan { zipper, levels, radius, mid, margin, budget }
    }

    fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    fn m(&self) -> usize {
        self.zipper.m()
    }

    fn ball(&self, map: &Similarity) -> (Point, f64) {
        (map.apply_unchecked(&self.mid), map.ratio() * self.radius)
    }

    /// Depth-first refinement of one pair of cylinders.
    fn resolve(&self, a: &Similarity, b: &Similarity) -> PairResult {
        let mut stack = vec![(a.clone(), b.clone())];
        let mut min_sep = f64::INFINITY;
        let mut expanded = 0u64;
        let mut stalled = false;
        while let Some((x, y)) = stack.pop() {
            let (cx, rx) = self.ball(&x);
            let (cy, ry) = self.ball(&y);
            let sep = separation(&cx, rx, &cy, ry);
            if sep > self.margin {
                min_sep = min_sep.min(sep);
                continue;
            }
            if rx < SEPARATION_RESOLUTION && ry < SEPARATION_RESOLUTION {
                let sample = x.apply_unchecked(self.zipper.first_vertex());
                if sep <= 0.0 && sample.distance(&cy) <= ry + 2.0 * rx {
                    return PairResult::Violation;
                }
                stalled = true;
                continue;
            }
            expanded += 1;
            if expanded > self.budget {
                return PairResult::Inconclusive(min_sep);
            }
            // Split the larger cover; nearest child pairs are explored first.
            let mut kids: Vec<(f64, Similarity, Similarity)> = (0..self.m())
                .map(|l| {
                    let (nx, ny) = if rx >= ry {
                        (x.compose(self.zipper.map(l)).expect("same dimension"), y.clone())
                    } else {
                        (x.clone(), y.compose(self.zipper.map(l)).expect("same dimension"))
                    };
                    let d = nx.apply_unchecked(&self.mid).distance(&ny.apply_unchecked(&self.mid));
                    (d, nx, ny)
                })
                .collect();
            kids.sort_by(|p, q| q.0.total_cmp(&p.0));
            stack.extend(kids.into_iter().map(|(_, nx, ny)| (nx, ny)));
        }
        if stalled {
            PairResult::Inconclusive(min_sep)
        } else {
            PairResult::Separated(min_sep)
        }
    }

    /// All pairs `(a, B)` with `B` at full depth and a larger first letter,
    /// visited in lexicographic order of `B`.
    fn scan_row(&self, a: usize) -> RowOutcome {
        let k = self.depth();
        let m = self.m();
        let top_a = a / m.pow((k - 1) as u32);
        let (ca, ra) = (&self.levels[k].centers[a], self.levels[k].maps[a].ratio() * self.radius);
        let pos_a = self.levels[k].positions[a];
        let mut out = RowOutcome { min_sep: f64::INFINITY, ..RowOutcome::default() };
        // (depth, lexicographic index), popped in lexicographic order.
        let mut stack: Vec<(usize, usize)> = ((top_a + 1)..m).rev().map(|l| (1, l)).collect();
        while let Some((d, b)) = stack.pop() {
            let level = &self.levels[d];
            let rb = level.maps[b].ratio() * self.radius;
            let sep = separation(ca, ra, &level.centers[b], rb);
            if sep > self.margin {
                out.min_sep = out.min_sep.min(sep);
                continue;
            }
            if d < k {
                stack.extend((0..m).rev().map(|l| (d + 1, b * m + l)));
                continue;
            }
            if level.positions[b].abs_diff(pos_a) == 1 {
                continue;
            }
            out.scanned += 1;
            match self.resolve(&self.levels[k].maps[a], &level.maps[b]) {
                PairResult::Separated(s) => out.min_sep = out.min_sep.min(s),
                PairResult::Inconclusive(s) => {
                    out.min_sep = out.min_sep.min(s);
                    out.inconclusive += 1;
                }
                PairResult::Violation => {
                    out.violation = Some(b);
                    return out;
                }
            }
        }
        out
    }
}

fn address_of(lex: usize, depth: usize, m: usize) -> Address {
    let mut letters = vec![0u8; depth];
    let mut r = lex;
    for slot in letters.iter_mut().rev() {
        *slot = (r % m) as u8;
        r /= m;
    }
    Address::from_indices(letters)
}

/// Certifies that non-adjacent depth-`depth` cylinders are disjoint, with
/// covers separated by more than `margin`.
pub fn jordan_check(zipper: &Zipper, depth: usize, margin: f64, config: &Config) -> Result<JordanCertificate> {
    let m = zipper.m();
    config.check_nodes(m, depth)?;
    let diameter_hi = attractor_diameter(zipper, diameter_depth(m, 4096), config)?.hi;
    let cover_radius = chord_radius(zipper, diameter_depth(m, 4096), diameter_hi, config)?;

    let endpoint_gap =
        zipper.cylinders(depth, config)?.windows(2).map(|w| w[0].end.max_abs_diff(&w[1].start)).fold(0.0, f64::max);

    let mut cert = JordanCertificate {
        verdict: JordanVerdict::VerifiedToDepth { depth },
        depth,
        margin: None,
        endpoint_gap,
        pairs_scanned: 0,
        pairs_inconclusive: 0,
        diameter_hi,
        cover_radius,
    };
    if depth == 0 {
        return Ok(cert);
    }

    let scan = Scan::build(zipper, depth, cover_radius, margin, config.refine_budget);
    let count = m.pow(depth as u32);
    let run = || (0..count).into_par_iter().map(|a| scan.scan_row(a)).collect::<Vec<_>>();
    let rows = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(run))
            .unwrap_or_else(|_| run()),
        None => run(),
    };

    let mut min_sep = f64::INFINITY;
    for (a, row) in rows.iter().enumerate() {
        cert.pairs_scanned += row.scanned;
        cert.pairs_inconclusive += row.inconclusive;
        min_sep = min_sep.min(row.min_sep);
        if let Some(b) = row.violation {
            if !cert.is_violation() {
                cert.verdict =
                    JordanVerdict::ViolationAt { first: address_of(a, depth, m), second: address_of(b, depth, m) };
            }
        }
    }
    cert.margin = min_sep.is_finite().then_some(min_sep);
    if !cert.is_violation() && (cert.pairs_inconclusive > 0 || !(endpoint_gap <= SHARED_ENDPOINT_TOL)) {
        cert.verdict = JordanVerdict::Inconclusive { depth };
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn koch_verified_to_depth_four() {
        let cert = jordan_check(&corpus::koch(), 4, 0.0, &Config::default()).unwrap();
        assert_eq!(cert.verdict, JordanVerdict::VerifiedToDepth { depth: 4 });
        assert!(cert.margin.unwrap() > 0.0);
        assert!(cert.endpoint_gap <= 1e-9);
    }

    #[test]
    fn linear_zipper_verified() {
        for depth in 1..=6 {
            let cert = jordan_check(&corpus::linear_third(), depth, 0.0, &Config::default()).unwrap();
            assert!(cert.is_verified(), "{cert:?}");
        }
    }

    #[test]
    fn levy_violates() {
        let cert = jordan_check(&corpus::levy(), 10, 0.0, &Config::default()).unwrap();
        let JordanVerdict::ViolationAt { first, second } = &cert.verdict else {
            panic!("expected a violation, got {cert:?}");
        };
        assert_eq!(first.len(), 10);
        assert!(!first.is_prefix_of(second) && !second.is_prefix_of(first));
    }

    #[test]
    fn verdict_is_thread_independent() {
        let levy = corpus::levy();
        let one = jordan_check(&levy, 8, 0.0, &Config { threads: Some(1), ..Config::default() }).unwrap();
        let many = jordan_check(&levy, 8, 0.0, &Config { threads: Some(4), ..Config::default() }).unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn lexicographic_addresses() {
        assert_eq!(address_of(5, 3, 2).to_string(), "212");
        assert_eq!(address_of(0, 2, 4).to_string(), "11");
    }
}
