//! Point-set diameters and range-diameter queries along a polyline.

use crate::similarity::Point;

type P2 = [f64; 2];

fn cross(o: P2, a: P2, b: P2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn dist2(a: P2, b: P2) -> f64 {
    let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
    dx * dx + dy * dy
}

/// Convex hull by Andrew's monotone chain; collinear points are dropped.
pub fn convex_hull_2d(mut pts: Vec<P2>) -> Vec<P2> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<P2> = Vec::with_capacity(pts.len() + 1);
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Largest pairwise distance of a small point set.
fn brute_diameter_2d(pts: &[P2]) -> f64 {
    let mut best = 0.0f64;
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            best = best.max(dist2(a, b));
        }
    }
    best.sqrt()
}

/// Diameter of a finite point set by brute force. Used as a test oracle and
/// for small sets in dimension ≥ 3.
pub fn brute_force_diameter(points: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max(a.distance(b));
        }
    }
    best
}

/// Diameter of a finite point set.
pub fn diameter(points: &[Point]) -> f64 {
    match points.first().map(Point::dim) {
        None => 0.0,
        Some(1) => {
            let (lo, hi) =
                points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[0]), hi.max(p[0])));
            hi - lo
        }
        Some(2) => {
            let hull = convex_hull_2d(points.iter().map(|p| [p[0], p[1]]).collect());
            brute_diameter_2d(&hull)
        }
        Some(_) => brute_force_diameter(points),
    }
}

#[derive(Debug, Clone)]
enum Extent {
    /// Convex hull; 1-D points are embedded as `(x, 0)`.
    Planar(Vec<P2>),
    /// Extreme points along each axis plus the bounding box.
    Spatial { reps: Vec<Point>, lo: Vec<f64>, hi: Vec<f64> },
}

impl Extent {
    fn of_points(points: &[&Point]) -> Extent {
        let n = points[0].dim();
        if n <= 2 {
            let pts = points.iter().map(|p| [p[0], if n == 2 { p[1] } else { 0.0 }]).collect();
            return Extent::Planar(convex_hull_2d(pts));
        }
        let mut lo = vec![f64::INFINITY; n];
        let mut hi = vec![f64::NEG_INFINITY; n];
        let mut reps: Vec<Point> = Vec::with_capacity(2 * n);
        for axis in 0..n {
            let min = points.iter().min_by(|a, b| a[axis].total_cmp(&b[axis])).unwrap();
            let max = points.iter().max_by(|a, b| a[axis].total_cmp(&b[axis])).unwrap();
            lo[axis] = min[axis];
            hi[axis] = max[axis];
            for p in [min, max] {
                if !reps.iter().any(|r| r == *p) {
                    reps.push((*p).clone());
                }
            }
        }
        Extent::Spatial { reps, lo, hi }
    }

    fn merge<'a>(parts: impl Iterator<Item = &'a Extent>) -> Extent {
        let parts: Vec<&Extent> = parts.collect();
        match parts[0] {
            Extent::Planar(_) => {
                let pts = parts
                    .iter()
                    .flat_map(|e| match e {
                        Extent::Planar(h) => h.iter().copied(),
                        Extent::Spatial { .. } => unreachable!("mixed extents"),
                    })
                    .collect();
                Extent::Planar(convex_hull_2d(pts))
            }
            Extent::Spatial { .. } => {
                let refs: Vec<&Point> = parts
                    .iter()
                    .flat_map(|e| match e {
                        Extent::Spatial { reps, .. } => reps.iter(),
                        Extent::Planar(_) => unreachable!("mixed extents"),
                    })
                    .collect();
                let mut merged = Extent::of_points(&refs);
                if let Extent::Spatial { lo, hi, .. } = &mut merged {
                    for e in &parts {
                        if let Extent::Spatial { lo: l2, hi: h2, .. } = e {
                            for k in 0..lo.len() {
                                lo[k] = lo[k].min(l2[k]);
                                hi[k] = hi[k].max(h2[k]);
                            }
                        }
                    }
                }
                merged
            }
        }
    }

    /// `(lower, upper)` bounds on the diameter of the underlying points;
    /// exact in dimension ≤ 2.
    fn diameter(&self) -> (f64, f64) {
        match self {
            Extent::Planar(h) => {
                let d = brute_diameter_2d(h);
                (d, d)
            }
            Extent::Spatial { reps, lo, hi } => {
                let d = brute_force_diameter(reps);
                let diag = lo.iter().zip(hi).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt();
                (d, diag.max(d))
            }
        }
    }
}

/// Hierarchical extents of a depth-`D` polyline, aligned with the cylinder
/// tree: node `(d, r)` holds the extent of the vertices of the `r`-th
/// depth-`d` cylinder. Any contiguous vertex range decomposes into at most
/// `2(m−1)D` nodes.
#[derive(Debug, Clone)]
pub struct ArcIndex {
    m: usize,
    depth: usize,
    vertices: Vec<Point>,
    levels: Vec<Vec<Extent>>,
}

impl ArcIndex {
    /// `vertices` must be the `m^depth + 1` polyline points in arc order.
    pub fn new(vertices: Vec<Point>, m: usize, depth: usize) -> Self {
        assert_eq!(vertices.len(), m.pow(depth as u32) + 1, "polyline length");
        let mut levels: Vec<Vec<Extent>> = Vec::with_capacity(depth + 1);
        let finest: Vec<Extent> = vertices.windows(2).map(|w| Extent::of_points(&[&w[0], &w[1]])).collect();
        levels.push(finest);
        for _ in 0..depth {
            let below = levels.last().unwrap();
            let next = below.chunks(m).map(|c| Extent::merge(c.iter())).collect();
            levels.push(next);
        }
        levels.reverse();
        ArcIndex { m, depth, vertices, levels }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex index range `[first, last]` of the depth-`d` cylinder at `position`.
    pub fn cylinder_span(&self, d: usize, position: usize) -> (usize, usize) {
        let w = self.m.pow((self.depth - d) as u32);
        (position * w, (position + 1) * w)
    }

    /// Diameter bounds of the vertices of the depth-`d` cylinder at `position`.
    pub fn cylinder_diameter(&self, d: usize, position: usize) -> (f64, f64) {
        self.levels[d][position].diameter()
    }

    fn collect<'a>(&'a self, d: usize, r: usize, i: usize, j: usize, out: &mut Vec<&'a Extent>) {
        let (a, b) = self.cylinder_span(d, r);
        if b <= i || a >= j {
            return;
        }
        if a >= i && b <= j {
            out.push(&self.levels[d][r]);
            return;
        }
        for c in 0..self.m {
            self.collect(d + 1, r * self.m + c, i, j, out);
        }
    }

    /// Diameter bounds of vertices `first..=last`.
    pub fn range_diameter(&self, first: usize, last: usize) -> (f64, f64) {
        if last <= first {
            return (0.0, 0.0);
        }
        let mut parts = Vec::new();
        self.collect(0, 0, first, last, &mut parts);
        Extent::merge(parts.into_iter()).diameter()
    }

    /// Diameter bounds of the union of depth-`d` cylinders `start..=j`, for
    /// every `j ≥ start`.
    pub fn prefix_diameters(&self, d: usize, start: usize) -> Vec<(f64, f64)> {
        let cells = &self.levels[d];
        let mut acc = cells[start].clone();
        let mut out = Vec::with_capacity(cells.len() - start);
        out.push(acc.diameter());
        for cell in &cells[start + 1..] {
            acc = Extent::merge([&acc, cell].into_iter());
            out.push(acc.diameter());
        }
        out
    }
}
