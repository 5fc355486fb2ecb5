//! Self-similar zippers, linear zippers and cylinder geometry.
//!
//! A zipper is a system `S_1..S_m` of contracting similarities with vertices
//! `z_0..z_m` and signature `ε ∈ {0,1}^m` such that
//! `S_i(z_0) = z_{i-1+ε_i}` and `S_i(z_m) = z_{i-ε_i}`. A bit `ε_i = 1`
//! means `S_i` reverses the orientation of the arc.
//!
//! All orientation bookkeeping lives here: consumers get endpoint order from
//! [`Zipper::cylinder_endpoints`] or [`Zipper::cylinders`] and never recompute
//! parity themselves.

use std::fmt;

use nalgebra::DMatrix;

use crate::address::Address;
use crate::config::{Config, RATIO_EQ_TOL, VERTEX_TOL};
use crate::error::{Endpoint, Error, Result};
use crate::similarity::{similarity_from_segment_2d, Point, Similarity};

/// Orientation bits `ε_1..ε_m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Signature(Vec<bool>);

impl Signature {
    pub fn new(bits: Vec<bool>) -> Self {
        Signature(bits)
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        bits.iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::Spec { field: "signature".into(), message: format!("bit {other} is not 0 or 1") }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Signature)
    }

    pub fn zeros(m: usize) -> Self {
        Signature(vec![false; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `ε_i` for the zero-based map index `i`.
    pub fn reverses(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn bits(&self) -> Vec<u8> {
        self.0.iter().map(|&b| b as u8).collect()
    }

    /// Parity of `Σ ε_{j_t}` along an address.
    pub fn parity(&self, address: &Address) -> bool {
        address.indices().iter().fold(false, |acc, &l| acc ^ self.0[l as usize])
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, b) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", *b as u8)?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Signature{self}")
    }
}

#[derive(Debug, Clone)]
pub struct Zipper {
    maps: Vec<Similarity>,
    vertices: Vec<Point>,
    signature: Signature,
    worst_residual: f64,
}

/// `S_j` for an address: the empty address is kept symbolic instead of
/// materializing a ratio-one map.
#[derive(Debug, Clone)]
pub enum AddressMap {
    Identity,
    Map(Similarity),
}

impl AddressMap {
    pub fn ratio(&self) -> f64 {
        match self {
            AddressMap::Identity => 1.0,
            AddressMap::Map(s) => s.ratio(),
        }
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        match self {
            AddressMap::Identity => Ok(x.clone()),
            AddressMap::Map(s) => s.apply(x),
        }
    }
}

/// Endpoints of a cylinder in arc order.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderEnds {
    pub start: Point,
    pub end: Point,
    /// Whether `S_j` reverses orientation (odd parity).
    pub reversed: bool,
}

/// A cylinder subarc `γ_j` with its arc-ordered endpoints.
#[derive(Debug, Clone)]
pub struct Cylinder {
    pub address: Address,
    /// Position among the cylinders of the same depth, in arc order.
    pub position: usize,
    pub reversed: bool,
    pub ratio: f64,
    pub start: Point,
    pub end: Point,
}

impl Cylinder {
    pub fn depth(&self) -> usize {
        self.address.len()
    }

    pub fn center(&self) -> Point {
        self.start.midpoint(&self.end)
    }
}

/// Checks and assembles a zipper.
pub fn build_zipper(maps: Vec<Similarity>, vertices: Vec<Point>, signature: Signature) -> Result<Zipper> {
    Zipper::new(maps, vertices, signature)
}

/// Builds the planar zipper whose `i`-th map sends the chord `(z_0, z_m)` to
/// `(z_{i-1}, z_i)`, or to `(z_i, z_{i-1})` when `ε_i = 1`; `reflect[i]`
/// selects a mirror similarity.
pub fn zipper_from_vertices_2d(vertices: Vec<Point>, signature: Signature, reflect: &[bool]) -> Result<Zipper> {
    let m = signature.len();
    if vertices.len() != m + 1 {
        return Err(Error::LengthMismatch { field: "vertices", expected: m + 1, found: vertices.len() });
    }
    if reflect.len() != m {
        return Err(Error::LengthMismatch { field: "reflect", expected: m, found: reflect.len() });
    }
    let (z0, zm) = (&vertices[0], &vertices[m]);
    let maps = (0..m)
        .map(|i| {
            let (b0, b1) =
                if signature.reverses(i) { (&vertices[i + 1], &vertices[i]) } else { (&vertices[i], &vertices[i + 1]) };
            similarity_from_segment_2d(z0, zm, b0, b1, reflect[i]).map_err(|e| match e {
                Error::NonContracting { ratio, .. } => Error::NonContracting { index: i + 1, ratio },
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Zipper::new(maps, vertices, signature)
}

impl Zipper {
    pub fn new(maps: Vec<Similarity>, vertices: Vec<Point>, signature: Signature) -> Result<Self> {
        let m = maps.len();
        if m < 2 {
            return Err(Error::TooFewMaps(m));
        }
        if vertices.len() != m + 1 {
            return Err(Error::LengthMismatch { field: "vertices", expected: m + 1, found: vertices.len() });
        }
        if signature.len() != m {
            return Err(Error::LengthMismatch { field: "signature", expected: m, found: signature.len() });
        }
        let n = vertices[0].dim();
        for v in &vertices {
            if v.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.dim() });
            }
            if !v.is_finite() {
                return Err(Error::NonFinite("vertex"));
            }
        }
        for (i, s) in maps.iter().enumerate() {
            if s.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: s.dim() });
            }
            if !(s.ratio() > 0.0 && s.ratio() < 1.0) {
                return Err(Error::NonContracting { index: i + 1, ratio: s.ratio() });
            }
        }
        let mut worst_residual = 0.0f64;
        for (i, s) in maps.iter().enumerate() {
            let eps = signature.reverses(i) as usize;
            let checks = [
                (Endpoint::Start, &vertices[0], &vertices[i + eps]),
                (Endpoint::End, &vertices[m], &vertices[i + 1 - eps]),
            ];
            for (endpoint, from, to) in checks {
                let residual = s.apply_unchecked(from).max_abs_diff(to);
                if !(residual <= VERTEX_TOL) {
                    return Err(Error::VertexConditionViolated { index: i + 1, endpoint, residual });
                }
                worst_residual = worst_residual.max(residual);
            }
        }
        Ok(Zipper { maps, vertices, signature, worst_residual })
    }

    pub fn m(&self) -> usize {
        self.maps.len()
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn maps(&self) -> &[Similarity] {
        &self.maps
    }

    pub fn map(&self, i: usize) -> &Similarity {
        &self.maps[i]
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn first_vertex(&self) -> &Point {
        &self.vertices[0]
    }

    pub fn last_vertex(&self) -> &Point {
        &self.vertices[self.m()]
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.maps.iter().map(Similarity::ratio).collect()
    }

    pub fn max_ratio(&self) -> f64 {
        self.ratios().into_iter().fold(0.0, f64::max)
    }

    pub fn min_ratio(&self) -> f64 {
        self.ratios().into_iter().fold(1.0, f64::min)
    }

    /// Largest vertex-condition residual seen during validation.
    pub fn worst_residual(&self) -> f64 {
        self.worst_residual
    }

    /// Largest pairwise distance between vertices.
    pub fn vertex_spread(&self) -> f64 {
        let mut best = 0.0f64;
        for (a, p) in self.vertices.iter().enumerate() {
            for q in &self.vertices[a + 1..] {
                best = best.max(p.distance(q));
            }
        }
        best
    }

    /// `S_j = S_{j_1} ∘ … ∘ S_{j_k}`.
    pub fn compose_address(&self, address: &Address) -> Result<AddressMap> {
        address.check(self.m())?;
        let mut letters = address.indices().iter();
        let Some(&first) = letters.next() else {
            return Ok(AddressMap::Identity);
        };
        let mut acc = self.maps[first as usize].clone();
        for &l in letters {
            acc = acc.compose(&self.maps[l as usize])?;
        }
        Ok(AddressMap::Map(acc))
    }

    /// Applies `S_j` to `x` right to left, without composing matrices.
    pub fn apply_address(&self, address: &Address, x: &Point) -> Point {
        address.indices().iter().rev().fold(x.clone(), |p, &l| self.maps[l as usize].apply_unchecked(&p))
    }

    /// `(S_j(z_0), S_j(z_m))`, swapped when `S_j` reverses orientation, so
    /// that `start` precedes `end` along the arc.
    pub fn cylinder_endpoints(&self, address: &Address) -> Result<CylinderEnds> {
        address.check(self.m())?;
        let a = self.apply_address(address, self.first_vertex());
        let b = self.apply_address(address, self.last_vertex());
        let reversed = self.signature.parity(address);
        let (start, end) = if reversed { (b, a) } else { (a, b) };
        Ok(CylinderEnds { start, end, reversed })
    }

    /// Children of a cylinder, in arc order.
    pub fn children(&self, parent: &Cylinder) -> Vec<Cylinder> {
        let m = self.m();
        (0..m)
            .map(|rank| {
                // Arc-order rank → letter: reversed cylinders traverse their
                // children backwards.
                let letter = if parent.reversed { m - 1 - rank } else { rank };
                let address = parent.address.child(letter as u8);
                let ends = self.cylinder_endpoints(&address).expect("letter in range");
                Cylinder {
                    position: parent.position * m + rank,
                    reversed: ends.reversed,
                    ratio: parent.ratio * self.maps[letter].ratio(),
                    start: ends.start,
                    end: ends.end,
                    address,
                }
            })
            .collect()
    }

    pub fn root_cylinder(&self) -> Cylinder {
        Cylinder {
            address: Address::root(),
            position: 0,
            reversed: false,
            ratio: 1.0,
            start: self.first_vertex().clone(),
            end: self.last_vertex().clone(),
        }
    }

    /// All `m^depth` cylinders of the given depth in arc order.
    pub fn cylinders(&self, depth: usize, config: &Config) -> Result<Vec<Cylinder>> {
        config.check_nodes(self.m(), depth)?;
        let mut level = vec![self.root_cylinder()];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(level.len() * self.m());
            for i in 0..self.m() {
                let map = &self.maps[i];
                let flip = self.signature.reverses(i);
                let ordered: Box<dyn Iterator<Item = &Cylinder>> =
                    if flip { Box::new(level.iter().rev()) } else { Box::new(level.iter()) };
                for c in ordered {
                    let (a, b) = if flip { (&c.end, &c.start) } else { (&c.start, &c.end) };
                    let mut letters = Vec::with_capacity(c.address.len() + 1);
                    letters.push(i as u8);
                    letters.extend_from_slice(c.address.indices());
                    next.push(Cylinder {
                        address: Address::from_indices(letters),
                        position: next.len(),
                        reversed: c.reversed ^ flip,
                        ratio: map.ratio() * c.ratio,
                        start: map.apply_unchecked(a),
                        end: map.apply_unchecked(b),
                    });
                }
            }
            level = next;
        }
        Ok(level)
    }

    /// The `m^depth + 1` cylinder endpoints of the given depth in arc order.
    pub fn polyline(&self, depth: usize, config: &Config) -> Result<Vec<Point>> {
        config.check_nodes(self.m(), depth)?;
        let mut line = vec![self.first_vertex().clone(), self.last_vertex().clone()];
        for _ in 0..depth {
            let mut next = Vec::with_capacity((line.len() - 1) * self.m() + 1);
            for i in 0..self.m() {
                let map = &self.maps[i];
                let block: Box<dyn Iterator<Item = &Point>> =
                    if self.signature.reverses(i) { Box::new(line.iter().rev()) } else { Box::new(line.iter()) };
                // The first point of each later block repeats the shared vertex.
                let skip = usize::from(i > 0);
                next.extend(block.skip(skip).map(|p| map.apply_unchecked(p)));
            }
            line = next;
        }
        Ok(line)
    }

    /// The mirror image of this zipper under `x_last ↦ −x_last`.
    pub fn reflected(&self) -> Zipper {
        let n = self.dim();
        let mut r = DMatrix::identity(n, n);
        r[(n - 1, n - 1)] = -1.0;
        let flip = |p: &Point| {
            let mut c = p.coords().to_vec();
            c[n - 1] = -c[n - 1];
            Point::new(c)
        };
        let maps = self
            .maps
            .iter()
            .map(|s| {
                let o = &r * s.orthogonal() * &r;
                Similarity::new(s.ratio(), o, flip(&s.translation())).expect("reflection keeps validity")
            })
            .collect();
        let vertices = self.vertices.iter().map(flip).collect();
        Zipper::new(maps, vertices, self.signature.clone()).expect("reflection keeps vertex conditions")
    }
}

/// A zipper on `[0, 1]` with knots `0 = t_0 < … < t_m = 1`. Its attractor is
/// the segment, and it defines the parameter space of a structural
/// parametrization.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearZipper {
    knots: Vec<f64>,
    signature: Signature,
}

impl LinearZipper {
    pub fn new(knots: Vec<f64>, signature: Signature) -> Result<Self> {
        let m = signature.len();
        if m < 2 {
            return Err(Error::TooFewMaps(m));
        }
        if knots.len() != m + 1 {
            return Err(Error::LengthMismatch { field: "knots", expected: m + 1, found: knots.len() });
        }
        if knots[0] != 0.0 || knots[m] != 1.0 || knots.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidKnots);
        }
        Ok(LinearZipper { knots, signature })
    }

    /// Knot gaps proportional to the given ratios: `t_i − t_{i−1} = p_i / Σp`.
    /// Ratios equal within [`RATIO_EQ_TOL`] give the uniform knots `i/m`.
    pub fn proportional(ratios: &[f64], signature: Signature) -> Result<Self> {
        let first = ratios.first().copied().unwrap_or(0.0);
        if ratios.iter().all(|&r| (r - first).abs() <= RATIO_EQ_TOL * first) {
            return LinearZipper::uniform(signature);
        }
        let total: f64 = ratios.iter().sum();
        let mut knots = Vec::with_capacity(ratios.len() + 1);
        let mut acc = 0.0;
        knots.push(0.0);
        for r in &ratios[..ratios.len().saturating_sub(1)] {
            acc += r;
            knots.push(acc / total);
        }
        knots.push(1.0);
        LinearZipper::new(knots, signature)
    }

    /// Default parameter space of a zipper: knots proportional to its ratios.
    pub fn for_zipper(zipper: &Zipper) -> Self {
        LinearZipper::proportional(&zipper.ratios(), zipper.signature().clone()).expect("ratios are positive")
    }

    pub fn uniform(signature: Signature) -> Result<Self> {
        let m = signature.len();
        let knots = (0..=m).map(|i| if i == m { 1.0 } else { i as f64 / m as f64 }).collect();
        LinearZipper::new(knots, signature)
    }

    pub fn m(&self) -> usize {
        self.signature.len()
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn width(&self, i: usize) -> f64 {
        self.knots[i + 1] - self.knots[i]
    }

    /// `T_i(s)` for zero-based `i`.
    pub fn forward(&self, i: usize, s: f64) -> f64 {
        let (lo, hi) = (self.knots[i], self.knots[i + 1]);
        if self.signature.reverses(i) {
            hi - (hi - lo) * s
        } else {
            lo + (hi - lo) * s
        }
    }

    /// `T_i^{-1}(t)`, clamped to `[0, 1]`.
    pub fn backward(&self, i: usize, t: f64) -> f64 {
        let (lo, hi) = (self.knots[i], self.knots[i + 1]);
        let s = if self.signature.reverses(i) { (hi - t) / (hi - lo) } else { (t - lo) / (hi - lo) };
        s.clamp(0.0, 1.0)
    }

    /// Knot interval holding `t`; knots belong to the lower interval except
    /// `t = 1`, which belongs to the last.
    pub fn interval_of(&self, t: f64) -> usize {
        let m = self.m();
        if t >= 1.0 {
            return m - 1;
        }
        // First i with t ≤ t_{i+1}.
        self.knots[1..].partition_point(|&k| k < t).min(m - 1)
    }

    /// `T_j(s)` applied right to left.
    pub fn forward_address(&self, address: &Address, s: f64) -> f64 {
        address.indices().iter().rev().fold(s, |acc, &l| self.forward(l as usize, acc))
    }

    /// The linear zipper as a 1-D [`Zipper`].
    pub fn to_zipper(&self) -> Zipper {
        let m = self.m();
        let maps = (0..m)
            .map(|i| {
                let w = self.width(i);
                let (o, t) = if self.signature.reverses(i) { (-1.0, self.knots[i + 1]) } else { (1.0, self.knots[i]) };
                Similarity::new(w, DMatrix::from_element(1, 1, o), Point::new(vec![t])).expect("knot gap in (0,1)")
            })
            .collect();
        let vertices = self.knots.iter().map(|&k| Point::new(vec![k])).collect();
        Zipper::new(maps, vertices, self.signature.clone()).expect("linear zipper satisfies vertex conditions")
    }

    /// Parameters of the depth-`depth` polyline vertices, increasing.
    pub fn vertex_params(&self, depth: usize, config: &Config) -> Result<Vec<f64>> {
        Ok(self.to_zipper().polyline(depth, config)?.iter().map(|p| p[0]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn segment_halves_are_valid() {
        let maps = vec![
            Similarity::homothety(0.5, Point::from([0.0])).unwrap(),
            Similarity::homothety(0.5, Point::from([0.5])).unwrap(),
        ];
        let z = build_zipper(maps, vec![[0.0].into(), [0.5].into(), [1.0].into()], Signature::zeros(2)).unwrap();
        assert_eq!(z.worst_residual(), 0.0);
    }

    #[test]
    fn koch_is_valid_and_wrong_signature_is_rejected() {
        let koch = corpus::koch();
        assert!(koch.worst_residual() < 1e-15);
        let err = Zipper::new(
            koch.maps().to_vec(),
            koch.vertices().to_vec(),
            Signature::new(vec![true, false, false, false]),
        )
        .unwrap_err();
        match err {
            Error::VertexConditionViolated { index, endpoint, residual } => {
                assert_eq!(index, 1);
                assert_eq!(endpoint, Endpoint::Start);
                assert!((residual - 1.0 / 3.0).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn length_and_count_errors() {
        let koch = corpus::koch();
        assert!(matches!(
            Zipper::new(koch.maps().to_vec(), koch.vertices().to_vec(), Signature::zeros(3)),
            Err(Error::LengthMismatch { field: "signature", .. })
        ));
        assert!(matches!(
            Zipper::new(koch.maps()[..1].to_vec(), koch.vertices()[..2].to_vec(), Signature::zeros(1)),
            Err(Error::TooFewMaps(1))
        ));
    }

    #[test]
    fn from_vertices_ratios_are_chords() {
        let ces = corpus::cesaro(0.5, 0.3);
        for r in ces.ratios() {
            assert!((r - 0.34f64.sqrt()).abs() < 1e-15);
        }
        let levy = corpus::levy();
        for r in levy.ratios() {
            assert!((r - 0.5f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn compose_address_examples() {
        let koch = corpus::koch();
        let one = koch.compose_address(&"1".parse().unwrap()).unwrap();
        assert!((one.ratio() - 1.0 / 3.0).abs() < 1e-16);
        let two = koch.compose_address(&"14".parse().unwrap()).unwrap();
        assert!((two.ratio() - 1.0 / 9.0).abs() < 1e-16);
        assert!(matches!(koch.compose_address(&Address::root()).unwrap(), AddressMap::Identity));
        assert!(koch.compose_address(&"5".parse().unwrap()).is_err());

        let lin = LinearZipper::new(vec![0.0, 0.5, 1.0], Signature::zeros(2)).unwrap().to_zipper();
        let AddressMap::Map(s) = lin.compose_address(&"22".parse().unwrap()).unwrap() else {
            panic!("non-empty address")
        };
        assert_eq!(s.ratio(), 0.25);
        assert_eq!(s.apply(&Point::from([0.0])).unwrap()[0], 0.75);
        assert_eq!(s.apply(&Point::from([1.0])).unwrap()[0], 1.0);
    }

    #[test]
    fn cylinder_endpoint_examples() {
        let koch = corpus::koch();
        let ends = koch.cylinder_endpoints(&"2".parse().unwrap()).unwrap();
        assert!(ends.start.max_abs_diff(&[1.0 / 3.0, 0.0].into()) < 1e-15);
        assert!(ends.end.max_abs_diff(&[0.5, 3f64.sqrt() / 6.0].into()) < 1e-15);
        let root = koch.cylinder_endpoints(&Address::root()).unwrap();
        assert_eq!(root.start, *koch.first_vertex());
        assert_eq!(root.end, *koch.last_vertex());

        let flipped = LinearZipper::new(vec![0.0, 0.5, 1.0], Signature::new(vec![true, true])).unwrap().to_zipper();
        let a: Address = "1".parse().unwrap();
        let ends = flipped.cylinder_endpoints(&a).unwrap();
        assert!(ends.reversed);
        assert_eq!(ends.start, flipped.map(0).apply(flipped.last_vertex()).unwrap());
        assert_eq!(ends.end, flipped.map(0).apply(flipped.first_vertex()).unwrap());
        assert_eq!(ends.start[0], 0.0);
    }

    #[test]
    fn polyline_small_cases() {
        let cfg = Config::default();
        let koch = corpus::koch();
        assert_eq!(koch.polyline(0, &cfg).unwrap(), vec![koch.first_vertex().clone(), koch.last_vertex().clone()]);
        let p1 = koch.polyline(1, &cfg).unwrap();
        assert_eq!(p1.len(), 5);
        for (p, v) in p1.iter().zip(koch.vertices()) {
            assert!(p.max_abs_diff(v) < 1e-15);
        }
        let lin = LinearZipper::new(vec![0.0, 0.5, 1.0], Signature::zeros(2)).unwrap();
        assert_eq!(lin.vertex_params(2, &cfg).unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn polyline_budget() {
        let cfg = Config { node_budget: 100, ..Config::default() };
        assert!(matches!(corpus::koch().polyline(4, &cfg), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn linear_interval_ties() {
        let lin = LinearZipper::new(vec![0.0, 0.5, 1.0], Signature::zeros(2)).unwrap();
        assert_eq!(lin.interval_of(0.0), 0);
        assert_eq!(lin.interval_of(0.5), 0);
        assert_eq!(lin.interval_of(0.50001), 1);
        assert_eq!(lin.interval_of(1.0), 1);
        assert!(LinearZipper::new(vec![0.0, 0.5, 0.5, 1.0], Signature::zeros(3)).is_err());
    }

    #[test]
    fn mixed_signature_cylinders_follow_the_arc() {
        let cfg = Config::default();
        let z = corpus::mixed();
        let cyl = z.cylinders(3, &cfg).unwrap();
        let line = z.polyline(3, &cfg).unwrap();
        assert_eq!(cyl.len() + 1, line.len());
        for (k, c) in cyl.iter().enumerate() {
            assert!(c.start.max_abs_diff(&line[k]) < 1e-12);
            assert!(c.end.max_abs_diff(&line[k + 1]) < 1e-12);
            let ends = z.cylinder_endpoints(&c.address).unwrap();
            assert!(ends.start.max_abs_diff(&c.start) < 1e-12);
            assert_eq!(ends.reversed, c.reversed);
        }
    }
}
