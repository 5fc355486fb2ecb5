//! Contracting similarities `x ↦ p·O·x + t` of `R^n`.
//!
//! A [`Similarity`] is stored in canonical form: the ratio `p`, the
//! orthogonal factor `O` and the translation `t`. Composition multiplies the
//! stored ratios directly and re-orthogonalizes `O` once its defect drifts
//! past [`REORTHOGONALIZE_THRESHOLD`], so deep compositions keep their shape.

use std::fmt;
use std::ops::Index;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Maximum allowed `max |OᵀO − I|` when constructing a similarity.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Orthogonality defect above which a composed factor is re-orthogonalized.
pub const REORTHOGONALIZE_THRESHOLD: f64 = 1e-12;

/// A point of `R^n`.
#[derive(Clone, PartialEq)]
pub struct Point(DVector<f64>);

impl serde::Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter())
    }
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(DVector::from_vec(coords))
    }

    pub fn origin(dim: usize) -> Self {
        Point(DVector::zeros(dim))
    }

    pub fn from_vector(v: DVector<f64>) -> Self {
        Point(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Euclidean distance.
    pub fn distance(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    /// Largest coordinate-wise absolute difference.
    pub fn max_abs_diff(&self, other: &Point) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        Point((&self.0 + &other.0) * 0.5)
    }

    /// `self + s·(other − self)`.
    pub fn lerp(&self, other: &Point, s: f64) -> Point {
        Point(&self.0 + (&other.0 - &self.0) * s)
    }
}

impl Index<usize> for Point {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point::new(v)
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(v: [f64; N]) -> Self {
        Point::new(v.to_vec())
    }
}

/// Largest entry of `|OᵀO − I|`.
pub fn orthogonality_defect(o: &DMatrix<f64>) -> f64 {
    let n = o.nrows();
    let g = o.transpose() * o;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - target).abs());
        }
    }
    worst
}

/// Nearest orthogonal matrix (polar factor `U·Vᵀ` of the SVD).
fn reorthogonalize(o: DMatrix<f64>) -> DMatrix<f64> {
    let svd = o.svd(true, true);
    match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => u * v_t,
        _ => unreachable!("SVD requested with both factors"),
    }
}

#[derive(Clone, PartialEq)]
pub struct Similarity {
    ratio: f64,
    orthogonal: DMatrix<f64>,
    translation: DVector<f64>,
}

impl fmt::Debug for Similarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Similarity")
            .field("ratio", &self.ratio)
            .field(
                "orthogonal",
                &self.orthogonal.row_iter().map(|r| r.iter().copied().collect::<Vec<_>>()).collect::<Vec<_>>(),
            )
            .field("translation", &self.translation.as_slice())
            .finish()
    }
}

impl Similarity {
    /// Builds a similarity, checking `ratio ∈ (0, 1)` and orthogonality.
    pub fn new(ratio: f64, orthogonal: DMatrix<f64>, translation: Point) -> Result<Self> {
        let n = translation.dim();
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if orthogonal.nrows() != n || orthogonal.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: orthogonal.nrows().max(orthogonal.ncols()) });
        }
        if !ratio.is_finite() || !translation.is_finite() || orthogonal.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("similarity"));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::NonContracting { index: 0, ratio });
        }
        let defect = orthogonality_defect(&orthogonal);
        if defect > ORTHOGONALITY_TOL {
            return Err(Error::NotOrthogonal { defect });
        }
        Ok(Similarity { ratio, orthogonal, translation: translation.0 })
    }

    /// `x ↦ ratio·x + translation`.
    pub fn homothety(ratio: f64, translation: Point) -> Result<Self> {
        let n = translation.dim();
        Similarity::new(ratio, DMatrix::identity(n, n), translation)
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn orthogonal(&self) -> &DMatrix<f64> {
        &self.orthogonal
    }

    pub fn translation(&self) -> Point {
        Point(self.translation.clone())
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    /// Whether the orthogonal part preserves orientation.
    pub fn is_direct(&self) -> bool {
        self.orthogonal.determinant() > 0.0
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found });
        }
        Ok(())
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        self.check_dim(x.dim())?;
        Ok(self.apply_unchecked(x))
    }

    /// [`Similarity::apply`] without the dimension check, for hot loops over
    /// points already known to live in the right space.
    pub fn apply_unchecked(&self, x: &Point) -> Point {
        let mut out = &self.orthogonal * &x.0;
        out *= self.ratio;
        out += &self.translation;
        Point(out)
    }

    /// `S^{-1}(y) = Oᵀ(y − t)/p`.
    pub fn apply_inverse(&self, y: &Point) -> Result<Point> {
        self.check_dim(y.dim())?;
        Ok(Point(self.orthogonal.transpose() * (&y.0 - &self.translation) / self.ratio))
    }

    /// The linear part applied to a displacement vector.
    pub fn apply_linear(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.orthogonal * v * self.ratio
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Similarity) -> Result<Similarity> {
        self.check_dim(other.dim())?;
        let mut orthogonal = &self.orthogonal * &other.orthogonal;
        if orthogonality_defect(&orthogonal) > REORTHOGONALIZE_THRESHOLD {
            orthogonal = reorthogonalize(orthogonal);
        }
        let translation = self.apply_linear(&other.translation) + &self.translation;
        Ok(Similarity { ratio: self.ratio * other.ratio, orthogonal, translation })
    }

    /// `self` composed with itself `k ≥ 1` times.
    pub fn power(&self, k: usize) -> Similarity {
        assert!(k >= 1, "power needs k >= 1");
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.compose(self).expect("same dimension");
        }
        acc
    }

    /// Unique fixed point, solving `(I − p·O)x = t`.
    pub fn fixed_point(&self) -> Point {
        let n = self.dim();
        let system = DMatrix::identity(n, n) - &self.orthogonal * self.ratio;
        let x = system.lu().solve(&self.translation).expect("I - pO is invertible for p < 1");
        Point(x)
    }

    /// Largest coordinate difference between the two maps on the affine
    /// frame `{base, base + scale·e_k}`. Zero iff the maps agree.
    pub fn frame_distance(&self, other: &Similarity, base: &Point, scale: f64) -> f64 {
        let n = self.dim();
        let mut worst = self.apply_unchecked(base).max_abs_diff(&other.apply_unchecked(base));
        for k in 0..n {
            let mut v = base.0.clone();
            v[k] += scale;
            let p = Point(v);
            worst = worst.max(self.apply_unchecked(&p).max_abs_diff(&other.apply_unchecked(&p)));
        }
        worst
    }
}

/// The planar similarity taking `a0 ↦ b0` and `a1 ↦ b1`, orientation
/// preserving unless `reflect` is set.
pub fn similarity_from_segment_2d(a0: &Point, a1: &Point, b0: &Point, b1: &Point, reflect: bool) -> Result<Similarity> {
    for p in [a0, a1, b0, b1] {
        if p.dim() != 2 {
            return Err(Error::UnsupportedDimension { what: "segment construction", required: 2, found: p.dim() });
        }
    }
    let src = (a1[0] - a0[0], a1[1] - a0[1]);
    let dst = (b1[0] - b0[0], b1[1] - b0[1]);
    let src_len2 = src.0 * src.0 + src.1 * src.1;
    if src_len2 == 0.0 || !src_len2.is_finite() {
        return Err(Error::DegenerateSegment);
    }
    // Complex arithmetic: z ↦ αz + β, or z ↦ α·conj(z) + β for mirrors.
    let src_c = if reflect { (src.0, -src.1) } else { src };
    let alpha = ((dst.0 * src_c.0 + dst.1 * src_c.1) / src_len2, (dst.1 * src_c.0 - dst.0 * src_c.1) / src_len2);
    let ratio = (alpha.0 * alpha.0 + alpha.1 * alpha.1).sqrt();
    if !(ratio < 1.0) {
        return Err(Error::NonContracting { index: 0, ratio });
    }
    if ratio == 0.0 {
        return Err(Error::NonContracting { index: 0, ratio });
    }
    let (c, s) = (alpha.0 / ratio, alpha.1 / ratio);
    let orthogonal = if reflect {
        DMatrix::from_row_slice(2, 2, &[c, s, s, -c])
    } else {
        DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
    };
    let a0_c = if reflect { (a0[0], -a0[1]) } else { (a0[0], a0[1]) };
    let t = (b0[0] - (alpha.0 * a0_c.0 - alpha.1 * a0_c.1), b0[1] - (alpha.0 * a0_c.1 + alpha.1 * a0_c.0));
    Similarity::new(ratio, orthogonal, Point::new(vec![t.0, t.1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn koch_maps() -> Vec<Similarity> {
        let s3 = 3f64.sqrt();
        let z = [[0.0, 0.0], [1.0 / 3.0, 0.0], [0.5, s3 / 6.0], [2.0 / 3.0, 0.0], [1.0, 0.0]];
        (0..4)
            .map(|i| {
                similarity_from_segment_2d(
                    &[0.0, 0.0].into(),
                    &[1.0, 0.0].into(),
                    &z[i].into(),
                    &z[i + 1].into(),
                    false,
                )
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn apply_scaling_about_origin() {
        let s = Similarity::homothety(0.5, Point::origin(2)).unwrap();
        assert_eq!(s.apply(&[1.0, 0.0].into()).unwrap(), Point::from([0.5, 0.0]));
    }

    #[test]
    fn apply_koch_first_map() {
        let s1 = &koch_maps()[0];
        let y = s1.apply(&[1.0, 0.0].into()).unwrap();
        assert_abs_diff_eq!(y[0], 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y[1], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn apply_rejects_wrong_dimension() {
        let s = Similarity::homothety(0.5, Point::origin(2)).unwrap();
        assert!(matches!(s.apply(&Point::origin(3)), Err(Error::DimensionMismatch { expected: 2, found: 3 })));
    }

    #[test]
    fn construction_rejects_bad_parts() {
        let t = Point::origin(2);
        assert!(matches!(Similarity::new(1.0, DMatrix::identity(2, 2), t.clone()), Err(Error::NonContracting { .. })));
        let skew = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(matches!(Similarity::new(0.5, skew, t), Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn compose_multiplies_ratios() {
        let k = koch_maps();
        let c = k[0].compose(&k[1]).unwrap();
        assert_abs_diff_eq!(c.ratio(), 1.0 / 9.0, epsilon = 1e-16);
        assert_eq!(c.ratio(), k[0].ratio() * k[1].ratio());
    }

    #[test]
    fn compose_koch_first_two_on_origin() {
        let k = koch_maps();
        let c = k[0].compose(&k[1]).unwrap();
        let y = c.apply(&Point::origin(2)).unwrap();
        assert_abs_diff_eq!(y[0], 1.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y[1], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn fixed_points() {
        let half = Similarity::homothety(0.5, Point::origin(1)).unwrap();
        assert_eq!(half.fixed_point(), Point::from([0.0]));
        let shifted = Similarity::homothety(0.5, Point::from([0.5])).unwrap();
        assert_abs_diff_eq!(shifted.fixed_point()[0], 1.0, epsilon = 1e-15);
        let s4 = &koch_maps()[3];
        let f = s4.fixed_point();
        assert_abs_diff_eq!(f[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f[1], 0.0, epsilon = 1e-14);
        let sq = s4.compose(s4).unwrap().fixed_point();
        assert!(sq.max_abs_diff(&f) < 1e-13);
    }

    #[test]
    fn segment_constructor_examples() {
        let o = Point::from([0.0, 0.0]);
        let e = Point::from([1.0, 0.0]);
        let half = similarity_from_segment_2d(&o, &e, &o, &[0.5, 0.0].into(), false).unwrap();
        assert_eq!(half.ratio(), 0.5);
        assert_eq!(half.orthogonal(), &DMatrix::identity(2, 2));

        let s3 = 3f64.sqrt();
        let rot = similarity_from_segment_2d(&o, &e, &[1.0 / 3.0, 0.0].into(), &[0.5, s3 / 6.0].into(), false).unwrap();
        assert_abs_diff_eq!(rot.ratio(), 1.0 / 3.0, epsilon = 1e-15);
        let o60 = rot.orthogonal();
        assert_abs_diff_eq!(o60[(0, 0)], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(o60[(1, 0)], s3 / 2.0, epsilon = 1e-14);

        let mirror = similarity_from_segment_2d(&o, &e, &o, &[0.5, 0.0].into(), true).unwrap();
        assert_eq!(mirror.ratio(), 0.5);
        assert_eq!(mirror.orthogonal(), &DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]));
        assert!(!mirror.is_direct());
    }

    #[test]
    fn segment_constructor_errors() {
        let o = Point::from([0.0, 0.0]);
        let e = Point::from([1.0, 0.0]);
        assert!(matches!(similarity_from_segment_2d(&o, &o, &o, &e, false), Err(Error::DegenerateSegment)));
        assert!(matches!(
            similarity_from_segment_2d(&o, &e, &o, &[2.0, 0.0].into(), false),
            Err(Error::NonContracting { .. })
        ));
        assert!(matches!(
            similarity_from_segment_2d(&[0.0].into(), &[1.0].into(), &o, &e, false),
            Err(Error::UnsupportedDimension { .. })
        ));
    }

    #[test]
    fn inverse_undoes_apply() {
        let s = &koch_maps()[2];
        let x = Point::from([0.3, -0.7]);
        let back = s.apply_inverse(&s.apply(&x).unwrap()).unwrap();
        assert!(back.max_abs_diff(&x) < 1e-14);
    }
}
