//! The bundled example zippers.
//!
//! Each constructor matches one file under `corpus/` at the repository root.

use crate::similarity::Point;
use crate::zipper::{zipper_from_vertices_2d, LinearZipper, Signature, Zipper};

/// The segment `[0, 1]` split at `1/2`.
pub fn linear_half() -> Zipper {
    LinearZipper::new(vec![0.0, 0.5, 1.0], Signature::zeros(2)).unwrap().to_zipper()
}

/// The segment `[0, 1]` split at `1/3`.
pub fn linear_third() -> Zipper {
    LinearZipper::new(vec![0.0, 1.0 / 3.0, 1.0], Signature::zeros(2)).unwrap().to_zipper()
}

/// The segment `[0, 1]` cut into four equal pieces.
pub fn linear_quarters() -> Zipper {
    LinearZipper::new(vec![0.0, 0.25, 0.5, 0.75, 1.0], Signature::zeros(4)).unwrap().to_zipper()
}

pub fn koch_vertices() -> Vec<Point> {
    let h = 3f64.sqrt() / 6.0;
    vec![[0.0, 0.0].into(), [1.0 / 3.0, 0.0].into(), [0.5, h].into(), [2.0 / 3.0, 0.0].into(), [1.0, 0.0].into()]
}

/// Four direct maps of ratio 1/3.
pub fn koch() -> Zipper {
    zipper_from_vertices_2d(koch_vertices(), Signature::zeros(4), &[false; 4]).unwrap()
}

/// The Koch zipper reflected across the x-axis.
pub fn koch_mirrored() -> Zipper {
    // `0.0 - y` keeps +0.0 on the axis so the corpus file matches bitwise.
    let vertices = koch_vertices().into_iter().map(|p| Point::new(vec![p[0], 0.0 - p[1]])).collect();
    zipper_from_vertices_2d(vertices, Signature::zeros(4), &[false; 4]).unwrap()
}

/// Two-map zipper with apex `(x, y)` and mirror maps.
pub fn cesaro(x: f64, y: f64) -> Zipper {
    zipper_from_vertices_2d(
        vec![[0.0, 0.0].into(), [x, y].into(), [1.0, 0.0].into()],
        Signature::zeros(2),
        &[true, true],
    )
    .unwrap()
}

/// Two direct maps with apex `(1/2, 1/2)`: the Lévy curve, not a Jordan arc.
pub fn levy() -> Zipper {
    zipper_from_vertices_2d(
        vec![[0.0, 0.0].into(), [0.5, 0.5].into(), [1.0, 0.0].into()],
        Signature::zeros(2),
        &[false, false],
    )
    .unwrap()
}

/// Three maps, the middle one reversing orientation.
pub fn mixed() -> Zipper {
    zipper_from_vertices_2d(
        vec![[0.0, 0.0].into(), [0.35, 0.2].into(), [0.65, 0.2].into(), [1.0, 0.0].into()],
        Signature::new(vec![false, true, false]),
        &[true, false, true],
    )
    .unwrap()
}

/// Every bundled zipper with its corpus name.
pub fn all() -> Vec<(&'static str, Zipper)> {
    vec![
        ("linear-half", linear_half()),
        ("linear-third", linear_third()),
        ("koch", koch()),
        ("koch-mirrored", koch_mirrored()),
        ("cesaro-050-030", cesaro(0.5, 0.3)),
        ("cesaro-040-024", cesaro(0.4, 0.24)),
        ("levy", levy()),
        ("mixed", mixed()),
    ]
}
