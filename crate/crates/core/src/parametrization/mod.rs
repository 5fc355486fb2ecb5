//! Structural parametrizations `g : [0,1] → K(S)`.
//!
//! The parameter space is a [`LinearZipper`] with the same signature as the
//! zipper. A parameter `t` is decoded into an address by pulling it back
//! through the linear maps; `g(t)` is then `S_j` applied to a point of the
//! base arc, with error at most `p_j·|γ|`.

mod jordan;

pub use jordan::{jordan_check, JordanCertificate, JordanVerdict};

use serde::Serialize;

use crate::address::{Address, DEPTH_CAP};
use crate::analysis::attractor_diameter;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::similarity::Point;
use crate::zipper::{LinearZipper, Zipper};

/// A parameter decoded to a finite depth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamPoint {
    pub t: f64,
    /// Depth-`k` prefix of the itinerary of `t`.
    pub address: Address,
    /// Pullback of `t` into `[0, 1]` after `k` steps: `T_j(residual) = t`.
    pub residual: f64,
}

/// Decodes `t` to `depth` letters. Knots go to the lower-index interval,
/// except `1`, which goes to the last.
pub fn locate(linear: &LinearZipper, t: f64, depth: usize) -> Result<ParamPoint> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ParameterOutOfRange(t));
    }
    if depth > DEPTH_CAP {
        return Err(Error::DepthCap { depth, cap: DEPTH_CAP });
    }
    let mut address = Address::root();
    let mut s = t;
    for _ in 0..depth {
        let i = linear.interval_of(s);
        address.push(i as u8);
        s = linear.backward(i, s);
    }
    Ok(ParamPoint { t, address, residual: s })
}

/// `g` for one zipper over one parameter space.
#[derive(Debug, Clone)]
pub struct Parametrization {
    zipper: Zipper,
    linear: LinearZipper,
    ratios: Vec<f64>,
    diameter_hi: f64,
    depth_cap: usize,
}

impl Parametrization {
    /// Uses knots proportional to the zipper's ratios.
    pub fn new(zipper: &Zipper) -> Result<Self> {
        Parametrization::with_linear(zipper, LinearZipper::for_zipper(zipper))
    }

    pub fn with_linear(zipper: &Zipper, linear: LinearZipper) -> Result<Self> {
        if linear.signature() != zipper.signature() {
            return Err(Error::SignatureMismatch(
                (0..zipper.m())
                    .find(|&i| i >= linear.m() || linear.signature().reverses(i) != zipper.signature().reverses(i))
                    .map_or(zipper.m(), |i| i + 1),
            ));
        }
        let config = Config::default();
        let depth = diameter_depth(zipper.m(), 4096);
        let diameter_hi = attractor_diameter(zipper, depth, &config)?.hi;
        Ok(Parametrization::from_parts(zipper, linear, diameter_hi, config.depth_cap))
    }

    /// `linear` must share the zipper's signature and `diameter_hi ≥ |γ|`.
    pub(crate) fn from_parts(zipper: &Zipper, linear: LinearZipper, diameter_hi: f64, depth_cap: usize) -> Self {
        Parametrization { ratios: zipper.ratios(), zipper: zipper.clone(), linear, diameter_hi, depth_cap }
    }

    pub fn zipper(&self) -> &Zipper {
        &self.zipper
    }

    pub fn linear(&self) -> &LinearZipper {
        &self.linear
    }

    /// Certified upper bound on `|γ|` used for the error bound.
    pub fn diameter_hi(&self) -> f64 {
        self.diameter_hi
    }

    /// `g(t)` within `tol`.
    pub fn evaluate(&self, t: f64, tol: f64) -> Result<Point> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::ParameterOutOfRange(t));
        }
        if !(tol > 0.0) {
            return Err(Error::ToleranceUnreachable { tol, cap: self.depth_cap });
        }
        let mut address = Address::root();
        let mut s = t;
        let mut scale = self.diameter_hi;
        let base = loop {
            // g(0) = z_0 and g(1) = z_m exactly.
            if s == 0.0 {
                break self.zipper.first_vertex().clone();
            }
            if s == 1.0 {
                break self.zipper.last_vertex().clone();
            }
            if scale <= tol {
                break self.zipper.first_vertex().midpoint(self.zipper.last_vertex());
            }
            if address.len() == self.depth_cap {
                return Err(Error::ToleranceUnreachable { tol, cap: self.depth_cap });
            }
            let i = self.linear.interval_of(s);
            address.push(i as u8);
            scale *= self.ratios[i];
            s = self.linear.backward(i, s);
        };
        Ok(self.zipper.apply_address(&address, &base))
    }
}

/// Largest depth with `m^depth ≤ budget`.
pub(crate) fn diameter_depth(m: usize, budget: usize) -> usize {
    let mut depth = 0;
    let mut count = 1usize;
    while count * m <= budget {
        count *= m;
        depth += 1;
    }
    depth
}

/// `g(t)` within `tol`, with knots proportional to `L`.
pub fn evaluate(zipper: &Zipper, linear: &LinearZipper, t: f64, tol: f64) -> Result<Point> {
    Parametrization::with_linear(zipper, linear.clone())?.evaluate(t, tol)
}

/// The `m^depth + 1` cylinder endpoints of the given depth, in arc order.
pub fn polyline(zipper: &Zipper, depth: usize, config: &Config) -> Result<Vec<Point>> {
    zipper.polyline(depth, config)
}

/// Transfers a parameter between two parameter spaces of the same signature:
/// the canonical conjugacy `φ` with `φ∘T_i = T'_i∘φ`.
pub fn transfer_parameter(from: &LinearZipper, to: &LinearZipper, t: f64) -> Result<f64> {
    if from.signature() != to.signature() {
        return Err(Error::Prerequisite("parameter spaces must share a signature".into()));
    }
    let mut address = Address::root();
    let mut s = t;
    let mut width = 1.0f64;
    while width > 1e-17 && address.len() < DEPTH_CAP {
        if s == 0.0 || s == 1.0 {
            break;
        }
        let i = from.interval_of(s);
        address.push(i as u8);
        width *= to.width(i);
        s = from.backward(i, s);
    }
    Ok(to.forward_address(&address, s))
}
