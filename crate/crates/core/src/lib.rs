//! Self-similar zippers and the canonical isomorphisms between their
//! attractor arcs.
//!
//! The crate builds zippers from similarities or planar vertex lists,
//! evaluates structural parametrizations, certifies the Jordan and
//! bounded-turning hypotheses at finite depth, and checks Hölder and
//! bi-Lipschitz bounds for the canonical homeomorphism between two
//! same-signature attractors.

// `!(a < b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod address;
pub mod analysis;
pub mod config;
pub mod corpus;
pub mod error;
pub mod fit;
pub mod geometry;
pub mod io;
pub mod isomorphism;
pub mod parametrization;
pub mod similarity;
pub mod zipper;

pub use address::{address_relation, Address, AddressRelation};
pub use analysis::{
    attractor_diameter, bounded_turning_constant, subarc_cover, subarc_diameter, Attractor, CoverCase,
    IntervalEstimate, SubarcCover, TurningOptions, TurningReport,
};
pub use config::Config;
pub use error::{Endpoint, Error, Result};
pub use io::{parse_spec, ZipperSpec};
pub use isomorphism::{
    bilipschitz_decision, canonical_pair, check_isomorphic, distortion_scan, holder_exponent, sharpness_witness,
    CanonicalMap, Decision, DecisionRecord, DistortionRecord, DistortionScan, HolderReport, IsomorphismCheck, KnotRule,
    Profile, ProfileOptions, ScanOptions, WitnessRecord, WitnessSeries,
};
pub use parametrization::{
    evaluate, jordan_check, locate, polyline, JordanCertificate, JordanVerdict, ParamPoint, Parametrization,
};
pub use similarity::{similarity_from_segment_2d, Point, Similarity};
pub use zipper::{
    build_zipper, zipper_from_vertices_2d, AddressMap, Cylinder, CylinderEnds, LinearZipper, Signature, Zipper,
};
