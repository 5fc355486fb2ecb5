//! File formats: zipper specs, reports, SVG and CSV.

mod render;
mod report;
mod spec;

pub use render::{write_csv, write_svg};
pub use report::{InputDigest, Quantity, ReportFile, Table, TOOL};
pub use spec::{parse_spec, read_spec, MapSpec, MapsSpec, ZipperSpec};
