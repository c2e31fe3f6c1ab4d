//! Numerical estimators for the Kobayashi–Royden metric, the Lempert function
//! and the Kobayashi distance on model domains in ℂⁿ, together with finite
//! convergence scans that classify boundary points and measure how the
//! distance of a domain localizes near a boundary point.
//!
//! Every estimate is reported as a [`Bracket`]: a lower bound obtained from
//! closed forms, holomorphic projections or domain inclusion, and an upper
//! bound obtained from an explicit analytic disc or curve. The optimizer never
//! produces a lower bound.
//!
//! ```text
//! geometry  ── domains, neighbourhoods, boundary sequences
//! planar    ── conformal models of planar circle domains (oracles)
//! disc      ── polynomial analytic discs and their optimization
//! metric    ── κ_Ω, l_Ω, Carathéodory-type lower bounds
//! paths     ── Kobayashi–Royden length, distance, ε-geodesics
//! boundary  ── Gromov products and boundary-point scans
//! localize  ── Royden audits and localization tables
//! report    ── CSV / JSON / SVG output
//! ```

pub mod boundary;
pub mod bracket;
pub mod config;
pub mod disc;
pub mod geometry;
pub mod localize;
pub mod metric;
pub mod optim;
pub mod par;
pub mod paths;
pub mod planar;
pub mod report;

pub use boundary::{ScanKind, ScanPlan, ScanReport, Verdict};
pub use bracket::{Bracket, Method};
pub use config::EstimatorConfig;
pub use geometry::{
    BoundarySequence, DomainSpec, NeighbourhoodShape, NeighbourhoodSpec, Point, Tangent,
};
pub use localize::{AuditRecord, LocalizationRow, SuiteReport};
pub use metric::Estimator;
pub use num_complex::Complex64 as C64;
pub use paths::{find_epsilon_geodesic, kobayashi_distance, GeodesicCertificate, Path};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point is not inside the domain")]
    OutsideDomain,
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("boundary is not smooth at the given point: {0}")]
    NonSmoothBoundary(String),
    #[error("point is not on the boundary (defining function = {0:e})")]
    NotOnBoundary(f64),
    #[error("generated sequence point {0} escapes the domain")]
    SequenceEscapes(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("target set is empty")]
    EmptySet,
    #[error("subdomain is not contained in the domain")]
    NotSubdomain,
    #[error("path leaves the domain on segment {0}")]
    PathEscapes(usize),
    #[error("path has zero length")]
    ZeroLength,
    #[error("no epsilon-geodesic certificate with at most {0} nodes")]
    CertificateFailed(usize),
    #[error("path endpoints do not match")]
    EndpointMismatch,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
