//! Planar harmonic mappings built by shearing, their Hadamard convolutions,
//! and numerical verification of local univalence, dilatation bounds and
//! convexity in a direction.
//!
//! The layers build on each other:
//!
//! * [`series`]: truncated complex power series;
//! * [`harmonic`]: `f = h + conj(g)`, the shear construction, Jacobian;
//! * [`families`]: the named half-plane, strip and `T`-type families;
//! * [`convolution`]: harmonic convolution and the explicit dilatation `ŵ`;
//! * [`verify`]: grid scans, convexity-in-direction checks, theorem presets.

pub mod angle;
pub mod convolution;
pub mod error;
pub mod families;
pub mod harmonic;
pub mod series;
pub mod verify;

pub use num_complex::Complex64;

pub use angle::parse_angle;
pub use convolution::{
    convolve_families, convolve_maps, dilatation_minus_closed, dilatation_plus_closed,
    harmonic_convolve, ClosedFormConvolution, ConvolutionPair, ConvolutionResult, ConvolvedMap,
};
pub use error::{Error, Result};
pub use families::{build_family, closed_form_f, minus_closed_form_f, Family, FamilySpec};
pub use harmonic::{shear, HarmonicMap, MapEvaluator, ShearTarget};
pub use series::{
    make_geometric, pommerenke_f, strip_log_series, AnalyticFunction, Sign, TruncatedSeries,
    DEFAULT_ORDER,
};
pub use verify::{
    verify_theorem, GridSpec, ReportBundle, TheoremId, TheoremParams, Verdict, VerificationReport,
    VerifyOptions,
};
