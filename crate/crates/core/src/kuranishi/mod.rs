//! Kuranishi families and gauge normalization.

mod bilinear;
mod family;
mod gauge;

pub use bilinear::{bracket_norm_constant, Bilinear, NormConstant};
pub use family::{
    kuranishi_family, mc_defect, mc_residual, solve_fixed_point, FamilyOptions, KuranishiFamily, EXACT_TOL,
    OBSTRUCTION_REL,
};
pub use gauge::{apply_gauge, gauge_normalize, gauge_roundtrip, gauge_slice, GaugeNormalization, GaugeOptions, GaugeTransformation, RoundTrip};
