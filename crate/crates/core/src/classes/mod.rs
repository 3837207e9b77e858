//! Deformation of Dolbeault classes along a Kuranishi family and jump loci.

mod deform;
mod locus;

pub use deform::{deform_all, deform_class, ClassContext, ClassDeformation};
pub use locus::{
    check_in_base, deformed_dim, deformed_dim_at, describe, extension_crosscheck, jump_locus, Crosscheck, DeformedDim,
    JumpLocusReport, LocusOptions, MinorSet, Sample, SampleResult, BASE_TOL,
};
