//! Frames, fundamental forms and curvature data of immersed submanifolds.

mod curvature;
mod frame;
mod fundamental;
mod gcr;

pub use curvature::{normal_curvature, normal_curvature_from, NormalCurvature};
pub use frame::{frame_at, FrameData};
pub use fundamental::{
    field_normal_derivative, fundamental_at, weingarten_defect, FieldDirection,
    FundamentalData,
};
pub use gcr::{gauss_codazzi_ricci, GcrConfig, GcrResidual, PLAQUETTE_SIGN};
