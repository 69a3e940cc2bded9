//! The tensor sphere bundle `{G(t, t) = r²}` with the metric induced from the lifted metric.

pub mod connection;
pub mod curvature;
pub mod frame;
pub mod paracontact;
pub mod point;

pub use connection::{sphere_bracket, sphere_connection_closed, sphere_connection_koszul, SphereField};
pub use curvature::{
    curvature_blocks, curvature_oracle, frame_gram, frame_vector, sectional_curvature, space_form_defect,
    tensor_independence, terminal_identity, Block, BlockReading, CurvatureBlocks, DefectBasis, DefectReport,
    IndependenceReport, OracleCurvature, TerminalIdentity,
};
pub use frame::SphereFrame;
pub use paracontact::{paracontact_verify, ParacontactReport};
pub use point::{
    induced_metric, project, radial_component, tangential_lift, upstairs_inner, SpherePoint, TangentialVector,
};
