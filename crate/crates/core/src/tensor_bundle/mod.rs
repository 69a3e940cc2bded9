//! The (1,1)-tensor bundle: lifts, adapted frame, lifted metric, brackets and connection.

pub mod bracket;
pub mod connection;
pub mod frame;
pub mod local;
pub mod metric;
pub mod params;
pub mod point;

pub use bracket::{bracket, covariant_derivative, Lifted};
pub use connection::{
    cg_connection_closed, cg_connection_koszul, ConnectionCoefficients, OracleConnection, TableReading,
};
pub use frame::TensorBundleFrame;
pub use local::LocalGeometry;
pub use metric::{
    cg_inner, cg_metric_matrices, complete_lift, frame_matrix, horizontal_lift, to_adapted, to_coords, vertical_lift,
    AdaptedVector,
};
pub use params::{CGParams, ParamValues};
pub use point::{iota, tau, tbar, vidx, BundlePoint};
