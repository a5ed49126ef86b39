//! Parallel transport, loop holonomy and Lie-algebra estimation.

mod algebra;
mod curve;
mod script_r;
mod transport;

pub use algebra::{
    holonomy_algebra, EstimateView, HolonomyConfig, HolonomyEstimate, InvariantBlock,
};
pub use curve::ParamCurve;
pub use script_r::{script_r_tensor, ScriptR};
pub use transport::{
    loop_transport, loop_transport_fiber_closed, loop_transport_tangent, measured_order,
    parallel_transport, path_transport, transport_orthogonality_defect, LoopTransport,
    PathTransport, TransportOptions,
};
