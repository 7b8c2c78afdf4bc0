//! Network representation and flow algebra.

pub mod algebra;
pub mod arcfn;
pub mod gadget_map;
pub mod io;
pub mod network;
pub mod rotation;

pub use crate::scalar::Capacity;
pub use algebra::{
    add_super_terminals, bounded_capacities, bounded_capacities_between, check_feasible, excess,
    excesses, flow_in, flow_out, flow_stats, flow_value, residual_capacity, restrict, scale_flow,
    sum_preflows, violation, violation_max, Conservation, FeasibilityReport, FlowStats,
    SuperTerminals,
};
pub use arcfn::ArcFunction;
pub use gadget_map::{ArcImage, GadgetMap};
pub use io::{parse_instance, write_instance};
pub use network::{ArcData, ArcId, FlowNetwork, Terminal, VertexId};
pub use rotation::{trace_faces, validate_rotation, EmbeddingSummary, Rotation};
