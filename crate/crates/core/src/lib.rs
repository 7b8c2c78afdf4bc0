//! Maximum flow in planar networks with arc and vertex capacities.
//!
//! The solver wraps the terminals of a planar network with a super source
//! and super sink, expands every capacitated vertex into a cycle, and
//! repairs the resulting vertex violations with circulations computed by a
//! push-relabel simulation on a small set of apex vertices.
//!
//! ```
//! use vcapflow::{parse_instance, solve, Network, SolveOptions};
//!
//! let text = "p vcap 3 2 1 1\nv 1 3\na 0 0 1 5\na 1 1 2 5\ns 0\nt 2\nr 0 0\nr 1 0 1\nr 2 1\n";
//! let net: Network = parse_instance(text).unwrap();
//! let report = solve(&net, &SolveOptions::default()).unwrap();
//! assert_eq!(report.value, vcapflow::Rational::from_integer(3.into()));
//! ```

pub mod apexflow;
pub mod error;
pub mod gadgets;
pub mod generator;
pub mod netcore;
pub mod oracle;
pub mod pushrelabel;
pub mod scalar;
pub mod wang;

pub use error::{Error, Result};
pub use netcore::{
    parse_instance, write_instance, ArcFunction, ArcId, Capacity, FlowNetwork, VertexId,
};
pub use scalar::{Field, Scalar};
pub use wang::{solve, SolveOptions, SolveReport};

/// Exact rational scalar used by the binary and the test corpus.
pub type Rational = num_rational::BigRational;
pub type Network = FlowNetwork<Rational>;
pub type Flow = ArcFunction<Rational>;
