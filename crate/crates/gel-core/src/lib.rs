//! Exact-arithmetic toolkit for good edge-labelings of graphs: the
//! path- and cycle-based goodness verifiers, synthesis by branch and
//! bound and by pattern exhaustion, the typed-graph decent/gluable
//! calculus with its gluing operations, windmill and flag-graph
//! analysis with the closure-labeling pipeline, and the discharging
//! audit.

pub mod canon;
pub mod discharge;
pub mod glue;
pub mod graph;
pub mod hunt;
pub mod labeling;
pub mod pattern;
pub mod search;
pub mod typed;
pub mod value;
pub mod windmill;

pub use graph::{parse_graph, EdgePair, Graph};
pub use labeling::{is_good_cycles, is_good_paths, Labeling};
pub use search::{find_good_labeling, is_critical, Certificate};
pub use typed::{verify_decent, verify_gluable, GluQuad, TypedGraph};
pub use value::Value;
