//! Front tracking for piecewise-constant weak solutions.

mod history;
mod state;
mod tracker;
mod trapezoid;

pub use history::{FrontHistory, Segment, Window};
pub use state::{staircase, FrontKind, FrontState, Mode};
pub use tracker::{evolve, EventRecord, Resolution, Trajectory};
pub use trapezoid::{trace_history, trace_on_lambda, trapezoid_splice, Splice, Trace, TrapezoidDomain};
