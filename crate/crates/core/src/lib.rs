//! Exact simulation of fault-tolerant gathering on the line.

pub mod error;
pub mod evaluation;
pub mod exactnum;
pub mod frr;
pub mod line_model;
pub mod strategies;

pub use error::{Error, Result};
pub use evaluation::{worst_case_cr, CrReport, EvalRequest, FaultSet, Mode};
pub use exactnum::{Rational, Scalar};
pub use line_model::{Configuration, MeetEvent, Plan, RobotId, Trajectory};
pub use strategies::{generate_plan, StrategyKind};
