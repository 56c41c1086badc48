//! Plan generators. Every generator is a deterministic function of the
//! initial configuration; none of them can observe which robots are faulty.

mod doubling;
mod mtc;
mod ssi;
mod three_group;

pub use doubling::{doubling_plan, scaled_doubling_plan, DoublingState, ScaledDoublingParams};
pub use mtc::{mtc_plan, mtc_plan_with_sequence};
pub use ssi::{ssi_plan, ssi_plan_with_phases, SsiPhase};
pub use three_group::{
    three_group_applicable, three_group_boundary, three_group_partition, three_group_plan,
    PartitionSpec,
};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exactnum::Scalar;
use crate::line_model::{Configuration, Plan, RobotId};

/// Robots ordered by distance from `reference` at `time`, ties by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisitSequence {
    pub order: Vec<RobotId>,
    pub reference: Scalar,
    pub time: Scalar,
}

impl VisitSequence {
    pub fn new(
        reference: &Scalar,
        time: &Scalar,
        positions: &[Scalar],
        robots: impl IntoIterator<Item = RobotId>,
    ) -> Self {
        let mut keyed: Vec<(Scalar, RobotId)> =
            robots.into_iter().map(|id| ((&positions[id.0] - reference).abs(), id)).collect();
        keyed.sort();
        VisitSequence {
            order: keyed.into_iter().map(|(_, id)| id).collect(),
            reference: reference.clone(),
            time: time.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    Ssi,
    Doubling,
    ScaledDoubling,
    Mtc,
    ThreeGroup,
    Frr,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 6] = [
        StrategyKind::Ssi,
        StrategyKind::Doubling,
        StrategyKind::ScaledDoubling,
        StrategyKind::Mtc,
        StrategyKind::ThreeGroup,
        StrategyKind::Frr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Ssi => "ssi",
            StrategyKind::Doubling => "doubling",
            StrategyKind::ScaledDoubling => "scaled_doubling",
            StrategyKind::Mtc => "mtc",
            StrategyKind::ThreeGroup => "three_group",
            StrategyKind::Frr => "frr",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::precondition(format!("unknown algorithm `{s}`")))
    }
}

/// Builds the plan of `kind` for `config`. `f` matters only where the
/// algorithm's structure depends on it.
pub fn generate_plan(
    kind: StrategyKind,
    config: &Configuration,
    f: usize,
    epsilon: Option<&Scalar>,
) -> Result<Plan> {
    match kind {
        StrategyKind::Ssi => ssi_plan(config),
        StrategyKind::Doubling => doubling_plan(config),
        StrategyKind::ScaledDoubling => {
            let params = match epsilon {
                Some(e) => ScaledDoublingParams::new(e.clone())?,
                None => ScaledDoublingParams::default(),
            };
            scaled_doubling_plan(config, &params)
        }
        StrategyKind::Mtc => mtc_plan(config, f),
        StrategyKind::ThreeGroup => three_group_plan(config, f),
        StrategyKind::Frr => crate::frr::frr_plan(config),
    }
}
