//! Movement-normalization checks on finished plans.

use std::fmt;

use crate::exactnum::Scalar;

use super::{Plan, RobotId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// A robot reverses or stops only at a meeting it takes part in.
    DirectionChange,
    /// Every segment before all-gather has unit speed.
    FullSpeed,
    /// An event lists robots that are not at its position.
    Malformed,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::DirectionChange => "direction-change",
            Rule::FullSpeed => "full-speed",
            Rule::Malformed => "malformed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub robot: RobotId,
    pub time: Scalar,
    pub rule: Rule,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, rule: Rule) -> usize {
        self.violations.iter().filter(|v| v.rule == rule).count()
    }
}

pub fn validate_plan(plan: &Plan) -> ValidationReport {
    let mut violations = Vec::new();
    let gather = plan.all_gather_time();

    for event in plan.events() {
        for &r in &event.robots {
            let at = plan.trajectory(r).state_at(&event.time).0;
            if at != event.position {
                violations.push(Violation {
                    robot: r,
                    time: event.time.clone(),
                    rule: Rule::Malformed,
                    detail: format!("listed at {} but located at {at}", event.position),
                });
            }
        }
    }

    for (idx, traj) in plan.trajectories().iter().enumerate() {
        let robot = RobotId(idx);
        let segs: Vec<(&Scalar, Scalar)> = traj.segments().collect();
        for (start, slope) in &segs {
            if *start < gather && slope.abs() != Scalar::one() {
                violations.push(Violation {
                    robot,
                    time: (*start).clone(),
                    rule: Rule::FullSpeed,
                    detail: format!("segment slope {slope}"),
                });
            }
        }
        for w in segs.windows(2) {
            let (_, before) = &w[0];
            let (at, after) = &w[1];
            if before.signum() == after.signum() || **at >= *gather {
                continue;
            }
            let met = plan
                .events()
                .iter()
                .any(|e| e.time == **at && e.robots.contains(&robot));
            if !met {
                violations.push(Violation {
                    robot,
                    time: (*at).clone(),
                    rule: Rule::DirectionChange,
                    detail: format!("velocity {before} -> {after} without a meeting"),
                });
            }
        }
    }
    ValidationReport { violations }
}
