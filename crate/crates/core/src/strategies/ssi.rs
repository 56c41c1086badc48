//! Shrink the shortest interval: repeatedly collapse the closest pair of
//! adjacent groups while everything else translates toward them.

use crate::error::Result;
use crate::exactnum::Scalar;
use crate::line_model::{
    run_kernel, Configuration, Controller, Directive, Heading, KernelLimits, Plan, RobotId,
    Snapshot,
};

/// One shrink step: the adjacent groups `left` and `right`, `gap` apart,
/// close at their midpoint starting at `start`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsiPhase {
    pub start: Scalar,
    pub left: Vec<RobotId>,
    pub right: Vec<RobotId>,
    pub gap: Scalar,
}

impl SsiPhase {
    pub fn duration(&self) -> Scalar {
        self.gap.half()
    }
}

pub fn ssi_plan(config: &Configuration) -> Result<Plan> {
    ssi_plan_with_phases(config).map(|(plan, _)| plan)
}

pub fn ssi_plan_with_phases(config: &Configuration) -> Result<(Plan, Vec<SsiPhase>)> {
    let mut ctl = Ssi { phases: Vec::new() };
    let plan = run_kernel(config, &mut ctl, KernelLimits::default())?;
    Ok((plan, ctl.phases))
}

struct Ssi {
    phases: Vec<SsiPhase>,
}

impl Controller for Ssi {
    fn direct(&mut self, now: &Snapshot<'_>) -> Result<Directive> {
        let groups = groups_at(now);
        // leftmost adjacent pair with the smallest gap
        let mut best = 0;
        let mut best_gap = now.position(groups[1][0]) - now.position(groups[0][0]);
        for k in 1..groups.len() - 1 {
            let gap = now.position(groups[k + 1][0]) - now.position(groups[k][0]);
            if gap < best_gap {
                best = k;
                best_gap = gap;
            }
        }
        let mut headings = vec![Heading::Hold; now.positions.len()];
        for (k, g) in groups.iter().enumerate() {
            let h = if k <= best { Heading::Right } else { Heading::Left };
            for id in g {
                headings[id.0] = h;
            }
        }
        self.phases.push(SsiPhase {
            start: now.time.clone(),
            left: groups[best].clone(),
            right: groups[best + 1].clone(),
            gap: best_gap.clone(),
        });
        Ok(Directive { headings, until: Some(now.time + &best_gap.half()) })
    }
}

/// Robots grouped by current position, left to right; ids ascending within.
fn groups_at(now: &Snapshot<'_>) -> Vec<Vec<RobotId>> {
    let mut ids: Vec<RobotId> = (0..now.positions.len()).map(RobotId).collect();
    ids.sort_by(|a, b| now.position(*a).cmp(now.position(*b)).then(a.cmp(b)));
    let mut groups: Vec<Vec<RobotId>> = Vec::new();
    for id in ids {
        match groups.last_mut() {
            Some(g) if now.colocated(g[0], id) => g.push(id),
            _ => groups.push(vec![id]),
        }
    }
    groups
}
