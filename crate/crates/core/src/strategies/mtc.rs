//! Move towards the center: a central group forms in the middle and visits
//! the remaining robots nearest first while they walk inward.

use crate::error::{Error, Result};
use crate::line_model::{
    run_kernel, Configuration, Controller, Directive, Heading, KernelLimits, Plan, RobotId,
    Snapshot,
};

use super::VisitSequence;

pub fn mtc_plan(config: &Configuration, f: usize) -> Result<Plan> {
    mtc_plan_with_sequence(config, f).map(|(plan, _)| plan)
}

/// Plan plus the visiting order fixed when the central group formed.
pub fn mtc_plan_with_sequence(
    config: &Configuration,
    f: usize,
) -> Result<(Plan, Option<VisitSequence>)> {
    let n = config.len();
    if n < 3 {
        return Err(Error::precondition(format!("MTC needs n >= 3, got n = {n}")));
    }
    if 2 * f > n - 1 {
        return Err(Error::precondition(format!(
            "MTC needs f <= (n-1)/2, got n = {n}, f = {f}"
        )));
    }
    let sorted = config.sorted_ids();
    let mut inward = vec![Heading::Left; n];
    for id in &sorted[..n / 2] {
        inward[id.0] = Heading::Right;
    }
    let seeds = if n == 2 * f + 1 {
        vec![sorted[n / 2]]
    } else {
        vec![sorted[n / 2 - 1], sorted[n / 2]]
    };
    if n == 2 * f + 1 {
        inward[sorted[n / 2].0] = Heading::Hold;
    }
    let mut ctl = Mtc { inward, seeds, central: vec![false; n], sequence: None };
    let plan = run_kernel(config, &mut ctl, KernelLimits::default())?;
    Ok((plan, ctl.sequence))
}

struct Mtc {
    inward: Vec<Heading>,
    /// Robots whose co-location forms the central group.
    seeds: Vec<RobotId>,
    central: Vec<bool>,
    sequence: Option<VisitSequence>,
}

impl Controller for Mtc {
    fn direct(&mut self, now: &Snapshot<'_>) -> Result<Directive> {
        if self.sequence.is_none() && self.seeds.iter().all(|s| now.colocated(*s, self.seeds[0])) {
            let center = now.position(self.seeds[0]).clone();
            let rest: Vec<RobotId> = (0..now.positions.len())
                .map(RobotId)
                .filter(|id| *now.position(*id) != center)
                .collect();
            self.sequence = Some(VisitSequence::new(&center, now.time, now.positions, rest));
        }
        let Some(seq) = &self.sequence else {
            return Ok(Directive { headings: self.inward.clone(), until: None });
        };
        let center = now.position(self.seeds[0]).clone();
        for (i, p) in now.positions.iter().enumerate() {
            if *p == center {
                self.central[i] = true;
            }
        }
        let target = seq
            .order
            .iter()
            .find(|id| !self.central[id.0])
            .ok_or_else(|| Error::internal("MTC sequence exhausted before gathering"))?;
        let toward = Heading::toward(&center, now.position(*target));
        let headings = (0..now.positions.len())
            .map(|i| if self.central[i] { toward } else { self.inward[i] })
            .collect();
        Ok(Directive { headings, until: None })
    }
}
