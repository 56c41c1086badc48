//! Precomputed co-location clusters for fast subset gather-time queries.
//!
//! A subset with two or more robots can only first gather at a breakpoint
//! time or where two robots cross inside a linear piece. The index samples
//! the clusters at each such instant once; a query then scans bitmasks.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exactnum::Scalar;

use super::{union_times, Plan, RobotId};

#[derive(Debug, Clone)]
pub struct ContactIndex {
    n: usize,
    /// Candidate instants in increasing order, each with its clusters.
    instants: Vec<(Scalar, Vec<u64>)>,
}

impl ContactIndex {
    pub const MAX_ROBOTS: usize = 64;

    pub fn build(plan: &Plan) -> Result<Self> {
        let n = plan.len();
        if n > Self::MAX_ROBOTS {
            return Err(Error::precondition(format!(
                "contact index supports at most {} robots",
                Self::MAX_ROBOTS
            )));
        }
        let trajs = plan.trajectories();
        let grid = union_times(trajs);
        let mut candidates: BTreeSet<Scalar> = grid.iter().cloned().collect();
        for (k, t0) in grid.iter().enumerate() {
            let Some(t1) = grid.get(k + 1) else { break };
            let span = t1 - t0;
            let states: Vec<(Scalar, Scalar)> = trajs.iter().map(|tr| tr.state_at(t0)).collect();
            for i in 0..n {
                for j in i + 1..n {
                    let (xi, vi) = &states[i];
                    let (xj, vj) = &states[j];
                    if vi == vj {
                        continue;
                    }
                    let dt = (xj - xi) / (vi - vj);
                    if dt.is_positive() && dt < span {
                        candidates.insert(t0 + &dt);
                    }
                }
            }
        }
        let instants = candidates
            .into_iter()
            .map(|t| {
                let pos: Vec<Scalar> = trajs.iter().map(|tr| tr.state_at(&t).0).collect();
                let clusters = clusters_of(&pos);
                (t, clusters)
            })
            .collect();
        Ok(ContactIndex { n, instants })
    }

    pub fn robot_count(&self) -> usize {
        self.n
    }

    pub fn mask_of(ids: &[RobotId]) -> u64 {
        ids.iter().fold(0u64, |m, id| m | (1u64 << id.0))
    }

    /// First time the robots in `mask` share a point, if they ever do.
    pub fn gather_time_mask(&self, mask: u64) -> Option<&Scalar> {
        if mask.count_ones() <= 1 {
            return self.instants.first().map(|(t, _)| t);
        }
        self.instants
            .iter()
            .find(|(_, clusters)| clusters.iter().any(|c| c & mask == mask))
            .map(|(t, _)| t)
    }

    pub fn gather_time(&self, subset: &[RobotId]) -> Result<Scalar> {
        if subset.is_empty() {
            return Err(Error::precondition("gather_time needs a non-empty subset"));
        }
        if subset.iter().any(|id| id.0 >= self.n) {
            return Err(Error::precondition("robot id out of range"));
        }
        self.gather_time_mask(Self::mask_of(subset))
            .cloned()
            .ok_or_else(|| Error::internal("subset never gathers within the plan horizon"))
    }
}

fn clusters_of(pos: &[Scalar]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..pos.len()).collect();
    order.sort_by(|&a, &b| pos[a].cmp(&pos[b]));
    let mut out: Vec<u64> = Vec::new();
    let mut prev: Option<usize> = None;
    for i in order {
        match prev {
            Some(p) if pos[p] == pos[i] => *out.last_mut().expect("pushed") |= 1 << i,
            _ => out.push(1 << i),
        }
        prev = Some(i);
    }
    out.retain(|m| m.count_ones() >= 2);
    out
}
