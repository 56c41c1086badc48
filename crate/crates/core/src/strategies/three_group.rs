//! Three-group gathering: two leaders in the middle block each sweep their
//! nearest robots, then merge and sweep the rest.

use crate::error::{Error, Result};
use crate::exactnum::{ratio, floor_rational, Scalar};
use crate::line_model::{
    run_kernel, Configuration, Controller, Directive, Heading, KernelLimits, Plan, RobotId,
    Snapshot,
};
use num_traits::ToPrimitive;

use super::VisitSequence;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSpec {
    pub k: usize,
    pub left: usize,
    pub middle: usize,
    pub right: usize,
    /// Initial positions of the two leaders, once bound to a configuration.
    pub anchors: Option<(Scalar, Scalar)>,
}

impl PartitionSpec {
    pub fn n(&self) -> usize {
        self.left + self.middle + self.right
    }

    /// Group index (0 = left, 1 = middle, 2 = right) of the robot with the
    /// given rank in sorted order.
    pub fn group_of_rank(&self, rank: usize) -> usize {
        if rank < self.left {
            0
        } else if rank < self.left + self.middle {
            1
        } else {
            2
        }
    }

    pub fn bind(mut self, config: &Configuration) -> Result<Self> {
        if config.len() != self.n() {
            return Err(Error::precondition("partition size does not match configuration"));
        }
        let sorted = config.sorted_ids();
        let ml = config.position(sorted[self.left]).clone();
        let mr = config.position(sorted[self.left + self.middle - 1]).clone();
        self.anchors = Some((ml, mr));
        Ok(self)
    }
}

pub fn three_group_partition(n: usize) -> Result<PartitionSpec> {
    if n < 9 {
        return Err(Error::precondition(format!(
            "three-group partition needs n >= 9, got {n}; use ssi for smaller swarms"
        )));
    }
    // k = floor(n/6 - 2/3) = floor((n - 4) / 6)
    let k = floor_rational(&ratio(n as i64 - 4, 6)).to_usize().expect("n >= 9");
    Ok(PartitionSpec {
        k,
        left: n / 2 - k - 1,
        middle: 2 * k + 2,
        right: n.div_ceil(2) - k - 1,
        anchors: None,
    })
}

/// Whether `f` lies strictly inside the applicability range `3f < 2(n-1)`.
pub fn three_group_applicable(n: usize, f: usize) -> bool {
    n >= 9 && 3 * f < 2 * (n - 1)
}

/// `f` sits exactly on the boundary `3f = 2(n-1)` that is excluded here.
pub fn three_group_boundary(n: usize, f: usize) -> bool {
    3 * f == 2 * (n.saturating_sub(1))
}

pub fn three_group_plan(config: &Configuration, f: usize) -> Result<Plan> {
    let n = config.len();
    if !three_group_applicable(n, f) {
        return Err(Error::precondition(format!(
            "three-group needs n >= 9 and 3f < 2(n-1), got n = {n}, f = {f}; use ssi instead"
        )));
    }
    let spec = three_group_partition(n)?.bind(config)?;
    let (ml, mr) = spec.anchors.clone().expect("bound");
    let mid = (&ml + &mr).half();
    let sorted = config.sorted_ids();
    let leader_l = sorted[spec.left];
    let leader_r = sorted[spec.left + spec.middle - 1];

    let mut role = vec![Role::FlankLeft; n];
    for (rank, id) in sorted.iter().enumerate() {
        role[id.0] = match spec.group_of_rank(rank) {
            0 => Role::FlankLeft,
            2 => Role::FlankRight,
            _ if *config.position(*id) < mid => Role::ChaseLeft,
            _ => Role::ChaseRight,
        };
    }
    let others = |leader: RobotId| (0..n).map(RobotId).filter(move |id| *id != leader);
    let seq_l = VisitSequence::new(&ml, &Scalar::zero(), config.positions(), others(leader_l));
    let seq_r = VisitSequence::new(&mr, &Scalar::zero(), config.positions(), others(leader_r));
    let mut membership = vec![Team::Free; n];
    membership[leader_l.0] = Team::Left;
    membership[leader_r.0] = Team::Right;
    let mut ctl = ThreeGroup {
        leaders: (leader_l, leader_r),
        role,
        membership,
        seq_l,
        seq_r,
        merged: None,
    };
    run_kernel(config, &mut ctl, KernelLimits::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    FlankLeft,
    FlankRight,
    ChaseLeft,
    ChaseRight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Team {
    Free,
    Left,
    Right,
    Merged,
}

struct ThreeGroup {
    leaders: (RobotId, RobotId),
    role: Vec<Role>,
    membership: Vec<Team>,
    seq_l: VisitSequence,
    seq_r: VisitSequence,
    merged: Option<VisitSequence>,
}

impl ThreeGroup {
    fn next_in(&self, seq: &VisitSequence, own: Team) -> Option<RobotId> {
        seq.order.iter().copied().find(|id| self.membership[id.0] != own)
    }

    /// Absorbs robots co-located with the leader of `team` per the stick rules.
    fn absorb(&mut self, now: &Snapshot<'_>, team: Team) {
        let (leader, seq, kin) = match team {
            Team::Left => (self.leaders.0, &self.seq_l, [Role::FlankLeft, Role::ChaseLeft]),
            Team::Right => (self.leaders.1, &self.seq_r, [Role::FlankRight, Role::ChaseRight]),
            _ => unreachable!("only leader teams absorb"),
        };
        let here = now.position(leader).clone();
        for i in 0..self.membership.len() {
            if self.membership[i] == Team::Free
                && now.positions[i] == here
                && kin.contains(&self.role[i])
            {
                self.membership[i] = team;
            }
        }
        // the current target joins on contact, possibly several in a row
        let seq = seq.clone();
        while let Some(t) = self.next_in(&seq, team) {
            if self.membership[t.0] != Team::Free || *now.position(t) != here {
                break;
            }
            self.membership[t.0] = team;
        }
    }
}

impl Controller for ThreeGroup {
    fn direct(&mut self, now: &Snapshot<'_>) -> Result<Directive> {
        let (al, ar) = self.leaders;
        let n = now.positions.len();
        if self.merged.is_none() && now.colocated(al, ar) {
            for m in &mut self.membership {
                if matches!(m, Team::Left | Team::Right) {
                    *m = Team::Merged;
                }
            }
            let here = now.position(al).clone();
            let rest = (0..n).map(RobotId).filter(|id| self.membership[id.0] == Team::Free);
            self.merged = Some(VisitSequence::new(&here, now.time, now.positions, rest));
        }

        let mut headings = vec![Heading::Hold; n];
        if let Some(seq) = self.merged.clone() {
            let here = now.position(al).clone();
            for (i, m) in self.membership.iter_mut().enumerate() {
                if now.positions[i] == here {
                    *m = Team::Merged;
                }
            }
            let target = self
                .next_in(&seq, Team::Merged)
                .ok_or_else(|| Error::internal("merged sequence exhausted before gathering"))?;
            let h = Heading::toward(&here, now.position(target));
            for (i, m) in self.membership.iter().enumerate() {
                headings[i] = match (m, self.role[i]) {
                    (Team::Merged, _) => h,
                    (_, Role::FlankLeft) => Heading::Right,
                    (_, Role::FlankRight) => Heading::Left,
                    _ => Heading::toward(&now.positions[i], &here),
                };
            }
            return Ok(Directive { headings, until: None });
        }

        self.absorb(now, Team::Left);
        self.absorb(now, Team::Right);
        let seq_l = self.seq_l.clone();
        let seq_r = self.seq_r.clone();
        let tl = self.next_in(&seq_l, Team::Left).expect("right leader is never on the left team");
        let tr = self.next_in(&seq_r, Team::Right).expect("left leader is never on the right team");
        let (pl, pr) = (now.position(al), now.position(ar));
        let hl = Heading::toward(pl, now.position(tl));
        let hr = Heading::toward(pr, now.position(tr));
        for (i, m) in self.membership.iter().enumerate() {
            headings[i] = match (m, self.role[i]) {
                (Team::Left, _) => hl,
                (Team::Right, _) => hr,
                (_, Role::FlankLeft) => Heading::Right,
                (_, Role::FlankRight) => Heading::Left,
                (_, Role::ChaseLeft) => Heading::toward(&now.positions[i], pl),
                (_, Role::ChaseRight) => Heading::toward(&now.positions[i], pr),
            };
        }
        Ok(Directive { headings, until: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::line_model::validate_plan;

    fn sizes(n: usize) -> (usize, usize, usize, usize) {
        let p = three_group_partition(n).unwrap();
        (p.k, p.left, p.middle, p.right)
    }

    #[test]
    fn partition_sizes() {
        assert_eq!(sizes(9), (0, 3, 2, 4));
        assert_eq!(sizes(10), (1, 3, 4, 3));
        assert_eq!(sizes(12), (1, 4, 4, 4));
        assert_eq!(sizes(16), (2, 5, 6, 5));
        assert!(three_group_partition(8).is_err());
    }

    #[test]
    fn applicability_is_strict() {
        assert!(three_group_applicable(10, 5));
        assert!(!three_group_applicable(10, 6));
        assert!(three_group_boundary(10, 6));
    }

    #[test]
    fn equally_spaced_nine_gathers_cleanly() {
        let cfg = Configuration::from_ints(&[0, 1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        let plan = three_group_plan(&cfg, 5).unwrap();
        assert!(plan.all_gather_time().is_positive());
        assert!(validate_plan(&plan).is_clean(), "{:?}", validate_plan(&plan));
    }

    #[test]
    fn one_point() {
        let cfg = Configuration::from_ints(&[2; 9]).unwrap();
        assert_eq!(*three_group_plan(&cfg, 1).unwrap().all_gather_time(), Scalar::zero());
    }
}
