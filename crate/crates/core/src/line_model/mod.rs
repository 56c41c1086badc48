//! Robots on the line: configurations, piecewise-linear trajectories,
//! plans, meeting detection and gather times.

mod contact;
mod kernel;
mod validate;

pub use contact::ContactIndex;
pub use kernel::{run_kernel, Controller, Directive, Heading, KernelLimits, Snapshot};
pub use validate::{validate_plan, Rule, ValidationReport, Violation};

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exactnum::Scalar;

/// Identity of a robot within one configuration: `0..n`, in input order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RobotId(pub usize);

impl RobotId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for RobotId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Initial robot positions. Entries are kept sorted by position, ties by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    by_id: Vec<Scalar>,
    sorted: Vec<RobotId>,
}

impl Configuration {
    /// Robot `i` gets id `i`. At least two robots are required.
    pub fn new(positions: Vec<Scalar>) -> Result<Self> {
        if positions.len() < 2 {
            return Err(Error::precondition(format!(
                "a configuration needs at least 2 robots, got {}",
                positions.len()
            )));
        }
        let mut sorted: Vec<RobotId> = (0..positions.len()).map(RobotId).collect();
        sorted.sort_by(|a, b| positions[a.0].cmp(&positions[b.0]).then(a.cmp(b)));
        Ok(Configuration { by_id: positions, sorted })
    }

    pub fn from_ints(positions: &[i64]) -> Result<Self> {
        Configuration::new(positions.iter().map(|&p| Scalar::from_int(p)).collect())
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    pub fn position(&self, id: RobotId) -> &Scalar {
        &self.by_id[id.0]
    }

    /// Positions indexed by robot id.
    pub fn positions(&self) -> &[Scalar] {
        &self.by_id
    }

    /// Robot ids in left-to-right order.
    pub fn sorted_ids(&self) -> &[RobotId] {
        &self.sorted
    }

    /// `(id, position)` pairs in left-to-right order.
    pub fn entries(&self) -> impl Iterator<Item = (RobotId, &Scalar)> + '_ {
        self.sorted.iter().map(move |&id| (id, &self.by_id[id.0]))
    }

    pub fn ids(&self) -> impl Iterator<Item = RobotId> {
        (0..self.len()).map(RobotId)
    }

    pub fn leftmost(&self) -> &Scalar {
        &self.by_id[self.sorted[0].0]
    }

    pub fn rightmost(&self) -> &Scalar {
        &self.by_id[self.sorted[self.len() - 1].0]
    }

    /// Applies `f` to every position, keeping ids.
    pub fn map_positions(&self, f: impl Fn(&Scalar) -> Scalar) -> Result<Configuration> {
        Configuration::new(self.by_id.iter().map(f).collect())
    }

    pub fn all_rational(&self) -> bool {
        self.by_id.iter().all(Scalar::is_rational)
    }

    pub fn all_integer(&self) -> bool {
        self.by_id.iter().all(Scalar::is_integer)
    }
}

/// Breakpoints `(t, x)` of a piecewise-linear path; `t` starts at 0 and is
/// strictly increasing. The robot holds its last position afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    breakpoints: Vec<(Scalar, Scalar)>,
}

/// Positions in id order, e.g. `{0, 1/2, 3}`.
impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.positions().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl Trajectory {
    pub fn new(breakpoints: Vec<(Scalar, Scalar)>) -> Result<Self> {
        match breakpoints.first() {
            None => return Err(Error::precondition("trajectory needs at least one breakpoint")),
            Some((t, _)) if !t.is_zero() => {
                return Err(Error::precondition("trajectory must start at t = 0"))
            }
            _ => {}
        }
        if breakpoints.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::precondition("breakpoint times must be strictly increasing"));
        }
        Ok(Trajectory { breakpoints })
    }

    pub fn stationary(x: Scalar) -> Self {
        Trajectory { breakpoints: vec![(Scalar::zero(), x)] }
    }

    pub fn breakpoints(&self) -> &[(Scalar, Scalar)] {
        &self.breakpoints
    }

    /// Time of the last breakpoint.
    pub fn horizon(&self) -> &Scalar {
        &self.breakpoints.last().expect("non-empty").0
    }

    pub fn start_position(&self) -> &Scalar {
        &self.breakpoints[0].1
    }

    pub fn final_position(&self) -> &Scalar {
        &self.breakpoints.last().expect("non-empty").1
    }

    /// Position at time `t`: linear interpolation, then hold.
    pub fn position_at(&self, t: &Scalar) -> Result<Scalar> {
        if t.is_negative() {
            return Err(Error::precondition(format!("negative time {t}")));
        }
        Ok(self.state_at(t).0)
    }

    /// Position at `t` and the slope of the piece starting at `t`
    /// (right derivative); zero beyond the horizon. Assumes `t ≥ 0`.
    pub(crate) fn state_at(&self, t: &Scalar) -> (Scalar, Scalar) {
        let bps = &self.breakpoints;
        let idx = bps.partition_point(|(bt, _)| bt <= t) - 1;
        if idx + 1 == bps.len() {
            return (bps[idx].1.clone(), Scalar::zero());
        }
        let (t0, x0) = &bps[idx];
        let (t1, x1) = &bps[idx + 1];
        let slope = (x1 - x0) / (t1 - t0);
        let x = x0 + &(&slope * &(t - t0));
        (x, slope)
    }

    /// Slopes of consecutive segments, paired with the segment start time.
    pub fn segments(&self) -> impl Iterator<Item = (&Scalar, Scalar)> + '_ {
        self.breakpoints.windows(2).map(|w| (&w[0].0, (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0)))
    }

    /// Mirror image `x ↦ c − x`.
    pub fn reflected_about(&self, c: &Scalar) -> Trajectory {
        Trajectory {
            breakpoints: self.breakpoints.iter().map(|(t, x)| (t.clone(), c - x)).collect(),
        }
    }
}

/// Standalone form of [`Trajectory::position_at`].
pub fn position_at(traj: &Trajectory, t: &Scalar) -> Result<Scalar> {
    traj.position_at(t)
}

/// A co-location of at least two robots that were not all together just
/// before `time` (or were together at `t = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeetEvent {
    pub time: Scalar,
    pub position: Scalar,
    pub robots: Vec<RobotId>,
}

/// Trajectories for every robot, the meeting log, and the first instant at
/// which all robots share a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    config: Configuration,
    trajectories: Vec<Trajectory>,
    events: Vec<MeetEvent>,
    all_gather_time: Scalar,
}

impl Plan {
    pub fn new(
        config: Configuration,
        trajectories: Vec<Trajectory>,
        events: Vec<MeetEvent>,
        all_gather_time: Scalar,
    ) -> Result<Self> {
        if trajectories.len() != config.len() {
            return Err(Error::precondition("one trajectory per robot required"));
        }
        for (id, traj) in config.ids().zip(&trajectories) {
            if traj.start_position() != config.position(id) {
                return Err(Error::precondition(format!(
                    "trajectory of robot {id} does not start at its configured position"
                )));
            }
        }
        if events.windows(2).any(|w| w[0].time > w[1].time) {
            return Err(Error::precondition("events must be sorted by time"));
        }
        let first = trajectories[0].position_at(&all_gather_time)?;
        for traj in &trajectories[1..] {
            if traj.position_at(&all_gather_time)? != first {
                return Err(Error::precondition("robots are not co-located at all_gather_time"));
            }
        }
        Ok(Plan { config, trajectories, events, all_gather_time })
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn trajectories(&self) -> &[Trajectory] {
        &self.trajectories
    }

    pub fn trajectory(&self, id: RobotId) -> &Trajectory {
        &self.trajectories[id.0]
    }

    pub fn events(&self) -> &[MeetEvent] {
        &self.events
    }

    pub fn all_gather_time(&self) -> &Scalar {
        &self.all_gather_time
    }

    pub fn len(&self) -> usize {
        self.config.len()
    }

    pub fn is_empty(&self) -> bool {
        self.config.is_empty()
    }

    /// Largest breakpoint time over all robots.
    pub fn horizon(&self) -> Scalar {
        self.trajectories.iter().map(|t| t.horizon().clone()).max().unwrap_or_default()
    }

    /// Trajectory CSV: header `robot,t,x`, one row per breakpoint.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("robot,t,x\n");
        for (id, traj) in self.config.ids().zip(&self.trajectories) {
            for (t, x) in traj.breakpoints() {
                let _ = writeln!(out, "{id},{t},{x}");
            }
        }
        out
    }
}

/// Sorted union of the breakpoint times of the given trajectories.
pub(crate) fn union_times<'a>(trajs: impl IntoIterator<Item = &'a Trajectory>) -> Vec<Scalar> {
    let set: BTreeSet<&Scalar> =
        trajs.into_iter().flat_map(|t| t.breakpoints().iter().map(|(bt, _)| bt)).collect();
    set.into_iter().cloned().collect()
}

/// Earliest `t ≥ 0` at which the two robots share a position, if any.
pub fn first_meet_time(a: &Trajectory, b: &Trajectory) -> Option<Scalar> {
    first_common_time(&[a, b]).ok().flatten()
}

/// Earliest time at which all given trajectories coincide, scanning each
/// linear piece of the merged breakpoint grid.
fn first_common_time(trajs: &[&Trajectory]) -> Result<Option<Scalar>> {
    if trajs.len() <= 1 {
        return Ok(Some(Scalar::zero()));
    }
    let grid = union_times(trajs.iter().copied());
    for (k, t0) in grid.iter().enumerate() {
        let states: Vec<(Scalar, Scalar)> = trajs.iter().map(|tr| tr.state_at(t0)).collect();
        if states.iter().all(|(x, _)| *x == states[0].0) {
            return Ok(Some(t0.clone()));
        }
        // a common point inside the piece must be where any two robots
        // with different slopes cross
        let Some(j) = states.iter().position(|(_, v)| *v != states[0].1) else {
            continue;
        };
        let dt = (&states[j].0 - &states[0].0) / (&states[0].1 - &states[j].1);
        if !dt.is_positive() {
            continue;
        }
        let t_star = t0 + &dt;
        if let Some(t1) = grid.get(k + 1) {
            if t_star > *t1 {
                continue;
            }
        }
        let target = &states[0].0 + &(&states[0].1 * &dt);
        if states.iter().all(|(x, v)| x + &(v * &dt) == target) {
            return Ok(Some(t_star));
        }
    }
    Ok(None)
}

/// First time at which every robot in `subset` occupies one point.
pub fn gather_time(plan: &Plan, subset: &[RobotId]) -> Result<Scalar> {
    if subset.is_empty() {
        return Err(Error::precondition("gather_time needs a non-empty subset"));
    }
    let trajs: Vec<&Trajectory> = subset.iter().map(|&id| plan.trajectory(id)).collect();
    first_common_time(&trajs)?.ok_or_else(|| {
        Error::internal(format!(
            "robots {:?} never gather within the plan horizon",
            subset.iter().map(|r| r.0).collect::<Vec<_>>()
        ))
    })
}

/// Distance between the extreme initial positions of `subset`.
pub fn diameter(config: &Configuration, subset: &[RobotId]) -> Result<Scalar> {
    let mut it = subset.iter().map(|&id| config.position(id));
    let first = it.next().ok_or_else(|| Error::precondition("diameter of an empty subset"))?;
    let (lo, hi) = it.fold((first, first), |(lo, hi), p| {
        (if p < lo { p } else { lo }, if p > hi { p } else { hi })
    });
    Ok(hi - lo)
}

/// Robots sharing an initial position, grouped left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColocatedGroups {
    pub groups: Vec<Vec<RobotId>>,
    /// Group index of each robot, by id.
    pub group_of: Vec<usize>,
}

pub fn merge_colocated(config: &Configuration) -> ColocatedGroups {
    let mut groups: Vec<Vec<RobotId>> = Vec::new();
    let mut group_of = vec![0; config.len()];
    let mut last: Option<&Scalar> = None;
    for (id, p) in config.entries() {
        if last != Some(p) {
            groups.push(Vec::new());
            last = Some(p);
        }
        group_of[id.0] = groups.len() - 1;
        groups.last_mut().expect("pushed").push(id);
    }
    ColocatedGroups { groups, group_of }
}
