//! Event-driven motion kernel.
//!
//! Between events every robot moves with a heading in {−1, 0, +1}. The kernel
//! advances exactly to the earliest of (a) the next pairwise co-location and
//! (b) the controller's scheduled deadline, logs new contacts, and asks the
//! controller for fresh headings. It stops at the first instant all robots
//! share a point.

use crate::error::{Error, Result};
use crate::exactnum::Scalar;

use super::{Configuration, MeetEvent, Plan, RobotId, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Heading {
    Left,
    Hold,
    Right,
}

impl Heading {
    pub fn signum(self) -> i8 {
        match self {
            Heading::Left => -1,
            Heading::Hold => 0,
            Heading::Right => 1,
        }
    }

    pub fn as_scalar(self) -> Scalar {
        Scalar::from_int(self.signum() as i64)
    }

    /// Heading that moves a robot at `from` toward `to`.
    pub fn toward(from: &Scalar, to: &Scalar) -> Heading {
        match to.cmp(from) {
            std::cmp::Ordering::Less => Heading::Left,
            std::cmp::Ordering::Equal => Heading::Hold,
            std::cmp::Ordering::Greater => Heading::Right,
        }
    }

    pub fn reversed(self) -> Heading {
        match self {
            Heading::Left => Heading::Right,
            Heading::Hold => Heading::Hold,
            Heading::Right => Heading::Left,
        }
    }
}

/// State handed to a [`Controller`] at each decision point.
pub struct Snapshot<'a> {
    pub time: &'a Scalar,
    /// Current positions, indexed by robot id.
    pub positions: &'a [Scalar],
    pub config: &'a Configuration,
}

impl Snapshot<'_> {
    pub fn position(&self, id: RobotId) -> &Scalar {
        &self.positions[id.0]
    }

    pub fn colocated(&self, a: RobotId, b: RobotId) -> bool {
        self.positions[a.0] == self.positions[b.0]
    }
}

/// Headings for all robots, valid until the next event or `until`.
#[derive(Debug, Clone)]
pub struct Directive {
    pub headings: Vec<Heading>,
    pub until: Option<Scalar>,
}

/// A strategy driving the kernel. It is consulted at `t = 0` and after
/// every event.
pub trait Controller {
    fn direct(&mut self, now: &Snapshot<'_>) -> Result<Directive>;
}

#[derive(Debug, Clone, Copy)]
pub struct KernelLimits {
    pub max_steps: usize,
}

impl Default for KernelLimits {
    fn default() -> Self {
        KernelLimits { max_steps: 200_000 }
    }
}

/// Runs `controller` from `config` until every robot is co-located.
pub fn run_kernel(
    config: &Configuration,
    controller: &mut dyn Controller,
    limits: KernelLimits,
) -> Result<Plan> {
    let n = config.len();
    let mut time = Scalar::zero();
    let mut positions: Vec<Scalar> = config.positions().to_vec();
    let mut breakpoints: Vec<Vec<(Scalar, Scalar)>> =
        positions.iter().map(|p| vec![(Scalar::zero(), p.clone())]).collect();
    let mut current: Option<Vec<Heading>> = None;
    let mut events = Vec::new();
    record_contacts(&time, &positions, None, &mut events);

    let mut steps = 0usize;
    while !all_colocated(&positions) {
        steps += 1;
        if steps > limits.max_steps {
            return Err(Error::Stall {
                time: time.to_string(),
                detail: format!("no convergence after {} kernel steps", limits.max_steps),
            });
        }
        let directive = controller.direct(&Snapshot { time: &time, positions: &positions, config })?;
        if directive.headings.len() != n {
            return Err(Error::internal("controller returned the wrong number of headings"));
        }
        if let Some(until) = &directive.until {
            if *until <= time {
                return Err(Error::internal(format!("deadline {until} is not after now ({time})")));
            }
        }
        let contact = next_contact_delay(&positions, &directive.headings);
        let delay = match (contact, directive.until.as_ref().map(|u| u - &time)) {
            (Some(c), Some(d)) => c.min(d),
            (Some(c), None) => c,
            (None, Some(d)) => d,
            (None, None) => {
                return Err(Error::Stall {
                    time: time.to_string(),
                    detail: "no future meeting or scheduled event while robots are apart".into(),
                })
            }
        };

        if let Some(prev) = &current {
            for (i, (old, new)) in prev.iter().zip(&directive.headings).enumerate() {
                if old != new {
                    push_breakpoint(&mut breakpoints[i], &time, &positions[i]);
                }
            }
        }
        for (p, h) in positions.iter_mut().zip(&directive.headings) {
            match h {
                Heading::Left => *p -= &delay,
                Heading::Right => *p += &delay,
                Heading::Hold => {}
            }
        }
        time += &delay;
        record_contacts(&time, &positions, Some(&directive.headings), &mut events);
        current = Some(directive.headings);
    }

    for (bps, p) in breakpoints.iter_mut().zip(&positions) {
        push_breakpoint(bps, &time, p);
    }
    let trajectories =
        breakpoints.into_iter().map(Trajectory::new).collect::<Result<Vec<_>>>()?;
    Plan::new(config.clone(), trajectories, events, time)
}

fn push_breakpoint(bps: &mut Vec<(Scalar, Scalar)>, t: &Scalar, x: &Scalar) {
    if bps.last().map(|(bt, _)| bt < t).unwrap_or(true) {
        bps.push((t.clone(), x.clone()));
    }
}

fn all_colocated(positions: &[Scalar]) -> bool {
    positions.iter().all(|p| *p == positions[0])
}

fn sorted_order(positions: &[Scalar]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..positions.len()).collect();
    order.sort_by(|&a, &b| positions[a].cmp(&positions[b]).then(a.cmp(&b)));
    order
}

/// Earliest positive delay until two currently separated robots touch.
/// Only neighbouring clusters need checking: order is preserved until then.
fn next_contact_delay(positions: &[Scalar], headings: &[Heading]) -> Option<Scalar> {
    let order = sorted_order(positions);
    let mut clusters: Vec<(usize, i8, i8)> = Vec::new(); // (representative, min v, max v)
    for &i in &order {
        let v = headings[i].signum();
        match clusters.last_mut() {
            Some((rep, lo, hi)) if positions[*rep] == positions[i] => {
                *lo = (*lo).min(v);
                *hi = (*hi).max(v);
            }
            _ => clusters.push((i, v, v)),
        }
    }
    let mut best: Option<Scalar> = None;
    for w in clusters.windows(2) {
        let (left, _, left_max) = w[0];
        let (right, right_min, _) = w[1];
        let closing = left_max - right_min;
        if closing <= 0 {
            continue;
        }
        let gap = &positions[right] - &positions[left];
        let delay = if closing == 1 { gap } else { gap.half() };
        if best.as_ref().map(|b| delay < *b).unwrap_or(true) {
            best = Some(delay);
        }
    }
    best
}

/// Logs every cluster that formed at `time`. With `headings = None` (the
/// initial instant) every multi-robot cluster counts.
fn record_contacts(
    time: &Scalar,
    positions: &[Scalar],
    headings: Option<&[Heading]>,
    events: &mut Vec<MeetEvent>,
) {
    let order = sorted_order(positions);
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && positions[order[end]] == positions[order[start]] {
            end += 1;
        }
        let members = &order[start..end];
        if members.len() >= 2 {
            let fresh = match headings {
                None => true,
                Some(h) => members.iter().any(|&m| h[m] != h[members[0]]),
            };
            if fresh {
                let mut robots: Vec<RobotId> = members.iter().map(|&m| RobotId(m)).collect();
                robots.sort();
                events.push(MeetEvent {
                    time: time.clone(),
                    position: positions[members[0]].clone(),
                    robots,
                });
            }
        }
        start = end;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Fixed(Vec<Heading>);

    impl Controller for Fixed {
        fn direct(&mut self, _: &Snapshot<'_>) -> Result<Directive> {
            Ok(Directive { headings: self.0.clone(), until: None })
        }
    }

    #[test]
    fn two_robots_close_in() {
        let cfg = Configuration::from_ints(&[0, 4]).unwrap();
        let plan =
            run_kernel(&cfg, &mut Fixed(vec![Heading::Right, Heading::Left]), KernelLimits::default())
                .unwrap();
        assert_eq!(*plan.all_gather_time(), Scalar::from_int(2));
        assert_eq!(plan.events().len(), 1);
        assert_eq!(plan.events()[0].position, Scalar::from_int(2));
    }

    #[test]
    fn stall_is_detected() {
        let cfg = Configuration::from_ints(&[0, 4]).unwrap();
        let err =
            run_kernel(&cfg, &mut Fixed(vec![Heading::Right, Heading::Right]), KernelLimits::default())
                .unwrap_err();
        assert!(matches!(err, Error::Stall { .. }));
    }

    #[test]
    fn crossing_robots_are_logged_and_keep_straight_paths() {
        // 0 and 1 cross at t = 1/2; robot 2 waits at 3 for everyone.
        let cfg = Configuration::from_ints(&[0, 1, 3]).unwrap();
        let plan = run_kernel(
            &cfg,
            &mut Fixed(vec![Heading::Right, Heading::Left, Heading::Hold]),
            KernelLimits::default(),
        );
        // robot 1 walks away from 3 forever
        assert!(matches!(plan, Err(Error::Stall { .. })));

        struct Cross;
        impl Controller for Cross {
            fn direct(&mut self, now: &Snapshot<'_>) -> Result<Directive> {
                let t1 = Scalar::from_ratio(1, 2);
                if *now.time < t1 {
                    Ok(Directive {
                        headings: vec![Heading::Right, Heading::Left, Heading::Left],
                        until: None,
                    })
                } else {
                    Ok(Directive {
                        headings: vec![Heading::Right, Heading::Right, Heading::Left],
                        until: None,
                    })
                }
            }
        }
        let plan = run_kernel(&cfg, &mut Cross, KernelLimits::default()).unwrap();
        assert_eq!(plan.events()[0].time, Scalar::from_ratio(1, 2));
        assert_eq!(plan.trajectory(RobotId(0)).breakpoints().len(), 2);
        assert_eq!(plan.trajectory(RobotId(1)).breakpoints().len(), 3);
    }
}
