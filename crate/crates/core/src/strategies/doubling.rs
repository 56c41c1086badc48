//! Label-driven doubling zig-zag, and its rescaling to rational inputs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exactnum::{Rational, Scalar};
use crate::line_model::{
    run_kernel, Configuration, Controller, Directive, Heading, KernelLimits, MeetEvent, Plan,
    Snapshot, Trajectory,
};

/// Round state of the doubling schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoublingState {
    /// Current label of each robot, by id.
    pub labels: Vec<BigInt>,
    /// Stage-one distance of the current round.
    pub ell: Scalar,
    /// 1-based round index.
    pub round: u32,
}

impl DoublingState {
    pub fn new(config: &Configuration) -> Result<Self> {
        let labels = config
            .positions()
            .iter()
            .map(|p| match p.as_rational() {
                Some(r) if r.is_integer() => Ok(r.to_integer()),
                _ => Err(Error::precondition(format!(
                    "doubling needs integer positions, got {p}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DoublingState { labels, ell: Scalar::from_ratio(1, 2), round: 1 })
    }

    /// Heading of robot `idx` in the given stage (1 or 2) of this round.
    pub fn heading(&self, idx: usize, stage: u8) -> Heading {
        let odd = self.labels[idx].is_odd();
        match (odd, stage) {
            (true, 1) | (false, 2) => Heading::Right,
            _ => Heading::Left,
        }
    }

    pub fn next_round(&mut self) {
        for l in &mut self.labels {
            *l = l.div_floor(&BigInt::from(2));
        }
        self.ell = &self.ell + &self.ell;
        self.round += 1;
    }
}

struct Doubling {
    state: DoublingState,
    stage: u8,
    stage_end: Scalar,
}

impl Controller for Doubling {
    fn direct(&mut self, now: &Snapshot<'_>) -> Result<Directive> {
        while *now.time >= self.stage_end {
            if self.stage == 1 {
                self.stage = 2;
                self.stage_end = &self.stage_end + &(&self.state.ell + &self.state.ell);
            } else {
                self.state.next_round();
                self.stage = 1;
                self.stage_end = &self.stage_end + &self.state.ell;
            }
        }
        let headings =
            (0..now.positions.len()).map(|i| self.state.heading(i, self.stage)).collect();
        Ok(Directive { headings, until: Some(self.stage_end.clone()) })
    }
}

/// Doubling on integer positions. Co-located robots share a label and so
/// move as one.
pub fn doubling_plan(config: &Configuration) -> Result<Plan> {
    let state = DoublingState::new(config)?;
    let stage_end = state.ell.clone();
    let mut ctl = Doubling { state, stage: 1, stage_end };
    run_kernel(config, &mut ctl, KernelLimits::default())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledDoublingParams {
    epsilon: Scalar,
}

impl ScaledDoublingParams {
    pub fn new(epsilon: Scalar) -> Result<Self> {
        if !epsilon.is_positive() {
            return Err(Error::precondition("epsilon must be positive"));
        }
        Ok(ScaledDoublingParams { epsilon })
    }

    pub fn epsilon(&self) -> &Scalar {
        &self.epsilon
    }
}

impl Default for ScaledDoublingParams {
    fn default() -> Self {
        ScaledDoublingParams { epsilon: Scalar::from_ratio(1, 100) }
    }
}

/// Doubling on rational positions: scale by the common denominator, run the
/// integer schedule, and scale back. Rational inputs need no approximation,
/// so `epsilon` only has to be valid.
pub fn scaled_doubling_plan(config: &Configuration, _params: &ScaledDoublingParams) -> Result<Plan> {
    let mut q = BigInt::one();
    for p in config.positions() {
        let r = p.as_rational().ok_or_else(|| {
            Error::precondition(format!("scaled doubling needs rational positions, got {p}"))
        })?;
        q = q.lcm(r.denom());
    }
    let q = Rational::from_integer(q.abs());
    if q.is_one() {
        return doubling_plan(config);
    }
    let scaled = config.map_positions(|p| p.scale(&q))?;
    let inner = doubling_plan(&scaled)?;
    let back = q.recip();
    let shrink = |v: &Scalar| v.scale(&back);
    let trajectories = inner
        .trajectories()
        .iter()
        .map(|t| Trajectory::new(t.breakpoints().iter().map(|(t, x)| (shrink(t), shrink(x))).collect()))
        .collect::<Result<Vec<_>>>()?;
    let events = inner
        .events()
        .iter()
        .map(|e| MeetEvent {
            time: shrink(&e.time),
            position: shrink(&e.position),
            robots: e.robots.clone(),
        })
        .collect();
    Plan::new(config.clone(), trajectories, events, shrink(inner.all_gather_time()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::line_model::{first_meet_time, RobotId};

    #[test]
    fn two_neighbours() {
        let plan = doubling_plan(&Configuration::from_ints(&[0, 1]).unwrap()).unwrap();
        assert_eq!(*plan.all_gather_time(), Scalar::from_ratio(3, 2));
        assert_eq!(plan.trajectory(RobotId(0)).final_position(), &Scalar::from_ratio(1, 2));
    }

    #[test]
    fn four_in_a_row() {
        let plan = doubling_plan(&Configuration::from_ints(&[0, 1, 2, 3]).unwrap()).unwrap();
        assert_eq!(*plan.all_gather_time(), Scalar::from_ratio(9, 2));
        assert_eq!(plan.trajectory(RobotId(3)).final_position(), &Scalar::from_ratio(3, 2));
    }

    #[test]
    fn negative_labels_floor() {
        let mut st = DoublingState::new(&Configuration::from_ints(&[-3, -2]).unwrap()).unwrap();
        st.next_round();
        assert_eq!(st.labels, vec![BigInt::from(-2), BigInt::from(-1)]);
    }

    #[test]
    fn rejects_fractions() {
        let cfg = Configuration::new(vec![Scalar::zero(), Scalar::from_ratio(1, 2)]).unwrap();
        assert!(doubling_plan(&cfg).is_err());
    }

    #[test]
    fn scaling_halves_the_integer_plan() {
        let cfg = Configuration::new(vec![
            Scalar::zero(),
            Scalar::from_ratio(1, 2),
            Scalar::from_ratio(5, 2),
        ])
        .unwrap();
        let plan = scaled_doubling_plan(&cfg, &ScaledDoublingParams::default()).unwrap();
        let int_plan = doubling_plan(&Configuration::from_ints(&[0, 1, 5]).unwrap()).unwrap();
        assert_eq!(*plan.all_gather_time(), int_plan.all_gather_time().half());
        for (a, b) in plan.trajectories().iter().zip(int_plan.trajectories()) {
            assert_eq!(a.breakpoints().len(), b.breakpoints().len());
            for ((ta, xa), (tb, xb)) in a.breakpoints().iter().zip(b.breakpoints()) {
                assert_eq!(*ta, tb.half());
                assert_eq!(*xa, xb.half());
            }
        }
    }

    #[test]
    fn scaling_is_identity_on_integers() {
        let cfg = Configuration::from_ints(&[0, 1]).unwrap();
        let params = ScaledDoublingParams::new(Scalar::from_ratio(1, 7)).unwrap();
        assert_eq!(scaled_doubling_plan(&cfg, &params).unwrap(), doubling_plan(&cfg).unwrap());
        assert!(ScaledDoublingParams::new(Scalar::zero()).is_err());
    }

    #[test]
    fn pairs_meet_within_six_times_distance() {
        let cfg = Configuration::from_ints(&[-7, 0, 3, 4, 19]).unwrap();
        let plan = doubling_plan(&cfg).unwrap();
        for i in 0..5 {
            for j in i + 1..5 {
                let d = (cfg.position(RobotId(i)) - cfg.position(RobotId(j))).abs();
                let t = first_meet_time(plan.trajectory(RobotId(i)), plan.trajectory(RobotId(j)))
                    .unwrap();
                assert!(t <= Scalar::from_int(6) * d);
            }
        }
    }
}
