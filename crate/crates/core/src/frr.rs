//! Four robots, two faulty: normalization to the unit segment, the six
//! rendezvous cases, their competitive-ratio formulas and regions, and the
//! region-driven case selection.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{phi, Scalar};
use crate::line_model::{
    run_kernel, Configuration, Controller, Directive, Heading, KernelLimits, Plan, RobotId,
    Snapshot,
};

/// Canonical four-robot shape `{0, x, 1−y, 1}` with `0 ≤ y ≤ x` and `x + y ≤ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourConfig {
    pub x: Scalar,
    pub y: Scalar,
}

impl FourConfig {
    pub fn new(x: Scalar, y: Scalar) -> Result<Self> {
        let ok = !y.is_negative() && y <= x && &x + &y <= Scalar::one();
        if !ok {
            return Err(Error::precondition(format!(
                "({x}, {y}) violates 0 <= y <= x and x + y <= 1"
            )));
        }
        Ok(FourConfig { x, y })
    }

    pub fn middle_gap(&self) -> Scalar {
        Scalar::one() - &self.x - &self.y
    }

    /// Positions of a, b, c, d.
    pub fn positions(&self) -> [Scalar; 4] {
        [Scalar::zero(), self.x.clone(), Scalar::one() - &self.y, Scalar::one()]
    }

    pub fn to_configuration(&self) -> Configuration {
        Configuration::new(self.positions().to_vec()).expect("four robots")
    }
}

/// Affine map from canonical coordinates back to the original line:
/// `u ↦ shift + scale·u`, or `shift − scale·u` when reflected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationMap {
    pub shift: Scalar,
    pub scale: Scalar,
    pub reflected: bool,
}

impl NormalizationMap {
    pub fn apply(&self, u: &Scalar) -> Scalar {
        let d = &self.scale * u;
        if self.reflected {
            &self.shift - &d
        } else {
            &self.shift + &d
        }
    }
}

/// Normalizes four robots; also returns the robot playing each role a..d.
pub fn normalize4_with_roles(
    config: &Configuration,
) -> Result<(FourConfig, NormalizationMap, [RobotId; 4])> {
    if config.len() != 4 {
        return Err(Error::precondition(format!("need exactly 4 robots, got {}", config.len())));
    }
    let s = config.sorted_ids();
    let p: Vec<&Scalar> = s.iter().map(|id| config.position(*id)).collect();
    let scale = p[3] - p[0];
    if scale.is_zero() {
        return Err(Error::precondition("all four robots are co-located"));
    }
    let x = (p[1] - p[0]) / &scale;
    let y = (p[3] - p[2]) / &scale;
    let (fc, map, roles) = if y > x {
        (
            FourConfig { x: y, y: x },
            NormalizationMap { shift: p[3].clone(), scale, reflected: true },
            [s[3], s[2], s[1], s[0]],
        )
    } else {
        (
            FourConfig { x, y },
            NormalizationMap { shift: p[0].clone(), scale, reflected: false },
            [s[0], s[1], s[2], s[3]],
        )
    };
    Ok((fc, map, roles))
}

pub fn normalize4(config: &Configuration) -> Result<(FourConfig, NormalizationMap)> {
    normalize4_with_roles(config).map(|(fc, map, _)| (fc, map))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CaseId(u8);

impl CaseId {
    pub const ALL: [CaseId; 6] = [CaseId(1), CaseId(2), CaseId(3), CaseId(4), CaseId(5), CaseId(6)];

    pub fn new(i: u8) -> Result<Self> {
        if (1..=6).contains(&i) {
            Ok(CaseId(i))
        } else {
            Err(Error::precondition(format!("case must be in 1..6, got {i}")))
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A ratio that may be unbounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extended {
    Finite(Scalar),
    Infinite,
}

impl Extended {
    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinite) => Ordering::Less,
            (Extended::Infinite, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinite, Extended::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

/// `num/den`; `None` for `0/0`, which only arises for a pair whose robots
/// coincide and so constrains nothing.
fn term(num: Scalar, den: Scalar) -> Option<Extended> {
    if den.is_zero() {
        if num.is_zero() {
            None
        } else {
            Some(Extended::Infinite)
        }
    } else {
        Some(Extended::Finite(num / den))
    }
}

fn max_of(terms: impl IntoIterator<Item = Option<Extended>>) -> Extended {
    terms.into_iter().flatten().max().unwrap_or(Extended::Finite(Scalar::one()))
}

/// Competitive ratio of case `case` as a function of the shape.
pub fn case_cr(case: CaseId, x: &Scalar, y: &Scalar) -> Extended {
    let one = Scalar::one();
    let mid = &one - x - y;
    let t = |n: &Scalar, d: &Scalar| term(n.clone(), d.clone());
    match case.0 {
        1 => max_of([t(&(&one - y), &mid), t(&one, y)]),
        2 => max_of([t(&(&one - y), x), t(&one, y)]),
        3 => max_of([t(&one, &(&one - x)), t(&(&one - x), y)]),
        4 => max_of([t(&one, x), t(&(&one - x), y)]),
        5 => max_of([t(&one, &mid)]),
        _ => max_of([t(&one, x), t(&(&one - x), &mid)]),
    }
}

/// Role pair, as indices 0..4 for a..d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair(pub usize, pub usize);

impl Pair {
    pub const ALL: [Pair; 6] = [Pair(0, 1), Pair(0, 2), Pair(0, 3), Pair(1, 2), Pair(1, 3), Pair(2, 3)];
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [char; 4] = ['a', 'b', 'c', 'd'];
        write!(f, "{}{}", NAMES[self.0], NAMES[self.1])
    }
}

/// Tabulated competitive ratio of each non-faulty pair under `case`.
/// Pairs that gather optimally have ratio 1. `None` marks a `0/0` entry.
pub fn table1_terms(case: CaseId, x: &Scalar, y: &Scalar) -> Vec<(Pair, Option<Extended>)> {
    let one = Scalar::one();
    let mid = &one - x - y;
    let opt = || Some(Extended::Finite(Scalar::one()));
    let t = |n: &Scalar, d: &Scalar| term(n.clone(), d.clone());
    let (ab, ac, ad, bc, bd, cd) = match case.0 {
        1 => (opt(), opt(), opt(), t(&(&one - y), &mid), t(&one, &(&one - x)), t(&one, y)),
        2 => (t(&(&one - y), x), opt(), opt(), opt(), t(&one, &(&one - x)), t(&one, y)),
        3 => (
            t(&(&one - y), x),
            t(&one, &(&one - y)),
            opt(),
            opt(),
            t(&one, &(&one - x)),
            t(&(&one - x), y),
        ),
        4 => (t(&one, x), t(&one, &(&one - y)), opt(), opt(), opt(), t(&(&one - x), y)),
        5 => (opt(), t(&one, &(&one - y)), opt(), t(&one, &mid), t(&one, &(&one - x)), opt()),
        _ => (t(&one, x), t(&one, &(&one - y)), opt(), t(&(&one - x), &mid), opt(), opt()),
    };
    Pair::ALL.into_iter().zip([ab, ac, ad, bc, bd, cd]).collect()
}

/// `(1/(1+φ), 1/(φ(1+φ)))`, where cases 3 to 6 all have ratio `1+φ`.
pub fn golden_point() -> (Scalar, Scalar) {
    let p = phi();
    let one_plus = Scalar::one() + &p;
    let x = one_plus.recip().expect("nonzero");
    let y = (&p * &one_plus).recip().expect("nonzero");
    (x, y)
}

pub fn region_contains(i: u8, x: &Scalar, y: &Scalar) -> Result<bool> {
    let p = phi();
    let one = Scalar::one();
    let one_plus = &one + &p;
    let inv = one_plus.recip()?;
    let upper_x = &p * &inv;
    let lower_y = (&one - x) * &inv;
    Ok(match i {
        3 => *x <= upper_x && *y >= lower_y,
        4 => *x >= inv && *y >= lower_y,
        5 => *y <= &upper_x - x,
        6 => *x >= inv && *y <= &p * &lower_y,
        _ => return Err(Error::precondition(format!("regions exist for cases 3..6, got {i}"))),
    })
}

/// First of cases 3, 4, 5, 6 whose region contains the point.
pub fn select_case(x: &Scalar, y: &Scalar) -> Result<CaseId> {
    for i in 3..=6 {
        if region_contains(i, x, y)? {
            return Ok(CaseId(i));
        }
    }
    Err(Error::internal(format!("({x}, {y}) lies in no region")))
}

/// One constant-heading phase of a case; headings are for roles a..d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CasePhase {
    pub duration: Scalar,
    pub headings: [Heading; 4],
}

/// Phases of a case in canonical coordinates, zero-length ones dropped.
pub fn case_phases(case: CaseId, fc: &FourConfig) -> Result<Vec<CasePhase>> {
    use Heading::{Left as L, Right as R};
    let one = Scalar::one();
    let (x, y) = (&fc.x, &fc.y);
    let mid = fc.middle_gap();
    let x_minus_y = x - y;
    let raw: Vec<(Scalar, [Heading; 4])> = match case.0 {
        1 => vec![(x.clone(), [R, L, L, L]), (mid.clone(), [R, R, L, L]), (y.clone(), [R, R, R, L])],
        2 => vec![(mid.clone(), [R, R, L, L]), (x.clone(), [R, L, L, L]), (y.clone(), [R, R, R, L])],
        3 => vec![
            (mid.clone(), [R, R, L, L]),
            (y.clone(), [R, L, R, L]),
            (x_minus_y, [R, L, L, L]),
            (y.clone(), [R, R, L, L]),
        ],
        4 => vec![(mid.clone(), [R, R, L, L]), (y.clone(), [R, R, R, L]), (x.clone(), [R, L, L, L])],
        5 => vec![(y.clone(), [R, L, R, L]), (x_minus_y, [R, L, L, L]), (&one - x, [R, R, L, L])],
        _ => vec![(y.clone(), [R, R, R, L]), (mid.clone(), [R, R, L, L]), (x.clone(), [R, L, L, L])],
    };
    if raw.iter().any(|(d, _)| d.is_negative()) {
        return Err(Error::precondition("negative phase length; shape violates y <= x"));
    }
    Ok(raw
        .into_iter()
        .filter(|(d, _)| !d.is_zero())
        .map(|(d, headings)| CasePhase { duration: d.half(), headings })
        .collect())
}

struct PhaseSchedule {
    /// (end time, heading per robot id)
    phases: Vec<(Scalar, Vec<Heading>)>,
}

impl Controller for PhaseSchedule {
    fn direct(&mut self, now: &Snapshot<'_>) -> Result<Directive> {
        let (end, headings) = self
            .phases
            .iter()
            .find(|(end, _)| end > now.time)
            .ok_or_else(|| Error::internal("case phases ended before all robots met"))?;
        Ok(Directive { headings: headings.clone(), until: Some(end.clone()) })
    }
}

fn scheduled_plan(
    config: &Configuration,
    phases: &[CasePhase],
    roles: [RobotId; 4],
    map: &NormalizationMap,
) -> Result<Plan> {
    let mut end = Scalar::zero();
    let mut schedule = Vec::with_capacity(phases.len());
    for ph in phases {
        end = &end + &(&map.scale * &ph.duration);
        let mut headings = vec![Heading::Hold; 4];
        for (role, id) in roles.iter().enumerate() {
            let h = ph.headings[role];
            headings[id.0] = if map.reflected { h.reversed() } else { h };
        }
        schedule.push((end.clone(), headings));
    }
    run_kernel(config, &mut PhaseSchedule { phases: schedule }, KernelLimits::default())
}

/// Plan of `case` on the canonical configuration (ids 0..4 are a..d).
pub fn case_plan(case: CaseId, fc: &FourConfig) -> Result<Plan> {
    let phases = case_phases(case, fc)?;
    let identity = NormalizationMap { shift: Scalar::zero(), scale: Scalar::one(), reflected: false };
    let roles = [RobotId(0), RobotId(1), RobotId(2), RobotId(3)];
    scheduled_plan(&fc.to_configuration(), &phases, roles, &identity)
}

/// Case selected for a four-robot configuration, with its shape.
pub fn frr_case(config: &Configuration) -> Result<(CaseId, FourConfig)> {
    let (fc, _) = normalize4(config)?;
    let case = select_case(&fc.x, &fc.y)?;
    Ok((case, fc))
}

/// Four-robot algorithm in original coordinates.
pub fn frr_plan(config: &Configuration) -> Result<Plan> {
    let (fc, map, roles) = normalize4_with_roles(config)?;
    let case = select_case(&fc.x, &fc.y)?;
    let phases = case_phases(case, &fc)?;
    scheduled_plan(config, &phases, roles, &map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::ratio;
    use crate::line_model::validate_plan;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn normalization_examples() {
        let (fc, map) = normalize4(&Configuration::from_ints(&[10, 12, 16, 18]).unwrap()).unwrap();
        assert_eq!((fc.x, fc.y, map.reflected), (q(1, 4), q(1, 4), false));
        let cfg = Configuration::new(vec![q(0, 1), q(1, 8), q(3, 4), q(1, 1)]).unwrap();
        let (fc, map) = normalize4(&cfg).unwrap();
        assert_eq!((fc.x.clone(), fc.y.clone(), map.reflected), (q(1, 4), q(1, 8), true));
        for (u, orig) in fc.positions().iter().zip([q(1, 1), q(3, 4), q(1, 8), q(0, 1)]) {
            assert_eq!(map.apply(u), orig);
        }
        assert!(normalize4(&Configuration::from_ints(&[1, 1, 1, 1]).unwrap()).is_err());
    }

    #[test]
    fn golden_point_components() {
        let (x, y) = golden_point();
        assert_eq!(x, Scalar::new(ratio(3, 2), ratio(-1, 2)));
        assert_eq!(y, Scalar::new(ratio(-2, 1), ratio(1, 1)));
        assert_eq!(x, &phi() * &y);
        let target = Extended::Finite(Scalar::one() + phi());
        for c in &CaseId::ALL[2..] {
            assert_eq!(case_cr(*c, &x, &y), target, "case {c}");
        }
        // both dominated cases carry the 1/y term, which is 2+√5 here
        let two_plus_root5 = Extended::Finite(Scalar::new(ratio(2, 1), ratio(1, 1)));
        assert_eq!(case_cr(CaseId(1), &x, &y), two_plus_root5);
        assert_eq!(case_cr(CaseId(2), &x, &y), two_plus_root5);
    }

    #[test]
    fn formula_values() {
        assert_eq!(case_cr(CaseId(5), &q(1, 4), &q(1, 4)), Extended::Finite(q(2, 1)));
        assert_eq!(case_cr(CaseId(1), &q(1, 2), &q(1, 4)), Extended::Finite(q(4, 1)));
        assert!(case_cr(CaseId(3), &q(1, 2), &q(0, 1)).is_infinite());
    }

    #[test]
    fn regions_and_selection() {
        let (gx, gy) = golden_point();
        for i in 3..=6 {
            assert!(region_contains(i, &gx, &gy).unwrap());
        }
        assert_eq!(select_case(&gx, &gy).unwrap(), CaseId(3));
        assert!(!region_contains(3, &q(1, 4), &q(1, 4)).unwrap());
        assert!(region_contains(5, &q(1, 4), &q(1, 4)).unwrap());
        assert_eq!(select_case(&q(1, 4), &q(1, 4)).unwrap(), CaseId(5));
        assert!(region_contains(3, &q(1, 2), &q(1, 3)).unwrap());
        assert!(region_contains(4, &q(1, 2), &q(1, 3)).unwrap());
        assert_eq!(select_case(&q(1, 2), &q(1, 3)).unwrap(), CaseId(3));
    }

    #[test]
    fn every_case_gathers_at_one_half() {
        let fc = FourConfig::new(q(2, 5), q(1, 5)).unwrap();
        for c in CaseId::ALL {
            let plan = case_plan(c, &fc).unwrap();
            assert_eq!(*plan.all_gather_time(), q(1, 2), "case {c}");
            assert!(validate_plan(&plan).is_clean(), "case {c}");
        }
    }

    #[test]
    fn case_five_phase_lengths() {
        let fc = FourConfig::new(q(1, 4), q(1, 4)).unwrap();
        let d: Vec<Scalar> = case_phases(CaseId(5), &fc).unwrap().into_iter().map(|p| p.duration).collect();
        assert_eq!(d, vec![q(1, 8), q(3, 8)]);
    }

    #[test]
    fn reflection_mirrors_the_plan() {
        let cfg = Configuration::new(vec![q(0, 1), q(1, 8), q(3, 4), q(1, 1)]).unwrap();
        let mirrored = cfg.map_positions(|p| Scalar::one() - p).unwrap();
        let a = frr_plan(&cfg).unwrap();
        let b = frr_plan(&mirrored).unwrap();
        assert_eq!(a.all_gather_time(), b.all_gather_time());
        for (ta, tb) in a.trajectories().iter().zip(b.trajectories()) {
            assert_eq!(*ta, tb.reflected_about(&Scalar::one()));
        }
    }

    #[test]
    fn shape_validation() {
        assert!(FourConfig::new(q(1, 4), q(1, 2)).is_err());
        assert!(FourConfig::new(q(3, 4), q(1, 2)).is_err());
        assert!(FourConfig::new(q(1, 2), q(1, 2)).is_ok());
    }
}
