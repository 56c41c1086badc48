//! Competitive-ratio evaluation: fault-set enumeration, ratios against the
//! offline optimum `D/2`, theorem bounds, and the standard test placements.

mod bounds;
mod configs;
mod lemmas;
pub mod suite;

pub use bounds::{bound_check, theorem_bound, BoundCheck};
pub use configs::{
    lower_bound_witness, random_config, random_config_with, ssi_tightness_config,
    RandomConfigSpec,
};
pub use lemmas::{domain_grid, table1_mismatches, verify_lemmas, LemmaReport, LemmaViolation, Table1Mismatch};

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exactnum::Scalar;
use crate::line_model::{diameter, gather_time, Configuration, ContactIndex, Plan, RobotId};

/// Which fault-set sizes to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    Exactly,
    #[default]
    AtMost,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exactly => "exactly",
            Mode::AtMost => "at-most",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exactly" | "exactly_f" => Ok(Mode::Exactly),
            "at-most" | "at_most" | "at_most_f" => Ok(Mode::AtMost),
            _ => Err(Error::precondition(format!("unknown mode `{s}`"))),
        }
    }
}

/// Robots hypothesized faulty, ascending by id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FaultSet {
    ids: Vec<RobotId>,
}

impl FaultSet {
    pub fn new(mut ids: Vec<RobotId>, n: usize) -> Result<Self> {
        ids.sort();
        ids.dedup();
        if ids.iter().any(|id| id.0 >= n) {
            return Err(Error::precondition("fault id out of range"));
        }
        if ids.len() + 2 > n {
            return Err(Error::precondition(format!(
                "{} faults leave fewer than two robots out of {n}",
                ids.len()
            )));
        }
        Ok(FaultSet { ids })
    }

    pub fn ids(&self) -> &[RobotId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn complement(&self, n: usize) -> Vec<RobotId> {
        (0..n).map(RobotId).filter(|id| !self.ids.contains(id)).collect()
    }
}

impl fmt::Display for FaultSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.ids.iter().map(|id| id.0).join(","))
    }
}

/// All fault sets for `n` robots and budget `f`, by size then lexicographically.
pub fn fault_sets(n: usize, f: usize, mode: Mode) -> Vec<FaultSet> {
    let sizes = match mode {
        Mode::Exactly => f..=f,
        Mode::AtMost => 0..=f,
    };
    sizes
        .flat_map(|k| (0..n).combinations(k))
        .map(|c| FaultSet { ids: c.into_iter().map(RobotId).collect() })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalRequest {
    pub config: Configuration,
    pub f: usize,
    pub mode: Mode,
}

impl EvalRequest {
    pub fn new(config: Configuration, f: usize, mode: Mode) -> Result<Self> {
        if f + 2 > config.len() {
            return Err(Error::precondition(format!(
                "fault budget f = {f} exceeds n - 2 = {}",
                config.len() as i64 - 2
            )));
        }
        Ok(EvalRequest { config, f, mode })
    }
}

/// `D/2` for the given non-faulty robots.
pub fn offline_time(config: &Configuration, nonfaulty: &[RobotId]) -> Result<Scalar> {
    Ok(diameter(config, nonfaulty)?.half())
}

fn ratio_of(gather: &Scalar, diameter: &Scalar) -> Option<Scalar> {
    if diameter.is_zero() {
        gather.is_zero().then(Scalar::one)
    } else {
        Some(gather / &diameter.half())
    }
}

/// Ratio for one fault set; `None` when `D = 0` but the robots still need
/// time to gather.
pub fn competitive_ratio(plan: &Plan, faults: &FaultSet) -> Result<Option<Scalar>> {
    let good = faults.complement(plan.len());
    let t = gather_time(plan, &good)?;
    let d = diameter(plan.config(), &good)?;
    Ok(ratio_of(&t, &d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrEntry {
    pub faults: FaultSet,
    pub gather_time: Scalar,
    pub diameter: Scalar,
    pub ratio: Option<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrReport {
    pub entries: Vec<CrEntry>,
    /// Largest defined ratio; `None` if every set was skipped.
    pub worst: Option<Scalar>,
    /// First fault set attaining `worst`.
    pub argmax: Option<FaultSet>,
}

impl CrReport {
    pub fn skipped(&self) -> impl Iterator<Item = &FaultSet> {
        self.entries.iter().filter(|e| e.ratio.is_none()).map(|e| &e.faults)
    }
}

pub fn worst_case_cr(plan: &Plan, request: &EvalRequest) -> Result<CrReport> {
    if plan.config() != &request.config {
        return Err(Error::precondition("request configuration differs from the plan's"));
    }
    let n = plan.len();
    let index = ContactIndex::build(plan)?;
    let sets = fault_sets(n, request.f, request.mode);
    let mut entries = Vec::with_capacity(sets.len());
    for faults in sets {
        let good = faults.complement(n);
        let gather_time = index.gather_time(&good)?;
        let diameter = diameter(plan.config(), &good)?;
        let ratio = ratio_of(&gather_time, &diameter);
        entries.push(CrEntry { faults, gather_time, diameter, ratio });
    }
    let mut worst: Option<&CrEntry> = None;
    for e in &entries {
        if let Some(r) = &e.ratio {
            if worst.and_then(|w| w.ratio.as_ref()).is_none_or(|w| r > w) {
                worst = Some(e);
            }
        }
    }
    let (worst, argmax) = match worst {
        Some(e) => (e.ratio.clone(), Some(e.faults.clone())),
        None => (None, None),
    };
    Ok(CrReport { entries, worst, argmax })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategies::{mtc_plan, ssi_plan};

    fn ids(v: &[usize]) -> Vec<RobotId> {
        v.iter().map(|&i| RobotId(i)).collect()
    }

    #[test]
    fn enumeration_order() {
        let sets: Vec<String> = fault_sets(4, 2, Mode::AtMost).iter().map(|s| s.to_string()).collect();
        assert_eq!(sets[..6], ["{}", "{0}", "{1}", "{2}", "{3}", "{0,1}"]);
        assert_eq!(sets.len(), 11);
        assert_eq!(fault_sets(4, 2, Mode::Exactly).len(), 6);
    }

    #[test]
    fn offline_times() {
        let cfg = Configuration::from_ints(&[-1, 1, 2]).unwrap();
        assert_eq!(offline_time(&cfg, &ids(&[0, 2])).unwrap(), Scalar::from_ratio(3, 2));
        assert_eq!(offline_time(&cfg, &ids(&[1])).unwrap(), Scalar::zero());
        assert_eq!(offline_time(&cfg, &ids(&[0, 1])).unwrap(), Scalar::one());
    }

    #[test]
    fn single_ratios() {
        let cfg = Configuration::from_ints(&[0, 1, 2]).unwrap();
        let plan = mtc_plan(&cfg, 1).unwrap();
        let faults = FaultSet::new(ids(&[0]), 3).unwrap();
        assert_eq!(competitive_ratio(&plan, &faults).unwrap(), Some(Scalar::from_int(2)));

        let plan = ssi_plan(&Configuration::from_ints(&[0, 5]).unwrap()).unwrap();
        let none = FaultSet::new(vec![], 2).unwrap();
        assert_eq!(competitive_ratio(&plan, &none).unwrap(), Some(Scalar::one()));
    }

    #[test]
    fn mtc_worst_case() {
        let cfg = Configuration::from_ints(&[0, 1, 2, 4]).unwrap();
        let plan = mtc_plan(&cfg, 1).unwrap();
        let req = EvalRequest::new(cfg, 1, Mode::AtMost).unwrap();
        let report = worst_case_cr(&plan, &req).unwrap();
        assert_eq!(report.entries.len(), 5);
        assert_eq!(report.worst, Some(Scalar::from_ratio(4, 3)));
        assert_eq!(report.argmax.unwrap().ids(), ids(&[0]));
    }

    #[test]
    fn colocated_survivors() {
        let cfg = Configuration::from_ints(&[0, 0, 3]).unwrap();
        let plan = ssi_plan(&cfg).unwrap();
        let req = EvalRequest::new(cfg, 1, Mode::Exactly).unwrap();
        let report = worst_case_cr(&plan, &req).unwrap();
        // {0,1} start together: ratio 1 by convention
        assert_eq!(report.entries[2].ratio, Some(Scalar::one()));
        assert_eq!(report.skipped().count(), 0);
    }

    #[test]
    fn budget_validation() {
        let cfg = Configuration::from_ints(&[0, 1]).unwrap();
        assert!(EvalRequest::new(cfg.clone(), 1, Mode::AtMost).is_err());
        assert!(EvalRequest::new(cfg, 0, Mode::AtMost).is_ok());
        assert!(FaultSet::new(ids(&[0, 1]), 3).is_err());
    }
}
