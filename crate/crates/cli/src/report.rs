//! Serialized reports. Every scalar appears twice: the exact canonical text
//! and a 12-significant-digit decimal.

use std::fmt::Write as _;

use byzline_core::evaluation::suite::SuiteReport;
use byzline_core::evaluation::{CrReport, FaultSet};
use byzline_core::exactnum::Scalar;
use byzline_core::Plan;
use serde::Serialize;

use crate::config::RunConfig;

fn exact(v: &Scalar) -> String {
    v.to_string()
}

fn decimal(v: &Scalar) -> String {
    v.to_report_decimal()
}

fn ids(set: &FaultSet) -> Vec<usize> {
    set.ids().iter().map(|id| id.0).collect()
}

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub positions: Vec<String>,
    pub f: usize,
    pub algorithm: String,
    pub mode: String,
    pub epsilon: Option<String>,
}

impl From<&RunConfig> for ConfigEcho {
    fn from(cfg: &RunConfig) -> Self {
        ConfigEcho {
            positions: cfg.request.config.positions().iter().map(exact).collect(),
            f: cfg.request.f,
            algorithm: cfg.algorithm.name().to_string(),
            mode: cfg.request.mode.name().to_string(),
            epsilon: cfg.epsilon.as_ref().map(exact),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PlanSummary {
    pub all_gather_time_exact: String,
    pub all_gather_time_decimal: String,
    pub events: usize,
}

impl From<&Plan> for PlanSummary {
    fn from(plan: &Plan) -> Self {
        PlanSummary {
            all_gather_time_exact: exact(plan.all_gather_time()),
            all_gather_time_decimal: decimal(plan.all_gather_time()),
            events: plan.events().len(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Row {
    pub fault_ids: Vec<usize>,
    #[serde(rename = "T")]
    pub t: String,
    #[serde(rename = "D")]
    pub d: String,
    pub cr_exact: Option<String>,
    pub cr_decimal: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub plan: PlanSummary,
    pub rows: Vec<Row>,
    pub worst_cr_exact: Option<String>,
    pub worst_cr_decimal: Option<String>,
    pub worst_fault_ids: Option<Vec<usize>>,
    pub bound: Option<String>,
    pub bound_decimal: Option<String>,
    /// `None` when the theorem's hypotheses do not cover the request.
    pub pass: Option<bool>,
    pub note: Option<String>,
}

impl RunReport {
    pub fn new(cfg: &RunConfig, plan: &Plan, report: &CrReport, bound: Result<Scalar, String>) -> Self {
        let rows = report
            .entries
            .iter()
            .map(|e| Row {
                fault_ids: ids(&e.faults),
                t: exact(&e.gather_time),
                d: exact(&e.diameter),
                cr_exact: e.ratio.as_ref().map(exact),
                cr_decimal: e.ratio.as_ref().map(decimal),
            })
            .collect();
        let (bound, pass, note) = match bound {
            Ok(b) => {
                let pass = report.worst.as_ref().is_none_or(|w| *w <= b);
                (Some(b), Some(pass), None)
            }
            Err(why) => (None, None, Some(why)),
        };
        RunReport {
            config: cfg.into(),
            plan: plan.into(),
            rows,
            worst_cr_exact: report.worst.as_ref().map(exact),
            worst_cr_decimal: report.worst.as_ref().map(decimal),
            worst_fault_ids: report.argmax.as_ref().map(ids),
            bound_decimal: bound.as_ref().map(decimal),
            bound: bound.as_ref().map(exact),
            pass,
            note,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("fault_ids,T,D,cr_exact,cr_decimal\n");
        for r in &self.rows {
            let faults: Vec<String> = r.fault_ids.iter().map(usize::to_string).collect();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                faults.join(";"),
                r.t,
                r.d,
                r.cr_exact.as_deref().unwrap_or(""),
                r.cr_decimal.as_deref().unwrap_or("")
            );
        }
        out
    }
}

/// Time-major samples at every breakpoint of any robot.
pub fn trajectory_csv(plan: &Plan) -> String {
    let mut times: Vec<&Scalar> = plan.trajectories().iter().flat_map(|t| t.breakpoints().iter().map(|(t, _)| t)).collect();
    times.sort();
    times.dedup();
    let mut out = String::from("t,robot,x,t_decimal,x_decimal\n");
    for t in times {
        for (id, traj) in plan.config().ids().zip(plan.trajectories()) {
            let x = traj.position_at(t).expect("t is within the plan");
            let _ = writeln!(out, "{t},{},{x},{},{}", id.0, decimal(t), decimal(&x));
        }
    }
    out
}

#[derive(Debug, Serialize)]
pub struct PlanDocument {
    pub summary: PlanSummary,
    pub trajectories: Vec<Vec<[String; 2]>>,
    pub events: Vec<EventDocument>,
}

#[derive(Debug, Serialize)]
pub struct EventDocument {
    pub t: String,
    pub x: String,
    pub robots: Vec<usize>,
}

pub fn plan_json(plan: &Plan) -> String {
    let doc = PlanDocument {
        summary: plan.into(),
        trajectories: plan
            .trajectories()
            .iter()
            .map(|t| t.breakpoints().iter().map(|(t, x)| [exact(t), exact(x)]).collect())
            .collect(),
        events: plan
            .events()
            .iter()
            .map(|e| EventDocument { t: exact(&e.time), x: exact(&e.position), robots: e.robots.iter().map(|r| r.0).collect() })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data") + "\n"
}

#[derive(Debug, Serialize)]
pub struct SuiteDocument<'a> {
    pub all_pass: bool,
    pub items: Vec<SuiteRow<'a>>,
}

#[derive(Debug, Serialize)]
pub struct SuiteRow<'a> {
    pub name: &'a str,
    pub pass: bool,
    pub detail: &'a str,
}

pub fn suite_text(report: &SuiteReport) -> String {
    let mut out = String::new();
    for item in &report.items {
        let verdict = if item.pass { "pass" } else { "FAIL" };
        let _ = writeln!(out, "{}: {}, {verdict}", item.name, item.detail);
    }
    let _ = writeln!(out, "overall: {}", if report.all_pass() { "pass" } else { "FAIL" });
    out
}

pub fn suite_json(report: &SuiteReport) -> String {
    let doc = SuiteDocument {
        all_pass: report.all_pass(),
        items: report
            .items
            .iter()
            .map(|i| SuiteRow { name: &i.name, pass: i.pass, detail: &i.detail })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("plain data") + "\n"
}

/// One row of the FRR sweep.
pub struct SweepRow {
    pub x: Scalar,
    pub y: Scalar,
    pub case: String,
    pub worst: Scalar,
    pub worst_pair: String,
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("x,y,case,worst_cr,worst_fault_pair,x_decimal,y_decimal,worst_cr_decimal\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.x,
            r.y,
            r.case,
            r.worst,
            r.worst_pair,
            decimal(&r.x),
            decimal(&r.y),
            decimal(&r.worst)
        );
    }
    out
}
