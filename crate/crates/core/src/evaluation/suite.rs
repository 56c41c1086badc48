//! Built-in verification suite: every theorem bound, the tightness and
//! witness placements, the four-robot grid, and the lemma sweeps.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::Result;
use crate::exactnum::{phi, Scalar};
use crate::frr::{frr_plan, golden_point, CaseId, FourConfig};
use crate::line_model::{first_meet_time, validate_plan, Configuration, Plan, RobotId};
use crate::strategies::{
    doubling_plan, generate_plan, three_group_partition, StrategyKind,
};

use super::{
    bound_check, domain_grid, lower_bound_witness, random_config, random_config_with,
    ssi_tightness_config, table1_mismatches, theorem_bound, verify_lemmas, worst_case_cr,
    EvalRequest, Mode, RandomConfigSpec,
};

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    pub ssi_configs: usize,
    pub doubling_configs: usize,
    pub scaled_configs: usize,
    pub mtc_configs: usize,
    pub three_group_configs: usize,
    pub frr_grid: u32,
    pub lemma_density: u32,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 1,
            ssi_configs: 200,
            doubling_configs: 200,
            scaled_configs: 200,
            mtc_configs: 100,
            three_group_configs: 25,
            frr_grid: 40,
            lemma_density: 100,
        }
    }
}

impl SuiteOptions {
    /// A small configuration for smoke runs.
    pub fn quick(seed: u64) -> Self {
        SuiteOptions {
            seed,
            ssi_configs: 5,
            doubling_configs: 5,
            scaled_configs: 5,
            mtc_configs: 3,
            three_group_configs: 1,
            frr_grid: 8,
            lemma_density: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteItem {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    pub items: Vec<SuiteItem>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }
}

/// Validator tallies per strategy: plans seen, plans with violations, and
/// the first violation found.
#[derive(Default)]
struct Audit {
    by_kind: BTreeMap<&'static str, (usize, usize, Option<String>)>,
}

impl Audit {
    fn record(&mut self, kind: StrategyKind, plan: &Plan) {
        let report = validate_plan(plan);
        let entry = self.by_kind.entry(kind.name()).or_default();
        entry.0 += 1;
        if !report.is_clean() {
            entry.1 += 1;
            if entry.2.is_none() {
                let v = &report.violations[0];
                entry.2 = Some(format!(
                    "robot {} at t = {} ({}): {}",
                    v.robot, v.time, v.rule, v.detail
                ));
            }
        }
    }

    fn merge(&mut self, other: Audit) {
        for (k, (seen, bad, first)) in other.by_kind {
            let e = self.by_kind.entry(k).or_default();
            e.0 += seen;
            e.1 += bad;
            if e.2.is_none() {
                e.2 = first;
            }
        }
    }
}

fn item(name: &str, pass: bool, detail: impl Into<String>) -> SuiteItem {
    SuiteItem { name: name.to_string(), pass, detail: detail.into() }
}

fn seed_for(base: u64, row: u64, n: usize, i: usize) -> u64 {
    base.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (row << 48) ^ ((n as u64) << 32) ^ i as u64
}

/// Largest ratio among fault sets of each size `0..=f`, cumulatively.
fn worst_by_budget(plan: &Plan, f: usize) -> Result<Vec<Option<Scalar>>> {
    let req = EvalRequest::new(plan.config().clone(), f, Mode::AtMost)?;
    let report = worst_case_cr(plan, &req)?;
    let mut per_size: Vec<Option<Scalar>> = vec![None; f + 1];
    for e in report.entries {
        if let Some(r) = e.ratio {
            let slot = &mut per_size[e.faults.len()];
            if slot.as_ref().is_none_or(|w| r > *w) {
                *slot = Some(r);
            }
        }
    }
    let mut acc: Option<Scalar> = None;
    Ok(per_size
        .into_iter()
        .map(|w| {
            if let Some(w) = w {
                if acc.as_ref().is_none_or(|a| w > *a) {
                    acc = Some(w);
                }
            }
            acc.clone()
        })
        .collect())
}

/// Checks the bound of `kind` for every budget `f` in `budgets(n)` on the
/// given configurations, generating each plan once.
fn bound_row(
    name: &str,
    kind: StrategyKind,
    configs: Vec<Configuration>,
    budgets: impl Fn(usize) -> Vec<usize> + Sync,
) -> Result<(SuiteItem, Audit)> {
    let results: Vec<(Option<String>, usize, Audit)> = configs
        .par_iter()
        .map(|cfg| -> Result<(Option<String>, usize, Audit)> {
            let n = cfg.len();
            let fs = budgets(n);
            let fmax = *fs.iter().max().expect("non-empty budgets");
            let plan = generate_plan(kind, cfg, fmax, None)?;
            let mut audit = Audit::default();
            audit.record(kind, &plan);
            let worst = worst_by_budget(&plan, fmax)?;
            let mut failure = None;
            for &f in &fs {
                let bound = theorem_bound(kind, &EvalRequest::new(cfg.clone(), f, Mode::AtMost)?)?;
                if let Some(w) = &worst[f] {
                    if *w > bound && failure.is_none() {
                        failure = Some(format!("n = {n}, f = {f}: worst {w} > {bound} on {cfg}"));
                    }
                }
            }
            Ok((failure, fs.len(), audit))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut audit = Audit::default();
    let mut checks = 0;
    let mut failure = None;
    for (f, c, a) in results {
        checks += c;
        audit.merge(a);
        if failure.is_none() {
            failure = f;
        }
    }
    let it = match failure {
        None => item(name, true, format!("{checks} (config, f) checks within bound")),
        Some(why) => item(name, false, why),
    };
    Ok((it, audit))
}

fn random_rows(opts: &SuiteOptions, row: u64, ns: impl Iterator<Item = usize>, per_n: usize) -> Result<Vec<Configuration>> {
    let mut out = Vec::new();
    for n in ns {
        for i in 0..per_n {
            out.push(random_config(seed_for(opts.seed, row, n, i), n, 6, 30)?);
        }
    }
    Ok(out)
}

pub fn run(opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut items = Vec::new();
    let mut audit = Audit::default();
    let all_f = |n: usize| (0..=n - 2).collect::<Vec<_>>();

    let (it, a) = bound_row("ssi_bound", StrategyKind::Ssi, random_rows(opts, 1, 3..=7, opts.ssi_configs)?, all_f)?;
    items.push(it);
    audit.merge(a);

    let tight = |n, f| -> Result<Option<Scalar>> {
        let cfg = ssi_tightness_config(n, f, &Scalar::from_ratio(1, 10))?;
        let chk = bound_check(StrategyKind::Ssi, &EvalRequest::new(cfg, f, Mode::AtMost)?, None)?;
        Ok(chk.report.worst)
    };
    let (t1, t2) = (tight(4, 2)?, tight(5, 3)?);
    let ok = t1 == Some(Scalar::from_ratio(31, 11)) && t2 == Some(Scalar::from_ratio(41, 11));
    items.push(item(
        "ssi_tightness",
        ok,
        format!("(4,2,1/10) -> {}, (5,3,1/10) -> {}", show(&t1), show(&t2)),
    ));

    // doubling: every pair within six times its distance
    let dbl: Vec<Configuration> = (0..opts.doubling_configs)
        .map(|i| {
            let n = 2 + i % 7;
            let spec = RandomConfigSpec { n, max_denominator: 1, lo: -50, hi: 50, allow_duplicates: false };
            random_config_with(seed_for(opts.seed, 3, n, i), &spec)
        })
        .collect::<Result<_>>()?;
    let dbl_out: Vec<(Option<String>, Audit)> = dbl
        .par_iter()
        .map(|cfg| -> Result<(Option<String>, Audit)> {
            let plan = doubling_plan(cfg)?;
            let mut a = Audit::default();
            a.record(StrategyKind::Doubling, &plan);
            for i in 0..cfg.len() {
                for j in i + 1..cfg.len() {
                    let (ri, rj) = (RobotId(i), RobotId(j));
                    let d = (cfg.position(ri) - cfg.position(rj)).abs();
                    let t = first_meet_time(plan.trajectory(ri), plan.trajectory(rj));
                    if t.as_ref().is_none_or(|t| *t > Scalar::from_int(6) * &d) {
                        return Ok((Some(format!("pair ({i},{j}) of {cfg}")), a));
                    }
                }
            }
            Ok((None, a))
        })
        .collect::<Result<_>>()?;
    let mut fail = None;
    for (f, a) in dbl_out {
        audit.merge(a);
        fail = fail.or(f);
    }
    items.push(item(
        "doubling_pairs",
        fail.is_none(),
        fail.unwrap_or_else(|| format!("{} configs, all pairs within 6d", dbl.len())),
    ));

    let scaled: Vec<Configuration> = (0..opts.scaled_configs)
        .map(|i| random_config(seed_for(opts.seed, 4, 2 + i % 6, i), 2 + i % 6, 6, 20))
        .collect::<Result<_>>()?;
    let (it, a) = bound_row("scaled_doubling_bound", StrategyKind::ScaledDoubling, scaled, |n| vec![n - 2])?;
    items.push(it);
    audit.merge(a);

    let (it, a) = bound_row("mtc_bound", StrategyKind::Mtc, random_rows(opts, 5, 3..=9, opts.mtc_configs)?, |n| {
        (0..=(n - 1) / 2).collect()
    })?;
    items.push(it);
    audit.merge(a);
    let cfg = Configuration::from_ints(&[0, 1, 2])?;
    let chk = bound_check(StrategyKind::Mtc, &EvalRequest::new(cfg, 1, Mode::AtMost)?, None)?;
    audit.record(StrategyKind::Mtc, &chk.plan);
    items.push(item(
        "mtc_tight",
        chk.report.worst == Some(Scalar::from_int(2)),
        format!("{{0,1,2}}, f = 1 -> {}", show(&chk.report.worst)),
    ));

    let tg_budgets = |n: usize| (0..n).filter(|f| 3 * f < 2 * (n - 1)).collect::<Vec<_>>();
    let (it, a) = bound_row(
        "three_group_bound",
        StrategyKind::ThreeGroup,
        random_rows(opts, 6, 9..=12, opts.three_group_configs)?,
        tg_budgets,
    )?;
    items.push(it);
    audit.merge(a);
    items.push(partition_property()?);

    let (it, a) = frr_grid(opts.frr_grid)?;
    items.push(it);
    audit.merge(a);
    let (gx, gy) = golden_point();
    let golden = Configuration::new(vec![Scalar::zero(), gx, Scalar::one() - &gy, Scalar::one()])?;
    let chk = bound_check(StrategyKind::Frr, &EvalRequest::new(golden, 2, Mode::Exactly)?, None)?;
    audit.record(StrategyKind::Frr, &chk.plan);
    let cap = Scalar::one() + phi();
    items.push(item(
        "frr_golden_point",
        chk.report.worst.as_ref() == Some(&cap),
        format!("worst_cr = {}", show(&chk.report.worst)),
    ));

    items.push(table1(opts.frr_grid)?);

    let lemmas = verify_lemmas(opts.lemma_density)?;
    items.push(item(
        "lemma_sweeps",
        lemmas.is_clean(),
        match lemmas.violations.first() {
            None => format!("{} grid points, no violations", lemmas.points),
            Some(v) => format!("{} violations, first: {} at ({}, {})", lemmas.violations.len(), v.check, v.x, v.y),
        },
    ));

    let (it, a) = witnesses()?;
    items.push(it);
    audit.merge(a);

    for (kind, (seen, bad, first)) in audit.by_kind {
        items.push(item(
            &format!("validator_{kind}"),
            bad == 0,
            match first {
                None => format!("{seen} plans clean"),
                Some(v) => format!("{bad} of {seen} plans violate; first: {v}"),
            },
        ));
    }
    Ok(SuiteReport { items })
}

fn show(v: &Option<Scalar>) -> String {
    v.as_ref().map_or_else(|| "undefined".to_string(), |s| s.to_string())
}

/// Every fault set below the budget leaves two of the three groups with a
/// non-faulty robot. Group membership depends only on rank.
fn partition_property() -> Result<SuiteItem> {
    for n in 9..=12usize {
        let spec = three_group_partition(n)?;
        let groups: Vec<u32> = (0..n).map(|r| spec.group_of_rank(r) as u32).collect();
        for mask in 0u32..(1 << n) {
            let f = mask.count_ones() as usize;
            if 3 * f >= 2 * (n - 1) {
                continue;
            }
            let mut alive = [false; 3];
            for (r, g) in groups.iter().enumerate() {
                if mask & (1 << r) == 0 {
                    alive[*g as usize] = true;
                }
            }
            if alive.iter().filter(|a| **a).count() < 2 {
                return Ok(item("three_group_partition", false, format!("n = {n}, faulty ranks mask {mask:#b}")));
            }
        }
    }
    Ok(item("three_group_partition", true, "n = 9..12, all fault sets below the budget"))
}

fn frr_grid(density: u32) -> Result<(SuiteItem, Audit)> {
    let cap = Scalar::one() + phi();
    let grid = domain_grid(density);
    let out: Vec<(Option<String>, Audit)> = grid
        .par_iter()
        .map(|(x, y)| -> Result<(Option<String>, Audit)> {
            let fc = FourConfig::new(x.clone(), y.clone())?;
            let cfg = fc.to_configuration();
            let plan = frr_plan(&cfg)?;
            let mut a = Audit::default();
            a.record(StrategyKind::Frr, &plan);
            let report = worst_case_cr(&plan, &EvalRequest::new(cfg, 2, Mode::Exactly)?)?;
            let bad = report.worst.as_ref().filter(|w| **w > cap).map(|w| format!("({x}, {y}): worst {w}"));
            Ok((bad, a))
        })
        .collect::<Result<_>>()?;
    let mut audit = Audit::default();
    let mut fail = None;
    for (f, a) in out {
        audit.merge(a);
        fail = fail.or(f);
    }
    let it = item(
        "frr_grid",
        fail.is_none(),
        fail.unwrap_or_else(|| format!("{} grid points within 1+phi", grid.len())),
    );
    Ok((it, audit))
}

fn table1(density: u32) -> Result<SuiteItem> {
    let grid = domain_grid(density);
    let bad: Vec<String> = grid
        .par_iter()
        .map(|(x, y)| -> Result<Vec<String>> {
            let fc = FourConfig::new(x.clone(), y.clone())?;
            let mut out = Vec::new();
            for c in CaseId::ALL {
                for m in table1_mismatches(c, &fc)? {
                    out.push(format!(
                        "case {} pair {} at ({x}, {y}): simulated {} vs table {}",
                        c,
                        m.pair,
                        m.simulated,
                        m.tabulated.map_or("0/0".into(), |t| t.to_string())
                    ));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(item(
        "pair_table_agreement",
        bad.is_empty(),
        bad.first().cloned().unwrap_or_else(|| format!("{} points x 6 cases agree", grid.len())),
    ))
}

fn witnesses() -> Result<(SuiteItem, Audit)> {
    let mut audit = Audit::default();
    let mut checked = 0;
    for n in 3..=6usize {
        for f in 1..=2usize {
            if f + 2 > n {
                continue;
            }
            let cfg = lower_bound_witness(n, f)?;
            for kind in StrategyKind::ALL {
                let mode = if kind == StrategyKind::Frr { Mode::Exactly } else { Mode::AtMost };
                let req = EvalRequest::new(cfg.clone(), f, mode)?;
                if theorem_bound(kind, &req).is_err() {
                    continue;
                }
                let chk = bound_check(kind, &req, None)?;
                audit.record(kind, &chk.plan);
                checked += 1;
                if chk.report.worst.as_ref().is_none_or(|w| *w < Scalar::from_int(2)) {
                    let it = item(
                        "lower_bound_witness",
                        false,
                        format!("{kind} at n = {n}, f = {f}: worst {}", show(&chk.report.worst)),
                    );
                    return Ok((it, audit));
                }
            }
        }
    }
    Ok((item("lower_bound_witness", true, format!("{checked} (strategy, n, f) checks reach 2")), audit))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_runs() {
        let report = run(&SuiteOptions::quick(3)).unwrap();
        let names: Vec<&str> = report.items.iter().map(|i| i.name.as_str()).collect();
        for expected in ["ssi_bound", "frr_golden_point", "lemma_sweeps", "validator_mtc"] {
            assert!(names.contains(&expected), "{expected} missing from {names:?}");
        }
        let golden = report.items.iter().find(|i| i.name == "frr_golden_point").unwrap();
        assert!(golden.pass);
        assert_eq!(golden.detail, "worst_cr = 3/2+(1/2)*r5");
    }
}
