use byzline_core::evaluation::suite::{self, SuiteOptions};
use byzline_core::evaluation::{theorem_bound, worst_case_cr, EvalRequest, Mode};
use byzline_core::exactnum::Scalar;
use byzline_core::frr::{frr_plan, select_case, FourConfig};
use byzline_core::{generate_plan, Plan};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::report::{self, RunReport, SweepRow};
use crate::svg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

/// Output text plus whether the run should end in a verification failure.
pub struct Output {
    pub text: String,
    pub failure: Option<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, failure: None }
    }
}

fn unsupported(cmd: &str, format: Format) -> CliError {
    CliError::Config(format!("`{cmd}` does not support --format {format:?}").to_lowercase())
}

fn plan_for(cfg: &RunConfig) -> CliResult<Plan> {
    Ok(generate_plan(cfg.algorithm, &cfg.request.config, cfg.request.f, cfg.epsilon.as_ref())?)
}

pub fn simulate(cfg: &RunConfig, format: Option<Format>) -> CliResult<Output> {
    let plan = plan_for(cfg)?;
    match format.unwrap_or(Format::Csv) {
        Format::Csv => Ok(Output::ok(report::trajectory_csv(&plan))),
        Format::Json => Ok(Output::ok(report::plan_json(&plan))),
        Format::Svg => Ok(Output::ok(svg::render(&plan))),
    }
}

pub fn evaluate(cfg: &RunConfig, format: Option<Format>) -> CliResult<Output> {
    let plan = plan_for(cfg)?;
    let cr = worst_case_cr(&plan, &cfg.request)?;
    let bound = theorem_bound(cfg.algorithm, &cfg.request).map_err(|e| e.to_string());
    let run = RunReport::new(cfg, &plan, &cr, bound);
    let text = match format.unwrap_or(Format::Json) {
        Format::Json => run.to_json(),
        Format::Csv => run.to_csv(),
        f @ Format::Svg => return Err(unsupported("evaluate", f)),
    };
    let failure = (run.pass == Some(false)).then(|| {
        format!(
            "worst CR {} exceeds the bound {}",
            run.worst_cr_exact.as_deref().unwrap_or("?"),
            run.bound.as_deref().unwrap_or("?")
        )
    });
    Ok(Output { text, failure })
}

pub struct VerifyArgs {
    pub seed: u64,
    pub grid: Option<u32>,
    pub quick: bool,
}

pub fn verify(args: &VerifyArgs, format: Option<Format>) -> CliResult<Output> {
    let mut opts = if args.quick { SuiteOptions::quick(args.seed) } else { SuiteOptions { seed: args.seed, ..SuiteOptions::default() } };
    if let Some(g) = args.grid {
        if g == 0 {
            return Err(CliError::Config("--grid must be at least 1".into()));
        }
        opts.frr_grid = g;
    }
    let result = suite::run(&opts)?;
    let text = match format {
        None => report::suite_text(&result),
        Some(Format::Json) => report::suite_json(&result),
        Some(f) => return Err(unsupported("verify", f)),
    };
    let failed: Vec<&str> = result.items.iter().filter(|i| !i.pass).map(|i| i.name.as_str()).collect();
    let failure = (!failed.is_empty()).then(|| format!("failing items: {}", failed.join(", ")));
    Ok(Output { text, failure })
}

fn fault_letters(ids: &[usize]) -> String {
    ids.iter().map(|&i| char::from(b'a' + i as u8)).collect()
}

/// Worst ratio of the FRR strategy on every grid point `(p/d, q/d)` of the
/// normalized domain.
pub fn sweep(grid: u32, format: Option<Format>) -> CliResult<Output> {
    if let Some(f @ (Format::Json | Format::Svg)) = format {
        return Err(unsupported("sweep", f));
    }
    if grid == 0 {
        return Err(CliError::Config("--grid must be at least 1".into()));
    }
    let d = i64::from(grid);
    let mut rows = Vec::new();
    for p in 0..=d {
        for q in 0..=p.min(d - p) {
            let (x, y) = (Scalar::from_ratio(p, d), Scalar::from_ratio(q, d));
            let fc = FourConfig::new(x.clone(), y.clone())?;
            let config = fc.to_configuration();
            let plan = frr_plan(&config)?;
            let cr = worst_case_cr(&plan, &EvalRequest::new(config, 2, Mode::Exactly)?)?;
            let worst = cr.worst.ok_or_else(|| CliError::Core(byzline_core::Error::Internal("no defined ratio".into())))?;
            let argmax: Vec<usize> = cr.argmax.map(|s| s.ids().iter().map(|r| r.0).collect()).unwrap_or_default();
            rows.push(SweepRow {
                case: select_case(&x, &y)?.to_string(),
                x,
                y,
                worst,
                worst_pair: fault_letters(&argmax),
            });
        }
    }
    Ok(Output::ok(report::sweep_csv(&rows)))
}

pub fn plot(cfg: &RunConfig, format: Option<Format>) -> CliResult<Output> {
    match format {
        None | Some(Format::Svg) => Ok(Output::ok(svg::render(&plan_for(cfg)?))),
        Some(f) => Err(unsupported("plot", f)),
    }
}
