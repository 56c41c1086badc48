use crate::error::{Error, Result};
use crate::exactnum::{phi, Scalar};
use crate::line_model::Plan;
use crate::strategies::{generate_plan, three_group_boundary, StrategyKind};

use super::{worst_case_cr, CrReport, EvalRequest, Mode};

/// Proven upper bound on the worst-case ratio of `kind` at this request,
/// or the hypothesis that fails.
pub fn theorem_bound(kind: StrategyKind, request: &EvalRequest) -> Result<Scalar> {
    let n = request.config.len();
    let f = request.f;
    let fail = |why: &str| Err(Error::precondition(format!("{kind} bound needs {why} (n = {n}, f = {f})")));
    match kind {
        StrategyKind::Ssi => {
            if n < 3 || f + 2 > n {
                return fail("n >= 3 and f <= n-2");
            }
            Ok(Scalar::from_int(f as i64 + 1))
        }
        StrategyKind::Doubling | StrategyKind::ScaledDoubling => {
            if !request.config.all_rational() {
                return fail("rational positions");
            }
            Ok(Scalar::from_int(12))
        }
        StrategyKind::Mtc => {
            if n < 3 || 2 * f > n - 1 {
                return fail("n >= 3 and f <= (n-1)/2");
            }
            Ok(Scalar::from_int(2))
        }
        StrategyKind::ThreeGroup => {
            if n < 9 || 3 * f >= 2 * (n - 1) {
                return fail("n >= 9 and f < 2(n-1)/3");
            }
            Ok(Scalar::from_int(5))
        }
        StrategyKind::Frr => {
            if n != 4 || f != 2 || request.mode != Mode::Exactly {
                return fail("n = 4, f = 2 and exactly-f enumeration");
            }
            Ok(Scalar::one() + phi())
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub strategy: StrategyKind,
    pub bound: Scalar,
    pub report: CrReport,
    /// `bound - worst`; `None` if every fault set was skipped.
    pub margin: Option<Scalar>,
    pub pass: bool,
    /// `f` sits on an excluded boundary of the theorem's range.
    pub boundary: bool,
    pub plan: Plan,
}

pub fn bound_check(
    kind: StrategyKind,
    request: &EvalRequest,
    epsilon: Option<&Scalar>,
) -> Result<BoundCheck> {
    let bound = theorem_bound(kind, request)?;
    let plan = generate_plan(kind, &request.config, request.f, epsilon)?;
    let report = worst_case_cr(&plan, request)?;
    let margin = report.worst.as_ref().map(|w| &bound - w);
    let pass = margin.as_ref().is_none_or(|m| !m.is_negative());
    let boundary = kind == StrategyKind::ThreeGroup && three_group_boundary(request.config.len(), request.f);
    Ok(BoundCheck { strategy: kind, bound, report, margin, pass, boundary, plan })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frr::golden_point;
    use crate::line_model::Configuration;

    #[test]
    fn mtc_tight_on_three() {
        let req = EvalRequest::new(Configuration::from_ints(&[0, 1, 2]).unwrap(), 1, Mode::AtMost).unwrap();
        let chk = bound_check(StrategyKind::Mtc, &req, None).unwrap();
        assert!(chk.pass);
        assert_eq!(chk.margin, Some(Scalar::zero()));
    }

    #[test]
    fn frr_tight_at_golden_point() {
        let (x, y) = golden_point();
        let cfg = Configuration::new(vec![Scalar::zero(), x, Scalar::one() - &y, Scalar::one()]).unwrap();
        let req = EvalRequest::new(cfg, 2, Mode::Exactly).unwrap();
        let chk = bound_check(StrategyKind::Frr, &req, None).unwrap();
        assert_eq!(chk.report.worst, Some(Scalar::one() + phi()));
        assert_eq!(chk.margin, Some(Scalar::zero()));
    }

    #[test]
    fn hypotheses_are_enforced() {
        let cfg = Configuration::from_ints(&[0, 1, 2, 3]).unwrap();
        let req = EvalRequest::new(cfg.clone(), 2, Mode::AtMost).unwrap();
        assert!(matches!(bound_check(StrategyKind::Mtc, &req, None), Err(Error::Precondition(_))));
        assert!(matches!(bound_check(StrategyKind::Frr, &req, None), Err(Error::Precondition(_))));
        assert!(bound_check(StrategyKind::Ssi, &req, None).unwrap().pass);
    }
}
