use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::{phi, Scalar};
use crate::frr::{case_cr, case_plan, region_contains, table1_terms, CaseId, Extended, FourConfig, Pair};
use crate::line_model::{gather_time, RobotId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaViolation {
    pub check: String,
    pub x: Scalar,
    pub y: Scalar,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaReport {
    pub points: usize,
    pub violations: Vec<LemmaViolation>,
}

impl LemmaReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Domain points `(p/d, q/d)` with `0 ≤ q ≤ p` and `p + q ≤ d`, row by row.
pub fn domain_grid(density: u32) -> Vec<(Scalar, Scalar)> {
    let d = density as i64;
    (0..=d)
        .flat_map(|p| (0..=p.min(d - p)).map(move |q| (Scalar::from_ratio(p, d), Scalar::from_ratio(q, d))))
        .collect()
}

/// Checks f₆ ≤ f₁, f₄ ≤ f₂, coverage by the four regions, and that each
/// region is exactly where its case stays within `1+φ`.
pub fn verify_lemmas(density: u32) -> Result<LemmaReport> {
    if density == 0 {
        return Err(Error::precondition("grid density must be at least 1"));
    }
    let cap = Extended::Finite(Scalar::one() + phi());
    let grid = domain_grid(density);
    let violations: Vec<LemmaViolation> = grid
        .par_iter()
        .map(|(x, y)| -> Result<Vec<LemmaViolation>> {
            let f = |i: u8| case_cr(CaseId::new(i).expect("valid"), x, y);
            let mut bad = Vec::new();
            let mut flag = |check: String| bad.push(LemmaViolation { check, x: x.clone(), y: y.clone() });
            if f(6) > f(1) {
                flag("f6 <= f1".into());
            }
            if f(4) > f(2) {
                flag("f4 <= f2".into());
            }
            let mut covered = false;
            for i in 3..=6 {
                let inside = region_contains(i, x, y)?;
                covered |= inside;
                if inside != (f(i) <= cap) {
                    flag(format!("region {i} soundness"));
                }
            }
            if !covered {
                flag("coverage".into());
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(LemmaReport { points: grid.len(), violations })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table1Mismatch {
    pub case: CaseId,
    pub pair: Pair,
    pub simulated: Scalar,
    pub tabulated: Option<Extended>,
}

/// Pairs whose simulated ratio under `case` differs from the table entry.
/// Pairs that start together are not compared.
pub fn table1_mismatches(case: CaseId, fc: &FourConfig) -> Result<Vec<Table1Mismatch>> {
    let plan = case_plan(case, fc)?;
    let pos = fc.positions();
    let mut out = Vec::new();
    for (pair, tabulated) in table1_terms(case, &fc.x, &fc.y) {
        let d = &pos[pair.1] - &pos[pair.0];
        if d.is_zero() {
            continue;
        }
        let t = gather_time(&plan, &[RobotId(pair.0), RobotId(pair.1)])?;
        let simulated = t / d.half();
        if tabulated.as_ref().and_then(Extended::finite) != Some(&simulated) {
            out.push(Table1Mismatch { case, pair, simulated, tabulated });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_point_values() {
        let (x, y) = (Scalar::from_ratio(1, 2), Scalar::from_ratio(1, 4));
        let v = |i| case_cr(CaseId::new(i).unwrap(), &x, &y);
        assert_eq!(v(4), Extended::Finite(Scalar::from_int(2)));
        assert_eq!(v(2), Extended::Finite(Scalar::from_int(4)));
        assert_eq!(v(6), Extended::Finite(Scalar::from_int(2)));
        assert_eq!(v(1), Extended::Finite(Scalar::from_int(4)));
    }

    #[test]
    fn coarse_grid_is_clean() {
        let r = verify_lemmas(12).unwrap();
        assert_eq!(r.points, domain_grid(12).len());
        assert!(r.is_clean(), "{:?}", r.violations);
    }

    #[test]
    fn grid_shape() {
        assert_eq!(domain_grid(2).len(), 4); // (0,0) (1/2,0) (1/2,1/2) (1,0)
    }

    #[test]
    fn table_matches_simulation_at_a_generic_point() {
        let fc = FourConfig::new(Scalar::from_ratio(2, 5), Scalar::from_ratio(1, 5)).unwrap();
        for c in CaseId::ALL {
            assert_eq!(table1_mismatches(c, &fc).unwrap(), vec![], "case {c}");
        }
    }
}
