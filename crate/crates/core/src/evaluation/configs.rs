use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactnum::{Rational, Scalar};
use crate::line_model::Configuration;

/// Three clusters at −1, 0, 1 of sizes ⌈(f+1)/2⌉, n−f−1, ⌊(f+1)/2⌋.
pub fn lower_bound_witness(n: usize, f: usize) -> Result<Configuration> {
    if n < 3 || f < 1 || f + 2 > n {
        return Err(Error::precondition(format!("witness needs n >= 3 and 1 <= f <= n-2 (n = {n}, f = {f})")));
    }
    let left = (f + 2) / 2;
    let right = f.div_ceil(2);
    let mut pos = vec![-1i64; left];
    pos.extend(std::iter::repeat_n(0, n - f - 1));
    pos.extend(std::iter::repeat_n(1, right));
    Configuration::from_ints(&pos)
}

/// Robots at 1..=f, one at f+1, and the remaining n−f−1 at f+2+eps.
pub fn ssi_tightness_config(n: usize, f: usize, eps: &Scalar) -> Result<Configuration> {
    if !eps.is_positive() || f + 2 > n {
        return Err(Error::precondition("tightness config needs eps > 0 and f <= n-2"));
    }
    let mut pos: Vec<Scalar> = (1..=f as i64 + 1).map(Scalar::from_int).collect();
    let far = Scalar::from_int(f as i64 + 2) + eps;
    pos.extend(std::iter::repeat_n(far, n - f - 1));
    Configuration::new(pos)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomConfigSpec {
    pub n: usize,
    pub max_denominator: u64,
    pub lo: i64,
    pub hi: i64,
    pub allow_duplicates: bool,
}

/// Distinct rationals in `[0, span]` with denominators up to `max_denominator`.
pub fn random_config(seed: u64, n: usize, max_denominator: u64, span: i64) -> Result<Configuration> {
    random_config_with(
        seed,
        &RandomConfigSpec { n, max_denominator, lo: 0, hi: span, allow_duplicates: false },
    )
}

/// Seeded positions sorted left to right, so robot ids follow position order.
pub fn random_config_with(seed: u64, spec: &RandomConfigSpec) -> Result<Configuration> {
    if spec.n < 2 || spec.max_denominator == 0 || spec.lo > spec.hi {
        return Err(Error::precondition("random config needs n >= 2, a positive denominator bound and lo <= hi"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(spec.n);
    let mut attempts = 0usize;
    while out.len() < spec.n {
        attempts += 1;
        if attempts > 1000 * spec.n {
            return Err(Error::precondition("range too small for distinct positions"));
        }
        let den = rng.random_range(1..=spec.max_denominator) as i64;
        let num = rng.random_range(spec.lo * den..=spec.hi * den);
        let v = Rational::new(num.into(), den.into());
        if spec.allow_duplicates || seen.insert(v.clone()) {
            out.push(v);
        }
    }
    out.sort();
    Configuration::new(out.into_iter().map(Scalar::from_rational).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(cfg: &Configuration) -> Vec<Scalar> {
        cfg.positions().to_vec()
    }

    #[test]
    fn witness_shapes() {
        let w = |n, f| ints(&lower_bound_witness(n, f).unwrap());
        let s = |v: &[i64]| v.iter().map(|&x| Scalar::from_int(x)).collect::<Vec<_>>();
        assert_eq!(w(4, 2), s(&[-1, -1, 0, 1]));
        assert_eq!(w(3, 1), s(&[-1, 0, 1]));
        assert_eq!(w(5, 2), s(&[-1, -1, 0, 0, 1]));
        assert!(lower_bound_witness(3, 2).is_err());
    }

    #[test]
    fn tightness_shapes() {
        let c = ssi_tightness_config(4, 2, &Scalar::from_ratio(1, 10)).unwrap();
        assert_eq!(c.positions()[3], Scalar::from_ratio(41, 10));
        let c = ssi_tightness_config(3, 1, &Scalar::one()).unwrap();
        assert_eq!(ints(&c), vec![Scalar::from_int(1), Scalar::from_int(2), Scalar::from_int(4)]);
    }

    #[test]
    fn seeded_and_sorted() {
        let a = random_config(7, 6, 5, 10).unwrap();
        assert_eq!(a, random_config(7, 6, 5, 10).unwrap());
        assert_ne!(a, random_config(8, 6, 5, 10).unwrap());
        let p = a.positions();
        assert!(p.windows(2).all(|w| w[0] < w[1]));
        assert!(p.iter().all(|x| !x.is_negative() && *x <= Scalar::from_int(10)));
    }

    #[test]
    fn too_narrow_for_distinct() {
        let spec = RandomConfigSpec { n: 5, max_denominator: 1, lo: 0, hi: 2, allow_duplicates: false };
        assert!(random_config_with(1, &spec).is_err());
        let spec = RandomConfigSpec { allow_duplicates: true, ..spec };
        assert_eq!(random_config_with(1, &spec).unwrap().len(), 5);
    }
}
