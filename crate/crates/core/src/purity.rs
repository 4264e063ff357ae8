//! Purity of the weight grading of homology: all mass on the line
//! `p = alpha * n`, optionally only through a degree bound.

use std::collections::BTreeMap;

use crate::bigraded::BigradedComplex;
use crate::error::{Error, Result};
use crate::scalar::{Rat, Scalar};

/// The purity slope; any nonzero rational is allowed (negative slopes
/// arise for chain-level weights dual to cohomological ones).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PurityParams {
    alpha: Rat,
}

impl PurityParams {
    pub fn new(alpha: Rat) -> Result<Self> {
        if Scalar::is_zero(&alpha) {
            return Err(Error::Precondition("alpha must be nonzero".into()));
        }
        Ok(PurityParams { alpha })
    }

    pub fn alpha(&self) -> &Rat {
        &self.alpha
    }

    /// `p = alpha * n`, exactly.
    pub fn on_line(&self, n: i64, p: i64) -> bool {
        &(Rat::from_int(n) * &self.alpha) == &Rat::from_int(p)
    }

    /// The canonical truncation threshold `ceil(p / alpha)`.
    pub fn threshold(&self, p: i64) -> i64 {
        crate::scalar::rat_ceil(&(Rat::from_int(p) / &self.alpha))
    }
}

#[derive(Clone, Debug)]
pub struct PurityReport {
    pub alpha: Rat,
    /// degree bound actually applied (homology checked in degrees `<= q+1`)
    pub upto: Option<i64>,
    /// per-cell graded homology dimensions
    pub homology: BTreeMap<(i64, i64), usize>,
    /// cells with mass off the purity line
    pub violations: Vec<(i64, i64)>,
}

impl PurityReport {
    pub fn is_pure(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Purity of the per-cell homology of a bigraded complex. With
/// `upto = Some(q)` only degrees `n <= q + 1` are examined.
pub fn purity_check<K: Scalar>(
    b: &BigradedComplex<K>,
    params: &PurityParams,
    upto: Option<i64>,
) -> Result<PurityReport> {
    let homology = b.homology_dims()?;
    Ok(purity_of_dims(&homology, params, upto))
}

/// Purity of explicitly given graded dimensions (used for homology of MHS
/// complexes where the grading comes from the weight filtration).
pub fn purity_of_dims(
    homology: &BTreeMap<(i64, i64), usize>,
    params: &PurityParams,
    upto: Option<i64>,
) -> PurityReport {
    let mut violations = Vec::new();
    for (&(n, p), &dim) in homology {
        if dim == 0 {
            continue;
        }
        if let Some(q) = upto {
            if n > q + 1 {
                continue;
            }
        }
        if !params.on_line(n, p) {
            violations.push((n, p));
        }
    }
    PurityReport {
        alpha: params.alpha().clone(),
        upto,
        homology: homology.clone(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_from_str;
    use std::collections::BTreeMap;

    fn params(s: &str) -> PurityParams {
        PurityParams::new(rat_from_str(s).unwrap()).unwrap()
    }

    #[test]
    fn zero_alpha_rejected() {
        assert!(PurityParams::new(Rat::from_int(0)).is_err());
    }

    #[test]
    fn punctured_plane_profile_is_four_thirds_pure() {
        // homology in degree 3 and weight 4, plus the point class
        let mut dims = BTreeMap::new();
        dims.insert((0, 0), 1);
        dims.insert((3, 4), 1);
        let b = BigradedComplex::<Rat>::new(dims, BTreeMap::new()).unwrap();
        let report = purity_check(&b, &params("4/3"), None).unwrap();
        assert!(report.is_pure());
        let report1 = purity_check(&b, &params("1"), None).unwrap();
        assert_eq!(report1.violations, vec![(3, 4)]);
    }

    #[test]
    fn mixed_profile_is_impure_for_alpha_one() {
        let mut dims = BTreeMap::new();
        dims.insert((1, 1), 1);
        dims.insert((2, 3), 1);
        let b = BigradedComplex::<Rat>::new(dims, BTreeMap::new()).unwrap();
        let report = purity_check(&b, &params("1"), None).unwrap();
        assert_eq!(report.violations, vec![(2, 3)]);
    }

    #[test]
    fn degree_bound_hides_high_violations() {
        let mut dims = BTreeMap::new();
        dims.insert((1, 1), 1);
        dims.insert((5, 2), 1);
        let b = BigradedComplex::<Rat>::new(dims, BTreeMap::new()).unwrap();
        assert!(purity_check(&b, &params("1"), Some(2)).unwrap().is_pure());
        assert!(!purity_check(&b, &params("1"), Some(4)).unwrap().is_pure());
    }

    #[test]
    fn thresholds_round_up() {
        let p = params("4/3");
        assert_eq!(p.threshold(4), 3);
        assert_eq!(p.threshold(2), 2);
        let neg = params("-2");
        assert_eq!(neg.threshold(-2), 1);
        assert_eq!(neg.threshold(-3), 2);
        assert_eq!(neg.threshold(-1), 1);
    }
}
