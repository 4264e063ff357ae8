//! Rational weak splittings of a weight filtration from a filtered
//! automorphism: if `gr(phi)` acts on `Gr_p` by `alpha^p`, the eigenspaces
//! of the semisimple part of `phi` recover a grading with
//! `W_p = ⊕_{q<=p} V_q`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::filtration::Filtration;
use crate::jordan::{eigenspace, jordan_chevalley};
use crate::matrix::Matrix;
use crate::scalar::{rat_pow, Rat, Scalar};
use crate::subspace::{Quotient, Subspace};

fn check_alpha(alpha: &Rat) -> Result<()> {
    if Scalar::is_zero(alpha) {
        return Err(Error::Precondition("alpha must be nonzero".into()));
    }
    Ok(())
}

fn is_root_of_unity(alpha: &Rat) -> bool {
    // the only rational roots of unity are 1 and -1
    alpha == &Rat::from_int(1) || alpha == &Rat::from_int(-1)
}

/// The grading automorphism acting by `alpha^p` on the weight-`p` piece of
/// a grading `p -> V_p` whose pieces span the whole space directly.
pub fn psi_alpha<K: Scalar>(
    grading: &BTreeMap<i64, Subspace<K>>,
    alpha: &Rat,
) -> Result<Matrix<K>> {
    check_alpha(alpha)?;
    let ambient = grading
        .values()
        .next()
        .map(Subspace::ambient)
        .ok_or_else(|| Error::Invalid("empty grading".into()))?;
    let mut rows: Vec<Vec<K>> = Vec::new();
    let mut scalars: Vec<K> = Vec::new();
    for (&p, s) in grading {
        if s.ambient() != ambient {
            return Err(Error::Dimension("grading pieces live in different spaces".into()));
        }
        let factor = K::from_rat(&rat_pow(alpha, p));
        for i in 0..s.dim() {
            rows.push(s.basis().row(i));
            scalars.push(factor.clone());
        }
    }
    if rows.len() != ambient {
        return Err(Error::Invalid("grading pieces do not span the space directly".into()));
    }
    // columns of C are the graded basis vectors; psi acts by C D C^{-1}
    let c = Matrix::from_rows(rows).transpose();
    let c_inv = c.inverse().map_err(|_| Error::Invalid("grading pieces are dependent".into()))?;
    let mut d = Matrix::zero(ambient, ambient);
    for (i, s) in scalars.iter().enumerate() {
        d.set(i, i, s.clone());
    }
    Ok(c.mul(&d).mul(&c_inv))
}

/// A filtration-preserving invertible matrix.
#[derive(Clone, Debug)]
pub struct FilteredAutomorphism {
    filtration: Filtration<Rat>,
    matrix: Matrix<Rat>,
}

impl FilteredAutomorphism {
    pub fn new(filtration: Filtration<Rat>, matrix: Matrix<Rat>) -> Result<Self> {
        let n = filtration.ambient();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::Dimension("automorphism shape mismatch".into()));
        }
        if matrix.rank() != n {
            return Err(Error::NotInvertible);
        }
        for p in filtration.jump_indices() {
            let level = filtration.level(p);
            if !level.contains(&level.image_under(&matrix)) {
                return Err(Error::Precondition(format!(
                    "automorphism does not preserve the filtration at {p}"
                )));
            }
        }
        Ok(FilteredAutomorphism { filtration, matrix })
    }

    pub fn matrix(&self) -> &Matrix<Rat> {
        &self.matrix
    }

    pub fn filtration(&self) -> &Filtration<Rat> {
        &self.filtration
    }

    /// The matrices induced on the graded pieces, keyed by jump index.
    pub fn induced_on_gr(&self) -> Result<BTreeMap<i64, Matrix<Rat>>> {
        let mut out = BTreeMap::new();
        for p in self.filtration.jump_indices() {
            let piece = Quotient::new(self.filtration.level(p), &self.filtration.level(p - 1))?;
            if piece.dim() == 0 {
                continue;
            }
            let images = self.matrix.apply_to_rows(&piece.representatives());
            let induced = piece
                .class_matrix(&images)
                .ok_or_else(|| Error::Internal("gr image escaped its level".into()))?;
            out.insert(p, induced);
        }
        Ok(out)
    }

    /// True when the induced graded action is multiplication by `alpha^p`
    /// on every piece.
    pub fn gr_acts_as_psi_alpha(&self, alpha: &Rat) -> Result<bool> {
        for (p, induced) in self.induced_on_gr()? {
            let factor = Rat::from_rat(&rat_pow(alpha, p));
            let expected = Matrix::identity(induced.rows()).scale(&factor);
            if induced != expected {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The grading extracted from an automorphism: `V_p` is the
/// `alpha^p`-eigenspace of the semisimple part.
pub struct WeightGrading {
    pub pieces: BTreeMap<i64, Subspace<Rat>>,
}

pub fn splitting_from_automorphism(
    phi: &FilteredAutomorphism,
    alpha: &Rat,
) -> Result<WeightGrading> {
    check_alpha(alpha)?;
    if is_root_of_unity(alpha) {
        return Err(Error::Precondition(
            "alpha must not be a root of unity (only ±1 in Q; both rejected)".into(),
        ));
    }
    if !phi.gr_acts_as_psi_alpha(alpha)? {
        return Err(Error::Precondition("gr(phi) is not psi_alpha".into()));
    }
    let semisimple = jordan_chevalley(phi.matrix())?.semisimple;
    let filtration = phi.filtration();
    let mut pieces = BTreeMap::new();
    for p in filtration.jump_indices() {
        let lambda = Rat::from_rat(&rat_pow(alpha, p));
        let v = eigenspace(&semisimple, &lambda);
        if !v.is_zero() {
            pieces.insert(p, v);
        }
    }
    // W_p = ⊕_{q<=p} V_q, exactly
    let ambient = filtration.ambient();
    for p in filtration.jump_indices() {
        let mut acc = Subspace::zero(ambient);
        let mut dim_sum = 0;
        for (&q, v) in &pieces {
            if q <= p {
                acc = acc.sum(v)?;
                dim_sum += v.dim();
            }
        }
        if acc != filtration.level(p) || dim_sum != acc.dim() {
            return Err(Error::Internal(format!(
                "eigenspace grading does not rebuild the filtration at {p}"
            )));
        }
    }
    Ok(WeightGrading { pieces })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn psi_on_single_weight_is_scalar() {
        let mut grading = BTreeMap::new();
        grading.insert(0, Subspace::<Rat>::full(2));
        let psi = psi_alpha(&grading, &rat(7)).unwrap();
        assert_eq!(psi, Matrix::identity(2));
    }

    #[test]
    fn psi_multiplicativity() {
        let mut grading = BTreeMap::new();
        grading.insert(0, Subspace::span_of(2, &[vec![rat(1), rat(1)]]));
        grading.insert(1, Subspace::span_of(2, &[vec![rat(0), rat(1)]]));
        let a = crate::scalar::rat_from_str("2").unwrap();
        let b = crate::scalar::rat_from_str("3").unwrap();
        let ab = &a * &b;
        let psi_a = psi_alpha(&grading, &a).unwrap();
        let psi_b = psi_alpha(&grading, &b).unwrap();
        let psi_ab = psi_alpha(&grading, &ab).unwrap();
        assert_eq!(psi_a.mul(&psi_b), psi_ab);
    }

    #[test]
    fn splitting_of_two_step_example() {
        // W_0 = span(e1) ⊂ W_1 = Q², phi = [[1,1],[0,2]], alpha = 2
        let mut levels = BTreeMap::new();
        levels.insert(0, Subspace::span_of(2, &[vec![rat(1), rat(0)]]));
        levels.insert(1, Subspace::full(2));
        let w = Filtration::from_levels(2, levels).unwrap();
        let phi =
            FilteredAutomorphism::new(w, Matrix::from_int_rows(&[&[1, 1], &[0, 2]])).unwrap();
        let grading = splitting_from_automorphism(&phi, &rat(2)).unwrap();
        assert_eq!(grading.pieces[&0], Subspace::span_of(2, &[vec![rat(1), rat(0)]]));
        assert_eq!(grading.pieces[&1], Subspace::span_of(2, &[vec![rat(1), rat(1)]]));
    }

    #[test]
    fn trivial_weight_splitting() {
        let w = Filtration::trivial(3, 5);
        // alpha^5 id
        let alpha = rat(2);
        let scale = Rat::from_rat(&rat_pow(&alpha, 5));
        let phi = FilteredAutomorphism::new(w, Matrix::identity(3).scale(&scale)).unwrap();
        let grading = splitting_from_automorphism(&phi, &alpha).unwrap();
        assert!(grading.pieces[&5].is_full());
    }

    #[test]
    fn wrong_graded_action_rejected() {
        let w = Filtration::trivial(2, 1);
        let phi = FilteredAutomorphism::new(w, Matrix::identity(2)).unwrap();
        // gr acts by 1, not by alpha^1 = 2
        assert!(matches!(
            splitting_from_automorphism(&phi, &rat(2)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn roots_of_unity_rejected() {
        let w = Filtration::<Rat>::trivial(1, 0);
        let phi = FilteredAutomorphism::new(w, Matrix::identity(1)).unwrap();
        assert!(splitting_from_automorphism(&phi, &rat(-1)).is_err());
        assert!(splitting_from_automorphism(&phi, &rat(1)).is_err());
        assert!(splitting_from_automorphism(&phi, &rat(0)).is_err());
    }
}
