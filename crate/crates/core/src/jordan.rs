//! Multiplicative Jordan–Chevalley decomposition by the additive
//! Chevalley–Newton iteration: iterate `x <- x - g(x) g'(x)^{-1}` on the
//! squarefree part `g` of the characteristic polynomial, entirely inside
//! the matrix algebra generated by the input. Purely rational; no
//! eigenvalue extraction over field extensions.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::subspace::Subspace;

/// Polynomial with ascending coefficients over the scalar field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<K: Scalar>(Vec<K>);

impl<K: Scalar> Poly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, K::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(K::zero());
        }
        Poly(coeffs)
    }

    pub fn coeffs(&self) -> &[K] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(K::is_zero)
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn derivative(&self) -> Poly<K> {
        if self.0.len() <= 1 {
            return Poly::new(vec![K::zero()]);
        }
        Poly::new(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.mul(&K::from_int(i as i64 + 1)))
                .collect(),
        )
    }

    pub fn monic(&self) -> Poly<K> {
        let lead = self.0.last().unwrap();
        if lead.is_zero() || *lead == K::one() {
            return self.clone();
        }
        let inv = lead.inv().unwrap();
        Poly::new(self.0.iter().map(|c| c.mul(&inv)).collect())
    }

    /// Euclidean remainder of `self` by `rhs` (`rhs` nonzero).
    pub fn rem(&self, rhs: &Poly<K>) -> Poly<K> {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let dr = rhs.degree();
        if dr == 0 {
            // nonzero constants are units
            return Poly::new(vec![K::zero()]);
        }
        let mut r = self.0.clone();
        let lead_inv = rhs.0[dr].inv().expect("nonzero leading coefficient");
        while r.len() > dr {
            let k = r.len() - 1;
            if !r[k].is_zero() {
                let q = r[k].mul(&lead_inv);
                for i in 0..=dr {
                    let idx = k - dr + i;
                    r[idx] = r[idx].sub(&q.mul(&rhs.0[i]));
                }
            }
            r.pop();
        }
        Poly::new(r)
    }

    pub fn gcd(&self, rhs: &Poly<K>) -> Poly<K> {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Exact quotient; panics if the division is not exact.
    pub fn div_exact(&self, rhs: &Poly<K>) -> Poly<K> {
        assert!(!rhs.is_zero());
        let mut r = self.0.clone();
        let dr = rhs.degree();
        let lead_inv = rhs.0[dr].inv().expect("nonzero leading coefficient");
        let dq = self.degree().saturating_sub(dr);
        let mut q = vec![K::zero(); dq + 1];
        for k in (dr..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let c = r[k].mul(&lead_inv);
            q[k - dr] = c.clone();
            for i in 0..=dr {
                let idx = k - dr + i;
                r[idx] = r[idx].sub(&c.mul(&rhs.0[i]));
            }
        }
        assert!(r.iter().all(K::is_zero), "inexact polynomial division");
        Poly::new(q)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix<K>) -> Matrix<K> {
        let n = m.rows();
        let mut acc = Matrix::zero(n, n);
        for c in self.0.iter().rev() {
            acc = m.mul(&acc);
            if !c.is_zero() {
                acc = acc.add(&Matrix::identity(n).scale(c));
            }
        }
        acc
    }
}

pub struct JordanChevalley<K: Scalar> {
    pub semisimple: Matrix<K>,
    pub unipotent: Matrix<K>,
}

/// Factors an invertible square matrix as `semisimple * unipotent` with
/// commuting factors.
pub fn jordan_chevalley<K: Scalar>(m: &Matrix<K>) -> Result<JordanChevalley<K>> {
    if m.rows() != m.cols() {
        return Err(Error::Dimension("jordan_chevalley needs a square matrix".into()));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(JordanChevalley { semisimple: m.clone(), unipotent: m.clone() });
    }
    if m.rank() != n {
        return Err(Error::NotInvertible);
    }
    let chi = Poly::new(m.charpoly());
    let g = chi.div_exact(&chi.gcd(&chi.derivative())).monic();
    let g_prime = g.derivative();

    let mut x = m.clone();
    let iterations = (usize::BITS - (n.max(1) - 1).leading_zeros()) as usize + 1;
    for _ in 0..iterations {
        let gx = g.eval_matrix(&x);
        if gx.is_zero() {
            break;
        }
        let gpx_inv = g_prime.eval_matrix(&x).inverse().map_err(|_| {
            Error::Internal("derivative not invertible during Newton iteration".into())
        })?;
        x = x.sub(&gx.mul(&gpx_inv));
    }
    if !g.eval_matrix(&x).is_zero() {
        return Err(Error::Internal("Newton iteration did not converge".into()));
    }
    let semisimple = x;
    let unipotent = semisimple.inverse()?.mul(m);
    Ok(JordanChevalley { semisimple, unipotent })
}

/// Kernel of `m - lambda id`.
pub fn eigenspace<K: Scalar>(m: &Matrix<K>, lambda: &K) -> Subspace<K> {
    assert_eq!(m.rows(), m.cols(), "eigenspace of a non-square matrix");
    let shifted = m.sub(&Matrix::identity(m.rows()).scale(lambda));
    Subspace::from_rows(shifted.kernel_basis())
}

/// Minimal polynomial, computed from the linear dependencies of the powers
/// of the matrix (used by tests to certify squarefreeness).
pub fn minimal_polynomial<K: Scalar>(m: &Matrix<K>) -> Poly<K> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let flat = |a: &Matrix<K>| -> Vec<K> {
        (0..n).flat_map(|i| a.row(i)).collect()
    };
    let mut power = Matrix::identity(n);
    let mut stacked: Vec<Vec<K>> = vec![flat(&power)];
    loop {
        power = power.mul(m);
        // does the new power lie in the span of the previous ones?
        let prev = Matrix::from_rows(stacked.clone());
        let target = flat(&power);
        if let Some(coeffs) = prev.transpose().solve(&target) {
            let mut poly = coeffs.iter().map(Scalar::neg).collect::<Vec<_>>();
            poly.push(K::one());
            return Poly::new(poly).monic();
        }
        stacked.push(target);
    }
}

pub fn is_nilpotent<K: Scalar>(m: &Matrix<K>) -> bool {
    let n = m.rows();
    let mut power = m.clone();
    for _ in 0..n {
        if power.is_zero() {
            return true;
        }
        power = power.mul(m);
    }
    power.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn m(rows: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_int_rows(rows)
    }

    #[test]
    fn diagonalizable_input_is_its_own_semisimple_part() {
        let a = m(&[&[2, 0], &[0, 3]]);
        let jc = jordan_chevalley(&a).unwrap();
        assert_eq!(jc.semisimple, a);
        assert_eq!(jc.unipotent, Matrix::identity(2));
    }

    #[test]
    fn jordan_block() {
        let a = m(&[&[2, 1], &[0, 2]]);
        let jc = jordan_chevalley(&a).unwrap();
        assert_eq!(jc.semisimple, m(&[&[2, 0], &[0, 2]]));
        let expected = Matrix::from_rows(vec![
            vec![Rat::from_int(1), crate::scalar::rat_from_str("1/2").unwrap()],
            vec![Rat::from_int(0), Rat::from_int(1)],
        ]);
        assert_eq!(jc.unipotent, expected);
        assert_eq!(jc.semisimple.mul(&jc.unipotent), a);
        assert_eq!(jc.semisimple.mul(&jc.unipotent), jc.unipotent.mul(&jc.semisimple));
        assert!(is_nilpotent(&jc.unipotent.sub(&Matrix::identity(2))));
    }

    #[test]
    fn unipotent_input() {
        let u = m(&[&[1, 3, -2], &[0, 1, 5], &[0, 0, 1]]);
        let jc = jordan_chevalley(&u).unwrap();
        assert_eq!(jc.semisimple, Matrix::identity(3));
        assert_eq!(jc.unipotent, u);
    }

    #[test]
    fn singular_rejected() {
        assert!(matches!(jordan_chevalley(&m(&[&[1, 1], &[1, 1]])), Err(Error::NotInvertible)));
    }

    #[test]
    fn eigenspace_of_diagonal() {
        let a = m(&[&[1, 0], &[0, 2]]);
        let e2 = eigenspace(&a, &Rat::from_int(2));
        assert_eq!(e2.dim(), 1);
        assert!(e2.contains_vector(&[Rat::from_int(0), Rat::from_int(1)]));
        let e1 = eigenspace(&Matrix::<Rat>::identity(3), &Rat::from_int(1));
        assert!(e1.is_full());
    }

    #[test]
    fn minpoly_of_projection() {
        // x^2 - x on a projection
        let p = m(&[&[1, 0], &[0, 0]]);
        let mp = minimal_polynomial(&p);
        assert_eq!(mp.coeffs(), &[Rat::from_int(0), Rat::from_int(-1), Rat::from_int(1)]);
    }
}
