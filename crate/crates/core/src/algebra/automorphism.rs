use serde::{Deserialize, Serialize};

use crate::algebra::table::MultTableAlgebra;
use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, vec_sub, Mat};

/// The `π ∘ τ_s` factorization of an automorphism built from Dynkin data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    /// 0-based node permutation.
    pub perm: Vec<usize>,
    pub charge: Vec<i64>,
    /// Modulus of the toral factor.
    pub charge_modulus: u32,
}

/// Invertible multiplicative map with `matrix^period = 1`.
///
/// The matrix acts on coordinate columns: column `j` is the image of `b_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteOrderAutomorphism {
    matrix: Mat,
    period: u32,
    factorization: Option<Factorization>,
}

impl FiniteOrderAutomorphism {
    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn period(&self) -> u32 {
        self.period
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn factorization(&self) -> Option<&Factorization> {
        self.factorization.as_ref()
    }

    pub(crate) fn with_factorization(mut self, f: Factorization) -> Self {
        self.factorization = Some(f);
        self
    }

    /// Matrix of `σ^e` for any integer `e`.
    pub fn power(&self, e: i64) -> Mat {
        let m = self.period as i64;
        self.matrix.pow(e.rem_euclid(m) as u64)
    }

    pub fn inverse_matrix(&self) -> Mat {
        self.power(-1)
    }

    pub fn apply(&self, v: &[CycloNum]) -> Vec<CycloNum> {
        self.matrix.mul_vec(v)
    }

    /// Same map over `Q(ζ_n)`.
    pub fn embed(&self, n: u32) -> Result<Self> {
        Ok(FiniteOrderAutomorphism {
            matrix: self.matrix.embed(n)?,
            period: self.period,
            factorization: self.factorization.clone(),
        })
    }

    /// Re-declare with a multiple of the current period.
    pub fn with_period(mut self, period: u32) -> Result<Self> {
        if period == 0 || !period.is_multiple_of(self.period) {
            return Err(Error::PeriodViolated(period));
        }
        self.period = period;
        Ok(self)
    }

    pub fn to_json(&self) -> AutomorphismJson {
        AutomorphismJson {
            period: self.period,
            matrix: self.matrix.to_rows(),
        }
    }
}

/// Wire format of an automorphism.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AutomorphismJson {
    pub period: u32,
    pub matrix: Vec<Vec<CycloNum>>,
}

impl AutomorphismJson {
    pub fn into_matrix(self, order: u32) -> Result<Mat> {
        let n = self.matrix.len();
        let mut rows = Vec::with_capacity(n);
        for row in self.matrix {
            if row.len() != n {
                return Err(Error::Dimension("automorphism matrix must be square".into()));
            }
            let row = row
                .into_iter()
                .map(|c| if c.order() == order { Ok(c) } else { c.embed(order) })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok(Mat::from_rows(rows, n, order))
    }
}

/// Check that `cand` is an automorphism of `alg` of period `period`.
///
/// Checks run in the order dimensions, invertibility, period, multiplicativity,
/// and the first failure is returned.
pub fn check_automorphism(alg: &MultTableAlgebra, cand: &Mat, period: u32) -> Result<FiniteOrderAutomorphism> {
    let n = alg.dim();
    if cand.rows() != n || cand.cols() != n {
        return Err(Error::Dimension(format!(
            "{}x{} matrix for an algebra of dimension {n}",
            cand.rows(),
            cand.cols()
        )));
    }
    if period == 0 {
        return Err(Error::PeriodViolated(0));
    }
    if cand.order() != alg.scalar_order() {
        return Err(Error::ScalarOrder {
            order: alg.scalar_order(),
            period: cand.order(),
        });
    }
    if cand.rank() != n {
        return Err(Error::NotInvertible);
    }
    if !cand.pow(period as u64).is_identity() {
        return Err(Error::PeriodViolated(period));
    }
    let images: Vec<_> = (0..n).map(|j| cand.column(j)).collect();
    for i in 0..n {
        for j in 0..n {
            let lhs = {
                let mut v = vec![CycloNum::zero(alg.scalar_order()); n];
                for (k, c) in alg.basis_product(i, j) {
                    crate::linalg::vec_axpy(&mut v, c, &images[*k]);
                }
                v
            };
            let rhs = alg.multiply(&images[i], &images[j]);
            if !is_zero_vec(&vec_sub(&lhs, &rhs)) {
                return Err(Error::NotMultiplicative(
                    alg.label(i).to_string(),
                    alg.label(j).to_string(),
                ));
            }
        }
    }
    Ok(FiniteOrderAutomorphism {
        matrix: cand.clone(),
        period,
        factorization: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::table::sl2;

    fn diag(entries: &[i64]) -> Mat {
        let d: Vec<_> = entries.iter().map(|&x| CycloNum::from_int(1, x)).collect();
        Mat::diagonal(&d, 1)
    }

    #[test]
    fn identity_is_accepted_for_any_period() {
        for m in 1..5 {
            assert!(check_automorphism(&sl2(1), &Mat::identity(3, 1), m).is_ok());
        }
    }

    #[test]
    fn sign_flip_on_root_vectors() {
        let s = check_automorphism(&sl2(1), &diag(&[1, -1, -1]), 2).unwrap();
        assert_eq!(s.period(), 2);
        assert!(s.power(2).is_identity());
        assert_eq!(s.inverse_matrix(), *s.matrix());
    }

    #[test]
    fn scaling_e_by_two_fails_period_first() {
        let err = check_automorphism(&sl2(1), &diag(&[1, 2, 1]), 2).unwrap_err();
        assert!(matches!(err, Error::PeriodViolated(2)));
    }

    #[test]
    fn non_multiplicative_reports_witness() {
        // e ↦ -e alone breaks [e, f] = h.
        let err = check_automorphism(&sl2(1), &diag(&[1, -1, 1]), 2).unwrap_err();
        match err {
            Error::NotMultiplicative(a, b) => assert_eq!((a.as_str(), b.as_str()), ("e", "f")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let err = check_automorphism(&sl2(1), &diag(&[1, 0, 1]), 2).unwrap_err();
        assert!(matches!(err, Error::NotInvertible));
    }

    #[test]
    fn wrong_size_rejected() {
        assert!(matches!(
            check_automorphism(&sl2(1), &Mat::identity(2, 1), 1),
            Err(Error::Dimension(_))
        ));
    }
}
