use serde::Serialize;

use crate::algebra::automorphism::FiniteOrderAutomorphism;
use crate::algebra::table::MultTableAlgebra;
use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, unit_vec, Mat, Vector};

/// `Z/mZ`-grading `A = ⊕ A_ī` with an exact basis per residue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedDecomposition {
    period: u32,
    order: u32,
    dim: usize,
    components: Vec<Vec<Vector>>,
    /// Columns are the component bases, concatenated in residue order.
    change: Mat,
    change_inv: Mat,
    offsets: Vec<usize>,
}

impl GradedDecomposition {
    /// Assemble a grading from explicit component bases.
    ///
    /// Only checks that the bases together form a basis of `A`; the product
    /// rule is checked separately by [`GradedDecomposition::check_product_rule`].
    pub fn from_components(dim: usize, order: u32, components: Vec<Vec<Vector>>) -> Result<Self> {
        let period = components.len() as u32;
        if period == 0 {
            return Err(Error::Input("a grading needs at least one component".into()));
        }
        let total: usize = components.iter().map(Vec::len).sum();
        if total != dim {
            return Err(Error::NotDiagonalizable { got: total, expected: dim });
        }
        let mut offsets = Vec::with_capacity(components.len() + 1);
        let mut columns = Vec::with_capacity(dim);
        offsets.push(0);
        for comp in &components {
            for v in comp {
                if v.len() != dim || v.iter().any(|c| c.order() != order) {
                    return Err(Error::Dimension("component vector has wrong shape".into()));
                }
                columns.push(v.clone());
            }
            offsets.push(columns.len());
        }
        let change = Mat::from_columns(&columns, dim, order);
        let change_inv = change.inverse().ok_or_else(|| {
            Error::Verification("grading components are not independent".into())
        })?;
        Ok(GradedDecomposition {
            period,
            order,
            dim,
            components,
            change,
            change_inv,
            offsets,
        })
    }

    /// The one-component grading of `A`.
    pub fn trivial(alg: &MultTableAlgebra) -> Self {
        let n = alg.dim();
        let order = alg.scalar_order();
        let basis = (0..n).map(|i| unit_vec(n, i, order)).collect();
        Self::from_components(n, order, vec![basis]).expect("standard basis is a basis")
    }

    pub fn period(&self) -> u32 {
        self.period
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn residue(&self, degree: i64) -> usize {
        degree.rem_euclid(self.period as i64) as usize
    }

    pub fn component(&self, residue: usize) -> &[Vector] {
        &self.components[residue]
    }

    pub fn component_at(&self, degree: i64) -> &[Vector] {
        &self.components[self.residue(degree)]
    }

    pub fn components(&self) -> &[Vec<Vector>] {
        &self.components
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }

    /// Columns are the graded basis.
    pub fn change_of_basis(&self) -> &Mat {
        &self.change
    }

    /// Coordinates of `v` in the concatenated graded basis.
    pub fn graded_coords(&self, v: &[CycloNum]) -> Vector {
        self.change_inv.mul_vec(v)
    }

    /// Index range of residue `r` inside graded coordinates.
    pub fn range(&self, residue: usize) -> std::ops::Range<usize> {
        self.offsets[residue]..self.offsets[residue + 1]
    }

    /// Coordinates of `v` in the basis of `A_r`, or `None` if `v ∉ A_r`.
    pub fn coords_in(&self, residue: usize, v: &[CycloNum]) -> Option<Vector> {
        let g = self.graded_coords(v);
        let r = self.range(residue);
        if g.iter()
            .enumerate()
            .any(|(k, c)| !r.contains(&k) && !c.is_zero())
        {
            return None;
        }
        Some(g[r].to_vec())
    }

    pub fn contains(&self, residue: usize, v: &[CycloNum]) -> bool {
        self.coords_in(residue, v).is_some()
    }

    /// Projection of `v` onto `A_r` along the other components.
    pub fn project(&self, residue: usize, v: &[CycloNum]) -> Vector {
        let g = self.graded_coords(v);
        let mut acc = vec![CycloNum::zero(self.order); self.dim];
        for k in self.range(residue) {
            if !g[k].is_zero() {
                crate::linalg::vec_axpy(&mut acc, &g[k], &self.change.column(k));
            }
        }
        acc
    }

    /// `Σ_ī ζ_m^i · proj_ī`, the automorphism this grading comes from.
    pub fn reconstruct_sigma(&self) -> Mat {
        let mut diag = Vec::with_capacity(self.dim);
        for (r, comp) in self.components.iter().enumerate() {
            let z = eigenvalue(self.period, r, self.order);
            diag.extend(std::iter::repeat_n(z, comp.len()));
        }
        self.change
            .mul(&Mat::diagonal(&diag, self.order))
            .mul(&self.change_inv)
    }

    /// Verify `A_ī A_j̄ ⊆ A_{ī+j̄}` on all pairs of component basis vectors.
    pub fn check_product_rule(&self, alg: &MultTableAlgebra) -> Result<usize> {
        let m = self.period as usize;
        let mut pairs = 0;
        for i in 0..m {
            for j in 0..m {
                let target = (i + j) % m;
                for (a, x) in self.components[i].iter().enumerate() {
                    for (b, y) in self.components[j].iter().enumerate() {
                        pairs += 1;
                        let p = alg.multiply(x, y);
                        if is_zero_vec(&p) {
                            continue;
                        }
                        if !self.contains(target, &p) {
                            return Err(Error::ProductRule(
                                self.offsets[i] + a,
                                self.offsets[j] + b,
                            ));
                        }
                    }
                }
            }
        }
        Ok(pairs)
    }
}

/// `ζ_m^r` inside `Q(ζ_order)`.
pub fn eigenvalue(m: u32, r: usize, order: u32) -> CycloNum {
    CycloNum::zeta_power(m, r as i64)
        .embed(order)
        .expect("period divides the scalar order")
}

/// Eigenspace grading of `σ`: `A_ī = ker(σ − ζ_m^i)`.
pub fn eigengrading(alg: &MultTableAlgebra, sigma: &FiniteOrderAutomorphism) -> Result<GradedDecomposition> {
    let m = sigma.period();
    let order = alg.scalar_order();
    if !order.is_multiple_of(m) {
        return Err(Error::ScalarOrder { order, period: m });
    }
    let n = alg.dim();
    let mut components = Vec::with_capacity(m as usize);
    for r in 0..m as usize {
        let z = eigenvalue(m, r, order);
        let shifted = sigma.matrix().sub(&Mat::identity(n, order).scale(&z));
        components.push(shifted.nullspace());
    }
    let total: usize = components.iter().map(Vec::len).sum();
    if total != n {
        return Err(Error::NotDiagonalizable { got: total, expected: n });
    }
    let grading = GradedDecomposition::from_components(n, order, components)?;
    grading.check_product_rule(alg)?;
    if grading.reconstruct_sigma() != *sigma.matrix() {
        return Err(Error::Verification(
            "grading does not reconstruct the automorphism".into(),
        ));
    }
    Ok(grading)
}

#[derive(Debug, Clone, Serialize)]
pub struct GradingSummary {
    pub period: u32,
    pub dims: Vec<usize>,
}

impl From<&GradedDecomposition> for GradingSummary {
    fn from(g: &GradedDecomposition) -> Self {
        GradingSummary {
            period: g.period(),
            dims: g.dims(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::automorphism::check_automorphism;
    use crate::algebra::table::{matrix_units, sl2};

    #[test]
    fn sl2_sign_grading() {
        let alg = sl2(2);
        let d: Vec<_> = [1, -1, -1].iter().map(|&x| CycloNum::from_int(2, x)).collect();
        let s = check_automorphism(&alg, &Mat::diagonal(&d, 2), 2).unwrap();
        let g = eigengrading(&alg, &s).unwrap();
        assert_eq!(g.dims(), [1, 2]);
        assert_eq!(g.component(0), [unit_vec(3, 0, 2)]);
        assert_eq!(g.component(1), [unit_vec(3, 1, 2), unit_vec(3, 2, 2)]);
        assert_eq!(g.reconstruct_sigma(), *s.matrix());
    }

    #[test]
    fn identity_gives_trivial_grading() {
        let alg = sl2(1);
        let s = check_automorphism(&alg, &Mat::identity(3, 1), 1).unwrap();
        let g = eigengrading(&alg, &s).unwrap();
        assert_eq!(g, GradedDecomposition::trivial(&alg));
    }

    #[test]
    fn period_must_divide_order() {
        let alg = sl2(1);
        let s = check_automorphism(&alg, &Mat::identity(3, 1), 2).unwrap();
        assert!(matches!(eigengrading(&alg, &s), Err(Error::ScalarOrder { .. })));
    }

    #[test]
    fn bad_grading_breaks_product_rule() {
        // Putting e alone in degree 1 and h, f in degree 0 is not multiplicative.
        let alg = sl2(2);
        let g = GradedDecomposition::from_components(
            3,
            2,
            vec![vec![unit_vec(3, 0, 2), unit_vec(3, 2, 2)], vec![unit_vec(3, 1, 2)]],
        )
        .unwrap();
        assert!(g.check_product_rule(&alg).is_err());
    }

    #[test]
    fn coords_and_projection() {
        let alg = matrix_units(2, 2);
        let d: Vec<_> = [1, -1, -1, 1].iter().map(|&x| CycloNum::from_int(2, x)).collect();
        let s = check_automorphism(&alg, &Mat::diagonal(&d, 2), 2).unwrap();
        let g = eigengrading(&alg, &s).unwrap();
        assert_eq!(g.dims(), [2, 2]);
        let v: Vector = [1, 2, 3, 4].iter().map(|&x| CycloNum::from_int(2, x)).collect();
        let p0 = g.project(0, &v);
        let p1 = g.project(1, &v);
        assert_eq!(crate::linalg::vec_add(&p0, &p1), v);
        assert!(g.contains(0, &p0) && g.contains(1, &p1));
        assert!(!g.contains(0, &v));
    }
}
