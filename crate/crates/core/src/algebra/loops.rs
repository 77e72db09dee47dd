//! Window-bounded computations in the loop algebra `L(A, Σ) = ⊕ A_ī z^i`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::grading::GradedDecomposition;
use crate::algebra::table::MultTableAlgebra;
use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, rank_of, vec_add, vec_axpy, Vector};

/// Finite sum `Σ a_j z^j` with `a_j ∈ A`; zero terms are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LoopElement {
    terms: BTreeMap<i64, Vector>,
}

impl LoopElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(degree: i64, v: Vector) -> Self {
        let mut e = Self::zero();
        e.add_term(degree, v);
        e
    }

    pub fn add_term(&mut self, degree: i64, v: Vector) {
        let merged = match self.terms.remove(&degree) {
            Some(old) => vec_add(&old, &v),
            None => v,
        };
        if !is_zero_vec(&merged) {
            self.terms.insert(degree, merged);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Vector)> {
        self.terms.iter().map(|(d, v)| (*d, v))
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    pub fn term(&self, degree: i64) -> Option<&Vector> {
        self.terms.get(&degree)
    }

    /// Multiply by `t^k = z^{k·period}`.
    pub fn shift(&self, by: i64) -> Self {
        LoopElement {
            terms: self.terms.iter().map(|(d, v)| (d + by, v.clone())).collect(),
        }
    }

    /// Check that every term lies in the component of its degree.
    pub fn check_in(&self, grading: &GradedDecomposition) -> Result<()> {
        for (d, v) in &self.terms {
            if v.len() != grading.dim() || !grading.contains(grading.residue(*d), v) {
                return Err(Error::MalformedLoopElement(format!(
                    "term of degree {d} is not in component {}",
                    grading.residue(*d)
                )));
            }
        }
        Ok(())
    }
}

/// `(a z^i)(b z^j) = (ab) z^{i+j}` extended bilinearly.
pub fn loop_bracket(
    alg: &MultTableAlgebra,
    grading: &GradedDecomposition,
    x: &LoopElement,
    y: &LoopElement,
) -> Result<LoopElement> {
    x.check_in(grading)?;
    y.check_in(grading)?;
    let mut out = LoopElement::zero();
    for (i, a) in x.terms() {
        for (j, b) in y.terms() {
            out.add_term(i + j, alg.multiply(a, b));
        }
    }
    for (d, v) in out.terms() {
        if !grading.contains(grading.residue(d), v) {
            return Err(Error::ProductRule(grading.residue(d), grading.residue(d)));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct BaseChangeReport {
    pub window: i64,
    pub period: u32,
    /// `(degree, dimension of the span at that degree)`.
    pub degrees: Vec<(i64, usize)>,
    pub pairs_checked: usize,
}

/// Element `Σ_k x_k ⊗ z^k` of `L ⊗_R S` with `0 ≤ k < m`, each `x_k` a
/// homogeneous loop monomial `(degree, vector)`.
type Tensor = Vec<(i64, usize, Vector)>;

fn normalize(m: i64, deg: i64, k: i64, v: Vector) -> (i64, usize, Vector) {
    // t acts on L as z^m; moving it across the tensor keeps k in [0, m).
    let q = k.div_euclid(m);
    (deg + q * m, k.rem_euclid(m) as usize, v)
}

fn image(t: &Tensor, n: usize, order: u32) -> BTreeMap<i64, Vector> {
    let mut out: BTreeMap<i64, Vector> = BTreeMap::new();
    for (deg, k, v) in t {
        let slot = out
            .entry(deg + *k as i64)
            .or_insert_with(|| vec![CycloNum::zero(order); n]);
        vec_axpy(slot, &CycloNum::one(order), v);
    }
    out.retain(|_, v| !is_zero_vec(v));
    out
}

/// Check that `L(Σ) ⊗_R S → A ⊗ S`, `(a z^i) ⊗ z^j ↦ a z^{i+j}`, is bijective
/// degree by degree and multiplicative on window basis pairs.
pub fn base_change_check(
    alg: &MultTableAlgebra,
    grading: &GradedDecomposition,
    window: i64,
) -> Result<BaseChangeReport> {
    let m = grading.period() as i64;
    if window < m {
        return Err(Error::Input(format!("window {window} is smaller than the period {m}")));
    }
    let n = alg.dim();
    let order = alg.scalar_order();
    let mut degrees = Vec::new();
    for d in -window..=window {
        let mut span = Vec::with_capacity(n);
        for j in 0..m {
            span.extend(grading.component_at(d - j).iter().cloned());
        }
        let r = rank_of(&span, n, order);
        if span.len() != n || r != n {
            return Err(Error::BaseChange(d));
        }
        degrees.push((d, r));
    }

    let mut pairs = 0;
    for i in -window..=window {
        for j in -window..=window {
            for k in 0..m {
                for l in 0..m {
                    let total = i + j + k + l;
                    if total.abs() > window {
                        continue;
                    }
                    for a in grading.component_at(i) {
                        for b in grading.component_at(j) {
                            pairs += 1;
                            let x: Tensor = vec![(i, k as usize, a.clone())];
                            let y: Tensor = vec![(j, l as usize, b.clone())];
                            let prod: Tensor = vec![normalize(m, i + j, k + l, alg.multiply(a, b))];
                            let lhs = image(&prod, n, order);
                            let ix = image(&x, n, order);
                            let iy = image(&y, n, order);
                            let mut rhs = LoopElement::zero();
                            for (dx, vx) in &ix {
                                for (dy, vy) in &iy {
                                    rhs.add_term(dx + dy, alg.multiply(vx, vy));
                                }
                            }
                            let rhs: BTreeMap<i64, Vector> =
                                rhs.terms().map(|(d, v)| (d, v.clone())).collect();
                            if lhs != rhs {
                                return Err(Error::BaseChange(total));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(BaseChangeReport {
        window,
        period: grading.period(),
        degrees,
        pairs_checked: pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::automorphism::check_automorphism;
    use crate::algebra::grading::eigengrading;
    use crate::algebra::table::sl2;
    use crate::linalg::{unit_vec, Mat};

    fn twisted_sl2() -> (MultTableAlgebra, GradedDecomposition) {
        let alg = sl2(2);
        let d: Vec<_> = [1, -1, -1].iter().map(|&x| CycloNum::from_int(2, x)).collect();
        let s = check_automorphism(&alg, &Mat::diagonal(&d, 2), 2).unwrap();
        let g = eigengrading(&alg, &s).unwrap();
        (alg, g)
    }

    #[test]
    fn ef_bracket_lands_in_degree_two() {
        let (alg, g) = twisted_sl2();
        let e = LoopElement::monomial(1, unit_vec(3, 1, 2));
        let f = LoopElement::monomial(1, unit_vec(3, 2, 2));
        let p = loop_bracket(&alg, &g, &e, &f).unwrap();
        assert_eq!(p, LoopElement::monomial(2, unit_vec(3, 0, 2)));
    }

    #[test]
    fn h_acts_on_e_by_two() {
        let (alg, g) = twisted_sl2();
        let h = LoopElement::monomial(0, unit_vec(3, 0, 2));
        let e = LoopElement::monomial(1, unit_vec(3, 1, 2));
        let p = loop_bracket(&alg, &g, &h, &e).unwrap();
        let two_e = vec![CycloNum::zero(2), CycloNum::from_int(2, 2), CycloNum::zero(2)];
        assert_eq!(p, LoopElement::monomial(1, two_e));
    }

    #[test]
    fn bracket_with_zero_is_zero() {
        let (alg, g) = twisted_sl2();
        let e = LoopElement::monomial(1, unit_vec(3, 1, 2));
        assert!(loop_bracket(&alg, &g, &e, &LoopElement::zero()).unwrap().is_zero());
    }

    #[test]
    fn malformed_term_rejected() {
        let (alg, g) = twisted_sl2();
        let bad = LoopElement::monomial(0, unit_vec(3, 1, 2));
        assert!(matches!(
            loop_bracket(&alg, &g, &bad, &bad),
            Err(Error::MalformedLoopElement(_))
        ));
    }

    #[test]
    fn base_change_for_twisted_sl2() {
        let (alg, g) = twisted_sl2();
        let r = base_change_check(&alg, &g, 4).unwrap();
        assert_eq!(r.degrees.len(), 9);
        assert!(r.degrees.iter().all(|&(_, d)| d == 3));
    }

    #[test]
    fn base_change_trivial_grading() {
        let alg = sl2(1);
        let g = GradedDecomposition::trivial(&alg);
        let r = base_change_check(&alg, &g, 2).unwrap();
        assert!(r.degrees.iter().all(|&(_, d)| d == 3));
    }

    #[test]
    fn base_change_needs_window_at_least_period() {
        let (alg, g) = twisted_sl2();
        assert!(base_change_check(&alg, &g, 1).is_err());
    }
}
