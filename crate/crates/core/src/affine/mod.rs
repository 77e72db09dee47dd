//! Affine root data of `L(π ∘ τ_s)` on a degree window and the generalized
//! Cartan matrix read off from its simple roots.

pub mod catalog;

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::grading::{eigengrading, GradedDecomposition};
use crate::algebra::table::MultTableAlgebra;
use crate::cyclo::CycloNum;
use crate::descent::{lie_twist, TwistData};
use crate::error::{Error, Result};
use crate::linalg::{coordinates, Mat, Vector};
use crate::lie::automorphisms::{DiagramPermutation, ToralCharge};
use crate::lie::cartan::{int_det, int_rank, permutation_equivalent, CartanType};
use crate::lie::chevalley::Chevalley;

pub use catalog::{builtin_catalog, generate_catalog, Catalog, CatalogEntry};

/// `h₀ = h^π`, spanned by the orbit sums `H_O = Σ_{i ∈ O} h_i`.
#[derive(Debug, Clone)]
pub struct FixedCartan {
    pub orbits: Vec<Vec<usize>>,
    /// Basis vectors in the coordinates of the algebra.
    pub basis: Vec<Vector>,
}

impl FixedCartan {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `λ(H_O) = Σ_{i ∈ O} α(h_i)` for a root `α`.
    pub fn restrict(&self, ch: &Chevalley, root: &[i64]) -> Vec<i64> {
        self.orbits
            .iter()
            .map(|o| o.iter().map(|&i| ch.roots().cartan().pairing(i, root)).sum())
            .collect()
    }
}

pub fn fixed_cartan(ch: &Chevalley, alg: &MultTableAlgebra, perm: &DiagramPermutation) -> Result<FixedCartan> {
    if !perm.preserves(ch.roots().cartan()) {
        return Err(Error::NotDiagramSymmetry);
    }
    let orbits = perm.orbits();
    let n = alg.dim();
    let order = alg.scalar_order();
    let basis = orbits
        .iter()
        .map(|o| {
            let mut v = vec![CycloNum::zero(order); n];
            for &i in o {
                v[ch.h(i)] = CycloNum::one(order);
            }
            v
        })
        .collect();
    Ok(FixedCartan { orbits, basis })
}

/// Real affine root `(λ, j)` with its one-dimensional root space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineRoot {
    pub weight: Vec<i64>,
    pub degree: i64,
    pub multiplicity: usize,
    #[serde(skip)]
    pub vector: Vector,
}

impl AffineRoot {
    pub fn key(&self) -> (i64, &[i64]) {
        (self.degree, &self.weight)
    }
}

/// `(degree, then weight lexicographically) > 0`.
pub fn is_positive(weight: &[i64], degree: i64) -> bool {
    match degree.cmp(&0) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => weight.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0),
    }
}

#[derive(Debug, Clone)]
pub struct AffineRootDatum {
    pub window: i64,
    pub period: u32,
    pub h0: FixedCartan,
    pub real: Vec<AffineRoot>,
    /// `(degree, dimension)` of nonzero zero-weight spaces away from degree 0.
    pub imaginary: Vec<(i64, usize)>,
    /// Dimension of the zero-weight space in degree 0.
    pub degree_zero_cartan: usize,
}

impl AffineRootDatum {
    pub fn find(&self, weight: &[i64], degree: i64) -> Option<&AffineRoot> {
        self.real.iter().find(|r| r.degree == degree && r.weight == weight)
    }

    fn is_root_or_imaginary(&self, weight: &[i64], degree: i64) -> bool {
        if weight.iter().all(|&c| c == 0) {
            return degree != 0 && self.imaginary.iter().any(|&(d, _)| d == degree);
        }
        self.find(weight, degree).is_some()
    }
}

/// Joint eigenspace decomposition of each grading component under `ad h₀`.
pub fn affine_roots(
    ch: &Chevalley,
    alg: &MultTableAlgebra,
    grading: &GradedDecomposition,
    h0: &FixedCartan,
    window: i64,
) -> Result<AffineRootDatum> {
    let order = alg.scalar_order();
    let period = grading.period();
    let mut candidates: Vec<Vec<i64>> = ch.roots().roots().iter().map(|r| h0.restrict(ch, r)).collect();
    candidates.push(vec![0; h0.dim()]);
    candidates.sort();
    candidates.dedup();

    // residue -> list of (weight, basis of the weight space)
    let mut spaces: Vec<Vec<(Vec<i64>, Vec<Vector>)>> = Vec::with_capacity(period as usize);
    for r in 0..period as usize {
        let comp = grading.component(r);
        let d = comp.len();
        let mut found = Vec::new();
        if d == 0 {
            spaces.push(found);
            continue;
        }
        let ad: Vec<Mat> = h0
            .basis
            .iter()
            .map(|hk| {
                let cols: Vec<Vector> = comp
                    .iter()
                    .map(|b| {
                        grading.coords_in(r, &alg.multiply(hk, b)).ok_or_else(|| {
                            Error::Verification("ad h0 does not preserve a grading component".into())
                        })
                    })
                    .collect::<Result<_>>()?;
                Ok(Mat::from_columns(&cols, d, order))
            })
            .collect::<Result<_>>()?;
        let mut total = 0;
        for w in &candidates {
            let mut rows = Vec::with_capacity(d * ad.len());
            for (k, m) in ad.iter().enumerate() {
                let shifted = m.sub(&Mat::identity(d, order).scale(&CycloNum::from_int(order, w[k])));
                rows.extend(shifted.to_rows());
            }
            let kernel = Mat::from_rows(rows, d, order).nullspace();
            if kernel.is_empty() {
                continue;
            }
            total += kernel.len();
            let vectors = kernel
                .iter()
                .map(|c| {
                    let mut v = vec![CycloNum::zero(order); alg.dim()];
                    for (coef, b) in c.iter().zip(comp) {
                        crate::linalg::vec_axpy(&mut v, coef, b);
                    }
                    v
                })
                .collect();
            found.push((w.clone(), vectors));
        }
        if total != d {
            return Err(Error::Verification(format!(
                "ad h0 is not diagonalizable on component {r} ({total} of {d})"
            )));
        }
        spaces.push(found);
    }

    let mut real = Vec::new();
    let mut imaginary = Vec::new();
    let mut degree_zero_cartan = 0;
    for j in -window..=window {
        let r = grading.residue(j);
        for (w, vs) in &spaces[r] {
            if w.iter().all(|&c| c == 0) {
                if j == 0 {
                    degree_zero_cartan = vs.len();
                } else {
                    imaginary.push((j, vs.len()));
                }
                continue;
            }
            if vs.len() != 1 {
                return Err(Error::RootMultiplicity {
                    weight: format!("{w:?}"),
                    degree: j,
                    dim: vs.len(),
                });
            }
            real.push(AffineRoot {
                weight: w.clone(),
                degree: j,
                multiplicity: 1,
                vector: vs[0].clone(),
            });
        }
    }
    Ok(AffineRootDatum {
        window,
        period,
        h0: h0.clone(),
        real,
        imaginary,
        degree_zero_cartan,
    })
}

/// Positive real roots of degree at most the period that are not a sum of two
/// positive roots (real or imaginary) inside the window.
pub fn simple_affine_roots(datum: &AffineRootDatum) -> Result<Vec<AffineRoot>> {
    let max_degree = datum.period as i64;
    if datum.window < max_degree + 1 {
        return Err(Error::Input(format!(
            "window {} is too small, need at least {}",
            datum.window,
            max_degree + 1
        )));
    }
    let mut positives: Vec<(Vec<i64>, i64)> = datum
        .real
        .iter()
        .filter(|r| is_positive(&r.weight, r.degree))
        .map(|r| (r.weight.clone(), r.degree))
        .collect();
    let zero = vec![0; datum.h0.dim()];
    positives.extend(datum.imaginary.iter().filter(|(d, _)| *d > 0).map(|&(d, _)| (zero.clone(), d)));

    let mut base: Vec<AffineRoot> = Vec::new();
    for root in &datum.real {
        if !is_positive(&root.weight, root.degree) || root.degree > max_degree {
            continue;
        }
        let decomposable = positives.iter().any(|(w, d)| {
            let rest_w: Vec<i64> = root.weight.iter().zip(w).map(|(a, b)| a - b).collect();
            let rest_d = root.degree - d;
            is_positive(&rest_w, rest_d) && datum.is_root_or_imaginary(&rest_w, rest_d)
        });
        if !decomposable {
            base.push(root.clone());
        }
    }
    base.sort_by(|a, b| a.degree.cmp(&b.degree).then_with(|| b.weight.cmp(&a.weight)));
    let expected = datum.h0.dim() + 1;
    if base.len() != expected {
        return Err(Error::BaseSize { got: base.len(), expected });
    }
    Ok(base)
}

/// Generalized Cartan matrix with its invariants checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gcm(pub Vec<Vec<i64>>);

impl Gcm {
    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.0
    }

    /// Check diagonal 2, non-positive off-diagonal entries, zero symmetry,
    /// determinant 0, corank 1 and connectedness.
    pub fn check_affine(&self) -> Result<()> {
        let a = &self.0;
        let n = a.len();
        let fail = |m: String| Err(Error::NotAffine(m));
        for i in 0..n {
            if a[i].len() != n {
                return fail("matrix is not square".into());
            }
            if a[i][i] != 2 {
                return fail(format!("diagonal entry {i} is {}", a[i][i]));
            }
            for j in 0..n {
                if i != j && a[i][j] > 0 {
                    return fail(format!("entry ({i}, {j}) is positive"));
                }
                if (a[i][j] == 0) != (a[j][i] == 0) {
                    return fail(format!("zero pattern differs at ({i}, {j})"));
                }
            }
        }
        if !int_det(a).is_zero() {
            return fail("determinant is not zero".into());
        }
        if int_rank(a) + 1 != n {
            return fail("corank is not one".into());
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            if seen[i] {
                continue;
            }
            seen[i] = true;
            stack.extend((0..n).filter(|&j| a[i][j] != 0 && !seen[j]));
        }
        if seen.iter().any(|s| !s) {
            return fail("Dynkin diagram is not connected".into());
        }
        Ok(())
    }

    /// Products `a_ij a_ji` over the edges `i < j`.
    pub fn edge_products(&self) -> Vec<i64> {
        let n = self.size();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.0[i][j] != 0 {
                    out.push(self.0[i][j] * self.0[j][i]);
                }
            }
        }
        out
    }
}

fn pair(weight: &[i64], coords: &[BigRational]) -> BigRational {
    weight
        .iter()
        .zip(coords)
        .map(|(&w, c)| BigRational::from_integer(w.into()) * c)
        .fold(BigRational::zero(), |a, b| a + b)
}

fn rational(c: &CycloNum) -> Result<BigRational> {
    c.as_rational()
        .ok_or_else(|| Error::Verification("coroot coordinate is irrational".into()))
}

/// `A_ij = α̂_j(h_i)` where `h_i = [e_i, f_i]` is normalized by `α̂_i(h_i) = 2`.
pub fn extract_gcm(alg: &MultTableAlgebra, datum: &AffineRootDatum, base: &[AffineRoot]) -> Result<Gcm> {
    let order = alg.scalar_order();
    let mut coroots: Vec<Vec<BigRational>> = Vec::with_capacity(base.len());
    for (i, root) in base.iter().enumerate() {
        let neg: Vec<i64> = root.weight.iter().map(|c| -c).collect();
        let opposite = datum.find(&neg, -root.degree).ok_or_else(|| {
            Error::Verification(format!("no opposite root space for base root {i}"))
        })?;
        let h = alg.multiply(&root.vector, &opposite.vector);
        let coords = coordinates(&datum.h0.basis, &h, order)
            .ok_or_else(|| Error::Verification(format!("[e_{i}, f_{i}] is not in the fixed Cartan")))?;
        let coords: Vec<BigRational> = coords.iter().map(rational).collect::<Result<_>>()?;
        let value = pair(&root.weight, &coords);
        if value.is_zero() {
            return Err(Error::DegeneratePairing(i));
        }
        let scale = BigRational::from_integer(2.into()) / value;
        coroots.push(coords.into_iter().map(|c| c * &scale).collect());
    }
    let n = base.len();
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let v = pair(&base[j].weight, &coroots[i]);
            if !v.is_integer() {
                return Err(Error::NotAffine(format!("entry ({i}, {j}) = {v} is not an integer")));
            }
            a[i][j] = i64::try_from(v.to_integer()).map_err(|_| Error::NotAffine("entry overflow".into()))?;
        }
    }
    let gcm = Gcm(a);
    gcm.check_affine()?;
    Ok(gcm)
}

/// Affine label `X_N^(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineLabel {
    #[serde(rename = "type")]
    pub base_type: CartanType,
    pub r: u32,
}

impl fmt::Display for AffineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^({})", self.base_type, self.r)
    }
}

/// Look up `gcm` in the catalog up to simultaneous permutation.
pub fn match_affine_label(gcm: &Gcm, catalog: &Catalog) -> Result<AffineLabel> {
    catalog
        .entries
        .iter()
        .find(|e| e.gcm.size() == gcm.size() && permutation_equivalent(&e.gcm.0, &gcm.0).is_some())
        .map(|e| e.label)
        .ok_or(Error::NoMatch)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaseRoot {
    pub weight: Vec<i64>,
    pub degree: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GcmReport {
    pub gcm: Gcm,
    pub base: Vec<BaseRoot>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<AffineLabel>,
    pub det: String,
    pub corank: usize,
}

/// Extraction from a prepared twist, without catalog lookup.
pub fn extract_from_twist(ch: &Chevalley, data: &TwistData, perm: &DiagramPermutation, window: Option<i64>) -> Result<(Gcm, Vec<AffineRoot>)> {
    let grading = eigengrading(&data.alg, &data.source)?;
    let h0 = fixed_cartan(ch, &data.alg, perm)?;
    let window = window.unwrap_or(data.period() as i64 + 1);
    let datum = affine_roots(ch, &data.alg, &grading, &h0, window)?;
    let base = simple_affine_roots(&datum)?;
    let gcm = extract_gcm(&data.alg, &datum, &base)?;
    Ok((gcm, base))
}

/// Full certificate for `L(π ∘ τ_s)`: GCM, simple roots, catalog label.
pub fn gcm_certificate(
    ch: &Chevalley,
    perm: &DiagramPermutation,
    charge: &ToralCharge,
    window: Option<i64>,
    catalog: Option<&Catalog>,
) -> Result<GcmReport> {
    let data = lie_twist(ch, perm, charge)?;
    let (gcm, base) = extract_from_twist(ch, &data, perm, window)?;
    let label = catalog.map(|c| match_affine_label(&gcm, c)).transpose()?;
    let corank = gcm.size() - int_rank(&gcm.0);
    Ok(GcmReport {
        det: int_det(&gcm.0).to_string(),
        corank,
        base: base
            .iter()
            .map(|r| BaseRoot {
                weight: r.weight.clone(),
                degree: r.degree,
            })
            .collect(),
        label,
        gcm,
    })
}

/// Recompute the matrix with the base listed in the order `perm`
/// (`new[i] = base[perm[i]]`).
pub fn extract_with_permuted_base(
    ch: &Chevalley,
    data: &TwistData,
    diagram: &DiagramPermutation,
    perm: &[usize],
) -> Result<Gcm> {
    let grading = eigengrading(&data.alg, &data.source)?;
    let h0 = fixed_cartan(ch, &data.alg, diagram)?;
    let datum = affine_roots(ch, &data.alg, &grading, &h0, data.period() as i64 + 1)?;
    let base = simple_affine_roots(&datum)?;
    let permuted: Vec<AffineRoot> = perm.iter().map(|&i| base[i].clone()).collect();
    extract_gcm(&data.alg, &datum, &permuted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::cartan::FiniteCartanMatrix;
    use crate::lie::chevalley::chevalley_algebra;
    use crate::lie::roots::RootSystem;

    fn ch(label: &str) -> Chevalley {
        chevalley_algebra(&RootSystem::new(&FiniteCartanMatrix::parse(label).unwrap()).unwrap()).unwrap()
    }

    fn gcm_of(label: &str, pi: &[usize], s: &[i64], m: u32) -> GcmReport {
        let c = ch(label);
        let p = DiagramPermutation::from_one_based(pi).unwrap();
        gcm_certificate(&c, &p, &ToralCharge::new(s.to_vec(), m), None, None).unwrap()
    }

    #[test]
    fn fixed_cartan_dimensions() {
        let a2 = ch("A2");
        assert_eq!(fixed_cartan(&a2, a2.algebra(), &DiagramPermutation::identity(2)).unwrap().dim(), 2);
        let flip = DiagramPermutation::from_one_based(&[2, 1]).unwrap();
        assert_eq!(fixed_cartan(&a2, a2.algebra(), &flip).unwrap().dim(), 1);
        let d4 = ch("D4");
        let tri = DiagramPermutation::from_one_based(&[3, 2, 4, 1]).unwrap();
        assert_eq!(fixed_cartan(&d4, d4.algebra(), &tri).unwrap().dim(), 2);
    }

    #[test]
    fn untwisted_a1() {
        let r = gcm_of("A1", &[1], &[0], 1);
        assert_eq!(r.gcm.0, vec![vec![2, -2], vec![-2, 2]]);
        let weights: Vec<(Vec<i64>, i64)> = r.base.iter().map(|b| (b.weight.clone(), b.degree)).collect();
        assert_eq!(weights, vec![(vec![2], 0), (vec![-2], 1)]);
        assert_eq!(r.det, "0");
        assert_eq!(r.corank, 1);
    }

    #[test]
    fn a1_roots_in_window_one() {
        let c = ch("A1");
        let data = lie_twist(&c, &DiagramPermutation::identity(1), &ToralCharge::zero(1)).unwrap();
        let g = eigengrading(&data.alg, &data.source).unwrap();
        let h0 = fixed_cartan(&c, &data.alg, &DiagramPermutation::identity(1)).unwrap();
        let datum = affine_roots(&c, &data.alg, &g, &h0, 1).unwrap();
        assert_eq!(datum.real.len(), 6);
        assert!(datum.real.iter().all(|r| r.multiplicity == 1));
        assert_eq!(datum.degree_zero_cartan, 1);
        assert_eq!(datum.imaginary, vec![(-1, 1), (1, 1)]);
    }

    #[test]
    fn a2_flip_degree_zero_roots() {
        let c = ch("A2");
        let flip = DiagramPermutation::from_one_based(&[2, 1]).unwrap();
        let data = lie_twist(&c, &flip, &ToralCharge::zero(2)).unwrap();
        let g = eigengrading(&data.alg, &data.source).unwrap();
        let h0 = fixed_cartan(&c, &data.alg, &flip).unwrap();
        let datum = affine_roots(&c, &data.alg, &g, &h0, 3).unwrap();
        let deg0: Vec<_> = datum.real.iter().filter(|r| r.degree == 0).map(|r| r.weight.clone()).collect();
        assert_eq!(deg0.len(), 2);
        assert!(deg0.contains(&vec![1]) && deg0.contains(&vec![-1]));
        assert_eq!(datum.degree_zero_cartan, 1);
    }

    #[test]
    fn a2_flip_gcm() {
        let r = gcm_of("A2", &[2, 1], &[0, 0], 2);
        assert_eq!(r.gcm.size(), 2);
        assert_eq!(r.gcm.edge_products(), vec![4]);
        let c = ch("A2");
        let flip = DiagramPermutation::from_one_based(&[2, 1]).unwrap();
        let data = lie_twist(&c, &flip, &ToralCharge::zero(2)).unwrap();
        let swapped = extract_with_permuted_base(&c, &data, &flip, &[1, 0]).unwrap();
        assert_eq!(swapped.0[0][1], r.gcm.0[1][0]);
        assert_eq!(swapped.0[1][0], r.gcm.0[0][1]);
    }

    #[test]
    fn d4_triality_gcm() {
        let r = gcm_of("D4", &[3, 2, 4, 1], &[0, 0, 0, 0], 3);
        assert_eq!(r.gcm.size(), 3);
        assert!(r.gcm.edge_products().contains(&3));
    }

    #[test]
    fn charged_twists_give_the_same_matrix() {
        let plain = gcm_of("A2", &[2, 1], &[0, 0], 2);
        let charged = gcm_of("A2", &[2, 1], &[1, 1], 2);
        assert!(permutation_equivalent(&plain.gcm.0, &charged.gcm.0).is_some());
        let toral = gcm_of("A1", &[1], &[1], 3);
        assert_eq!(toral.gcm.0, vec![vec![2, -2], vec![-2, 2]]);
    }

    #[test]
    fn gcm_invariants_are_enforced() {
        assert!(Gcm(vec![vec![2, -1], vec![-1, 2]]).check_affine().is_err());
        assert!(Gcm(vec![vec![2, -2], vec![-2, 2]]).check_affine().is_ok());
        assert!(Gcm(vec![vec![2, 0, 0], vec![0, 2, -2], vec![0, -2, 2]]).check_affine().is_err());
        assert!(Gcm(vec![vec![2, -1], vec![0, 2]]).check_affine().is_err());
    }

    #[test]
    fn window_must_cover_a_period() {
        let c = ch("A1");
        let data = lie_twist(&c, &DiagramPermutation::identity(1), &ToralCharge::zero(1)).unwrap();
        let g = eigengrading(&data.alg, &data.source).unwrap();
        let h0 = fixed_cartan(&c, &data.alg, &DiagramPermutation::identity(1)).unwrap();
        let datum = affine_roots(&c, &data.alg, &g, &h0, 1).unwrap();
        assert!(simple_affine_roots(&datum).is_err());
    }
}
