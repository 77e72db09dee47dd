use serde::{Deserialize, Serialize};

use crate::algebra::automorphism::{check_automorphism, Factorization, FiniteOrderAutomorphism};
use crate::algebra::table::MultTableAlgebra;
use crate::cyclo::{lcm, CycloNum};
use crate::error::{Error, Result};
use crate::linalg::{vec_scale, Mat, Vector};
use crate::lie::cartan::FiniteCartanMatrix;
use crate::lie::chevalley::Chevalley;

/// Permutation of the Dynkin nodes, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagramPermutation(Vec<usize>);

impl DiagramPermutation {
    pub fn identity(l: usize) -> Self {
        DiagramPermutation((0..l).collect())
    }

    pub fn from_zero_based(p: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; p.len()];
        for &x in &p {
            if x >= p.len() || seen[x] {
                return Err(Error::InvalidPermutation(format!("{p:?} is not a permutation")));
            }
            seen[x] = true;
        }
        Ok(DiagramPermutation(p))
    }

    /// From the 1-based array `[π(1), …, π(l)]`.
    pub fn from_one_based(p: &[usize]) -> Result<Self> {
        if p.contains(&0) {
            return Err(Error::InvalidPermutation(format!("{p:?} is not 1-based")));
        }
        Self::from_zero_based(p.iter().map(|x| x - 1).collect())
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|x| x + 1).collect()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        DiagramPermutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        DiagramPermutation(inv)
    }

    pub fn order(&self) -> u32 {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }

    pub fn preserves(&self, cartan: &FiniteCartanMatrix) -> bool {
        let l = cartan.rank();
        self.0.len() == l
            && (0..l).all(|i| (0..l).all(|j| cartan.get(self.0[i], self.0[j]) == cartan.get(i, j)))
    }

    /// Number of orbits on the nodes.
    pub fn orbit_count(&self) -> usize {
        self.orbits().len()
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for i in 0..self.0.len() {
            if seen[i] {
                continue;
            }
            let mut orbit = vec![];
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                orbit.push(j);
                j = self.0[j];
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// Image of a root in simple-root coordinates.
    pub fn act_on_root(&self, root: &[i64]) -> Vec<i64> {
        let mut out = vec![0; root.len()];
        for (i, &c) in root.iter().enumerate() {
            out[self.0[i]] += c;
        }
        out
    }
}

impl Serialize for DiagramPermutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiagramPermutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Self::from_one_based(&v).map_err(serde::de::Error::custom)
    }
}

/// Charge vector `s` of the toral automorphism `e_α ↦ ζ_m^{⟨s,α⟩} e_α`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToralCharge {
    pub s: Vec<i64>,
    pub m: u32,
}

impl ToralCharge {
    pub fn new(s: Vec<i64>, m: u32) -> Self {
        ToralCharge { s, m }
    }

    pub fn zero(l: usize) -> Self {
        ToralCharge { s: vec![0; l], m: 1 }
    }

    pub fn is_invariant_under(&self, perm: &DiagramPermutation) -> bool {
        (0..self.s.len()).all(|i| self.s[i] == self.s[perm.apply(i)])
    }
}

/// Automorphism specification `{"pi": [...] | null, "s": [...] | null, "m": m}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutoSpec {
    pub pi: Option<Vec<usize>>,
    pub s: Option<Vec<i64>>,
    pub m: u32,
}

impl AutoSpec {
    pub fn perm(&self, l: usize) -> Result<DiagramPermutation> {
        match &self.pi {
            None => Ok(DiagramPermutation::identity(l)),
            Some(p) if p.len() == l => DiagramPermutation::from_one_based(p),
            Some(p) => Err(Error::InvalidPermutation(format!("{p:?} has the wrong length for rank {l}"))),
        }
    }

    pub fn charge(&self, l: usize) -> Result<ToralCharge> {
        if self.m == 0 {
            return Err(Error::Input("m must be positive".into()));
        }
        match &self.s {
            None => Ok(ToralCharge::new(vec![0; l], self.m)),
            Some(s) if s.len() == l => Ok(ToralCharge::new(s.clone(), self.m)),
            Some(s) => Err(Error::Input(format!("charge {s:?} has the wrong length for rank {l}"))),
        }
    }

    /// Period `lcm(order(π), m)` of the specified automorphism.
    pub fn period(&self, l: usize) -> Result<u32> {
        Ok(lcm(self.perm(l)?.order(), self.charge(l)?.m))
    }
}

fn matrix_of_images(images: &[Vector], order: u32) -> Mat {
    Mat::from_columns(images, images.len(), order)
}

/// Diagram automorphism `e_{α_i} ↦ e_{α_{π(i)}}`, `f_{α_i} ↦ f_{α_{π(i)}}`,
/// `h_i ↦ h_{π(i)}`, extended to all root vectors through brackets.
///
/// `alg` is the Chevalley table, possibly embedded in a larger scalar field.
pub fn diagram_automorphism(
    ch: &Chevalley,
    alg: &MultTableAlgebra,
    perm: &DiagramPermutation,
) -> Result<FiniteOrderAutomorphism> {
    let rs = ch.roots();
    let l = rs.rank();
    if !perm.preserves(rs.cartan()) {
        return Err(Error::NotDiagramSymmetry);
    }
    let n = alg.dim();
    let order = alg.scalar_order();
    let mut images: Vec<Option<Vector>> = vec![None; n];
    let unit = |b: usize| crate::linalg::unit_vec(n, b, order);
    for i in 0..l {
        images[ch.h(i)] = Some(unit(ch.h(perm.apply(i))));
        images[ch.e(i)] = Some(unit(ch.e(perm.apply(i))));
        let fi = rs.negate(i);
        images[ch.e(fi)] = Some(unit(ch.e(rs.negate(perm.apply(i)))));
    }
    // Roots in order of increasing height within each sign.
    let np = rs.positive_count();
    let order_of_roots: Vec<usize> = (l..np).chain((np + l)..rs.len()).collect();
    for k in order_of_roots {
        let mut image: Option<Vector> = None;
        for i in 0..l {
            let simple = if rs.is_positive(k) { i } else { rs.negate(i) };
            let Some(rest) = rs.difference(k, simple) else {
                continue;
            };
            let Some(nc) = ch.structure_constant(simple, rest) else {
                continue;
            };
            let (Some(a), Some(b)) = (&images[ch.e(simple)], &images[ch.e(rest)]) else {
                return Err(Error::Propagation(format!("root {:?} reached before its parts", rs.root(k))));
            };
            let inv = CycloNum::from_frac(order, 1, nc);
            let candidate = vec_scale(&alg.multiply(a, b), &inv);
            match &image {
                None => image = Some(candidate),
                Some(prev) if *prev != candidate => {
                    return Err(Error::Propagation(format!(
                        "two paths to root {:?} disagree",
                        rs.root(k)
                    )))
                }
                Some(_) => {}
            }
        }
        let image = image.ok_or_else(|| Error::Propagation(format!("root {:?} unreachable", rs.root(k))))?;
        images[ch.e(k)] = Some(image);
    }
    let images: Vec<Vector> = images.into_iter().map(Option::unwrap).collect();
    let sigma = check_automorphism(alg, &matrix_of_images(&images, order), perm.order())?;
    Ok(sigma.with_factorization(Factorization {
        perm: perm.as_slice().to_vec(),
        charge: vec![0; l],
        charge_modulus: 1,
    }))
}

/// Toral automorphism `e_α ↦ ζ_m^{⟨s,α⟩} e_α`, identity on the Cartan.
pub fn toral_automorphism(ch: &Chevalley, alg: &MultTableAlgebra, charge: &ToralCharge) -> Result<FiniteOrderAutomorphism> {
    let l = ch.rank();
    if charge.s.len() != l {
        return Err(Error::Input(format!("charge {:?} has the wrong length for rank {l}", charge.s)));
    }
    let order = alg.scalar_order();
    if charge.m == 0 || !order.is_multiple_of(charge.m) {
        return Err(Error::ScalarOrder { order, period: charge.m });
    }
    let diag: Vec<CycloNum> = (0..alg.dim())
        .map(|b| CycloNum::zeta_power(charge.m, ch.charge(&charge.s, b)).embed(order))
        .collect::<std::result::Result<_, _>>()?;
    let sigma = check_automorphism(alg, &Mat::diagonal(&diag, order), charge.m)?;
    Ok(sigma.with_factorization(Factorization {
        perm: (0..l).collect(),
        charge: charge.s.clone(),
        charge_modulus: charge.m,
    }))
}

/// `σ = π ∘ τ_s` for a `π`-invariant charge; the period is `lcm(order(π), m)`.
pub fn compose_pi_toral(
    ch: &Chevalley,
    alg: &MultTableAlgebra,
    perm: &DiagramPermutation,
    charge: &ToralCharge,
) -> Result<FiniteOrderAutomorphism> {
    if !charge.is_invariant_under(perm) {
        return Err(Error::ChargeNotInvariant);
    }
    let pi = diagram_automorphism(ch, alg, perm)?;
    let tau = toral_automorphism(ch, alg, charge)?;
    let period = lcm(pi.period(), charge.m);
    let product = pi.matrix().mul(tau.matrix());
    let sigma = check_automorphism(alg, &product, period)?;
    Ok(sigma.with_factorization(Factorization {
        perm: perm.as_slice().to_vec(),
        charge: charge.s.clone(),
        charge_modulus: charge.m,
    }))
}

/// The outer part `σ̄ = π` of a factored automorphism.
pub fn outer_image(sigma: &FiniteOrderAutomorphism) -> Result<DiagramPermutation> {
    let f = sigma.factorization().ok_or(Error::Unfactored)?;
    DiagramPermutation::from_zero_based(f.perm.clone())
}
