use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::linalg::{zero_vec, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Lie,
    Associative,
}

/// Sparse product of two basis vectors: `(basis index, coefficient)` pairs.
pub type SparseProduct = Vec<(usize, CycloNum)>;

/// Finite-dimensional algebra given by structure constants.
///
/// Construction does not enforce the algebra laws; run [`validate_algebra`]
/// (or [`MultTableAlgebra::validated`]) before relying on them.
#[derive(Clone, PartialEq, Eq)]
pub struct MultTableAlgebra {
    dim: usize,
    scalar_order: u32,
    kind: AlgebraKind,
    labels: Vec<String>,
    table: Vec<SparseProduct>,
}

impl MultTableAlgebra {
    /// Build from explicit products `b_i b_j`; unspecified pairs are zero.
    pub fn new(
        dim: usize,
        scalar_order: u32,
        kind: AlgebraKind,
        labels: Vec<String>,
        products: Vec<((usize, usize), SparseProduct)>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("algebra dimension must be positive".into()));
        }
        let labels = if labels.is_empty() {
            (0..dim).map(|i| format!("b{i}")).collect()
        } else {
            labels
        };
        if labels.len() != dim {
            return Err(Error::Dimension(format!(
                "{} labels for dimension {dim}",
                labels.len()
            )));
        }
        let mut table = vec![Vec::new(); dim * dim];
        for ((i, j), prod) in products {
            if i >= dim || j >= dim {
                return Err(Error::Input(format!("product index ({i}, {j}) out of range")));
            }
            let mut dense = zero_vec(dim, scalar_order);
            for (k, c) in prod {
                if k >= dim {
                    return Err(Error::Input(format!("basis index {k} out of range")));
                }
                if c.order() != scalar_order {
                    return Err(Error::Input(format!(
                        "coefficient of order {} in an algebra over Q(zeta_{scalar_order})",
                        c.order()
                    )));
                }
                dense[k] = &dense[k] + &c;
            }
            table[i * dim + j] = sparsify(&dense);
        }
        Ok(MultTableAlgebra {
            dim,
            scalar_order,
            kind,
            labels,
            table,
        })
    }

    /// Lie algebra from brackets `[b_i, b_j]` for `i < j` (or any order);
    /// the opposite products are filled in antisymmetrically.
    pub fn lie_from_brackets(
        dim: usize,
        scalar_order: u32,
        labels: Vec<String>,
        brackets: Vec<((usize, usize), SparseProduct)>,
    ) -> Result<Self> {
        let mut products = Vec::with_capacity(2 * brackets.len());
        for ((i, j), prod) in brackets {
            let neg: SparseProduct = prod.iter().map(|(k, c)| (*k, -c)).collect();
            products.push(((i, j), prod));
            products.push(((j, i), neg));
        }
        Self::new(dim, scalar_order, AlgebraKind::Lie, labels, products)
    }

    pub fn validated(self) -> Result<Self> {
        let report = validate_algebra(&self);
        match report.violations.first() {
            None => Ok(self),
            Some(v) => Err(Error::Verification(format!(
                "{:?} fails on ({})",
                v.law,
                v.labels.join(", ")
            ))),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scalar_order(&self) -> u32 {
        self.scalar_order
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `b_i b_j` as a sparse vector.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, CycloNum)] {
        &self.table[i * self.dim + j]
    }

    /// Bilinear product of coordinate vectors.
    pub fn multiply(&self, x: &[CycloNum], y: &[CycloNum]) -> Vector {
        let mut out = zero_vec(self.dim, self.scalar_order);
        let ys: Vec<(usize, &CycloNum)> = y
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for &(j, yj) in &ys {
                let prod = &self.table[i * self.dim + j];
                if prod.is_empty() {
                    continue;
                }
                let c = xi * yj;
                for (k, s) in prod {
                    out[*k].add_mul(&c, s);
                }
            }
        }
        out
    }

    /// Same table over `Q(ζ_n)`.
    pub fn embed(&self, n: u32) -> Result<Self> {
        if n == self.scalar_order {
            return Ok(self.clone());
        }
        let table = self
            .table
            .iter()
            .map(|p| {
                p.iter()
                    .map(|(k, c)| Ok((*k, c.embed(n)?)))
                    .collect::<Result<SparseProduct>>()
            })
            .collect::<Result<_>>()?;
        Ok(MultTableAlgebra {
            dim: self.dim,
            scalar_order: n,
            kind: self.kind,
            labels: self.labels.clone(),
            table,
        })
    }

    /// Overwrite one structure constant column; used to build corrupted test fixtures.
    pub fn with_product(mut self, i: usize, j: usize, prod: SparseProduct) -> Self {
        self.table[i * self.dim + j] = prod;
        self
    }

    pub fn to_json(&self) -> AlgebraJson {
        let mut constants = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let p = self.basis_product(i, j);
                if !p.is_empty() {
                    constants.push((i, j, p.to_vec()));
                }
            }
        }
        AlgebraJson {
            dim: self.dim,
            scalar_order: self.scalar_order,
            kind: self.kind,
            labels: self.labels.clone(),
            constants,
        }
    }

    pub fn from_json(j: AlgebraJson) -> Result<Self> {
        let products = j
            .constants
            .into_iter()
            .map(|(i, k, p)| ((i, k), p))
            .collect();
        Self::new(j.dim, j.scalar_order, j.kind, j.labels, products)
    }
}

impl fmt::Debug for MultTableAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MultTableAlgebra({:?}, dim {}, over Q(z{}))",
            self.kind, self.dim, self.scalar_order
        )
    }
}

pub(crate) fn sparsify(v: &[CycloNum]) -> SparseProduct {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.clone()))
        .collect()
}

/// Wire format of an algebra.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    pub scalar_order: u32,
    pub kind: AlgebraKind,
    #[serde(default)]
    pub labels: Vec<String>,
    pub constants: Vec<(usize, usize, SparseProduct)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Law {
    Antisymmetry,
    Jacobi,
    Associativity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub law: Law,
    pub indices: Vec<usize>,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub kind: AlgebraKind,
    pub dim: usize,
    pub triples_checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn accumulate(acc: &mut [CycloNum], alg: &MultTableAlgebra, sign: i64, i: usize, inner: &[(usize, CycloNum)], left: bool) {
    let s = CycloNum::from_int(alg.scalar_order, sign);
    for (k, c) in inner {
        let prod = if left {
            alg.basis_product(i, *k)
        } else {
            alg.basis_product(*k, i)
        };
        if prod.is_empty() {
            continue;
        }
        let cs = c * &s;
        for (t, d) in prod {
            acc[*t].add_mul(&cs, d);
        }
    }
}

/// Check the defining laws of the algebra's kind on every ordered basis triple.
pub fn validate_algebra(alg: &MultTableAlgebra) -> ValidationReport {
    let n = alg.dim;
    let order = alg.scalar_order;
    let mut violations = Vec::new();
    let name = |ix: &[usize]| ix.iter().map(|&i| alg.labels[i].clone()).collect();
    let mut triples = 0;
    match alg.kind {
        AlgebraKind::Lie => {
            for i in 0..n {
                for j in i..n {
                    let a = alg.basis_product(i, j);
                    let b = alg.basis_product(j, i);
                    let mut sum = zero_vec(n, order);
                    for (k, c) in a.iter().chain(b) {
                        sum[*k] = &sum[*k] + c;
                    }
                    let bad = if i == j { !a.is_empty() } else { sum.iter().any(|c| !c.is_zero()) };
                    if bad {
                        violations.push(Violation {
                            law: Law::Antisymmetry,
                            indices: vec![i, j],
                            labels: name(&[i, j]),
                        });
                    }
                }
            }
            let mut acc = zero_vec(n, order);
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        triples += 1;
                        // [a,[b,c]] + [b,[c,a]] + [c,[a,b]]
                        accumulate(&mut acc, alg, 1, a, alg.basis_product(b, c), true);
                        accumulate(&mut acc, alg, 1, b, alg.basis_product(c, a), true);
                        accumulate(&mut acc, alg, 1, c, alg.basis_product(a, b), true);
                        if acc.iter().any(|x| !x.is_zero()) {
                            violations.push(Violation {
                                law: Law::Jacobi,
                                indices: vec![a, b, c],
                                labels: name(&[a, b, c]),
                            });
                            acc.iter_mut().for_each(|x| *x = CycloNum::zero(order));
                        }
                    }
                }
            }
        }
        AlgebraKind::Associative => {
            let mut acc = zero_vec(n, order);
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        triples += 1;
                        // (ab)c - a(bc)
                        accumulate(&mut acc, alg, 1, c, alg.basis_product(a, b), false);
                        accumulate(&mut acc, alg, -1, a, alg.basis_product(b, c), true);
                        if acc.iter().any(|x| !x.is_zero()) {
                            violations.push(Violation {
                                law: Law::Associativity,
                                indices: vec![a, b, c],
                                labels: name(&[a, b, c]),
                            });
                            acc.iter_mut().for_each(|x| *x = CycloNum::zero(order));
                        }
                    }
                }
            }
        }
    }
    ValidationReport {
        kind: alg.kind,
        dim: n,
        triples_checked: triples,
        violations,
    }
}

/// `sl₂` in the basis `(h, e, f)` with `[e,f] = h`, `[h,e] = 2e`, `[h,f] = -2f`.
pub fn sl2(order: u32) -> MultTableAlgebra {
    let c = |x| CycloNum::from_int(order, x);
    MultTableAlgebra::lie_from_brackets(
        3,
        order,
        vec!["h".into(), "e".into(), "f".into()],
        vec![
            ((1, 2), vec![(0, c(1))]),
            ((0, 1), vec![(1, c(2))]),
            ((0, 2), vec![(2, c(-2))]),
        ],
    )
    .expect("sl2 table is well formed")
}

/// Matrix units `E_ik` of `M_n`, basis index `i*n + k`, labels `E{i+1}{k+1}`.
pub fn matrix_units(n: usize, order: u32) -> MultTableAlgebra {
    let mut products = Vec::new();
    for i in 0..n {
        for k in 0..n {
            for l in 0..n {
                products.push(((i * n + k, k * n + l), vec![(i * n + l, CycloNum::one(order))]));
            }
        }
    }
    let labels = (0..n * n)
        .map(|x| format!("E{}{}", x / n + 1, x % n + 1))
        .collect();
    MultTableAlgebra::new(n * n, order, AlgebraKind::Associative, labels, products)
        .expect("matrix unit table is well formed")
}
