//! Degree-homogeneous centroid of a loop algebra.
//!
//! A centroid transformation commutes with every left and right multiplication.
//! At the residue level a homogeneous one of shift `d̄` is a family of maps
//! `c_ī : A_ī → A_{ī+d̄}`; the window variant solves for independent maps per
//! integer degree and checks that the solutions are residue-periodic.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::grading::GradedDecomposition;
use crate::algebra::table::{AlgebraKind, MultTableAlgebra};
use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::linalg::{SparseRow, SparseSystem};

/// Structure constants in the graded basis of a grading.
struct GradedTable {
    n: usize,
    order: u32,
    period: usize,
    residue_of: Vec<usize>,
    /// `u_a u_b` in graded coordinates, sparse.
    products: Vec<Vec<(usize, CycloNum)>>,
}

impl GradedTable {
    fn new(alg: &MultTableAlgebra, grading: &GradedDecomposition) -> Self {
        let n = alg.dim();
        let basis: Vec<_> = grading.components().iter().flatten().cloned().collect();
        let mut residue_of = Vec::with_capacity(n);
        for (r, comp) in grading.components().iter().enumerate() {
            residue_of.extend(std::iter::repeat_n(r, comp.len()));
        }
        let mut products = Vec::with_capacity(n * n);
        for a in &basis {
            for b in &basis {
                let g = grading.graded_coords(&alg.multiply(a, b));
                products.push(
                    g.into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .collect(),
                );
            }
        }
        GradedTable {
            n,
            order: alg.scalar_order(),
            period: grading.period() as usize,
            residue_of,
            products,
        }
    }

    fn product(&self, a: usize, b: usize) -> &[(usize, CycloNum)] {
        &self.products[a * self.n + b]
    }

    fn multiply(&self, x: &[CycloNum], y: &[CycloNum]) -> Vec<CycloNum> {
        let mut out = vec![CycloNum::zero(self.order); self.n];
        for (a, xa) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let c = xa * yb;
                for (k, s) in self.product(a, b) {
                    out[*k].add_mul(&c, s);
                }
            }
        }
        out
    }

    /// Greedy homogeneous generating set, in graded basis order.
    fn generators(&self, kind: AlgebraKind) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut tracker = SparseSystem::new(self.n, self.order);
        for a in 0..self.n {
            if tracker.is_full_rank() {
                break;
            }
            let mut probe = tracker.clone();
            if !probe.add_equation(sparse(&unit(self.n, a, self.order))) {
                continue;
            }
            gens.push(a);
            // The subalgebra generated by `gens` is the closure of their span
            // under left multiplication by generators (and right, if associative).
            tracker = SparseSystem::new(self.n, self.order);
            let mut queue: Vec<Vec<CycloNum>> =
                gens.iter().map(|&g| unit(self.n, g, self.order)).collect();
            while let Some(v) = queue.pop() {
                let row = sparse(&v);
                if row.is_empty() || !tracker.add_equation(row) {
                    continue;
                }
                for &g in &gens {
                    let u = unit(self.n, g, self.order);
                    queue.push(self.multiply(&u, &v));
                    if kind == AlgebraKind::Associative {
                        queue.push(self.multiply(&v, &u));
                    }
                }
            }
        }
        gens
    }
}

fn sparse(v: &[CycloNum]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.clone()))
        .collect()
}

/// A residue-level homogeneous centroid family `(c_ī : A_ī → A_{ī+d̄})`.
///
/// `maps[i]` is the matrix of `c_ī` in the component bases, stored by rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentroidMap {
    pub maps: Vec<Vec<Vec<CycloNum>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentroidReport {
    pub shift_residue: u32,
    pub solution_dim: usize,
    pub basis: Vec<CentroidMap>,
}

/// Index of unknown `x_{a,r}`, the `u_r`-coefficient of `c(u_a)`.
struct Unknowns {
    start: Vec<usize>,
    targets: Vec<std::ops::Range<usize>>,
}

impl Unknowns {
    fn var(&self, a: usize, r: usize) -> Option<usize> {
        let t = &self.targets[a];
        t.contains(&r).then(|| self.start[a] + (r - t.start))
    }
}

/// Solve for the homogeneous centroid of shift `d̄` at the residue level.
pub fn centroid_graded(
    alg: &MultTableAlgebra,
    grading: &GradedDecomposition,
    shift_residue: u32,
) -> Result<CentroidReport> {
    let table = GradedTable::new(alg, grading);
    let m = table.period;
    let d = shift_residue as usize % m;
    let n = table.n;
    let order = table.order;

    let mut start = Vec::with_capacity(n);
    let mut targets = Vec::with_capacity(n);
    let mut total = 0;
    for a in 0..n {
        let t = grading.range((table.residue_of[a] + d) % m);
        start.push(total);
        total += t.len();
        targets.push(t);
    }
    let unknowns = Unknowns { start, targets };

    let gens = table.generators(alg.kind());
    let mut system = SparseSystem::new(total, order);
    'fill: for a in 0..n {
        for &g in &gens {
            let mut rows = equations(&table, &unknowns, a, g, true);
            if alg.kind() == AlgebraKind::Associative {
                rows.extend(equations(&table, &unknowns, a, g, false));
            }
            for row in rows {
                if system.is_full_rank() {
                    break 'fill;
                }
                system.add_equation(row);
            }
        }
    }
    let solutions = system.nullspace();

    let mut basis = Vec::with_capacity(solutions.len());
    for sol in &solutions {
        let images: Vec<Vec<CycloNum>> = (0..n)
            .map(|a| {
                let mut v = vec![CycloNum::zero(order); n];
                for r in unknowns.targets[a].clone() {
                    v[r] = sol[unknowns.var(a, r).unwrap()].clone();
                }
                v
            })
            .collect();
        verify_centroid(&table, &images)?;
        let mut maps = Vec::with_capacity(m);
        for i in 0..m {
            let src = grading.range(i);
            let dst = grading.range((i + d) % m);
            let rows = dst
                .clone()
                .map(|r| src.clone().map(|a| images[a][r].clone()).collect())
                .collect();
            maps.push(rows);
        }
        basis.push(CentroidMap { maps });
    }
    Ok(CentroidReport {
        shift_residue: d as u32,
        solution_dim: basis.len(),
        basis,
    })
}

/// Rows of `c(u_a u_g) - c(u_a) u_g` (or `c(u_g u_a) - u_g c(u_a)` when
/// `right` is false), one per output coordinate.
fn equations(table: &GradedTable, unknowns: &Unknowns, a: usize, g: usize, right: bool) -> Vec<SparseRow> {
    let mut rows: BTreeMap<usize, SparseRow> = BTreeMap::new();
    let mut acc = |t: usize, var: usize, c: &CycloNum, sign: bool| {
        let row = rows.entry(t).or_default();
        let slot = row.entry(var).or_insert_with(|| CycloNum::zero(table.order));
        *slot = if sign { &*slot + c } else { &*slot - c };
    };
    let inner = if right { table.product(a, g) } else { table.product(g, a) };
    for (k, p) in inner {
        for t in unknowns.targets[*k].clone() {
            acc(t, unknowns.var(*k, t).unwrap(), p, true);
        }
    }
    for r in unknowns.targets[a].clone() {
        let var = unknowns.var(a, r).unwrap();
        let outer = if right { table.product(r, g) } else { table.product(g, r) };
        for (t, p) in outer {
            acc(*t, var, p, false);
        }
    }
    rows.into_values()
        .map(|mut row| {
            row.retain(|_, c| !c.is_zero());
            row
        })
        .filter(|row| !row.is_empty())
        .collect()
}

fn verify_centroid(table: &GradedTable, images: &[Vec<CycloNum>]) -> Result<()> {
    let n = table.n;
    let apply = |v: &[CycloNum]| {
        let mut out = vec![CycloNum::zero(table.order); n];
        for (a, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            crate::linalg::vec_axpy(&mut out, c, &images[a]);
        }
        out
    };
    for a in 0..n {
        for b in 0..n {
            let mut prod = vec![CycloNum::zero(table.order); n];
            for (k, c) in table.product(a, b) {
                prod[*k] = c.clone();
            }
            let lhs = apply(&prod);
            if lhs != table.multiply(&images[a], &unit(n, b, table.order))
                || lhs != table.multiply(&unit(n, a, table.order), &images[b])
            {
                return Err(Error::Verification(format!(
                    "centroid solution fails on graded basis pair ({a}, {b})"
                )));
            }
        }
    }
    Ok(())
}

fn unit(n: usize, a: usize, order: u32) -> Vec<CycloNum> {
    crate::linalg::unit_vec(n, a, order)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowCentroidReport {
    pub shift: i64,
    pub window: i64,
    pub solution_dim: usize,
    /// Every solution satisfies `c_j = c_{j+m}` wherever both are defined.
    pub residue_periodic: bool,
}

/// Degree-shift-`e` centroid maps of `L(Σ)` restricted to degrees `|j| ≤ W`,
/// with an independent unknown map at every degree.
pub fn centroid_window(
    alg: &MultTableAlgebra,
    grading: &GradedDecomposition,
    shift: i64,
    window: i64,
) -> Result<WindowCentroidReport> {
    let table = GradedTable::new(alg, grading);
    let order = table.order;
    let m = table.period as i64;
    let domain: Vec<i64> = (-window..=window)
        .filter(|j| (j + shift).abs() <= window)
        .collect();
    let res = |j: i64| j.rem_euclid(m) as usize;

    // var(j, a, r): coefficient of u_r z^{j+e} in c(u_a z^j)
    let mut start = BTreeMap::new();
    let mut total = 0;
    for &j in &domain {
        start.insert(j, total);
        total += grading.range(res(j)).len() * grading.range(res(j + shift)).len();
    }
    let var = |j: i64, a: usize, r: usize| -> usize {
        let src = grading.range(res(j));
        let dst = grading.range(res(j + shift));
        start[&j] + (a - src.start) * dst.len() + (r - dst.start)
    };

    let mut system = SparseSystem::new(total, order);
    for &i in &domain {
        for j in -window..=window {
            let k = i + j;
            if !start.contains_key(&k) {
                continue;
            }
            for a in grading.range(res(i)) {
                for b in grading.range(res(j)) {
                    let sides: &[bool] = if start.contains_key(&j) { &[true, false] } else { &[true] };
                    for &right in sides {
                        let mut rows: BTreeMap<usize, SparseRow> = BTreeMap::new();
                        let mut acc = |t: usize, v: usize, c: &CycloNum, plus: bool| {
                            let slot = rows
                                .entry(t)
                                .or_default()
                                .entry(v)
                                .or_insert_with(|| CycloNum::zero(order));
                            *slot = if plus { &*slot + c } else { &*slot - c };
                        };
                        for (p, c) in table.product(a, b) {
                            for t in grading.range(res(k + shift)) {
                                acc(t, var(k, *p, t), c, true);
                            }
                        }
                        if right {
                            // c_i(u_a) u_b
                            for r in grading.range(res(i + shift)) {
                                for (t, c) in table.product(r, b) {
                                    acc(*t, var(i, a, r), c, false);
                                }
                            }
                        } else {
                            // u_a c_j(u_b)
                            for r in grading.range(res(j + shift)) {
                                for (t, c) in table.product(a, r) {
                                    acc(*t, var(j, b, r), c, false);
                                }
                            }
                        }
                        for mut row in rows.into_values() {
                            row.retain(|_, c| !c.is_zero());
                            if !row.is_empty() {
                                system.add_equation(row);
                            }
                        }
                    }
                }
            }
        }
    }
    let solutions = system.nullspace();
    let periodic = solutions.iter().all(|sol| {
        domain.iter().all(|&j| {
            if !start.contains_key(&(j + m)) {
                return true;
            }
            let len = grading.range(res(j)).len() * grading.range(res(j + shift)).len();
            (0..len).all(|o| sol[start[&j] + o] == sol[start[&(j + m)] + o])
        })
    });
    Ok(WindowCentroidReport {
        shift,
        window,
        solution_dim: solutions.len(),
        residue_periodic: periodic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::automorphism::check_automorphism;
    use crate::algebra::grading::eigengrading;
    use crate::algebra::table::{matrix_units, sl2};
    use crate::linalg::Mat;

    fn twisted_sl2() -> (MultTableAlgebra, GradedDecomposition) {
        let alg = sl2(2);
        let d: Vec<_> = [1, -1, -1].iter().map(|&x| CycloNum::from_int(2, x)).collect();
        let s = check_automorphism(&alg, &Mat::diagonal(&d, 2), 2).unwrap();
        let g = eigengrading(&alg, &s).unwrap();
        (alg, g)
    }

    #[test]
    fn twisted_sl2_centroid_is_scalars() {
        let (alg, g) = twisted_sl2();
        let r0 = centroid_graded(&alg, &g, 0).unwrap();
        assert_eq!(r0.solution_dim, 1);
        let id = &r0.basis[0];
        // A multiple of the identity family.
        let c = id.maps[0][0][0].clone();
        assert_eq!(id.maps[1], vec![vec![c.clone(), CycloNum::zero(2)], vec![CycloNum::zero(2), c]]);
        assert_eq!(centroid_graded(&alg, &g, 1).unwrap().solution_dim, 0);
    }

    #[test]
    fn trivial_grading_of_simple_algebra() {
        let alg = sl2(1);
        let g = GradedDecomposition::trivial(&alg);
        assert_eq!(centroid_graded(&alg, &g, 0).unwrap().solution_dim, 1);
    }

    #[test]
    fn matrix_algebra_centroid_is_scalars() {
        let alg = matrix_units(2, 1);
        let g = GradedDecomposition::trivial(&alg);
        assert_eq!(centroid_graded(&alg, &g, 0).unwrap().solution_dim, 1);
    }

    #[test]
    fn abelian_algebra_has_large_centroid() {
        let alg = MultTableAlgebra::lie_from_brackets(2, 1, vec![], vec![]).unwrap();
        let g = GradedDecomposition::trivial(&alg);
        assert_eq!(centroid_graded(&alg, &g, 0).unwrap().solution_dim, 4);
    }

    #[test]
    fn window_centroid_agrees_with_residue_level() {
        let (alg, g) = twisted_sl2();
        for (shift, expected) in [(0, 1), (1, 0), (2, 1), (-2, 1), (3, 0)] {
            let r = centroid_window(&alg, &g, shift, 4).unwrap();
            assert_eq!(r.solution_dim, expected, "shift {shift}");
            assert!(r.residue_periodic);
        }
    }
}
