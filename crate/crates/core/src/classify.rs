//! Outer automorphism groups as Dynkin diagram symmetries, their conjugacy
//! classes, and the resulting classification of loop algebras.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{builtin_catalog, extract_from_twist, match_affine_label};
use crate::algebra::centroid::centroid_graded;
use crate::algebra::grading::{eigengrading, GradedDecomposition};
use crate::descent::{build_matrix_algebra, lie_twist};
use crate::error::{Error, Result};
use crate::lie::automorphisms::{DiagramPermutation, ToralCharge};
use crate::lie::cartan::{CartanType, FiniteCartanMatrix};
use crate::lie::chevalley::{chevalley_algebra, Chevalley};
use crate::lie::roots::RootSystem;

/// Largest rank accepted by the brute-force symmetry search.
pub const MAX_SYMMETRY_RANK: usize = 9;

/// Finite group given by its multiplication table; element 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Checks closure, identity at index 0, inverses and associativity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        let bad = |m: &str| Err(Error::Input(format!("not a group table: {m}")));
        if n == 0 {
            return bad("empty");
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return bad("entries out of range");
        }
        if (0..n).any(|g| table[0][g] != g || table[g][0] != g) {
            return bad("element 0 is not the identity");
        }
        let mut inverses = Vec::with_capacity(n);
        for g in 0..n {
            match (0..n).find(|&h| table[g][h] == 0) {
                Some(h) if table[h][g] == 0 => inverses.push(h),
                _ => return bad("missing inverse"),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad("not associative");
                    }
                }
            }
        }
        Ok(FiniteGroup { table, inverses })
    }

    pub fn trivial() -> Self {
        FiniteGroup {
            table: vec![vec![0]],
            inverses: vec![0],
        }
    }

    /// `Z/nZ` with `k ↦ k`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(table).expect("cyclic table is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(h, g), self.inverse(h))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }
}

/// Symmetries of a Dynkin diagram, identity first and then in lexicographic
/// order of the 0-based images.
#[derive(Debug, Clone)]
pub struct OutGroup {
    pub cartan: CartanType,
    pub elements: Vec<DiagramPermutation>,
    pub group: FiniteGroup,
}

pub fn dynkin_automorphism_group(cartan: &FiniteCartanMatrix) -> Result<OutGroup> {
    let l = cartan.rank();
    if l > MAX_SYMMETRY_RANK {
        return Err(Error::Unsupported(format!(
            "symmetry search is limited to rank {MAX_SYMMETRY_RANK}"
        )));
    }
    let a = cartan.entries();
    let mut found = Vec::new();
    let mut image = Vec::with_capacity(l);
    let mut used = vec![false; l];
    search(a, &mut image, &mut used, &mut found);
    let elements: Vec<DiagramPermutation> = found
        .into_iter()
        .map(|p| DiagramPermutation::from_zero_based(p).expect("search yields permutations"))
        .collect();
    let index = |p: &DiagramPermutation| elements.iter().position(|q| q == p).expect("closed under composition");
    let table = elements
        .iter()
        .map(|x| elements.iter().map(|y| index(&x.compose(y))).collect())
        .collect();
    let group = FiniteGroup::from_table(table)?;
    Ok(OutGroup {
        cartan: cartan.label(),
        elements,
        group,
    })
}

fn search(a: &[Vec<i64>], image: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
    let i = image.len();
    if i == a.len() {
        out.push(image.clone());
        return;
    }
    for t in 0..a.len() {
        if used[t] || a[t][t] != a[i][i] {
            continue;
        }
        if (0..i).any(|j| a[image[j]][t] != a[j][i] || a[t][image[j]] != a[i][j]) {
            continue;
        }
        used[t] = true;
        image.push(t);
        search(a, image, used, out);
        image.pop();
        used[t] = false;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjClass {
    /// Smallest element index in the class.
    pub rep: usize,
    pub size: usize,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjClassTable {
    pub classes: Vec<ConjClass>,
    pub class_of: Vec<usize>,
}

pub fn conjugacy_classes(group: &FiniteGroup) -> ConjClassTable {
    let n = group.order();
    let mut class_of = vec![usize::MAX; n];
    let mut classes = Vec::new();
    for g in 0..n {
        if class_of[g] != usize::MAX {
            continue;
        }
        let mut members: Vec<usize> = (0..n).map(|h| group.conjugate(h, g)).collect();
        members.sort_unstable();
        members.dedup();
        for &x in &members {
            class_of[x] = classes.len();
        }
        classes.push(ConjClass {
            rep: g,
            size: members.len(),
            members,
        });
    }
    ConjClassTable { classes, class_of }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutClass {
    pub rep: DiagramPermutation,
    pub size: usize,
    pub order: u32,
}

/// `H¹(X, Out(G_X))` for the punctured line, identified with the conjugacy
/// classes of `Out` (a continuous homomorphism from the procyclic
/// fundamental group is determined by the image of a topological generator).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct H1Table {
    pub tag: String,
    pub cartan: String,
    pub classes: Vec<OutClass>,
}

pub fn h1_out(cartan: &FiniteCartanMatrix) -> Result<H1Table> {
    let out = dynkin_automorphism_group(cartan)?;
    let table = conjugacy_classes(&out.group);
    Ok(H1Table {
        tag: "H1(X, Out(G_X))".into(),
        cartan: cartan.label().to_string(),
        classes: table
            .classes
            .iter()
            .map(|c| OutClass {
                rep: out.elements[c.rep].clone(),
                size: c.size,
                order: out.elements[c.rep].order(),
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationRow {
    pub class_rep: DiagramPermutation,
    pub class_size: usize,
    pub twist_order: u32,
    pub affine_label: String,
    pub grading_dims: Vec<usize>,
}

fn build(cartan: &FiniteCartanMatrix) -> Result<Chevalley> {
    chevalley_algebra(&RootSystem::new(cartan)?)
}

fn loop_of(ch: &Chevalley, perm: &DiagramPermutation) -> Result<(crate::descent::TwistData, GradedDecomposition)> {
    let data = lie_twist(ch, perm, &ToralCharge::zero(ch.rank()))?;
    let grading = eigengrading(&data.alg, &data.source)?;
    Ok((data, grading))
}

/// One row per conjugacy class: `L(π)` for the representative, its grading
/// and its affine label.
pub fn classification_table(cartan: &FiniteCartanMatrix) -> Result<Vec<ClassificationRow>> {
    let ch = build(cartan)?;
    let out = dynkin_automorphism_group(cartan)?;
    let classes = conjugacy_classes(&out.group).classes;
    classes
        .par_iter()
        .map(|c| {
            let perm = &out.elements[c.rep];
            let (data, grading) = loop_of(&ch, perm)?;
            let (gcm, _) = extract_from_twist(&ch, &data, perm, None)?;
            let label = match_affine_label(&gcm, builtin_catalog())?;
            Ok(ClassificationRow {
                class_rep: perm.clone(),
                class_size: c.size,
                twist_order: perm.order(),
                affine_label: label.to_string(),
                grading_dims: grading.dims(),
            })
        })
        .collect()
}

/// Aligned plain-text rendering of the JSON rows.
pub fn classification_text(rows: &[ClassificationRow]) -> String {
    let value = serde_json::to_value(rows).expect("rows serialize");
    let headers = ["class_rep", "class_size", "twist_order", "affine_label", "grading_dims"];
    let cells: Vec<Vec<String>> = value
        .as_array()
        .into_iter()
        .flatten()
        .map(|row| {
            headers
                .iter()
                .map(|h| match &row[h] {
                    serde_json::Value::String(s) => s.clone(),
                    v => v.to_string(),
                })
                .collect()
        })
        .collect();
    let widths: Vec<usize> = headers
        .iter()
        .enumerate()
        .map(|(k, h)| cells.iter().map(|r| r[k].len()).chain([h.len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let line = |out: &mut String, row: &[String]| {
        let parts: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut out, &headers.map(String::from));
    for row in &cells {
        line(&mut out, row);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InverseConjugacy {
    pub holds: bool,
    /// For each element `g`, some `h` with `h g h⁻¹ = g⁻¹`.
    pub witnesses: Vec<Option<usize>>,
}

pub fn inverse_conjugacy_check(group: &FiniteGroup) -> InverseConjugacy {
    let n = group.order();
    let witnesses: Vec<Option<usize>> = (0..n)
        .map(|g| (0..n).find(|&h| group.conjugate(h, g) == group.inverse(g)))
        .collect();
    InverseConjugacy {
        holds: witnesses.iter().all(Option::is_some),
        witnesses,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KvsR {
    pub r_class_count: usize,
    pub k_class_count: usize,
    pub inverse_conjugacy: bool,
    /// Centroid dimensions per residue for `L(π)` of each class.
    pub centroid_dims: Vec<Vec<usize>>,
    pub centroid_hypothesis: bool,
    pub hypotheses_hold: bool,
}

/// Class counts under conjugacy and under conjugacy-or-inversion, given the
/// outcome of the centroid hypothesis.
pub fn k_vs_r_for_group(group: &FiniteGroup, centroid_dims: Vec<Vec<usize>>, centroid_hypothesis: bool) -> Result<KvsR> {
    let table = conjugacy_classes(group);
    let r_class_count = table.classes.len();
    // Inversion pairs up classes; each pair {c, c⁻¹} is one k-class.
    let k_class_count = (0..r_class_count)
        .filter(|&k| k <= table.class_of[group.inverse(table.classes[k].rep)])
        .count();
    let inverse_conjugacy = inverse_conjugacy_check(group).holds;
    let hypotheses_hold = inverse_conjugacy && centroid_hypothesis;
    let report = KvsR {
        r_class_count,
        k_class_count,
        inverse_conjugacy,
        centroid_dims,
        centroid_hypothesis,
        hypotheses_hold,
    };
    if hypotheses_hold && report.r_class_count != report.k_class_count {
        return Err(Error::Verification(format!(
            "class counts differ although both hypotheses hold: {} vs {}",
            report.r_class_count, report.k_class_count
        )));
    }
    Ok(report)
}

/// Dimensions of the degree-`d̄` centroid of `L(π)` for every residue `d̄`.
pub fn loop_centroid_dims(ch: &Chevalley, perm: &DiagramPermutation) -> Result<Vec<usize>> {
    let (data, grading) = loop_of(ch, perm)?;
    (0..grading.period())
        .map(|d| Ok(centroid_graded(&data.alg, &grading, d)?.solution_dim))
        .collect()
}

fn centroid_is_base_ring(dims: &[usize]) -> bool {
    dims.iter().enumerate().all(|(d, &n)| n == usize::from(d == 0))
}

pub fn k_vs_r_classes(cartan: &FiniteCartanMatrix) -> Result<KvsR> {
    let ch = build(cartan)?;
    let out = dynkin_automorphism_group(cartan)?;
    let classes = conjugacy_classes(&out.group).classes;
    let dims: Vec<Vec<usize>> = classes
        .par_iter()
        .map(|c| loop_centroid_dims(&ch, &out.elements[c.rep]))
        .collect::<Result<_>>()?;
    let ok = dims.iter().all(|d| centroid_is_base_ring(d));
    k_vs_r_for_group(&out.group, dims, ok)
}

/// Loop algebras of `M_n`: every automorphism is inner, so `Out` is trivial
/// and a single class remains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixClassification {
    pub n: usize,
    pub class_count: usize,
    pub centroid_dim: usize,
    pub note: String,
}

pub fn matrix_algebra_classes(n: usize) -> Result<MatrixClassification> {
    if n == 0 {
        return Err(Error::Input("matrix size must be positive".into()));
    }
    let classes = conjugacy_classes(&FiniteGroup::trivial());
    let (alg, _) = build_matrix_algebra(n, &vec![0; n], 1)?;
    let grading = GradedDecomposition::trivial(&alg);
    let centroid_dim = centroid_graded(&alg, &grading, 0)?.solution_dim;
    Ok(MatrixClassification {
        n,
        class_count: classes.classes.len(),
        centroid_dim,
        note: "all loop algebras trivial".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cartan(label: &str) -> FiniteCartanMatrix {
        FiniteCartanMatrix::parse(label).unwrap()
    }

    /// Independent filter over every permutation of the nodes.
    fn all_symmetries(label: &str) -> usize {
        let c = cartan(label);
        let l = c.rank();
        let mut count = 0;
        let mut p: Vec<usize> = (0..l).collect();
        loop {
            if (0..l).all(|i| (0..l).all(|j| c.get(p[i], p[j]) == c.get(i, j))) {
                count += 1;
            }
            // next permutation
            let Some(i) = (0..l.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
                break;
            };
            let j = (i + 1..l).rev().find(|&j| p[j] > p[i]).unwrap();
            p.swap(i, j);
            p[i + 1..].reverse();
        }
        count
    }

    #[test]
    fn group_orders() {
        for (label, n) in [("A1", 1), ("A2", 2), ("A3", 2), ("B2", 1), ("D4", 6), ("D5", 2), ("E6", 2), ("G2", 1)] {
            let g = dynkin_automorphism_group(&cartan(label)).unwrap();
            assert_eq!(g.group.order(), n, "{label}");
            assert_eq!(all_symmetries(label), n, "{label}");
            assert!(g.elements[0].is_identity());
            assert!(g.elements.iter().all(|p| p.preserves(&cartan(label))));
        }
    }

    #[test]
    fn class_counts() {
        for (label, n) in [("A1", 1), ("A2", 2), ("A3", 2), ("B2", 1), ("D4", 3), ("G2", 1)] {
            let g = dynkin_automorphism_group(&cartan(label)).unwrap();
            let t = conjugacy_classes(&g.group);
            assert_eq!(t.classes.len(), n, "{label}");
            assert_eq!(t.classes.iter().map(|c| c.size).sum::<usize>(), g.group.order());
            assert_eq!(h1_out(&cartan(label)).unwrap().classes.len(), n);
        }
        let d4 = dynkin_automorphism_group(&cartan("D4")).unwrap();
        let sizes: Vec<usize> = conjugacy_classes(&d4.group).classes.iter().map(|c| c.size).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
    }

    #[test]
    fn class_of_is_conjugation_invariant() {
        let g = dynkin_automorphism_group(&cartan("D4")).unwrap().group;
        let t = conjugacy_classes(&g);
        for x in 0..g.order() {
            for h in 0..g.order() {
                assert_eq!(t.class_of[x], t.class_of[g.conjugate(h, x)]);
            }
        }
    }

    #[test]
    fn inverse_conjugacy() {
        let d4 = dynkin_automorphism_group(&cartan("D4")).unwrap();
        assert!(inverse_conjugacy_check(&d4.group).holds);
        let c3 = FiniteGroup::cyclic(3);
        let r = inverse_conjugacy_check(&c3);
        assert!(!r.holds);
        assert_eq!(r.witnesses, vec![Some(0), None, None]);
    }

    #[test]
    fn k_versus_r() {
        let a2 = k_vs_r_classes(&cartan("A2")).unwrap();
        assert_eq!((a2.r_class_count, a2.k_class_count), (2, 2));
        assert!(a2.hypotheses_hold);
        assert_eq!(a2.centroid_dims, vec![vec![1], vec![1, 0]]);
        let c3 = k_vs_r_for_group(&FiniteGroup::cyclic(3), vec![], true).unwrap();
        assert_eq!((c3.r_class_count, c3.k_class_count), (3, 2));
        assert!(!c3.hypotheses_hold);
    }

    #[test]
    fn classification_rows() {
        let rows = classification_table(&cartan("A2")).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].affine_label, "A2^(1)");
        assert_eq!(rows[1].affine_label, "A2^(2)");
        assert_eq!(rows[1].grading_dims, vec![3, 5]);
        let text = classification_text(&rows);
        assert!(text.starts_with("class_rep"));
        assert!(text.contains("A2^(2)"));
    }

    #[test]
    fn matrix_algebras_have_one_class() {
        let m = matrix_algebra_classes(2).unwrap();
        assert_eq!(m.class_count, 1);
        assert_eq!(m.centroid_dim, 1);
    }

    #[test]
    fn table_validation() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert_eq!(FiniteGroup::cyclic(4).element_order(1), 4);
    }
}
