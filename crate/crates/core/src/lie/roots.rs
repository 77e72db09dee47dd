use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::lie::cartan::FiniteCartanMatrix;

/// Closure stops with an error past this many roots (E8 has 240).
const ROOT_BOUND: usize = 1000;

/// Roots in simple-root coordinates.
///
/// Positive roots come first, ordered by height and then with larger
/// coefficient vectors first (so the simple roots appear as `α_1, …, α_l`);
/// the negative roots follow in the same order.
#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan: FiniteCartanMatrix,
    roots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    positives: usize,
}

impl RootSystem {
    pub fn new(cartan: &FiniteCartanMatrix) -> Result<Self> {
        let found = close(cartan.entries())?;
        let mut pos: Vec<Vec<i64>> = found
            .into_iter()
            .filter(|r| r.iter().all(|&c| c >= 0))
            .collect();
        pos.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let positives = pos.len();
        let mut roots = pos.clone();
        roots.extend(pos.iter().map(|r| r.iter().map(|c| -c).collect::<Vec<_>>()));
        let index = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        let rs = RootSystem {
            cartan: cartan.clone(),
            roots,
            index,
            positives,
        };
        if rs.roots.len() != cartan.label().root_count() {
            return Err(Error::InvalidCartan(format!(
                "found {} roots, type {} has {}",
                rs.roots.len(),
                cartan.label(),
                cartan.label().root_count()
            )));
        }
        Ok(rs)
    }

    pub fn cartan(&self) -> &FiniteCartanMatrix {
        &self.cartan
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.positives
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn root(&self, k: usize) -> &[i64] {
        &self.roots[k]
    }

    pub fn is_positive(&self, k: usize) -> bool {
        k < self.positives
    }

    pub fn find(&self, r: &[i64]) -> Option<usize> {
        self.index.get(r).copied()
    }

    /// Index of `-α_k`.
    pub fn negate(&self, k: usize) -> usize {
        if k < self.positives {
            k + self.positives
        } else {
            k - self.positives
        }
    }

    pub fn height(&self, k: usize) -> i64 {
        self.roots[k].iter().sum()
    }

    pub fn simple(&self, i: usize) -> usize {
        i
    }

    /// Index of `α_a + α_b` if it is a root.
    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        let s: Vec<i64> = self.roots[a].iter().zip(&self.roots[b]).map(|(x, y)| x + y).collect();
        self.find(&s)
    }

    /// Index of `α_a - α_b` if it is a root.
    pub fn difference(&self, a: usize, b: usize) -> Option<usize> {
        let s: Vec<i64> = self.roots[a].iter().zip(&self.roots[b]).map(|(x, y)| x - y).collect();
        self.find(&s)
    }

    pub fn norm(&self, k: usize) -> i64 {
        self.cartan.inner(&self.roots[k], &self.roots[k])
    }

    /// Largest `p` with `β - pα` a root (`α = roots[a]`, `β = roots[b]`).
    pub fn string_down(&self, a: usize, b: usize) -> i64 {
        let mut p = 0;
        let mut cur = self.roots[b].clone();
        loop {
            for (c, x) in cur.iter_mut().zip(&self.roots[a]) {
                *c -= x;
            }
            if self.find(&cur).is_none() {
                return p;
            }
            p += 1;
        }
    }

    /// Integer coefficients of the coroot `h_α` in the basis `h_1..h_l`.
    pub fn coroot(&self, k: usize) -> Vec<i64> {
        let norm = self.norm(k);
        let d = self.cartan.symmetrizer();
        self.roots[k]
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let num = c * 2 * d[i];
                debug_assert_eq!(num % norm, 0);
                num / norm
            })
            .collect()
    }
}

/// All roots obtained from the simple roots by simple reflections.
fn close(entries: &[Vec<i64>]) -> Result<BTreeSet<Vec<i64>>> {
    let l = entries.len();
    let pairing = |i: usize, beta: &[i64]| -> i64 { (0..l).map(|j| beta[j] * entries[i][j]).sum() };
    let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut stack = Vec::new();
    for i in 0..l {
        let mut a = vec![0; l];
        a[i] = 1;
        stack.push(a);
    }
    while let Some(beta) = stack.pop() {
        if !found.insert(beta.clone()) {
            continue;
        }
        if found.len() > ROOT_BOUND {
            return Err(Error::NotFiniteType(ROOT_BOUND));
        }
        for i in 0..l {
            let mut r = beta.clone();
            r[i] -= pairing(i, &beta);
            if !found.contains(&r) {
                stack.push(r);
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::cartan::CartanType;

    fn rs(label: &str) -> RootSystem {
        RootSystem::new(&FiniteCartanMatrix::parse(label).unwrap()).unwrap()
    }

    #[test]
    fn counts() {
        for label in ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "D5", "G2", "F4", "E6", "E7", "E8"] {
            let r = rs(label);
            let t: CartanType = label.parse().unwrap();
            assert_eq!(r.len(), t.root_count(), "{label}");
            assert_eq!(2 * r.positive_count(), r.len());
        }
        assert_eq!(rs("A2").len(), 6);
        assert_eq!(rs("D4").positive_count(), 12);
    }

    #[test]
    fn g2_matches_root_strings() {
        // Independent enumeration by height: β + α_i is a root iff q = p - β(h_i) > 0,
        // where p is the length of the α_i-string below β.
        let r = rs("G2");
        let c = r.cartan().clone();
        let mut pos: BTreeSet<Vec<i64>> = [vec![1, 0], vec![0, 1]].into_iter().collect();
        for height in 1..10 {
            let level: Vec<Vec<i64>> = pos.iter().filter(|b| b.iter().sum::<i64>() == height).cloned().collect();
            for b in level {
                for i in 0..2 {
                    let mut p = 0;
                    let mut down = b.clone();
                    loop {
                        down[i] -= 1;
                        if !pos.contains(&down) {
                            break;
                        }
                        p += 1;
                    }
                    if p - c.pairing(i, &b) > 0 {
                        let mut up = b.clone();
                        up[i] += 1;
                        pos.insert(up);
                    }
                }
            }
        }
        assert_eq!(2 * pos.len(), r.len());
        assert!(pos.contains(&vec![3, 2]));
        for p in &pos {
            assert!(r.find(p).is_some_and(|k| r.is_positive(k)));
        }
    }

    #[test]
    fn ordering_and_negation() {
        let r = rs("A2");
        assert_eq!(r.roots()[..3], [vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(r.root(r.negate(2)), [-1, -1]);
        assert_eq!(r.sum(0, 1), Some(2));
        assert_eq!(r.difference(2, 0), Some(1));
        assert_eq!(r.string_down(0, 2), 1);
    }

    #[test]
    fn coroots_of_long_and_short_roots() {
        let r = rs("B2");
        // α_1 long, α_2 short: α_1 + 2α_2 is long, α_1 + α_2 short.
        let long = r.find(&[1, 2]).unwrap();
        let short = r.find(&[1, 1]).unwrap();
        assert_eq!(r.coroot(long), [1, 1]);
        assert_eq!(r.coroot(short), [2, 1]);
    }

    #[test]
    fn affine_matrix_does_not_close() {
        assert!(matches!(close(&[vec![2, -2], vec![-2, 2]]), Err(Error::NotFiniteType(_))));
    }
}
