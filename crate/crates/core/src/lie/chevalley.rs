use std::collections::HashMap;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::algebra::table::{AlgebraKind, MultTableAlgebra, SparseProduct};
use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::lie::roots::RootSystem;

/// Chevalley basis of a simple Lie algebra.
///
/// Basis order: `h_1..h_l`, then `e_α` for the roots in [`RootSystem`] order.
#[derive(Debug, Clone)]
pub struct Chevalley {
    rs: RootSystem,
    alg: MultTableAlgebra,
    constants: HashMap<(usize, usize), i64>,
}

impl Chevalley {
    pub fn algebra(&self) -> &MultTableAlgebra {
        &self.alg
    }

    pub fn roots(&self) -> &RootSystem {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// Basis index of `h_i`.
    pub fn h(&self, i: usize) -> usize {
        i
    }

    /// Basis index of `e_α` for root index `k`.
    pub fn e(&self, k: usize) -> usize {
        self.rs.rank() + k
    }

    /// Root index of basis vector `b`, or `None` for Cartan directions.
    pub fn root_of(&self, b: usize) -> Option<usize> {
        b.checked_sub(self.rs.rank())
    }

    /// `N_{α,β}` with `[e_α, e_β] = N_{α,β} e_{α+β}`.
    pub fn structure_constant(&self, a: usize, b: usize) -> Option<i64> {
        self.constants.get(&(a, b)).copied()
    }

    /// `⟨s, α⟩ = Σ s_i c_i` for the root at basis index `b` (0 on the Cartan).
    pub fn charge(&self, s: &[i64], b: usize) -> i64 {
        match self.root_of(b) {
            None => 0,
            Some(k) => self.rs.root(k).iter().zip(s).map(|(c, x)| c * x).sum(),
        }
    }
}

/// Structure constants from extraspecial pairs, all set to `+(p+1)`.
struct Constants<'a> {
    rs: &'a RootSystem,
    positive: HashMap<(usize, usize), Rational64>,
}

impl Constants<'_> {
    fn norm(&self, k: usize) -> Rational64 {
        Rational64::from_integer(self.rs.norm(k))
    }

    /// `N_{x,y}` for any roots with `x + y` a root, reduced to positive pairs by
    /// `N_{-α,-β} = -N_{α,β}` and the rule `N_{α,β}/(γ,γ) = N_{β,γ}/(α,α)` for
    /// `α + β + γ = 0`.
    fn n(&self, x: usize, y: usize) -> Rational64 {
        let rs = self.rs;
        match (rs.is_positive(x), rs.is_positive(y)) {
            (true, true) => self.positive[&(x, y)],
            (false, false) => -self.n(rs.negate(x), rs.negate(y)),
            (false, true) => -self.n(y, x),
            (true, false) => {
                let b = rs.negate(y);
                let g = rs.sum(x, y).expect("x + y is a root");
                if rs.is_positive(g) {
                    // x = b + g
                    -self.norm(g) / self.norm(x) * self.n(b, g)
                } else {
                    // b = x + g'
                    let g = rs.negate(g);
                    self.norm(g) / self.norm(b) * self.n(g, x)
                }
            }
        }
    }

    fn build(rs: &RootSystem) -> Result<HashMap<(usize, usize), i64>> {
        let mut c = Constants {
            rs,
            positive: HashMap::new(),
        };
        let np = rs.positive_count();
        for xi in 0..np {
            let mut pairs: Vec<(usize, usize)> = (0..np)
                .filter_map(|a| rs.difference(xi, a).filter(|&b| rs.is_positive(b)).map(|b| (a, b)))
                .filter(|(a, b)| a < b)
                .collect();
            if pairs.is_empty() {
                continue;
            }
            pairs.sort();
            let (a1, b1) = pairs[0];
            let n1 = Rational64::from_integer(rs.string_down(a1, b1) + 1);
            c.positive.insert((a1, b1), n1);
            c.positive.insert((b1, a1), -n1);
            for &(a, b) in &pairs[1..] {
                let mut sum = Rational64::zero();
                if let Some(d) = rs.difference(b, a1) {
                    sum += c.n(b, rs.negate(a1)) * c.n(a, rs.negate(b1)) / c.norm(d);
                }
                if let Some(d) = rs.difference(a, a1) {
                    sum += c.n(rs.negate(a1), a) * c.n(b, rs.negate(b1)) / c.norm(d);
                }
                let v = c.norm(xi) / n1 * sum;
                c.positive.insert((a, b), v);
                c.positive.insert((b, a), -v);
            }
        }
        let mut out = HashMap::new();
        for x in 0..rs.len() {
            for y in 0..rs.len() {
                if rs.sum(x, y).is_none() {
                    continue;
                }
                let v = c.n(x, y);
                let p = rs.string_down(x, y);
                if !v.is_integer() || v.abs() != Rational64::from_integer(p + 1) {
                    return Err(Error::Verification(format!(
                        "structure constant N({:?}, {:?}) = {v}, expected ±{}",
                        rs.root(x),
                        rs.root(y),
                        p + 1
                    )));
                }
                out.insert((x, y), v.to_integer());
            }
        }
        Ok(out)
    }
}

fn root_label(prefix: char, coeffs: &[i64]) -> String {
    let digits: String = coeffs.iter().map(|c| c.abs().to_string()).collect();
    format!("{prefix}{digits}")
}

/// Chevalley basis multiplication table over `Q`.
pub fn chevalley_algebra(rs: &RootSystem) -> Result<Chevalley> {
    let l = rs.rank();
    let n = l + rs.len();
    let constants = Constants::build(rs)?;
    let int = |x: i64| CycloNum::from_int(1, x);

    let mut labels: Vec<String> = (1..=l).map(|i| format!("h{i}")).collect();
    for k in 0..rs.len() {
        let prefix = if rs.is_positive(k) { 'e' } else { 'f' };
        labels.push(root_label(prefix, rs.root(k)));
    }

    let mut products: Vec<((usize, usize), SparseProduct)> = Vec::new();
    for k in 0..rs.len() {
        let e = l + k;
        for i in 0..l {
            let w = rs.cartan().pairing(i, rs.root(k));
            if w != 0 {
                products.push(((i, e), vec![(e, int(w))]));
                products.push(((e, i), vec![(e, int(-w))]));
            }
        }
        let neg = l + rs.negate(k);
        let coroot: SparseProduct = rs
            .coroot(k)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(i, c)| (i, int(c)))
            .collect();
        products.push(((e, neg), coroot));
        for j in 0..rs.len() {
            if let Some(s) = rs.sum(k, j) {
                products.push(((e, l + j), vec![(l + s, int(constants[&(k, j)]))]));
            }
        }
    }
    let alg = MultTableAlgebra::new(n, 1, AlgebraKind::Lie, labels, products)?;
    Ok(Chevalley { rs: rs.clone(), alg, constants })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::table::{sl2, validate_algebra};
    use crate::lie::cartan::FiniteCartanMatrix;

    fn build(label: &str) -> Chevalley {
        let rs = RootSystem::new(&FiniteCartanMatrix::parse(label).unwrap()).unwrap();
        chevalley_algebra(&rs).unwrap()
    }

    #[test]
    fn a1_is_sl2() {
        let c = build("A1");
        let sl = sl2(1);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(c.algebra().basis_product(i, j), sl.basis_product(i, j));
            }
        }
        assert_eq!(c.algebra().labels(), ["h1", "e1", "f1"]);
    }

    #[test]
    fn jacobi_holds_for_small_types() {
        for (label, dim) in [("A2", 8), ("B2", 10), ("G2", 14), ("A3", 15)] {
            let c = build(label);
            assert_eq!(c.dim(), dim);
            let r = validate_algebra(c.algebra());
            assert!(r.is_valid(), "{label}: {:?}", r.violations.first());
            assert_eq!(r.triples_checked, dim * dim * dim);
        }
    }

    #[test]
    fn brackets_vanish_off_the_root_system() {
        let c = build("B2");
        let rs = c.roots();
        for a in 0..rs.len() {
            for b in 0..rs.len() {
                if rs.sum(a, b).is_none() && rs.negate(a) != b {
                    assert!(c.algebra().basis_product(c.e(a), c.e(b)).is_empty());
                }
            }
        }
    }

    #[test]
    fn extraspecial_pairs_are_positive() {
        let c = build("G2");
        // α_1 + α_2 has extraspecial pair (α_1, α_2) with p = 0.
        assert_eq!(c.structure_constant(0, 1), Some(1));
        let rs = c.roots();
        let two_one = rs.find(&[2, 1]).unwrap();
        let one_one = rs.find(&[1, 1]).unwrap();
        assert_eq!(c.structure_constant(0, one_one), Some(2));
        assert_eq!(rs.sum(0, one_one), Some(two_one));
    }
}
