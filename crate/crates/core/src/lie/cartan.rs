use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cartan–Killing type of a finite-dimensional simple Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CartanType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
}

impl CartanType {
    pub fn rank(&self) -> usize {
        match *self {
            CartanType::A(l) | CartanType::B(l) | CartanType::C(l) | CartanType::D(l) | CartanType::E(l) => l,
            CartanType::F4 => 4,
            CartanType::G2 => 2,
        }
    }

    /// Number of roots of the type.
    pub fn root_count(&self) -> usize {
        match *self {
            CartanType::A(l) => l * (l + 1),
            CartanType::B(l) | CartanType::C(l) => 2 * l * l,
            CartanType::D(l) => 2 * l * (l - 1),
            CartanType::E(6) => 72,
            CartanType::E(7) => 126,
            CartanType::E(_) => 240,
            CartanType::F4 => 48,
            CartanType::G2 => 12,
        }
    }

    fn check(self) -> Result<Self> {
        let ok = match self {
            CartanType::A(l) => l >= 1,
            CartanType::B(l) => l >= 2,
            CartanType::C(l) => l >= 2,
            CartanType::D(l) => l >= 4,
            CartanType::E(l) => (6..=8).contains(&l),
            CartanType::F4 | CartanType::G2 => true,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::UnknownType(self.to_string()))
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CartanType::A(l) => write!(f, "A{l}"),
            CartanType::B(l) => write!(f, "B{l}"),
            CartanType::C(l) => write!(f, "C{l}"),
            CartanType::D(l) => write!(f, "D{l}"),
            CartanType::E(l) => write!(f, "E{l}"),
            CartanType::F4 => write!(f, "F4"),
            CartanType::G2 => write!(f, "G2"),
        }
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::UnknownType(s.to_string());
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        let t = match (letter, rank) {
            ('A', l) => CartanType::A(l),
            ('B', l) => CartanType::B(l),
            ('C', l) => CartanType::C(l),
            ('D', l) => CartanType::D(l),
            ('E', l) => CartanType::E(l),
            ('F', 4) => CartanType::F4,
            ('G', 2) => CartanType::G2,
            _ => return Err(bad()),
        };
        t.check().map_err(|_| bad())
    }
}

impl TryFrom<String> for CartanType {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CartanType> for String {
    fn from(t: CartanType) -> String {
        t.to_string()
    }
}

/// Cartan matrix `a_ij = α_j(h_i)` of a finite root system, in Bourbaki numbering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteCartanMatrix {
    label: CartanType,
    entries: Vec<Vec<i64>>,
    /// `D_i` with `D_i a_ij = D_j a_ji`, smallest value 1.
    symmetrizer: Vec<i64>,
}

fn standard_entries(t: CartanType) -> Vec<Vec<i64>> {
    let l = t.rank();
    let mut a = vec![vec![0i64; l]; l];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match t {
        CartanType::A(_) | CartanType::B(_) | CartanType::C(_) | CartanType::F4 | CartanType::G2 => {
            for i in 0..l.saturating_sub(1) {
                link(i, i + 1);
            }
        }
        CartanType::D(_) => {
            for i in 0..l - 2 {
                link(i, i + 1);
            }
            link(l - 3, l - 1);
        }
        CartanType::E(_) => {
            link(0, 2);
            link(1, 3);
            for i in 2..l - 1 {
                link(i, i + 1);
            }
        }
    }
    match t {
        // α_l short
        CartanType::B(_) => a[l - 1][l - 2] = -2,
        // α_l long
        CartanType::C(_) => a[l - 2][l - 1] = -2,
        // α_1, α_2 long; α_3, α_4 short
        CartanType::F4 => a[2][1] = -2,
        // α_1 short
        CartanType::G2 => a[0][1] = -3,
        _ => {}
    }
    a
}

impl FiniteCartanMatrix {
    pub fn of_type(t: CartanType) -> Self {
        Self::new(t, standard_entries(t)).expect("standard Cartan matrices are valid")
    }

    pub fn parse(label: &str) -> Result<Self> {
        Ok(Self::of_type(label.parse()?))
    }

    /// Validate `entries` as a finite Cartan matrix of type `label`, up to
    /// simultaneous permutation of rows and columns.
    pub fn new(label: CartanType, entries: Vec<Vec<i64>>) -> Result<Self> {
        let l = entries.len();
        if l == 0 || entries.iter().any(|r| r.len() != l) {
            return Err(Error::InvalidCartan("matrix must be square and nonempty".into()));
        }
        for i in 0..l {
            if entries[i][i] != 2 {
                return Err(Error::InvalidCartan(format!("diagonal entry {i} is not 2")));
            }
            for j in 0..l {
                if i != j && entries[i][j] > 0 {
                    return Err(Error::InvalidCartan(format!("entry ({i}, {j}) is positive")));
                }
                if (entries[i][j] == 0) != (entries[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!("zero pattern differs at ({i}, {j})")));
                }
            }
        }
        let symmetrizer = symmetrizer(&entries)
            .ok_or_else(|| Error::InvalidCartan("matrix is not symmetrizable".into()))?;
        let sym: Vec<Vec<i64>> = (0..l)
            .map(|i| (0..l).map(|j| symmetrizer[i] * entries[i][j]).collect())
            .collect();
        for k in 1..=l {
            let minor: Vec<Vec<i64>> = sym[..k].iter().map(|r| r[..k].to_vec()).collect();
            if int_det(&minor) <= BigInt::zero() {
                return Err(Error::InvalidCartan("symmetrization is not positive definite".into()));
            }
        }
        if label.rank() != l || permutation_equivalent(&standard_entries(label), &entries).is_none() {
            return Err(Error::InvalidCartan(format!("entries do not match type {label}")));
        }
        Ok(FiniteCartanMatrix {
            label,
            entries,
            symmetrizer,
        })
    }

    pub fn label(&self) -> CartanType {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    /// `(α, β)` for roots given in simple-root coordinates; short simple roots have `(α, α) = 2`.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let l = self.rank();
        let mut s = 0;
        for i in 0..l {
            if a[i] == 0 {
                continue;
            }
            for j in 0..l {
                s += a[i] * b[j] * self.symmetrizer[i] * self.entries[i][j];
            }
        }
        s
    }

    /// `β(h_i) = Σ_j c_j a_ij`.
    pub fn pairing(&self, i: usize, beta: &[i64]) -> i64 {
        (0..self.rank()).map(|j| beta[j] * self.entries[i][j]).sum()
    }
}

fn symmetrizer(a: &[Vec<i64>]) -> Option<Vec<i64>> {
    let l = a.len();
    let mut d: Vec<Option<BigRational>> = vec![None; l];
    for root in 0..l {
        if d[root].is_some() {
            continue;
        }
        d[root] = Some(BigRational::one());
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            let di = d[i].clone().unwrap();
            for j in 0..l {
                if i == j || a[i][j] == 0 {
                    continue;
                }
                let dj = di.clone() * BigRational::from_integer(a[i][j].into())
                    / BigRational::from_integer(a[j][i].into());
                match &d[j] {
                    Some(old) if *old != dj => return None,
                    Some(_) => {}
                    None => {
                        d[j] = Some(dj);
                        stack.push(j);
                    }
                }
            }
        }
    }
    // Scale each connected piece so its values are coprime integers.
    let d: Vec<BigRational> = d.into_iter().map(Option::unwrap).collect();
    let mut denom_lcm = BigInt::one();
    for x in &d {
        denom_lcm = num_integer::lcm(denom_lcm, x.denom().clone());
    }
    let ints: Vec<BigInt> = d.iter().map(|x| (x * &denom_lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| num_integer::gcd(g, x.clone()));
    Some(
        ints.iter()
            .map(|x| i64::try_from(x / &g).expect("symmetrizer fits in i64"))
            .collect(),
    )
}

/// Exact determinant of an integer matrix.
pub fn int_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= piv.clone();
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone() / piv.clone();
            for k in c..n {
                let t = a[c][k].clone() * f.clone();
                a[r][k] -= t;
            }
        }
    }
    det.to_integer()
}

/// Rank of an integer matrix over `Q`.
pub fn int_rank(m: &[Vec<i64>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        for r in 0..rows {
            if r != rank && !a[r][c].is_zero() {
                let f = a[r][c].clone() / a[rank][c].clone();
                for k in c..cols {
                    let t = a[rank][k].clone() * f.clone();
                    a[r][k] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A permutation `p` with `b[p[i]][p[j]] = a[i][j]` for all `i, j`, if any.
///
/// Backtracking, pruned by comparing sorted row multisets and diagonals.
pub fn permutation_equivalent(a: &[Vec<i64>], b: &[Vec<i64>]) -> Option<Vec<usize>> {
    let n = a.len();
    if b.len() != n {
        return None;
    }
    let signature = |m: &[Vec<i64>], i: usize| {
        let mut row: Vec<i64> = m[i].clone();
        let mut col: Vec<i64> = m.iter().map(|r| r[i]).collect();
        row.sort_unstable();
        col.sort_unstable();
        (m[i][i], row, col)
    };
    let sa: Vec<_> = (0..n).map(|i| signature(a, i)).collect();
    let sb: Vec<_> = (0..n).map(|i| signature(b, i)).collect();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn search(
        i: usize,
        a: &[Vec<i64>],
        b: &[Vec<i64>],
        sa: &[(i64, Vec<i64>, Vec<i64>)],
        sb: &[(i64, Vec<i64>, Vec<i64>)],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = a.len();
        if i == n {
            return true;
        }
        for c in 0..n {
            if used[c] || sa[i] != sb[c] {
                continue;
            }
            let consistent = (0..i).all(|k| a[i][k] == b[c][perm[k]] && a[k][i] == b[perm[k]][c]);
            if !consistent {
                continue;
            }
            perm[i] = c;
            used[c] = true;
            if search(i + 1, a, b, sa, sb, perm, used) {
                return true;
            }
            used[c] = false;
        }
        false
    }

    search(0, a, b, &sa, &sb, &mut perm, &mut used).then_some(perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for s in ["A1", "A9", "B2", "C3", "D4", "E6", "E7", "E8", "F4", "G2"] {
            let t: CartanType = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
        }
        for s in ["A0", "B1", "D3", "E5", "E9", "F3", "G3", "X2", "", "A"] {
            assert!(s.parse::<CartanType>().is_err(), "{s}");
        }
    }

    #[test]
    fn conventions() {
        let b2 = FiniteCartanMatrix::parse("B2").unwrap();
        assert_eq!(b2.entries(), [vec![2, -1], vec![-2, 2]]);
        assert_eq!(b2.symmetrizer(), [2, 1]);
        let c3 = FiniteCartanMatrix::parse("C3").unwrap();
        assert_eq!(c3.get(1, 2), -2);
        assert_eq!(c3.symmetrizer(), [1, 1, 2]);
        let g2 = FiniteCartanMatrix::parse("G2").unwrap();
        assert_eq!(g2.entries(), [vec![2, -3], vec![-1, 2]]);
        assert_eq!(g2.symmetrizer(), [1, 3]);
        let d4 = FiniteCartanMatrix::parse("D4").unwrap();
        assert_eq!(d4.entries()[1], [-1, 2, -1, -1]);
        let e6 = FiniteCartanMatrix::parse("E6").unwrap();
        assert_eq!(e6.entries()[3], [0, -1, -1, 2, -1, 0]);
    }

    #[test]
    fn determinants_of_finite_types() {
        // det A_l = l+1, B_l = C_l = 2, D_l = 4, E6 = 3, E7 = 2, E8 = 1, F4 = G2 = 1
        let cases = [("A4", 5), ("B3", 2), ("C4", 2), ("D5", 4), ("E6", 3), ("E7", 2), ("E8", 1), ("F4", 1), ("G2", 1)];
        for (label, det) in cases {
            let c = FiniteCartanMatrix::parse(label).unwrap();
            assert_eq!(int_det(c.entries()), BigInt::from(det), "{label}");
        }
    }

    #[test]
    fn rejects_affine_and_mislabelled() {
        let affine = vec![vec![2, -2], vec![-2, 2]];
        assert!(FiniteCartanMatrix::new(CartanType::A(2), affine).is_err());
        let a2 = vec![vec![2, -1], vec![-1, 2]];
        assert!(FiniteCartanMatrix::new(CartanType::B(2), a2).is_err());
        let asym = vec![vec![2, 0], vec![-1, 2]];
        assert!(FiniteCartanMatrix::new(CartanType::A(2), asym).is_err());
    }

    #[test]
    fn relabelled_matrix_accepted() {
        let g2_swapped = vec![vec![2, -1], vec![-3, 2]];
        assert!(FiniteCartanMatrix::new(CartanType::G2, g2_swapped).is_ok());
    }

    #[test]
    fn permutation_search() {
        let a = vec![vec![2, -1, 0], vec![-2, 2, -1], vec![0, -1, 2]];
        let p = [2, 0, 1];
        let mut b = vec![vec![0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                b[p[i]][p[j]] = a[i][j];
            }
        }
        let found = permutation_equivalent(&a, &b).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(b[found[i]][found[j]], a[i][j]);
            }
        }
        assert!(permutation_equivalent(&a, &standard_entries(CartanType::A(3))).is_none());
    }
}
