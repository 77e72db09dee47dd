//! Dense and sparse exact linear algebra over `Q(ζ_m)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::cyclo::{CycloError, CycloNum};

/// Coordinate vector.
pub type Vector = Vec<CycloNum>;

pub fn zero_vec(n: usize, order: u32) -> Vector {
    vec![CycloNum::zero(order); n]
}

pub fn unit_vec(n: usize, i: usize, order: u32) -> Vector {
    let mut v = zero_vec(n, order);
    v[i] = CycloNum::one(order);
    v
}

pub fn is_zero_vec(v: &[CycloNum]) -> bool {
    v.iter().all(CycloNum::is_zero)
}

pub fn vec_add(a: &[CycloNum], b: &[CycloNum]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[CycloNum], b: &[CycloNum]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[CycloNum], c: &CycloNum) -> Vector {
    a.iter().map(|x| x * c).collect()
}

/// `acc += c * v`.
pub fn vec_axpy(acc: &mut [CycloNum], c: &CycloNum, v: &[CycloNum]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            a.add_mul(c, x);
        }
    }
}

pub fn vec_embed(v: &[CycloNum], n: u32) -> Result<Vector, CycloError> {
    v.iter().map(|x| x.embed(n)).collect()
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    order: u32,
    data: Vec<CycloNum>,
}

/// Reduced row-echelon form with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub reduced: Mat,
    pub pivots: Vec<usize>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize, order: u32) -> Self {
        Mat {
            rows,
            cols,
            order,
            data: vec![CycloNum::zero(order); rows * cols],
        }
    }

    pub fn identity(n: usize, order: u32) -> Self {
        let mut m = Self::zeros(n, n, order);
        for i in 0..n {
            m.data[i * n + i] = CycloNum::one(order);
        }
        m
    }

    pub fn diagonal(entries: &[CycloNum], order: u32) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n, order);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>, cols: usize, order: u32) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Mat {
            rows: r,
            cols,
            order,
            data,
        }
    }

    pub fn from_columns(columns: &[Vector], rows: usize, order: u32) -> Self {
        let mut m = Self::zeros(rows, columns.len(), order);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m.data[i * m.cols + j] = x.clone();
            }
        }
        m
    }

    pub fn from_int_rows(rows: &[Vec<i64>], order: u32) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| CycloNum::from_int(order, x)).collect())
                .collect(),
            cols,
            order,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloNum {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloNum) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[CycloNum] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows, self.order);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols, self.order);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j].add_mul(a, b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[CycloNum]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let mut out = zero_vec(self.rows, self.order);
        for (k, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, k);
                if !a.is_zero() {
                    o.add_mul(a, x);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            order: self.order,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            order: self.order,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &CycloNum) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            order: self.order,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Mat {
        assert_eq!(self.rows, self.cols);
        let mut acc = Mat::identity(self.rows, self.order);
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn embed(&self, n: u32) -> Result<Mat, CycloError> {
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            order: n,
            data: self
                .data
                .iter()
                .map(|x| x.embed(n))
                .collect::<Result<_, _>>()?,
        })
    }

    /// Gauss-Jordan elimination. Pivot rule: leftmost nonzero column, first
    /// nonzero row at or below the current pivot row.
    pub fn rref(&self) -> Rref {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..a.cols {
            if prow == a.rows {
                break;
            }
            let Some(found) = (prow..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            if found != prow {
                for j in 0..a.cols {
                    a.data.swap(found * a.cols + j, prow * a.cols + j);
                }
            }
            let inv = a.get(prow, col).inv().expect("pivot is nonzero");
            for j in col..a.cols {
                let idx = prow * a.cols + j;
                if !a.data[idx].is_zero() {
                    a.data[idx] = &a.data[idx] * &inv;
                }
            }
            let pivot_row: Vector = a.row(prow).to_vec();
            for r in 0..a.rows {
                if r == prow {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                let nf = -&f;
                for j in col..a.cols {
                    if !pivot_row[j].is_zero() {
                        a.data[r * a.cols + j].add_mul(&nf, &pivot_row[j]);
                    }
                }
            }
            pivots.push(col);
            prow += 1;
        }
        Rref { reduced: a, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Kernel basis read off the reduced echelon form: one vector per free
    /// column, in increasing column order, with a 1 in that column.
    pub fn nullspace(&self) -> Vec<Vector> {
        let Rref { reduced, pivots } = self.rref();
        let mut is_pivot = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        (0..self.cols)
            .filter(|&f| is_pivot[f].is_none())
            .map(|f| {
                let mut v = zero_vec(self.cols, self.order);
                v[f] = CycloNum::one(self.order);
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -reduced.get(r, f);
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n, self.order);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j).clone();
            }
            aug.data[i * 2 * n + n + i] = CycloNum::one(self.order);
        }
        let Rref { reduced, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Mat::zeros(n, n, self.order);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = reduced.get(i, n + j).clone();
            }
        }
        Some(inv)
    }
}

/// `exact_nullspace`: deterministic kernel basis of a matrix.
pub fn exact_nullspace(m: &Mat) -> Vec<Vector> {
    m.nullspace()
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over Q(z{}):", self.rows, self.cols, self.order)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Rank of a family of vectors of length `n`.
pub fn rank_of(vectors: &[Vector], n: usize, order: u32) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Mat::from_rows(vectors.to_vec(), n, order).rank()
}

/// Echelon basis of the span of a family of vectors.
pub fn span_basis(vectors: &[Vector], n: usize, order: u32) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let Rref { reduced, pivots } = Mat::from_rows(vectors.to_vec(), n, order).rref();
    (0..pivots.len()).map(|r| reduced.row(r).to_vec()).collect()
}

pub fn same_span(a: &[Vector], b: &[Vector], n: usize, order: u32) -> bool {
    let ra = rank_of(a, n, order);
    let rb = rank_of(b, n, order);
    if ra != rb {
        return false;
    }
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    rank_of(&both, n, order) == ra
}

/// Coordinates of `v` in the (independent) family `basis`, if `v` lies in its span.
pub fn coordinates(basis: &[Vector], v: &[CycloNum], order: u32) -> Option<Vector> {
    let n = v.len();
    let k = basis.len();
    if k == 0 {
        return is_zero_vec(v).then(Vec::new);
    }
    let mut aug = Mat::zeros(n, k + 1, order);
    for (j, b) in basis.iter().enumerate() {
        for i in 0..n {
            aug.set(i, j, b[i].clone());
        }
    }
    for (i, x) in v.iter().enumerate() {
        aug.set(i, k, x.clone());
    }
    let Rref { reduced, pivots } = aug.rref();
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut out = zero_vec(k, order);
    for (r, &c) in pivots.iter().enumerate() {
        out[c] = reduced.get(r, k).clone();
    }
    Some(out)
}

/// Sparse row of a linear system.
pub type SparseRow = BTreeMap<usize, CycloNum>;

/// Incremental sparse Gaussian elimination: equations are added one at a
/// time and kept in echelon form keyed by their leading column.
#[derive(Debug, Clone)]
pub struct SparseSystem {
    nvars: usize,
    order: u32,
    pivots: BTreeMap<usize, SparseRow>,
}

impl SparseSystem {
    pub fn new(nvars: usize, order: u32) -> Self {
        SparseSystem {
            nvars,
            order,
            pivots: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.pivots.len() == self.nvars
    }

    /// Reduce the equation against the current pivots; returns `true` if it was
    /// independent and got added.
    pub fn add_equation(&mut self, mut row: SparseRow) -> bool {
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((&lead, _)) = row.iter().next() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(prow) => {
                    let f = -&row[&lead];
                    for (&c, v) in prow {
                        let entry = row.entry(c).or_insert_with(|| CycloNum::zero(self.order));
                        entry.add_mul(&f, v);
                        if entry.is_zero() {
                            row.remove(&c);
                        }
                    }
                }
                None => {
                    let inv = row[&lead].inv().expect("leading entry is nonzero");
                    for v in row.values_mut() {
                        *v = &*v * &inv;
                    }
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }

    /// Basis of the solution space, one vector per free variable in increasing order.
    pub fn nullspace(&self) -> Vec<Vector> {
        let free: Vec<usize> = (0..self.nvars)
            .filter(|c| !self.pivots.contains_key(c))
            .collect();
        free.iter()
            .map(|&f| {
                let mut v = zero_vec(self.nvars, self.order);
                v[f] = CycloNum::one(self.order);
                for (&lead, row) in self.pivots.iter().rev() {
                    let mut acc = CycloNum::zero(self.order);
                    for (&c, coeff) in row.range(lead + 1..) {
                        if !v[c].is_zero() {
                            acc.add_mul(coeff, &v[c]);
                        }
                    }
                    v[lead] = -acc;
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: u32, e: i64) -> CycloNum {
        CycloNum::zeta_power(m, e)
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(exact_nullspace(&Mat::identity(3, 1)).is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_standard_basis() {
        let k = exact_nullspace(&Mat::zeros(2, 2, 1));
        assert_eq!(k, vec![unit_vec(2, 0, 1), unit_vec(2, 1, 1)]);
    }

    #[test]
    fn rank_one_over_zeta3() {
        // det = 1 - ζ^3 = 0
        let m = Mat::from_rows(
            vec![vec![CycloNum::one(3), z(3, 1)], vec![z(3, 2), CycloNum::one(3)]],
            2,
            3,
        );
        let det = &(m.get(0, 0) * m.get(1, 1)) - &(m.get(0, 1) * m.get(1, 0));
        assert!(det.is_zero());
        let k = exact_nullspace(&m);
        assert_eq!(k.len(), 1);
        assert!(is_zero_vec(&m.mul_vec(&k[0])));
        assert_eq!(k[0], vec![-z(3, 1), CycloNum::one(3)]);
    }

    #[test]
    fn inverse_round_trip() {
        let m = Mat::from_rows(
            vec![
                vec![CycloNum::from_int(3, 2), z(3, 1), CycloNum::zero(3)],
                vec![CycloNum::zero(3), CycloNum::one(3), z(3, 2)],
                vec![CycloNum::from_int(3, 1), CycloNum::zero(3), CycloNum::from_int(3, 5)],
            ],
            3,
            3,
        );
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
        let singular = Mat::from_int_rows(&[vec![1, 2], vec![2, 4]], 1);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn coordinates_in_basis() {
        let basis = vec![
            vec![CycloNum::from_int(1, 1), CycloNum::from_int(1, 1), CycloNum::from_int(1, 0)],
            vec![CycloNum::from_int(1, 0), CycloNum::from_int(1, 1), CycloNum::from_int(1, 1)],
        ];
        let v = vec![CycloNum::from_int(1, 2), CycloNum::from_int(1, 5), CycloNum::from_int(1, 3)];
        assert_eq!(
            coordinates(&basis, &v, 1).unwrap(),
            vec![CycloNum::from_int(1, 2), CycloNum::from_int(1, 3)]
        );
        let w = vec![CycloNum::from_int(1, 1), CycloNum::from_int(1, 0), CycloNum::from_int(1, 0)];
        assert!(coordinates(&basis, &w, 1).is_none());
    }

    #[test]
    fn sparse_system_agrees_with_dense() {
        let rows = vec![vec![1, 2, 0, -1], vec![0, 1, 1, 1], vec![1, 3, 1, 0], vec![2, 0, -4, -6]];
        let dense = Mat::from_int_rows(&rows, 1);
        let mut sparse = SparseSystem::new(4, 1);
        for r in &rows {
            let row: SparseRow = r
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| (i, CycloNum::from_int(1, x)))
                .collect();
            sparse.add_equation(row);
        }
        assert_eq!(sparse.rank(), dense.rank());
        let ns = sparse.nullspace();
        assert_eq!(ns.len(), dense.nullspace().len());
        assert!(same_span(&ns, &dense.nullspace(), 4, 1));
        for v in &ns {
            assert!(is_zero_vec(&dense.mul_vec(v)));
        }
    }

    #[test]
    fn nullspace_is_reproducible() {
        let m = Mat::from_int_rows(&[vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 0, 1, 1]], 1);
        assert_eq!(m.nullspace(), m.clone().nullspace());
        let k = m.nullspace();
        // Free columns 1 and 3 carry the identity pattern.
        assert!(k[0][1].is_one() && k[0][3].is_zero());
        assert!(k[1][3].is_one() && k[1][1].is_zero());
    }
}
