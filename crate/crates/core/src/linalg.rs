//! Dense matrices over a [`Field`] with exact Gaussian elimination.

use crate::field::{Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<Elem>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend_from_slice(r);
        }
        Matrix { rows: rows.len(), cols, data }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Elem>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged matrix");
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other[(k, j)]));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &Field, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| if a == 0 || b == 0 { acc } else { f.add(acc, f.mul(a, b)) })
            })
            .collect()
    }

    pub fn scale(&self, f: &Field, c: Elem) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f.mul(x, c)).collect() }
    }

    /// Stacks the rows of `other` below `self`.
    pub fn stack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "shape mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn push_row(&mut self, row: &[Elem]) {
        assert_eq!(row.len(), self.cols, "shape mismatch");
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// In-place reduced row echelon form. Zero rows are dropped and the
    /// pivot columns returned.
    pub fn rref(&mut self, f: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self[(i, c)] != 0) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = f.inv(self[(r, c)]);
            for j in c..self.cols {
                let idx = r * self.cols + j;
                self.data[idx] = f.mul(self.data[idx], inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self[(i, c)];
                if factor == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let x = self.data[r * self.cols + j];
                    if x != 0 {
                        let idx = i * self.cols + j;
                        self.data[idx] = f.sub(self.data[idx], f.mul(factor, x));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        self.rows = r;
        self.data.truncate(r * self.cols);
        pivots
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis (as rows) of the right kernel `{v : M v = 0}`.
    pub fn kernel(&self, f: &Field) -> Matrix {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(0, self.cols);
        for &fc in &free {
            let mut v = vec![0; self.cols];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m[(i, fc)]);
            }
            out.push_row(&v);
        }
        out
    }

    pub fn inverse(&self, f: &Field) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = 1;
        }
        let pivots = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)];
            }
        }
        Some(inv)
    }

    /// Solves `M x = b` for one solution, if any.
    pub fn solve(&self, f: &Field, b: &[Elem]) -> Option<Vec<Elem>> {
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = b[i];
        }
        let pivots = aug.rref(f);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(i, self.cols)];
        }
        Some(x)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Elem;
    fn index(&self, (i, j): (usize, usize)) -> &Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Scales a nonzero vector so that its first nonzero entry is 1.
pub fn normalize(f: &Field, v: &mut [Elem]) -> bool {
    match v.iter().position(|&c| c != 0) {
        None => false,
        Some(i) => {
            if v[i] != 1 {
                let inv = f.inv(v[i]);
                for x in v[i..].iter_mut() {
                    *x = f.mul(*x, inv);
                }
            }
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldTower;

    #[test]
    fn rref_inverse_and_kernel() {
        let t = FieldTower::new(5, 1, 1).unwrap();
        let f = t.base();
        let m = Matrix::from_rows(3, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 2]]);
        let inv = m.inverse(f).unwrap();
        assert_eq!(m.mul(f, &inv), Matrix::identity(3));
        let sing = Matrix::from_rows(3, &[vec![1, 2, 3], vec![0, 1, 1], vec![1, 3, 4]]);
        assert_eq!(sing.rank(f), 2);
        assert!(sing.inverse(f).is_none());
        let ker = sing.kernel(f);
        assert_eq!(ker.rows(), 1);
        assert!(sing.mul_vec(f, ker.row(0)).iter().all(|&x| x == 0));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let t = FieldTower::new(3, 1, 1).unwrap();
        let f = t.base();
        let m = Matrix::from_rows(2, &[vec![1, 1], vec![2, 2]]);
        assert!(m.solve(f, &[1, 1]).is_none());
        let x = m.solve(f, &[1, 2]).unwrap();
        assert_eq!(m.mul_vec(f, &x), vec![1, 2]);
    }
}
