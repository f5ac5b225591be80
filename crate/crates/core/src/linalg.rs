//! Dense matrices over a finite field with exact Gaussian elimination.
//! Pivots are always taken leftmost-first, so reduced forms are canonical.

use crate::field::{Field, FieldCtx};

#[derive(Clone)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(field: &Field, cols: usize, rows: Vec<Vec<u32>>) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in &rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend_from_slice(r);
        }
        Matrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn push_row(&mut self, row: &[u32]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    /// In-place reduced row echelon form; returns pivot columns. Zero rows
    /// are dropped.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = f.inv(self.get(r, c));
            self.scale_row(r, inv);
            for i in 0..self.rows {
                if i != r {
                    let factor = self.get(i, c);
                    if factor != 0 {
                        self.sub_scaled_row(i, r, factor);
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

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, r: usize, s: u32) {
        let f = &self.field;
        for v in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *v = f.mul(*v, s);
        }
    }

    /// row[i] -= factor * row[j]
    fn sub_scaled_row(&mut self, i: usize, j: usize, factor: u32) {
        let f = self.field.clone();
        for c in 0..self.cols {
            let v = self.data[j * self.cols + c];
            if v != 0 {
                let idx = i * self.cols + c;
                self.data[idx] = f.sub(self.data[idx], f.mul(factor, v));
            }
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let f = &self.field;
        let mut is_pivot = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free].is_some() {
                continue;
            }
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = f.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the row space in reduced echelon form.
    pub fn row_space(&self) -> Matrix {
        let mut m = self.clone();
        m.rref();
        m
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        let f = &self.field;
        self.rows()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in self.rows() {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Incrementally maintained reduced echelon basis; rows that are already in
/// the span are rejected cheaply.
pub struct EchelonBasis {
    field: Field,
    cols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(field: &Field, cols: usize) -> Self {
        EchelonBasis {
            field: field.clone(),
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Reduces `v` against the basis; returns true when it was independent.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        let f: &FieldCtx = &self.field;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    if y != 0 {
                        *x = f.sub(*x, f.mul(c, y));
                    }
                }
            }
        }
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(v[pc]);
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                for (x, &y) in row.iter_mut().zip(&v) {
                    if y != 0 {
                        *x = f.sub(*x, f.mul(c, y));
                    }
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }

    pub fn into_matrix(self) -> Matrix {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let rows = order.into_iter().map(|i| self.rows[i].clone()).collect();
        Matrix::from_rows(&self.field, self.cols, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn rank_and_kernel_over_f3() {
        let f = make_field(3, 1).unwrap();
        let m = Matrix::from_rows(&f, 3, vec![vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]]);
        // rows 1 and 2 are dependent: 2*(1,2,0) = (2,1,0)
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|&x| x == 0));
    }

    #[test]
    fn echelon_basis_matches_rref() {
        let f = make_field(2, 2).unwrap();
        let rows = vec![vec![1, 2, 3, 0], vec![2, 3, 1, 0], vec![0, 0, 1, 1], vec![3, 1, 2, 0]];
        let m = Matrix::from_rows(&f, 4, rows.clone());
        let mut eb = EchelonBasis::new(&f, 4);
        for r in rows {
            eb.insert(r);
        }
        let a = eb.into_matrix();
        let b = m.row_space();
        assert_eq!(a.data, b.data);
    }
}
