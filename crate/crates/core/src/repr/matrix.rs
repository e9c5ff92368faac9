use std::io::Write;

use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::Result;

/// Matrices of dimension at least this size are stored sparsely.
pub const DENSE_LIMIT: usize = 4096;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Square complex matrix in compressed sparse row form.
#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl Csr {
    /// Builds from `(row, col, value)` triplets; duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, Complex64)>) -> Self {
        triplets.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut rows = Vec::with_capacity(triplets.len());
        for (i, j, v) in triplets {
            assert!(
                i < n && j < n,
                "triplet ({i}, {j}) outside a {n}x{n} matrix"
            );
            if rows.last() == Some(&i) && cols.last() == Some(&j) {
                *vals.last_mut().unwrap() += v;
            } else {
                rows.push(i);
                cols.push(j);
                vals.push(v);
            }
        }
        let mut kept_cols = Vec::with_capacity(cols.len());
        let mut kept_vals = Vec::with_capacity(vals.len());
        for ((i, j), v) in rows.into_iter().zip(cols).zip(vals) {
            if v != ZERO {
                row_ptr[i + 1] += 1;
                kept_cols.push(j);
                kept_vals.push(v);
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Csr {
            n,
            row_ptr,
            cols: kept_cols,
            vals: kept_vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[Complex64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.cols[r.clone()], &self.vals[r])
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map_or(ZERO, |k| vals[k])
    }

    /// `y = M x`, parallel over rows.
    pub fn matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            let (cols, vals) = self.row(i);
            *yi = cols.iter().zip(vals).map(|(&j, v)| v * x[j]).sum();
        });
    }

    pub fn to_dense(&self) -> Mat<Complex64> {
        let mut m = Mat::zeros(self.n, self.n);
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.n).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }
}

/// Dense or sparse square complex matrix.
#[derive(Debug, Clone)]
pub enum Matrix {
    Dense(Mat<Complex64>),
    Sparse(Csr),
}

impl Matrix {
    /// Assembles from triplets, choosing dense storage below [`DENSE_LIMIT`].
    pub fn from_triplets(n: usize, triplets: Vec<(usize, usize, Complex64)>) -> Self {
        if n < DENSE_LIMIT {
            let mut m = Mat::zeros(n, n);
            for (i, j, v) in triplets {
                m[(i, j)] += v;
            }
            Matrix::Dense(m)
        } else {
            Matrix::Sparse(Csr::from_triplets(n, triplets))
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Matrix::Dense(m) => m.nrows(),
            Matrix::Sparse(s) => s.dim(),
        }
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self, Matrix::Sparse(_))
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        match self {
            Matrix::Dense(m) => m[(i, j)],
            Matrix::Sparse(s) => s.get(i, j),
        }
    }

    /// Structural nonzeros (dense storage counts nonzero entries).
    pub fn nnz(&self) -> usize {
        match self {
            Matrix::Dense(m) => (0..m.ncols())
                .map(|j| m.col_as_slice(j).iter().filter(|v| **v != ZERO).count())
                .sum(),
            Matrix::Sparse(s) => s.nnz(),
        }
    }

    pub fn to_dense(&self) -> Mat<Complex64> {
        match self {
            Matrix::Dense(m) => m.clone(),
            Matrix::Sparse(s) => s.to_dense(),
        }
    }

    /// Nonzero entries as `(row, col, value)`, row-major.
    pub fn triplets(&self) -> Vec<(usize, usize, Complex64)> {
        match self {
            Matrix::Dense(m) => {
                let n = m.nrows();
                let mut out = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        if m[(i, j)] != ZERO {
                            out.push((i, j, m[(i, j)]));
                        }
                    }
                }
                out
            }
            Matrix::Sparse(s) => s.triplets().collect(),
        }
    }

    /// `y = M x`.
    pub fn matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        match self {
            Matrix::Dense(m) => {
                y.fill(ZERO);
                for (j, &xj) in x.iter().enumerate() {
                    if xj == ZERO {
                        continue;
                    }
                    for (yi, a) in y.iter_mut().zip(m.col_as_slice(j)) {
                        *yi += a * xj;
                    }
                }
            }
            Matrix::Sparse(s) => s.matvec(x, y),
        }
    }

    /// `y = M* x`.
    pub fn adjoint_matvec(&self, x: &[Complex64], y: &mut [Complex64]) {
        match self {
            Matrix::Dense(m) => {
                for (j, yj) in y.iter_mut().enumerate() {
                    *yj = m
                        .col_as_slice(j)
                        .iter()
                        .zip(x)
                        .map(|(a, xi)| a.conj() * xi)
                        .sum();
                }
            }
            Matrix::Sparse(s) => {
                y.fill(ZERO);
                for (i, &xi) in x.iter().enumerate() {
                    let (cols, vals) = s.row(i);
                    for (&j, v) in cols.iter().zip(vals) {
                        y[j] += v.conj() * xi;
                    }
                }
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.triplets()
            .iter()
            .map(|t| t.2.norm())
            .fold(0.0, f64::max)
    }

    /// `max |M[i,j] - conj(M[j,i])|`.
    pub fn hermitian_defect(&self) -> f64 {
        match self {
            Matrix::Dense(m) => {
                let n = m.nrows();
                let mut d: f64 = 0.0;
                for i in 0..n {
                    for j in 0..=i {
                        d = d.max((m[(i, j)] - m[(j, i)].conj()).norm());
                    }
                }
                d
            }
            Matrix::Sparse(s) => s
                .triplets()
                .map(|(i, j, v)| (v - s.get(j, i).conj()).norm())
                .fold(0.0, f64::max),
        }
    }

    /// Largest entrywise difference to another matrix of the same size.
    pub fn max_difference(&self, other: &Matrix) -> f64 {
        let a = self.to_dense();
        let b = other.to_dense();
        let mut d: f64 = 0.0;
        for j in 0..a.ncols() {
            for (x, y) in a.col_as_slice(j).iter().zip(b.col_as_slice(j)) {
                d = d.max((x - y).norm());
            }
        }
        d
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        match self {
            Matrix::Dense(m) => Matrix::Dense(m.adjoint().to_owned()),
            Matrix::Sparse(s) => Matrix::Sparse(Csr::from_triplets(
                s.dim(),
                s.triplets().map(|(i, j, v)| (j, i, v.conj())).collect(),
            )),
        }
    }

    /// Dense product `self · other`.
    pub fn product(&self, other: &Matrix) -> Matrix {
        Matrix::Dense(self.to_dense() * other.to_dense())
    }

    /// Writes `row,col,re,im` lines for every nonzero entry.
    pub fn write_triplet_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "row,col,re,im")?;
        for (i, j, v) in self.triplets() {
            writeln!(out, "{i},{j},{},{}", v.re, v.im)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn csr_sums_duplicates_and_drops_zeros() {
        let s = Csr::from_triplets(
            3,
            vec![
                (0, 1, c(1.0, 0.0)),
                (2, 0, c(0.0, 1.0)),
                (0, 1, c(2.0, 0.0)),
                (1, 1, c(1.0, 0.0)),
                (1, 1, c(-1.0, 0.0)),
            ],
        );
        assert_eq!(s.nnz(), 2);
        assert_eq!(s.get(0, 1), c(3.0, 0.0));
        assert_eq!(s.get(1, 1), ZERO);
        let mut y = vec![ZERO; 3];
        s.matvec(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)], &mut y);
        assert_eq!(y, vec![c(3.0, 0.0), ZERO, c(0.0, 1.0)]);
    }

    #[test]
    fn dense_and_sparse_agree() {
        let trip = vec![
            (0, 1, c(1.0, 2.0)),
            (1, 0, c(1.0, -2.0)),
            (2, 2, c(5.0, 0.0)),
        ];
        let d = Matrix::from_triplets(3, trip.clone());
        let s = Matrix::Sparse(Csr::from_triplets(3, trip));
        assert_eq!(d.max_difference(&s), 0.0);
        assert_eq!(d.hermitian_defect(), 0.0);
        assert_eq!(s.hermitian_defect(), 0.0);
        assert_eq!(d.nnz(), 3);
        let x = [c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0)];
        let (mut y1, mut y2) = (vec![ZERO; 3], vec![ZERO; 3]);
        d.matvec(&x, &mut y1);
        s.matvec(&x, &mut y2);
        assert_eq!(y1, y2);
        assert_eq!(s.adjoint().max_difference(&s), 0.0);
    }

    #[test]
    fn triplet_csv() {
        let m = Matrix::from_triplets(2, vec![(0, 1, c(1.5, -0.5))]);
        let mut buf = Vec::new();
        m.write_triplet_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "row,col,re,im\n0,1,1.5,-0.5\n"
        );
    }
}
