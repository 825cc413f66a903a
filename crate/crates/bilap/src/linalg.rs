//! Minimal dense real matrix support for the in-house eigensolver: storage,
//! Cholesky factorization, triangular solves, and a few norms.
//!
//! Everything is column-agnostic full storage (row major); problem sizes are
//! desk scale (≤ a few thousand dofs), so O(n³) dense kernels are the point,
//! not a limitation.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not positive definite (pivot {pivot:.3e} at index {index})")]
    NotSpd { index: usize, pivot: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Mat { n_rows, n_cols, data: vec![0.0; n_rows * n_cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(n_rows, n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        Mat::from_fn(n_rows, n_cols, |i, j| rows[i][j])
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    /// y = M x.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n_cols);
        (0..self.n_rows).map(|i| dot(self.row(i), x)).collect()
    }

    /// Symmetric accumulation M[i][j] += v and M[j][i] += v (i ≠ j), used by
    /// assembly.
    pub fn add_sym(&mut self, i: usize, j: usize, v: f64) {
        self[(i, j)] += v;
        if i != j {
            self[(j, i)] += v;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Largest |M[i][j] − M[j][i]| over the square part.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n_rows.min(self.n_cols) {
            for j in 0..i {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Force exact symmetry by averaging; assembly produces matrices that are
    /// symmetric up to roundoff and the eigensolver assumes exact symmetry.
    pub fn symmetrize(&mut self) {
        assert!(self.is_square());
        for i in 0..self.n_rows {
            for j in 0..i {
                let v = 0.5 * (self[(i, j)] + self[(j, i)]);
                self[(i, j)] = v;
                self[(j, i)] = v;
            }
        }
    }

    /// Extract the principal submatrix on `idx` (rows and columns).
    pub fn principal_submatrix(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(idx.len(), idx.len(), |i, j| self[(idx[i], idx[j])])
    }

    /// C = Aᵀ B A with A of shape (n, m): congruence onto an m-dimensional
    /// subspace spanned by the columns of A.
    pub fn congruence(&self, basis: &Mat) -> Mat {
        assert_eq!(self.n_rows, self.n_cols);
        assert_eq!(basis.n_rows, self.n_rows);
        let n = self.n_rows;
        let m = basis.n_cols;
        // t = self * basis
        let mut t = Mat::zeros(n, m);
        for i in 0..n {
            let ri = self.row(i);
            for k in 0..n {
                let a = ri[k];
                if a != 0.0 {
                    let bk = basis.row(k);
                    let ti = t.row_mut(i);
                    for j in 0..m {
                        ti[j] += a * bk[j];
                    }
                }
            }
        }
        let mut c = Mat::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                let mut s = 0.0;
                for k in 0..n {
                    s += basis[(k, i)] * t[(k, j)];
                }
                c[(i, j)] = s;
            }
        }
        c.symmetrize();
        c
    }

    /// Aᵀ x for the column-basis interpretation used alongside `congruence`.
    pub fn transpose_matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n_rows);
        let mut y = vec![0.0; self.n_cols];
        for i in 0..self.n_rows {
            let ri = self.row(i);
            let xi = x[i];
            if xi != 0.0 {
                for j in 0..self.n_cols {
                    y[j] += ri[j] * xi;
                }
            }
        }
        y
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.n_rows && j < self.n_cols);
        &self.data[i * self.n_cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.n_rows && j < self.n_cols);
        &mut self.data[i * self.n_cols + j]
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
pub struct Cholesky {
    l: Mat,
}

impl Cholesky {
    pub fn new(a: &Mat) -> Result<Cholesky, LinalgError> {
        assert!(a.is_square());
        let n = a.n_rows();
        let mut l = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                if i == j {
                    if s <= 0.0 || !s.is_finite() {
                        return Err(LinalgError::NotSpd { index: i, pivot: s });
                    }
                    l[(i, i)] = s.sqrt();
                } else {
                    l[(i, j)] = s / l[(j, j)];
                }
            }
        }
        Ok(Cholesky { l })
    }

    pub fn factor(&self) -> &Mat {
        &self.l
    }

    /// Solve L x = b.
    pub fn solve_lower(&self, b: &[f64]) -> Vec<f64> {
        let n = self.l.n_rows();
        let mut x = b.to_vec();
        for i in 0..n {
            let ri = self.l.row(i);
            let mut s = x[i];
            for k in 0..i {
                s -= ri[k] * x[k];
            }
            x[i] = s / ri[i];
        }
        x
    }

    /// Solve Lᵀ x = b.
    pub fn solve_lower_transpose(&self, b: &[f64]) -> Vec<f64> {
        let n = self.l.n_rows();
        let mut x = b.to_vec();
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.l[(k, i)] * x[k];
            }
            x[i] = s / self.l[(i, i)];
        }
        x
    }

    /// C = L⁻¹ A L⁻ᵀ for symmetric A: the congruence that turns the pencil
    /// (A, B) with B = L Lᵀ into a standard symmetric problem.
    pub fn whiten(&self, a: &Mat) -> Mat {
        let n = self.l.n_rows();
        assert_eq!(a.n_rows(), n);
        // First W = L⁻¹ A (forward substitution applied to each column of A,
        // done row-wise on the full matrix).
        let mut w = a.clone();
        for i in 0..n {
            for k in 0..i {
                let lik = self.l[(i, k)];
                if lik != 0.0 {
                    let (head, tail) = w.data.split_at_mut(i * n);
                    let rk = &head[k * n..(k + 1) * n];
                    let ri = &mut tail[..n];
                    for j in 0..n {
                        ri[j] -= lik * rk[j];
                    }
                }
            }
            let inv = 1.0 / self.l[(i, i)];
            for v in w.row_mut(i) {
                *v *= inv;
            }
        }
        // Then C = W L⁻ᵀ = (L⁻¹ Wᵀ)ᵀ, using symmetry: apply the same forward
        // substitution to the columns of W via its transpose.
        let mut c = Mat::from_fn(n, n, |i, j| w[(j, i)]);
        for i in 0..n {
            for k in 0..i {
                let lik = self.l[(i, k)];
                if lik != 0.0 {
                    let (head, tail) = c.data.split_at_mut(i * n);
                    let rk = &head[k * n..(k + 1) * n];
                    let ri = &mut tail[..n];
                    for j in 0..n {
                        ri[j] -= lik * rk[j];
                    }
                }
            }
            let inv = 1.0 / self.l[(i, i)];
            for v in c.row_mut(i) {
                *v *= inv;
            }
        }
        c.symmetrize();
        c
    }
}
