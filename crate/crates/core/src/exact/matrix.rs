use super::field::{FieldSpec, Scalar};

/// Dense coordinate vector; all entries share one field.
pub type ExactVector = Vec<Scalar>;

pub fn zero_vector(field: FieldSpec, n: usize) -> ExactVector {
    vec![field.zero(); n]
}

pub fn unit_vector(field: FieldSpec, n: usize, i: usize) -> ExactVector {
    let mut v = zero_vector(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// `dst += c * src`.
pub fn axpy(dst: &mut [Scalar], c: &Scalar, src: &[Scalar]) {
    debug_assert_eq!(dst.len(), src.len());
    if c.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = &*d + &(c * s);
        }
    }
}

pub fn scale(c: &Scalar, v: &[Scalar]) -> ExactVector {
    v.iter().map(|x| c * x).collect()
}

pub fn add(u: &[Scalar], v: &[Scalar]) -> ExactVector {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn sub(u: &[Scalar], v: &[Scalar]) -> ExactVector {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

/// Linear combination `sum c_i v_i` of equal-length vectors.
pub fn combination(field: FieldSpec, n: usize, terms: &[(Scalar, &[Scalar])]) -> ExactVector {
    let mut out = zero_vector(field, n);
    for (c, v) in terms {
        axpy(&mut out, c, v);
    }
    out
}

/// Dense row-major matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<ExactVector>) -> Self {
        let n_rows = rows.len();
        let mut data = Vec::with_capacity(n_rows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix { field, rows: n_rows, cols, data }
    }

    /// Matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[ExactVector]) -> Self {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged matrix columns");
            for (r, x) in col.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Scalar) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> ExactVector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<ExactVector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> ExactVector {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let cur = out.get(r, c) + &(a * b);
                        out.set(r, c, cur);
                    }
                }
            }
        }
        out
    }

    /// `self - lambda * I`.
    pub fn shifted(&self, lambda: &Scalar) -> Matrix {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            let x = m.get(i, i) - lambda;
            m.set(i, i, x);
        }
        m
    }

    /// Gauss-Jordan elimination; the pivot in each column is the first
    /// nonzero entry at or below the current row.
    pub fn rref(&self) -> Rref {
        let mut rows = self.row_vectors();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, pr);
            let inv = rows[r][c].inv().expect("nonzero pivot");
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let f = -&row[c];
                    axpy(row, &f, &pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: Matrix::from_rows(self.field, self.cols, rows), pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the null space, one vector per free column (free entry 1).
    pub fn kernel(&self) -> Vec<ExactVector> {
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = zero_vector(self.field, self.cols);
                v[f] = self.field.one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = -matrix.get(i, f);
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        let mut rows = self.row_vectors();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !rows[i][c].is_zero()) else {
                return self.field.zero();
            };
            if pr != c {
                rows.swap(pr, c);
                det = -det;
            }
            det = &det * &rows[c][c];
            let inv = rows[c][c].inv().expect("nonzero pivot");
            let pivot_row = rows[c].clone();
            for row in rows.iter_mut().skip(c + 1) {
                if !row[c].is_zero() {
                    let f = -&(&row[c] * &inv);
                    axpy(row, &f, &pivot_row);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, self.field.one());
        }
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, matrix.get(r, n + c).clone());
            }
        }
        Some(inv)
    }
}

/// Basis of `{v : M v = lambda v}`; empty when `lambda` is not an eigenvalue.
pub fn eigenspace(m: &Matrix, lambda: &Scalar) -> Vec<ExactVector> {
    m.shifted(lambda).kernel()
}

/// Row-space basis (nonzero rows of the reduced echelon form).
pub fn span_basis(field: FieldSpec, dim: usize, vectors: &[ExactVector]) -> Vec<ExactVector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let Rref { matrix, pivots } = Matrix::from_rows(field, dim, vectors.to_vec()).rref();
    (0..pivots.len()).map(|r| matrix.row(r).to_vec()).collect()
}

pub fn rank_of(field: FieldSpec, dim: usize, vectors: &[ExactVector]) -> usize {
    span_basis(field, dim, vectors).len()
}

/// True iff the subspaces' dimensions add up to the dimension of their joint span.
pub fn is_direct_sum(field: FieldSpec, dim: usize, subspaces: &[Vec<ExactVector>]) -> bool {
    let sum: usize = subspaces.iter().map(|s| rank_of(field, dim, s)).sum();
    let joint: Vec<ExactVector> = subspaces.iter().flatten().cloned().collect();
    sum == rank_of(field, dim, &joint)
}

/// Incrementally maintained semi-echelon basis.
///
/// Each stored row has a pivot column holding 1, and every row is zero at the
/// pivots of the rows inserted before it, so reducing a vector against the
/// rows in insertion order clears every pivot.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: FieldSpec,
    dim: usize,
    rows: Vec<(usize, ExactVector)>,
}

impl EchelonBasis {
    pub fn new(field: FieldSpec, dim: usize) -> Self {
        EchelonBasis { field, dim, rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn reduce(&self, v: &[Scalar]) -> ExactVector {
        let mut w = v.to_vec();
        for (pc, row) in &self.rows {
            if !w[*pc].is_zero() {
                let f = -&w[*pc];
                axpy(&mut w, &f, row);
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    /// Adds `v` to the span; returns the new normalized row when the span grew.
    pub fn insert(&mut self, v: &[Scalar]) -> Option<&ExactVector> {
        let mut w = self.reduce(v);
        let pc = w.iter().position(|x| !x.is_zero())?;
        let inv = w[pc].inv().expect("nonzero pivot");
        for x in w.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        self.rows.push((pc, w));
        self.rows.last().map(|(_, r)| r)
    }

    pub fn vectors(&self) -> impl Iterator<Item = &ExactVector> {
        self.rows.iter().map(|(_, r)| r)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn into_vectors(self) -> Vec<ExactVector> {
        self.rows.into_iter().map(|(_, r)| r).collect()
    }
}
