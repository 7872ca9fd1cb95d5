//! Vector-space linear algebra over an exact [`Field`].
//!
//! Row reduction, kernels, ranks and subspace arithmetic used for every
//! "rational shadow" in the crate. The same code runs over `Q` and over
//! prime fields; nothing here knows about lattices.

use crate::matrix::Matrix;
use crate::scalar::{Field, Fp};
use crate::{Int, Rational};

/// Reduced row echelon form and its pivot columns.
pub fn rref<F: Field>(m: &Matrix<F>) -> (Matrix<F>, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a[(r, c)].inverse().expect("nonzero pivot");
        for j in c..cols {
            let v = a[(r, j)].clone() * inv.clone();
            a[(r, j)] = v;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                let v = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                a[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    rref(m).1.len()
}

/// Basis of `{x : m x = 0}` as the columns of a `cols x k` matrix.
pub fn kernel<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let (r, pivots) = rref(m);
    let n = m.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let cols: Vec<Vec<F>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![F::zero(); n];
            v[f] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            v
        })
        .collect();
    Matrix::from_columns(n, &cols)
}

pub fn nullity<F: Field>(m: &Matrix<F>) -> usize {
    m.cols() - rank(m)
}

/// Some solution of `m x = b`.
pub fn solve<F: Field>(m: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    let rhs = Matrix::from_columns(b.len(), &[b.to_vec()]);
    let (r, pivots) = rref(&m.hcat(&rhs));
    let n = m.cols();
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![F::zero(); n];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r[(i, n)].clone();
    }
    Some(x)
}

/// Solves `x * m = y` for `x` when the rows of `m` are independent enough;
/// each row of `y` is solved separately. Returns `None` if inconsistent.
pub fn solve_right<F: Field>(m: &Matrix<F>, y: &Matrix<F>) -> Option<Matrix<F>> {
    let mt = m.transpose();
    let mut rows = Vec::with_capacity(y.rows());
    for i in 0..y.rows() {
        rows.push(solve(&mt, y.row(i))?);
    }
    Some(Matrix::from_rows(m.rows(), &rows))
}

/// A subspace of `F^n`, stored as the nonzero rows of a reduced echelon
/// basis. Equal subspaces have identical representations.
#[derive(Clone, PartialEq, Debug)]
pub struct Subspace<F: Field> {
    ambient: usize,
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn span(ambient: usize, vectors: &[Vec<F>]) -> Self {
        let m = Matrix::from_rows(ambient, vectors);
        let (r, pivots) = rref(&m);
        let idx: Vec<usize> = (0..pivots.len()).collect();
        Subspace {
            ambient,
            basis: r.select_rows(&idx),
            pivots,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace::span(ambient, &[])
    }

    pub fn full(ambient: usize) -> Self {
        let id: Matrix<F> = Matrix::identity(ambient);
        Subspace::span(ambient, &(0..ambient).map(|i| id.row_vec(i)).collect::<Vec<_>>())
    }

    /// Column space of a matrix.
    pub fn column_space(m: &Matrix<F>) -> Self {
        Subspace::span(m.rows(), &m.columns())
    }

    pub fn kernel_of(m: &Matrix<F>) -> Self {
        Subspace::column_space(&kernel(m))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis_vectors(&self) -> Vec<Vec<F>> {
        (0..self.dim()).map(|i| self.basis.row_vec(i)).collect()
    }

    pub fn contains(&self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let mut r = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if r[p].is_zero() {
                continue;
            }
            let c = r[p].clone();
            for (j, x) in r.iter_mut().enumerate() {
                *x = x.clone() - c.clone() * self.basis[(i, j)].clone();
            }
        }
        r.iter().all(F::is_zero)
    }

    pub fn contains_space(&self, other: &Subspace<F>) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace<F>) -> Subspace<F> {
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Subspace::span(self.ambient, &vs)
    }

    pub fn intersect(&self, other: &Subspace<F>) -> Subspace<F> {
        // x = sum a_i u_i = sum b_j w_j
        let u = self.basis_vectors();
        let w = other.basis_vectors();
        if u.is_empty() || w.is_empty() {
            return Subspace::zero(self.ambient);
        }
        let mut cols = u.clone();
        cols.extend(w.iter().map(|v| v.iter().map(|x| -x.clone()).collect()));
        let k = kernel(&Matrix::from_columns(self.ambient, &cols));
        let vecs: Vec<Vec<F>> = k
            .columns()
            .iter()
            .map(|c| {
                let mut x = vec![F::zero(); self.ambient];
                for (a, ui) in c.iter().zip(&u) {
                    for (xj, uij) in x.iter_mut().zip(ui) {
                        *xj = xj.clone() + a.clone() * uij.clone();
                    }
                }
                x
            })
            .collect();
        Subspace::span(self.ambient, &vecs)
    }

    /// Image under a linear map given by a matrix acting on columns.
    pub fn image_under(&self, m: &Matrix<F>) -> Subspace<F> {
        let vs: Vec<Vec<F>> = self.basis_vectors().iter().map(|v| m.mul_vec(v)).collect();
        Subspace::span(m.rows(), &vs)
    }

    /// Preimage `{x : m x in self}`.
    pub fn preimage_under(&self, m: &Matrix<F>) -> Subspace<F> {
        // m x in W  iff  annihilator(W) * m * x = 0
        let ann = Subspace::kernel_of(&Matrix::from_rows(self.ambient, &self.basis_vectors()));
        let a = Matrix::from_rows(self.ambient, &ann.basis_vectors());
        Subspace::kernel_of(&a.matmul(m))
    }
}

pub fn to_rational(m: &Matrix<Int>) -> Matrix<Rational> {
    m.map(|x| Rational::from_integer(x.clone()))
}

pub fn to_rational_vec(v: &[Int]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

pub fn to_fp(m: &Matrix<Int>, p: u64) -> Matrix<Fp> {
    m.map(|x| Fp::from_bigint(x, p))
}

/// Flattens a matrix row by row.
pub fn flatten<F: Clone>(m: &Matrix<F>) -> Vec<F> {
    m.entries().to_vec()
}
