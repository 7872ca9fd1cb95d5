//! Column-style Hermite normal form, integer kernels and integer solving.
//!
//! A lattice in `Z^n` is stored as the columns of an `n x r` matrix in
//! column echelon form: column `j` has its first nonzero entry (the pivot)
//! in row `pivots[j]`, pivot rows strictly increase, pivots are positive,
//! and every entry to the left of a pivot lies in `[0, pivot)`. That form is
//! unique per lattice, so lattice equality is matrix equality.

use crate::matrix::Matrix;
use crate::scalar::{xgcd, IntegerScalar};

#[derive(Clone, Debug)]
pub struct ColumnHermite<T> {
    /// `input * transform`, with the basis in the first `rank` columns and
    /// zero columns after.
    pub form: Matrix<T>,
    /// Unimodular column transform.
    pub transform: Matrix<T>,
    /// Pivot row of each basis column.
    pub pivots: Vec<usize>,
}

impl<T: IntegerScalar> ColumnHermite<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Canonical basis of the column lattice.
    pub fn basis(&self) -> Matrix<T> {
        self.form.select_columns(&(0..self.rank()).collect::<Vec<_>>())
    }

    /// Basis of the integer kernel `{x : input * x = 0}`.
    pub fn kernel(&self) -> Matrix<T> {
        let idx: Vec<usize> = (self.rank()..self.transform.cols()).collect();
        self.transform.select_columns(&idx)
    }
}

fn col_combine<T: IntegerScalar>(
    m: &mut Matrix<T>,
    k: usize,
    j: usize,
    (a, b, c, d): (&T, &T, &T, &T),
) {
    // (col_k, col_j) <- (a*col_k + b*col_j, c*col_k + d*col_j)
    for i in 0..m.rows() {
        let x = m[(i, k)].clone();
        let y = m[(i, j)].clone();
        m[(i, k)] = a.clone() * x.clone() + b.clone() * y.clone();
        m[(i, j)] = c.clone() * x + d.clone() * y;
    }
}

fn col_axpy<T: IntegerScalar>(m: &mut Matrix<T>, target: usize, q: &T, source: usize) {
    // col_target -= q * col_source
    for i in 0..m.rows() {
        let v = m[(i, target)].clone() - q.clone() * m[(i, source)].clone();
        m[(i, target)] = v;
    }
}

fn col_negate<T: IntegerScalar>(m: &mut Matrix<T>, k: usize) {
    for i in 0..m.rows() {
        let v = -m[(i, k)].clone();
        m[(i, k)] = v;
    }
}

pub fn column_hermite<T: IntegerScalar>(input: &Matrix<T>) -> ColumnHermite<T> {
    let rows = input.rows();
    let cols = input.cols();
    let mut h = input.clone();
    let mut u: Matrix<T> = Matrix::identity(cols);
    let mut pivots = Vec::new();
    let mut k = 0;
    for i in 0..rows {
        if k == cols {
            break;
        }
        let Some(first) = (k..cols).find(|&j| !h[(i, j)].is_zero()) else {
            continue;
        };
        h.swap_cols(k, first);
        u.swap_cols(k, first);
        for j in (k + 1)..cols {
            if h[(i, j)].is_zero() {
                continue;
            }
            let a = h[(i, k)].clone();
            let b = h[(i, j)].clone();
            let (g, s, t) = xgcd(&a, &b);
            let ag = a / g.clone();
            let bg = b / g;
            let nb = -bg;
            col_combine(&mut h, k, j, (&s, &t, &nb, &ag));
            col_combine(&mut u, k, j, (&s, &t, &nb, &ag));
        }
        if h[(i, k)].is_negative() {
            col_negate(&mut h, k);
            col_negate(&mut u, k);
        }
        let p = h[(i, k)].clone();
        for l in 0..k {
            let q = h[(i, l)].div_floor(&p);
            if !q.is_zero() {
                col_axpy(&mut h, l, &q, k);
                col_axpy(&mut u, l, &q, k);
            }
        }
        pivots.push(i);
        k += 1;
    }
    ColumnHermite {
        form: h,
        transform: u,
        pivots,
    }
}

/// Canonical basis of the lattice spanned by the columns of `m`.
pub fn lattice_basis<T: IntegerScalar>(m: &Matrix<T>) -> Matrix<T> {
    column_hermite(m).basis()
}

/// Canonical basis of `{x : m * x = 0}`.
pub fn integer_kernel<T: IntegerScalar>(m: &Matrix<T>) -> Matrix<T> {
    lattice_basis(&column_hermite(m).kernel())
}

/// Solves `m * x = b` over the integers. The returned solution has zero
/// component along the kernel part of the Hermite transform, so it is a
/// deterministic function of `(m, b)`.
pub fn solve_integer<T: IntegerScalar>(m: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    solve_with(&column_hermite(m), b)
}

pub fn solve_with<T: IntegerScalar>(hf: &ColumnHermite<T>, b: &[T]) -> Option<Vec<T>> {
    assert_eq!(b.len(), hf.form.rows(), "right-hand side length mismatch");
    let mut residual = b.to_vec();
    let mut y = vec![T::zero(); hf.transform.cols()];
    for (j, &p) in hf.pivots.iter().enumerate() {
        let piv = &hf.form[(p, j)];
        let (q, r) = residual[p].div_rem(piv);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (i, res) in residual.iter_mut().enumerate().skip(p) {
                *res = res.clone() - q.clone() * hf.form[(i, j)].clone();
            }
        }
        y[j] = q;
    }
    if residual.iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some(hf.transform.mul_vec(&y))
}

/// Reduces `x` modulo a lattice given by its canonical basis; the result
/// is the unique representative of the coset `x + L`.
pub fn reduce_mod_lattice<T: IntegerScalar>(basis: &Matrix<T>, x: &[T]) -> Vec<T> {
    let mut out = x.to_vec();
    for j in 0..basis.cols() {
        let Some(p) = (0..basis.rows()).find(|&i| !basis[(i, j)].is_zero()) else {
            continue;
        };
        let q = out[p].div_floor(&basis[(p, j)]);
        if !q.is_zero() {
            for (i, o) in out.iter_mut().enumerate().skip(p) {
                *o = o.clone() - q.clone() * basis[(i, j)].clone();
            }
        }
    }
    out
}
