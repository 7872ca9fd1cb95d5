//! Smith normal form with both-sided unimodular transforms.

use crate::matrix::Matrix;
use crate::scalar::IntegerScalar;

/// `left * input * right = diagonal`, with `left_inverse * left = I`.
#[derive(Clone, Debug)]
pub struct SmithForm<T> {
    pub left: Matrix<T>,
    pub left_inverse: Matrix<T>,
    pub diagonal: Matrix<T>,
    pub right: Matrix<T>,
}

impl<T: IntegerScalar> SmithForm<T> {
    /// The diagonal entries `d_1 | d_2 | ...`, including trailing zeros up
    /// to `min(rows, cols)`.
    pub fn divisors(&self) -> Vec<T> {
        let n = self.diagonal.rows().min(self.diagonal.cols());
        (0..n).map(|i| self.diagonal[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.divisors().iter().filter(|d| !d.is_zero()).count()
    }
}

struct Work<T> {
    a: Matrix<T>,
    u: Matrix<T>,
    uinv: Matrix<T>,
    v: Matrix<T>,
}

impl<T: IntegerScalar> Work<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.uinv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, c: &T, j: usize) {
        for k in 0..self.a.cols() {
            let x = self.a[(i, k)].clone() + c.clone() * self.a[(j, k)].clone();
            self.a[(i, k)] = x;
        }
        for k in 0..self.u.cols() {
            let x = self.u[(i, k)].clone() + c.clone() * self.u[(j, k)].clone();
            self.u[(i, k)] = x;
        }
        // inverse op applied on the right: col_j -= c * col_i
        for k in 0..self.uinv.rows() {
            let x = self.uinv[(k, j)].clone() - c.clone() * self.uinv[(k, i)].clone();
            self.uinv[(k, j)] = x;
        }
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, c: &T, j: usize) {
        for k in 0..self.a.rows() {
            let x = self.a[(k, i)].clone() + c.clone() * self.a[(k, j)].clone();
            self.a[(k, i)] = x;
        }
        for k in 0..self.v.rows() {
            let x = self.v[(k, i)].clone() + c.clone() * self.v[(k, j)].clone();
            self.v[(k, i)] = x;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.a.cols() {
            let x = -self.a[(i, k)].clone();
            self.a[(i, k)] = x;
        }
        for k in 0..self.u.cols() {
            let x = -self.u[(i, k)].clone();
            self.u[(i, k)] = x;
        }
        for k in 0..self.uinv.rows() {
            let x = -self.uinv[(k, i)].clone();
            self.uinv[(k, i)] = x;
        }
    }
}

pub fn smith_normal_form<T: IntegerScalar>(input: &Matrix<T>) -> SmithForm<T> {
    let (rows, cols) = (input.rows(), input.cols());
    let mut w = Work {
        a: input.clone(),
        u: Matrix::identity(rows),
        uinv: Matrix::identity(rows),
        v: Matrix::identity(cols),
    };
    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &w.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < w.a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        let mut dirty = false;
        for i in (t + 1)..rows {
            if w.a[(i, t)].is_zero() {
                continue;
            }
            let q = w.a[(i, t)].div_floor(&w.a[(t, t)]);
            w.add_row(i, &-q, t);
            if !w.a[(i, t)].is_zero() {
                dirty = true;
            }
        }
        for j in (t + 1)..cols {
            if w.a[(t, j)].is_zero() {
                continue;
            }
            let q = w.a[(t, j)].div_floor(&w.a[(t, t)]);
            w.add_col(j, &-q, t);
            if !w.a[(t, j)].is_zero() {
                dirty = true;
            }
        }
        if dirty {
            // a smaller remainder exists; restart with it as pivot
            continue;
        }
        // divisibility of the trailing block by the pivot
        let p = w.a[(t, t)].clone();
        let offender = ((t + 1)..rows)
            .flat_map(|i| ((t + 1)..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !w.a[(i, j)].is_multiple_of(&p));
        if let Some((i, _)) = offender {
            w.add_row(t, &T::one(), i);
            continue;
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    SmithForm {
        left: w.u,
        left_inverse: w.uinv,
        diagonal: w.a,
        right: w.v,
    }
}
