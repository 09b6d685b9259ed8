//! Exact integer and rational dense linear algebra, sized for desk-scale
//! matrices (a few dozen rows): Smith normal form with transforms, integer
//! kernels, fraction-free determinants and ranks, and rational inverses.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> IMat {
        IMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IMat {
        let mut m = IMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> IMat {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = IMat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            debug_assert_eq!(row.len(), c);
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(v);
            }
        }
        m
    }

    pub fn row_i64(&self, i: usize) -> Vec<i64> {
        (0..self.cols)
            .map(|j| i64::try_from(&self[(i, j)]).expect("entry fits in i64"))
            .collect()
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += p;
                }
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }
}

impl core::ops::Index<(usize, usize)> for IMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form `u * m * v = d` with `u`, `v` unimodular and `d`
/// diagonal with `d[0] | d[1] | ...`.
pub struct Snf {
    pub u: IMat,
    pub v: IMat,
    pub diag: Vec<BigInt>,
    pub rank: usize,
}

/// Computes the Smith normal form by pivoting on a minimal nonzero entry and
/// clearing its row and column with Euclidean steps.
pub fn smith_normal_form(m: &IMat) -> Snf {
    let mut a = m.clone();
    let mut u = IMat::identity(a.rows);
    let mut v = IMat::identity(a.cols);
    let dim = a.rows.min(a.cols);

    let mut k = 0;
    while k < dim {
        // Find a minimal-magnitude nonzero pivot in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..a.rows {
            for j in k..a.cols {
                if !a[(i, j)].is_zero() {
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => a[(i, j)].abs() < a[(pi, pj)].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut a, &mut u, k, pi);
        swap_cols(&mut a, &mut v, k, pj);

        // Reduce the pivot row and column until both are clear off-pivot.
        loop {
            let mut dirty = false;
            for i in (k + 1)..a.rows {
                if !a[(i, k)].is_zero() {
                    let q = div_round(&a[(i, k)], &a[(k, k)]);
                    row_sub(&mut a, &mut u, i, k, &q);
                    if !a[(i, k)].is_zero() {
                        swap_rows(&mut a, &mut u, k, i);
                        dirty = true;
                    }
                }
            }
            for j in (k + 1)..a.cols {
                if !a[(k, j)].is_zero() {
                    let q = div_round(&a[(k, j)], &a[(k, k)]);
                    col_sub(&mut a, &mut v, j, k, &q);
                    if !a[(k, j)].is_zero() {
                        swap_cols(&mut a, &mut v, k, j);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }

        if a[(k, k)].is_negative() {
            negate_row(&mut a, &mut u, k);
        }
        k += 1;
    }

    // Enforce the divisibility chain d[i] | d[i+1].
    let mut i = 0;
    while i + 1 < dim {
        if a[(i, i)].is_zero() {
            break;
        }
        let mut j = i + 1;
        let mut fixed = true;
        while j < dim {
            if !a[(j, j)].is_zero() && !(&a[(j, j)] % &a[(i, i)]).is_zero() {
                // Fold d[j] into the pivot: add column j to column i, then
                // re-reduce the 2x2 block the slow but simple way.
                col_add(&mut a, &mut v, i, j);
                let sub = resmith_block(&mut a, &mut u, &mut v, i);
                debug_assert!(sub);
                fixed = false;
                break;
            }
            j += 1;
        }
        if fixed {
            i += 1;
        }
    }

    let mut diag = Vec::with_capacity(dim);
    let mut rank = 0;
    for i in 0..dim {
        if a[(i, i)].is_negative() {
            negate_row(&mut a, &mut u, i);
        }
        diag.push(a[(i, i)].clone());
        if !a[(i, i)].is_zero() {
            rank += 1;
        }
    }
    Snf { u, v, diag, rank }
}

/// Re-runs the clearing loop at position `k` after a divisibility fix.
fn resmith_block(a: &mut IMat, u: &mut IMat, v: &mut IMat, k: usize) -> bool {
    loop {
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..a.rows {
            for j in k..a.cols {
                if !a[(i, j)].is_zero() {
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => a[(i, j)].abs() < a[(pi, pj)].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { return false };
        swap_rows(a, u, k, pi);
        swap_cols(a, v, k, pj);
        let mut clean = true;
        for i in (k + 1)..a.rows {
            if !a[(i, k)].is_zero() {
                let q = div_round(&a[(i, k)], &a[(k, k)]);
                row_sub(a, u, i, k, &q);
                if !a[(i, k)].is_zero() {
                    clean = false;
                }
            }
        }
        for j in (k + 1)..a.cols {
            if !a[(k, j)].is_zero() {
                let q = div_round(&a[(k, j)], &a[(k, k)]);
                col_sub(a, v, j, k, &q);
                if !a[(k, j)].is_zero() {
                    clean = false;
                }
            }
        }
        if clean {
            if a[(k, k)].is_negative() {
                negate_row(a, u, k);
            }
            return true;
        }
    }
}

fn swap_rows(a: &mut IMat, u: &mut IMat, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..a.cols {
        let x = a[(i, c)].clone();
        a[(i, c)] = a[(j, c)].clone();
        a[(j, c)] = x;
    }
    for c in 0..u.cols {
        let x = u[(i, c)].clone();
        u[(i, c)] = u[(j, c)].clone();
        u[(j, c)] = x;
    }
}

fn swap_cols(a: &mut IMat, v: &mut IMat, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in 0..a.rows {
        let x = a[(r, i)].clone();
        a[(r, i)] = a[(r, j)].clone();
        a[(r, j)] = x;
    }
    for r in 0..v.rows {
        let x = v[(r, i)].clone();
        v[(r, i)] = v[(r, j)].clone();
        v[(r, j)] = x;
    }
}

/// `row[i] -= q * row[k]`, mirrored on `u`.
fn row_sub(a: &mut IMat, u: &mut IMat, i: usize, k: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for c in 0..a.cols {
        let d = q * &a[(k, c)];
        a[(i, c)] -= d;
    }
    for c in 0..u.cols {
        let d = q * &u[(k, c)];
        u[(i, c)] -= d;
    }
}

/// `col[j] -= q * col[k]`, mirrored on `v`.
fn col_sub(a: &mut IMat, v: &mut IMat, j: usize, k: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for r in 0..a.rows {
        let d = q * &a[(r, k)];
        a[(r, j)] -= d;
    }
    for r in 0..v.rows {
        let d = q * &v[(r, k)];
        v[(r, j)] -= d;
    }
}

/// `col[i] += col[j]`, mirrored on `v`.
fn col_add(a: &mut IMat, v: &mut IMat, i: usize, j: usize) {
    for r in 0..a.rows {
        let d = a[(r, j)].clone();
        a[(r, i)] += d;
    }
    for r in 0..v.rows {
        let d = v[(r, j)].clone();
        v[(r, i)] += d;
    }
}

fn negate_row(a: &mut IMat, u: &mut IMat, i: usize) {
    for c in 0..a.cols {
        let x = -a[(i, c)].clone();
        a[(i, c)] = x;
    }
    for c in 0..u.cols {
        let x = -u[(i, c)].clone();
        u[(i, c)] = x;
    }
}

/// Rounded division, so Euclidean steps shrink remainders quickly.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = num_integer::Integer::div_rem(a, b);
    if &r.abs() * &two > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Integer kernel basis (columns `x` with `m x = 0`) from the Smith form.
pub fn kernel_basis(m: &IMat) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let mut basis = Vec::new();
    for j in snf.rank..m.cols {
        basis.push(snf.v.column(j));
    }
    basis
}

/// Rank over the rationals via fraction-free elimination.
pub fn rank(m: &IMat) -> usize {
    let mut a = m.clone();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..a.cols {
        let mut piv = None;
        for r in row..a.rows {
            if !a[(r, col)].is_zero() {
                piv = Some(r);
                break;
            }
        }
        let Some(piv) = piv else { continue };
        if piv != row {
            for c in 0..a.cols {
                let x = a[(row, c)].clone();
                a[(row, c)] = a[(piv, c)].clone();
                a[(piv, c)] = x;
            }
        }
        for r in (row + 1)..a.rows {
            if a[(r, col)].is_zero() {
                continue;
            }
            let f1 = a[(row, col)].clone();
            let f2 = a[(r, col)].clone();
            for c in 0..a.cols {
                let x = &f1 * &a[(r, c)] - &f2 * &a[(row, c)];
                a[(r, c)] = x;
            }
        }
        rank += 1;
        row += 1;
        if row == a.rows {
            break;
        }
    }
    rank
}

/// Determinant of a square integer matrix by Bareiss fraction-free
/// elimination.
pub fn det(m: &IMat) -> BigInt {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..(n - 1) {
        if a[(k, k)].is_zero() {
            let swap = ((k + 1)..n).find(|&r| !a[(r, k)].is_zero());
            let Some(r) = swap else {
                return BigInt::zero();
            };
            for c in 0..n {
                let x = a[(k, c)].clone();
                a[(k, c)] = a[(r, c)].clone();
                a[(r, c)] = x;
            }
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = num / &prev;
            }
        }
        for i in (k + 1)..n {
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

/// Solves `a * x = d * rhs` over the integers, where `d = det(a)`, by
/// fraction-free elimination with an exact-division backsolve. Returns
/// `None` for singular `a`. The scaled solution `x = det(a) * a^-1 * rhs`
/// is integral, which keeps the whole computation in `BigInt`.
pub fn solve_scaled(a: &IMat, rhs: &IMat) -> Option<(IMat, BigInt)> {
    assert_eq!(a.rows, a.cols);
    assert_eq!(rhs.rows, a.rows);
    let n = a.rows;
    if n == 0 {
        return Some((IMat::zeros(0, rhs.cols), BigInt::one()));
    }
    let mut u = a.clone();
    let mut b = rhs.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if u[(k, k)].is_zero() {
            let swap = ((k + 1)..n).find(|&r| !u[(r, k)].is_zero())?;
            for c in 0..n {
                let x = u[(k, c)].clone();
                u[(k, c)] = u[(swap, c)].clone();
                u[(swap, c)] = x;
            }
            for c in 0..b.cols {
                let x = b[(k, c)].clone();
                b[(k, c)] = b[(swap, c)].clone();
                b[(swap, c)] = x;
            }
            sign = -sign;
        }
        if k + 1 == n {
            break;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &u[(i, j)] * &u[(k, k)] - &u[(i, k)] * &u[(k, j)];
                u[(i, j)] = num / &prev;
            }
            for j in 0..b.cols {
                let num = &b[(i, j)] * &u[(k, k)] - &u[(i, k)] * &b[(k, j)];
                b[(i, j)] = num / &prev;
            }
            u[(i, k)] = BigInt::zero();
        }
        prev = u[(k, k)].clone();
    }
    let det = &sign * &u[(n - 1, n - 1)];
    if det.is_zero() {
        return None;
    }

    // Back substitution: with Bareiss pivots p_k = u[k][k], the scaled
    // solution x = det * a^-1 * rhs satisfies, row by row from the bottom,
    //   x_k = (det * b_k - sum_{j>k} u_{k,j} x_j) / p_k,
    // and every division is exact.
    let mut x = IMat::zeros(n, rhs.cols);
    for c in 0..rhs.cols {
        for k in (0..n).rev() {
            let mut num = &det * &b[(k, c)];
            for j in (k + 1)..n {
                num -= &u[(k, j)] * &x[(j, c)];
            }
            let q = &num / &u[(k, k)];
            debug_assert_eq!(&q * &u[(k, k)], num, "backsolve division is exact");
            x[(k, c)] = q;
        }
    }
    Some((x, det))
}

/// Dense rational matrix, row major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigRational>,
}

impl RMat {
    pub fn zeros(rows: usize, cols: usize) -> RMat {
        RMat {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> RMat {
        let mut m = RMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_int(m: &IMat) -> RMat {
        let mut out = RMat::zeros(m.rows, m.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                out[(i, j)] = BigRational::from_integer(m[(i, j)].clone());
            }
        }
        out
    }

    pub fn transpose(&self) -> RMat {
        let mut t = RMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RMat) -> RMat {
        assert_eq!(self.cols, other.rows);
        let mut out = RMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += p;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &RMat) -> RMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] += other[(i, j)].clone();
            }
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> RMat {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= s.clone();
        }
        out
    }

    /// Inverse by Gauss-Jordan elimination; `None` for singular input.
    pub fn inverse(&self) -> Option<RMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RMat::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if piv != col {
                for c in 0..n {
                    let x = a[(col, c)].clone();
                    a[(col, c)] = a[(piv, c)].clone();
                    a[(piv, c)] = x;
                    let y = inv[(col, c)].clone();
                    inv[(col, c)] = inv[(piv, c)].clone();
                    inv[(piv, c)] = y;
                }
            }
            let p = a[(col, col)].clone();
            for c in 0..n {
                a[(col, c)] = &a[(col, c)] / &p;
                inv[(col, c)] = &inv[(col, c)] / &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for c in 0..n {
                    let x = &a[(col, c)] * &f;
                    a[(r, c)] -= x;
                    let y = &inv[(col, c)] * &f;
                    inv[(r, c)] -= y;
                }
            }
        }
        Some(inv)
    }
}

impl core::ops::Index<(usize, usize)> for RMat {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for RMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}
