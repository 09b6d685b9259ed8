//! Exact feasibility of the angle structure polytope.
//!
//! An angle structure assigns dihedral angles in `(0, pi)` to the shape
//! slots, with sum `pi` in every tetrahedron and angular weight `2 pi`
//! around every quotient edge. Working in units of `pi`, the polytope is
//! cut out by per-tetrahedron sums `= 1`, per-edge sums `= 2` and strict
//! positivity. Nonemptiness of the open polytope is decided exactly by
//! maximising the margin `t` under `x_k >= t`: the polytope is nonempty iff
//! the optimum is positive, and the witness then satisfies every equality
//! exactly.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cusp::edge_rows_from;
use crate::face_matrices::tetra_signs;
use crate::ordering::is_ordered;
use crate::quotient;
use crate::tri::{IdealTriangulation, TriError};

/// Angles in units of `pi`, ordered `(a_1, b_1, c_1, a_2, ...)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AngleVector {
    pub angles: Vec<BigRational>,
}

impl AngleVector {
    pub fn n_tetrahedra(&self) -> usize {
        self.angles.len() / 3
    }
}

/// Decides nonemptiness of the open angle polytope; on success returns an
/// interior witness together with its margin (the minimum angle, in units
/// of `pi`).
pub fn angle_structure_feasible(
    tri: &IdealTriangulation,
) -> Result<Option<(AngleVector, BigRational)>, TriError> {
    if !is_ordered(tri) {
        return Err(TriError::NotOrdered);
    }
    let signs = tetra_signs(tri)?;
    let q = quotient::quotient_cells(tri);
    let rows = edge_rows_from(&q, &signs);
    let n = tri.n_tetrahedra();
    let nv = 3 * n;

    // Substituting x = y + t (y >= 0, t >= 0 the margin) turns the strict
    // problem into max t subject to
    //   sum_tet y + 3 t = 1,   sum_edge y + deg t = 2.
    // Variables: y_0..y_{nv-1}, t.
    let total = nv + 1;
    let rat = |v: i64| BigRational::from_integer(BigInt::from(v));

    let mut a: Vec<Vec<BigRational>> = Vec::new();
    let mut b: Vec<BigRational> = Vec::new();

    for t in 0..n {
        let mut row = vec![BigRational::zero(); total];
        for k in 0..3 {
            row[3 * t + k] = BigRational::one();
        }
        row[nv] = rat(3);
        a.push(row);
        b.push(rat(1));
    }
    for er in &rows {
        let mut row = vec![BigRational::zero(); total];
        let mut degree = 0;
        for t in 0..n {
            row[3 * t] = rat(er.c[t]);
            row[3 * t + 1] = rat(er.c1[t]);
            row[3 * t + 2] = rat(er.c2[t]);
            degree += er.c[t] + er.c1[t] + er.c2[t];
        }
        row[nv] = rat(degree);
        a.push(row);
        b.push(rat(2));
    }

    let mut c = vec![BigRational::zero(); total];
    c[nv] = BigRational::one();

    let Some((opt, x)) = simplex::maximize(&a, &b, &c) else {
        return Ok(None);
    };
    if !opt.is_positive() {
        return Ok(None);
    }
    let angles = AngleVector {
        angles: x[..nv].iter().map(|y| y + &opt).collect(),
    };
    Ok(Some((angles, opt)))
}

/// Exact verification that an angle vector satisfies every tetrahedron and
/// edge equality of the triangulation.
pub fn satisfies_equalities(tri: &IdealTriangulation, v: &AngleVector) -> bool {
    let Ok(signs) = tetra_signs(tri) else {
        return false;
    };
    let q = quotient::quotient_cells(tri);
    let rows = edge_rows_from(&q, &signs);
    let n = tri.n_tetrahedra();
    if v.angles.len() != 3 * n {
        return false;
    }
    for t in 0..n {
        let s = &v.angles[3 * t] + &v.angles[3 * t + 1] + &v.angles[3 * t + 2];
        if s != BigRational::one() {
            return false;
        }
    }
    let two = BigRational::from_integer(BigInt::from(2));
    for er in &rows {
        let mut s = BigRational::zero();
        for t in 0..n {
            s += BigRational::from_integer(BigInt::from(er.c[t])) * &v.angles[3 * t];
            s += BigRational::from_integer(BigInt::from(er.c1[t])) * &v.angles[3 * t + 1];
            s += BigRational::from_integer(BigInt::from(er.c2[t])) * &v.angles[3 * t + 2];
        }
        if s != two {
            return false;
        }
    }
    true
}

/// A small dense two-phase simplex over exact rationals with Bland's rule.
mod simplex {
    use super::*;

    /// Maximises `c . x` subject to `A x = b`, `x >= 0`.
    ///
    /// Returns the optimum and an optimal vertex, or `None` when infeasible.
    /// Unbounded problems return `None` as well (the callers' programs are
    /// bounded by construction).
    pub fn maximize(
        a: &[Vec<BigRational>],
        b: &[BigRational],
        c: &[BigRational],
    ) -> Option<(BigRational, Vec<BigRational>)> {
        let m = a.len();
        let n = c.len();

        // Tableau with artificial variables appended: columns
        // 0..n structural, n..n+m artificial, last column the RHS.
        let width = n + m + 1;
        let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m);
        for i in 0..m {
            let mut row: Vec<BigRational> = a[i].to_vec();
            let mut rhs = b[i].clone();
            if rhs.is_negative() {
                for v in row.iter_mut() {
                    *v = -v.clone();
                }
                rhs = -rhs;
            }
            for j in 0..m {
                row.push(if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
            }
            row.push(rhs);
            tab.push(row);
        }
        let mut basis: Vec<usize> = (n..n + m).collect();

        // Phase 1: maximise minus the sum of artificials. The reduced-cost
        // row starts as -1 on the artificials and is cleared on the basic
        // columns by adding every tableau row.
        let mut obj = vec![BigRational::zero(); width];
        for i in 0..m {
            for j in 0..width {
                let d = tab[i][j].clone();
                obj[j] += d;
            }
        }
        for j in n..n + m {
            obj[j] -= BigRational::one();
        }
        pivot_loop(&mut tab, &mut basis, &mut obj, n)?;
        if !obj[width - 1].is_zero() {
            return None; // infeasible
        }

        // Drive any artificial variables out of the basis if possible; rows
        // where that fails are redundant and can be ignored by phase 2
        // (their artificial stays basic at zero).
        for i in 0..m {
            if basis[i] >= n {
                if let Some(j) = (0..n).find(|&j| !tab[i][j].is_zero()) {
                    do_pivot(&mut tab, &mut basis, &mut obj, i, j);
                }
            }
        }

        // Phase 2 objective: reduced costs of c over the current basis.
        let mut obj2 = vec![BigRational::zero(); width];
        for (j, cj) in c.iter().enumerate() {
            obj2[j] = cj.clone();
        }
        for i in 0..m {
            if basis[i] < n && !obj2[basis[i]].is_zero() {
                let f = obj2[basis[i]].clone();
                for j in 0..width {
                    let d = &tab[i][j] * &f;
                    obj2[j] -= d;
                }
            }
        }
        pivot_loop(&mut tab, &mut basis, &mut obj2, n)?;

        let mut x = vec![BigRational::zero(); n];
        for i in 0..m {
            if basis[i] < n {
                x[basis[i]] = tab[i][width - 1].clone();
            }
        }
        let opt = -obj2[width - 1].clone();
        Some((opt, x))
    }

    /// Bland pivoting until no reduced cost is positive. Columns
    /// `>= allowed` never enter (artificials stay out once they leave).
    fn pivot_loop(
        tab: &mut [Vec<BigRational>],
        basis: &mut [usize],
        obj: &mut [BigRational],
        allowed: usize,
    ) -> Option<()> {
        let width = obj.len();
        // Largest-coefficient pivoting, falling back to Bland's rule after
        // a generous budget so degenerate problems cannot cycle.
        let bland_after = 50 * (tab.len() + width);
        let mut pivots = 0usize;
        loop {
            let entering = if pivots < bland_after {
                let mut best: Option<usize> = None;
                for j in 0..allowed {
                    if obj[j].is_positive() && best.is_none_or(|b| obj[j] > obj[b]) {
                        best = Some(j);
                    }
                }
                best
            } else {
                (0..allowed).find(|&j| obj[j].is_positive())
            };
            let Some(e) = entering else {
                return Some(());
            };
            // Ratio test, Bland tie-break on the basis variable index.
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..tab.len() {
                if tab[i][e].is_positive() {
                    let ratio = &tab[i][width - 1] / &tab[i][e];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && basis[i] < basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let (li, _) = leave?; // None: unbounded
            do_pivot(tab, basis, obj, li, e);
            pivots += 1;
        }
    }

    pub(super) fn do_pivot(
        tab: &mut [Vec<BigRational>],
        basis: &mut [usize],
        obj: &mut [BigRational],
        row: usize,
        col: usize,
    ) {
        let width = obj.len();
        let p = tab[row][col].clone();
        for j in 0..width {
            tab[row][j] = &tab[row][j] / &p;
        }
        for i in 0..tab.len() {
            if i != row && !tab[i][col].is_zero() {
                let f = tab[i][col].clone();
                for j in 0..width {
                    let d = &tab[row][j] * &f;
                    tab[i][j] -= d;
                }
            }
        }
        if !obj[col].is_zero() {
            let f = obj[col].clone();
            for j in 0..width {
                let d = &tab[row][j] * &f;
                obj[j] -= d;
            }
        }
        basis[row] = col;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    #[test]
    fn fig8_polytope_contains_the_regular_point() {
        let tri = sample::figure_eight();
        let (witness, margin) = angle_structure_feasible(&tri).unwrap().unwrap();
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        // The max-min programme is forced to the regular point here.
        assert_eq!(margin, third);
        assert!(witness.angles.iter().all(|a| *a == third));
        assert!(satisfies_equalities(&tri, &witness));
    }

    #[test]
    fn unordered_input_is_rejected() {
        assert!(matches!(
            angle_structure_feasible(&sample::figure_eight_unordered()),
            Err(TriError::NotOrdered)
        ));
    }

    #[test]
    fn simplex_handles_tiny_lp() {
        use num_traits::FromPrimitive;
        // max x + y st x + y + s = 1 -> 1.
        let one = BigRational::one();
        let a = vec![vec![one.clone(), one.clone(), one.clone()]];
        let b = vec![one.clone()];
        let c = vec![one.clone(), one.clone(), BigRational::zero()];
        let (opt, x) = simplex::maximize(&a, &b, &c).unwrap();
        assert_eq!(opt, BigRational::from_i64(1).unwrap());
        assert_eq!(&x[0] + &x[1], BigRational::from_i64(1).unwrap());
    }

    #[test]
    fn simplex_detects_infeasible() {
        // x = -1 with x >= 0.
        let a = vec![vec![BigRational::one()]];
        let b = vec![-BigRational::one()];
        let c = vec![BigRational::one()];
        assert!(simplex::maximize(&a, &b, &c).is_none());
    }
}
