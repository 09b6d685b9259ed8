//! Face adjacency matrices of an ordered triangulation and the diagonal
//! matrix of tetrahedron signs.
//!
//! For `k = 0..3` the matrix `X_k` (size `N x 2N`) records which quotient
//! face sits opposite the `k`-th vertex of each tetrahedron. From these:
//!
//! ```text
//! A_cal = | X0 - X1 + X2 |        B_cal = | 0  |
//!         | X2 - X3      |                | Id |
//! ```
//!
//! The sign of a tetrahedron says whether its labelled vertex frame is
//! right-handed in a chosen orientation of the manifold; the full diagonal
//! is determined up to one global flip, which is recorded so downstream
//! checks can try both.

use alloc::vec;
use alloc::vec::Vec;

use crate::ordering::is_ordered;
use crate::quotient::{self, QuotientComplex};
use crate::tri::{IdealTriangulation, Slot, TriError};

/// Integer matrix as rows; entries stay tiny (0, +-1, incidence counts).
pub type IntRows = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceMatrices {
    /// `x[k]` is the `N x 2N` matrix of the "face opposite vertex k" map.
    pub x: [IntRows; 4],
    /// `2N x 2N`.
    pub a_cal: IntRows,
    /// `2N x N`, constant `[0; Id]`.
    pub b_cal: IntRows,
    /// Diagonal of tetrahedron signs, normalised so the first tetrahedron
    /// has sign `+1`.
    pub e_cal: Vec<i8>,
    /// The sign given to tetrahedron 0; the opposite global choice is
    /// `-e_cal`.
    pub global_sign_choice: i8,
}

/// Tetrahedron signs by propagation across gluings: crossing a gluing with
/// vertex bijection `s` flips the sign by `-sign(s)`. A contradiction on any
/// gluing means the triangulation is not orientable.
pub fn tetra_signs(tri: &IdealTriangulation) -> Result<Vec<i8>, TriError> {
    let n = tri.n_tetrahedra();
    let mut eps = vec![0i8; n];
    eps[0] = 1;
    let mut stack = vec![0usize];
    while let Some(t) = stack.pop() {
        for f in 0..4u8 {
            let g = tri.gluing(Slot::new(t, f));
            let want = -g.perm.sign() * eps[t];
            if eps[g.tet] == 0 {
                eps[g.tet] = want;
                stack.push(g.tet);
            } else if eps[g.tet] != want {
                return Err(TriError::NonOrientable);
            }
        }
    }
    Ok(eps)
}

impl FaceMatrices {
    /// Builds all face adjacency matrices and the sign diagonal for an
    /// ordered triangulation. Quotient faces are indexed by their smaller
    /// `(tet, face)` slot.
    pub fn compute(tri: &IdealTriangulation) -> Result<FaceMatrices, TriError> {
        let q = quotient::quotient_cells(tri);
        Self::compute_with(tri, &q)
    }

    pub fn compute_with(
        tri: &IdealTriangulation,
        q: &QuotientComplex,
    ) -> Result<FaceMatrices, TriError> {
        if !is_ordered(tri) {
            return Err(TriError::NotOrdered);
        }
        let n = tri.n_tetrahedra();
        let nf = q.faces.len();

        let mut x: [IntRows; 4] = core::array::from_fn(|_| vec![vec![0i64; nf]; n]);
        for t in 0..n {
            for k in 0..4u8 {
                let j = q.face_of(Slot::new(t, k));
                x[k as usize][t][j] = 1;
            }
        }

        let mut a_cal = vec![vec![0i64; nf]; 2 * n];
        for t in 0..n {
            for j in 0..nf {
                a_cal[t][j] = x[0][t][j] - x[1][t][j] + x[2][t][j];
                a_cal[n + t][j] = x[2][t][j] - x[3][t][j];
            }
        }

        let mut b_cal = vec![vec![0i64; n]; 2 * n];
        for t in 0..n {
            b_cal[n + t][t] = 1;
        }

        let e_cal = tetra_signs(tri)?;

        Ok(FaceMatrices {
            x,
            a_cal,
            b_cal,
            e_cal,
            global_sign_choice: 1,
        })
    }

    pub fn n_tetrahedra(&self) -> usize {
        self.e_cal.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering::{apply_order, enumerate_orders, reverse_order};
    use crate::sample;

    /// Column permutation taking this crate's face order (by smaller slot)
    /// to the published figure-eight face letters A, B, C, D.
    ///
    /// Our order is B, D, C, A: quotient faces indexed by slots
    /// (0,0) = B, (0,1) = D, (0,2) = C, (0,3) = A.
    pub const FIG8_COLS_TO_LETTERS: [usize; 4] = [1, 3, 2, 0];

    fn reorder(rows: &IntRows, perm_to_letters: &[usize]) -> IntRows {
        rows.iter()
            .map(|r| {
                let mut out = vec![0i64; r.len()];
                for (ours, &letter) in perm_to_letters.iter().enumerate() {
                    out[letter] = r[ours];
                }
                out
            })
            .collect()
    }

    #[test]
    fn fig8_matrices_match_published_values() {
        let tri = sample::figure_eight();
        let fm = FaceMatrices::compute(&tri).unwrap();

        let to_letters = &FIG8_COLS_TO_LETTERS[..];
        assert_eq!(
            reorder(&fm.x[0], to_letters),
            vec![vec![0, 1, 0, 0], vec![0, 0, 1, 0]]
        );
        assert_eq!(
            reorder(&fm.x[1], to_letters),
            vec![vec![0, 0, 0, 1], vec![1, 0, 0, 0]]
        );
        assert_eq!(
            reorder(&fm.x[2], to_letters),
            vec![vec![0, 0, 1, 0], vec![0, 1, 0, 0]]
        );
        assert_eq!(
            reorder(&fm.x[3], to_letters),
            vec![vec![1, 0, 0, 0], vec![0, 0, 0, 1]]
        );
        assert_eq!(
            reorder(&fm.a_cal, to_letters),
            vec![
                vec![0, 1, 1, -1],
                vec![-1, 1, 1, 0],
                vec![-1, 0, 1, 0],
                vec![0, 1, 0, -1],
            ]
        );
        assert_eq!(fm.e_cal, vec![1, -1]);
    }

    #[test]
    fn b_cal_is_constant_and_x_rows_sum_to_one() {
        let fm = FaceMatrices::compute(&sample::figure_eight()).unwrap();
        for t in 0..2 {
            for k in 0..4 {
                assert_eq!(fm.x[k][t].iter().sum::<i64>(), 1);
            }
            assert_eq!(fm.b_cal[t], vec![0, 0]);
        }
        assert_eq!(fm.b_cal[2], vec![1, 0]);
        assert_eq!(fm.b_cal[3], vec![0, 1]);
        // Each quotient face is hit by exactly two slots.
        for j in 0..4 {
            let col: i64 = (0..2)
                .map(|t| (0..4).map(|k| fm.x[k][t][j]).sum::<i64>())
                .sum();
            assert_eq!(col, 2);
        }
    }

    #[test]
    fn not_ordered_is_rejected() {
        assert_eq!(
            FaceMatrices::compute(&sample::figure_eight_unordered()).unwrap_err(),
            TriError::NotOrdered
        );
    }

    #[test]
    fn signs_survive_order_reversal() {
        let tri = sample::figure_eight();
        for o in enumerate_orders(&tri) {
            let fwd = apply_order(&tri, &o).unwrap();
            let bwd = apply_order(&tri, &reverse_order(&o)).unwrap();
            assert_eq!(
                tetra_signs(&fwd).unwrap(),
                tetra_signs(&bwd).unwrap(),
                "tetrahedron signs must not change under order reversal"
            );
        }
    }

    #[test]
    fn non_orientable_gluing_is_detected() {
        use crate::perm::Perm4;
        use crate::tri::{IdealTriangulation, Slot};
        // One tetrahedron glued to itself. The face 2 <-> 3 bijection is
        // even, which forces eps(T) = -eps(T): a sign contradiction.
        let tri = IdealTriangulation::from_pairs(
            1,
            &[
                (Slot::new(0, 0), 0, Perm4([1, 0, 2, 3])),
                (Slot::new(0, 2), 0, Perm4([1, 0, 3, 2])),
            ],
        )
        .unwrap();
        assert_eq!(tetra_signs(&tri), Err(TriError::NonOrientable));
    }
}
