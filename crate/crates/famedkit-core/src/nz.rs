//! Neumann-Zagier matrices of an ordered one-cusped triangulation and a
//! peripheral curve.
//!
//! The system of the first `N-1` edge equations together with the curve's
//! holonomy equation reads `G Log z + G' Log z' + G'' Log z'' = rhs`, where
//! the right hand side carries `2 i pi` for each edge row and `xi` minus the
//! tracked `i pi` constant for the curve row. The matrices
//! `A = G - G'` and `B = G'' - G'` are insensitive to the per-tetrahedron
//! normalisation of the curve row.

use alloc::string::String;
use alloc::vec::Vec;

use crate::cusp::{edge_rows, holonomy, CuspTriangulation, HolonomyRow, PeripheralCurve};
use crate::face_matrices::IntRows;
use crate::tri::TriError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NZMatrices {
    pub g: IntRows,
    pub g1: IntRows,
    pub g2: IntRows,
    /// `G - G'`.
    pub a_bold: IntRows,
    /// `G'' - G'`.
    pub b_bold: IntRows,
    pub dropped_edge: usize,
    /// The `i pi` constant of the normalised curve row: the last equation is
    /// `sum = xi - curve_const_pi * i pi`.
    pub curve_const_pi: i64,
    pub curve_label: Option<String>,
}

impl NZMatrices {
    pub fn n(&self) -> usize {
        self.g.len()
    }
}

/// Assembles the Neumann-Zagier matrices: the edge rows except
/// `dropped_edge`, then the normalised holonomy row of `curve`.
pub fn neumann_zagier(
    cusp: &CuspTriangulation,
    curve: &PeripheralCurve,
    dropped_edge: usize,
) -> Result<NZMatrices, TriError> {
    let n = cusp.n_tetrahedra();
    if dropped_edge >= cusp.quotient.n_edges() {
        return Err(TriError::InvalidEdgeIndex {
            index: dropped_edge,
            n_edges: cusp.quotient.n_edges(),
        });
    }
    let erows = edge_rows(cusp);
    let mut rows: Vec<HolonomyRow> = erows
        .into_iter()
        .enumerate()
        .filter(|(j, _)| *j != dropped_edge)
        .map(|(_, r)| r)
        .collect();
    let curve_row = holonomy(cusp, curve).normalize();
    let curve_const_pi = curve_row.const_pi;
    rows.push(curve_row);

    let collect = |f: fn(&HolonomyRow) -> &Vec<i64>| -> IntRows {
        rows.iter().map(|r| f(r).clone()).collect()
    };
    let g = collect(|r| &r.c);
    let g1 = collect(|r| &r.c1);
    let g2 = collect(|r| &r.c2);
    let sub = |x: &IntRows, y: &IntRows| -> IntRows {
        x.iter()
            .zip(y)
            .map(|(rx, ry)| rx.iter().zip(ry).map(|(a, b)| a - b).collect())
            .collect()
    };
    let a_bold = sub(&g, &g1);
    let b_bold = sub(&g2, &g1);
    debug_assert_eq!(g.len(), n);

    Ok(NZMatrices {
        g,
        g1,
        g2,
        a_bold,
        b_bold,
        dropped_edge,
        curve_const_pi,
        curve_label: curve.label.clone(),
    })
}
