//! First homology of the manifold from the dual spine of the triangulation.
//!
//! The dual spine has one 0-cell per tetrahedron, one 1-cell per quotient
//! face and one 2-cell per quotient edge (attached along the cyclic face
//! word read off by walking around the edge). The manifold deformation
//! retracts onto this spine, so `H_1` is the homology of
//!
//! ```text
//! Z^edges --d2--> Z^faces --d1--> Z^tets
//! ```
//!
//! in the middle. The same machinery reduces a face-crossing cycle (for
//! instance a peripheral curve) to its class in `H_1`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exact::{self, IMat, Snf};
use crate::quotient::{self, QuotientComplex};
use crate::tri::IdealTriangulation;

/// A finitely generated abelian group: free rank plus torsion coefficients
/// (each `> 1`, in divisibility order).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn infinite_cyclic() -> AbelianGroup {
        AbelianGroup {
            rank: 1,
            torsion: Vec::new(),
        }
    }
}

/// `H_1(M)` of a valid triangulation.
pub fn homology_h1(tri: &IdealTriangulation) -> AbelianGroup {
    let q = quotient::quotient_cells(tri);
    H1Presentation::new(tri, &q).group()
}

/// The boundary map from faces to tetrahedra: each dual 1-cell runs from the
/// tetrahedron of the face's first slot to that of the second.
fn boundary_one(tri: &IdealTriangulation, q: &QuotientComplex) -> IMat {
    let n = tri.n_tetrahedra();
    let mut d1 = IMat::zeros(n, q.faces.len());
    for (j, face) in q.faces.iter().enumerate() {
        d1[(face.slots[0].tet, j)] += BigInt::from(-1);
        d1[(face.slots[1].tet, j)] += BigInt::from(1);
    }
    d1
}

/// The boundary of each dual 2-cell: the signed word of faces crossed while
/// walking around the quotient edge.
fn boundary_two(tri: &IdealTriangulation, q: &QuotientComplex) -> IMat {
    let _ = tri;
    let mut d2 = IMat::zeros(q.faces.len(), q.edges.len());
    for (j, edge) in q.edges.iter().enumerate() {
        for c in &edge.crossings {
            d2[(c.face, j)] += BigInt::from(c.sign as i64);
        }
    }
    d2
}

/// Reduction data for computing classes in `H_1`: a kernel basis of `d1` and
/// the Smith form of `d2` expressed in that basis.
pub struct H1Presentation {
    kernel: Vec<Vec<BigInt>>,
    kernel_snf: Snf,
    kernel_mat: IMat,
    relations_snf: Snf,
    /// Invariant factors of the relation matrix (length = kernel dim).
    moduli: Vec<BigInt>,
}

impl H1Presentation {
    pub fn new(tri: &IdealTriangulation, q: &QuotientComplex) -> H1Presentation {
        let d1 = boundary_one(tri, q);
        let d2 = boundary_two(tri, q);
        let kernel = exact::kernel_basis(&d1);
        let k = kernel.len();

        let mut kernel_mat = IMat::zeros(d1.cols, k);
        for (j, b) in kernel.iter().enumerate() {
            for (i, v) in b.iter().enumerate() {
                kernel_mat[(i, j)] = v.clone();
            }
        }
        let kernel_snf = exact::smith_normal_form(&kernel_mat);

        // Express the d2 columns in kernel coordinates (they are cycles).
        let mut rel = IMat::zeros(k, d2.cols);
        for j in 0..d2.cols {
            let col = d2.column(j);
            let coords = solve_in_kernel(&kernel_mat, &kernel_snf, &col)
                .expect("edge relation words are cycles");
            for (i, v) in coords.into_iter().enumerate() {
                rel[(i, j)] = v;
            }
        }
        let relations_snf = exact::smith_normal_form(&rel);
        let mut moduli = relations_snf.diag.clone();
        moduli.resize(k, BigInt::zero());

        H1Presentation {
            kernel,
            kernel_snf,
            kernel_mat,
            relations_snf,
            moduli,
        }
    }

    pub fn group(&self) -> AbelianGroup {
        let k = self.kernel.len();
        let r = self.relations_snf.rank;
        let torsion = self
            .moduli
            .iter()
            .take(r)
            .filter(|d| d.abs() > BigInt::from(1))
            .cloned()
            .collect();
        AbelianGroup {
            rank: k - r,
            torsion,
        }
    }

    /// Class of a 1-cycle given as a face-crossing vector. Returns `None`
    /// when the vector is not a cycle of the dual graph.
    pub fn class_of(&self, face_vec: &[i64]) -> Option<H1Class> {
        let col: Vec<BigInt> = face_vec.iter().map(|&v| BigInt::from(v)).collect();
        let coords = solve_in_kernel(&self.kernel_mat, &self.kernel_snf, &col)?;
        // Map to quotient coordinates through the left Smith transform.
        let k = self.kernel.len();
        let u = &self.relations_snf.u;
        let mut w = alloc::vec![BigInt::zero(); k];
        for i in 0..k {
            for j in 0..k {
                let p = &u[(i, j)] * &coords[j];
                w[i] += p;
            }
        }
        let r = self.relations_snf.rank;
        let mut torsion = Vec::new();
        for i in 0..r {
            let d = &self.moduli[i];
            if d.abs() > BigInt::from(1) {
                let m = ((&w[i] % d) + d) % d;
                torsion.push(m);
            }
        }
        let free = w[r..].to_vec();
        Some(H1Class { free, torsion })
    }
}

/// Coordinates of a class: free components and torsion residues, in the
/// order fixed by the presentation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct H1Class {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

impl H1Class {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(Zero::is_zero)
    }
}

/// Solves `K x = col` exactly over the integers using the Smith form of `K`;
/// `None` when no integer solution exists.
fn solve_in_kernel(k_mat: &IMat, snf: &Snf, col: &[BigInt]) -> Option<Vec<BigInt>> {
    let rows = k_mat.rows;
    let cols = k_mat.cols;
    // y = U col; then S z = y requires s_i | y_i and zero rows to vanish.
    let mut y = alloc::vec![BigInt::zero(); rows];
    for i in 0..rows {
        for j in 0..rows {
            let p = &snf.u[(i, j)] * &col[j];
            y[i] += p;
        }
    }
    let mut z = alloc::vec![BigInt::zero(); cols];
    for i in 0..rows {
        let s = if i < snf.diag.len() {
            snf.diag[i].clone()
        } else {
            BigInt::zero()
        };
        if s.is_zero() {
            if !y[i].is_zero() {
                return None;
            }
        } else if i < cols {
            let (q, rem) = num_integer::Integer::div_rem(&y[i], &s);
            if !rem.is_zero() {
                return None;
            }
            z[i] = q;
        } else if !y[i].is_zero() {
            return None;
        }
    }
    // x = V z.
    let mut x = alloc::vec![BigInt::zero(); cols];
    for i in 0..cols {
        for j in 0..cols {
            let p = &snf.v[(i, j)] * &z[j];
            x[i] += p;
        }
    }
    Some(x)
}
