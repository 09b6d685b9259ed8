//! Ideal triangulations as face-gluing tables.
//!
//! A triangulation is a set of `N` abstract tetrahedra, vertices labelled
//! `0..=3`, together with a fixed-point-free involution on the `4N`
//! `(tetrahedron, face)` slots. Faces are named by their opposite vertex:
//! face `f` of a tetrahedron is the triangle spanned by the three vertices
//! different from `f`. A gluing carries the full 4-vertex bijection obtained
//! by extending the affine map of the triangles with "opposite vertex goes to
//! opposite vertex"; storing the extension makes sign propagation and edge
//! chasing uniform.

use alloc::vec::Vec;
use core::fmt;

use crate::perm::Perm4;

/// A `(tetrahedron, face)` slot. `face` is the index of the opposite vertex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub tet: usize,
    pub face: u8,
}

impl Slot {
    pub fn new(tet: usize, face: u8) -> Slot {
        Slot { tet, face }
    }
}

impl fmt::Debug for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.tet, self.face)
    }
}

/// One side of a face identification: the target tetrahedron and the vertex
/// bijection from the source tetrahedron's labels to the target's.
///
/// The target face index is implied: it is `perm[source face]`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

/// Validation failures for gluing tables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TriError {
    /// A face is glued to the very same `(tet, face)` slot.
    SelfGluedFace { slot: Slot },
    /// Following a gluing and then its partner is not the identity.
    NotInvolution { slot: Slot },
    /// A gluing points at a tetrahedron index out of range.
    BadTargetTet { slot: Slot, target: usize },
    /// The triangulation has no tetrahedra.
    Empty,
    /// The triangulation is not connected.
    Disconnected,
    /// Sign propagation reached a contradiction: the triangulation does not
    /// admit a coherent orientation.
    NonOrientable,
    /// An operation required an ordered triangulation.
    NotOrdered,
    /// An operation required a single quotient vertex with torus link.
    NotOneCusp { vertices: usize },
    /// A supplied vertex relabelling does not make the gluings monotone.
    InvalidOrder,
    /// An edge index outside `0..n_edges`.
    InvalidEdgeIndex { index: usize, n_edges: usize },
    /// No primitive peripheral curve is null-homologous in the manifold.
    NoNullHomologousCurve,
}

impl fmt::Display for TriError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriError::SelfGluedFace { slot } => write!(f, "face {slot:?} is glued to itself"),
            TriError::NotInvolution { slot } => {
                write!(f, "gluing at {slot:?} is not matched by its partner")
            }
            TriError::BadTargetTet { slot, target } => {
                write!(f, "gluing at {slot:?} targets missing tetrahedron {target}")
            }
            TriError::Empty => write!(f, "triangulation has no tetrahedra"),
            TriError::Disconnected => write!(f, "triangulation is not connected"),
            TriError::NonOrientable => write!(f, "triangulation is not orientable"),
            TriError::NotOrdered => write!(f, "triangulation is not ordered"),
            TriError::NotOneCusp { vertices } => {
                write!(f, "expected one quotient vertex with torus link, found {vertices}")
            }
            TriError::InvalidOrder => write!(f, "relabelling does not order the triangulation"),
            TriError::InvalidEdgeIndex { index, n_edges } => {
                write!(f, "edge index {index} out of range (have {n_edges} edges)")
            }
            TriError::NoNullHomologousCurve => {
                write!(f, "no primitive peripheral curve is null-homologous")
            }
        }
    }
}

/// An ideal triangulation: `N` tetrahedra and a gluing per `(tet, face)`
/// slot. Immutable after construction; all operations are pure.
#[derive(Clone, PartialEq, Eq)]
pub struct IdealTriangulation {
    gluings: Vec<[Gluing; 4]>,
}

impl IdealTriangulation {
    /// Validates and wraps a gluing table.
    ///
    /// Checks that every gluing stays in range, that no face is glued to
    /// itself, that the table is an involution whose composed vertex
    /// bijections are the identity, and that the triangulation is connected.
    pub fn new(gluings: Vec<[Gluing; 4]>) -> Result<IdealTriangulation, TriError> {
        if gluings.is_empty() {
            return Err(TriError::Empty);
        }
        let n = gluings.len();
        for (t, row) in gluings.iter().enumerate() {
            for f in 0..4u8 {
                let g = &row[f as usize];
                let slot = Slot::new(t, f);
                if g.tet >= n {
                    return Err(TriError::BadTargetTet { slot, target: g.tet });
                }
                let tf = g.perm.apply(f);
                if g.tet == t && tf == f {
                    return Err(TriError::SelfGluedFace { slot });
                }
                let back = &gluings[g.tet][tf as usize];
                if back.tet != t || back.perm != g.perm.inverse() {
                    return Err(TriError::NotInvolution { slot });
                }
            }
        }
        let tri = IdealTriangulation { gluings };
        if !tri.is_connected() {
            return Err(TriError::Disconnected);
        }
        Ok(tri)
    }

    pub fn n_tetrahedra(&self) -> usize {
        self.gluings.len()
    }

    #[inline]
    pub fn gluing(&self, slot: Slot) -> &Gluing {
        &self.gluings[slot.tet][slot.face as usize]
    }

    /// The slot on the other side of a face identification.
    #[inline]
    pub fn partner(&self, slot: Slot) -> Slot {
        let g = self.gluing(slot);
        Slot::new(g.tet, g.perm.apply(slot.face))
    }

    pub fn gluing_rows(&self) -> &[[Gluing; 4]] {
        &self.gluings
    }

    fn is_connected(&self) -> bool {
        let n = self.gluings.len();
        let mut seen = alloc::vec![false; n];
        let mut stack = alloc::vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(t) = stack.pop() {
            for f in 0..4 {
                let u = self.gluings[t][f].tet;
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == n
    }

    /// Relabels tetrahedra by `tet_map` (old index to new index) and vertices
    /// of each tetrahedron by `vertex_maps[old index]`. Produces an isomorphic
    /// triangulation.
    pub fn relabel(&self, tet_map: &[usize], vertex_maps: &[Perm4]) -> IdealTriangulation {
        let n = self.n_tetrahedra();
        debug_assert_eq!(tet_map.len(), n);
        debug_assert_eq!(vertex_maps.len(), n);
        let mut rows = alloc::vec![[Gluing { tet: 0, perm: Perm4::IDENTITY }; 4]; n];
        for t in 0..n {
            let pi = &vertex_maps[t];
            for f in 0..4u8 {
                let g = &self.gluings[t][f as usize];
                let new_perm = vertex_maps[g.tet].compose(&g.perm).compose(&pi.inverse());
                rows[tet_map[t]][pi.apply(f) as usize] = Gluing {
                    tet: tet_map[g.tet],
                    perm: new_perm,
                };
            }
        }
        IdealTriangulation { gluings: rows }
    }

    /// Builds a triangulation from one gluing per unordered slot pair; the
    /// partner entries are filled in with the inverse bijections.
    ///
    /// Convenient for writing fixtures: list each face identification once as
    /// `(slot, target tet, vertex bijection)`.
    pub fn from_pairs(
        n: usize,
        pairs: &[(Slot, usize, Perm4)],
    ) -> Result<IdealTriangulation, TriError> {
        let hole = Gluing {
            tet: usize::MAX,
            perm: Perm4::IDENTITY,
        };
        let mut rows = alloc::vec![[hole; 4]; n];
        for &(slot, tet, perm) in pairs {
            rows[slot.tet][slot.face as usize] = Gluing { tet, perm };
            let back = Slot::new(tet, perm.apply(slot.face));
            rows[back.tet][back.face as usize] = Gluing {
                tet: slot.tet,
                perm: perm.inverse(),
            };
        }
        for (t, row) in rows.iter().enumerate() {
            for (f, g) in row.iter().enumerate() {
                if g.tet == usize::MAX {
                    return Err(TriError::NotInvolution {
                        slot: Slot::new(t, f as u8),
                    });
                }
            }
        }
        IdealTriangulation::new(rows)
    }
}

impl fmt::Debug for IdealTriangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IdealTriangulation (N = {})", self.n_tetrahedra())?;
        for (t, row) in self.gluings.iter().enumerate() {
            write!(f, "  {t}:")?;
            for (face, g) in row.iter().enumerate() {
                write!(
                    f,
                    " {face}->{}:{}{:?}",
                    g.tet,
                    g.perm.apply(face as u8),
                    g.perm
                )?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The six edges of a tetrahedron as ordered vertex pairs `(a, b)` with
/// `a < b`, in the fixed enumeration order `01, 02, 03, 12, 13, 23`.
pub const TET_EDGES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index of the edge `(a, b)` (unordered) in [`TET_EDGES`].
pub fn edge_index(a: u8, b: u8) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    TET_EDGES.iter().position(|&e| e == (a, b)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;

    #[test]
    fn fig8_is_valid() {
        let tri = sample::figure_eight();
        assert_eq!(tri.n_tetrahedra(), 2);
        for t in 0..2 {
            for f in 0..4u8 {
                let s = Slot::new(t, f);
                assert_eq!(tri.partner(tri.partner(s)), s);
            }
        }
    }

    #[test]
    fn broken_involution_is_rejected() {
        let tri = sample::figure_eight();
        let mut rows: Vec<[Gluing; 4]> = tri.gluing_rows().to_vec();
        // Tamper with one bijection without fixing its partner.
        rows[0][0].perm = Perm4([2, 0, 3, 1]);
        assert!(matches!(
            IdealTriangulation::new(rows),
            Err(TriError::NotInvolution { .. })
        ));
    }

    #[test]
    fn self_glued_face_is_rejected() {
        // A single tetrahedron with face 0 glued to itself by the identity on
        // the other faces is impossible; use a perm fixing face 0.
        let g = |tet, perm| Gluing { tet, perm };
        let rows = alloc::vec![[
            g(0, Perm4([0, 1, 2, 3])),
            g(0, Perm4([0, 1, 2, 3])),
            g(0, Perm4([0, 1, 2, 3])),
            g(0, Perm4([0, 1, 2, 3])),
        ]];
        assert!(matches!(
            IdealTriangulation::new(rows),
            Err(TriError::SelfGluedFace { .. })
        ));
    }

    #[test]
    fn relabel_is_isomorphism() {
        let tri = sample::figure_eight();
        let swapped = tri.relabel(&[1, 0], &[Perm4([1, 0, 3, 2]), Perm4([0, 2, 1, 3])]);
        // Valid table again.
        assert!(IdealTriangulation::new(swapped.gluing_rows().to_vec()).is_ok());
    }
}
