//! Quotient cells of an ideal triangulation: vertex classes, the `2N`
//! quotient faces, and the `N` quotient edges with their cyclic incidence
//! walks.

use alloc::vec;
use alloc::vec::Vec;

use crate::tri::{edge_index, IdealTriangulation, Slot, TriError};

/// One tetrahedron-edge incidence of a quotient edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeIncidence {
    pub tet: usize,
    /// Edge endpoints in the orientation of the quotient edge class:
    /// the edge runs `ends.0 -> ends.1` inside `tet`.
    pub ends: (u8, u8),
}

impl EdgeIncidence {
    /// `+1` if the class orientation agrees with the increasing-label
    /// direction of the tetrahedron edge, `-1` otherwise.
    pub fn orientation(&self) -> i8 {
        if self.ends.0 < self.ends.1 {
            1
        } else {
            -1
        }
    }
}

/// A face crossing made while walking around a quotient edge: the walk
/// leaves a tetrahedron through `out_slot`, which belongs to quotient face
/// `face`; `sign` is `+1` when the crossing agrees with the face's dual
/// orientation (from its first slot towards its second).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceCrossing {
    pub face: usize,
    pub out_slot: Slot,
    pub sign: i8,
}

/// A quotient edge: its incidences in cyclic walk order and the face
/// crossings between consecutive incidences.
#[derive(Clone, Debug)]
pub struct QuotientEdge {
    pub incidences: Vec<EdgeIncidence>,
    pub crossings: Vec<FaceCrossing>,
}

impl QuotientEdge {
    pub fn degree(&self) -> usize {
        self.incidences.len()
    }
}

/// A quotient face: the two glued slots, ordered so `slots[0] < slots[1]`
/// except for the (valid) case of a face glued to another face of the same
/// tetrahedron, where the order is still by slot. The dual edge is oriented
/// from `slots[0].tet` to `slots[1].tet`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuotientFace {
    pub slots: [Slot; 2],
}

/// Quotient cells of a triangulation. Faces are indexed by their smaller
/// slot in `(tet, face)` order; edges are indexed in order of discovery when
/// scanning tetrahedron edges `(tet, 01, 02, 03, 12, 13, 23)`.
#[derive(Clone, Debug)]
pub struct QuotientComplex {
    pub edges: Vec<QuotientEdge>,
    pub faces: Vec<QuotientFace>,
    pub n_vertices: usize,
    face_of_slot: Vec<[usize; 4]>,
    edge_of: Vec<[usize; 6]>,
    edge_dir: Vec<[i8; 6]>,
}

impl QuotientComplex {
    /// Index of the quotient face containing a slot.
    pub fn face_of(&self, slot: Slot) -> usize {
        self.face_of_slot[slot.tet][slot.face as usize]
    }

    /// Index of the quotient edge containing tetrahedron edge `(a, b)`.
    pub fn edge_of(&self, tet: usize, a: u8, b: u8) -> usize {
        self.edge_of[tet][edge_index(a, b)]
    }

    /// `+1` if the quotient edge orientation runs from `min(a,b)` to
    /// `max(a,b)` on this incidence.
    pub fn edge_dir(&self, tet: usize, a: u8, b: u8) -> i8 {
        self.edge_dir[tet][edge_index(a, b)]
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Checks the one-cusped requirement: exactly one quotient vertex.
    pub fn require_one_vertex(&self) -> Result<(), TriError> {
        if self.n_vertices == 1 {
            Ok(())
        } else {
            Err(TriError::NotOneCusp {
                vertices: self.n_vertices,
            })
        }
    }
}

/// Computes quotient vertices, faces and edges.
///
/// Edges are found by walking around each unvisited tetrahedron edge: from an
/// incidence the walk exits through one of the two flanking faces, the gluing
/// carries the edge to the next tetrahedron, and the walk closes up after
/// `degree` crossings. Orientation is tracked through the vertex bijections,
/// so each incidence records the class orientation on its tetrahedron edge.
pub fn quotient_cells(tri: &IdealTriangulation) -> QuotientComplex {
    let n = tri.n_tetrahedra();

    // Faces: one per unordered slot pair, indexed by smaller slot.
    let mut faces = Vec::with_capacity(2 * n);
    let mut face_of_slot = vec![[usize::MAX; 4]; n];
    for t in 0..n {
        for f in 0..4u8 {
            let s = Slot::new(t, f);
            if face_of_slot[t][f as usize] != usize::MAX {
                continue;
            }
            let p = tri.partner(s);
            let idx = faces.len();
            faces.push(QuotientFace { slots: [s, p] });
            face_of_slot[s.tet][s.face as usize] = idx;
            face_of_slot[p.tet][p.face as usize] = idx;
        }
    }

    // Vertices: union-find over (tet, vertex).
    let mut parent: Vec<usize> = (0..4 * n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for t in 0..n {
        for f in 0..4u8 {
            let g = tri.gluing(Slot::new(t, f));
            for v in 0..4u8 {
                if v == f {
                    continue;
                }
                let a = find(&mut parent, 4 * t + v as usize);
                let b = find(&mut parent, 4 * g.tet + g.perm.apply(v) as usize);
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut n_vertices = 0;
    for x in 0..4 * n {
        if find(&mut parent, x) == x {
            n_vertices += 1;
        }
    }

    // Edges: cyclic walks.
    let mut edge_of = vec![[usize::MAX; 6]; n];
    let mut edge_dir = vec![[0i8; 6]; n];
    let mut edges = Vec::new();
    for t0 in 0..n {
        for e0 in 0..6 {
            if edge_of[t0][e0] != usize::MAX {
                continue;
            }
            let idx = edges.len();
            let (a0, b0) = crate::tri::TET_EDGES[e0];
            let mut incidences = Vec::new();
            let mut crossings = Vec::new();

            // Current incidence, in class orientation (tail -> head), and the
            // face we entered through (exit through the other flanking face).
            let mut tet = t0;
            let mut tail = a0;
            let mut head = b0;
            let mut entered: Option<u8> = None;
            loop {
                let ei = edge_index(tail, head);
                edge_of[tet][ei] = idx;
                edge_dir[tet][ei] = if tail < head { 1 } else { -1 };
                incidences.push(EdgeIncidence {
                    tet,
                    ends: (tail, head),
                });

                // Flanking faces are opposite the two vertices off the edge.
                let mut flank = [0u8; 2];
                let mut k = 0;
                for u in 0..4u8 {
                    if u != tail && u != head {
                        flank[k] = u;
                        k += 1;
                    }
                }
                let exit = match entered {
                    None => flank[0],
                    Some(came) => {
                        if flank[0] == came {
                            flank[1]
                        } else {
                            flank[0]
                        }
                    }
                };

                let out_slot = Slot::new(tet, exit);
                let face = face_of_slot[tet][exit as usize];
                let sign = if faces[face].slots[0] == out_slot { 1 } else { -1 };
                crossings.push(FaceCrossing {
                    face,
                    out_slot,
                    sign,
                });

                let g = tri.gluing(out_slot);
                let nt = g.tet;
                let ntail = g.perm.apply(tail);
                let nhead = g.perm.apply(head);
                let ncame = g.perm.apply(exit);
                // Close up only on an orientation-exact return. A return with
                // reversed ends means the edge link reverses the edge (a
                // non-orientable configuration); the walk then continues and
                // covers the link twice, and sign propagation downstream
                // reports NonOrientable.
                if nt == t0 && (ntail, nhead) == (a0, b0) {
                    break;
                }
                if incidences.len() > 12 * n {
                    // Cannot happen for a valid involution; bail out rather
                    // than loop forever on corrupted input.
                    break;
                }
                tet = nt;
                tail = ntail;
                head = nhead;
                entered = Some(ncame);
            }
            edges.push(QuotientEdge {
                incidences,
                crossings,
            });
        }
    }

    QuotientComplex {
        edges,
        faces,
        n_vertices,
        face_of_slot,
        edge_of,
        edge_dir,
    }
}
