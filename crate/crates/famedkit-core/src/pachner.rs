//! Pachner 2-3 and 3-2 moves on ideal triangulations, and the bounded
//! breadth-first search of the retriangulation graph for a triangulation
//! admitting a FAMED order with certified geometric structure.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::angles::angle_structure_feasible;
use crate::cusp::CuspTriangulation;
use crate::face_matrices::FaceMatrices;
use crate::famed::{famed_check, FamedReport};
use crate::geometry::{certify_solution, solve_system, CompletenessSystem, ShapeVector};
use crate::nz::neumann_zagier;
use crate::ordering::{apply_order, enumerate_orders, Order};
use crate::perm::Perm4;
use crate::quotient;
use crate::signature::canonical_signature;
use crate::tri::{Gluing, IdealTriangulation, Slot};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MoveError {
    /// The 2-3 move needs the face's two sides in distinct tetrahedra.
    FaceInSingleTetrahedron { face: usize },
    /// The 3-2 move needs a quotient edge of degree exactly three.
    EdgeNotDegreeThree { edge: usize, degree: usize },
    /// The 3-2 move needs three pairwise distinct tetrahedra around the
    /// edge.
    RepeatedTetrahedronAroundEdge { edge: usize },
    /// Index out of range.
    BadCellIndex { index: usize },
}

/// The move applied at one search step.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Move {
    /// 2-3 move on a quotient face index.
    TwoThree(usize),
    /// 3-2 move on a quotient edge index.
    ThreeTwo(usize),
}

/// Uniform bookkeeping while rebuilding a gluing table: where an old
/// boundary slot went, and the label map from the old tetrahedron into the
/// new one.
struct SlotImage {
    slot: Slot,
    relabel: Perm4,
}

fn rebuild(
    tri: &IdealTriangulation,
    removed: &[usize],
    n_new: usize,
    image_of: impl Fn(Slot) -> Option<SlotImage>,
    internal: &[(Slot, Slot, Perm4)],
) -> IdealTriangulation {
    let n_old = tri.n_tetrahedra();
    // Old untouched tetrahedra keep their relative order, then new ones.
    let mut new_index = vec![usize::MAX; n_old];
    let mut next = 0;
    for t in 0..n_old {
        if !removed.contains(&t) {
            new_index[t] = next;
            next += 1;
        }
    }
    let hole = Gluing {
        tet: usize::MAX,
        perm: Perm4::IDENTITY,
    };
    let mut rows = vec![[hole; 4]; n_new];

    // Map any old slot to its new location.
    let locate = |s: Slot| -> (Slot, Perm4) {
        match image_of(s) {
            Some(im) => (im.slot, im.relabel),
            None => {
                debug_assert!(!removed.contains(&s.tet));
                (Slot::new(new_index[s.tet], s.face), Perm4::IDENTITY)
            }
        }
    };

    // Rewire every surviving old gluing.
    for t in 0..n_old {
        for f in 0..4u8 {
            let s = Slot::new(t, f);
            if removed.contains(&t) && image_of(s).is_none() {
                continue; // an interior slot of the replaced region
            }
            let g = tri.gluing(s);
            let partner = Slot::new(g.tet, g.perm.apply(f));
            if removed.contains(&partner.tet) && image_of(partner).is_none() {
                continue;
            }
            let (ns, phi_s) = locate(s);
            let (np, phi_p) = locate(partner);
            let perm = phi_p.compose(&g.perm).compose(&phi_s.inverse());
            rows[ns.tet][ns.face as usize] = Gluing {
                tet: np.tet,
                perm,
            };
        }
    }
    // Internal gluings of the replacement region.
    for &(a, b, perm) in internal {
        rows[a.tet][a.face as usize] = Gluing { tet: b.tet, perm };
        rows[b.tet][b.face as usize] = Gluing {
            tet: a.tet,
            perm: perm.inverse(),
        };
    }

    IdealTriangulation::new(rows).expect("Pachner move produced a valid gluing table")
}

/// Replaces the two tetrahedra adjacent along a quotient face by three
/// around a new edge joining the two opposite vertices.
pub fn two_three_move(
    tri: &IdealTriangulation,
    face: usize,
) -> Result<IdealTriangulation, MoveError> {
    let q = quotient::quotient_cells(tri);
    let Some(qface) = q.faces.get(face) else {
        return Err(MoveError::BadCellIndex { index: face });
    };
    let [sa, sb] = qface.slots;
    if sa.tet == sb.tet {
        return Err(MoveError::FaceInSingleTetrahedron { face });
    }
    let (a_tet, f_a) = (sa.tet, sa.face);
    let b_tet = sb.tet;
    let sigma = tri.gluing(sa).perm;

    // Face vertices of the A side, sorted.
    let mut ps = [0u8; 3];
    let mut k = 0;
    for v in 0..4u8 {
        if v != f_a {
            ps[k] = v;
            k += 1;
        }
    }

    let n_old = tri.n_tetrahedra();
    let base = n_old - 2; // index of NT_0 after reindexing
    // Label maps: old A/B labels into NT_i (vertices 0 = apex_a,
    // 1 = apex_b, 2 = p_{i+1}, 3 = p_{i+2}).
    let phi_a = |i: usize| -> Perm4 {
        let mut img = [0u8; 4];
        img[f_a as usize] = 0;
        img[ps[i] as usize] = 1;
        img[ps[(i + 1) % 3] as usize] = 2;
        img[ps[(i + 2) % 3] as usize] = 3;
        Perm4(img)
    };
    let phi_b = |i: usize| -> Perm4 {
        let mut img = [0u8; 4];
        img[sigma.apply(f_a) as usize] = 1;
        img[sigma.apply(ps[i]) as usize] = 0;
        img[sigma.apply(ps[(i + 1) % 3]) as usize] = 2;
        img[sigma.apply(ps[(i + 2) % 3]) as usize] = 3;
        Perm4(img)
    };

    let image_of = move |s: Slot| -> Option<SlotImage> {
        if s.tet == a_tet && s.face != f_a {
            let i = ps.iter().position(|&p| p == s.face).unwrap();
            return Some(SlotImage {
                slot: Slot::new(base + i, 1),
                relabel: phi_a(i),
            });
        }
        if s.tet == b_tet {
            let fb = sigma.apply(f_a);
            if s.face != fb {
                let i = (0..3)
                    .find(|&i| sigma.apply(ps[i]) == s.face)
                    .expect("face of B is the image of a face vertex");
                return Some(SlotImage {
                    slot: Slot::new(base + i, 0),
                    relabel: phi_b(i),
                });
            }
        }
        None
    };

    // Internal faces: NT_i's face 2 meets NT_{i+1}'s face 3 with the swap
    // of the last two labels.
    let internal: Vec<(Slot, Slot, Perm4)> = (0..3)
        .map(|i| {
            (
                Slot::new(base + i, 2),
                Slot::new(base + (i + 1) % 3, 3),
                Perm4([0, 1, 3, 2]),
            )
        })
        .collect();

    Ok(rebuild(
        tri,
        &[a_tet, b_tet],
        n_old + 1,
        image_of,
        &internal,
    ))
}

/// Collapses three tetrahedra around a degree-three edge into two glued
/// along the equatorial face.
pub fn three_two_move(
    tri: &IdealTriangulation,
    edge: usize,
) -> Result<IdealTriangulation, MoveError> {
    let q = quotient::quotient_cells(tri);
    let Some(qedge) = q.edges.get(edge) else {
        return Err(MoveError::BadCellIndex { index: edge });
    };
    if qedge.degree() != 3 {
        return Err(MoveError::EdgeNotDegreeThree {
            edge,
            degree: qedge.degree(),
        });
    }
    let tets: Vec<usize> = qedge.incidences.iter().map(|i| i.tet).collect();
    if tets[0] == tets[1] || tets[1] == tets[2] || tets[0] == tets[2] {
        return Err(MoveError::RepeatedTetrahedronAroundEdge { edge });
    }

    // Around the edge: incidence m lives in t_m with the edge running
    // tail_m -> head_m; crossing m leads from t_m to t_{m+1} through the
    // face opposite exit_m. The remaining vertex w_m of that face is the
    // equator vertex E_m shared with the next tetrahedron.
    let mut tails = [0u8; 3];
    let mut heads = [0u8; 3];
    let mut exits = [0u8; 3];
    let mut w = [0u8; 3];
    for m in 0..3 {
        tails[m] = qedge.incidences[m].ends.0;
        heads[m] = qedge.incidences[m].ends.1;
        exits[m] = qedge.crossings[m].out_slot.face;
        // w_m: the vertex of t_m that is neither on the edge nor the exit.
        w[m] = (0..4u8)
            .find(|&v| v != tails[m] && v != heads[m] && v != exits[m])
            .unwrap();
    }
    // Equator label of E_j inside t_m: E_m carries label w_m in t_m and
    // sigma_m(w_m) in t_{m+1}; so t_m sees E_m as w_m and E_{m-1} as the
    // image of w_{m-1} under the crossing gluing, which is its exit vertex.
    let eq_label = |m: usize, j: usize| -> u8 {
        if j == m {
            w[m]
        } else {
            debug_assert_eq!((j + 1) % 3, m);
            exits[m]
        }
    };

    let n_old = tri.n_tetrahedra();
    let base = n_old - 3;
    let top = base; // apex = head
    let bot = base + 1; // apex = tail

    // Label maps into TOP/BOT: vertex 0 = apex, 1 + j = equator E_j.
    // The slot (t_m, opposite tail_m) maps into TOP, its mirror into BOT.
    let to_new = move |m: usize, is_top: bool| -> Perm4 {
        let mut img = [0u8; 4];
        let (apex, other) = if is_top {
            (heads[m], tails[m])
        } else {
            (tails[m], heads[m])
        };
        img[apex as usize] = 0;
        // The missing equator index in t_m is m + 1.
        img[other as usize] = 1 + ((m + 1) % 3) as u8;
        img[eq_label(m, m) as usize] = 1 + m as u8;
        img[eq_label(m, (m + 2) % 3) as usize] = 1 + ((m + 2) % 3) as u8;
        Perm4(img)
    };

    let tets_for_closure = tets.clone();
    let image_of = move |s: Slot| -> Option<SlotImage> {
        let m = tets_for_closure.iter().position(|&t| t == s.tet)?;
        if s.face == tails[m] {
            // face opposite the tail contains the head: the TOP cap
            Some(SlotImage {
                slot: Slot::new(top, 1 + ((m + 1) % 3) as u8),
                relabel: to_new(m, true),
            })
        } else if s.face == heads[m] {
            Some(SlotImage {
                slot: Slot::new(bot, 1 + ((m + 1) % 3) as u8),
                relabel: to_new(m, false),
            })
        } else {
            None // an interior face around the collapsing edge
        }
    };

    // The central face: TOP's face 0 against BOT's face 0, equators fixed,
    // apexes exchanged.
    let internal = [(Slot::new(top, 0), Slot::new(bot, 0), Perm4::IDENTITY)];

    Ok(rebuild(tri, &tets, n_old - 1, image_of, &internal))
}

/// Search bounds. `max_extra_tets` is the paper's retriangulation depth: an
/// upper bound on tetrahedra above the starting size.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub max_extra_tets: usize,
    pub max_nodes: usize,
}

impl SearchBudget {
    pub fn with_depth(max_extra_tets: usize) -> SearchBudget {
        SearchBudget {
            max_extra_tets,
            max_nodes: 1_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub triangulation: IdealTriangulation,
    pub order: Order,
    pub famed_report: FamedReport,
    pub shapes: ShapeVector,
    pub certified_geometric: bool,
    pub path: Vec<Move>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchStats {
    pub nodes_visited: usize,
    pub frontier_size: usize,
    pub stopped_early: bool,
}

#[derive(Debug)]
pub struct SearchOutcome {
    pub result: Option<SearchResult>,
    pub stats: SearchStats,
}

/// Breadth-first search over 3-2/2-3 moves (shrinking moves expanded
/// first), deduplicated by canonical signature, looking for a triangulation
/// with a FAMED order that is certified geometric.
///
/// `should_stop` is polled between nodes so callers can impose wall-clock
/// limits; stopping early is reported in the stats.
pub fn search_famed_geometric(
    tri: &IdealTriangulation,
    budget: &SearchBudget,
    mut should_stop: impl FnMut() -> bool,
) -> SearchOutcome {
    let max_tets = tri.n_tetrahedra() + budget.max_extra_tets;
    let mut visited = BTreeSet::new();
    let mut queue: VecDeque<(IdealTriangulation, Vec<Move>)> = VecDeque::new();
    let mut stats = SearchStats::default();

    visited.insert(canonical_signature(tri).text);
    queue.push_back((tri.clone(), Vec::new()));

    while let Some((node, path)) = queue.pop_front() {
        if stats.nodes_visited >= budget.max_nodes || should_stop() {
            stats.stopped_early = true;
            stats.frontier_size = queue.len() + 1;
            return SearchOutcome {
                result: None,
                stats,
            };
        }
        stats.nodes_visited += 1;

        if let Some(result) = inspect_node(&node, &path) {
            stats.frontier_size = queue.len();
            return SearchOutcome {
                result: Some(result),
                stats,
            };
        }

        // Expand: 3-2 moves by edge index first, then 2-3 by face index.
        let q = quotient::quotient_cells(&node);
        for e in 0..q.edges.len() {
            if let Ok(next) = three_two_move(&node, e) {
                push_if_new(&mut visited, &mut queue, next, &path, Move::ThreeTwo(e));
            }
        }
        if node.n_tetrahedra() < max_tets {
            for f in 0..q.faces.len() {
                if let Ok(next) = two_three_move(&node, f) {
                    push_if_new(&mut visited, &mut queue, next, &path, Move::TwoThree(f));
                }
            }
        }
    }

    stats.frontier_size = 0;
    SearchOutcome {
        result: None,
        stats,
    }
}

fn push_if_new(
    visited: &mut BTreeSet<alloc::string::String>,
    queue: &mut VecDeque<(IdealTriangulation, Vec<Move>)>,
    next: IdealTriangulation,
    path: &[Move],
    mv: Move,
) {
    let sig = canonical_signature(&next).text;
    if visited.insert(sig) {
        let mut p = path.to_vec();
        p.push(mv);
        queue.push_back((next, p));
    }
}

/// Runs the per-node pipeline: enumerate orders, check FAMED for each, and
/// certify geometricity once a FAMED order is found.
///
/// The angle gate, the homology machinery and the preferred longitude are
/// computed once per node (on the first ordered labelling) and the
/// longitude is transported to the other labellings; FAMED status does not
/// depend on the representative, so this only skips redundant exact linear
/// algebra.
fn inspect_node(node: &IdealTriangulation, path: &[Move]) -> Option<SearchResult> {
    let orders = enumerate_orders(node);
    if orders.is_empty() {
        return None;
    }

    let first = apply_order(node, &orders[0]).expect("enumerated order is valid");
    let Ok(first_cusp) = CuspTriangulation::new(&first) else {
        return None;
    };
    let Ok(longitude0) = crate::cusp::preferred_longitude(&first, &first_cusp) else {
        return None;
    };
    // The angle gate is order-independent and its exact LP is the priciest
    // combinatorial step, so it runs lazily, only once an order passes the
    // integer matrix conditions.
    let mut angle_gate: Option<bool> = None;

    for order in &orders {
        let ordered = apply_order(node, order).expect("enumerated order is valid");
        let Ok(cusp) = CuspTriangulation::new(&ordered) else {
            return None;
        };
        let relabel: Vec<crate::perm::Perm4> = order
            .perms
            .iter()
            .zip(&orders[0].perms)
            .map(|(pk, p0)| pk.compose(&p0.inverse()))
            .collect();
        let longitude = crate::cusp::transport_curve(&first_cusp, &cusp, &relabel, &longitude0);
        let Ok(face) = FaceMatrices::compute(&ordered) else {
            continue;
        };
        let dropped = cusp.quotient.n_edges() - 1;
        let Ok(nz) = neumann_zagier(&cusp, &longitude, dropped) else {
            continue;
        };
        if !crate::famed::famed_status(&face, &nz, true) {
            continue;
        }
        let angles_ok = *angle_gate.get_or_insert_with(|| {
            angle_structure_feasible(&first)
                .map(|w| w.is_some())
                .unwrap_or(false)
        });
        if !angles_ok {
            return None;
        }
        // FAMED order found: build the full report, then run the expensive
        // certified solve.
        let report = famed_check(&face, &nz, angles_ok);
        debug_assert!(report.famed);
        let Ok(system) = CompletenessSystem::new(&ordered, &cusp) else {
            continue;
        };
        let Ok(solved) = solve_system(&system) else {
            continue;
        };
        let certified = certify_solution(&system, &solved)
            .map(|c| c.geometric())
            .unwrap_or(false);
        if certified {
            return Some(SearchResult {
                triangulation: ordered,
                order: order.clone(),
                famed_report: report,
                shapes: solved.shapes,
                certified_geometric: true,
                path: path.to_vec(),
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::homology_h1;
    use crate::sample;

    #[test]
    fn fig8_two_three_then_three_two_round_trips() {
        let tri = sample::figure_eight();
        let sig = canonical_signature(&tri);
        for f in 0..4 {
            let bigger = two_three_move(&tri, f).unwrap();
            assert_eq!(bigger.n_tetrahedra(), 3);
            assert_eq!(homology_h1(&bigger), homology_h1(&tri));
            let q = quotient::quotient_cells(&bigger);
            assert_eq!(q.n_vertices, 1);
            // The new central edge has degree 3; find it and undo.
            let mut undone = None;
            for e in 0..q.edges.len() {
                if let Ok(smaller) = three_two_move(&bigger, e) {
                    if canonical_signature(&smaller) == sig {
                        undone = Some(smaller);
                        break;
                    }
                }
            }
            assert!(undone.is_some(), "3-2 undoes the 2-3 move on face {f}");
        }
    }

    #[test]
    fn move_errors() {
        let tri = sample::figure_eight();
        // Both edges have degree 6.
        assert!(matches!(
            three_two_move(&tri, 0),
            Err(MoveError::EdgeNotDegreeThree { degree: 6, .. })
        ));
        assert!(matches!(
            three_two_move(&tri, 7),
            Err(MoveError::BadCellIndex { .. })
        ));
    }

    #[test]
    fn fig8_search_succeeds_at_root() {
        let tri = sample::figure_eight();
        let out = search_famed_geometric(&tri, &SearchBudget::with_depth(0), || false);
        let res = out.result.expect("figure-eight is FAMED at the root");
        assert!(res.path.is_empty());
        assert!(res.certified_geometric);
        assert_eq!(out.stats.nodes_visited, 1);
    }

    #[test]
    fn budget_exhaustion_reports_stats() {
        let tri = sample::figure_eight();
        // Forbid any FAMED hit by stopping immediately.
        let out = search_famed_geometric(
            &tri,
            &SearchBudget {
                max_extra_tets: 1,
                max_nodes: 0,
            },
            || false,
        );
        assert!(out.result.is_none());
        assert!(out.stats.stopped_early);
    }
}
