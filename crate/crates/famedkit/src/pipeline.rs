//! The per-triangulation analysis shared by `check` and `census`: order
//! enumeration, FAMED checks, geometricity, invertibility diagnostics and
//! the optional retriangulation search.

use std::time::{Duration, Instant};

use famedkit_core::angles::angle_structure_feasible;
use famedkit_core::cusp::CuspTriangulation;
use famedkit_core::face_matrices::FaceMatrices;
use famedkit_core::famed::{famed_check, FamedReport};
use famedkit_core::geometry::{
    certify_solution, solve_system, volume, CompletenessSystem, GeomError, ShapeVector,
};
use famedkit_core::nz::{neumann_zagier, NZMatrices};
use famedkit_core::ordering::{apply_order, enumerate_orders, Order};
use famedkit_core::pachner::{search_famed_geometric, SearchBudget, SearchOutcome};
use famedkit_core::tri::IdealTriangulation;

use crate::report::GeometricStatus;

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    /// Check every order (otherwise stop at the first FAMED one).
    pub all_orders: bool,
    /// Re-run the FAMED identity for every choice of dropped edge.
    pub scan_dropped_edges: bool,
    /// Skip interval certification.
    pub numeric_only: bool,
}

pub struct OrderAnalysis {
    pub order: Order,
    pub report: FamedReport,
    pub nz: NZMatrices,
    /// Per dropped-edge identity outcome, when the scan was requested.
    pub dropped_edge_scan: Option<Vec<(usize, bool)>>,
}

pub struct Analysis {
    pub n_tetrahedra: usize,
    pub n_orders: usize,
    pub n_famed_orders: Option<usize>,
    pub orders: Vec<OrderAnalysis>,
    pub first_famed: Option<usize>,
    pub geometric: GeometricStatus,
    pub shapes: Option<ShapeVector>,
    pub volume: Option<f64>,
    pub solve_error: Option<GeomError>,
    pub conjecture_violations: usize,
}

/// Runs orders + FAMED + geometry on one triangulation.
pub fn analyze(tri: &IdealTriangulation, opts: &CheckOptions) -> Analysis {
    let orders = enumerate_orders(tri);
    let n_orders = orders.len();
    let mut out = Analysis {
        n_tetrahedra: tri.n_tetrahedra(),
        n_orders,
        n_famed_orders: None,
        orders: Vec::new(),
        first_famed: None,
        geometric: GeometricStatus::None,
        shapes: None,
        volume: None,
        solve_error: None,
        conjecture_violations: 0,
    };
    if n_orders == 0 {
        out.n_famed_orders = Some(0);
        return out;
    }

    let mut angle_gate: Option<bool> = None;
    let mut famed_count = 0usize;
    let mut checked_all = true;
    for (idx, order) in orders.iter().enumerate() {
        let ordered = apply_order(tri, order).expect("enumerated order is valid");
        let Ok(cusp) = CuspTriangulation::new(&ordered) else {
            checked_all = false;
            break;
        };
        let angles_ok = *angle_gate.get_or_insert_with(|| {
            angle_structure_feasible(&ordered)
                .map(|w| w.is_some())
                .unwrap_or(false)
        });
        let Ok(system) = CompletenessSystem::new(&ordered, &cusp) else {
            checked_all = false;
            break;
        };
        let Ok(face) = FaceMatrices::compute(&ordered) else {
            checked_all = false;
            break;
        };
        let dropped = cusp.quotient.n_edges() - 1;
        let Ok(nz) = neumann_zagier(&cusp, &system.longitude, dropped) else {
            checked_all = false;
            break;
        };
        let report = famed_check(&face, &nz, angles_ok);
        if report.diagnostics.violates_expected_pattern() {
            out.conjecture_violations += 1;
        }
        let famed = report.famed;
        if famed {
            famed_count += 1;
            if out.first_famed.is_none() {
                out.first_famed = Some(idx);
            }
        }

        let scan = if opts.scan_dropped_edges {
            let mut per_edge = Vec::new();
            for e in 0..cusp.quotient.n_edges() {
                let nz_e = neumann_zagier(&cusp, &system.longitude, e)
                    .expect("edge index in range");
                let rep = famed_check(&face, &nz_e, angles_ok);
                per_edge.push((e, rep.identity_holds));
            }
            Some(per_edge)
        } else {
            None
        };

        out.orders.push(OrderAnalysis {
            order: order.clone(),
            report,
            nz,
            dropped_edge_scan: scan,
        });

        if !opts.all_orders && famed {
            checked_all = idx + 1 == n_orders;
            break;
        }
    }
    if checked_all {
        out.n_famed_orders = Some(famed_count);
    } else if famed_count > 0 && out.first_famed.is_some() && !opts.all_orders {
        // Early stop: the count is a lower bound, leave it unset.
        out.n_famed_orders = None;
    }

    // Geometry on the first ordered triangulation.
    if let Some(first) = orders.first() {
        let ordered = apply_order(tri, first).expect("enumerated order is valid");
        if let Ok(cusp) = CuspTriangulation::new(&ordered) {
            if let Ok(system) = CompletenessSystem::new(&ordered, &cusp) {
                match solve_system(&system) {
                    Ok(solved) => {
                        let positive = solved.shapes.min_im() > 1e-8;
                        if positive {
                            out.volume = volume(&solved.shapes).ok();
                        }
                        out.geometric = if opts.numeric_only {
                            if positive {
                                GeometricStatus::NumericOnly
                            } else {
                                GeometricStatus::None
                            }
                        } else {
                            match certify_solution(&system, &solved) {
                                Ok(cert) if cert.geometric() => GeometricStatus::Certified,
                                // Fall back to the numeric answer, clearly
                                // labelled as such.
                                _ if positive => GeometricStatus::NumericOnly,
                                _ => GeometricStatus::None,
                            }
                        };
                        out.shapes = Some(solved.shapes);
                    }
                    Err(e) => {
                        out.solve_error = Some(e);
                    }
                }
            }
        }
    }
    out
}

/// Search wrapper with a wall-clock limit.
pub fn search_with_limit(
    tri: &IdealTriangulation,
    budget: &SearchBudget,
    time_limit: Option<Duration>,
) -> SearchOutcome {
    let start = Instant::now();
    search_famed_geometric(tri, budget, move || {
        time_limit.is_some_and(|lim| start.elapsed() > lim)
    })
}

/// First FAMED report of an analysis, if any.
pub fn first_famed_report(a: &Analysis) -> Option<&FamedReport> {
    let idx = a.first_famed?;
    a.orders
        .iter()
        .enumerate()
        .find(|(i, _)| *i == idx)
        .map(|(_, oa)| &oa.report)
}
