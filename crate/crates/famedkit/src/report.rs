//! JSON views of reports and the per-job census record.

use famedkit_core::exact::RMat;
use famedkit_core::famed::FamedReport;
use famedkit_core::geometry::{CertifiedBox, ShapeVector};
use famedkit_core::nz::NZMatrices;
use famedkit_core::pachner::{Move, SearchStats};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Exact rational matrix as strings `"p/q"` (integers stay plain).
pub fn rmat_json(m: &RMat) -> Value {
    let rows: Vec<Vec<String>> = (0..m.rows)
        .map(|i| {
            (0..m.cols)
                .map(|j| {
                    let v = &m[(i, j)];
                    if v.is_integer() {
                        v.numer().to_string()
                    } else {
                        format!("{}/{}", v.numer(), v.denom())
                    }
                })
                .collect()
        })
        .collect();
    json!(rows)
}

pub fn famed_report_json(r: &FamedReport) -> Value {
    json!({
        "angle_nonempty": r.angle_nonempty,
        "det_a_cal": r.det_a_cal.to_string(),
        "det_b_bold": r.det_b_bold.to_string(),
        "identity_plus_sign": r.identity_plus,
        "identity_minus_sign": r.identity_minus,
        "identity_holds": r.identity_holds,
        "famed": r.famed,
        "lhs": r.lhs.as_ref().map(rmat_json),
        "rhs_plus_sign": r.rhs_plus.as_ref().map(rmat_json),
        "rhs_minus_sign": r.rhs_minus.as_ref().map(rmat_json),
        "nullity_a_cal": r.diagnostics.nullity_a_cal,
        "nullity_b_bold": r.diagnostics.nullity_b_bold,
        "conjecture_violation": r.diagnostics.violates_expected_pattern(),
    })
}

pub fn nz_json(nz: &NZMatrices) -> Value {
    json!({
        "g": nz.g,
        "g_prime": nz.g1,
        "g_second": nz.g2,
        "a_bold": nz.a_bold,
        "b_bold": nz.b_bold,
        "dropped_edge": nz.dropped_edge,
        "curve": nz.curve_label,
        "curve_const_pi": nz.curve_const_pi,
    })
}

pub fn shapes_json(shapes: &ShapeVector, cert: Option<&CertifiedBox>) -> Value {
    let zs: Vec<Value> = shapes
        .z
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let mut o = json!({
                "re": format!("{:.15}", z.re),
                "im": format!("{:.15}", z.im),
            });
            if let Some(c) = cert {
                let b = &c.boxes[i];
                o["radius_re"] = json!(format!("{:.3e}", b.re.radius()));
                o["radius_im"] = json!(format!("{:.3e}", b.im.radius()));
            }
            o
        })
        .collect();
    json!(zs)
}

pub fn moves_json(path: &[Move]) -> Value {
    json!(path
        .iter()
        .map(|m| match m {
            Move::TwoThree(i) => json!(["2-3", i]),
            Move::ThreeTwo(i) => json!(["3-2", i]),
        })
        .collect::<Vec<_>>())
}

/// How geometricity was established, if at all.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeometricStatus {
    Certified,
    NumericOnly,
    None,
}

/// One line of the census results file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResultRecord {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_tetrahedra: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_orders: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_famed_orders: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometric: Option<GeometricStatus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume: Option<f64>,
    /// "root" when a FAMED order exists on the input triangulation,
    /// "search" when retriangulation found one, "none" otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub famed_found: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_path: Option<Value>,
    /// Number of orders violating the invertibility pattern.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjecture_violations: Option<usize>,
    pub started_unix_ms: u128,
    pub elapsed_ms: u128,
}

impl ResultRecord {
    pub fn failed(name: &str, error: String, started_unix_ms: u128, elapsed_ms: u128) -> Self {
        ResultRecord {
            name: name.to_string(),
            ok: false,
            error: Some(error),
            n_tetrahedra: None,
            n_orders: None,
            n_famed_orders: None,
            geometric: None,
            volume: None,
            famed_found: None,
            search_nodes: None,
            search_path: None,
            conjecture_violations: None,
            started_unix_ms,
            elapsed_ms,
        }
    }
}

pub fn search_stats_json(stats: &SearchStats) -> Value {
    json!({
        "nodes_visited": stats.nodes_visited,
        "frontier_size": stats.frontier_size,
        "stopped_early": stats.stopped_early,
    })
}
