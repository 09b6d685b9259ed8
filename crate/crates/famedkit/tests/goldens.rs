//! Frozen results for the bundled corpus. The volumes of the layered
//! fixtures are exact multiples of the figure-eight volume (they are cyclic
//! covers), which doubles as a cross-check of the solver.

use std::path::PathBuf;

use famedkit::census::{run_job, CensusJob, JobOptions};

const V8: f64 = 2.029883212819307;

struct Golden {
    name: &'static str,
    source: &'static str,
    tets: usize,
    orders: usize,
    famed: usize,
    found: &'static str,
    volume: Option<f64>,
}

const GOLDENS: [Golden; 13] = [
    g("fig8", "fig8.json", 2, 4, 4, "root", Some(V8)),
    g("fig8_unordered", "fig8_unordered.json", 2, 4, 4, "root", Some(V8)),
    g("K4a1", "htlinks/K4a1.json", 2, 4, 4, "root", Some(V8)),
    g("fig8_n3_0", "sample/fig8_n3_0.json", 3, 4, 4, "root", Some(V8)),
    g("fig8_n4_0", "sample/fig8_n4_0.json", 4, 4, 4, "root", Some(V8)),
    g("fig8_n4_1", "sample/fig8_n4_1.json", 4, 6, 0, "search", Some(V8)),
    g("fig8_n4_2", "sample/fig8_n4_2.json", 4, 4, 4, "root", Some(V8)),
    g("fig8_n4_3", "sample/fig8_n4_3.json", 4, 4, 0, "search", Some(V8)),
    g("layered_sister", "sample/layered_sister.json", 2, 0, 0, "none", None),
    g("layered_rl2", "sample/layered_rl2.json", 4, 4, 4, "root", Some(2.0 * V8)),
    g("layered_t33", "sample/layered_t33.json", 4, 0, 0, "none", None),
    g("layered_rl3", "sample/layered_rl3.json", 6, 4, 4, "root", Some(3.0 * V8)),
    g("layered_t210", "sample/layered_t210.json", 6, 0, 0, "none", None),
];

const fn g(
    name: &'static str,
    source: &'static str,
    tets: usize,
    orders: usize,
    famed: usize,
    found: &'static str,
    volume: Option<f64>,
) -> Golden {
    Golden {
        name,
        source,
        tets,
        orders,
        famed,
        found,
        volume,
    }
}

#[test]
fn fast_famed_status_agrees_with_full_check() {
    use famedkit::formats::parse_triangulation;
    use famedkit_core::angles::angle_structure_feasible;
    use famedkit_core::cusp::{preferred_longitude, CuspTriangulation};
    use famedkit_core::face_matrices::FaceMatrices;
    use famedkit_core::famed::{famed_check, famed_status};
    use famedkit_core::nz::neumann_zagier;
    use famedkit_core::ordering::{apply_order, enumerate_orders};

    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    for gold in &GOLDENS {
        let text = std::fs::read_to_string(dir.join(gold.source)).unwrap();
        let tri = parse_triangulation(&text).unwrap();
        for order in enumerate_orders(&tri) {
            let ordered = apply_order(&tri, &order).unwrap();
            let Ok(cusp) = CuspTriangulation::new(&ordered) else {
                continue;
            };
            let Ok(longitude) = preferred_longitude(&ordered, &cusp) else {
                continue;
            };
            let face = FaceMatrices::compute(&ordered).unwrap();
            let nz = neumann_zagier(&cusp, &longitude, cusp.quotient.n_edges() - 1).unwrap();
            let angles_ok = angle_structure_feasible(&ordered)
                .map(|w| w.is_some())
                .unwrap_or(false);
            assert_eq!(
                famed_status(&face, &nz, angles_ok),
                famed_check(&face, &nz, angles_ok).famed,
                "{}: fast and full FAMED decisions disagree",
                gold.name
            );
        }
    }
}

#[test]
fn sample_corpus_matches_frozen_results() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    for gold in &GOLDENS {
        let job = CensusJob {
            name: gold.name.to_string(),
            source: dir.join(gold.source),
            options: JobOptions {
                max_extra_tets: Some(1),
                max_nodes: Some(2000),
                ..Default::default()
            },
        };
        let r = run_job(&job);
        assert!(r.ok, "{}: {:?}", gold.name, r.error);
        assert_eq!(r.n_tetrahedra, Some(gold.tets), "{}: tets", gold.name);
        assert_eq!(r.n_orders, Some(gold.orders), "{}: orders", gold.name);
        assert_eq!(r.n_famed_orders, Some(gold.famed), "{}: famed", gold.name);
        assert_eq!(r.famed_found.as_deref(), Some(gold.found), "{}", gold.name);
        match gold.volume {
            Some(v) => {
                let got = r.volume.unwrap_or(f64::NAN);
                assert!((got - v).abs() < 1e-9, "{}: volume {got} vs {v}", gold.name);
            }
            None => assert!(r.volume.is_none(), "{}: unexpected volume", gold.name),
        }
    }
}
