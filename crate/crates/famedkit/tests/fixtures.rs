//! Fixture files are generated from code and checked against the committed
//! copies, so the repository cannot drift from the library.
//!
//! Run `FAMEDKIT_REGEN_FIXTURES=1 cargo test -p famedkit --test fixtures`
//! to rewrite them.

use std::fs;
use std::path::PathBuf;

use famedkit::formats::{parse_triangulation, write_triangulation};
use famedkit_core::pachner::two_three_move;
use famedkit_core::sample;
use famedkit_core::signature::canonical_signature;
use famedkit_core::tri::IdealTriangulation;

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn expected_files() -> Vec<(PathBuf, String)> {
    let dir = fixtures_dir();
    let fig8 = sample::figure_eight();
    let fig8_unordered = sample::figure_eight_unordered();

    let mut files = vec![
        (dir.join("fig8.json"), write_triangulation(&fig8) + "\n"),
        (
            dir.join("fig8_unordered.json"),
            write_triangulation(&fig8_unordered) + "\n",
        ),
        // The figure-eight complement is HTLinks K4a1; its census
        // triangulation is the unordered table.
        (
            dir.join("htlinks/K4a1.json"),
            write_triangulation(&fig8_unordered) + "\n",
        ),
    ];

    // Retriangulations of the figure-eight complement: same manifold,
    // different triangulations, for the invariance and conjecture suites.
    let n3: Vec<IdealTriangulation> = (0..4)
        .map(|f| two_three_move(&fig8, f).unwrap())
        .collect();
    for (i, t) in dedupe(n3).into_iter().enumerate() {
        files.push((
            dir.join(format!("sample/fig8_n3_{i}.json")),
            write_triangulation(&t) + "\n",
        ));
    }
    let mut n4 = Vec::new();
    for f in 0..4 {
        let t3 = two_three_move(&fig8, f).unwrap();
        for g in 0..6 {
            if let Ok(t4) = two_three_move(&t3, g) {
                n4.push(t4);
            }
        }
    }
    for (i, t) in dedupe(n4).into_iter().take(4).enumerate() {
        files.push((
            dir.join(format!("sample/fig8_n4_{i}.json")),
            write_triangulation(&t) + "\n",
        ));
    }

    // Layered stacks: distinct one-cusped manifolds for the corpus suites.
    // The two-layer [0, 1] stack is the figure-eight's sister (homology
    // Z + Z/5, no orders); uniform words give cyclic covers of the
    // figure-eight complement with FAMED orders.
    for (name, word) in [
        ("layered_sister", vec![0usize, 1]),
        ("layered_rl2", vec![0, 0, 0, 0]),
        ("layered_t33", vec![0, 0, 0, 1]),
        ("layered_rl3", vec![0, 0, 0, 0, 0, 0]),
        ("layered_t210", vec![0, 0, 0, 0, 0, 1]),
    ] {
        files.push((
            dir.join(format!("sample/{name}.json")),
            write_triangulation(&layered(&word)) + "\n",
        ));
    }

    // A ready-to-run census manifest over the bundled corpus, with a small
    // retriangulation budget for the fixtures without FAMED orders.
    let mut manifest = String::from("# bundled sample; paths are relative to this file\n");
    let mut rels: Vec<String> = files
        .iter()
        .filter_map(|(p, _)| {
            let rel = p.strip_prefix(&dir).ok()?;
            let rel = rel.to_string_lossy().replace('\\', "/");
            rel.ends_with(".json").then_some(rel)
        })
        .collect();
    rels.sort();
    for rel in rels {
        let name = rel
            .trim_end_matches(".json")
            .rsplit('/')
            .next()
            .unwrap()
            .to_string();
        manifest.push_str(&format!(
            "{}\n",
            serde_json::json!({
                "name": name,
                "source": rel,
                "options": {"max_extra_tets": 1, "max_nodes": 2000}
            })
        ));
    }
    files.push((dir.join("sample_manifest.jsonl"), manifest));
    files
}

fn dedupe(tris: Vec<IdealTriangulation>) -> Vec<IdealTriangulation> {
    let mut seen = std::collections::BTreeSet::new();
    tris.into_iter()
        .filter(|t| seen.insert(canonical_signature(t).text))
        .collect()
}

/// Layered triangulations: a cyclic stack of square pillows, each glued
/// onto the previous one by a diagonal-exchange attachment. The two
/// attachment maps below both recover the figure-eight complement on a
/// two-layer stack; mixed words give other one-cusped manifolds (with
/// torsion in homology), which broadens the test corpus beyond a single
/// manifold. Words must have even length to stay orientable.
fn layered(word: &[usize]) -> IdealTriangulation {
    use famedkit_core::perm::Perm4;
    use famedkit_core::tri::Slot;
    const MAPS: [([u8; 4], [u8; 4]); 2] = [
        ([1, 3, 2, 0], [0, 2, 3, 1]),
        ([3, 1, 0, 2], [2, 0, 1, 3]),
    ];
    let k = word.len();
    let mut pairs = Vec::new();
    for (i, &w) in word.iter().enumerate() {
        let (p, q) = MAPS[w];
        let j = (i + 1) % k;
        pairs.push((Slot::new(j, 3), i, Perm4(p)));
        pairs.push((Slot::new(j, 1), i, Perm4(q)));
    }
    IdealTriangulation::from_pairs(k, &pairs).expect("layered word is valid")
}

#[test]
fn fixtures_match_generators() {
    let regen = std::env::var("FAMEDKIT_REGEN_FIXTURES").is_ok();
    for (path, content) in expected_files() {
        if regen {
            fs::create_dir_all(path.parent().unwrap()).unwrap();
            fs::write(&path, &content).unwrap();
            continue;
        }
        let on_disk = fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("missing fixture {}: {e}", path.display()));
        assert_eq!(on_disk, content, "fixture {} is stale", path.display());
    }
}

#[test]
fn fixtures_parse_back() {
    for (path, content) in expected_files() {
        if path.extension().is_some_and(|x| x == "json") {
            let tri = parse_triangulation(&content)
                .unwrap_or_else(|e| panic!("fixture {} invalid: {e}", path.display()));
            assert!(tri.n_tetrahedra() >= 2);
        }
    }
}

#[test]
fn error_fixtures_exist_and_fail_to_parse() {
    let dir = fixtures_dir().join("errors");
    for name in ["unpaired.json", "not_involution.json", "malformed.json"] {
        let path = dir.join(name);
        let text = fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("missing fixture {}: {e}", path.display()));
        assert!(
            parse_triangulation(&text).is_err(),
            "{name} unexpectedly parsed"
        );
    }
}
