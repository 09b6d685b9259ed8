//! Batch processing of census manifests: a JSONL file of jobs, a pool of
//! worker threads, and an append-only JSONL results file with idempotent
//! resume.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use famedkit_core::pachner::SearchBudget;
use serde::{Deserialize, Serialize};

use crate::pipeline::{analyze, search_with_limit, CheckOptions};
use crate::report::{moves_json, GeometricStatus, ResultRecord};
use crate::formats;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct JobOptions {
    #[serde(default)]
    pub scan_dropped_edges: bool,
    #[serde(default)]
    pub numeric_only: bool,
    /// Retriangulation depth when no FAMED order exists at the root; absent
    /// means no search.
    #[serde(default)]
    pub max_extra_tets: Option<usize>,
    #[serde(default)]
    pub max_nodes: Option<usize>,
    #[serde(default)]
    pub time_limit_secs: Option<u64>,
}

/// One manifest line.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CensusJob {
    pub name: String,
    pub source: PathBuf,
    #[serde(default)]
    pub options: JobOptions,
}

pub fn read_manifest(path: &Path) -> Result<Vec<CensusJob>, String> {
    let file = File::open(path).map_err(|e| format!("cannot open {}: {e}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut jobs = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| format!("read error: {e}"))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut job: CensusJob = serde_json::from_str(trimmed)
            .map_err(|e| format!("manifest line {}: {e}", i + 1))?;
        // Relative sources are resolved against the manifest's directory.
        if job.source.is_relative() {
            job.source = base.join(&job.source);
        }
        jobs.push(job);
    }
    Ok(jobs)
}

/// Names that already have a record in the results file.
pub fn completed_names(out_path: &Path) -> HashSet<String> {
    let mut done = HashSet::new();
    if let Ok(file) = File::open(out_path) {
        for line in BufReader::new(file).lines().map_while(Result::ok) {
            if let Ok(v) = serde_json::from_str::<serde_json::Value>(&line) {
                if let Some(name) = v.get("name").and_then(|n| n.as_str()) {
                    done.insert(name.to_string());
                }
            }
        }
    }
    done
}

fn now_unix_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

/// Processes one job into a record; never panics on bad input.
pub fn run_job(job: &CensusJob) -> ResultRecord {
    let started = now_unix_ms();
    let clock = Instant::now();
    let fail = |msg: String, clock: &Instant| {
        ResultRecord::failed(&job.name, msg, started, clock.elapsed().as_millis())
    };

    let text = match std::fs::read_to_string(&job.source) {
        Ok(t) => t,
        Err(e) => return fail(format!("cannot read {}: {e}", job.source.display()), &clock),
    };
    let tri = match formats::parse_triangulation(&text) {
        Ok(t) => t,
        Err(e) => return fail(format!("parse error: {e}"), &clock),
    };

    let opts = CheckOptions {
        all_orders: true,
        scan_dropped_edges: job.options.scan_dropped_edges,
        numeric_only: job.options.numeric_only,
    };
    let analysis = analyze(&tri, &opts);

    let mut record = ResultRecord {
        name: job.name.clone(),
        ok: true,
        error: None,
        n_tetrahedra: Some(analysis.n_tetrahedra),
        n_orders: Some(analysis.n_orders),
        n_famed_orders: analysis.n_famed_orders,
        geometric: Some(analysis.geometric),
        volume: analysis.volume,
        famed_found: Some(if analysis.first_famed.is_some() {
            "root".to_string()
        } else {
            "none".to_string()
        }),
        search_nodes: None,
        search_path: None,
        conjecture_violations: Some(analysis.conjecture_violations),
        started_unix_ms: started,
        elapsed_ms: 0,
    };

    // Retriangulate only when the root has no FAMED order.
    if analysis.first_famed.is_none() {
        if let Some(depth) = job.options.max_extra_tets {
            let budget = SearchBudget {
                max_extra_tets: depth,
                max_nodes: job.options.max_nodes.unwrap_or(1_000_000),
            };
            let limit = job.options.time_limit_secs.map(Duration::from_secs);
            let outcome = search_with_limit(&tri, &budget, limit);
            record.search_nodes = Some(outcome.stats.nodes_visited);
            if let Some(res) = outcome.result {
                // The geometric status and volume now describe the
                // triangulation the search found.
                record.famed_found = Some("search".to_string());
                record.search_path = Some(moves_json(&res.path));
                record.geometric = Some(GeometricStatus::Certified);
                record.volume = famedkit_core::geometry::volume(&res.shapes).ok();
            }
        }
    }

    record.elapsed_ms = clock.elapsed().as_millis();
    record
}

/// Runs the manifest on `jobs` worker threads, appending one JSONL record
/// per job; jobs whose name already appears in the results file are skipped.
pub fn run_census(
    manifest: &Path,
    out_path: &Path,
    workers: usize,
) -> Result<(usize, usize), String> {
    let jobs = read_manifest(manifest)?;
    let done = completed_names(out_path);
    let pending: Vec<CensusJob> = jobs
        .into_iter()
        .filter(|j| !done.contains(&j.name))
        .collect();
    let skipped = done.len();

    let out = OpenOptions::new()
        .create(true)
        .append(true)
        .open(out_path)
        .map_err(|e| format!("cannot open {}: {e}", out_path.display()))?;

    let n = pending.len();
    let queue = Arc::new(Mutex::new(pending));
    let (tx, rx) = mpsc::channel::<ResultRecord>();
    let workers = workers.max(1);

    let mut handles = Vec::new();
    for _ in 0..workers {
        let queue = Arc::clone(&queue);
        let tx = tx.clone();
        handles.push(std::thread::spawn(move || loop {
            let job = {
                let mut q = queue.lock().expect("queue lock");
                q.pop()
            };
            let Some(job) = job else { break };
            let record = run_job(&job);
            if tx.send(record).is_err() {
                break;
            }
        }));
    }
    drop(tx);

    // Single writer serialises the appends.
    let mut written = 0usize;
    let mut out = out;
    for record in rx {
        let line = serde_json::to_string(&record).expect("record is serialisable");
        writeln!(out, "{line}").map_err(|e| format!("write error: {e}"))?;
        out.flush().ok();
        written += 1;
        eprintln!(
            "[{written}/{n}] {} {}",
            record.name,
            if record.ok { "ok" } else { "error" }
        );
    }
    for h in handles {
        h.join().map_err(|_| "worker panicked".to_string())?;
    }
    Ok((written, skipped))
}
