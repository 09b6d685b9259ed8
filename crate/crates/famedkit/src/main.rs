//! Command line front end.
//!
//! ```text
//! famedkit orders <file>
//! famedkit check  <file> [--all-orders] [--scan-dropped-edges] [--numeric-only] [--json]
//! famedkit search <file> [--max-extra-tets K] [--max-nodes M] [--time-limit-secs S]
//! famedkit census <manifest> [--jobs N] [--out results.jsonl]
//! ```
//!
//! Exit codes: 0 ok, 1 not FAMED / not found, 2 input error, 3 internal
//! error. `FAMEDKIT_JOBS` overrides the census worker count.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use famedkit::census;
use famedkit::formats;
use famedkit::pipeline::{analyze, search_with_limit, CheckOptions};
use famedkit::report::{
    famed_report_json, moves_json, nz_json, search_stats_json, shapes_json, GeometricStatus,
};
use famedkit_core::ordering;
use famedkit_core::pachner::SearchBudget;
use famedkit_core::tri::IdealTriangulation;

const USAGE: &str = "usage: famedkit {orders|check|search|census} <file> [flags]
  orders <file>
  check  <file> [--all-orders] [--scan-dropped-edges] [--numeric-only] [--json]
  search <file> [--max-extra-tets K] [--max-nodes M] [--time-limit-secs S]
  census <manifest> [--jobs N] [--out results.jsonl]";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(cmd) = args.first() else {
        eprintln!("{USAGE}");
        return ExitCode::from(2);
    };
    match cmd.as_str() {
        "orders" => cmd_orders(&args[1..]),
        "check" => cmd_check(&args[1..]),
        "search" => cmd_search(&args[1..]),
        "census" => cmd_census(&args[1..]),
        "--help" | "-h" | "help" => {
            println!("{USAGE}");
            ExitCode::SUCCESS
        }
        other => {
            eprintln!("unknown command {other:?}\n{USAGE}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &str) -> Result<IdealTriangulation, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {path}: {e}");
        ExitCode::from(2)
    })?;
    formats::parse_triangulation(&text).map_err(|e| {
        eprintln!("error: {path}: {e}");
        ExitCode::from(2)
    })
}

fn flag(args: &[String], name: &str) -> bool {
    args.iter().any(|a| a == name)
}

fn value_flag<T: std::str::FromStr>(args: &[String], name: &str) -> Result<Option<T>, ExitCode> {
    for (i, a) in args.iter().enumerate() {
        if a == name {
            let Some(v) = args.get(i + 1) else {
                eprintln!("error: {name} needs a value");
                return Err(ExitCode::from(2));
            };
            return v.parse::<T>().map(Some).map_err(|_| {
                eprintln!("error: bad value for {name}: {v}");
                ExitCode::from(2)
            });
        }
    }
    Ok(None)
}

fn positional<'a>(args: &'a [String], skip_values_of: &[&str]) -> Result<&'a str, ExitCode> {
    let mut skip_next = false;
    for a in args {
        if skip_next {
            skip_next = false;
            continue;
        }
        if skip_values_of.contains(&a.as_str()) {
            skip_next = true;
            continue;
        }
        if !a.starts_with("--") {
            return Ok(a.as_str());
        }
    }
    eprintln!("error: missing input file\n{USAGE}");
    Err(ExitCode::from(2))
}

fn cmd_orders(args: &[String]) -> ExitCode {
    let path = match positional(args, &[]) {
        Ok(p) => p,
        Err(c) => return c,
    };
    let tri = match load(path) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let orders = ordering::enumerate_orders(&tri);
    println!("{} orders", orders.len());
    println!("{}", formats::write_orders(&orders));
    ExitCode::SUCCESS
}

fn cmd_check(args: &[String]) -> ExitCode {
    let path = match positional(args, &[]) {
        Ok(p) => p,
        Err(c) => return c,
    };
    let tri = match load(path) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let opts = CheckOptions {
        all_orders: flag(args, "--all-orders"),
        scan_dropped_edges: flag(args, "--scan-dropped-edges"),
        numeric_only: flag(args, "--numeric-only"),
    };
    let a = analyze(&tri, &opts);

    if flag(args, "--json") {
        let orders_json: Vec<serde_json::Value> = a
            .orders
            .iter()
            .map(|oa| {
                serde_json::json!({
                    "order": oa.order.perms.iter().map(|p| p.0.to_vec()).collect::<Vec<_>>(),
                    "famed": famed_report_json(&oa.report),
                    "nz": nz_json(&oa.nz),
                    "dropped_edge_scan": oa.dropped_edge_scan,
                })
            })
            .collect();
        let doc = serde_json::json!({
            "n_tetrahedra": a.n_tetrahedra,
            "n_orders": a.n_orders,
            "n_famed_orders": a.n_famed_orders,
            "geometric": a.geometric,
            "volume": a.volume,
            "shapes": a.shapes.as_ref().map(|s| shapes_json(s, None)),
            "orders": orders_json,
            "conjecture_violations": a.conjecture_violations,
        });
        println!("{doc}");
    } else {
        println!("tetrahedra: {}", a.n_tetrahedra);
        match a.n_famed_orders {
            Some(famed) => println!("orders: {} ({famed} FAMED)", a.n_orders),
            None => println!("orders: {} (stopped at first FAMED)", a.n_orders),
        }
        match a.geometric {
            GeometricStatus::Certified => println!("geometric: certified"),
            GeometricStatus::NumericOnly => println!("geometric: numeric-only"),
            GeometricStatus::None => println!("geometric: no"),
        }
        if let Some(v) = a.volume {
            println!("volume: {v:.12}");
        }
        if let Some(idx) = a.first_famed {
            let oa = &a.orders[idx];
            println!("FAMED order found: {:?}", oa.order.perms);
            if let Some(l) = &oa.report.lhs {
                println!("common value B^-1 A:");
                for i in 0..l.rows {
                    let row: Vec<String> =
                        (0..l.cols).map(|j| l[(i, j)].to_string()).collect();
                    println!("  [{}]", row.join(", "));
                }
            }
            if let Some(scan) = &oa.dropped_edge_scan {
                println!("dropped-edge scan: {scan:?}");
            }
        } else if a.n_orders == 0 {
            println!("not FAMED: no orders exist");
        } else {
            let reason = a
                .orders
                .first()
                .map(|oa| {
                    if !oa.report.angle_nonempty {
                        "angle polytope empty"
                    } else if oa.report.det_a_cal == 0.into() {
                        "det A_cal = 0"
                    } else if oa.report.det_b_bold == 0.into() {
                        "det B = 0"
                    } else {
                        "matrix identity fails"
                    }
                })
                .unwrap_or("no order checked");
            println!("not FAMED: {reason}");
        }
    }
    if a.first_famed.is_some() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_search(args: &[String]) -> ExitCode {
    let path = match positional(args, &["--max-extra-tets", "--max-nodes", "--time-limit-secs"]) {
        Ok(p) => p,
        Err(c) => return c,
    };
    let tri = match load(path) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let max_extra = match value_flag::<usize>(args, "--max-extra-tets") {
        Ok(v) => v.unwrap_or(2),
        Err(c) => return c,
    };
    let max_nodes = match value_flag::<usize>(args, "--max-nodes") {
        Ok(v) => v.unwrap_or(1_000_000),
        Err(c) => return c,
    };
    let time_limit = match value_flag::<u64>(args, "--time-limit-secs") {
        Ok(v) => v.map(Duration::from_secs),
        Err(c) => return c,
    };
    let budget = SearchBudget {
        max_extra_tets: max_extra,
        max_nodes,
    };
    let outcome = search_with_limit(&tri, &budget, time_limit);
    println!("stats: {}", search_stats_json(&outcome.stats));
    match outcome.result {
        Some(res) => {
            println!(
                "found FAMED geometric triangulation after {} moves",
                res.path.len()
            );
            println!("path: {}", moves_json(&res.path));
            println!(
                "triangulation: {}",
                formats::write_triangulation(&res.triangulation)
            );
            ExitCode::SUCCESS
        }
        None => {
            println!("not found within budget");
            ExitCode::from(1)
        }
    }
}

fn cmd_census(args: &[String]) -> ExitCode {
    let manifest = match positional(args, &["--jobs", "--out"]) {
        Ok(p) => p,
        Err(c) => return c,
    };
    let out = match value_flag::<PathBuf>(args, "--out") {
        Ok(v) => v.unwrap_or_else(|| PathBuf::from("results.jsonl")),
        Err(c) => return c,
    };
    let jobs = match value_flag::<usize>(args, "--jobs") {
        Ok(v) => v,
        Err(c) => return c,
    };
    let jobs = jobs
        .or_else(|| {
            std::env::var("FAMEDKIT_JOBS")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });
    match census::run_census(std::path::Path::new(manifest), &out, jobs) {
        Ok((written, skipped)) => {
            println!("census done: {written} records written, {skipped} already present");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
