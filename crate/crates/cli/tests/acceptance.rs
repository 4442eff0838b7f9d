//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::json;

use tvk_cli::cache::{Cache, CacheRecord, RecordKind};
use tvk_cli::checks::{self, Context};
use tvk_cli::report::{CheckReport, Status};
use tvk_cli::suite::{self, Filter};
use tvk_core::{ttilde, Index, PrecisionPolicy};

const DIGITS: u32 = 30;
const TOL: f64 = 1e-20;
const GRID_TOL: f64 = 1e-18;
const ORACLE_TOL: f64 = 1e-10;
const QUAD_TOL: f64 = 1e-8;

struct Verdict {
    ok: bool,
    detail: String,
}

fn run(ctx: &Context, id: &str, params: Option<serde_json::Value>) -> Vec<CheckReport> {
    let filter = Filter {
        check: Some(id.into()),
        params,
        ..Filter::default()
    };
    let plan = suite::plan(&filter).expect("registered check");
    suite::run_plan(ctx, &plan, None).reports
}

/// Every report passes with the pinned tolerance, and each instance fits `each`.
fn all_pass(reports: &[CheckReport], tol: f64, each: Option<Duration>) -> Verdict {
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| {
            r.status != Status::Pass
                || r.abs_err.is_some_and(|e| e > tol)
                || r.tol > tol
                || each.is_some_and(|d| r.seconds > d.as_secs_f64())
        })
        .map(|r| r.line())
        .collect();
    let worst = reports.iter().filter_map(|r| r.abs_err).fold(0.0, f64::max);
    Verdict {
        ok: bad.is_empty() && !reports.is_empty(),
        detail: if bad.is_empty() {
            format!("{} instances, worst err {worst:.1e}", reports.len())
        } else {
            bad.join("; ")
        },
    }
}

fn c1_golden(ctx: &Context) -> Verdict {
    all_pass(&run(ctx, "expansion-golden", None), 0.0, None)
}

fn c2_constants(ctx: &Context) -> Verdict {
    let reports = run(ctx, "constants", None);
    let mut v = all_pass(&reports, 1e-28, Some(Duration::from_secs(5)));
    let digits_ok = reports
        .iter()
        .all(|r| r.lhs.is_some() && r.lhs == r.rhs && r.lhs.as_ref().unwrap().replace(['.', '-'], "").len() >= 31);
    if !digits_ok {
        v.ok = false;
        v.detail.push_str("; rendered digits differ");
    }
    v
}

fn c3_shuffle(ctx: &Context) -> Verdict {
    all_pass(&run(ctx, "shuffle-examples", None), TOL, Some(Duration::from_secs(60)))
}

fn c4_routes(ctx: &Context) -> Verdict {
    all_pass(&run(ctx, "route-agreement", None), TOL, None)
}

fn c5_sums(ctx: &Context) -> Verdict {
    all_pass(&run(ctx, "sum-relations", None), TOL, None)
}

fn c6_duality(ctx: &Context) -> Verdict {
    let ex = all_pass(&run(ctx, "duality-example", None), TOL, None);
    let grid = all_pass(&run(ctx, "duality-grid", None), GRID_TOL, None);
    Verdict {
        ok: ex.ok && grid.ok,
        detail: format!("example: {}; grid: {}", ex.detail, grid.detail),
    }
}

fn c7_oracle(ctx: &Context) -> Verdict {
    let dual = run(ctx, "oracle-duality", None);
    let covered = (2..=5)
        .flat_map(Index::all_of_weight)
        .filter(Index::is_admissible)
        .count();
    let a = all_pass(&dual, ORACLE_TOL, None);
    let q = all_pass(&run(ctx, "lambda-quadrature", None), QUAD_TOL, None);
    Verdict {
        ok: a.ok && q.ok && dual.len() == covered,
        detail: format!("at one: {}; quadrature: {}", a.detail, q.detail),
    }
}

fn exit_code(args: &[&str], cache: &std::path::Path) -> Option<i32> {
    Command::new(env!("CARGO_BIN_EXE_tvk"))
        .args(args)
        .env("TVK_CACHE_DIR", cache)
        .env_remove("TVK_DIGITS")
        .output()
        .ok()
        .and_then(|o| o.status.code())
}

fn c8_properties(ctx: &Context) -> Verdict {
    let props = all_pass(&run(ctx, "index-properties", None), 0.0, None);

    let dir = tempfile::tempdir().expect("temp dir");
    let cache = Cache::open(dir.path()).expect("cache dir");
    let k: Index = "1,3".parse().unwrap();
    let v = ttilde(&k, &PrecisionPolicy::with_digits(30)).expect("T̃(1,3)");
    let rec = CacheRecord::ttilde(&k, &v, 30);
    let mut cache_ok = cache.put(&rec).is_ok();
    cache_ok &= cache.get(RecordKind::Ttilde, &k, None, 30).map(|r| r.re) == Some(rec.re.clone());
    cache_ok &= cache.get(RecordKind::Ttilde, &k, None, 40).is_none();
    let mut hi = rec.clone();
    hi.digits = 45;
    cache_ok &= cache.put(&hi).is_ok() && cache.put(&rec).is_ok();
    cache_ok &= cache.get(RecordKind::Ttilde, &k, None, 30).map(|r| r.digits) == Some(45);

    let bad_expect = json!({"k": "2,2", "p": 1, "q": 2, "expect": "2i T(3,3)"}).to_string();
    let codes = [
        (exit_code(&["verify", "--check", "constants"], dir.path()), 0),
        (exit_code(&["verify", "--check", "duality-example", "--params", &bad_expect], dir.path()), 1),
        (exit_code(&["ttilde", "2,x"], dir.path()), 2),
        (exit_code(&["verify", "--check", "no-such-check"], dir.path()), 2),
        (exit_code(&["ttilde", "2,3", "--max-terms", "20"], dir.path()), 3),
    ];
    let codes_ok = codes.iter().all(|(got, want)| *got == Some(*want));
    let got: Vec<String> = codes.iter().map(|(g, _)| format!("{g:?}")).collect();
    Verdict {
        ok: props.ok && cache_ok && codes_ok,
        detail: format!(
            "properties: {}; cache round trip {}; exit codes {}",
            props.detail,
            if cache_ok { "ok" } else { "BROKEN" },
            got.join(",")
        ),
    }
}

fn c9_adjudication(ctx: &Context) -> Verdict {
    let reports = run(ctx, "variant-adjudication", None);
    let winners: Vec<String> = reports
        .iter()
        .map(|r| format!("{}={}", r.params["case"].as_str().unwrap_or("?"), r.winner.as_deref().unwrap_or("none")))
        .collect();
    let ok = reports.len() == 2
        && reports
            .iter()
            .all(|r| r.status == Status::Ambiguous && r.winner.is_some());
    let tallies: Vec<String> = reports.iter().filter_map(|r| r.message.clone()).collect();
    Verdict {
        ok,
        detail: format!("{} ({})", winners.join(", "), tallies.join("; ")),
    }
}

type Criterion = (&'static str, fn(&Context) -> Verdict, Duration);

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 symbolic golden expansions", c1_golden, Duration::from_secs(1)),
        ("2 constants to 30 digits", c2_constants, Duration::from_secs(15)),
        ("3 shuffle identities", c3_shuffle, Duration::from_secs(120)),
        ("4 route agreement", c4_routes, Duration::from_secs(300)),
        ("5 sum relations", c5_sums, Duration::from_secs(300)),
        ("6 duality example and grid", c6_duality, Duration::from_secs(600)),
        ("7 oracle duality and quadrature", c7_oracle, Duration::from_secs(600)),
        ("8 property suites, cache, exit codes", c8_properties, Duration::from_secs(60)),
        ("9 variant adjudication", c9_adjudication, Duration::from_secs(600)),
    ];
    assert_eq!(checks::REGISTRY.len(), 12);
    let mut failed = 0;
    for (name, f, limit) in criteria {
        // A fresh context per criterion so timings include every evaluation.
        let ctx = Context::new(DIGITS, TOL);
        let start = Instant::now();
        let v = f(&ctx);
        let t = start.elapsed();
        let ok = v.ok && t <= limit;
        if !ok {
            failed += 1;
        }
        println!(
            "[{}] {name}: {} ({:.2}s, limit {}s)",
            if ok { "PASS" } else { "FAIL" },
            v.detail,
            t.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} of 9 criteria pass", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
