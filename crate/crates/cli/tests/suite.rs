use std::process::Command;

use tvk_cli::cache::Cache;
use tvk_cli::checks::{Context, REGISTRY};
use tvk_cli::report::Status;
use tvk_cli::suite::{self, Filter};

fn tvk(args: &[&str], cache: Option<&std::path::Path>) -> (i32, String) {
    let mut c = Command::new(env!("CARGO_BIN_EXE_tvk"));
    c.args(args).env_remove("TVK_DIGITS").env_remove("TVK_CACHE_DIR");
    if let Some(d) = cache {
        c.env("TVK_CACHE_DIR", d);
    }
    let o = c.output().expect("binary runs");
    (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stdout).into_owned())
}

fn statuses(r: &tvk_cli::report::SuiteReport) -> Vec<(String, String, Status)> {
    r.reports
        .iter()
        .map(|x| (x.check_id.clone(), x.params_key(), x.status))
        .collect()
}

#[test]
fn weight_filter_is_monotone() {
    let small = suite::plan(&Filter { weight_max: Some(3), ..Filter::default() }).unwrap();
    let large = suite::plan(&Filter { weight_max: Some(5), ..Filter::default() }).unwrap();
    let key = |(s, p): &(&tvk_cli::checks::CheckSpec, serde_json::Value)| format!("{} {p}", s.id);
    let large: Vec<String> = large.iter().map(key).collect();
    assert!(small.len() < large.len());
    assert!(small.iter().map(key).all(|k| large.contains(&k)));
}

#[test]
fn symbolic_tag_does_no_numerics() {
    let ctx = Context::new(30, 1e-20);
    let plan = suite::plan(&Filter { tag: Some("symbolic".into()), ..Filter::default() }).unwrap();
    assert!(!plan.is_empty());
    let r = suite::run_plan(&ctx, &plan, Some(2));
    assert_eq!(r.summary.pass, r.summary.total);
    assert!(ctx.evaluator.snapshot().is_empty());
}

#[test]
fn small_suite_passes_at_25_digits() {
    let ctx = Context::new(25, 1e-20);
    let plan = suite::plan(&Filter { weight_max: Some(5), ..Filter::default() }).unwrap();
    let r = suite::run_plan(&ctx, &plan, None);
    let bad: Vec<String> = r.reports.iter().filter(|x| !x.status.is_ok()).map(|x| x.line()).collect();
    assert!(bad.is_empty(), "{bad:#?}");
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn reports_are_deterministic_and_cache_is_sound() {
    let dir = tempfile::tempdir().unwrap();
    let filter = Filter { weight_max: Some(6), ..Filter::default() };
    let plan = suite::plan(&filter).unwrap();
    let plain = suite::run_plan(&Context::new(30, 1e-20), &plan, Some(1));
    let again = suite::run_plan(&Context::new(30, 1e-20), &plan, None);
    let strip = |r: &tvk_cli::report::SuiteReport| {
        let mut v = serde_json::to_value(r).unwrap();
        for x in v["reports"].as_array_mut().unwrap() {
            x.as_object_mut().unwrap().remove("seconds");
        }
        v.to_string()
    };
    assert_eq!(strip(&plain), strip(&again));

    let cache = Cache::open(dir.path()).unwrap();
    let ctx = Context::new(30, 1e-20);
    suite::seed_from_cache(&ctx, &cache);
    let first = suite::run_plan(&ctx, &plan, None);
    let stored = suite::store_to_cache(&ctx, &cache).unwrap();
    assert!(stored > 0);
    let ctx = Context::new(30, 1e-20);
    assert_eq!(suite::seed_from_cache(&ctx, &cache), stored);
    let cached = suite::run_plan(&ctx, &plan, None);
    assert_eq!(statuses(&first), statuses(&plain));
    assert_eq!(statuses(&cached), statuses(&plain));
    // Every value came from the cache.
    assert_eq!(suite::store_to_cache(&ctx, &cache).unwrap(), 0);
}

#[test]
fn every_check_has_instances_and_tags() {
    for c in REGISTRY {
        assert!(!c.default_params().is_empty(), "{}", c.id);
        assert!(!c.tags.is_empty(), "{}", c.id);
    }
}

#[test]
fn unknown_params_are_errors_not_crashes() {
    let ctx = Context::new(20, 1e-20);
    let plan = suite::plan(&Filter {
        check: Some("route-agreement".into()),
        params: Some(serde_json::json!({"k": "3,3", "s": 2})),
        ..Filter::default()
    })
    .unwrap();
    let r = suite::run_plan(&ctx, &plan, None);
    assert_eq!(r.reports[0].status, Status::Error);
    assert_eq!(r.exit_code(), 3);
}

#[test]
fn command_line_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (code, first) = tvk(&["ttilde", "1,3", "--json"], Some(dir.path()));
    assert_eq!(code, 0);
    let (_, second) = tvk(&["ttilde", "1,3", "--json"], Some(dir.path()));
    let a: serde_json::Value = serde_json::from_str(&first).unwrap();
    let b: serde_json::Value = serde_json::from_str(&second).unwrap();
    assert_eq!(a["value"], b["value"]);
    assert_eq!(b["cached"], true);
    let (_, miss) = tvk(&["ttilde", "1,3", "--json", "--digits", "40"], Some(dir.path()));
    let c: serde_json::Value = serde_json::from_str(&miss).unwrap();
    assert_eq!(c["cached"], false);
    assert!(c["value"].as_str().unwrap().starts_with(a["value"].as_str().unwrap().trim_end_matches(char::is_numeric)));
    let (code, stats) = tvk(&["cache", "stats", "--json"], Some(dir.path()));
    assert_eq!(code, 0);
    let s: serde_json::Value = serde_json::from_str(&stats).unwrap();
    assert_eq!(s["records"], 2);
    assert_eq!(tvk(&["cache", "clear"], Some(dir.path())).0, 0);
    assert_eq!(tvk(&["cache", "stats"], None).0, 2);
}

#[test]
fn subcommands() {
    assert_eq!(tvk(&["dual", "2,1,3"], None).1.trim(), "1,3,2");
    assert_eq!(tvk(&["dual", "2,1"], None).0, 2);
    assert_eq!(tvk(&["shuffle", "2", "1"], None).1.trim(), "2·(1,2) + (2,1)");
    let (code, out) = tvk(&["expand", "2"], None);
    assert_eq!(code, 0);
    assert!(out.contains("λ(2; s) = i s T(1,s+1) + i T(2,s) - i T(2) T(s)"), "{out}");
    let (_, e) = tvk(&["lambda", "2,1", "--s", "3", "--digits", "20"], None);
    let (_, c) = tvk(&["lambda", "2,1", "--s", "3", "--digits", "20", "--method", "closed"], None);
    assert_eq!(e, c);
    let (code, q) = tvk(&["lambda", "2,1", "--s", "3", "--method", "quadrature"], None);
    assert_eq!(code, 0);
    assert!(!q.is_empty());
    assert_eq!(tvk(&["lambda", "2", "--s", "1"], None).0, 2);
    assert_eq!(tvk(&["verify", "--bogus"], None).0, 2);
}
