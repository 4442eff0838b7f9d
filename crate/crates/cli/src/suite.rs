//! Selecting, running and caching a batch of checks.

use serde_json::Value;

use tvk_core::numerics::bits_for_digits;
use tvk_core::Index;

use crate::cache::{Cache, CacheRecord, RecordKind};
use crate::checks::{self, CheckSpec, Context};
use crate::report::{CheckReport, SuiteReport};
use crate::CliError;

#[derive(Clone, Debug, Default)]
pub struct Filter {
    pub check: Option<String>,
    pub tag: Option<String>,
    pub weight_max: Option<u32>,
    /// Replaces the default parameter sets; requires `check`.
    pub params: Option<Value>,
}

pub type Plan = Vec<(&'static CheckSpec, Value)>;

/// Check instances in deterministic order.
pub fn plan(filter: &Filter) -> Result<Plan, CliError> {
    let specs: Vec<&'static CheckSpec> = match &filter.check {
        Some(id) => vec![checks::find(id).ok_or_else(|| CliError::UnknownCheck(id.clone()))?],
        None => checks::REGISTRY.iter().collect(),
    };
    if filter.params.is_some() && filter.check.is_none() {
        return Err(CliError::Usage("--params needs --check".into()));
    }
    let mut out = Vec::new();
    for spec in specs {
        if let Some(t) = &filter.tag {
            if !spec.has_tag(t) {
                continue;
            }
        }
        let instances = match &filter.params {
            Some(p) => vec![p.clone()],
            None => spec.default_params(),
        };
        for p in instances {
            if filter.weight_max.is_none_or(|w| spec.weight(&p) <= w) {
                out.push((spec, p));
            }
        }
    }
    Ok(out)
}

fn execute(ctx: &Context, plan: &Plan) -> Vec<CheckReport> {
    let run = |item: &(&'static CheckSpec, Value)| item.0.run(ctx, &item.1);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        plan.par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        plan.iter().map(run).collect()
    }
}

/// Runs the plan in a pool of at most `jobs` threads.
pub fn run_plan(ctx: &Context, plan: &Plan, jobs: Option<usize>) -> SuiteReport {
    #[cfg(feature = "parallel")]
    let reports = match rayon::ThreadPoolBuilder::new().num_threads(jobs.unwrap_or(0)).build() {
        Ok(pool) => pool.install(|| execute(ctx, plan)),
        Err(e) => {
            log::warn!("thread pool unavailable ({e}); running on the global pool");
            execute(ctx, plan)
        }
    };
    #[cfg(not(feature = "parallel"))]
    let reports = {
        let _ = jobs;
        execute(ctx, plan)
    };
    SuiteReport::new(ctx.digits, reports)
}

/// Seeds the evaluator with cached T̃ values at no fewer digits than requested.
pub fn seed_from_cache(ctx: &Context, cache: &Cache) -> usize {
    let policy = ctx.evaluator.policy().clone();
    let mut n = 0;
    for r in cache.load() {
        if r.kind != RecordKind::Ttilde || r.digits < policy.target_digits {
            continue;
        }
        let bits = bits_for_digits(policy.working_digits(r.index.weight()));
        if let Some(v) = r.real_value(bits) {
            ctx.evaluator.insert(r.index.clone(), v);
            n += 1;
        }
    }
    log::info!("seeded {n} values from {}", cache.path().display());
    n
}

/// Appends every value not already cached at this precision.
pub fn store_to_cache(ctx: &Context, cache: &Cache) -> std::io::Result<usize> {
    let digits = ctx.evaluator.policy().target_digits;
    let have: Vec<Index> = cache
        .load()
        .into_iter()
        .filter(|r| r.kind == RecordKind::Ttilde && r.digits >= digits)
        .map(|r| r.index)
        .collect();
    let new: Vec<CacheRecord> = ctx
        .evaluator
        .snapshot()
        .into_iter()
        .filter(|(k, _)| !have.contains(k))
        .map(|(k, v)| CacheRecord::ttilde(&k, &v, digits))
        .collect();
    cache.put_all(&new)?;
    Ok(new.len())
}
