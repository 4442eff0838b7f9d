//! Command-line grammar and dispatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use tvk_core::oracle::{self, OracleSettings};
use tvk_core::{closed_form_for, expand_a, lambda_expansion, Evaluator, Index, IndexCombination};

use crate::cache::{Cache, CacheRecord, RecordKind};
use crate::checks::Context;
use crate::config::{FileConfig, Settings};
use crate::suite::{self, Filter};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "tvk", version, about = "Multiple T̃-values, λ expansions and their identities")]
pub struct Cli {
    /// JSON config file (also TVK_CONFIG).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory of the value cache (also TVK_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Ignore the value cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Target decimal digits (also TVK_DIGITS).
    #[arg(long, global = true)]
    pub digits: Option<u32>,
    /// Worker threads (also TVK_JOBS).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Ceiling on outer series terms per T̃ value (also TVK_MAX_TERMS).
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Repeat for more log output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LambdaMethod {
    Expansion,
    Closed,
    Quadrature,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate T̃(𝕜).
    Ttilde { index: String },
    /// Evaluate λ(𝕜; s) at an integer s ≥ 2.
    Lambda {
        index: String,
        #[arg(long)]
        s: i64,
        #[arg(long, value_enum, default_value = "expansion")]
        method: LambdaMethod,
    },
    /// Expansion of 𝒜(𝕜) and the resulting formula for λ(𝕜; s).
    Expand { index: String },
    /// Dual index 𝕜†.
    Dual { index: String },
    /// Shuffle product of two indices.
    Shuffle { first: String, second: String },
    /// Run verification checks.
    Verify {
        #[arg(long)]
        check: Option<String>,
        #[arg(long)]
        tag: Option<String>,
        #[arg(long)]
        weight_max: Option<u32>,
        /// JSON parameters for a single instance of --check.
        #[arg(long)]
        params: Option<String>,
        /// List the planned instances without running them.
        #[arg(long)]
        list: bool,
    },
    /// Inspect or clear the value cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Clone, Copy, Debug, Subcommand)]
pub enum CacheAction {
    Stats,
    Clear,
}

fn parse_index(s: &str) -> Result<Index, CliError> {
    s.parse().map_err(|e: tvk_core::Error| CliError::Usage(e.to_string()))
}

impl Cli {
    pub fn settings(&self) -> Result<Settings, CliError> {
        let flags = FileConfig {
            digits: self.digits,
            cache_dir: self.cache_dir.clone(),
            jobs: self.jobs,
            tolerance: None,
            max_terms: self.max_terms,
        };
        Settings::from_process_env(flags, self.config.as_deref())
    }
}

fn open_cache(cli: &Cli, settings: &Settings) -> Result<Option<Cache>, CliError> {
    if cli.no_cache {
        return Ok(None);
    }
    match &settings.cache_dir {
        Some(d) => Ok(Some(Cache::open(d)?)),
        None => Ok(None),
    }
}

fn show_c(z: Complex64) -> String {
    format!("{:.15e} {} {:.15e}i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs())
}

/// Runs the parsed command, writing to `out`; returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let settings = cli.settings()?;
    let cache = open_cache(cli, &settings)?;
    let policy = settings.policy();
    match &cli.command {
        Command::Ttilde { index } => {
            let k = parse_index(index)?;
            if k.is_empty() {
                return Err(CliError::Usage("T̃ needs a nonempty index".into()));
            }
            let bits = tvk_core::numerics::bits_for_digits(policy.working_digits(k.weight()));
            let cached = cache
                .as_ref()
                .and_then(|c| c.get(RecordKind::Ttilde, &k, None, settings.digits))
                .and_then(|r| r.real_value(bits));
            let from_cache = cached.is_some();
            let v = match cached {
                Some(v) => v,
                None => {
                    let v = tvk_core::ttilde(&k, &policy)?;
                    if let Some(c) = &cache {
                        c.put(&CacheRecord::ttilde(&k, &v, settings.digits))?;
                    }
                    v
                }
            };
            let text = v.to_decimal(settings.digits);
            if cli.json {
                let v = json!({"index": k.to_string(), "value": text, "err": v.error(), "digits": settings.digits, "cached": from_cache});
                writeln!(out, "{v}")?;
            } else {
                writeln!(out, "{text}")?;
            }
            Ok(0)
        }
        Command::Lambda { index, s, method } => {
            let k = parse_index(index)?;
            if *s < 2 {
                return Err(CliError::Usage(format!("--s must be at least 2, got {s}")));
            }
            let (text, err) = match method {
                LambdaMethod::Quadrature => {
                    let v = oracle::lambda_quadrature(&k, *s as u32, &OracleSettings::default())?;
                    (show_c(v.value), v.error)
                }
                LambdaMethod::Expansion | LambdaMethod::Closed => {
                    let f = if *method == LambdaMethod::Closed {
                        closed_form_for(&k)
                            .or_else(|| (k.entries() == [1]).then(|| lambda_expansion(&k).ok()).flatten())
                            .ok_or_else(|| CliError::Usage(format!("no closed form covers ({k})")))?
                    } else {
                        lambda_expansion(&k)?
                    };
                    if let Some(c) = &cache {
                        let ctx = Context::with_policy(policy.clone(), settings.tolerance);
                        suite::seed_from_cache(&ctx, c);
                        let v = ctx.evaluator.eval_combination(&f, Some(*s))?;
                        suite::store_to_cache(&ctx, c)?;
                        (v.to_decimal(settings.digits), v.error())
                    } else {
                        let v = Evaluator::new(policy.clone()).eval_combination(&f, Some(*s))?;
                        (v.to_decimal(settings.digits), v.error())
                    }
                }
            };
            if cli.json {
                let v = json!({"index": k.to_string(), "s": s, "method": format!("{method:?}").to_lowercase(), "value": text, "err": err});
                writeln!(out, "{v}")?;
            } else {
                writeln!(out, "{text}")?;
            }
            Ok(0)
        }
        Command::Expand { index } => {
            let k = parse_index(index)?;
            let terms = expand_a(&k)?;
            let lambda = lambda_expansion(&k)?;
            if cli.json {
                let ts: Vec<serde_json::Value> = terms
                    .iter()
                    .map(|t| {
                        json!({
                            "coeff": t.coeff.to_string(),
                            "i": t.i_power,
                            "constants": t.constants,
                            "j": t.j,
                            "residual": t.residual,
                        })
                    })
                    .collect();
                let v = json!({"index": k.to_string(), "a_terms": ts, "lambda": lambda.to_json()});
                writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
            } else {
                writeln!(out, "𝒜({k}; (1+z)/(1-z)) =")?;
                for t in &terms {
                    writeln!(out, "  {t}")?;
                }
                writeln!(out, "λ({k}; s) = {lambda}")?;
            }
            Ok(0)
        }
        Command::Dual { index } => {
            let k = parse_index(index)?;
            let d = k.dual().map_err(|e| CliError::Usage(e.to_string()))?;
            if cli.json {
                writeln!(out, "{}", json!({"index": k.to_string(), "dual": d.to_string()}))?;
            } else {
                writeln!(out, "{d}")?;
            }
            Ok(0)
        }
        Command::Shuffle { first, second } => {
            let (u, v) = (parse_index(first)?, parse_index(second)?);
            let s = IndexCombination::shuffle(&u, &v);
            if cli.json {
                let terms: Vec<serde_json::Value> =
                    s.iter().map(|(k, c)| json!({"index": k.to_string(), "coeff": c})).collect();
                writeln!(out, "{}", serde_json::Value::Array(terms))?;
            } else {
                writeln!(out, "{s}")?;
            }
            Ok(0)
        }
        Command::Verify {
            check,
            tag,
            weight_max,
            params,
            list,
        } => {
            let params = params
                .as_deref()
                .map(serde_json::from_str)
                .transpose()
                .map_err(|e| CliError::Usage(format!("--params is not JSON: {e}")))?;
            let filter = Filter {
                check: check.clone(),
                tag: tag.clone(),
                weight_max: *weight_max,
                params,
            };
            let plan = suite::plan(&filter)?;
            if *list {
                for (spec, p) in &plan {
                    writeln!(out, "{} {} weight={}", spec.id, p, spec.weight(p))?;
                }
                return Ok(0);
            }
            let ctx = Context::with_policy(policy.clone(), settings.tolerance);
            if let Some(c) = &cache {
                suite::seed_from_cache(&ctx, c);
            }
            let report = suite::run_plan(&ctx, &plan, settings.jobs);
            if let Some(c) = &cache {
                suite::store_to_cache(&ctx, c)?;
            }
            if cli.json {
                writeln!(out, "{}", report.to_json())?;
            } else {
                write!(out, "{}", report.to_text())?;
            }
            Ok(report.exit_code())
        }
        Command::Cache { action } => {
            let c = cache.ok_or_else(|| CliError::Usage("no cache directory configured".into()))?;
            match action {
                CacheAction::Stats => {
                    let s = c.stats();
                    if cli.json {
                        writeln!(out, "{}", serde_json::to_string(&s).expect("json"))?;
                    } else {
                        writeln!(out, "{}: {} records, {} keys, {} bytes", s.path.display(), s.records, s.keys, s.bytes)?;
                        for (k, n) in &s.by_kind {
                            writeln!(out, "  {k}: {n}")?;
                        }
                        if s.skipped_lines > 0 {
                            writeln!(out, "  unreadable lines: {}", s.skipped_lines)?;
                        }
                    }
                }
                CacheAction::Clear => {
                    c.clear()?;
                    writeln!(out, "cleared {}", c.path().display())?;
                }
            }
            Ok(0)
        }
    }
}
