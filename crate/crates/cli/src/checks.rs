//! Registry of verification checks.
//!
//! Every check runs on a JSON parameter object and yields a [`CheckReport`].
//! Numeric trouble becomes `status = error`; nothing here panics on bad input.

use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use serde_json::{json, Value};

use tvk_core::expansion::{i_power_consistent, one_two_index, ExpansionTerm};
use tvk_core::numerics::bits_for_digits;
use tvk_core::oracle::{self, OracleSettings};
use tvk_core::{
    closed_form_for, closed_form_ones_two, duality_relation, expand_a, lambda_expansion, reference,
    shuffle_relation_at_one, sum_relation, ttilde, BigComplex, BinomialVariant, CircledSemantics, Error,
    Evaluator, FormalCombination, GaussianRational, Index, IndexCombination, PrecisionPolicy, SumRelation,
};

use crate::report::{CheckReport, Status};

/// Shared state for one suite run.
pub struct Context {
    pub digits: u32,
    /// Tolerance for exact identities at the configured precision.
    pub tolerance: f64,
    pub evaluator: Arc<Evaluator>,
    pub oracle: OracleSettings,
}

impl Context {
    pub fn new(digits: u32, tolerance: f64) -> Self {
        Self::with_policy(PrecisionPolicy::with_digits(digits), tolerance)
    }

    pub fn with_policy(policy: PrecisionPolicy, tolerance: f64) -> Self {
        Context {
            digits: policy.target_digits,
            tolerance,
            evaluator: Arc::new(Evaluator::new(policy)),
            oracle: OracleSettings::default(),
        }
    }

    /// `base`, loosened when the working precision cannot support it.
    fn tol(&self, base: f64) -> f64 {
        base.max(10f64.powi(-(self.digits as i32 - 5)))
    }

    fn identity_tol(&self) -> f64 {
        self.tol(self.tolerance)
    }
}

pub const ORACLE_TOL: f64 = 1e-10;
pub const QUADRATURE_TOL: f64 = 1e-8;
pub const GRID_TOL_FACTOR: f64 = 100.0;

/// Result of running a check body, before timing and identification.
#[derive(Debug, Default)]
struct Outcome {
    status: Option<Status>,
    lhs: Option<String>,
    rhs: Option<String>,
    abs_err: Option<f64>,
    tol: f64,
    winner: Option<String>,
    message: Option<String>,
}

impl Outcome {
    fn symbolic(ok: bool, lhs: String, rhs: String) -> Self {
        Outcome {
            status: Some(if ok { Status::Pass } else { Status::Fail }),
            lhs: Some(lhs),
            rhs: Some(rhs),
            ..Outcome::default()
        }
    }
}

type Body = fn(&Context, &Value) -> Result<Outcome, Error>;

pub struct CheckSpec {
    pub id: &'static str,
    pub description: &'static str,
    pub statement: &'static str,
    pub tags: &'static [&'static str],
    body: Body,
    defaults: fn() -> Vec<Value>,
    weight: fn(&Value) -> u32,
}

impl CheckSpec {
    pub fn default_params(&self) -> Vec<Value> {
        (self.defaults)()
    }

    /// Largest weight of any value the instance touches.
    pub fn weight(&self, params: &Value) -> u32 {
        (self.weight)(params)
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.contains(&tag)
    }

    pub fn run(&self, ctx: &Context, params: &Value) -> CheckReport {
        let start = Instant::now();
        let result = (self.body)(ctx, params);
        let seconds = start.elapsed().as_secs_f64();
        let mut report = CheckReport {
            check_id: self.id.into(),
            description: self.description.into(),
            statement: self.statement.into(),
            params: params.clone(),
            status: Status::Error,
            lhs: None,
            rhs: None,
            abs_err: None,
            tol: 0.0,
            digits: ctx.digits,
            winner: None,
            message: None,
            nonconvergent: false,
            seconds,
        };
        match result {
            Ok(o) => {
                report.status = o.status.unwrap_or(Status::Error);
                report.lhs = o.lhs;
                report.rhs = o.rhs;
                report.abs_err = o.abs_err;
                report.tol = o.tol;
                report.winner = o.winner;
                report.message = o.message;
            }
            Err(e) => {
                report.nonconvergent = matches!(e, Error::NonConvergence { .. });
                report.message = Some(e.to_string());
            }
        }
        log::debug!("{} {} -> {:?} in {seconds:.3}s", self.id, params, report.status);
        report
    }
}

// Parameter access.

fn param_index(p: &Value, key: &str) -> Result<Index, Error> {
    match p.get(key) {
        Some(Value::String(s)) => s.parse(),
        Some(Value::Array(a)) => {
            let v: Option<Vec<u32>> = a.iter().map(|x| x.as_u64().map(|n| n as u32)).collect();
            Index::new(v.ok_or_else(|| Error::Domain(format!("`{key}` must hold positive integers")))?)
        }
        _ => Err(Error::Domain(format!("missing index parameter `{key}`"))),
    }
}

fn param_u(p: &Value, key: &str) -> Result<u32, Error> {
    p.get(key)
        .and_then(Value::as_u64)
        .map(|n| n as u32)
        .ok_or_else(|| Error::Domain(format!("missing integer parameter `{key}`")))
}

fn param_str<'a>(p: &'a Value, key: &str) -> Result<&'a str, Error> {
    p.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Domain(format!("missing string parameter `{key}`")))
}

fn idx_weight(p: &Value, key: &str) -> u32 {
    param_index(p, key).map(|k| k.weight()).unwrap_or(0)
}

fn u_or_zero(p: &Value, key: &str) -> u32 {
    param_u(p, key).unwrap_or(0)
}

fn fc(text: &str) -> FormalCombination {
    FormalCombination::parse(text).expect("built-in formula parses")
}

// Numeric comparison.

struct Compared {
    lhs: BigComplex,
    rhs: BigComplex,
    abs_err: f64,
}

fn evaluate_pair(ctx: &Context, lhs: &FormalCombination, rhs: &FormalCombination, s: Option<i64>) -> Result<Compared, Error> {
    let l = ctx.evaluator.eval_combination(lhs, s)?;
    let r = ctx.evaluator.eval_combination(rhs, s)?;
    let abs_err = l.sub(&r).abs_f64();
    Ok(Compared { lhs: l, rhs: r, abs_err })
}

fn passes(c: &Compared, tol: f64) -> bool {
    c.abs_err <= tol && c.lhs.error() < tol / 10.0 && c.rhs.error() < tol / 10.0
}

fn numeric_outcome(ctx: &Context, c: Compared, tol: f64) -> Outcome {
    let ok = passes(&c, tol);
    let message = (!ok && c.abs_err <= tol).then(|| {
        format!(
            "error estimates {:.1e}, {:.1e} not below tol/10",
            c.lhs.error(),
            c.rhs.error()
        )
    });
    Outcome {
        status: Some(if ok { Status::Pass } else { Status::Fail }),
        lhs: Some(c.lhs.to_decimal(ctx.digits)),
        rhs: Some(c.rhs.to_decimal(ctx.digits)),
        abs_err: Some(c.abs_err),
        tol,
        message,
        ..Outcome::default()
    }
}

fn compare(ctx: &Context, lhs: &FormalCombination, rhs: &FormalCombination, s: Option<i64>, tol: f64) -> Result<Outcome, Error> {
    Ok(numeric_outcome(ctx, evaluate_pair(ctx, lhs, rhs, s)?, tol))
}

fn show_c(z: Complex64) -> String {
    format!("{:.15e} {} {:.15e}i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs())
}

fn i_pow(e: i64) -> Complex64 {
    Complex64::new(0.0, 1.0).powi(e.rem_euclid(4) as i32)
}

// Check bodies.

fn constants(ctx: &Context, p: &Value) -> Result<Outcome, Error> {
    let k = param_u(p, "k")?;
    let bits = bits_for_digits(ctx.digits + 10);
    let expected = match k {
        1 => reference::half_pi(bits),
        2 => reference::catalan(bits).mul_pow2(1),
        3 => reference::pi_cubed_over_16(bits),
        _ => return Err(Error::Domain(format!("no independent reference for T̃({k})"))),
    };
    let policy = PrecisionPolicy {
        target_digits: ctx.digits + 2,
        ..ctx.evaluator.policy().clone()
    };
    let v = ttilde(&Index::from_slice(&[k]), &policy)?;
    let tol = 10f64.powi(-(ctx.digits as i32 - 1)) * expected.to_f64().abs();
    let c = Compared {
        lhs: BigComplex::from_real(v),
        rhs: BigComplex::from_real(expected),
        abs_err: 0.0,
    };
    let abs_err = c.lhs.sub(&c.rhs).abs_f64();
    Ok(numeric_outcome(ctx, Compared { abs_err, ..c }, tol))
}

fn term(c: i64, e: u8, constants: &[&str], j: u32, res: &str) -> ExpansionTerm {
    ExpansionTerm {
        coeff: num_rational::BigRational::from_integer(c.into()),
        i_power: e,
        constants: constants.iter().map(|s| s.parse().expect("literal index")).collect(),
        j,
        residual: res.parse().expect("literal index"),
    }
}

fn show_terms(ts: &[ExpansionTerm]) -> String {
    ts.iter().map(ToString::to_string).collect::<Vec<_>>().join(" + ")
}

fn expansion_golden(_: &Context, p: &Value) -> Result<Outcome, Error> {
    let case = param_str(p, "case")?;
    match case {
        "A2" => {
            let mut got = expand_a(&Index::from_slice(&[2]))?;
            let mut want = vec![term(1, 0, &[], 1, "1"), term(1, 0, &[], 0, "2"), term(-1, 1, &["2"], 0, "")];
            got.sort();
            want.sort();
            Ok(Outcome::symbolic(got == want, show_terms(&got), show_terms(&want)))
        }
        "lambda2" | "lambda21" => {
            let (k, printed) = if case == "lambda2" {
                ("2", "i s T(1,s+1) + i T(2,s) - i T(2) T(s)")
            } else {
                ("2,1", "-i s T(2,s+1) - 2i T(3,s) - i s T(2) T(s+1) + 2i T(3) T(s)")
            };
            let got = lambda_expansion(&k.parse()?)?;
            let want = fc(printed);
            Ok(Outcome::symbolic(got == want, got.to_string(), want.to_string()))
        }
        other => Err(Error::Domain(format!("unknown golden case `{other}`"))),
    }
}

fn index_properties(_: &Context, p: &Value) -> Result<Outcome, Error> {
    let case = param_str(p, "case")?;
    let max_w = param_u(p, "weight_max")?;
    let all = || (1..=max_w).flat_map(Index::all_of_weight);
    let mut checked = 0usize;
    let mut bad: Option<String> = None;
    let mut note = |ok: bool, what: String| {
        checked += 1;
        if !ok && bad.is_none() {
            bad = Some(what);
        }
    };
    match case {
        "involution" => {
            for k in all().filter(Index::is_admissible) {
                let d = k.dual()?;
                let ok = d.dual()? == k && d.depth() + k.depth() == k.weight() as usize;
                note(ok, format!("({k})"));
            }
        }
        "word-round-trip" => {
            for k in all() {
                note(Index::from_word(&k.to_word())? == k, format!("({k})"));
            }
        }
        "shuffle-mass" => {
            let ks: Vec<Index> = all().collect();
            for u in &ks {
                for v in &ks {
                    let (a, b) = (u.weight() as u64, v.weight() as u64);
                    let want = (0..a).fold(1u64, |acc, i| acc * (a + b - i) / (i + 1)) as i64;
                    note(IndexCombination::shuffle(u, v).mass() == want, format!("({u}) ⧢ ({v})"));
                }
            }
        }
        "i-power" => {
            for k in all() {
                note(i_power_consistent(&k, &expand_a(&k)?), format!("({k})"));
            }
        }
        other => return Err(Error::Domain(format!("unknown property `{other}`"))),
    }
    let ok = bad.is_none();
    Ok(Outcome {
        status: Some(if ok { Status::Pass } else { Status::Fail }),
        message: Some(match bad {
            None => format!("{checked} cases"),
            Some(b) => format!("first counterexample {b}"),
        }),
        ..Outcome::default()
    })
}

fn shuffle_examples(ctx: &Context, p: &Value) -> Result<Outcome, Error> {
    let (u, v, lhs, rhs) = match param_str(p, "case")? {
        "T2squared" => ("2", "2", "T(2)^2", "4 T(1,3) + 2 T(2,2)"),
        "T2T3" => ("2", "1,2", "T(2) T(3)", "6 T(1,4) + 3 T(2,3) + T(3,2)"),
        other => return Err(Error::Domain(format!("unknown shuffle case `{other}`"))),
    };
    let (lhs, rhs) = (fc(lhs), fc(rhs));
    let id = shuffle_relation_at_one(&u.parse()?, &v.parse()?)?;
    let printed = lhs.sub(&rhs);
    let derived = (0..4).any(|e| id.difference().scale(&GaussianRational::i_pow(e)) == printed);
    let mut out = compare(ctx, &lhs, &rhs, None, ctx.identity_tol())?;
    if !derived {
        out.status = Some(Status::Fail);
        out.message = Some(format!("shuffle of ({u}) and ({v}) gives {} instead", id.difference()));
    }
    Ok(out)
}

/// The second route for `λ(𝕜; s)`, if one is known.
fn second_route(k: &Index) -> Option<FormalCombination> {
    if k.entries() == [1] {
        return Some(fc("s T(s+1)"));
    }
    closed_form_for(k)
}

fn route_agreement(ctx: &Context, p: &Value) -> Result<Outcome, Error> {
    let k = param_index(p, "k")?;
    let s = param_u(p, "s")? as i64;
    let other = second_route(&k).ok_or_else(|| Error::Domain(format!("no closed form covers ({k})")))?;
    compare(ctx, &lambda_expansion(&k)?, &other, Some(s), ctx.identity_tol())
}

fn sum_relations(ctx: &Context, p: &Value) -> Result<Outcome, Error> {
    let kind = match param_str(p, "kind")? {
        "me1" => SumRelation::Me1,
        "me2" => SumRelation::Me2,
        other => return Err(Error::Domain(format!("unknown sum relation `{other}`"))),
    };
    let id = sum_relation(kind, param_u(p, "r")? as usize, param_u(p, "k")?)?;
    compare(ctx, &id.lhs, &id.rhs, Some(param_u(p, "s")? as i64), ctx.identity_tol())
}

fn duality_params(p: &Value) -> Result<(Index, usize, usize), Error> {
    Ok((param_index(p, "k")?, param_u(p, "p")? as usize, param_u(p, "q")? as usize))
}

fn duality_example(ctx: &Context, p: &Value) -> Result<Outcome, Error> {
    let (k, pp, qq) = duality_params(p)?;
    let id = duality_relation(&k, pp, qq, CircledSemantics::Insertion)?;
    let expected = fc(param_str(p, "expect")?);
    let tol = ctx.identity_tol();
    let l = evaluate_pair(ctx, &id.lhs, &expected, None)?;
    let r = evaluate_pair(ctx, &id.rhs, &expected, None)?;
    let ok = passes(&l, tol) && passes(&r, tol);
    Ok(Outcome {
        status: Some(if ok { Status::Pass } else { Status::Fail }),
        lhs: Some(l.lhs.to_decimal(ctx.digits)),
        rhs: Some(r.lhs.to_decimal(ctx.digits)),
        abs_err: Some(l.abs_err.max(r.abs_err)),
        tol,
        message: Some(format!("expected {}", l.rhs.to_decimal(ctx.digits))),
        ..Outcome::default()
    })
}

fn duality_grid(ctx: &Context, p: &Value) -> Result<Outcome, Error> {
    let (k, pp, qq) = duality_params(p)?;
    let id = duality_relation(&k, pp, qq, CircledSemantics::Insertion)?;
    compare(ctx, &id.lhs, &id.rhs, None, ctx.tol(ctx.tolerance * GRID_TOL_FACTOR))
}

fn oracle_duality(ctx: &Context, p: &Value) -> Result<Outcome, Error> {
    let k = param_index(p, "k")?;
    let o = oracle::apoly_at_one(&k, &ctx.oracle)?;
    let t = ctx.evaluator.ttilde(&k.dual()?)?;
    let series = i_pow(k.depth() as i64 - k.weight() as i64) * t.to_f64();
    let abs_err = (o.value - series).norm();
    let ok = abs_err <= ORACLE_TOL && o.error < ORACLE_TOL / 10.0 && t.error() < ORACLE_TOL / 10.0;
    Ok(Outcome {
        status: Some(if ok { Status::Pass } else { Status::Fail }),
        lhs: Some(show_c(o.value)),
        rhs: Some(show_c(series)),
        abs_err: Some(abs_err),
        tol: ORACLE_TOL,
        message: Some(format!("oracle error estimate {:.1e}", o.error)),
        ..Outcome::default()
    })
}

fn lambda_quadrature(ctx: &Context, p: &Value) -> Result<Outcome, Error> {
    let k = param_index(p, "k")?;
    let s = param_u(p, "s")?;
    let q = oracle::lambda_quadrature(&k, s, &ctx.oracle)?;
    let e = ctx.evaluator.eval_combination(&lambda_expansion(&k)?, Some(s as i64))?;
    let (re, im) = e.to_f64_pair();
    let series = Complex64::new(re, im);
    let abs_err = (q.value - series).norm();
    let ok = abs_err <= QUADRATURE_TOL && q.error < QUADRATURE_TOL / 10.0 && e.error() < QUADRATURE_TOL / 10.0;
    Ok(Outcome {
        status: Some(if ok { Status::Pass } else { Status::Fail }),
        lhs: Some(show_c(q.value)),
        rhs: Some(show_c(series)),
        abs_err: Some(abs_err),
        tol: QUADRATURE_TOL,
        message: Some(format!("quadrature error estimate {:.1e}", q.error)),
        ..Outcome::default()
    })
}

fn pointwise_expansion(ctx: &Context, p: &Value) -> Result<Outcome, Error> {
    let k = param_index(p, "k")?;
    let t = p
        .get("t")
        .and_then(Value::as_f64)
        .ok_or_else(|| Error::Domain("missing real parameter `t`".into()))?;
    let path = oracle::apoly_on_path(&k, oracle::PathSpec::LambdaCurve { t_end: t })?;
    let terms = expand_a(&k)?;
    let symbols: Vec<Index> = terms.iter().flat_map(|t| t.constants.iter().cloned()).collect();
    ctx.evaluator.prefetch(&symbols)?;
    let constant = |x: &Index| ctx.evaluator.cached(x).map_or(f64::NAN, |v| v.to_f64());
    let series = oracle::expansion_at(&terms, t, &constant, &ctx.oracle)?;
    let abs_err = (path.value - series.value).norm();
    let ok = abs_err <= ORACLE_TOL && path.error < ORACLE_TOL / 10.0 && series.error < ORACLE_TOL / 10.0;
    Ok(Outcome {
        status: Some(if ok { Status::Pass } else { Status::Fail }),
        lhs: Some(show_c(path.value)),
        rhs: Some(show_c(series.value)),
        abs_err: Some(abs_err),
        tol: ORACLE_TOL,
        ..Outcome::default()
    })
}

/// Grid used both by `duality-grid` and by the product adjudication.
pub fn duality_grid_points() -> Vec<Value> {
    let mut v = Vec::new();
    for k in ["2", "3", "2,2", "3,2", "2,3"] {
        for p in 1..=3 {
            for q in 1..=3 {
                v.push(json!({"k": k, "p": p, "q": q}));
            }
        }
    }
    v
}

/// Picks the unique variant that holds at every grid point.
fn adjudicate(names: &[&str], holds: &[Vec<bool>], worst: &[f64], tol: f64) -> Outcome {
    let points = holds.first().map_or(0, Vec::len);
    let tallies: Vec<String> = names
        .iter()
        .zip(holds)
        .map(|(n, h)| format!("{n} {}/{points}", h.iter().filter(|x| **x).count()))
        .collect();
    let all: Vec<usize> = (0..names.len()).filter(|&v| holds[v].iter().all(|x| *x)).collect();
    let message = Some(tallies.join(", "));
    match all.as_slice() {
        [w] => Outcome {
            status: Some(Status::Ambiguous),
            winner: Some(names[*w].to_string()),
            abs_err: Some(worst[*w]),
            tol,
            message,
            ..Outcome::default()
        },
        _ => Outcome {
            status: Some(Status::Fail),
            tol,
            message: Some(format!(
                "{} variants hold everywhere; {}",
                all.len(),
                tallies.join(", ")
            )),
            ..Outcome::default()
        },
    }
}

fn variant_adjudication(ctx: &Context, p: &Value) -> Result<Outcome, Error> {
    match param_str(p, "case")? {
        "circled" => {
            let tol = ctx.tol(ctx.tolerance * GRID_TOL_FACTOR);
            let sems = CircledSemantics::ALL;
            let mut holds = vec![Vec::new(); sems.len()];
            let mut worst = vec![0f64; sems.len()];
            for pt in duality_grid_points() {
                let (k, pp, qq) = duality_params(&pt)?;
                for (v, sem) in sems.iter().enumerate() {
                    let id = duality_relation(&k, pp, qq, *sem)?;
                    let c = evaluate_pair(ctx, &id.lhs, &id.rhs, None)?;
                    worst[v] = worst[v].max(c.abs_err);
                    holds[v].push(passes(&c, tol));
                }
            }
            let names: Vec<&str> = sems.iter().map(|s| s.name()).collect();
            Ok(adjudicate(&names, &holds, &worst, tol))
        }
        "binomial" => {
            let tol = ctx.identity_tol();
            let variants = [BinomialVariant::Printed, BinomialVariant::Corrected];
            let mut holds = vec![Vec::new(); 2];
            let mut worst = [0f64; 2];
            for r in 1..=4usize {
                let direct = lambda_expansion(&one_two_index(r, r))?;
                for s in [2i64, 3] {
                    for (v, var) in variants.iter().enumerate() {
                        let c = evaluate_pair(ctx, &closed_form_ones_two(r, *var)?, &direct, Some(s))?;
                        worst[v] = worst[v].max(c.abs_err);
                        holds[v].push(passes(&c, tol));
                    }
                }
            }
            let names: Vec<&str> = variants.iter().map(|v| v.name()).collect();
            Ok(adjudicate(&names, &holds, &worst, tol))
        }
        other => Err(Error::Domain(format!("unknown adjudication case `{other}`"))),
    }
}

// Default parameter sets.

fn d_constants() -> Vec<Value> {
    (1..=3).map(|k| json!({"k": k})).collect()
}

fn d_golden() -> Vec<Value> {
    ["A2", "lambda2", "lambda21"].iter().map(|c| json!({"case": c})).collect()
}

fn d_properties() -> Vec<Value> {
    vec![
        json!({"case": "involution", "weight_max": 10}),
        json!({"case": "word-round-trip", "weight_max": 10}),
        json!({"case": "shuffle-mass", "weight_max": 6}),
        json!({"case": "i-power", "weight_max": 8}),
    ]
}

fn d_shuffle() -> Vec<Value> {
    ["T2squared", "T2T3"].iter().map(|c| json!({"case": c})).collect()
}

fn d_routes() -> Vec<Value> {
    let mut v = Vec::new();
    for (r, j) in [(2, 1), (3, 1), (3, 2)] {
        for s in [2, 3] {
            v.push(json!({"k": one_two_index(r, j).to_string(), "s": s}));
        }
    }
    for r in 1..=3 {
        for s in [2, 3] {
            v.push(json!({"k": one_two_index(r, r).to_string(), "s": s}));
        }
    }
    for s in [2, 3, 4] {
        v.push(json!({"k": "1", "s": s}));
    }
    v
}

fn d_sums() -> Vec<Value> {
    let mut v = Vec::new();
    for kind in ["me1", "me2"] {
        for r in 1..=3 {
            for k in 1..=3 {
                for s in [2, 3] {
                    v.push(json!({"kind": kind, "r": r, "k": k, "s": s}));
                }
            }
        }
    }
    v
}

fn d_duality_example() -> Vec<Value> {
    vec![json!({"k": "2,2", "p": 1, "q": 2, "expect": "2i T(3,3) + 3i T(4,2)"})]
}

fn d_oracle() -> Vec<Value> {
    (2..=5)
        .flat_map(Index::all_of_weight)
        .filter(Index::is_admissible)
        .map(|k| json!({"k": k.to_string()}))
        .collect()
}

fn d_quadrature() -> Vec<Value> {
    let mut v = Vec::new();
    for k in ["1", "2", "2,1"] {
        for s in [2, 3] {
            v.push(json!({"k": k, "s": s}));
        }
    }
    v
}

fn d_pointwise() -> Vec<Value> {
    ["2", "2,1", "1,2", "2,2"]
        .iter()
        .map(|k| json!({"k": k, "t": 1.0}))
        .collect()
}

fn d_adjudication() -> Vec<Value> {
    vec![json!({"case": "binomial"}), json!({"case": "circled"})]
}

// Weights.

fn w_constants(p: &Value) -> u32 {
    u_or_zero(p, "k")
}

fn w_zero(_: &Value) -> u32 {
    0
}

fn w_golden(_: &Value) -> u32 {
    3
}

fn w_shuffle(p: &Value) -> u32 {
    match p.get("case").and_then(Value::as_str) {
        Some("T2squared") => 4,
        _ => 5,
    }
}

fn w_index_s(p: &Value) -> u32 {
    idx_weight(p, "k") + u_or_zero(p, "s")
}

fn w_sums(p: &Value) -> u32 {
    let (r, k) = (u_or_zero(p, "r"), u_or_zero(p, "k"));
    (k + r).saturating_sub(1) + u_or_zero(p, "s")
}

fn w_duality(p: &Value) -> u32 {
    (idx_weight(p, "k") + u_or_zero(p, "p") + u_or_zero(p, "q")).saturating_sub(1)
}

fn w_index(p: &Value) -> u32 {
    idx_weight(p, "k")
}

fn w_adjudication(p: &Value) -> u32 {
    match p.get("case").and_then(Value::as_str) {
        Some("binomial") => 7,
        _ => 8,
    }
}

pub static REGISTRY: &[CheckSpec] = &[
    CheckSpec {
        id: "constants",
        description: "depth-one T̃ values against independent references",
        statement: "T̃(1) = π/2, T̃(2) = 2G, T̃(3) = π³/16",
        tags: &["numeric"],
        body: constants,
        defaults: d_constants,
        weight: w_constants,
    },
    CheckSpec {
        id: "expansion-golden",
        description: "symbolic expansions of 𝒜(2) and λ for (2), (2,1)",
        statement: "𝒜(2;(1+z)/(1-z)) = 𝒜(1;(1+z)/(1-z))A(1;z) + A(2;z) - iT̃(2) and the λ(2;s), λ(2,1;s) formulas",
        tags: &["symbolic"],
        body: expansion_golden,
        defaults: d_golden,
        weight: w_golden,
    },
    CheckSpec {
        id: "index-properties",
        description: "exhaustive combinatorial invariants of indices and expansions",
        statement: "duality involution, word round trip, shuffle mass, i-power bookkeeping",
        tags: &["symbolic", "properties"],
        body: index_properties,
        defaults: d_properties,
        weight: w_zero,
    },
    CheckSpec {
        id: "shuffle-examples",
        description: "product identities at z = 1 derived from the shuffle product",
        statement: "T̃(2)² = 4T̃(1,3) + 2T̃(2,2); T̃(2)T̃(3) = 6T̃(1,4) + 3T̃(2,3) + T̃(3,2)",
        tags: &["numeric"],
        body: shuffle_examples,
        defaults: d_shuffle,
        weight: w_shuffle,
    },
    CheckSpec {
        id: "route-agreement",
        description: "λ by the general expansion against closed forms",
        statement: "closed forms of λ({1}_(j-1),2,{1}_(r-j); s), λ({1}_(r-1),2; s) and λ(1; s) = sT̃(s+1)",
        tags: &["numeric"],
        body: route_agreement,
        defaults: d_routes,
        weight: w_index_s,
    },
    CheckSpec {
        id: "sum-relations",
        description: "sum relations over compositions of fixed weight and depth",
        statement: "Σ_comp λ(𝕜; s) against ones-prefixed λ values, both directions",
        tags: &["numeric"],
        body: sum_relations,
        defaults: d_sums,
        weight: w_sums,
    },
    CheckSpec {
        id: "duality-example",
        description: "both sides of the duality relation for (2,2), p = 1, q = 2",
        statement: "λ(1,2,1;2) - λ(2,1;3) = 2iT̃(3,3) + 3iT̃(4,2)",
        tags: &["numeric", "duality"],
        body: duality_example,
        defaults: d_duality_example,
        weight: w_duality,
    },
    CheckSpec {
        id: "duality-grid",
        description: "the duality relation on a grid of indices and p, q ≤ 3",
        statement: "λ({1}_(q-1),𝕜₋;p+1) - (-1)^wt λ({1}_(p-1),𝕜̄₋;q+1) = i^(r-wt+1)[…]",
        tags: &["numeric", "duality"],
        body: duality_grid,
        defaults: duality_grid_points,
        weight: w_duality,
    },
    CheckSpec {
        id: "oracle-duality",
        description: "𝒜(𝕜;1) by path integration against the dual T̃ series",
        statement: "𝒜(𝕜;1) = i^(dep-wt) T̃(𝕜†)",
        tags: &["oracle"],
        body: oracle_duality,
        defaults: d_oracle,
        weight: w_index,
    },
    CheckSpec {
        id: "lambda-quadrature",
        description: "λ from its defining integral against the expansion",
        statement: "λ(𝕜;s) = Γ(s)⁻¹ ∫ t^(s-1) 𝒜(𝕜; z(t)) sech t dt",
        tags: &["oracle"],
        body: lambda_quadrature,
        defaults: d_quadrature,
        weight: w_index_s,
    },
    CheckSpec {
        id: "pointwise-expansion",
        description: "𝒜 along the λ curve against its expansion in level-two series",
        statement: "𝒜(𝕜; z(t)) = Σ c i^e ΠT̃ t^j/j! A(𝕜'; ie^-t)",
        tags: &["oracle"],
        body: pointwise_expansion,
        defaults: d_pointwise,
        weight: w_index,
    },
    CheckSpec {
        id: "variant-adjudication",
        description: "which reading of the circled product and of the ({1}_(r-1),2) binomial holds",
        statement: "split-sum vs b-insertion product; binom(s+r-l-2, r+l-1) vs binom(s+r-l-2, r-l-1)",
        tags: &["numeric", "adjudication"],
        body: variant_adjudication,
        defaults: d_adjudication,
        weight: w_adjudication,
    },
];

pub fn find(id: &str) -> Option<&'static CheckSpec> {
    REGISTRY.iter().find(|c| c.id == id)
}
