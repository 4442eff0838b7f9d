//! Shared T̃ value table and evaluation of formal combinations.

use std::collections::HashMap;
use std::sync::RwLock;

use super::bigreal::{bits_for_digits, BigComplex, BigReal};
use super::series::{ttilde, PrecisionPolicy};
use crate::algebra::GaussianRational;
use crate::combination::FormalCombination;
use crate::error::{Error, Result};
use crate::index::Index;
use crate::parallel;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    /// Falls back to sequential without the `parallel` feature.
    Parallel,
}

/// Evaluates every index independently.
pub fn ttilde_batch(ks: &[Index], policy: &PrecisionPolicy, mode: ExecMode) -> Vec<Result<BigReal>> {
    match mode {
        ExecMode::Sequential => parallel::map_sequential(ks, |k| ttilde(k, policy)),
        ExecMode::Parallel => parallel::map(ks, |k| ttilde(k, policy)),
    }
}

/// Evaluates T̃-values at a fixed policy and remembers them.
///
/// The table is shared between threads; a value is computed at most once per
/// evaluator unless two threads race on the same symbol, in which case the
/// first insert wins.
#[derive(Debug)]
pub struct Evaluator {
    policy: PrecisionPolicy,
    table: RwLock<HashMap<Index, BigReal>>,
}

impl Evaluator {
    pub fn new(policy: PrecisionPolicy) -> Self {
        Evaluator {
            policy,
            table: RwLock::new(HashMap::new()),
        }
    }

    pub fn policy(&self) -> &PrecisionPolicy {
        &self.policy
    }

    /// Seeds the table, e.g. from a persistent cache.
    pub fn insert(&self, k: Index, v: BigReal) {
        self.table.write().expect("table lock").entry(k).or_insert(v);
    }

    pub fn cached(&self, k: &Index) -> Option<BigReal> {
        self.table.read().expect("table lock").get(k).cloned()
    }

    /// All values computed or inserted so far.
    pub fn snapshot(&self) -> Vec<(Index, BigReal)> {
        let mut v: Vec<(Index, BigReal)> = self
            .table
            .read()
            .expect("table lock")
            .iter()
            .map(|(k, x)| (k.clone(), x.clone()))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn ttilde(&self, k: &Index) -> Result<BigReal> {
        if let Some(v) = self.cached(k) {
            return Ok(v);
        }
        let v = ttilde(k, &self.policy)?;
        self.insert(k.clone(), v.clone());
        Ok(v)
    }

    /// Computes all missing symbols, in parallel when enabled.
    pub fn prefetch(&self, ks: &[Index]) -> Result<()> {
        let missing: Vec<Index> = {
            let t = self.table.read().expect("table lock");
            let mut m: Vec<Index> = ks.iter().filter(|k| !t.contains_key(*k)).cloned().collect();
            m.sort();
            m.dedup();
            m
        };
        let results = ttilde_batch(&missing, &self.policy, ExecMode::Parallel);
        for (k, r) in missing.into_iter().zip(results) {
            self.insert(k, r?);
        }
        Ok(())
    }

    /// Numerical value of `f`, substituting `s` when `f` depends on it.
    pub fn eval_combination(&self, f: &FormalCombination, s: Option<i64>) -> Result<BigComplex> {
        let g = match (f.depends_on_s(), s) {
            (true, None) => return Err(Error::MissingS),
            (true, Some(s)) if s < 2 => {
                return Err(Error::Domain(format!("s must be an integer ≥ 2, got {s}")))
            }
            (true, Some(s)) => f.at(s)?,
            (false, _) => f.clone(),
        };
        let symbols = g.constant_symbols();
        self.prefetch(&symbols)?;
        let max_w = symbols.iter().map(Index::weight).max().unwrap_or(0);
        let bits = bits_for_digits(self.policy.working_digits(max_w));
        let mut acc = BigComplex::zero(bits);
        for (m, p) in g.terms() {
            let c: GaussianRational = p.constant_term();
            let mut prod = BigReal::from_i64(1, bits);
            for k in m.constants() {
                prod = prod.mul(&self.ttilde(k)?);
            }
            acc = acc.add(&BigComplex::real_times(&prod, &c));
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_combination_is_zero() {
        let e = Evaluator::new(PrecisionPolicy::with_digits(20));
        let v = e.eval_combination(&FormalCombination::zero(), None).unwrap();
        assert_eq!(v.abs_f64(), 0.0);
    }

    #[test]
    fn missing_s_is_an_error() {
        let e = Evaluator::new(PrecisionPolicy::with_digits(20));
        let f = FormalCombination::parse("s T(s+1)").unwrap();
        assert_eq!(e.eval_combination(&f, None).unwrap_err(), Error::MissingS);
    }

    #[test]
    fn lambda_two_at_three() {
        let e = Evaluator::new(PrecisionPolicy::with_digits(25));
        let f = FormalCombination::parse("i s T(1,s+1) + i T(2,s) - i T(2) T(s)").unwrap();
        let g = FormalCombination::parse("3iT(1,4)+iT(2,3)-iT(2)T(3)").unwrap();
        let d = e
            .eval_combination(&f, Some(3))
            .unwrap()
            .sub(&e.eval_combination(&g, None).unwrap());
        assert!(d.abs_f64() < 1e-24);
    }

    #[test]
    fn batch_modes_agree() {
        let ks: Vec<Index> = ["2", "1,3", "2,2"].iter().map(|s| s.parse().unwrap()).collect();
        let p = PrecisionPolicy::with_digits(20);
        let a = ttilde_batch(&ks, &p, ExecMode::Sequential);
        let b = ttilde_batch(&ks, &p, ExecMode::Parallel);
        for (x, y) in a.iter().zip(&b) {
            let (x, y) = (x.as_ref().unwrap(), y.as_ref().unwrap());
            assert_eq!(x.to_decimal(20), y.to_decimal(20));
        }
    }
}
