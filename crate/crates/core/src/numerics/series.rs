//! Nested alternating sums for `T̃(𝕜)` with Euler-transform acceleration.
//!
//! ```text
//! T̃(k1..kr) = 2^r Σ_{0<m1<…<mr, mj ≡ j mod 2} (-1)^((mr-r)/2) / (m1^k1 ⋯ mr^kr)
//! ```
//!
//! The inner sums are carried as partial sums `F_j(M)` over `m_j ≤ M`, so the
//! outer series has terms `a_n = F_{r-1}(r+2n-1) / (r+2n)^kr` with sign `(-1)^n`.

use astro_float::BigFloat;
use serde::{Deserialize, Serialize};

use super::bigreal::{bigfloat_to_f64, bits_for_digits, BigReal, RM};
use crate::error::{Error, Result};
use crate::index::Index;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    /// Requested absolute accuracy, in decimal digits.
    pub target_digits: u32,
    /// Working digits; `None` means `target + 10 + 5·weight`.
    pub guard_digits: Option<u32>,
    /// Ceiling on the number of outer terms before giving up.
    pub max_outer_terms: usize,
    /// Initial truncation depth and Euler order; `None` derives it from the
    /// working precision.
    pub acceleration_order: Option<usize>,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            target_digits: 30,
            guard_digits: None,
            max_outer_terms: 20_000,
            acceleration_order: None,
        }
    }
}

impl PrecisionPolicy {
    pub fn with_digits(target_digits: u32) -> Self {
        PrecisionPolicy {
            target_digits,
            ..Self::default()
        }
    }

    pub fn working_digits(&self, weight: u32) -> u32 {
        self.guard_digits
            .unwrap_or(self.target_digits + 10 + 5 * weight)
            .max(self.target_digits + 1)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(g) = self.guard_digits {
            if g <= self.target_digits {
                return Err(Error::Domain(format!(
                    "guard digits ({g}) must exceed target digits ({})",
                    self.target_digits
                )));
            }
        }
        if self.target_digits == 0 {
            return Err(Error::Domain("target digits must be positive".into()));
        }
        Ok(())
    }

    fn tolerance(&self) -> f64 {
        10f64.powi(-(self.target_digits as i32))
    }
}

/// Source of the outer alternating terms `a_n` (without the sign).
trait OuterTerms {
    fn extend_to(&mut self, n: usize);
    fn terms(&self) -> &[BigFloat];
}

struct NestedTerms {
    k: Vec<u32>,
    f: Vec<BigFloat>,
    next_m: u64,
    terms: Vec<BigFloat>,
    bits: usize,
}

impl NestedTerms {
    fn new(k: &Index, bits: usize) -> Self {
        let r = k.depth();
        let mut f = vec![BigFloat::from_u64(0, bits); r];
        f[0] = BigFloat::from_u64(1, bits);
        NestedTerms {
            k: k.entries().to_vec(),
            f,
            next_m: 1,
            terms: Vec::new(),
            bits,
        }
    }

    fn inv_pow(&self, m: u64, k: u32) -> BigFloat {
        let p = self.bits;
        let mk = BigFloat::from_u64(m, p).powi(k as usize, p, RM);
        BigFloat::from_u64(1, p).div(&mk, p, RM)
    }
}

impl OuterTerms for NestedTerms {
    fn extend_to(&mut self, n: usize) {
        let r = self.k.len() as u64;
        while self.terms.len() < n {
            let m = self.next_m;
            self.next_m += 1;
            if m >= r && m % 2 == r % 2 {
                let a = self.f[r as usize - 1].mul(&self.inv_pow(m, self.k[r as usize - 1]), self.bits, RM);
                self.terms.push(a);
            }
            // F_j(M) = F_j(M-1) + [M ≡ j mod 2] F_{j-1}(M-1) / M^{k_j}, highest j first.
            for j in (1..r as usize).rev() {
                if m % 2 == j as u64 % 2 {
                    let inc = self.f[j - 1].mul(&self.inv_pow(m, self.k[j - 1]), self.bits, RM);
                    self.f[j] = self.f[j].add(&inc, self.bits, RM);
                }
            }
        }
    }

    fn terms(&self) -> &[BigFloat] {
        &self.terms
    }
}

/// `a_n = 1/(2n+1)^k`, the depth-one series without nesting.
struct BetaTerms {
    k: u32,
    terms: Vec<BigFloat>,
    bits: usize,
}

impl OuterTerms for BetaTerms {
    fn extend_to(&mut self, n: usize) {
        let p = self.bits;
        while self.terms.len() < n {
            let m = 2 * self.terms.len() as u64 + 1;
            let mk = BigFloat::from_u64(m, p).powi(self.k as usize, p, RM);
            self.terms.push(BigFloat::from_u64(1, p).div(&mk, p, RM));
        }
    }

    fn terms(&self) -> &[BigFloat] {
        &self.terms
    }
}

/// `Σ_{n<N} (-1)^n a_n + (-1)^N Σ_{k<K} (-1)^k Δ^k a_N / 2^(k+1)`.
fn euler_sum(a: &[BigFloat], n: usize, order: usize, bits: usize) -> BigFloat {
    let mut s = BigFloat::from_u64(0, bits);
    for (i, t) in a[..n].iter().enumerate() {
        s = if i % 2 == 0 { s.add(t, bits, RM) } else { s.sub(t, bits, RM) };
    }
    let mut d: Vec<BigFloat> = a[n..n + order].to_vec();
    let half = BigFloat::from_f64(0.5, bits);
    let mut w = half.clone();
    let mut tail = BigFloat::from_u64(0, bits);
    for k in 0..order {
        let term = d[0].mul(&w, bits, RM);
        tail = if k % 2 == 0 { tail.add(&term, bits, RM) } else { tail.sub(&term, bits, RM) };
        w = w.mul(&half, bits, RM);
        for i in 0..d.len() - 1 {
            d[i] = d[i + 1].sub(&d[i], bits, RM);
        }
        d.pop();
    }
    if n.is_multiple_of(2) {
        s.add(&tail, bits, RM)
    } else {
        s.sub(&tail, bits, RM)
    }
}

/// An accelerated value with its two-depth error estimate.
fn accelerate(
    src: &mut dyn OuterTerms,
    what: &str,
    policy: &PrecisionPolicy,
    digits: u32,
    bits: usize,
) -> Result<(BigFloat, f64)> {
    let tol = policy.tolerance();
    let mut n = policy
        .acceleration_order
        .unwrap_or((digits as f64 * 1.4) as usize + 12);
    let mut best: Option<(BigFloat, f64)> = None;
    loop {
        let delta = (n / 8).max(4);
        let need = 2 * (n + delta);
        if need > policy.max_outer_terms {
            let (v, e) = best.unwrap_or((BigFloat::from_u64(0, bits), f64::INFINITY));
            return Err(Error::NonConvergence {
                what: what.into(),
                estimate: BigReal::new(v, e, bits).to_decimal_unchecked(20),
                error: e,
            });
        }
        src.extend_to(need);
        let a = src.terms();
        let s1 = euler_sum(a, n, n, bits);
        let s2 = euler_sum(a, n + delta, n + delta, bits);
        let diff = bigfloat_to_f64(&s2.sub(&s1, bits, RM)).abs();
        let scale = a.iter().take(need).map(|t| bigfloat_to_f64(t).abs()).fold(0.0, f64::max);
        let rounding = need as f64 * scale * 2f64.powi(-(bits as i32) + 2);
        let err = diff + rounding;
        log::trace!("{what}: N=K={n} diff={diff:.2e} rounding={rounding:.2e}");
        if err <= tol {
            return Ok((s2, err));
        }
        if best.as_ref().is_none_or(|(_, e)| err < *e) {
            best = Some((s2, err));
        }
        n = n * 3 / 2 + 1;
    }
}

/// `T̃(𝕜)` for any nonempty index.
///
/// An index ending in 1 gives a conditionally convergent outer series; it is
/// evaluated with the same acceleration and a warning is logged.
pub fn ttilde(k: &Index, policy: &PrecisionPolicy) -> Result<BigReal> {
    if k.is_empty() {
        return Err(Error::EmptyIndex);
    }
    policy.validate()?;
    if !k.is_admissible() {
        log::warn!("T̃({k}) is conditionally convergent");
    }
    let digits = policy.working_digits(k.weight());
    let bits = bits_for_digits(digits);
    let mut src = NestedTerms::new(k, bits);
    let what = format!("T̃({k})");
    // The series is scaled by 2^r afterwards, so ask for r extra bits of accuracy.
    let mut p = policy.clone();
    p.target_digits += (k.depth() as f64 * 0.302).ceil() as u32;
    let (v, err) = accelerate(&mut src, &what, &p, digits, bits)?;
    Ok(BigReal::new(v, err, bits).mul_pow2(k.depth() as i32))
}

/// `β(k) = Σ (-1)^n / (2n+1)^k`, so that `T̃(k) = 2β(k)`.
pub fn dirichlet_beta(k: u32, policy: &PrecisionPolicy) -> Result<BigReal> {
    if k == 0 {
        return Err(Error::Domain("dirichlet_beta needs k ≥ 1".into()));
    }
    policy.validate()?;
    let digits = policy.working_digits(k);
    let bits = bits_for_digits(digits);
    let mut src = BetaTerms {
        k,
        terms: Vec::new(),
        bits,
    };
    let (v, err) = accelerate(&mut src, &format!("β({k})"), policy, digits, bits)?;
    Ok(BigReal::new(v, err, bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(s: &str) -> Index {
        s.parse().unwrap()
    }

    #[test]
    fn depth_one_values() {
        let p = PrecisionPolicy::with_digits(25);
        let t1 = ttilde(&idx("1"), &p).unwrap();
        assert!(t1.to_decimal(22).starts_with("1.57079632679489661923"));
        let b2 = dirichlet_beta(2, &p).unwrap();
        assert!(b2.to_decimal(22).starts_with("0.91596559417721901505"));
        let b4 = dirichlet_beta(4, &p).unwrap();
        assert!(b4.to_decimal(15).starts_with("0.98894455174110"));
    }

    #[test]
    fn shuffle_relation_holds() {
        // T̃(2)² = 4T̃(1,3) + 2T̃(2,2)
        let p = PrecisionPolicy::with_digits(25);
        let t2 = ttilde(&idx("2"), &p).unwrap();
        let rhs = ttilde(&idx("1,3"), &p)
            .unwrap()
            .mul_pow2(2)
            .add(&ttilde(&idx("2,2"), &p).unwrap().mul_pow2(1));
        let d = t2.mul(&t2).sub(&rhs);
        assert!(d.to_f64().abs() < 1e-24, "{}", d.to_f64());
        assert!(d.error() < 1e-24);
    }

    #[test]
    fn small_budget_fails_loudly() {
        let p = PrecisionPolicy {
            max_outer_terms: 20,
            ..PrecisionPolicy::with_digits(40)
        };
        match ttilde(&idx("2,3"), &p) {
            Err(Error::NonConvergence { error, .. }) => assert!(error > 0.0),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn guard_must_exceed_target() {
        let p = PrecisionPolicy {
            guard_digits: Some(10),
            ..PrecisionPolicy::with_digits(20)
        };
        assert!(ttilde(&idx("2"), &p).is_err());
    }
}
