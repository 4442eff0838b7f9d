//! Symbolic expansions of the λ function.
//!
//! [`expand_a`] writes the level-four polylogarithm `𝒜(𝕜; z)` as
//!
//! ```text
//! Σ c · i^e · Π_P T̃(P) · 𝒜({1}_j; (1+z)/(1-z)) · A(𝕜'; z)
//! ```
//!
//! and [`lambda_expansion`] turns every such term into
//! `c · i^(e + dep 𝕜') · Π T̃(P) · binom(s+j-1, j) · T̃(𝕜', s+j)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{GaussianRational, SPoly};
use crate::combination::{FormalCombination, Monomial, TailSymbol};
use crate::error::{Error, Result};
use crate::index::{Index, IndexCombination, Letter, SplitMode};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpansionTerm {
    pub coeff: BigRational,
    /// Exponent of `i`, in `0..4`.
    pub i_power: u8,
    /// Constant factors `T̃(P)`, sorted.
    pub constants: Vec<Index>,
    pub j: u32,
    pub residual: Index,
}

impl fmt::Display for ExpansionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        if self.i_power != 0 {
            write!(f, "·i^{}", self.i_power)?;
        }
        for p in &self.constants {
            write!(f, "·T̃({p})")?;
        }
        if self.j > 0 {
            write!(f, "·𝒜({{1}}_{}; (1+z)/(1-z))", self.j)?;
        }
        if !self.residual.is_empty() {
            write!(f, "·A({}; z)", self.residual)?;
        }
        Ok(())
    }
}

type TermKey = (u8, Vec<Index>, u32, Index);
type TermMap = BTreeMap<TermKey, BigRational>;

fn memo() -> &'static RwLock<HashMap<Index, Arc<TermMap>>> {
    static MEMO: OnceLock<RwLock<HashMap<Index, Arc<TermMap>>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

fn accumulate(out: &mut TermMap, key: TermKey, c: &BigRational) {
    let e = out.entry(key).or_insert_with(BigRational::zero);
    *e += c;
}

fn expand_map(k: &Index) -> Arc<TermMap> {
    if let Some(hit) = memo().read().expect("memo lock").get(k) {
        return hit.clone();
    }
    let computed = Arc::new(compute(k));
    memo()
        .write()
        .expect("memo lock")
        .entry(k.clone())
        .or_insert(computed)
        .clone()
}

fn compute(k: &Index) -> TermMap {
    let mut out = TermMap::new();
    let Some((parent, last)) = k.pop() else {
        out.insert((0, vec![], 0, Index::empty()), BigRational::one());
        return out;
    };
    if last >= 2 {
        let km = k.minus_last().expect("last entry ≥ 2");
        for ((e, p, j, res), c) in expand_map(&km).iter() {
            for l in 0..=*j {
                accumulate(&mut out, (*e, p.clone(), j - l, res.push(l + 1)), c);
            }
            let mut p2 = p.clone();
            p2.push(res.push(j + 1));
            p2.sort();
            let e2 = ((*e as usize + res.depth() + 1) % 4) as u8;
            accumulate(&mut out, (e2, p2, 0, Index::empty()), &-c.clone());
        }
    } else {
        // k = (k0, {1}_m). The shuffle 𝒜(parent)𝒜(1) contains k itself m
        // times; those copies are moved to the left-hand side.
        let m = k.entries().iter().rev().take_while(|&&x| x == 1).count();
        let k0_len = k.head(k.depth() - m).expect("in range").weight() as usize;
        for ((e, p, j, res), c) in expand_map(&parent).iter() {
            let lifted = c * BigRational::from_integer(BigInt::from(j + 1));
            accumulate(&mut out, (*e, p.clone(), j + 1, res.clone()), &lifted);
        }
        let w = parent.to_word();
        for pos in 0..k0_len {
            let ins = Index::from_word(&w.insert(pos, Letter::B)).expect("b-initial");
            debug_assert_ne!(&ins, k);
            for (key, c) in expand_map(&ins).iter() {
                accumulate(&mut out, key.clone(), &-c.clone());
            }
        }
        let inv = BigRational::new(BigInt::one(), BigInt::from(m));
        for v in out.values_mut() {
            *v *= &inv;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Terms of `𝒜(𝕜; z)` in the basis `𝒜({1}_j; (1+z)/(1-z)) A(𝕜'; z)`.
///
/// Results are memoized in a process-wide table.
pub fn expand_a(k: &Index) -> Result<Vec<ExpansionTerm>> {
    if k.is_empty() {
        return Err(Error::EmptyIndex);
    }
    Ok(expand_map(k)
        .iter()
        .map(|((e, p, j, res), c)| ExpansionTerm {
            coeff: c.clone(),
            i_power: *e,
            constants: p.clone(),
            j: *j,
            residual: res.clone(),
        })
        .collect())
}

/// `λ(𝕜; s)` as a formal combination in `s`.
pub fn lambda_expansion(k: &Index) -> Result<FormalCombination> {
    let mut out = FormalCombination::zero();
    for t in expand_a(k)? {
        let c = GaussianRational::real(t.coeff.clone());
        let c = &c * &GaussianRational::i_pow(t.i_power as i64 + t.residual.depth() as i64);
        let poly = SPoly::binomial(t.j as i64 - 1, t.j).scale(&c);
        let tail = TailSymbol {
            prefix: t.residual.clone(),
            shift: t.j as i64,
        };
        out.add_term(Monomial::new(t.constants.clone(), Some(tail)), poly);
    }
    Ok(out)
}

fn q(n: i64) -> GaussianRational {
    GaussianRational::from_int(n)
}

fn i_times(n: i64) -> GaussianRational {
    &GaussianRational::i_pow(1) * &q(n)
}

fn binom_int(n: u64, k: u64) -> i64 {
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) as i64 / (i as i64 + 1);
    }
    r
}

/// `({1}_(j-1), 2, {1}_(r-j))`.
pub fn one_two_index(r: usize, j: usize) -> Index {
    Index::ones(j - 1).push(2).concat(&Index::ones(r - j))
}

/// Closed form of `λ({1}_(j-1), 2, {1}_(r-j); s)` for `1 ≤ j < r`.
pub fn closed_form_one_two(r: usize, j: usize) -> Result<FormalCombination> {
    if !(1 <= j && j < r) {
        return Err(Error::Domain(format!("closed form needs 1 ≤ j < r, got r={r}, j={j}")));
    }
    let (ri, ji) = (r as i64, j as i64);
    let mut f = FormalCombination::zero();
    let sign = if (r - j).is_multiple_of(2) { 1 } else { -1 };
    for m in (r - j)..=r {
        let mi = m as i64;
        let c = i_times(sign * binom_int(m as u64, (r - j) as u64));
        let poly = SPoly::binomial(ri - mi - 1, (r - m) as u32).scale(&c);
        let sym = FormalCombination::tail_symbol(Index::from_slice(&[m as u32 + 1]), ri - mi);
        f = f.add(&sym.mul_poly(&poly));
    }
    for l in 0..=(r - j) {
        let li = l as i64;
        let sign = if l % 2 == 0 { -1 } else { 1 };
        let c = i_times(sign * binom_int((j + l) as u64, l as u64));
        let poly = SPoly::binomial(ri - ji - li - 1, (r - j - l) as u32).scale(&c);
        let sym = FormalCombination::tail_symbol(Index::empty(), ri - ji - li)
            .mul(&FormalCombination::symbol(Index::from_slice(&[(j + l) as u32 + 1])))?;
        f = f.add(&sym.mul_poly(&poly));
    }
    Ok(f)
}

/// Lower argument of the binomial inside the `({1}_(r-1), 2)` closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinomialVariant {
    /// `binom(s+r-l-2, r+l-1)`.
    Printed,
    /// `binom(s+r-l-2, r-l-1)`.
    Corrected,
}

impl BinomialVariant {
    pub fn name(self) -> &'static str {
        match self {
            BinomialVariant::Printed => "printed",
            BinomialVariant::Corrected => "corrected",
        }
    }
}

/// Closed form of `λ({1}_(r-1), 2; s)`.
pub fn closed_form_ones_two(r: usize, variant: BinomialVariant) -> Result<FormalCombination> {
    if r == 0 {
        return Err(Error::Domain("closed form needs r ≥ 1".into()));
    }
    let ri = r as i64;
    let i = GaussianRational::i_pow(1);
    let mut f = FormalCombination::tail_symbol(Index::from_slice(&[1]), ri)
        .mul_poly(&SPoly::binomial(ri - 1, r as u32).scale(&i));
    for l in 0..r {
        let li = l as i64;
        let bottom = match variant {
            BinomialVariant::Printed => r + l - 1,
            BinomialVariant::Corrected => r - l - 1,
        };
        let poly = SPoly::binomial(ri - li - 2, bottom as u32).scale(&i);
        let sym = FormalCombination::tail_symbol(Index::from_slice(&[l as u32 + 2]), ri - li - 1);
        f = f.add(&sym.mul_poly(&poly));
    }
    let last = FormalCombination::tail_symbol(Index::empty(), 0)
        .mul(&FormalCombination::symbol(Index::from_slice(&[r as u32 + 1])))?
        .scale(&i);
    Ok(f.sub(&last))
}

/// The closed form that applies to `𝕜`, if any.
pub fn closed_form_for(k: &Index) -> Option<FormalCombination> {
    let e = k.entries();
    let twos: Vec<usize> = e.iter().enumerate().filter(|(_, &x)| x == 2).map(|(p, _)| p).collect();
    if twos.len() != 1 || e.iter().any(|&x| x > 2) {
        return None;
    }
    let (r, j) = (e.len(), twos[0] + 1);
    if j == r {
        closed_form_ones_two(r, BinomialVariant::Corrected).ok()
    } else {
        closed_form_one_two(r, j).ok()
    }
}

/// Where an identity comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    SumRelationMe1,
    SumRelationMe2,
    Duality,
    ShuffleAtOne,
}

/// For which `s` an identity is claimed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Validity {
    /// Every integer `s ≥ min`.
    IntegerS { min: i64 },
    /// Both sides are free of `s`.
    Constant,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LambdaIdentity {
    pub label: String,
    pub lhs: FormalCombination,
    pub rhs: FormalCombination,
    pub validity: Validity,
    pub provenance: Provenance,
}

impl LambdaIdentity {
    pub fn difference(&self) -> FormalCombination {
        self.lhs.sub(&self.rhs)
    }

    /// Both sides carry a single common weight.
    pub fn is_homogeneous(&self) -> bool {
        let mut w = self.lhs.weights();
        w.extend(self.rhs.weights());
        w.sort_unstable();
        w.dedup();
        w.len() <= 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SumRelation {
    Me1,
    Me2,
}

fn lambda_shifted(k: &Index, d: i64) -> Result<FormalCombination> {
    Ok(lambda_expansion(k)?.shift_s(d))
}

fn sum_over(ks: &[Index], d: i64) -> Result<FormalCombination> {
    let mut acc = FormalCombination::zero();
    for k in ks {
        acc = acc.add(&lambda_shifted(k, d)?);
    }
    Ok(acc)
}

/// The two sum relations over compositions of weight `k + r - 1`.
pub fn sum_relation(kind: SumRelation, r: usize, k: u32) -> Result<LambdaIdentity> {
    if r == 0 || k == 0 {
        return Err(Error::Domain(format!("sum relation needs r, k ≥ 1, got r={r}, k={k}")));
    }
    let ri = r as i64;
    let mut rhs = FormalCombination::zero();
    for j in 0..r {
        let ji = j as i64;
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let poly = SPoly::binomial(ri - ji - 2, (r - j - 1) as u32).scale(&q(sign));
        let inner = match kind {
            SumRelation::Me1 => lambda_shifted(&Index::ones(j).push(k), ri - ji - 1)?,
            SumRelation::Me2 => sum_over(&Index::compositions(k + j as u32, j + 1), ri - ji - 1)?,
        };
        rhs = rhs.add(&inner.mul_poly(&poly));
    }
    let (lhs, provenance) = match kind {
        SumRelation::Me1 => (
            sum_over(&Index::compositions(k + r as u32 - 1, r), 0)?,
            Provenance::SumRelationMe1,
        ),
        SumRelation::Me2 => (
            lambda_expansion(&Index::ones(r - 1).push(k))?,
            Provenance::SumRelationMe2,
        ),
    };
    Ok(LambdaIdentity {
        label: format!("{kind:?}(r={r}, k={k})").to_lowercase(),
        lhs,
        rhs,
        validity: Validity::IntegerS { min: 2 },
        provenance,
    })
}

/// Reading of the circled product `(X)₋ ⊛ (1,1)` inside the duality relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircledSemantics {
    /// All non-terminal insertions of one `b` into the word of `X`.
    Insertion,
    /// Split sum with `k_{1,1} ≥ 2` on the first block only.
    SplitLiteral,
    /// Split sum with the constraint on every block.
    SplitPerBlock,
}

impl CircledSemantics {
    pub const ALL: [CircledSemantics; 3] = [
        CircledSemantics::Insertion,
        CircledSemantics::SplitLiteral,
        CircledSemantics::SplitPerBlock,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CircledSemantics::Insertion => "insertion",
            CircledSemantics::SplitLiteral => "split_literal",
            CircledSemantics::SplitPerBlock => "split_per_block",
        }
    }

    fn apply(self, x: &Index) -> Result<IndexCombination> {
        match self {
            CircledSemantics::Insertion => x.b_insertion_product(),
            CircledSemantics::SplitLiteral => Ok(x.split_sum_product(SplitMode::Literal)),
            CircledSemantics::SplitPerBlock => Ok(x.split_sum_product(SplitMode::PerBlock)),
        }
    }
}

fn dual_symbol(k: &Index) -> Result<FormalCombination> {
    Ok(FormalCombination::symbol(k.dual()?))
}

fn circled_dual(x: &Index, sem: CircledSemantics) -> Result<FormalCombination> {
    let mut acc = FormalCombination::zero();
    for (w, c) in sem.apply(x)?.iter() {
        acc = acc.add(&dual_symbol(w)?.scale(&q(c)));
    }
    Ok(acc)
}

fn parity_sign(w: u32) -> i64 {
    if w.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The duality relation for `𝕜` with every entry `≥ 2`, at `s = p + 1` and
/// `s = q + 1` on the left.
pub fn duality_relation(k: &Index, p: usize, q_: usize, sem: CircledSemantics) -> Result<LambdaIdentity> {
    if k.is_empty() || k.entries().iter().any(|&x| x < 2) || p == 0 || q_ == 0 {
        return Err(Error::Domain(format!(
            "duality relation needs p, q ≥ 1 and every entry of ({k}) ≥ 2"
        )));
    }
    let r = k.depth();
    let wt = k.weight();
    let (pi, qi) = (p as i64, q_ as i64);

    let left = Index::ones(q_ - 1).concat(&k.minus_last()?);
    let right = Index::ones(p - 1).concat(&k.reversed().minus_last()?);
    let lhs = lambda_expansion(&left)?
        .at(pi + 1)?
        .sub(&lambda_expansion(&right)?.at(qi + 1)?.scale(&q(parity_sign(wt))));

    let mut body = FormalCombination::zero();
    for j in 0..r {
        let back = k.tail_rev(j)?;
        let kk = k.entries()[r - j - 1];
        for l in 1..=kk.saturating_sub(2) {
            let u = Index::ones(p - 1).concat(&back).push(l + 1);
            let v = Index::ones(q_ - 1).concat(&k.head(r - j - 1)?).push(kk - l);
            let sign = parity_sign(back.weight()) * parity_sign(l - 1);
            body = body.add(&dual_symbol(&u)?.mul(&dual_symbol(&v)?)?.scale(&q(sign)));
        }
    }
    for j in 0..r.saturating_sub(1) {
        let back = k.tail_rev(j + 1)?;
        let y = Index::ones(p - 1).concat(&back);
        let x = Index::ones(q_ - 1).concat(&k.head(r - j - 1)?);
        let bracket = dual_symbol(&x)?
            .mul(&circled_dual(&y, sem)?)?
            .sub(&dual_symbol(&y)?.mul(&circled_dual(&x, sem)?)?);
        body = body.add(&bracket.scale(&q(parity_sign(back.weight()))));
    }
    let pre = GaussianRational::i_pow(r as i64 - wt as i64 + 1);
    Ok(LambdaIdentity {
        label: format!("duality(k=({k}), p={p}, q={q_}, {})", sem.name()),
        lhs,
        rhs: body.scale(&pre),
        validity: Validity::Constant,
        provenance: Provenance::Duality,
    })
}

/// `𝒜(𝕜; 1) = i^(dep - wt) T̃(𝕜†)`, with `𝒜(φ; 1) = 1`.
fn value_at_one(k: &Index) -> Result<FormalCombination> {
    if k.is_empty() {
        return Ok(FormalCombination::scalar(GaussianRational::one()));
    }
    let e = k.depth() as i64 - k.weight() as i64;
    Ok(dual_symbol(k)?.scale(&GaussianRational::i_pow(e)))
}

/// The shuffle product `𝒜(u)𝒜(v) = Σ 𝒜(w)` evaluated at `z = 1`.
pub fn shuffle_relation_at_one(u: &Index, v: &Index) -> Result<LambdaIdentity> {
    for x in [u, v] {
        if !x.is_empty() && !x.is_admissible() {
            return Err(Error::NotAdmissible(x.clone()));
        }
    }
    let lhs = value_at_one(u)?.mul(&value_at_one(v)?)?;
    let mut rhs = FormalCombination::zero();
    for (w, c) in IndexCombination::shuffle(u, v).iter() {
        rhs = rhs.add(&value_at_one(w)?.scale(&q(c)));
    }
    Ok(LambdaIdentity {
        label: format!("shuffle(({u}), ({v}))"),
        lhs,
        rhs,
        validity: Validity::Constant,
        provenance: Provenance::ShuffleAtOne,
    })
}

/// Checks the i-power bookkeeping `e + dep(𝕜') ≡ wt(𝕜) − dep(𝕜) (mod 4)`.
pub fn i_power_consistent(k: &Index, terms: &[ExpansionTerm]) -> bool {
    let target = (k.weight() as i64 - k.depth() as i64).rem_euclid(4);
    terms
        .iter()
        .all(|t| (t.i_power as i64 + t.residual.depth() as i64).rem_euclid(4) == target)
}

/// Sum of `|c|` over the terms, a rough size measure used by diagnostics.
pub fn coefficient_mass(terms: &[ExpansionTerm]) -> BigRational {
    terms.iter().map(|t| t.coeff.abs()).sum()
}
