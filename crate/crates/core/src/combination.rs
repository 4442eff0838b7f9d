//! Formal linear combinations of products of T̃-symbols.
//!
//! A monomial is a product of constant symbols `T̃(𝕜)` and at most one
//! symbol depending on `s`, written `T̃(𝕜', s + shift)`. Coefficients are
//! polynomials in `s` so that binomial factors such as `binom(s+j-1, j)`
//! combine exactly.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{GaussianRational, SPoly};
use crate::error::{Error, Result};
use crate::index::Index;

/// `T̃(prefix, s + shift)`; an empty prefix renders as `T̃(s + shift)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TailSymbol {
    pub prefix: Index,
    pub shift: i64,
}

impl TailSymbol {
    pub fn at(&self, s: i64) -> Result<Index> {
        let last = s + self.shift;
        if last < 1 {
            return Err(Error::Domain(format!(
                "T̃({}) at s={s} has last entry {last} < 1",
                self
            )));
        }
        Ok(self.prefix.push(last as u32))
    }
}

impl fmt::Display for TailSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.prefix.is_empty() {
            write!(f, "{},", self.prefix)?;
        }
        match self.shift.cmp(&0) {
            Ordering::Equal => f.write_str("s"),
            Ordering::Greater => write!(f, "s+{}", self.shift),
            Ordering::Less => write!(f, "s-{}", -self.shift),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    constants: Vec<Index>,
    tail: Option<TailSymbol>,
}

impl Monomial {
    pub fn new(mut constants: Vec<Index>, tail: Option<TailSymbol>) -> Self {
        constants.sort_by(cmp_index);
        Monomial { constants, tail }
    }

    pub fn unit() -> Self {
        Self::default()
    }

    pub fn constants(&self) -> &[Index] {
        &self.constants
    }

    pub fn tail(&self) -> Option<&TailSymbol> {
        self.tail.as_ref()
    }

    /// Total weight, with the `s` slot counted as zero.
    pub fn weight(&self) -> i64 {
        let c: i64 = self.constants.iter().map(|k| k.weight() as i64).sum();
        c + self
            .tail
            .as_ref()
            .map_or(0, |t| t.prefix.weight() as i64 + t.shift)
    }

    pub fn depth(&self) -> usize {
        self.constants.iter().map(Index::depth).sum::<usize>()
            + self.tail.as_ref().map_or(0, |t| t.prefix.depth() + 1)
    }

    fn mul(&self, o: &Monomial) -> Result<Monomial> {
        let tail = match (&self.tail, &o.tail) {
            (Some(_), Some(_)) => {
                return Err(Error::Domain(
                    "product of two s-dependent symbols is not representable".into(),
                ))
            }
            (t, None) | (None, t) => t.clone(),
        };
        let mut c = self.constants.clone();
        c.extend(o.constants.iter().cloned());
        Ok(Monomial::new(c, tail))
    }
}

fn cmp_index(a: &Index, b: &Index) -> Ordering {
    (a.weight(), a.depth(), a.entries()).cmp(&(b.weight(), b.depth(), b.entries()))
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.weight(), self.depth())
            .cmp(&(o.weight(), o.depth()))
            .then_with(|| {
                let a = self.constants.iter();
                let b = o.constants.iter();
                a.len().cmp(&b.len()).then_with(|| {
                    a.zip(b)
                        .map(|(x, y)| cmp_index(x, y))
                        .find(|c| c.is_ne())
                        .unwrap_or(Ordering::Equal)
                })
            })
            .then_with(|| self.tail.cmp(&o.tail))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.constants.len() {
            let k = &self.constants[i];
            let mut n = 1;
            while i + n < self.constants.len() && &self.constants[i + n] == k {
                n += 1;
            }
            parts.push(if n == 1 {
                format!("T({k})")
            } else {
                format!("T({k})^{n}")
            });
            i += n;
        }
        if let Some(t) = &self.tail {
            parts.push(format!("T({t})"));
        }
        f.write_str(&parts.join(" "))
    }
}

/// A finite sum of `coefficient(s) · monomial`, with no zero coefficient stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalCombination {
    terms: BTreeMap<Monomial, SPoly>,
}

impl FormalCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: GaussianRational) -> Self {
        let mut f = Self::zero();
        f.add_term(Monomial::unit(), SPoly::constant(c));
        f
    }

    pub fn poly(p: SPoly) -> Self {
        let mut f = Self::zero();
        f.add_term(Monomial::unit(), p);
        f
    }

    /// The single symbol `T̃(𝕜)`.
    pub fn symbol(k: Index) -> Self {
        let mut f = Self::zero();
        f.add_term(Monomial::new(vec![k], None), SPoly::one());
        f
    }

    /// The single symbol `T̃(prefix, s + shift)`.
    pub fn tail_symbol(prefix: Index, shift: i64) -> Self {
        let mut f = Self::zero();
        f.add_term(Monomial::new(vec![], Some(TailSymbol { prefix, shift })), SPoly::one());
        f
    }

    pub fn add_term(&mut self, m: Monomial, p: SPoly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                let sum = o.get() + &p;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
            Entry::Vacant(v) => {
                v.insert(p);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &SPoly)> {
        self.terms.iter()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, p) in &o.terms {
            out.add_term(m.clone(), p.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&GaussianRational::from_int(-1))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.mul_poly(&SPoly::constant(c.clone()))
    }

    pub fn mul_poly(&self, p: &SPoly) -> Self {
        let mut out = Self::zero();
        for (m, q) in &self.terms {
            out.add_term(m.clone(), q * p);
        }
        out
    }

    /// Product of two combinations; fails when both factors depend on `s`
    /// through a T̃-symbol.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (m1, p1) in &self.terms {
            for (m2, p2) in &o.terms {
                out.add_term(m1.mul(m2)?, p1 * p2);
            }
        }
        Ok(out)
    }

    /// Substitutes `s → s + d`.
    pub fn shift_s(&self, d: i64) -> Self {
        let mut out = Self::zero();
        for (m, p) in &self.terms {
            let tail = m.tail.as_ref().map(|t| TailSymbol {
                prefix: t.prefix.clone(),
                shift: t.shift + d,
            });
            out.add_term(Monomial::new(m.constants.clone(), tail), p.shift(d));
        }
        out
    }

    /// True when some coefficient or symbol involves `s`.
    pub fn depends_on_s(&self) -> bool {
        self.terms
            .iter()
            .any(|(m, p)| m.tail.is_some() || !p.is_constant())
    }

    /// Substitutes an integer value for `s`.
    pub fn at(&self, s: i64) -> Result<Self> {
        let mut out = Self::zero();
        for (m, p) in &self.terms {
            let mut c = m.constants.clone();
            if let Some(t) = &m.tail {
                c.push(t.at(s)?);
            }
            out.add_term(Monomial::new(c, None), SPoly::constant(p.eval_int(s)));
        }
        Ok(out)
    }

    /// Every constant T̃-symbol that appears.
    pub fn constant_symbols(&self) -> Vec<Index> {
        let mut v: Vec<Index> = self
            .terms
            .keys()
            .flat_map(|m| m.constants.iter().cloned())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Distinct monomial weights, for grading checks.
    pub fn weights(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self.terms.keys().map(Monomial::weight).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_json_terms()).expect("plain data serializes")
    }

    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        let mut out = Vec::new();
        for (m, p) in &self.terms {
            for (b, c) in p.to_binomial_basis().iter().enumerate() {
                for (part, iexp) in [(&c.re, 0u8), (&c.im, 1u8)] {
                    if part.is_zero() {
                        continue;
                    }
                    out.push(JsonTerm {
                        coeff: part.to_string(),
                        i: iexp,
                        binomial: b as u32,
                        constants: m.constants.iter().map(|k| k.entries().to_vec()).collect(),
                        tail: m.tail.as_ref().map(|t| JsonTail {
                            prefix: t.prefix.entries().to_vec(),
                            shift: t.shift,
                        }),
                    });
                }
            }
        }
        out
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let terms: Vec<JsonTerm> = serde_json::from_value(v.clone())
            .map_err(|e| Error::Formula { pos: 0, msg: e.to_string() })?;
        let mut out = Self::zero();
        for t in terms {
            let q: BigRational = t
                .coeff
                .parse()
                .map_err(|_| Error::Formula { pos: 0, msg: format!("bad rational `{}`", t.coeff) })?;
            let c = GaussianRational::real(q);
            let c = &c * &GaussianRational::i_pow(t.i as i64);
            let mut basis = vec![GaussianRational::zero(); t.binomial as usize + 1];
            basis[t.binomial as usize] = c;
            let constants = t
                .constants
                .into_iter()
                .map(Index::new)
                .collect::<Result<Vec<_>>>()?;
            let tail = match t.tail {
                Some(tt) => Some(TailSymbol {
                    prefix: Index::new(tt.prefix)?,
                    shift: tt.shift,
                }),
                None => None,
            };
            out.add_term(Monomial::new(constants, tail), SPoly::from_binomial_basis(&basis));
        }
        Ok(out)
    }

    /// Parses text such as `i s T(1,s+1) + i T(2,s) - i T(2) T(s)` or
    /// `2iT(3,3)+3iT(4,2)`. Also accepts `T̃`, `binom(s+a,b)`, `^n`,
    /// parentheses and `*`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser::new(text);
        let f = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTail {
    pub prefix: Vec<u32>,
    pub shift: i64,
}

/// One entry of the JSON form: `coeff · i^i · binom(s+binomial-1, binomial) · monomial`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coeff: String,
    pub i: u8,
    pub binomial: u32,
    pub constants: Vec<Vec<u32>>,
    pub tail: Option<JsonTail>,
}

fn fmt_coeff(c: &GaussianRational) -> (bool, String) {
    // Returns (negative, magnitude text) where unit magnitudes render empty.
    let one = BigRational::one();
    match (c.re.is_zero(), c.im.is_zero()) {
        (false, true) => {
            let a = c.re.abs();
            (c.re.is_negative(), if a == one { String::new() } else { a.to_string() })
        }
        (true, false) => {
            let a = c.im.abs();
            let t = if a == one { "i".to_string() } else { format!("{a}i") };
            (c.im.is_negative(), t)
        }
        _ => (false, format!("({} + {}i)", c.re, c.im).replace("+ -", "- ")),
    }
}

impl fmt::Display for FormalCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, p) in &self.terms {
            for (b, c) in p.to_binomial_basis().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (neg, mag) = fmt_coeff(c);
                let mut factors: Vec<String> = Vec::new();
                if !mag.is_empty() {
                    factors.push(mag);
                }
                match b {
                    0 => {}
                    1 => factors.push("s".into()),
                    _ => factors.push(format!("binom(s+{},{b})", b - 1)),
                }
                let mono = m.to_string();
                if !mono.is_empty() {
                    factors.push(mono);
                }
                if factors.is_empty() {
                    factors.push("1".into());
                }
                let body = factors.join(" ");
                match (first, neg) {
                    (true, false) => f.write_str(&body)?,
                    (true, true) => write!(f, "-{body}")?,
                    (false, false) => write!(f, " + {body}")?,
                    (false, true) => write!(f, " - {body}")?,
                }
                first = false;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Formula {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some('+') => {
                self.pos += 1;
                Some(false)
            }
            Some('-') => {
                self.pos += 1;
                Some(true)
            }
            Some('−') => {
                self.pos += '−'.len_utf8();
                Some(true)
            }
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<FormalCombination> {
        let neg = self.sign().unwrap_or(false);
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        while let Some(neg) = self.sign() {
            let t = self.term()?;
            acc = if neg { acc.sub(&t) } else { acc.add(&t) };
        }
        Ok(acc)
    }

    fn starts_factor(&mut self) -> bool {
        match self.peek() {
            Some(c) => c.is_ascii_digit() || matches!(c, 'i' | 's' | 'T' | 'b' | '('),
            None => false,
        }
    }

    fn term(&mut self) -> Result<FormalCombination> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') || self.eat('·') {
                let f = self.power()?;
                acc = acc.mul(&f).map_err(|e| self.err(&e.to_string()))?;
            } else if self.starts_factor() {
                let f = self.power()?;
                acc = acc.mul(&f).map_err(|e| self.err(&e.to_string()))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<FormalCombination> {
        let base = self.factor()?;
        let mut exp = None;
        if self.eat('^') {
            exp = Some(self.uint()?);
        } else if self.eat('²') {
            exp = Some(2);
        } else if self.eat('³') {
            exp = Some(3);
        }
        match exp {
            None => Ok(base),
            Some(n) => {
                let mut acc = FormalCombination::scalar(GaussianRational::one());
                for _ in 0..n {
                    acc = acc.mul(&base).map_err(|e| self.err(&e.to_string()))?;
                }
                Ok(acc)
            }
        }
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(self.err("expected an integer"));
        }
        self.pos += digits.len();
        digits.parse().map_err(|_| self.err("integer too large"))
    }

    fn factor(&mut self) -> Result<FormalCombination> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end of input"))?;
        if c.is_ascii_digit() {
            let n = self.uint()?;
            let mut q = BigRational::from_integer(BigInt::from(n));
            if self.peek() == Some('/') {
                self.pos += 1;
                let d = self.uint()?;
                if d == 0 {
                    return Err(self.err("zero denominator"));
                }
                q /= BigRational::from_integer(BigInt::from(d));
            }
            return Ok(FormalCombination::scalar(GaussianRational::real(q)));
        }
        if self.eat('(') {
            let inner = self.expr()?;
            self.expect(')')?;
            return Ok(inner);
        }
        if self.rest().starts_with("binom") {
            self.pos += "binom".len();
            self.expect('(')?;
            self.expect('s')?;
            let a = self.opt_offset()?;
            self.expect(',')?;
            let b = self.uint()?;
            self.expect(')')?;
            return Ok(FormalCombination::poly(SPoly::binomial(a, b as u32)));
        }
        if self.eat('i') {
            return Ok(FormalCombination::scalar(GaussianRational::i_pow(1)));
        }
        if self.eat('s') {
            return Ok(FormalCombination::poly(SPoly::s()));
        }
        if self.eat('T') {
            self.eat('\u{303}');
            self.expect('(')?;
            return self.symbol_args();
        }
        Err(self.err(&format!("unexpected character `{c}`")))
    }

    fn opt_offset(&mut self) -> Result<i64> {
        match self.sign() {
            None => Ok(0),
            Some(neg) => {
                let n = self.uint()? as i64;
                Ok(if neg { -n } else { n })
            }
        }
    }

    fn symbol_args(&mut self) -> Result<FormalCombination> {
        let mut entries: Vec<u32> = Vec::new();
        let mut tail_shift = None;
        loop {
            if tail_shift.is_some() {
                return Err(self.err("only the last argument may involve s"));
            }
            if self.eat('s') {
                tail_shift = Some(self.opt_offset()?);
            } else {
                let k = self.uint()?;
                if k == 0 || k > u32::MAX as u64 {
                    return Err(self.err("entry must be ≥ 1"));
                }
                entries.push(k as u32);
            }
            if self.eat(')') {
                break;
            }
            self.expect(',')?;
        }
        let prefix = Index::new(entries)?;
        Ok(match tail_shift {
            Some(shift) => FormalCombination::tail_symbol(prefix, shift),
            None => FormalCombination::symbol(prefix),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        let f = FormalCombination::parse("i s T(1,s+1) + i T(2,s) - i T(2) T(s)").unwrap();
        assert_eq!(f.len(), 3);
        let g = FormalCombination::parse(&f.to_string()).unwrap();
        assert_eq!(f, g);
        let h = FormalCombination::parse("2iT(3,3)+3iT(4,2)").unwrap();
        assert_eq!(h.to_string(), "2i T(3,3) + 3i T(4,2)");
    }

    #[test]
    fn binomials_and_powers() {
        let f = FormalCombination::parse("binom(s+1,2) T(s) - T(2)^2 + T̃(2)²").unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.to_string(), "binom(s+1,2) T(s)");
    }

    #[test]
    fn substitution() {
        let f = FormalCombination::parse("i s T(1,s+1) + i T(2,s) - i T(2) T(s)").unwrap();
        let g = FormalCombination::parse("3i T(1,4) + i T(2,3) - i T(2) T(3)").unwrap();
        assert_eq!(f.at(3).unwrap(), g);
        assert!(!g.depends_on_s());
        assert_eq!(f.shift_s(1).at(2).unwrap(), g);
    }

    #[test]
    fn json_round_trip() {
        let f = FormalCombination::parse("(1/2 + 3i) binom(s+2,3) T(2,s+1) - 5 T(3) T(2,1) + 7i").unwrap();
        let j = f.to_json();
        assert_eq!(FormalCombination::from_json(&j).unwrap(), f);
        assert!(j.to_string().contains("\"binomial\":3"));
    }

    #[test]
    fn parse_errors() {
        assert!(FormalCombination::parse("T(s,2)").is_err());
        assert!(FormalCombination::parse("T(0)").is_err());
        assert!(FormalCombination::parse("T(s) T(s)").is_err());
        assert!(FormalCombination::parse("2 +").is_err());
    }
}
