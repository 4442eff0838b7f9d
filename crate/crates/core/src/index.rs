//! Indices, words over {a, b}, duality, shuffle and b-insertion products.
//!
//! An index `(k1, ..., kr)` lists `k1` first; it is the innermost summation
//! variable of the nested sums. Its word is `b a^(k1-1) b a^(k2-1) ...` where
//! `a = du/u` and `b = 2du/(1-u^2)`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite sequence of positive integers. The empty index is written φ.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Index(Vec<u32>);

impl Index {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if let Some(pos) = entries.iter().position(|&k| k == 0) {
            return Err(Error::Parse {
                token: entries[pos].to_string(),
                reason: "entry must be ≥ 1".into(),
            });
        }
        Ok(Index(entries))
    }

    /// Builds an index from entries already known to be positive.
    ///
    /// # Panics
    /// Panics if an entry is zero.
    pub fn from_slice(entries: &[u32]) -> Self {
        assert!(entries.iter().all(|&k| k >= 1), "index entries must be ≥ 1");
        Index(entries.to_vec())
    }

    pub fn empty() -> Self {
        Index(Vec::new())
    }

    /// `{1}_m`.
    pub fn ones(m: usize) -> Self {
        Index(vec![1; m])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// Nonempty with last entry at least 2.
    pub fn is_admissible(&self) -> bool {
        matches!(self.last(), Some(k) if k >= 2)
    }

    /// Appends one entry.
    pub fn push(&self, k: u32) -> Self {
        assert!(k >= 1, "index entries must be ≥ 1");
        let mut v = self.0.clone();
        v.push(k);
        Index(v)
    }

    pub fn concat(&self, other: &Index) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Index(v)
    }

    /// Drops the last entry. Returns `None` on φ.
    pub fn pop(&self) -> Option<(Index, u32)> {
        let (&last, rest) = self.0.split_last()?;
        Some((Index(rest.to_vec()), last))
    }

    /// `𝕜₋ = (k1, ..., k_r - 1)`.
    pub fn minus_last(&self) -> Result<Index> {
        match self.last() {
            None => Err(Error::EmptyIndex),
            Some(1) => Err(Error::MinusLastOfOne(self.clone())),
            Some(k) => {
                let mut v = self.0.clone();
                *v.last_mut().unwrap() = k - 1;
                Ok(Index(v))
            }
        }
    }

    /// `→𝕜_j = (k1, ..., kj)`.
    pub fn head(&self, j: usize) -> Result<Index> {
        self.check_slice(j)?;
        Ok(Index(self.0[..j].to_vec()))
    }

    /// `←𝕜_j = (kr, k(r-1), ..., k(r+1-j))`, the last `j` entries in reverse.
    pub fn tail_rev(&self, j: usize) -> Result<Index> {
        self.check_slice(j)?;
        Ok(Index(self.0.iter().rev().take(j).copied().collect()))
    }

    /// `({1}_m, k1, ..., kr)`.
    pub fn ones_prefix(&self, m: usize) -> Index {
        Index::ones(m).concat(self)
    }

    /// The entries in reverse order.
    pub fn reversed(&self) -> Index {
        Index(self.0.iter().rev().copied().collect())
    }

    fn check_slice(&self, j: usize) -> Result<()> {
        if j > self.depth() {
            return Err(Error::SliceOutOfRange {
                j,
                depth: self.depth(),
            });
        }
        Ok(())
    }

    pub fn to_word(&self) -> Word {
        let mut letters = Vec::with_capacity(self.weight() as usize);
        for &k in &self.0 {
            letters.push(Letter::B);
            letters.extend(std::iter::repeat_n(Letter::A, k as usize - 1));
        }
        Word(letters)
    }

    pub fn from_word(w: &Word) -> Result<Index> {
        let mut entries: Vec<u32> = Vec::new();
        for (pos, &l) in w.0.iter().enumerate() {
            match (l, entries.last_mut()) {
                (Letter::B, _) => entries.push(1),
                (Letter::A, Some(k)) => *k += 1,
                (Letter::A, None) => {
                    debug_assert_eq!(pos, 0);
                    return Err(Error::WordStart(w.to_string()));
                }
            }
        }
        Ok(Index(entries))
    }

    /// Reverse the word and swap `a ↔ b`.
    pub fn dual(&self) -> Result<Index> {
        if !self.is_admissible() {
            return Err(Error::NotAdmissible(self.clone()));
        }
        Index::from_word(&self.to_word().dual())
    }

    /// `𝒜(𝕜)𝒜(1) − 𝒜(𝕜,1)`: every insertion of one `b` into the word of `𝕜`
    /// except the terminal one.
    pub fn b_insertion_product(&self) -> Result<IndexCombination> {
        if self.is_empty() {
            return Err(Error::EmptyIndex);
        }
        let w = self.to_word();
        let mut out = IndexCombination::zero();
        for p in 0..w.len() {
            out.add_term(Index::from_word(&w.insert(p, Letter::B))?, 1);
        }
        Ok(out)
    }

    /// The printed split sum attached to the circled product, kept for
    /// comparison with [`Index::b_insertion_product`].
    pub fn split_sum_product(&self, mode: SplitMode) -> IndexCombination {
        let r = self.depth();
        let mut out = IndexCombination::zero();
        for j in 0..r.saturating_sub(1) {
            let kj = self.0[j];
            for first in 1..=kj {
                let second = kj + 1 - first;
                let constrained = match mode {
                    SplitMode::Literal => j == 0,
                    SplitMode::PerBlock => true,
                };
                if constrained && first < 2 {
                    continue;
                }
                let mut v = self.0[..j].to_vec();
                v.push(first);
                v.push(second);
                v.extend_from_slice(&self.0[j + 1..]);
                out.add_term(Index(v), 1);
            }
        }
        out
    }

    /// All indices of the given weight and depth with entries ≥ 1, in
    /// lexicographic order.
    pub fn compositions(weight: u32, depth: usize) -> Vec<Index> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(depth);
        compositions_rec(weight, depth, &mut cur, &mut out);
        out
    }

    /// All indices of the given weight, any depth.
    pub fn all_of_weight(weight: u32) -> Vec<Index> {
        (0..=weight as usize)
            .flat_map(|d| Index::compositions(weight, d))
            .collect()
    }
}

fn compositions_rec(weight: u32, depth: usize, cur: &mut Vec<u32>, out: &mut Vec<Index>) {
    if depth == 0 {
        if weight == 0 {
            out.push(Index(cur.clone()));
        }
        return;
    }
    if (weight as usize) < depth {
        return;
    }
    for k in 1..=weight - (depth as u32 - 1) {
        cur.push(k);
        compositions_rec(weight - k, depth - 1, cur, out);
        cur.pop();
    }
}

impl TryFrom<Vec<u32>> for Index {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Index::new(v)
    }
}

impl From<Index> for Vec<u32> {
    fn from(k: Index) -> Self {
        k.0
    }
}

impl FromStr for Index {
    type Err = Error;

    /// Accepts `k1,k2,...`; surrounding parentheses and blanks are tolerated.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(t)
            .trim();
        if t.is_empty() || t == "φ" {
            return Ok(Index::empty());
        }
        let mut entries = Vec::new();
        for tok in t.split(',') {
            let tok = tok.trim();
            let digits = tok.strip_prefix('-').unwrap_or(tok);
            if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
                return Err(Error::Parse {
                    token: tok.into(),
                    reason: "not an integer".into(),
                });
            }
            match tok.parse::<i64>() {
                Ok(k) if (1..=u32::MAX as i64).contains(&k) => entries.push(k as u32),
                _ => {
                    return Err(Error::Parse {
                        token: tok.into(),
                        reason: "entry must be ≥ 1".into(),
                    })
                }
            }
        }
        Ok(Index(entries))
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

/// How the printed split sum constrains the first part of a split block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMode {
    /// `k_{1,1} ≥ 2` only when the first block is split.
    Literal,
    /// `k_{j,1} ≥ 2` for whichever block is split.
    PerBlock,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn swap(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dual(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.swap()).collect())
    }

    pub fn insert(&self, pos: usize, l: Letter) -> Word {
        let mut v = self.0.clone();
        v.insert(pos, l);
        Word(v)
    }

    /// All interleavings of two words, with multiplicity.
    pub fn shuffle(u: &Word, v: &Word) -> BTreeMap<Word, i64> {
        // table[j] holds the shuffle of u[..i] with v[..j] for the current i.
        let (n, m) = (u.len(), v.len());
        let mut prev: Vec<BTreeMap<Vec<Letter>, i64>> = Vec::with_capacity(m + 1);
        let mut acc = Vec::new();
        prev.push(BTreeMap::from([(Vec::new(), 1)]));
        for j in 0..m {
            acc.push(v.0[j]);
            prev.push(BTreeMap::from([(acc.clone(), 1)]));
        }
        for i in 0..n {
            let mut cur: Vec<BTreeMap<Vec<Letter>, i64>> = Vec::with_capacity(m + 1);
            cur.push(BTreeMap::from([(u.0[..=i].to_vec(), 1)]));
            for j in 0..m {
                let mut cell: BTreeMap<Vec<Letter>, i64> = BTreeMap::new();
                for (w, c) in &prev[j + 1] {
                    let mut w2 = w.clone();
                    w2.push(u.0[i]);
                    *cell.entry(w2).or_insert(0) += c;
                }
                for (w, c) in &cur[j] {
                    let mut w2 = w.clone();
                    w2.push(v.0[j]);
                    *cell.entry(w2).or_insert(0) += c;
                }
                cur.push(cell);
            }
            prev = cur;
        }
        prev.pop()
            .unwrap()
            .into_iter()
            .map(|(w, c)| (Word(w), c))
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                Letter::A => "a",
                Letter::B => "b",
            })?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                'a' => Ok(Letter::A),
                'b' => Ok(Letter::B),
                other => Err(Error::Parse {
                    token: other.to_string(),
                    reason: "word letters are a and b".into(),
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

/// Integer linear combination of indices. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IndexCombination {
    terms: BTreeMap<Index, i64>,
}

impl IndexCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(k: Index) -> Self {
        let mut c = Self::zero();
        c.add_term(k, 1);
        c
    }

    pub fn add_term(&mut self, k: Index, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(k) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&mut self, other: &IndexCombination) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), *c);
        }
    }

    pub fn get(&self, k: &Index) -> i64 {
        self.terms.get(k).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Index, i64)> {
        self.terms.iter().map(|(k, c)| (k, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> i64 {
        self.terms.values().sum()
    }

    /// `u ⧢ v` on the words of the two indices.
    pub fn shuffle(u: &Index, v: &Index) -> IndexCombination {
        let mut out = IndexCombination::zero();
        for (w, c) in Word::shuffle(&u.to_word(), &v.to_word()) {
            let k = Index::from_word(&w).expect("shuffle of b-initial words is b-initial");
            out.add_term(k, c);
        }
        out
    }
}

impl fmt::Display for IndexCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else { "+" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else if *c < 0 {
                f.write_str("-")?;
            }
            let a = c.unsigned_abs();
            if a != 1 {
                write!(f, "{a}·")?;
            }
            write!(f, "({k})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(s: &str) -> Index {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(idx("1,2").entries(), &[1, 2]);
        assert!(idx("").is_empty());
        let err = "2,0".parse::<Index>().unwrap_err();
        assert!(err.to_string().contains("entry must be ≥ 1"));
        assert!(err.to_string().contains('0'));
        assert!("2,x".parse::<Index>().is_err());
        assert!("-1".parse::<Index>().is_err());
        assert_eq!(idx("3,1,4").to_string(), "3,1,4");
    }

    #[test]
    fn words() {
        assert_eq!(idx("2,1").to_word().to_string(), "bab");
        assert_eq!(Index::from_word(&"bba".parse().unwrap()).unwrap(), idx("1,2"));
        assert!(Index::from_word(&"ab".parse().unwrap()).is_err());
        assert!(idx("").to_word().is_empty());
    }

    #[test]
    fn duals() {
        assert_eq!(idx("1,2").dual().unwrap(), idx("3"));
        assert_eq!(idx("2,2").dual().unwrap(), idx("2,2"));
        assert_eq!(idx("1,1,2").dual().unwrap(), idx("4"));
        assert!(idx("2,1").dual().is_err());
    }

    #[test]
    fn shuffles() {
        let s = IndexCombination::shuffle(&idx("1"), &idx("1"));
        assert_eq!(s.get(&idx("1,1")), 2);
        assert_eq!(s.len(), 1);
        let s = IndexCombination::shuffle(&idx("2"), &idx("1"));
        assert_eq!(s.get(&idx("2,1")), 1);
        assert_eq!(s.get(&idx("1,2")), 2);
        assert_eq!(s.len(), 2);
        assert_eq!(IndexCombination::shuffle(&idx(""), &idx("2")), IndexCombination::single(idx("2")));
    }

    #[test]
    fn insertions() {
        assert_eq!(idx("1").b_insertion_product().unwrap().get(&idx("1,1")), 1);
        let p = idx("2").b_insertion_product().unwrap();
        assert_eq!((p.get(&idx("1,2")), p.len()), (2, 1));
        let p = idx("1,2").b_insertion_product().unwrap();
        assert_eq!((p.get(&idx("1,1,2")), p.len()), (3, 1));
        assert!(idx("").b_insertion_product().is_err());
    }

    #[test]
    fn split_sums() {
        assert!(idx("2").split_sum_product(SplitMode::Literal).is_empty());
        assert!(idx("2").split_sum_product(SplitMode::PerBlock).is_empty());
        let l = idx("2,2").split_sum_product(SplitMode::Literal);
        assert_eq!(l, IndexCombination::single(idx("2,1,2")));
        assert!(idx("1,2").split_sum_product(SplitMode::PerBlock).is_empty());
    }

    #[test]
    fn slices() {
        let k = idx("2,3,4");
        assert_eq!(k.tail_rev(2).unwrap(), idx("4,3"));
        assert_eq!(k.head(2).unwrap(), idx("2,3"));
        assert_eq!(k.minus_last().unwrap(), idx("2,3,3"));
        assert_eq!(idx("3").ones_prefix(2), idx("1,1,3"));
        assert!(idx("2,1").minus_last().is_err());
        assert!(k.head(4).is_err());
        assert_eq!(k.tail_rev(0).unwrap(), Index::empty());
    }

    #[test]
    fn compositions_count() {
        assert_eq!(Index::compositions(5, 2).len(), 4);
        assert_eq!(Index::all_of_weight(6).len(), 32);
        assert_eq!(Index::all_of_weight(0), vec![Index::empty()]);
    }
}
