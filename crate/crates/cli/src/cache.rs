//! Append-only JSON-lines value cache.
//!
//! Every put rewrites the file through a temporary sibling and a rename, so a
//! reader never sees a torn line. Writers inside one process are serialized;
//! two processes writing at once can lose one of the appends but never corrupt
//! the file.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use tvk_core::{BigReal, Index};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    Ttilde,
    Apoly1,
    Lambda,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub kind: RecordKind,
    pub index: Index,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<i64>,
    pub digits: u32,
    pub re: String,
    pub im: String,
    pub err: f64,
    pub method: String,
    pub created: String,
}

type Key = (RecordKind, Index, Option<i64>);

impl CacheRecord {
    pub fn ttilde(k: &Index, v: &BigReal, digits: u32) -> Self {
        CacheRecord {
            kind: RecordKind::Ttilde,
            index: k.clone(),
            s: None,
            digits,
            re: v.to_decimal_unchecked(digits + 10),
            im: "0".into(),
            err: v.error(),
            method: "series".into(),
            created: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    fn key(&self) -> Key {
        (self.kind, self.index.clone(), self.s)
    }

    /// The stored real part as a working value at `bits`.
    pub fn real_value(&self, bits: usize) -> Option<BigReal> {
        BigReal::parse(&self.re, bits, self.err)
    }
}

#[derive(Debug, Default, Serialize)]
pub struct CacheStats {
    pub path: PathBuf,
    pub records: usize,
    pub keys: usize,
    pub skipped_lines: usize,
    pub by_kind: BTreeMap<String, usize>,
    pub bytes: u64,
}

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    lock: Mutex<()>,
}

pub const FILE_NAME: &str = "values.jsonl";

impl Cache {
    pub fn open(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Cache {
            path: dir.join(FILE_NAME),
            lock: Mutex::new(()),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn read_lines(&self) -> (Vec<CacheRecord>, usize) {
        let text = match fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(_) => return (Vec::new(), 0),
        };
        let mut out = Vec::new();
        let mut skipped = 0;
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheRecord>(line) {
                Ok(r) => out.push(r),
                Err(e) => {
                    log::warn!("{}:{}: skipping unreadable cache line: {e}", self.path.display(), n + 1);
                    skipped += 1;
                }
            }
        }
        (out, skipped)
    }

    /// Best record per key: the one with the most digits, the later one on ties.
    pub fn load(&self) -> Vec<CacheRecord> {
        let mut best: BTreeMap<Key, CacheRecord> = BTreeMap::new();
        for r in self.read_lines().0 {
            match best.get(&r.key()) {
                Some(b) if b.digits > r.digits => {}
                _ => {
                    best.insert(r.key(), r);
                }
            }
        }
        best.into_values().collect()
    }

    /// A record for the key with at least `digits` digits.
    pub fn get(&self, kind: RecordKind, index: &Index, s: Option<i64>, digits: u32) -> Option<CacheRecord> {
        self.load()
            .into_iter()
            .find(|r| r.kind == kind && &r.index == index && r.s == s && r.digits >= digits)
    }

    pub fn put(&self, record: &CacheRecord) -> std::io::Result<()> {
        self.put_all(std::slice::from_ref(record))
    }

    pub fn put_all(&self, records: &[CacheRecord]) -> std::io::Result<()> {
        if records.is_empty() {
            return Ok(());
        }
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        let mut text = fs::read_to_string(&self.path).unwrap_or_default();
        if !text.is_empty() && !text.ends_with('\n') {
            text.push('\n');
        }
        for r in records {
            text.push_str(&serde_json::to_string(r).expect("record serializes"));
            text.push('\n');
        }
        let tmp = self
            .path
            .with_extension(format!("tmp.{}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &self.path)
    }

    pub fn stats(&self) -> CacheStats {
        let (all, skipped) = self.read_lines();
        let mut by_kind = BTreeMap::new();
        for r in &all {
            let k = serde_json::to_value(r.kind).expect("kind serializes");
            *by_kind.entry(k.as_str().unwrap_or("?").to_string()).or_insert(0) += 1;
        }
        let mut keys: Vec<Key> = all.iter().map(CacheRecord::key).collect();
        keys.sort();
        keys.dedup();
        CacheStats {
            path: self.path.clone(),
            records: all.len(),
            keys: keys.len(),
            skipped_lines: skipped,
            by_kind,
            bytes: fs::metadata(&self.path).map(|m| m.len()).unwrap_or(0),
        }
    }

    pub fn clear(&self) -> std::io::Result<()> {
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());
        match fs::remove_file(&self.path) {
            Err(e) if e.kind() != std::io::ErrorKind::NotFound => Err(e),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tvk_core::{ttilde, PrecisionPolicy};

    fn idx(s: &str) -> Index {
        s.parse().unwrap()
    }

    #[test]
    fn round_trip_and_digit_rule() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        let k = idx("1,3");
        let v = ttilde(&k, &PrecisionPolicy::with_digits(30)).unwrap();
        let rec = CacheRecord::ttilde(&k, &v, 30);
        c.put(&rec).unwrap();
        let got = c.get(RecordKind::Ttilde, &k, None, 30).unwrap();
        assert_eq!(got.re, rec.re);
        assert!(c.get(RecordKind::Ttilde, &k, None, 40).is_none());

        let mut more = rec.clone();
        more.digits = 35;
        more.re.push('7');
        c.put(&more).unwrap();
        c.put(&rec).unwrap();
        assert_eq!(c.get(RecordKind::Ttilde, &k, None, 30).unwrap().digits, 35);
        assert_eq!(c.stats().records, 3);
        assert_eq!(c.stats().keys, 1);
    }

    #[test]
    fn garbage_lines_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        fs::write(c.path(), "not json\n{\"kind\":\"ttilde\"}\n").unwrap();
        assert!(c.load().is_empty());
        assert_eq!(c.stats().skipped_lines, 2);
        let v = ttilde(&idx("2"), &PrecisionPolicy::with_digits(20)).unwrap();
        c.put(&CacheRecord::ttilde(&idx("2"), &v, 20)).unwrap();
        assert_eq!(c.load().len(), 1);
        c.clear().unwrap();
        assert!(c.load().is_empty());
    }

    #[test]
    fn concurrent_puts_keep_every_line() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        let v = ttilde(&idx("2"), &PrecisionPolicy::with_digits(20)).unwrap();
        std::thread::scope(|sc| {
            for d in 0..8 {
                let (c, v) = (&c, &v);
                sc.spawn(move || c.put(&CacheRecord::ttilde(&idx("2"), v, 20 + d)).unwrap());
            }
        });
        assert_eq!(c.stats().records, 8);
        assert_eq!(c.load()[0].digits, 27);
    }
}
