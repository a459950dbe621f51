//! Exact intersection-count histograms and their JSON/CSV forms.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a census table was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CensusMode {
    Closed,
    Classifier,
    Brute,
    Lines,
}

impl CensusMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CensusMode::Closed => "closed",
            CensusMode::Classifier => "classifier",
            CensusMode::Brute => "brute",
            CensusMode::Lines => "lines",
        }
    }
}

/// The intersection counts a parabola can have for this `q`, ascending and
/// deduplicated (at q = 2 several classes coincide).
pub fn parabola_classes(q: u64) -> Vec<u64> {
    let mut ks = if q % 2 == 1 {
        vec![0, 1, q - 1, q, q + 1, 2 * q - 1, 2 * q]
    } else {
        vec![1, q - 1, q + 1, 2 * q - 1]
    };
    ks.sort_unstable();
    ks.dedup();
    ks
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusTable {
    pub q: u64,
    pub mode: CensusMode,
    pub rows: BTreeMap<u64, u64>,
}

#[derive(Serialize, Deserialize)]
struct Row {
    k: u64,
    count: u64,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    q: u64,
    mode: CensusMode,
    rows: Vec<Row>,
    total: u64,
}

impl CensusTable {
    pub fn empty(q: u64, mode: CensusMode) -> Self {
        CensusTable {
            q,
            mode,
            rows: BTreeMap::new(),
        }
    }

    /// A parabola table with an explicit zero row for every class of `q`.
    pub fn for_parabolas(q: u64, mode: CensusMode) -> Self {
        let mut t = Self::empty(q, mode);
        for k in parabola_classes(q) {
            t.rows.insert(k, 0);
        }
        t
    }

    pub fn add(&mut self, k: u64, count: u64) {
        *self.rows.entry(k).or_insert(0) += count;
    }

    pub fn merge(&mut self, other: &CensusTable) {
        for (&k, &n) in &other.rows {
            self.add(k, n);
        }
    }

    pub fn get(&self, k: u64) -> u64 {
        self.rows.get(&k).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.rows.values().sum()
    }

    /// `Σ k·N_k`
    pub fn incidences(&self) -> u64 {
        self.rows.iter().map(|(k, n)| k * n).sum()
    }

    /// Row-for-row equality, ignoring how the tables were produced.
    pub fn same_rows(&self, other: &CensusTable) -> bool {
        self.q == other.q && self.rows == other.rows
    }

    /// Checks the two double-counting identities of a parabola census:
    /// `Σ N_k = q⁴(q²−1)` and `Σ k·N_k = q³·q²·(q²−1)`.
    pub fn check_parabola_identities(&self) -> Result<()> {
        let q = self.q;
        let total = q.pow(4) * (q * q - 1);
        let inc = q.pow(5) * (q * q - 1);
        if self.total() != total {
            return Err(Error::Internal(format!(
                "total {} != q^4(q^2-1) = {total}",
                self.total()
            )));
        }
        if self.incidences() != inc {
            return Err(Error::Internal(format!(
                "incidences {} != q^5(q^2-1) = {inc}",
                self.incidences()
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let doc = TableJson {
            q: self.q,
            mode: self.mode,
            rows: self
                .rows
                .iter()
                .map(|(&k, &count)| Row { k, count })
                .collect(),
            total: self.total(),
        };
        serde_json::to_string_pretty(&doc).expect("table serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: TableJson = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        let mut t = Self::empty(doc.q, doc.mode);
        for r in doc.rows {
            t.add(r.k, r.count);
        }
        if t.total() != doc.total {
            return Err(Error::Format("total does not match rows".into()));
        }
        Ok(t)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,count\n");
        for (k, n) in &self.rows {
            writeln!(out, "{k},{n}").unwrap();
        }
        out
    }

    pub fn from_csv(q: u64, mode: CensusMode, s: &str) -> Result<Self> {
        let mut lines = s.lines();
        if lines.next().map(str::trim) != Some("k,count") {
            return Err(Error::Format("missing k,count header".into()));
        }
        let mut t = Self::empty(q, mode);
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let (k, n) = line
                .split_once(',')
                .ok_or_else(|| Error::Format(format!("bad row {line:?}")))?;
            let parse = |v: &str| {
                v.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Format(format!("bad number in {line:?}")))
            };
            t.add(parse(k)?, parse(n)?);
        }
        Ok(t)
    }
}
