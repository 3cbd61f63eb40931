//! Betti tables, their text and JSON forms, and periodic tails.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingTag {
    P,
    R,
}

/// `β_{i,j}` for `i = 0..=steps`; absent entries are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    ring: RingTag,
    steps: usize,
    entries: BTreeMap<(usize, i64), usize>,
}

impl BettiTable {
    pub fn new(ring: RingTag, steps: usize) -> BettiTable {
        BettiTable { ring, steps, entries: BTreeMap::new() }
    }

    pub fn add(&mut self, i: usize, j: i64, count: usize) {
        if count == 0 {
            return;
        }
        self.steps = self.steps.max(i);
        *self.entries.entry((i, j)).or_insert(0) += count;
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    /// Largest homological index shown.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn get(&self, i: usize, j: i64) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn total(&self, i: usize) -> usize {
        self.entries.range((i, i64::MIN)..=(i, i64::MAX)).map(|(_, &b)| b).sum()
    }

    /// Twists of step `i` with multiplicity, ascending.
    pub fn twists(&self, i: usize) -> Vec<i64> {
        self.entries
            .range((i, i64::MIN)..=(i, i64::MAX))
            .flat_map(|(&(_, j), &b)| std::iter::repeat(j).take(b))
            .collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, i64, usize)> + '_ {
        self.entries.iter().map(|(&(i, j), &b)| (i, j, b))
    }

    /// Every twist moved by `shift`, except step 0.
    pub fn shifted_tail(&self, shift: i64) -> BettiTable {
        let mut out = BettiTable::new(self.ring, self.steps);
        for (i, j, b) in self.entries() {
            out.add(i, if i == 0 { j } else { j + shift }, b);
        }
        out
    }

    /// Grid with one row per `j − i`, a `total:` line and `.` for zeros.
    pub fn to_grid(&self) -> String {
        let mut rows: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, j, b) in self.entries() {
            rows.entry(j - i as i64).or_insert_with(|| vec![0; self.steps + 1])[i] += b;
        }
        let header: Vec<String> = (0..=self.steps).map(|i| i.to_string()).collect();
        let totals: Vec<String> = (0..=self.steps).map(|i| self.total(i).to_string()).collect();
        let body: Vec<(String, Vec<String>)> = rows
            .iter()
            .map(|(r, v)| {
                (format!("{r}:"), v.iter().map(|&b| if b == 0 { ".".into() } else { b.to_string() }).collect())
            })
            .collect();
        let label_w = body.iter().map(|(l, _)| l.len()).chain(["total:".len()]).max().unwrap();
        let widths: Vec<usize> = (0..=self.steps)
            .map(|c| body.iter().map(|(_, v)| v[c].len()).chain([header[c].len(), totals[c].len()]).max().unwrap())
            .collect();
        let line = |label: &str, cells: &[String]| {
            let mut s = format!("{label:>label_w$}");
            for (c, w) in cells.iter().zip(&widths) {
                s.push(' ');
                s.push_str(&format!("{c:>w$}"));
            }
            s.push('\n');
            s
        };
        let mut out = line("", &header);
        out.push_str(&line("total:", &totals));
        for (l, v) in &body {
            out.push_str(&line(l, v));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self.entries().map(|(i, j, b)| json!([i, j, b])).collect();
        json!({ "ring": self.ring, "steps": self.steps, "entries": entries })
    }

    pub fn from_json(v: &Value) -> Result<BettiTable> {
        #[derive(Deserialize)]
        struct Raw {
            ring: RingTag,
            steps: usize,
            entries: Vec<(usize, i64, usize)>,
        }
        let raw: Raw = serde_json::from_value(v.clone()).map_err(|e| Error::Parse { pos: 0, msg: e.to_string() })?;
        let mut t = BettiTable::new(raw.ring, raw.steps);
        for (i, j, b) in raw.entries {
            t.add(i, j, b);
        }
        Ok(t)
    }
}

/// A two-periodic tail: from `start` on every step has rank `rank`, and
/// step `i + 2` is step `i` moved by `period_shift`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailDescriptor {
    pub start: usize,
    pub rank: usize,
    /// Twist gaps `(F_{s+1} − F_s, F_{s+2} − F_{s+1})` when each step sits in
    /// a single degree.
    pub gaps: Option<(i64, i64)>,
    pub period_shift: i64,
}

fn uniform(t: &[i64]) -> Option<i64> {
    let first = *t.first()?;
    t.iter().all(|&x| x == first).then_some(first)
}

/// Earliest periodic tail visible in the table, if any.
pub fn detect_periodic_tail(t: &BettiTable) -> Result<Option<TailDescriptor>> {
    if t.steps() < 4 {
        return Err(Error::Precondition(format!("tail detection needs at least 4 steps, table has {}", t.steps())));
    }
    let last = t.steps();
    'start: for start in 1..=last - 2 {
        let rank = t.total(start);
        if rank == 0 || (start..=last).any(|i| t.total(i) != rank) {
            continue;
        }
        let shift = t.twists(start + 2)[0] - t.twists(start)[0];
        for i in start..=last - 2 {
            let (a, b) = (t.twists(i), t.twists(i + 2));
            if a.iter().zip(&b).any(|(x, y)| y - x != shift) {
                continue 'start;
            }
        }
        let gaps = match (uniform(&t.twists(start)), uniform(&t.twists(start + 1)), uniform(&t.twists(start + 2))) {
            (Some(a), Some(b), Some(c)) => Some((b - a, c - b)),
            _ => None,
        };
        return Ok(Some(TailDescriptor { start, rank, gaps, period_shift: shift }));
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailComparison {
    pub equal: bool,
    pub shift: i64,
    pub tail0: Option<TailDescriptor>,
    pub tail1: Option<TailDescriptor>,
}

/// Whether the tails of two tables agree once the second is moved back by
/// `shift`, step by step from the first table's tail start.
pub fn compare_tails(t0: &BettiTable, t1: &BettiTable, shift: i64) -> Result<TailComparison> {
    let tail0 = detect_periodic_tail(t0)?;
    let tail1 = detect_periodic_tail(t1)?;
    let equal = match (&tail0, &tail1) {
        (Some(a), Some(b)) => {
            a.start == b.start
                && a.rank == b.rank
                && a.gaps == b.gaps
                && (a.start..=t0.steps().min(t1.steps())).all(|i| {
                    let (x, y) = (t0.twists(i), t1.twists(i));
                    x.len() == y.len() && x.iter().zip(&y).all(|(u, v)| v - u == shift)
                })
        }
        _ => false,
    };
    Ok(TailComparison { equal, shift, tail0, tail1 })
}
