//! Instances: a fixed finite multiset of intervals, separated from the
//! arrival randomness.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{Interval, IntervalId};

/// An ordered list of intervals with unique ids.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Instance {
    intervals: Vec<Interval>,
}

/// Derived per-instance counts: `n` items, `k` distinct lengths, and the
/// nesting depth (length of the longest chain of strictly nested intervals,
/// minus one). For any instance `nesting_depth <= k - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceStats {
    pub n: usize,
    pub k: usize,
    pub nesting_depth: usize,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

impl Instance {
    /// Build an instance, panicking on duplicate ids.
    pub fn new(intervals: Vec<Interval>) -> Self {
        let mut seen = HashMap::new();
        for iv in &intervals {
            assert!(
                seen.insert(iv.id, ()).is_none(),
                "duplicate interval id {}",
                iv.id
            );
        }
        Instance { intervals }
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn ids(&self) -> impl Iterator<Item = IntervalId> + '_ {
        self.intervals.iter().map(|iv| iv.id)
    }

    /// Interval with the given id. Panics if absent.
    pub fn get(&self, id: IntervalId) -> &Interval {
        // Ids are positional in every shipped generator and in parsed text.
        if let Some(iv) = self.intervals.get(id.0) {
            if iv.id == id {
                return iv;
            }
        }
        self.intervals
            .iter()
            .find(|iv| iv.id == id)
            .unwrap_or_else(|| panic!("no interval with id {id}"))
    }

    pub fn stats(&self) -> InstanceStats {
        if self.intervals.is_empty() {
            return InstanceStats {
                n: 0,
                k: 0,
                nesting_depth: 0,
            };
        }
        let mut lengths: Vec<f64> = self.intervals.iter().map(Interval::length).collect();
        lengths.sort_by(f64::total_cmp);
        lengths.dedup();

        // Longest chain of strict containments, O(n^2) over items sorted by
        // ascending length so every container of an interval comes later.
        let mut by_len: Vec<&Interval> = self.intervals.iter().collect();
        by_len.sort_by(|a, b| a.length().total_cmp(&b.length()));
        let mut chain = vec![1usize; by_len.len()];
        let mut longest = 1;
        for i in 0..by_len.len() {
            for j in 0..i {
                if by_len[i].strictly_contains(by_len[j]) {
                    chain[i] = chain[i].max(chain[j] + 1);
                }
            }
            longest = longest.max(chain[i]);
        }

        InstanceStats {
            n: self.intervals.len(),
            k: lengths.len(),
            nesting_depth: longest - 1,
        }
    }

    /// Parse the instance text format: one interval per line,
    /// whitespace-separated `start finish [weight]`; `#` starts a comment
    /// line. Ids are assigned by line order.
    pub fn parse(text: &str) -> Result<Instance, ParseError> {
        let mut intervals = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() < 2 || fields.len() > 3 {
                return Err(ParseError::Malformed {
                    line: lineno + 1,
                    message: format!(
                        "expected `start finish [weight]`, got {} fields",
                        fields.len()
                    ),
                });
            }
            let parse_num = |s: &str, what: &str| -> Result<f64, ParseError> {
                s.parse::<f64>().map_err(|_| ParseError::Malformed {
                    line: lineno + 1,
                    message: format!("invalid {what}: {s}"),
                })
            };
            let start = parse_num(fields[0], "start")?;
            let finish = parse_num(fields[1], "finish")?;
            let weight = if fields.len() == 3 {
                parse_num(fields[2], "weight")?
            } else {
                1.0
            };
            if !(start.is_finite() && finish.is_finite()) || start >= finish {
                return Err(ParseError::Malformed {
                    line: lineno + 1,
                    message: format!("invalid span [{start}, {finish})"),
                });
            }
            if !weight.is_finite() || weight < 0.0 {
                return Err(ParseError::Malformed {
                    line: lineno + 1,
                    message: format!("invalid weight {weight}"),
                });
            }
            intervals.push(Interval::weighted(intervals.len(), start, finish, weight));
        }
        Ok(Instance::new(intervals))
    }

    /// Render in the text format accepted by [`Instance::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for iv in &self.intervals {
            if iv.weight == 1.0 {
                out.push_str(&format!("{} {}\n", iv.start, iv.finish));
            } else {
                out.push_str(&format!("{} {} {}\n", iv.start, iv.finish, iv.weight));
            }
        }
        out
    }
}
