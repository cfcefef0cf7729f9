//! Intervals on the real line and their conflict taxonomy.
//!
//! An interval occupies the half-open segment `[start, finish)`: two
//! intervals touching at a single point do not conflict. Coordinates are
//! compared exactly on the stored representation; instances are constructed,
//! not measured, and all shipped generators emit exactly representable
//! coordinates.

use serde::{Deserialize, Serialize};

/// Unique tag of an interval within an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IntervalId(pub usize);

impl std::fmt::Display for IntervalId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A half-open weighted interval `[start, finish)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub id: IntervalId,
    pub start: f64,
    pub finish: f64,
    pub weight: f64,
}

impl Interval {
    /// Unit-weight interval. Panics if `start >= finish`.
    pub fn new(id: usize, start: f64, finish: f64) -> Self {
        Self::weighted(id, start, finish, 1.0)
    }

    /// Weighted interval. Panics on an empty span, non-finite coordinates,
    /// or a negative weight.
    pub fn weighted(id: usize, start: f64, finish: f64, weight: f64) -> Self {
        assert!(
            start.is_finite() && finish.is_finite(),
            "interval coordinates must be finite"
        );
        assert!(start < finish, "interval must have positive length");
        assert!(
            weight.is_finite() && weight >= 0.0,
            "weight must be non-negative"
        );
        Interval {
            id: IntervalId(id),
            start,
            finish,
            weight,
        }
    }

    pub fn length(&self) -> f64 {
        self.finish - self.start
    }

    /// True iff the half-open spans intersect.
    pub fn conflicts(&self, other: &Interval) -> bool {
        !(self.finish <= other.start || other.finish <= self.start)
    }

    /// True iff `self`'s span strictly contains `other`'s.
    pub fn strictly_contains(&self, other: &Interval) -> bool {
        (self.start <= other.start && other.finish < self.finish)
            || (self.start < other.start && other.finish <= self.finish)
    }

    /// True iff both spans are equal (weights and ids may differ).
    pub fn same_span(&self, other: &Interval) -> bool {
        self.start == other.start && self.finish == other.finish
    }
}

/// How two intervals relate on the line.
///
/// Containment is strict: identical spans report [`ConflictKind::Identical`],
/// never a containment variant. This matters to the replacing algorithm,
/// which must not treat a copy as strictly contained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConflictKind {
    Disjoint,
    Partial,
    FirstContainsSecond,
    SecondContainsFirst,
    Identical,
}

/// Classify the conflict between two intervals.
pub fn classify_conflict(a: &Interval, b: &Interval) -> ConflictKind {
    if !a.conflicts(b) {
        ConflictKind::Disjoint
    } else if a.same_span(b) {
        ConflictKind::Identical
    } else if a.strictly_contains(b) {
        ConflictKind::FirstContainsSecond
    } else if b.strictly_contains(a) {
        ConflictKind::SecondContainsFirst
    } else {
        ConflictKind::Partial
    }
}

/// True iff every pair in the set is disjoint.
pub fn is_feasible_set(intervals: &[&Interval]) -> bool {
    for (i, a) in intervals.iter().enumerate() {
        for b in &intervals[i + 1..] {
            if a.conflicts(b) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(start: f64, finish: f64) -> Interval {
        Interval::new(0, start, finish)
    }

    #[test]
    fn partial_conflict() {
        assert_eq!(
            classify_conflict(&iv(-10.0, -6.0), &iv(-7.0, -3.0)),
            ConflictKind::Partial
        );
    }

    #[test]
    fn touching_endpoints_are_disjoint() {
        assert_eq!(
            classify_conflict(&iv(0.0, 2.0), &iv(2.0, 4.0)),
            ConflictKind::Disjoint
        );
    }

    #[test]
    fn strict_containment() {
        assert_eq!(
            classify_conflict(&iv(-10.0, 0.0), &iv(-8.0, -6.0)),
            ConflictKind::FirstContainsSecond
        );
        assert_eq!(
            classify_conflict(&iv(-8.0, -6.0), &iv(-10.0, 0.0)),
            ConflictKind::SecondContainsFirst
        );
    }

    #[test]
    fn identical_spans_are_not_containment() {
        assert_eq!(
            classify_conflict(&iv(1.0, 2.0), &iv(1.0, 2.0)),
            ConflictKind::Identical
        );
        // Sharing one endpoint still counts as strict containment.
        assert_eq!(
            classify_conflict(&iv(0.0, 4.0), &iv(0.0, 2.0)),
            ConflictKind::FirstContainsSecond
        );
    }

    #[test]
    fn feasibility() {
        let a = iv(0.0, 1.0);
        let b = iv(1.0, 2.0);
        assert!(is_feasible_set(&[&a, &b]));
        let c = iv(0.0, 10.0);
        let d = iv(2.0, 3.0);
        assert!(!is_feasible_set(&[&c, &d]));
    }

    proptest! {
        // Classification is symmetric up to swapping the containment variants,
        // and disjointness is exactly the endpoint comparison.
        #[test]
        fn classification_symmetry(s1 in -50i32..50, l1 in 1i32..20, s2 in -50i32..50, l2 in 1i32..20) {
            let a = iv(s1 as f64, (s1 + l1) as f64);
            let b = iv(s2 as f64, (s2 + l2) as f64);
            let ab = classify_conflict(&a, &b);
            let ba = classify_conflict(&b, &a);
            let expected = match ab {
                ConflictKind::FirstContainsSecond => ConflictKind::SecondContainsFirst,
                ConflictKind::SecondContainsFirst => ConflictKind::FirstContainsSecond,
                other => other,
            };
            prop_assert_eq!(ba, expected);
            let disjoint = a.finish <= b.start || b.finish <= a.start;
            prop_assert_eq!(ab == ConflictKind::Disjoint, disjoint);
        }
    }
}
