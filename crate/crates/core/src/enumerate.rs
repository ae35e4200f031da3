//! Exhaustive listing of valid patterns under a sum bound, and the per-row
//! facts reported by the `enumerate` command.

use serde::Serialize;

use crate::exec::Execution;
use crate::parity::{spin_parity_closed, SpinParity};
use crate::pattern::{Connectedness, Flavor, Pattern};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationBounds {
    pub flavor: Flavor,
    pub max_sum: i64,
    /// Poles make the set of quadratic patterns below a sum bound infinite,
    /// so the number of entries is always bounded.
    pub max_entries: usize,
    /// Restricts entries to this set when given.
    pub orders: Option<Vec<i64>>,
    /// Allow order-0 entries (marked points).
    pub include_marked: bool,
}

impl EnumerationBounds {
    pub fn new(flavor: Flavor, max_sum: i64, max_entries: usize) -> Self {
        EnumerationBounds {
            flavor,
            max_sum,
            max_entries,
            orders: None,
            include_marked: false,
        }
    }

    pub fn with_orders(mut self, orders: impl IntoIterator<Item = i64>) -> Self {
        self.orders = Some(orders.into_iter().collect());
        self
    }

    pub fn with_marked(mut self, include_marked: bool) -> Self {
        self.include_marked = include_marked;
        self
    }

    /// Candidate orders, largest first.
    fn candidates(&self) -> Vec<i64> {
        let min = match self.flavor {
            Flavor::Quadratic => -1,
            Flavor::Abelian => 0,
        };
        // With poles compensating, one entry can exceed the sum bound by at
        // most the number of remaining entries.
        let max = match self.flavor {
            Flavor::Quadratic => self.max_sum + self.max_entries.saturating_sub(1) as i64,
            Flavor::Abelian => self.max_sum,
        };
        let mut out: Vec<i64> = match &self.orders {
            Some(orders) => orders.iter().copied().filter(|k| (min..=max).contains(k)).collect(),
            None => (min..=max).collect(),
        };
        if !self.include_marked {
            out.retain(|&k| k != 0);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out.dedup();
        out
    }
}

/// All valid patterns within the bounds, sorted by `(Σk, pattern)`.
pub fn enumerate_patterns(bounds: &EnumerationBounds) -> Vec<Pattern> {
    let candidates = bounds.candidates();
    let min_candidate = candidates.last().copied().unwrap_or(0).min(0);
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(bounds.max_entries);
    extend(bounds, &candidates, min_candidate, 0, 0, &mut current, &mut out);
    out.sort_by(|a, b| a.sum().cmp(&b.sum()).then_with(|| a.cmp(b)));
    out
}

fn extend(
    bounds: &EnumerationBounds,
    candidates: &[i64],
    min_candidate: i64,
    start: usize,
    sum: i64,
    current: &mut Vec<i64>,
    out: &mut Vec<Pattern>,
) {
    if sum <= bounds.max_sum {
        if let Ok(p) = Pattern::new(bounds.flavor, current.iter().copied()) {
            out.push(p);
        }
    }
    if current.len() == bounds.max_entries {
        return;
    }
    let slots_after = (bounds.max_entries - current.len() - 1) as i64;
    for (i, &k) in candidates.iter().enumerate().skip(start) {
        let next = sum + k;
        // Later entries are no larger than k and can lower the sum by at most
        // slots_after · |min_candidate|.
        if next + slots_after * min_candidate > bounds.max_sum {
            continue;
        }
        // A quadratic sum below -4 only decreases further.
        if bounds.flavor == Flavor::Quadratic && next < -4 && k < 0 {
            continue;
        }
        current.push(k);
        extend(bounds, candidates, min_candidate, i, next, current, out);
        current.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationRow {
    pub pattern: Pattern,
    pub sum: i64,
    pub genus: i64,
    pub dimension: i64,
    pub nonempty: Option<bool>,
    pub connectedness: Connectedness,
    /// Closed-form parity; `None` for Abelian patterns.
    pub spin: Option<SpinParity>,
}

impl EnumerationRow {
    pub fn of(pattern: &Pattern) -> Self {
        let facts = pattern.facts();
        EnumerationRow {
            pattern: pattern.clone(),
            sum: pattern.sum(),
            genus: facts.genus,
            dimension: facts.dimension,
            nonempty: facts.nonempty,
            connectedness: facts.connectedness,
            spin: spin_parity_closed(pattern).ok(),
        }
    }
}

pub fn enumerate_rows(bounds: &EnumerationBounds, exec: Execution) -> Vec<EnumerationRow> {
    exec.map(&enumerate_patterns(bounds), EnumerationRow::of)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Oracle: all multisets of at most `max_entries` orders from the
    /// candidate range, filtered by validity and the sum bound.
    fn brute_force(bounds: &EnumerationBounds) -> BTreeSet<Pattern> {
        let candidates = bounds.candidates();
        let mut out = BTreeSet::new();
        let mut stack: Vec<Vec<i64>> = vec![vec![]];
        while let Some(orders) = stack.pop() {
            if let Ok(p) = Pattern::new(bounds.flavor, orders.clone()) {
                if p.sum() <= bounds.max_sum {
                    out.insert(p);
                }
            }
            if orders.len() < bounds.max_entries {
                for &k in &candidates {
                    if orders.last().is_none_or(|&last| k <= last) {
                        let mut next = orders.clone();
                        next.push(k);
                        stack.push(next);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn pruned_search_matches_brute_force() {
        for bounds in [
            EnumerationBounds::new(Flavor::Quadratic, 8, 5),
            EnumerationBounds::new(Flavor::Quadratic, 4, 6).with_marked(true),
            EnumerationBounds::new(Flavor::Abelian, 6, 4),
            EnumerationBounds::new(Flavor::Quadratic, 12, 4).with_orders([-1, 0, 1, 3, 4, 5]),
        ] {
            let fast = enumerate_patterns(&bounds);
            let slow = brute_force(&bounds);
            assert_eq!(fast.len(), slow.len(), "{bounds:?}");
            assert_eq!(fast.iter().cloned().collect::<BTreeSet<_>>(), slow);
        }
    }

    #[test]
    fn listing_is_sorted_by_sum_then_pattern() {
        let patterns = enumerate_patterns(&EnumerationBounds::new(Flavor::Quadratic, 8, 6));
        assert!(patterns.windows(2).all(|w| {
            (w[0].sum(), &w[0]) < (w[1].sum(), &w[1])
        }));
        assert_eq!(patterns[0].to_string(), "Q(-1^4)");
    }

    #[test]
    fn four_empty_strata_below_eight() {
        let rows = enumerate_rows(
            &EnumerationBounds::new(Flavor::Quadratic, 8, 10),
            Execution::default(),
        );
        let empty: Vec<String> = rows
            .iter()
            .filter(|r| r.nonempty == Some(false))
            .map(|r| r.pattern.to_string())
            .collect();
        assert_eq!(empty, vec!["Q()", "Q(1,-1)", "Q(3,1)", "Q(4)"]);
    }

    #[test]
    fn abelian_rows_carry_no_parity() {
        let rows = enumerate_rows(&EnumerationBounds::new(Flavor::Abelian, 4, 4), Execution::Sequential);
        assert!(rows.iter().all(|r| r.spin.is_none() && r.nonempty.is_none()));
        // H(), H(2), H(1,1) and the five partitions of 4
        assert_eq!(rows.len(), 8);
    }
}
