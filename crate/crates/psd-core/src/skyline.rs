//! Linear skyline maintenance under shopping-time-ordered insertion.
//!
//! Cost vectors pair a shopping time with a shopping cost, both integers,
//! and every domination test runs in exact integer arithmetic. The skyline
//! keeps the minimal lower-left convex chain: collinear interior points are
//! removed.

use thiserror::Error;

use crate::catalog::Cents;
use crate::network::TravelTime;

/// One point in (shopping time, shopping cost) space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct CostVector {
    pub st: TravelTime,
    pub sc: Cents,
}

impl CostVector {
    pub fn new(st: TravelTime, sc: Cents) -> Self {
        CostVector { st, sc }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SkylineError {
    #[error("candidate st {got} arrived after entry with st {last}; insertion order violated")]
    OutOfOrder { got: TravelTime, last: TravelTime },
}

/// Componentwise domination with at least one strict inequality.
pub fn conventionally_dominates(a: CostVector, b: CostVector) -> bool {
    (a.sc < b.sc && a.st <= b.st) || (a.sc <= b.sc && a.st < b.st)
}

/// True iff `mid` lies on or above the segment from `left` to `right`, or
/// is conventionally dominated by either endpoint. Callers must ensure
/// `left.st <= mid.st <= right.st`.
pub fn linearly_dominated(left: CostVector, mid: CostVector, right: CostVector) -> bool {
    if conventionally_dominates(left, mid) || conventionally_dominates(right, mid) {
        return true;
    }
    // (mid.sc - left.sc) * (right.st - left.st) >= (mid.st - left.st) * (right.sc - left.sc)
    let lhs = (mid.sc as i128 - left.sc as i128) * (right.st as i128 - left.st as i128);
    let rhs = (mid.st as i128 - left.st as i128) * (right.sc as i128 - left.sc as i128);
    lhs >= rhs
}

/// Outcome of a [`LinearSkyline::try_insert`] call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InsertOutcome {
    pub accepted: bool,
    pub evicted: usize,
}

/// Ordered linear skyline: strictly ascending `st`, strictly descending
/// `sc`, no entry on or above the segment joining its neighbors.
#[derive(Debug, Clone)]
pub struct LinearSkyline<P> {
    entries: Vec<(CostVector, P)>,
}

impl<P> Default for LinearSkyline<P> {
    fn default() -> Self {
        LinearSkyline {
            entries: Vec::new(),
        }
    }
}

impl<P> LinearSkyline<P> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(CostVector, P)] {
        &self.entries
    }

    pub fn vectors(&self) -> Vec<CostVector> {
        self.entries.iter().map(|(v, _)| *v).collect()
    }

    pub fn into_entries(self) -> Vec<(CostVector, P)> {
        self.entries
    }

    /// Offer a candidate. Candidates must arrive in non-decreasing `st`
    /// order; a candidate is rejected iff its `sc` is no better than the
    /// current minimum. Acceptance evicts the predecessors that become
    /// linearly dominated.
    pub fn try_insert(
        &mut self,
        v: CostVector,
        payload: P,
    ) -> Result<InsertOutcome, SkylineError> {
        if let Some((last, _)) = self.entries.last() {
            if v.st < last.st {
                return Err(SkylineError::OutOfOrder {
                    got: v.st,
                    last: last.st,
                });
            }
            if v.sc >= last.sc {
                return Ok(InsertOutcome {
                    accepted: false,
                    evicted: 0,
                });
            }
        }
        let mut evicted = 0;
        if let Some((last, _)) = self.entries.last() {
            if last.st == v.st {
                self.entries.pop();
                evicted += 1;
            }
        }
        while self.entries.len() >= 2 {
            let left = self.entries[self.entries.len() - 2].0;
            let mid = self.entries[self.entries.len() - 1].0;
            if linearly_dominated(left, mid, v) {
                self.entries.pop();
                evicted += 1;
            } else {
                break;
            }
        }
        self.entries.push((v, payload));
        Ok(InsertOutcome {
            accepted: true,
            evicted,
        })
    }
}
