//! Table values, rows, and solver results.

use core::fmt;
use core::ops::Add;

use crate::cycles::CycleId;
use crate::graph::RotationEmbedding;
use crate::prelude::*;

/// A table value in ℕ ∪ {−∞}.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Score {
    NegInf,
    Val(u32),
}

impl Score {
    pub const ZERO: Score = Score::Val(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Score::Val(_))
    }

    pub fn value(self) -> Option<u32> {
        match self {
            Score::Val(v) => Some(v),
            Score::NegInf => None,
        }
    }
}

impl Add for Score {
    type Output = Score;

    fn add(self, rhs: Score) -> Score {
        match (self, rhs) {
            (Score::Val(a), Score::Val(b)) => Score::Val(a.saturating_add(b)),
            _ => Score::NegInf,
        }
    }
}

impl Add<u32> for Score {
    type Output = Score;

    fn add(self, rhs: u32) -> Score {
        self + Score::Val(rhs)
    }
}

impl core::iter::Sum for Score {
    fn sum<I: Iterator<Item = Score>>(iter: I) -> Score {
        iter.fold(Score::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Score::NegInf => write!(f, "-inf"),
            Score::Val(v) => write!(f, "{v}"),
        }
    }
}

/// A sorted set of at most two interface cycles.
pub type ISet = Vec<CycleId>;

/// Sorted intersection of `set` with the sorted slice `within`.
pub fn restrict(set: &[CycleId], within: &[CycleId]) -> ISet {
    set.iter()
        .copied()
        .filter(|c| within.binary_search(c).is_ok())
        .collect()
}

/// One table entry with enough information to rebuild an embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub value: Score,
    /// The interface set plus the internal cycles made facial at this node, sorted.
    pub chosen: Vec<CycleId>,
    /// P-node order of the non-parent skeleton edges.
    pub order: Vec<usize>,
    /// R-node flip relative to the reference embedding.
    pub flip: bool,
}

impl Entry {
    pub fn infeasible() -> Entry {
        Entry {
            value: Score::NegInf,
            chosen: Vec::new(),
            order: Vec::new(),
            flip: false,
        }
    }

    pub fn plain(value: Score, chosen: Vec<CycleId>) -> Entry {
        Entry {
            value,
            chosen,
            order: Vec::new(),
            flip: false,
        }
    }
}

/// All entries of one node, keyed by interface set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Row {
    entries: BTreeMap<ISet, Entry>,
}

impl Row {
    pub fn new() -> Row {
        Row::default()
    }

    pub fn insert(&mut self, i: ISet, e: Entry) {
        self.entries.insert(i, e);
    }

    /// T[µ, I]; sets outside I(µ) read as −∞.
    pub fn value(&self, i: &[CycleId]) -> Score {
        self.entries.get(i).map_or(Score::NegInf, |e| e.value)
    }

    pub fn entry(&self, i: &[CycleId]) -> Option<&Entry> {
        self.entries.get(i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ISet, &Entry)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Which algorithm produced a solution.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Dynamic program for cycles with at most two heavy neighbors.
    Exact,
    /// Subset enumeration at P-nodes of series-parallel graphs.
    SpFpt,
    /// Greedy P-node rule for series-parallel graphs with pairwise at most two shared vertices.
    SpTwoShared,
    /// Matching and independent-set approximation.
    Approx,
    /// Exhaustive search over all embeddings.
    Oracle,
}

impl Method {
    /// The theorem whose algorithm this method implements.
    pub fn provenance(self) -> &'static str {
        match self {
            Method::Exact => "Theorem 5",
            Method::SpFpt => "Theorem 4",
            Method::SpTwoShared => "Theorem 6",
            Method::Approx => "Theorems 7-9",
            Method::Oracle => "exhaustive search",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::SpFpt => "sp-fpt",
            Method::SpTwoShared => "sp-two-shared",
            Method::Approx => "approx",
            Method::Oracle => "oracle",
        }
    }
}

/// Quality guarantee attached to a solution.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Guarantee {
    Optimal,
    /// The count is at least opt / factor.
    Factor(f64),
    /// An independent-set fallback ran above the exact threshold.
    Heuristic,
}

impl fmt::Display for Guarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guarantee::Optimal => write!(f, "1"),
            Guarantee::Factor(c) => write!(f, "{c}"),
            Guarantee::Heuristic => write!(f, "heuristic (guarantee void)"),
        }
    }
}

/// A certified embedding and the cycles it makes facial.
#[derive(Clone, Debug)]
pub struct Solution {
    pub count: usize,
    pub embedding: RotationEmbedding,
    /// Facial cycles of `embedding`, ascending.
    pub realized: Vec<CycleId>,
    pub method: Method,
    pub guarantee: Guarantee,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn score_arithmetic() {
        assert_eq!(Score::Val(2) + Score::Val(3), Score::Val(5));
        assert_eq!(Score::Val(2) + Score::NegInf, Score::NegInf);
        assert!(Score::NegInf < Score::ZERO);
        assert_eq!([Score::Val(1), Score::Val(4)].into_iter().sum::<Score>(), Score::Val(5));
        assert_eq!(
            [Score::Val(1), Score::NegInf].into_iter().sum::<Score>(),
            Score::NegInf
        );
    }

    #[test]
    fn rows_default_to_neg_inf() {
        let mut r = Row::new();
        r.insert(vec![], Entry::plain(Score::Val(3), vec![]));
        assert_eq!(r.value(&[]), Score::Val(3));
        assert_eq!(r.value(&[1, 2, 3]), Score::NegInf);
        assert_eq!(restrict(&[1, 4, 6], &[0, 4, 6, 9]), vec![4, 6]);
    }
}
