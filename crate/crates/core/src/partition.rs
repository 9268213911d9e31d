//! Partitions and Jordan types of p-nilpotent operators.
//!
//! The Jordan type of a nilpotent operator is recovered from the rank
//! sequence of its powers: it is the conjugate of the partition of first
//! differences (n - r_1, r_1 - r_2, ..., r_{p-1} - r_p) with r_p = 0.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("parts are not weakly decreasing positive integers: {0:?}")]
    NotAPartition(Vec<usize>),
    #[error("rank sequence {0:?} is not realizable by a nilpotent matrix of size {1}")]
    UnrealizableRanks(Vec<usize>, usize),
    #[error("malformed partition text: {0}")]
    Parse(String),
}

/// A weakly decreasing list of positive integers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Partition, PartitionError> {
        let ok = parts.windows(2).all(|w| w[0] >= w[1]) && parts.iter().all(|&x| x >= 1);
        if !ok {
            return Err(PartitionError::NotAPartition(parts));
        }
        Ok(Partition { parts })
    }

    /// Sorts the input; convenient when parts arrive unordered.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Partition {
        parts.retain(|&x| x >= 1);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Partition {
        Partition { parts: vec![] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Total number of boxes.
    pub fn sum(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Every part at most p.
    pub fn is_p_restricted(&self, p: usize) -> bool {
        self.parts.first().map(|&x| x <= p).unwrap_or(true)
    }

    /// Transpose of the Young diagram.
    pub fn conjugate(&self) -> Partition {
        let Some(&first) = self.parts.first() else {
            return Partition::empty();
        };
        let parts = (1..=first)
            .map(|j| self.parts.iter().filter(|&&x| x >= j).count())
            .collect();
        Partition { parts }
    }

    /// Boxes outside the first j columns; the rank of A^j when self is the
    /// Jordan type of A.
    pub fn j_rank(&self, j: usize) -> usize {
        self.parts.iter().map(|&x| x.saturating_sub(j)).sum()
    }

    /// Exponential notation, largest part first: [4,4,2,1] -> "[4]^2[2][1]".
    pub fn to_exp_string(&self) -> String {
        if self.parts.is_empty() {
            return "[]".to_string();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < self.parts.len() {
            let part = self.parts[i];
            let mut count = 1;
            while i + count < self.parts.len() && self.parts[i + count] == part {
                count += 1;
            }
            out.push_str(&format!("[{part}]"));
            if count > 1 {
                out.push_str(&format!("^{count}"));
            }
            i += count;
        }
        out
    }

    pub fn parse(text: &str) -> Result<Partition, PartitionError> {
        let s = text.trim();
        if s == "[]" {
            return Ok(Partition::empty());
        }
        let err = || PartitionError::Parse(text.to_string());
        let mut parts = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            if !rest.starts_with('[') {
                return Err(err());
            }
            let close = rest.find(']').ok_or_else(err)?;
            let part: usize = rest[1..close].parse().map_err(|_| err())?;
            if part == 0 {
                return Err(err());
            }
            rest = &rest[close + 1..];
            let mut count = 1usize;
            if let Some(tail) = rest.strip_prefix('^') {
                let end = tail
                    .find(|c: char| !c.is_ascii_digit())
                    .unwrap_or(tail.len());
                count = tail[..end].parse().map_err(|_| err())?;
                if count == 0 {
                    return Err(err());
                }
                rest = &tail[end..];
            }
            parts.extend(std::iter::repeat(part).take(count));
        }
        Partition::new(parts)
    }
}

/// Jordan type of an n-dimensional p-nilpotent operator from the ranks of
/// its powers A, A^2, ..., A^{p-1} (A^p = 0 is implied).
pub fn jordan_type_from_ranks(n: usize, ranks: &[usize]) -> Result<Partition, PartitionError> {
    let mut seq = Vec::with_capacity(ranks.len() + 2);
    seq.push(n);
    seq.extend_from_slice(ranks);
    seq.push(0);
    // First differences must themselves be weakly decreasing or no nilpotent
    // matrix has this rank sequence.
    let diffs: Vec<usize> = seq
        .windows(2)
        .map(|w| {
            if w[0] < w[1] {
                usize::MAX
            } else {
                w[0] - w[1]
            }
        })
        .collect();
    let realizable = diffs.iter().all(|&d| d != usize::MAX)
        && diffs.windows(2).all(|w| w[0] >= w[1]);
    if !realizable {
        return Err(PartitionError::UnrealizableRanks(ranks.to_vec(), n));
    }
    let pre = Partition::from_unsorted(diffs);
    Ok(pre.conjugate())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn conjugate_known_values() {
        assert_eq!(pt(&[4, 4, 2, 1]).conjugate(), pt(&[4, 3, 2, 2]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(pt(&[3]).conjugate(), pt(&[1, 1, 1]));
    }

    #[test]
    fn j_rank_known_values() {
        assert_eq!(pt(&[4, 4, 2, 1]).j_rank(2), 4);
        assert_eq!(pt(&[4, 4, 2, 1]).j_rank(0), 11);
        assert_eq!(pt(&[3]).j_rank(1), 2);
    }

    #[test]
    fn ranks_to_type() {
        // 3-dimensional, rank sequence 2, 1, 0, 0: a single block of size 3.
        assert_eq!(jordan_type_from_ranks(3, &[2, 1, 0, 0]).unwrap(), pt(&[3]));
        // Zero matrix.
        assert_eq!(
            jordan_type_from_ranks(4, &[0, 0]).unwrap(),
            pt(&[1, 1, 1, 1])
        );
    }

    #[test]
    fn unrealizable_ranks_rejected() {
        // Differences 1, 2 increase; no nilpotent matrix does this.
        assert!(jordan_type_from_ranks(3, &[2, 0, 0]).is_err());
        // Increasing ranks.
        assert!(jordan_type_from_ranks(3, &[1, 2]).is_err());
    }

    #[test]
    fn exp_string_round_trip() {
        assert_eq!(pt(&[4, 4, 2, 1]).to_exp_string(), "[4]^2[2][1]");
        assert_eq!(Partition::empty().to_exp_string(), "[]");
        assert_eq!(Partition::parse("[5]^3").unwrap(), pt(&[5, 5, 5]));
        assert_eq!(Partition::parse("[4]^2[2][1]").unwrap(), pt(&[4, 4, 2, 1]));
        assert!(Partition::parse("[0]").is_err());
        assert!(Partition::parse("[2][3]").is_err());
        assert!(Partition::parse("4^2").is_err());
    }

    #[test]
    fn p_restriction() {
        assert!(pt(&[5, 5, 2]).is_p_restricted(5));
        assert!(!pt(&[6, 2]).is_p_restricted(5));
        assert!(Partition::empty().is_p_restricted(3));
    }
}
