use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::stakeholder::ImportanceList;

/// Outcome of comparing two importance lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComparisonResult {
    First,
    Second,
    Tie,
}

impl ComparisonResult {
    pub fn reversed(self) -> Self {
        match self {
            ComparisonResult::First => ComparisonResult::Second,
            ComparisonResult::Second => ComparisonResult::First,
            ComparisonResult::Tie => ComparisonResult::Tie,
        }
    }
}

/// Walks both descending lists in step; the first strictly greater degree
/// wins. When one list is a prefix of the other, the longer list wins.
pub fn compare_importance(a: &ImportanceList, b: &ImportanceList) -> ComparisonResult {
    let (a, b) = (a.as_slice(), b.as_slice());
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Greater => return ComparisonResult::First,
            Ordering::Less => return ComparisonResult::Second,
            Ordering::Equal => {}
        }
    }
    match a.len().cmp(&b.len()) {
        Ordering::Greater => ComparisonResult::First,
        Ordering::Less => ComparisonResult::Second,
        Ordering::Equal => ComparisonResult::Tie,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stakeholder::Degree;
    use ComparisonResult::*;

    fn l(v: &[u8]) -> ImportanceList {
        ImportanceList::from_degrees(v.iter().map(|&d| Degree::new(d).unwrap())).unwrap()
    }

    #[test]
    fn scenario_comparisons() {
        assert_eq!(compare_importance(&l(&[5]), &l(&[1])), First);
        assert_eq!(compare_importance(&l(&[5, 4]), &l(&[5, 3])), First);
        assert_eq!(compare_importance(&l(&[4, 2]), &l(&[4])), First);
        assert_eq!(compare_importance(&l(&[4, 1]), &l(&[5])), Second);
        assert_eq!(compare_importance(&l(&[3, 2]), &l(&[3, 2])), Tie);
    }
}
