use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::compare::{compare_importance, ComparisonResult};
use crate::model::{ConstraintId, ConstraintKind, FeatureModel};
use crate::stakeholder::{Degree, Literal, MergedConfiguration};

/// One literal added by a triggered constraint, rated with the trigger's
/// highest degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropagationRecord {
    pub constraint_id: ConstraintId,
    pub trigger: Literal,
    pub added: Literal,
    pub degree: Degree,
}

/// `(constraint, trigger)` pairs that already fired in this session. Each
/// pair fires at most once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropagationHistory(HashSet<(ConstraintId, Literal)>);

impl PropagationHistory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn has_fired(&self, constraint: ConstraintId, trigger: &Literal) -> bool {
        self.0.contains(&(constraint, trigger.clone()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Walks the constraint list in order and emits the literals forced by the
/// desired features of `config`:
///
/// * `requires A B` with `A` desired adds `B`;
/// * `excludes A B` with `A` desired adds `¬B`, and with `B` desired adds
///   `¬A`. When both are desired only the more important side fires (both
///   on a tie); the other side stays eligible for later passes.
///
/// Degrees are read from the ledger as it stands before any of the returned
/// records is applied.
pub fn propagate_constraints(
    config: &MergedConfiguration,
    model: &FeatureModel,
    history: &mut PropagationHistory,
) -> Vec<PropagationRecord> {
    let mut records = Vec::new();
    let desired = |name: &str| config.contains(&Literal::positive(name));
    let mut fire = |id: ConstraintId, trigger: Literal, added: Literal, records: &mut Vec<PropagationRecord>| {
        if !history.0.insert((id, trigger.clone())) {
            return;
        }
        let degree = config
            .importance(&trigger)
            .expect("a literal in the configuration has a ledger entry")
            .max();
        records.push(PropagationRecord {
            constraint_id: id,
            trigger,
            added,
            degree,
        });
    };

    for c in model.constraints() {
        let (lhs, rhs) = (model.name(c.lhs), model.name(c.rhs));
        match c.kind {
            ConstraintKind::Requires => {
                if desired(lhs) {
                    fire(c.id, Literal::positive(lhs), Literal::positive(rhs), &mut records);
                }
            }
            ConstraintKind::Excludes => {
                let both = desired(lhs) && desired(rhs);
                let outcome = if both {
                    let (l, r) = (Literal::positive(lhs), Literal::positive(rhs));
                    compare_importance(
                        config.importance(&l).expect("ledger entry"),
                        config.importance(&r).expect("ledger entry"),
                    )
                } else {
                    ComparisonResult::Tie
                };
                if desired(lhs) && outcome != ComparisonResult::Second {
                    fire(c.id, Literal::positive(lhs), Literal::negative(rhs), &mut records);
                }
                if desired(rhs) && outcome != ComparisonResult::First {
                    fire(c.id, Literal::positive(rhs), Literal::negative(lhs), &mut records);
                }
            }
        }
    }
    records
}

/// Adds each record's literal (if absent) and inserts its degree into the
/// ledger, in record order.
pub fn apply_additions(config: &mut MergedConfiguration, records: &[PropagationRecord]) {
    for r in records {
        config.ledger_insert(&r.added, r.degree);
    }
}
