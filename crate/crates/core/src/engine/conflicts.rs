use serde::{Deserialize, Serialize};

use super::compare::{compare_importance, ComparisonResult};
use crate::model::FeatureModel;
use crate::stakeholder::{ImportanceList, Literal, MergedConfiguration};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConflictKind {
    /// `F` against `¬F`.
    Explicit,
    /// Two desired members of one XOR group.
    Xor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Resolver {
    Importance,
    ManagerRule,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conflict {
    pub kind: ConflictKind,
    pub literals: (Literal, Literal),
    pub resolved_by: Option<Resolver>,
    pub loser: Option<Literal>,
}

impl Conflict {
    fn new(kind: ConflictKind, a: Literal, b: Literal) -> Self {
        Conflict {
            kind,
            literals: (a, b),
            resolved_by: None,
            loser: None,
        }
    }

    pub fn is_resolved(&self) -> bool {
        self.loser.is_some()
    }

    pub fn involves(&self, literal: &Literal) -> bool {
        &self.literals.0 == literal || &self.literals.1 == literal
    }

    /// Same kind and same pair of literals, resolution aside.
    pub fn same_pair(&self, other: &Conflict) -> bool {
        self.kind == other.kind
            && ((self.literals.0 == other.literals.0 && self.literals.1 == other.literals.1)
                || (self.literals.0 == other.literals.1 && self.literals.1 == other.literals.0))
    }

    fn settle(&mut self, outcome: ComparisonResult) -> Option<Literal> {
        let loser = match outcome {
            ComparisonResult::First => self.literals.1.clone(),
            ComparisonResult::Second => self.literals.0.clone(),
            ComparisonResult::Tie => return None,
        };
        self.resolved_by = Some(Resolver::Importance);
        self.loser = Some(loser.clone());
        Some(loser)
    }
}

/// Conflicts found by one resolution pass and the literals to drop.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConflictResolution {
    pub to_remove: Vec<Literal>,
    /// Every conflict found, resolved or not, in detection order.
    pub conflicts: Vec<Conflict>,
}

impl ConflictResolution {
    pub fn remained(&self) -> impl Iterator<Item = &Conflict> {
        self.conflicts.iter().filter(|c| !c.is_resolved())
    }
}

fn importance<'a>(config: &'a MergedConfiguration, literal: &Literal) -> &'a ImportanceList {
    config
        .importance(literal)
        .unwrap_or_else(|| panic!("no ledger entry for `{literal}` although it is in the configuration"))
}

/// Pairs every undesired literal `¬F` with `F` when both are present and
/// drops the less important one. Ties are left in place.
pub fn resolve_explicit_conflicts(config: &MergedConfiguration) -> ConflictResolution {
    let mut out = ConflictResolution::default();
    for negative in config.literals().iter().filter(|l| !l.is_positive()) {
        let positive = negative.negated();
        if !config.contains(&positive) {
            continue;
        }
        let outcome = compare_importance(importance(config, &positive), importance(config, negative));
        let mut conflict = Conflict::new(ConflictKind::Explicit, positive, negative.clone());
        if let Some(loser) = conflict.settle(outcome) {
            out.to_remove.push(loser);
        }
        out.conflicts.push(conflict);
    }
    out
}

/// Checks every pair of desired members of each XOR group, in member order.
/// A member already marked for removal takes no part in later pairs.
pub fn resolve_xor_conflicts(config: &MergedConfiguration, model: &FeatureModel) -> ConflictResolution {
    let mut out = ConflictResolution::default();
    for group in model.xor_groups() {
        let members: Vec<Literal> = group
            .members
            .iter()
            .map(|&m| Literal::positive(model.name(m)))
            .collect();
        for (j, first) in members.iter().enumerate() {
            for second in &members[j + 1..] {
                if !config.contains(first) || !config.contains(second) {
                    continue;
                }
                if out.to_remove.contains(first) || out.to_remove.contains(second) {
                    continue;
                }
                let outcome = compare_importance(importance(config, first), importance(config, second));
                let mut conflict = Conflict::new(ConflictKind::Xor, first.clone(), second.clone());
                if let Some(loser) = conflict.settle(outcome) {
                    out.to_remove.push(loser);
                }
                out.conflicts.push(conflict);
            }
        }
    }
    out
}
