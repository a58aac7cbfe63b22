//! Validity of (partial) configurations and an exhaustive enumerator of the
//! full products of small models.

mod enumerate;
mod sat;

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ConstraintId, ConstraintKind, FeatureId, FeatureKind, FeatureModel, ModelError};
use crate::stakeholder::Literal;

pub use enumerate::{enumerate_valid, EnumerateError, MAX_ENUMERATION_FEATURES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// `F` and `¬F` both present.
    Complementary,
    /// Two or more positive members of one XOR group.
    XorMultiple,
    /// `requires A B` with `A` desired and `B` not desired.
    RequireUnsatisfied,
    /// `excludes A B` with both desired.
    ExcludeViolated,
    /// The tree cannot be completed: either an ancestor or mandatory child
    /// of a desired feature is undesired, or no full product extends the
    /// configuration.
    TreeBroken,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub literals: Vec<Literal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<ConstraintId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        ValidityReport {
            valid: violations.is_empty(),
            violations,
        }
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

/// A full product: the set of selected features, every other feature being
/// deselected. Always contains the root.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CompleteConfiguration {
    pub selected: BTreeSet<String>,
}

impl CompleteConfiguration {
    pub fn contains(&self, feature: &str) -> bool {
        self.selected.contains(feature)
    }

    pub(crate) fn from_ids(model: &FeatureModel, ids: impl IntoIterator<Item = FeatureId>) -> Self {
        CompleteConfiguration {
            selected: ids.into_iter().map(|id| model.name(id).to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletionError {
    #[error("`{feature}` is required by the tree but `¬{feature}` is in the configuration")]
    Contradiction { feature: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn resolve_ids(config: &[Literal], model: &FeatureModel) -> Result<Vec<(FeatureId, bool)>, ModelError> {
    config
        .iter()
        .map(|l| Ok((model.require_id(&l.feature)?, l.is_positive())))
        .collect()
}

/// Closure of the desired features under "parent of a selected feature is
/// selected" and "mandatory child of a selected feature is selected",
/// always including the root.
fn closure(model: &FeatureModel, seeds: impl IntoIterator<Item = FeatureId>) -> Vec<bool> {
    let mut selected = vec![false; model.len()];
    let mut work: Vec<FeatureId> = vec![model.root()];
    work.extend(seeds);
    while let Some(id) = work.pop() {
        if std::mem::replace(&mut selected[id.0], true) {
            continue;
        }
        if let Some(p) = model.feature(id).parent {
            work.push(p);
        }
        work.extend(
            model
                .children(id)
                .iter()
                .filter(|c| model.feature(**c).kind == FeatureKind::Mandatory),
        );
    }
    selected
}

/// Completes the desired features with their ancestors and the mandatory
/// closure. Group decisions are left open.
pub fn complete(config: &[Literal], model: &FeatureModel) -> Result<CompleteConfiguration, CompletionError> {
    let ids = resolve_ids(config, model)?;
    let selected = closure(model, ids.iter().filter(|(_, p)| *p).map(|(id, _)| *id));
    if let Some((id, _)) = ids.iter().find(|(id, pos)| !pos && selected[id.0]) {
        return Err(CompletionError::Contradiction {
            feature: model.name(*id).to_string(),
        });
    }
    Ok(CompleteConfiguration::from_ids(
        model,
        selected
            .iter()
            .enumerate()
            .filter(|(_, s)| **s)
            .map(|(i, _)| FeatureId(i)),
    ))
}

/// True iff every desired feature is selected and every undesired one is not.
pub fn is_subsumed(config: &[Literal], complete: &CompleteConfiguration) -> bool {
    config.iter().all(|l| complete.contains(&l.feature) == l.is_positive())
}

/// Checks a literal set against the model.
///
/// Beyond the local checks (complementary pairs, XOR groups, require and
/// exclude constraints, tree closure) the configuration is valid only if
/// some full product of the model extends it.
pub fn check_validity(config: &[Literal], model: &FeatureModel) -> Result<ValidityReport, ModelError> {
    let ids = resolve_ids(config, model)?;
    let positive: HashSet<FeatureId> = ids.iter().filter(|(_, p)| *p).map(|(id, _)| *id).collect();
    let negative: HashSet<FeatureId> = ids.iter().filter(|(_, p)| !*p).map(|(id, _)| *id).collect();
    let lit = |id: FeatureId, positive: bool| Literal {
        feature: model.name(id).to_string(),
        polarity: if positive {
            crate::stakeholder::Polarity::Positive
        } else {
            crate::stakeholder::Polarity::Negative
        },
    };

    let mut violations = Vec::new();
    let mut seen = HashSet::new();
    for &(id, pos) in &ids {
        if pos && negative.contains(&id) && seen.insert(id) {
            violations.push(Violation {
                kind: ViolationKind::Complementary,
                literals: vec![lit(id, true), lit(id, false)],
                constraint: None,
            });
        }
    }
    for group in model.xor_groups() {
        let chosen: Vec<Literal> = group
            .members
            .iter()
            .filter(|m| positive.contains(m))
            .map(|&m| lit(m, true))
            .collect();
        if chosen.len() >= 2 {
            violations.push(Violation {
                kind: ViolationKind::XorMultiple,
                literals: chosen,
                constraint: None,
            });
        }
    }
    for c in model.constraints() {
        let kind = match c.kind {
            ConstraintKind::Requires if positive.contains(&c.lhs) && !positive.contains(&c.rhs) => {
                ViolationKind::RequireUnsatisfied
            }
            ConstraintKind::Excludes if positive.contains(&c.lhs) && positive.contains(&c.rhs) => {
                ViolationKind::ExcludeViolated
            }
            _ => continue,
        };
        violations.push(Violation {
            kind,
            literals: vec![lit(c.lhs, true), lit(c.rhs, kind == ViolationKind::ExcludeViolated)],
            constraint: Some(c.id),
        });
    }
    let selected = closure(model, positive.iter().copied());
    let mut broken: Vec<FeatureId> = negative.iter().copied().filter(|id| selected[id.0]).collect();
    broken.sort();
    for id in broken {
        violations.push(Violation {
            kind: ViolationKind::TreeBroken,
            literals: vec![lit(id, false)],
            constraint: None,
        });
    }

    if violations.is_empty() && !is_extendable(&ids, model) {
        violations.push(Violation {
            kind: ViolationKind::TreeBroken,
            literals: Vec::new(),
            constraint: None,
        });
    }
    Ok(ValidityReport::from_violations(violations))
}

fn is_extendable(ids: &[(FeatureId, bool)], model: &FeatureModel) -> bool {
    let assumptions: Vec<(usize, bool)> = ids.iter().map(|&(id, p)| (id.0, p)).collect();
    sat::Cnf::from_model(model).solve(&assumptions).is_some()
}

/// A full product extending `config`, if one exists.
pub fn find_extension(config: &[Literal], model: &FeatureModel) -> Result<Option<CompleteConfiguration>, ModelError> {
    let ids = resolve_ids(config, model)?;
    let assumptions: Vec<(usize, bool)> = ids.iter().map(|&(id, p)| (id.0, p)).collect();
    Ok(sat::Cnf::from_model(model).solve(&assumptions).map(|sol| {
        CompleteConfiguration::from_ids(
            model,
            sol.iter().enumerate().filter(|(_, s)| **s).map(|(i, _)| FeatureId(i)),
        )
    }))
}
