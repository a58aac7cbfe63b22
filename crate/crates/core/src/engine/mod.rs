//! Conflict resolution over merged stakeholder choices.
//!
//! A session merges the choices once, then iterates: resolve explicit
//! `F`/`¬F` conflicts by importance, resolve XOR-group conflicts the same
//! way, propagate `requires`/`excludes` constraints, and check validity. It
//! stops on a valid configuration or when an iteration leaves the literal
//! set unchanged. Conflicts that survive are handed to the manager rule.

mod compare;
mod conflicts;
mod manager;
mod propagate;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::FeatureModel;
use crate::stakeholder::{merge_configs, Literal, MergedConfiguration, StakeholderConfig};
use crate::validity::{check_validity, ValidityReport};

pub use compare::{compare_importance, ComparisonResult};
pub use conflicts::{
    resolve_explicit_conflicts, resolve_xor_conflicts, Conflict, ConflictKind, ConflictResolution, Resolver,
};
pub use manager::{apply_manager_rule, ManagerRule};
pub use propagate::{apply_additions, propagate_constraints, PropagationHistory, PropagationRecord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("unknown manager rule `{0}` (expected most-complete, simplest or priority:<stakeholder>)")]
    UnknownRule(String),
    #[error("priority rule names unknown stakeholder `{0}`")]
    UnknownStakeholder(String),
    #[error("stakeholder `{stakeholder}` chose unknown feature `{feature}`")]
    UnknownFeature { stakeholder: String, feature: String },
    #[error("resolution did not settle within {0} iterations")]
    IterationCapExceeded(usize),
}

/// What one pass of the loop did.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationTrace {
    /// 1-based.
    pub index: usize,
    pub explicit_conflicts: Vec<Conflict>,
    pub xor_conflicts: Vec<Conflict>,
    pub propagation: Vec<PropagationRecord>,
    /// Literal set at the end of the iteration.
    pub snapshot: Vec<Literal>,
    pub valid: bool,
}

/// The manager-rule step run after the loop, when it ran.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManagerStep {
    pub rule: ManagerRule,
    pub removed: Vec<Literal>,
    pub propagation: Vec<PropagationRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionOutcome {
    #[serde(rename = "final")]
    pub final_config: Vec<Literal>,
    pub valid: bool,
    pub trace: Vec<IterationTrace>,
    /// Conflicts importance could not decide that still applied when the
    /// loop ended, with the manager's decision when it made one.
    pub remained: Vec<Conflict>,
    pub manager: Option<ManagerStep>,
    pub validity: ValidityReport,
}

impl ResolutionOutcome {
    pub fn manager_rule_applied(&self) -> Option<&ManagerRule> {
        self.manager.as_ref().map(|m| &m.rule)
    }

    pub fn iterations(&self) -> usize {
        self.trace.len()
    }
}

/// Default bound on loop iterations: `2 * |features| + 2`.
pub fn default_iteration_cap(model: &FeatureModel) -> usize {
    2 * model.len() + 2
}

pub fn resolve_session(
    model: &FeatureModel,
    configs: &[StakeholderConfig],
    rule: &ManagerRule,
) -> Result<ResolutionOutcome, EngineError> {
    resolve_session_with_cap(model, configs, rule, default_iteration_cap(model))
}

fn remove_all(config: &mut MergedConfiguration, literals: &[Literal]) {
    for l in literals {
        config.remove(l);
    }
}

fn validity(config: &MergedConfiguration, model: &FeatureModel) -> ValidityReport {
    let literals: Vec<Literal> = config.literals().iter().cloned().collect();
    check_validity(&literals, model).expect("configuration features are checked on entry")
}

fn record_remained(all: &mut Vec<Conflict>, found: &ConflictResolution) {
    for c in found.remained() {
        if !all.iter().any(|known| known.same_pair(c)) {
            all.push(c.clone());
        }
    }
}

pub fn resolve_session_with_cap(
    model: &FeatureModel,
    configs: &[StakeholderConfig],
    rule: &ManagerRule,
    max_iterations: usize,
) -> Result<ResolutionOutcome, EngineError> {
    for cfg in configs {
        if let Some(c) = cfg.choices().iter().find(|c| !model.contains(&c.literal.feature)) {
            return Err(EngineError::UnknownFeature {
                stakeholder: cfg.stakeholder().to_string(),
                feature: c.literal.feature.clone(),
            });
        }
    }
    if let ManagerRule::Priority(id) = rule {
        if !configs.iter().any(|c| c.stakeholder() == id) {
            return Err(EngineError::UnknownStakeholder(id.clone()));
        }
    }

    let mut current = merge_configs(configs);
    let mut history = PropagationHistory::new();
    let mut remained: Vec<Conflict> = Vec::new();
    let mut trace = Vec::new();
    let mut report;

    loop {
        if trace.len() == max_iterations {
            return Err(EngineError::IterationCapExceeded(max_iterations));
        }
        let previous: HashSet<Literal> = current.literals().iter().cloned().collect();

        let explicit = resolve_explicit_conflicts(&current);
        remove_all(&mut current, &explicit.to_remove);
        record_remained(&mut remained, &explicit);

        let xor = resolve_xor_conflicts(&current, model);
        remove_all(&mut current, &xor.to_remove);
        record_remained(&mut remained, &xor);

        let records = propagate_constraints(&current, model, &mut history);
        apply_additions(&mut current, &records);

        let different =
            current.literals().len() != previous.len() || current.literals().iter().any(|l| !previous.contains(l));
        report = validity(&current, model);
        trace.push(IterationTrace {
            index: trace.len() + 1,
            explicit_conflicts: explicit.conflicts,
            xor_conflicts: xor.conflicts,
            propagation: records,
            snapshot: current.literals().iter().cloned().collect(),
            valid: report.valid,
        });
        if report.valid || !different {
            break;
        }
    }

    // drop conflicts whose two literals are no longer both present
    remained.retain(|c| current.contains(&c.literals.0) && current.contains(&c.literals.1));

    let mut manager = None;
    if !report.valid && !remained.is_empty() {
        let removed = apply_manager_rule(&current, &remained, rule, configs)?;
        for conflict in &mut remained {
            if let Some(loser) = removed.iter().find(|l| conflict.involves(l)) {
                conflict.loser = Some(loser.clone());
                conflict.resolved_by = Some(Resolver::ManagerRule);
            }
        }
        remove_all(&mut current, &removed);
        let records = propagate_constraints(&current, model, &mut history);
        apply_additions(&mut current, &records);
        report = validity(&current, model);
        manager = Some(ManagerStep {
            rule: rule.clone(),
            removed,
            propagation: records,
        });
    }

    Ok(ResolutionOutcome {
        final_config: current.literals().iter().cloned().collect(),
        valid: report.valid,
        trace,
        remained,
        manager,
        validity: report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_model;
    use crate::stakeholder::parse_stakeholder_config;

    fn tie_setup() -> (FeatureModel, Vec<StakeholderConfig>) {
        let m = parse_model("Root\n  F?\n").unwrap();
        let a = parse_stakeholder_config("stakeholder: A\nF:+:3\n", &m).unwrap();
        let b = parse_stakeholder_config("stakeholder: B\nF:-:3\n", &m).unwrap();
        (m, vec![a, b])
    }

    #[test]
    fn tie_escalates_to_manager() {
        let (m, cfgs) = tie_setup();
        let out = resolve_session(&m, &cfgs, &ManagerRule::MostComplete).unwrap();
        assert!(out.valid);
        assert_eq!(out.final_config, [Literal::positive("F")]);
        assert_eq!(out.iterations(), 1);
        assert_eq!(out.manager_rule_applied(), Some(&ManagerRule::MostComplete));
        assert_eq!(out.remained.len(), 1);
        assert_eq!(out.remained[0].loser, Some(Literal::negative("F")));
        assert_eq!(out.remained[0].resolved_by, Some(Resolver::ManagerRule));

        let out = resolve_session(&m, &cfgs, &ManagerRule::Simplest).unwrap();
        assert!(out.valid);
        assert_eq!(out.final_config, [Literal::negative("F")]);

        let out = resolve_session(&m, &cfgs, &ManagerRule::Priority("B".into())).unwrap();
        assert_eq!(out.final_config, [Literal::negative("F")]);
    }

    #[test]
    fn already_valid_single_stakeholder() {
        let m = parse_model("R\n  A?\n  B?\n---\nrequires A B\n").unwrap();
        let s = parse_stakeholder_config("stakeholder: S\nA:+:4\n", &m).unwrap();
        let out = resolve_session(&m, &[s], &ManagerRule::default()).unwrap();
        assert!(out.valid);
        assert_eq!(out.final_config, [Literal::positive("A"), Literal::positive("B")]);
        assert_eq!(out.iterations(), 1);
        assert!(out.remained.is_empty());
        assert!(out.manager.is_none());
    }

    #[test]
    fn unknown_priority_stakeholder() {
        let (m, cfgs) = tie_setup();
        assert_eq!(
            resolve_session(&m, &cfgs, &ManagerRule::Priority("C".into())),
            Err(EngineError::UnknownStakeholder("C".into()))
        );
    }

    #[test]
    fn cap_is_enforced() {
        let m = parse_model("R\n  A?\n  B?\n---\nrequires A B\n").unwrap();
        let s = parse_stakeholder_config("stakeholder: S\nA:+:4\nB:-:5\n", &m).unwrap();
        // needs two iterations: B is added, then loses to ¬B
        assert_eq!(
            resolve_session_with_cap(&m, std::slice::from_ref(&s), &ManagerRule::default(), 1),
            Err(EngineError::IterationCapExceeded(1))
        );
        let out = resolve_session(&m, &[s], &ManagerRule::default()).unwrap();
        // A still requires B, which lost: reported invalid, nothing for the manager
        assert!(!out.valid);
        assert!(out.manager.is_none());
    }
}
