use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::conflicts::{Conflict, ConflictKind};
use super::EngineError;
use crate::stakeholder::{Literal, MergedConfiguration, StakeholderConfig};

/// Product-manager policy for conflicts the importance degrees cannot
/// decide.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ManagerRule {
    /// Keep desired features: drop `¬F`; on an XOR pair drop the member
    /// with the shorter ledger, then the larger name.
    #[default]
    MostComplete,
    /// Drop desired features: drop `F`; on an XOR pair drop the larger name.
    Simplest,
    /// Keep whatever the given stakeholder chose, falling back to
    /// [`ManagerRule::MostComplete`].
    Priority(String),
}

impl fmt::Display for ManagerRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManagerRule::MostComplete => f.write_str("most-complete"),
            ManagerRule::Simplest => f.write_str("simplest"),
            ManagerRule::Priority(id) => write!(f, "priority:{id}"),
        }
    }
}

impl FromStr for ManagerRule {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "most-complete" => Ok(ManagerRule::MostComplete),
            "simplest" => Ok(ManagerRule::Simplest),
            _ => match s.strip_prefix("priority:") {
                Some(id) if !id.is_empty() => Ok(ManagerRule::Priority(id.to_string())),
                _ => Err(EngineError::UnknownRule(s.to_string())),
            },
        }
    }
}

impl TryFrom<String> for ManagerRule {
    type Error = EngineError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<ManagerRule> for String {
    fn from(rule: ManagerRule) -> String {
        rule.to_string()
    }
}

fn most_complete_loser(config: &MergedConfiguration, conflict: &Conflict) -> Literal {
    let (a, b) = &conflict.literals;
    match conflict.kind {
        ConflictKind::Explicit => if a.is_positive() { b } else { a }.clone(),
        ConflictKind::Xor => {
            let len = |l: &Literal| config.importance(l).map_or(0, |list| list.len());
            // shorter ledger loses; equal lengths: larger name loses
            match len(a).cmp(&len(b)) {
                std::cmp::Ordering::Less => a.clone(),
                std::cmp::Ordering::Greater => b.clone(),
                std::cmp::Ordering::Equal => a.max(b).clone(),
            }
        }
    }
}

fn simplest_loser(conflict: &Conflict) -> Literal {
    let (a, b) = &conflict.literals;
    match conflict.kind {
        ConflictKind::Explicit => if a.is_positive() { a } else { b }.clone(),
        ConflictKind::Xor => a.max(b).clone(),
    }
}

/// Decides every conflict in `remained` (in order) and returns the literals
/// to remove. A conflict one of whose literals is already slated for removal
/// counts as settled by that removal.
pub fn apply_manager_rule(
    config: &MergedConfiguration,
    remained: &[Conflict],
    rule: &ManagerRule,
    configs: &[StakeholderConfig],
) -> Result<Vec<Literal>, EngineError> {
    let favoured = match rule {
        ManagerRule::Priority(id) => Some(
            configs
                .iter()
                .find(|c| c.stakeholder() == id)
                .ok_or_else(|| EngineError::UnknownStakeholder(id.clone()))?,
        ),
        _ => None,
    };
    let mut to_remove: Vec<Literal> = Vec::new();
    for conflict in remained {
        if to_remove.iter().any(|l| conflict.involves(l)) {
            continue;
        }
        let loser = match rule {
            ManagerRule::MostComplete => most_complete_loser(config, conflict),
            ManagerRule::Simplest => simplest_loser(conflict),
            ManagerRule::Priority(_) => {
                let stk = favoured.expect("looked up above");
                let (a, b) = &conflict.literals;
                match (stk.chose(a), stk.chose(b)) {
                    (true, false) => b.clone(),
                    (false, true) => a.clone(),
                    _ => most_complete_loser(config, conflict),
                }
            }
        };
        to_remove.push(loser);
    }
    Ok(to_remove)
}
