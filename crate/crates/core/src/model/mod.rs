//! Feature models: the feature tree, its XOR/OR groups and the cross-tree
//! `requires`/`excludes` constraint table.

mod parse;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::{parse_model, serialize_model, ParseError, ParseErrorKind};

/// Index of a feature inside its [`FeatureModel`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FeatureId(pub usize);

/// Index of a group inside its [`FeatureModel`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureKind {
    Mandatory,
    Optional,
    GroupMember,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Xor,
    Or,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Xor => f.write_str("xor"),
            GroupKind::Or => f.write_str("or"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Feature {
    pub name: String,
    pub parent: Option<FeatureId>,
    pub kind: FeatureKind,
    /// Group this feature is a member of, if any.
    pub group: Option<GroupId>,
    pub children: Vec<FeatureId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    pub kind: GroupKind,
    pub parent: FeatureId,
    pub members: Vec<FeatureId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintKind {
    /// `lhs` selected implies `rhs` selected.
    Requires,
    /// `lhs` and `rhs` are mutually exclusive.
    Excludes,
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintKind::Requires => f.write_str("requires"),
            ConstraintKind::Excludes => f.write_str("excludes"),
        }
    }
}

/// Position of a constraint in its model's constraint list.
pub type ConstraintId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossTreeConstraint {
    pub id: ConstraintId,
    pub kind: ConstraintKind,
    pub lhs: FeatureId,
    pub rhs: FeatureId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid feature name `{0}`")]
    InvalidName(String),
    #[error("duplicate feature `{0}`")]
    DuplicateFeature(String),
    #[error("feature `{0}` declared under more than one parent")]
    MultipleParents(String),
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("feature `{0}` belongs to more than one group")]
    FeatureInTwoGroups(String),
    #[error("group under `{parent}` needs at least two members, found {found}")]
    GroupTooSmall { parent: String, found: usize },
    #[error("group member `{member}` is not a child of group parent `{parent}`")]
    MemberParentMismatch { member: String, parent: String },
    #[error("constraint `{kind} {name} {name}` relates a feature to itself")]
    SelfConstraint { kind: ConstraintKind, name: String },
    #[error("feature `{0}` is marked as a group member but is in no group")]
    OrphanGroupMember(String),
}

/// A validated feature model. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureModel {
    root: FeatureId,
    features: Vec<Feature>,
    index: HashMap<String, FeatureId>,
    groups: Vec<Group>,
    constraints: Vec<CrossTreeConstraint>,
}

impl FeatureModel {
    pub fn root(&self) -> FeatureId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn feature(&self, id: FeatureId) -> &Feature {
        &self.features[id.0]
    }

    pub fn name(&self, id: FeatureId) -> &str {
        &self.features[id.0].name
    }

    pub fn id(&self, name: &str) -> Option<FeatureId> {
        self.index.get(name).copied()
    }

    pub fn require_id(&self, name: &str) -> Result<FeatureId, ModelError> {
        self.id(name)
            .ok_or_else(|| ModelError::UnknownFeature(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Features in declaration (pre-order) order.
    pub fn features(&self) -> impl Iterator<Item = (FeatureId, &Feature)> + '_ {
        self.features.iter().enumerate().map(|(i, f)| (FeatureId(i), f))
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn group(&self, id: GroupId) -> &Group {
        &self.groups[id.0]
    }

    pub fn xor_groups(&self) -> impl Iterator<Item = &Group> + '_ {
        self.groups.iter().filter(|g| g.kind == GroupKind::Xor)
    }

    pub fn or_groups(&self) -> impl Iterator<Item = &Group> + '_ {
        self.groups.iter().filter(|g| g.kind == GroupKind::Or)
    }

    pub fn constraints(&self) -> &[CrossTreeConstraint] {
        &self.constraints
    }

    pub fn children(&self, id: FeatureId) -> &[FeatureId] {
        &self.features[id.0].children
    }

    /// Ancestors of `id`, nearest first, excluding `id` itself.
    pub fn ancestors(&self, id: FeatureId) -> impl Iterator<Item = FeatureId> + '_ {
        std::iter::successors(self.features[id.0].parent, move |p| self.features[p.0].parent)
    }

    /// Transitive children of `feature`, excluding `feature` itself.
    pub fn descendants(&self, feature: &str) -> Result<BTreeSet<&str>, ModelError> {
        let start = self.require_id(feature)?;
        let mut out = BTreeSet::new();
        let mut stack: Vec<FeatureId> = self.children(start).to_vec();
        while let Some(id) = stack.pop() {
            out.insert(self.name(id));
            stack.extend_from_slice(self.children(id));
        }
        Ok(out)
    }

    /// The child "slots" of a feature: each solitary child, and each group
    /// once, at the position of its first member.
    pub fn slots(&self, id: FeatureId) -> Vec<Slot> {
        let mut slots = Vec::new();
        let mut seen = Vec::new();
        for &child in self.children(id) {
            match self.features[child.0].group {
                Some(g) if !seen.contains(&g) => {
                    seen.push(g);
                    slots.push(Slot::Group(g));
                }
                Some(_) => {}
                None => slots.push(Slot::Solitary(child)),
            }
        }
        slots
    }
}

/// One position in a feature's child list; see [`FeatureModel::slots`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Solitary(FeatureId),
    Group(GroupId),
}

/// Feature names are non-empty and drawn from `[A-Za-z0-9_.-]`, not starting
/// with `-` or `.`.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

/// Incremental construction of a [`FeatureModel`]. All invariants are
/// checked in [`FeatureModelBuilder::build`] or as items are added.
#[derive(Debug, Clone)]
pub struct FeatureModelBuilder {
    features: Vec<Feature>,
    index: HashMap<String, FeatureId>,
    groups: Vec<Group>,
    constraints: Vec<(ConstraintKind, String, String)>,
}

impl FeatureModelBuilder {
    pub fn new(root: &str) -> Result<Self, ModelError> {
        if !is_valid_name(root) {
            return Err(ModelError::InvalidName(root.to_string()));
        }
        let mut index = HashMap::new();
        index.insert(root.to_string(), FeatureId(0));
        Ok(FeatureModelBuilder {
            features: vec![Feature {
                name: root.to_string(),
                parent: None,
                kind: FeatureKind::Mandatory,
                group: None,
                children: Vec::new(),
            }],
            index,
            groups: Vec::new(),
            constraints: Vec::new(),
        })
    }

    pub fn root(&self) -> FeatureId {
        FeatureId(0)
    }

    pub fn lookup(&self, name: &str) -> Option<FeatureId> {
        self.index.get(name).copied()
    }

    /// Adds a solitary (mandatory or optional) child of `parent`.
    pub fn add_feature(&mut self, name: &str, parent: FeatureId, kind: FeatureKind) -> Result<FeatureId, ModelError> {
        if !is_valid_name(name) {
            return Err(ModelError::InvalidName(name.to_string()));
        }
        if let Some(&existing) = self.index.get(name) {
            return Err(if self.features[existing.0].parent == Some(parent) {
                ModelError::DuplicateFeature(name.to_string())
            } else {
                ModelError::MultipleParents(name.to_string())
            });
        }
        let id = FeatureId(self.features.len());
        self.features.push(Feature {
            name: name.to_string(),
            parent: Some(parent),
            kind,
            group: None,
            children: Vec::new(),
        });
        self.features[parent.0].children.push(id);
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Opens an empty group under `parent`; members are added with
    /// [`FeatureModelBuilder::add_member`].
    pub fn add_group(&mut self, kind: GroupKind, parent: FeatureId) -> GroupId {
        let id = GroupId(self.groups.len());
        self.groups.push(Group {
            kind,
            parent,
            members: Vec::new(),
        });
        id
    }

    pub fn add_member(&mut self, group: GroupId, name: &str) -> Result<FeatureId, ModelError> {
        let parent = self.groups[group.0].parent;
        let id = self.add_feature(name, parent, FeatureKind::GroupMember)?;
        self.features[id.0].group = Some(group);
        self.groups[group.0].members.push(id);
        Ok(id)
    }

    /// Puts an already declared feature into a group. Used for models
    /// assembled outside the DSL; the feature must be a child of the group
    /// parent and not yet in a group.
    pub fn assign_to_group(&mut self, group: GroupId, member: FeatureId) -> Result<(), ModelError> {
        let f = &mut self.features[member.0];
        if f.group.is_some() {
            return Err(ModelError::FeatureInTwoGroups(f.name.clone()));
        }
        let parent = self.groups[group.0].parent;
        if f.parent != Some(parent) {
            return Err(ModelError::MemberParentMismatch {
                member: f.name.clone(),
                parent: self.features[parent.0].name.clone(),
            });
        }
        f.group = Some(group);
        f.kind = FeatureKind::GroupMember;
        self.groups[group.0].members.push(member);
        Ok(())
    }

    pub fn group_size(&self, group: GroupId) -> usize {
        self.groups[group.0].members.len()
    }

    pub fn group_parent_name(&self, group: GroupId) -> &str {
        &self.features[self.groups[group.0].parent.0].name
    }

    pub fn add_constraint(&mut self, kind: ConstraintKind, lhs: &str, rhs: &str) {
        self.constraints.push((kind, lhs.to_string(), rhs.to_string()));
    }

    pub fn build(self) -> Result<FeatureModel, ModelError> {
        for g in &self.groups {
            if g.members.len() < 2 {
                return Err(ModelError::GroupTooSmall {
                    parent: self.features[g.parent.0].name.clone(),
                    found: g.members.len(),
                });
            }
        }
        for f in &self.features {
            if f.kind == FeatureKind::GroupMember && f.group.is_none() {
                return Err(ModelError::OrphanGroupMember(f.name.clone()));
            }
        }
        let mut constraints = Vec::with_capacity(self.constraints.len());
        for (id, (kind, lhs, rhs)) in self.constraints.into_iter().enumerate() {
            let l = *self
                .index
                .get(&lhs)
                .ok_or_else(|| ModelError::UnknownFeature(lhs.clone()))?;
            let r = *self
                .index
                .get(&rhs)
                .ok_or_else(|| ModelError::UnknownFeature(rhs.clone()))?;
            if l == r {
                return Err(ModelError::SelfConstraint { kind, name: lhs });
            }
            constraints.push(CrossTreeConstraint {
                id,
                kind,
                lhs: l,
                rhs: r,
            });
        }
        Ok(FeatureModel {
            root: FeatureId(0),
            features: self.features,
            index: self.index,
            groups: self.groups,
            constraints,
        })
    }
}
