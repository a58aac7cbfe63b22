use thiserror::Error;

use super::CompleteConfiguration;
use crate::model::{ConstraintKind, FeatureId, FeatureKind, FeatureModel, GroupKind, Slot};

/// Largest model [`enumerate_valid`] accepts.
pub const MAX_ENUMERATION_FEATURES: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("model has {features} features, enumeration is limited to {limit}")]
    ModelTooLarge { features: usize, limit: usize },
}

/// Every full product of the model, in tree-walk order.
///
/// Products are built subtree by subtree (a selected feature's mandatory
/// children, optional children, one member per XOR group and a non-empty
/// member subset per OR group), then filtered by the cross-tree constraints.
pub fn enumerate_valid(model: &FeatureModel) -> Result<Vec<CompleteConfiguration>, EnumerateError> {
    if model.len() > MAX_ENUMERATION_FEATURES {
        return Err(EnumerateError::ModelTooLarge {
            features: model.len(),
            limit: MAX_ENUMERATION_FEATURES,
        });
    }
    let mut out = Vec::new();
    let mut selected = vec![false; model.len()];
    for product in subtree_products(model, model.root()) {
        selected.iter_mut().for_each(|s| *s = false);
        for id in &product {
            selected[id.0] = true;
        }
        let ok = model.constraints().iter().all(|c| match c.kind {
            ConstraintKind::Requires => !selected[c.lhs.0] || selected[c.rhs.0],
            ConstraintKind::Excludes => !(selected[c.lhs.0] && selected[c.rhs.0]),
        });
        if ok {
            let mut ids = product;
            ids.sort();
            out.push(CompleteConfiguration::from_ids(model, ids));
        }
    }
    Ok(out)
}

/// All feature sets of the subtree rooted at `id`, given `id` is selected.
fn subtree_products(model: &FeatureModel, id: FeatureId) -> Vec<Vec<FeatureId>> {
    let mut acc: Vec<Vec<FeatureId>> = vec![vec![id]];
    for slot in model.slots(id) {
        let options: Vec<Vec<FeatureId>> = match slot {
            Slot::Solitary(child) => {
                let sub = subtree_products(model, child);
                match model.feature(child).kind {
                    FeatureKind::Mandatory => sub,
                    _ => std::iter::once(Vec::new()).chain(sub).collect(),
                }
            }
            Slot::Group(g) => {
                let group = model.group(g);
                match group.kind {
                    GroupKind::Xor => group.members.iter().flat_map(|&m| subtree_products(model, m)).collect(),
                    GroupKind::Or => {
                        let per_member: Vec<Vec<Vec<FeatureId>>> =
                            group.members.iter().map(|&m| subtree_products(model, m)).collect();
                        let mut subsets = Vec::new();
                        for mask in 1u64..(1 << group.members.len()) {
                            let mut partial: Vec<Vec<FeatureId>> = vec![Vec::new()];
                            for (i, member) in per_member.iter().enumerate() {
                                if mask >> i & 1 == 1 {
                                    partial = product(&partial, member);
                                }
                            }
                            subsets.extend(partial);
                        }
                        subsets
                    }
                }
            }
        };
        acc = product(&acc, &options);
    }
    acc
}

fn product(left: &[Vec<FeatureId>], right: &[Vec<FeatureId>]) -> Vec<Vec<FeatureId>> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for l in left {
        for r in right {
            let mut v = Vec::with_capacity(l.len() + r.len());
            v.extend_from_slice(l);
            v.extend_from_slice(r);
            out.push(v);
        }
    }
    out
}
