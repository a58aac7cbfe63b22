//! Seeded random feature models and stakeholder scenarios, for property
//! tests and benchmarks.

use rand::seq::index::sample;
use rand::Rng;

use crate::model::{ConstraintKind, FeatureId, FeatureKind, FeatureModel, FeatureModelBuilder, GroupKind};
use crate::stakeholder::{Degree, Literal, Polarity, RatedChoice, StakeholderConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelShape {
    /// Total number of features, root included.
    pub features: usize,
    pub xor_groups: usize,
    pub or_groups: usize,
    pub constraints: usize,
    /// Per-mille chance that a solitary feature is mandatory.
    pub mandatory_permille: u32,
}

impl ModelShape {
    pub fn new(features: usize, xor_groups: usize, constraints: usize) -> Self {
        ModelShape {
            features,
            xor_groups,
            or_groups: 0,
            constraints,
            mandatory_permille: 150,
        }
    }
}

/// Features are named `F0` (the root) to `F{n-1}`. Groups get two or three
/// members while features remain; constraints relate random distinct
/// features, 60% `requires`.
pub fn random_model<R: Rng>(rng: &mut R, shape: ModelShape) -> FeatureModel {
    let n = shape.features.max(1);
    let mut b = FeatureModelBuilder::new("F0").expect("valid root name");
    let mut declared: Vec<FeatureId> = vec![b.root()];
    let mut next = 1;
    let mut groups_left = [(GroupKind::Xor, shape.xor_groups), (GroupKind::Or, shape.or_groups)];

    while next < n {
        let remaining = n - next;
        let pending: Vec<usize> = (0..groups_left.len()).filter(|&i| groups_left[i].1 > 0).collect();
        let make_group = remaining >= 2 && !pending.is_empty() && rng.gen_bool(0.35);
        let parent = declared[rng.gen_range(0..declared.len())];
        if make_group {
            let slot = pending[rng.gen_range(0..pending.len())];
            groups_left[slot].1 -= 1;
            let g = b.add_group(groups_left[slot].0, parent);
            let size = rng.gen_range(2..=3.min(remaining));
            for _ in 0..size {
                let id = b.add_member(g, &format!("F{next}")).expect("fresh name");
                declared.push(id);
                next += 1;
            }
        } else {
            let kind = if rng.gen_range(0..1000) < shape.mandatory_permille {
                FeatureKind::Mandatory
            } else {
                FeatureKind::Optional
            };
            let id = b.add_feature(&format!("F{next}"), parent, kind).expect("fresh name");
            declared.push(id);
            next += 1;
        }
    }

    if n >= 2 {
        for _ in 0..shape.constraints {
            let pair = sample(rng, n, 2);
            let kind = if rng.gen_bool(0.6) {
                ConstraintKind::Requires
            } else {
                ConstraintKind::Excludes
            };
            b.add_constraint(kind, &format!("F{}", pair.index(0)), &format!("F{}", pair.index(1)));
        }
    }
    b.build().expect("generator respects model invariants")
}

/// `count` stakeholders named `S1..`, each rating between `min_choices` and
/// `max_choices` distinct non-root features (70% desired).
pub fn random_stakeholders<R: Rng>(
    rng: &mut R,
    model: &FeatureModel,
    count: usize,
    min_choices: usize,
    max_choices: usize,
) -> Vec<StakeholderConfig> {
    let candidates: Vec<&str> = model
        .features()
        .filter(|(id, _)| *id != model.root())
        .map(|(_, f)| f.name.as_str())
        .collect();
    (1..=count)
        .map(|i| {
            let hi = max_choices.min(candidates.len());
            let lo = min_choices.min(hi);
            let k = rng.gen_range(lo..=hi);
            let choices = sample(rng, candidates.len(), k)
                .into_iter()
                .map(|idx| RatedChoice {
                    literal: Literal {
                        feature: candidates[idx].to_string(),
                        polarity: if rng.gen_bool(0.7) {
                            Polarity::Positive
                        } else {
                            Polarity::Negative
                        },
                    },
                    degree: Degree::new(rng.gen_range(1..=5)).expect("in range"),
                })
                .collect();
            StakeholderConfig::new(format!("S{i}"), choices, model).expect("choices drawn from the model")
        })
        .collect()
}
