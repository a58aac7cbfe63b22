#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use plconf::model::{ConstraintKind, FeatureKind, GroupKind};
use plconf::{parse_model, parse_stakeholder_config, FeatureModel, Literal, StakeholderConfig};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn portal() -> FeatureModel {
    parse_model(&fs::read_to_string(fixtures().join("webportal.fm")).unwrap()).unwrap()
}

pub fn scenario(model: &FeatureModel) -> Vec<StakeholderConfig> {
    (1..=5)
        .map(|i| {
            let text = fs::read_to_string(fixtures().join(format!("scenario/stk{i}.stk"))).unwrap();
            parse_stakeholder_config(&text, model).unwrap()
        })
        .collect()
}

pub fn lits(s: &str) -> Vec<Literal> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().unwrap())
        .collect()
}

pub fn lit_set(s: &str) -> BTreeSet<Literal> {
    lits(s).into_iter().collect()
}

pub const FINAL: &str = "KeyWordSupport, DB, https, ¬ms, Php, Text, Dynamic, ¬Sec, Database, Active, DataTransfer";

/// Every full product of `model` found by scanning all `2^(n-1)` feature
/// subsets containing the root and testing each against the tree, group and
/// cross-tree rules directly. Returned as sorted name sets, sorted.
pub fn bitmask_products(model: &FeatureModel) -> Vec<BTreeSet<String>> {
    let n = model.len();
    assert!(n <= 32, "bitmask oracle limited to 32 features");
    assert_eq!(model.root().0, 0, "root is feature 0 in parsed models");

    let parents: Vec<(u32, u32)> = model
        .features()
        .filter_map(|(id, f)| f.parent.map(|p| (id.0 as u32, p.0 as u32)))
        .collect();
    let mandatory: Vec<(u32, u32)> = model
        .features()
        .filter(|(_, f)| f.kind == FeatureKind::Mandatory)
        .filter_map(|(id, f)| f.parent.map(|p| (id.0 as u32, p.0 as u32)))
        .collect();
    let groups: Vec<(u32, u64, bool)> = model
        .groups()
        .iter()
        .map(|g| {
            let members = g.members.iter().fold(0u64, |m, id| m | 1 << id.0);
            (g.parent.0 as u32, members, g.kind == GroupKind::Xor)
        })
        .collect();
    let constraints: Vec<(u32, u32, bool)> = model
        .constraints()
        .iter()
        .map(|c| (c.lhs.0 as u32, c.rhs.0 as u32, c.kind == ConstraintKind::Requires))
        .collect();

    let on = |mask: u64, bit: u32| mask >> bit & 1 == 1;
    let mut out = Vec::new();
    for rest in 0u64..1 << (n - 1) {
        let mask = rest << 1 | 1;
        if parents.iter().any(|&(c, p)| on(mask, c) && !on(mask, p)) {
            continue;
        }
        if mandatory.iter().any(|&(c, p)| on(mask, p) && !on(mask, c)) {
            continue;
        }
        if groups.iter().any(|&(p, members, xor)| {
            let count = (mask & members).count_ones();
            on(mask, p) && if xor { count != 1 } else { count == 0 }
        }) {
            continue;
        }
        if constraints
            .iter()
            .any(|&(l, r, req)| on(mask, l) && if req { !on(mask, r) } else { on(mask, r) })
        {
            continue;
        }
        out.push(
            (0..n)
                .filter(|&i| on(mask, i as u32))
                .map(|i| model.name(plconf::model::FeatureId(i)).to_string())
                .collect(),
        );
    }
    out.sort();
    out
}

/// Does some bitmask product agree with every literal?
pub fn oracle_subsumes(products: &[BTreeSet<String>], config: &[Literal]) -> bool {
    products
        .iter()
        .any(|p| config.iter().all(|l| p.contains(&l.feature) == l.is_positive()))
}
