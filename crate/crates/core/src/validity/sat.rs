//! A small DPLL solver for deciding whether a partial configuration extends
//! to a full product of the model.

use crate::model::{ConstraintKind, FeatureKind, FeatureModel, GroupKind};

/// `(variable, value)`: the literal is true when the variable has `value`.
type Lit = (usize, bool);

pub(crate) struct Cnf {
    vars: usize,
    clauses: Vec<Vec<Lit>>,
    /// occurrences[2 * var + value as usize] = clauses containing `(var, value)`.
    occurrences: Vec<Vec<usize>>,
}

impl Cnf {
    /// Encodes the tree, group and cross-tree semantics of `model`.
    pub(crate) fn from_model(model: &FeatureModel) -> Cnf {
        let mut clauses: Vec<Vec<Lit>> = vec![vec![(model.root().0, true)]];
        for (id, f) in model.features() {
            if let Some(p) = f.parent {
                clauses.push(vec![(id.0, false), (p.0, true)]);
                if f.kind == FeatureKind::Mandatory {
                    clauses.push(vec![(p.0, false), (id.0, true)]);
                }
            }
        }
        for g in model.groups() {
            let mut at_least_one = vec![(g.parent.0, false)];
            at_least_one.extend(g.members.iter().map(|m| (m.0, true)));
            clauses.push(at_least_one);
            if g.kind == GroupKind::Xor {
                for (i, a) in g.members.iter().enumerate() {
                    for b in &g.members[i + 1..] {
                        clauses.push(vec![(a.0, false), (b.0, false)]);
                    }
                }
            }
        }
        for c in model.constraints() {
            clauses.push(match c.kind {
                ConstraintKind::Requires => vec![(c.lhs.0, false), (c.rhs.0, true)],
                ConstraintKind::Excludes => vec![(c.lhs.0, false), (c.rhs.0, false)],
            });
        }
        Cnf::new(model.len(), clauses)
    }

    fn new(vars: usize, clauses: Vec<Vec<Lit>>) -> Cnf {
        let mut occurrences = vec![Vec::new(); 2 * vars];
        for (ci, clause) in clauses.iter().enumerate() {
            for &(v, val) in clause {
                occurrences[2 * v + val as usize].push(ci);
            }
        }
        Cnf {
            vars,
            clauses,
            occurrences,
        }
    }

    /// Finds an assignment satisfying every clause plus the given unit
    /// assumptions, preferring `false` for free variables.
    pub(crate) fn solve(&self, assumptions: &[Lit]) -> Option<Vec<bool>> {
        let mut assign: Vec<Option<bool>> = vec![None; self.vars];
        let mut trail = Vec::new();
        for &(v, val) in assumptions {
            match assign[v] {
                Some(x) if x != val => return None,
                Some(_) => {}
                None => {
                    assign[v] = Some(val);
                    trail.push(v);
                }
            }
        }
        for clause in &self.clauses {
            if let [(v, val)] = clause[..] {
                match assign[v] {
                    Some(x) if x != val => return None,
                    Some(_) => {}
                    None => {
                        assign[v] = Some(val);
                        trail.push(v);
                    }
                }
            }
        }
        if !self.propagate(&mut assign, &mut trail, 0) {
            return None;
        }
        if self.search(&mut assign, &mut trail) {
            Some(assign.into_iter().map(|a| a.unwrap_or(false)).collect())
        } else {
            None
        }
    }

    fn search(&self, assign: &mut [Option<bool>], trail: &mut Vec<usize>) -> bool {
        let Some(var) = assign.iter().position(Option::is_none) else {
            return true;
        };
        for value in [false, true] {
            let mark = trail.len();
            assign[var] = Some(value);
            trail.push(var);
            if self.propagate(assign, trail, mark) && self.search(assign, trail) {
                return true;
            }
            for v in trail.drain(mark..) {
                assign[v] = None;
            }
        }
        false
    }

    /// Unit propagation over the trail from `head`. Returns false on conflict.
    fn propagate(&self, assign: &mut [Option<bool>], trail: &mut Vec<usize>, mut head: usize) -> bool {
        while head < trail.len() {
            let v = trail[head];
            head += 1;
            let value = assign[v].expect("trail entries are assigned");
            // clauses where the opposite literal just became false
            for &ci in &self.occurrences[2 * v + !value as usize] {
                let mut unassigned = None;
                let mut open = 0;
                let mut satisfied = false;
                for &(w, want) in &self.clauses[ci] {
                    match assign[w] {
                        Some(x) if x == want => {
                            satisfied = true;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            open += 1;
                            unassigned = Some((w, want));
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match (open, unassigned) {
                    (0, _) => return false,
                    (1, Some((w, want))) => {
                        assign[w] = Some(want);
                        trail.push(w);
                    }
                    _ => {}
                }
            }
        }
        true
    }
}
