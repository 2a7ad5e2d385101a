use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Domain, GroundAction, GroundAtom, PddlError};

/// Closed-world state: atoms not present are false.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct State {
    pub atoms: BTreeSet<GroundAtom>,
}

impl State {
    pub fn new(atoms: impl IntoIterator<Item = GroundAtom>) -> Self {
        State {
            atoms: atoms.into_iter().collect(),
        }
    }

    pub fn holds(&self, atom: &GroundAtom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn satisfies<'a>(&self, goal: impl IntoIterator<Item = &'a GroundAtom>) -> bool {
        goal.into_iter().all(|g| self.atoms.contains(g))
    }
}

pub fn applicable(
    state: &State,
    action: &GroundAction,
    domain: &Domain,
) -> Result<bool, PddlError> {
    let op = domain.operator(action)?;
    Ok(op.pre.iter().all(|p| state.holds(p)))
}

/// `(state \ del) ∪ add`. Errors with the first missing precondition.
pub fn apply(state: &State, action: &GroundAction, domain: &Domain) -> Result<State, PddlError> {
    let op = domain.operator(action)?;
    if let Some(missing) = op.pre.iter().find(|p| !state.holds(p)) {
        return Err(PddlError::NotApplicable {
            action: action.clone(),
            precondition: missing.clone(),
        });
    }
    let mut next = state.clone();
    for d in &op.del {
        next.atoms.remove(d);
    }
    next.atoms.extend(op.add);
    Ok(next)
}
