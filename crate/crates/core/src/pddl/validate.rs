use serde::{Deserialize, Serialize};

use super::{Domain, GroundAction, GroundAtom, Plan, ProblemInstance, State};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepFailure {
    UnknownSchema {
        schema: String,
    },
    Arity {
        expected: usize,
        found: usize,
    },
    UnknownObject {
        position: usize,
        object: String,
    },
    Type {
        position: usize,
        object: String,
        expected: String,
    },
    /// Preconditions absent from the state, in schema order.
    Precondition {
        missing: Vec<GroundAtom>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCheck {
    pub index: usize,
    pub action: GroundAction,
    pub applicable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<StepFailure>,
}

/// Outcome of replaying a plan from the initial state. Replay stops at the
/// first inapplicable step; `final_state` is the state reached before it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub steps: Vec<StepCheck>,
    pub failed_step: Option<usize>,
    pub final_state: State,
    pub goal_satisfied: bool,
    pub unmet_goals: Vec<GroundAtom>,
}

fn check_step(
    state: &State,
    action: &GroundAction,
    instance: &ProblemInstance,
    domain: &Domain,
) -> Option<StepFailure> {
    let Some(schema) = domain.action(&action.schema) else {
        return Some(StepFailure::UnknownSchema {
            schema: action.schema.clone(),
        });
    };
    if schema.arity() != action.args.len() {
        return Some(StepFailure::Arity {
            expected: schema.arity(),
            found: action.args.len(),
        });
    }
    for (position, (obj, param)) in action.args.iter().zip(&schema.params).enumerate() {
        let Some(ty) = instance.object_type(obj) else {
            return Some(StepFailure::UnknownObject {
                position,
                object: obj.clone(),
            });
        };
        if !domain.types.is_subtype(ty, &param.ty) {
            return Some(StepFailure::Type {
                position,
                object: obj.clone(),
                expected: param.ty.clone(),
            });
        }
    }
    let missing: Vec<GroundAtom> = schema
        .instantiate(&action.args)
        .pre
        .into_iter()
        .filter(|p| !state.holds(p))
        .collect();
    (!missing.is_empty()).then_some(StepFailure::Precondition { missing })
}

pub fn validate_plan(instance: &ProblemInstance, plan: &Plan, domain: &Domain) -> ValidationReport {
    let mut state = State::new(instance.init.iter().cloned());
    let mut steps = Vec::with_capacity(plan.len());
    let mut failed_step = None;
    for (index, action) in plan.steps.iter().enumerate() {
        let failure = check_step(&state, action, instance, domain);
        let applicable = failure.is_none();
        steps.push(StepCheck {
            index,
            action: action.clone(),
            applicable,
            failure,
        });
        if !applicable {
            failed_step = Some(index);
            break;
        }
        let op = domain.operator(action).expect("checked above");
        for d in &op.del {
            state.atoms.remove(d);
        }
        state.atoms.extend(op.add);
    }
    let unmet_goals: Vec<GroundAtom> = instance
        .goal
        .iter()
        .filter(|g| !state.holds(g))
        .cloned()
        .collect();
    let goal_satisfied = unmet_goals.is_empty();
    ValidationReport {
        valid: failed_step.is_none() && goal_satisfied,
        steps,
        failed_step,
        final_state: state,
        goal_satisfied,
        unmet_goals,
    }
}
