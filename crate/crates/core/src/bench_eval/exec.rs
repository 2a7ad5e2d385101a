use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::world::{Affordance, OpenState, StateTag, WorldState};
use super::BenchError;
use crate::multiagent::{linearize_round_robin, IntegratedPlan};
use crate::pddl::GroundAction;

/// Executable behaviours of the symbolic world.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ActionKind {
    GoTo,
    PickUp,
    PutIn,
    PutOn,
    Open,
    Close,
    ToggleOn,
    ToggleOff,
    Slice,
    Clean,
    Cook,
    Break,
}

/// Maps action schema names onto world behaviours.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSemantics {
    kinds: BTreeMap<String, ActionKind>,
}

impl ActionSemantics {
    pub fn empty() -> Self {
        ActionSemantics {
            kinds: BTreeMap::new(),
        }
    }

    /// Schemas of the shipped household domain.
    pub fn household() -> Self {
        use ActionKind::*;
        [
            ("goto", GoTo),
            ("pickup", PickUp),
            ("pickup-from", PickUp),
            ("putin", PutIn),
            ("puton", PutOn),
            ("putdown", PutOn),
            ("open", Open),
            ("close", Close),
            ("toggleon", ToggleOn),
            ("toggleoff", ToggleOff),
            ("slice", Slice),
            ("clean", Clean),
            ("cook", Cook),
            ("break", Break),
        ]
        .into_iter()
        .fold(Self::empty(), |s, (name, k)| s.with(name, k))
    }

    pub fn with(mut self, schema: &str, kind: ActionKind) -> Self {
        self.kinds.insert(schema.to_lowercase(), kind);
        self
    }

    pub fn kind(&self, schema: &str) -> Option<ActionKind> {
        self.kinds.get(&schema.to_lowercase()).copied()
    }
}

impl Default for ActionSemantics {
    fn default() -> Self {
        Self::household()
    }
}

/// Why a step could not be executed.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "reason", content = "object")]
pub enum ExecFailure {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("bad arguments")]
    BadArguments,
    #[error("not a robot")]
    NotARobot,
    #[error("robot not at origin")]
    NotAtOrigin,
    #[error("robot not near")]
    NotNear,
    #[error("hands full")]
    HandsFull,
    #[error("not pickupable")]
    NotPickupable,
    #[error("not in receptacle")]
    NotInReceptacle,
    #[error("receptacle closed")]
    ReceptacleClosed,
    #[error("not holding")]
    NotHolding,
    #[error("not a receptacle")]
    NotAReceptacle,
    #[error("not openable")]
    NotOpenable,
    #[error("already open")]
    AlreadyOpen,
    #[error("already closed")]
    AlreadyClosed,
    #[error("not toggleable")]
    NotToggleable,
    #[error("already on")]
    AlreadyOn,
    #[error("already off")]
    AlreadyOff,
    #[error("not sliceable")]
    NotSliceable,
    #[error("no knife held")]
    NoKnifeHeld,
    #[error("not cleanable")]
    NotCleanable,
    #[error("not a washer")]
    NotAWasher,
    #[error("not cookable")]
    NotCookable,
    #[error("not a heater")]
    NotAHeater,
    #[error("not in heater")]
    NotInHeater,
    #[error("heater off")]
    HeaterOff,
    #[error("not breakable")]
    NotBreakable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub action: GroundAction,
    pub ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<ExecFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecutionTrace {
    pub steps: Vec<StepRecord>,
    pub final_world: WorldState,
}

impl ExecutionTrace {
    /// A trace of no steps, used when nothing could be planned.
    pub fn idle(world: &WorldState) -> Self {
        ExecutionTrace {
            steps: Vec::new(),
            final_world: world.clone(),
        }
    }

    pub fn successes(&self) -> usize {
        self.steps.iter().filter(|s| s.ok).count()
    }
}

/// Whether the robot stands at `x`, at the receptacle holding `x`, at
/// something inside `x`, or holds `x`.
fn near(w: &WorldState, robot: &str, x: &str) -> bool {
    if w.held.get(robot).and_then(|h| h.as_deref()) == Some(x) {
        return true;
    }
    let Some(at) = w.robot_at.get(robot) else {
        return false;
    };
    at == x || w.container_of(at) == Some(x) || w.container_of(x) == Some(at.as_str())
}

fn holding<'a>(w: &'a WorldState, robot: &str) -> Option<&'a str> {
    w.held.get(robot).and_then(|h| h.as_deref())
}

fn require(ok: bool, f: ExecFailure) -> Result<(), ExecFailure> {
    if ok {
        Ok(())
    } else {
        Err(f)
    }
}

/// Applies one step. The world is left untouched when the step fails.
pub fn apply_step(
    w: &mut WorldState,
    action: &GroundAction,
    kind: ActionKind,
) -> Result<(), ExecFailure> {
    use ExecFailure::*;
    let args: Vec<String> = action
        .args
        .iter()
        .map(|a| {
            w.resolve(a)
                .map(str::to_string)
                .ok_or_else(|| UnknownObject(a.clone()))
        })
        .collect::<Result<_, _>>()?;
    let Some((r, rest)) = args.split_first() else {
        return Err(BadArguments);
    };
    require(w.is_robot(r), NotARobot)?;
    let arity_ok = match kind {
        ActionKind::GoTo | ActionKind::PickUp | ActionKind::Slice | ActionKind::Clean => {
            matches!(rest.len(), 1 | 2)
        }
        ActionKind::PutIn | ActionKind::PutOn | ActionKind::Cook => rest.len() == 2,
        _ => rest.len() == 1,
    };
    require(
        arity_ok && rest.iter().all(|a| !w.is_robot(a)),
        BadArguments,
    )?;

    match kind {
        ActionKind::GoTo => {
            let to = rest.last().expect("arity checked");
            if rest.len() == 2 {
                require(w.robot_at.get(r) == Some(&rest[0]), NotAtOrigin)?;
            }
            w.robot_at.insert(r.clone(), to.clone());
        }
        ActionKind::PickUp => {
            let o = &rest[0];
            require(holding(w, r).is_none(), HandsFull)?;
            require(w.has(o, Affordance::Pickupable), NotPickupable)?;
            require(w.holder_of(o).is_none(), NotInReceptacle)?;
            let from = w.container_of(o).map(str::to_string);
            if let Some(c) = rest.get(1) {
                require(from.as_ref() == Some(c), NotInReceptacle)?;
            }
            require(near(w, r, o), NotNear)?;
            if let Some(c) = &from {
                require(!w.is_closed(c), ReceptacleClosed)?;
                w.containment
                    .get_mut(c)
                    .expect("container has a set")
                    .remove(o);
                if w.containment[c].is_empty() {
                    w.containment.remove(c);
                }
            }
            w.held.insert(r.clone(), Some(o.clone()));
        }
        ActionKind::PutIn | ActionKind::PutOn => {
            let (o, c) = (&rest[0], &rest[1]);
            require(holding(w, r) == Some(o.as_str()), NotHolding)?;
            require(near(w, r, c), NotNear)?;
            require(
                o != c && (w.has(c, Affordance::Receptacle) || w.has(c, Affordance::Container)),
                NotAReceptacle,
            )?;
            require(!w.is_closed(c), ReceptacleClosed)?;
            w.held.insert(r.clone(), None);
            w.containment
                .entry(c.clone())
                .or_default()
                .insert(o.clone());
        }
        ActionKind::Open | ActionKind::Close => {
            let o = &rest[0];
            require(near(w, r, o), NotNear)?;
            require(w.has(o, Affordance::Openable), NotOpenable)?;
            let (target, already) = if kind == ActionKind::Open {
                (OpenState::Open, AlreadyOpen)
            } else {
                (OpenState::Closed, AlreadyClosed)
            };
            require(w.open_state.get(o) != Some(&target), already)?;
            w.open_state.insert(o.clone(), target);
        }
        ActionKind::ToggleOn | ActionKind::ToggleOff => {
            let o = &rest[0];
            require(near(w, r, o), NotNear)?;
            require(w.has(o, Affordance::Toggleable), NotToggleable)?;
            let (set, unset, already) = if kind == ActionKind::ToggleOn {
                (StateTag::On, StateTag::Off, AlreadyOn)
            } else {
                (StateTag::Off, StateTag::On, AlreadyOff)
            };
            require(!w.has_state(o, set), already)?;
            let tags = w.object_states.entry(o.clone()).or_default();
            tags.remove(&unset);
            tags.insert(set);
        }
        ActionKind::Slice => {
            let o = &rest[0];
            require(near(w, r, o), NotNear)?;
            require(w.has(o, Affordance::Sliceable), NotSliceable)?;
            let knife = holding(w, r).filter(|k| w.has(k, Affordance::Knife));
            require(
                knife.is_some() && rest.get(1).is_none_or(|k| Some(k.as_str()) == knife),
                NoKnifeHeld,
            )?;
            w.object_states
                .entry(o.clone())
                .or_default()
                .insert(StateTag::Sliced);
        }
        ActionKind::Clean => {
            let o = &rest[0];
            require(holding(w, r) == Some(o.as_str()), NotHolding)?;
            require(w.has(o, Affordance::Cleanable), NotCleanable)?;
            if let Some(s) = rest.get(1) {
                require(near(w, r, s), NotNear)?;
                require(w.has(s, Affordance::Washer), NotAWasher)?;
            }
            w.object_states
                .entry(o.clone())
                .or_default()
                .insert(StateTag::Cleaned);
        }
        ActionKind::Cook => {
            let (o, h) = (&rest[0], &rest[1]);
            require(near(w, r, h), NotNear)?;
            require(w.has(h, Affordance::Heater), NotAHeater)?;
            require(w.has(o, Affordance::Cookable), NotCookable)?;
            require(w.container_of(o) == Some(h.as_str()), NotInHeater)?;
            require(w.has_state(h, StateTag::On), HeaterOff)?;
            w.object_states
                .entry(o.clone())
                .or_default()
                .insert(StateTag::Cooked);
        }
        ActionKind::Break => {
            let o = &rest[0];
            require(near(w, r, o), NotNear)?;
            require(w.has(o, Affordance::Breakable), NotBreakable)?;
            w.object_states
                .entry(o.clone())
                .or_default()
                .insert(StateTag::Broken);
        }
    }
    Ok(())
}

/// Runs `steps` in order, recording each outcome; failures do not stop
/// the run.
pub fn execute_actions(
    world: &WorldState,
    steps: &[GroundAction],
    semantics: &ActionSemantics,
) -> Result<ExecutionTrace, BenchError> {
    let kinds: Vec<ActionKind> = steps
        .iter()
        .map(|s| {
            semantics
                .kind(&s.schema)
                .ok_or_else(|| BenchError::UnknownActionKind(s.schema.clone()))
        })
        .collect::<Result<_, _>>()?;
    let mut w = world.clone();
    let mut records = Vec::with_capacity(steps.len());
    for (step, kind) in steps.iter().zip(kinds) {
        // Work on a copy so a failing rule cannot leave partial updates.
        let mut next = w.clone();
        let failure = apply_step(&mut next, step, kind).err();
        if failure.is_none() {
            w = next;
        }
        records.push(StepRecord {
            action: step.clone(),
            ok: failure.is_none(),
            failure,
        });
    }
    Ok(ExecutionTrace {
        steps: records,
        final_world: w,
    })
}

/// Executes the plan in round-robin order across robot tracks.
pub fn execute_plan(
    world: &WorldState,
    plan: &IntegratedPlan,
    semantics: &ActionSemantics,
) -> Result<ExecutionTrace, BenchError> {
    let order = linearize_round_robin(plan).unwrap_or_else(|| plan.sigma.clone());
    execute_actions(world, &plan.actions(&order), semantics)
}
