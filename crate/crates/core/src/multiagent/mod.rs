//! Heterogeneous robot teams: goal decomposition, subtask allocation,
//! robot-bound re-planning and partial-order plan integration.

mod allocate;
mod decompose;
mod integrate;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use allocate::{
    allocate, bind_plans, conflicts, robot_can_execute, solve_subtasks, Allocation, Binding,
    BoundSubtask,
};
pub use decompose::{decompose, decompose_llm, decompose_rule, Decomposer};
pub use integrate::{
    integrate, linearize_random, linearize_round_robin, makespan, IntegratedPlan,
    OrderingConstraint, StepRef,
};

use crate::pddl::{Domain, GroundAtom, Plan, ProblemInstance};
use crate::planner::SolveError;
use crate::seeder::SeederError;

#[derive(Debug, Error)]
pub enum MultiAgentError {
    #[error("goal is empty")]
    EmptyGoal,
    #[error("no robot can execute subtask {subtask}: missing {}", uncovered.iter().cloned().collect::<Vec<_>>().join(", "))]
    NoCapableRobot {
        subtask: String,
        uncovered: BTreeSet<String>,
    },
    #[error("invalid team: {0}")]
    InvalidTeam(String),
    #[error("subtask {0} has no plan")]
    Unsolved(String),
    #[error("subtask {subtask}: {source}")]
    Planning { subtask: String, source: SolveError },
    #[error(transparent)]
    Seeder(#[from] SeederError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Robot {
    pub id: String,
    /// The PDDL object standing for this robot.
    #[serde(rename = "object")]
    pub home_object: String,
    pub capabilities: BTreeSet<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Team {
    pub robots: Vec<Robot>,
}

impl Team {
    pub fn from_json(text: &str) -> Result<Team, MultiAgentError> {
        let mut team: Team =
            serde_json::from_str(text).map_err(|e| MultiAgentError::InvalidTeam(e.to_string()))?;
        for r in &mut team.robots {
            r.home_object = r.home_object.to_lowercase();
            r.capabilities = r.capabilities.iter().map(|c| c.to_lowercase()).collect();
        }
        Ok(team)
    }

    /// One fully capable robot per robot object of the instance.
    pub fn uniform(instance: &ProblemInstance, domain: &Domain) -> Team {
        let all: BTreeSet<String> = domain.actions.iter().map(|a| a.name.clone()).collect();
        Team {
            robots: instance
                .robots(domain)
                .map(|o| Robot {
                    id: instance.display_name(o).to_string(),
                    home_object: o.to_string(),
                    capabilities: all.clone(),
                })
                .collect(),
        }
    }

    pub fn validate(
        &self,
        instance: &ProblemInstance,
        domain: &Domain,
    ) -> Result<(), MultiAgentError> {
        if self.robots.is_empty() {
            return Err(MultiAgentError::InvalidTeam("no robots".into()));
        }
        let mut ids = BTreeSet::new();
        for r in &self.robots {
            if !ids.insert(&r.id) {
                return Err(MultiAgentError::InvalidTeam(format!(
                    "duplicate robot id `{}`",
                    r.id
                )));
            }
            match instance.object_type(&r.home_object) {
                Some(t) if domain.is_robot_type(t) => {}
                Some(t) => {
                    return Err(MultiAgentError::InvalidTeam(format!(
                        "`{}` has type `{t}`, not a robot type",
                        r.home_object
                    )))
                }
                None => {
                    return Err(MultiAgentError::InvalidTeam(format!(
                        "unknown object `{}`",
                        r.home_object
                    )));
                }
            }
            if let Some(c) = r.capabilities.iter().find(|c| domain.action(c).is_none()) {
                return Err(MultiAgentError::InvalidTeam(format!(
                    "robot `{}` lists unknown action `{c}`",
                    r.id
                )));
            }
        }
        Ok(())
    }

    pub fn robot(&self, id: &str) -> Option<&Robot> {
        self.robots.iter().find(|r| r.id == id)
    }

    pub fn all_capabilities(&self) -> BTreeSet<String> {
        self.robots
            .iter()
            .flat_map(|r| r.capabilities.iter().cloned())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subtask {
    pub id: String,
    pub goal_atoms: BTreeSet<GroundAtom>,
    #[serde(default)]
    pub plan: Option<Plan>,
    #[serde(default)]
    pub required_schemas: BTreeSet<String>,
}

impl Subtask {
    pub fn new(id: String, goal_atoms: BTreeSet<GroundAtom>) -> Self {
        Subtask {
            id,
            goal_atoms,
            plan: None,
            required_schemas: BTreeSet::new(),
        }
    }

    pub fn set_plan(&mut self, plan: Plan) {
        self.required_schemas = plan.steps.iter().map(|s| s.schema.clone()).collect();
        self.plan = Some(plan);
    }

    pub fn plan_len(&self) -> usize {
        self.plan.as_ref().map_or(0, Plan::len)
    }
}
