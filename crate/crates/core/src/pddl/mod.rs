//! STRIPS + typing fragment of PDDL: parsing, canonical output, grounding,
//! state transitions and plan validation.

mod ground;
mod model;
mod parse;
pub mod sexpr;
mod state;
mod types;
mod validate;
mod write;

use thiserror::Error;

pub use ground::{enumerate_bindings, ground_instance};
pub use model::{
    ActionSchema, Domain, GroundAction, GroundAtom, Literal, Operator, Plan, PredicateSignature,
    ProblemInstance, TypedVar,
};
pub use parse::{parse_domain, parse_problem};
pub use sexpr::Pos;
pub use state::{applicable, apply, State};
pub use types::{TypeHierarchy, OBJECT_TYPE};
pub use validate::{validate_plan, StepCheck, StepFailure, ValidationReport};
pub use write::{write_domain, write_problem};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PddlError {
    #[error("{pos}: syntax error: expected {expected}, found {found}")]
    Syntax {
        pos: Pos,
        expected: String,
        found: String,
    },
    #[error("{}unsupported feature `{feature}`", pos.map(|p| format!("{p}: ")).unwrap_or_default())]
    UnsupportedFeature { feature: String, pos: Option<Pos> },
    #[error("{}type error: {message}", pos.map(|p| format!("{p}: ")).unwrap_or_default())]
    Type { message: String, pos: Option<Pos> },
    #[error("problem targets domain `{found}` but `{expected}` was supplied")]
    DomainMismatch { expected: String, found: String },
    #[error("unknown action schema `{0}`")]
    UnknownSchema(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("`{schema}` takes {expected} arguments, got {found}")]
    Arity {
        schema: String,
        expected: usize,
        found: usize,
    },
    #[error("{action} is not applicable: {precondition} does not hold")]
    NotApplicable {
        action: GroundAction,
        precondition: GroundAtom,
    },
}

impl PddlError {
    pub(crate) fn syntax(pos: Pos, expected: impl Into<String>, found: impl Into<String>) -> Self {
        PddlError::Syntax {
            pos,
            expected: expected.into(),
            found: found.into(),
        }
    }

    pub(crate) fn unsupported(feature: impl Into<String>, pos: Option<Pos>) -> Self {
        PddlError::UnsupportedFeature {
            feature: feature.into(),
            pos,
        }
    }

    pub(crate) fn type_error(message: impl Into<String>, pos: Option<Pos>) -> Self {
        PddlError::Type {
            message: message.into(),
            pos,
        }
    }

    /// Source position of the error, when one is known.
    pub fn position(&self) -> Option<Pos> {
        match self {
            PddlError::Syntax { pos, .. } => Some(*pos),
            PddlError::UnsupportedFeature { pos, .. } | PddlError::Type { pos, .. } => *pos,
            _ => None,
        }
    }
}
