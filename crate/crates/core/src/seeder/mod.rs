//! Seed-action proposal from a task description: a deterministic lexical
//! matcher and an LLM client, both checked against the domain and instance.

mod lexical;
mod llm;
pub mod stub;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lexical::{lexical_seed, tokenize};
pub use llm::{
    complete_validated, llm_seed, reply_json, ChatClient, ChatMessage, HttpChatClient, Rejection,
    SeederConfig, API_BASE_VAR, API_KEY_VAR,
};

use crate::filter::{SeedAction, SeedArg};
use crate::pddl::{Domain, ProblemInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedSource {
    Lexical,
    Llm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedProposal {
    pub seeds: Vec<SeedAction>,
    pub rationale: String,
    pub source: SeedSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationCode {
    UnknownAction,
    UnknownObject,
    Arity,
    Type,
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationCode::UnknownAction => "UNKNOWN_ACTION",
            ViolationCode::UnknownObject => "UNKNOWN_OBJECT",
            ViolationCode::Arity => "ARITY",
            ViolationCode::Type => "TYPE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub seed: usize,
    pub code: ViolationCode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

#[derive(Debug, Error)]
pub enum SeederError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("malformed response after {attempts} attempts: {message}")]
    MalformedResponse { attempts: usize, message: String },
    #[error(
        "hallucination rejected after {attempts} attempts: {}",
        join(violations)
    )]
    HallucinationRejected {
        attempts: usize,
        violations: Vec<String>,
    },
    #[error("no seeds found for the task")]
    NoSeedsFound,
    #[error("invalid seeder configuration: {0}")]
    Config(String),
}

fn join(v: &[String]) -> String {
    v.join("; ")
}

/// Checks every seed for a known schema, known objects, arity and type
/// compatibility.
pub fn validate_proposal(
    proposal: SeedProposal,
    domain: &Domain,
    instance: &ProblemInstance,
) -> Result<SeedProposal, Vec<Violation>> {
    let mut violations = Vec::new();
    for (i, seed) in proposal.seeds.iter().enumerate() {
        let Some(schema) = domain.action(&seed.schema) else {
            violations.push(Violation {
                seed: i,
                code: ViolationCode::UnknownAction,
                position: None,
                message: format!("unknown action `{}`", seed.schema),
            });
            continue;
        };
        if schema.arity() != seed.args.len() {
            violations.push(Violation {
                seed: i,
                code: ViolationCode::Arity,
                position: None,
                message: format!(
                    "`{}` takes {} arguments, got {}",
                    schema.name,
                    schema.arity(),
                    seed.args.len()
                ),
            });
        }
        for (pos, (arg, param)) in seed.args.iter().zip(&schema.params).enumerate() {
            let SeedArg::Object(obj) = arg else { continue };
            match instance.object_type(obj) {
                None => violations.push(Violation {
                    seed: i,
                    code: ViolationCode::UnknownObject,
                    position: Some(pos),
                    message: format!("unknown object `{obj}`"),
                }),
                Some(ty) if !domain.types.is_subtype(ty, &param.ty) => violations.push(Violation {
                    seed: i,
                    code: ViolationCode::Type,
                    position: Some(pos),
                    message: format!(
                        "`{obj}` has type `{ty}` but parameter {pos} of `{}` expects `{}`",
                        schema.name, param.ty
                    ),
                }),
                Some(_) => {}
            }
        }
    }
    if violations.is_empty() {
        Ok(proposal)
    } else {
        Err(violations)
    }
}
