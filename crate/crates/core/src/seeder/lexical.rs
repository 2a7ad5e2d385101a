use std::collections::BTreeSet;

use super::{SeedProposal, SeedSource, SeederError};
use crate::filter::{SeedAction, SeedArg};
use crate::pddl::{Domain, ProblemInstance};

fn singular(word: &str) -> String {
    if word.len() > 3 && word.ends_with('s') && !word.ends_with("ss") {
        word[..word.len() - 1].to_string()
    } else {
        word.to_string()
    }
}

/// Lowercased alphanumeric words with a trailing plural `s` removed.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(singular)
        .collect()
}

/// Forms a task can use to refer to `name`: the name with separators
/// removed, plus each separator-delimited part of three or more letters.
fn name_forms(name: &str) -> Vec<String> {
    let parts: Vec<String> = name
        .to_lowercase()
        .split(['-', '_'])
        .filter(|p| !p.is_empty())
        .map(singular)
        .collect();
    let mut forms = vec![singular(&parts.concat())];
    if parts.len() > 1 {
        forms.extend(parts.into_iter().filter(|p| p.len() >= 3));
    }
    forms
}

fn mentioned(name: &str, vocabulary: &BTreeSet<String>) -> bool {
    name_forms(name).iter().any(|f| vocabulary.contains(f))
}

pub fn lexical_seed(
    task_text: &str,
    domain: &Domain,
    instance: &ProblemInstance,
) -> Result<SeedProposal, SeederError> {
    let tokens = tokenize(task_text);
    // Single tokens plus adjacent pairs, so "light switch" finds `lightswitch`.
    let mut vocabulary: BTreeSet<String> = tokens.iter().cloned().collect();
    for pair in tokens.windows(2) {
        vocabulary.insert(singular(&format!("{}{}", pair[0], pair[1])));
    }

    let objects: Vec<(&str, &str)> = instance
        .objects
        .iter()
        .filter(|(o, _)| mentioned(o, &vocabulary))
        .map(|(o, t)| (o.as_str(), t.as_str()))
        .collect();

    let mut seeds = Vec::new();
    let mut matched = Vec::new();
    for schema in &domain.actions {
        if !mentioned(&schema.name, &vocabulary) {
            continue;
        }
        let mut args = vec![SeedArg::Any; schema.arity()];
        for (obj, ty) in &objects {
            let free = schema
                .params
                .iter()
                .enumerate()
                .find(|(i, p)| args[*i] == SeedArg::Any && domain.types.is_subtype(ty, &p.ty));
            if let Some((i, _)) = free {
                args[i] = SeedArg::Object(obj.to_string());
            }
        }
        matched.push(schema.name.clone());
        seeds.push(SeedAction {
            schema: schema.name.clone(),
            args,
        });
    }

    let mut regressed = Vec::new();
    for goal in &instance.goal {
        for schema in &domain.actions {
            let adds = schema
                .add_effects
                .iter()
                .any(|l| l.predicate == goal.predicate);
            if adds && !seeds.iter().any(|s: &SeedAction| s.schema == schema.name) {
                regressed.push(schema.name.clone());
                seeds.push(SeedAction {
                    schema: schema.name.clone(),
                    args: vec![SeedArg::Any; schema.arity()],
                });
            }
        }
    }

    if seeds.is_empty() {
        return Err(SeederError::NoSeedsFound);
    }
    let object_names: Vec<&str> = objects.iter().map(|(o, _)| *o).collect();
    Ok(SeedProposal {
        seeds,
        rationale: format!(
            "matched actions [{}]; matched objects [{}]; goal regression [{}]",
            matched.join(", "),
            object_names.join(", "),
            regressed.join(", ")
        ),
        source: SeedSource::Lexical,
    })
}
