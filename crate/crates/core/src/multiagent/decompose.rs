use std::collections::BTreeSet;

use serde::Deserialize;

use super::{MultiAgentError, Subtask};
use crate::pddl::{Domain, GroundAtom, ProblemInstance};
use crate::seeder::{
    complete_validated, reply_json, ChatClient, ChatMessage, Rejection, SeederConfig,
};

/// How goals are split into subtasks.
#[derive(Clone, Copy)]
pub enum Decomposer<'a> {
    /// Connected components of goal atoms sharing a non-robot object.
    Rule,
    Llm {
        client: &'a dyn ChatClient,
        config: &'a SeederConfig,
    },
}

pub fn decompose(
    instance: &ProblemInstance,
    domain: &Domain,
    decomposer: Decomposer<'_>,
) -> Result<Vec<Subtask>, MultiAgentError> {
    match decomposer {
        Decomposer::Rule => decompose_rule(instance, domain),
        Decomposer::Llm { client, config } => decompose_llm(instance, client, config),
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

pub fn decompose_rule(
    instance: &ProblemInstance,
    domain: &Domain,
) -> Result<Vec<Subtask>, MultiAgentError> {
    if instance.goal.is_empty() {
        return Err(MultiAgentError::EmptyGoal);
    }
    let goals: Vec<&GroundAtom> = instance.goal.iter().collect();
    let shared = |o: &str| {
        !instance
            .object_type(o)
            .is_some_and(|t| domain.is_robot_type(t))
    };
    let mut parent: Vec<usize> = (0..goals.len()).collect();
    for i in 0..goals.len() {
        for j in i + 1..goals.len() {
            if goals[i]
                .args
                .iter()
                .any(|o| shared(o) && goals[j].mentions(o))
            {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut components: Vec<(usize, BTreeSet<GroundAtom>)> = Vec::new();
    for (i, g) in goals.iter().enumerate() {
        let root = find(&mut parent, i);
        match components.iter_mut().find(|(r, _)| *r == root) {
            Some((_, set)) => {
                set.insert((*g).clone());
            }
            None => components.push((root, BTreeSet::from([(*g).clone()]))),
        }
    }
    Ok(components
        .into_iter()
        .enumerate()
        .map(|(k, (_, atoms))| Subtask::new(format!("s{k}"), atoms))
        .collect())
}

#[derive(Deserialize)]
struct Reply {
    subtasks: Vec<ReplySubtask>,
}

#[derive(Deserialize)]
struct ReplySubtask {
    goals: Vec<String>,
}

fn prompt(instance: &ProblemInstance) -> Vec<ChatMessage> {
    let system = "You split a robot task into independent sub-tasks. \
        Reply with a JSON object {\"subtasks\": [{\"goals\": [\"(pred arg ...)\", ...]}, ...]}. \
        Every listed goal atom must appear in some sub-task, copied exactly.";
    let goals: Vec<String> = instance.goal.iter().map(|g| format!("- {g}")).collect();
    let mut user = format!("Goal atoms:\n{}\n", goals.join("\n"));
    if let Some(text) = &instance.task_text {
        user.push_str(&format!("Task: {text}\n"));
    }
    vec![
        ChatMessage::new("system", system),
        ChatMessage::new("user", user),
    ]
}

fn accept(
    reply: &str,
    goal: &BTreeSet<GroundAtom>,
) -> Result<Vec<BTreeSet<GroundAtom>>, Rejection> {
    let parsed: Reply = serde_json::from_value(reply_json(reply)?)
        .map_err(|e| Rejection::Malformed(format!("unexpected shape ({e})")))?;
    if parsed.subtasks.is_empty() {
        return Err(Rejection::Malformed("`subtasks` is empty".into()));
    }
    let mut problems = Vec::new();
    let mut out = Vec::new();
    for (i, st) in parsed.subtasks.iter().enumerate() {
        if st.goals.is_empty() {
            return Err(Rejection::Malformed(format!("subtask {i} has no goals")));
        }
        let mut atoms = BTreeSet::new();
        for text in &st.goals {
            match GroundAtom::parse(text) {
                Some(a) if goal.contains(&a) => {
                    atoms.insert(a);
                }
                Some(a) => problems.push(format!("subtask {i}: `{a}` is not a goal atom")),
                None => problems.push(format!("subtask {i}: `{text}` is not an atom")),
            }
        }
        out.push(atoms);
    }
    let covered: BTreeSet<&GroundAtom> = out.iter().flatten().collect();
    for g in goal.iter().filter(|g| !covered.contains(g)) {
        problems.push(format!("goal `{g}` is missing"));
    }
    if problems.is_empty() {
        Ok(out)
    } else {
        Err(Rejection::Invalid(problems))
    }
}

/// Asks the model for a grouping of the goal atoms, re-prompting until the
/// groups cover the goal exactly.
pub fn decompose_llm(
    instance: &ProblemInstance,
    client: &dyn ChatClient,
    config: &SeederConfig,
) -> Result<Vec<Subtask>, MultiAgentError> {
    if instance.goal.is_empty() {
        return Err(MultiAgentError::EmptyGoal);
    }
    let groups = complete_validated(client, prompt(instance), config.max_retries, |r| {
        accept(r, &instance.goal)
    })?;
    Ok(groups
        .into_iter()
        .enumerate()
        .map(|(k, atoms)| Subtask::new(format!("s{k}"), atoms))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::{parse_domain, parse_problem};
    use crate::seeder::stub::StubServer;
    use crate::seeder::{HttpChatClient, SeederError};

    const DOMAIN: &str = "(define (domain d) (:requirements :strips :typing)
        (:types robot thing)
        (:predicates (in ?o - thing ?c - thing) (off ?o - thing) (holding ?r - robot ?o - thing))
        (:action noop :parameters (?o - thing) :precondition (and) :effect (and (off ?o))))";

    fn instance(goal: &str) -> (Domain, ProblemInstance) {
        let d = parse_domain(DOMAIN).unwrap();
        let p = parse_problem(
            &format!(
                "(define (problem p) (:domain d)
                 (:objects r1 r2 - robot apple fridge lightswitch a b box obj1 - thing)
                 (:init) (:goal (and {goal})))"
            ),
            &d,
        )
        .unwrap();
        (d, p)
    }

    fn goal_sets(subtasks: &[Subtask]) -> Vec<Vec<String>> {
        subtasks
            .iter()
            .map(|s| s.goal_atoms.iter().map(|g| g.to_string()).collect())
            .collect()
    }

    #[test]
    fn apple_and_lightswitch_split() {
        let (d, p) = instance("(in apple fridge) (off lightswitch)");
        let s = decompose_rule(&p, &d).unwrap();
        assert_eq!(
            goal_sets(&s),
            vec![vec!["(in apple fridge)"], vec!["(off lightswitch)"]]
        );
        assert_eq!(s[0].id, "s0");
        assert_eq!(s[1].id, "s1");
    }

    #[test]
    fn shared_container_joins() {
        let (d, p) = instance("(in a box) (in b box)");
        let s = decompose_rule(&p, &d).unwrap();
        assert_eq!(goal_sets(&s), vec![vec!["(in a box)", "(in b box)"]]);
    }

    #[test]
    fn robots_do_not_link_goals() {
        let (d, p) = instance("(holding r1 a) (holding r1 b)");
        assert_eq!(decompose_rule(&p, &d).unwrap().len(), 2);
        let (d, p) = instance("(holding r1 obj1)");
        assert_eq!(decompose_rule(&p, &d).unwrap().len(), 1);
    }

    #[test]
    fn transitive_components() {
        let (d, p) = instance("(in a box) (in b fridge) (in box fridge) (off lightswitch)");
        let s = decompose_rule(&p, &d).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].goal_atoms.len(), 3);
    }

    #[test]
    fn empty_goal() {
        let (d, mut p) = instance("(off a)");
        p.goal.clear();
        assert!(matches!(
            decompose_rule(&p, &d),
            Err(MultiAgentError::EmptyGoal)
        ));
    }

    fn client(stub: &StubServer) -> HttpChatClient {
        HttpChatClient::new(SeederConfig {
            endpoint_url: Some(stub.url()),
            timeout: 5.0,
            ..SeederConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn llm_split_retries_on_missing_goal() {
        let (_, p) = instance("(in apple fridge) (off lightswitch)");
        let stub = StubServer::with_contents([
            r#"{"subtasks":[{"goals":["(in apple fridge)"]}]}"#,
            r#"{"subtasks":[{"goals":["(in apple fridge)"]},{"goals":["(off lightswitch)"]}]}"#,
        ])
        .unwrap();
        let c = client(&stub);
        let s = decompose_llm(&p, &c, &SeederConfig::default()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(stub.request_count(), 2);
        assert!(stub.request_bodies()[1].contains("is missing"));
    }

    #[test]
    fn llm_invented_goal_is_rejected() {
        let (_, p) = instance("(off lightswitch)");
        let stub = StubServer::with_contents([
            r#"{"subtasks":[{"goals":["(off lightswitch)","(off toaster)"]}]}"#,
        ])
        .unwrap();
        let c = client(&stub);
        let err = decompose_llm(&p, &c, &SeederConfig::default()).unwrap_err();
        assert!(matches!(
            err,
            MultiAgentError::Seeder(SeederError::HallucinationRejected { attempts: 3, .. })
        ));
    }
}
