use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::{PddlError, TypeHierarchy};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypedVar {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateSignature {
    pub name: String,
    pub params: Vec<TypedVar>,
}

impl PredicateSignature {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

/// A lifted atom over schema parameters. Each argument carries the type of
/// the parameter it refers to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub predicate: String,
    pub args: Vec<TypedVar>,
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate)?;
        for a in &self.args {
            write!(f, " ?{}", a.name)?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSchema {
    pub name: String,
    pub params: Vec<TypedVar>,
    pub preconditions: Vec<Literal>,
    pub add_effects: Vec<Literal>,
    pub del_effects: Vec<Literal>,
}

impl ActionSchema {
    pub fn arity(&self) -> usize {
        self.params.len()
    }

    fn param_index(&self, var: &str) -> usize {
        self.params
            .iter()
            .position(|p| p.name == var)
            .expect("literal variables are schema parameters")
    }

    fn ground_literals(&self, lits: &[Literal], args: &[String]) -> Vec<GroundAtom> {
        lits.iter()
            .map(|l| GroundAtom {
                predicate: l.predicate.clone(),
                args: l
                    .args
                    .iter()
                    .map(|v| args[self.param_index(&v.name)].clone())
                    .collect(),
            })
            .collect()
    }

    /// Grounds pre/add/del under `args`. Arity is the caller's responsibility.
    pub fn instantiate(&self, args: &[String]) -> Operator {
        Operator {
            action: GroundAction::new(&self.name, args.to_vec()),
            pre: self.ground_literals(&self.preconditions, args),
            add: self.ground_literals(&self.add_effects, args),
            del: self.ground_literals(&self.del_effects, args),
        }
    }

    /// Every predicate mentioned anywhere in the schema.
    pub fn predicates(&self) -> impl Iterator<Item = &str> {
        self.preconditions
            .iter()
            .chain(&self.add_effects)
            .chain(&self.del_effects)
            .map(|l| l.predicate.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub name: String,
    pub requirements: Vec<String>,
    pub types: TypeHierarchy,
    pub predicates: Vec<PredicateSignature>,
    pub actions: Vec<ActionSchema>,
}

impl Domain {
    pub fn action(&self, name: &str) -> Option<&ActionSchema> {
        self.actions.iter().find(|a| a.name == name)
    }

    pub fn action_index(&self, name: &str) -> Option<usize> {
        self.actions.iter().position(|a| a.name == name)
    }

    pub fn predicate(&self, name: &str) -> Option<&PredicateSignature> {
        self.predicates.iter().find(|p| p.name == name)
    }

    /// The `robot` type, when the domain declares one.
    pub fn robot_type(&self) -> Option<&str> {
        self.types.names().find(|t| *t == "robot")
    }

    pub fn is_robot_type(&self, ty: &str) -> bool {
        self.robot_type()
            .is_some_and(|r| self.types.is_subtype(ty, r))
    }

    /// Resolves a ground action against its schema.
    pub fn operator(&self, action: &GroundAction) -> Result<Operator, PddlError> {
        let schema = self
            .action(&action.schema)
            .ok_or_else(|| PddlError::UnknownSchema(action.schema.clone()))?;
        if schema.arity() != action.args.len() {
            return Err(PddlError::Arity {
                schema: schema.name.clone(),
                expected: schema.arity(),
                found: action.args.len(),
            });
        }
        Ok(schema.instantiate(&action.args))
    }

    /// Copy of this domain keeping only the listed action schemas.
    pub fn restrict_actions<'a>(&self, keep: impl IntoIterator<Item = &'a str>) -> Domain {
        let keep: BTreeSet<&str> = keep.into_iter().collect();
        Domain {
            actions: self
                .actions
                .iter()
                .filter(|a| keep.contains(a.name.as_str()))
                .cloned()
                .collect(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn new<S: Into<String>>(predicate: &str, args: impl IntoIterator<Item = S>) -> Self {
        GroundAtom {
            predicate: predicate.to_lowercase(),
            args: args.into_iter().map(|a| a.into().to_lowercase()).collect(),
        }
    }

    /// Parses `(pred a b)` or `pred(a, b)`.
    pub fn parse(text: &str) -> Option<Self> {
        let t = text.trim();
        let (pred, rest) =
            if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
                let mut parts = inner.split_whitespace();
                let pred = parts.next()?;
                (
                    pred.to_string(),
                    parts.map(str::to_string).collect::<Vec<_>>(),
                )
            } else {
                let open = t.find('(')?;
                let inner = t[open + 1..].strip_suffix(')')?;
                let args = inner
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                (t[..open].trim().to_string(), args)
            };
        if pred.is_empty() || pred.contains(['(', ')']) {
            return None;
        }
        Some(GroundAtom::new(&pred, rest))
    }

    pub fn mentions(&self, object: &str) -> bool {
        self.args.iter().any(|a| a == object)
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroundAction {
    #[serde(rename = "action")]
    pub schema: String,
    pub args: Vec<String>,
}

impl GroundAction {
    pub fn new(schema: &str, args: Vec<String>) -> Self {
        GroundAction {
            schema: schema.to_lowercase(),
            args: args.into_iter().map(|a| a.to_lowercase()).collect(),
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        GroundAtom::parse(text).map(|a| GroundAction {
            schema: a.predicate,
            args: a.args,
        })
    }
}

impl fmt::Display for GroundAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.schema)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

/// A ground action with its ground precondition and effect atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operator {
    pub action: GroundAction,
    pub pre: Vec<GroundAtom>,
    pub add: Vec<GroundAtom>,
    pub del: Vec<GroundAtom>,
}

impl Operator {
    pub fn effects(&self) -> impl Iterator<Item = &GroundAtom> {
        self.add.iter().chain(&self.del)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plan {
    pub steps: Vec<GroundAction>,
}

impl Plan {
    pub fn new(steps: Vec<GroundAction>) -> Self {
        Plan { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub name: String,
    pub domain_name: String,
    /// Object name → type, in declaration order.
    pub objects: IndexMap<String, String>,
    pub init: BTreeSet<GroundAtom>,
    pub goal: BTreeSet<GroundAtom>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task_text: Option<String>,
    /// Original spelling of object names whose casing differs from the
    /// normalized form.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub display: BTreeMap<String, String>,
}

impl ProblemInstance {
    pub fn object_type(&self, name: &str) -> Option<&str> {
        self.objects.get(name).map(String::as_str)
    }

    pub fn display_name<'a>(&'a self, name: &'a str) -> &'a str {
        self.display.get(name).map(String::as_str).unwrap_or(name)
    }

    /// Ground action rendered with original object spelling.
    pub fn display_action(&self, action: &GroundAction) -> GroundAction {
        GroundAction {
            schema: action.schema.clone(),
            args: action
                .args
                .iter()
                .map(|a| self.display_name(a).to_string())
                .collect(),
        }
    }

    /// Objects whose type is a subtype of `ty`, in declaration order.
    pub fn objects_of_type<'a>(
        &'a self,
        ty: &'a str,
        types: &'a TypeHierarchy,
    ) -> impl Iterator<Item = &'a str> + 'a {
        self.objects
            .iter()
            .filter(move |(_, t)| types.is_subtype(t, ty))
            .map(|(o, _)| o.as_str())
    }

    /// Objects typed as robots under `domain`.
    pub fn robots<'a>(&'a self, domain: &'a Domain) -> impl Iterator<Item = &'a str> + 'a {
        self.objects
            .iter()
            .filter(move |(_, t)| domain.is_robot_type(t))
            .map(|(o, _)| o.as_str())
    }

    /// Copy restricted to `keep` objects; atoms mentioning dropped objects
    /// are removed from init (and goal).
    pub fn restrict_objects(&self, keep: &BTreeSet<String>) -> ProblemInstance {
        let within = |a: &GroundAtom| a.args.iter().all(|x| keep.contains(x));
        ProblemInstance {
            name: self.name.clone(),
            domain_name: self.domain_name.clone(),
            objects: self
                .objects
                .iter()
                .filter(|(o, _)| keep.contains(*o))
                .map(|(o, t)| (o.clone(), t.clone()))
                .collect(),
            init: self.init.iter().filter(|a| within(a)).cloned().collect(),
            goal: self.goal.iter().filter(|a| within(a)).cloned().collect(),
            task_text: self.task_text.clone(),
            display: self
                .display
                .iter()
                .filter(|(o, _)| keep.contains(*o))
                .map(|(o, d)| (o.clone(), d.clone()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_parse_accepts_both_notations() {
        let a = GroundAtom::parse("(in Apple fridge)").unwrap();
        let b = GroundAtom::parse("in(apple, Fridge)").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "(in apple fridge)");
        assert!(GroundAtom::parse("()").is_none());
        assert!(GroundAtom::parse("nonsense").is_none());
    }
}
