use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexMap;

use super::sexpr::{read_all, Pos, SExpr};
use super::{
    ActionSchema, Domain, GroundAtom, Literal, PddlError, PredicateSignature, ProblemInstance,
    TypeHierarchy, TypedVar, OBJECT_TYPE,
};

const SUPPORTED_REQUIREMENTS: [&str; 2] = [":strips", ":typing"];

fn atom<'a>(expr: &'a SExpr, expected: &str) -> Result<&'a str, PddlError> {
    expr.as_atom()
        .ok_or_else(|| PddlError::syntax(expr.pos(), expected, expr.describe()))
}

fn list<'a>(expr: &'a SExpr, expected: &str) -> Result<&'a [SExpr], PddlError> {
    expr.as_list()
        .ok_or_else(|| PddlError::syntax(expr.pos(), expected, expr.describe()))
}

fn lower(s: &str) -> String {
    s.to_lowercase()
}

/// Unwraps `(define (<kind> NAME) sections...)`.
fn define_form<'a>(forms: &'a [SExpr], kind: &str) -> Result<(String, &'a [SExpr]), PddlError> {
    let top = match forms {
        [only] => only,
        [] => {
            return Err(PddlError::syntax(
                Pos { line: 1, col: 1 },
                "`(define ...)`",
                "end of input",
            ))
        }
        [_, extra, ..] => {
            return Err(PddlError::syntax(
                extra.pos(),
                "end of input",
                extra.describe(),
            ))
        }
    };
    let items = list(top, "`(define ...)`")?;
    let head = items
        .first()
        .ok_or_else(|| PddlError::syntax(top.pos(), "`define`", "`()`"))?;
    if !atom(head, "`define`")?.eq_ignore_ascii_case("define") {
        return Err(PddlError::syntax(head.pos(), "`define`", head.describe()));
    }
    let header = items
        .get(1)
        .ok_or_else(|| PddlError::syntax(top.pos(), format!("`({kind} <name>)`"), "`)`"))?;
    let hdr = list(header, &format!("`({kind} <name>)`"))?;
    match hdr {
        [k, name] if k.as_atom().is_some_and(|s| s.eq_ignore_ascii_case(kind)) => {
            Ok((lower(atom(name, "a name")?), &items[2..]))
        }
        _ => Err(PddlError::syntax(
            header.pos(),
            format!("`({kind} <name>)`"),
            header.describe(),
        )),
    }
}

/// Splits a section `(:keyword body...)` into its keyword and body.
fn section(expr: &SExpr) -> Result<(String, &[SExpr], Pos), PddlError> {
    let items = list(expr, "a `(:section ...)` form")?;
    let head = items
        .first()
        .ok_or_else(|| PddlError::syntax(expr.pos(), "a section keyword", "`()`"))?;
    let kw = lower(atom(head, "a section keyword")?);
    if !kw.starts_with(':') {
        return Err(PddlError::syntax(
            head.pos(),
            "a section keyword",
            head.describe(),
        ));
    }
    Ok((kw, &items[1..], head.pos()))
}

struct TypedName {
    name: String,
    original: String,
    ty: String,
    pos: Pos,
    ty_pos: Option<Pos>,
}

/// Parses `a b - t c - u d` style typed lists. Untyped trailing names get
/// `object`.
fn typed_list(items: &[SExpr]) -> Result<Vec<TypedName>, PddlError> {
    let mut out = Vec::new();
    let mut pending: Vec<(String, Pos)> = Vec::new();
    let mut it = items.iter();
    while let Some(expr) = it.next() {
        if let Some(l) = expr.as_list() {
            let head = l.first().and_then(SExpr::as_atom).unwrap_or("");
            if head.eq_ignore_ascii_case("either") {
                return Err(PddlError::unsupported("either", Some(expr.pos())));
            }
            return Err(PddlError::syntax(expr.pos(), "a name", expr.describe()));
        }
        let text = atom(expr, "a name")?;
        if text == "-" {
            let ty_expr = it.next().ok_or_else(|| {
                PddlError::syntax(expr.pos(), "a type name after `-`", "end of list")
            })?;
            if let Some(l) = ty_expr.as_list() {
                let head = l.first().and_then(SExpr::as_atom).unwrap_or("");
                if head.eq_ignore_ascii_case("either") {
                    return Err(PddlError::unsupported("either", Some(ty_expr.pos())));
                }
            }
            let ty = lower(atom(ty_expr, "a type name")?);
            if pending.is_empty() {
                return Err(PddlError::syntax(expr.pos(), "a name before `-`", "`-`"));
            }
            for (original, pos) in pending.drain(..) {
                out.push(TypedName {
                    name: lower(&original),
                    original,
                    ty: ty.clone(),
                    pos,
                    ty_pos: Some(ty_expr.pos()),
                });
            }
        } else {
            pending.push((text.to_string(), expr.pos()));
        }
    }
    for (original, pos) in pending {
        out.push(TypedName {
            name: lower(&original),
            original,
            ty: OBJECT_TYPE.to_string(),
            pos,
            ty_pos: None,
        });
    }
    Ok(out)
}

fn check_requirements(body: &[SExpr]) -> Result<Vec<String>, PddlError> {
    let mut reqs = Vec::new();
    for r in body {
        let name = lower(atom(r, "a requirement flag")?);
        if !SUPPORTED_REQUIREMENTS.contains(&name.as_str()) {
            return Err(PddlError::unsupported(name, Some(r.pos())));
        }
        if !reqs.contains(&name) {
            reqs.push(name);
        }
    }
    Ok(reqs)
}

fn unsupported_section(kw: &str) -> Option<&'static str> {
    Some(match kw {
        ":constants" => ":constants",
        ":functions" => ":numeric-fluents",
        ":durative-action" => ":durative-actions",
        ":derived" => ":derived-predicates",
        ":axiom" => ":derived-predicates",
        ":constraints" => ":constraints",
        ":metric" => ":numeric-fluents",
        _ => return None,
    })
}

/// Feature name for a non-STRIPS connective, if `head` is one.
fn unsupported_connective(head: &str, in_effect: bool) -> Option<&'static str> {
    Some(match head {
        "or" | "imply" => ":disjunctive-preconditions",
        "exists" => ":existential-preconditions",
        "forall" if in_effect => ":conditional-effects",
        "forall" => ":universal-preconditions",
        "when" => ":conditional-effects",
        "=" => ":equality",
        "increase" | "decrease" | "assign" | "scale-up" | "scale-down" | "<" | ">" | "<="
        | ">=" => ":numeric-fluents",
        _ => return None,
    })
}

/// Flattens a conjunction into `(atomic formula, negated)` pairs.
fn flatten_conjunction<'a>(
    expr: &'a SExpr,
    in_effect: bool,
    out: &mut Vec<(&'a SExpr, bool)>,
) -> Result<(), PddlError> {
    let items = list(expr, "a formula")?;
    let Some(head) = items.first() else {
        return Ok(());
    };
    let h = lower(atom(head, "a predicate or connective")?);
    if h == "and" {
        for child in &items[1..] {
            flatten_conjunction(child, in_effect, out)?;
        }
        return Ok(());
    }
    if h == "not" {
        if !in_effect {
            return Err(PddlError::unsupported(
                ":negative-preconditions",
                Some(expr.pos()),
            ));
        }
        let [inner] = &items[1..] else {
            return Err(PddlError::syntax(
                expr.pos(),
                "`(not <atom>)`",
                expr.describe(),
            ));
        };
        let inner_items = list(inner, "an atomic formula")?;
        if let Some(ih) = inner_items.first().and_then(SExpr::as_atom) {
            if let Some(feature) = unsupported_connective(&lower(ih), true) {
                return Err(PddlError::unsupported(feature, Some(inner.pos())));
            }
        }
        out.push((inner, true));
        return Ok(());
    }
    if let Some(feature) = unsupported_connective(&h, in_effect) {
        return Err(PddlError::unsupported(feature, Some(expr.pos())));
    }
    out.push((expr, false));
    Ok(())
}

fn lifted_literal(
    expr: &SExpr,
    params: &[TypedVar],
    predicates: &[PredicateSignature],
    types: &TypeHierarchy,
) -> Result<Literal, PddlError> {
    let items = list(expr, "an atomic formula")?;
    let name = lower(atom(&items[0], "a predicate name")?);
    let sig = predicates.iter().find(|p| p.name == name).ok_or_else(|| {
        PddlError::type_error(format!("undeclared predicate `{name}`"), Some(expr.pos()))
    })?;
    let args = &items[1..];
    if args.len() != sig.arity() {
        return Err(PddlError::type_error(
            format!(
                "`{name}` takes {} arguments, got {}",
                sig.arity(),
                args.len()
            ),
            Some(expr.pos()),
        ));
    }
    let mut out = Vec::with_capacity(args.len());
    for (arg, slot) in args.iter().zip(&sig.params) {
        let text = atom(arg, "a variable")?;
        let Some(var) = text.strip_prefix('?') else {
            return Err(PddlError::unsupported(":constants", Some(arg.pos())));
        };
        let var = lower(var);
        let param = params.iter().find(|p| p.name == var).ok_or_else(|| {
            PddlError::type_error(
                format!("variable `?{var}` is not a parameter"),
                Some(arg.pos()),
            )
        })?;
        if !types.is_subtype(&param.ty, &slot.ty) {
            return Err(PddlError::type_error(
                format!(
                    "`?{var}` has type `{}` but `{name}` expects `{}`",
                    param.ty, slot.ty
                ),
                Some(arg.pos()),
            ));
        }
        out.push(param.clone());
    }
    Ok(Literal {
        predicate: name,
        args: out,
    })
}

fn push_unique(v: &mut Vec<Literal>, l: Literal) {
    if !v.contains(&l) {
        v.push(l);
    }
}

fn parse_action(
    body: &[SExpr],
    at: Pos,
    predicates: &[PredicateSignature],
    types: &TypeHierarchy,
) -> Result<ActionSchema, PddlError> {
    let name_expr = body
        .first()
        .ok_or_else(|| PddlError::syntax(at, "an action name", "`)`"))?;
    let name = lower(atom(name_expr, "an action name")?);
    let mut params = Vec::new();
    let mut pre_expr = None;
    let mut eff_expr = None;
    let mut rest = body[1..].iter();
    while let Some(key) = rest.next() {
        let k = lower(atom(key, "`:parameters`, `:precondition` or `:effect`")?);
        let value = rest
            .next()
            .ok_or_else(|| PddlError::syntax(key.pos(), format!("a value for `{k}`"), "`)`"))?;
        match k.as_str() {
            ":parameters" => {
                let items = list(value, "a parameter list")?;
                for tn in typed_list(items)? {
                    let Some(var) = tn.name.strip_prefix('?') else {
                        return Err(PddlError::syntax(
                            tn.pos,
                            "a `?variable`",
                            format!("`{}`", tn.original),
                        ));
                    };
                    if !types.is_declared(&tn.ty) {
                        return Err(PddlError::type_error(
                            format!("undeclared type `{}`", tn.ty),
                            tn.ty_pos,
                        ));
                    }
                    if params.iter().any(|p: &TypedVar| p.name == var) {
                        return Err(PddlError::type_error(
                            format!("duplicate parameter `?{var}`"),
                            Some(tn.pos),
                        ));
                    }
                    params.push(TypedVar {
                        name: var.to_string(),
                        ty: tn.ty,
                    });
                }
            }
            ":precondition" => pre_expr = Some(value),
            ":effect" => eff_expr = Some(value),
            ":duration" | ":condition" => {
                return Err(PddlError::unsupported(":durative-actions", Some(key.pos())))
            }
            _ => {
                return Err(PddlError::syntax(
                    key.pos(),
                    "`:parameters`, `:precondition` or `:effect`",
                    format!("`{k}`"),
                ))
            }
        }
    }

    let mut preconditions = Vec::new();
    if let Some(expr) = pre_expr {
        let mut flat = Vec::new();
        flatten_conjunction(expr, false, &mut flat)?;
        for (f, _) in flat {
            push_unique(
                &mut preconditions,
                lifted_literal(f, &params, predicates, types)?,
            );
        }
    }
    let mut add_effects = Vec::new();
    let mut del_effects = Vec::new();
    if let Some(expr) = eff_expr {
        let mut flat = Vec::new();
        flatten_conjunction(expr, true, &mut flat)?;
        for (f, negated) in flat {
            let lit = lifted_literal(f, &params, predicates, types)?;
            if negated {
                push_unique(&mut del_effects, lit);
            } else {
                push_unique(&mut add_effects, lit);
            }
        }
    }
    if let Some(both) = add_effects.iter().find(|l| del_effects.contains(l)) {
        return Err(PddlError::type_error(
            format!("`{name}` both adds and deletes {both}"),
            Some(name_expr.pos()),
        ));
    }
    Ok(ActionSchema {
        name,
        params,
        preconditions,
        add_effects,
        del_effects,
    })
}

pub fn parse_domain(text: &str) -> Result<Domain, PddlError> {
    let forms = read_all(text)?;
    let (name, sections) = define_form(&forms, "domain")?;

    let mut requirements = Vec::new();
    let mut type_sections = Vec::new();
    let mut predicate_sections = Vec::new();
    let mut action_sections = Vec::new();
    for s in sections {
        let (kw, body, pos) = section(s)?;
        match kw.as_str() {
            ":requirements" => requirements.extend(check_requirements(body)?),
            ":types" => type_sections.push(body),
            ":predicates" => predicate_sections.push(body),
            ":action" => action_sections.push((body, pos)),
            other => {
                return Err(match unsupported_section(other) {
                    Some(feature) => PddlError::unsupported(feature, Some(pos)),
                    None => PddlError::syntax(pos, "a domain section", format!("`{other}`")),
                })
            }
        }
    }
    requirements.dedup();

    let mut types = TypeHierarchy::new();
    for body in type_sections {
        for tn in typed_list(body)? {
            if tn.ty_pos.is_some() {
                types.declare(&tn.name, Some(&tn.ty));
            } else {
                types.declare(&tn.name, None);
            }
        }
    }
    if let Some(t) = types.find_cycle() {
        return Err(PddlError::type_error(
            format!("type hierarchy cycle through `{t}`"),
            None,
        ));
    }

    let mut predicates: Vec<PredicateSignature> = Vec::new();
    for body in predicate_sections {
        for p in body {
            let items = list(p, "a predicate declaration")?;
            let head = items
                .first()
                .ok_or_else(|| PddlError::syntax(p.pos(), "a predicate name", "`()`"))?;
            let pname = lower(atom(head, "a predicate name")?);
            if predicates.iter().any(|q| q.name == pname) {
                return Err(PddlError::type_error(
                    format!("duplicate predicate `{pname}`"),
                    Some(p.pos()),
                ));
            }
            let mut params = Vec::new();
            for tn in typed_list(&items[1..])? {
                let Some(var) = tn.name.strip_prefix('?') else {
                    return Err(PddlError::syntax(
                        tn.pos,
                        "a `?variable`",
                        format!("`{}`", tn.original),
                    ));
                };
                if !types.is_declared(&tn.ty) {
                    return Err(PddlError::type_error(
                        format!("undeclared type `{}`", tn.ty),
                        tn.ty_pos,
                    ));
                }
                params.push(TypedVar {
                    name: var.to_string(),
                    ty: tn.ty,
                });
            }
            predicates.push(PredicateSignature {
                name: pname,
                params,
            });
        }
    }

    let mut actions: Vec<ActionSchema> = Vec::new();
    for (body, pos) in action_sections {
        let a = parse_action(body, pos, &predicates, &types)?;
        if actions.iter().any(|b| b.name == a.name) {
            return Err(PddlError::type_error(
                format!("duplicate action `{}`", a.name),
                Some(pos),
            ));
        }
        actions.push(a);
    }

    Ok(Domain {
        name,
        requirements,
        types,
        predicates,
        actions,
    })
}

fn ground_atom(
    expr: &SExpr,
    domain: &Domain,
    objects: &IndexMap<String, String>,
) -> Result<GroundAtom, PddlError> {
    let items = list(expr, "a ground atom")?;
    let head = items
        .first()
        .ok_or_else(|| PddlError::syntax(expr.pos(), "a predicate name", "`()`"))?;
    let name = lower(atom(head, "a predicate name")?);
    if name == "not" {
        return Err(PddlError::unsupported(
            ":negative-preconditions",
            Some(expr.pos()),
        ));
    }
    if let Some(feature) = unsupported_connective(&name, false) {
        return Err(PddlError::unsupported(feature, Some(expr.pos())));
    }
    let sig = domain.predicate(&name).ok_or_else(|| {
        PddlError::type_error(format!("undeclared predicate `{name}`"), Some(expr.pos()))
    })?;
    let args = &items[1..];
    if args.len() != sig.arity() {
        return Err(PddlError::type_error(
            format!(
                "`{name}` takes {} arguments, got {}",
                sig.arity(),
                args.len()
            ),
            Some(expr.pos()),
        ));
    }
    let mut out = Vec::with_capacity(args.len());
    for (arg, slot) in args.iter().zip(&sig.params) {
        let obj = lower(atom(arg, "an object name")?);
        let ty = objects.get(&obj).ok_or_else(|| {
            PddlError::type_error(format!("undeclared object `{obj}`"), Some(arg.pos()))
        })?;
        if !domain.types.is_subtype(ty, &slot.ty) {
            return Err(PddlError::type_error(
                format!("`{obj}` has type `{ty}` but `{name}` expects `{}`", slot.ty),
                Some(arg.pos()),
            ));
        }
        out.push(obj);
    }
    Ok(GroundAtom {
        predicate: name,
        args: out,
    })
}

pub fn parse_problem(text: &str, domain: &Domain) -> Result<ProblemInstance, PddlError> {
    let forms = read_all(text)?;
    let (name, sections) = define_form(&forms, "problem")?;

    let mut domain_name = None;
    let mut objects = IndexMap::new();
    let mut display = BTreeMap::new();
    let mut init_exprs: Vec<&SExpr> = Vec::new();
    let mut goal_expr = None;
    for s in sections {
        let (kw, body, pos) = section(s)?;
        match kw.as_str() {
            ":domain" => {
                let [d] = body else {
                    return Err(PddlError::syntax(pos, "`(:domain <name>)`", s.describe()));
                };
                domain_name = Some(lower(atom(d, "a domain name")?));
            }
            ":requirements" => {
                check_requirements(body)?;
            }
            ":objects" => {
                for tn in typed_list(body)? {
                    if !domain.types.is_declared(&tn.ty) {
                        return Err(PddlError::type_error(
                            format!("undeclared type `{}`", tn.ty),
                            tn.ty_pos,
                        ));
                    }
                    if objects.contains_key(&tn.name) {
                        return Err(PddlError::type_error(
                            format!("duplicate object `{}`", tn.name),
                            Some(tn.pos),
                        ));
                    }
                    if tn.original != tn.name {
                        display.insert(tn.name.clone(), tn.original.clone());
                    }
                    objects.insert(tn.name, tn.ty);
                }
            }
            ":init" => init_exprs.extend(body),
            ":goal" => {
                let [g] = body else {
                    return Err(PddlError::syntax(
                        pos,
                        "a single goal formula",
                        s.describe(),
                    ));
                };
                goal_expr = Some(g);
            }
            other => {
                return Err(match unsupported_section(other) {
                    Some(feature) => PddlError::unsupported(feature, Some(pos)),
                    None => PddlError::syntax(pos, "a problem section", format!("`{other}`")),
                })
            }
        }
    }

    let domain_name = domain_name
        .ok_or_else(|| PddlError::syntax(forms[0].pos(), "a `(:domain ...)` section", "none"))?;
    if domain_name != domain.name {
        return Err(PddlError::DomainMismatch {
            expected: domain.name.clone(),
            found: domain_name,
        });
    }

    let mut init = BTreeSet::new();
    for e in init_exprs {
        init.insert(ground_atom(e, domain, &objects)?);
    }
    let mut goal = BTreeSet::new();
    if let Some(g) = goal_expr {
        let mut flat = Vec::new();
        flatten_conjunction(g, false, &mut flat)?;
        for (f, _) in flat {
            goal.insert(ground_atom(f, domain, &objects)?);
        }
    }

    Ok(ProblemInstance {
        name,
        domain_name,
        objects,
        init,
        goal,
        task_text: None,
        display,
    })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::{PICK_PLACE_DOMAIN, PICK_PLACE_PROBLEM};
    use super::*;

    #[test]
    fn parses_pick_place_domain() {
        let d = parse_domain(PICK_PLACE_DOMAIN).unwrap();
        assert_eq!(d.name, "simple-pick-place");
        assert_eq!(d.actions.len(), 1);
        assert_eq!(d.predicates.len(), 3);
        let types: BTreeSet<&str> = d.types.names().collect();
        assert_eq!(types, BTreeSet::from(["robot", "object", "location"]));
        let pick = &d.actions[0];
        assert_eq!(pick.preconditions.len(), 2);
        assert_eq!(pick.add_effects.len(), 1);
        assert_eq!(pick.del_effects.len(), 1);
        assert_eq!(pick.del_effects[0].predicate, "at-obj");
    }

    #[test]
    fn empty_domain() {
        let d = parse_domain("(define (domain d) (:requirements :strips))").unwrap();
        assert!(d.actions.is_empty());
        assert!(d.predicates.is_empty());
    }

    #[test]
    fn negative_precondition_is_unsupported() {
        let src = PICK_PLACE_DOMAIN.replace(
            "(and (at ?r ?l) (at-obj ?o ?l))",
            "(and (at ?r ?l) (at-obj ?o ?l) (not (at ?r ?l)))",
        );
        match parse_domain(&src).unwrap_err() {
            PddlError::UnsupportedFeature { feature, .. } => {
                assert_eq!(feature, ":negative-preconditions")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_rich_requirements_and_sections() {
        let err =
            parse_domain("(define (domain d) (:requirements :strips :disjunctive-preconditions))")
                .unwrap_err();
        assert!(
            matches!(err, PddlError::UnsupportedFeature { ref feature, .. } if feature == ":disjunctive-preconditions")
        );
        let err = parse_domain("(define (domain d) (:constants a b))").unwrap_err();
        assert!(matches!(err, PddlError::UnsupportedFeature { .. }));
        let src = PICK_PLACE_DOMAIN.replace(
            "(at-obj ?o ?l))\n  :effect",
            "(or (at-obj ?o ?l)))\n  :effect",
        );
        assert!(parse_domain(&src).is_err());
    }

    #[test]
    fn type_errors() {
        let src = PICK_PLACE_DOMAIN.replace("(holding ?r ?o) (not", "(holding ?o ?r) (not");
        assert!(matches!(
            parse_domain(&src).unwrap_err(),
            PddlError::Type { .. }
        ));
        let src = PICK_PLACE_DOMAIN.replace(
            "?l - location)\n  :precondition",
            "?l - place)\n  :precondition",
        );
        assert!(matches!(
            parse_domain(&src).unwrap_err(),
            PddlError::Type { .. }
        ));
        let src = PICK_PLACE_DOMAIN.replace("(at ?r ?l) (at-obj", "(at ?r) (at-obj");
        assert!(matches!(
            parse_domain(&src).unwrap_err(),
            PddlError::Type { .. }
        ));
    }

    #[test]
    fn syntax_error_carries_position() {
        let src = PICK_PLACE_DOMAIN.replace(":parameters", ":params");
        match parse_domain(&src).unwrap_err() {
            PddlError::Syntax { pos, found, .. } => {
                assert_eq!(pos.line, 8);
                assert!(found.contains(":params"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parses_pick_place_problem() {
        let d = parse_domain(PICK_PLACE_DOMAIN).unwrap();
        let p = parse_problem(PICK_PLACE_PROBLEM, &d).unwrap();
        let objs: Vec<(&str, &str)> = p
            .objects
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        assert_eq!(
            objs,
            vec![
                ("r1", "robot"),
                ("obj1", "object"),
                ("loca", "location"),
                ("locb", "location")
            ]
        );
        assert_eq!(p.display_name("loca"), "locA");
        assert_eq!(
            p.init,
            BTreeSet::from([
                GroundAtom::new("at", ["r1", "loca"]),
                GroundAtom::new("at-obj", ["obj1", "loca"]),
            ])
        );
        assert_eq!(
            p.goal,
            BTreeSet::from([GroundAtom::new("holding", ["r1", "obj1"])])
        );
    }

    #[test]
    fn empty_goal_and_type_mismatch() {
        let d = parse_domain(PICK_PLACE_DOMAIN).unwrap();
        let src = PICK_PLACE_PROBLEM.replace("(holding r1 obj1)", "(and)");
        assert!(parse_problem(&src, &d).unwrap().goal.is_empty());
        let src = PICK_PLACE_PROBLEM.replace("(holding r1 obj1)", "(holding locA obj1)");
        assert!(matches!(
            parse_problem(&src, &d).unwrap_err(),
            PddlError::Type { .. }
        ));
        let src = PICK_PLACE_PROBLEM.replace("(:domain simple-pick-place)", "(:domain other)");
        assert!(matches!(
            parse_problem(&src, &d).unwrap_err(),
            PddlError::DomainMismatch { .. }
        ));
    }
}
