use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Name of the implicit root type.
pub const OBJECT_TYPE: &str = "object";

/// Declared types and their (optional) parents.
///
/// `object` is the implicit root: every type is a subtype of it unless the
/// domain lists `object` itself as a peer type in `(:types ...)`, in which
/// case it behaves like any other flat type.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeHierarchy {
    parents: BTreeMap<String, Option<String>>,
}

impl TypeHierarchy {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares `name`, optionally under `parent`. A parent that was never
    /// declared is added as a root (except `object`, which stays implicit).
    pub fn declare(&mut self, name: &str, parent: Option<&str>) {
        if let Some(p) = parent {
            if p != OBJECT_TYPE && !self.parents.contains_key(p) {
                self.parents.insert(p.to_string(), None);
            }
        }
        let slot = self.parents.entry(name.to_string()).or_insert(None);
        if parent.is_some() {
            *slot = parent.map(str::to_string);
        }
    }

    pub fn is_declared(&self, name: &str) -> bool {
        name == OBJECT_TYPE || self.parents.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.parents.keys().map(String::as_str)
    }

    pub fn parent(&self, name: &str) -> Option<&str> {
        self.parents.get(name).and_then(|p| p.as_deref())
    }

    pub fn is_empty(&self) -> bool {
        self.parents.is_empty()
    }

    /// True when `object` was declared as a peer type rather than the root.
    pub fn object_is_peer(&self) -> bool {
        self.parents.contains_key(OBJECT_TYPE)
    }

    /// `sub ⊑ sup` under the hierarchy (reflexive).
    pub fn is_subtype(&self, sub: &str, sup: &str) -> bool {
        if sub == sup {
            return true;
        }
        if sup == OBJECT_TYPE && !self.object_is_peer() {
            return true;
        }
        let mut cur = sub;
        // Bounded walk: cycles are rejected at parse time, but a hand-built
        // hierarchy may still contain one.
        for _ in 0..=self.parents.len() {
            match self.parent(cur) {
                Some(p) if p == sup => return true,
                Some(p) => cur = p,
                None => return false,
            }
        }
        false
    }

    /// Equal, or one a subtype of the other.
    pub fn unifiable(&self, a: &str, b: &str) -> bool {
        self.is_subtype(a, b) || self.is_subtype(b, a)
    }

    /// Returns the first type that lies on a parent cycle, if any.
    pub fn find_cycle(&self) -> Option<&str> {
        for start in self.parents.keys() {
            let mut cur = start.as_str();
            for _ in 0..=self.parents.len() {
                match self.parent(cur) {
                    Some(p) if p == start => return Some(start),
                    Some(p) => cur = p,
                    None => break,
                }
            }
        }
        None
    }
}
