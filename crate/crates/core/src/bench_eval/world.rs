use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Static object properties. Each maps to a unary predicate of the same
/// name in the household domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Affordance {
    Pickupable,
    Receptacle,
    Container,
    Openable,
    Toggleable,
    Sliceable,
    Cleanable,
    Cookable,
    Breakable,
    Knife,
    Washer,
    Heater,
    Dusty,
    Plant,
    Cloth,
    Charger,
}

impl Affordance {
    pub const ALL: [Affordance; 16] = [
        Affordance::Pickupable,
        Affordance::Receptacle,
        Affordance::Container,
        Affordance::Openable,
        Affordance::Toggleable,
        Affordance::Sliceable,
        Affordance::Cleanable,
        Affordance::Cookable,
        Affordance::Breakable,
        Affordance::Knife,
        Affordance::Washer,
        Affordance::Heater,
        Affordance::Dusty,
        Affordance::Plant,
        Affordance::Cloth,
        Affordance::Charger,
    ];

    pub fn predicate(self) -> &'static str {
        match self {
            Affordance::Pickupable => "pickupable",
            Affordance::Receptacle => "receptacle",
            Affordance::Container => "container",
            Affordance::Openable => "openable",
            Affordance::Toggleable => "toggleable",
            Affordance::Sliceable => "sliceable",
            Affordance::Cleanable => "cleanable",
            Affordance::Cookable => "cookable",
            Affordance::Breakable => "breakable",
            Affordance::Knife => "knife",
            Affordance::Washer => "washer",
            Affordance::Heater => "heater",
            Affordance::Dusty => "dusty",
            Affordance::Plant => "plant",
            Affordance::Cloth => "cloth",
            Affordance::Charger => "charger",
        }
    }

    pub fn from_predicate(p: &str) -> Option<Affordance> {
        Affordance::ALL.into_iter().find(|a| a.predicate() == p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum StateTag {
    Cleaned,
    Sliced,
    Cooked,
    On,
    Off,
    Broken,
    Open,
    Closed,
}

impl StateTag {
    pub const ALL: [StateTag; 8] = [
        StateTag::Cleaned,
        StateTag::Sliced,
        StateTag::Cooked,
        StateTag::On,
        StateTag::Off,
        StateTag::Broken,
        StateTag::Open,
        StateTag::Closed,
    ];

    /// The unary household predicate standing for this tag.
    pub fn predicate(self) -> &'static str {
        match self {
            StateTag::Cleaned => "cleaned",
            StateTag::Sliced => "sliced",
            StateTag::Cooked => "cooked",
            StateTag::On => "switched-on",
            StateTag::Off => "switched-off",
            StateTag::Broken => "broken",
            StateTag::Open => "opened",
            StateTag::Closed => "closed",
        }
    }

    pub fn from_predicate(p: &str) -> Option<StateTag> {
        StateTag::ALL.into_iter().find(|t| t.predicate() == p)
    }
}

impl fmt::Display for StateTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).ok();
        f.write_str(s.as_ref().and_then(|v| v.as_str()).unwrap_or("?"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpenState {
    Open,
    Closed,
}

/// Symbolic household scene. Names keep their original spelling.
/// `OPEN`/`CLOSED` live in `open_state`, never in `object_states`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WorldState {
    pub robots: Vec<String>,
    pub objects: BTreeMap<String, BTreeSet<Affordance>>,
    pub object_states: BTreeMap<String, BTreeSet<StateTag>>,
    /// Container or surface → objects in or on it.
    pub containment: BTreeMap<String, BTreeSet<String>>,
    pub held: BTreeMap<String, Option<String>>,
    pub open_state: BTreeMap<String, OpenState>,
    /// Robot → the object it stands next to.
    pub robot_at: BTreeMap<String, String>,
}

impl WorldState {
    pub fn has(&self, object: &str, a: Affordance) -> bool {
        self.objects.get(object).is_some_and(|s| s.contains(&a))
    }

    pub fn is_robot(&self, name: &str) -> bool {
        self.robots.iter().any(|r| r == name)
    }

    pub fn knows(&self, name: &str) -> bool {
        self.objects.contains_key(name) || self.is_robot(name)
    }

    /// The known name matching `name` up to ASCII case.
    pub fn resolve(&self, name: &str) -> Option<&str> {
        self.robots
            .iter()
            .map(String::as_str)
            .chain(self.objects.keys().map(String::as_str))
            .find(|n| n.eq_ignore_ascii_case(name))
    }

    pub fn holder_of(&self, object: &str) -> Option<&str> {
        self.held
            .iter()
            .find(|(_, h)| h.as_deref() == Some(object))
            .map(|(r, _)| r.as_str())
    }

    pub fn container_of(&self, object: &str) -> Option<&str> {
        self.containment
            .iter()
            .find(|(_, items)| items.contains(object))
            .map(|(c, _)| c.as_str())
    }

    pub fn is_closed(&self, object: &str) -> bool {
        self.open_state.get(object) == Some(&OpenState::Closed)
    }

    pub fn has_state(&self, object: &str, tag: StateTag) -> bool {
        match tag {
            StateTag::Open => self.open_state.get(object) == Some(&OpenState::Open),
            StateTag::Closed => self.is_closed(object),
            t => self
                .object_states
                .get(object)
                .is_some_and(|s| s.contains(&t)),
        }
    }

    /// Adds a `None` hand for every robot and drops empty sets, so equal
    /// scenes compare equal.
    pub fn normalized(mut self) -> Self {
        for r in &self.robots {
            self.held.entry(r.clone()).or_insert(None);
        }
        self.containment.retain(|_, v| !v.is_empty());
        self.object_states.retain(|_, v| !v.is_empty());
        self
    }

    /// Structural consistency. Returns the first problem found.
    pub fn check(&self) -> Result<(), String> {
        let mut lowered = BTreeSet::new();
        for name in self.robots.iter().chain(self.objects.keys()) {
            if !lowered.insert(name.to_lowercase()) {
                return Err(format!(
                    "name `{name}` is used twice (names are case-insensitive)"
                ));
            }
        }
        let known_obj = |o: &str| -> Result<(), String> {
            if self.objects.contains_key(o) {
                Ok(())
            } else {
                Err(format!("unknown object `{o}`"))
            }
        };
        let mut placed = BTreeSet::new();
        for (c, items) in &self.containment {
            known_obj(c)?;
            for o in items {
                known_obj(o)?;
                if !placed.insert(o) {
                    return Err(format!("`{o}` is in more than one place"));
                }
            }
        }
        let mut in_hand = BTreeSet::new();
        for (r, h) in &self.held {
            if !self.is_robot(r) {
                return Err(format!("`held` names unknown robot `{r}`"));
            }
            if let Some(o) = h {
                known_obj(o)?;
                if !in_hand.insert(o) {
                    return Err(format!("`{o}` is held by more than one robot"));
                }
                if placed.contains(o) {
                    return Err(format!("`{o}` is both held and contained"));
                }
            }
        }
        for (o, tags) in &self.object_states {
            known_obj(o)?;
            if tags.contains(&StateTag::Open) || tags.contains(&StateTag::Closed) {
                return Err(format!("`{o}`: OPEN/CLOSED belong in `open_state`"));
            }
        }
        for o in self.open_state.keys() {
            known_obj(o)?;
        }
        for (r, o) in &self.robot_at {
            if !self.is_robot(r) {
                return Err(format!("`robot_at` names unknown robot `{r}`"));
            }
            known_obj(o)?;
        }
        Ok(())
    }
}
