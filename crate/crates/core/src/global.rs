//! The global environment: checked axioms and definitions, in order.

use indexmap::IndexMap;

use crate::nbe::Value;
use crate::syntax::{Level, Name, RcTerm};

#[derive(Debug, Clone)]
pub enum Decl {
    Axiom {
        ty: RcTerm,
        ty_value: Value,
        sort: Level,
        /// The axiom reflected at its type: a neutral, or the proof point.
        value: Value,
    },
    Definition {
        ty: RcTerm,
        ty_value: Value,
        body: RcTerm,
        body_value: Value,
    },
}

impl Decl {
    pub fn ty(&self) -> &RcTerm {
        match self {
            Decl::Axiom { ty, .. } | Decl::Definition { ty, .. } => ty,
        }
    }

    pub fn ty_value(&self) -> &Value {
        match self {
            Decl::Axiom { ty_value, .. } | Decl::Definition { ty_value, .. } => ty_value,
        }
    }

    /// What a reference to this constant evaluates to.
    pub fn value(&self) -> &Value {
        match self {
            Decl::Axiom { value, .. } => value,
            Decl::Definition { body_value, .. } => body_value,
        }
    }

    pub fn is_axiom(&self) -> bool {
        matches!(self, Decl::Axiom { .. })
    }
}

#[derive(Debug, Clone, Default)]
pub struct GlobalEnv {
    decls: IndexMap<Name, Decl>,
}

impl GlobalEnv {
    pub fn new() -> GlobalEnv {
        GlobalEnv::default()
    }

    pub fn get(&self, name: &str) -> Option<&Decl> {
        self.decls.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.decls.contains_key(name)
    }

    /// Callers are responsible for having checked `decl` against `self`.
    pub fn insert(&mut self, name: Name, decl: Decl) {
        let previous = self.decls.insert(name.clone(), decl);
        assert!(previous.is_none(), "global `{name}` declared twice");
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Decl)> {
        self.decls.iter()
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }
}
