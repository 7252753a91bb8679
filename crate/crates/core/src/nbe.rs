//! Normalization by evaluation.
//!
//! Terms are evaluated into a semantic domain of closures and neutrals, then
//! read back by a type-directed `quote`. Quoting at a Π type always
//! η-expands, and quoting at a type whose sort is 0 always yields the proof
//! constant `Irrel`, so two elements are convertible exactly when their
//! quoted forms are structurally equal.
//!
//! Variables are de Bruijn *levels* in the domain and indices in syntax:
//! a level `l` quotes to `Var(depth - 1 - l)`.
//!
//! The functions here assume well-typed input. Shape mismatches (applying a
//! universe, quoting a lambda as a type, ...) are kernel bugs and panic.

use std::fmt;
use std::sync::Arc;

use crate::global::GlobalEnv;
use crate::syntax::{Level, Name, RcTerm, Term};
use crate::typecheck::TypingContext;

#[derive(Clone)]
pub enum Value {
    Univ(Level),
    Pi(Arc<Value>, Closure),
    Lam(Closure),
    /// The unique element of a proposition.
    Irrel,
    Neutral(Arc<Neutral>),
}

impl Value {
    pub fn univ(level: u32) -> Value {
        Value::Univ(Level(level))
    }

    pub fn pi(dom: Value, cod: Closure) -> Value {
        Value::Pi(Arc::new(dom), cod)
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Univ(l) => write!(f, "VU({l})"),
            Value::Pi(dom, cod) => write!(f, "VPi({dom:?}, {:?})", cod.body),
            Value::Lam(cl) => write!(f, "VLam({:?})", cl.body),
            Value::Irrel => f.write_str("VIrrel"),
            Value::Neutral(ne) => write!(f, "VNe({:?}, {} args)", ne.head, ne.spine.len()),
        }
    }
}

/// A term under one binder, paired with the values of its other free variables.
#[derive(Clone)]
pub struct Closure {
    pub env: Env,
    pub body: RcTerm,
}

impl Closure {
    pub fn new(env: Env, body: RcTerm) -> Closure {
        Closure { env, body }
    }

    pub fn apply(&self, globals: &GlobalEnv, arg: Value) -> Value {
        eval(globals, &self.env.push(arg), &self.body)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Head {
    /// A free variable, as a de Bruijn level.
    Var(usize),
    Const(Name),
}

/// A variable or axiom applied to arguments.
///
/// The head carries its declared type; the type of the whole neutral, and the
/// domain/codomain annotations needed to quote each application, are
/// recovered by instantiating that type along the spine.
#[derive(Clone)]
pub struct Neutral {
    pub head: Head,
    pub head_ty: Value,
    pub spine: Vec<Value>,
}

/// Values of the free variables; position `i` is the value of `Var(i)`.
#[derive(Clone, Default)]
pub struct Env {
    len: usize,
    top: Option<Arc<EnvNode>>,
}

struct EnvNode {
    value: Value,
    next: Option<Arc<EnvNode>>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&self, value: Value) -> Env {
        Env {
            len: self.len + 1,
            top: Some(Arc::new(EnvNode { value, next: self.top.clone() })),
        }
    }

    pub fn get(&self, index: usize) -> Option<&Value> {
        let mut node = self.top.as_deref();
        for _ in 0..index {
            node = node?.next.as_deref();
        }
        node.map(|n| &n.value)
    }

    /// Values from `Var(0)` outwards.
    pub fn iter(&self) -> impl Iterator<Item = &Value> {
        let mut node = self.top.as_deref();
        std::iter::from_fn(move || {
            let n = node?;
            node = n.next.as_deref();
            Some(&n.value)
        })
    }
}

impl fmt::Debug for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

pub fn eval(globals: &GlobalEnv, env: &Env, t: &Term) -> Value {
    match t {
        Term::Var(i) => match env.get(*i) {
            Some(v) => v.clone(),
            None => panic!("eval: Var({i}) out of scope in an environment of length {}", env.len()),
        },
        Term::Univ(l) => Value::Univ(*l),
        Term::Pi(dom, cod) => Value::pi(eval(globals, env, dom), Closure::new(env.clone(), cod.clone())),
        Term::Lam(_, _, body) => Value::Lam(Closure::new(env.clone(), body.clone())),
        Term::App(_, _, fun, arg) => {
            let fun = eval(globals, env, fun);
            let arg = eval(globals, env, arg);
            apply_val(globals, &fun, arg)
        }
        Term::Irrel => Value::Irrel,
        Term::Const(name) => match globals.get(name) {
            Some(decl) => decl.value().clone(),
            None => panic!("eval: constant `{name}` is not in the global environment"),
        },
    }
}

pub fn apply_val(globals: &GlobalEnv, fun: &Value, arg: Value) -> Value {
    match fun {
        Value::Lam(cl) => cl.apply(globals, arg),
        Value::Neutral(ne) => {
            let mut spine = ne.spine.clone();
            spine.push(arg);
            Value::Neutral(Arc::new(Neutral {
                head: ne.head.clone(),
                head_ty: ne.head_ty.clone(),
                spine,
            }))
        }
        // A proof of a Π-proposition applied is a proof of a proposition.
        Value::Irrel => Value::Irrel,
        Value::Univ(_) | Value::Pi(..) => panic!("apply_val: {fun:?} is not a function"),
    }
}

/// The type of a neutral, by instantiating its head's type along the spine.
pub fn neutral_type(globals: &GlobalEnv, ne: &Neutral) -> Value {
    let mut ty = ne.head_ty.clone();
    for arg in &ne.spine {
        ty = match &ty {
            Value::Pi(_, cod) => cod.apply(globals, arg.clone()),
            other => panic!("neutral_type: head {:?} applied at non-Π type {other:?}", ne.head),
        };
    }
    ty
}

/// The least universe containing the type `ty`, over a context of length `depth`.
///
/// `Π A B` has sort 0 whenever `B` does, whatever the sort of `A`.
pub fn sort_of(globals: &GlobalEnv, ty: &Value, depth: usize) -> Level {
    match ty {
        Value::Univ(l) => l.succ(),
        Value::Pi(dom, cod) => {
            let dom_sort = sort_of(globals, dom, depth);
            let x = reflect_var(dom, dom_sort, depth);
            let cod_sort = sort_of(globals, &cod.apply(globals, x), depth + 1);
            if cod_sort.is_prop() {
                Level::PROP
            } else {
                dom_sort.max(cod_sort)
            }
        }
        Value::Neutral(ne) => match neutral_type(globals, ne) {
            Value::Univ(l) => l,
            other => panic!("sort_of: neutral {:?} is not a type (it has type {other:?})", ne.head),
        },
        Value::Lam(_) | Value::Irrel => panic!("sort_of: {ty:?} is not a type"),
    }
}

fn reflect_var(ty: &Value, sort: Level, level: usize) -> Value {
    reflect_head(Head::Var(level), ty, sort)
}

fn reflect_head(head: Head, ty: &Value, sort: Level) -> Value {
    if sort.is_prop() {
        Value::Irrel
    } else {
        Value::Neutral(Arc::new(Neutral { head, head_ty: ty.clone(), spine: Vec::new() }))
    }
}

/// The fresh variable at de Bruijn level `level`, of type `ty`.
pub fn reflect_fresh(globals: &GlobalEnv, ty: &Value, level: usize) -> Value {
    reflect_var(ty, sort_of(globals, ty, level), level)
}

/// An axiom of the given type and sort.
pub fn reflect_const(name: Name, ty: &Value, sort: Level) -> Value {
    reflect_head(Head::Const(name), ty, sort)
}

/// Read back `v : ty` as a normal form, η-long and with proofs collapsed.
pub fn quote(globals: &GlobalEnv, depth: usize, ty: &Value, v: &Value) -> RcTerm {
    if sort_of(globals, ty, depth).is_prop() {
        return Term::irrel();
    }
    match ty {
        Value::Pi(dom, cod) => {
            let x = reflect_fresh(globals, dom, depth);
            let cod_x = cod.apply(globals, x.clone());
            let body = quote(globals, depth + 1, &cod_x, &apply_val(globals, v, x));
            Term::lam(
                quote_type(globals, depth, dom),
                quote_type(globals, depth + 1, &cod_x),
                body,
            )
        }
        Value::Univ(_) => quote_type(globals, depth, v),
        Value::Neutral(_) => match v {
            Value::Neutral(ne) => quote_neutral(globals, depth, ne),
            other => panic!("quote: {other:?} does not inhabit a neutral type"),
        },
        Value::Lam(_) | Value::Irrel => panic!("quote: {ty:?} is not a type"),
    }
}

/// Read back a type value as a type code.
pub fn quote_type(globals: &GlobalEnv, depth: usize, ty: &Value) -> RcTerm {
    match ty {
        Value::Univ(l) => Arc::new(Term::Univ(*l)),
        Value::Pi(dom, cod) => {
            let x = reflect_fresh(globals, dom, depth);
            Term::pi(
                quote_type(globals, depth, dom),
                quote_type(globals, depth + 1, &cod.apply(globals, x)),
            )
        }
        Value::Neutral(ne) => quote_neutral(globals, depth, ne),
        Value::Lam(_) | Value::Irrel => panic!("quote_type: {ty:?} is not a type"),
    }
}

fn quote_neutral(globals: &GlobalEnv, depth: usize, ne: &Neutral) -> RcTerm {
    let mut term = match &ne.head {
        Head::Var(level) if *level < depth => Term::var(depth - 1 - level),
        Head::Var(level) => panic!("quote: variable level {level} escapes depth {depth}"),
        Head::Const(name) => Term::constant(name.clone()),
    };
    let mut ty = ne.head_ty.clone();
    for arg in &ne.spine {
        let Value::Pi(dom, cod) = &ty else {
            panic!("quote: head {:?} applied at non-Π type {ty:?}", ne.head)
        };
        let x = reflect_fresh(globals, dom, depth);
        term = Term::app(
            quote_type(globals, depth, dom),
            quote_type(globals, depth + 1, &cod.apply(globals, x)),
            term,
            quote(globals, depth, dom, arg),
        );
        ty = cod.apply(globals, arg.clone());
    }
    term
}

/// The environment mapping each context entry to a fresh variable of its type
/// (or to the proof point, for entries whose type is a proposition).
pub fn id_env(globals: &GlobalEnv, ctx: &TypingContext) -> Env {
    ctx.entries()
        .iter()
        .enumerate()
        .fold(Env::new(), |env, (level, entry)| {
            env.push(reflect_fresh(globals, &entry.ty_value, level))
        })
}

/// Normal form of `t : ty` in `ctx`.
pub fn nf(globals: &GlobalEnv, ctx: &TypingContext, t: &Term, ty: &Term) -> RcTerm {
    let env = ctx.env();
    let ty = eval(globals, env, ty);
    let v = eval(globals, env, t);
    quote(globals, ctx.len(), &ty, &v)
}

/// Conversion of two elements of `ty`: equality of their normal forms.
pub fn conv(globals: &GlobalEnv, depth: usize, ty: &Value, a: &Value, b: &Value) -> bool {
    quote(globals, depth, ty, a) == quote(globals, depth, ty, b)
}

pub fn conv_type(globals: &GlobalEnv, depth: usize, a: &Value, b: &Value) -> bool {
    quote_type(globals, depth, a) == quote_type(globals, depth, b)
}

/// Cumulative subtyping: `U i <= U j` for `i <= j`, Π invariant in its
/// domain and covariant in its codomain, conversion otherwise.
pub fn subtype(globals: &GlobalEnv, depth: usize, a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Univ(i), Value::Univ(j)) => i <= j,
        (Value::Pi(dom_a, cod_a), Value::Pi(dom_b, cod_b)) => {
            if !conv_type(globals, depth, dom_a, dom_b) {
                return false;
            }
            let x = reflect_fresh(globals, dom_a, depth);
            subtype(
                globals,
                depth + 1,
                &cod_a.apply(globals, x.clone()),
                &cod_b.apply(globals, x),
            )
        }
        _ => conv_type(globals, depth, a, b),
    }
}
