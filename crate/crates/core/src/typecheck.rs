//! Bidirectional elaboration of surface terms into annotated core terms.
//!
//! Lambdas are only checked, never inferred. Every elaborated `Lam` and `App`
//! node carries the domain and codomain of its Π type, read back by `quote`
//! so that annotations are canonical. Conversion and subtyping are delegated
//! to [`crate::nbe`].
//!
//! [`infer_core`] and [`check_core`] re-check an already elaborated core term
//! (including its annotations); they are used to validate normal forms.

use std::fmt;

use thiserror::Error;

use crate::global::{Decl, GlobalEnv};
use crate::nbe::{self, eval, quote_type, reflect_const, reflect_fresh, sort_of, Closure, Env, Value};
use crate::parser::{pretty_type, DeclKind, RawDecl, RawKind, RawTerm, Span};
use crate::syntax::{Level, Name, RcTerm, Term};

#[derive(Debug, Clone)]
pub struct CtxEntry {
    pub name: Option<Name>,
    pub ty: RcTerm,
    pub ty_value: Value,
    pub sort: Level,
}

/// A telescope of local declarations together with its identity environment.
#[derive(Debug, Clone, Default)]
pub struct TypingContext {
    entries: Vec<CtxEntry>,
    env: Env,
}

impl TypingContext {
    pub fn new() -> TypingContext {
        TypingContext::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries outermost first.
    pub fn entries(&self) -> &[CtxEntry] {
        &self.entries
    }

    /// The identity environment: each entry reflected as a fresh variable.
    pub fn env(&self) -> &Env {
        &self.env
    }

    /// Extend with a variable whose type value is already known.
    pub fn push(&self, globals: &GlobalEnv, name: Option<Name>, ty: RcTerm, ty_value: Value) -> TypingContext {
        let level = self.len();
        let sort = sort_of(globals, &ty_value, level);
        let var = reflect_fresh(globals, &ty_value, level);
        let mut entries = self.entries.clone();
        entries.push(CtxEntry { name, ty, ty_value, sort });
        TypingContext { entries, env: self.env.push(var) }
    }

    /// Extend with a variable of type `ty`, well-formed in `self`.
    pub fn extend(&self, globals: &GlobalEnv, name: Option<Name>, ty: RcTerm) -> TypingContext {
        let ty_value = eval(globals, &self.env, &ty);
        self.push(globals, name, ty, ty_value)
    }

    /// Innermost entry with the given name, with its de Bruijn index.
    pub fn lookup(&self, name: &str) -> Option<(usize, &CtxEntry)> {
        self.entries
            .iter()
            .rev()
            .enumerate()
            .find(|(_, e)| e.name.as_deref() == Some(name))
    }

    pub fn entry(&self, index: usize) -> Option<&CtxEntry> {
        self.len().checked_sub(index + 1).map(|level| &self.entries[level])
    }

    pub fn names(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|e| e.name.as_deref().unwrap_or("_").to_owned())
            .collect()
    }

    /// Print a type value in normal form.
    pub fn show(&self, globals: &GlobalEnv, ty: &Value) -> String {
        pretty_type(&quote_type(globals, self.len(), ty), &self.names())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeErrorKind {
    #[error("unbound name `{0}`")]
    Unbound(Name),
    #[error("`{0}` is already declared")]
    AlreadyDeclared(Name),
    #[error("expected a function, but this term has type {ty}")]
    NotAFunction { ty: String },
    #[error("cannot infer the type of a lambda; use it where a function type is expected")]
    CannotInferLambda,
    #[error("a lambda cannot have type {expected}, which is not a function type")]
    LambdaNotPi { expected: String },
    #[error("binder annotation {annotation} does not match the expected domain {expected}")]
    AnnotationMismatch { annotation: String, expected: String },
    #[error("type mismatch: expected {expected}, found {found}")]
    Mismatch { expected: String, found: String },
    #[error("expected a type, but this term has type {found}")]
    NotAType { found: String },
    #[error("the proof constant 0 has no inferable type")]
    CannotInferProof,
    #[error("the proof constant 0 cannot have type {ty}, which is not a proposition")]
    ProofAtRelevantType { ty: String },
    #[error("variable {0} is out of scope")]
    OutOfScope(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeError {
    pub span: Option<Span>,
    pub decl: Option<Name>,
    pub kind: TypeErrorKind,
}

impl TypeError {
    fn new(span: Span, kind: TypeErrorKind) -> TypeError {
        TypeError { span: Some(span), decl: None, kind }
    }

    fn core(kind: TypeErrorKind) -> TypeError {
        TypeError { span: None, decl: None, kind }
    }

    fn in_decl(mut self, name: &Name) -> TypeError {
        self.decl.get_or_insert_with(|| name.clone());
        self
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(decl) = &self.decl {
            write!(f, "in declaration `{decl}`: ")?;
        }
        write!(f, "{}", self.kind)
    }
}

impl std::error::Error for TypeError {}

pub type Result<T, E = TypeError> = std::result::Result<T, E>;

/// Elaborate `raw` and synthesize its type.
pub fn infer(globals: &GlobalEnv, ctx: &TypingContext, raw: &RawTerm) -> Result<(RcTerm, Value)> {
    match &raw.kind {
        RawKind::Var(name) => {
            if let Some((index, entry)) = ctx.lookup(name) {
                return Ok((Term::var(index), entry.ty_value.clone()));
            }
            match globals.get(name) {
                Some(decl) => Ok((Term::constant(name.clone()), decl.ty_value().clone())),
                None => Err(TypeError::new(raw.span, TypeErrorKind::Unbound(name.clone()))),
            }
        }
        RawKind::Univ(n) => Ok((Term::univ(*n), Value::univ(n + 1))),
        RawKind::Prop => Ok((Term::univ(0), Value::univ(1))),
        RawKind::Pi(name, dom, cod) => infer_pi(globals, ctx, Some(name.clone()), dom, cod),
        RawKind::Arrow(dom, cod) => infer_pi(globals, ctx, None, dom, cod),
        RawKind::Lam(..) => Err(TypeError::new(raw.span, TypeErrorKind::CannotInferLambda)),
        RawKind::App(fun, arg) => {
            let (fun_core, fun_ty) = infer_head(globals, ctx, fun)?;
            let Value::Pi(dom, cod) = &fun_ty else {
                return Err(TypeError::new(
                    fun.span,
                    TypeErrorKind::NotAFunction { ty: ctx.show(globals, &fun_ty) },
                ));
            };
            let arg_core = check(globals, ctx, arg, dom)?;
            let arg_value = eval(globals, ctx.env(), &arg_core);
            let (dom_code, cod_code) = annotations(globals, ctx.len(), dom, cod);
            let core = Term::app(dom_code, cod_code, fun_core, arg_core);
            Ok((core, cod.apply(globals, arg_value)))
        }
    }
}

/// Like [`infer`], but an annotated lambda in function position is allowed:
/// its type is synthesized from the binder annotation and the body.
fn infer_head(globals: &GlobalEnv, ctx: &TypingContext, raw: &RawTerm) -> Result<(RcTerm, Value)> {
    let RawKind::Lam(name, annot, body) = &raw.kind else {
        return infer(globals, ctx, raw);
    };
    let (annot_core, annot_value, _) = infer_type(globals, ctx, annot)?;
    let inner = ctx.push(globals, Some(name.clone()), annot_core, annot_value.clone());
    let (body_core, body_ty) = infer_head(globals, &inner, body)?;
    let cod = Closure::new(ctx.env().clone(), quote_type(globals, inner.len(), &body_ty));
    let (dom_code, cod_code) = annotations(globals, ctx.len(), &annot_value, &cod);
    Ok((Term::lam(dom_code, cod_code, body_core), Value::pi(annot_value, cod)))
}

fn infer_pi(
    globals: &GlobalEnv,
    ctx: &TypingContext,
    name: Option<Name>,
    dom: &RawTerm,
    cod: &RawTerm,
) -> Result<(RcTerm, Value)> {
    let (dom_core, dom_value, dom_sort) = infer_type(globals, ctx, dom)?;
    let inner = ctx.push(globals, name, dom_core.clone(), dom_value);
    let (cod_core, _, cod_sort) = infer_type(globals, &inner, cod)?;
    Ok((Term::pi(dom_core, cod_core), Value::Univ(pi_sort(dom_sort, cod_sort))))
}

/// Universe of `Π A B` from the sorts of `A` and `B`.
pub fn pi_sort(dom: Level, cod: Level) -> Level {
    if cod.is_prop() {
        Level::PROP
    } else {
        dom.max(cod)
    }
}

/// Elaborate a term that must be a type; returns its code, value and sort.
pub fn infer_type(globals: &GlobalEnv, ctx: &TypingContext, raw: &RawTerm) -> Result<(RcTerm, Value, Level)> {
    let (core, ty) = infer(globals, ctx, raw)?;
    if !matches!(ty, Value::Univ(_)) {
        return Err(TypeError::new(raw.span, TypeErrorKind::NotAType { found: ctx.show(globals, &ty) }));
    }
    let value = eval(globals, ctx.env(), &core);
    let sort = sort_of(globals, &value, ctx.len());
    Ok((core, value, sort))
}

/// Canonical `K`, `L` annotations for an application or abstraction at `Π dom cod`.
fn annotations(globals: &GlobalEnv, depth: usize, dom: &Value, cod: &Closure) -> (RcTerm, RcTerm) {
    let x = reflect_fresh(globals, dom, depth);
    (
        quote_type(globals, depth, dom),
        quote_type(globals, depth + 1, &cod.apply(globals, x)),
    )
}

/// Elaborate `raw` against an expected type.
pub fn check(globals: &GlobalEnv, ctx: &TypingContext, raw: &RawTerm, expected: &Value) -> Result<RcTerm> {
    match &raw.kind {
        RawKind::Lam(name, annot, body) => {
            let Value::Pi(dom, cod) = expected else {
                return Err(TypeError::new(
                    raw.span,
                    TypeErrorKind::LambdaNotPi { expected: ctx.show(globals, expected) },
                ));
            };
            let (_, annot_value, _) = infer_type(globals, ctx, annot)?;
            if !nbe::conv_type(globals, ctx.len(), &annot_value, dom) {
                return Err(TypeError::new(
                    annot.span,
                    TypeErrorKind::AnnotationMismatch {
                        annotation: ctx.show(globals, &annot_value),
                        expected: ctx.show(globals, dom),
                    },
                ));
            }
            let (dom_code, cod_code) = annotations(globals, ctx.len(), dom, cod);
            let inner = ctx.push(globals, Some(name.clone()), dom_code.clone(), (**dom).clone());
            let x = inner.env().get(0).cloned().expect("extended context has a variable");
            let body_core = check(globals, &inner, body, &cod.apply(globals, x))?;
            Ok(Term::lam(dom_code, cod_code, body_core))
        }
        _ => {
            let (core, found) = infer(globals, ctx, raw)?;
            if nbe::subtype(globals, ctx.len(), &found, expected) {
                Ok(core)
            } else {
                Err(TypeError::new(
                    raw.span,
                    TypeErrorKind::Mismatch {
                        expected: ctx.show(globals, expected),
                        found: ctx.show(globals, &found),
                    },
                ))
            }
        }
    }
}

/// Check a declaration against the globals before it and add it.
pub fn check_decl(globals: &mut GlobalEnv, decl: &RawDecl) -> Result<()> {
    let name = &decl.name;
    if globals.contains(name) {
        return Err(TypeError::new(decl.span, TypeErrorKind::AlreadyDeclared(name.clone())).in_decl(name));
    }
    let ctx = TypingContext::new();
    let (ty, ty_value, sort) = infer_type(globals, &ctx, &decl.ty).map_err(|e| e.in_decl(name))?;
    let checked = match (decl.kind, &decl.body) {
        (DeclKind::Axiom, _) => {
            let value = reflect_const(name.clone(), &ty_value, sort);
            Decl::Axiom { ty, ty_value, sort, value }
        }
        (DeclKind::Definition, Some(body)) => {
            let body = check(globals, &ctx, body, &ty_value).map_err(|e| e.in_decl(name))?;
            let body_value = eval(globals, &Env::new(), &body);
            Decl::Definition { ty, ty_value, body, body_value }
        }
        (DeclKind::Definition, None) => panic!("definition `{name}` has no body"),
    };
    globals.insert(name.clone(), checked);
    Ok(())
}

/// Re-check a core term and synthesize its type.
pub fn infer_core(globals: &GlobalEnv, ctx: &TypingContext, t: &Term) -> Result<Value> {
    match t {
        Term::Var(i) => ctx
            .entry(*i)
            .map(|e| e.ty_value.clone())
            .ok_or_else(|| TypeError::core(TypeErrorKind::OutOfScope(*i))),
        Term::Univ(l) => Ok(Value::Univ(l.succ())),
        Term::Pi(dom, cod) => {
            let dom_sort = core_type(globals, ctx, dom)?;
            let inner = ctx.extend(globals, None, dom.clone());
            let cod_sort = core_type(globals, &inner, cod)?;
            Ok(Value::Univ(pi_sort(dom_sort, cod_sort)))
        }
        Term::Lam(dom, cod, body) => {
            let pi = core_pi(globals, ctx, dom, cod)?;
            let inner = ctx.extend(globals, None, dom.clone());
            let cod_value = eval(globals, inner.env(), cod);
            check_core(globals, &inner, body, &cod_value)?;
            Ok(pi)
        }
        Term::App(dom, cod, fun, arg) => {
            let pi = core_pi(globals, ctx, dom, cod)?;
            check_core(globals, ctx, fun, &pi)?;
            let Value::Pi(dom_value, cod_closure) = &pi else { unreachable!() };
            check_core(globals, ctx, arg, dom_value)?;
            Ok(cod_closure.apply(globals, eval(globals, ctx.env(), arg)))
        }
        Term::Irrel => Err(TypeError::core(TypeErrorKind::CannotInferProof)),
        Term::Const(name) => globals
            .get(name)
            .map(|d| d.ty_value().clone())
            .ok_or_else(|| TypeError::core(TypeErrorKind::Unbound(name.clone()))),
    }
}

/// Re-check a core term against an expected type.
///
/// `Irrel` is accepted at every proposition.
pub fn check_core(globals: &GlobalEnv, ctx: &TypingContext, t: &Term, expected: &Value) -> Result<()> {
    if let Term::Irrel = t {
        return if sort_of(globals, expected, ctx.len()).is_prop() {
            Ok(())
        } else {
            Err(TypeError::core(TypeErrorKind::ProofAtRelevantType { ty: ctx.show(globals, expected) }))
        };
    }
    let found = infer_core(globals, ctx, t)?;
    if nbe::subtype(globals, ctx.len(), &found, expected) {
        Ok(())
    } else {
        Err(TypeError::core(TypeErrorKind::Mismatch {
            expected: ctx.show(globals, expected),
            found: ctx.show(globals, &found),
        }))
    }
}

fn core_type(globals: &GlobalEnv, ctx: &TypingContext, t: &Term) -> Result<Level> {
    let ty = infer_core(globals, ctx, t)?;
    if !matches!(ty, Value::Univ(_)) {
        return Err(TypeError::core(TypeErrorKind::NotAType { found: ctx.show(globals, &ty) }));
    }
    Ok(sort_of(globals, &eval(globals, ctx.env(), t), ctx.len()))
}

fn core_pi(globals: &GlobalEnv, ctx: &TypingContext, dom: &RcTerm, cod: &RcTerm) -> Result<Value> {
    core_type(globals, ctx, dom)?;
    let inner = ctx.extend(globals, None, dom.clone());
    core_type(globals, &inner, cod)?;
    Ok(Value::pi(eval(globals, ctx.env(), dom), Closure::new(ctx.env().clone(), cod.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_file, parse_term};

    fn load(src: &str) -> GlobalEnv {
        let mut g = GlobalEnv::new();
        for d in parse_file(src).unwrap() {
            check_decl(&mut g, &d).unwrap();
        }
        g
    }

    fn infer_src(g: &GlobalEnv, ctx: &TypingContext, src: &str) -> Result<(RcTerm, Value)> {
        infer(g, ctx, &parse_term(src).unwrap())
    }

    #[test]
    fn universes_and_props() {
        let g = GlobalEnv::new();
        let ctx = TypingContext::new();
        let (core, ty) = infer_src(&g, &ctx, "U 0").unwrap();
        assert_eq!(*core, Term::Univ(Level(0)));
        assert!(matches!(ty, Value::Univ(Level(1))));
        let (core, ty) = infer_src(&g, &ctx, "(X : Prop) -> X").unwrap();
        assert_eq!(core, Term::pi(Term::univ(0), Term::var(0)));
        assert!(matches!(ty, Value::Univ(Level(0))));
        let err = infer_src(&g, &ctx, "fun (x : U 1) => x").unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::CannotInferLambda);
        assert!(err.to_string().contains("cannot infer the type of a lambda"));
    }

    #[test]
    fn checking() {
        let g = GlobalEnv::new();
        let ctx = TypingContext::new();
        let expected = Value::pi(Value::univ(0), Closure::new(Env::new(), Term::univ(0)));
        let core = check(&g, &ctx, &parse_term("fun (X : Prop) => X").unwrap(), &expected).unwrap();
        assert_eq!(core, Term::lam(Term::univ(0), Term::univ(0), Term::var(0)));
        let core = check(&g, &ctx, &parse_term("U 0").unwrap(), &Value::univ(5)).unwrap();
        assert_eq!(*core, Term::Univ(Level(0)));
        let err = check(&g, &ctx, &parse_term("U 1").unwrap(), &Value::univ(1)).unwrap_err();
        assert!(matches!(err.kind, TypeErrorKind::Mismatch { .. }));
    }

    #[test]
    fn proofs_of_different_propositions_differ() {
        let g = load("axiom P : Prop. axiom Q : Prop.");
        let ctx = TypingContext::new();
        let ctx = ctx.extend(&g, Some("p".into()), Term::constant("P"));
        let q = eval(&g, ctx.env(), &Term::Const("Q".into()));
        let err = check(&g, &ctx, &parse_term("p").unwrap(), &q).unwrap_err();
        let TypeErrorKind::Mismatch { expected, found } = &err.kind else { panic!("{err}") };
        assert_eq!(expected, "Q");
        assert_eq!(found, "P");
        assert_eq!(err.span, Some(Span::new(1, 1)));
    }

    #[test]
    fn declarations() {
        let mut g = load("axiom P : Prop.");
        assert!(matches!(g.get("P").unwrap().ty_value(), Value::Univ(Level(0))));
        let d = &parse_file("def bot : Prop := (X : Prop) -> X.").unwrap()[0];
        check_decl(&mut g, d).unwrap();
        let Decl::Definition { body_value, .. } = g.get("bot").unwrap() else { panic!() };
        assert_eq!(sort_of(&g, body_value, 0), Level(0));
        let bad = &parse_file("def bad : Prop := U 0.").unwrap()[0];
        let err = check_decl(&mut g, bad).unwrap_err();
        assert_eq!(err.decl.as_deref(), Some("bad"));
        assert!(err.to_string().contains("expected Prop, found U 1"), "{err}");
        assert!(!g.contains("bad"));
        let dup = &parse_file("axiom P : U 1.").unwrap()[0];
        assert!(matches!(check_decl(&mut g, dup).unwrap_err().kind, TypeErrorKind::AlreadyDeclared(_)));
    }

    #[test]
    fn application_annotations() {
        let g = load("axiom A : U 1. axiom F : A -> U 1. axiom dep : (x : A) -> F x. axiom a : A.");
        let (core, ty) = infer_src(&g, &TypingContext::new(), "dep a").unwrap();
        let expected = Term::app(
            Term::constant("A"),
            Term::app(Term::constant("A"), Term::univ(1), Term::constant("F"), Term::var(0)),
            Term::constant("dep"),
            Term::constant("a"),
        );
        assert_eq!(core, expected);
        assert_eq!(TypingContext::new().show(&g, &ty), "F a");
        check_core(&g, &TypingContext::new(), &core, &ty).unwrap();
    }

    #[test]
    fn errors_carry_spans() {
        let g = load("axiom A : U 1. axiom a : A.");
        let ctx = TypingContext::new();
        let err = infer_src(&g, &ctx, "a a").unwrap_err();
        assert!(matches!(err.kind, TypeErrorKind::NotAFunction { .. }));
        assert_eq!(err.span, Some(Span::new(1, 1)));
        let err = infer_src(&g, &ctx, "(x : A) -> nope").unwrap_err();
        assert_eq!(err.kind, TypeErrorKind::Unbound("nope".into()));
        assert_eq!(err.span, Some(Span::new(1, 12)));
        let err = infer_src(&g, &ctx, "(x : a) -> A").unwrap_err();
        assert!(matches!(err.kind, TypeErrorKind::NotAType { .. }));
        let expected = Value::pi(Value::univ(1), Closure::new(Env::new(), Term::univ(1)));
        let err = check(&g, &ctx, &parse_term("fun (x : U 0) => x").unwrap(), &expected).unwrap_err();
        assert!(matches!(err.kind, TypeErrorKind::AnnotationMismatch { .. }));
        let err = check(&g, &ctx, &parse_term("fun (x : A) => x").unwrap(), &Value::univ(1)).unwrap_err();
        assert!(matches!(err.kind, TypeErrorKind::LambdaNotPi { .. }));
    }

    #[test]
    fn core_recheck_rejects_bad_annotations() {
        let g = load("axiom A : U 1. axiom f : A -> A. axiom a : A.");
        let ctx = TypingContext::new();
        let a = Term::constant("A");
        let good = Term::app(a.clone(), a.clone(), Term::constant("f"), Term::constant("a"));
        assert!(infer_core(&g, &ctx, &good).is_ok());
        let bad = Term::app(Term::univ(0), a.clone(), Term::constant("f"), Term::constant("a"));
        assert!(infer_core(&g, &ctx, &bad).is_err());
        assert!(check_core(&g, &ctx, &Term::Irrel, &eval(&g, ctx.env(), &a)).is_err());
        assert!(infer_core(&g, &ctx, &Term::Var(0)).is_err());
    }
}
