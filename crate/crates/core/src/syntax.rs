//! Core syntax: fully annotated terms over de Bruijn indices.
//!
//! Every application and abstraction carries the domain and codomain of the
//! function type it lives in, so a core term can be re-checked and printed
//! without any inference. Substitutions are meta-level operations; terms
//! themselves never contain a pending substitution.

use std::fmt;
use std::sync::Arc;

/// Global constant names.
pub type Name = Arc<str>;

/// Universe index. `U n` lives in `U (n + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Level(pub u32);

impl Level {
    pub const PROP: Level = Level(0);

    pub fn succ(self) -> Level {
        Level(self.0 + 1)
    }

    pub fn is_prop(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type RcTerm = Arc<Term>;

/// Annotated core terms.
///
/// In `Pi(dom, cod)`, `Lam(dom, cod, body)` and `App(dom, cod, fun, arg)` the
/// `cod` and `body` fields are scoped under one extra binder.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    Univ(Level),
    Pi(RcTerm, RcTerm),
    Lam(RcTerm, RcTerm, RcTerm),
    App(RcTerm, RcTerm, RcTerm, RcTerm),
    /// The canonical proof of any proposition.
    Irrel,
    Const(Name),
}

impl Term {
    pub fn var(index: usize) -> RcTerm {
        Arc::new(Term::Var(index))
    }

    pub fn univ(level: u32) -> RcTerm {
        Arc::new(Term::Univ(Level(level)))
    }

    pub fn pi(dom: RcTerm, cod: RcTerm) -> RcTerm {
        Arc::new(Term::Pi(dom, cod))
    }

    pub fn lam(dom: RcTerm, cod: RcTerm, body: RcTerm) -> RcTerm {
        Arc::new(Term::Lam(dom, cod, body))
    }

    pub fn app(dom: RcTerm, cod: RcTerm, fun: RcTerm, arg: RcTerm) -> RcTerm {
        Arc::new(Term::App(dom, cod, fun, arg))
    }

    pub fn irrel() -> RcTerm {
        Arc::new(Term::Irrel)
    }

    pub fn constant(name: impl Into<Name>) -> RcTerm {
        Arc::new(Term::Const(name.into()))
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Univ(_) | Term::Irrel | Term::Const(_) => 1,
            Term::Pi(a, b) => 1 + a.size() + b.size(),
            Term::Lam(a, b, c) => 1 + a.size() + b.size() + c.size(),
            Term::App(a, b, c, d) => 1 + a.size() + b.size() + c.size() + d.size(),
        }
    }

    /// Whether `Var(index)` (relative to this term's scope) occurs free.
    pub fn has_free_var(&self, index: usize) -> bool {
        match self {
            Term::Var(i) => *i == index,
            Term::Univ(_) | Term::Irrel | Term::Const(_) => false,
            Term::Pi(a, b) => a.has_free_var(index) || b.has_free_var(index + 1),
            Term::Lam(a, b, c) => {
                a.has_free_var(index) || b.has_free_var(index + 1) || c.has_free_var(index + 1)
            }
            Term::App(a, b, f, x) => {
                a.has_free_var(index)
                    || b.has_free_var(index + 1)
                    || f.has_free_var(index)
                    || x.has_free_var(index)
            }
        }
    }
}

/// Structural equality, annotations and levels included.
pub fn term_equal(a: &Term, b: &Term) -> bool {
    a == b
}

/// Shift every free variable at or above `cutoff` up by `amount`.
pub fn rename(t: &RcTerm, cutoff: usize, amount: usize) -> RcTerm {
    if amount == 0 {
        return t.clone();
    }
    match &**t {
        Term::Var(i) if *i >= cutoff => Term::var(i + amount),
        Term::Var(_) | Term::Univ(_) | Term::Irrel | Term::Const(_) => t.clone(),
        Term::Pi(a, b) => Term::pi(rename(a, cutoff, amount), rename(b, cutoff + 1, amount)),
        Term::Lam(a, b, c) => Term::lam(
            rename(a, cutoff, amount),
            rename(b, cutoff + 1, amount),
            rename(c, cutoff + 1, amount),
        ),
        Term::App(a, b, f, x) => Term::app(
            rename(a, cutoff, amount),
            rename(b, cutoff + 1, amount),
            rename(f, cutoff, amount),
            rename(x, cutoff, amount),
        ),
    }
}

/// A syntactic substitution from a context of length `source_len` into a
/// context of length `entries.len()`: `entries[i]` replaces `Var(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subst {
    entries: Vec<RcTerm>,
    source_len: usize,
}

impl Subst {
    /// Build from explicit entries, each well-scoped in `source_len`.
    pub fn new(entries: Vec<RcTerm>, source_len: usize) -> Subst {
        Subst { entries, source_len }
    }

    pub fn identity(len: usize) -> Subst {
        Subst {
            entries: (0..len).map(Term::var).collect(),
            source_len: len,
        }
    }

    /// The projection out of a context extended by one entry.
    pub fn weakening(len: usize) -> Subst {
        Subst {
            entries: (1..=len).map(Term::var).collect(),
            source_len: len + 1,
        }
    }

    /// `[a]`: identity on a context of length `len`, plus `a` for the new variable.
    pub fn single(a: RcTerm, len: usize) -> Subst {
        Subst::identity(len).extend(a)
    }

    /// Extension `(self, t)`: `t` becomes the replacement for `Var(0)`.
    pub fn extend(mut self, t: RcTerm) -> Subst {
        self.entries.insert(0, t);
        self
    }

    pub fn entries(&self) -> &[RcTerm] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }
}

/// Simultaneous, capture-avoiding substitution.
///
/// Panics if `t` mentions a variable outside the substitution's range.
pub fn subst_apply(t: &RcTerm, s: &Subst) -> RcTerm {
    apply_under(t, &s.entries, 0)
}

fn apply_under(t: &RcTerm, entries: &[RcTerm], depth: usize) -> RcTerm {
    match &**t {
        Term::Var(i) if *i < depth => t.clone(),
        Term::Var(i) => match entries.get(i - depth) {
            Some(e) => rename(e, 0, depth),
            None => panic!(
                "substitution: Var({i}) is out of scope for a substitution of length {}",
                entries.len()
            ),
        },
        Term::Univ(_) | Term::Irrel | Term::Const(_) => t.clone(),
        Term::Pi(a, b) => Term::pi(
            apply_under(a, entries, depth),
            apply_under(b, entries, depth + 1),
        ),
        Term::Lam(a, b, c) => Term::lam(
            apply_under(a, entries, depth),
            apply_under(b, entries, depth + 1),
            apply_under(c, entries, depth + 1),
        ),
        Term::App(a, b, f, x) => Term::app(
            apply_under(a, entries, depth),
            apply_under(b, entries, depth + 1),
            apply_under(f, entries, depth),
            apply_under(x, entries, depth),
        ),
    }
}

/// Composition `a` then `b`: `subst_apply(t, compose(a, b)) == subst_apply(subst_apply(t, a), b)`.
pub fn subst_compose(a: &Subst, b: &Subst) -> Subst {
    assert_eq!(
        a.source_len,
        b.entries.len(),
        "subst_compose: source of the first substitution must be the target of the second"
    );
    Subst {
        entries: a.entries.iter().map(|e| subst_apply(e, b)).collect(),
        source_len: b.source_len,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn scoped(t: &Term, len: usize) -> bool {
        match t {
            Term::Var(i) => *i < len,
            Term::Univ(_) | Term::Irrel | Term::Const(_) => true,
            Term::Pi(a, b) => scoped(a, len) && scoped(b, len + 1),
            Term::Lam(a, b, c) => scoped(a, len) && scoped(b, len + 1) && scoped(c, len + 1),
            Term::App(a, b, f, x) => {
                scoped(a, len) && scoped(b, len + 1) && scoped(f, len) && scoped(x, len)
            }
        }
    }

    fn arb_term(len: usize, depth: u32) -> BoxedStrategy<RcTerm> {
        let mut leaves: Vec<BoxedStrategy<RcTerm>> = vec![
            (0u32..3).prop_map(Term::univ).boxed(),
            Just(Term::irrel()).boxed(),
            Just(Term::constant("c")).boxed(),
        ];
        if len > 0 {
            leaves.push((0..len).prop_map(Term::var).boxed());
        }
        let leaf = proptest::strategy::Union::new(leaves).boxed();
        if depth == 0 {
            return leaf;
        }
        let here = arb_term(len, depth - 1);
        let under = arb_term(len + 1, depth - 1);
        prop_oneof![
            2 => leaf,
            1 => (here.clone(), under.clone()).prop_map(|(a, b)| Term::pi(a, b)),
            1 => (here.clone(), under.clone(), under.clone()).prop_map(|(a, b, c)| Term::lam(a, b, c)),
            1 => (here.clone(), under, here.clone(), here).prop_map(|(a, b, f, x)| Term::app(a, b, f, x)),
        ]
        .boxed()
    }

    fn arb_subst(from: usize, to: usize) -> BoxedStrategy<Subst> {
        proptest::collection::vec(arb_term(from, 2), to)
            .prop_map(move |entries| Subst::new(entries, from))
            .boxed()
    }

    #[test]
    fn equality_examples() {
        assert!(term_equal(&Term::Var(0), &Term::Var(0)));
        let a = Term::pi(Term::univ(0), Term::var(0));
        let b = Term::pi(Term::univ(1), Term::var(0));
        assert!(!term_equal(&a, &b));
        let f = Term::constant("f");
        let x = Term::univ(0);
        let a1 = Term::app(Term::univ(1), Term::univ(1), f.clone(), x.clone());
        let a2 = Term::app(Term::univ(1), Term::univ(2), f, x);
        assert!(!term_equal(&a1, &a2));
    }

    #[test]
    fn rename_examples() {
        assert_eq!(*rename(&Term::var(0), 0, 1), Term::Var(1));
        let id = Term::lam(Term::univ(0), Term::univ(0), Term::var(0));
        assert_eq!(rename(&id, 0, 1), id);
        assert_eq!(*rename(&Term::var(2), 1, 3), Term::Var(5));
        assert_eq!(*rename(&Term::var(0), 1, 3), Term::Var(0));
    }

    #[test]
    fn subst_examples() {
        let s = Subst::new(vec![Term::univ(3)], 0);
        assert_eq!(*subst_apply(&Term::var(0), &s), Term::Univ(Level(3)));

        // Under the lambda, Var 1 refers to the substituted variable.
        let k = Term::var(0);
        let l = Term::var(1);
        let t = Term::lam(k, l, Term::var(1));
        let s = Subst::new(vec![Term::univ(0)], 0);
        let expected = Term::lam(Term::univ(0), Term::univ(0), Term::univ(0));
        assert_eq!(subst_apply(&t, &s), expected);

        // Bound occurrences stay put; free ones above shift with the lift.
        let t = Term::pi(Term::var(1), Term::app(Term::var(0), Term::var(1), Term::var(2), Term::var(0)));
        let s = Subst::new(vec![Term::var(4), Term::var(7)], 9);
        let expected = Term::pi(
            Term::var(7),
            Term::app(Term::var(0), Term::var(1), Term::var(8), Term::var(0)),
        );
        assert_eq!(subst_apply(&t, &s), expected);
    }

    #[test]
    fn weakening_is_rename() {
        let t = Term::pi(Term::var(1), Term::var(1));
        assert_eq!(subst_apply(&t, &Subst::weakening(2)), rename(&t, 0, 1));
    }

    #[test]
    #[should_panic(expected = "out of scope")]
    fn out_of_scope_panics() {
        subst_apply(&Term::var(3), &Subst::identity(2));
    }

    proptest! {
        #[test]
        fn identity_is_neutral(t in arb_term(3, 4)) {
            prop_assert_eq!(subst_apply(&t, &Subst::identity(3)), t);
        }

        #[test]
        fn apply_then_apply_is_compose(
            t in arb_term(2, 4),
            a in arb_subst(3, 2),
            b in arb_subst(1, 3),
        ) {
            let lhs = subst_apply(&subst_apply(&t, &a), &b);
            let rhs = subst_apply(&t, &subst_compose(&a, &b));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn identity_units(a in arb_subst(2, 3)) {
            prop_assert_eq!(subst_compose(&Subst::identity(3), &a), a.clone());
            prop_assert_eq!(subst_compose(&a, &Subst::identity(2)), a);
        }

        #[test]
        fn rename_accumulates(t in arb_term(3, 4), c in 0usize..3, a in 0usize..3, b in 0usize..3) {
            prop_assert_eq!(rename(&rename(&t, c, a), c, b), rename(&t, c, a + b));
        }

        #[test]
        fn subst_preserves_scope(t in arb_term(3, 4), s in arb_subst(2, 3)) {
            prop_assert!(scoped(&subst_apply(&t, &s), 2));
        }
    }
}
