use std::collections::HashSet;
use std::fmt::Write;

use crate::syntax::{Level, Term};

/// Print a core term.
///
/// `names` gives the local context, outermost first. In surface mode binders
/// get fresh names `x<depth>`; the output parses back to a term with the same
/// elaboration. Annotated mode prints every node of the core grammar in
/// prefix form.
pub fn pretty<S: AsRef<str>>(t: &Term, names: &[S], annotated: bool) -> String {
    let mut out = String::new();
    if annotated {
        annotated_into(&mut out, t);
    } else {
        Printer::new(t, names).term(&mut out, t, Prec::Top, false);
    }
    out
}

/// Like [`pretty`] in surface mode, for a term that is known to be a type.
pub fn pretty_type<S: AsRef<str>>(t: &Term, names: &[S]) -> String {
    let mut out = String::new();
    Printer::new(t, names).term(&mut out, t, Prec::Top, true);
    out
}

fn annotated_into(out: &mut String, t: &Term) {
    match t {
        Term::Var(i) => write!(out, "v{i}").unwrap(),
        Term::Univ(Level(n)) => write!(out, "U{n}").unwrap(),
        Term::Irrel => out.push('0'),
        Term::Const(c) => out.push_str(c),
        Term::Pi(k, l) => {
            out.push_str("(pi ");
            annotated_into(out, k);
            out.push(' ');
            annotated_into(out, l);
            out.push(')');
        }
        Term::Lam(k, l, b) => {
            out.push_str("(lam ");
            annotated_into(out, k);
            out.push(' ');
            annotated_into(out, l);
            out.push(' ');
            annotated_into(out, b);
            out.push(')');
        }
        Term::App(k, l, f, a) => {
            out.push_str("(app ");
            for (i, part) in [k, l, f, a].into_iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                annotated_into(out, part);
            }
            out.push(')');
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Top,
    ArrowDomain,
    AppHead,
    AppArg,
}

struct Printer {
    scope: Vec<String>,
    taken: HashSet<String>,
}

impl Printer {
    fn new<S: AsRef<str>>(t: &Term, names: &[S]) -> Printer {
        let scope: Vec<String> = names.iter().map(|n| n.as_ref().to_owned()).collect();
        let mut taken: HashSet<String> = scope.iter().cloned().collect();
        collect_consts(t, &mut taken);
        Printer { scope, taken }
    }

    fn fresh(&self) -> String {
        let mut name = format!("x{}", self.scope.len());
        while self.taken.contains(&name) || self.scope.contains(&name) {
            name.push('\'');
        }
        name
    }

    fn with_binder<R>(&mut self, name: String, f: impl FnOnce(&mut Self) -> R) -> R {
        self.scope.push(name);
        let r = f(self);
        self.scope.pop();
        r
    }

    fn term(&mut self, out: &mut String, t: &Term, prec: Prec, type_pos: bool) {
        match t {
            Term::Var(i) => match self.scope.len().checked_sub(i + 1) {
                Some(level) => out.push_str(&self.scope[level]),
                None => write!(out, "?{i}").unwrap(),
            },
            Term::Const(c) => out.push_str(c),
            Term::Irrel => out.push('0'),
            Term::Univ(Level(0)) if type_pos => out.push_str("Prop"),
            Term::Univ(Level(n)) => {
                if prec >= Prec::AppArg {
                    write!(out, "(U {n})").unwrap();
                } else {
                    write!(out, "U {n}").unwrap();
                }
            }
            Term::Pi(dom, cod) => {
                let paren = prec > Prec::Top;
                if paren {
                    out.push('(');
                }
                if cod.has_free_var(0) {
                    let name = self.fresh();
                    write!(out, "({name} : ").unwrap();
                    self.term(out, dom, Prec::Top, true);
                    out.push_str(") -> ");
                    self.with_binder(name, |p| p.term(out, cod, Prec::Top, true));
                } else {
                    self.term(out, dom, Prec::ArrowDomain, true);
                    out.push_str(" -> ");
                    let name = self.fresh();
                    self.with_binder(name, |p| p.term(out, cod, Prec::Top, true));
                }
                if paren {
                    out.push(')');
                }
            }
            Term::Lam(dom, _, body) => {
                let paren = prec > Prec::Top;
                if paren {
                    out.push('(');
                }
                let name = self.fresh();
                write!(out, "fun ({name} : ").unwrap();
                self.term(out, dom, Prec::Top, true);
                out.push_str(") => ");
                self.with_binder(name, |p| p.term(out, body, Prec::Top, false));
                if paren {
                    out.push(')');
                }
            }
            Term::App(_, _, fun, arg) => {
                let paren = prec >= Prec::AppArg;
                if paren {
                    out.push('(');
                }
                self.term(out, fun, Prec::AppHead, false);
                out.push(' ');
                self.term(out, arg, Prec::AppArg, false);
                if paren {
                    out.push(')');
                }
            }
        }
    }
}

fn collect_consts(t: &Term, acc: &mut HashSet<String>) {
    match t {
        Term::Const(c) => {
            acc.insert(c.to_string());
        }
        Term::Var(_) | Term::Univ(_) | Term::Irrel => {}
        Term::Pi(a, b) => {
            collect_consts(a, acc);
            collect_consts(b, acc);
        }
        Term::Lam(a, b, c) => {
            collect_consts(a, acc);
            collect_consts(b, acc);
            collect_consts(c, acc);
        }
        Term::App(a, b, c, d) => {
            collect_consts(a, acc);
            collect_consts(b, acc);
            collect_consts(c, acc);
            collect_consts(d, acc);
        }
    }
}
