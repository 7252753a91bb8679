//! Helpers shared by the integration tests and the acceptance runner.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::Rng;
use ttk::global::GlobalEnv;
use ttk::parser::parse_file;
use ttk::syntax::{RcTerm, Subst, Term};
use ttk::typecheck::check_decl;

pub fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

pub fn corpus(name: &str) -> PathBuf {
    tests_dir().join("corpus").join(name)
}

/// The corpus files that load together into one scope.
pub const CORPUS: &[&str] = &["logic.tt", "poly.tt", "church.tt"];

pub fn load_into(globals: &mut GlobalEnv, path: &Path) {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let decls = parse_file(&text).unwrap_or_else(|e| panic!("{}:{e}", path.display()));
    for d in &decls {
        check_decl(globals, d).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

pub fn load(files: &[&str]) -> GlobalEnv {
    let mut globals = GlobalEnv::new();
    for f in files {
        load_into(&mut globals, &corpus(f));
    }
    globals
}

pub fn load_src(src: &str) -> GlobalEnv {
    let mut globals = GlobalEnv::new();
    for d in &parse_file(src).unwrap() {
        check_decl(&mut globals, d).unwrap_or_else(|e| panic!("{e}"));
    }
    globals
}

/// Sorted `.tt` files in a directory.
pub fn tt_files(dir: &Path) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "tt"))
        .collect();
    files.sort();
    files
}

pub fn ttk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttk"))
        .args(args)
        .output()
        .expect("failed to run ttk")
}

pub fn scoped(t: &Term, len: usize) -> bool {
    match t {
        Term::Var(i) => *i < len,
        Term::Univ(_) | Term::Irrel | Term::Const(_) => true,
        Term::Pi(a, b) => scoped(a, len) && scoped(b, len + 1),
        Term::Lam(a, b, c) => scoped(a, len) && scoped(b, len + 1) && scoped(c, len + 1),
        Term::App(a, b, f, x) => scoped(a, len) && scoped(b, len + 1) && scoped(f, len) && scoped(x, len),
    }
}

pub fn depth(t: &Term) -> usize {
    match t {
        Term::Var(_) | Term::Univ(_) | Term::Irrel | Term::Const(_) => 0,
        Term::Pi(a, b) => 1 + depth(a).max(depth(b)),
        Term::Lam(a, b, c) => 1 + depth(a).max(depth(b)).max(depth(c)),
        Term::App(a, b, f, x) => 1 + depth(a).max(depth(b)).max(depth(f)).max(depth(x)),
    }
}

/// A random raw term, well scoped in a context of length `len`, of depth at most `max_depth`.
pub fn random_term(rng: &mut impl Rng, len: usize, max_depth: usize) -> RcTerm {
    let leaf = max_depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..4) {
            0 if len > 0 => Term::var(rng.gen_range(0..len)),
            0 | 1 => Term::univ(rng.gen_range(0..3)),
            2 => Term::irrel(),
            _ => Term::constant(["c", "d"][rng.gen_range(0..2)]),
        };
    }
    let d = max_depth - 1;
    match rng.gen_range(0..3) {
        0 => Term::pi(random_term(rng, len, d), random_term(rng, len + 1, d)),
        1 => Term::lam(random_term(rng, len, d), random_term(rng, len + 1, d), random_term(rng, len + 1, d)),
        _ => Term::app(
            random_term(rng, len, d),
            random_term(rng, len + 1, d),
            random_term(rng, len, d),
            random_term(rng, len, d),
        ),
    }
}

/// A random substitution replacing `target` variables by terms over `source` variables.
pub fn random_subst(rng: &mut impl Rng, source: usize, target: usize) -> Subst {
    let entries = (0..target).map(|_| random_term(rng, source, 2)).collect();
    Subst::new(entries, source)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Bound {
    /// A variable ranging over the universe `U n`.
    Type(u32),
    /// An element of the axiom `A`.
    ElemA,
    Other,
}

/// Axioms over which [`random_pi_code`] builds its types.
pub const PI_PRELUDE: &str = "\
axiom A : U 1.
axiom B : U 1.
axiom P : Prop.
axiom Q : Prop.
axiom F : A -> U 1.
axiom a : A.
";

/// A random closed Π type over [`PI_PRELUDE`], already in normal form.
pub fn random_pi_code(rng: &mut impl Rng, max_depth: usize) -> RcTerm {
    let mut ctx = Vec::new();
    let dom = random_code(rng, &mut ctx, max_depth.saturating_sub(1));
    push_bound(&mut ctx, &dom);
    let cod = random_code(rng, &mut ctx, max_depth.saturating_sub(1));
    Term::pi(dom, cod)
}

fn push_bound(ctx: &mut Vec<Bound>, dom: &Term) {
    ctx.push(match dom {
        Term::Univ(l) => Bound::Type(l.0),
        Term::Const(c) if &**c == "A" => Bound::ElemA,
        _ => Bound::Other,
    });
}

fn random_code(rng: &mut impl Rng, ctx: &mut Vec<Bound>, max_depth: usize) -> RcTerm {
    let index_of = |ctx: &[Bound], want: &dyn Fn(Bound) -> bool| -> Vec<usize> {
        ctx.iter().rev().enumerate().filter(|(_, b)| want(**b)).map(|(i, _)| i).collect()
    };
    if max_depth > 0 && rng.gen_bool(0.45) {
        let dom = random_code(rng, ctx, max_depth - 1);
        push_bound(ctx, &dom);
        let cod = random_code(rng, ctx, max_depth - 1);
        ctx.pop();
        return Term::pi(dom, cod);
    }
    let type_vars = index_of(ctx, &|b| matches!(b, Bound::Type(_)));
    let elems = index_of(ctx, &|b| b == Bound::ElemA);
    match rng.gen_range(0..5) {
        0 => Term::univ(rng.gen_range(0..3)),
        1 => Term::constant(["A", "B", "P", "Q"][rng.gen_range(0..4)]),
        2 if !type_vars.is_empty() => Term::var(type_vars[rng.gen_range(0..type_vars.len())]),
        _ => {
            let arg = if !elems.is_empty() && rng.gen_bool(0.6) {
                Term::var(elems[rng.gen_range(0..elems.len())])
            } else {
                Term::constant("a")
            };
            Term::app(Term::constant("A"), Term::univ(1), Term::constant("F"), arg)
        }
    }
}

/// `(fun (X : U n) => X) t`, a β-redex that reduces to the code `t : U n`.
pub fn id_redex(level: u32, t: RcTerm) -> RcTerm {
    let u = Term::univ(level);
    Term::app(u.clone(), u.clone(), Term::lam(u.clone(), u, Term::var(0)), t)
}
