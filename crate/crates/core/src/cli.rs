//! The `ttk` command line.
//!
//! Exit codes: 0 success (or `equal`), 1 type error, 2 parse or input error,
//! 3 `conv` arguments at incompatible types, 4 `not-equal`.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::global::GlobalEnv;
use crate::nbe::{self, eval, quote, quote_type, sort_of, Value};
use crate::parser::{parse_file, parse_term, pretty, pretty_type, ParseError, RawTerm};
use crate::syntax::RcTerm;
use crate::typecheck::{check_decl, infer, TypeError, TypingContext};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TYPE_ERROR: i32 = 1;
pub const EXIT_PARSE_ERROR: i32 = 2;
pub const EXIT_INCOMPATIBLE: i32 = 3;
pub const EXIT_NOT_EQUAL: i32 = 4;

#[derive(Debug, Clone, Parser)]
#[command(name = "ttk", version, about = "Check, normalize and compare terms of a small dependent type theory")]
pub struct Invocation {
    #[command(subcommand)]
    pub command: Command,
    /// Suppress the success summary of `check` and the verdict of `conv`.
    #[arg(short, long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Type-check declaration files, in order, into one global scope.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Print the normal form of an expression.
    Nf {
        #[arg(short = 'f', long = "file")]
        files: Vec<PathBuf>,
        #[arg(short = 'e', long = "expr")]
        expr: String,
        /// Print the fully annotated core form.
        #[arg(long)]
        annotated: bool,
    },
    /// Decide whether two expressions are convertible.
    Conv {
        #[arg(short = 'f', long = "file")]
        files: Vec<PathBuf>,
        #[arg(short = 'e', long = "expr", num_args = 1, required = true)]
        exprs: Vec<String>,
    },
    /// Print the normal form of an expression's type, and that type's sort.
    Infer {
        #[arg(short = 'f', long = "file")]
        files: Vec<PathBuf>,
        #[arg(short = 'e', long = "expr")]
        expr: String,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stderr: String) -> Outcome {
        Outcome { code, stdout: String::new(), stderr }
    }
}

fn parse_diagnostic(source: &str, err: &ParseError) -> String {
    format!("{source}:{}: error: {}\n", err.span, err.message)
}

fn type_diagnostic(source: &str, fallback: crate::parser::Span, err: &TypeError) -> String {
    format!("{source}:{}: error: {err}\n", err.span.unwrap_or(fallback))
}

/// Parse and check `files` into a fresh global environment.
pub fn load_files(files: &[PathBuf]) -> Result<GlobalEnv, Outcome> {
    let mut globals = GlobalEnv::new();
    for path in files {
        let source = path.display().to_string();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Outcome::fail(EXIT_PARSE_ERROR, format!("{source}: error: {e}\n")))?;
        load_source(&mut globals, &source, &text)?;
    }
    Ok(globals)
}

/// Parse and check one file's text into `globals`.
pub fn load_source(globals: &mut GlobalEnv, source: &str, text: &str) -> Result<usize, Outcome> {
    let decls = parse_file(text).map_err(|e| Outcome::fail(EXIT_PARSE_ERROR, parse_diagnostic(source, &e)))?;
    for decl in &decls {
        check_decl(globals, decl)
            .map_err(|e| Outcome::fail(EXIT_TYPE_ERROR, type_diagnostic(source, decl.span, &e)))?;
    }
    Ok(decls.len())
}

fn elaborate(globals: &GlobalEnv, source: &str, text: &str) -> Result<(RcTerm, Value), Outcome> {
    let raw: RawTerm =
        parse_term(text).map_err(|e| Outcome::fail(EXIT_PARSE_ERROR, parse_diagnostic(source, &e)))?;
    infer(globals, &TypingContext::new(), &raw)
        .map_err(|e| Outcome::fail(EXIT_TYPE_ERROR, type_diagnostic(source, raw.span, &e)))
}

pub fn run(invocation: &Invocation) -> Outcome {
    match run_inner(invocation) {
        Ok(outcome) | Err(outcome) => outcome,
    }
}

fn run_inner(invocation: &Invocation) -> Result<Outcome, Outcome> {
    const NO_NAMES: &[&str] = &[];
    let quiet = invocation.quiet;
    match &invocation.command {
        Command::Check { files } => {
            let globals = load_files(files)?;
            let stdout = if quiet { String::new() } else { format!("ok: {} declarations\n", globals.len()) };
            Ok(Outcome::ok(stdout))
        }
        Command::Nf { files, expr, annotated } => {
            let globals = load_files(files)?;
            let (core, ty) = elaborate(&globals, "<expr>", expr)?;
            let value = eval(&globals, &nbe::Env::new(), &core);
            let normal = quote(&globals, 0, &ty, &value);
            Ok(Outcome::ok(format!("{}\n", pretty(&normal, NO_NAMES, *annotated))))
        }
        Command::Infer { files, expr } => {
            let globals = load_files(files)?;
            let (_, ty) = elaborate(&globals, "<expr>", expr)?;
            let sort = sort_of(&globals, &ty, 0);
            let ty_code = quote_type(&globals, 0, &ty);
            Ok(Outcome::ok(format!("type: {}\nsort: {sort}\n", pretty_type(&ty_code, NO_NAMES))))
        }
        Command::Conv { files, exprs } => {
            if exprs.len() != 2 {
                return Err(Outcome::fail(
                    EXIT_PARSE_ERROR,
                    format!("error: conv takes exactly two expressions, got {}\n", exprs.len()),
                ));
            }
            let globals = load_files(files)?;
            let (left, left_ty) = elaborate(&globals, "<expr 1>", &exprs[0])?;
            let (right, right_ty) = elaborate(&globals, "<expr 2>", &exprs[1])?;
            let at = if nbe::subtype(&globals, 0, &left_ty, &right_ty) {
                left_ty
            } else if nbe::subtype(&globals, 0, &right_ty, &left_ty) {
                right_ty
            } else {
                let mut msg = String::from("error: the expressions have incompatible types\n");
                let show = |ty: &Value| pretty_type(&quote_type(&globals, 0, ty), NO_NAMES);
                writeln!(msg, "  first:  {}", show(&left_ty)).unwrap();
                writeln!(msg, "  second: {}", show(&right_ty)).unwrap();
                return Err(Outcome::fail(EXIT_INCOMPATIBLE, msg));
            };
            let env = nbe::Env::new();
            let a = eval(&globals, &env, &left);
            let b = eval(&globals, &env, &right);
            let equal = nbe::conv(&globals, 0, &at, &a, &b);
            let verdict = if equal { "equal" } else { "not-equal" };
            let stdout = if quiet { String::new() } else { format!("{verdict}\n") };
            Ok(Outcome {
                code: if equal { EXIT_OK } else { EXIT_NOT_EQUAL },
                stdout,
                stderr: String::new(),
            })
        }
    }
}
