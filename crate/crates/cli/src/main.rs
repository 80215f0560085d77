use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use weaken_core::classical::{embed_open, erase_term, parse_classical};
use weaken_core::engine;
use weaken_core::laws::{self, SuiteConfig};
use weaken_core::parse::{parse_ctx, parse_subst_chain, parse_term_annotated, parse_ty};
use weaken_core::print::print_ctx;
use weaken_core::typeck::{elaborate_instantiation, elaborate_subst_chain, elaborate_terms};
use weaken_core::{Ctx, Error, TraceStep, Ty, TypedSubst, TypedTerm, DEFAULT_STEP_LIMIT};

/// Terms, substitutions and normalization for the lambda calculus with
/// explicit weakening.
///
/// Every TERM, SUBST or CLASSICAL argument may also be the path of a file
/// holding it. Contexts and types left out are inferred, with anything
/// undetermined taken to be N.
#[derive(Parser)]
#[command(name = "weaken", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Typing {
    /// Context of the term, e.g. "[N, N -> N]" (rightmost is `#`)
    #[arg(long)]
    ctx: Option<String>,
    /// Type of the term
    #[arg(long)]
    ty: Option<String>,
}

#[derive(Args)]
struct Output {
    /// Print one JSON document instead of plain text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Typecheck a term, or with --subst a chain of substitutions
    Check {
        input: String,
        /// Treat INPUT as `s ; t ; ...`; --ctx is then the target of the first
        #[arg(long)]
        subst: bool,
        /// Source context of the last substitution
        #[arg(long)]
        src: Option<String>,
        #[command(flatten)]
        typing: Typing,
        #[command(flatten)]
        out: Output,
    },
    /// Instantiate TERM with each substitution in turn
    Subst {
        term: String,
        /// One or more substitutions, applied left to right; `;` also separates
        #[arg(required = true)]
        substs: Vec<String>,
        /// Compose the substitutions first and instantiate once
        #[arg(long)]
        fuse: bool,
        /// Source context of the last substitution
        #[arg(long)]
        src: Option<String>,
        #[command(flatten)]
        typing: Typing,
        #[command(flatten)]
        out: Output,
    },
    /// Compose substitutions: the result applies the first, then the rest
    Compose {
        #[arg(required = true)]
        substs: Vec<String>,
        /// Target context of the first substitution
        #[arg(long)]
        ctx: Option<String>,
        /// Source context of the last substitution
        #[arg(long)]
        src: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Normalize TERM to its weakening-canonical normal form
    Normalize {
        term: String,
        #[arg(long, default_value_t = DEFAULT_STEP_LIMIT, value_parser = step_limit)]
        step_limit: usize,
        #[command(flatten)]
        typing: Typing,
        #[command(flatten)]
        out: Output,
    },
    /// Print the rewrite steps of an instantiation, or of normalization when
    /// no substitution is given, as JSON lines
    Trace {
        term: String,
        substs: Vec<String>,
        #[arg(long)]
        src: Option<String>,
        #[arg(long, default_value_t = DEFAULT_STEP_LIMIT, value_parser = step_limit)]
        step_limit: usize,
        #[command(flatten)]
        typing: Typing,
    },
    /// Translate a term to numbered de Bruijn syntax
    Erase {
        term: String,
        #[command(flatten)]
        typing: Typing,
        #[command(flatten)]
        out: Output,
    },
    /// Translate numbered de Bruijn syntax back, weakening only variables
    Embed {
        classical: String,
        #[command(flatten)]
        typing: Typing,
        #[command(flatten)]
        out: Output,
    },
    /// Succeed iff both terms erase to the same numbered term
    Equiv {
        left: String,
        right: String,
        #[command(flatten)]
        typing: Typing,
        #[command(flatten)]
        out: Output,
    },
    /// Run the law suites on generated inputs
    Props {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        /// Term size bound for the generator
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u64).range(1..))]
        size: u64,
        /// Run only these laws (repeatable)
        #[arg(long = "law")]
        laws: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
}

fn step_limit(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

enum Failure {
    Domain(Error),
    Io(String),
    Rejected,
    Counterexample,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Domain(e)
    }
}

impl From<weaken_core::TypeError> for Failure {
    fn from(e: weaken_core::TypeError) -> Failure {
        Failure::Domain(e.into())
    }
}

impl From<weaken_core::SyntaxError> for Failure {
    fn from(e: weaken_core::SyntaxError) -> Failure {
        Failure::Domain(e.into())
    }
}

type Run = Result<(), Failure>;

/// Reads `arg` as a file when it names one, otherwise takes it literally.
fn source(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| Failure::Io(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn opt_ctx(arg: &Option<String>) -> Result<Option<Ctx>, Failure> {
    arg.as_deref()
        .map(|s| Ok(parse_ctx(&source(s)?)?))
        .transpose()
}

fn opt_ty(arg: &Option<String>) -> Result<Option<Ty>, Failure> {
    arg.as_deref()
        .map(|s| Ok(parse_ty(&source(s)?)?))
        .transpose()
}

fn chain(args: &[String]) -> Result<Vec<weaken_core::Annotated<weaken_core::Subst>>, Failure> {
    let mut out = Vec::new();
    for a in args {
        out.extend(parse_subst_chain(&source(a)?)?);
    }
    Ok(out)
}

fn terms(args: &[&str], typing: &Typing) -> Result<Vec<TypedTerm>, Failure> {
    let parsed = args
        .iter()
        .map(|a| Ok(parse_term_annotated(&source(a)?)?))
        .collect::<Result<Vec<_>, Failure>>()?;
    let ctx = opt_ctx(&typing.ctx)?;
    let ty = opt_ty(&typing.ty)?;
    Ok(elaborate_terms(&parsed, ctx.as_ref(), ty.as_ref())?)
}

fn term_json(m: &TypedTerm) -> Value {
    json!({
        "term": m.term().to_string(),
        "ctx": print_ctx(m.ctx()),
        "ty": m.ty().to_string(),
        "judgement": m.to_string(),
    })
}

fn subst_json(s: &TypedSubst) -> Value {
    json!({
        "subst": s.subst().to_string(),
        "src": print_ctx(s.src()),
        "dst": print_ctx(s.dst()),
        "judgement": s.to_string(),
    })
}

fn emit(out: &Output, value: Value, text: impl std::fmt::Display) {
    if out.json {
        println!("{value}");
    } else {
        println!("{text}");
    }
}

fn compose_all(substs: &[TypedSubst]) -> Result<TypedSubst, Failure> {
    let (first, rest) = substs.split_first().ok_or(Failure::Rejected)?;
    let mut acc = first.clone();
    for s in rest {
        acc = engine::compose(&acc, s)?;
    }
    Ok(acc)
}

fn trace_line(step: &TraceStep) {
    println!("{}", serde_json::to_string(step).expect("trace steps serialize"));
}

fn run(cli: Cli) -> Run {
    match cli.command {
        Command::Check {
            input,
            subst,
            src,
            typing,
            out,
        } => {
            if subst {
                let ctx = opt_ctx(&typing.ctx)?;
                let src = opt_ctx(&src)?;
                let typed = elaborate_subst_chain(&chain(&[input])?, ctx.as_ref(), src.as_ref())?;
                let text: Vec<String> = typed.iter().map(|s| s.to_string()).collect();
                let docs: Vec<Value> = typed.iter().map(subst_json).collect();
                emit(&out, Value::Array(docs), text.join("\n"));
            } else {
                let m = terms(&[&input], &typing)?.remove(0);
                emit(&out, term_json(&m), &m);
            }
        }
        Command::Subst {
            term,
            substs,
            fuse,
            src,
            typing,
            out,
        } => {
            let (m, chain) = instantiation(&term, &substs, &src, &typing)?;
            let result = if fuse {
                engine::instantiate(&m, &compose_all(&chain)?)?
            } else {
                let mut acc = m;
                for s in &chain {
                    acc = engine::instantiate(&acc, s)?;
                }
                acc
            };
            emit(&out, term_json(&result), result.term());
        }
        Command::Compose {
            substs,
            ctx,
            src,
            out,
        } => {
            let ctx = opt_ctx(&ctx)?;
            let src = opt_ctx(&src)?;
            let typed = elaborate_subst_chain(&chain(&substs)?, ctx.as_ref(), src.as_ref())?;
            let result = compose_all(&typed)?;
            emit(&out, subst_json(&result), result.subst());
        }
        Command::Normalize {
            term,
            step_limit,
            typing,
            out,
        } => {
            let m = terms(&[&term], &typing)?.remove(0);
            let result = engine::normalize(&m, step_limit)?;
            emit(&out, term_json(&result), result.term());
        }
        Command::Trace {
            term,
            substs,
            src,
            step_limit,
            typing,
        } => {
            let mut sink = Vec::new();
            let result = if substs.is_empty() {
                let m = terms(&[&term], &typing)?.remove(0);
                engine::normalize_traced(&m, step_limit, &mut sink)
            } else {
                let (m, chain) = instantiation(&term, &substs, &src, &typing)?;
                chain
                    .iter()
                    .try_fold(m, |acc, s| engine::instantiate_traced(&acc, s, &mut sink))
            };
            // steps taken before a failure are still worth seeing
            sink.iter().for_each(trace_line);
            let result = result?;
            println!("{}", json!({ "result": result.term().to_string() }));
        }
        Command::Erase { term, typing, out } => {
            let m = terms(&[&term], &typing)?.remove(0);
            let t = erase_term(&m);
            emit(&out, json!({ "classical": t.to_string(), "ctx": print_ctx(m.ctx()) }), t);
        }
        Command::Embed {
            classical,
            typing,
            out,
        } => {
            let t = parse_classical(&source(&classical)?)?;
            let ctx = opt_ctx(&typing.ctx)?;
            let ty = opt_ty(&typing.ty)?;
            let result = embed_open(&t, ctx.as_ref(), ty.as_ref())?;
            emit(&out, term_json(&result), result.term());
        }
        Command::Equiv {
            left,
            right,
            typing,
            out,
        } => {
            let pair = terms(&[&left, &right], &typing)?;
            let (l, r) = (erase_term(&pair[0]), erase_term(&pair[1]));
            let same = l == r;
            let verdict = if same { "equivalent" } else { "not equivalent" };
            emit(
                &out,
                json!({ "equivalent": same, "left": l.to_string(), "right": r.to_string() }),
                format!("{verdict}: {l} {} {r}", if same { "=" } else { "/=" }),
            );
            if !same {
                return Err(Failure::Rejected);
            }
        }
        Command::Props {
            seed,
            cases,
            size,
            laws: selected,
            out,
        } => {
            let cfg = SuiteConfig {
                seed,
                cases,
                size: size as usize,
            };
            let names: Vec<&str> = if selected.is_empty() {
                laws::LAWS.to_vec()
            } else {
                selected.iter().map(String::as_str).collect()
            };
            let report = laws::run_laws(&cfg, &names)?;
            if out.json {
                println!("{}", serde_json::to_string(&report).expect("reports serialize"));
            } else {
                print!("{}", report.render());
            }
            if !report.passed() {
                return Err(Failure::Counterexample);
            }
        }
    }
    Ok(())
}

fn instantiation(
    term: &str,
    substs: &[String],
    src: &Option<String>,
    typing: &Typing,
) -> Result<(TypedTerm, Vec<TypedSubst>), Failure> {
    let m = parse_term_annotated(&source(term)?)?;
    let chain = chain(substs)?;
    let ctx = opt_ctx(&typing.ctx)?;
    let ty = opt_ty(&typing.ty)?;
    let src = opt_ctx(src)?;
    Ok(elaborate_instantiation(
        &m,
        ctx.as_ref(),
        ty.as_ref(),
        &chain,
        src.as_ref(),
    )?)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Rejected) => ExitCode::from(1),
        Err(Failure::Counterexample) => ExitCode::from(3),
    }
}
