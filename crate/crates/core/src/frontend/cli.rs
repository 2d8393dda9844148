use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use super::{parse_any, parse_context_str, parse_document_in, render_derivation, DocKind, Document, Payload, Scope};
use crate::capture::{capture_check, capture_infer, CaptureContext};
use crate::foundations::AtomSet;
use crate::hol::{alpha_eq_hol, beta_normalize, hol_type_of};
use crate::kernel::{DerivationInput, Registry};
use crate::pnl::Syntax;
use crate::semantics::{eval_pnl_prop, eval_pnl_term, square_check, EvalConfig, HerbrandModel, SquareInput, Valuation};
use crate::translate::{translate, translate_derivation, TranslationEnv};

#[derive(Parser, Debug)]
#[command(name = "nomhol", version, about = "Permissive-nominal logic, its HOL translation, and their semantics")]
pub struct Cli {
    /// Print results as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a derivation with a registered calculus.
    Check {
        /// Calculus name: pnl-full, pnl-restricted or hol.
        #[arg(long, default_value = "pnl-restricted")]
        logic: String,
        file: PathBuf,
    },
    /// Translate a term, proposition or restricted derivation to HOL.
    Translate {
        /// Capture context, e.g. "[nu@0, nu@1]".
        #[arg(long, conflicts_with = "infer_d")]
        context: Option<String>,
        /// Use the least context that captures the input (the default
        /// when no context is given).
        #[arg(long)]
        infer_d: bool,
        /// Treat the input as a derivation.
        #[arg(long)]
        derivation: bool,
        file: PathBuf,
    },
    /// Print the least capture context of a term or proposition.
    InferD { file: PathBuf },
    /// Decide α-equivalence of two terms, propositions or HOL terms.
    Alpha { left: PathBuf, right: PathBuf },
    /// β-normalize a HOL term.
    Normalize { file: PathBuf },
    /// Evaluate a term or proposition in a Herbrand model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        valuation: Option<PathBuf>,
        /// Depth bound for quantifier domains.
        #[arg(long, env = "NOMHOL_DEPTH", default_value_t = 2)]
        depth: usize,
        file: PathBuf,
    },
    /// Evaluate directly and through the translation, and compare.
    Square {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        valuation: Option<PathBuf>,
        #[arg(long)]
        context: String,
        #[arg(long, env = "NOMHOL_DEPTH", default_value_t = 2)]
        depth: usize,
        file: PathBuf,
    },
}

/// What a command produced: exit code, human text and JSON.
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: Value,
    /// Human text goes to standard error.
    pub stderr: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { code: 0, text, json, stderr: false }
    }

    fn fail(text: String, json: Value) -> Self {
        Outcome { code: 1, text, json, stderr: false }
    }

    fn usage(msg: String) -> Self {
        Outcome { code: 2, json: json!({ "error": msg }), text: format!("error: {msg}"), stderr: true }
    }
}

fn read(path: &PathBuf) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome::usage(format!("{}: {e}", path.display())))
}

fn load(path: &PathBuf, kinds: &[DocKind], base: &Scope) -> Result<Document, Outcome> {
    let text = read(path)?;
    parse_any(&text, kinds, base).map_err(|e| Outcome::usage(format!("{}:{e}", path.display())))
}

fn load_kind(path: &PathBuf, kind: DocKind, base: &Scope) -> Result<Document, Outcome> {
    let text = read(path)?;
    parse_document_in(&text, kind, base).map_err(|e| Outcome::usage(format!("{}:{e}", path.display())))
}

fn env_of(scope: &Scope) -> Result<TranslationEnv, Outcome> {
    TranslationEnv::new(&scope.sig).map_err(|e| Outcome::usage(e.to_string()))
}

fn context_arg(text: &str) -> Result<CaptureContext, Outcome> {
    parse_context_str(text).map_err(|e| Outcome::usage(format!("--context: {e}")))
}

fn check(logic: &str, file: &PathBuf) -> Result<Outcome, Outcome> {
    let registry = Registry::default();
    let calc = registry
        .get(logic)
        .ok_or_else(|| Outcome::usage(format!("unknown logic {logic}; available: {}", registry.names().join(", "))))?;
    let kind = if logic == "hol" { DocKind::HolDerivation } else { DocKind::PnlDerivation };
    let doc = load_kind(file, kind, &Scope::default())?;
    let verdict = match &doc.payload {
        Payload::PnlDerivation(d) => calc.check(&DerivationInput::Pnl(&doc.scope.sig, d)),
        Payload::HolDerivation(d) => calc.check(&DerivationInput::Hol(&doc.scope.hsig, d)),
        _ => unreachable!("load_kind returns the requested kind"),
    };
    Ok(match verdict {
        Ok(()) => Outcome::ok(format!("accepted ({logic})"), json!({ "logic": logic, "accepted": true })),
        Err(r) => Outcome {
            stderr: true,
            ..Outcome::fail(
                r.to_string(),
                json!({ "logic": logic, "accepted": false, "path": r.path, "rule": r.rule, "reason": r.reason }),
            )
        },
    })
}

fn inferred(doc: &Document) -> CaptureContext {
    let atoms = match &doc.payload {
        Payload::Term(t) => capture_infer(t, &AtomSet::new()),
        Payload::Prop(p) => capture_infer(p, &AtomSet::new()),
        _ => AtomSet::new(),
    };
    CaptureContext::canonical(&atoms)
}

fn translate_cmd(context: Option<&str>, derivation: bool, file: &PathBuf) -> Result<Outcome, Outcome> {
    if derivation {
        let doc = load_kind(file, DocKind::PnlDerivation, &Scope::default())?;
        let Payload::PnlDerivation(pi) = &doc.payload else { unreachable!() };
        let d = match context {
            Some(c) => context_arg(c)?,
            None => CaptureContext::canonical(&pi.concl.formulas().flat_map(|p| capture_infer(p, &AtomSet::new())).collect()),
        };
        let env = env_of(&doc.scope)?;
        return Ok(match translate_derivation(&env, pi, &d) {
            Ok((hol, cert)) => {
                let text = render_derivation(&hol, true);
                Outcome::ok(
                    format!("# translated at {} (working context {})\n{text}", cert.d, cert.d_prime),
                    json!({ "context": cert.d.to_string(), "working_context": cert.d_prime.to_string(),
                            "certificate_ok": cert.verify(), "derivation": text }),
                )
            }
            Err(e) => Outcome::fail(e.to_string(), json!({ "error": e.to_string() })),
        });
    }
    let doc = load(file, &[DocKind::Prop, DocKind::Term], &Scope::default())?;
    let d = match context {
        Some(c) => context_arg(c)?,
        None => inferred(&doc),
    };
    let env = env_of(&doc.scope)?;
    let (captured, result) = match &doc.payload {
        Payload::Term(t) => (capture_check(&d, t, &AtomSet::new()), translate(&env, &d, t)),
        Payload::Prop(p) => (capture_check(&d, p, &AtomSet::new()), translate(&env, &d, p)),
        _ => unreachable!(),
    };
    let hol = result.map_err(|e| Outcome::usage(e.to_string()))?;
    let ty = hol_type_of(&env.hol, &hol).map(|t| t.to_string()).unwrap_or_else(|e| format!("ill-typed: {e}"));
    let json = json!({ "context": d.to_string(), "captured": captured, "hol": hol.to_string(), "type": ty });
    Ok(if captured {
        Outcome::ok(format!("{hol}\n# type {ty}, context {d}"), json)
    } else {
        Outcome::fail(format!("{hol}\n# not captured by {d}"), json)
    })
}

fn alpha(left: &PathBuf, right: &PathBuf) -> Result<Outcome, Outcome> {
    let kinds = [DocKind::Prop, DocKind::Term, DocKind::Hol];
    let a = load(left, &kinds, &Scope::default())?;
    let b = load(right, &kinds, &Scope::default())?;
    let equal = match (&a.payload, &b.payload) {
        (Payload::Prop(x), Payload::Prop(y)) => x.alpha_eq(y),
        (Payload::Term(x), Payload::Term(y)) => x.alpha_eq(y),
        (Payload::Hol(x), Payload::Hol(y)) => alpha_eq_hol(x, y),
        _ => return Err(Outcome::usage("the two files hold different kinds of syntax".into())),
    };
    let text = if equal { "alpha-equivalent" } else { "not alpha-equivalent" };
    let out = json!({ "alpha_equivalent": equal });
    Ok(if equal { Outcome::ok(text.into(), out) } else { Outcome::fail(text.into(), out) })
}

fn normalize(file: &PathBuf) -> Result<Outcome, Outcome> {
    let doc = load_kind(file, DocKind::Hol, &Scope::default())?;
    let Payload::Hol(t) = &doc.payload else { unreachable!() };
    let n = beta_normalize(&doc.scope.hsig, t).map_err(|e| Outcome::usage(e.to_string()))?;
    Ok(Outcome::ok(n.to_string(), json!({ "normal_form": n.to_string() })))
}

fn model_and_valuation(model: &PathBuf, valuation: Option<&PathBuf>, base: &Scope) -> Result<(HerbrandModel, Valuation), Outcome> {
    let m = load_kind(model, DocKind::Model, base)?;
    let Payload::Model(m) = m.payload else { unreachable!() };
    let scope = Scope { sig: m.sig.clone(), ..base.clone() };
    let v = match valuation {
        Some(p) => match load_kind(p, DocKind::Valuation, &scope)?.payload {
            Payload::Valuation(v) => v,
            _ => unreachable!(),
        },
        None => Valuation::empty(),
    };
    Ok((m, v))
}

fn eval(model: &PathBuf, valuation: Option<&PathBuf>, depth: usize, file: &PathBuf) -> Result<Outcome, Outcome> {
    let doc = load(file, &[DocKind::Prop, DocKind::Term], &Scope::default())?;
    let (m, v) = model_and_valuation(model, valuation, &doc.scope)?;
    let sem = |e: crate::semantics::SemError| Outcome::usage(e.to_string());
    Ok(match &doc.payload {
        Payload::Term(t) => {
            let x = eval_pnl_term(&m, &v, t).map_err(sem)?;
            Outcome::ok(x.to_string(), json!({ "value": x.to_string() }))
        }
        Payload::Prop(p) => {
            let t = eval_pnl_prop(&m, &v, p, &EvalConfig::new(depth)).map_err(sem)?;
            let bit = u8::from(t.value);
            let note = if t.exact { "" } else { " (depth-bounded)" };
            Outcome::ok(format!("{bit}{note}"), json!({ "value": bit, "exact": t.exact, "depth": depth }))
        }
        _ => unreachable!(),
    })
}

fn square(model: &PathBuf, valuation: Option<&PathBuf>, context: &str, depth: usize, file: &PathBuf) -> Result<Outcome, Outcome> {
    let doc = load(file, &[DocKind::Prop, DocKind::Term], &Scope::default())?;
    let (m, v) = model_and_valuation(model, valuation, &doc.scope)?;
    let d = context_arg(context)?;
    let env = env_of(&doc.scope)?;
    let input = match &doc.payload {
        Payload::Term(t) => SquareInput::Term(t.clone()),
        Payload::Prop(p) => SquareInput::Prop(p.clone()),
        _ => unreachable!(),
    };
    let verdict = square_check(&env, &m, &d, &v, &input, &EvalConfig::new(depth)).map_err(|e| Outcome::usage(e.to_string()))?;
    let json = json!({
        "equal": verdict.equal, "exact": verdict.exact,
        "via_hol": verdict.via_hol, "via_pnl": verdict.via_pnl, "context": d.to_string(), "depth": depth,
    });
    let text = format!(
        "{}\n  through HOL: {}\n  directly:    {}{}",
        if verdict.equal { "square commutes" } else { "square does not commute" },
        verdict.via_hol,
        verdict.via_pnl,
        if verdict.exact { "" } else { "\n  (depth-bounded)" }
    );
    Ok(if verdict.equal { Outcome::ok(text, json) } else { Outcome::fail(text, json) })
}

/// Runs one parsed command line.
pub fn execute(cli: &Cli) -> Outcome {
    let r = match &cli.command {
        Command::Check { logic, file } => check(logic, file),
        Command::Translate { context, derivation, file, .. } => translate_cmd(context.as_deref(), *derivation, file),
        Command::InferD { file } => load(file, &[DocKind::Prop, DocKind::Term], &Scope::default()).map(|doc| {
            let d = inferred(&doc);
            Outcome::ok(d.to_string(), json!({ "context": d.to_string() }))
        }),
        Command::Alpha { left, right } => alpha(left, right),
        Command::Normalize { file } => normalize(file),
        Command::Eval { model, valuation, depth, file } => eval(model, valuation.as_ref(), *depth, file),
        Command::Square { model, valuation, context, depth, file } => square(model, valuation.as_ref(), context, *depth, file),
    };
    r.unwrap_or_else(|e| e)
}

/// Parses `args`, runs the command, prints the result and returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let out = execute(&cli);
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = if cli.json {
        writeln!(std::io::stdout(), "{}", out.json)
    } else if out.stderr {
        writeln!(std::io::stderr(), "{}", out.text)
    } else {
        writeln!(std::io::stdout(), "{}", out.text)
    };
    out.code
}
