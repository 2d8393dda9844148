//! Text formats: a small s-expression reader with positions, parsers for
//! every document kind, derivation rendering, and the command-line tool.
//!
//! Besides ordinary `( … )` lists the reader knows braces and brackets,
//! and glues a symbol to a delimiter written directly after it, so that
//! `X{iota; perm(+{} -{}); 0}` and `perm(+{nu@0} -{})` read as single
//! items. `#` starts a comment.

pub mod cli;

use std::collections::BTreeMap;
use std::fmt;

use crate::capture::CaptureContext;
use crate::foundations::{Atom, Name, Perm, PermissionSet, Renaming};
use crate::hol::{Const, HolSignature, HolTerm, HolType, HolVar};
use crate::kernel::{Derivation, HolDerivation, PnlDerivation, Rule, Sequent};
use crate::pnl::{check_prop, sort_of, PnlProp, PnlSignature, PnlSort, PnlTerm, Unknown};
use crate::semantics::{HerbrandModel, PredSpec, Valuation};
use crate::translate::translate_signature;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Loc {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{loc}: {msg}")]
pub struct ParseError {
    pub loc: Loc,
    pub msg: String,
}

fn err<T>(loc: Loc, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { loc, msg: msg.into() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Delim {
    Paren,
    Brace,
    Bracket,
}

impl Delim {
    fn close(self) -> char {
        match self {
            Delim::Paren => ')',
            Delim::Brace => '}',
            Delim::Bracket => ']',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Sym(String, Loc),
    /// A delimited group, optionally glued to a preceding symbol.
    Group { delim: Delim, head: Option<String>, items: Vec<Sexp>, loc: Loc },
}

impl Sexp {
    pub fn loc(&self) -> Loc {
        match self {
            Sexp::Sym(_, l) | Sexp::Group { loc: l, .. } => *l,
        }
    }

    pub fn sym(&self) -> Option<&str> {
        match self {
            Sexp::Sym(s, _) => Some(s),
            _ => None,
        }
    }

    /// A plain parenthesised list `(head rest…)` with a symbol head.
    pub fn list(&self) -> Option<(&str, &[Sexp])> {
        match self {
            Sexp::Group { delim: Delim::Paren, head: None, items, .. } => match items.split_first() {
                Some((Sexp::Sym(h, _), rest)) => Some((h, rest)),
                _ => None,
            },
            _ => None,
        }
    }
}

fn is_delim(c: char) -> bool {
    matches!(c, '(' | ')' | '{' | '}' | '[' | ']' | ';' | ',' | '#') || c.is_whitespace()
}

struct Reader<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    _src: &'a str,
}

impl<'a> Reader<'a> {
    fn new(src: &'a str) -> Self {
        Reader { chars: src.chars().collect(), pos: 0, line: 1, col: 1, _src: src }
    }

    fn loc(&self) -> Loc {
        Loc { line: self.line, col: self.col }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while !matches!(self.peek(), None | Some('\n')) {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn read_all(&mut self) -> Result<Vec<Sexp>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Ok(out),
                Some(c @ (')' | '}' | ']')) => return err(self.loc(), format!("unexpected '{c}'")),
                Some(_) => out.push(self.read()?),
            }
        }
    }

    fn read(&mut self) -> Result<Sexp, ParseError> {
        let loc = self.loc();
        match self.peek() {
            Some('(') => self.group(None, Delim::Paren, loc),
            Some('{') => self.group(None, Delim::Brace, loc),
            Some('[') => self.group(None, Delim::Bracket, loc),
            Some(c @ (';' | ',')) => {
                self.bump();
                Ok(Sexp::Sym(c.to_string(), loc))
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(c) = self.peek() {
                    if is_delim(c) {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                let glued = match self.peek() {
                    Some('(') => Some(Delim::Paren),
                    Some('{') => Some(Delim::Brace),
                    Some('[') => Some(Delim::Bracket),
                    _ => None,
                };
                match glued {
                    Some(d) => self.group(Some(s), d, loc),
                    None => Ok(Sexp::Sym(s, loc)),
                }
            }
            None => err(loc, "unexpected end of input"),
        }
    }

    fn group(&mut self, head: Option<String>, delim: Delim, loc: Loc) -> Result<Sexp, ParseError> {
        self.bump();
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => return err(loc, format!("unclosed group, expected '{}'", delim.close())),
                Some(c) if c == delim.close() => {
                    self.bump();
                    return Ok(Sexp::Group { delim, head, items, loc });
                }
                Some(c @ (')' | '}' | ']')) => return err(self.loc(), format!("expected '{}', found '{c}'", delim.close())),
                Some(_) => items.push(self.read()?),
            }
        }
    }
}

/// Reads every top-level item of `src`.
pub fn read_sexps(src: &str) -> Result<Vec<Sexp>, ParseError> {
    Reader::new(src).read_all()
}

/// Declarations in scope while parsing: signatures and named unknowns.
#[derive(Clone, Debug)]
pub struct Scope {
    pub sig: PnlSignature,
    pub hsig: HolSignature,
    pub unknowns: BTreeMap<String, Unknown>,
}

impl Scope {
    pub fn new(sig: PnlSignature) -> Self {
        let hsig = translate_signature(&sig).map(|e| e.hol).unwrap_or_default();
        Scope { sig, hsig, unknowns: BTreeMap::new() }
    }
}

impl Default for Scope {
    fn default() -> Self {
        Scope::new(PnlSignature::lambda_calculus())
    }
}

fn expect_len(items: &[Sexp], n: usize, what: &str, loc: Loc) -> Result<(), ParseError> {
    if items.len() == n {
        Ok(())
    } else {
        err(loc, format!("{what} takes {n} argument(s), found {}", items.len()))
    }
}

pub fn parse_atom(s: &Sexp) -> Result<Atom, ParseError> {
    let text = s.sym().ok_or_else(|| ParseError { loc: s.loc(), msg: "expected an atom".into() })?;
    atom_of_str(text).ok_or_else(|| ParseError { loc: s.loc(), msg: format!("expected an atom like nu@0, found {text}") })
}

fn atom_of_str(text: &str) -> Option<Atom> {
    let (sort, idx) = text.split_once('@')?;
    if sort.is_empty() {
        return None;
    }
    Some(Atom::new(sort, idx.parse().ok()?))
}

fn parse_index<T: std::str::FromStr>(s: &Sexp) -> Result<T, ParseError> {
    s.sym().and_then(|t| t.parse().ok()).ok_or_else(|| ParseError { loc: s.loc(), msg: "expected a number".into() })
}

fn parse_bool(s: &Sexp) -> Result<bool, ParseError> {
    match s.sym() {
        Some("0") => Ok(false),
        Some("1") => Ok(true),
        _ => err(s.loc(), "expected 0 or 1"),
    }
}

pub fn parse_sort(scope: &Scope, s: &Sexp) -> Result<PnlSort, ParseError> {
    if let Some(n) = s.sym() {
        return scope.sig.sort_named(n).ok_or_else(|| ParseError { loc: s.loc(), msg: format!("undeclared sort {n}") });
    }
    match s.list() {
        Some(("tuple", xs)) => Ok(PnlSort::Tuple(xs.iter().map(|x| parse_sort(scope, x)).collect::<Result<_, _>>()?)),
        Some(("abs", [n, body])) => match n.sym() {
            Some(nu) if scope.sig.names.contains(nu) => Ok(PnlSort::abs(&nu.into(), parse_sort(scope, body)?)),
            _ => err(n.loc(), "expected a name sort"),
        },
        _ => err(s.loc(), "expected a sort"),
    }
}

fn parse_sort_decl(names: &[Name], bases: &[Name], s: &Sexp) -> Result<PnlSort, ParseError> {
    let mut sig = PnlSignature::new();
    names.iter().for_each(|n| {
        sig.add_name_sort(n);
    });
    bases.iter().for_each(|n| {
        sig.add_base_sort(n);
    });
    parse_sort(&Scope { sig, hsig: HolSignature::new(), unknowns: BTreeMap::new() }, s)
}

pub fn parse_hol_type(s: &Sexp) -> Result<HolType, ParseError> {
    if let Some(n) = s.sym() {
        return Ok(HolType::base(n));
    }
    match s.list() {
        Some(("tuple", xs)) => Ok(HolType::Tuple(xs.iter().map(parse_hol_type).collect::<Result<_, _>>()?)),
        Some(("->", [a, b])) => Ok(HolType::arrow(parse_hol_type(a)?, parse_hol_type(b)?)),
        _ => err(s.loc(), "expected a type"),
    }
}

fn atoms_in(items: &[Sexp]) -> Result<Vec<Atom>, ParseError> {
    items.iter().filter(|x| x.sym() != Some(",")).map(parse_atom).collect()
}

pub fn parse_permission_set(s: &Sexp) -> Result<PermissionSet, ParseError> {
    match s {
        Sexp::Group { delim: Delim::Paren, head: Some(h), items, loc } if h == "perm" => {
            let mut plus = Vec::new();
            let mut minus = Vec::new();
            for it in items {
                match it {
                    Sexp::Group { delim: Delim::Brace, head: Some(h), items, .. } if h == "+" => plus = atoms_in(items)?,
                    Sexp::Group { delim: Delim::Brace, head: Some(h), items, .. } if h == "-" => minus = atoms_in(items)?,
                    other => return err(other.loc(), "expected +{…} or -{…}"),
                }
            }
            let _ = loc;
            Ok(PermissionSet::new(plus, minus))
        }
        other => err(other.loc(), "expected a permission set perm(+{…} -{…})"),
    }
}

/// `X{sort; perm(…); index}` or a declared name.
pub fn parse_unknown(scope: &Scope, s: &Sexp) -> Result<Unknown, ParseError> {
    match s {
        Sexp::Group { delim: Delim::Brace, head: Some(h), items, loc } if h == "X" => {
            let parts: Vec<&Sexp> = items.iter().filter(|x| x.sym() != Some(";")).collect();
            if parts.len() != 3 {
                return err(*loc, "an unknown is X{sort; permission set; index}");
            }
            Ok(Unknown::new(parse_sort(scope, parts[0])?, parse_permission_set(parts[1])?, parse_index(parts[2])?))
        }
        Sexp::Sym(n, loc) => scope.unknowns.get(n).cloned().ok_or_else(|| ParseError { loc: *loc, msg: format!("undeclared unknown {n}") }),
        other => err(other.loc(), "expected an unknown"),
    }
}

/// Cycle notation `((a b c)(d e))`; `()` is the identity.
pub fn parse_perm(s: &Sexp) -> Result<Perm, ParseError> {
    match s {
        Sexp::Group { delim: Delim::Paren, head: None, items, loc } => {
            let cycles = items
                .iter()
                .map(|c| match c {
                    Sexp::Group { delim: Delim::Paren, head: None, items, .. } => atoms_in(items),
                    other => err(other.loc(), "expected a cycle (a b …)"),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Perm::from_cycles(&cycles).map_err(|e| ParseError { loc: *loc, msg: e.to_string() })
        }
        other => err(other.loc(), "expected a permutation in cycle notation"),
    }
}

/// `[a:=b, c:=d]`; `[]` is the identity.
pub fn parse_renaming(s: &Sexp) -> Result<Renaming, ParseError> {
    match s {
        Sexp::Group { delim: Delim::Bracket, head: None, items, loc } => {
            let mut map = BTreeMap::new();
            for it in items.iter().filter(|x| x.sym() != Some(",")) {
                let pair = it.sym().and_then(|t| t.split_once(":=")).and_then(|(a, b)| Some((atom_of_str(a)?, atom_of_str(b)?)));
                let (a, b) = pair.ok_or_else(|| ParseError { loc: it.loc(), msg: "expected a:=b".into() })?;
                map.insert(a, b);
            }
            Renaming::from_map(map).map_err(|e| ParseError { loc: *loc, msg: e.to_string() })
        }
        other => err(other.loc(), "expected a renaming [a:=b, …]"),
    }
}

/// `[a, b, …]`.
pub fn parse_context(s: &Sexp) -> Result<CaptureContext, ParseError> {
    match s {
        Sexp::Group { delim: Delim::Bracket, head: None, items, loc } => {
            CaptureContext::new(atoms_in(items)?).map_err(|e| ParseError { loc: *loc, msg: e.to_string() })
        }
        other => err(other.loc(), "expected a context [a, b, …]"),
    }
}

pub fn parse_context_str(text: &str) -> Result<CaptureContext, ParseError> {
    match read_sexps(text)?.as_slice() {
        [one] => parse_context(one),
        _ => err(Loc { line: 1, col: 1 }, "expected a single context [a, b, …]"),
    }
}

fn args_term(scope: &Scope, args: &[Sexp]) -> Result<PnlTerm, ParseError> {
    match args {
        [one] => parse_term(scope, one),
        many => Ok(PnlTerm::Tup(many.iter().map(|x| parse_term(scope, x)).collect::<Result<_, _>>()?)),
    }
}

pub fn parse_term(scope: &Scope, s: &Sexp) -> Result<PnlTerm, ParseError> {
    if let Some(text) = s.sym() {
        if let Some(a) = atom_of_str(text) {
            return Ok(PnlTerm::Atom(a));
        }
        return Ok(PnlTerm::unk(&parse_unknown(scope, s)?));
    }
    if let Sexp::Group { delim: Delim::Brace, .. } = s {
        return Ok(PnlTerm::unk(&parse_unknown(scope, s)?));
    }
    let (head, rest) = s.list().ok_or_else(|| ParseError { loc: s.loc(), msg: "expected a term".into() })?;
    match head {
        "tup" => Ok(PnlTerm::Tup(rest.iter().map(|x| parse_term(scope, x)).collect::<Result<_, _>>()?)),
        "abs" => {
            expect_len(rest, 2, "abs", s.loc())?;
            Ok(PnlTerm::abs(&parse_atom(&rest[0])?, parse_term(scope, &rest[1])?))
        }
        "sus" => {
            expect_len(rest, 2, "sus", s.loc())?;
            Ok(PnlTerm::sus(parse_perm(&rest[0])?, &parse_unknown(scope, &rest[1])?))
        }
        f if scope.sig.formers.contains_key(f) => {
            if rest.is_empty() {
                return err(s.loc(), format!("{f} needs an argument"));
            }
            Ok(PnlTerm::former(f, args_term(scope, rest)?))
        }
        other => err(s.loc(), format!("undeclared term-former {other}")),
    }
}

pub fn parse_prop(scope: &Scope, s: &Sexp) -> Result<PnlProp, ParseError> {
    if s.sym() == Some("bot") {
        return Ok(PnlProp::Bot);
    }
    let (head, rest) = s.list().ok_or_else(|| ParseError { loc: s.loc(), msg: "expected a proposition".into() })?;
    match head {
        "imp" => {
            expect_len(rest, 2, "imp", s.loc())?;
            Ok(PnlProp::imp(parse_prop(scope, &rest[0])?, parse_prop(scope, &rest[1])?))
        }
        "all" => {
            expect_len(rest, 2, "all", s.loc())?;
            Ok(PnlProp::all(&parse_unknown(scope, &rest[0])?, parse_prop(scope, &rest[1])?))
        }
        "pred" => match rest.split_first() {
            Some((p, args)) if !args.is_empty() => {
                let name = p.sym().ok_or_else(|| ParseError { loc: p.loc(), msg: "expected a predicate name".into() })?;
                if !scope.sig.preds.contains_key(name) {
                    return err(p.loc(), format!("undeclared proposition-former {name}"));
                }
                Ok(PnlProp::pred(name, args_term(scope, args)?))
            }
            _ => err(s.loc(), "pred takes a name and an argument"),
        },
        other => err(s.loc(), format!("unknown connective {other}")),
    }
}

pub fn parse_hol_var(scope: &Scope, s: &Sexp) -> Result<HolVar, ParseError> {
    if s.sym().is_some() {
        return Ok(HolVar::Atom(parse_atom(s)?));
    }
    match s.list() {
        Some(("uvar", [x, ctx])) => {
            let ctx = match ctx {
                Sexp::Group { delim: Delim::Bracket, items, .. } => atoms_in(items)?,
                other => return err(other.loc(), "expected [a, b, …]"),
            };
            Ok(HolVar::Unk(parse_unknown(scope, x)?, ctx))
        }
        Some(("pvar", [ty, i])) => Ok(HolVar::Plain(parse_hol_type(ty)?, parse_index(i)?)),
        _ => err(s.loc(), "expected a variable: an atom, (uvar X [..]) or (pvar type i)"),
    }
}

pub fn parse_hol_term(scope: &Scope, s: &Sexp) -> Result<HolTerm, ParseError> {
    if let Some(text) = s.sym() {
        return Ok(match text {
            "bot" => HolTerm::bot(),
            "imp" => HolTerm::Const(Const::Imp),
            t if atom_of_str(t).is_some() => HolTerm::Var(HolVar::Atom(parse_atom(s)?)),
            t => HolTerm::named(t),
        });
    }
    let (head, rest) = s.list().ok_or_else(|| ParseError { loc: s.loc(), msg: "expected a HOL term".into() })?;
    match head {
        "uvar" | "pvar" => Ok(HolTerm::Var(parse_hol_var(scope, s)?)),
        "lam" => {
            expect_len(rest, 2, "lam", s.loc())?;
            Ok(HolTerm::lam(parse_hol_var(scope, &rest[0])?, parse_hol_term(scope, &rest[1])?))
        }
        "app" => match rest.split_first() {
            Some((h, args)) if !args.is_empty() => {
                let args = args.iter().map(|a| parse_hol_term(scope, a)).collect::<Result<Vec<_>, _>>()?;
                Ok(HolTerm::apps(parse_hol_term(scope, h)?, args))
            }
            _ => err(s.loc(), "app takes a head and at least one argument"),
        },
        "tup" => Ok(HolTerm::Tup(rest.iter().map(|x| parse_hol_term(scope, x)).collect::<Result<_, _>>()?)),
        "allc" => {
            expect_len(rest, 1, "allc", s.loc())?;
            Ok(HolTerm::Const(Const::Forall(parse_hol_type(&rest[0])?)))
        }
        "imp" => {
            expect_len(rest, 2, "imp", s.loc())?;
            Ok(HolTerm::imp(parse_hol_term(scope, &rest[0])?, parse_hol_term(scope, &rest[1])?))
        }
        "forall" => match rest {
            [binder, body] => match binder {
                Sexp::Group { delim: Delim::Paren, head: None, items, .. } if items.len() == 3 && items[1].sym() == Some(":") => {
                    let v = parse_hol_var(scope, &items[0])?;
                    let ty = parse_hol_type(&items[2])?;
                    let body = parse_hol_term(scope, body)?;
                    Ok(HolTerm::app(HolTerm::Const(Const::Forall(ty)), HolTerm::lam(v, body)))
                }
                other => err(other.loc(), "expected (variable : type)"),
            },
            _ => err(s.loc(), "forall takes (variable : type) and a body"),
        },
        other => err(s.loc(), format!("unknown HOL form {other}")),
    }
}

fn parse_signature(s: &Sexp) -> Result<PnlSignature, ParseError> {
    let (_, rest) = s.list().ok_or_else(|| ParseError { loc: s.loc(), msg: "expected (sig …)".into() })?;
    let mut names: Vec<Name> = Vec::new();
    let mut bases: Vec<Name> = Vec::new();
    let mut sig = PnlSignature::new();
    for item in rest {
        let (h, xs) = item.list().ok_or_else(|| ParseError { loc: item.loc(), msg: "expected a signature entry".into() })?;
        let syms = |xs: &[Sexp]| {
            xs.iter()
                .map(|x| x.sym().map(Name::from).ok_or_else(|| ParseError { loc: x.loc(), msg: "expected a sort name".into() }))
                .collect::<Result<Vec<_>, _>>()
        };
        match (h, xs) {
            ("names", xs) => {
                for n in syms(xs)? {
                    sig.add_name_sort(&n);
                    names.push(n);
                }
            }
            ("bases", xs) => {
                for n in syms(xs)? {
                    sig.add_base_sort(&n);
                    bases.push(n);
                }
            }
            ("former", [f, arg, res]) => {
                let f = f.sym().ok_or_else(|| ParseError { loc: f.loc(), msg: "expected a former name".into() })?;
                let res_name = res.sym().ok_or_else(|| ParseError { loc: res.loc(), msg: "expected a base sort".into() })?;
                sig.add_former(f, parse_sort_decl(&names, &bases, arg)?, res_name);
            }
            ("pred", [p, arg]) => {
                let p = p.sym().ok_or_else(|| ParseError { loc: p.loc(), msg: "expected a predicate name".into() })?;
                sig.add_pred(p, parse_sort_decl(&names, &bases, arg)?);
            }
            (other, _) => return err(item.loc(), format!("unknown signature entry {other}")),
        }
    }
    sig.validate().map_err(|e| ParseError { loc: s.loc(), msg: e.to_string() })?;
    Ok(sig)
}

fn parse_hsig(s: &Sexp) -> Result<HolSignature, ParseError> {
    let (_, rest) = s.list().ok_or_else(|| ParseError { loc: s.loc(), msg: "expected (hsig …)".into() })?;
    let mut h = HolSignature::new();
    for item in rest {
        match item.list() {
            Some(("bases", xs)) => {
                for x in xs {
                    let n = x.sym().ok_or_else(|| ParseError { loc: x.loc(), msg: "expected a base type".into() })?;
                    h.bases.insert(n.into());
                }
            }
            Some(("const", [g, ty])) => {
                let g = g.sym().ok_or_else(|| ParseError { loc: g.loc(), msg: "expected a constant name".into() })?;
                h.consts.insert(g.into(), parse_hol_type(ty)?);
            }
            _ => return err(item.loc(), "expected (bases …) or (const name type)"),
        }
    }
    Ok(h)
}

fn parse_model(scope: &Scope, s: &Sexp) -> Result<HerbrandModel, ParseError> {
    let (_, rest) = s.list().ok_or_else(|| ParseError { loc: s.loc(), msg: "expected (model …)".into() })?;
    let mut scope = scope.clone();
    for item in rest {
        if let Some(("sig", _)) = item.list() {
            scope.sig = parse_signature(item)?;
        }
    }
    let mut m = HerbrandModel::new(&scope.sig);
    for item in rest {
        match item.list() {
            Some(("sig", _)) => {}
            Some(("pred", [p, entries @ ..])) => {
                let name = p.sym().ok_or_else(|| ParseError { loc: p.loc(), msg: "expected a predicate name".into() })?;
                let mut clauses = Vec::new();
                let mut default = false;
                for e in entries {
                    match e.list() {
                        Some(("clause", [pat, v])) => clauses.push((parse_term(&scope, pat)?, parse_bool(v)?)),
                        Some(("default", [v])) => default = parse_bool(v)?,
                        _ => return err(e.loc(), "expected (clause pattern 0|1) or (default 0|1)"),
                    }
                }
                m.set_pred(name, PredSpec::new(clauses, default)).map_err(|e| ParseError { loc: item.loc(), msg: e.to_string() })?;
            }
            _ => return err(item.loc(), "expected (sig …) or (pred P …)"),
        }
    }
    Ok(m)
}

fn parse_valuation(scope: &Scope, s: &Sexp) -> Result<Valuation, ParseError> {
    let (_, rest) = s.list().ok_or_else(|| ParseError { loc: s.loc(), msg: "expected (valuation …)".into() })?;
    let mut v = Valuation::empty();
    for item in rest {
        match item.list() {
            Some(("set", [x, t])) => {
                let x = parse_unknown(scope, x)?;
                let t = parse_term(scope, t)?;
                v.insert(&scope.sig, &x, t).map_err(|e| ParseError { loc: item.loc(), msg: e.to_string() })?;
            }
            _ => return err(item.loc(), "expected (set X term)"),
        }
    }
    Ok(v)
}

fn parse_rule_name(s: &Sexp) -> Result<&str, ParseError> {
    let n = s.sym().ok_or_else(|| ParseError { loc: s.loc(), msg: "expected a rule name".into() })?;
    let base = n.strip_prefix('h').filter(|b| ["ax", "botl", "impl", "impr", "alll", "allr"].contains(b)).unwrap_or(n);
    if ["ax", "botl", "impl", "impr", "alll", "allr"].contains(&base) {
        Ok(base)
    } else {
        err(s.loc(), format!("unknown rule {n}"))
    }
}

/// `(rule name params… (concl (left …) (right …)) children…)`.
fn parse_derivation<F, W>(
    s: &Sexp,
    formula: &impl Fn(&Sexp) -> Result<F, ParseError>,
    witness: &impl Fn(&Sexp) -> Result<W, ParseError>,
) -> Result<Derivation<F, W>, ParseError> {
    let (head, rest) = s.list().ok_or_else(|| ParseError { loc: s.loc(), msg: "expected (rule …)".into() })?;
    if head != "rule" {
        return err(s.loc(), "expected (rule …)");
    }
    let (name, rest) = rest.split_first().ok_or_else(|| ParseError { loc: s.loc(), msg: "missing rule name".into() })?;
    let name_str = parse_rule_name(name)?;
    let mut perm = Perm::id();
    let (mut left, mut right, mut idx, mut wit) = (None, None, None, None);
    let mut concl = None;
    let mut children = Vec::new();
    for item in rest {
        match item.list() {
            Some(("perm", [p])) => perm = parse_perm(p)?,
            Some(("left", [i])) => left = Some(parse_index(i)?),
            Some(("right", [i])) => right = Some(parse_index(i)?),
            Some(("idx", [i])) => idx = Some(parse_index(i)?),
            Some(("witness", [w])) => wit = Some(witness(w)?),
            Some(("concl", [l, r])) => {
                let side = |x: &Sexp, want: &str| -> Result<Vec<F>, ParseError> {
                    match x.list() {
                        Some((h, fs)) if h == want => fs.iter().map(formula).collect(),
                        _ => err(x.loc(), format!("expected ({want} …)")),
                    }
                };
                concl = Some(Sequent::new(side(l, "left")?, side(r, "right")?));
            }
            Some(("rule", _)) => children.push(parse_derivation(item, formula, witness)?),
            _ => return err(item.loc(), "expected a rule parameter, (concl …) or a child (rule …)"),
        }
    }
    let need = |x: Option<usize>, what: &str| x.ok_or_else(|| ParseError { loc: s.loc(), msg: format!("{name_str} needs ({what} i)") });
    let rule = match name_str {
        "ax" => Rule::Ax { perm, left: need(left, "left")?, right: need(right, "right")? },
        "botl" => Rule::BotL { index: need(idx, "idx")? },
        "impl" => Rule::ImpL { index: need(idx, "idx")? },
        "impr" => Rule::ImpR { index: need(idx, "idx")? },
        "allr" => Rule::AllR { index: need(idx, "idx")? },
        _ => Rule::AllL {
            index: need(idx, "idx")?,
            witness: wit.ok_or_else(|| ParseError { loc: s.loc(), msg: "alll needs (witness t)".into() })?,
        },
    };
    if children.len() != rule.arity() {
        return err(s.loc(), format!("{name_str} has {} premise(s), found {}", rule.arity(), children.len()));
    }
    let concl = concl.ok_or_else(|| ParseError { loc: s.loc(), msg: "missing (concl (left …) (right …))".into() })?;
    Ok(Derivation::new(rule, concl, children))
}

pub fn parse_pnl_derivation(scope: &Scope, s: &Sexp) -> Result<PnlDerivation, ParseError> {
    parse_derivation(s, &|x| parse_prop(scope, x), &|x| parse_term(scope, x))
}

pub fn parse_hol_derivation(scope: &Scope, s: &Sexp) -> Result<HolDerivation, ParseError> {
    parse_derivation(s, &|x| parse_hol_term(scope, x), &|x| parse_hol_term(scope, x))
}

/// What a document is expected to contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocKind {
    Signature,
    Term,
    Prop,
    Hol,
    PnlDerivation,
    HolDerivation,
    Model,
    Valuation,
}

impl DocKind {
    fn head(self) -> &'static str {
        match self {
            DocKind::Signature => "sig",
            DocKind::Term => "term",
            DocKind::Prop => "prop",
            DocKind::Hol => "hol",
            DocKind::PnlDerivation | DocKind::HolDerivation => "rule",
            DocKind::Model => "model",
            DocKind::Valuation => "valuation",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Payload {
    Signature,
    Term(PnlTerm),
    Prop(PnlProp),
    Hol(HolTerm),
    PnlDerivation(PnlDerivation),
    HolDerivation(HolDerivation),
    Model(HerbrandModel),
    Valuation(Valuation),
}

#[derive(Clone, Debug)]
pub struct Document {
    pub scope: Scope,
    pub loc: Loc,
    pub payload: Payload,
}

/// Collects declarations in order, then returns the forms that are not
/// declarations.
fn declarations(scope: &mut Scope, forms: Vec<Sexp>) -> Result<Vec<Sexp>, ParseError> {
    let mut rest = Vec::new();
    let mut explicit_hsig = false;
    for f in forms {
        match f.list() {
            Some(("sig", _)) => {
                scope.sig = parse_signature(&f)?;
                if !explicit_hsig {
                    scope.hsig = translate_signature(&scope.sig).map(|e| e.hol).map_err(|e| ParseError { loc: f.loc(), msg: e.to_string() })?;
                }
            }
            Some(("hsig", _)) => {
                scope.hsig = parse_hsig(&f)?;
                explicit_hsig = true;
            }
            Some(("unknown", [n, sort, pmss, idx])) => {
                let n = n.sym().ok_or_else(|| ParseError { loc: n.loc(), msg: "expected a name".into() })?.to_string();
                let x = Unknown::new(parse_sort(scope, sort)?, parse_permission_set(pmss)?, parse_index(idx)?);
                scope.unknowns.insert(n, x);
            }
            Some(("unknown", _)) => return err(f.loc(), "expected (unknown Name sort perm(+{…} -{…}) index)"),
            _ => rest.push(f),
        }
    }
    Ok(rest)
}

/// Parses a document of the given kind, starting from `base` for anything
/// the text does not declare itself.
pub fn parse_document_in(text: &str, kind: DocKind, base: &Scope) -> Result<Document, ParseError> {
    let mut scope = base.clone();
    let forms = declarations(&mut scope, read_sexps(text)?)?;
    if kind == DocKind::Signature {
        return Ok(Document { scope, loc: Loc { line: 1, col: 1 }, payload: Payload::Signature });
    }
    let form = forms
        .iter()
        .find(|f| f.list().map(|(h, _)| h == kind.head()).unwrap_or(false))
        .ok_or_else(|| ParseError { loc: Loc { line: 1, col: 1 }, msg: format!("no ({} …) form found", kind.head()) })?;
    let loc = form.loc();
    let one = |what: &str| -> Result<&Sexp, ParseError> {
        match form.list() {
            Some((_, [x])) => Ok(x),
            _ => err(loc, format!("({what} …) takes exactly one item")),
        }
    };
    let payload = match kind {
        DocKind::Signature => Payload::Signature,
        DocKind::Term => {
            let t = parse_term(&scope, one("term")?)?;
            sort_of(&scope.sig, &t).map_err(|e| ParseError { loc, msg: e.to_string() })?;
            Payload::Term(t)
        }
        DocKind::Prop => {
            let p = parse_prop(&scope, one("prop")?)?;
            check_prop(&scope.sig, &p).map_err(|e| ParseError { loc, msg: e.to_string() })?;
            Payload::Prop(p)
        }
        DocKind::Hol => Payload::Hol(parse_hol_term(&scope, one("hol")?)?),
        DocKind::PnlDerivation => Payload::PnlDerivation(parse_pnl_derivation(&scope, form)?),
        DocKind::HolDerivation => Payload::HolDerivation(parse_hol_derivation(&scope, form)?),
        DocKind::Model => Payload::Model(parse_model(&scope, form)?),
        DocKind::Valuation => Payload::Valuation(parse_valuation(&scope, form)?),
    };
    Ok(Document { scope, loc, payload })
}

pub fn parse_document(text: &str, kind: DocKind) -> Result<Document, ParseError> {
    parse_document_in(text, kind, &Scope::default())
}

/// The first of `kinds` present in the text.
pub fn parse_any(text: &str, kinds: &[DocKind], base: &Scope) -> Result<Document, ParseError> {
    let forms = read_sexps(text)?;
    for k in kinds {
        if forms.iter().any(|f| f.list().map(|(h, _)| h == k.head()).unwrap_or(false)) {
            return parse_document_in(text, *k, base);
        }
    }
    let names: Vec<String> = kinds.iter().map(|k| format!("({} …)", k.head())).collect();
    err(Loc { line: 1, col: 1 }, format!("expected one of {}", names.join(", ")))
}

/// Renders a derivation in the input grammar, one rule per line.
/// `hol` selects the `h`-prefixed rule names.
pub fn render_derivation<F: fmt::Display, W: fmt::Display>(d: &Derivation<F, W>, hol: bool) -> String {
    let mut out = String::new();
    render_into(d, hol, 0, &mut out);
    out
}

fn render_into<F: fmt::Display, W: fmt::Display>(d: &Derivation<F, W>, hol: bool, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    let params = match &d.rule {
        Rule::Ax { perm, left, right } if perm.is_id() => format!("(left {left}) (right {right})"),
        Rule::Ax { perm, left, right } => format!("(perm {perm}) (left {left}) (right {right})"),
        Rule::BotL { index } | Rule::ImpL { index } | Rule::ImpR { index } | Rule::AllR { index } => format!("(idx {index})"),
        Rule::AllL { index, witness } => format!("(idx {index}) (witness {witness})"),
    };
    let side = |xs: &[F]| xs.iter().map(|x| format!(" {x}")).collect::<String>();
    out.push_str(&format!(
        "{pad}(rule {} {params}\n{pad}  (concl (left{}) (right{}))",
        d.rule.name(hol),
        side(&d.concl.left),
        side(&d.concl.right)
    ));
    for c in &d.children {
        out.push('\n');
        render_into(c, hol, indent + 1, out);
    }
    out.push(')');
}
