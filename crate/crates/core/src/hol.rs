//! Simply-typed higher-order syntax with αβ-equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::foundations::{fresh_atom, join, Atom, AtomSet, CofinAtomSet, Name, Perm};
use crate::pnl::{PnlSort, Unknown};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum HolType {
    Base(Name),
    Tuple(Vec<HolType>),
    Arrow(Box<HolType>, Box<HolType>),
}

impl HolType {
    pub fn o() -> HolType {
        HolType::Base("o".into())
    }

    pub fn base(n: &str) -> HolType {
        HolType::Base(n.into())
    }

    pub fn arrow(a: HolType, b: HolType) -> HolType {
        HolType::Arrow(Box::new(a), Box::new(b))
    }

    /// `β₁ → … → βₙ → result`.
    pub fn curried(args: impl IntoIterator<Item = HolType>, result: HolType) -> HolType {
        let args: Vec<_> = args.into_iter().collect();
        args.into_iter().rev().fold(result, |acc, a| HolType::arrow(a, acc))
    }

    /// The image of a PNL sort: name and base sorts become bases of the
    /// same name, abstraction becomes a function space.
    pub fn of_sort(s: &PnlSort) -> HolType {
        match s {
            PnlSort::Name(n) | PnlSort::Base(n) => HolType::Base(n.clone()),
            PnlSort::Tuple(xs) => HolType::Tuple(xs.iter().map(HolType::of_sort).collect()),
            PnlSort::Abs(n, b) => HolType::arrow(HolType::Base(n.clone()), HolType::of_sort(b)),
        }
    }

    pub fn is_o(&self) -> bool {
        matches!(self, HolType::Base(n) if &**n == "o")
    }
}

impl fmt::Display for HolType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HolType::Base(n) => write!(f, "{n}"),
            HolType::Tuple(xs) if xs.is_empty() => write!(f, "(tuple)"),
            HolType::Tuple(xs) => write!(f, "(tuple {})", join(xs, " ")),
            HolType::Arrow(a, b) => write!(f, "(-> {a} {b})"),
        }
    }
}

/// Base types and named constants. `⊥`, `⇒` and `∀_β` are built in.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HolSignature {
    pub bases: BTreeSet<Name>,
    pub consts: BTreeMap<Name, HolType>,
}

impl Default for HolSignature {
    fn default() -> Self {
        HolSignature { bases: ["o".into()].into_iter().collect(), consts: BTreeMap::new() }
    }
}

impl HolSignature {
    pub fn new() -> Self {
        Self::default()
    }
}

impl fmt::Display for HolSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(hsig (bases {})", join(&self.bases, " "))?;
        for (n, ty) in &self.consts {
            write!(f, " (const {n} {ty})")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum HolVar {
    /// An atom, used directly as a variable of its name sort's base type.
    Atom(Atom),
    /// The variable `X_D`, keyed by the restricted context `D ∩ pmss(X)`.
    Unk(Unknown, Vec<Atom>),
    Plain(HolType, u32),
}

impl HolVar {
    pub fn ty(&self) -> HolType {
        match self {
            HolVar::Atom(a) => HolType::Base(a.sort.clone()),
            HolVar::Unk(x, ctx) => HolType::curried(ctx.iter().map(|a| HolType::Base(a.sort.clone())), HolType::of_sort(x.sort())),
            HolVar::Plain(ty, _) => ty.clone(),
        }
    }
}

impl fmt::Display for HolVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HolVar::Atom(a) => write!(f, "{a}"),
            HolVar::Unk(x, ctx) => write!(f, "(uvar {x} [{}])", join(ctx, ", ")),
            HolVar::Plain(ty, i) => write!(f, "(pvar {ty} {i})"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Const {
    Bot,
    Imp,
    Forall(HolType),
    Named(Name),
}

impl fmt::Display for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const::Bot => write!(f, "bot"),
            Const::Imp => write!(f, "imp"),
            Const::Forall(ty) => write!(f, "(allc {ty})"),
            Const::Named(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum HolTerm {
    Var(HolVar),
    Lam(HolVar, Box<HolTerm>),
    App(Box<HolTerm>, Box<HolTerm>),
    Tup(Vec<HolTerm>),
    Const(Const),
}

impl HolTerm {
    pub fn var(v: HolVar) -> HolTerm {
        HolTerm::Var(v)
    }

    pub fn atom(a: &Atom) -> HolTerm {
        HolTerm::Var(HolVar::Atom(a.clone()))
    }

    pub fn lam(v: HolVar, body: HolTerm) -> HolTerm {
        HolTerm::Lam(v, Box::new(body))
    }

    pub fn app(f: HolTerm, a: HolTerm) -> HolTerm {
        HolTerm::App(Box::new(f), Box::new(a))
    }

    pub fn apps(f: HolTerm, args: impl IntoIterator<Item = HolTerm>) -> HolTerm {
        args.into_iter().fold(f, HolTerm::app)
    }

    pub fn named(n: &str) -> HolTerm {
        HolTerm::Const(Const::Named(n.into()))
    }

    pub fn bot() -> HolTerm {
        HolTerm::Const(Const::Bot)
    }

    pub fn imp(p: HolTerm, q: HolTerm) -> HolTerm {
        HolTerm::apps(HolTerm::Const(Const::Imp), [p, q])
    }

    /// `∀_β λv.body` with `β` the type of `v`.
    pub fn forall(v: HolVar, body: HolTerm) -> HolTerm {
        HolTerm::app(HolTerm::Const(Const::Forall(v.ty())), HolTerm::lam(v, body))
    }

    /// Lambda over a list of atoms, outermost first.
    pub fn lams(vars: &[Atom], body: HolTerm) -> HolTerm {
        vars.iter().rev().fold(body, |acc, a| HolTerm::lam(HolVar::Atom(a.clone()), acc))
    }

    pub fn as_imp(&self) -> Option<(&HolTerm, &HolTerm)> {
        if let HolTerm::App(f, q) = self {
            if let HolTerm::App(g, p) = &**f {
                if matches!(**g, HolTerm::Const(Const::Imp)) {
                    return Some((p, q));
                }
            }
        }
        None
    }

    /// The argument `u` of `∀_β u`, with `β`.
    pub fn as_forall(&self) -> Option<(&HolType, &HolTerm)> {
        if let HolTerm::App(f, u) = self {
            if let HolTerm::Const(Const::Forall(ty)) = &**f {
                return Some((ty, u));
            }
        }
        None
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, HolTerm::Const(Const::Bot))
    }

    pub fn free_vars(&self) -> BTreeSet<HolVar> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<HolVar>, out: &mut BTreeSet<HolVar>) {
        match self {
            HolTerm::Var(v) => {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
            HolTerm::Lam(v, b) => {
                bound.push(v.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            HolTerm::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            HolTerm::Tup(xs) => xs.iter().for_each(|x| x.collect_free(bound, out)),
            HolTerm::Const(_) => {}
        }
    }

    /// Atoms occurring as free variables.
    pub fn free_atom_vars(&self) -> AtomSet {
        self.free_vars()
            .into_iter()
            .filter_map(|v| match v {
                HolVar::Atom(a) => Some(a),
                _ => None,
            })
            .collect()
    }

    /// Every variable written anywhere, bound or free.
    pub fn all_vars(&self, out: &mut BTreeSet<HolVar>) {
        match self {
            HolTerm::Var(v) => {
                out.insert(v.clone());
            }
            HolTerm::Lam(v, b) => {
                out.insert(v.clone());
                b.all_vars(out);
            }
            HolTerm::App(f, a) => {
                f.all_vars(out);
                a.all_vars(out);
            }
            HolTerm::Tup(xs) => xs.iter().for_each(|x| x.all_vars(out)),
            HolTerm::Const(_) => {}
        }
    }

    /// `π` acting on atom variables, free and bound alike.
    pub fn perm_atoms(&self, pi: &Perm) -> HolTerm {
        let pv = |v: &HolVar| match v {
            HolVar::Atom(a) => HolVar::Atom(pi.apply(a)),
            other => other.clone(),
        };
        match self {
            HolTerm::Var(v) => HolTerm::Var(pv(v)),
            HolTerm::Lam(v, b) => HolTerm::lam(pv(v), b.perm_atoms(pi)),
            HolTerm::App(f, a) => HolTerm::app(f.perm_atoms(pi), a.perm_atoms(pi)),
            HolTerm::Tup(xs) => HolTerm::Tup(xs.iter().map(|x| x.perm_atoms(pi)).collect()),
            HolTerm::Const(_) => self.clone(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            HolTerm::Var(_) | HolTerm::Const(_) => 1,
            HolTerm::Lam(_, b) => 1 + b.size(),
            HolTerm::App(f, a) => 1 + f.size() + a.size(),
            HolTerm::Tup(xs) => 1 + xs.iter().map(|x| x.size()).sum::<usize>(),
        }
    }
}

impl fmt::Display for HolTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HolTerm::Var(v) => write!(f, "{v}"),
            HolTerm::Lam(v, b) => write!(f, "(lam {v} {b})"),
            HolTerm::App(..) => {
                if let Some((ty, HolTerm::Lam(v, b))) = self.as_forall() {
                    if &v.ty() == ty {
                        return write!(f, "(forall ({v} : {ty}) {b})");
                    }
                }
                let mut args = Vec::new();
                let mut head = self;
                while let HolTerm::App(g, a) = head {
                    args.push(&**a);
                    head = g;
                }
                args.reverse();
                write!(f, "(app {head} {})", join(args, " "))
            }
            HolTerm::Tup(xs) if xs.is_empty() => write!(f, "(tup)"),
            HolTerm::Tup(xs) => write!(f, "(tup {})", join(xs, " ")),
            HolTerm::Const(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HolTypeError {
    #[error("unbound constant {0}")]
    UnboundConst(Name),
    #[error("cannot apply {fun} of type {fun_ty} to {arg} of type {arg_ty}")]
    BadApp { fun: String, fun_ty: HolType, arg: String, arg_ty: HolType },
    #[error("substitution for {var} of type {expected} by a term of type {found}")]
    SubstMismatch { var: HolVar, expected: HolType, found: HolType },
    #[error("{term} has type {found}, expected {expected}")]
    Expected { term: String, expected: HolType, found: HolType },
}

pub fn const_type(sig: &HolSignature, c: &Const) -> Result<HolType, HolTypeError> {
    let o = HolType::o();
    match c {
        Const::Bot => Ok(o),
        Const::Imp => Ok(HolType::curried([o.clone(), o.clone()], o)),
        Const::Forall(b) => Ok(HolType::arrow(HolType::arrow(b.clone(), o.clone()), o)),
        Const::Named(n) => sig.consts.get(n).cloned().ok_or_else(|| HolTypeError::UnboundConst(n.clone())),
    }
}

pub fn hol_type_of(sig: &HolSignature, t: &HolTerm) -> Result<HolType, HolTypeError> {
    match t {
        HolTerm::Var(v) => Ok(v.ty()),
        HolTerm::Lam(v, b) => Ok(HolType::arrow(v.ty(), hol_type_of(sig, b)?)),
        HolTerm::App(f, a) => {
            let fty = hol_type_of(sig, f)?;
            let aty = hol_type_of(sig, a)?;
            match &fty {
                HolType::Arrow(dom, cod) if **dom == aty => Ok((**cod).clone()),
                _ => Err(HolTypeError::BadApp { fun: f.to_string(), fun_ty: fty, arg: a.to_string(), arg_ty: aty }),
            }
        }
        HolTerm::Tup(xs) => Ok(HolType::Tuple(xs.iter().map(|x| hol_type_of(sig, x)).collect::<Result<_, _>>()?)),
        HolTerm::Const(c) => const_type(sig, c),
    }
}

/// Simultaneous capture-avoiding substitution. Binders that would capture
/// are renamed: atoms to the least fresh atom of their sort, anything else
/// to a fresh plain variable of the same type.
pub fn hol_subst_many(t: &HolTerm, sigma: &BTreeMap<HolVar, HolTerm>) -> HolTerm {
    if sigma.is_empty() {
        return t.clone();
    }
    match t {
        HolTerm::Var(v) => sigma.get(v).cloned().unwrap_or_else(|| t.clone()),
        HolTerm::App(f, a) => HolTerm::app(hol_subst_many(f, sigma), hol_subst_many(a, sigma)),
        HolTerm::Tup(xs) => HolTerm::Tup(xs.iter().map(|x| hol_subst_many(x, sigma)).collect()),
        HolTerm::Const(_) => t.clone(),
        HolTerm::Lam(v, body) => {
            let body_fv = body.free_vars();
            let inner: BTreeMap<HolVar, HolTerm> =
                sigma.iter().filter(|(k, _)| *k != v && body_fv.contains(*k)).map(|(k, u)| (k.clone(), u.clone())).collect();
            if inner.is_empty() {
                return t.clone();
            }
            let mut incoming = BTreeSet::new();
            for u in inner.values() {
                incoming.extend(u.free_vars());
            }
            if !incoming.contains(v) {
                return HolTerm::lam(v.clone(), hol_subst_many(body, &inner));
            }
            let mut avoid = incoming;
            avoid.extend(body_fv);
            avoid.extend(inner.keys().cloned());
            let fresh = fresh_var_like(v, &avoid);
            let mut renamed = inner;
            renamed.insert(v.clone(), HolTerm::Var(fresh.clone()));
            HolTerm::lam(fresh, hol_subst_many(body, &renamed))
        }
    }
}

/// A variable of the same type as `v` outside `avoid`.
pub fn fresh_var_like(v: &HolVar, avoid: &BTreeSet<HolVar>) -> HolVar {
    match v {
        HolVar::Atom(a) => {
            let taken: AtomSet = avoid
                .iter()
                .filter_map(|w| match w {
                    HolVar::Atom(b) => Some(b.clone()),
                    _ => None,
                })
                .collect();
            HolVar::Atom(fresh_atom(&a.sort, &CofinAtomSet::Finite(taken)))
        }
        other => {
            let ty = other.ty();
            (0..).map(|i| HolVar::Plain(ty.clone(), i)).find(|w| !avoid.contains(w)).expect("unbounded search")
        }
    }
}

/// `t[X::=u]`, checking that `u` has the type of `X`.
pub fn hol_subst(sig: &HolSignature, t: &HolTerm, x: &HolVar, u: &HolTerm) -> Result<HolTerm, HolTypeError> {
    let found = hol_type_of(sig, u)?;
    let expected = x.ty();
    if found != expected {
        return Err(HolTypeError::SubstMismatch { var: x.clone(), expected, found });
    }
    Ok(subst1(t, x, u))
}

/// Unchecked single substitution.
pub fn subst1(t: &HolTerm, x: &HolVar, u: &HolTerm) -> HolTerm {
    hol_subst_many(t, &[(x.clone(), u.clone())].into_iter().collect())
}

fn whnf(t: HolTerm) -> HolTerm {
    match t {
        HolTerm::App(f, a) => match whnf(*f) {
            HolTerm::Lam(v, body) => whnf(subst1(&body, &v, &a)),
            f => HolTerm::App(Box::new(f), a),
        },
        other => other,
    }
}

/// β-normal form by leftmost-outermost reduction. Callers guarantee
/// typability, which guarantees termination.
pub fn normalize(t: &HolTerm) -> HolTerm {
    match t {
        HolTerm::Lam(v, b) => HolTerm::lam(v.clone(), normalize(b)),
        HolTerm::App(f, a) => match whnf((**f).clone()) {
            HolTerm::Lam(v, body) => normalize(&subst1(&body, &v, a)),
            f => HolTerm::app(normalize(&f), normalize(a)),
        },
        HolTerm::Tup(xs) => HolTerm::Tup(xs.iter().map(normalize).collect()),
        _ => t.clone(),
    }
}

/// Type-checks, then normalizes.
pub fn beta_normalize(sig: &HolSignature, t: &HolTerm) -> Result<HolTerm, HolTypeError> {
    hol_type_of(sig, t)?;
    Ok(normalize(t))
}

/// α-equivalence by simultaneous binder correspondence.
pub fn alpha_eq_hol(t: &HolTerm, u: &HolTerm) -> bool {
    fn go<'a>(t: &'a HolTerm, u: &'a HolTerm, env: &mut Vec<(&'a HolVar, &'a HolVar)>) -> bool {
        match (t, u) {
            (HolTerm::Var(x), HolTerm::Var(y)) => {
                let lx = env.iter().rposition(|(l, _)| *l == x);
                let ly = env.iter().rposition(|(_, r)| *r == y);
                match (lx, ly) {
                    (None, None) => x == y,
                    (Some(i), Some(j)) => i == j,
                    _ => false,
                }
            }
            (HolTerm::Lam(x, b), HolTerm::Lam(y, c)) => {
                if x.ty() != y.ty() {
                    return false;
                }
                env.push((x, y));
                let r = go(b, c, env);
                env.pop();
                r
            }
            (HolTerm::App(f, a), HolTerm::App(g, b)) => go(f, g, env) && go(a, b, env),
            (HolTerm::Tup(xs), HolTerm::Tup(ys)) => xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| go(x, y, env)),
            (HolTerm::Const(c), HolTerm::Const(d)) => c == d,
            _ => false,
        }
    }
    go(t, u, &mut Vec::new())
}

/// Equality up to α and β; both sides must be typable.
pub fn alphabeta_eq(t: &HolTerm, u: &HolTerm) -> bool {
    alpha_eq_hol(&normalize(t), &normalize(u))
}

/// Type-checked [`alphabeta_eq`].
pub fn alphabeta_eq_checked(sig: &HolSignature, t: &HolTerm, u: &HolTerm) -> Result<bool, HolTypeError> {
    let a = hol_type_of(sig, t)?;
    let b = hol_type_of(sig, u)?;
    if a != b {
        return Err(HolTypeError::Expected { term: u.to_string(), expected: a, found: b });
    }
    Ok(alphabeta_eq(t, u))
}
