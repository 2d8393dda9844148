//! Permissive-nominal syntax: signatures, terms, propositions, the two
//! permutation actions, free atoms and unknowns, α-equivalence and level-2
//! substitution.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::foundations::{join, perm_image_set, set_subset, Atom, AtomSet, CofinAtomSet, Name, Perm, PermissionSet};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum PnlSort {
    Name(Name),
    Base(Name),
    Tuple(Vec<PnlSort>),
    Abs(Name, Box<PnlSort>),
}

impl PnlSort {
    pub fn abs(nu: &Name, body: PnlSort) -> PnlSort {
        PnlSort::Abs(nu.clone(), Box::new(body))
    }
}

impl fmt::Display for PnlSort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PnlSort::Name(n) | PnlSort::Base(n) => write!(f, "{n}"),
            PnlSort::Tuple(xs) if xs.is_empty() => write!(f, "(tuple)"),
            PnlSort::Tuple(xs) => write!(f, "(tuple {})", join(xs, " ")),
            PnlSort::Abs(n, s) => write!(f, "(abs {n} {s})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SortError {
    #[error("undeclared name sort {0}")]
    UnknownNameSort(Name),
    #[error("undeclared term-former {0}")]
    UnknownFormer(Name),
    #[error("undeclared proposition-former {0}")]
    UnknownPred(Name),
    #[error("argument of {former} has sort {found} but {expected} is required, in {subterm}")]
    Mismatch { former: Name, expected: PnlSort, found: PnlSort, subterm: String },
    #[error("signature error: {0}")]
    Signature(String),
}

/// Name sorts, base sorts, term-formers `f : (α)τ` and proposition-formers
/// `P : α`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PnlSignature {
    pub names: BTreeSet<Name>,
    pub bases: BTreeSet<Name>,
    pub formers: BTreeMap<Name, (PnlSort, Name)>,
    pub preds: BTreeMap<Name, PnlSort>,
}

impl PnlSignature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_name_sort(&mut self, n: &str) -> &mut Self {
        self.names.insert(n.into());
        self
    }

    pub fn add_base_sort(&mut self, n: &str) -> &mut Self {
        self.bases.insert(n.into());
        self
    }

    pub fn add_former(&mut self, f: &str, arg: PnlSort, result: &str) -> &mut Self {
        self.formers.insert(f.into(), (arg, result.into()));
        self
    }

    pub fn add_pred(&mut self, p: &str, arg: PnlSort) -> &mut Self {
        self.preds.insert(p.into(), arg);
        self
    }

    /// Resolves a bare sort identifier to a name or base sort.
    pub fn sort_named(&self, n: &str) -> Option<PnlSort> {
        if self.names.contains(n) {
            Some(PnlSort::Name(n.into()))
        } else if self.bases.contains(n) {
            Some(PnlSort::Base(n.into()))
        } else {
            None
        }
    }

    pub fn sort_well_formed(&self, s: &PnlSort) -> bool {
        match s {
            PnlSort::Name(n) => self.names.contains(n),
            PnlSort::Base(n) => self.bases.contains(n),
            PnlSort::Tuple(xs) => xs.iter().all(|x| self.sort_well_formed(x)),
            PnlSort::Abs(n, b) => self.names.contains(n) && self.sort_well_formed(b),
        }
    }

    /// Checks disjointness of name spaces and well-formedness of arities.
    pub fn validate(&self) -> Result<(), SortError> {
        if let Some(n) = self.names.intersection(&self.bases).next() {
            return Err(SortError::Signature(format!("{n} is both a name sort and a base sort")));
        }
        if let Some(n) = self.formers.keys().find(|f| self.preds.contains_key(*f)) {
            return Err(SortError::Signature(format!("{n} is both a term-former and a proposition-former")));
        }
        for (f, (arg, res)) in &self.formers {
            if !self.sort_well_formed(arg) || !self.bases.contains(res) {
                return Err(SortError::Signature(format!("ill-formed arity for {f}")));
            }
        }
        for (p, arg) in &self.preds {
            if !self.sort_well_formed(arg) {
                return Err(SortError::Signature(format!("ill-formed arity for {p}")));
            }
        }
        Ok(())
    }

    /// The λ-calculus signature with substitution, equality and a few test
    /// predicates.
    pub fn lambda_calculus() -> PnlSignature {
        let nu: Name = "nu".into();
        let iota = PnlSort::Base("iota".into());
        let abs = PnlSort::abs(&nu, iota.clone());
        let mut s = PnlSignature::new();
        s.add_name_sort("nu")
            .add_base_sort("iota")
            .add_former("var", PnlSort::Name(nu.clone()), "iota")
            .add_former("app", PnlSort::Tuple(vec![iota.clone(), iota.clone()]), "iota")
            .add_former("lam", abs.clone(), "iota")
            .add_former("sub", PnlSort::Tuple(vec![abs.clone(), iota.clone()]), "iota")
            .add_pred("eq", PnlSort::Tuple(vec![iota.clone(), iota.clone()]))
            .add_pred("equal", PnlSort::Tuple(vec![abs.clone(), abs.clone()]))
            .add_pred("P", iota.clone())
            .add_pred("Q", abs);
        s
    }
}

impl fmt::Display for PnlSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(sig")?;
        if !self.names.is_empty() {
            write!(f, " (names {})", join(&self.names, " "))?;
        }
        if !self.bases.is_empty() {
            write!(f, " (bases {})", join(&self.bases, " "))?;
        }
        for (n, (arg, res)) in &self.formers {
            write!(f, " (former {n} {arg} {res})")?;
        }
        for (n, arg) in &self.preds {
            write!(f, " (pred {n} {arg})")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
struct UnknownData {
    sort: PnlSort,
    pmss: PermissionSet,
    index: u32,
}

/// A level-2 variable, identified by its sort, permission set and index.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Unknown(Arc<UnknownData>);

impl Unknown {
    pub fn new(sort: PnlSort, pmss: PermissionSet, index: u32) -> Unknown {
        Unknown(Arc::new(UnknownData { sort, pmss, index }))
    }

    pub fn sort(&self) -> &PnlSort {
        &self.0.sort
    }

    pub fn pmss(&self) -> &PermissionSet {
        &self.0.pmss
    }

    pub fn index(&self) -> u32 {
        self.0.index
    }

    pub fn with_index(&self, index: u32) -> Unknown {
        Unknown::new(self.sort().clone(), self.pmss().clone(), index)
    }

    pub fn same_class(&self, other: &Unknown) -> bool {
        self.sort() == other.sort() && self.pmss() == other.pmss()
    }
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{{{}; {}; {}}}", self.sort(), self.pmss(), self.index())
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum PnlTerm {
    Atom(Atom),
    Tup(Vec<PnlTerm>),
    Former(Name, Box<PnlTerm>),
    Abs(Atom, Box<PnlTerm>),
    Sus(Perm, Unknown),
}

impl PnlTerm {
    pub fn atom(a: &Atom) -> PnlTerm {
        PnlTerm::Atom(a.clone())
    }

    pub fn former(f: &str, arg: PnlTerm) -> PnlTerm {
        PnlTerm::Former(f.into(), Box::new(arg))
    }

    pub fn abs(a: &Atom, body: PnlTerm) -> PnlTerm {
        PnlTerm::Abs(a.clone(), Box::new(body))
    }

    pub fn unk(x: &Unknown) -> PnlTerm {
        PnlTerm::Sus(Perm::id(), x.clone())
    }

    pub fn sus(pi: Perm, x: &Unknown) -> PnlTerm {
        PnlTerm::Sus(pi, x.clone())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            PnlTerm::Atom(_) => true,
            PnlTerm::Tup(xs) => xs.iter().all(|x| x.is_ground()),
            PnlTerm::Former(_, t) | PnlTerm::Abs(_, t) => t.is_ground(),
            PnlTerm::Sus(..) => false,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            PnlTerm::Atom(_) | PnlTerm::Sus(..) => 1,
            PnlTerm::Tup(xs) => 1 + xs.iter().map(|x| x.size()).sum::<usize>(),
            PnlTerm::Former(_, t) | PnlTerm::Abs(_, t) => 1 + t.size(),
        }
    }
}

fn fmt_args(f: &mut fmt::Formatter<'_>, head: &str, arg: &PnlTerm) -> fmt::Result {
    match arg {
        PnlTerm::Tup(xs) if xs.len() >= 2 => write!(f, "({head} {})", join(xs, " ")),
        _ => write!(f, "({head} {arg})"),
    }
}

impl fmt::Display for PnlTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PnlTerm::Atom(a) => write!(f, "{a}"),
            PnlTerm::Tup(xs) if xs.is_empty() => write!(f, "(tup)"),
            PnlTerm::Tup(xs) => write!(f, "(tup {})", join(xs, " ")),
            PnlTerm::Former(n, t) => fmt_args(f, n, t),
            PnlTerm::Abs(a, t) => write!(f, "(abs {a} {t})"),
            PnlTerm::Sus(p, x) if p.is_id() => write!(f, "{x}"),
            PnlTerm::Sus(p, x) => write!(f, "(sus {p} {x})"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum PnlProp {
    Bot,
    Imp(Box<PnlProp>, Box<PnlProp>),
    Pred(Name, PnlTerm),
    All(Unknown, Box<PnlProp>),
}

impl PnlProp {
    pub fn imp(p: PnlProp, q: PnlProp) -> PnlProp {
        PnlProp::Imp(Box::new(p), Box::new(q))
    }

    pub fn pred(p: &str, t: PnlTerm) -> PnlProp {
        PnlProp::Pred(p.into(), t)
    }

    pub fn all(x: &Unknown, body: PnlProp) -> PnlProp {
        PnlProp::All(x.clone(), Box::new(body))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            PnlProp::Bot | PnlProp::Pred(..) => true,
            PnlProp::Imp(p, q) => p.is_quantifier_free() && q.is_quantifier_free(),
            PnlProp::All(..) => false,
        }
    }
}

impl fmt::Display for PnlProp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PnlProp::Bot => write!(f, "bot"),
            PnlProp::Imp(p, q) => write!(f, "(imp {p} {q})"),
            PnlProp::Pred(n, t) => fmt_args(f, &format!("pred {n}"), t),
            PnlProp::All(x, p) => write!(f, "(all {x} {p})"),
        }
    }
}

/// A finite bijection on unknowns preserving sort and permission set.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Perm2 {
    map: BTreeMap<Unknown, Unknown>,
}

impl Perm2 {
    pub fn id() -> Perm2 {
        Perm2::default()
    }

    /// The swapping `(X Y)`; `None` when the classes differ.
    pub fn swap(x: &Unknown, y: &Unknown) -> Option<Perm2> {
        if !x.same_class(y) {
            return None;
        }
        let mut map = BTreeMap::new();
        if x != y {
            map.insert(x.clone(), y.clone());
            map.insert(y.clone(), x.clone());
        }
        Some(Perm2 { map })
    }

    pub fn apply(&self, x: &Unknown) -> Unknown {
        self.map.get(x).cloned().unwrap_or_else(|| x.clone())
    }
}

/// A level-2 substitution; unknowns outside the map are left alone.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PnlSubst {
    map: BTreeMap<Unknown, PnlTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubstError {
    #[error(transparent)]
    Sort(#[from] SortError),
    #[error("{term} has sort {found} but {unknown} has sort {expected}")]
    SortMismatch { unknown: Unknown, term: PnlTerm, expected: PnlSort, found: PnlSort },
    #[error("free atoms of {term} are not within the permission set of {unknown}")]
    Permission { unknown: Unknown, term: PnlTerm },
}

impl PnlSubst {
    pub fn empty() -> PnlSubst {
        PnlSubst::default()
    }

    /// Checked construction: each image must have the unknown's sort and
    /// free atoms inside its permission set.
    pub fn new(sig: &PnlSignature, map: BTreeMap<Unknown, PnlTerm>) -> Result<PnlSubst, SubstError> {
        for (x, t) in &map {
            let s = sort_of(sig, t)?;
            if &s != x.sort() {
                return Err(SubstError::SortMismatch { unknown: x.clone(), term: t.clone(), expected: x.sort().clone(), found: s });
            }
            if !set_subset(&t.free_atoms(), &x.pmss().to_set()) {
                return Err(SubstError::Permission { unknown: x.clone(), term: t.clone() });
            }
        }
        Ok(PnlSubst { map })
    }

    pub fn single(sig: &PnlSignature, x: &Unknown, t: PnlTerm) -> Result<PnlSubst, SubstError> {
        PnlSubst::new(sig, [(x.clone(), t)].into_iter().collect())
    }

    /// Construction without the invariant checks, for callers that have
    /// already established them.
    pub fn unchecked(map: BTreeMap<Unknown, PnlTerm>) -> PnlSubst {
        PnlSubst { map }
    }

    pub fn get(&self, x: &Unknown) -> Option<&PnlTerm> {
        self.map.get(x)
    }

    pub fn map(&self) -> &BTreeMap<Unknown, PnlTerm> {
        &self.map
    }

    /// Unknowns produced or consumed other than trivially.
    pub fn nontriv(&self) -> BTreeSet<Unknown> {
        let mut out = BTreeSet::new();
        for (x, t) in &self.map {
            if !t.alpha_eq(&PnlTerm::unk(x)) {
                out.insert(x.clone());
                out.extend(t.free_unknowns());
            }
        }
        out
    }
}

/// Operations shared by terms and propositions.
pub trait Syntax: Sized + Clone + fmt::Display {
    fn perm_act(&self, pi: &Perm) -> Self;
    fn perm2_act(&self, p: &Perm2) -> Self;
    fn free_atoms(&self) -> CofinAtomSet;
    fn free_unknowns(&self) -> BTreeSet<Unknown>;
    fn alpha_eq(&self, other: &Self) -> bool;
    fn subst(&self, theta: &PnlSubst) -> Self;
    /// Every atom written anywhere: binders, suspensions and leaves.
    fn mentioned_atoms(&self, out: &mut AtomSet);
    /// Every unknown written anywhere, bound or free.
    fn mentioned_unknowns(&self, out: &mut BTreeSet<Unknown>);
}

impl Syntax for PnlTerm {
    fn perm_act(&self, pi: &Perm) -> PnlTerm {
        if pi.is_id() {
            return self.clone();
        }
        match self {
            PnlTerm::Atom(a) => PnlTerm::Atom(pi.apply(a)),
            PnlTerm::Tup(xs) => PnlTerm::Tup(xs.iter().map(|x| x.perm_act(pi)).collect()),
            PnlTerm::Former(f, t) => PnlTerm::Former(f.clone(), Box::new(t.perm_act(pi))),
            PnlTerm::Abs(a, t) => PnlTerm::Abs(pi.apply(a), Box::new(t.perm_act(pi))),
            PnlTerm::Sus(p, x) => PnlTerm::Sus(pi.compose(p), x.clone()),
        }
    }

    fn perm2_act(&self, p: &Perm2) -> PnlTerm {
        match self {
            PnlTerm::Atom(_) => self.clone(),
            PnlTerm::Tup(xs) => PnlTerm::Tup(xs.iter().map(|x| x.perm2_act(p)).collect()),
            PnlTerm::Former(f, t) => PnlTerm::Former(f.clone(), Box::new(t.perm2_act(p))),
            PnlTerm::Abs(a, t) => PnlTerm::Abs(a.clone(), Box::new(t.perm2_act(p))),
            PnlTerm::Sus(pi, x) => PnlTerm::Sus(pi.clone(), p.apply(x)),
        }
    }

    fn free_atoms(&self) -> CofinAtomSet {
        match self {
            PnlTerm::Atom(a) => CofinAtomSet::singleton(a.clone()),
            PnlTerm::Tup(xs) => xs.iter().fold(CofinAtomSet::empty(), |acc, x| acc.union(&x.free_atoms())),
            PnlTerm::Former(_, t) => t.free_atoms(),
            PnlTerm::Abs(a, t) => t.free_atoms().remove(a),
            PnlTerm::Sus(p, x) => perm_image_set(p, &x.pmss().to_set()),
        }
    }

    fn free_unknowns(&self) -> BTreeSet<Unknown> {
        let mut out = BTreeSet::new();
        self.mentioned_unknowns(&mut out);
        out
    }

    fn alpha_eq(&self, other: &PnlTerm) -> bool {
        match (self, other) {
            (PnlTerm::Atom(a), PnlTerm::Atom(b)) => a == b,
            (PnlTerm::Tup(xs), PnlTerm::Tup(ys)) => xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| x.alpha_eq(y)),
            (PnlTerm::Former(f, t), PnlTerm::Former(g, u)) => f == g && t.alpha_eq(u),
            (PnlTerm::Abs(a, r), PnlTerm::Abs(b, s)) => {
                if a == b {
                    r.alpha_eq(s)
                } else {
                    a.sort == b.sort && !r.free_atoms().contains(b) && r.perm_act(&Perm::swap_same(b, a)).alpha_eq(s)
                }
            }
            (PnlTerm::Sus(p, x), PnlTerm::Sus(q, y)) => x == y && perms_agree_on(p, q, x.pmss()),
            _ => false,
        }
    }

    fn subst(&self, theta: &PnlSubst) -> PnlTerm {
        match self {
            PnlTerm::Atom(_) => self.clone(),
            PnlTerm::Tup(xs) => PnlTerm::Tup(xs.iter().map(|x| x.subst(theta)).collect()),
            PnlTerm::Former(f, t) => PnlTerm::Former(f.clone(), Box::new(t.subst(theta))),
            PnlTerm::Abs(a, t) => PnlTerm::Abs(a.clone(), Box::new(t.subst(theta))),
            PnlTerm::Sus(p, x) => match theta.get(x) {
                Some(t) => t.perm_act(p),
                None => self.clone(),
            },
        }
    }

    fn mentioned_atoms(&self, out: &mut AtomSet) {
        match self {
            PnlTerm::Atom(a) => {
                out.insert(a.clone());
            }
            PnlTerm::Tup(xs) => xs.iter().for_each(|x| x.mentioned_atoms(out)),
            PnlTerm::Former(_, t) => t.mentioned_atoms(out),
            PnlTerm::Abs(a, t) => {
                out.insert(a.clone());
                t.mentioned_atoms(out);
            }
            PnlTerm::Sus(p, x) => {
                out.extend(p.nontriv());
                out.extend(x.pmss().plus().iter().cloned());
                out.extend(x.pmss().minus().iter().cloned());
            }
        }
    }

    fn mentioned_unknowns(&self, out: &mut BTreeSet<Unknown>) {
        match self {
            PnlTerm::Atom(_) => {}
            PnlTerm::Tup(xs) => xs.iter().for_each(|x| x.mentioned_unknowns(out)),
            PnlTerm::Former(_, t) | PnlTerm::Abs(_, t) => t.mentioned_unknowns(out),
            PnlTerm::Sus(_, x) => {
                out.insert(x.clone());
            }
        }
    }
}

/// `π` and `π'` agree on every atom of `nontriv(π) ∪ nontriv(π')` inside `s`.
fn perms_agree_on(p: &Perm, q: &Perm, s: &PermissionSet) -> bool {
    p.moves().keys().chain(q.moves().keys()).filter(|a| s.contains(a)).all(|a| p.apply(a) == q.apply(a))
}

impl Syntax for PnlProp {
    fn perm_act(&self, pi: &Perm) -> PnlProp {
        if pi.is_id() {
            return self.clone();
        }
        match self {
            PnlProp::Bot => PnlProp::Bot,
            PnlProp::Imp(p, q) => PnlProp::imp(p.perm_act(pi), q.perm_act(pi)),
            PnlProp::Pred(n, t) => PnlProp::Pred(n.clone(), t.perm_act(pi)),
            PnlProp::All(x, p) => PnlProp::all(x, p.perm_act(pi)),
        }
    }

    fn perm2_act(&self, pp: &Perm2) -> PnlProp {
        match self {
            PnlProp::Bot => PnlProp::Bot,
            PnlProp::Imp(p, q) => PnlProp::imp(p.perm2_act(pp), q.perm2_act(pp)),
            PnlProp::Pred(n, t) => PnlProp::Pred(n.clone(), t.perm2_act(pp)),
            PnlProp::All(x, p) => PnlProp::all(&pp.apply(x), p.perm2_act(pp)),
        }
    }

    fn free_atoms(&self) -> CofinAtomSet {
        match self {
            PnlProp::Bot => CofinAtomSet::empty(),
            PnlProp::Imp(p, q) => p.free_atoms().union(&q.free_atoms()),
            PnlProp::Pred(_, t) => t.free_atoms(),
            PnlProp::All(_, p) => p.free_atoms(),
        }
    }

    fn free_unknowns(&self) -> BTreeSet<Unknown> {
        match self {
            PnlProp::Bot => BTreeSet::new(),
            PnlProp::Imp(p, q) => {
                let mut s = p.free_unknowns();
                s.extend(q.free_unknowns());
                s
            }
            PnlProp::Pred(_, t) => t.free_unknowns(),
            PnlProp::All(x, p) => {
                let mut s = p.free_unknowns();
                s.remove(x);
                s
            }
        }
    }

    fn alpha_eq(&self, other: &PnlProp) -> bool {
        match (self, other) {
            (PnlProp::Bot, PnlProp::Bot) => true,
            (PnlProp::Imp(p, q), PnlProp::Imp(r, s)) => p.alpha_eq(r) && q.alpha_eq(s),
            (PnlProp::Pred(n, t), PnlProp::Pred(m, u)) => n == m && t.alpha_eq(u),
            (PnlProp::All(x, p), PnlProp::All(y, q)) => {
                if x == y {
                    p.alpha_eq(q)
                } else {
                    match Perm2::swap(y, x) {
                        Some(sw) => !p.free_unknowns().contains(y) && p.perm2_act(&sw).alpha_eq(q),
                        None => false,
                    }
                }
            }
            _ => false,
        }
    }

    fn subst(&self, theta: &PnlSubst) -> PnlProp {
        match self {
            PnlProp::Bot => PnlProp::Bot,
            PnlProp::Imp(p, q) => PnlProp::imp(p.subst(theta), q.subst(theta)),
            PnlProp::Pred(n, t) => PnlProp::Pred(n.clone(), t.subst(theta)),
            PnlProp::All(x, p) => {
                let nt = theta.nontriv();
                if !nt.contains(x) {
                    return PnlProp::all(x, p.subst(theta));
                }
                let mut avoid = nt;
                avoid.extend(p.free_unknowns());
                let fresh = fresh_unknown_like(x, &avoid);
                let sw = Perm2::swap(x, &fresh).expect("same class by construction");
                PnlProp::all(&fresh, p.perm2_act(&sw).subst(theta))
            }
        }
    }

    fn mentioned_atoms(&self, out: &mut AtomSet) {
        match self {
            PnlProp::Bot => {}
            PnlProp::Imp(p, q) => {
                p.mentioned_atoms(out);
                q.mentioned_atoms(out);
            }
            PnlProp::Pred(_, t) => t.mentioned_atoms(out),
            PnlProp::All(x, p) => {
                out.extend(x.pmss().plus().iter().cloned());
                out.extend(x.pmss().minus().iter().cloned());
                p.mentioned_atoms(out);
            }
        }
    }

    fn mentioned_unknowns(&self, out: &mut BTreeSet<Unknown>) {
        match self {
            PnlProp::Bot => {}
            PnlProp::Imp(p, q) => {
                p.mentioned_unknowns(out);
                q.mentioned_unknowns(out);
            }
            PnlProp::Pred(_, t) => t.mentioned_unknowns(out),
            PnlProp::All(x, p) => {
                out.insert(x.clone());
                p.mentioned_unknowns(out);
            }
        }
    }
}

/// Least-index unknown of the same sort and permission set outside `avoid`.
pub fn fresh_unknown_like(x: &Unknown, avoid: &BTreeSet<Unknown>) -> Unknown {
    (0..).map(|i| x.with_index(i)).find(|y| !avoid.contains(y)).expect("unbounded search")
}

pub fn perm_act<T: Syntax>(pi: &Perm, x: &T) -> T {
    x.perm_act(pi)
}

pub fn perm2_act<T: Syntax>(p: &Perm2, x: &T) -> T {
    x.perm2_act(p)
}

pub fn free_atoms<T: Syntax>(x: &T) -> CofinAtomSet {
    x.free_atoms()
}

pub fn free_unknowns<T: Syntax>(x: &T) -> BTreeSet<Unknown> {
    x.free_unknowns()
}

pub fn alpha_eq<T: Syntax>(x: &T, y: &T) -> bool {
    x.alpha_eq(y)
}

pub fn subst_apply<T: Syntax>(theta: &PnlSubst, x: &T) -> T {
    x.subst(theta)
}

pub fn mentioned_atoms<T: Syntax>(x: &T) -> AtomSet {
    let mut out = AtomSet::new();
    x.mentioned_atoms(&mut out);
    out
}

/// The sort of a term under the typing rules, or the first mismatch.
pub fn sort_of(sig: &PnlSignature, t: &PnlTerm) -> Result<PnlSort, SortError> {
    match t {
        PnlTerm::Atom(a) => {
            if sig.names.contains(&a.sort) {
                Ok(PnlSort::Name(a.sort.clone()))
            } else {
                Err(SortError::UnknownNameSort(a.sort.clone()))
            }
        }
        PnlTerm::Tup(xs) => Ok(PnlSort::Tuple(xs.iter().map(|x| sort_of(sig, x)).collect::<Result<_, _>>()?)),
        PnlTerm::Former(f, arg) => {
            let (expected, res) = sig.formers.get(f).ok_or_else(|| SortError::UnknownFormer(f.clone()))?;
            let found = sort_of(sig, arg)?;
            if &found != expected {
                return Err(SortError::Mismatch { former: f.clone(), expected: expected.clone(), found, subterm: t.to_string() });
            }
            Ok(PnlSort::Base(res.clone()))
        }
        PnlTerm::Abs(a, body) => {
            if !sig.names.contains(&a.sort) {
                return Err(SortError::UnknownNameSort(a.sort.clone()));
            }
            Ok(PnlSort::abs(&a.sort, sort_of(sig, body)?))
        }
        PnlTerm::Sus(_, x) => Ok(x.sort().clone()),
    }
}

/// Checks that a proposition is well formed.
pub fn check_prop(sig: &PnlSignature, p: &PnlProp) -> Result<(), SortError> {
    match p {
        PnlProp::Bot => Ok(()),
        PnlProp::Imp(a, b) => {
            check_prop(sig, a)?;
            check_prop(sig, b)
        }
        PnlProp::Pred(n, t) => {
            let expected = sig.preds.get(n).ok_or_else(|| SortError::UnknownPred(n.clone()))?;
            let found = sort_of(sig, t)?;
            if &found != expected {
                return Err(SortError::Mismatch { former: n.clone(), expected: expected.clone(), found, subterm: p.to_string() });
            }
            Ok(())
        }
        PnlProp::All(_, b) => check_prop(sig, b),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PiError {
    #[error("the extra unknown must have a base sort not already in the signature, found {0}")]
    NotFreshBase(PnlSort),
    #[error("free atoms of {0} are not within the permission set of the extra unknown")]
    Permission(String),
}

/// Saturates the signature with the extra base sort of `zpi` and prefixes
/// every proposition-former's argument with it.
pub fn pi_signature(sig: &PnlSignature, zpi: &Unknown) -> Result<PnlSignature, PiError> {
    let tau = match zpi.sort() {
        PnlSort::Base(t) if !sig.bases.contains(t) && !sig.names.contains(t) => t.clone(),
        other => return Err(PiError::NotFreshBase(other.clone())),
    };
    let mut out = sig.clone();
    out.bases.insert(tau.clone());
    for arg in out.preds.values_mut() {
        *arg = PnlSort::Tuple(vec![PnlSort::Base(tau.clone()), arg.clone()]);
    }
    Ok(out)
}

/// Maps `P(r)` to `P(Zπ, r)` throughout, leaving other connectives alone.
pub fn pi_prop(p: &PnlProp, zpi: &Unknown) -> PnlProp {
    match p {
        PnlProp::Bot => PnlProp::Bot,
        PnlProp::Imp(a, b) => PnlProp::imp(pi_prop(a, zpi), pi_prop(b, zpi)),
        PnlProp::Pred(n, t) => PnlProp::Pred(n.clone(), PnlTerm::Tup(vec![PnlTerm::unk(zpi), t.clone()])),
        PnlProp::All(x, b) => PnlProp::all(x, pi_prop(b, zpi)),
    }
}

pub fn pi_translate(sig: &PnlSignature, p: &PnlProp, zpi: &Unknown) -> Result<(PnlSignature, PnlProp), PiError> {
    let sig_pi = pi_signature(sig, zpi)?;
    if !set_subset(&p.free_atoms(), &zpi.pmss().to_set()) {
        return Err(PiError::Permission(p.to_string()));
    }
    Ok((sig_pi, pi_prop(p, zpi)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nu(i: i64) -> Atom {
        Atom::new("nu", i)
    }

    fn iota() -> PnlSort {
        PnlSort::Base("iota".into())
    }

    fn var(i: i64) -> PnlTerm {
        PnlTerm::former("var", PnlTerm::atom(&nu(i)))
    }

    fn x_with(plus: &[i64], idx: u32) -> Unknown {
        Unknown::new(iota(), PermissionSet::new(plus.iter().map(|&i| nu(i)), []), idx)
    }

    fn sw(a: i64, b: i64) -> Perm {
        Perm::swap_same(&nu(a), &nu(b))
    }

    #[test]
    fn sort_of_examples() {
        let sig = PnlSignature::lambda_calculus();
        assert_eq!(sort_of(&sig, &var(0)).unwrap(), iota());
        let x = x_with(&[], 0);
        assert_eq!(sort_of(&sig, &PnlTerm::abs(&nu(0), PnlTerm::unk(&x))).unwrap(), PnlSort::abs(&"nu".into(), iota()));
        assert!(matches!(sort_of(&sig, &PnlTerm::former("app", var(0))), Err(SortError::Mismatch { .. })));
        assert!(sig.validate().is_ok());
    }

    #[test]
    fn perm_act_examples() {
        let x = x_with(&[], 0);
        assert_eq!(var(0).perm_act(&sw(0, 1)), var(1));
        let t = PnlTerm::abs(&nu(0), PnlTerm::unk(&x));
        assert_eq!(t.perm_act(&sw(0, 1)), PnlTerm::abs(&nu(1), PnlTerm::sus(sw(0, 1), &x)));
        assert_eq!(t.perm_act(&Perm::id()), t);
    }

    #[test]
    fn perm2_act_examples() {
        let x = x_with(&[], 0);
        let y = x_with(&[], 1);
        let s = Perm2::swap(&x, &y).unwrap();
        assert_eq!(PnlTerm::sus(sw(0, 1), &x).perm2_act(&s), PnlTerm::sus(sw(0, 1), &y));
        let phi = PnlProp::pred("P", PnlTerm::unk(&x));
        assert_eq!(PnlProp::all(&x, phi.clone()).perm2_act(&s), PnlProp::all(&y, phi.perm2_act(&s)));
        assert_eq!(phi.perm2_act(&Perm2::id()), phi);
    }

    #[test]
    fn free_atoms_examples() {
        let x = x_with(&[0], 0);
        assert_eq!(var(0).free_atoms(), CofinAtomSet::singleton(nu(0)));
        assert_eq!(PnlTerm::sus(sw(0, 1), &x).free_atoms(), CofinAtomSet::cofin([], [nu(1)]));
        assert_eq!(PnlTerm::abs(&nu(0), PnlTerm::unk(&x)).free_atoms(), CofinAtomSet::cofin([], []));
    }

    #[test]
    fn alpha_eq_examples() {
        let x = x_with(&[0], 0);
        let y = x_with(&[0], 1);
        let lhs = PnlProp::all(&x, PnlProp::pred("Q", PnlTerm::abs(&nu(0), PnlTerm::unk(&x))));
        let rhs = PnlProp::all(&y, PnlProp::pred("Q", PnlTerm::abs(&nu(1), PnlTerm::sus(sw(1, 0), &y))));
        assert!(lhs.alpha_eq(&rhs));
        assert!(PnlTerm::abs(&nu(0), var(0)).alpha_eq(&PnlTerm::abs(&nu(1), var(1))));
        assert!(!PnlTerm::unk(&x).alpha_eq(&PnlTerm::sus(sw(1, 0), &x)));
        // Moving only atoms outside the permission set is invisible.
        assert!(PnlTerm::unk(&x).alpha_eq(&PnlTerm::sus(sw(1, 2), &x)));
    }

    #[test]
    fn subst_examples() {
        let sig = PnlSignature::lambda_calculus();
        let x = x_with(&[0], 0);
        let th = PnlSubst::single(&sig, &x, var(0)).unwrap();
        assert_eq!(PnlTerm::abs(&nu(0), PnlTerm::unk(&x)).subst(&th), PnlTerm::abs(&nu(0), var(0)));
        assert_eq!(PnlTerm::sus(sw(1, 0), &x).subst(&th), var(1));
        let t = PnlTerm::sus(sw(1, 0), &x);
        assert_eq!(t.subst(&PnlSubst::empty()), t);
        assert!(PnlSubst::single(&sig, &x, var(1)).is_err());
    }

    #[test]
    fn subst_freshens_binder() {
        let sig = PnlSignature::lambda_calculus();
        let x = x_with(&[0], 0);
        let y = x_with(&[0], 1);
        let th = PnlSubst::single(&sig, &y, PnlTerm::unk(&x)).unwrap();
        let phi = PnlProp::all(&x, PnlProp::pred("eq", PnlTerm::Tup(vec![PnlTerm::unk(&x), PnlTerm::unk(&y)])));
        let out = phi.subst(&th);
        let z = x.with_index(2);
        let expected = PnlProp::all(&z, PnlProp::pred("eq", PnlTerm::Tup(vec![PnlTerm::unk(&z), PnlTerm::unk(&x)])));
        assert_eq!(out, expected);
    }

    #[test]
    fn pi_translate_examples() {
        let sig = PnlSignature::lambda_calculus();
        let z = Unknown::new(PnlSort::Base("taupi".into()), PermissionSet::new([nu(0), nu(1)], []), 0);
        let (sig_pi, p) = pi_translate(&sig, &PnlProp::pred("P", var(0)), &z).unwrap();
        assert_eq!(p, PnlProp::pred("P", PnlTerm::Tup(vec![PnlTerm::unk(&z), var(0)])));
        assert!(check_prop(&sig_pi, &p).is_ok());
        assert_eq!(pi_translate(&sig, &PnlProp::Bot, &z).unwrap().1, PnlProp::Bot);
        let x = x_with(&[], 0);
        let q = PnlProp::all(&x, PnlProp::pred("P", PnlTerm::unk(&x)));
        let expected = PnlProp::all(&x, PnlProp::pred("P", PnlTerm::Tup(vec![PnlTerm::unk(&z), PnlTerm::unk(&x)])));
        assert_eq!(pi_translate(&sig, &q, &z).unwrap().1, expected);
        assert!(pi_translate(&sig, &PnlProp::pred("P", var(5)), &z).is_err());
    }
}
