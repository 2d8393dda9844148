//! Executable models at desk scale.
//!
//! PNL carriers are Herbrand: ground terms of each sort, compared up to α,
//! with term-formers acting syntactically and predicates given by ordered
//! pattern clauses. HOL values live in renaming sets; a value of a type
//! that is the image of a PNL sort is a suspended renaming `ρ•x` over a
//! ground term, everything else is a boolean, a tuple or a supported
//! function. Quantifiers range over ground terms up to a depth bound, drawn
//! from a finite window of atoms; results record whether any quantifier was
//! cut off this way.

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use crate::capture::{capture_check, Capturable, CaptureContext};
use crate::foundations::{
    fresh_atom, fresh_atoms, freshening_pair_avoiding, join, Atom, AtomSet, CofinAtomSet, Name, Perm, PermissionSet,
    Renaming,
};
use crate::hol::{hol_type_of, Const, HolSignature, HolTerm, HolType, HolTypeError, HolVar};
use crate::pnl::{
    check_prop, mentioned_atoms, sort_of, PnlProp, PnlSignature, PnlSort, PnlSubst, PnlTerm, SortError, Syntax, Unknown,
};
use crate::translate::{former_const, translate, TranslateError, TranslationEnv};

/// Largest quantifier domain evaluated before giving up.
const DOMAIN_LIMIT: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemError {
    #[error(transparent)]
    Sort(#[from] SortError),
    #[error(transparent)]
    Type(#[from] HolTypeError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error("{0} is not ground")]
    NotGround(String),
    #[error("value {value} for {unknown} has atoms outside its permission set")]
    OutsidePermission { unknown: String, value: String },
    #[error("no element of sort {0} is available")]
    Uninhabited(PnlSort),
    #[error("quantifier present but the depth bound is 0")]
    DepthExhausted,
    #[error("cannot enumerate the quantifier domain {0}")]
    NonEnumerable(HolType),
    #[error("quantifier domain of {0} exceeds {DOMAIN_LIMIT} elements")]
    DomainTooLarge(String),
    #[error("support of size {0} exceeds the limit {1}")]
    SupportLimit(usize, usize),
    #[error("no value for variable {0}")]
    Unbound(String),
    #[error("cannot apply {0}")]
    NotAFunction(String),
    #[error("ill-typed value: expected {expected}, found {found}")]
    Mismatch { expected: String, found: String },
    #[error("{0} abstracts an atom shared by several suspended atoms")]
    NotRepresentable(String),
    #[error("functions are not compared")]
    Incomparable,
    #[error("{0} is not captured by the context")]
    NotCaptured(String),
    #[error("pattern {pattern} for {pred}: {reason}")]
    BadPattern { pred: Name, pattern: String, reason: String },
}

// ---------------------------------------------------------------------------
// Ground terms

/// `ρ` acting on a ground term: free atoms are replaced, binders in
/// `nontriv(ρ)` are freshened first.
pub fn ground_renaming_action(rho: &Renaming, x: &PnlTerm) -> PnlTerm {
    if rho.is_id() {
        return x.clone();
    }
    match x {
        PnlTerm::Atom(a) => PnlTerm::Atom(rho.apply(a)),
        PnlTerm::Tup(xs) => PnlTerm::Tup(xs.iter().map(|t| ground_renaming_action(rho, t)).collect()),
        PnlTerm::Former(f, t) => PnlTerm::Former(f.clone(), Box::new(ground_renaming_action(rho, t))),
        PnlTerm::Abs(a, t) => {
            let nt = rho.nontriv();
            if nt.contains(a) {
                let mut avoid = nt;
                avoid.extend(ground_support(t));
                avoid.insert(a.clone());
                let b = fresh_atom(&a.sort, &CofinAtomSet::Finite(avoid));
                let t = t.perm_act(&Perm::swap_same(a, &b));
                PnlTerm::abs(&b, ground_renaming_action(rho, &t))
            } else {
                PnlTerm::abs(a, ground_renaming_action(rho, t))
            }
        }
        PnlTerm::Sus(..) => x.clone(),
    }
}

/// Free atoms of a ground term.
pub fn ground_support(x: &PnlTerm) -> AtomSet {
    x.free_atoms().as_finite().cloned().unwrap_or_default()
}

fn ensure_ground(x: &PnlTerm) -> Result<(), SemError> {
    if x.is_ground() {
        Ok(())
    } else {
        Err(SemError::NotGround(x.to_string()))
    }
}

/// `[d₁]…[dₖ]x`.
pub fn abstract_all(ds: &[Atom], x: PnlTerm) -> PnlTerm {
    ds.iter().rev().fold(x, |acc, d| PnlTerm::abs(d, acc))
}

/// A fixed element of `sort` whose free atoms lie in `pmss`, or `None`
/// when the sort is empty.
pub fn canonical_element(sig: &PnlSignature, sort: &PnlSort, pmss: &PermissionSet) -> Option<PnlTerm> {
    canonical_in(sig, sort, pmss, &mut BTreeSet::new())
}

fn canonical_in(sig: &PnlSignature, sort: &PnlSort, pmss: &PermissionSet, busy: &mut BTreeSet<Name>) -> Option<PnlTerm> {
    match sort {
        PnlSort::Name(n) => (1..).map(|i| Atom::with_sort(n, -i)).find(|a| pmss.contains(a)).map(PnlTerm::Atom),
        PnlSort::Tuple(xs) => xs.iter().map(|s| canonical_in(sig, s, pmss, busy)).collect::<Option<Vec<_>>>().map(PnlTerm::Tup),
        PnlSort::Abs(n, body) => {
            let a = Atom::with_sort(n, 0);
            canonical_in(sig, body, pmss, busy).map(|t| PnlTerm::abs(&a, t))
        }
        PnlSort::Base(tau) => {
            if !busy.insert(tau.clone()) {
                return None;
            }
            let found = sig
                .formers
                .iter()
                .filter(|(_, (_, res))| res == tau)
                .find_map(|(f, (arg, _))| canonical_in(sig, arg, pmss, busy).map(|t| PnlTerm::Former(f.clone(), Box::new(t))));
            busy.remove(tau);
            found
        }
    }
}

/// All ground terms of `sort` up to `depth`, with free atoms drawn from
/// `atoms`. Atoms count 1, each former and abstraction adds 1, tuples add
/// nothing. Abstractions use one binder fresh for `atoms`, which reaches
/// every class up to α.
pub fn ground_terms(sig: &PnlSignature, sort: &PnlSort, depth: usize, atoms: &AtomSet) -> Result<Vec<PnlTerm>, SemError> {
    let mut cache = HashMap::new();
    let out = enumerate(sig, sort, depth, atoms, &mut cache)?;
    Ok((*out).clone())
}

type GenCache = HashMap<(PnlSort, usize, AtomSet), Rc<Vec<PnlTerm>>>;

fn enumerate(sig: &PnlSignature, sort: &PnlSort, depth: usize, atoms: &AtomSet, cache: &mut GenCache) -> Result<Rc<Vec<PnlTerm>>, SemError> {
    let key = (sort.clone(), depth, atoms.clone());
    if let Some(v) = cache.get(&key) {
        return Ok(v.clone());
    }
    let mut out = Vec::new();
    if depth > 0 {
        match sort {
            PnlSort::Name(n) => out.extend(atoms.iter().filter(|a| &a.sort == n).map(PnlTerm::atom)),
            PnlSort::Tuple(xs) => {
                let mut acc: Vec<Vec<PnlTerm>> = vec![Vec::new()];
                for s in xs {
                    let part = enumerate(sig, s, depth, atoms, cache)?;
                    if acc.len().saturating_mul(part.len()) > DOMAIN_LIMIT {
                        return Err(SemError::DomainTooLarge(sort.to_string()));
                    }
                    acc = acc.iter().flat_map(|pre| part.iter().map(move |t| [pre.clone(), vec![t.clone()]].concat())).collect();
                }
                out.extend(acc.into_iter().map(PnlTerm::Tup));
            }
            PnlSort::Abs(n, body) => {
                let a = fresh_atom(n, &CofinAtomSet::Finite(atoms.clone()));
                let mut inner = atoms.clone();
                inner.insert(a.clone());
                for t in enumerate(sig, body, depth - 1, &inner, cache)?.iter() {
                    out.push(PnlTerm::abs(&a, t.clone()));
                }
            }
            PnlSort::Base(tau) => {
                for (f, (arg, res)) in &sig.formers {
                    if res == tau {
                        for t in enumerate(sig, arg, depth - 1, atoms, cache)?.iter() {
                            out.push(PnlTerm::Former(f.clone(), Box::new(t.clone())));
                        }
                    }
                }
            }
        }
    }
    if out.len() > DOMAIN_LIMIT {
        return Err(SemError::DomainTooLarge(sort.to_string()));
    }
    let out = Rc::new(out);
    cache.insert(key, out.clone());
    Ok(out)
}

/// The atoms quantifiers draw from: `seeds`, two negative atoms per name
/// sort, and the two least non-negative atoms per name sort outside
/// `seeds`.
pub fn default_window(sig: &PnlSignature, seeds: &AtomSet) -> AtomSet {
    let mut out = seeds.clone();
    for n in &sig.names {
        out.insert(Atom::with_sort(n, -1));
        out.insert(Atom::with_sort(n, -2));
        out.extend(fresh_atoms(&[n.clone(), n.clone()], &CofinAtomSet::Finite(seeds.clone())));
    }
    out
}

// ---------------------------------------------------------------------------
// Models and valuations

/// A predicate interpretation: ordered clauses, first match wins, else the
/// default. Unknowns in patterns are wildcards; a wildcard repeated in a
/// pattern must match α-equal values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredSpec {
    clauses: Vec<(PnlTerm, bool)>,
    default: bool,
}

impl PredSpec {
    pub fn constant(default: bool) -> Self {
        PredSpec { clauses: Vec::new(), default }
    }

    pub fn new(clauses: Vec<(PnlTerm, bool)>, default: bool) -> Self {
        PredSpec { clauses, default }
    }

    pub fn clauses(&self) -> &[(PnlTerm, bool)] {
        &self.clauses
    }

    pub fn default_value(&self) -> bool {
        self.default
    }

    /// Every atom written in a pattern, binders included.
    pub fn declared_support(&self) -> AtomSet {
        let mut out = AtomSet::new();
        for (p, _) in &self.clauses {
            out.extend(mentioned_atoms(p));
        }
        out
    }

    pub fn eval(&self, x: &PnlTerm) -> bool {
        self.clauses.iter().find(|(p, _)| match_pattern(p, x).is_some()).map(|(_, v)| *v).unwrap_or(self.default)
    }
}

/// Matches a ground value against a pattern, returning the wildcard
/// bindings.
pub fn match_pattern(p: &PnlTerm, v: &PnlTerm) -> Option<BTreeMap<Unknown, PnlTerm>> {
    let mut binds = BTreeMap::new();
    match_into(p, v, &mut binds).then_some(binds)
}

fn match_into(p: &PnlTerm, v: &PnlTerm, binds: &mut BTreeMap<Unknown, PnlTerm>) -> bool {
    match (p, v) {
        (PnlTerm::Sus(pi, x), _) => {
            let val = v.perm_act(&pi.inverse());
            match binds.get(x) {
                Some(prev) => prev.alpha_eq(&val),
                None => {
                    binds.insert(x.clone(), val);
                    true
                }
            }
        }
        (PnlTerm::Atom(a), PnlTerm::Atom(b)) => a == b,
        (PnlTerm::Tup(ps), PnlTerm::Tup(vs)) => ps.len() == vs.len() && ps.iter().zip(vs).all(|(p, v)| match_into(p, v, binds)),
        (PnlTerm::Former(f, p), PnlTerm::Former(g, v)) => f == g && match_into(p, v, binds),
        (PnlTerm::Abs(a, p), PnlTerm::Abs(b, w)) => {
            if a == b {
                match_into(p, w, binds)
            } else if a.sort == b.sort && !ground_support(w).contains(a) {
                match_into(p, &w.perm_act(&Perm::swap_same(a, b)), binds)
            } else {
                false
            }
        }
        _ => false,
    }
}

/// A model whose carriers are ground terms; predicates without a spec are
/// constantly false.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HerbrandModel {
    pub sig: PnlSignature,
    preds: BTreeMap<Name, PredSpec>,
}

impl HerbrandModel {
    pub fn new(sig: &PnlSignature) -> Self {
        let preds = sig.preds.keys().map(|p| (p.clone(), PredSpec::constant(false))).collect();
        HerbrandModel { sig: sig.clone(), preds }
    }

    /// Installs a spec after checking each pattern against the arity.
    pub fn set_pred(&mut self, p: &str, spec: PredSpec) -> Result<&mut Self, SemError> {
        let arity = self.sig.preds.get(p).ok_or_else(|| SortError::UnknownPred(p.into()))?;
        for (pat, _) in &spec.clauses {
            let found = sort_of(&self.sig, pat)?;
            if &found != arity {
                return Err(SemError::BadPattern {
                    pred: p.into(),
                    pattern: pat.to_string(),
                    reason: format!("has sort {found}, expected {arity}"),
                });
            }
        }
        self.preds.insert(p.into(), spec);
        Ok(self)
    }

    pub fn pred(&self, p: &str) -> Option<&PredSpec> {
        self.preds.get(p)
    }

    pub fn preds(&self) -> &BTreeMap<Name, PredSpec> {
        &self.preds
    }

    /// Union of the declared supports; empty exactly for equivariant
    /// models.
    pub fn support(&self) -> AtomSet {
        self.preds.values().flat_map(|s| s.declared_support()).collect()
    }

    pub fn eval_pred(&self, p: &str, x: &PnlTerm) -> Result<bool, SemError> {
        self.preds.get(p).map(|s| s.eval(x)).ok_or_else(|| SortError::UnknownPred(p.into()).into())
    }
}

impl fmt::Display for HerbrandModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(model {}", self.sig)?;
        for (p, spec) in &self.preds {
            write!(f, " (pred {p}")?;
            for (pat, v) in &spec.clauses {
                write!(f, " (clause {pat} {})", u8::from(*v))?;
            }
            write!(f, " (default {}))", u8::from(spec.default))?;
        }
        write!(f, ")")
    }
}

/// Ground values for unknowns. Unknowns without an entry take
/// [`canonical_element`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation {
    map: BTreeMap<Unknown, PnlTerm>,
}

impl Valuation {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(sig: &PnlSignature, map: BTreeMap<Unknown, PnlTerm>) -> Result<Self, SemError> {
        let mut v = Valuation::empty();
        for (x, t) in map {
            v.insert(sig, &x, t)?;
        }
        Ok(v)
    }

    /// `ς[X::=x]`, checked.
    pub fn insert(&mut self, sig: &PnlSignature, x: &Unknown, t: PnlTerm) -> Result<(), SemError> {
        ensure_ground(&t)?;
        let found = sort_of(sig, &t)?;
        if &found != x.sort() {
            return Err(SemError::Mismatch { expected: x.sort().to_string(), found: found.to_string() });
        }
        if !ground_support(&t).iter().all(|a| x.pmss().contains(a)) {
            return Err(SemError::OutsidePermission { unknown: x.to_string(), value: t.to_string() });
        }
        self.map.insert(x.clone(), t);
        Ok(())
    }

    pub fn updated(&self, sig: &PnlSignature, x: &Unknown, t: PnlTerm) -> Result<Self, SemError> {
        let mut out = self.clone();
        out.insert(sig, x, t)?;
        Ok(out)
    }

    pub fn explicit(&self) -> &BTreeMap<Unknown, PnlTerm> {
        &self.map
    }

    pub fn get(&self, sig: &PnlSignature, x: &Unknown) -> Result<PnlTerm, SemError> {
        if let Some(t) = self.map.get(x) {
            return Ok(t.clone());
        }
        canonical_element(sig, x.sort(), x.pmss()).ok_or_else(|| SemError::Uninhabited(x.sort().clone()))
    }

    /// Atoms of the explicit entries.
    pub fn support(&self) -> AtomSet {
        self.map.values().flat_map(ground_support).collect()
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(valuation")?;
        for (x, t) in &self.map {
            write!(f, " (set {x} {t})")?;
        }
        write!(f, ")")
    }
}

// ---------------------------------------------------------------------------
// PNL evaluation

/// Depth bound and atom window for quantifiers, plus the support limit for
/// deciding equality of suspended renamings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    pub depth: usize,
    /// Atoms quantifiers draw from; empty means "compute a default".
    pub window: AtomSet,
    pub ren_cap: usize,
}

impl EvalConfig {
    pub fn new(depth: usize) -> Self {
        EvalConfig { depth, window: AtomSet::new(), ren_cap: 8 }
    }

    pub fn with_window(mut self, window: AtomSet) -> Self {
        self.window = window;
        self
    }

    fn window_or(&self, sig: &PnlSignature, seeds: impl FnOnce() -> AtomSet) -> AtomSet {
        if self.window.is_empty() {
            default_window(sig, &seeds())
        } else {
            self.window.clone()
        }
    }
}

/// A truth value and whether it was computed without cutting off any
/// quantifier domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truth {
    pub value: bool,
    pub exact: bool,
}

pub fn eval_pnl_term(model: &HerbrandModel, s: &Valuation, r: &PnlTerm) -> Result<PnlTerm, SemError> {
    sort_of(&model.sig, r)?;
    term_value(model, s, r)
}

fn term_value(model: &HerbrandModel, s: &Valuation, r: &PnlTerm) -> Result<PnlTerm, SemError> {
    Ok(match r {
        PnlTerm::Atom(_) => r.clone(),
        PnlTerm::Tup(xs) => PnlTerm::Tup(xs.iter().map(|x| term_value(model, s, x)).collect::<Result<_, _>>()?),
        PnlTerm::Former(f, t) => PnlTerm::Former(f.clone(), Box::new(term_value(model, s, t)?)),
        PnlTerm::Abs(a, t) => PnlTerm::abs(a, term_value(model, s, t)?),
        PnlTerm::Sus(pi, x) => s.get(&model.sig, x)?.perm_act(pi),
    })
}

/// Atoms a proposition, a valuation and a model mention.
fn pnl_seeds(model: &HerbrandModel, s: &Valuation, p: &PnlProp) -> AtomSet {
    let mut seeds = mentioned_atoms(p);
    seeds.extend(s.support());
    seeds.extend(model.support());
    seeds
}

pub fn eval_pnl_prop(model: &HerbrandModel, s: &Valuation, p: &PnlProp, cfg: &EvalConfig) -> Result<Truth, SemError> {
    check_prop(&model.sig, p)?;
    if !p.is_quantifier_free() && cfg.depth == 0 {
        return Err(SemError::DepthExhausted);
    }
    let window = cfg.window_or(&model.sig, || pnl_seeds(model, s, p));
    let value = prop_value(model, s, p, cfg.depth, &window)?;
    Ok(Truth { value, exact: p.is_quantifier_free() })
}

fn prop_value(model: &HerbrandModel, s: &Valuation, p: &PnlProp, depth: usize, window: &AtomSet) -> Result<bool, SemError> {
    Ok(match p {
        PnlProp::Bot => false,
        PnlProp::Imp(a, b) => !prop_value(model, s, a, depth, window)? || prop_value(model, s, b, depth, window)?,
        PnlProp::Pred(n, t) => model.eval_pred(n, &term_value(model, s, t)?)?,
        PnlProp::All(x, body) => {
            for v in unknown_domain(&model.sig, x, depth, window)? {
                if !prop_value(model, &s.updated(&model.sig, x, v)?, body, depth, window)? {
                    return Ok(false);
                }
            }
            true
        }
    })
}

/// Ground terms of `sort(X)` up to `depth` whose atoms are in the window
/// and permitted for `X`.
fn unknown_domain(sig: &PnlSignature, x: &Unknown, depth: usize, window: &AtomSet) -> Result<Vec<PnlTerm>, SemError> {
    let atoms: AtomSet = window.iter().filter(|a| x.pmss().contains(a)).cloned().collect();
    ground_terms(sig, x.sort(), depth, &atoms)
}

// ---------------------------------------------------------------------------
// The free extension

/// `ρ•x`: a ground term under a suspended renaming.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RenElem {
    pub rho: Renaming,
    pub val: PnlTerm,
}

impl RenElem {
    pub fn new(rho: Renaming, val: PnlTerm) -> Self {
        RenElem { rho, val }
    }

    pub fn id(val: PnlTerm) -> Self {
        RenElem { rho: Renaming::id(), val }
    }

    /// `ρ′•(ρ•x) = (ρ′∘ρ)•x`.
    pub fn act(&self, rho: &Renaming) -> RenElem {
        RenElem::new(rho.compose(&self.rho), self.val.clone()).normalized()
    }

    /// The renaming restricted to the support, and pushed into the term
    /// when it is injective there.
    pub fn normalized(&self) -> RenElem {
        let supp = ground_support(&self.val);
        let rho = self.rho.restrict(&supp);
        if rho.is_injective_on(&supp) {
            let map: BTreeMap<Atom, Atom> = supp.iter().map(|a| (a.clone(), rho.apply(a))).collect();
            if let Ok(pi) = Perm::extend_injection(&map) {
                return RenElem::id(self.val.perm_act(&pi));
            }
        }
        RenElem::new(rho, self.val.clone())
    }

    /// `ρ·supp(x)`, which contains the support.
    pub fn support(&self) -> AtomSet {
        ground_support(&self.val).iter().map(|a| self.rho.apply(a)).collect()
    }

    /// The atom denoted, when the term is an atom.
    pub fn as_atom(&self) -> Option<Atom> {
        match &self.val {
            PnlTerm::Atom(a) => Some(self.rho.apply(a)),
            _ => None,
        }
    }

    /// The natural map to plain terms, `ρ•x ↦ ρ·x`.
    pub fn collapse(&self) -> PnlTerm {
        ground_renaming_action(&self.rho, &self.val)
    }
}

impl fmt::Display for RenElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rho.is_id() {
            write!(f, "(ren {})", self.val)
        } else {
            write!(f, "(ren {} {})", self.rho, self.val)
        }
    }
}

/// Decides `(ρ₁, x₁) ∼ (ρ₂, x₂)`: some sort-respecting bijection
/// `π : supp(x₁) → supp(x₂)` has `π·x₁ =α x₂` and `ρ₁ = ρ₂∘π` on
/// `supp(x₁)`.
pub fn ren_eq(e1: &RenElem, e2: &RenElem) -> Result<bool, SemError> {
    ren_eq_capped(e1, e2, 8)
}

pub fn ren_eq_capped(e1: &RenElem, e2: &RenElem, cap: usize) -> Result<bool, SemError> {
    let s1: Vec<Atom> = ground_support(&e1.val).into_iter().collect();
    let s2: Vec<Atom> = ground_support(&e2.val).into_iter().collect();
    for s in [&s1, &s2] {
        if s.len() > cap {
            return Err(SemError::SupportLimit(s.len(), cap));
        }
    }
    if s1.len() != s2.len() {
        return Ok(false);
    }
    let mut used = vec![false; s2.len()];
    let mut map = BTreeMap::new();
    Ok(search_bijection(e1, e2, &s1, &s2, 0, &mut used, &mut map))
}

fn search_bijection(
    e1: &RenElem,
    e2: &RenElem,
    s1: &[Atom],
    s2: &[Atom],
    i: usize,
    used: &mut [bool],
    map: &mut BTreeMap<Atom, Atom>,
) -> bool {
    if i == s1.len() {
        return match Perm::extend_injection(map) {
            Ok(pi) => e1.val.perm_act(&pi).alpha_eq(&e2.val),
            Err(_) => false,
        };
    }
    let a = &s1[i];
    for j in 0..s2.len() {
        let b = &s2[j];
        if used[j] || a.sort != b.sort || e1.rho.apply(a) != e2.rho.apply(b) {
            continue;
        }
        used[j] = true;
        map.insert(a.clone(), b.clone());
        if search_bijection(e1, e2, s1, s2, i + 1, used, map) {
            return true;
        }
        map.remove(a);
        used[j] = false;
    }
    false
}

// ---------------------------------------------------------------------------
// HOL values

#[derive(Clone, Debug)]
pub enum SemVal {
    Bool(bool),
    Atom(Atom),
    Ren(RenElem),
    Tup(Vec<SemVal>),
    Fn(Arc<FnElem>),
}

#[derive(Clone, Debug)]
pub enum FnElem {
    LamClos { bound: HolVar, body: HolTerm, env: HolValuation, support: AtomSet },
    Const(ConstFn),
    PendingRen { rho: Renaming, inner: Arc<FnElem> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstFn {
    Imp,
    ImpApplied(bool),
    Forall(HolType),
    Former(Name),
    Pred(Name),
}

impl SemVal {
    pub fn ren(x: PnlTerm) -> SemVal {
        SemVal::Ren(RenElem::id(x))
    }

    pub fn as_bool(&self) -> Result<bool, SemError> {
        match self {
            SemVal::Bool(b) => Ok(*b),
            other => Err(SemError::Mismatch { expected: "a truth value".into(), found: other.to_string() }),
        }
    }

    /// Image-type values, with bare atoms read as `id•a`.
    pub fn as_ren(&self) -> Result<RenElem, SemError> {
        match self {
            SemVal::Ren(e) => Ok(e.clone()),
            SemVal::Atom(a) => Ok(RenElem::id(PnlTerm::atom(a))),
            other => Err(SemError::Mismatch { expected: "a suspended term".into(), found: other.to_string() }),
        }
    }

    pub fn as_atom(&self) -> Result<Atom, SemError> {
        let e = self.as_ren()?;
        e.as_atom().ok_or_else(|| SemError::Mismatch { expected: "an atom".into(), found: e.to_string() })
    }

    /// A finite set supporting the value.
    pub fn support(&self) -> AtomSet {
        match self {
            SemVal::Bool(_) => AtomSet::new(),
            SemVal::Atom(a) => [a.clone()].into_iter().collect(),
            SemVal::Ren(e) => e.support(),
            SemVal::Tup(xs) => xs.iter().flat_map(|x| x.support()).collect(),
            SemVal::Fn(f) => f.support(),
        }
    }
}

impl FnElem {
    pub fn support(&self) -> AtomSet {
        match self {
            FnElem::LamClos { support, .. } => support.clone(),
            FnElem::Const(_) => AtomSet::new(),
            FnElem::PendingRen { rho, inner } => inner.support().iter().map(|a| rho.apply(a)).collect(),
        }
    }
}

impl fmt::Display for SemVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemVal::Bool(b) => write!(f, "{}", u8::from(*b)),
            SemVal::Atom(a) => write!(f, "{a}"),
            SemVal::Ren(e) => write!(f, "{e}"),
            SemVal::Tup(xs) => write!(f, "(tup {})", join(xs, " ")),
            SemVal::Fn(func) => write!(f, "{func}"),
        }
    }
}

impl fmt::Display for FnElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnElem::LamClos { bound, body, .. } => write!(f, "(closure {bound} {body})"),
            FnElem::Const(c) => write!(f, "(const {c:?})"),
            FnElem::PendingRen { rho, inner } => write!(f, "(pending {rho} {inner})"),
        }
    }
}

/// `ρ•v`: trivial on booleans, pointwise on atoms and tuples, composition
/// on suspended terms, deferred on functions.
pub fn ren_act_sem(rho: &Renaming, v: &SemVal) -> SemVal {
    if rho.is_id() {
        return v.clone();
    }
    match v {
        SemVal::Bool(_) => v.clone(),
        SemVal::Atom(a) => SemVal::Atom(rho.apply(a)),
        SemVal::Ren(e) => SemVal::Ren(e.act(rho)),
        SemVal::Tup(xs) => SemVal::Tup(xs.iter().map(|x| ren_act_sem(rho, x)).collect()),
        SemVal::Fn(f) => SemVal::Fn(Arc::new(FnElem::PendingRen { rho: rho.clone(), inner: f.clone() })),
    }
}

/// Equality of non-function values, with suspended terms compared by
/// [`ren_eq_capped`].
pub fn sem_eq(v: &SemVal, w: &SemVal, cap: usize) -> Result<bool, SemError> {
    match (v, w) {
        (SemVal::Bool(a), SemVal::Bool(b)) => Ok(a == b),
        (SemVal::Tup(xs), SemVal::Tup(ys)) => {
            if xs.len() != ys.len() {
                return Ok(false);
            }
            for (x, y) in xs.iter().zip(ys) {
                if !sem_eq(x, y, cap)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        (SemVal::Fn(_), _) | (_, SemVal::Fn(_)) => Err(SemError::Incomparable),
        (SemVal::Atom(_) | SemVal::Ren(_), SemVal::Atom(_) | SemVal::Ren(_)) => ren_eq_capped(&v.as_ren()?, &w.as_ren()?, cap),
        _ => Ok(false),
    }
}

/// `ρ•[a]x` from the body value `ρ•x`, choosing a representative in which
/// `a` is not touched by the renaming.
pub fn abstract_ren(a: &Atom, body: &RenElem) -> Result<RenElem, SemError> {
    let body = body.normalized();
    let supp = ground_support(&body.val);
    let pre: Vec<&Atom> = supp.iter().filter(|c| body.rho.apply(c) == *a).collect();
    let (rho, val) = match pre.as_slice() {
        [] if supp.contains(a) => {
            let mut avoid = supp.clone();
            avoid.extend(body.rho.nontriv());
            avoid.insert(a.clone());
            let t = fresh_atom(&a.sort, &CofinAtomSet::Finite(avoid));
            let pi = Perm::swap_same(a, &t);
            (body.rho.compose(&pi.to_renaming()), body.val.perm_act(&pi))
        }
        [] => (body.rho.clone(), body.val.clone()),
        [c] if *c == a => (body.rho.clone(), body.val.clone()),
        [c] => {
            let pi = Perm::swap_same(c, a);
            (body.rho.compose(&pi.to_renaming()), body.val.perm_act(&pi))
        }
        _ => return Err(SemError::NotRepresentable(format!("[{a}]{body}"))),
    };
    let rho = rho.restrict(&ground_support(&val));
    Ok(RenElem::new(rho, PnlTerm::abs(a, val)).normalized())
}

/// `(ρ•[a]x) b = ([a::=b]∘ρ)•x`, renaming `a` away from `nontriv(ρ) ∪ {b}`
/// first.
pub fn apply_abstraction(f: &RenElem, b: &Atom) -> Result<RenElem, SemError> {
    let (a, x) = match &f.val {
        PnlTerm::Abs(a, x) => (a, x),
        other => return Err(SemError::NotAFunction(other.to_string())),
    };
    let mut avoid = f.rho.nontriv();
    avoid.insert(b.clone());
    let (a, x) = if avoid.contains(a) {
        avoid.extend(ground_support(x));
        avoid.insert(a.clone());
        let a2 = fresh_atom(&a.sort, &CofinAtomSet::Finite(avoid));
        let x2 = x.perm_act(&Perm::swap_same(a, &a2));
        (a2, x2)
    } else {
        (a.clone(), (**x).clone())
    };
    let step = Renaming::atomic(&a, b).map_err(|_| SemError::Mismatch { expected: a.sort.to_string(), found: b.sort.to_string() })?;
    Ok(RenElem::new(step.compose(&f.rho), x).normalized())
}

/// Values for HOL variables. Atom variables default to themselves and
/// `X_D` to `id•[D]ς(X)` for the fallback PNL valuation.
#[derive(Clone, Debug, Default)]
pub struct HolValuation {
    vals: BTreeMap<HolVar, SemVal>,
    fallback: Valuation,
}

impl HolValuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_fallback(fallback: Valuation) -> Self {
        HolValuation { vals: BTreeMap::new(), fallback }
    }

    pub fn set(&mut self, v: HolVar, x: SemVal) -> &mut Self {
        self.vals.insert(v, x);
        self
    }

    /// `ϱ[v::=x]`.
    pub fn updated(&self, v: &HolVar, x: SemVal) -> Self {
        let mut out = self.clone();
        out.vals.insert(v.clone(), x);
        out
    }

    pub fn explicit(&self) -> &BTreeMap<HolVar, SemVal> {
        &self.vals
    }

    pub fn fallback(&self) -> &Valuation {
        &self.fallback
    }

    pub fn get(&self, sig: &PnlSignature, v: &HolVar) -> Result<SemVal, SemError> {
        if let Some(x) = self.vals.get(v) {
            return Ok(x.clone());
        }
        match v {
            HolVar::Atom(a) => Ok(SemVal::Atom(a.clone())),
            HolVar::Unk(x, ds) => Ok(SemVal::ren(abstract_all(ds, self.fallback.get(sig, x)?))),
            HolVar::Plain(..) => Err(SemError::Unbound(v.to_string())),
        }
    }

    /// Makes the values of `vars` explicit.
    pub fn materialize<'a>(&self, sig: &PnlSignature, vars: impl IntoIterator<Item = &'a HolVar>) -> Result<Self, SemError> {
        let mut out = self.clone();
        for v in vars {
            let x = self.get(sig, v)?;
            out.vals.insert(v.clone(), x);
        }
        Ok(out)
    }

    /// `ρ•ϱ` on the explicit entries.
    pub fn act(&self, rho: &Renaming) -> Self {
        HolValuation { vals: self.vals.iter().map(|(k, v)| (k.clone(), ren_act_sem(rho, v))).collect(), fallback: self.fallback.clone() }
    }
}

/// `D(ς)`: each `X_D` maps to `id•[D_X]ς(X)` and each atom to itself. The
/// unknowns of `ς` are entered explicitly at `D`; others are resolved on
/// demand.
pub fn lift_valuation(d: &CaptureContext, s: &Valuation) -> Result<HolValuation, SemError> {
    let mut out = HolValuation::with_fallback(s.clone());
    for (x, t) in s.explicit() {
        let ds = d.restrict(x.pmss());
        out.vals.insert(HolVar::Unk(x.clone(), ds.clone()), SemVal::ren(abstract_all(&ds, t.clone())));
    }
    Ok(out)
}

/// The PNL sort whose image is `ty`, if any.
pub fn image_sort(sig: &PnlSignature, ty: &HolType) -> Option<PnlSort> {
    match ty {
        HolType::Base(n) => sig.sort_named(n),
        HolType::Tuple(xs) => xs.iter().map(|t| image_sort(sig, t)).collect::<Option<Vec<_>>>().map(PnlSort::Tuple),
        HolType::Arrow(a, b) => match &**a {
            HolType::Base(n) if sig.names.contains(n) => image_sort(sig, b).map(|s| PnlSort::abs(n, s)),
            _ => None,
        },
    }
}

/// A value with its exactness flag.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub value: SemVal,
    pub exact: bool,
}

struct Evaluator<'a> {
    env: &'a TranslationEnv,
    model: &'a HerbrandModel,
    depth: usize,
    window: AtomSet,
    bounded: Cell<bool>,
}

impl<'a> Evaluator<'a> {
    fn new(env: &'a TranslationEnv, model: &'a HerbrandModel, cfg: &EvalConfig, window: AtomSet) -> Self {
        Evaluator { env, model, depth: cfg.depth, window, bounded: Cell::new(false) }
    }

    fn sig(&self) -> &PnlSignature {
        &self.env.pnl
    }

    fn hsig(&self) -> &HolSignature {
        &self.env.hol
    }

    fn is_image(&self, ty: &HolType) -> bool {
        image_sort(self.sig(), ty).is_some()
    }

    fn eval(&self, rho: &HolValuation, t: &HolTerm) -> Result<SemVal, SemError> {
        match t {
            HolTerm::Var(v) => {
                let x = rho.get(self.sig(), v)?;
                Ok(match x {
                    SemVal::Atom(a) => SemVal::ren(PnlTerm::Atom(a)),
                    other => other,
                })
            }
            HolTerm::Const(c) => self.constant(c),
            HolTerm::Lam(v, body) => {
                let ty = hol_type_of(self.hsig(), t)?;
                if self.is_image(&ty) {
                    self.image_lambda(rho, v, body)
                } else {
                    let mut support: AtomSet = AtomSet::new();
                    for w in body.free_vars() {
                        if &w != v {
                            support.extend(rho.get(self.sig(), &w)?.support());
                        }
                    }
                    support.extend(self.model.support());
                    Ok(SemVal::Fn(Arc::new(FnElem::LamClos { bound: v.clone(), body: (**body).clone(), env: rho.clone(), support })))
                }
            }
            HolTerm::App(f, u) => {
                if let HolTerm::Const(Const::Forall(ty)) = &**f {
                    let pred = self.eval(rho, u)?;
                    let binder = match &**u {
                        HolTerm::Lam(v, _) => Some(v),
                        _ => None,
                    };
                    return self.forall(ty, binder, &pred);
                }
                let fv = self.eval(rho, f)?;
                let uv = self.eval(rho, u)?;
                self.apply(&fv, &uv)
            }
            HolTerm::Tup(xs) => {
                let ty = hol_type_of(self.hsig(), t)?;
                let vals = xs.iter().map(|x| self.eval(rho, x)).collect::<Result<Vec<_>, _>>()?;
                if self.is_image(&ty) {
                    let elems = vals.iter().map(|v| v.as_ren()).collect::<Result<Vec<_>, _>>()?;
                    Ok(SemVal::Ren(merge_tuple(&elems)))
                } else {
                    Ok(SemVal::Tup(vals))
                }
            }
        }
    }

    fn constant(&self, c: &Const) -> Result<SemVal, SemError> {
        Ok(match c {
            Const::Bot => SemVal::Bool(false),
            Const::Imp => SemVal::Fn(Arc::new(FnElem::Const(ConstFn::Imp))),
            Const::Forall(ty) => SemVal::Fn(Arc::new(FnElem::Const(ConstFn::Forall(ty.clone())))),
            Const::Named(g) => {
                let found = self
                    .sig()
                    .formers
                    .iter()
                    .find(|(f, _)| former_const(f) == *g)
                    .map(|(f, (arg, _))| (f.clone(), Some(arg.clone())))
                    .or_else(|| self.sig().preds.keys().find(|p| former_const(p) == *g).map(|p| (p.clone(), None)));
                match found {
                    Some((f, Some(PnlSort::Name(nu)))) => {
                        let a = Atom::with_sort(&nu, 0);
                        SemVal::ren(PnlTerm::abs(&a, PnlTerm::Former(f, Box::new(PnlTerm::Atom(a.clone())))))
                    }
                    Some((f, Some(_))) => SemVal::Fn(Arc::new(FnElem::Const(ConstFn::Former(f)))),
                    Some((p, None)) => SemVal::Fn(Arc::new(FnElem::Const(ConstFn::Pred(p)))),
                    None => return Err(HolTypeError::UnboundConst(g.clone()).into()),
                }
            }
        })
    }

    fn image_lambda(&self, rho: &HolValuation, v: &HolVar, body: &HolTerm) -> Result<SemVal, SemError> {
        let nu = match v.ty() {
            HolType::Base(n) => n,
            other => return Err(SemError::Mismatch { expected: "a name sort".into(), found: other.to_string() }),
        };
        let mut avoid = self.model.support();
        for w in body.free_vars() {
            if &w != v {
                avoid.extend(rho.get(self.sig(), &w)?.support());
            }
        }
        let a = fresh_atom(&nu, &CofinAtomSet::Finite(avoid));
        let inner = self.eval(&rho.updated(v, SemVal::Atom(a.clone())), body)?.as_ren()?;
        Ok(SemVal::Ren(abstract_ren(&a, &inner)?))
    }

    fn apply(&self, f: &SemVal, x: &SemVal) -> Result<SemVal, SemError> {
        match f {
            SemVal::Ren(e) => Ok(SemVal::Ren(apply_abstraction(e, &x.as_atom()?)?)),
            SemVal::Fn(func) => self.apply_fn(func, x),
            other => Err(SemError::NotAFunction(other.to_string())),
        }
    }

    fn apply_fn(&self, f: &FnElem, x: &SemVal) -> Result<SemVal, SemError> {
        match f {
            FnElem::LamClos { bound, body, env, .. } => self.eval(&env.updated(bound, x.clone()), body),
            FnElem::PendingRen { rho, inner } => {
                let mut blocked = x.support();
                blocked.extend(inner.support());
                let (r1, r2) = freshening_pair_avoiding(&rho.nontriv(), &CofinAtomSet::Finite(blocked));
                let y = self.apply_fn(inner, &ren_act_sem(&r1, x))?;
                Ok(ren_act_sem(&r2.compose(rho), &y))
            }
            FnElem::Const(c) => match c {
                ConstFn::Imp => Ok(SemVal::Fn(Arc::new(FnElem::Const(ConstFn::ImpApplied(x.as_bool()?))))),
                ConstFn::ImpApplied(p) => Ok(SemVal::Bool(!p || x.as_bool()?)),
                ConstFn::Forall(ty) => self.forall(ty, None, x),
                ConstFn::Former(name) => {
                    let e = x.as_ren()?;
                    Ok(SemVal::Ren(RenElem::new(e.rho.clone(), PnlTerm::Former(name.clone(), Box::new(e.val.clone()))).normalized()))
                }
                ConstFn::Pred(p) => {
                    let e = x.as_ren()?.normalized();
                    Ok(SemVal::Bool(self.model.eval_pred(p, &e.val)?))
                }
            },
        }
    }

    /// `min` of `pred` over the domain of `ty`. A binder `X_D` narrows the
    /// domain to `id•[D_X]x` with `x` permitted for `X`.
    fn forall(&self, ty: &HolType, binder: Option<&HolVar>, pred: &SemVal) -> Result<SemVal, SemError> {
        if self.depth == 0 {
            return Err(SemError::DepthExhausted);
        }
        let domain: Vec<SemVal> = match (binder, image_sort(self.sig(), ty)) {
            _ if ty.is_o() => vec![SemVal::Bool(false), SemVal::Bool(true)],
            (Some(HolVar::Unk(x, ds)), _) => {
                self.bounded.set(true);
                unknown_domain(self.sig(), x, self.depth, &self.window)?
                    .into_iter()
                    .map(|t| SemVal::ren(abstract_all(ds, t)))
                    .collect()
            }
            (_, Some(sort)) => {
                self.bounded.set(true);
                ground_terms(self.sig(), &sort, self.depth, &self.window)?.into_iter().map(SemVal::ren).collect()
            }
            _ => return Err(SemError::NonEnumerable(ty.clone())),
        };
        for y in &domain {
            if !self.apply(pred, y)?.as_bool()? {
                return Ok(SemVal::Bool(false));
            }
        }
        Ok(SemVal::Bool(true))
    }
}

/// `(⋃ρᵢ)•(x₁,…,xₙ)` after moving every renamed atom of each component to a
/// fresh name, so that the domains are disjoint from each other and from
/// every other component.
pub fn merge_tuple(elems: &[RenElem]) -> RenElem {
    let elems: Vec<RenElem> = elems.iter().map(|e| e.normalized()).collect();
    let mut used = AtomSet::new();
    for e in &elems {
        used.extend(ground_support(&e.val));
        used.extend(e.rho.nontriv());
    }
    let mut rho = BTreeMap::new();
    let mut vals = Vec::with_capacity(elems.len());
    for e in &elems {
        let mut val = e.val.clone();
        for (c, img) in e.rho.moves() {
            let t = fresh_atom(&c.sort, &CofinAtomSet::Finite(used.clone()));
            used.insert(t.clone());
            val = val.perm_act(&Perm::swap_same(c, &t));
            rho.insert(t, img.clone());
        }
        vals.push(val);
    }
    let rho = Renaming::from_map(rho).expect("sorts preserved");
    RenElem::new(rho, PnlTerm::Tup(vals)).normalized()
}

fn hol_seeds(model: &HerbrandModel, rho: &HolValuation, t: &HolTerm) -> AtomSet {
    let mut vars = BTreeSet::new();
    t.all_vars(&mut vars);
    let mut seeds: AtomSet = vars
        .iter()
        .flat_map(|v| match v {
            HolVar::Atom(a) => vec![a.clone()],
            HolVar::Unk(_, ds) => ds.clone(),
            HolVar::Plain(..) => Vec::new(),
        })
        .collect();
    for v in rho.explicit().values() {
        seeds.extend(v.support());
    }
    seeds.extend(rho.fallback().support());
    seeds.extend(model.support());
    seeds
}

/// The value of a typable HOL term.
pub fn eval_hol(env: &TranslationEnv, model: &HerbrandModel, rho: &HolValuation, t: &HolTerm, cfg: &EvalConfig) -> Result<Evaluated, SemError> {
    hol_type_of(&env.hol, t)?;
    let window = cfg.window_or(&env.pnl, || hol_seeds(model, rho, t));
    let ev = Evaluator::new(env, model, cfg, window);
    let value = ev.eval(rho, t)?;
    Ok(Evaluated { value, exact: !ev.bounded.get() })
}

/// Applies a semantic function to an argument.
pub fn fn_apply(env: &TranslationEnv, model: &HerbrandModel, cfg: &EvalConfig, f: &SemVal, x: &SemVal) -> Result<SemVal, SemError> {
    let window = cfg.window_or(&env.pnl, AtomSet::new);
    Evaluator::new(env, model, cfg, window).apply(f, x)
}

/// `(ρ•f)(x)` computed through the given freshening pair `(ρ₁, ρ₂)` of
/// `nontriv(ρ)`: `(ρ₂∘ρ)•f(ρ₁•x)`. The pair must move `nontriv(ρ)` clear of
/// the supports of `f` and `x`.
pub fn fn_apply_renamed(
    env: &TranslationEnv,
    model: &HerbrandModel,
    cfg: &EvalConfig,
    rho: &Renaming,
    pair: &(Renaming, Renaming),
    f: &SemVal,
    x: &SemVal,
) -> Result<SemVal, SemError> {
    let y = fn_apply(env, model, cfg, f, &ren_act_sem(&pair.0, x))?;
    Ok(ren_act_sem(&pair.1.compose(rho), &y))
}

// ---------------------------------------------------------------------------
// The square

#[derive(Clone, Debug)]
pub enum SquareInput {
    Term(PnlTerm),
    Prop(PnlProp),
}

/// Both routes around the square and whether they agree.
#[derive(Clone, Debug)]
pub struct SquareVerdict {
    pub equal: bool,
    pub exact: bool,
    pub via_hol: String,
    pub via_pnl: String,
}

/// Evaluates `x` directly and through its translation at `D` under `D(ς)`,
/// and compares.
pub fn square_check(
    env: &TranslationEnv,
    model: &HerbrandModel,
    d: &CaptureContext,
    s: &Valuation,
    x: &SquareInput,
    cfg: &EvalConfig,
) -> Result<SquareVerdict, SemError> {
    fn captured<T: Capturable + fmt::Display>(d: &CaptureContext, x: &T) -> Result<(), SemError> {
        if capture_check(d, x, &AtomSet::new()) {
            Ok(())
        } else {
            Err(SemError::NotCaptured(x.to_string()))
        }
    }
    let rho = lift_valuation(d, s)?;
    match x {
        SquareInput::Term(r) => {
            captured(d, r)?;
            let direct = eval_pnl_term(model, s, r)?;
            let tr = translate(env, d, r)?;
            let via = eval_hol(env, model, &rho, &tr, cfg)?;
            let lhs = via.value.as_ren()?;
            let equal = ren_eq_capped(&lhs, &RenElem::id(direct.clone()), cfg.ren_cap)?;
            Ok(SquareVerdict { equal, exact: via.exact, via_hol: lhs.to_string(), via_pnl: RenElem::id(direct).to_string() })
        }
        SquareInput::Prop(p) => {
            captured(d, p)?;
            let mut seeds = pnl_seeds(model, s, p);
            seeds.extend(d.atoms().iter().cloned());
            let cfg = EvalConfig { window: cfg.window_or(&env.pnl, || seeds), ..cfg.clone() };
            let direct = eval_pnl_prop(model, s, p, &cfg)?;
            let tr = translate(env, d, p)?;
            let via = eval_hol(env, model, &rho, &tr, &cfg)?;
            let v = via.value.as_bool()?;
            Ok(SquareVerdict {
                equal: v == direct.value,
                exact: direct.exact && via.exact,
                via_hol: u8::from(v).to_string(),
                via_pnl: u8::from(direct.value).to_string(),
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Models over the saturated signature

/// The signature before saturation with the extra base sort `tau`:
/// drops `tau`, every term-former that mentions it, and the first argument
/// of every proposition-former.
pub fn desaturate_signature(sig_pi: &PnlSignature, tau: &Name) -> PnlSignature {
    fn mentions(s: &PnlSort, tau: &Name) -> bool {
        match s {
            PnlSort::Base(n) => n == tau,
            PnlSort::Name(_) => false,
            PnlSort::Tuple(xs) => xs.iter().any(|x| mentions(x, tau)),
            PnlSort::Abs(_, b) => mentions(b, tau),
        }
    }
    let mut out = sig_pi.clone();
    out.bases.remove(tau);
    out.formers.retain(|_, (arg, res)| res != tau && !mentions(arg, tau));
    for arg in out.preds.values_mut() {
        if let PnlSort::Tuple(xs) = arg {
            if xs.len() == 2 && xs[0] == PnlSort::Base(tau.clone()) {
                *arg = xs[1].clone();
            }
        }
    }
    out
}

/// Fixes the first predicate argument to `z`: a clause `(zpat, rpat) ↦ v`
/// survives as `rpat[bindings] ↦ v` when `z` matches `zpat`, and a lone
/// wildcard survives as a wildcard of the remaining sort.
pub fn convert_model(model_pi: &HerbrandModel, z: &PnlTerm) -> Result<HerbrandModel, SemError> {
    ensure_ground(z)?;
    let tau = match sort_of(&model_pi.sig, z)? {
        PnlSort::Base(t) => t,
        other => return Err(SemError::Mismatch { expected: "the extra base sort".into(), found: other.to_string() }),
    };
    let sig = desaturate_signature(&model_pi.sig, &tau);
    let mut out = HerbrandModel::new(&sig);
    for (p, spec) in &model_pi.preds {
        let arity = sig.preds.get(p).cloned().ok_or_else(|| SortError::UnknownPred(p.clone()))?;
        let mut clauses = Vec::new();
        for (pat, v) in &spec.clauses {
            match pat {
                PnlTerm::Tup(parts) if parts.len() == 2 => {
                    if let Some(binds) = match_pattern(&parts[0], z) {
                        clauses.push((parts[1].subst(&PnlSubst::unchecked(binds)), *v));
                    }
                }
                PnlTerm::Sus(..) => {
                    let w = Unknown::new(arity.clone(), PermissionSet::lower(), 0);
                    clauses.push((PnlTerm::unk(&w), *v));
                }
                other => {
                    return Err(SemError::BadPattern {
                        pred: p.clone(),
                        pattern: other.to_string(),
                        reason: "expected a pair or a lone wildcard".into(),
                    })
                }
            }
        }
        out.set_pred(p, PredSpec::new(clauses, spec.default))?;
    }
    Ok(out)
}

/// The saturated model's predicate at `(z, x)`, for comparison with the
/// converted model at `x`.
pub fn eval_saturated(model_pi: &HerbrandModel, p: &str, z: &PnlTerm, x: &PnlTerm) -> Result<bool, SemError> {
    model_pi.eval_pred(p, &PnlTerm::Tup(vec![z.clone(), x.clone()]))
}
