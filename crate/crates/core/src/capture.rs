//! Capture typing `D ⊢ x : A`, minimal-context inference, covering
//! contexts and the re-indexing substitution between contexts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::foundations::{join, Atom, AtomSet, PermissionSet};
use crate::hol::{Const, HolTerm, HolVar};
use crate::pnl::{PnlProp, PnlTerm, Unknown};

/// An ordered list of pairwise-distinct atoms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct CaptureContext(Vec<Atom>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CaptureError {
    #[error("atom {0} occurs twice in the context")]
    Duplicate(Atom),
    #[error("re-indexing from {from} to {to} needs the target context inside the source")]
    NotIncluded { from: CaptureContext, to: CaptureContext },
}

impl CaptureContext {
    pub fn empty() -> Self {
        CaptureContext(Vec::new())
    }

    pub fn new(atoms: Vec<Atom>) -> Result<Self, CaptureError> {
        let mut seen = AtomSet::new();
        for a in &atoms {
            if !seen.insert(a.clone()) {
                return Err(CaptureError::Duplicate(a.clone()));
            }
        }
        Ok(CaptureContext(atoms))
    }

    /// The set in ascending atom order.
    pub fn canonical(atoms: &AtomSet) -> Self {
        CaptureContext(atoms.iter().cloned().collect())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn to_set(&self) -> AtomSet {
        self.0.iter().cloned().collect()
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.0.contains(a)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `D_X`: the atoms of `D` inside the permission set, order kept.
    pub fn restrict(&self, s: &PermissionSet) -> Vec<Atom> {
        self.0.iter().filter(|a| s.contains(a)).cloned().collect()
    }

    /// This context followed by the atoms of `other` not already present.
    pub fn merge(&self, other: &CaptureContext) -> CaptureContext {
        let mut out = self.0.clone();
        for a in &other.0 {
            if !out.contains(a) {
                out.push(a.clone());
            }
        }
        CaptureContext(out)
    }

    pub fn is_subset_of(&self, other: &CaptureContext) -> bool {
        self.0.iter().all(|a| other.contains(a))
    }
}

impl fmt::Display for CaptureContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", join(&self.0, ", "))
    }
}

/// Syntax that carries capture typings.
pub trait Capturable {
    /// Decides `D ⊢ self : A` rule by rule.
    fn capture_check_in(&self, d: &AtomSet, a: &AtomSet) -> bool;
    /// Adds the atoms each suspension demands of `D` under the accumulated `A`.
    fn capture_demands(&self, a: &AtomSet, out: &mut AtomSet);
}

fn sus_demand(pi_moves: impl Iterator<Item = Atom>, x: &Unknown, a: &AtomSet) -> AtomSet {
    pi_moves.chain(a.iter().cloned()).filter(|c| x.pmss().contains(c)).collect()
}

impl Capturable for PnlTerm {
    fn capture_check_in(&self, d: &AtomSet, a: &AtomSet) -> bool {
        match self {
            PnlTerm::Atom(_) => true,
            PnlTerm::Tup(xs) => xs.iter().all(|x| x.capture_check_in(d, a)),
            PnlTerm::Former(_, t) => t.capture_check_in(d, a),
            PnlTerm::Abs(b, t) => {
                let mut a2 = a.clone();
                a2.insert(b.clone());
                t.capture_check_in(d, &a2)
            }
            PnlTerm::Sus(pi, x) => sus_demand(pi.nontriv().into_iter(), x, a).is_subset(d),
        }
    }

    fn capture_demands(&self, a: &AtomSet, out: &mut AtomSet) {
        match self {
            PnlTerm::Atom(_) => {}
            PnlTerm::Tup(xs) => xs.iter().for_each(|x| x.capture_demands(a, out)),
            PnlTerm::Former(_, t) => t.capture_demands(a, out),
            PnlTerm::Abs(b, t) => {
                let mut a2 = a.clone();
                a2.insert(b.clone());
                t.capture_demands(&a2, out)
            }
            PnlTerm::Sus(pi, x) => out.extend(sus_demand(pi.nontriv().into_iter(), x, a)),
        }
    }
}

impl Capturable for PnlProp {
    fn capture_check_in(&self, d: &AtomSet, a: &AtomSet) -> bool {
        match self {
            PnlProp::Bot => true,
            PnlProp::Imp(p, q) => p.capture_check_in(d, a) && q.capture_check_in(d, a),
            PnlProp::Pred(_, t) => t.capture_check_in(d, a),
            PnlProp::All(_, p) => p.capture_check_in(d, a),
        }
    }

    fn capture_demands(&self, a: &AtomSet, out: &mut AtomSet) {
        match self {
            PnlProp::Bot => {}
            PnlProp::Imp(p, q) => {
                p.capture_demands(a, out);
                q.capture_demands(a, out);
            }
            PnlProp::Pred(_, t) => t.capture_demands(a, out),
            PnlProp::All(_, p) => p.capture_demands(a, out),
        }
    }
}

pub fn capture_check<T: Capturable>(d: &CaptureContext, x: &T, a: &AtomSet) -> bool {
    x.capture_check_in(&d.to_set(), a)
}

/// The least set every capturing context must contain.
pub fn capture_infer<T: Capturable>(x: &T, a: &AtomSet) -> AtomSet {
    let mut out = AtomSet::new();
    x.capture_demands(a, &mut out);
    out
}

/// A single context capturing every given proposition.
pub fn capture_cover<'a>(props: impl IntoIterator<Item = &'a PnlProp>) -> CaptureContext {
    let mut all = AtomSet::new();
    for p in props {
        p.capture_demands(&AtomSet::new(), &mut all);
    }
    CaptureContext::canonical(&all)
}

/// The image of `X_{D'}` under re-indexing: `λD'_X.(X_D D_X)`.
fn reindex_image(x: &Unknown, from: &CaptureContext, to: &CaptureContext) -> HolTerm {
    let src = from.restrict(x.pmss());
    let dst = to.restrict(x.pmss());
    let body = HolTerm::apps(HolTerm::Var(HolVar::Unk(x.clone(), dst.clone())), dst.iter().map(HolTerm::atom));
    HolTerm::lams(&src, body)
}

/// `⟦D′ ↦ D⟧` on the given unknowns; variables outside the map are fixed.
pub fn reindex_subst(
    d_prime: &CaptureContext,
    d: &CaptureContext,
    unknowns: &BTreeSet<Unknown>,
) -> BTreeMap<HolVar, HolTerm> {
    let mut out = BTreeMap::new();
    for x in unknowns {
        let key = HolVar::Unk(x.clone(), d_prime.restrict(x.pmss()));
        let img = reindex_image(x, d_prime, d);
        if img != HolTerm::Var(key.clone()) {
            out.insert(key, img);
        }
    }
    out
}

/// Re-indexes a translated term from `D′` to `D`, including unknowns bound
/// by quantifiers: such binders move to their `D`-indexed variable and the
/// quantifier constant's type follows. Requires `D ⊆ D′`.
pub fn reindex_apply(t: &HolTerm, d_prime: &CaptureContext, d: &CaptureContext) -> Result<HolTerm, CaptureError> {
    if !d.is_subset_of(d_prime) {
        return Err(CaptureError::NotIncluded { from: d_prime.clone(), to: d.clone() });
    }
    Ok(reindex_walk(t, d_prime, d))
}

fn reindex_walk(t: &HolTerm, from: &CaptureContext, to: &CaptureContext) -> HolTerm {
    let matches_from = |x: &Unknown, ctx: &Vec<Atom>| *ctx == from.restrict(x.pmss());
    match t {
        HolTerm::Var(HolVar::Unk(x, ctx)) if matches_from(x, ctx) => reindex_image(x, from, to),
        HolTerm::Var(_) | HolTerm::Const(_) => t.clone(),
        HolTerm::Lam(HolVar::Unk(x, ctx), body) if matches_from(x, ctx) => {
            HolTerm::lam(HolVar::Unk(x.clone(), to.restrict(x.pmss())), reindex_walk(body, from, to))
        }
        HolTerm::Lam(v, body) => HolTerm::lam(v.clone(), reindex_walk(body, from, to)),
        HolTerm::App(f, a) => {
            let a2 = reindex_walk(a, from, to);
            match (&**f, &a2) {
                (HolTerm::Const(Const::Forall(_)), HolTerm::Lam(v, _)) => {
                    HolTerm::app(HolTerm::Const(Const::Forall(v.ty())), a2)
                }
                _ => HolTerm::app(reindex_walk(f, from, to), a2),
            }
        }
        HolTerm::Tup(xs) => HolTerm::Tup(xs.iter().map(|x| reindex_walk(x, from, to)).collect()),
    }
}
