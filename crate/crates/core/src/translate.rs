//! Translation of restricted PNL into HOL: signatures, terms,
//! propositions and whole derivations, plus erasure of the extra
//! predicate argument added by [`crate::pnl::pi_translate`].

use crate::capture::{capture_check, capture_cover, capture_infer, reindex_apply, CaptureContext, CaptureError};
use crate::foundations::{AtomSet, Name, Perm};
use crate::hol::{alpha_eq_hol, alphabeta_eq, HolSignature, HolTerm, HolType, HolVar};
use crate::kernel::{check_pnl, dedup_by, Derivation, HolDerivation, Mode, PnlDerivation, Rejection, Rule, Sequent};
use crate::pnl::{sort_of, check_prop, PnlProp, PnlSignature, PnlSort, PnlTerm, SortError, Syntax, Unknown};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error(transparent)]
    Sort(#[from] SortError),
    #[error("sort name {0} is reserved for HOL propositions")]
    ReservedSort(Name),
    #[error("the derivation is not a restricted derivation: {0}")]
    NotRestricted(Rejection),
    #[error("axiom at /{path} uses a permutation that changes {formula}; equivariant axiom steps have no HOL counterpart")]
    EquivariantAxiom { path: String, formula: String },
    #[error("the endsequent is not captured by {0}")]
    NotCaptured(CaptureContext),
    #[error(transparent)]
    Capture(#[from] CaptureError),
    #[error("predicate argument {0} is not a pair")]
    NotPair(String),
    #[error("axiom at /{path} moves atoms permitted in the extra unknown")]
    MovesPermitted { path: String },
    #[error("erased derivation fails the restricted check: {0}")]
    ErasureFailed(Rejection),
    #[error("re-indexing {formula} does not reach its translation at the target context")]
    Reindex { formula: String },
}

/// A PNL signature together with its HOL image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationEnv {
    pub pnl: PnlSignature,
    pub hol: HolSignature,
}

pub fn former_const(f: &str) -> Name {
    format!("g_{f}").into()
}

/// Every name and base sort becomes a base type; each term-former `f` gets
/// `g_f : ⌊α⌋ → τ` and each proposition-former `P` gets `g_P : ⌊α⌋ → o`.
pub fn translate_signature(sig: &PnlSignature) -> Result<TranslationEnv, TranslateError> {
    let mut hol = HolSignature::new();
    for s in sig.names.iter().chain(sig.bases.iter()) {
        if &**s == "o" {
            return Err(TranslateError::ReservedSort(s.clone()));
        }
        hol.bases.insert(s.clone());
    }
    for (f, (arg, res)) in &sig.formers {
        hol.consts.insert(former_const(f), HolType::arrow(HolType::of_sort(arg), HolType::Base(res.clone())));
    }
    for (p, arg) in &sig.preds {
        hol.consts.insert(former_const(p), HolType::arrow(HolType::of_sort(arg), HolType::o()));
    }
    Ok(TranslationEnv { pnl: sig.clone(), hol })
}

impl TranslationEnv {
    pub fn new(sig: &PnlSignature) -> Result<Self, TranslateError> {
        translate_signature(sig)
    }

    pub fn sort(&self, s: &PnlSort) -> HolType {
        HolType::of_sort(s)
    }
}

/// The variable `X_D`.
pub fn unknown_var(d: &CaptureContext, x: &Unknown) -> HolVar {
    HolVar::Unk(x.clone(), d.restrict(x.pmss()))
}

/// Syntax with a translation at a context.
pub trait Translatable {
    fn tr(&self, d: &CaptureContext) -> HolTerm;
    fn well_formed(&self, sig: &PnlSignature) -> Result<(), SortError>;
}

impl Translatable for PnlTerm {
    fn tr(&self, d: &CaptureContext) -> HolTerm {
        match self {
            PnlTerm::Atom(a) => HolTerm::atom(a),
            PnlTerm::Tup(xs) => HolTerm::Tup(xs.iter().map(|x| x.tr(d)).collect()),
            PnlTerm::Former(f, t) => HolTerm::app(HolTerm::named(&former_const(f)), t.tr(d)),
            PnlTerm::Abs(a, t) => HolTerm::lam(HolVar::Atom(a.clone()), t.tr(d)),
            PnlTerm::Sus(pi, x) => {
                let v = unknown_var(d, x);
                let args: Vec<HolTerm> = d.restrict(x.pmss()).iter().map(|a| HolTerm::atom(&pi.apply(a))).collect();
                HolTerm::apps(HolTerm::Var(v), args)
            }
        }
    }

    fn well_formed(&self, sig: &PnlSignature) -> Result<(), SortError> {
        sort_of(sig, self).map(|_| ())
    }
}

impl Translatable for PnlProp {
    fn tr(&self, d: &CaptureContext) -> HolTerm {
        match self {
            PnlProp::Bot => HolTerm::bot(),
            PnlProp::Imp(p, q) => HolTerm::imp(p.tr(d), q.tr(d)),
            PnlProp::Pred(n, t) => HolTerm::app(HolTerm::named(&former_const(n)), t.tr(d)),
            PnlProp::All(x, p) => HolTerm::forall(unknown_var(d, x), p.tr(d)),
        }
    }

    fn well_formed(&self, sig: &PnlSignature) -> Result<(), SortError> {
        check_prop(sig, self)
    }
}

/// `⌊x⌋^D` for well-sorted `x`. Total on well-sorted input; faithful when
/// `D` captures `x`.
pub fn translate<T: Translatable>(env: &TranslationEnv, d: &CaptureContext, x: &T) -> Result<HolTerm, TranslateError> {
    x.well_formed(&env.pnl)?;
    Ok(x.tr(d))
}

/// Evidence that the translated endsequent at `D′` re-indexes to the
/// translation at `D`.
#[derive(Clone, Debug)]
pub struct ReindexCertificate {
    pub d_prime: CaptureContext,
    pub d: CaptureContext,
    pub at_d_prime: Sequent<HolTerm>,
    pub reindexed: Sequent<HolTerm>,
    pub at_d: Sequent<HolTerm>,
}

impl ReindexCertificate {
    /// Re-checks the certificate: each re-indexed formula is αβ-equal to
    /// its counterpart at `D`.
    pub fn verify(&self) -> bool {
        let pair = |a: &[HolTerm], b: &[HolTerm]| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| alphabeta_eq(x, y));
        pair(&self.reindexed.left, &self.at_d.left) && pair(&self.reindexed.right, &self.at_d.right)
    }
}

fn path_string(path: &[usize]) -> String {
    path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("/")
}

/// Normalizes axiom permutations that leave the formula unchanged to the
/// identity, and rejects those that do not.
fn strip_harmless_perms(d: &PnlDerivation, path: &mut Vec<usize>) -> Result<PnlDerivation, TranslateError> {
    let rule = match &d.rule {
        Rule::Ax { perm, left, right } if !perm.is_id() => {
            if let Some(p) = d.concl.left.get(*left) {
                if !p.perm_act(perm).alpha_eq(p) {
                    return Err(TranslateError::EquivariantAxiom { path: path_string(path), formula: p.to_string() });
                }
            }
            Rule::Ax { perm: Perm::id(), left: *left, right: *right }
        }
        other => other.clone(),
    };
    let mut children = Vec::new();
    for (i, c) in d.children.iter().enumerate() {
        path.push(i);
        children.push(strip_harmless_perms(c, path)?);
        path.pop();
    }
    Ok(Derivation::new(rule, d.concl.clone(), children))
}

/// Translates a restricted derivation at a covering context `D′` that
/// extends `D`, node by node, and certifies that the endsequent re-indexes
/// to its translation at `D`.
pub fn translate_derivation(
    env: &TranslationEnv,
    pi: &PnlDerivation,
    d: &CaptureContext,
) -> Result<(HolDerivation, ReindexCertificate), TranslateError> {
    let pi = strip_harmless_perms(pi, &mut Vec::new())?;
    check_pnl(&env.pnl, &pi, Mode::Restricted).map_err(TranslateError::NotRestricted)?;
    if !pi.concl.formulas().all(|p| capture_check(d, p, &AtomSet::new())) {
        return Err(TranslateError::NotCaptured(d.clone()));
    }
    let nodes = pi.nodes();
    let mut cover = capture_cover(nodes.iter().flat_map(|n| n.concl.formulas()));
    for n in &nodes {
        if let Rule::AllL { witness, .. } = &n.rule {
            let extra = capture_infer(witness, &AtomSet::new());
            cover = cover.merge(&CaptureContext::canonical(&extra));
        }
    }
    let d_prime = d.merge(&cover);
    let hol = translate_node(&pi, &d_prime);

    let tr_side = |xs: &[PnlProp], c: &CaptureContext| xs.iter().map(|p| p.tr(c)).collect::<Vec<_>>();
    let at_d_prime = Sequent::new(tr_side(&pi.concl.left, &d_prime), tr_side(&pi.concl.right, &d_prime));
    let re = |xs: &[HolTerm]| xs.iter().map(|t| reindex_apply(t, &d_prime, d)).collect::<Result<Vec<_>, _>>();
    let reindexed = Sequent::new(re(&at_d_prime.left)?, re(&at_d_prime.right)?);
    let at_d = Sequent::new(tr_side(&pi.concl.left, d), tr_side(&pi.concl.right, d));
    let cert = ReindexCertificate { d_prime, d: d.clone(), at_d_prime, reindexed, at_d };
    if !cert.verify() {
        let bad = pi.concl.formulas().next().map(|p| p.to_string()).unwrap_or_default();
        return Err(TranslateError::Reindex { formula: bad });
    }
    Ok((hol, cert))
}

fn translate_node(n: &PnlDerivation, dp: &CaptureContext) -> HolDerivation {
    let eq = |a: &HolTerm, b: &HolTerm| alpha_eq_hol(a, b);
    let left: Vec<HolTerm> = n.concl.left.iter().map(|p| p.tr(dp)).collect();
    let right: Vec<HolTerm> = n.concl.right.iter().map(|p| p.tr(dp)).collect();
    let (left, lmap) = dedup_by(&left, eq);
    let (right, rmap) = dedup_by(&right, eq);
    let lm = |i: &usize| lmap.get(*i).copied().unwrap_or(*i);
    let rm = |i: &usize| rmap.get(*i).copied().unwrap_or(*i);
    let rule = match &n.rule {
        Rule::Ax { left, right, .. } => Rule::Ax { perm: Perm::id(), left: lm(left), right: rm(right) },
        Rule::BotL { index } => Rule::BotL { index: lm(index) },
        Rule::ImpL { index } => Rule::ImpL { index: lm(index) },
        Rule::ImpR { index } => Rule::ImpR { index: rm(index) },
        Rule::AllR { index } => Rule::AllR { index: rm(index) },
        Rule::AllL { index, witness } => {
            let x = match n.concl.left.get(*index) {
                Some(PnlProp::All(x, _)) => x.clone(),
                _ => unreachable!("checked by the restricted kernel"),
            };
            Rule::AllL { index: lm(index), witness: HolTerm::lams(&dp.restrict(x.pmss()), witness.tr(dp)) }
        }
    };
    let children = n.children.iter().map(|c| translate_node(c, dp)).collect();
    Derivation::new(rule, Sequent::new(left, right), children)
}

fn strip_pi(p: &PnlProp) -> Result<PnlProp, TranslateError> {
    Ok(match p {
        PnlProp::Bot => PnlProp::Bot,
        PnlProp::Imp(a, b) => PnlProp::imp(strip_pi(a)?, strip_pi(b)?),
        PnlProp::All(x, b) => PnlProp::all(x, strip_pi(b)?),
        PnlProp::Pred(n, PnlTerm::Tup(xs)) if xs.len() == 2 => PnlProp::Pred(n.clone(), xs[1].clone()),
        PnlProp::Pred(_, t) => return Err(TranslateError::NotPair(t.to_string())),
    })
}

fn erase_node(n: &PnlDerivation, zpi: &Unknown, path: &mut Vec<usize>) -> Result<PnlDerivation, TranslateError> {
    let strip = |xs: &[PnlProp]| xs.iter().map(strip_pi).collect::<Result<Vec<_>, _>>();
    let eq = |a: &PnlProp, b: &PnlProp| a.alpha_eq(b);
    let (left, lmap) = dedup_by(&strip(&n.concl.left)?, eq);
    let (right, rmap) = dedup_by(&strip(&n.concl.right)?, eq);
    let lm = |i: &usize| lmap.get(*i).copied().unwrap_or(*i);
    let rm = |i: &usize| rmap.get(*i).copied().unwrap_or(*i);
    let rule = match &n.rule {
        Rule::Ax { perm, left, right } => {
            if perm.nontriv().iter().any(|a| zpi.pmss().contains(a)) {
                return Err(TranslateError::MovesPermitted { path: path_string(path) });
            }
            Rule::Ax { perm: Perm::id(), left: lm(left), right: rm(right) }
        }
        Rule::BotL { index } => Rule::BotL { index: lm(index) },
        Rule::ImpL { index } => Rule::ImpL { index: lm(index) },
        Rule::ImpR { index } => Rule::ImpR { index: rm(index) },
        Rule::AllL { index, witness } => Rule::AllL { index: lm(index), witness: witness.clone() },
        Rule::AllR { index } => Rule::AllR { index: rm(index) },
    };
    let mut children = Vec::new();
    for (i, c) in n.children.iter().enumerate() {
        path.push(i);
        children.push(erase_node(c, zpi, path)?);
        path.pop();
    }
    Ok(Derivation::new(rule, Sequent::new(left, right), children))
}

/// Deletes the extra first predicate argument from a full-PNL derivation
/// over the saturated signature, turning each axiom into the
/// permutation-free axiom; the result is checked against `sig`.
pub fn erase_pi(sig: &PnlSignature, pi: &PnlDerivation, zpi: &Unknown) -> Result<PnlDerivation, TranslateError> {
    let out = erase_node(pi, zpi, &mut Vec::new())?;
    check_pnl(sig, &out, Mode::Restricted).map_err(TranslateError::ErasureFailed)?;
    Ok(out)
}
