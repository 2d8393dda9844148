//! Sequents, derivation trees and the trusted checkers for full PNL,
//! restricted PNL and HOL.
//!
//! Sequent sides are sets: a premise side is accepted when it equals the
//! conclusion side plus the new formula, with or without the principal
//! formula kept. Checking is linear in the tree; every rule carries its
//! parameters explicitly.

use std::fmt;

use crate::foundations::{set_subset, Perm};
use crate::hol::{alpha_eq_hol, hol_type_of, normalize, HolSignature, HolTerm, HolType};
use crate::pnl::{check_prop, sort_of, PnlProp, PnlSignature, PnlSubst, PnlTerm, Syntax};

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Sequent<F> {
    pub left: Vec<F>,
    pub right: Vec<F>,
}

impl<F> Sequent<F> {
    pub fn new(left: Vec<F>, right: Vec<F>) -> Self {
        Sequent { left, right }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &F> {
        self.left.iter().chain(self.right.iter())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Rule<W> {
    Ax { perm: Perm, left: usize, right: usize },
    BotL { index: usize },
    ImpL { index: usize },
    ImpR { index: usize },
    AllL { index: usize, witness: W },
    AllR { index: usize },
}

impl<W> Rule<W> {
    pub fn arity(&self) -> usize {
        match self {
            Rule::Ax { .. } | Rule::BotL { .. } => 0,
            Rule::ImpR { .. } | Rule::AllL { .. } | Rule::AllR { .. } => 1,
            Rule::ImpL { .. } => 2,
        }
    }

    pub fn name(&self, hol: bool) -> &'static str {
        match (self, hol) {
            (Rule::Ax { .. }, false) => "ax",
            (Rule::BotL { .. }, false) => "botl",
            (Rule::ImpL { .. }, false) => "impl",
            (Rule::ImpR { .. }, false) => "impr",
            (Rule::AllL { .. }, false) => "alll",
            (Rule::AllR { .. }, false) => "allr",
            (Rule::Ax { .. }, true) => "hax",
            (Rule::BotL { .. }, true) => "hbotl",
            (Rule::ImpL { .. }, true) => "himpl",
            (Rule::ImpR { .. }, true) => "himpr",
            (Rule::AllL { .. }, true) => "halll",
            (Rule::AllR { .. }, true) => "hallr",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation<F, W> {
    pub rule: Rule<W>,
    pub concl: Sequent<F>,
    pub children: Vec<Derivation<F, W>>,
}

pub type PnlDerivation = Derivation<PnlProp, PnlTerm>;
pub type HolDerivation = Derivation<HolTerm, HolTerm>;

impl<F, W> Derivation<F, W> {
    pub fn new(rule: Rule<W>, concl: Sequent<F>, children: Vec<Derivation<F, W>>) -> Self {
        Derivation { rule, concl, children }
    }

    pub fn nodes(&self) -> Vec<&Derivation<F, W>> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.nodes());
        }
        out
    }

    /// Rebuilds every sequent, keeping rules and shape.
    pub fn map_sequents<G, E>(
        &self,
        f: &mut impl FnMut(&Sequent<F>, &Rule<W>) -> Result<(Sequent<G>, Rule<W>), E>,
    ) -> Result<Derivation<G, W>, E> {
        let (concl, rule) = f(&self.concl, &self.rule)?;
        let children = self.children.iter().map(|c| c.map_sequents(f)).collect::<Result<_, _>>()?;
        Ok(Derivation { rule, concl, children })
    }
}

/// The first failing node: its child-index path from the root, rule name
/// and reason.
#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub struct Rejection {
    pub path: Vec<usize>,
    pub rule: &'static str,
    pub reason: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "rejected at /{} ({}): {}", path.join("/"), self.rule, self.reason)
    }
}

pub type Verdict = Result<(), Rejection>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Full,
    Restricted,
}

fn mem<F>(x: &F, xs: &[F], eq: &impl Fn(&F, &F) -> bool) -> bool {
    xs.iter().any(|y| eq(x, y))
}

/// Set equality of two lists under `eq`.
pub fn set_eq<F>(a: &[F], b: &[F], eq: &impl Fn(&F, &F) -> bool) -> bool {
    a.iter().all(|x| mem(x, b, eq)) && b.iter().all(|y| mem(y, a, eq))
}

/// Removes duplicates under `eq`; also returns each old index's new index.
pub fn dedup_by<F: Clone>(xs: &[F], eq: impl Fn(&F, &F) -> bool) -> (Vec<F>, Vec<usize>) {
    let mut out: Vec<F> = Vec::new();
    let mut map = Vec::with_capacity(xs.len());
    for x in xs {
        match out.iter().position(|y| eq(x, y)) {
            Some(i) => map.push(i),
            None => {
                map.push(out.len());
                out.push(x.clone());
            }
        }
    }
    (out, map)
}

/// `prem = (base \ {principal}) ∪ extra` or `prem = base ∪ extra`.
fn side_ok<F: Clone>(prem: &[F], base: &[F], principal: Option<&F>, extra: &[F], eq: &impl Fn(&F, &F) -> bool) -> bool {
    let mut with: Vec<F> = base.to_vec();
    with.extend(extra.iter().cloned());
    if set_eq(prem, &with, eq) {
        return true;
    }
    match principal {
        Some(p) => {
            let mut without: Vec<F> = base.iter().filter(|x| !eq(x, p)).cloned().collect();
            without.extend(extra.iter().cloned());
            set_eq(prem, &without, eq)
        }
        None => false,
    }
}

fn without<F: Clone>(xs: &[F], p: &F, eq: &impl Fn(&F, &F) -> bool) -> Vec<F> {
    xs.iter().filter(|x| !eq(x, p)).cloned().collect()
}

struct Walker<'a, F, W> {
    path: Vec<usize>,
    hol: bool,
    node: Option<&'a Derivation<F, W>>,
}

impl<F, W> Walker<'_, F, W> {
    fn reject(&self, reason: impl Into<String>) -> Rejection {
        let rule = self.node.map(|n| n.rule.name(self.hol)).unwrap_or("?");
        Rejection { path: self.path.clone(), rule, reason: reason.into() }
    }
}

fn get<'a, F>(xs: &'a [F], i: usize, side: &str) -> Result<&'a F, String> {
    xs.get(i).ok_or_else(|| format!("{side} index {i} out of range"))
}

/// Checks a PNL derivation against the full or restricted calculus.
pub fn check_pnl(sig: &PnlSignature, d: &PnlDerivation, mode: Mode) -> Verdict {
    let mut w = Walker { path: Vec::new(), hol: false, node: None };
    check_pnl_node(sig, d, mode, &mut w)
}

fn check_pnl_node<'a>(sig: &PnlSignature, d: &'a PnlDerivation, mode: Mode, w: &mut Walker<'a, PnlProp, PnlTerm>) -> Verdict {
    w.node = Some(d);
    for p in d.concl.formulas() {
        check_prop(sig, p).map_err(|e| w.reject(e.to_string()))?;
    }
    pnl_rule_ok(sig, d, mode).map_err(|r| w.reject(r))?;
    for (i, c) in d.children.iter().enumerate() {
        w.path.push(i);
        check_pnl_node(sig, c, mode, w)?;
        w.path.pop();
        w.node = Some(d);
    }
    Ok(())
}

fn pnl_rule_ok(sig: &PnlSignature, d: &PnlDerivation, mode: Mode) -> Result<(), String> {
    let eq = |a: &PnlProp, b: &PnlProp| a.alpha_eq(b);
    let (l, r) = (&d.concl.left, &d.concl.right);
    if d.children.len() != d.rule.arity() {
        return Err(format!("expected {} premises, found {}", d.rule.arity(), d.children.len()));
    }
    let prem = |i: usize| &d.children[i].concl;
    match &d.rule {
        Rule::Ax { perm, left, right } => {
            let (p, q) = (get(l, *left, "left")?, get(r, *right, "right")?);
            match mode {
                Mode::Full if p.perm_act(perm).alpha_eq(q) => Ok(()),
                Mode::Full => Err(format!("{perm} applied to {p} is not {q}")),
                Mode::Restricted if !perm.is_id() => Err(format!("the permutation {perm} is not allowed in the restricted calculus")),
                Mode::Restricted if p.alpha_eq(q) => Ok(()),
                Mode::Restricted => Err(format!("{p} and {q} differ")),
            }
        }
        Rule::BotL { index } => match get(l, *index, "left")? {
            PnlProp::Bot => Ok(()),
            other => Err(format!("{other} is not bot")),
        },
        Rule::ImpL { index } => {
            let p = get(l, *index, "left")?;
            let PnlProp::Imp(a, b) = p else { return Err(format!("{p} is not an implication")) };
            let (c1, c2) = (prem(0), prem(1));
            if !side_ok(&c1.left, l, Some(p), &[], &eq) || !side_ok(&c1.right, r, None, &[(**a).clone()], &eq) {
                return Err("first premise does not match".into());
            }
            if !side_ok(&c2.left, l, Some(p), &[(**b).clone()], &eq) || !set_eq(&c2.right, r, &eq) {
                return Err("second premise does not match".into());
            }
            Ok(())
        }
        Rule::ImpR { index } => {
            let p = get(r, *index, "right")?;
            let PnlProp::Imp(a, b) = p else { return Err(format!("{p} is not an implication")) };
            let c = prem(0);
            if !side_ok(&c.left, l, None, &[(**a).clone()], &eq) || !side_ok(&c.right, r, Some(p), &[(**b).clone()], &eq) {
                return Err("premise does not match".into());
            }
            Ok(())
        }
        Rule::AllL { index, witness } => {
            let p = get(l, *index, "left")?;
            let PnlProp::All(x, body) = p else { return Err(format!("{p} is not a quantifier")) };
            let s = sort_of(sig, witness).map_err(|e| e.to_string())?;
            if &s != x.sort() {
                return Err(format!("witness {witness} has sort {s}, expected {}", x.sort()));
            }
            if !set_subset(&witness.free_atoms(), &x.pmss().to_set()) {
                return Err(format!("free atoms of witness {witness} are not permitted in {x}"));
            }
            let theta = PnlSubst::single(sig, x, witness.clone()).map_err(|e| e.to_string())?;
            let inst = body.subst(&theta);
            let c = prem(0);
            if !side_ok(&c.left, l, Some(p), &[inst], &eq) || !set_eq(&c.right, r, &eq) {
                return Err("premise does not match the instance".into());
            }
            Ok(())
        }
        Rule::AllR { index } => {
            let p = get(r, *index, "right")?;
            let PnlProp::All(x, body) = p else { return Err(format!("{p} is not a quantifier")) };
            let rest = without(r, p, &eq);
            if l.iter().chain(rest.iter()).any(|q| q.free_unknowns().contains(x)) {
                return Err(format!("{x} is free in the context"));
            }
            let c = prem(0);
            if !set_eq(&c.left, l, &eq) || !side_ok(&c.right, r, Some(p), &[(**body).clone()], &eq) {
                return Err("premise does not match".into());
            }
            Ok(())
        }
    }
}

/// Checks a HOL derivation; formulas are compared up to αβ.
pub fn check_hol(sig: &HolSignature, d: &HolDerivation) -> Verdict {
    let mut w = Walker { path: Vec::new(), hol: true, node: None };
    check_hol_node(sig, d, &mut w)
}

fn normal_sequent(sig: &HolSignature, s: &Sequent<HolTerm>) -> Result<Sequent<HolTerm>, String> {
    let o = HolType::o();
    let norm = |xs: &[HolTerm]| -> Result<Vec<HolTerm>, String> {
        xs.iter()
            .map(|t| {
                let ty = hol_type_of(sig, t).map_err(|e| e.to_string())?;
                if ty != o {
                    return Err(format!("{t} has type {ty}, not o"));
                }
                Ok(normalize(t))
            })
            .collect()
    };
    Ok(Sequent { left: norm(&s.left)?, right: norm(&s.right)? })
}

fn check_hol_node<'a>(sig: &HolSignature, d: &'a HolDerivation, w: &mut Walker<'a, HolTerm, HolTerm>) -> Verdict {
    w.node = Some(d);
    let concl = normal_sequent(sig, &d.concl).map_err(|e| w.reject(e))?;
    let prems = d
        .children
        .iter()
        .map(|c| normal_sequent(sig, &c.concl))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| w.reject(format!("premise: {e}")))?;
    hol_rule_ok(sig, &d.rule, &concl, &prems).map_err(|r| w.reject(r))?;
    for (i, c) in d.children.iter().enumerate() {
        w.path.push(i);
        check_hol_node(sig, c, w)?;
        w.path.pop();
        w.node = Some(d);
    }
    Ok(())
}

fn hol_rule_ok(sig: &HolSignature, rule: &Rule<HolTerm>, concl: &Sequent<HolTerm>, prems: &[Sequent<HolTerm>]) -> Result<(), String> {
    let eq = |a: &HolTerm, b: &HolTerm| alpha_eq_hol(a, b);
    let (l, r) = (&concl.left, &concl.right);
    if prems.len() != rule.arity() {
        return Err(format!("expected {} premises, found {}", rule.arity(), prems.len()));
    }
    match rule {
        Rule::Ax { perm, left, right } => {
            if !perm.is_id() {
                return Err("the HOL axiom takes no permutation".into());
            }
            let (p, q) = (get(l, *left, "left")?, get(r, *right, "right")?);
            if alpha_eq_hol(p, q) {
                Ok(())
            } else {
                Err(format!("{p} and {q} differ"))
            }
        }
        Rule::BotL { index } => {
            let p = get(l, *index, "left")?;
            if p.is_bot() {
                Ok(())
            } else {
                Err(format!("{p} is not bot"))
            }
        }
        Rule::ImpL { index } => {
            let p = get(l, *index, "left")?;
            let (a, b) = p.as_imp().ok_or_else(|| format!("{p} is not an implication"))?;
            let (c1, c2) = (&prems[0], &prems[1]);
            if !side_ok(&c1.left, l, Some(p), &[], &eq) || !side_ok(&c1.right, r, None, &[a.clone()], &eq) {
                return Err("first premise does not match".into());
            }
            if !side_ok(&c2.left, l, Some(p), &[b.clone()], &eq) || !set_eq(&c2.right, r, &eq) {
                return Err("second premise does not match".into());
            }
            Ok(())
        }
        Rule::ImpR { index } => {
            let p = get(r, *index, "right")?;
            let (a, b) = p.as_imp().ok_or_else(|| format!("{p} is not an implication"))?;
            let c = &prems[0];
            if !side_ok(&c.left, l, None, &[a.clone()], &eq) || !side_ok(&c.right, r, Some(p), &[b.clone()], &eq) {
                return Err("premise does not match".into());
            }
            Ok(())
        }
        Rule::AllL { index, witness } => {
            let p = get(l, *index, "left")?;
            let (ty, u) = p.as_forall().ok_or_else(|| format!("{p} is not a quantifier"))?;
            let wty = hol_type_of(sig, witness).map_err(|e| e.to_string())?;
            if &wty != ty {
                return Err(format!("witness {witness} has type {wty}, expected {ty}"));
            }
            let inst = normalize(&HolTerm::app(u.clone(), witness.clone()));
            let c = &prems[0];
            if !side_ok(&c.left, l, Some(p), &[inst], &eq) || !set_eq(&c.right, r, &eq) {
                return Err("premise does not match the instance".into());
            }
            Ok(())
        }
        Rule::AllR { index } => {
            let p = get(r, *index, "right")?;
            let (_, u) = p.as_forall().ok_or_else(|| format!("{p} is not a quantifier"))?;
            let HolTerm::Lam(x, body) = u else { return Err(format!("{p} does not bind a variable")) };
            let rest = without(r, p, &eq);
            if l.iter().chain(rest.iter()).any(|q| q.free_vars().contains(x)) {
                return Err(format!("{x} is free in the context"));
            }
            let c = &prems[0];
            if !set_eq(&c.left, l, &eq) || !side_ok(&c.right, r, Some(p), &[(**body).clone()], &eq) {
                return Err("premise does not match".into());
            }
            Ok(())
        }
    }
}

fn is_atomic(t: &HolTerm) -> bool {
    !t.is_bot() && t.as_imp().is_none() && t.as_forall().is_none()
}

/// Decides derivability when every formula is atomic: only the axiom can
/// apply, so the sequent is derivable iff the sides share a formula.
/// `None` when some formula is not atomic.
pub fn atomic_probe(sig: &HolSignature, s: &Sequent<HolTerm>) -> Result<Option<bool>, String> {
    let n = normal_sequent(sig, s)?;
    if !n.formulas().all(is_atomic) {
        return Ok(None);
    }
    Ok(Some(n.left.iter().any(|p| n.right.iter().any(|q| alpha_eq_hol(p, q)))))
}

/// The input handed to a calculus.
pub enum DerivationInput<'a> {
    Pnl(&'a PnlSignature, &'a PnlDerivation),
    Hol(&'a HolSignature, &'a HolDerivation),
}

/// A derivation checker selectable by name.
pub trait Calculus: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn check(&self, input: &DerivationInput<'_>) -> Verdict;
}

fn wrong_input(what: &str) -> Rejection {
    Rejection { path: Vec::new(), rule: "?", reason: format!("expected a {what} derivation") }
}

struct PnlCalculus {
    mode: Mode,
}

impl Calculus for PnlCalculus {
    fn name(&self) -> &'static str {
        match self.mode {
            Mode::Full => "pnl-full",
            Mode::Restricted => "pnl-restricted",
        }
    }

    fn describe(&self) -> &'static str {
        match self.mode {
            Mode::Full => "permissive-nominal sequents with the equivariant axiom",
            Mode::Restricted => "permissive-nominal sequents with the permutation-free axiom",
        }
    }

    fn check(&self, input: &DerivationInput<'_>) -> Verdict {
        match input {
            DerivationInput::Pnl(sig, d) => check_pnl(sig, d, self.mode),
            DerivationInput::Hol(..) => Err(wrong_input("PNL")),
        }
    }
}

struct HolCalculus;

impl Calculus for HolCalculus {
    fn name(&self) -> &'static str {
        "hol"
    }

    fn describe(&self) -> &'static str {
        "higher-order sequents compared up to αβ"
    }

    fn check(&self, input: &DerivationInput<'_>) -> Verdict {
        match input {
            DerivationInput::Hol(sig, d) => check_hol(sig, d),
            DerivationInput::Pnl(..) => Err(wrong_input("HOL")),
        }
    }
}

pub struct Registry {
    entries: Vec<Box<dyn Calculus>>,
}

impl Default for Registry {
    fn default() -> Self {
        Registry {
            entries: vec![
                Box::new(PnlCalculus { mode: Mode::Full }),
                Box::new(PnlCalculus { mode: Mode::Restricted }),
                Box::new(HolCalculus),
            ],
        }
    }
}

impl Registry {
    pub fn register(&mut self, c: Box<dyn Calculus>) {
        self.entries.retain(|e| e.name() != c.name());
        self.entries.push(c);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Calculus> {
        self.entries.iter().find(|e| e.name() == name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundations::{Atom, PermissionSet};
    use crate::hol::{HolVar, Const};
    use crate::pnl::{PnlSort, Unknown};

    fn nu(i: i64) -> Atom {
        Atom::new("nu", i)
    }

    fn p_var(i: i64) -> PnlProp {
        PnlProp::pred("P", PnlTerm::former("var", PnlTerm::atom(&nu(i))))
    }

    fn leaf(rule: Rule<PnlTerm>, l: Vec<PnlProp>, r: Vec<PnlProp>) -> PnlDerivation {
        Derivation::new(rule, Sequent::new(l, r), vec![])
    }

    #[test]
    fn equivariant_axiom_only_in_full_mode() {
        let sig = PnlSignature::lambda_calculus();
        let d = leaf(Rule::Ax { perm: Perm::swap_same(&nu(0), &nu(1)), left: 0, right: 0 }, vec![p_var(0)], vec![p_var(1)]);
        assert!(check_pnl(&sig, &d, Mode::Full).is_ok());
        let err = check_pnl(&sig, &d, Mode::Restricted).unwrap_err();
        assert_eq!(err.rule, "ax");
        assert!(err.path.is_empty());
    }

    #[test]
    fn botl_leaf() {
        let sig = PnlSignature::lambda_calculus();
        assert!(check_pnl(&sig, &leaf(Rule::BotL { index: 0 }, vec![PnlProp::Bot], vec![]), Mode::Restricted).is_ok());
        assert!(check_pnl(&sig, &leaf(Rule::BotL { index: 0 }, vec![p_var(0)], vec![]), Mode::Restricted).is_err());
    }

    #[test]
    fn alll_and_allr() {
        let sig = PnlSignature::lambda_calculus();
        let x = Unknown::new(PnlSort::Base("iota".into()), PermissionSet::new([nu(0)], []), 0);
        let all = PnlProp::all(&x, PnlProp::pred("P", PnlTerm::unk(&x)));
        let w = PnlTerm::former("var", PnlTerm::atom(&nu(0)));
        let ax = leaf(Rule::Ax { perm: Perm::id(), left: 1, right: 0 }, vec![all.clone(), p_var(0)], vec![p_var(0)]);
        let d = Derivation::new(Rule::AllL { index: 0, witness: w }, Sequent::new(vec![all.clone()], vec![p_var(0)]), vec![ax.clone()]);
        assert!(check_pnl(&sig, &d, Mode::Restricted).is_ok());

        // The witness must be permitted by the unknown.
        let bad = Derivation::new(
            Rule::AllL { index: 0, witness: PnlTerm::former("var", PnlTerm::atom(&nu(1))) },
            Sequent::new(vec![all.clone()], vec![p_var(1)]),
            vec![leaf(Rule::Ax { perm: Perm::id(), left: 1, right: 0 }, vec![all.clone(), p_var(1)], vec![p_var(1)])],
        );
        assert!(check_pnl(&sig, &bad, Mode::Restricted).is_err());

        // ∀R with the bound unknown free on the left is rejected.
        let px = PnlProp::pred("P", PnlTerm::unk(&x));
        let prem = leaf(Rule::Ax { perm: Perm::id(), left: 0, right: 0 }, vec![px.clone()], vec![px.clone()]);
        let d = Derivation::new(Rule::AllR { index: 0 }, Sequent::new(vec![px], vec![all]), vec![prem]);
        let err = check_pnl(&sig, &d, Mode::Restricted).unwrap_err();
        assert_eq!(err.rule, "allr");
    }

    fn hsig() -> HolSignature {
        let mut s = HolSignature::new();
        s.bases.insert("nu".into());
        s.consts.insert("g_P".into(), HolType::arrow(HolType::base("nu"), HolType::o()));
        s
    }

    fn gp(t: HolTerm) -> HolTerm {
        HolTerm::app(HolTerm::named("g_P"), t)
    }

    #[test]
    fn hol_rules() {
        let sig = hsig();
        let a = HolTerm::atom(&nu(0));
        let hax = Derivation::new(Rule::Ax { perm: Perm::id(), left: 0, right: 0 }, Sequent::new(vec![gp(a.clone())], vec![gp(a.clone())]), vec![]);
        assert!(check_hol(&sig, &hax).is_ok());

        let x = HolVar::Plain(HolType::base("nu"), 0);
        let all = HolTerm::forall(x.clone(), gp(HolTerm::Var(x.clone())));
        let prem = Derivation::new(Rule::Ax { perm: Perm::id(), left: 1, right: 0 }, Sequent::new(vec![all.clone(), gp(a.clone())], vec![gp(a.clone())]), vec![]);
        let d = Derivation::new(Rule::AllL { index: 0, witness: a.clone() }, Sequent::new(vec![all.clone()], vec![gp(a.clone())]), vec![prem]);
        assert!(check_hol(&sig, &d).is_ok());

        let px = gp(HolTerm::Var(x.clone()));
        let prem = Derivation::new(Rule::Ax { perm: Perm::id(), left: 0, right: 0 }, Sequent::new(vec![px.clone()], vec![px.clone()]), vec![]);
        let d = Derivation::new(Rule::AllR { index: 0 }, Sequent::new(vec![px], vec![all]), vec![prem]);
        assert_eq!(check_hol(&sig, &d).unwrap_err().rule, "hallr");
    }

    #[test]
    fn hol_axiom_up_to_beta() {
        let sig = hsig();
        let a = HolTerm::atom(&nu(0));
        let redex = gp(HolTerm::app(HolTerm::lam(HolVar::Atom(nu(1)), HolTerm::atom(&nu(1))), a.clone()));
        let d = Derivation::new(Rule::Ax { perm: Perm::id(), left: 0, right: 0 }, Sequent::new(vec![redex], vec![gp(a)]), vec![]);
        assert!(check_hol(&sig, &d).is_ok());
    }

    #[test]
    fn probe_rejects_distinct_atoms() {
        let sig = hsig();
        let s = Sequent::new(vec![gp(HolTerm::atom(&nu(0)))], vec![gp(HolTerm::atom(&nu(1)))]);
        assert_eq!(atomic_probe(&sig, &s).unwrap(), Some(false));
        let s = Sequent::new(vec![HolTerm::Const(Const::Bot)], vec![]);
        assert_eq!(atomic_probe(&sig, &s).unwrap(), None);
    }

    #[test]
    fn registry_lookup() {
        let reg = Registry::default();
        assert_eq!(reg.names(), vec!["pnl-full", "pnl-restricted", "hol"]);
        assert!(reg.get("hol").is_some());
        assert!(reg.get("nope").is_none());
        let sig = PnlSignature::lambda_calculus();
        let d = leaf(Rule::BotL { index: 0 }, vec![PnlProp::Bot], vec![]);
        assert!(reg.get("pnl-full").unwrap().check(&DerivationInput::Pnl(&sig, &d)).is_ok());
        assert!(reg.get("hol").unwrap().check(&DerivationInput::Pnl(&sig, &d)).is_err());
    }
}
