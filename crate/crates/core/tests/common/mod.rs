//! Seeded generators and independent oracles shared by the integration
//! suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nomhol::capture::{capture_check, capture_infer, CaptureContext};
use nomhol::foundations::{Atom, AtomSet, CofinAtomSet, Perm, PermissionSet, Renaming};
use nomhol::hol::{Const, HolTerm, HolType, HolVar};
use nomhol::pnl::{PnlProp, PnlSignature, PnlSort, PnlSubst, PnlTerm, Syntax, Unknown};
use nomhol::semantics::{HerbrandModel, SquareInput, Valuation};
use nomhol::translate::Translatable;

pub fn nu(i: i64) -> Atom {
    Atom::new("nu", i)
}

pub fn iota() -> PnlSort {
    PnlSort::Base("iota".into())
}

pub fn abs_sort() -> PnlSort {
    PnlSort::abs(&"nu".into(), iota())
}

pub fn var(a: &Atom) -> PnlTerm {
    PnlTerm::former("var", PnlTerm::atom(a))
}

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn corpus_files(sub: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(corpus_dir().join(sub))
        .expect("corpus directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().map(|e| e == "sexp").unwrap_or(false))
        .collect();
    v.sort();
    v
}

/// Deterministic random syntax over the λ-calculus signature.
pub struct Gen {
    pub rng: ChaCha8Rng,
    /// Atoms `nu@-r ..= nu@r`.
    pub radius: i64,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed), radius: 2 }
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn atom(&mut self) -> Atom {
        nu(self.rng.gen_range(-self.radius..=self.radius))
    }

    pub fn window(&self) -> Vec<Atom> {
        (-self.radius..=self.radius).map(nu).collect()
    }

    pub fn pmss(&mut self) -> PermissionSet {
        let plus: Vec<Atom> = (0..=self.radius).filter(|_| self.rng.gen_bool(0.5)).map(nu).collect();
        let minus: Vec<Atom> = (1..=self.radius).filter(|_| self.rng.gen_bool(0.25)).map(|i| nu(-i)).collect();
        PermissionSet::new(plus, minus)
    }

    /// Between one and `max` unknowns of sort ι with random permission sets.
    pub fn unknowns(&mut self, max: usize) -> Vec<Unknown> {
        let n = self.rng.gen_range(1..=max);
        (0..n).map(|i| Unknown::new(iota(), self.pmss(), i as u32)).collect()
    }

    /// A random permutation of the atom window.
    pub fn perm(&mut self) -> Perm {
        let k = self.rng.gen_range(0..=3usize);
        let mut atoms = self.window();
        atoms.shuffle(&mut self.rng);
        let chosen: Vec<Atom> = atoms.into_iter().take(k).collect();
        if chosen.len() < 2 {
            return Perm::id();
        }
        let mut image = chosen.clone();
        image.shuffle(&mut self.rng);
        let map: BTreeMap<Atom, Atom> = chosen.into_iter().zip(image).collect();
        Perm::from_map(map).expect("shuffle is a bijection")
    }

    /// A term of sort ι.
    pub fn term(&mut self, pool: &[Unknown], depth: usize) -> PnlTerm {
        let leaf = depth == 0;
        let choice = if leaf { self.rng.gen_range(0..2) } else { self.rng.gen_range(0..6) };
        match choice {
            0 => var(&self.atom()),
            1 if !pool.is_empty() => {
                let x = pool.choose(&mut self.rng).unwrap().clone();
                PnlTerm::sus(self.perm(), &x)
            }
            1 => var(&self.atom()),
            2 => PnlTerm::former("app", PnlTerm::Tup(vec![self.term(pool, depth - 1), self.term(pool, depth - 1)])),
            3 => PnlTerm::former("lam", self.abs_term(pool, depth - 1)),
            4 => PnlTerm::former("sub", PnlTerm::Tup(vec![self.abs_term(pool, depth - 1), self.term(pool, depth - 1)])),
            _ => PnlTerm::former("lam", self.abs_term(pool, depth - 1)),
        }
    }

    /// A term of sort `[ν]ι`.
    pub fn abs_term(&mut self, pool: &[Unknown], depth: usize) -> PnlTerm {
        let a = self.atom();
        PnlTerm::abs(&a, self.term(pool, depth))
    }

    pub fn prop(&mut self, pool: &[Unknown], depth: usize) -> PnlProp {
        let choice = if depth == 0 { self.rng.gen_range(0..4) } else { self.rng.gen_range(0..7) };
        let d = depth.saturating_sub(1);
        match choice {
            0 => PnlProp::pred("P", self.term(pool, d)),
            1 => PnlProp::pred("eq", PnlTerm::Tup(vec![self.term(pool, d), self.term(pool, d)])),
            2 => PnlProp::pred("Q", self.abs_term(pool, d)),
            3 => PnlProp::Bot,
            4 => PnlProp::imp(self.prop(pool, d), self.prop(pool, d)),
            5 if !pool.is_empty() => {
                let x = pool.choose(&mut self.rng).unwrap().clone();
                PnlProp::all(&x, self.prop(pool, d))
            }
            _ => PnlProp::pred("equal", PnlTerm::Tup(vec![self.abs_term(pool, d), self.abs_term(pool, d)])),
        }
    }

    pub fn quantifier_free_prop(&mut self, pool: &[Unknown], depth: usize) -> PnlProp {
        let choice = if depth == 0 { self.rng.gen_range(0..4) } else { self.rng.gen_range(0..6) };
        let d = depth.saturating_sub(1);
        match choice {
            0 => PnlProp::pred("P", self.term(pool, d)),
            1 => PnlProp::pred("eq", PnlTerm::Tup(vec![self.term(pool, d), self.term(pool, d)])),
            2 => PnlProp::pred("Q", self.abs_term(pool, d)),
            3 => PnlProp::pred("equal", PnlTerm::Tup(vec![self.abs_term(pool, d), self.abs_term(pool, d)])),
            4 => PnlProp::imp(self.quantifier_free_prop(pool, d), self.quantifier_free_prop(pool, d)),
            _ => PnlProp::Bot,
        }
    }

    pub fn ground_term(&mut self, depth: usize) -> PnlTerm {
        self.term(&[], depth)
    }

    /// A ground term whose free atoms are permitted by `s`.
    pub fn ground_within(&mut self, s: &PermissionSet, depth: usize) -> PnlTerm {
        for _ in 0..64 {
            let t = self.ground_term(depth);
            if nomhol::foundations::set_subset(&t.free_atoms(), &s.to_set()) {
                return t;
            }
        }
        let a = self.window().into_iter().chain((-64..=64).map(nu)).find(|a| s.contains(a)).expect("permission sets are infinite");
        var(&a)
    }

    /// A random list of distinct window atoms in random order.
    pub fn context(&mut self) -> CaptureContext {
        let mut atoms: Vec<Atom> = self.window().into_iter().filter(|_| self.rng.gen_bool(0.5)).collect();
        atoms.shuffle(&mut self.rng);
        CaptureContext::new(atoms).expect("distinct")
    }

    /// A permutation moving only atoms outside `s`.
    pub fn perm_outside(&mut self, s: &PermissionSet) -> Perm {
        let mut outside: Vec<Atom> = (-self.radius..=self.radius).map(nu).filter(|a| !s.contains(a)).collect();
        outside.shuffle(&mut self.rng);
        let chosen: Vec<Atom> = outside.into_iter().take(self.rng.gen_range(0..=3)).collect();
        if chosen.len() < 2 {
            return Perm::id();
        }
        let mut image = chosen.clone();
        image.rotate_left(1);
        Perm::from_map(chosen.into_iter().zip(image).collect()).unwrap()
    }

    /// An α-variant: renames binders to fresh atoms, rewrites suspensions
    /// outside their permission sets, and renames bound unknowns.
    pub fn alpha_variant_term(&mut self, t: &PnlTerm) -> PnlTerm {
        match t {
            PnlTerm::Atom(_) => t.clone(),
            PnlTerm::Tup(xs) => PnlTerm::Tup(xs.iter().map(|x| self.alpha_variant_term(x)).collect()),
            PnlTerm::Former(f, x) => PnlTerm::Former(f.clone(), Box::new(self.alpha_variant_term(x))),
            PnlTerm::Abs(a, body) => {
                let body = self.alpha_variant_term(body);
                let b = self.atom();
                if b != *a && self.chance(0.7) && !body.free_atoms().contains(&b) {
                    PnlTerm::abs(&b, body.perm_act(&Perm::swap_same(&b, a)))
                } else {
                    PnlTerm::abs(a, body)
                }
            }
            PnlTerm::Sus(pi, x) => {
                let tau = self.perm_outside(x.pmss());
                PnlTerm::Sus(pi.compose(&tau), x.clone())
            }
        }
    }

    pub fn alpha_variant_prop(&mut self, p: &PnlProp) -> PnlProp {
        match p {
            PnlProp::Bot => PnlProp::Bot,
            PnlProp::Imp(a, b) => PnlProp::imp(self.alpha_variant_prop(a), self.alpha_variant_prop(b)),
            PnlProp::Pred(n, t) => PnlProp::Pred(n.clone(), self.alpha_variant_term(t)),
            PnlProp::All(x, body) => {
                let body = self.alpha_variant_prop(body);
                if self.chance(0.6) {
                    let mut used = BTreeSet::new();
                    body.mentioned_unknowns(&mut used);
                    let y = (100..).map(|i| x.with_index(i)).find(|y| !used.contains(y)).unwrap();
                    let pp = nomhol::pnl::Perm2::swap(x, &y).unwrap();
                    PnlProp::all(&y, body.perm2_act(&pp))
                } else {
                    PnlProp::all(x, body)
                }
            }
        }
    }

    /// A small random edit that usually breaks α-equivalence.
    pub fn mutate_term(&mut self, t: &PnlTerm) -> PnlTerm {
        match t {
            PnlTerm::Atom(_) => PnlTerm::Atom(self.atom()),
            PnlTerm::Tup(xs) => {
                let i = self.rng.gen_range(0..xs.len());
                let mut ys = xs.clone();
                ys[i] = self.mutate_term(&xs[i]);
                PnlTerm::Tup(ys)
            }
            PnlTerm::Former(f, x) => PnlTerm::Former(f.clone(), Box::new(self.mutate_term(x))),
            PnlTerm::Abs(a, body) => {
                if self.chance(0.3) {
                    PnlTerm::abs(&self.atom(), (**body).clone())
                } else {
                    PnlTerm::abs(a, self.mutate_term(body))
                }
            }
            PnlTerm::Sus(_, x) => PnlTerm::Sus(self.perm(), x.clone()),
        }
    }

    pub fn mutate_prop(&mut self, p: &PnlProp) -> PnlProp {
        match p {
            PnlProp::Bot => PnlProp::pred("P", var(&self.atom())),
            PnlProp::Imp(a, b) => {
                if self.chance(0.5) {
                    PnlProp::imp(self.mutate_prop(a), (**b).clone())
                } else {
                    PnlProp::imp((**a).clone(), self.mutate_prop(b))
                }
            }
            PnlProp::Pred(n, t) => PnlProp::Pred(n.clone(), self.mutate_term(t)),
            PnlProp::All(x, body) => PnlProp::all(x, self.mutate_prop(body)),
        }
    }
}

// ---------------------------------------------------------------------------
// α-equivalence oracle: rename every binder to a canonical fresh name in
// traversal order, then compare suspensions by their action on the
// permission set.

fn swap_atom(c: &Atom, a: &Atom, x: &Atom) -> Atom {
    if x == a {
        c.clone()
    } else if x == c {
        a.clone()
    } else {
        x.clone()
    }
}

fn swap_in_term(c: &Atom, a: &Atom, t: &PnlTerm) -> PnlTerm {
    match t {
        PnlTerm::Atom(x) => PnlTerm::Atom(swap_atom(c, a, x)),
        PnlTerm::Tup(xs) => PnlTerm::Tup(xs.iter().map(|x| swap_in_term(c, a, x)).collect()),
        PnlTerm::Former(f, x) => PnlTerm::Former(f.clone(), Box::new(swap_in_term(c, a, x))),
        PnlTerm::Abs(b, x) => PnlTerm::Abs(swap_atom(c, a, b), Box::new(swap_in_term(c, a, x))),
        PnlTerm::Sus(pi, x) => {
            let map: BTreeMap<Atom, Atom> = support_of(pi, c, a)
                .into_iter()
                .map(|y| (y.clone(), swap_atom(c, a, &pi.apply(&y))))
                .collect();
            PnlTerm::Sus(Perm::from_map(map).unwrap(), x.clone())
        }
    }
}

fn support_of(pi: &Perm, c: &Atom, a: &Atom) -> AtomSet {
    let mut s: AtomSet = pi.nontriv();
    s.insert(c.clone());
    s.insert(a.clone());
    s
}

fn rename_unknown_term(x: &Unknown, y: &Unknown, t: &PnlTerm) -> PnlTerm {
    match t {
        PnlTerm::Atom(_) => t.clone(),
        PnlTerm::Tup(xs) => PnlTerm::Tup(xs.iter().map(|z| rename_unknown_term(x, y, z)).collect()),
        PnlTerm::Former(f, z) => PnlTerm::Former(f.clone(), Box::new(rename_unknown_term(x, y, z))),
        PnlTerm::Abs(b, z) => PnlTerm::Abs(b.clone(), Box::new(rename_unknown_term(x, y, z))),
        PnlTerm::Sus(pi, z) if z == x => PnlTerm::Sus(pi.clone(), y.clone()),
        PnlTerm::Sus(..) => t.clone(),
    }
}

fn rename_unknown_prop(x: &Unknown, y: &Unknown, p: &PnlProp) -> PnlProp {
    match p {
        PnlProp::Bot => PnlProp::Bot,
        PnlProp::Imp(a, b) => PnlProp::imp(rename_unknown_prop(x, y, a), rename_unknown_prop(x, y, b)),
        PnlProp::Pred(n, t) => PnlProp::Pred(n.clone(), rename_unknown_term(x, y, t)),
        PnlProp::All(z, b) if z == x => PnlProp::All(z.clone(), b.clone()),
        PnlProp::All(z, b) => PnlProp::all(z, rename_unknown_prop(x, y, b)),
    }
}

/// Canonical form: binders become `nu@(1000 + k)` and bound unknowns get
/// index `1000 + k` in traversal order; suspensions keep only their action
/// on the permission set.
#[derive(Debug, PartialEq, Eq)]
pub enum Canon {
    Atom(Atom),
    Tup(Vec<Canon>),
    Former(String, Box<Canon>),
    Abs(Atom, Box<Canon>),
    Sus(Vec<(Atom, Atom)>, Unknown),
    Bot,
    Imp(Box<Canon>, Box<Canon>),
    Pred(String, Box<Canon>),
    All(Unknown, Box<Canon>),
}

pub fn canon_term(t: &PnlTerm, k: &mut i64) -> Canon {
    match t {
        PnlTerm::Atom(a) => Canon::Atom(a.clone()),
        PnlTerm::Tup(xs) => Canon::Tup(xs.iter().map(|x| canon_term(x, k)).collect()),
        PnlTerm::Former(f, x) => Canon::Former(f.to_string(), Box::new(canon_term(x, k))),
        PnlTerm::Abs(a, x) => {
            let c = Atom::with_sort(&a.sort, 1000 + *k);
            *k += 1;
            let body = swap_in_term(&c, a, x);
            Canon::Abs(c, Box::new(canon_term(&body, k)))
        }
        PnlTerm::Sus(pi, x) => {
            let moved: Vec<(Atom, Atom)> =
                pi.nontriv().into_iter().filter(|a| x.pmss().contains(a)).map(|a| (a.clone(), pi.apply(&a))).collect();
            Canon::Sus(moved, x.clone())
        }
    }
}

pub fn canon_prop(p: &PnlProp, k: &mut i64) -> Canon {
    match p {
        PnlProp::Bot => Canon::Bot,
        PnlProp::Imp(a, b) => {
            let ca = canon_prop(a, k);
            Canon::Imp(Box::new(ca), Box::new(canon_prop(b, k)))
        }
        PnlProp::Pred(n, t) => Canon::Pred(n.to_string(), Box::new(canon_term(t, k))),
        PnlProp::All(x, b) => {
            let y = x.with_index(1000 + *k as u32);
            *k += 1;
            let body = rename_unknown_prop(x, &y, b);
            Canon::All(y, Box::new(canon_prop(&body, k)))
        }
    }
}

pub fn oracle_alpha_term(a: &PnlTerm, b: &PnlTerm) -> bool {
    canon_term(a, &mut 0) == canon_term(b, &mut 0)
}

pub fn oracle_alpha_prop(a: &PnlProp, b: &PnlProp) -> bool {
    canon_prop(a, &mut 0) == canon_prop(b, &mut 0)
}

// ---------------------------------------------------------------------------
// Capture oracle: the least capturing set found by brute force over subsets
// of the atoms a term can demand.

pub fn oracle_capture_minimal<F: Fn(&CaptureContext) -> bool>(candidates: &[Atom], accepts: F) -> Option<AtomSet> {
    let n = candidates.len();
    let mut best: Option<AtomSet> = None;
    for mask in 0u32..(1 << n) {
        let set: Vec<Atom> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| candidates[i].clone()).collect();
        let ctx = CaptureContext::new(set.clone()).unwrap();
        if accepts(&ctx) && best.as_ref().map(|b| set.len() < b.len()).unwrap_or(true) {
            best = Some(set.into_iter().collect());
        }
    }
    best
}

// ---------------------------------------------------------------------------
// HOL generators and a random-order β-reducer.

pub fn ty_nu() -> HolType {
    HolType::base("nu")
}

pub fn ty_iota() -> HolType {
    HolType::base("iota")
}

pub struct HolGen {
    pub g: Gen,
    next_plain: u32,
}

impl HolGen {
    pub fn new(seed: u64) -> Self {
        HolGen { g: Gen::new(seed), next_plain: 0 }
    }

    pub fn ty(&mut self, depth: usize) -> HolType {
        match if depth == 0 { self.g.rng.gen_range(0..3) } else { self.g.rng.gen_range(0..5) } {
            0 => ty_nu(),
            1 => ty_iota(),
            2 => HolType::o(),
            3 => HolType::arrow(self.ty(depth - 1), self.ty(depth - 1)),
            _ => HolType::Tuple(vec![self.ty(depth - 1), self.ty(depth - 1)]),
        }
    }

    fn fresh(&mut self, ty: &HolType) -> HolVar {
        if *ty == ty_nu() && self.g.chance(0.5) {
            let a = nu(50 + self.next_plain as i64);
            self.next_plain += 1;
            return HolVar::Atom(a);
        }
        self.next_plain += 1;
        HolVar::Plain(ty.clone(), self.next_plain)
    }

    /// A closed-over-`env` term of type `ty`, with β-redexes sprinkled in.
    pub fn term(&mut self, ty: &HolType, env: &[HolVar], depth: usize) -> HolTerm {
        let here: Vec<&HolVar> = env.iter().filter(|v| v.ty() == *ty).collect();
        if depth == 0 || self.g.chance(0.2) {
            if let Some(v) = here.choose(&mut self.g.rng) {
                return HolTerm::Var((*v).clone());
            }
            return self.base_leaf(ty, env);
        }
        match self.g.rng.gen_range(0..4) {
            0 => {
                let arg_ty = self.ty(1);
                let v = self.fresh(&arg_ty);
                let mut env2 = env.to_vec();
                env2.push(v.clone());
                let body = self.term(ty, &env2, depth - 1);
                let arg = self.term(&arg_ty, env, depth - 1);
                HolTerm::app(HolTerm::lam(v, body), arg)
            }
            1 if ty.is_o() => HolTerm::imp(self.term(&HolType::o(), env, depth - 1), self.term(&HolType::o(), env, depth - 1)),
            2 if ty.is_o() => {
                let vty = self.ty(1);
                let v = self.fresh(&vty);
                let mut env2 = env.to_vec();
                env2.push(v.clone());
                HolTerm::forall(v, self.term(&HolType::o(), &env2, depth - 1))
            }
            _ => self.intro(ty, env, depth),
        }
    }

    fn intro(&mut self, ty: &HolType, env: &[HolVar], depth: usize) -> HolTerm {
        match ty {
            HolType::Arrow(a, b) => {
                let v = self.fresh(a);
                let mut env2 = env.to_vec();
                env2.push(v.clone());
                HolTerm::lam(v, self.term(b, &env2, depth.saturating_sub(1)))
            }
            HolType::Tuple(ts) => HolTerm::Tup(ts.iter().map(|t| self.term(t, env, depth.saturating_sub(1))).collect()),
            _ => self.base_leaf(ty, env),
        }
    }

    fn base_leaf(&mut self, ty: &HolType, env: &[HolVar]) -> HolTerm {
        match ty {
            t if t.is_o() => HolTerm::bot(),
            t if *t == ty_nu() => HolTerm::atom(&self.g.atom()),
            t if *t == ty_iota() => HolTerm::app(HolTerm::named("g_var"), HolTerm::atom(&self.g.atom())),
            HolType::Arrow(..) | HolType::Tuple(_) => self.intro(ty, env, 0),
            other => HolTerm::Var(HolVar::Plain(other.clone(), 0)),
        }
    }
}

/// Positions of β-redexes, as paths of child indices.
pub fn redexes(t: &HolTerm) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn go(t: &HolTerm, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        match t {
            HolTerm::App(f, a) => {
                if matches!(**f, HolTerm::Lam(..)) {
                    out.push(path.clone());
                }
                path.push(0);
                go(f, path, out);
                path.pop();
                path.push(1);
                go(a, path, out);
                path.pop();
            }
            HolTerm::Lam(_, b) => {
                path.push(0);
                go(b, path, out);
                path.pop();
            }
            HolTerm::Tup(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    path.push(i);
                    go(x, path, out);
                    path.pop();
                }
            }
            _ => {}
        }
    }
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Contracts the redex at `path`.
pub fn contract_at(t: &HolTerm, path: &[usize]) -> HolTerm {
    match (t, path.split_first()) {
        (HolTerm::App(f, a), None) => match &**f {
            HolTerm::Lam(v, body) => nomhol::hol::subst1(body, v, a),
            _ => panic!("not a redex"),
        },
        (HolTerm::App(f, a), Some((0, rest))) => HolTerm::app(contract_at(f, rest), (**a).clone()),
        (HolTerm::App(f, a), Some((1, rest))) => HolTerm::app((**f).clone(), contract_at(a, rest)),
        (HolTerm::Lam(v, b), Some((0, rest))) => HolTerm::lam(v.clone(), contract_at(b, rest)),
        (HolTerm::Tup(xs), Some((i, rest))) => {
            let mut ys = xs.clone();
            ys[*i] = contract_at(&xs[*i], rest);
            HolTerm::Tup(ys)
        }
        _ => panic!("bad path"),
    }
}

/// Reduces to normal form, contracting a random redex at each step.
pub fn random_order_normalize(t: &HolTerm, rng: &mut ChaCha8Rng, fuel: usize) -> Option<HolTerm> {
    let mut cur = t.clone();
    for _ in 0..fuel {
        let rs = redexes(&cur);
        if rs.is_empty() {
            return Some(cur);
        }
        let p = rs.choose(rng).unwrap().clone();
        cur = contract_at(&cur, &p);
    }
    None
}

pub fn is_forall_const(t: &HolTerm) -> bool {
    matches!(t, HolTerm::Const(Const::Forall(_)))
}

// ---------------------------------------------------------------------------
// Terms and propositions side by side.

#[derive(Clone, Debug)]
pub enum Item {
    Term(PnlTerm),
    Prop(PnlProp),
}

impl Item {
    pub fn alpha_eq(&self, other: &Item) -> bool {
        match (self, other) {
            (Item::Term(a), Item::Term(b)) => a.alpha_eq(b),
            (Item::Prop(a), Item::Prop(b)) => a.alpha_eq(b),
            _ => false,
        }
    }

    pub fn oracle_alpha(&self, other: &Item) -> bool {
        match (self, other) {
            (Item::Term(a), Item::Term(b)) => oracle_alpha_term(a, b),
            (Item::Prop(a), Item::Prop(b)) => oracle_alpha_prop(a, b),
            _ => false,
        }
    }

    pub fn infer(&self) -> AtomSet {
        match self {
            Item::Term(t) => capture_infer(t, &AtomSet::new()),
            Item::Prop(p) => capture_infer(p, &AtomSet::new()),
        }
    }

    pub fn captured_by(&self, d: &CaptureContext) -> bool {
        match self {
            Item::Term(t) => capture_check(d, t, &AtomSet::new()),
            Item::Prop(p) => capture_check(d, p, &AtomSet::new()),
        }
    }

    pub fn tr(&self, d: &CaptureContext) -> HolTerm {
        match self {
            Item::Term(t) => t.tr(d),
            Item::Prop(p) => p.tr(d),
        }
    }

    pub fn free_unknowns(&self) -> BTreeSet<Unknown> {
        match self {
            Item::Term(t) => t.free_unknowns(),
            Item::Prop(p) => p.free_unknowns(),
        }
    }

    pub fn free_atoms(&self) -> CofinAtomSet {
        match self {
            Item::Term(t) => t.free_atoms(),
            Item::Prop(p) => p.free_atoms(),
        }
    }

    pub fn perm_act(&self, pi: &Perm) -> Item {
        match self {
            Item::Term(t) => Item::Term(t.perm_act(pi)),
            Item::Prop(p) => Item::Prop(p.perm_act(pi)),
        }
    }

    pub fn subst(&self, theta: &PnlSubst) -> Item {
        match self {
            Item::Term(t) => Item::Term(t.subst(theta)),
            Item::Prop(p) => Item::Prop(p.subst(theta)),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Item::Term(_) => true,
            Item::Prop(p) => p.is_quantifier_free(),
        }
    }

    pub fn square_input(&self) -> SquareInput {
        match self {
            Item::Term(t) => SquareInput::Term(t.clone()),
            Item::Prop(p) => SquareInput::Prop(p.clone()),
        }
    }
}

impl std::fmt::Display for Item {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Item::Term(t) => write!(f, "{t}"),
            Item::Prop(p) => write!(f, "{p}"),
        }
    }
}

impl Gen {
    /// A term or a proposition, alternating on `n`.
    pub fn item(&mut self, n: usize, pool: &[Unknown], depth: usize) -> Item {
        if n % 2 == 0 {
            Item::Term(self.term(pool, depth))
        } else {
            Item::Prop(self.prop(pool, depth))
        }
    }

    pub fn alpha_variant(&mut self, x: &Item) -> Item {
        match x {
            Item::Term(t) => Item::Term(self.alpha_variant_term(t)),
            Item::Prop(p) => Item::Prop(self.alpha_variant_prop(p)),
        }
    }

    pub fn mutate(&mut self, x: &Item) -> Item {
        match x {
            Item::Term(t) => Item::Term(self.mutate_term(t)),
            Item::Prop(p) => Item::Prop(self.mutate_prop(p)),
        }
    }

    /// `atoms` plus some random window atoms, in random order.
    pub fn covering_context(&mut self, atoms: &AtomSet) -> CaptureContext {
        let mut all: Vec<Atom> = atoms.iter().cloned().collect();
        for a in self.window() {
            if !atoms.contains(&a) && self.chance(0.3) {
                all.push(a);
            }
        }
        all.shuffle(&mut self.rng);
        CaptureContext::new(all).expect("distinct")
    }

    /// A random sub-list of `d`, reordered.
    pub fn sub_context(&mut self, d: &CaptureContext) -> CaptureContext {
        let mut atoms: Vec<Atom> = d.atoms().iter().filter(|_| self.rng.gen_bool(0.5)).cloned().collect();
        atoms.shuffle(&mut self.rng);
        CaptureContext::new(atoms).expect("distinct")
    }

    /// A renaming of up to three window atoms, often not injective.
    pub fn renaming(&mut self) -> Renaming {
        let w = self.window();
        let k = self.rng.gen_range(1..=3);
        let map: BTreeMap<Atom, Atom> =
            (0..k).map(|_| (w.choose(&mut self.rng).unwrap().clone(), w.choose(&mut self.rng).unwrap().clone())).collect();
        Renaming::from_map(map).expect("one sort")
    }

    /// A valuation giving each unknown a ground term it permits.
    pub fn valuation(&mut self, sig: &PnlSignature, pool: &[Unknown]) -> Valuation {
        let mut map = BTreeMap::new();
        for x in pool {
            let depth = self.rng.gen_range(0..=2);
            map.insert(x.clone(), self.ground_within(x.pmss(), depth));
        }
        Valuation::new(sig, map).expect("permitted ground terms")
    }

    /// A term `r′` with `r′ : X`: sort ι and free atoms inside `pmss(X)`.
    pub fn term_for(&mut self, x: &Unknown, pool: &[Unknown]) -> PnlTerm {
        for _ in 0..32 {
            let depth = self.rng.gen_range(0..=2);
            let t = self.term(pool, depth);
            if nomhol::foundations::set_subset(&t.free_atoms(), &x.pmss().to_set()) {
                return t;
            }
        }
        self.ground_within(x.pmss(), 1)
    }
}

/// A model from the bundled semantics fixtures.
pub fn corpus_model(name: &str) -> HerbrandModel {
    let text = std::fs::read_to_string(corpus_dir().join("semantics").join(name)).expect("model fixture");
    match nomhol::frontend::parse_document(&text, nomhol::frontend::DocKind::Model).expect("model parses").payload {
        nomhol::frontend::Payload::Model(m) => m,
        _ => unreachable!(),
    }
}

/// The three fixture models; the second is not equivariant.
pub fn corpus_models() -> Vec<(&'static str, HerbrandModel)> {
    ["equality_model.sexp", "distinguished_atom_model.sexp", "shape_model.sexp"].into_iter().map(|n| (n, corpus_model(n))).collect()
}
