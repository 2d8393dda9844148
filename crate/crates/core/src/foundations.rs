//! Atoms, permission sets, co-infinite atom sets, permutations, renamings
//! and freshening pairs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// Interned-by-value identifier used for sort, former and constant names.
pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

/// An atom of a name sort. Negative indices lie in the lower half `A^<`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom {
    pub sort: Name,
    pub index: i64,
}

impl Atom {
    pub fn new(sort: &str, index: i64) -> Atom {
        Atom { sort: name(sort), index }
    }

    pub fn with_sort(sort: &Name, index: i64) -> Atom {
        Atom { sort: sort.clone(), index }
    }

    pub fn is_lower(&self) -> bool {
        self.index < 0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.sort, self.index)
    }
}

pub type AtomSet = BTreeSet<Atom>;

/// `(A^< ∪ plus) \ minus` with `plus ⊆ A^>` and `minus ⊆ A^<`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct PermissionSet {
    plus: AtomSet,
    minus: AtomSet,
}

impl PermissionSet {
    /// The permission set `A^<`.
    pub fn lower() -> PermissionSet {
        PermissionSet::default()
    }

    /// Builds a permission set; atoms on the wrong side of zero are dropped
    /// since they would not change the denotation.
    pub fn new(plus: impl IntoIterator<Item = Atom>, minus: impl IntoIterator<Item = Atom>) -> Self {
        PermissionSet {
            plus: plus.into_iter().filter(|a| !a.is_lower()).collect(),
            minus: minus.into_iter().filter(|a| a.is_lower()).collect(),
        }
    }

    pub fn plus(&self) -> &AtomSet {
        &self.plus
    }

    pub fn minus(&self) -> &AtomSet {
        &self.minus
    }

    pub fn contains(&self, a: &Atom) -> bool {
        (a.is_lower() && !self.minus.contains(a)) || self.plus.contains(a)
    }

    pub fn to_set(&self) -> CofinAtomSet {
        CofinAtomSet::Cofin { minus: self.minus.clone(), plus: self.plus.clone() }
    }
}

impl fmt::Display for PermissionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "perm(+{{{}}} -{{{}}})", join(&self.plus, " "), join(&self.minus, " "))
    }
}

pub(crate) fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

/// A finite set, or `(A^< \ minus) ∪ plus` kept normalized so that `minus`
/// holds only lower atoms and `plus` only non-negative ones.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CofinAtomSet {
    Finite(AtomSet),
    Cofin { minus: AtomSet, plus: AtomSet },
}

impl Default for CofinAtomSet {
    fn default() -> Self {
        CofinAtomSet::empty()
    }
}

impl CofinAtomSet {
    pub fn empty() -> Self {
        CofinAtomSet::Finite(AtomSet::new())
    }

    pub fn singleton(a: Atom) -> Self {
        CofinAtomSet::Finite([a].into_iter().collect())
    }

    pub fn finite(atoms: impl IntoIterator<Item = Atom>) -> Self {
        CofinAtomSet::Finite(atoms.into_iter().collect())
    }

    /// `(A^< \ minus) ∪ plus`, normalizing overlapping entries.
    pub fn cofin(minus: impl IntoIterator<Item = Atom>, plus: impl IntoIterator<Item = Atom>) -> Self {
        let mut m = AtomSet::new();
        let mut p = AtomSet::new();
        let plus: AtomSet = plus.into_iter().collect();
        for a in minus {
            if a.is_lower() && !plus.contains(&a) {
                m.insert(a);
            }
        }
        for a in plus {
            if !a.is_lower() {
                p.insert(a);
            }
        }
        CofinAtomSet::Cofin { minus: m, plus: p }
    }

    pub fn contains(&self, a: &Atom) -> bool {
        match self {
            CofinAtomSet::Finite(s) => s.contains(a),
            CofinAtomSet::Cofin { minus, plus } => (a.is_lower() && !minus.contains(a)) || plus.contains(a),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CofinAtomSet::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&AtomSet> {
        match self {
            CofinAtomSet::Finite(s) => Some(s),
            _ => None,
        }
    }

    /// Every atom mentioned by the representation.
    pub fn boundary(&self) -> AtomSet {
        match self {
            CofinAtomSet::Finite(s) => s.clone(),
            CofinAtomSet::Cofin { minus, plus } => minus.union(plus).cloned().collect(),
        }
    }

    pub fn union(&self, other: &CofinAtomSet) -> CofinAtomSet {
        use CofinAtomSet::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.union(b).cloned().collect()),
            (Finite(f), Cofin { minus, plus }) | (Cofin { minus, plus }, Finite(f)) => CofinAtomSet::cofin(
                minus.iter().filter(|a| !f.contains(*a)).cloned(),
                plus.iter().chain(f.iter()).cloned(),
            ),
            (Cofin { minus: m1, plus: p1 }, Cofin { minus: m2, plus: p2 }) => {
                CofinAtomSet::cofin(m1.intersection(m2).cloned(), p1.union(p2).cloned())
            }
        }
    }

    pub fn intersection(&self, other: &CofinAtomSet) -> CofinAtomSet {
        use CofinAtomSet::*;
        match (self, other) {
            (Finite(f), s) | (s, Finite(f)) => Finite(f.iter().filter(|a| s.contains(a)).cloned().collect()),
            (Cofin { minus: m1, plus: p1 }, Cofin { minus: m2, plus: p2 }) => {
                CofinAtomSet::cofin(m1.union(m2).cloned(), p1.intersection(p2).cloned())
            }
        }
    }

    pub fn difference(&self, remove: &AtomSet) -> CofinAtomSet {
        match self {
            CofinAtomSet::Finite(s) => CofinAtomSet::Finite(s.difference(remove).cloned().collect()),
            CofinAtomSet::Cofin { minus, plus } => CofinAtomSet::cofin(
                minus.iter().chain(remove.iter()).cloned(),
                plus.iter().filter(|a| !remove.contains(*a)).cloned(),
            ),
        }
    }

    pub fn remove(&self, a: &Atom) -> CofinAtomSet {
        self.difference(&[a.clone()].into_iter().collect())
    }
}

impl From<&PermissionSet> for CofinAtomSet {
    fn from(s: &PermissionSet) -> Self {
        s.to_set()
    }
}

impl fmt::Display for CofinAtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CofinAtomSet::Finite(s) => write!(f, "{{{}}}", join(s, " ")),
            CofinAtomSet::Cofin { minus, plus } => write!(f, "cofin(+{{{}}} -{{{}}})", join(plus, " "), join(minus, " ")),
        }
    }
}

/// Decides `s ⊆ t` on the denoted sets.
///
/// With normalized representations, `A^< \ M₁ ⊆ (A^< \ M₂) ∪ P₂` forces
/// `M₂ ⊆ M₁` because `P₂` holds no lower atoms, and `P₁ ⊆ …` forces `P₁ ⊆ P₂`.
pub fn set_subset(s: &CofinAtomSet, t: &CofinAtomSet) -> bool {
    use CofinAtomSet::*;
    match (s, t) {
        (Finite(f), _) => f.iter().all(|a| t.contains(a)),
        (Cofin { .. }, Finite(_)) => false,
        (Cofin { minus: m1, plus: p1 }, Cofin { minus: m2, plus: p2 }) => m2.is_subset(m1) && p1.is_subset(p2),
    }
}

/// Least non-negative index per requested sort outside `avoid`, distinct
/// within the call.
pub fn fresh_atoms(sorts: &[Name], avoid: &CofinAtomSet) -> Vec<Atom> {
    let mut taken = AtomSet::new();
    let mut out = Vec::with_capacity(sorts.len());
    for sort in sorts {
        let mut i = 0;
        loop {
            let a = Atom::with_sort(sort, i);
            if !avoid.contains(&a) && !taken.contains(&a) {
                taken.insert(a.clone());
                out.push(a);
                break;
            }
            i += 1;
        }
    }
    out
}

pub fn fresh_atom(sort: &Name, avoid: &CofinAtomSet) -> Atom {
    fresh_atoms(std::slice::from_ref(sort), avoid).remove(0)
}

/// A finitely non-trivial, sort-preserving bijection on atoms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Perm {
    moves: BTreeMap<Atom, Atom>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("atoms {0} and {1} have different sorts")]
    SortMismatch(Atom, Atom),
    #[error("map is not a bijection on its support")]
    NotBijective,
}

impl Perm {
    pub fn id() -> Perm {
        Perm::default()
    }

    pub fn swap(a: &Atom, b: &Atom) -> Result<Perm, PermError> {
        if a.sort != b.sort {
            return Err(PermError::SortMismatch(a.clone(), b.clone()));
        }
        let mut moves = BTreeMap::new();
        if a != b {
            moves.insert(a.clone(), b.clone());
            moves.insert(b.clone(), a.clone());
        }
        Ok(Perm { moves })
    }

    /// Swapping of two atoms already known to share a sort.
    pub fn swap_same(a: &Atom, b: &Atom) -> Perm {
        Perm::swap(a, b).expect("swap of atoms with different sorts")
    }

    /// Builds a permutation from an explicit finite map, checking it.
    pub fn from_map(map: BTreeMap<Atom, Atom>) -> Result<Perm, PermError> {
        let moves: BTreeMap<Atom, Atom> = map.into_iter().filter(|(a, b)| a != b).collect();
        for (a, b) in &moves {
            if a.sort != b.sort {
                return Err(PermError::SortMismatch(a.clone(), b.clone()));
            }
        }
        let keys: AtomSet = moves.keys().cloned().collect();
        let vals: AtomSet = moves.values().cloned().collect();
        if keys != vals || vals.len() != moves.len() {
            return Err(PermError::NotBijective);
        }
        Ok(Perm { moves })
    }

    /// Product of cycles, leftmost applied last: `(a b)(c d)` is `(a b)∘(c d)`.
    pub fn from_cycles(cycles: &[Vec<Atom>]) -> Result<Perm, PermError> {
        let mut p = Perm::id();
        for cyc in cycles.iter().rev() {
            let mut map = BTreeMap::new();
            for (i, a) in cyc.iter().enumerate() {
                let b = &cyc[(i + 1) % cyc.len()];
                if map.insert(a.clone(), b.clone()).is_some() {
                    return Err(PermError::NotBijective);
                }
            }
            p = p.compose(&Perm::from_map(map)?);
        }
        Ok(p)
    }

    /// Extends a sort-respecting injection on a finite set to a permutation
    /// agreeing with it there.
    pub fn extend_injection(map: &BTreeMap<Atom, Atom>) -> Result<Perm, PermError> {
        let dom: AtomSet = map.keys().cloned().collect();
        let img: AtomSet = map.values().cloned().collect();
        if img.len() != map.len() {
            return Err(PermError::NotBijective);
        }
        let mut full = map.clone();
        let mut free_src: Vec<Atom> = img.difference(&dom).cloned().collect();
        let free_dst: Vec<Atom> = dom.difference(&img).cloned().collect();
        for dst in free_dst {
            let pos = free_src.iter().position(|s| s.sort == dst.sort).ok_or(PermError::NotBijective)?;
            full.insert(free_src.remove(pos), dst);
        }
        Perm::from_map(full)
    }

    pub fn apply(&self, a: &Atom) -> Atom {
        self.moves.get(a).cloned().unwrap_or_else(|| a.clone())
    }

    pub fn is_id(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn nontriv(&self) -> AtomSet {
        self.moves.keys().cloned().collect()
    }

    pub fn moves(&self) -> &BTreeMap<Atom, Atom> {
        &self.moves
    }

    /// `(self ∘ other)(a) = self(other(a))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        let mut moves = BTreeMap::new();
        for a in self.moves.keys().chain(other.moves.keys()) {
            let b = self.apply(&other.apply(a));
            if &b != a {
                moves.insert(a.clone(), b);
            }
        }
        Perm { moves }
    }

    pub fn inverse(&self) -> Perm {
        Perm { moves: self.moves.iter().map(|(a, b)| (b.clone(), a.clone())).collect() }
    }

    pub fn to_renaming(&self) -> Renaming {
        Renaming { moves: self.moves.clone() }
    }

    /// Disjoint-cycle decomposition in canonical order.
    pub fn cycles(&self) -> Vec<Vec<Atom>> {
        let mut seen = AtomSet::new();
        let mut out = Vec::new();
        for start in self.moves.keys() {
            if seen.contains(start) {
                continue;
            }
            let mut cyc = vec![start.clone()];
            seen.insert(start.clone());
            let mut cur = self.apply(start);
            while &cur != start {
                seen.insert(cur.clone());
                cyc.push(cur.clone());
                cur = self.apply(&cur);
            }
            out.push(cyc);
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for cyc in self.cycles() {
            write!(f, "({})", join(&cyc, " "))?;
        }
        write!(f, ")")
    }
}

/// Image of a set under a permutation, pointwise.
pub fn perm_image_set(pi: &Perm, s: &CofinAtomSet) -> CofinAtomSet {
    match s {
        CofinAtomSet::Finite(f) => CofinAtomSet::Finite(f.iter().map(|a| pi.apply(a)).collect()),
        CofinAtomSet::Cofin { minus, plus } => {
            let moved = pi.nontriv();
            let inv = pi.inverse();
            let mut m: AtomSet = minus.difference(&moved).cloned().collect();
            let mut p: AtomSet = plus.difference(&moved).cloned().collect();
            for x in &moved {
                let here = s.contains(&inv.apply(x));
                if x.is_lower() && !here {
                    m.insert(x.clone());
                } else if !x.is_lower() && here {
                    p.insert(x.clone());
                }
            }
            CofinAtomSet::Cofin { minus: m, plus: p }
        }
    }
}

/// A finitely non-trivial, sort-preserving map on atoms; not necessarily
/// injective.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Renaming {
    moves: BTreeMap<Atom, Atom>,
}

impl Renaming {
    pub fn id() -> Renaming {
        Renaming::default()
    }

    /// The atomic renaming `[a:=b]`.
    pub fn atomic(a: &Atom, b: &Atom) -> Result<Renaming, PermError> {
        Renaming::from_map([(a.clone(), b.clone())].into_iter().collect())
    }

    pub fn from_map(map: BTreeMap<Atom, Atom>) -> Result<Renaming, PermError> {
        let mut moves = BTreeMap::new();
        for (a, b) in map {
            if a.sort != b.sort {
                return Err(PermError::SortMismatch(a, b));
            }
            if a != b {
                moves.insert(a, b);
            }
        }
        Ok(Renaming { moves })
    }

    pub fn apply(&self, a: &Atom) -> Atom {
        self.moves.get(a).cloned().unwrap_or_else(|| a.clone())
    }

    pub fn is_id(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn moves(&self) -> &BTreeMap<Atom, Atom> {
        &self.moves
    }

    pub fn dom(&self) -> AtomSet {
        self.moves.keys().cloned().collect()
    }

    pub fn img(&self) -> AtomSet {
        self.moves.values().cloned().collect()
    }

    pub fn nontriv(&self) -> AtomSet {
        self.dom().union(&self.img()).cloned().collect()
    }

    /// `(self ∘ other)(a) = self(other(a))`.
    pub fn compose(&self, other: &Renaming) -> Renaming {
        let mut moves = BTreeMap::new();
        for a in self.moves.keys().chain(other.moves.keys()) {
            let b = self.apply(&other.apply(a));
            if &b != a {
                moves.insert(a.clone(), b);
            }
        }
        Renaming { moves }
    }

    /// Keeps only the moves of atoms in `keep`.
    pub fn restrict(&self, keep: &AtomSet) -> Renaming {
        Renaming { moves: self.moves.iter().filter(|(a, _)| keep.contains(*a)).map(|(a, b)| (a.clone(), b.clone())).collect() }
    }

    pub fn is_injective_on(&self, s: &AtomSet) -> bool {
        let img: AtomSet = s.iter().map(|a| self.apply(a)).collect();
        img.len() == s.len()
    }

    /// Returns the permutation when this renaming is a bijection on its
    /// non-trivial atoms.
    pub fn as_perm(&self) -> Option<Perm> {
        Perm::from_map(self.moves.clone()).ok()
    }
}

impl fmt::Display for Renaming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.moves.iter().map(|(a, b)| format!("{a}:={b}")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A freshening pair for `a` avoiding `s ∪ a ∪ avoid`; targets come from
/// [`fresh_atoms`], in ascending order of `a`.
pub fn freshening_pair(a: &AtomSet, s: &PermissionSet, avoid: &AtomSet) -> (Renaming, Renaming) {
    let blocked = s.to_set().union(&CofinAtomSet::Finite(a.union(avoid).cloned().collect()));
    freshening_pair_avoiding(a, &blocked)
}

/// A freshening pair for `a` whose targets avoid `blocked ∪ a`.
pub fn freshening_pair_avoiding(a: &AtomSet, blocked: &CofinAtomSet) -> (Renaming, Renaming) {
    let blocked = blocked.union(&CofinAtomSet::Finite(a.clone()));
    let sorts: Vec<Name> = a.iter().map(|x| x.sort.clone()).collect();
    let targets = fresh_atoms(&sorts, &blocked);
    let mut r1 = BTreeMap::new();
    let mut r2 = BTreeMap::new();
    for (x, t) in a.iter().zip(targets) {
        r1.insert(x.clone(), t.clone());
        r2.insert(t, x.clone());
    }
    (Renaming { moves: r1 }, Renaming { moves: r2 })
}
