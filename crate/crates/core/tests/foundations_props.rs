mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::Rng;

use common::*;
use nomhol::foundations::{
    fresh_atoms, freshening_pair_avoiding, name, perm_image_set, set_subset, Atom, AtomSet, CofinAtomSet, Perm, Renaming,
};

/// Membership over a window wide enough to see every boundary atom of the
/// generated sets.
fn members(s: &CofinAtomSet) -> Vec<bool> {
    (-12..=12).map(|i| s.contains(&nu(i))).collect()
}

fn cofin(g: &mut Gen) -> CofinAtomSet {
    let pick = |g: &mut Gen| -> Vec<Atom> { g.window().into_iter().filter(|_| g.chance(0.4)).collect() };
    let (a, b) = (pick(g), pick(g));
    match g.rng.gen_range(0..3) {
        0 => CofinAtomSet::finite(a),
        1 => CofinAtomSet::cofin(a, b),
        _ => g.pmss().to_set(),
    }
}

proptest! {
    #[test]
    fn permutations_form_a_group(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (p, q, r) = (g.perm(), g.perm(), g.perm());
        prop_assert_eq!(p.compose(&q).compose(&r), p.compose(&q.compose(&r)));
        prop_assert!(p.compose(&p.inverse()).is_id());
        prop_assert!(p.inverse().compose(&p).is_id());
        prop_assert_eq!(p.compose(&Perm::id()), p.clone());
        for a in g.window() {
            prop_assert_eq!(p.compose(&q).apply(&a), p.apply(&q.apply(&a)));
        }
    }

    #[test]
    fn cycles_rebuild_the_permutation(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let p = g.perm();
        prop_assert_eq!(Perm::from_cycles(&p.cycles()).unwrap(), p);
    }

    #[test]
    fn renamings_compose_as_functions(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (r, s) = (g.renaming(), g.renaming());
        for a in (-8..=8).map(nu) {
            prop_assert_eq!(r.compose(&s).apply(&a), r.apply(&s.apply(&a)));
        }
        let keep: AtomSet = g.window().into_iter().filter(|_| g.chance(0.5)).collect();
        for a in g.window() {
            let want = if keep.contains(&a) { r.apply(&a) } else { a.clone() };
            prop_assert_eq!(r.restrict(&keep).apply(&a), want);
        }
    }

    #[test]
    fn permutation_images_of_sets(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (p, s) = (g.perm(), cofin(&mut g));
        let image = perm_image_set(&p, &s);
        for i in -12..=12 {
            prop_assert_eq!(image.contains(&p.apply(&nu(i))), s.contains(&nu(i)));
        }
        prop_assert_eq!(members(&perm_image_set(&p.inverse(), &image)), members(&s));
    }

    #[test]
    fn subset_matches_membership(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (s, t) = (cofin(&mut g), cofin(&mut g));
        let pointwise = members(&s).iter().zip(members(&t)).all(|(a, b)| !a || b);
        prop_assert_eq!(set_subset(&s, &t), pointwise);
        prop_assert_eq!(members(&s.union(&t)), members(&s).iter().zip(members(&t)).map(|(a, b)| *a || b).collect::<Vec<_>>());
        prop_assert_eq!(members(&s.intersection(&t)), members(&s).iter().zip(members(&t)).map(|(a, b)| *a && b).collect::<Vec<_>>());
    }

    #[test]
    fn freshening_pairs_move_out_and_back(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let a: AtomSet = g.window().into_iter().filter(|_| g.chance(0.5)).collect();
        let blocked = cofin(&mut g);
        let blocked = if blocked.is_finite() { blocked } else { CofinAtomSet::finite(g.window()) };
        let (r1, r2) = freshening_pair_avoiding(&a, &blocked);
        prop_assert_eq!(r1.dom(), a.clone());
        prop_assert_eq!(r2.dom(), r1.img());
        for x in &a {
            prop_assert_eq!(&r2.apply(&r1.apply(x)), x);
        }
        for x in r2.dom() {
            prop_assert!(!blocked.contains(&x) && !a.contains(&x));
        }
    }

    #[test]
    fn fresh_atoms_avoid_and_are_distinct(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let avoid = cofin(&mut g);
        let fresh = fresh_atoms(&[name("nu"), name("nu"), name("nu")], &avoid);
        prop_assert_eq!(fresh.iter().cloned().collect::<AtomSet>().len(), 3);
        prop_assert!(fresh.iter().all(|a| !avoid.contains(a)));
    }
}

#[test]
fn injective_extension_is_a_permutation() {
    let mut g = Gen::new(7);
    for _ in 0..300 {
        let src: Vec<Atom> = g.window().into_iter().filter(|_| g.chance(0.5)).collect();
        let mut dst: Vec<Atom> = (-9..=9).map(nu).collect();
        rand::seq::SliceRandom::shuffle(dst.as_mut_slice(), &mut g.rng);
        let map: BTreeMap<Atom, Atom> = src.iter().cloned().zip(dst).collect();
        let p = Perm::extend_injection(&map).unwrap();
        for (a, b) in &map {
            assert_eq!(&p.apply(a), b);
        }
        assert!(p.compose(&p.inverse()).is_id());
    }
}

#[test]
fn renamings_that_merge_are_not_permutations() {
    let r = Renaming::atomic(&nu(0), &nu(1)).unwrap();
    assert!(r.as_perm().is_none());
    assert!(!r.is_injective_on(&[nu(0), nu(1)].into_iter().collect()));
    assert!(r.is_injective_on(&[nu(0), nu(2)].into_iter().collect()));
    assert_eq!(Perm::swap_same(&nu(0), &nu(1)).to_renaming().as_perm(), Some(Perm::swap_same(&nu(0), &nu(1))));
}
