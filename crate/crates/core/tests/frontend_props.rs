mod common;

use std::process::Command;

use proptest::prelude::*;

use common::*;
use nomhol::frontend::{parse_document, parse_hol_term, parse_prop, parse_term, read_sexps, render_derivation, DocKind, Payload, Scope};
use nomhol::hol::alpha_eq_hol;
use nomhol::pnl::Syntax;

fn one(text: &str) -> nomhol::frontend::Sexp {
    let mut forms = read_sexps(text).unwrap();
    assert_eq!(forms.len(), 1, "{text}");
    forms.remove(0)
}

proptest! {
    #[test]
    fn ground_terms_round_trip(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let t = g.ground_term(3);
        let back = parse_term(&Scope::default(), &one(&t.to_string())).unwrap();
        prop_assert!(back.alpha_eq(&t));
        prop_assert_eq!(back.to_string(), t.to_string());
    }

    #[test]
    fn ground_props_round_trip(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let p = g.quantifier_free_prop(&[], 3);
        let back = parse_prop(&Scope::default(), &one(&p.to_string())).unwrap();
        prop_assert!(back.alpha_eq(&p));
    }

    #[test]
    fn closed_hol_terms_round_trip(seed in any::<u64>()) {
        let mut hg = HolGen::new(seed);
        let ty = hg.ty(2);
        let t = hg.term(&ty, &[], 3);
        let back = parse_hol_term(&Scope::default(), &one(&t.to_string())).unwrap();
        prop_assert!(alpha_eq_hol(&back, &t), "{} / {}", t, back);
    }

    #[test]
    fn the_reader_never_panics(text in "[()a-z@0-9 ;\\-\\[\\]{}+,]{0,40}") {
        let _ = read_sexps(&text);
        let _ = parse_document(&text, DocKind::Term);
    }
}

#[test]
fn derivations_render_deterministically() {
    for path in corpus_files("restricted") {
        let text = std::fs::read_to_string(&path).unwrap();
        let a = parse_document(&text, DocKind::PnlDerivation).unwrap();
        let b = parse_document(&text, DocKind::PnlDerivation).unwrap();
        let (Payload::PnlDerivation(a), Payload::PnlDerivation(b)) = (a.payload, b.payload) else { unreachable!() };
        assert_eq!(a, b);
        assert_eq!(render_derivation(&a, false), render_derivation(&b, false));
    }
}

#[test]
fn parse_errors_carry_locations() {
    let err = read_sexps("(abs nu@0\n  (var nu@0)").unwrap_err();
    assert!(err.to_string().contains(':'), "{err}");
    let err = parse_document("(term (frob nu@0))", DocKind::Term).unwrap_err();
    assert!(err.to_string().contains("frob"), "{err}");
}

fn nomhol(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_nomhol")).args(args).output().unwrap()
}

fn corpus(rel: &str) -> String {
    corpus_dir().join(rel).to_string_lossy().into_owned()
}

#[test]
fn cli_rejections_explain_themselves() {
    let out = nomhol(&["--json", "check", "--logic", "pnl-restricted", &corpus("full_only/swap_needs_equivariance.sexp")]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["accepted"], false);
    assert_eq!(v["rule"], "ax");
    assert!(v["reason"].as_str().is_some_and(|r| !r.is_empty()));
    let human = nomhol(&["check", "--logic", "pnl-restricted", &corpus("full_only/swap_needs_equivariance.sexp")]);
    assert!(!human.stderr.is_empty());
}

#[test]
fn cli_translates_and_normalizes() {
    let out = nomhol(&["--json", "translate", "--context", "[nu@0, nu@1]", &corpus("syntax/equal_b_permitted.sexp")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["captured"], true);
    assert_eq!(v["type"], "o");
    let out = nomhol(&["normalize", &corpus("syntax/beta_redex.sexp")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("lam"), "{text}");
}

#[test]
fn cli_usage_errors_exit_two() {
    assert_eq!(nomhol(&[]).status.code(), Some(2));
    assert_eq!(nomhol(&["alpha", &corpus("syntax/alpha_pair_left.sexp")]).status.code(), Some(2));
    assert_eq!(nomhol(&["--help"]).status.code(), Some(0));
}
