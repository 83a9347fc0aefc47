//! Buchberger reproduces every transcribed (F, G) row exactly.

mod common;

use common::fixtures::{load_all, Fixture};
use gbgen::{
    groebner_basis, ideal_equal, is_reduced_groebner, parse_poly, with_field, Field, FieldSpec, Polynomial, Ring,
    TermOrder,
};

fn parse_set<C: Field>(ring: Ring, src: &[String]) -> Vec<Polynomial<C>> {
    src.iter()
        .map(|s| parse_poly(ring, s).unwrap_or_else(|e| panic!("{s}: {e}")))
        .collect()
}

fn check<C: Field>(fx: &Fixture) -> Result<(), String> {
    let ring = Ring::new(fx.n, TermOrder::Lex);
    let f = parse_set::<C>(ring, &fx.f);
    let g = parse_set::<C>(ring, &fx.g);
    if !is_reduced_groebner(&g) {
        return Err("G is not a reduced basis".into());
    }
    let got = groebner_basis(&f).map_err(|e| e.to_string())?.basis;
    if got != g {
        let show: Vec<String> = got.iter().map(|p| p.to_string()).collect();
        return Err(format!("got {show:?}"));
    }
    match ideal_equal(&f, &g) {
        Ok(true) => Ok(()),
        other => Err(format!("ideal_equal: {other:?}")),
    }
}

fn field_of(fx: &Fixture) -> FieldSpec {
    match fx.field.as_str() {
        "qq" => FieldSpec::rationals(),
        "f7" => FieldSpec::prime(7).unwrap(),
        "f31" => FieldSpec::prime(31).unwrap(),
        other => panic!("unknown field {other}"),
    }
}

#[test]
fn every_row_reproduces() {
    let all = load_all();
    assert!(all.len() >= 60, "only {} rows loaded", all.len());
    let mut failures = Vec::new();
    for fx in &all {
        assert!(!fx.f.is_empty() && fx.g.len() == fx.n, "{} ID {}: malformed row", fx.file, fx.id);
        let spec = field_of(fx);
        let res = with_field!(spec, C => check::<C>(fx));
        if let Err(e) = res {
            failures.push(format!("{} ID {}: {e}", fx.file, fx.id));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn named_rows_are_present() {
    let all = load_all();
    for (file, id) in [
        ("n2_f7", 0),
        ("n2_f7", 5),
        ("n2_f7", 13),
        ("n2_f7", 14),
        ("n2_qq", 0),
        ("n2_qq", 5),
        ("n3_f7", 0),
        ("n3_f7", 5),
    ] {
        assert!(all.iter().any(|f| f.file == file && f.id == id), "{file} ID {id}");
    }
}

#[test]
fn zero_members_are_tolerated() {
    let row = load_all()
        .into_iter()
        .find(|f| f.f.iter().any(|p| p == "0"))
        .expect("a row with a zero member");
    let spec = field_of(&row);
    with_field!(spec, C => check::<C>(&row)).unwrap();
}
