use std::path::PathBuf;

use sixforms::invariants::coords::coords_to_form;
use sixforms::io::{algebra_from_json, coords_from_json, form_from_json, read_json};
use sixforms::liealg::solv_lambda;
use sixforms::{GlOrbit, LieAlgebra6, Rational, Scalar, SpLabel, SymplecticForm};

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

#[test]
fn algebra_files_match_builders() {
    let nil = algebra_from_json(&read_json(&data("algebras/nil.json")).unwrap()).unwrap();
    assert!(nil.exact);
    assert_eq!(nil.value.de, LieAlgebra6::<Rational>::nil().differentials());
    let abelian = algebra_from_json(&read_json(&data("algebras/abelian.json")).unwrap()).unwrap();
    assert_eq!(abelian.value.de, LieAlgebra6::<Rational>::abelian().differentials());
    // λ is irrational, so the file carries the double nearest to it.
    let solv = algebra_from_json(&read_json(&data("algebras/solv.json")).unwrap()).unwrap();
    assert!(!solv.exact);
    let parsed: Vec<_> = solv.value.de.iter().map(|f| f.to_f64()).collect();
    assert_eq!(parsed, LieAlgebra6::<f64>::solv(solv_lambda()).differentials());
}

#[test]
fn normal_form_files_match_tables() {
    for orbit in GlOrbit::ALL {
        let f = form_from_json(
            &read_json(&data(&format!("forms/gl/{}.json", orbit.label()))).unwrap(),
            3,
        )
        .unwrap();
        assert_eq!(f.value, orbit.normal_form::<Rational>(), "{orbit}");
    }
    for label in SpLabel::ALL {
        let f = form_from_json(
            &read_json(&data(&format!("forms/sp/{}.json", label.label()))).unwrap(),
            3,
        )
        .unwrap();
        assert_eq!(f.value, label.normal_form(&Rational::int(1)), "{label}");
    }
    let w = form_from_json(&read_json(&data("forms/omega-standard.json")).unwrap(), 2).unwrap();
    assert_eq!(&w.value, SymplecticForm::<Rational>::standard().omega());
}

#[test]
fn coordinate_files_are_primitive() {
    let w = SymplecticForm::<Rational>::standard();
    for name in [
        "nil-linear",
        "nil-generic",
        "solv-positive",
        "solv-not-positive",
        "abelian",
    ] {
        let c = coords_from_json(&read_json(&data(&format!("coords/{name}.json"))).unwrap()).unwrap();
        assert!(c.exact, "{name}");
        assert!(
            w.lefschetz_residual(&coords_to_form(&c.value)).unwrap().is_zero(),
            "{name}"
        );
    }
}
