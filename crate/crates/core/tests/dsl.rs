use sullivan::dsl::{json, parse, AlgebraDocument, DslError};
use sullivan::fixtures::FIXTURES;
use sullivan::{Error, Q};

#[test]
fn fixtures_round_trip_through_text() {
    for f in FIXTURES {
        let doc = f.load().unwrap();
        let printed = doc.to_string();
        let again: AlgebraDocument<Q> = parse(&printed).unwrap();
        assert_eq!(again, doc, "{}", f.name);
        assert_eq!(again.to_string(), printed, "{}", f.name);
    }
}

#[test]
fn fixtures_round_trip_through_json() {
    for f in FIXTURES {
        let doc = f.load().unwrap();
        let text = json::render(&json::to_json(&doc));
        let back = AlgebraDocument::load_json(&text).unwrap();
        assert_eq!(back, doc, "{}", f.name);
        assert_eq!(json::render(&json::to_json(&back)), text, "{}", f.name);
    }
}

#[test]
fn permuting_twice_restores_the_document() {
    let doc = sullivan::fixtures::fixture("example31")
        .unwrap()
        .load()
        .unwrap();
    let n = doc.section.generators.len();
    let order: Vec<usize> = (0..n).rev().collect();
    let back = doc.permuted(&order, &[]).permuted(&order, &[]);
    assert_eq!(back, doc);
}

#[test]
fn odd_square_warns() {
    let doc = parse::<Q>("generator x : degree 3\ngenerator y : degree 7\nd y = x^2").unwrap();
    assert_eq!(doc.warnings.len(), 1);
    assert!(doc.warnings[0].starts_with("3:"), "{}", doc.warnings[0]);
    assert!(doc.section.differential.is_empty());
}

#[test]
fn wrong_degree_reports_the_line() {
    let e = parse::<Q>("generator a : degree 2\ngenerator x : degree 4\nd x = a^2").unwrap_err();
    assert!(
        matches!(
            e,
            DslError::DegreeMismatch {
                line: 3,
                expected: 5,
                ..
            }
        ),
        "{e}"
    );
}

#[test]
fn unknown_generator_in_theta() {
    let text = "base\ngenerator v : degree 3\nfiber\ngenerator a : degree 2\nvia v\ntheta a = q";
    let e = parse::<Q>(text).unwrap_err();
    assert!(
        matches!(e, DslError::UnknownGenerator { ref name, .. } if name == "q"),
        "{e}"
    );
}

#[test]
fn load_maps_dsl_errors() {
    let e = AlgebraDocument::<Q>::load("generator a : degree two").unwrap_err();
    assert!(matches!(e, Error::Dsl(_)), "{e}");
}

#[test]
fn json_rejects_unknown_fields() {
    let e = json::from_json::<Q>(r#"{"name": "x", "generators": [], "extra": 1}"#).unwrap_err();
    assert!(matches!(e, DslError::Schema { .. }), "{e}");
}
