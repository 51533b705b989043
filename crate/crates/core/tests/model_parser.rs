mod common;

use proptest::prelude::*;
use svgforge::classify::count_commands;
use svgforge::model::{ModelError, PathCommand, Point, RawCommand, ViewBox};
use svgforge::parser::ElementKind;
use svgforge::pipeline::normalize_text;
use svgforge::{document_equal, parse_document, Document, Paint, PathElement, Rgb};

#[test]
fn constructors_reject_invalid_values() {
    let p = Point::new(1.0, 2.0);
    assert!(matches!(
        PathElement::new(vec![PathCommand::LineTo(p)], Paint::Hex(Rgb::BLACK)),
        Err(ModelError::MissingInitialMoveTo)
    ));
    assert!(matches!(
        PathElement::new(vec![PathCommand::MoveTo(p), PathCommand::MoveTo(p)], Paint::Hex(Rgb::BLACK)),
        Err(ModelError::ConsecutiveMoveTo(1))
    ));
    assert!(matches!(
        PathElement::new(vec![PathCommand::MoveTo(Point::new(f64::NAN, 0.0))], Paint::Hex(Rgb::BLACK)),
        Err(ModelError::NonFiniteCoordinate)
    ));
    assert!(matches!(ViewBox::new(0.0, 0.0, 0.0, 10.0), Err(ModelError::InvalidViewBox { .. })));
    assert!(matches!(ViewBox::new(0.0, 0.0, f64::INFINITY, 10.0), Err(ModelError::InvalidViewBox { .. })));
    assert!(matches!(RawCommand::from_letter('C', &[1.0, 2.0]), Err(ModelError::ArgumentCount { .. })));
    assert!(matches!(
        RawCommand::from_letter('A', &[1.0, 1.0, 0.0, 2.0, 0.0, 5.0, 5.0]),
        Err(ModelError::ArcFlag(_))
    ));
    let gradient = PathElement::new(vec![PathCommand::MoveTo(p)], Paint::Reference("g".into())).unwrap();
    assert!(matches!(Document::new_normalized(vec![gradient]), Err(ModelError::NormalizedFill)));
    let off_canvas = Document::new(ViewBox::new(0.0, 0.0, 24.0, 24.0).unwrap(), Vec::new());
    assert!(matches!(off_canvas.into_normalized(), Err(ModelError::NormalizedViewBox)));
}

fn doc_from_seed(seed: u64) -> Document {
    normalize_text(&common::random_svg(&mut common::rng(seed))).unwrap().document
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn document_equal_is_an_equivalence(a in any::<u64>(), b in any::<u64>()) {
        let x = doc_from_seed(a);
        let y = doc_from_seed(b);
        let x2 = normalize_text(&svgforge::serialize_document(&x).unwrap()).unwrap().document;
        prop_assert!(document_equal(&x, &x));
        prop_assert_eq!(document_equal(&x, &y), document_equal(&y, &x));
        // x ~ x2 and x2 ~ x, so any y equal to one is equal to the other.
        prop_assert!(document_equal(&x, &x2) && document_equal(&x2, &x));
        prop_assert_eq!(document_equal(&x2, &y), document_equal(&x, &y));
    }

    #[test]
    fn parse_document_is_total(s in "\\PC{0,200}") {
        let _ = parse_document(&s);
    }

    #[test]
    fn parse_document_is_total_on_svgish_noise(
        body in "[<>/=\" a-z0-9#.,-]{0,200}",
    ) {
        let _ = parse_document(&format!("<svg viewBox=\"0 0 10 10\">{body}</svg>"));
    }
}

#[test]
fn elements_come_out_in_document_order() {
    let text = r#"<svg viewBox="0 0 10 10">
        <rect width="1" height="1"/><g><path d="M0 0h1v1z"/><circle r="1"/></g>
        <polygon points="0,0 1,0 1,1"/><ellipse rx="1" ry="2"/><line x2="3" y2="3"/>
        <polyline points="0,0 2,2"/></svg>"#;
    let (raw, _) = parse_document(text).unwrap();
    let names: Vec<&str> = raw
        .elements
        .iter()
        .map(|e| match &e.kind {
            ElementKind::Path { .. } => "path",
            ElementKind::Shape(s) => s.element_name(),
        })
        .collect();
    assert_eq!(names, ["rect", "path", "circle", "polygon", "ellipse", "line", "polyline"]);
    assert!(raw.elements.windows(2).all(|w| w[0].offset < w[1].offset));
}

#[test]
fn command_counts_match_a_token_count_of_the_text() {
    for (id, text) in common::corpus() {
        let n = normalize_text(&text).unwrap();
        let tokens: usize = n
            .svg
            .split(" d=\"")
            .skip(1)
            .map(|rest| rest[..rest.find('"').unwrap()].matches(['M', 'L', 'C']).count())
            .sum();
        assert_eq!(count_commands(&n.document), tokens, "{id}");
    }
}

#[test]
fn malformed_inputs_are_typed_errors() {
    let cases = [
        ("<svg><path d=\"M0 0L", "MalformedXml"),
        ("<svg viewBox=\"0 0 10 10\"><path d=\"M0 0L1\"/></svg>", "PathSyntax"),
        ("<svg viewBox=\"0 0 10 10\"></svg>", "EmptyDocument"),
    ];
    for (text, kind) in cases {
        let err = normalize_text(text).unwrap_err();
        assert_eq!(err.kind(), kind, "{text}");
    }
}
